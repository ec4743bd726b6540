#include <doctest.h>

#include <fstream>
#include <sstream>

#include "dha/cli.hpp"
#include "dha/json_io.hpp"

using namespace dha;

namespace {

struct Run {
    int code;
    std::string out, err;
    Json json() const { return Json::parse(out); }
};

Run run(std::vector<std::string> args, const std::string& input = "") {
    std::istringstream in(input);
    std::ostringstream out, err;
    const int code = cli::run(args, in, out, err);
    return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(DHA_TEST_DATA) + "/" + name; }

}  // namespace

TEST_CASE("cli exit codes") {
    CHECK(run({}).code == cli::kExitParse);
    CHECK(run({"nope"}).code == cli::kExitParse);
    CHECK(run({"ab"}, "{not json").code == cli::kExitParse);
    CHECK(run({"ab"}, R"({"cell_scale": 0})").code == cli::kExitParse);
    CHECK(run({"bmo-norm", "--family", "rectangles", "-i", data("b.json")}).code == cli::kExitParse);
    CHECK(run({"bmo-norm", "--format", "xml", "-i", data("b.json")}).code == cli::kExitParse);
    CHECK(run({"tau", "--epsilon", "2", "-i", data("b.json")}).code == cli::kExitFailed);
    CHECK(run({"--help"}).code == cli::kExitOk);
}

TEST_CASE("cli decompose reports infeasibility") {
    const Run r = run({"decompose", "--flavor", "two-sided", "-i", data("b.json")});
    CHECK(r.code == cli::kExitFailed);
    const Json j = r.json();
    CHECK(j["error"] == "infeasible");
    CHECK(j["obstruction"].get<double>() == -0.5);

    const Run g = run({"decompose", "--flavor", "general", "-i", data("b.json")});
    CHECK(g.code == cli::kExitOk);
    CHECK(g.json()["cost"].get<double>() == 1.0);
}

TEST_CASE("cli norm commands") {
    const Json lam = run({"lambda", "-i", data("chi-halfline.json")}).json();
    CHECK(lam["value"].get<double>() == 0.5);
    const Json all = run({"bmo-norm", "-i", data("chi-halfline.json")}).json();
    CHECK(all["value"].get<double>() == 0.5);
    CHECK(all["witness"]["lo"].get<double>() == -1.0);
    CHECK(all["family"] == "all");
    const Json dy = run({"bmo-norm", "--family", "dyadic", "-i", data("chi-halfline.json")}).json();
    CHECK(dy["family"] == "dyadic");
    CHECK(dy["witness"]["lo"].get<double>() == 0.0);
    CHECK(run({"ab", "-i", data("chi-halfline.json")}).json()["value"].get<double>() == 0.5);
    CHECK(run({"a0", "-i", data("chi-halfline.json")}).json()["value"].get<double>() == 0.5);

    const Run csv = run({"bmo-norm", "--format", "csv", "-i", data("chi-halfline.json")});
    CHECK(csv.out == "lo,hi,value,family\n-1.0,1.0,0.5,all\n");
}

TEST_CASE("cli atoms commands") {
    const Json s = run({"split-atom", "-i", data("b-atom.json")}).json();
    CHECK(s["n"] == 2);
    CHECK(s["c3"].get<double>() == 1.0);
    CHECK(s["aL"]["defining"]["lo"].get<double>() == -4.0);

    const Json h = run({"haar-expand", "-i", data("b.json")}).json();
    CHECK(h["residual_l1"].get<double>() == 1.0);

    const Json d = run({"distance-ha", "-i", data("b.json")}).json();
    CHECK(d["obstruction"].get<double>() == 0.5);

    const Json c = run({"counterexample", "--n", "8"}).json();
    CHECK(c["N"] == 8);
    CHECK(c["decomposition_error"].get<double>() == 0.0);
    CHECK(c.contains("function"));
}

TEST_CASE("cli operator commands") {
    const Json t = run({"tau", "--epsilon", "0.5", "--refine", "2", "-i", data("b.json")}).json();
    CHECK(t["refine"] == 2);
    for (const auto& v : t["values"]) CHECK(v.get<double>() == 0.0);

    const Json m = run({"maximal", "--epsilon", "0.5", "--window", "3", "--truncate", "1", "-i", data("b.json")}).json();
    CHECK(m["tail_bound"].get<double>() == 0.0);
    CHECK(m["values"]["cell_scale"] == -1);

    const Json o = run({"opnorm", "--operator", "maximal", "--epsilon", "0.5"}).json();
    CHECK(o["parts"].size() == 4);
    CHECK(run({"opnorm", "--operator", "other"}).code == cli::kExitParse);

    const Json e = run({"extend", "--parity", "even", "-i", data("chi-halfline.json")}).json();
    CHECK(e["parity"] == "even");
    CHECK(e.contains("ratio_flag"));
    CHECK_FALSE(e.contains("odd_norm"));
}

TEST_CASE("cli t1 and 2D commands") {
    const Json t = run({"t1-check", "--kernel", "blockdiag", "--window", "2", "--scale", "-2"}).json();
    CHECK(t["c_2s"].get<double>() <= 2.0 * t["wbp"].get<double>());
    for (const auto& b : t["bracket_identity"]) CHECK(b["support_preserving"].get<bool>());
    const Json f = run({"t1-check", "--kernel", "file:" + data("kernel-expr.json"), "--window", "2", "--scale", "-2"}).json();
    CHECK(f["c_2s"] == t["c_2s"]);
    CHECK(run({"t1-check", "--kernel", "unknown"}).code == cli::kExitParse);

    const Run p = run({"haar2d-psi", "--j", "3", "--n", "0", "--scale", "-1"});
    CHECK(p.code == cli::kExitOk);
    const StepFunction2D psi3 = step_function_2d_from_json(p.json());
    CHECK(psi3(0.25, 0.25) == 1.0);
    CHECK(psi3(0.75, 0.25) == -1.0);

    const Json q = run({"quadrants", "-i", data("b2-2d.json")}).json();
    CHECK(q["q1"].get<double>() == -0.5);
    CHECK(q["q4"].get<double>() == 0.5);
    CHECK(q["vanishes"] == false);

    const Json r = run({"bmo2d-pairing", "--window", "2", "-i", data("b2-2d.json")}).json();
    CHECK(r["lambda"].get<double>() >= r["value"].get<double>());
}

TEST_CASE("cli output file and suite determinism") {
    const std::string path = "cli_test_output.json";
    CHECK(run({"ab", "-i", data("b.json"), "-o", path}).out.empty());
    std::ifstream f(path);
    const Json j = Json::parse(f);
    CHECK(j["value"].get<double>() == 0.5);

    const Run a = run({"suite", "--seed", "3", "--only", "1", "3", "10"});
    const Run b = run({"suite", "--seed", "3", "--only", "1", "3", "10"});
    CHECK(a.code == cli::kExitOk);
    CHECK(a.out == b.out);
    CHECK(a.json()["criteria"].size() == 3);
}
