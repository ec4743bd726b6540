#include "dha/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "dha/counterexample.hpp"
#include "dha/json_io.hpp"
#include "dha/random.hpp"
#include "dha/suite.hpp"

namespace dha::cli {

namespace {

struct Options {
    std::string input = "-";
    std::string output;
    std::uint64_t seed = 7;
    std::optional<int> window;
    std::optional<int> scale;
    std::string family = "all";
    double epsilon = 0.5;
    std::optional<double> p;
    std::string flavor = "general";
    std::string format = "json";
    int refine = 4;
    std::optional<int> truncate;
    std::string parity = "both";
    std::string op = "tau";
    std::string kernel = "gauss";
    int j = 1;
    int n = 0;
    std::int64_t k = 0;
    std::int64_t l = 0;
    std::vector<int> only;
};

struct Result {
    Json report;
    int code = kExitOk;
};

Json read_json(const Options& o, std::istream& in) {
    std::stringstream buf;
    if (o.input == "-") {
        buf << in.rdbuf();
    } else {
        std::ifstream f(o.input);
        if (!f) throw ParseError("cannot open input '" + o.input + "'");
        buf << f.rdbuf();
    }
    try {
        return Json::parse(buf.str());
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
}

StepFunction read_step(const Options& o, std::istream& in) { return step_function_from_json(read_json(o, in)); }

IntervalFamily family_of(const Options& o) {
    IntervalFamily fam;
    fam.tag = family_from_string(o.family);
    if (o.scale) fam.n_lo = *o.scale;
    if (o.window) {
        fam.n_hi = *o.window;
        fam.window = GridInterval{-pow2(*o.window), pow2(*o.window)};
    }
    return fam;
}

double exponent(const Options& o) {
    if (o.p) return *o.p;
    if (o.epsilon >= 1.0) throw DomainError("--p is required when epsilon = 1");
    return 1.0 / (1.0 - o.epsilon);
}

Result split_cmd(const Options& o, std::istream& in) {
    const Json j = read_json(o, in);
    Atom a;
    if (j.contains("shape")) {
        a.shape = step_function_from_json(j.at("shape"));
        if (!j.contains("defining")) throw ParseError("missing field 'defining'");
        try {
            a.defining = {j.at("defining").at("lo").get<double>(), j.at("defining").at("hi").get<double>()};
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("field 'defining': ") + e.what());
        }
    } else {
        a.shape = step_function_from_json(j);
        const auto s = a.shape.support();
        if (!s) throw PreconditionError("split-atom: the zero function has no defining interval");
        a.defining = *s;
    }
    return {to_json(split_atom(a))};
}

Result haar_cmd(const Options& o, std::istream& in) {
    const StepFunction f = read_step(o, in);
    const int L = o.window ? *o.window : covering_scale(f, f.cell_scale() + 1);
    return {to_json(haar_expand(f, L))};
}

Result decompose_cmd(const Options& o, std::istream& in) {
    const StepFunction f = read_step(o, in);
    try {
        return {to_json(decompose(f, flavor_from_string(o.flavor)))};
    } catch (const InfeasibleError& e) {
        return {infeasible_json(e), kExitFailed};
    }
}

Result distance_cmd(const Options& o, std::istream& in) { return {to_json(distance_to_HA(read_step(o, in)))}; }

Result counterexample_cmd(const Options& o, std::istream&) {
    const Counterexample c(o.n);
    const AtomicDecomposition d = c.decomposition();
    Json r = {{"N", c.N()},
              {"L_N", c.partial_constant()},
              {"cost", d.cost()},
              {"six_L_N", 6.0 * c.partial_constant()},
              {"decomposition_error", c.decomposition_error()},
              {"log_moment", c.log_moment()},
              {"log_moment_signed", c.log_moment_signed()},
              {"spike_moment", c.spike_moment()}};
    if (o.n <= 16) r["function"] = to_json(c.function());
    return {r};
}

Result bmo_cmd(const Options& o, std::istream& in) { return {to_json(bmo_norm(read_step(o, in), family_of(o)))}; }

Result lambda_cmd(const Options& o, std::istream& in) {
    const StepFunction f = read_step(o, in);
    IntervalFamily fam = family_of(o);
    fam.tag = FamilyTag::dyadic;
    const NormReport dy = bmo_norm(f, fam);
    const NormReport A = a_functional(f, fam);
    return {{{"value", std::max(dy.value, A.value)}, {"dyadic", to_json(dy)}, {"A", to_json(A)}}};
}

Result a0_cmd(const Options& o, std::istream& in) { return {to_json(a0_functional(read_step(o, in), family_of(o)))}; }

Result ab_cmd(const Options& o, std::istream& in) { return {{{"value", ab_functional(read_step(o, in))}}}; }

Result extend_cmd(const Options& o, std::istream& in) {
    const StepFunction f = read_step(o, in);
    std::optional<GridInterval> w;
    if (o.window) w = GridInterval{-pow2(*o.window), pow2(*o.window)};
    Json full = to_json(extension_criteria(f, w));
    if (o.parity == "both") return {full};
    static const std::map<std::string, std::vector<std::string>> keys = {
        {"even", {"even_norm", "two_sided_norm", "ratio", "ratio_flag"}},
        {"odd", {"odd_norm", "two_sided_norm", "g_value", "g_scale", "g_top", "odd_ratio", "odd_unbounded"}}};
    const auto it = keys.find(o.parity);
    if (it == keys.end()) throw ParseError("--parity must be even, odd or both");
    Json r = {{"parity", o.parity}};
    for (const auto& key : it->second) r[key] = full[key];
    return {r};
}

Result tau_cmd(const Options& o, std::istream& in) {
    const StepFunction f = read_step(o, in);
    Json r = to_json(tau(f, o.epsilon, o.refine));
    if (o.p) r["lp_norm"] = to_json(tau_lp_norm(f, o.epsilon, *o.p, o.refine));
    return {r};
}

Result maximal_cmd(const Options& o, std::istream& in) {
    const StepFunction f = read_step(o, in);
    const int L = o.window ? *o.window : covering_scale(f, f.cell_scale());
    const MaximalResult m = maximal_dyadic(f, o.epsilon, L, o.truncate);
    Json r = to_json(m);
    if (o.p) r["lp_norm"] = lp_norm(m.values, *o.p);
    return {r};
}

std::vector<OperatorPart> opnorm_parts(std::uint64_t seed) {
    Rng rng(seed);
    std::vector<OperatorPart> parts(4);
    parts[0].name = "dyadic";
    parts[1].name = "two-sided";
    parts[2].name = "special";
    parts[3].name = "special-origin";
    for (int n = -2; n <= 2; ++n) {
        parts[0].atoms.push_back(haar({n, rng.integer(-3, 2)}, n - 1));
        parts[2].atoms.push_back(special_atom(n, rng.integer(1, 3), n - 1));
        parts[3].atoms.push_back(special_atom(n, 0, n - 1));
    }
    for (int t = 0; t < 20; ++t) {
        const int scale = static_cast<int>(rng.integer(-3, 0));
        const bool positive = rng.integer(0, 1) == 1;
        const GridInterval I = positive ? random_interval(rng, scale, 24, 0.0, 8.0)
                                        : random_interval(rng, scale, 24, -8.0, 0.0);
        parts[1].atoms.push_back(random_atom(rng, I, scale).shape);
    }
    return parts;
}

Result opnorm_cmd(const Options& o, std::istream&) {
    const double p = exponent(o);
    const auto parts = opnorm_parts(o.seed);
    if (o.op == "tau") {
        const int R = o.refine;
        const double eps = o.epsilon;
        return {to_json(op_norm_estimate([&](const StepFunction& f) { return tau(f, eps, R); }, parts, p, true, o.seed))};
    }
    if (o.op == "maximal") {
        const int L = o.window.value_or(6);
        const double eps = o.epsilon;
        const auto trunc = o.truncate;
        return {to_json(op_norm_estimate(
            [&](const StepFunction& f) { return to_sampled(maximal_dyadic(f, eps, L, trunc).values); }, parts, p,
            false, o.seed))};
    }
    throw ParseError("--operator must be tau or maximal");
}

Result t1_cmd(const Options& o, std::istream&) {
    const int m = o.scale.value_or(-3), L = o.window.value_or(3);
    std::optional<KernelOperator> T;
    if (o.kernel.rfind("file:", 0) == 0) {
        Options file = o;
        file.input = o.kernel.substr(5);
        std::istringstream none;
        T.emplace(kernel_from_json(read_json(file, none), m, L, o.seed));
    } else {
        T.emplace(catalog_kernel(o.kernel, m, L, o.seed));
    }
    Json r = to_json(bmo_conditions(*T));
    r["kernel"] = T->name();
    r["window"] = {{"cell_scale", T->cell_scale()}, {"L", T->L()}};
    Json brackets = Json::array();
    for (int n = T->cell_scale(); n <= T->L(); ++n) {
        const BracketCheck b = bracket_identity(*T, n);
        brackets.push_back({{"n", b.n}, {"lhs", b.lhs}, {"rhs", b.rhs}, {"rel_err", b.rel_err},
                            {"support_preserving", b.support_preserving}});
    }
    r["bracket_identity"] = brackets;
    return {r};
}

Result psi_cmd(const Options& o, std::istream&) {
    return {to_json(psi(o.j, o.n, o.k, o.l, o.scale.value_or(-o.n - 1)))};
}

Result quadrants_cmd(const Options& o, std::istream& in) {
    return {quadrants_json(quadrant_integrals(step_function_2d_from_json(read_json(o, in))))};
}

Result pairing_cmd(const Options& o, std::istream& in) {
    const StepFunction2D phi = step_function_2d_from_json(read_json(o, in));
    return {to_json(bmo2d_pairing(phi, o.window.value_or(3)))};
}

Result suite_cmd(const Options& o, std::istream&, std::ostream& err) {
    SuiteConfig cfg;
    cfg.seed = o.seed;
    cfg.only = o.only;
    const auto results = run_suite(cfg);
    for (const CriterionResult& r : results)
        err << "criterion " << r.id << " " << (r.pass ? "PASS" : "FAIL") << " " << r.seconds << " s\n";
    Json report = suite_report(cfg, results);
    const bool pass = report["pass"].get<bool>();
    return {report, pass ? kExitOk : kExitFailed};
}

std::string csv_scalar(const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

void flatten(const Json& j, const std::string& prefix, std::ostream& out) {
    if (j.is_object()) {
        for (const auto& [key, v] : j.items()) flatten(v, prefix.empty() ? key : prefix + "." + key, out);
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), out);
    } else {
        out << prefix << "," << csv_scalar(j) << "\n";
    }
}

void write_csv(const Json& r, std::ostream& out) {
    if (r.is_object() && r.contains("witness") && r.contains("value")) {
        out << "lo,hi,value,family\n"
            << csv_scalar(r["witness"]["lo"]) << "," << csv_scalar(r["witness"]["hi"]) << "," << csv_scalar(r["value"])
            << "," << csv_scalar(r["family"]) << "\n";
    } else if (r.is_object() && r.contains("cell_scale") && r.contains("values") && r["cell_start"].is_number()) {
        const StepFunction f = step_function_from_json(r);
        out << "lo,hi,value\n";
        for (std::int64_t i = f.cell_start(); i < f.cell_end(); ++i)
            out << Json(f.cell_lo(i)).dump() << "," << Json(f.cell_lo(i + 1)).dump() << ","
                << Json(f.at_cell(i)).dump() << "\n";
    } else if (r.is_object() && r.contains("refine") && r.contains("step")) {
        const double lo = r["lo"].get<double>(), step = r["step"].get<double>();
        out << "x,value\n";
        const auto& v = r["values"];
        for (std::size_t i = 0; i < v.size(); ++i)
            out << Json(lo + (static_cast<double>(i) + 0.5) * step).dump() << "," << v[i].dump() << "\n";
    } else if (r.is_object() && r.contains("criteria")) {
        out << "id,name,pass\n";
        for (const auto& c : r["criteria"]) out << c["id"].dump() << "," << csv_scalar(c["name"]) << "," << c["pass"].dump() << "\n";
    } else {
        out << "key,value\n";
        flatten(r, "", out);
    }
}

using Handler = std::function<Result(const Options&, std::istream&, std::ostream&)>;

template <class F>
Handler simple(F f) {
    return [f](const Options& o, std::istream& in, std::ostream&) { return f(o, in); };
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Dyadic Hardy space and BMO toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("-i,--input", o.input, "input JSON file, '-' for stdin");
    app.add_option("-o,--output", o.output, "write the report to this file");
    app.add_option("--seed", o.seed, "random seed");
    app.add_option("--window", o.window, "window scale L: [-2^L, 2^L)");
    app.add_option("--scale", o.scale, "cell scale m (smallest interval scale)");
    app.add_option("--family", o.family, "all | dyadic | two-sided | shifted");
    app.add_option("--epsilon", o.epsilon, "operator exponent in [0, 1]");
    app.add_option("--p", o.p, "Lebesgue exponent; defaults to 1/(1-epsilon)");
    app.add_option("--flavor", o.flavor, "general | dyadic | two-sided");
    app.add_option("--format", o.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--refine", o.refine, "samples per cell")->check(CLI::PositiveNumber);
    app.add_option("--truncate", o.truncate, "maximal operator truncation N");
    app.add_option("--parity", o.parity, "even | odd | both");
    app.add_option("--operator", o.op, "tau | maximal");
    app.add_option("--kernel", o.kernel, "hilbert | gauss | gauss-even | blockdiag | zero | file:<path>");

    const std::map<std::string, std::pair<std::string, Handler>> commands = {
        {"split-atom", {"split an atom into two dyadic atoms and a special atom", simple(split_cmd)}},
        {"haar-expand", {"Haar coefficients and half-line residual", simple(haar_cmd)}},
        {"decompose", {"atomic decomposition of the chosen flavor", simple(decompose_cmd)}},
        {"distance-ha", {"distance to the zero-half-line-integral space", simple(distance_cmd)}},
        {"counterexample", {"the log-moment counterexample f_N (use --n)", simple(counterexample_cmd)}},
        {"bmo-norm", {"BMO norm over an interval family", simple(bmo_cmd)}},
        {"lambda", {"max of the dyadic norm and A", simple(lambda_cmd)}},
        {"a0", {"origin-centred special atom functional", simple(a0_cmd)}},
        {"ab", {"pairing with b", simple(ab_cmd)}},
        {"extend", {"even and odd extension criteria", simple(extend_cmd)}},
        {"tau", {"sampled tau_epsilon f", simple(tau_cmd)}},
        {"maximal", {"dyadic fractional maximal function", simple(maximal_cmd)}},
        {"opnorm", {"empirical operator norm over atom families", simple(opnorm_cmd)}},
        {"t1-check", {"T(1) conditions for a kernel surrogate", simple(t1_cmd)}},
        {"haar2d-psi", {"2D Haar generator (use --j --n --k --l)", simple(psi_cmd)}},
        {"quadrants", {"quadrant integrals of a 2D function", simple(quadrants_cmd)}},
        {"bmo2d-pairing", {"2D special-function pairing and dyadic-square norm", simple(pairing_cmd)}},
        {"suite", {"run acceptance criteria 1..10", suite_cmd}},
    };
    std::map<std::string, CLI::App*> subs;
    for (const auto& [name, entry] : commands) {
        CLI::App* sub = app.add_subcommand(name, entry.first);
        subs[name] = sub;
    }
    subs["counterexample"]->add_option("--n", o.n, "N");
    subs["haar2d-psi"]->add_option("--j", o.j, "generator 1, 2 or 3");
    subs["haar2d-psi"]->add_option("--n", o.n, "dilation");
    subs["haar2d-psi"]->add_option("--k", o.k, "x translate");
    subs["haar2d-psi"]->add_option("--l", o.l, "y translate");
    subs["suite"]->add_option("--only", o.only, "criterion ids")->check(CLI::Range(1, kCriterionCount));

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitParse;
    }

    std::string name;
    for (const auto& [n, sub] : subs)
        if (sub->parsed()) name = n;

    Result r;
    try {
        r = commands.at(name).second(o, in, err);
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const InfeasibleError& e) {
        r = {infeasible_json(e), kExitFailed};
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailed;
    }

    std::ofstream file;
    if (!o.output.empty()) {
        file.open(o.output);
        if (!file) {
            err << "error: cannot open output '" << o.output << "'\n";
            return kExitFailed;
        }
    }
    std::ostream& sink = o.output.empty() ? out : file;
    if (o.format == "csv")
        write_csv(r.report, sink);
    else
        sink << r.report.dump(2) << "\n";
    return r.code;
}

}  // namespace dha::cli
