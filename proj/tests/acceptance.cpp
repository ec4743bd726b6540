// Runs acceptance criteria 1..10 and prints one PASS/FAIL line per criterion.
#include <cstdio>
#include <cstdlib>

#include "dha/suite.hpp"

int main(int argc, char** argv) {
    dha::SuiteConfig config;
    if (argc > 1) config.seed = std::strtoull(argv[1], nullptr, 10);
    const auto results = dha::run_suite(config);
    bool all = true;
    for (const auto& r : results) {
        std::printf("criterion %2d %-34s %s (%.2f s)\n", r.id, r.name.c_str(), r.pass ? "PASS" : "FAIL", r.seconds);
        if (!r.pass) {
            if (r.details.contains("checks"))
                for (const auto& [key, ok] : r.details.at("checks").items())
                    if (!ok.get<bool>()) std::printf("    failed check: %s\n", key.c_str());
            if (r.details.contains("exception"))
                std::printf("    exception: %s\n", r.details.at("exception").get<std::string>().c_str());
        }
        all = all && r.pass;
    }
    std::printf("%s\n", all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL");
    return 0;
}
