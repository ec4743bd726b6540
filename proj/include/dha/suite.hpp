#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dha/json_io.hpp"

namespace dha {

struct SuiteConfig {
    std::uint64_t seed = 7;
    std::vector<int> only;  ///< criterion ids to run; empty runs 1..10
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    Json details;          ///< deterministic given the seed
    double seconds = 0.0;  ///< wall time, kept out of `details`
};

inline constexpr int kCriterionCount = 10;

CriterionResult run_criterion(int id, std::uint64_t seed);

/// Criteria run concurrently, each with its own seed derived from
/// `config.seed`; results come back in id order.
std::vector<CriterionResult> run_suite(const SuiteConfig& config);

/// {"seed": s, "pass": all, "criteria": [{id, name, pass, details}, ...]}
Json suite_report(const SuiteConfig& config, const std::vector<CriterionResult>& results);

}  // namespace dha
