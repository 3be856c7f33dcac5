#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace nlapprox {

struct CheckResult {
    std::string suite;
    std::string property;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct CheckOptions {
    std::uint64_t seed = 20240611;
    // Restrict the lemma2 / residual suites to a single (m, n).
    std::optional<std::size_t> m;
    std::optional<std::size_t> n;
};

// lemma1, lemma2, residual, corollary, bounds, delta, cost
std::vector<std::string> check_suite_names();

// Throws RegistryError for an unknown suite.
std::vector<CheckResult> run_check_suite(const std::string& suite, const CheckOptions& options);

std::string junit_xml(const std::vector<CheckResult>& results);

}  // namespace nlapprox
