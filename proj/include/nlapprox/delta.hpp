#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>

namespace nlapprox {

enum class DeltaMode { SufficientBound, EmpiricalShrink };

std::string to_string(DeltaMode mode);
DeltaMode delta_mode_from_string(const std::string& name);

// How the width delta of the don't-care slivers is chosen.
//
// SufficientBound solves the closed-form sufficient inequality of the
// construction at equality (in log space). EmpiricalShrink starts just below
// half the minimum grid gap and shrinks until a measured estimate of the
// sliver contribution to the L1 error fits the budget.
struct DeltaPolicy {
    DeltaMode mode = DeltaMode::EmpiricalShrink;
    // Right-hand side of the inequality / the sliver error budget. When unset
    // the construction's own default is used.
    std::optional<double> target;
    double floor = 1e-12;
    double shrink = 0.5;
    std::size_t max_iterations = 200;

    void validate() const;
};

// What choose_delta needs to know about the construction.
struct DeltaContext {
    std::size_t d = 1;
    double alpha = 1.0;
    // d == 1: the approximation parameter N. d > 1: unused.
    std::size_t N = 1;
    // d > 1: grid resolution n and the two-layer capacity ceil(n^{d/2}).
    std::size_t n = 1;
    std::size_t capacity = 1;
    // Smallest gap of the grid that the slivers puncture.
    double min_grid_gap = 1.0;
    // EmpiricalShrink only: estimated L1 contribution of the slivers at a
    // given delta (in the normalized units of the construction).
    std::function<double(double)> measure;
};

struct DeltaChoice {
    double delta = 0.0;
    bool clamped = false;  // closed-form value was below the floor
    double exact_log = 0.0;  // natural log of the unclamped closed-form value
    double budget = 0.0;
    double measured = 0.0;  // last measured contribution (empirical mode)
    std::size_t iterations = 0;
};

// Default right-hand side: N^{-2 alpha} for d == 1, d^{alpha/2} n^{-alpha} otherwise.
double default_delta_target(const DeltaContext& ctx);

// Natural log of the delta that satisfies the sufficient condition with
// equality:
//   d == 1: N delta (2 + 6 (N+1)!) = target
//   d > 1:  2 n delta d sqrt(d) (1 + 3 (capacity+1)!) = target
double log_sufficient_delta(const DeltaContext& ctx, double target);

DeltaChoice choose_delta(const DeltaPolicy& policy, const DeltaContext& ctx);

}  // namespace nlapprox
