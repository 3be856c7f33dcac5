#include "nlapprox/delta.hpp"

#include <cmath>

#include "nlapprox/errors.hpp"

namespace nlapprox {

std::string to_string(DeltaMode mode) {
    return mode == DeltaMode::SufficientBound ? "paper-sufficient" : "empirical-shrink";
}

DeltaMode delta_mode_from_string(const std::string& name) {
    if (name == "paper-sufficient") return DeltaMode::SufficientBound;
    if (name == "empirical-shrink") return DeltaMode::EmpiricalShrink;
    throw ParameterError("unknown delta mode '" + name + "' (expected paper-sufficient or empirical-shrink)");
}

void DeltaPolicy::validate() const {
    if (!(floor > 0.0) || !std::isfinite(floor)) {
        throw ParameterError("delta floor must be a positive finite number");
    }
    if (!(shrink > 0.0 && shrink < 1.0)) {
        throw ParameterError("delta shrink factor must lie in (0,1)");
    }
    if (target && !(*target > 0.0 && std::isfinite(*target))) {
        throw ParameterError("delta target must be positive and finite");
    }
    if (max_iterations == 0) {
        throw ParameterError("delta policy needs max_iterations >= 1");
    }
}

double default_delta_target(const DeltaContext& ctx) {
    if (ctx.d == 1) {
        return std::pow(static_cast<double>(ctx.N), -2.0 * ctx.alpha);
    }
    const double d = static_cast<double>(ctx.d);
    return std::pow(d, ctx.alpha / 2.0) * std::pow(static_cast<double>(ctx.n), -ctx.alpha);
}

namespace {

// log(a + b * k!) for a, b > 0 without forming k!.
double log_affine_factorial(double a, double b, std::size_t k) {
    const double log_term = std::log(b) + std::lgamma(static_cast<double>(k) + 1.0);
    return log_term + std::log1p(std::exp(std::log(a) - log_term));
}

}  // namespace

double log_sufficient_delta(const DeltaContext& ctx, double target) {
    if (ctx.d == 1) {
        const double N = static_cast<double>(ctx.N);
        return std::log(target) - std::log(N) - log_affine_factorial(2.0, 6.0, ctx.N + 1);
    }
    const double d = static_cast<double>(ctx.d);
    const double n = static_cast<double>(ctx.n);
    return std::log(target) - std::log(2.0 * n * d * std::sqrt(d)) - log_affine_factorial(1.0, 3.0, ctx.capacity + 1);
}

DeltaChoice choose_delta(const DeltaPolicy& policy, const DeltaContext& ctx) {
    policy.validate();
    if (!(ctx.min_grid_gap > 0.0)) {
        throw PreconditionError("delta context needs a positive minimum grid gap");
    }
    DeltaChoice choice;
    choice.budget = policy.target.value_or(default_delta_target(ctx));
    // Largest admissible delta: strictly below half the punctured gap.
    const double ceiling = std::nextafter(0.5 * ctx.min_grid_gap, 0.0);

    if (policy.mode == DeltaMode::SufficientBound) {
        choice.exact_log = log_sufficient_delta(ctx, choice.budget);
        double delta = std::exp(choice.exact_log);
        if (!(delta >= policy.floor)) {
            delta = policy.floor;
            choice.clamped = true;
        }
        choice.delta = std::min(delta, ceiling);
        return choice;
    }

    if (!ctx.measure) {
        throw PreconditionError("empirical delta selection needs a measurement callback");
    }
    double delta = ceiling;
    if (delta < policy.floor) {
        throw InfeasibleError("grid gap is already below the delta floor", std::nan(""));
    }
    for (std::size_t it = 1; it <= policy.max_iterations; ++it) {
        choice.iterations = it;
        choice.measured = ctx.measure(delta);
        if (choice.measured <= choice.budget) {
            choice.delta = delta;
            return choice;
        }
        if (delta == policy.floor) {
            break;
        }
        delta = std::max(delta * policy.shrink, policy.floor);
    }
    throw InfeasibleError("no delta above the floor " + std::to_string(policy.floor) +
                              " meets the error budget " + std::to_string(choice.budget) +
                              " (measured " + std::to_string(choice.measured) + ")",
                          choice.measured);
}

}  // namespace nlapprox
