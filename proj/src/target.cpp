#include "nlapprox/target.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "nlapprox/errors.hpp"

namespace nlapprox {

void HolderTarget::validate() const {
    if (!f) {
        throw ParameterError("target has no function attached");
    }
    if (d == 0) {
        throw ParameterError("target dimension must be >= 1");
    }
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw ParameterError("alpha must lie in (0,1], got " + std::to_string(alpha));
    }
    if (!(nu > 0.0) || !std::isfinite(nu)) {
        throw ParameterError("nu must be positive and finite");
    }
}

HolderSpotCheck spot_check_holder(const HolderTarget& target, std::size_t pairs, std::uint64_t seed) {
    target.validate();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> x(target.d);
    std::vector<double> y(target.d);
    HolderSpotCheck out;
    out.pairs = pairs;
    for (std::size_t p = 0; p < pairs; ++p) {
        double dist2 = 0.0;
        for (std::size_t i = 0; i < target.d; ++i) {
            x[i] = unit(rng);
            y[i] = unit(rng);
            dist2 += (x[i] - y[i]) * (x[i] - y[i]);
        }
        const double allowed = target.nu * std::pow(std::sqrt(dist2), target.alpha);
        const double seen = std::abs(target(x) - target(y));
        if (allowed > 0.0) {
            out.worst_ratio = std::max(out.worst_ratio, seen / allowed);
        }
        // Slack for rounding in the two evaluations.
        if (seen > allowed * (1.0 + 1e-12) + 1e-15) {
            ++out.violations;
        }
    }
    return out;
}

}  // namespace nlapprox
