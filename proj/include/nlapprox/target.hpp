#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>

namespace nlapprox {

using ScalarField = std::function<double(std::span<const double>)>;

// A target f on [0,1]^d together with a caller-supplied Hoelder certificate
// |f(x) - f(y)| <= nu * |x - y|_2^alpha. The certificate is trusted; see
// spot_check_holder for a sampled sanity check.
struct HolderTarget {
    std::string name;
    ScalarField f;
    std::size_t d = 1;
    double alpha = 1.0;
    double nu = 1.0;

    double operator()(std::span<const double> x) const { return f(x); }
    double at(double x) const { return f(std::span<const double>(&x, 1)); }

    // Throws ParameterError unless d >= 1, alpha in (0,1], nu > 0 and f set.
    void validate() const;
};

struct HolderSpotCheck {
    std::size_t pairs = 0;
    std::size_t violations = 0;
    double worst_ratio = 0.0;  // max |f(x)-f(y)| / (nu |x-y|^alpha)
};

// Evaluate the certificate on `pairs` seeded random pairs in [0,1]^d.
HolderSpotCheck spot_check_holder(const HolderTarget& target, std::size_t pairs, std::uint64_t seed);

}  // namespace nlapprox
