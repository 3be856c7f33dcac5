#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "nlapprox/network.hpp"
#include "nlapprox/target.hpp"

namespace nlapprox {

enum class QuadratureRule { Midpoint, Trapezoid };

// Tensor-product grid on [0,1]^d.
struct GridSpec {
    std::size_t d = 1;
    std::size_t points_per_axis = 1'000'000;
    QuadratureRule rule = QuadratureRule::Midpoint;
    std::size_t cap = 10'000'000;

    std::size_t total_points() const;  // throws ResourceError above cap
    void validate() const;
};

// 10^6 midpoints in 1-D, 2048^2 in 2-D, 200^3 in 3-D (the largest round size under the default cap).
GridSpec default_grid(std::size_t d);

// Composite quadrature estimate of the integral of |f - net| over [0,1]^d.
//
// Points are processed in fixed-size blocks; each block is summed serially
// and the block sums are combined by pairwise_sum, so the result does not
// depend on the number of threads.
double l1_error(const ScalarField& f, const ReluNetwork& net, const GridSpec& grid);
// Plain single loop, kept as the reference for l1_error.
double l1_error_serial(const ScalarField& f, const ReluNetwork& net, const GridSpec& grid);

// Max |f - net| over the grid points: a lower bound on the true sup.
double linf_error(const ScalarField& f, const ReluNetwork& net, const GridSpec& grid);
double linf_error_serial(const ScalarField& f, const ReluNetwork& net, const GridSpec& grid);

// Certified test functions:
//   "cone":   nu * |x - (1/2,...,1/2)|_2^alpha
//   "linear": nu * x_1 (alpha = 1 only)
//   "zero":   0
HolderTarget holder_family(const std::string& name, std::size_t d, double alpha, double nu);
std::vector<std::string> holder_family_names();

// Least-squares line through (ln N, ln error).
struct RateFit {
    std::vector<std::pair<std::size_t, double>> pairs;
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};
RateFit rate_fit(const std::vector<std::pair<std::size_t, double>>& pairs);

// One row of the measurement CSV.
struct MeasurementRecord {
    std::string name;
    std::size_t d = 1;
    double alpha = 1.0;
    double nu = 1.0;
    std::size_t N = 1;
    std::string widthvec;
    double l1 = 0.0;
    double linf = 0.0;
    double bound = 0.0;
    bool pass = false;
    double delta = 0.0;
    std::string status = "ok";  // or the error that stopped this row

    // name,d,alpha,nu,N,widthvec,l1,linf,bound,pass,delta,status
    static std::string csv_header();
    std::string csv_row() const;
};

}  // namespace nlapprox
