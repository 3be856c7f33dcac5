#pragma once

#include <cstddef>
#include <vector>

#include "nlapprox/delta.hpp"
#include "nlapprox/lemma2.hpp"
#include "nlapprox/network.hpp"
#include "nlapprox/target.hpp"

namespace nlapprox {

// A constructed approximant and the bookkeeping needed to report on it.
struct Approximant {
    ReluNetwork net;
    DeltaChoice delta;
    double bound = 0.0;        // proven L1 error bound for this (target, N)
    WidthVec width_limit;      // architecture class the net must fit in
    std::size_t grid_n = 0;    // d > 1: cells per axis
};

// Sorted grid {i/N^2} u {i/N - delta} of N(N+1)+1 points.
std::vector<double> d1_grid(std::size_t N, double delta);

// Two-hidden-layer approximant of a 1-D target, widths [2N, 2N+1], with
// L1 error at most 2 nu N^{-2 alpha}.
Approximant theorem_d1(const HolderTarget& target, std::size_t N, const DeltaPolicy& policy);

// Staircase of width 2n: value i on [i/n, (i+1)/n - delta], linear ramps of
// width delta in between, n-1 at x = 1.
ReluNetwork psi0(std::size_t n, double delta);

// psi(x) = sum_i n^{-i} psi0(x_i) on [0,1]^d as a one-hidden-layer net of
// width 2nd. Constant on every cell Q_theta, where it equals sum theta_i n^{-i}.
ReluNetwork projection_network(std::size_t n, std::size_t d, double delta);

// Largest n with n^d <= N^2, i.e. floor(N^{2/d}).
std::size_t grid_cells_per_axis(std::size_t N, std::size_t d);
// Smallest c with c^2 >= n^d, i.e. ceil(n^{d/2}).
std::size_t two_layer_capacity(std::size_t n, std::size_t d);

// Three-hidden-layer approximant of a d-dimensional target (d >= 2) with
// widths at most [2d floor(N^{2/d}), 2N+2, 2N+3] and L1 error at most
// 2 (2 sqrt d)^alpha nu N^{-2 alpha/d}. Supported for d <= 3 and n <= 16.
Approximant theorem_dd(const HolderTarget& target, std::size_t N, const DeltaPolicy& policy);

// Dispatches on target.d.
Approximant construct(const HolderTarget& target, std::size_t N, const DeltaPolicy& policy);

// Closed-form L1 bounds.
double theorem_bound(std::size_t d, double alpha, double nu, std::size_t N);

// Baseline: one-hidden-layer interpolant of a 1-D target on N+1 equispaced
// nodes (width N).
ReluNetwork one_layer_baseline(const HolderTarget& target, std::size_t N);

}  // namespace nlapprox
