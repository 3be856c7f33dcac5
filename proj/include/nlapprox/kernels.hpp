#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nlapprox/network.hpp"

namespace nlapprox {

// Batched forward passes. `points` is row-major, one input vector of length
// net.input_dim() per row; out.size() must equal the number of rows.
//
// The OpenMP kernel and the serial reference produce bit-identical values:
// each point is evaluated by the same sequence of operations.
void evaluate_batch(const ReluNetwork& net, std::span<const double> points, std::span<double> out);
void evaluate_batch_serial(const ReluNetwork& net, std::span<const double> points, std::span<double> out);

// Pairwise (tree) summation; the order of additions depends only on
// values.size().
double pairwise_sum(std::span<const double> values);

// Threads OpenMP will use for the next parallel region.
int max_threads();

}  // namespace nlapprox
