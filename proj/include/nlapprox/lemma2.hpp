#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "nlapprox/cpl.hpp"
#include "nlapprox/network.hpp"

namespace nlapprox {

// Index bookkeeping for the two-hidden-layer interpolant of m(n+1)+1 samples.
//
// Samples are grouped into m segments of n+1 points; segment j occupies
// indices j(n+1) .. j(n+1)+n. The interval between the end of segment j and
// the start of segment j+1 (or the final sample) is a don't-care interval:
// the interpolant is exact at its endpoints but need not be linear inside.
class Lemma2Plan {
public:
    Lemma2Plan(SampleSet samples, std::size_t m, std::size_t n);

    std::size_t m() const { return m_; }
    std::size_t n() const { return n_; }
    const SampleSet& samples() const { return samples_; }
    std::size_t last_index() const { return m_ * (n_ + 1); }

    // I0 = {0, ..., m(n+1)}
    std::vector<std::size_t> i0() const;
    // I1 = {j(n+1) : j = 1..m}; right endpoints of the don't-care intervals.
    std::vector<std::size_t> i1() const;
    // I2 = I0 \ I1
    std::vector<std::size_t> i2() const;
    // I1 u (I1 - 1) u {0}, sorted; the 2m+1 kinks of the first hidden layer.
    const std::vector<std::size_t>& break_indices() const { return break_indices_; }
    std::vector<double> break_points() const;

    bool is_dont_care(std::size_t i) const { return i > 0 && i % (n_ + 1) == 0; }

    // Right-hand side of the sup-norm guarantee,
    // 3 max y * prod_k (1 + max_j(x_{j(n+1)+n} - x_{j(n+1)+k-1}) / min_j(x_{j(n+1)+k} - x_{j(n+1)+k-1})).
    double sup_bound() const;

private:
    SampleSet samples_;
    std::size_t m_;
    std::size_t n_;
    std::vector<std::size_t> break_indices_;
};

// Intermediate quantities of the construction, indexed by stage.
struct ResidualTrace {
    // residuals[k][i] = f_k(x_i), k = 0..n+1, i in I0.
    std::vector<std::vector<double>> residuals;
    // lambda_plus[k-1], lambda_minus[k-1]: segment indices j by sign of
    // f_k(x_{j(n+1)+k}), k = 1..n. Zero goes to lambda_plus.
    std::vector<std::vector<std::size_t>> lambda_plus;
    std::vector<std::vector<std::size_t>> lambda_minus;
    // Values at the 2m+1 break points of g_0 and of g+_k, g-_k (k = 1..n).
    std::vector<double> g0;
    std::vector<std::vector<double>> g_plus;
    std::vector<std::vector<double>> g_minus;

    std::string to_json() const;
};

struct Lemma2Result {
    ReluNetwork net;
    ResidualTrace trace;
};

// Two-hidden-layer network with widths [2m, 2n+1] that interpolates every
// sample, is linear on every interval outside the don't-care set, and obeys
// Lemma2Plan::sup_bound() on [x_0, x_{m(n+1)}].
Lemma2Result lemma2_interpolant(const Lemma2Plan& plan);

}  // namespace nlapprox
