#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nlapprox/network.hpp"

namespace nlapprox {

// Minimum admissible gap between consecutive break points / abscissae.
inline constexpr double kMinBreakGap = 1e-13;

// Continuous piecewise-linear function given by strictly increasing break
// points and the values there. Outside [breaks.front(), breaks.back()] the
// end segments extend linearly.
class CplFunction {
public:
    CplFunction(std::vector<double> breaks, std::vector<double> values);

    const std::vector<double>& breaks() const { return breaks_; }
    const std::vector<double>& values() const { return values_; }
    std::size_t pieces() const { return breaks_.size() - 1; }

    double operator()(double x) const;

    double slope(std::size_t piece) const;

private:
    std::vector<double> breaks_;
    std::vector<double> values_;
};

double eval_cpl(const CplFunction& f, double x);

struct Sample {
    double x;
    double y;
};

// Sample shape m(n+1)+1 required by the two-hidden-layer interpolant.
struct Lemma2Shape {
    std::size_t m;
    std::size_t n;

    std::size_t count() const { return m * (n + 1) + 1; }
};

// Samples with strictly increasing abscissae. When a Lemma2Shape is attached,
// the count must match it and every value must be nonnegative.
class SampleSet {
public:
    explicit SampleSet(std::vector<Sample> points, std::optional<Lemma2Shape> shape = std::nullopt);
    SampleSet(std::span<const double> xs, std::span<const double> ys,
              std::optional<Lemma2Shape> shape = std::nullopt);

    const std::vector<Sample>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    const Sample& operator[](std::size_t i) const { return points_[i]; }
    const std::optional<Lemma2Shape>& shape() const { return shape_; }

    std::vector<double> xs() const;
    std::vector<double> ys() const;

    // The CPL through all samples.
    CplFunction as_cpl() const;

private:
    std::vector<Sample> points_;
    std::optional<Lemma2Shape> shape_;
};

// Output affine map (weights, bias) of a one-hidden-layer net whose hidden
// units are relu(x - breaks[j]), j < breaks.size()-1, so that the output
// passes through (breaks[i], values[i]) and is linear between them.
struct OutputFit {
    std::vector<double> weights;
    double bias;
};
OutputFit fit_output_layer(std::span<const double> breaks, std::span<const double> values);

// One-hidden-layer network of width k-1 interpolating k samples, with all-ones
// input weights and biases -x_0, ..., -x_{k-2}.
ReluNetwork lemma1_interpolant(const SampleSet& samples);

// Exact integral of |f - g| over [a, b], splitting at sign crossings.
double exact_l1_cpl(const CplFunction& f, const CplFunction& g, double a, double b);

// Recover a CPL representation of a scalar 1-D network on [a, b] by dense
// probing with adaptive refinement around slope changes. Adjacent pieces
// whose slopes differ by at most 1e-6 (relative) are merged.
CplFunction cpl_from_net_1d(const ReluNetwork& net, double a, double b, std::size_t probe_count);

std::string serialize_cpl(const CplFunction& f);
CplFunction deserialize_cpl(std::string_view text);

}  // namespace nlapprox
