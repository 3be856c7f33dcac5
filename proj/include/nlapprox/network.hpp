#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nlapprox {

// Dense row-major matrix.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }

    friend bool operator==(const Matrix&, const Matrix&) = default;
};

// One affine map h -> W h + b.
struct AffineLayer {
    Matrix weight;
    std::vector<double> bias;

    std::size_t out_dim() const { return weight.rows; }
    std::size_t in_dim() const { return weight.cols; }

    friend bool operator==(const AffineLayer&, const AffineLayer&) = default;
};

// Hidden-layer widths of a network, [N_1, ..., N_L].
class WidthVec {
public:
    explicit WidthVec(std::vector<std::size_t> widths);

    const std::vector<std::size_t>& widths() const { return widths_; }
    std::size_t depth() const { return widths_.size(); }
    std::size_t operator[](std::size_t i) const { return widths_[i]; }

    // True if every entry is <= the matching entry of `bound` (same depth).
    bool fits_within(const WidthVec& bound) const;

    std::string to_string() const;  // "[8,9]"

    friend bool operator==(const WidthVec&, const WidthVec&) = default;

private:
    std::vector<std::size_t> widths_;
};

// Feed-forward ReLU network: affine layers separated by componentwise
// max(0, .), no activation after the last layer, scalar output.
//
// Immutable after construction; the constructor validates that the layer
// dimensions chain, that the output is scalar, and that every parameter is
// finite.
class ReluNetwork {
public:
    ReluNetwork(std::size_t input_dim, std::vector<AffineLayer> layers);

    std::size_t input_dim() const { return input_dim_; }
    const std::vector<AffineLayer>& layers() const { return layers_; }
    std::size_t hidden_depth() const { return layers_.size() - 1; }
    WidthVec widths() const;
    std::size_t parameter_count() const;
    std::size_t max_width() const;

    friend bool operator==(const ReluNetwork&, const ReluNetwork&) = default;

private:
    std::size_t input_dim_;
    std::vector<AffineLayer> layers_;
};

// Reusable forward-pass workspace. One instance per thread.
class Evaluator {
public:
    explicit Evaluator(const ReluNetwork& net);

    double operator()(std::span<const double> x);

    // Pre-activation vectors h_1, ..., h_{L+1} for input x.
    std::vector<std::vector<double>> trace(std::span<const double> x);

private:
    const ReluNetwork* net_;
    std::vector<double> a_;
    std::vector<double> b_;
};

double evaluate(const ReluNetwork& net, std::span<const double> x);
double evaluate(const ReluNetwork& net, double x);  // input_dim == 1

// Network computing outer(inner(x)). The inner output layer and the outer
// first layer are fused into one affine map, so the hidden widths of the
// result are widths(inner) ++ widths(outer).
ReluNetwork compose(const ReluNetwork& outer, const ReluNetwork& inner);

// Network computing scale * net(x) + shift; only the final layer changes.
ReluNetwork affine_post(const ReluNetwork& net, double scale, double shift);

// Interchange format:
//   {"input_dim": d, "layers": [{"weight": [[...], ...], "bias": [...]}, ...]}
// Numbers are written with 17 significant digits.
std::string serialize(const ReluNetwork& net);
ReluNetwork deserialize(std::string_view text);

// Locale-independent 17-significant-digit formatting used by every writer.
std::string format_real(double v);

}  // namespace nlapprox
