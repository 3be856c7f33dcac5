#include "nlapprox/network.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "nlapprox/errors.hpp"

namespace nlapprox {

WidthVec::WidthVec(std::vector<std::size_t> widths) : widths_(std::move(widths)) {
    if (widths_.empty()) {
        throw ShapeError("widthvec must be nonempty");
    }
    if (std::ranges::any_of(widths_, [](std::size_t w) { return w == 0; })) {
        throw ShapeError("widthvec entries must be >= 1");
    }
}

bool WidthVec::fits_within(const WidthVec& bound) const {
    if (bound.depth() != depth()) {
        return false;
    }
    for (std::size_t i = 0; i < depth(); ++i) {
        if (widths_[i] > bound.widths_[i]) {
            return false;
        }
    }
    return true;
}

std::string WidthVec::to_string() const {
    std::string out = "[";
    for (std::size_t i = 0; i < widths_.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(widths_[i]);
    }
    return out + "]";
}

ReluNetwork::ReluNetwork(std::size_t input_dim, std::vector<AffineLayer> layers)
    : input_dim_(input_dim), layers_(std::move(layers)) {
    if (input_dim_ == 0) {
        throw ValidationError("input_dim must be positive");
    }
    if (layers_.empty()) {
        throw ValidationError("network needs at least one affine layer");
    }
    std::size_t expected_in = input_dim_;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        const auto& layer = layers_[i];
        if (layer.weight.rows == 0) {
            throw ValidationError("layer " + std::to_string(i) + " has no outputs");
        }
        if (layer.weight.data.size() != layer.weight.rows * layer.weight.cols) {
            throw ValidationError("layer " + std::to_string(i) + " weight storage size mismatch");
        }
        if (layer.weight.cols != expected_in) {
            throw ValidationError("layer " + std::to_string(i) + " expects " +
                                  std::to_string(layer.weight.cols) + " inputs but previous width is " +
                                  std::to_string(expected_in));
        }
        if (layer.bias.size() != layer.weight.rows) {
            throw ValidationError("layer " + std::to_string(i) + " bias length mismatch");
        }
        auto finite = [](double v) { return std::isfinite(v); };
        if (!std::ranges::all_of(layer.weight.data, finite) || !std::ranges::all_of(layer.bias, finite)) {
            throw ValidationError("layer " + std::to_string(i) + " has nonfinite parameters");
        }
        expected_in = layer.weight.rows;
    }
    if (expected_in != 1) {
        throw ValidationError("final layer must have output dimension 1");
    }
}

WidthVec ReluNetwork::widths() const {
    std::vector<std::size_t> w;
    for (std::size_t i = 0; i + 1 < layers_.size(); ++i) {
        w.push_back(layers_[i].out_dim());
    }
    if (w.empty()) {
        throw ShapeError("network has no hidden layers");
    }
    return WidthVec(std::move(w));
}

std::size_t ReluNetwork::parameter_count() const {
    std::size_t count = 0;
    for (const auto& layer : layers_) {
        count += layer.weight.data.size() + layer.bias.size();
    }
    return count;
}

std::size_t ReluNetwork::max_width() const {
    std::size_t w = 0;
    for (std::size_t i = 0; i + 1 < layers_.size(); ++i) {
        w = std::max(w, layers_[i].out_dim());
    }
    return w;
}

Evaluator::Evaluator(const ReluNetwork& net) : net_(&net) {
    std::size_t widest = net.input_dim();
    for (const auto& layer : net.layers()) {
        widest = std::max(widest, layer.out_dim());
    }
    a_.resize(widest);
    b_.resize(widest);
}

double Evaluator::operator()(std::span<const double> x) {
    if (x.size() != net_->input_dim()) {
        throw ShapeError("input has length " + std::to_string(x.size()) + ", network expects " +
                         std::to_string(net_->input_dim()));
    }
    std::copy(x.begin(), x.end(), a_.begin());
    const auto& layers = net_->layers();
    const std::size_t last = layers.size() - 1;
    for (std::size_t l = 0; l <= last; ++l) {
        const auto& layer = layers[l];
        const std::size_t rows = layer.weight.rows;
        const std::size_t cols = layer.weight.cols;
        const double* w = layer.weight.data.data();
        for (std::size_t r = 0; r < rows; ++r) {
            double acc = layer.bias[r];
            const double* wr = w + r * cols;
            for (std::size_t c = 0; c < cols; ++c) {
                acc += wr[c] * a_[c];
            }
            b_[r] = (l == last || acc > 0.0) ? acc : 0.0;
        }
        std::swap(a_, b_);
    }
    return a_[0];
}

std::vector<std::vector<double>> Evaluator::trace(std::span<const double> x) {
    if (x.size() != net_->input_dim()) {
        throw ShapeError("input has length " + std::to_string(x.size()) + ", network expects " +
                         std::to_string(net_->input_dim()));
    }
    std::vector<std::vector<double>> out;
    std::vector<double> act(x.begin(), x.end());
    for (const auto& layer : net_->layers()) {
        std::vector<double> pre(layer.out_dim());
        for (std::size_t r = 0; r < layer.out_dim(); ++r) {
            double acc = layer.bias[r];
            for (std::size_t c = 0; c < layer.in_dim(); ++c) {
                acc += layer.weight(r, c) * act[c];
            }
            pre[r] = acc;
        }
        act.resize(pre.size());
        std::ranges::transform(pre, act.begin(), [](double v) { return v > 0.0 ? v : 0.0; });
        out.push_back(std::move(pre));
    }
    return out;
}

double evaluate(const ReluNetwork& net, std::span<const double> x) {
    for (double v : x) {
        if (!std::isfinite(v)) {
            throw ShapeError("input contains a nonfinite entry");
        }
    }
    Evaluator ev(net);
    return ev(x);
}

double evaluate(const ReluNetwork& net, double x) {
    return evaluate(net, std::span<const double>(&x, 1));
}

ReluNetwork compose(const ReluNetwork& outer, const ReluNetwork& inner) {
    if (outer.input_dim() != 1) {
        throw CompositionError("outer network must take a scalar input, got input_dim " +
                               std::to_string(outer.input_dim()));
    }
    const auto& in_layers = inner.layers();
    const auto& out_layers = outer.layers();
    const AffineLayer& tail = in_layers.back();    // 1 x k
    const AffineLayer& head = out_layers.front();  // r x 1

    // head(tail(h)) = W_h (W_t h + b_t) + b_h
    AffineLayer fused;
    fused.weight = Matrix(head.out_dim(), tail.in_dim());
    fused.bias.resize(head.out_dim());
    for (std::size_t r = 0; r < head.out_dim(); ++r) {
        const double scale = head.weight(r, 0);
        for (std::size_t c = 0; c < tail.in_dim(); ++c) {
            fused.weight(r, c) = scale * tail.weight(0, c);
        }
        fused.bias[r] = scale * tail.bias[0] + head.bias[r];
    }

    std::vector<AffineLayer> layers(in_layers.begin(), in_layers.end() - 1);
    layers.push_back(std::move(fused));
    layers.insert(layers.end(), out_layers.begin() + 1, out_layers.end());
    return ReluNetwork(inner.input_dim(), std::move(layers));
}

ReluNetwork affine_post(const ReluNetwork& net, double scale, double shift) {
    if (!std::isfinite(scale) || !std::isfinite(shift)) {
        throw ParameterError("affine_post scale and shift must be finite");
    }
    auto layers = net.layers();
    AffineLayer& last = layers.back();
    if (scale != 1.0) {
        for (double& w : last.weight.data) w *= scale;
        last.bias[0] *= scale;
    }
    last.bias[0] += shift;
    return ReluNetwork(net.input_dim(), std::move(layers));
}

std::string format_real(double v) {
    // "-0" would be read back as the integer 0 and lose its sign.
    if (v == 0.0 && std::signbit(v)) return "-0.0";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

namespace {

void write_vector(std::ostringstream& os, std::span<const double> v) {
    os << '[';
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ',';
        os << format_real(v[i]);
    }
    os << ']';
}

}  // namespace

std::string serialize(const ReluNetwork& net) {
    std::ostringstream os;
    os << "{\"input_dim\":" << net.input_dim() << ",\"layers\":[";
    const auto& layers = net.layers();
    for (std::size_t l = 0; l < layers.size(); ++l) {
        if (l) os << ',';
        os << "\n{\"weight\":[";
        for (std::size_t r = 0; r < layers[l].weight.rows; ++r) {
            if (r) os << ',';
            write_vector(os, layers[l].weight.row(r));
        }
        os << "],\"bias\":";
        write_vector(os, layers[l].bias);
        os << '}';
    }
    os << "]}\n";
    return os.str();
}

namespace {

using nlohmann::json;

std::vector<double> read_numbers(const json& arr, std::size_t end_offset, const std::string& where) {
    if (!arr.is_array()) {
        throw ParseError(where + " must be an array", end_offset);
    }
    std::vector<double> out;
    out.reserve(arr.size());
    for (const auto& v : arr) {
        if (!v.is_number()) {
            throw ParseError(where + " must contain only numbers", end_offset);
        }
        out.push_back(v.get<double>());
    }
    return out;
}

}  // namespace

ReluNetwork deserialize(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed network document: ") + e.what(), e.byte);
    }
    // Structural problems are reported at the end of the document: the text
    // itself parsed, so no finer position is meaningful.
    const std::size_t end = text.size();
    if (!doc.is_object()) {
        throw ParseError("network document must be an object", end);
    }
    if (!doc.contains("input_dim") || !doc["input_dim"].is_number_integer() ||
        doc["input_dim"].get<long long>() <= 0) {
        throw ParseError("input_dim must be a positive integer", end);
    }
    if (!doc.contains("layers") || !doc["layers"].is_array() || doc["layers"].empty()) {
        throw ParseError("layers must be a nonempty array", end);
    }
    std::vector<AffineLayer> layers;
    for (std::size_t l = 0; l < doc["layers"].size(); ++l) {
        const json& jl = doc["layers"][l];
        const std::string where = "layers[" + std::to_string(l) + "]";
        if (!jl.is_object() || !jl.contains("weight") || !jl.contains("bias")) {
            throw ParseError(where + " needs weight and bias", end);
        }
        const json& jw = jl["weight"];
        if (!jw.is_array() || jw.empty()) {
            throw ParseError(where + ".weight must be a nonempty array of rows", end);
        }
        AffineLayer layer;
        layer.bias = read_numbers(jl["bias"], end, where + ".bias");
        const std::size_t rows = jw.size();
        std::size_t cols = 0;
        for (std::size_t r = 0; r < rows; ++r) {
            auto row = read_numbers(jw[r], end, where + ".weight row");
            if (r == 0) {
                cols = row.size();
                layer.weight = Matrix(rows, cols);
            } else if (row.size() != cols) {
                throw ValidationError(where + ".weight rows have unequal lengths");
            }
            std::ranges::copy(row, layer.weight.data.begin() + static_cast<std::ptrdiff_t>(r * cols));
        }
        layers.push_back(std::move(layer));
    }
    return ReluNetwork(static_cast<std::size_t>(doc["input_dim"].get<long long>()), std::move(layers));
}

}  // namespace nlapprox
