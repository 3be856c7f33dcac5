#include "nlapprox/cpl.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "nlapprox/errors.hpp"

namespace nlapprox {

namespace {

void require_increasing(std::span<const double> xs, const char* what) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!std::isfinite(xs[i])) {
            throw PreconditionError(std::string(what) + " must be finite");
        }
        if (i > 0 && !(xs[i] - xs[i - 1] >= kMinBreakGap)) {
            throw PreconditionError(std::string(what) + " must be strictly increasing (gap >= 1e-13); violated at index " +
                                    std::to_string(i));
        }
    }
}

}  // namespace

CplFunction::CplFunction(std::vector<double> breaks, std::vector<double> values)
    : breaks_(std::move(breaks)), values_(std::move(values)) {
    if (breaks_.size() < 2) {
        throw PreconditionError("a CPL function needs at least two break points");
    }
    if (breaks_.size() != values_.size()) {
        throw ShapeError("breaks and values differ in length");
    }
    require_increasing(breaks_, "break points");
    if (!std::ranges::all_of(values_, [](double v) { return std::isfinite(v); })) {
        throw PreconditionError("CPL values must be finite");
    }
}

double CplFunction::slope(std::size_t piece) const {
    return (values_[piece + 1] - values_[piece]) / (breaks_[piece + 1] - breaks_[piece]);
}

double CplFunction::operator()(double x) const {
    // Segment index i with breaks[i] <= x < breaks[i+1], clamped to the end
    // segments for extrapolation.
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
    std::size_t i = it == breaks_.begin() ? 0 : static_cast<std::size_t>(it - breaks_.begin()) - 1;
    i = std::min(i, breaks_.size() - 2);
    const double x0 = breaks_[i];
    const double x1 = breaks_[i + 1];
    const double t = (x - x0) / (x1 - x0);
    return values_[i] + t * (values_[i + 1] - values_[i]);
}

double eval_cpl(const CplFunction& f, double x) { return f(x); }

SampleSet::SampleSet(std::vector<Sample> points, std::optional<Lemma2Shape> shape)
    : points_(std::move(points)), shape_(shape) {
    std::vector<double> x = xs();
    require_increasing(x, "sample abscissae");
    for (const auto& p : points_) {
        if (!std::isfinite(p.y)) {
            throw PreconditionError("sample values must be finite");
        }
    }
    if (shape_) {
        if (shape_->m == 0 || shape_->n == 0) {
            throw ShapeError("lemma2 shape needs m, n >= 1");
        }
        if (points_.size() != shape_->count()) {
            throw ShapeError("expected m(n+1)+1 = " + std::to_string(shape_->count()) + " samples, got " +
                             std::to_string(points_.size()));
        }
        for (std::size_t i = 0; i < points_.size(); ++i) {
            if (points_[i].y < 0.0) {
                throw PreconditionError("sample " + std::to_string(i) + " has negative value");
            }
        }
    }
}

SampleSet::SampleSet(std::span<const double> xs, std::span<const double> ys, std::optional<Lemma2Shape> shape)
    : SampleSet(
          [&] {
              if (xs.size() != ys.size()) {
                  throw ShapeError("abscissae and values differ in length");
              }
              std::vector<Sample> pts(xs.size());
              for (std::size_t i = 0; i < xs.size(); ++i) pts[i] = {xs[i], ys[i]};
              return pts;
          }(),
          shape) {}

std::vector<double> SampleSet::xs() const {
    std::vector<double> out(points_.size());
    std::ranges::transform(points_, out.begin(), &Sample::x);
    return out;
}

std::vector<double> SampleSet::ys() const {
    std::vector<double> out(points_.size());
    std::ranges::transform(points_, out.begin(), &Sample::y);
    return out;
}

CplFunction SampleSet::as_cpl() const { return CplFunction(xs(), ys()); }

OutputFit fit_output_layer(std::span<const double> breaks, std::span<const double> values) {
    if (breaks.size() < 2 || breaks.size() != values.size()) {
        throw ShapeError("output fit needs matching breaks and values, at least two");
    }
    const std::size_t hidden = breaks.size() - 1;
    OutputFit fit{std::vector<double>(hidden), values[0]};
    double prev_slope = 0.0;
    for (std::size_t j = 0; j < hidden; ++j) {
        const double s = (values[j + 1] - values[j]) / (breaks[j + 1] - breaks[j]);
        fit.weights[j] = s - prev_slope;
        prev_slope = s;
    }
    return fit;
}

ReluNetwork lemma1_interpolant(const SampleSet& samples) {
    if (samples.size() < 2) {
        throw PreconditionError("lemma1_interpolant needs at least two samples");
    }
    const auto x = samples.xs();
    const auto y = samples.ys();
    const std::size_t width = x.size() - 1;

    AffineLayer hidden;
    hidden.weight = Matrix(width, 1, 1.0);
    hidden.bias.resize(width);
    for (std::size_t j = 0; j < width; ++j) hidden.bias[j] = -x[j];

    const OutputFit fit = fit_output_layer(x, y);
    AffineLayer out;
    out.weight = Matrix(1, width);
    std::ranges::copy(fit.weights, out.weight.data.begin());
    out.bias = {fit.bias};
    return ReluNetwork(1, {std::move(hidden), std::move(out)});
}

double exact_l1_cpl(const CplFunction& f, const CplFunction& g, double a, double b) {
    if (!(a < b)) {
        throw PreconditionError("exact_l1_cpl needs a < b");
    }
    std::vector<double> pts{a, b};
    for (double x : f.breaks())
        if (x > a && x < b) pts.push_back(x);
    for (double x : g.breaks())
        if (x > a && x < b) pts.push_back(x);
    std::ranges::sort(pts);
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    double total = 0.0;
    double h0 = f(pts[0]) - g(pts[0]);
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const double h1 = f(pts[i]) - g(pts[i]);
        const double w = pts[i] - pts[i - 1];
        if ((h0 >= 0.0 && h1 >= 0.0) || (h0 <= 0.0 && h1 <= 0.0)) {
            total += 0.5 * w * (std::abs(h0) + std::abs(h1));
        } else {
            // Two triangles meeting at the root.
            total += 0.5 * w * (h0 * h0 + h1 * h1) / (std::abs(h0) + std::abs(h1));
        }
        h0 = h1;
    }
    return total;
}

CplFunction cpl_from_net_1d(const ReluNetwork& net, double a, double b, std::size_t probe_count) {
    if (probe_count < 3) {
        throw PreconditionError("cpl_from_net_1d needs probe_count >= 3");
    }
    if (net.input_dim() != 1) {
        throw ShapeError("cpl_from_net_1d needs a scalar-input network");
    }
    if (!(a < b)) {
        throw PreconditionError("cpl_from_net_1d needs a < b");
    }
    Evaluator ev(net);
    auto f = [&ev](double x) { return ev(std::span<const double>(&x, 1)); };

    // Uniform probes plus the kinks of the first hidden layer.
    std::vector<double> grid(probe_count);
    for (std::size_t i = 0; i < probe_count; ++i) {
        grid[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(probe_count - 1);
    }
    grid.back() = b;
    const AffineLayer& first = net.layers().front();
    for (std::size_t r = 0; r < first.out_dim(); ++r) {
        const double w = first.weight(r, 0);
        if (w != 0.0) {
            const double kink = -first.bias[r] / w;
            if (kink > a && kink < b) grid.push_back(kink);
        }
    }
    std::ranges::sort(grid);
    grid.erase(std::unique(grid.begin(), grid.end(), [](double l, double r) { return r - l < 1e-12; }),
               grid.end());
    grid.back() = b;

    std::vector<double> gv(grid.size());
    double scale = 1.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        gv[i] = f(grid[i]);
        scale = std::max(scale, std::abs(gv[i]));
    }
    const double tol = 1e-10 * scale;
    const double min_width =
        std::max({1e-12, 1e-13 * (b - a), 8.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(b))});

    std::vector<double> px{grid[0]};
    std::vector<double> py{gv[0]};
    // Append refined points of (lo, hi], lo already emitted.
    std::function<void(double, double, double, double, int)> refine =
        [&](double lo, double hi, double flo, double fhi, int depth) {
            const double w = hi - lo;
            const double qm = lo + 0.5 * w;
            const double fm = f(qm);
            const double f1 = f(lo + 0.25 * w);
            const double f3 = f(lo + 0.75 * w);
            auto chord = [&](double t) { return flo + t * (fhi - flo); };
            const bool linear = std::abs(fm - chord(0.5)) <= tol && std::abs(f1 - chord(0.25)) <= tol &&
                                std::abs(f3 - chord(0.75)) <= tol;
            if (linear || w < min_width || depth > 60) {
                if (!linear) {
                    px.push_back(qm);
                    py.push_back(fm);
                }
                px.push_back(hi);
                py.push_back(fhi);
                return;
            }
            refine(lo, qm, flo, fm, depth + 1);
            refine(qm, hi, fm, fhi, depth + 1);
        };
    for (std::size_t i = 1; i < grid.size(); ++i) {
        refine(grid[i - 1], grid[i], gv[i - 1], gv[i], 0);
    }

    // Drop points where the slope does not change.
    std::vector<double> bx{px[0]};
    std::vector<double> by{py[0]};
    for (std::size_t i = 1; i + 1 < px.size(); ++i) {
        const double s_in = (py[i] - by.back()) / (px[i] - bx.back());
        const double s_out = (py[i + 1] - py[i]) / (px[i + 1] - px[i]);
        const double ref = std::max({1.0, std::abs(s_in), std::abs(s_out)});
        if (std::abs(s_out - s_in) > 1e-6 * ref && px[i] - bx.back() >= kMinBreakGap &&
            px.back() - px[i] >= kMinBreakGap) {
            bx.push_back(px[i]);
            by.push_back(py[i]);
        }
    }
    bx.push_back(px.back());
    by.push_back(py.back());
    return CplFunction(std::move(bx), std::move(by));
}

std::string serialize_cpl(const CplFunction& f) {
    std::ostringstream os;
    auto write = [&os](const std::vector<double>& v) {
        os << '[';
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) os << ',';
            os << format_real(v[i]);
        }
        os << ']';
    };
    os << "{\"breaks\":";
    write(f.breaks());
    os << ",\"values\":";
    write(f.values());
    os << "}\n";
    return os.str();
}

CplFunction deserialize_cpl(std::string_view text) {
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed CPL document: ") + e.what(), e.byte);
    }
    auto read = [&](const char* key) {
        if (!doc.is_object() || !doc.contains(key) || !doc[key].is_array()) {
            throw ParseError(std::string("CPL document needs array '") + key + "'", text.size());
        }
        std::vector<double> out;
        for (const auto& v : doc[key]) {
            if (!v.is_number()) throw ParseError(std::string("'") + key + "' must hold numbers", text.size());
            out.push_back(v.get<double>());
        }
        return out;
    };
    return CplFunction(read("breaks"), read("values"));
}

}  // namespace nlapprox
