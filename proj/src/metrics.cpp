#include "nlapprox/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nlapprox/errors.hpp"
#include "nlapprox/kernels.hpp"

namespace nlapprox {

namespace {

constexpr std::size_t kBlock = 4096;

struct AxisRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

AxisRule axis_rule(const GridSpec& grid) {
    const std::size_t p = grid.points_per_axis;
    AxisRule r{std::vector<double>(p), std::vector<double>(p)};
    const double pd = static_cast<double>(p);
    if (grid.rule == QuadratureRule::Midpoint) {
        for (std::size_t k = 0; k < p; ++k) {
            r.nodes[k] = (static_cast<double>(k) + 0.5) / pd;
            r.weights[k] = 1.0 / pd;
        }
    } else {
        const double h = 1.0 / (pd - 1.0);
        for (std::size_t k = 0; k < p; ++k) {
            r.nodes[k] = static_cast<double>(k) * h;
            r.weights[k] = (k == 0 || k + 1 == p) ? 0.5 * h : h;
        }
        r.nodes.back() = 1.0;
    }
    return r;
}

// Fill x with the coordinates of flat grid index idx (last axis fastest) and
// return the tensor-product weight.
double grid_point(const AxisRule& rule, std::size_t d, std::size_t idx, std::span<double> x) {
    const std::size_t p = rule.nodes.size();
    double w = 1.0;
    for (std::size_t i = d; i-- > 0;) {
        const std::size_t k = idx % p;
        idx /= p;
        x[i] = rule.nodes[k];
        w *= rule.weights[k];
    }
    return w;
}

void check_dims(const ReluNetwork& net, const GridSpec& grid) {
    grid.validate();
    if (net.input_dim() != grid.d) {
        throw ShapeError("network input_dim " + std::to_string(net.input_dim()) + " differs from grid dimension " +
                         std::to_string(grid.d));
    }
}

}  // namespace

void GridSpec::validate() const {
    if (d == 0) {
        throw ParameterError("grid dimension must be >= 1");
    }
    if (points_per_axis < 2) {
        throw ParameterError("grid needs at least 2 points per axis");
    }
    (void)total_points();
}

std::size_t GridSpec::total_points() const {
    std::size_t total = 1;
    for (std::size_t i = 0; i < d; ++i) {
        if (total > cap / points_per_axis) {
            throw ResourceError("grid of " + std::to_string(points_per_axis) + "^" + std::to_string(d) +
                                " points exceeds the cap of " + std::to_string(cap));
        }
        total *= points_per_axis;
    }
    return total;
}

GridSpec default_grid(std::size_t d) {
    GridSpec g;
    g.d = d;
    g.points_per_axis = d == 1 ? 1'000'000 : d == 2 ? 2048 : 200;
    return g;
}

double l1_error(const ScalarField& f, const ReluNetwork& net, const GridSpec& grid) {
    check_dims(net, grid);
    const std::size_t total = grid.total_points();
    const AxisRule rule = axis_rule(grid);
    const std::size_t blocks = (total + kBlock - 1) / kBlock;
    std::vector<double> block_sums(blocks, 0.0);
    const auto nblocks = static_cast<std::ptrdiff_t>(blocks);
#pragma omp parallel
    {
        Evaluator ev(net);
        std::vector<double> x(grid.d);
#pragma omp for schedule(dynamic, 4)
        for (std::ptrdiff_t b = 0; b < nblocks; ++b) {
            const std::size_t begin = static_cast<std::size_t>(b) * kBlock;
            const std::size_t end = std::min(total, begin + kBlock);
            double s = 0.0;
            for (std::size_t idx = begin; idx < end; ++idx) {
                const double w = grid_point(rule, grid.d, idx, x);
                s += w * std::abs(f(x) - ev(x));
            }
            block_sums[static_cast<std::size_t>(b)] = s;
        }
    }
    return pairwise_sum(block_sums);
}

double l1_error_serial(const ScalarField& f, const ReluNetwork& net, const GridSpec& grid) {
    check_dims(net, grid);
    const std::size_t total = grid.total_points();
    const AxisRule rule = axis_rule(grid);
    Evaluator ev(net);
    std::vector<double> x(grid.d);
    double s = 0.0;
    for (std::size_t idx = 0; idx < total; ++idx) {
        const double w = grid_point(rule, grid.d, idx, x);
        s += w * std::abs(f(x) - ev(x));
    }
    return s;
}

double linf_error(const ScalarField& f, const ReluNetwork& net, const GridSpec& grid) {
    check_dims(net, grid);
    const std::size_t total = grid.total_points();
    const AxisRule rule = axis_rule(grid);
    const auto count = static_cast<std::ptrdiff_t>(total);
    double worst = 0.0;
#pragma omp parallel reduction(max : worst)
    {
        Evaluator ev(net);
        std::vector<double> x(grid.d);
#pragma omp for schedule(static)
        for (std::ptrdiff_t i = 0; i < count; ++i) {
            grid_point(rule, grid.d, static_cast<std::size_t>(i), x);
            worst = std::max(worst, std::abs(f(x) - ev(x)));
        }
    }
    return worst;
}

double linf_error_serial(const ScalarField& f, const ReluNetwork& net, const GridSpec& grid) {
    check_dims(net, grid);
    const std::size_t total = grid.total_points();
    const AxisRule rule = axis_rule(grid);
    Evaluator ev(net);
    std::vector<double> x(grid.d);
    double worst = 0.0;
    for (std::size_t idx = 0; idx < total; ++idx) {
        grid_point(rule, grid.d, idx, x);
        worst = std::max(worst, std::abs(f(x) - ev(x)));
    }
    return worst;
}

std::vector<std::string> holder_family_names() { return {"cone", "linear", "zero"}; }

HolderTarget holder_family(const std::string& name, std::size_t d, double alpha, double nu) {
    if (d == 0) {
        throw ParameterError("target dimension must be >= 1");
    }
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw ParameterError("alpha must lie in (0,1], got " + format_real(alpha));
    }
    if (!(nu > 0.0) || !std::isfinite(nu)) {
        throw ParameterError("nu must be positive and finite");
    }
    HolderTarget t;
    t.name = name;
    t.d = d;
    t.alpha = alpha;
    t.nu = nu;
    if (name == "cone") {
        t.f = [nu, alpha](std::span<const double> x) {
            double r2 = 0.0;
            for (double v : x) r2 += (v - 0.5) * (v - 0.5);
            return nu * std::pow(std::sqrt(r2), alpha);
        };
    } else if (name == "linear") {
        if (alpha != 1.0) {
            throw CertificateError("the linear family is only Hoelder with alpha = 1");
        }
        t.f = [nu](std::span<const double> x) { return nu * x[0]; };
    } else if (name == "zero") {
        t.f = [](std::span<const double>) { return 0.0; };
    } else {
        throw RegistryError("unknown target family '" + name + "' (known: cone, linear, zero)");
    }
    return t;
}

RateFit rate_fit(const std::vector<std::pair<std::size_t, double>>& pairs) {
    if (pairs.size() < 2) {
        throw ShapeError("rate_fit needs at least two (N, error) pairs");
    }
    for (const auto& [N, e] : pairs) {
        if (!(e > 0.0) || !std::isfinite(e)) {
            throw DomainError("rate_fit needs positive finite errors");
        }
        if (N == 0) {
            throw DomainError("rate_fit needs positive N");
        }
    }
    const double count = static_cast<double>(pairs.size());
    double mx = 0.0;
    double my = 0.0;
    for (const auto& [N, e] : pairs) {
        mx += std::log(static_cast<double>(N));
        my += std::log(e);
    }
    mx /= count;
    my /= count;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (const auto& [N, e] : pairs) {
        const double dx = std::log(static_cast<double>(N)) - mx;
        const double dy = std::log(e) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) {
        throw DomainError("rate_fit needs at least two distinct N");
    }
    RateFit fit;
    fit.pairs = pairs;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0;
    for (const auto& [N, e] : pairs) {
        const double r = std::log(e) - (fit.intercept + fit.slope * std::log(static_cast<double>(N)));
        ss_res += r * r;
    }
    fit.r_squared = syy == 0.0 ? 1.0 : 1.0 - ss_res / syy;
    return fit;
}

namespace {

std::string csv_quote(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"') out += '"';
        if (c != '\n') out += c;
    }
    return out;
}

}  // namespace

std::string MeasurementRecord::csv_header() { return "name,d,alpha,nu,N,widthvec,l1,linf,bound,pass,delta,status"; }

std::string MeasurementRecord::csv_row() const {
    return name + ',' + std::to_string(d) + ',' + format_real(alpha) + ',' + format_real(nu) + ',' +
           std::to_string(N) + ",\"" + widthvec + "\"," + format_real(l1) + ',' + format_real(linf) + ',' +
           format_real(bound) + ',' + (pass ? "true" : "false") + ',' + format_real(delta) + ",\"" + csv_quote(status) + '"';
}

}  // namespace nlapprox
