#include "nlapprox/theorem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nlapprox/cpl.hpp"
#include "nlapprox/errors.hpp"

namespace nlapprox {

namespace {

constexpr std::size_t kSliverProbes = 65;
constexpr std::size_t kMaxGridDim = 3;
constexpr std::size_t kMaxGridCells = 16;

std::size_t ipow(std::size_t base, std::size_t exp) {
    std::size_t r = 1;
    while (exp--) r *= base;
    return r;
}

void require_finite_sample(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw CertificateError(std::string("target returned a nonfinite value at ") + what);
    }
}

}  // namespace

double theorem_bound(std::size_t d, double alpha, double nu, std::size_t N) {
    const double Nd = static_cast<double>(N);
    if (d == 1) {
        return 2.0 * nu * std::pow(Nd, -2.0 * alpha);
    }
    const double dd = static_cast<double>(d);
    return 2.0 * std::pow(2.0 * std::sqrt(dd), alpha) * nu * std::pow(Nd, -2.0 * alpha / dd);
}

std::vector<double> d1_grid(std::size_t N, double delta) {
    if (N == 0) {
        throw PreconditionError("N must be positive");
    }
    const double NN = static_cast<double>(N * N);
    std::vector<double> x;
    x.reserve(N * (N + 1) + 1);
    for (std::size_t j = 0; j < N; ++j) {
        for (std::size_t k = 0; k < N; ++k) {
            x.push_back(static_cast<double>(j * N + k) / NN);
        }
        x.push_back(static_cast<double>(j + 1) / static_cast<double>(N) - delta);
    }
    x.push_back(1.0);
    return x;
}

Approximant theorem_d1(const HolderTarget& target, std::size_t N, const DeltaPolicy& policy) {
    target.validate();
    if (target.d != 1) {
        throw PreconditionError("theorem_d1 needs a 1-D target");
    }
    if (N == 0) {
        throw PreconditionError("N must be positive");
    }
    policy.validate();
    const double nu = target.nu;
    const double f0 = target.at(0.0);
    require_finite_sample(f0, "x = 0");
    // Normalized, shifted target: (f - f(0))/nu + 1, in [0, 2] under the certificate.
    auto shifted = [&](double x) { return (target.at(x) - f0) / nu + 1.0; };

    auto build = [&](double delta) {
        const std::vector<double> xs = d1_grid(N, delta);
        std::vector<double> ys(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) {
            ys[i] = shifted(xs[i]);
            require_finite_sample(ys[i], "a grid point");
            if (ys[i] < 0.0) {
                throw CertificateError("shifted target is negative at x = " + format_real(xs[i]) +
                                       "; the (alpha, nu) certificate does not hold");
            }
        }
        Lemma2Plan plan(SampleSet(xs, ys, Lemma2Shape{N, N}), N, N);
        return std::pair{lemma2_interpolant(plan).net, std::move(plan)};
    };

    DeltaContext ctx;
    ctx.d = 1;
    ctx.alpha = target.alpha;
    ctx.N = N;
    ctx.min_grid_gap = 1.0 / static_cast<double>(N * N);
    ctx.measure = [&](double delta) {
        const auto [net, plan] = build(delta);
        Evaluator ev(net);
        double total = 0.0;
        for (std::size_t i : plan.i1()) {
            const double lo = plan.samples()[i - 1].x;
            const double hi = plan.samples()[i].x;
            double worst = 0.0;
            for (std::size_t p = 0; p < kSliverProbes; ++p) {
                const double x = lo + (hi - lo) * static_cast<double>(p) / static_cast<double>(kSliverProbes - 1);
                worst = std::max(worst, std::abs(shifted(x) - ev(std::span<const double>(&x, 1))));
            }
            total += (hi - lo) * worst;
        }
        return total;
    };

    const DeltaChoice choice = choose_delta(policy, ctx);
    auto [net, plan] = build(choice.delta);
    return Approximant{affine_post(net, nu, f0 - nu), choice, theorem_bound(1, target.alpha, nu, N),
                       WidthVec({2 * N, 2 * N + 1}), 0};
}

ReluNetwork psi0(std::size_t n, double delta) {
    if (n == 0) {
        throw PreconditionError("psi0 needs n >= 1");
    }
    const double nd = static_cast<double>(n);
    if (!(delta > 0.0 && delta < 0.5 / nd)) {
        throw PreconditionError("psi0 needs 0 < delta < 1/(2n)");
    }
    std::vector<Sample> pts{{0.0, 0.0}};
    for (std::size_t i = 1; i <= n; ++i) {
        const double step = static_cast<double>(i - 1);
        const double knot = i == n ? 1.0 : static_cast<double>(i) / nd;
        pts.push_back({knot - delta, step});
        pts.push_back({knot, i == n ? step : static_cast<double>(i)});
    }
    return lemma1_interpolant(SampleSet(std::move(pts)));
}

ReluNetwork projection_network(std::size_t n, std::size_t d, double delta) {
    if (d == 0) {
        throw PreconditionError("projection needs d >= 1");
    }
    const ReluNetwork base = psi0(n, delta);
    const AffineLayer& bh = base.layers()[0];
    const AffineLayer& bo = base.layers()[1];
    const std::size_t w = bh.out_dim();

    AffineLayer hidden;
    hidden.weight = Matrix(w * d, d);
    hidden.bias.resize(w * d);
    AffineLayer out;
    out.weight = Matrix(1, w * d);
    out.bias = {0.0};
    double scale = 1.0;
    for (std::size_t i = 0; i < d; ++i) {
        scale /= static_cast<double>(n);
        for (std::size_t j = 0; j < w; ++j) {
            hidden.weight(i * w + j, i) = bh.weight(j, 0);
            hidden.bias[i * w + j] = bh.bias[j];
            out.weight(0, i * w + j) = scale * bo.weight(0, j);
        }
        out.bias[0] += scale * bo.bias[0];
    }
    return ReluNetwork(d, {std::move(hidden), std::move(out)});
}

std::size_t grid_cells_per_axis(std::size_t N, std::size_t d) {
    const std::size_t limit = N * N;
    std::size_t n = 1;
    while (ipow(n + 1, d) <= limit) ++n;
    return n;
}

std::size_t two_layer_capacity(std::size_t n, std::size_t d) {
    const std::size_t cells = ipow(n, d);
    std::size_t c = 0;
    while (c * c < cells) ++c;
    return c;
}

Approximant theorem_dd(const HolderTarget& target, std::size_t N, const DeltaPolicy& policy) {
    target.validate();
    const std::size_t d = target.d;
    if (d < 2) {
        throw PreconditionError("theorem_dd needs d >= 2");
    }
    if (N == 0) {
        throw PreconditionError("N must be positive");
    }
    policy.validate();
    if (d > kMaxGridDim) {
        throw ResolutionError("d = " + std::to_string(d) + " exceeds the supported dimension 3");
    }
    const std::size_t n = grid_cells_per_axis(N, d);
    if (n < 2) {
        throw DegenerateGridError("N = " + std::to_string(N) + " gives a single cell per axis in d = " +
                                  std::to_string(d));
    }
    if (n > kMaxGridCells) {
        throw ResolutionError("n = " + std::to_string(n) + " cells per axis exceeds the supported 16");
    }
    const std::size_t cap = two_layer_capacity(n, d);
    const std::size_t cells = ipow(n, d);
    const double nd = static_cast<double>(n);
    const double sqrt_d = std::sqrt(static_cast<double>(d));
    const double nu = target.nu;

    std::vector<double> origin(d, 0.0);
    const double f0 = target(origin);
    require_finite_sample(f0, "the origin");

    // One-dimensional samples (sum theta_i n^{-i}, fbar(theta/n)), theta in
    // lexicographic order, which is increasing order of the abscissa.
    std::vector<double> xs;
    std::vector<double> ys;
    xs.reserve(cap * (cap + 1) + 1);
    ys.reserve(cap * (cap + 1) + 1);
    std::vector<double> point(d);
    for (std::size_t idx = 0; idx < cells; ++idx) {
        std::size_t rest = idx;
        for (std::size_t i = d; i-- > 0;) {
            point[i] = static_cast<double>(rest % n) / nd;
            rest /= n;
        }
        const double v = (target(point) - f0) / nu + sqrt_d;
        require_finite_sample(v, "a grid vertex");
        if (v < 0.0) {
            throw CertificateError("shifted target is negative at a grid vertex; the (alpha, nu) certificate does not hold");
        }
        xs.push_back(static_cast<double>(idx) / static_cast<double>(cells));
        ys.push_back(v);
    }
    const double t_last = xs.back();
    const auto [fmin_it, fmax_it] = std::minmax_element(ys.begin(), ys.end());
    // Any point of a cell lies within sqrt(d)/n of its lower corner.
    const double cell_var = std::pow(sqrt_d / nd, target.alpha);
    const double f_lo = *fmin_it - cell_var;
    const double f_hi = *fmax_it + cell_var;

    // Pad up to cap(cap+1)+1 points inside (t_last, 1), then the sample (1, 0).
    const std::size_t capacity = cap * (cap + 1) + 1;
    const std::size_t surplus = capacity - (cells + 1);
    const double y_last = ys.back();
    for (std::size_t q = 1; q <= surplus; ++q) {
        const double frac = static_cast<double>(q) / static_cast<double>(surplus + 1);
        xs.push_back(t_last + (1.0 - t_last) * frac);
        ys.push_back(y_last * (1.0 - frac));
    }
    xs.push_back(1.0);
    ys.push_back(0.0);

    Lemma2Plan plan(SampleSet(xs, ys, Lemma2Shape{cap, cap}), cap, cap);
    const ReluNetwork outer = lemma2_interpolant(plan).net;

    // Range of the 1-D interpolant over the image of psi.
    const CplFunction outer_cpl = cpl_from_net_1d(outer, 0.0, t_last, 4 * capacity + 64);
    const auto [pmin_it, pmax_it] = std::ranges::minmax_element(outer_cpl.values());
    const double sliver_gap = std::max(f_hi - *pmin_it, *pmax_it - f_lo);

    DeltaContext ctx;
    ctx.d = d;
    ctx.alpha = target.alpha;
    ctx.N = N;
    ctx.n = n;
    ctx.capacity = cap;
    ctx.min_grid_gap = 1.0 / nd;
    ctx.measure = [&](double delta) {
        const double measure_h1 = 1.0 - std::pow(1.0 - nd * delta, static_cast<double>(d));
        return measure_h1 * sliver_gap;
    };
    const DeltaChoice choice = choose_delta(policy, ctx);

    const ReluNetwork inner = projection_network(n, d, choice.delta);
    ReluNetwork net = affine_post(compose(outer, inner), nu, f0 - nu * sqrt_d);
    return Approximant{std::move(net), choice, theorem_bound(d, target.alpha, nu, N),
                       WidthVec({2 * d * n, 2 * N + 2, 2 * N + 3}), n};
}

Approximant construct(const HolderTarget& target, std::size_t N, const DeltaPolicy& policy) {
    return target.d == 1 ? theorem_d1(target, N, policy) : theorem_dd(target, N, policy);
}

ReluNetwork one_layer_baseline(const HolderTarget& target, std::size_t N) {
    target.validate();
    if (target.d != 1) {
        throw PreconditionError("one_layer_baseline needs a 1-D target");
    }
    if (N == 0) {
        throw PreconditionError("N must be positive");
    }
    std::vector<Sample> pts(N + 1);
    for (std::size_t i = 0; i <= N; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(N);
        pts[i] = {x, target.at(x)};
    }
    return lemma1_interpolant(SampleSet(std::move(pts)));
}

}  // namespace nlapprox
