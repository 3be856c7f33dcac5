#include "nlapprox/corollary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "nlapprox/errors.hpp"
#include "nlapprox/lemma2.hpp"

namespace nlapprox {

namespace {

constexpr std::size_t kExtractionProbes = 2048;

// Break points of g restricted to [0,1], split until there are exactly
// `pieces` pieces.
std::vector<double> padded_breaks(const CplFunction& g, std::size_t pieces) {
    std::vector<double> b{0.0};
    for (double x : g.breaks()) {
        if (x > 0.0 && x < 1.0) b.push_back(x);
    }
    b.push_back(1.0);
    if (b.size() - 1 > pieces) {
        throw PreconditionError("g has " + std::to_string(b.size() - 1) + " pieces on [0,1], capacity is " +
                                std::to_string(pieces));
    }
    while (b.size() - 1 < pieces) {
        std::size_t widest = 0;
        for (std::size_t i = 1; i + 1 < b.size(); ++i) {
            if (b[i + 1] - b[i] > b[widest + 1] - b[widest]) widest = i;
        }
        b.insert(b.begin() + static_cast<std::ptrdiff_t>(widest) + 1, 0.5 * (b[widest] + b[widest + 1]));
    }
    return b;
}

}  // namespace

CplRealization corollary32_check(const CplFunction& g, std::size_t m, std::size_t n, double epsilon,
                                 const DeltaPolicy& policy) {
    if (m == 0 || n == 0) {
        throw PreconditionError("corollary32_check needs m, n >= 1");
    }
    if (!(epsilon > 0.0)) {
        throw PreconditionError("epsilon must be positive");
    }
    const std::vector<double> b = padded_breaks(g, m * n + 1);
    double shift = std::numeric_limits<double>::infinity();
    for (double x : b) shift = std::min(shift, g(x));

    double min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < b.size(); ++i) min_gap = std::min(min_gap, b[i] - b[i - 1]);

    std::vector<double> gb;
    for (double x : b) gb.push_back(g(x));
    const CplFunction reference(b, gb);

    auto build = [&](double delta) {
        std::vector<double> xs;
        for (std::size_t j = 0; j < m; ++j) {
            for (std::size_t k = 0; k < n; ++k) xs.push_back(b[j * n + k]);
            xs.push_back(j + 1 < m ? b[(j + 1) * n] - delta : b[m * n]);
        }
        xs.push_back(b[m * n + 1]);
        std::vector<double> ys(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) ys[i] = std::max(0.0, g(xs[i]) - shift);
        Lemma2Plan plan(SampleSet(xs, ys, Lemma2Shape{m, n}), m, n);
        ReluNetwork net = affine_post(lemma2_interpolant(plan).net, 1.0, shift);
        const CplFunction extracted = cpl_from_net_1d(net, 0.0, 1.0, kExtractionProbes);
        const double err = exact_l1_cpl(reference, extracted, 0.0, 1.0);
        return std::pair{std::move(net), err};
    };

    DeltaPolicy shrink = policy;
    shrink.mode = DeltaMode::EmpiricalShrink;
    shrink.target = epsilon;
    DeltaContext ctx;
    ctx.min_grid_gap = min_gap;
    std::optional<std::pair<ReluNetwork, double>> last;
    ctx.measure = [&](double delta) {
        last.emplace(build(delta));
        return last->second;
    };
    const DeltaChoice choice = choose_delta(shrink, ctx);
    return CplRealization{std::move(last->first), last->second, choice.delta};
}

}  // namespace nlapprox
