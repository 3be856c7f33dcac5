#include <doctest.h>

#include <cmath>
#include <random>

#include "nlapprox/cpl.hpp"
#include "nlapprox/delta.hpp"
#include "nlapprox/errors.hpp"
#include "nlapprox/metrics.hpp"
#include "nlapprox/theorem.hpp"

using namespace nlapprox;

namespace {

GridSpec grid(std::size_t d, std::size_t p) {
    GridSpec g;
    g.d = d;
    g.points_per_axis = p;
    return g;
}

}  // namespace

TEST_CASE("closed-form bounds") {
    CHECK(theorem_bound(1, 1.0, 1.0, 2) == 0.5);
    CHECK(theorem_bound(1, 1.0, 1.0, 4) == 0.125);
    CHECK(theorem_bound(1, 1.0, 1.0, 8) == 0.03125);
    CHECK(theorem_bound(1, 1.0, 1.0, 16) == 0.0078125);
    CHECK(theorem_bound(2, 1.0, 1.0, 4) == doctest::Approx(2.0 * 2.0 * std::sqrt(2.0) / 4.0));
}

TEST_CASE("d1 grid") {
    const auto x = d1_grid(2, 0.1);
    const std::vector<double> want{0.0, 0.25, 0.4, 0.5, 0.75, 0.9, 1.0};
    REQUIRE(x.size() == want.size());
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(x[i] == doctest::Approx(want[i]));
}

TEST_CASE("theorem_d1 on zero, cone and linear targets") {
    const DeltaPolicy policy;
    SUBCASE("zero") {
        const HolderTarget t = holder_family("zero", 1, 1.0, 1.0);
        const Approximant ap = theorem_d1(t, 3, policy);
        for (int q = 0; q <= 1000; ++q) CHECK(std::abs(evaluate(ap.net, q / 1000.0)) <= 1e-9);
    }
    SUBCASE("cone N=4") {
        const HolderTarget t = holder_family("cone", 1, 1.0, 1.0);
        const Approximant ap = theorem_d1(t, 4, policy);
        CHECK(ap.net.widths() == WidthVec({8, 9}));
        CHECK(ap.bound == 0.125);
        CHECK(l1_error(t.f, ap.net, grid(1, 100000)) <= 0.125);
    }
    SUBCASE("linear N=4: error only from the slivers") {
        const HolderTarget t = holder_family("linear", 1, 1.0, 1.0);
        const Approximant ap = theorem_d1(t, 4, policy);
        const double e = l1_error(t.f, ap.net, grid(1, 1000000));
        CHECK(e <= 0.125);
        const std::vector<double> xs = d1_grid(4, ap.delta.delta);
        std::vector<double> ys;
        for (double x : xs) ys.push_back(x + 1.0);
        const Lemma2Plan plan(SampleSet(xs, ys, Lemma2Shape{4, 4}), 4, 4);
        CHECK(e <= 4.0 * ap.delta.delta * plan.sup_bound());
    }
    SUBCASE("cone alpha=0.5 N=8, exact L1 through the extracted CPL") {
        const HolderTarget t = holder_family("cone", 1, 0.5, 1.0);
        const Approximant ap = theorem_d1(t, 8, policy);
        CHECK(l1_error(t.f, ap.net, grid(1, 1000000)) <= ap.bound);
    }
}

TEST_CASE("theorem_d1 respects nu and f(0)") {
    // f = 3 |x - 1/2| + 2 has nu = 3 and f(0) = 3.5.
    HolderTarget t;
    t.name = "scaled";
    t.d = 1;
    t.alpha = 1.0;
    t.nu = 3.0;
    t.f = [](std::span<const double> x) { return 3.0 * std::abs(x[0] - 0.5) + 2.0; };
    const Approximant ap = theorem_d1(t, 4, DeltaPolicy{});
    const double e = l1_error(t.f, ap.net, grid(1, 200000));
    CHECK(e <= theorem_bound(1, 1.0, 3.0, 4));
    // Same as building on the normalized target and rescaling.
    const HolderTarget unit = holder_family("cone", 1, 1.0, 1.0);
    const Approximant base = theorem_d1(unit, 4, DeltaPolicy{});
    const ReluNetwork rescaled = affine_post(base.net, 3.0, 2.0);
    for (int q = 0; q <= 200; ++q) {
        const double x = q / 200.0;
        CHECK(evaluate(ap.net, x) == doctest::Approx(evaluate(rescaled, x)).epsilon(1e-9));
    }
}

TEST_CASE("theorem_d1 rejects certificate violations") {
    HolderTarget t;
    t.name = "steep";
    t.d = 1;
    t.alpha = 1.0;
    t.nu = 1.0;
    t.f = [](std::span<const double> x) { return -5.0 * x[0]; };
    CHECK_THROWS_AS(theorem_d1(t, 2, DeltaPolicy{}), CertificateError);
    CHECK_THROWS_AS(theorem_d1(holder_family("cone", 2, 1.0, 1.0), 2, DeltaPolicy{}), PreconditionError);
    CHECK_THROWS_AS(theorem_d1(holder_family("cone", 1, 1.0, 1.0), 0, DeltaPolicy{}), PreconditionError);
}

TEST_CASE("psi0 staircase") {
    const double delta = 0.01;
    const ReluNetwork p = psi0(3, delta);
    CHECK(p.widths() == WidthVec({6}));
    CHECK(evaluate(p, 0.0) == doctest::Approx(0.0));
    CHECK(evaluate(p, 1.0 / 3.0) == doctest::Approx(1.0));
    CHECK(evaluate(p, 2.0 / 3.0) == doctest::Approx(2.0));
    CHECK(evaluate(p, 1.0) == doctest::Approx(2.0));
    CHECK(std::abs(evaluate(p, 1.0 / 3.0 - delta)) <= 1e-12);
    CHECK(evaluate(p, 1.0 / 3.0 - delta / 2) == doctest::Approx(0.5));
    CHECK_THROWS_AS(psi0(3, 0.0), PreconditionError);
    CHECK_THROWS_AS(psi0(3, 1.0 / 6.0), PreconditionError);
}

TEST_CASE("projection is constant on each cell") {
    const std::size_t n = 4;
    const double delta = 0.01;
    const ReluNetwork psi = projection_network(n, 2, delta);
    CHECK(psi.widths() == WidthVec({2 * n * 2}));
    const std::vector<double> x{2.0 / 4 + 0.1, 3.0 / 4 + 0.1};
    CHECK(std::abs(evaluate(psi, x) - 0.6875) <= 1e-12);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0 / n - delta);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            const double want = static_cast<double>(a) / n + static_cast<double>(b) / (n * n);
            for (int r = 0; r < 10; ++r) {
                const std::vector<double> p{a / 4.0 + u(rng), b / 4.0 + u(rng)};
                CHECK(std::abs(evaluate(psi, p) - want) <= 1e-12);
            }
        }
    }
}

TEST_CASE("grid parameters") {
    CHECK(grid_cells_per_axis(4, 2) == 4);
    CHECK(grid_cells_per_axis(9, 2) == 9);
    CHECK(grid_cells_per_axis(8, 3) == 4);  // 4^3 = 64 <= 64
    CHECK(grid_cells_per_axis(7, 3) == 3);  // 27 <= 49 < 64
    CHECK(grid_cells_per_axis(1, 2) == 1);
    CHECK(two_layer_capacity(4, 2) == 4);
    CHECK(two_layer_capacity(3, 3) == 6);  // ceil(sqrt 27)
}

TEST_CASE("theorem_dd zero target is exactly zero") {
    const HolderTarget t = holder_family("zero", 2, 1.0, 1.0);
    const Approximant ap = theorem_dd(t, 4, DeltaPolicy{});
    CHECK(linf_error(t.f, ap.net, grid(2, 512)) <= 1e-9);
}

TEST_CASE("theorem_dd cone d=2 N=4 within bound and width limit") {
    const HolderTarget t = holder_family("cone", 2, 1.0, 1.0);
    const Approximant ap = theorem_dd(t, 4, DeltaPolicy{});
    CHECK(ap.grid_n == 4);
    CHECK(ap.net.widths().fits_within(WidthVec({16, 10, 11})));
    CHECK(l1_error(t.f, ap.net, grid(2, 1024)) <= 2.0 * 2.0 * std::sqrt(2.0) / 4.0);
}

TEST_CASE("theorem_dd d=3") {
    const HolderTarget t = holder_family("cone", 3, 1.0, 1.0);
    const Approximant ap = theorem_dd(t, 8, DeltaPolicy{});
    CHECK(ap.grid_n == 4);
    CHECK(ap.net.widths().fits_within(ap.width_limit));
    CHECK(l1_error(t.f, ap.net, grid(3, 64)) <= ap.bound);
}

TEST_CASE("theorem_dd errors") {
    CHECK_THROWS_AS(theorem_dd(holder_family("cone", 2, 1.0, 1.0), 1, DeltaPolicy{}), DegenerateGridError);
    CHECK_THROWS_AS(theorem_dd(holder_family("cone", 4, 1.0, 1.0), 8, DeltaPolicy{}), ResolutionError);
    CHECK_THROWS_AS(theorem_dd(holder_family("cone", 2, 1.0, 1.0), 17, DeltaPolicy{}), ResolutionError);
    CHECK_THROWS_AS(theorem_dd(holder_family("cone", 1, 1.0, 1.0), 4, DeltaPolicy{}), PreconditionError);
}

TEST_CASE("construct dispatches on dimension") {
    CHECK(construct(holder_family("cone", 1, 1.0, 1.0), 2, {}).net.widths() == WidthVec({4, 5}));
    CHECK(construct(holder_family("cone", 2, 1.0, 1.0), 4, {}).net.widths().depth() == 3);
}

TEST_CASE("one-layer baseline") {
    const HolderTarget t = holder_family("cone", 1, 0.5, 1.0);
    const ReluNetwork b = one_layer_baseline(t, 5);
    CHECK(b.widths() == WidthVec({5}));
    for (int i = 0; i <= 5; ++i) CHECK(evaluate(b, i / 5.0) == doctest::Approx(t.at(i / 5.0)));
}

TEST_CASE("paper-sufficient delta") {
    DeltaContext ctx;
    ctx.d = 1;
    ctx.alpha = 1.0;
    ctx.N = 2;
    ctx.min_grid_gap = 0.25;
    DeltaPolicy p;
    p.mode = DeltaMode::SufficientBound;
    const DeltaChoice c = choose_delta(p, ctx);
    CHECK(std::abs(c.delta - 0.25 / 76.0) <= 1e-15);
    CHECK_FALSE(c.clamped);
    CHECK(c.delta < 0.125);

    ctx.N = 16;
    ctx.min_grid_gap = 1.0 / 256;
    const DeltaChoice big = choose_delta(p, ctx);
    CHECK(big.clamped);
    CHECK(big.delta == 1e-12);
    CHECK(std::exp(big.exact_log) == doctest::Approx(std::pow(16.0, -2.0) / (16.0 * (2.0 + 6.0 * std::tgamma(18.0)))));
    CHECK(std::exp(big.exact_log) < 1e-18);
}

TEST_CASE("empirical delta") {
    DeltaContext ctx;
    ctx.min_grid_gap = 0.25;
    int calls = 0;
    ctx.measure = [&](double delta) {
        ++calls;
        return delta;
    };
    DeltaPolicy p;
    p.target = 0.01;
    const DeltaChoice c = choose_delta(p, ctx);
    CHECK(c.delta <= 0.01);
    CHECK(c.delta > 0.005);
    CHECK(c.delta < 0.125);
    CHECK(calls == static_cast<int>(c.iterations));

    ctx.measure = [](double) { return 0.0; };
    const DeltaChoice first = choose_delta(DeltaPolicy{}, ctx);
    CHECK(first.iterations == 1);
    CHECK(first.delta == std::nextafter(0.125, 0.0));

    ctx.measure = [](double) { return 1.0; };
    p.target = 0.5;
    CHECK_THROWS_AS(choose_delta(p, ctx), InfeasibleError);
}

TEST_CASE("delta policy validation") {
    DeltaPolicy p;
    p.floor = 0.0;
    CHECK_THROWS_AS(p.validate(), ParameterError);
    p = DeltaPolicy{};
    p.shrink = 1.0;
    CHECK_THROWS_AS(p.validate(), ParameterError);
    p = DeltaPolicy{};
    p.target = -1.0;
    CHECK_THROWS_AS(p.validate(), ParameterError);
    CHECK(delta_mode_from_string("paper-sufficient") == DeltaMode::SufficientBound);
    CHECK(to_string(DeltaMode::EmpiricalShrink) == "empirical-shrink");
    CHECK_THROWS_AS(delta_mode_from_string("fast"), ParameterError);
}

TEST_CASE("holder spot check") {
    const HolderTarget cone = holder_family("cone", 2, 1.0, 2.0);
    const HolderSpotCheck s = spot_check_holder(cone, 10000, 1);
    CHECK(s.pairs == 10000);
    CHECK(s.violations == 0);
    CHECK(s.worst_ratio <= 1.0 + 1e-12);

    HolderTarget bad = holder_family("cone", 1, 1.0, 1.0);
    bad.nu = 0.5;
    CHECK(spot_check_holder(bad, 1000, 1).violations > 0);
}
