#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "nlapprox/cpl.hpp"
#include "nlapprox/errors.hpp"

using namespace nlapprox;

namespace {

SampleSet random_samples(std::mt19937_64& rng, std::size_t count, double ylo = -1.0) {
    std::uniform_real_distribution<double> gap(1e-3, 0.1);
    std::uniform_real_distribution<double> val(ylo, 1.0);
    std::vector<Sample> pts;
    double x = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        pts.push_back({x, val(rng)});
        x += gap(rng);
    }
    return SampleSet(std::move(pts));
}

// Midpoint-rule integral of |f - g| on a fine grid, independent of
// exact_l1_cpl.
double brute_l1(const CplFunction& f, const CplFunction& g, double a, double b) {
    constexpr int kSteps = 200000;
    const double h = (b - a) / kSteps;
    double s = 0.0;
    for (int i = 0; i < kSteps; ++i) {
        const double x = a + (i + 0.5) * h;
        s += std::abs(f(x) - g(x));
    }
    return s * h;
}

}  // namespace

TEST_CASE("eval_cpl examples") {
    CHECK(eval_cpl(CplFunction({0, 1}, {0, 1}), 0.5) == 0.5);
    CHECK(eval_cpl(CplFunction({0, 0.5, 1}, {0, 1, 0}), 0.75) == doctest::Approx(0.5));
    // Extrapolation continues the end segments.
    const CplFunction hat({0, 0.5, 1}, {0, 1, 0});
    CHECK(hat(-0.5) == doctest::Approx(-1.0));
    CHECK(hat(1.5) == doctest::Approx(-1.0));
    CHECK(hat.pieces() == 2);
    CHECK(hat.slope(0) == doctest::Approx(2.0));
}

TEST_CASE("CplFunction validation") {
    CHECK_THROWS_AS(CplFunction({0}, {0}), PreconditionError);
    CHECK_THROWS_AS(CplFunction({0, 1}, {0}), ShapeError);
    CHECK_THROWS_AS(CplFunction({0, 0}, {0, 1}), PreconditionError);
    CHECK_THROWS_AS(CplFunction({1, 0}, {0, 1}), PreconditionError);
    CHECK_THROWS_AS(CplFunction({0, 1e-14}, {0, 1}), PreconditionError);
    CHECK_THROWS_AS(CplFunction({0, NAN}, {0, 1}), PreconditionError);
}

TEST_CASE("SampleSet validation") {
    CHECK_THROWS_AS(SampleSet({{0, 0}, {0, 1}}), PreconditionError);
    CHECK_THROWS_AS(SampleSet({{0, 0}, {1, 1}}, Lemma2Shape{1, 1}), ShapeError);
    CHECK_THROWS_AS(SampleSet({{0, 0}, {0.5, -1}, {1, 1}}, Lemma2Shape{1, 1}), PreconditionError);
    CHECK_NOTHROW(SampleSet({{0, 0}, {0.5, 1}, {1, 1}}, Lemma2Shape{1, 1}));
}

TEST_CASE("lemma1 examples") {
    const ReluNetwork id = lemma1_interpolant(SampleSet({{0, 0}, {1, 1}}));
    CHECK(id.widths() == WidthVec({1}));
    CHECK(evaluate(id, 0.3) == doctest::Approx(0.3).epsilon(1e-15));

    const ReluNetwork hat = lemma1_interpolant(SampleSet({{0, 0}, {0.5, 1}, {1, 0}}));
    CHECK(hat.widths() == WidthVec({2}));
    CHECK(evaluate(hat, 0.25) == doctest::Approx(0.5));
    CHECK(evaluate(hat, 0.75) == doctest::Approx(0.5));

    CHECK_THROWS_AS(lemma1_interpolant(SampleSet({{0, 0}})), PreconditionError);
}

TEST_CASE("lemma1 weights follow the closed form") {
    const SampleSet s({{0, 1}, {0.5, 2}, {2, 0.5}});
    const ReluNetwork n = lemma1_interpolant(s);
    const auto& h = n.layers()[0];
    const auto& o = n.layers()[1];
    CHECK(h.weight.data == std::vector<double>{1, 1});
    CHECK(h.bias == std::vector<double>{-0.0, -0.5});
    CHECK(o.bias[0] == 1.0);
    CHECK(o.weight(0, 0) == doctest::Approx(2.0));
    CHECK(o.weight(0, 1) == doctest::Approx(-1.0 - 2.0));
}

TEST_CASE("lemma1 on 51 random samples") {
    std::mt19937_64 rng(51);
    const SampleSet s = random_samples(rng, 51);
    const ReluNetwork n = lemma1_interpolant(s);
    CHECK(n.widths() == WidthVec({50}));
    for (const auto& p : s.points()) CHECK(std::abs(evaluate(n, p.x) - p.y) <= 1e-9);
    // Dense second differences vanish inside each segment.
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        const double lo = s[i].x;
        const double hi = s[i + 1].x;
        std::vector<double> v;
        for (int q = 0; q <= 20; ++q) v.push_back(evaluate(n, lo + (hi - lo) * q / 20.0));
        for (std::size_t q = 1; q + 1 < v.size(); ++q) CHECK(std::abs(v[q + 1] - 2 * v[q] + v[q - 1]) <= 1e-8);
    }
    // Agreement with the CPL representation at random points.
    const CplFunction f = s.as_cpl();
    std::uniform_real_distribution<double> u(s[0].x, s[s.size() - 1].x);
    for (int p = 0; p < 1000; ++p) {
        const double x = u(rng);
        CHECK(std::abs(evaluate(n, x) - eval_cpl(f, x)) <= 1e-10);
    }
}

TEST_CASE("lemma1 is nonnegative for nonnegative samples") {
    std::mt19937_64 rng(2);
    for (int rep = 0; rep < 20; ++rep) {
        const SampleSet s = random_samples(rng, 20, 0.0);
        const ReluNetwork n = lemma1_interpolant(s);
        for (int q = 0; q <= 2000; ++q) {
            const double x = s[0].x + (s[s.size() - 1].x - s[0].x) * q / 2000.0;
            CHECK(evaluate(n, x) >= -1e-12);
        }
    }
}

TEST_CASE("exact_l1_cpl examples") {
    const CplFunction x({0, 1}, {0, 1});
    const CplFunction zero({0, 1}, {0, 0});
    const CplFunction shifted({0, 1}, {-0.5, 0.5});
    CHECK(exact_l1_cpl(x, x, 0, 1) == 0.0);
    CHECK(exact_l1_cpl(x, zero, 0, 1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(exact_l1_cpl(shifted, zero, 0, 1) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK_THROWS_AS(exact_l1_cpl(x, zero, 1, 1), PreconditionError);
    CHECK_THROWS_AS(exact_l1_cpl(x, zero, 1, 0), PreconditionError);
}

TEST_CASE("exact_l1_cpl agrees with brute-force quadrature") {
    std::mt19937_64 rng(4);
    for (int rep = 0; rep < 10; ++rep) {
        const CplFunction f = random_samples(rng, 8).as_cpl();
        const CplFunction g = random_samples(rng, 5).as_cpl();
        const double a = 0.01;
        const double b = 0.3;
        CHECK(exact_l1_cpl(f, g, a, b) == doctest::Approx(brute_l1(f, g, a, b)).epsilon(1e-6));
    }
}

TEST_CASE("exact_l1_cpl symmetry and triangle inequality") {
    std::mt19937_64 rng(6);
    for (int rep = 0; rep < 50; ++rep) {
        const CplFunction f = random_samples(rng, 6).as_cpl();
        const CplFunction g = random_samples(rng, 7).as_cpl();
        const CplFunction h = random_samples(rng, 4).as_cpl();
        const double fg = exact_l1_cpl(f, g, 0, 0.2);
        CHECK(fg == doctest::Approx(exact_l1_cpl(g, f, 0, 0.2)).epsilon(1e-14));
        CHECK(fg <= exact_l1_cpl(f, h, 0, 0.2) + exact_l1_cpl(h, g, 0, 0.2) + 1e-14);
    }
}

TEST_CASE("cpl_from_net_1d examples") {
    const ReluNetwork relu(1, {AffineLayer{Matrix(1, 1, 1.0), {0.0}}, AffineLayer{Matrix(1, 1, 1.0), {0.0}}});
    const CplFunction r = cpl_from_net_1d(relu, -1.0, 1.0, 64);
    CHECK(std::ranges::any_of(r.breaks(), [](double b) { return std::abs(b) <= 1e-6; }));

    const ReluNetwork zero(1, {AffineLayer{Matrix(1, 1, 0.0), {0.0}}, AffineLayer{Matrix(1, 1, 0.0), {0.0}}});
    const CplFunction z = cpl_from_net_1d(zero, 0.0, 1.0, 16);
    CHECK(z.pieces() == 1);
    CHECK(z.values() == std::vector<double>{0.0, 0.0});

    CHECK_THROWS_AS(cpl_from_net_1d(relu, 0.0, 1.0, 2), PreconditionError);
    CHECK_THROWS_AS(cpl_from_net_1d(relu, 1.0, 0.0, 8), PreconditionError);
}

TEST_CASE("cpl_from_net_1d recovers a lemma1 interpolant") {
    std::mt19937_64 rng(8);
    const SampleSet s = random_samples(rng, 12);
    const ReluNetwork n = lemma1_interpolant(s);
    const CplFunction got = cpl_from_net_1d(n, s[0].x, s[s.size() - 1].x, 40);
    // Every recovered break is a sample node, and every node with a real kink is recovered.
    for (double b : got.breaks()) {
        CHECK(std::ranges::any_of(s.points(), [b](const Sample& p) { return std::abs(p.x - b) <= 1e-6; }));
    }
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto it = std::ranges::find_if(got.breaks(), [&](double b) { return std::abs(b - s[i].x) <= 1e-6; });
        if (it != got.breaks().end()) {
            CHECK(got.values()[static_cast<std::size_t>(it - got.breaks().begin())] ==
                  doctest::Approx(s[i].y).epsilon(1e-6));
        }
    }
    CHECK(got.pieces() <= s.size() - 1);
    CHECK(exact_l1_cpl(got, s.as_cpl(), s[0].x, s[s.size() - 1].x) <= 1e-9);
}

TEST_CASE("fit_output_layer") {
    const std::vector<double> b{0.0, 1.0, 3.0};
    const std::vector<double> v{1.0, 3.0, 2.0};
    const OutputFit f = fit_output_layer(b, v);
    CHECK(f.bias == 1.0);
    REQUIRE(f.weights.size() == 2);
    CHECK(f.weights[0] == doctest::Approx(2.0));
    CHECK(f.weights[1] == doctest::Approx(-0.5 - 2.0));
}

TEST_CASE("cpl serialization round trip") {
    const CplFunction f({0.0, 0.1, 1.0 / 3.0}, {1e-300, -2.0, 7.25});
    const CplFunction back = deserialize_cpl(serialize_cpl(f));
    CHECK(back.breaks() == f.breaks());
    CHECK(back.values() == f.values());
    CHECK_THROWS_AS(deserialize_cpl("{\"breaks\": [0, 1]"), ParseError);
    CHECK_THROWS_AS(deserialize_cpl("{\"breaks\": [0, 1], \"values\": [\"x\", 1]}"), ParseError);
}
