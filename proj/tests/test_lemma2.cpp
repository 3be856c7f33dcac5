#include <doctest.h>

#include <cmath>
#include <random>

#include "nlapprox/errors.hpp"
#include "nlapprox/lemma2.hpp"

using namespace nlapprox;

namespace {

Lemma2Plan random_plan(std::uint64_t seed, std::size_t m, std::size_t n) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> gap(1.0, 3.0);
    std::uniform_real_distribution<double> val(0.0, 2.0);
    const std::size_t count = m * (n + 1) + 1;
    std::vector<double> xs{0.0};
    for (std::size_t i = 1; i < count; ++i) xs.push_back(xs.back() + gap(rng));
    for (double& x : xs) x /= xs.back();
    std::vector<double> ys(count);
    for (double& y : ys) y = val(rng);
    return Lemma2Plan(SampleSet(xs, ys, Lemma2Shape{m, n}), m, n);
}

double phi(const Lemma2Result& r, double x) { return evaluate(r.net, x); }

}  // namespace

TEST_CASE("plan index sets") {
    const Lemma2Plan p = random_plan(1, 3, 2);
    CHECK(p.last_index() == 9);
    CHECK(p.i0().size() == 10);
    CHECK(p.i1() == std::vector<std::size_t>{3, 6, 9});
    CHECK(p.i2() == std::vector<std::size_t>{0, 1, 2, 4, 5, 7, 8});
    CHECK(p.break_indices() == std::vector<std::size_t>{0, 2, 3, 5, 6, 8, 9});
    CHECK(p.break_indices().size() == 2 * 3 + 1);
    CHECK(p.is_dont_care(3));
    CHECK_FALSE(p.is_dont_care(0));
    CHECK_FALSE(p.is_dont_care(4));
}

TEST_CASE("plan preconditions") {
    const std::vector<double> xs{0.0, 0.5, 1.0};
    const std::vector<double> ys{1.0, 2.0, 1.0};
    CHECK_THROWS_AS(Lemma2Plan(SampleSet(xs, ys), 1, 2), ShapeError);
    CHECK_THROWS_AS(Lemma2Plan(SampleSet(xs, ys), 0, 1), ShapeError);
    const std::vector<double> neg{1.0, -2.0, 1.0};
    CHECK_THROWS_AS(Lemma2Plan(SampleSet(xs, neg), 1, 1), PreconditionError);
    const std::vector<double> dup{0.0, 0.0, 1.0};
    CHECK_THROWS_AS(Lemma2Plan(SampleSet(dup, ys), 1, 1), PreconditionError);
}

TEST_CASE("smallest instance m=n=1") {
    const std::vector<double> xs{0.0, 0.5, 1.0};
    const std::vector<double> ys{1.0, 2.0, 1.0};
    const Lemma2Plan p(SampleSet(xs, ys, Lemma2Shape{1, 1}), 1, 1);
    const Lemma2Result r = lemma2_interpolant(p);
    CHECK(r.net.widths() == WidthVec({2, 3}));
    for (std::size_t i = 0; i < 3; ++i) CHECK(phi(r, xs[i]) == doctest::Approx(ys[i]).epsilon(1e-12));
    // Linear on [0, 0.5].
    CHECK(phi(r, 0.25) == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("affine data m=n=2 is reproduced at every node") {
    std::vector<double> xs;
    std::vector<double> ys;
    for (int i = 0; i < 7; ++i) {
        xs.push_back(i / 6.0);
        ys.push_back(xs.back() + 1.0);
    }
    const Lemma2Plan p(SampleSet(xs, ys, Lemma2Shape{2, 2}), 2, 2);
    const Lemma2Result r = lemma2_interpolant(p);
    for (std::size_t i = 0; i < xs.size(); ++i) CHECK(std::abs(phi(r, xs[i]) - ys[i]) <= 1e-9);
}

TEST_CASE("architecture follows the construction") {
    const Lemma2Plan p = random_plan(3, 4, 3);
    const Lemma2Result r = lemma2_interpolant(p);
    const auto& L = r.net.layers();
    REQUIRE(L.size() == 3);
    CHECK(r.net.widths() == WidthVec({8, 7}));
    // First layer: all-ones weights, biases minus the first 2m break points.
    const auto bp = p.break_points();
    for (std::size_t j = 0; j < 8; ++j) {
        CHECK(L[0].weight(j, 0) == 1.0);
        CHECK(L[0].bias[j] == -bp[j]);
    }
    // Output layer: [1, 1, -1, 1, -1, ...], zero bias.
    CHECK(L[2].weight(0, 0) == 1.0);
    for (std::size_t k = 1; k <= 3; ++k) {
        CHECK(L[2].weight(0, 2 * k - 1) == 1.0);
        CHECK(L[2].weight(0, 2 * k) == -1.0);
    }
    CHECK(L[2].bias[0] == 0.0);
    // Parameter count of the [2m, 2n+1] architecture.
    CHECK(r.net.parameter_count() == 2 * 8 + (8 * 7 + 7) + (7 + 1));
}

TEST_CASE("contract on random data for m, n <= 8") {
    for (std::size_t m = 1; m <= 8; ++m) {
        for (std::size_t n = 1; n <= 8; ++n) {
            CAPTURE(m);
            CAPTURE(n);
            const Lemma2Plan p = random_plan(100 * m + n, m, n);
            const Lemma2Result r = lemma2_interpolant(p);
            const auto& s = p.samples();
            double scale = 0.0;
            for (const auto& pt : s.points()) scale = std::max(scale, pt.y);
            for (const auto& pt : s.points()) CHECK(std::abs(phi(r, pt.x) - pt.y) <= 1e-8);
            for (std::size_t i : p.i2()) {
                if (i == 0) continue;
                const double lo = s[i - 1].x;
                const double hi = s[i].x;
                double v0 = phi(r, lo);
                double v1 = phi(r, lo + (hi - lo) / 16);
                for (int q = 2; q <= 16; ++q) {
                    const double v2 = phi(r, lo + (hi - lo) * q / 16);
                    CHECK(std::abs(v2 - 2 * v1 + v0) <= 1e-7 * std::max(1.0, scale));
                    v0 = v1;
                    v1 = v2;
                }
            }
            double sup = 0.0;
            for (int q = 0; q <= 20000; ++q) sup = std::max(sup, std::abs(phi(r, q / 20000.0)));
            CHECK(sup <= p.sup_bound());
        }
    }
}

TEST_CASE("sup bound at the m=n=4 configuration with 1e5 probes") {
    const Lemma2Plan p = random_plan(44, 4, 4);
    const Lemma2Result r = lemma2_interpolant(p);
    double sup = 0.0;
    for (int q = 0; q <= 100000; ++q) sup = std::max(sup, std::abs(phi(r, q / 100000.0)));
    CHECK(sup <= p.sup_bound());
}

TEST_CASE("sup bound formula on a uniform grid") {
    // Uniform spacing h: reach for stage k is (n - k + 1) h, step is h.
    std::vector<double> xs;
    std::vector<double> ys;
    for (int i = 0; i <= 6; ++i) {
        xs.push_back(i / 6.0);
        ys.push_back(i == 3 ? 2.0 : 1.0);
    }
    const Lemma2Plan p(SampleSet(xs, ys, Lemma2Shape{2, 2}), 2, 2);
    CHECK(p.sup_bound() == doctest::Approx(3.0 * 2.0 * (1 + 2) * (1 + 1)));
}

TEST_CASE("residual trace") {
    const std::size_t m = 5;
    const std::size_t n = 4;
    const Lemma2Plan p = random_plan(77, m, n);
    const Lemma2Result r = lemma2_interpolant(p);
    const ResidualTrace& t = r.trace;
    REQUIRE(t.residuals.size() == n + 2);
    REQUIRE(t.lambda_plus.size() == n);
    REQUIRE(t.g_plus.size() == n);
    CHECK(t.g0.size() == 2 * m + 1);
    // f_0 is the data.
    for (std::size_t i = 0; i <= p.last_index(); ++i) CHECK(t.residuals[0][i] == p.samples()[i].y);
    for (std::size_t k = 0; k <= n; ++k) {
        const auto& f = t.residuals[k + 1];
        CHECK(std::abs(f[p.last_index()]) <= 1e-8);
        for (std::size_t j = 0; j < m; ++j) {
            for (std::size_t l = 0; l <= k; ++l) CHECK(std::abs(f[j * (n + 1) + l]) <= 1e-8);
        }
    }
    for (std::size_t k = 1; k <= n; ++k) {
        std::vector<int> seen(m, 0);
        for (std::size_t j : t.lambda_plus[k - 1]) {
            ++seen[j];
            CHECK(t.residuals[k][j * (n + 1) + k] >= 0.0);
        }
        for (std::size_t j : t.lambda_minus[k - 1]) {
            ++seen[j];
            CHECK(t.residuals[k][j * (n + 1) + k] < 0.0);
        }
        for (int v : seen) CHECK(v == 1);
        // g+_k and g-_k vanish at the final sample.
        CHECK(t.g_plus[k - 1].back() == 0.0);
        CHECK(t.g_minus[k - 1].back() == 0.0);
    }
    const std::string js = t.to_json();
    CHECK(js.find("\"residuals\"") != std::string::npos);
    CHECK(js.find("\"lambda_minus\"") != std::string::npos);
}

TEST_CASE("zero residual goes to the plus class") {
    // Data that g0 already fits exactly: every residual is 0.
    std::vector<double> xs;
    std::vector<double> ys;
    for (int i = 0; i <= 6; ++i) {
        xs.push_back(i / 6.0);
        ys.push_back(1.0);
    }
    const Lemma2Plan p(SampleSet(xs, ys, Lemma2Shape{2, 2}), 2, 2);
    const Lemma2Result r = lemma2_interpolant(p);
    for (const auto& lp : r.trace.lambda_plus) CHECK(lp.size() == 2);
    for (const auto& lm : r.trace.lambda_minus) CHECK(lm.empty());
    for (int q = 0; q <= 100; ++q) CHECK(phi(r, q / 100.0) == doctest::Approx(1.0).epsilon(1e-12));
}
