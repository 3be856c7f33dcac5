#include <doctest.h>

#include <cmath>

#include "nlapprox/costmodel.hpp"
#include "nlapprox/errors.hpp"

using namespace nlapprox;

TEST_CASE("shared time") {
    const CostParams c;
    CHECK(shared_time({8, 3, 1}, c) == 3.0 * 64.0);
    CHECK(shared_time({8, 3, 128}, c) == doctest::Approx(6.238).epsilon(1e-3));
    CHECK(shared_time({8, 3, 128}, c) == 3.0 * std::log(8.0));
    // m < N: log term clamps to zero.
    CHECK(shared_time({8, 1, 4}, c) == 16.0);
    // Boundary m = N^2 against the large-m branch.
    const double at = shared_time({8, 1, 64}, c);
    CHECK(at == doctest::Approx(1.0 + std::log(8.0)));
    const double beyond = shared_time({8, 1, 65}, c);
    CHECK(at / beyond <= 2.0);
    CHECK(shared_time({1, 2, 5}, c) == 2.0);
}

TEST_CASE("distributed time") {
    const CostParams zero;
    const CostParams comm{1.0, 0.5, 1.0};
    CHECK(dist_time({16, 2, 16}, comm) == doctest::Approx(48.636).epsilon(1e-5));
    CHECK(dist_time({16, 2, 1}, comm) == 2.0 * 256.0);
    for (std::size_t m : {1u, 2u, 7u, 100u, 256u}) {
        CHECK(dist_time({16, 2, m}, zero) == 2.0 * 256.0 / static_cast<double>(m));
        CHECK(dist_time({16, 2, m}, comm) >= shared_time({16, 2, m}, comm));
    }
    CHECK(dist_time({16, 2, 1000}, comm) == 2.0 * std::log(16.0));
}

TEST_CASE("memory") {
    const CostParams c{0.0, 0.0, 2.0};
    CHECK(shared_mem({8, 3, 1}, c) == shared_mem({8, 3, 1000000}, c));
    CHECK(dist_mem({8, 3, 1}, c) == shared_mem({8, 3, 1}, c) + 2.0);
    CHECK(dist_mem({8, 3, 100000}, c) >= 2.0);
}

TEST_CASE("linear in L") {
    const CostParams c{0.3, 0.7, 1.5};
    for (std::size_t m : {1u, 10u, 64u, 65u, 1000u}) {
        for (std::size_t L : {2u, 4u}) {
            const double l = static_cast<double>(L);
            CHECK(shared_time({8, L, m}, c) == doctest::Approx(l * shared_time({8, 1, m}, c)).epsilon(1e-15));
            CHECK(dist_time({8, L, m}, c) == doctest::Approx(l * dist_time({8, 1, m}, c)).epsilon(1e-15));
            CHECK(shared_mem({8, L, m}, c) == l * shared_mem({8, 1, m}, c));
        }
    }
}

TEST_CASE("validation") {
    CHECK_THROWS_AS((CostParams{-1.0, 0.0, 1.0}.validate()), ParameterError);
    CHECK_THROWS_AS((CostParams{0.0, 0.0, 0.0}.validate()), ParameterError);
    CHECK_THROWS_AS((CostParams{0.0, NAN, 1.0}.validate()), ParameterError);
    CHECK_THROWS_AS((ArchSpec{0, 1, 1}.validate()), ParameterError);
}

TEST_CASE("families") {
    CHECK(family_widths(ArchFamily::Shallow, 2, 4, 1) == std::vector<std::size_t>{16, 8, 8});
    CHECK(family_widths(ArchFamily::Shallow, 3, 8, 1) == std::vector<std::size_t>{24, 16, 16});
    CHECK(family_widths(ArchFamily::DeepNarrow, 2, 5, 3) == std::vector<std::size_t>{5, 5, 5});
    CHECK(family_widths(ArchFamily::VeryDeep, 2, 4, 1) == std::vector<std::size_t>(4, 14));
    CHECK(dense_parameter_count(1, {2, 3}) == (2 * 2) + (3 * 3) + 4);
}

TEST_CASE("regime table") {
    RegimeConfig cfg;
    cfg.d = 2;
    cfg.Ns = {8, 16, 32};
    const auto rows = regime_table(cfg);
    CHECK(!rows.empty());
    CHECK(regime_core_counts(2, 32) == std::vector<std::size_t>{1, 196, 1024, 4096});
    CHECK(regime_label(2, 32, 100) == "[1,(2d+10)^2]");
    CHECK(regime_label(2, 32, 500) == "((2d+10)^2,N^2]");
    CHECK(regime_label(2, 32, 5000) == "(N^2,inf)");
    for (const auto& r : rows) {
        CHECK(r.weights == dense_parameter_count(2, family_widths(r.family, 2, r.N, cfg.L)));
        if (r.family == ArchFamily::VeryDeep && r.arch.m > 14 * 14) {
            CHECK(r.t_shared == static_cast<double>(r.N) * std::log(14.0));
        }
    }
    const std::string header = regime_csv_header();
    CHECK(header.starts_with("family,N,L,m,T_shared,T_dist,M_shared,M_dist_per_core"));
    CHECK(regime_csv_row(rows.front()).starts_with("shallow,"));
}
