#include <doctest.h>

#include <omp.h>

#include <random>

#include "nlapprox/kernels.hpp"
#include "nlapprox/metrics.hpp"
#include "nlapprox/theorem.hpp"

using namespace nlapprox;

TEST_CASE("batched evaluation matches the serial reference bit for bit") {
    const Approximant ap = construct(holder_family("cone", 2, 1.0, 1.0), 4, {});
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> pts(2 * 5000);
    for (double& v : pts) v = u(rng);
    std::vector<double> a(5000);
    std::vector<double> b(5000);
    evaluate_batch(ap.net, pts, a);
    evaluate_batch_serial(ap.net, pts, b);
    CHECK(a == b);
    for (std::size_t i = 0; i < 5000; i += 97) CHECK(a[i] == evaluate(ap.net, std::span<const double>(&pts[2 * i], 2)));
}

TEST_CASE("pairwise sum") {
    CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
    CHECK(pairwise_sum(std::vector<double>{1.5}) == 1.5);
    std::vector<double> v(1000, 0.1);
    CHECK(pairwise_sum(v) == doctest::Approx(100.0).epsilon(1e-14));
    std::vector<double> ints(12345);
    for (std::size_t i = 0; i < ints.size(); ++i) ints[i] = static_cast<double>(i);
    CHECK(pairwise_sum(ints) == 12345.0 * 12344.0 / 2.0);
}

TEST_CASE("quadrature is identical across thread counts") {
    const HolderTarget t = holder_family("cone", 1, 0.5, 1.0);
    const Approximant ap = construct(t, 4, {});
    GridSpec g = default_grid(1);
    g.points_per_axis = 300000;
    omp_set_num_threads(1);
    const double one = l1_error(t.f, ap.net, g);
    const double one_inf = linf_error(t.f, ap.net, g);
    omp_set_num_threads(8);
    const double eight = l1_error(t.f, ap.net, g);
    const double eight_inf = linf_error(t.f, ap.net, g);
    omp_set_num_threads(3);
    const double three = l1_error(t.f, ap.net, g);
    CHECK(one == eight);
    CHECK(one == three);
    CHECK(one_inf == eight_inf);
    CHECK(max_threads() == 3);
}
