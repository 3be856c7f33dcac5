#include "nlapprox/kernels.hpp"

#include <omp.h>

#include "nlapprox/errors.hpp"

namespace nlapprox {

namespace {

std::size_t checked_rows(const ReluNetwork& net, std::span<const double> points, std::span<double> out) {
    const std::size_t d = net.input_dim();
    if (points.size() % d != 0 || points.size() / d != out.size()) {
        throw ShapeError("batch of " + std::to_string(points.size()) + " coordinates does not match " +
                         std::to_string(out.size()) + " outputs of dimension " + std::to_string(d));
    }
    return out.size();
}

}  // namespace

void evaluate_batch(const ReluNetwork& net, std::span<const double> points, std::span<double> out) {
    const std::size_t rows = checked_rows(net, points, out);
    const std::size_t d = net.input_dim();
    const auto count = static_cast<std::ptrdiff_t>(rows);
#pragma omp parallel
    {
        Evaluator ev(net);
#pragma omp for schedule(static)
        for (std::ptrdiff_t i = 0; i < count; ++i) {
            const auto r = static_cast<std::size_t>(i);
            out[r] = ev(points.subspan(r * d, d));
        }
    }
}

void evaluate_batch_serial(const ReluNetwork& net, std::span<const double> points, std::span<double> out) {
    const std::size_t rows = checked_rows(net, points, out);
    const std::size_t d = net.input_dim();
    Evaluator ev(net);
    for (std::size_t r = 0; r < rows; ++r) {
        out[r] = ev(points.subspan(r * d, d));
    }
}

double pairwise_sum(std::span<const double> values) {
    if (values.empty()) return 0.0;
    if (values.size() <= 8) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace nlapprox
