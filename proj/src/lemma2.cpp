#include "nlapprox/lemma2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nlapprox/errors.hpp"

namespace nlapprox {

Lemma2Plan::Lemma2Plan(SampleSet samples, std::size_t m, std::size_t n)
    : samples_(std::move(samples)), m_(m), n_(n) {
    if (m_ == 0 || n_ == 0) {
        throw ShapeError("lemma2 plan needs m, n >= 1");
    }
    const std::size_t expected = m_ * (n_ + 1) + 1;
    if (samples_.size() != expected) {
        throw ShapeError("lemma2 plan with m=" + std::to_string(m_) + ", n=" + std::to_string(n_) + " needs " +
                         std::to_string(expected) + " samples, got " + std::to_string(samples_.size()));
    }
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        if (samples_[i].y < 0.0) {
            throw PreconditionError("lemma2 samples must be nonnegative; sample " + std::to_string(i) + " is " +
                                    std::to_string(samples_[i].y));
        }
    }
    break_indices_.push_back(0);
    for (std::size_t j = 1; j <= m_; ++j) {
        break_indices_.push_back(j * (n_ + 1) - 1);
        break_indices_.push_back(j * (n_ + 1));
    }
}

std::vector<std::size_t> Lemma2Plan::i0() const {
    std::vector<std::size_t> out(last_index() + 1);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = i;
    return out;
}

std::vector<std::size_t> Lemma2Plan::i1() const {
    std::vector<std::size_t> out;
    for (std::size_t j = 1; j <= m_; ++j) out.push_back(j * (n_ + 1));
    return out;
}

std::vector<std::size_t> Lemma2Plan::i2() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i <= last_index(); ++i) {
        if (!is_dont_care(i)) out.push_back(i);
    }
    return out;
}

std::vector<double> Lemma2Plan::break_points() const {
    std::vector<double> out;
    for (std::size_t i : break_indices_) out.push_back(samples_[i].x);
    return out;
}

double Lemma2Plan::sup_bound() const {
    auto x = [this](std::size_t i) { return samples_[i].x; };
    double ymax = 0.0;
    for (const auto& p : samples_.points()) ymax = std::max(ymax, p.y);
    double product = 1.0;
    for (std::size_t k = 1; k <= n_; ++k) {
        double reach = 0.0;
        double step = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < m_; ++j) {
            const std::size_t base = j * (n_ + 1);
            reach = std::max(reach, x(base + n_) - x(base + k - 1));
            step = std::min(step, x(base + k) - x(base + k - 1));
        }
        product *= 1.0 + reach / step;
    }
    return 3.0 * ymax * product;
}

namespace {

double relu(double v) { return v > 0.0 ? v : 0.0; }

// Values at the break points of the line through (x_a, 0) and (x_b, v) on
// every segment of class `active`, zero on the other segments and at the
// final sample.
std::vector<double> segment_line_values(const Lemma2Plan& plan, std::size_t k,
                                        const std::vector<std::size_t>& active,
                                        const std::vector<double>& fk, double sign) {
    const std::size_t m = plan.m();
    const std::size_t n = plan.n();
    const auto& s = plan.samples();
    std::vector<double> values(2 * m + 1, 0.0);
    for (std::size_t j : active) {
        const std::size_t base = j * (n + 1);
        const double xa = s[base + k - 1].x;
        const double xb = s[base + k].x;
        const double v = sign * fk[base + k];
        const double slope = v / (xb - xa);
        // Break positions 2j and 2j+1 hold x_{j(n+1)} and x_{j(n+1)+n}.
        values[2 * j] = slope * (s[base].x - xa);
        values[2 * j + 1] = slope * (s[base + n].x - xa);
    }
    return values;
}

}  // namespace

Lemma2Result lemma2_interpolant(const Lemma2Plan& plan) {
    const std::size_t m = plan.m();
    const std::size_t n = plan.n();
    const SampleSet& samples = plan.samples();
    const std::size_t count = samples.size();
    const std::vector<double> breaks = plan.break_points();  // 2m+1 points
    const std::size_t hidden1 = 2 * m;
    const std::size_t hidden2 = 2 * n + 1;

    ResidualTrace trace;

    // First hidden layer: relu(x - t_j) for the first 2m break points.
    AffineLayer first;
    first.weight = Matrix(hidden1, 1, 1.0);
    first.bias.resize(hidden1);
    for (std::size_t j = 0; j < hidden1; ++j) first.bias[j] = -breaks[j];

    AffineLayer second;
    second.weight = Matrix(hidden2, hidden1);
    second.bias.resize(hidden2);
    auto set_row = [&](std::size_t row, const std::vector<double>& values) {
        const OutputFit fit = fit_output_layer(breaks, values);
        for (std::size_t c = 0; c < hidden1; ++c) second.weight(row, c) = fit.weights[c];
        second.bias[row] = fit.bias;
    };
    auto control_cpl = [&](const std::vector<double>& values) { return CplFunction(breaks, values); };

    // f_0 = CPL through all samples; g_0 matches it at the break points.
    std::vector<double> fk = samples.ys();
    trace.residuals.push_back(fk);
    trace.g0.resize(2 * m + 1);
    for (std::size_t b = 0; b < breaks.size(); ++b) trace.g0[b] = fk[plan.break_indices()[b]];
    set_row(0, trace.g0);
    {
        const CplFunction g0 = control_cpl(trace.g0);
        std::vector<double> next(count);
        for (std::size_t i = 0; i < count; ++i) next[i] = fk[i] - relu(g0(samples[i].x));
        fk = std::move(next);
    }
    trace.residuals.push_back(fk);

    for (std::size_t k = 1; k <= n; ++k) {
        std::vector<std::size_t> plus;
        std::vector<std::size_t> minus;
        for (std::size_t j = 0; j < m; ++j) {
            (fk[j * (n + 1) + k] >= 0.0 ? plus : minus).push_back(j);
        }
        auto gp = segment_line_values(plan, k, plus, fk, 1.0);
        auto gm = segment_line_values(plan, k, minus, fk, -1.0);
        set_row(2 * k - 1, gp);
        set_row(2 * k, gm);

        const CplFunction gp_f = control_cpl(gp);
        const CplFunction gm_f = control_cpl(gm);
        std::vector<double> next(count);
        for (std::size_t i = 0; i < count; ++i) {
            const double x = samples[i].x;
            next[i] = fk[i] - relu(gp_f(x)) + relu(gm_f(x));
        }
        fk = std::move(next);
        trace.residuals.push_back(fk);
        trace.lambda_plus.push_back(std::move(plus));
        trace.lambda_minus.push_back(std::move(minus));
        trace.g_plus.push_back(std::move(gp));
        trace.g_minus.push_back(std::move(gm));
    }

    // phi = g0~ + sum_k (g+_k~ - g-_k~)
    AffineLayer out;
    out.weight = Matrix(1, hidden2);
    out.weight(0, 0) = 1.0;
    for (std::size_t k = 1; k <= n; ++k) {
        out.weight(0, 2 * k - 1) = 1.0;
        out.weight(0, 2 * k) = -1.0;
    }
    out.bias = {0.0};

    return {ReluNetwork(1, {std::move(first), std::move(second), std::move(out)}), std::move(trace)};
}

std::string ResidualTrace::to_json() const {
    std::ostringstream os;
    auto reals = [&os](const std::vector<double>& v) {
        os << '[';
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) os << ',';
            os << format_real(v[i]);
        }
        os << ']';
    };
    auto ints = [&os](const std::vector<std::size_t>& v) {
        os << '[';
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) os << ',';
            os << v[i];
        }
        os << ']';
    };
    auto nested = [&os](const auto& vv, auto&& inner) {
        os << '[';
        for (std::size_t i = 0; i < vv.size(); ++i) {
            if (i) os << ',';
            inner(vv[i]);
        }
        os << ']';
    };
    os << "{\"residuals\":";
    nested(residuals, reals);
    os << ",\"lambda_plus\":";
    nested(lambda_plus, ints);
    os << ",\"lambda_minus\":";
    nested(lambda_minus, ints);
    os << ",\"g0\":";
    reals(g0);
    os << ",\"g_plus\":";
    nested(g_plus, reals);
    os << ",\"g_minus\":";
    nested(g_minus, reals);
    os << "}\n";
    return os.str();
}

}  // namespace nlapprox
