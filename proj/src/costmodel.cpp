#include "nlapprox/costmodel.hpp"

#include <algorithm>
#include <cmath>

#include "nlapprox/errors.hpp"
#include "nlapprox/network.hpp"

namespace nlapprox {

namespace {

double log_width(std::size_t N) { return N == 1 ? 1.0 : std::log(static_cast<double>(N)); }

bool large_m(const ArchSpec& a) { return a.m > a.N * a.N; }

std::size_t isqrt_floor_pow(std::size_t N, std::size_t d) {
    // Largest n with n^d <= N^2.
    std::size_t n = 1;
    auto fits = [&](std::size_t v) {
        std::size_t r = 1;
        for (std::size_t i = 0; i < d; ++i) r *= v;
        return r <= N * N;
    };
    while (fits(n + 1)) ++n;
    return n;
}

}  // namespace

void CostParams::validate() const {
    if (!std::isfinite(t_s) || !std::isfinite(t_w) || !std::isfinite(c_flop)) {
        throw ParameterError("cost parameters must be finite");
    }
    if (t_s < 0.0 || t_w < 0.0) {
        throw ParameterError("t_s and t_w must be nonnegative");
    }
    if (!(c_flop > 0.0)) {
        throw ParameterError("c_flop must be positive");
    }
}

void ArchSpec::validate() const {
    if (N == 0 || L == 0 || m == 0) {
        throw ParameterError("N, L and m must all be >= 1");
    }
}

double shared_time(const ArchSpec& a, const CostParams& p) {
    const double L = static_cast<double>(a.L);
    if (large_m(a)) {
        return p.c_flop * L * log_width(a.N);
    }
    const double N = static_cast<double>(a.N);
    const double m = static_cast<double>(a.m);
    return p.c_flop * L * (N * N / m + std::max(std::log(m / N), 0.0));
}

double dist_time(const ArchSpec& a, const CostParams& p) {
    const double L = static_cast<double>(a.L);
    if (large_m(a)) {
        return p.c_flop * L * log_width(a.N);
    }
    const double N = static_cast<double>(a.N);
    const double m = static_cast<double>(a.m);
    const double lnm = std::log(m);
    return p.c_flop * L * (N * N / m + p.t_s * lnm + p.t_w * N * lnm / std::sqrt(m));
}

double shared_mem(const ArchSpec& a, const CostParams& p) {
    const double N = static_cast<double>(a.N);
    return p.c_flop * static_cast<double>(a.L) * N * N;
}

double dist_mem(const ArchSpec& a, const CostParams& p) {
    const double N = static_cast<double>(a.N);
    return p.c_flop * (static_cast<double>(a.L) * N * N / static_cast<double>(a.m) + 1.0);
}

std::string to_string(ArchFamily f) {
    switch (f) {
        case ArchFamily::Shallow: return "shallow";
        case ArchFamily::DeepNarrow: return "deep-narrow";
        case ArchFamily::VeryDeep: return "very-deep";
    }
    return "?";
}

std::vector<std::size_t> family_widths(ArchFamily f, std::size_t d, std::size_t N, std::size_t L) {
    if (d == 0 || N == 0 || L == 0) {
        throw ParameterError("d, N and L must be >= 1");
    }
    switch (f) {
        case ArchFamily::Shallow: return {2 * d * isqrt_floor_pow(N, d), 2 * N, 2 * N};
        case ArchFamily::DeepNarrow: return std::vector<std::size_t>(L, N);
        case ArchFamily::VeryDeep: return std::vector<std::size_t>(N, 2 * d + 10);
    }
    return {};
}

std::size_t dense_parameter_count(std::size_t d, const std::vector<std::size_t>& widths) {
    std::size_t count = 0;
    std::size_t in = d;
    for (std::size_t w : widths) {
        count += (in + 1) * w;
        in = w;
    }
    return count + in + 1;
}

std::vector<std::size_t> regime_core_counts(std::size_t d, std::size_t N) {
    const std::size_t w = 2 * d + 10;
    std::vector<std::size_t> ms{1, w * w, N * N, 4 * N * N};
    std::sort(ms.begin(), ms.end());
    ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
    return ms;
}

std::string regime_label(std::size_t d, std::size_t N, std::size_t m) {
    const std::size_t w = 2 * d + 10;
    if (m <= w * w) return "[1,(2d+10)^2]";
    if (m <= N * N) return "((2d+10)^2,N^2]";
    return "(N^2,inf)";
}

std::vector<RegimeRow> regime_table(const RegimeConfig& cfg) {
    cfg.params.validate();
    if (cfg.d == 0 || cfg.L == 0) {
        throw ParameterError("d and L must be >= 1");
    }
    std::vector<RegimeRow> rows;
    for (ArchFamily fam : {ArchFamily::Shallow, ArchFamily::DeepNarrow, ArchFamily::VeryDeep}) {
        for (std::size_t N : cfg.Ns) {
            const std::vector<std::size_t> widths = family_widths(fam, cfg.d, N, cfg.L);
            std::size_t nodes = 0;
            for (std::size_t w : widths) nodes += w;
            for (std::size_t m : regime_core_counts(cfg.d, N)) {
                RegimeRow row;
                row.family = fam;
                row.N = N;
                row.arch = ArchSpec{*std::max_element(widths.begin(), widths.end()), widths.size(), m};
                row.regime = regime_label(cfg.d, N, m);
                row.t_shared = shared_time(row.arch, cfg.params);
                row.t_dist = dist_time(row.arch, cfg.params);
                row.m_shared = shared_mem(row.arch, cfg.params);
                row.m_dist = dist_mem(row.arch, cfg.params);
                row.weights = dense_parameter_count(cfg.d, widths);
                row.nodes = nodes;
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

std::string regime_csv_header() {
    return "family,N,L,m,T_shared,T_dist,M_shared,M_dist_per_core,regime,size,weights,nodes";
}

std::string regime_csv_row(const RegimeRow& r) {
    return to_string(r.family) + ',' + std::to_string(r.arch.N) + ',' + std::to_string(r.arch.L) + ',' +
           std::to_string(r.arch.m) + ',' + format_real(r.t_shared) + ',' + format_real(r.t_dist) + ',' +
           format_real(r.m_shared) + ',' + format_real(r.m_dist) + ",\"" + r.regime + "\"," +
           std::to_string(r.N) + ',' + std::to_string(r.weights) + ',' + std::to_string(r.nodes);
}

}  // namespace nlapprox
