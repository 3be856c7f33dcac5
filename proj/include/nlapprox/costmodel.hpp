#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace nlapprox {

struct CostParams {
    double t_s = 0.0;     // start-up time per message
    double t_w = 0.0;     // per-word transfer time
    double c_flop = 1.0;  // multiplies every term

    void validate() const;
};

// Width N, depth L, m cores.
struct ArchSpec {
    std::size_t N = 1;
    std::size_t L = 1;
    std::size_t m = 1;

    void validate() const;
};

// Shared memory: m <= N^2 -> c L (N^2/m + max(ln(m/N), 0)); m > N^2 -> c L ln N
// (ln N taken as 1 when N = 1).
double shared_time(const ArchSpec& a, const CostParams& p);
// Distributed memory: m <= N^2 -> c L (N^2/m + t_s ln m + t_w N ln m / sqrt m);
// m > N^2 -> c L ln N.
double dist_time(const ArchSpec& a, const CostParams& p);
double shared_mem(const ArchSpec& a, const CostParams& p);  // c L N^2
double dist_mem(const ArchSpec& a, const CostParams& p);    // c (L N^2/m + 1), per core

enum class ArchFamily { Shallow, DeepNarrow, VeryDeep };

std::string to_string(ArchFamily f);

// Hidden widths of each family for input dimension d:
//   Shallow    [2d floor(N^{2/d}), 2N, 2N]
//   DeepNarrow [N]^L
//   VeryDeep   [2d+10]^N
std::vector<std::size_t> family_widths(ArchFamily f, std::size_t d, std::size_t N, std::size_t L);

// Weights and biases of a dense net with input dimension d, the given hidden
// widths and a scalar output.
std::size_t dense_parameter_count(std::size_t d, const std::vector<std::size_t>& widths);

struct RegimeRow {
    ArchFamily family = ArchFamily::Shallow;
    std::size_t N = 0;       // the family's size parameter
    ArchSpec arch;           // (max width, hidden layers, m) fed to the formulas
    std::string regime;      // which of the three m ranges m falls in
    double t_shared = 0.0;
    double t_dist = 0.0;
    double m_shared = 0.0;
    double m_dist = 0.0;
    std::size_t weights = 0;
    std::size_t nodes = 0;
};

struct RegimeConfig {
    std::size_t d = 2;
    std::vector<std::size_t> Ns{8, 16, 32};
    std::size_t L = 4;  // depth of the [N]^L family
    CostParams params;
};

// Representative core counts: 1, (2d+10)^2, N^2 and 4N^2, deduplicated.
std::vector<std::size_t> regime_core_counts(std::size_t d, std::size_t N);
// "[1,(2d+10)^2]", "((2d+10)^2,N^2]" or "(N^2,inf)".
std::string regime_label(std::size_t d, std::size_t N, std::size_t m);

std::vector<RegimeRow> regime_table(const RegimeConfig& cfg);

// family,N,L,m,T_shared,T_dist,M_shared,M_dist_per_core,regime,size,weights,nodes
// N and L are the width and depth fed to the formulas; size is the family's N.
std::string regime_csv_header();
std::string regime_csv_row(const RegimeRow& row);

}  // namespace nlapprox
