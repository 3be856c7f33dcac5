#pragma once

#include <cstddef>

#include "nlapprox/cpl.hpp"
#include "nlapprox/delta.hpp"
#include "nlapprox/network.hpp"

namespace nlapprox {

struct CplRealization {
    ReluNetwork net;
    double achieved = 0.0;  // exact L1 distance on [0,1]
    double delta = 0.0;
};

// Realize a CPL function with at most mn+1 pieces on [0,1] by a
// [2m, 2n+1] network within L1 distance epsilon.
//
// Break points of g become sample nodes; the m-1 interior segment joints get
// a don't-care sliver of width delta, which is shrunk until the exact L1
// distance (measured on the extracted CPL of the network) is <= epsilon.
CplRealization corollary32_check(const CplFunction& g, std::size_t m, std::size_t n, double epsilon,
                                 const DeltaPolicy& policy = {});

}  // namespace nlapprox
