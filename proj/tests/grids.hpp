#pragma once

// Spectral-parameter grids for the separation and transport checks: real
// intervals inside each kind's valid domain, keeping a 0.05 margin from the
// singular set and from the zeros of b at +-u.

#include <vector>

#include "pcl/painleve.hpp"

namespace grids {

using pcl::cplx;

inline std::vector<cplx> separation_grid(pcl::PainleveKind kind, cplx u, std::size_t want) {
    double lo = -1.0, hi = 1.0;
    switch (kind) {
        case pcl::PainleveKind::P1:
        case pcl::PainleveKind::P2: lo = -1.0; hi = 1.0; break;
        case pcl::PainleveKind::P3Truncated:
        case pcl::PainleveKind::P3: lo = -0.8; hi = 0.8; break;
        case pcl::PainleveKind::P4: lo = 0.25; hi = 1.35; break;
        case pcl::PainleveKind::P5: lo = 0.12; hi = 1.25; break;
        case pcl::PainleveKind::P6: lo = 0.06; hi = 0.44; break;
    }
    const double margin = 0.05;
    std::vector<cplx> out;
    std::size_t n = want;
    while (out.size() < want) {
        out.clear();
        for (std::size_t k = 0; k < n; ++k) {
            cplx x = lo + (hi - lo) * double(k) / double(n - 1);
            if (std::abs(x - u) < margin || std::abs(x + u) < margin) continue;
            out.push_back(x);
        }
        n += want / 4 + 1;
    }
    out.resize(want);
    return out;
}

} // namespace grids
