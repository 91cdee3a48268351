#pragma once

#include "mnls/grid.hpp"
#include "mnls/kernels.hpp"

// Internal: translate a Grid (plus optional magnetic matrix) into the flat
// geometry struct the kernels consume.

namespace mnls::detail {

inline kernels::StencilGeom make_geom(const Grid& g, const double* b_packed = nullptr,
                                      bool magnetic = false, double shift = 0.0) {
    kernels::StencilGeom geom;
    geom.dim = g.dim;
    for (int a = 0; a < g.dim; ++a) {
        geom.n[a] = g.points[a];
        geom.h[a] = g.spacing[a];
        geom.x0[a] = -g.half_extent[a];
    }
    if (b_packed != nullptr) {
        for (int i = 0; i < g.dim * g.dim; ++i) geom.b[i] = b_packed[i];
    }
    geom.magnetic = magnetic;
    geom.shift = shift;
    return geom;
}

} // namespace mnls::detail
