#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

#include "eplb/params.hpp"

namespace eplb {

// Scalar (1 component) or vector (3 component) sample array on a GridSpec.
// Storage is component-major; within a component x runs fastest, z slowest.
struct GridField {
    GridSpec spec;
    int components = 1;
    std::vector<double> data;

    GridField() = default;
    GridField(const GridSpec& g, int comps)
        : spec(g), components(comps),
          data(static_cast<size_t>(g.total_cells()) * comps, 0.0) {}

    long n() const { return spec.n_cells; }
    long n3() const { return spec.total_cells(); }

    long idx(int ix, int iy, int iz) const {
        return (static_cast<long>(iz) * spec.n_cells + iy) * spec.n_cells + ix;
    }
    double& at(int c, int ix, int iy, int iz) { return data[c * n3() + idx(ix, iy, iz)]; }
    double at(int c, int ix, int iy, int iz) const { return data[c * n3() + idx(ix, iy, iz)]; }
    double* comp(int c) { return data.data() + c * n3(); }
    const double* comp(int c) const { return data.data() + c * n3(); }

    void fill(double v) { std::fill(data.begin(), data.end(), v); }

    GridField& axpy(double a, const GridField& x);  // this += a*x
    bool all_finite() const;
    double max_abs() const;

    // Pointwise evaluation helpers: f(x, y, z) per component.
    static GridField sample_scalar(const GridSpec& g,
                                   const std::function<double(double, double, double)>& f);
    static GridField sample_vector(const GridSpec& g,
                                   const std::function<std::array<double, 3>(double, double, double)>& f);
};

// Central finite-difference first derivative along `axis` with zero extension
// outside the box (compact-support convention).  order in {2, 4, 6}.
void derivative(const GridField& f, int comp, int axis, int order, double* out);
GridField gradient(const GridField& scalar, int order);           // 3 components
GridField divergence(const GridField& vec, int order);            // 1 component
// Standard 7-point discrete Laplacian, zero extension.
GridField laplacian_7pt(const GridField& scalar);

// Separable Lagrange interpolation of order `npts` (6 = quintic) at an
// arbitrary interior point.  Stencil windows are clamped at the box edge.
double interpolate(const GridField& f, int comp, double x, double y, double z,
                   int npts = 6);

}  // namespace eplb
