#include "eplb/field.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace eplb {

GridField& GridField::axpy(double a, const GridField& x) {
    if (x.data.size() != data.size())
        throw std::invalid_argument("GridField::axpy: size mismatch");
    for (size_t i = 0; i < data.size(); ++i) data[i] += a * x.data[i];
    return *this;
}

bool GridField::all_finite() const {
    for (double v : data)
        if (!std::isfinite(v)) return false;
    return true;
}

double GridField::max_abs() const {
    double m = 0.0;
    for (double v : data) m = std::max(m, std::abs(v));
    return m;
}

GridField GridField::sample_scalar(
    const GridSpec& g, const std::function<double(double, double, double)>& f) {
    GridField out(g, 1);
    const int n = g.n_cells;
    for (int iz = 0; iz < n; ++iz)
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix)
                out.at(0, ix, iy, iz) = f(g.coord(ix), g.coord(iy), g.coord(iz));
    return out;
}

GridField GridField::sample_vector(
    const GridSpec& g,
    const std::function<std::array<double, 3>(double, double, double)>& f) {
    GridField out(g, 3);
    const int n = g.n_cells;
    for (int iz = 0; iz < n; ++iz)
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix) {
                auto v = f(g.coord(ix), g.coord(iy), g.coord(iz));
                for (int c = 0; c < 3; ++c) out.at(c, ix, iy, iz) = v[c];
            }
    return out;
}

namespace {

struct Stencil {
    int width;
    std::array<double, 7> w;  // taps at offsets -width..width
};

Stencil first_derivative_stencil(int order) {
    switch (order) {
        case 2: return {1, {0, 0, -0.5, 0.0, 0.5, 0, 0}};
        case 4: return {2, {0, 1.0 / 12, -8.0 / 12, 0.0, 8.0 / 12, -1.0 / 12, 0}};
        case 6:
            return {3, {-1.0 / 60, 9.0 / 60, -45.0 / 60, 0.0, 45.0 / 60, -9.0 / 60, 1.0 / 60}};
        default: throw std::invalid_argument("derivative: order must be 2, 4, or 6");
    }
}

}  // namespace

void derivative(const GridField& f, int comp, int axis, int order, double* out) {
    const Stencil st = first_derivative_stencil(order);
    const int n = f.spec.n_cells;
    const double invh = 1.0 / f.spec.spacing();
    const double* src = f.comp(comp);
    const long stride = axis == 0 ? 1 : (axis == 1 ? n : static_cast<long>(n) * n);

    for (int iz = 0; iz < n; ++iz)
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix) {
                const long base = f.idx(ix, iy, iz);
                const int pos = axis == 0 ? ix : (axis == 1 ? iy : iz);
                double acc = 0.0;
                for (int k = -st.width; k <= st.width; ++k) {
                    if (k == 0) continue;
                    const int p = pos + k;
                    if (p < 0 || p >= n) continue;  // zero extension
                    acc += st.w[k + 3] * src[base + k * stride];
                }
                out[base] = acc * invh;
            }
}

GridField gradient(const GridField& scalar, int order) {
    GridField g(scalar.spec, 3);
    for (int a = 0; a < 3; ++a) derivative(scalar, 0, a, order, g.comp(a));
    return g;
}

GridField divergence(const GridField& vec, int order) {
    GridField d(vec.spec, 1);
    std::vector<double> tmp(vec.n3());
    for (int a = 0; a < 3; ++a) {
        derivative(vec, a, a, order, tmp.data());
        double* out = d.comp(0);
        for (long i = 0; i < vec.n3(); ++i) out[i] += tmp[i];
    }
    return d;
}

GridField laplacian_7pt(const GridField& scalar) {
    const int n = scalar.spec.n_cells;
    const double invh2 = 1.0 / (scalar.spec.spacing() * scalar.spec.spacing());
    GridField out(scalar.spec, 1);
    const double* s = scalar.comp(0);
    double* o = out.comp(0);
    const long sx = 1, sy = n, sz = static_cast<long>(n) * n;
    for (int iz = 0; iz < n; ++iz)
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix) {
                const long i = scalar.idx(ix, iy, iz);
                double acc = -6.0 * s[i];
                acc += ix > 0 ? s[i - sx] : 0.0;
                acc += ix < n - 1 ? s[i + sx] : 0.0;
                acc += iy > 0 ? s[i - sy] : 0.0;
                acc += iy < n - 1 ? s[i + sy] : 0.0;
                acc += iz > 0 ? s[i - sz] : 0.0;
                acc += iz < n - 1 ? s[i + sz] : 0.0;
                o[i] = acc * invh2;
            }
    return out;
}

namespace {

// Lagrange weights for interpolation at fractional offset `u` within a window
// of `npts` nodes at integer positions 0..npts-1.
void lagrange_weights(double u, int npts, double* w) {
    for (int i = 0; i < npts; ++i) {
        double num = 1.0, den = 1.0;
        for (int j = 0; j < npts; ++j) {
            if (j == i) continue;
            num *= u - j;
            den *= static_cast<double>(i - j);
        }
        w[i] = num / den;
    }
}

}  // namespace

double interpolate(const GridField& f, int comp, double x, double y, double z,
                   int npts) {
    if (npts < 2 || npts > 8) throw std::invalid_argument("interpolate: npts in [2,8]");
    const int n = f.spec.n_cells;
    const double h = f.spec.spacing();
    const double L = f.spec.half_length;

    double pos[3] = {(x + L) / h - 0.5, (y + L) / h - 0.5, (z + L) / h - 0.5};
    int start[3];
    double wts[3][8];
    for (int a = 0; a < 3; ++a) {
        int s = static_cast<int>(std::floor(pos[a])) - npts / 2 + 1;
        s = std::clamp(s, 0, n - npts);
        start[a] = s;
        lagrange_weights(pos[a] - s, npts, wts[a]);
    }
    double acc = 0.0;
    for (int kz = 0; kz < npts; ++kz)
        for (int ky = 0; ky < npts; ++ky) {
            double wzy = wts[2][kz] * wts[1][ky];
            for (int kx = 0; kx < npts; ++kx)
                acc += wzy * wts[0][kx] *
                       f.at(comp, start[0] + kx, start[1] + ky, start[2] + kz);
        }
    return acc;
}

}  // namespace eplb
