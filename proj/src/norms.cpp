#include "eplb/norms.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>
#include <stdexcept>

namespace eplb {

double norm_inf(const GridField& f) {
    const long m = f.n3();
    double mx = 0.0;
    for (long i = 0; i < m; ++i) {
        double q = 0.0;
        for (int c = 0; c < f.components; ++c) {
            const double v = f.data[c * m + i];
            q += v * v;
        }
        mx = std::max(mx, q);
    }
    return std::sqrt(mx);
}

double norm_q(const GridField& f, double q) {
    const long m = f.n3();
    const double h = f.spec.spacing();
    double acc = 0.0;
    for (long i = 0; i < m; ++i) {
        double s = 0.0;
        for (int c = 0; c < f.components; ++c) {
            const double v = f.data[c * m + i];
            s += v * v;
        }
        acc += std::pow(std::sqrt(s), q);
    }
    return std::pow(acc * h * h * h, 1.0 / q);
}

double norm_l2(const GridField& f) {
    const double h = f.spec.spacing();
    double acc = 0.0;
    for (double v : f.data) acc += v * v;
    return std::sqrt(acc * h * h * h);
}

namespace {

std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

double hdot_stencil(const GridField& f, int sigma) {
    // Sum over all ordered derivative tuples of length sigma.
    const long m = f.n3();
    double acc = 0.0;
    std::vector<int> tuple(sigma, 0);
    std::vector<double> cur(m), next(m);
    for (int c = 0; c < f.components; ++c) {
        // iterate sigma-digit base-3 counter
        std::fill(tuple.begin(), tuple.end(), 0);
        while (true) {
            std::memcpy(cur.data(), f.comp(c), sizeof(double) * m);
            GridField tmp(f.spec, 1);
            for (int k = 0; k < sigma; ++k) {
                std::memcpy(tmp.comp(0), cur.data(), sizeof(double) * m);
                derivative(tmp, 0, tuple[k], 4, next.data());
                std::swap(cur, next);
            }
            for (long i = 0; i < m; ++i) acc += cur[i] * cur[i];
            int pos = sigma - 1;
            while (pos >= 0 && tuple[pos] == 2) tuple[pos--] = 0;
            if (pos < 0) break;
            ++tuple[pos];
        }
    }
    const double h = f.spec.spacing();
    return std::sqrt(acc * h * h * h);
}

double hdot_spectral(const GridField& f, int sigma) {
    const int n = f.spec.n_cells;
    const long m = f.n3();
    const long nc = static_cast<long>(n) * n * (n / 2 + 1);
    const double L = f.spec.half_length;

    double* rbuf;
    fftw_complex* cbuf;
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        rbuf = fftw_alloc_real(m);
        cbuf = fftw_alloc_complex(nc);
        plan = fftw_plan_dft_r2c_3d(n, n, n, rbuf, cbuf, FFTW_ESTIMATE);
    }

    double acc = 0.0;
    for (int c = 0; c < f.components; ++c) {
        std::memcpy(rbuf, f.comp(c), sizeof(double) * m);
        fftw_execute(plan);
        for (int iz = 0; iz < n; ++iz) {
            const int mz = iz <= n / 2 ? iz : iz - n;
            const double kz = M_PI * mz / L;
            for (int iy = 0; iy < n; ++iy) {
                const int my = iy <= n / 2 ? iy : iy - n;
                const double ky = M_PI * my / L;
                for (int ix = 0; ix <= n / 2; ++ix) {
                    const double kx = M_PI * ix / L;
                    const double k2 = kx * kx + ky * ky + kz * kz;
                    const long idx = (static_cast<long>(iz) * n + iy) * (n / 2 + 1) + ix;
                    const double re = cbuf[idx][0], im = cbuf[idx][1];
                    // Hermitian double count except the self-conjugate planes.
                    const double mult = (ix == 0 || ix == n / 2) ? 1.0 : 2.0;
                    acc += mult * std::pow(k2, sigma) * (re * re + im * im);
                }
            }
        }
    }
    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        fftw_destroy_plan(plan);
        fftw_free(rbuf);
        fftw_free(cbuf);
    }
    // Parseval: sum_x |f|^2 h^3 = h^3 / n^3 * sum_k |fhat|^2
    const double h = f.spec.spacing();
    return std::sqrt(acc * h * h * h / static_cast<double>(m));
}

}  // namespace

double norm_hdot(const GridField& f, int sigma, HdotBackend backend) {
    if (sigma < 0) throw std::invalid_argument("norm_hdot: sigma must be >= 0");
    if (sigma == 0) return norm_l2(f);
    if (backend == HdotBackend::Stencil) return hdot_stencil(f, sigma);
    return hdot_spectral(f, sigma);
}

}  // namespace eplb
