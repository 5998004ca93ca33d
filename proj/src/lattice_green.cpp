#include "eplb/lattice_green.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace eplb {

void scaled_bessel_ladder(double x, int nu_max, double* out) {
    if (x < 0.0) throw std::invalid_argument("scaled_bessel_ladder: x >= 0 required");
    if (x == 0.0) {
        out[0] = 1.0;
        for (int k = 1; k <= nu_max; ++k) out[k] = 0.0;
        return;
    }
    const int M = nu_max + 20 + static_cast<int>(std::ceil(1.6 * std::sqrt(x)));
    std::vector<double> y(M + 2, 0.0);
    y[M + 1] = 0.0;
    y[M] = 1e-280;
    for (int k = M; k >= 1; --k) {
        y[k - 1] = y[k + 1] + (2.0 * k / x) * y[k];
        if (std::abs(y[k - 1]) > 1e260) {
            for (int j = k - 1; j <= M + 1; ++j) y[j] *= 1e-260;
        }
    }
    // normalize with e^{-x} e^{x} = i0 + 2 sum_{k>=1} ik
    double s = y[0];
    for (int k = 1; k <= M; ++k) s += 2.0 * y[k];
    const double inv = 1.0 / s;
    for (int k = 0; k <= nu_max; ++k) out[k] = y[k] * inv;
}

namespace {

// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration.
void gauss_legendre(int n, std::vector<double>& xs, std::vector<double>& ws) {
    xs.resize(n);
    ws.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        xs[i] = x;
        ws[i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
}

struct Quadrature {
    std::vector<double> t, w;
    double T_cut;
};

Quadrature build_quadrature() {
    Quadrature q;
    const std::array<double, 9> edges = {0.0, 2.0, 8.0, 32.0, 128.0, 512.0,
                                         1024.0, 2048.0, 4096.0};
    std::vector<double> xs, ws;
    gauss_legendre(40, xs, ws);
    for (size_t p = 0; p + 1 < edges.size(); ++p) {
        const double a = edges[p], b = edges[p + 1];
        for (size_t k = 0; k < xs.size(); ++k) {
            q.t.push_back(0.5 * (a + b) + 0.5 * (b - a) * xs[k]);
            q.w.push_back(0.5 * (b - a) * ws[k]);
        }
    }
    q.T_cut = edges.back();
    return q;
}

double tail_integral(int n1, int n2, int n3, double T) {
    // int_T^inf (4 pi t)^{-3/2} [1 - A/t + B/t^2] dt with the Hankel-series
    // coefficients of the scaled Bessel product.
    const double mu1 = 4.0 * n1 * n1, mu2 = 4.0 * n2 * n2, mu3 = 4.0 * n3 * n3;
    const double a1 = (mu1 - 1.0) / 16.0, a2 = (mu2 - 1.0) / 16.0,
                 a3 = (mu3 - 1.0) / 16.0;
    const double b1 = (mu1 - 1.0) * (mu1 - 9.0) / 512.0,
                 b2 = (mu2 - 1.0) * (mu2 - 9.0) / 512.0,
                 b3 = (mu3 - 1.0) * (mu3 - 9.0) / 512.0;
    const double A = a1 + a2 + a3;
    const double B = b1 + b2 + b3 + a1 * a2 + a1 * a3 + a2 * a3;
    const double c = std::pow(4.0 * M_PI, -1.5);
    return c * (2.0 / std::sqrt(T) - (2.0 / 3.0) * A * std::pow(T, -1.5) +
                (2.0 / 5.0) * B * std::pow(T, -2.5));
}

long sorted_index(int a, int b, int c) {
    // a >= b >= c >= 0
    return static_cast<long>(a) * (a + 1) * (a + 2) / 6 +
           static_cast<long>(b) * (b + 1) / 2 + c;
}

}  // namespace

double LatticeGreen::W_integral(int n1, int n2, int n3) {
    const Quadrature q = build_quadrature();
    const int nu_max = std::max({std::abs(n1), std::abs(n2), std::abs(n3)});
    std::vector<double> lad(nu_max + 1);
    double acc = 0.0;
    for (size_t k = 0; k < q.t.size(); ++k) {
        scaled_bessel_ladder(2.0 * q.t[k], nu_max, lad.data());
        acc += q.w[k] * lad[std::abs(n1)] * lad[std::abs(n2)] * lad[std::abs(n3)];
    }
    return acc + tail_integral(std::abs(n1), std::abs(n2), std::abs(n3), q.T_cut);
}

double LatticeGreen::W_far(int n1, int n2, int n3) {
    const double u = static_cast<double>(n1) * n1;
    const double v = static_cast<double>(n2) * n2;
    const double w = static_cast<double>(n3) * n3;
    const double r2 = u + v + w;
    const double r = std::sqrt(r2);
    const double P4 = u * u + v * v + w * w;
    const double m800 = u * u * u * u + v * v * v * v + w * w * w * w;
    const double m620 = u * u * u * (v + w) + v * v * v * (u + w) + w * w * w * (u + v);
    const double m440 = u * u * v * v + u * u * w * w + v * v * w * w;
    const double m422 = u * u * v * w + v * v * u * w + w * w * u * v;

    const double t1 = 1.0 / (4.0 * M_PI * r);
    const double t3 = (5.0 * P4 - 3.0 * r2 * r2) / (32.0 * M_PI * std::pow(r2, 3.5));
    const double t5 = (23.0 / 128.0 * m800 - 61.0 / 32.0 * m620 +
                       621.0 / 128.0 * m440 - 57.0 / 32.0 * m422) /
                      (M_PI * std::pow(r2, 6.5));
    return t1 + t3 + t5;
}

LatticeGreen::LatticeGreen() {
    const int C = cutoff_;
    table_.assign(sorted_index(C, C, C) + 1, 0.0);

    const Quadrature q = build_quadrature();
    // Ladder values at every node, shared by all table entries.
    std::vector<std::vector<double>> lad(q.t.size(), std::vector<double>(C + 1));
    for (size_t k = 0; k < q.t.size(); ++k)
        scaled_bessel_ladder(2.0 * q.t[k], C, lad[k].data());

    for (int a = 0; a <= C; ++a)
        for (int b = 0; b <= a; ++b)
            for (int c = 0; c <= b; ++c) {
                double acc = 0.0;
                for (size_t k = 0; k < q.t.size(); ++k)
                    acc += q.w[k] * lad[k][a] * lad[k][b] * lad[k][c];
                table_[sorted_index(a, b, c)] = acc + tail_integral(a, b, c, q.T_cut);
            }
}

const LatticeGreen& LatticeGreen::instance() {
    static LatticeGreen g;
    return g;
}

double LatticeGreen::W(int n1, int n2, int n3) const {
    int a = std::abs(n1), b = std::abs(n2), c = std::abs(n3);
    if (a < b) std::swap(a, b);
    if (b < c) std::swap(b, c);
    if (a < b) std::swap(a, b);
    if (a <= cutoff_) return table_[sorted_index(a, b, c)];
    return W_far(a, b, c);
}

}  // namespace eplb
