#include "eplb/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

namespace eplb {

void weighted_functionals(NormRow& row, const FluidParams& p, Species s) {
    const double w = 1.0 + row.t;
    const double d = p.d;
    const double q = p.q_lq;
    row.n_winf = row.n_inf / w;
    // w = eps^beta V, so |w|_inf = eps^beta |V|_inf and eps^{-beta} w^inf
    // is just (1+t)^{-1} |V|_inf.
    row.w_winf = p.eps_beta(s) * row.v_inf / w;
    row.n_wq = std::pow(w, -d / q - 1.0) * row.n_q;
    row.ydot1 = std::pow(w, 1.0 - d / 2.0 - 1.0) * row.hdot1;
    row.ydot_s = std::pow(w, p.s_order - d / 2.0 - 1.0) * row.hdot_s;
    row.Y = row.n_wq + row.ydot1 + row.ydot_s + row.n_winf +
            row.w_winf / p.eps_beta(s);
}

NormRow measure_norms(double t, const GridField& n, const GridField& V,
                      const GridField& grad_phi, const FluidParams& p, Species s,
                      HdotBackend backend) {
    NormRow row;
    row.t = t;
    row.n_inf = norm_inf(n);
    row.v_inf = norm_inf(V);
    row.n_q = norm_q(n, p.q_lq);
    // ||W||_{Hdot^sigma}^2 = ||n||^2 + ||V||^2 per component
    const double n1 = norm_hdot(n, 1, backend), v1 = norm_hdot(V, 1, backend);
    const double ns = norm_hdot(n, p.s_order, backend),
                 vs = norm_hdot(V, p.s_order, backend);
    row.hdot1 = std::sqrt(n1 * n1 + v1 * v1);
    row.hdot_s = std::sqrt(ns * ns + vs * vs);
    row.grad_phi_inf = norm_inf(grad_phi);
    row.grad_phi_2 = norm_l2(grad_phi);
    weighted_functionals(row, p, s);
    return row;
}

RateFit fit_decay_rate(const std::vector<double>& t, const std::vector<double>& y) {
    if (t.size() != y.size())
        throw std::invalid_argument("fit_decay_rate: size mismatch");
    RateFit fit;
    std::vector<double> lx, ly;
    for (size_t i = 0; i < t.size(); ++i) {
        if (y[i] > 0.0) {
            lx.push_back(std::log1p(t[i]));
            ly.push_back(std::log(y[i]));
        } else {
            ++fit.excluded;
        }
    }
    fit.used = static_cast<int>(lx.size());
    if (fit.used < 2) return fit;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < fit.used; ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double nn = fit.used;
    const double det = nn * sxx - sx * sx;
    if (std::abs(det) < 1e-300) return fit;
    fit.slope = (nn * sxy - sx * sy) / det;
    fit.intercept = (sy * sxx - sx * sxy) / det;
    double rss = 0.0;
    for (int i = 0; i < fit.used; ++i) {
        const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
        rss += r * r;
    }
    fit.residual = std::sqrt(rss / nn);
    return fit;
}

RateFit fit_decay_rate_window(const std::vector<double>& t,
                              const std::vector<double>& y, double t_min,
                              double t_max) {
    std::vector<double> ts, ys;
    for (size_t i = 0; i < t.size(); ++i)
        if (t[i] >= t_min && t[i] <= t_max) {
            ts.push_back(t[i]);
            ys.push_back(y[i]);
        }
    return fit_decay_rate(ts, ys);
}

RateFit fit_order(const std::vector<double>& eps, const std::vector<double>& err) {
    // same regression with log(eps) as abscissa
    if (eps.size() != err.size())
        throw std::invalid_argument("fit_order: size mismatch");
    RateFit fit;
    std::vector<double> lx, ly;
    for (size_t i = 0; i < eps.size(); ++i) {
        if (err[i] > 0.0 && eps[i] > 0.0) {
            lx.push_back(std::log(eps[i]));
            ly.push_back(std::log(err[i]));
        } else {
            ++fit.excluded;
        }
    }
    fit.used = static_cast<int>(lx.size());
    if (fit.used < 2) return fit;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < fit.used; ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double nn = fit.used;
    const double det = nn * sxx - sx * sx;
    if (std::abs(det) < 1e-300) return fit;
    fit.slope = (nn * sxy - sx * sy) / det;
    fit.intercept = (sy * sxx - sx * sxy) / det;
    double rss = 0.0;
    for (int i = 0; i < fit.used; ++i) {
        const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
        rss += r * r;
    }
    fit.residual = std::sqrt(rss / nn);
    return fit;
}

namespace {

// Nonnegative least squares by cyclic coordinate descent on the normal
// equations; deterministic and plenty for 4 variables.
std::vector<double> nnls(const std::vector<std::vector<double>>& cols,
                         const std::vector<double>& rhs, int iters = 400) {
    const int k = static_cast<int>(cols.size());
    const size_t m = rhs.size();
    std::vector<double> c(k, 0.0), g(k, 0.0);
    std::vector<std::vector<double>> G(k, std::vector<double>(k, 0.0));
    for (int a = 0; a < k; ++a) {
        for (int b = 0; b < k; ++b) {
            double s = 0.0;
            for (size_t i = 0; i < m; ++i) s += cols[a][i] * cols[b][i];
            G[a][b] = s;
        }
        double s = 0.0;
        for (size_t i = 0; i < m; ++i) s += cols[a][i] * rhs[i];
        g[a] = s;
    }
    for (int it = 0; it < iters; ++it) {
        for (int a = 0; a < k; ++a) {
            if (G[a][a] <= 0.0) continue;
            double num = g[a];
            for (int b = 0; b < k; ++b)
                if (b != a) num -= G[a][b] * c[b];
            c[a] = std::max(0.0, num / G[a][a]);
        }
    }
    return c;
}

}  // namespace

OdeInequalityReport ode_inequality_report(const std::vector<double>& t,
                                          const std::vector<double>& Y_ion,
                                          const std::vector<double>& Y_electron,
                                          const FluidParams& p, double eta) {
    const size_t m = t.size();
    if (Y_ion.size() != m || Y_electron.size() != m || m < 5)
        throw std::invalid_argument("ode_inequality_report: need >= 5 aligned samples");

    OdeInequalityReport rep;
    rep.t = t;
    rep.eta = eta;

    std::vector<double> Y(m);
    for (size_t i = 0; i < m; ++i) Y[i] = Y_ion[i] + Y_electron[i];

    const double a = std::min(p.a_decay(Species::Ion), p.a_decay(Species::Electron));
    rep.lhs.resize(m, 0.0);
    for (size_t i = 0; i < m; ++i) {
        double dY;
        if (i == 0)
            dY = (Y[1] - Y[0]) / (t[1] - t[0]);
        else if (i == m - 1)
            dY = (Y[m - 1] - Y[m - 2]) / (t[m - 1] - t[m - 2]);
        else
            dY = (Y[i + 1] - Y[i - 1]) / (t[i + 1] - t[i - 1]);
        rep.lhs[i] = dY + a / (1.0 + t[i]) * Y[i];
    }

    const double pi_exp = 2.0 / (p.gamma_i - 1.0);
    const double pe_exp = 2.0 / (p.gamma_e - 1.0);
    std::vector<std::vector<double>> cols(4, std::vector<double>(m));
    for (size_t i = 0; i < m; ++i) {
        const double w = 1.0 + t[i];
        cols[0][i] = Y[i] / (w * w);
        cols[1][i] = Y[i] * Y[i];
        cols[2][i] = std::pow(w, pi_exp) * std::pow(Y[i], pi_exp);
        cols[3][i] = std::pow(w, pe_exp) * std::pow(Y[i], pe_exp);
    }
    const std::vector<double> c = nnls(cols, rep.lhs);
    rep.c_damp = c[0];
    rep.c_quad = c[1];
    rep.c_pow_i = c[2];
    rep.c_pow_e = c[3];

    rep.rhs_fit.resize(m);
    double mx = 0.0, rss = 0.0;
    for (size_t i = 0; i < m; ++i) {
        rep.rhs_fit[i] = c[0] * cols[0][i] + c[1] * cols[1][i] + c[2] * cols[2][i] +
                         c[3] * cols[3][i];
        const double r = rep.lhs[i] - rep.rhs_fit[i];
        rss += r * r;
        mx = std::max(mx, std::abs(rep.lhs[i]));
    }
    rep.fit_residual = mx > 0.0 ? std::sqrt(rss / m) / mx : 0.0;

    const double ai = p.a_decay(Species::Ion), ae = p.a_decay(Species::Electron);
    rep.Z.resize(m);
    for (size_t i = 0; i < m; ++i) {
        const double w = 1.0 + t[i];
        const double e = std::exp(rep.c_damp * t[i] / w);
        rep.Z[i] = e * (std::pow(w, ai - eta) * Y_ion[i] +
                        std::pow(w, ae - eta) * Y_electron[i]);
    }
    if (rep.Z[0] > 0.0) {
        rep.z_defined = true;
        for (size_t i = 0; i < m; ++i)
            rep.z_ratio_max = std::max(rep.z_ratio_max, rep.Z[i] / rep.Z[0]);
    }
    return rep;
}

double gamma_norm(const GridField& f, int s_order, HdotBackend backend) {
    return norm_inf(f) + norm_hdot(f, 1, backend) + norm_hdot(f, s_order, backend);
}

namespace {
GridField field_diff(const GridField& a, const GridField& b) {
    if (!(a.spec == b.spec) || a.components != b.components)
        throw std::invalid_argument("error_vs_limit: grid mismatch");
    GridField d = a;
    for (size_t i = 0; i < d.data.size(); ++i) d.data[i] -= b.data[i];
    return d;
}
}  // namespace

ErrorRow error_vs_limit(const GridField& n_i_eps, const GridField& v_i_eps,
                        const GridField& n_e_eps, const GridField& v_e_eps,
                        const GridField& grad_phi_eps, const GridField& n_i_lim,
                        const GridField& n_e_lim, const GridField& v_e_lim,
                        const GridField& grad_phi_lim, const FluidParams& p,
                        HdotBackend backend) {
    ErrorRow row;
    row.epsilon = p.epsilon;
    const int s = p.s_order;

    row.n_err_i = gamma_norm(field_diff(n_i_eps, n_i_lim), s, backend);
    row.n_err_e = gamma_norm(field_diff(n_e_eps, n_e_lim), s, backend);
    row.u_err_e = gamma_norm(field_diff(v_e_eps, v_e_lim), s, backend);

    // u_i - uhat_i = w_i = eps^{beta_i} V_i; the limit ion velocity is uhat_i.
    GridField wi = v_i_eps;
    for (double& v : wi.data) v *= p.eps_beta(Species::Ion);
    row.u_err_i_inf = norm_inf(wi);
    row.u_err_i_gamma = gamma_norm(wi, s, backend);

    GridField chi = field_diff(grad_phi_eps, grad_phi_lim);
    row.grad_chi_inf = norm_inf(chi);
    row.grad_chi_2 = norm_l2(chi);

    row.electron_gamma_total = row.n_err_e + row.u_err_e;
    return row;
}

}  // namespace eplb
