#include "eplb/burgers.hpp"

#include <cmath>
#include <sstream>

namespace eplb {

namespace {
double glue(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }
double glue_deriv(double s) {
    if (s <= 0.0) return 0.0;
    return std::exp(-1.0 / s) / (s * s);
}
}  // namespace

double bump(double r) {
    if (r <= 1.0) return 1.0;
    if (r >= 2.0) return 0.0;
    const double a = glue(2.0 - r), b = glue(r - 1.0);
    return a / (a + b);
}

double bump_deriv(double r) {
    if (r <= 1.0 || r >= 2.0) return 0.0;
    const double a = glue(2.0 - r), b = glue(r - 1.0);
    const double da = -glue_deriv(2.0 - r), db = glue_deriv(r - 1.0);
    const double s = a + b;
    return (da * s - a * (da + db)) / (s * s);
}

double spectrum_distance(const Eigen::MatrixXd& M) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(M, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("spectrum_distance: eigensolver failed");
    double dist = std::numeric_limits<double>::infinity();
    for (int i = 0; i < M.rows(); ++i) {
        const double a = es.eigenvalues()(i).real();
        const double b = es.eigenvalues()(i).imag();
        const double d = a > 0.0 ? std::hypot(a, b) : std::abs(b);
        dist = std::min(dist, d);
    }
    return dist;
}

PerturbProfile perturb_profile_from_name(const std::string& name) {
    if (name == "none") return PerturbProfile::None;
    if (name == "bump_sine") return PerturbProfile::BumpSine;
    if (name == "bump_radial") return PerturbProfile::BumpRadial;
    throw std::invalid_argument("unknown perturbation profile: " + name);
}

std::string perturb_profile_name(PerturbProfile p) {
    switch (p) {
        case PerturbProfile::None: return "none";
        case PerturbProfile::BumpSine: return "bump_sine";
        case PerturbProfile::BumpRadial: return "bump_radial";
    }
    return "none";
}

namespace {

// f and its Jacobian for the catalog profiles (unit amplitude).
void perturb_eval(PerturbProfile prof, double w, const Eigen::Vector3d& x,
                  Eigen::Vector3d* f, Eigen::Matrix3d* J) {
    if (prof == PerturbProfile::None) {
        if (f) f->setZero();
        if (J) J->setZero();
        return;
    }
    const double r = x.norm();
    const double F = bump(r / w);
    const double dF = bump_deriv(r / w) / w;
    Eigen::Vector3d gradF = Eigen::Vector3d::Zero();
    if (r > 1e-300) gradF = dF / r * x;

    if (prof == PerturbProfile::BumpRadial) {
        if (f) *f = F * x;
        if (J) {
            // d_a (F x_m) = gradF_a x_m + F delta_am
            *J = gradF * x.transpose() + F * Eigen::Matrix3d::Identity();
        }
        return;
    }
    // BumpSine: f_m = F(r/w) * sin(pi * x_{m+1 mod 3} / w)
    const double k = M_PI / w;
    Eigen::Vector3d s, c;
    for (int m = 0; m < 3; ++m) {
        const double arg = k * x((m + 1) % 3);
        s(m) = std::sin(arg);
        c(m) = std::cos(arg);
    }
    if (f) *f = F * s;
    if (J) {
        J->setZero();
        for (int m = 0; m < 3; ++m) {
            for (int a = 0; a < 3; ++a) (*J)(a, m) = gradF(a) * s(m);
            (*J)((m + 1) % 3, m) += F * k * c(m);
        }
    }
}

}  // namespace

Eigen::Vector3d BurgersInitial::u0(const Eigen::Vector3d& x) const {
    Eigen::Vector3d out = A * x + b;
    if (profile != PerturbProfile::None && amplitude != 0.0) {
        Eigen::Vector3d f;
        perturb_eval(profile, width, x, &f, nullptr);
        out += amplitude * f;
    }
    return out;
}

Eigen::Matrix3d BurgersInitial::grad_u0(const Eigen::Vector3d& x) const {
    // Jacobian convention grad(a,m) = d_a u0_m; the linear part contributes
    // A^T in this layout since (A x)_m = sum_a A(m,a) x_a.
    Eigen::Matrix3d out = A.transpose();
    if (profile != PerturbProfile::None && amplitude != 0.0) {
        Eigen::Matrix3d J;
        perturb_eval(profile, width, x, nullptr, &J);
        out += amplitude * J;
    }
    return out;
}

void BurgersInitial::check_spectrum(double R, int samples_per_axis) const {
    const int n = samples_per_axis;
    for (int iz = 0; iz < n; ++iz)
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix) {
                Eigen::Vector3d x(-R + 2.0 * R * ix / (n - 1),
                                  -R + 2.0 * R * iy / (n - 1),
                                  -R + 2.0 * R * iz / (n - 1));
                const double d = spectrum_distance(grad_u0(x));
                if (d < kappa) {
                    std::ostringstream os;
                    os << "BurgersInitial: spectrum distance " << d << " < kappa "
                       << kappa << " at sample (" << x(0) << "," << x(1) << ","
                       << x(2) << ")";
                    throw std::invalid_argument(os.str());
                }
            }
}

FootPoint UhatEngine::foot_point(double t, const Eigen::Vector3d& x,
                                 const Eigen::Vector3d* guess) const {
    const double tol = tol_rel * (1.0 + x.norm());

    auto solve_at = [&](double tt, Eigen::Vector3d y0, FootPoint* fp) -> bool {
        for (int it = 0; it < max_iters; ++it) {
            const Eigen::Vector3d F = y0 + tt * init.u0(y0) - x;
            const double res = F.norm();
            if (res <= tol) {
                fp->x0 = y0;
                fp->jac = Eigen::Matrix3d::Identity() + tt * init.grad_u0(y0);
                fp->iters = it;
                fp->residual = res;
                return true;
            }
            const Eigen::Matrix3d J = Eigen::Matrix3d::Identity() + tt * init.grad_u0(y0);
            y0 -= J.partialPivLu().solve(F);
        }
        fp->x0 = y0;
        fp->residual = (y0 + tt * init.u0(y0) - x).norm();
        fp->iters = max_iters;
        return false;
    };

    // Initial guess: exact inverse of the affine part, or caller-provided.
    Eigen::Vector3d y0;
    if (guess) {
        y0 = *guess;
    } else {
        const Eigen::Matrix3d M = Eigen::Matrix3d::Identity() + t * init.A;
        y0 = M.partialPivLu().solve(x - t * init.b);
    }

    FootPoint fp;
    if (solve_at(t, y0, &fp)) return fp;

    // Continuation fallback: walk up in t from the affine solution.
    const int steps = 16;
    Eigen::Vector3d y = x;
    for (int k = 1; k <= steps; ++k) {
        const double tt = t * k / steps;
        FootPoint stage;
        if (!solve_at(tt, y, &stage)) {
            std::ostringstream os;
            os << "foot_point: Newton failed at t=" << tt << " (target t=" << t
               << "), last residual " << stage.residual
               << "; kappa-condition violation or bad data";
            throw std::runtime_error(os.str());
        }
        y = stage.x0;
        if (k == steps) return stage;
    }
    throw std::runtime_error("foot_point: unreachable");
}

Eigen::Vector3d UhatEngine::eval_u_hat(double t, const Eigen::Vector3d& x) const {
    return init.u0(foot_point(t, x).x0);
}

Eigen::Matrix3d UhatEngine::eval_grad_u_hat(double t, const Eigen::Vector3d& x) const {
    const FootPoint fp = foot_point(t, x);
    const Eigen::Matrix3d G0 = init.grad_u0(fp.x0);
    const Eigen::Matrix3d M = Eigen::Matrix3d::Identity() + t * G0;
    return M.partialPivLu().solve(G0);
}

Eigen::Matrix3d UhatEngine::k_field(double t, const Eigen::Vector3d& x) const {
    const Eigen::Matrix3d G = eval_grad_u_hat(t, x);
    const double w = 1.0 + t;
    return w * w * G - w * Eigen::Matrix3d::Identity();
}

Eigen::Vector3d UhatEngine::eval_u_hat_trunc(double t, const Eigen::Vector3d& x,
                                             double N) const {
    if (!std::isfinite(N)) return eval_u_hat(t, x);
    return eval_u_hat(t, x) * bump(x.norm() / N);
}

Eigen::Matrix3d UhatEngine::eval_grad_u_hat_trunc(double t, const Eigen::Vector3d& x,
                                                  double N) const {
    if (!std::isfinite(N)) return eval_grad_u_hat(t, x);
    const FootPoint fp = foot_point(t, x);
    const Eigen::Vector3d u = init.u0(fp.x0);
    const Eigen::Matrix3d G0 = init.grad_u0(fp.x0);
    const Eigen::Matrix3d G =
        (Eigen::Matrix3d::Identity() + t * G0).partialPivLu().solve(G0);
    const double r = x.norm();
    const double F = bump(r / N);
    Eigen::Matrix3d out = F * G;
    if (r > 1e-300) {
        const double dF = bump_deriv(r / N) / N;
        // d_a (uhat_m F) adds  (x_a / r) F'(r/N)/N * uhat_m
        out += (dF / r) * x * u.transpose();
    }
    return out;
}

UhatField sample_uhat(const UhatEngine& eng, const GridSpec& grid, double t,
                      const UhatField* warm_start) {
    UhatField out;
    out.t = t;
    out.u = GridField(grid, 3);
    out.grad = GridField(grid, 9);
    out.K = GridField(grid, 9);
    out.div_u = GridField(grid, 1);
    out.foot = GridField(grid, 3);
    out.det_jac = GridField(grid, 1);

    const int n = grid.n_cells;
    const long m = grid.total_cells();
    const double w = 1.0 + t;
    const bool warm = warm_start && warm_start->u.spec == grid;

    for (int iz = 0; iz < n; ++iz)
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix) {
                const long i = out.u.idx(ix, iy, iz);
                const Eigen::Vector3d x(grid.coord(ix), grid.coord(iy), grid.coord(iz));
                Eigen::Vector3d guess;
                const Eigen::Vector3d* gp = nullptr;
                if (warm) {
                    guess = Eigen::Vector3d(warm_start->foot.data[i],
                                            warm_start->foot.data[m + i],
                                            warm_start->foot.data[2 * m + i]);
                    gp = &guess;
                }
                const FootPoint fp = eng.foot_point(t, x, gp);
                const Eigen::Vector3d u = eng.init.u0(fp.x0);
                const Eigen::Matrix3d G0 = eng.init.grad_u0(fp.x0);
                const Eigen::Matrix3d G = fp.jac.partialPivLu().solve(G0);

                for (int c = 0; c < 3; ++c) {
                    out.u.data[c * m + i] = u(c);
                    out.foot.data[c * m + i] = fp.x0(c);
                }
                double tr = 0.0;
                for (int a = 0; a < 3; ++a)
                    for (int c = 0; c < 3; ++c) {
                        out.grad.data[(3 * a + c) * m + i] = G(a, c);
                        out.K.data[(3 * a + c) * m + i] =
                            w * w * G(a, c) - (a == c ? w : 0.0);
                        if (a == c) tr += G(a, c);
                    }
                out.div_u.data[i] = tr;
                out.det_jac.data[i] = fp.jac.determinant();
            }
    return out;
}

std::vector<UhatDecayRow> decay_norms_u_hat(const UhatEngine& eng,
                                            const std::vector<double>& t_list,
                                            double L0, int n_cells) {
    std::vector<UhatDecayRow> rows;
    rows.reserve(t_list.size());
    for (double t : t_list) {
        // The perturbation image travels with the flow, so the sampling box
        // grows with it; resolution in foot-point space stays fixed.
        GridSpec g;
        g.half_length = L0 * (1.0 + t);
        g.n_cells = n_cells;
        GridField u = GridField::sample_vector(g, [&](double x, double y, double z) {
            const Eigen::Vector3d v = eng.eval_u_hat(t, Eigen::Vector3d(x, y, z));
            return std::array<double, 3>{v(0), v(1), v(2)};
        });

        // d1 component (3a+c) = d_a u_c; d2 component (9b + 3a + c) = d_b d_a u_c.
        GridField d1(g, 9), d2(g, 27);
        for (int c = 0; c < 3; ++c)
            for (int a = 0; a < 3; ++a)
                derivative(u, c, a, 4, d1.comp(3 * a + c));
        for (int k = 0; k < 9; ++k)
            for (int b = 0; b < 3; ++b)
                derivative(d1, k, b, 4, d2.comp(9 * b + k));

        const int n = g.n_cells;
        const double h = g.spacing();
        const long m = u.n3();
        const int m2 = 4, m3 = 6;  // stencil-valid interior margins

        double sum2 = 0.0, mx2 = 0.0;
        for (int iz = m2; iz < n - m2; ++iz)
            for (int iy = m2; iy < n - m2; ++iy)
                for (int ix = m2; ix < n - m2; ++ix) {
                    const long i = u.idx(ix, iy, iz);
                    double q = 0.0;
                    for (int k = 0; k < 27; ++k) {
                        const double v = d2.data[k * m + i];
                        q += v * v;
                    }
                    sum2 += q;
                    mx2 = std::max(mx2, q);
                }

        double sum3 = 0.0;
        {
            GridField d3ax(g, 27);
            for (int b = 0; b < 3; ++b) {
                for (int k = 0; k < 27; ++k) derivative(d2, k, b, 4, d3ax.comp(k));
                for (int iz = m3; iz < n - m3; ++iz)
                    for (int iy = m3; iy < n - m3; ++iy)
                        for (int ix = m3; ix < n - m3; ++ix) {
                            const long i = u.idx(ix, iy, iz);
                            for (int k = 0; k < 27; ++k) {
                                const double v = d3ax.data[k * m + i];
                                sum3 += v * v;
                            }
                        }
            }
        }

        UhatDecayRow row;
        row.t = t;
        row.h2_l2 = std::sqrt(sum2 * h * h * h);
        row.h3_l2 = std::sqrt(sum3 * h * h * h);
        row.h2_inf = std::sqrt(mx2);
        rows.push_back(row);
    }
    return rows;
}

double truncation_gap(const UhatEngine& eng, double t, double N, double R_box,
                      int n_samples) {
    double gap = 0.0;
    const int n = n_samples;
    for (int iz = 0; iz < n; ++iz)
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix) {
                const Eigen::Vector3d x(-R_box + 2.0 * R_box * ix / (n - 1),
                                        -R_box + 2.0 * R_box * iy / (n - 1),
                                        -R_box + 2.0 * R_box * iz / (n - 1));
                const Eigen::Matrix3d G = eng.eval_grad_u_hat(t, x);
                const Eigen::Matrix3d GN = eng.eval_grad_u_hat_trunc(t, x, N);
                gap = std::max(gap, (1.0 + t) * (GN - G).norm());
            }
    return gap;
}

}  // namespace eplb
