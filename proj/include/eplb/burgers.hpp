#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "eplb/field.hpp"
#include "eplb/params.hpp"

namespace eplb {

// Smooth bump: F(r) = 1 for r <= 1, 0 for r >= 2, glued with
// g(s) = exp(-1/s) in between; C^inf and symmetric about r = 3/2.
double bump(double r);
double bump_deriv(double r);

// Distance of the spectrum of M to the non-positive real axis:
// min over eigenvalues a+bi of (a > 0 ? sqrt(a^2+b^2) : |b|).
double spectrum_distance(const Eigen::MatrixXd& M);

// ---------------------------------------------------------------------------
// Initial velocity u0(x) = A x + b + lambda2 * f(x) with f from a fixed
// catalog of compactly supported C^inf profiles, so runs are reproducible.
// Derivatives are analytic; the kappa-condition is checked on sample points.
// ---------------------------------------------------------------------------

enum class PerturbProfile { None, BumpSine, BumpRadial };

PerturbProfile perturb_profile_from_name(const std::string& name);
std::string perturb_profile_name(PerturbProfile p);

struct BurgersInitial {
    Eigen::Matrix3d A = Eigen::Matrix3d::Identity();
    Eigen::Vector3d b = Eigen::Vector3d::Zero();
    PerturbProfile profile = PerturbProfile::None;
    double amplitude = 0.0;  // lambda2
    double width = 1.0;
    double kappa = 0.25;     // required spectral margin

    Eigen::Vector3d u0(const Eigen::Vector3d& x) const;
    Eigen::Matrix3d grad_u0(const Eigen::Vector3d& x) const;  // Jacobian d u0_a / d x_m at (a,m)

    // Verifies Dist(Sp(grad u0), R_-) >= kappa on a lattice of sample points
    // covering [-R, R]^3; throws std::invalid_argument on violation.
    void check_spectrum(double R, int samples_per_axis = 9) const;
};

// ---------------------------------------------------------------------------
// Characteristic evaluation: x0 solves x0 + t u0(x0) = x by Newton iteration.
// ---------------------------------------------------------------------------

struct FootPoint {
    Eigen::Vector3d x0;
    Eigen::Matrix3d jac;  // I + t grad_u0(x0)
    int iters = 0;
    double residual = 0.0;
};

struct UhatEngine {
    BurgersInitial init;
    int max_iters = 50;
    double tol_rel = 1e-12;  // residual <= tol_rel * (1 + |x|)

    FootPoint foot_point(double t, const Eigen::Vector3d& x,
                         const Eigen::Vector3d* guess = nullptr) const;

    Eigen::Vector3d flow_forward(const Eigen::Vector3d& x0, double t) const {
        return x0 + t * init.u0(x0);
    }
    Eigen::Vector3d eval_u_hat(double t, const Eigen::Vector3d& x) const;
    // Jacobian convention grad(a,m) = d_a uhat_m  (row index = derivative axis).
    Eigen::Matrix3d eval_grad_u_hat(double t, const Eigen::Vector3d& x) const;
    Eigen::Matrix3d k_field(double t, const Eigen::Vector3d& x) const;

    // Truncated reference velocity uhat^N = uhat * F(|x|/N) and its gradient.
    Eigen::Vector3d eval_u_hat_trunc(double t, const Eigen::Vector3d& x, double N) const;
    Eigen::Matrix3d eval_grad_u_hat_trunc(double t, const Eigen::Vector3d& x, double N) const;
};

// Grid samples of the reference flow at one time, shared by the flux and
// source assembly.  grad/K use component layout 3a+m; det_jac carries
// det(I + t grad u0(x0)) for the ion transport closed form.
struct UhatField {
    double t = 0.0;
    GridField u;        // 3 comps
    GridField grad;     // 9 comps
    GridField K;        // 9 comps
    GridField div_u;    // 1 comp
    GridField foot;     // 3 comps
    GridField det_jac;  // 1 comp
};

UhatField sample_uhat(const UhatEngine& eng, const GridSpec& grid, double t,
                      const UhatField* warm_start = nullptr);

// ---------------------------------------------------------------------------
// Decay diagnostics for Lemma-8-style rates.  Norms of the sigma-th
// derivative tensor of uhat are measured on a box that grows with the flow,
// L(t) = L0 * (1+t), by 4th-order differencing of the sampled field; the L2
// and max norms are taken over the stencil-valid interior.
// ---------------------------------------------------------------------------

struct UhatDecayRow {
    double t;
    double h2_l2;      // |grad^2 uhat|_2
    double h3_l2;      // |grad^3 uhat|_2
    double h2_inf;     // |grad^2 uhat|_inf
};

std::vector<UhatDecayRow> decay_norms_u_hat(const UhatEngine& eng,
                                            const std::vector<double>& t_list,
                                            double L0, int n_cells);

// sup over the sampled box of (1+t) |grad uhat^N - grad uhat| (Frobenius).
double truncation_gap(const UhatEngine& eng, double t, double N, double R_box,
                      int n_samples);

}  // namespace eplb
