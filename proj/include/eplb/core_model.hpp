#pragma once

#include <Eigen/Dense>

#include "eplb/field.hpp"
#include "eplb/params.hpp"

namespace eplb {

// ---------------------------------------------------------------------------
// Sound-speed symmetrization  n = sqrt(4*A*gamma/(gamma-1)^2) * rho^{(gamma-1)/2}
// ---------------------------------------------------------------------------

double rho_to_n_coeff(const FluidParams& p, Species s);

GridField rho_to_n(const GridField& rho, const FluidParams& p, Species s);
GridField n_to_rho(const GridField& n, const FluidParams& p, Species s);

// ---------------------------------------------------------------------------
// Flux matrices of the symmetric system.  W_point = (n, V_1..V_d) with the
// scaled velocity V = eps^{-beta} w; u_hat_point is the reference velocity at
// the same point; j is the 1-based axis.  The result is the exactly symmetric
// (d+1)x(d+1) matrix with convective diagonal w^{(j)} + uhat^{(j)} and
// off-diagonal eps^beta (gamma-1)/2 * n in the xi_j pattern.
// ---------------------------------------------------------------------------

Eigen::MatrixXd assemble_flux_matrix(const Eigen::VectorXd& W_point,
                                     const Eigen::VectorXd& u_hat_point,
                                     const FluidParams& p, Species s, int j);

// Closed-form eigenvalues {c (d-1 times), c +- eps^beta (gamma-1) n / 2} with
// c = w^{(j)} + uhat^{(j)}; returned ascending.
Eigen::VectorXd flux_matrix_eigenvalues(const Eigen::VectorXd& W_point,
                                        const Eigen::VectorXd& u_hat_point,
                                        const FluidParams& p, Species s, int j);

// ---------------------------------------------------------------------------
// Source assembly Q^1(grad phi) - Q^2(W; grad uhat), in the scaled variables:
//   density row:  -(gamma-1)/2 * n * div uhat
//   velocity row:  eps^beta q grad(phi) - (V . grad) uhat
// Reference-flow data per point, either with the exact gradient or in the
// split form grad uhat = I/(1+t) + K/(1+t)^2.
// ---------------------------------------------------------------------------

struct UhatPoint {
    Eigen::Vector3d u = Eigen::Vector3d::Zero();
    Eigen::Matrix3d grad = Eigen::Matrix3d::Zero();  // grad(a,m) = d_a uhat_m
    Eigen::Matrix3d K = Eigen::Matrix3d::Zero();
    double t = 0.0;
    bool split_form = false;  // when true, use I/(1+t) + K/(1+t)^2

    Eigen::Matrix3d effective_grad() const {
        if (!split_form) return grad;
        const double w1 = 1.0 / (1.0 + t);
        return w1 * Eigen::Matrix3d::Identity() + (w1 * w1) * K;
    }
};

struct SourcePoint {
    double density;
    Eigen::Vector3d velocity;
};

SourcePoint assemble_source_point(double n, const Eigen::Vector3d& V,
                                  const UhatPoint& uh,
                                  const Eigen::Vector3d& grad_phi,
                                  const FluidParams& p, Species s);

// Grid-level variant: returns a 4-component field (density source, velocity
// source x/y/z) for one species.  grad_phi has 3 components; uhat data are
// supplied as sampled fields (u: 3, grad: 9 with grad(a,m) at component 3a+m,
// K: 9) on the same grid.
GridField assemble_sources(const GridField& n, const GridField& V,
                           const GridField& uhat, const GridField& grad_uhat,
                           const GridField& grad_phi, double t, bool split_form,
                           const GridField* K_field, const FluidParams& p,
                           Species s);

}  // namespace eplb
