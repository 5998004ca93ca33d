#pragma once

#include <optional>
#include <string>
#include <vector>

#include "eplb/field.hpp"
#include "eplb/norms.hpp"
#include "eplb/params.hpp"

namespace eplb {

// Raw and weighted norms of one species at one time stamp.  The weighted
// entries carry the exact (1+t) powers:
//   n_winf = (1+t)^{-1} |n|_inf,           w_winf = (1+t)^{-1} |w|_inf,
//   n_wq   = (1+t)^{-d/q-1} |n|_q,
//   ydot_sigma = (1+t)^{sigma-d/2-1} ||W||_{Hdot^sigma},
//   Y = n_wq + ydot_1 + ydot_s + n_winf + eps^{-beta} w_winf.
struct NormRow {
    double t = 0.0;
    double n_inf = 0.0, v_inf = 0.0, n_q = 0.0;
    double hdot1 = 0.0, hdot_s = 0.0;       // of W = (n, V)
    double grad_phi_inf = 0.0, grad_phi_2 = 0.0;
    double n_winf = 0.0, w_winf = 0.0, n_wq = 0.0;
    double ydot1 = 0.0, ydot_s = 0.0;
    double Y = 0.0;
};

struct NormSeries {
    Species species;
    std::vector<NormRow> rows;
};

// Fills the weighted entries of `row` from its raw entries.
void weighted_functionals(NormRow& row, const FluidParams& p, Species s);

// Raw norms of one species state (n scalar, V vector) plus grad phi.
NormRow measure_norms(double t, const GridField& n, const GridField& V,
                      const GridField& grad_phi, const FluidParams& p, Species s,
                      HdotBackend backend);

// Least-squares slope of log(value) against log(1+t); non-positive samples
// are excluded (their count is reported).
struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // RMS of log residuals
    int used = 0;
    int excluded = 0;
};

RateFit fit_decay_rate(const std::vector<double>& t, const std::vector<double>& y);
RateFit fit_decay_rate_window(const std::vector<double>& t, const std::vector<double>& y,
                              double t_min, double t_max);

// Fitted order in eps: slope of log(err) vs log(eps).
RateFit fit_order(const std::vector<double>& eps, const std::vector<double>& err);

// ---------------------------------------------------------------------------
// Energy-ODE-inequality report.  The damped functional Y_s(t) is differenced
// and the right-hand candidates are fitted by nonnegative least squares:
//   dY/dt + a/(1+t) Y  <=  c1 Y/(1+t)^2 + c2 Y^2 + sum_nu c3_nu (1+t)^{2/(g-1)} Y^{2/(g-1)}.
// The bootstrap functional uses the fitted c1 in the role of the exponential
// constant: Z(t) = sum_nu e^{c1 t/(1+t)} (1+t)^{a_nu - eta} Y_nu(t).
// ---------------------------------------------------------------------------

struct OdeInequalityReport {
    std::vector<double> t;
    std::vector<double> lhs;        // dY/dt + a/(1+t) Y  (summed species)
    std::vector<double> rhs_fit;
    double c_damp = 0.0;            // fitted coefficient of Y/(1+t)^2
    double c_quad = 0.0;            // fitted coefficient of Y^2
    double c_pow_i = 0.0, c_pow_e = 0.0;
    double fit_residual = 0.0;      // RMS(lhs - rhs_fit) / max|lhs|
    double eta = 0.05;
    std::vector<double> Z;
    double z_ratio_max = 0.0;       // max_t Z(t)/Z(0)  (the observed c4)
    bool z_defined = false;
};

OdeInequalityReport ode_inequality_report(const std::vector<double>& t,
                                          const std::vector<double>& Y_ion,
                                          const std::vector<double>& Y_electron,
                                          const FluidParams& p, double eta = 0.05);

// ---------------------------------------------------------------------------
// Bipolar-vs-limit error meter (Gamma norm = |.|_inf + Hdot^1 + Hdot^s).
// ---------------------------------------------------------------------------

double gamma_norm(const GridField& f, int s_order, HdotBackend backend);

struct ErrorRow {
    double epsilon = 0.0;
    double t = 0.0;
    double n_err_i = 0.0;       // Gamma norm of n_i difference
    double n_err_e = 0.0;
    double u_err_e = 0.0;       // Gamma norm of u_e difference (= w_e diff)
    double u_err_i_inf = 0.0;   // |u_i - uhat_i|_inf = eps |V_i|_inf
    double u_err_i_gamma = 0.0;
    double grad_chi_inf = 0.0;
    double grad_chi_2 = 0.0;
    double electron_gamma_total = 0.0;  // n_err_e + u_err_e
};

ErrorRow error_vs_limit(const GridField& n_i_eps, const GridField& v_i_eps,
                        const GridField& n_e_eps, const GridField& v_e_eps,
                        const GridField& grad_phi_eps, const GridField& n_i_lim,
                        const GridField& n_e_lim, const GridField& v_e_lim,
                        const GridField& grad_phi_lim, const FluidParams& p,
                        HdotBackend backend);

}  // namespace eplb
