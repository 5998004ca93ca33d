#pragma once

#include "eplb/burgers.hpp"
#include "eplb/solver.hpp"

namespace eplb {

// Closed-form ion density of the limit transport equation along the reference
// flow:  n_bar(t, x) = n0(x0) * det(I + t grad u0(x0))^{-(gamma_i-1)/2}.
double ion_density_exact(const UhatEngine& eng_i, const DensityProfile& rho_i0,
                         const FluidParams& p, double t, const Eigen::Vector3d& x);

GridField ion_density_exact_field(const UhatEngine& eng_i,
                                  const DensityProfile& rho_i0,
                                  const FluidParams& p, const GridSpec& grid,
                                  double t);

// Doping profile b(t,x) = C_i * n_bar_i(t,x)^{2/(gamma_i-1)} built from the
// characteristic ion solution.
struct DopingProfile {
    UhatEngine eng_i;
    DensityProfile rho_i0;
    FluidParams params;

    double operator()(double t, const Eigen::Vector3d& x) const;
    GridField field(const GridSpec& grid, double t) const;
};

// Electron limit system integrated with the bipolar kernel (ion channel
// frozen to the characteristic transport); returns the run record, the final
// state, and exposes u_e = w_e + uhat_e through the state's V_e (beta_e = 0).
struct ElectronLimitResult {
    RunRecord record;
    SymmState final_state;
};

ElectronLimitResult solve_electron_limit(const GridSpec& grid,
                                         const FluidParams& params,
                                         const BurgersInitial& u0_ion,
                                         const BurgersInitial& u0_electron,
                                         const SolverConfig& config,
                                         const DensityProfile& rho_i0,
                                         const DensityProfile& rho_e0);

// Residual of the recombined limit form evaluated on two snapshots
// (symmetric time differencing):
//   d_t n + u.grad n + (gamma-1)/2 n div u  with  u = V_e + uhat_e.
// Returns the max-norm of the residual over the support interior.
double recombined_form_residual(const SymmState& before, const SymmState& after,
                                const UhatEngine& eng_e, const FluidParams& p,
                                int stencil_order);

}  // namespace eplb
