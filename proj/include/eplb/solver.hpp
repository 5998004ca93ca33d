#pragma once

#include <Eigen/Dense>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "eplb/burgers.hpp"
#include "eplb/diagnostics.hpp"
#include "eplb/field.hpp"
#include "eplb/params.hpp"
#include "eplb/poisson.hpp"

namespace eplb {

// Compactly supported density profile: rho(x) = sum_k amp_k F(|x-c_k|/w_k)^2.
struct BumpTerm {
    double amplitude = 0.0;
    double width = 1.0;
    Eigen::Vector3d center = Eigen::Vector3d::Zero();
};

struct DensityProfile {
    std::vector<BumpTerm> terms;

    double rho(const Eigen::Vector3d& x) const {
        double acc = 0.0;
        for (const auto& t : terms) {
            const double F = bump((x - t.center).norm() / t.width);
            acc += t.amplitude * F * F;
        }
        return acc;
    }
    double n0(const Eigen::Vector3d& x, const FluidParams& p, Species s) const;
    bool empty() const;
};

struct SolverConfig {
    double cfl = 0.4;
    double t_final = 1.0;
    double nu_art = 0.0;               // hyperviscosity coefficient (0 = off)
    int stencil_order = 4;
    double truncation_N = std::numeric_limits<double>::infinity();
    int record_every = 10;
    std::optional<double> fixed_dt;
    HdotBackend norm_backend = HdotBackend::Spectral;
    double floor_log_tol = 1e-12;      // undershoots beyond this (relative) are logged
    double floor_abort_tol = 1e-2;     // undershoots beyond this (relative) abort
    double support_threshold = 1e-13;  // relative cutoff for the support radius
    double support_abort_frac = 0.9;
    long max_steps = 2000000;

    void validate() const;
};

struct SymmState {
    double t = 0.0;
    GridField n_i, v_i, n_e, v_e;  // V = eps^{-beta} w
    double support_radius_i = 0.0, support_radius_e = 0.0;
};

SymmState build_initial_state(const GridSpec& grid, const FluidParams& p,
                              const DensityProfile& rho_i,
                              const DensityProfile& rho_e);

double support_radius(const GridField& n, double rel_threshold);

// Total mass int rho dx = C_nu h^3 sum n^{2/(gamma-1)}.
double total_mass(const GridField& n, const FluidParams& p, Species s);

// Gronwall-shaped a-priori support bound evaluated with measured data:
// (R0 + (W_inf + C_gal) * T) * exp(C_gal * T), with C_gal the observed
// Galilean constant sup |uhat| / (1 + |x|).
double support_growth_bound(double R0, double T, double w_inf_max,
                            double galilean_const);

enum class RunStatus { Ok, AbortNaN, AbortUndershoot, AbortSupport, AbortOther };

struct RunRecord {
    RunStatus status = RunStatus::Ok;
    std::string message;
    std::vector<double> times;
    std::vector<double> dts;
    std::vector<double> wave_speeds;
    NormSeries ion{Species::Ion, {}};
    NormSeries electron{Species::Electron, {}};
    std::vector<double> support_i, support_e;
    std::vector<double> mass_i, mass_e;
    long clipped_cells = 0;
    double worst_undershoot = 0.0;      // relative
    double galilean_const = 0.0;        // measured over the run
    double w_inf_max_i = 0.0, w_inf_max_e = 0.0;
    double support_bound_i = 0.0, support_bound_e = 0.0;
    long steps = 0;
    bool ok() const { return status == RunStatus::Ok; }
};

// Method-of-lines integrator for the symmetrized bipolar system in the scaled
// unknowns, with the reference flow evaluated exactly per stage and the
// Poisson coupling solved at every stage.  In limit mode the ion channel is
// frozen: V_i stays 0 and n_i is the characteristic transport of its initial
// profile (the electron system then sees the doping profile through Poisson).
class BipolarSolver {
  public:
    BipolarSolver(const GridSpec& grid, const FluidParams& params,
                  const BurgersInitial& u0_ion, const BurgersInitial& u0_electron,
                  const SolverConfig& config);
    ~BipolarSolver();
    BipolarSolver(const BipolarSolver&) = delete;
    BipolarSolver& operator=(const BipolarSolver&) = delete;

    RunRecord run(SymmState& state, bool limit_mode = false,
                  const DensityProfile* rho_i_profile = nullptr);

    // One Runge-Kutta step (exposed for the step-level tests); dt must obey
    // the CFL bound.  Returns the clip statistics of the step.
    struct StepStats {
        double dt = 0.0;
        double max_speed = 0.0;
        long clipped = 0;
        double worst_undershoot = 0.0;
    };
    StepStats step_rk4(SymmState& state, double dt, bool limit_mode = false,
                       const DensityProfile* rho_i_profile = nullptr);

    double max_wave_speed(const SymmState& state) const;

    // Semidiscrete right-hand side at the state's time; uhat fields must be
    // sampled at the same time.  Exposed for the oracle cross-checks.
    void rhs_semidiscrete(const SymmState& state, const UhatField& uhat_i,
                          const UhatField& uhat_e, SymmState& deriv,
                          bool limit_mode = false) const;

    PoissonSolution solve_poisson(const GridField& n_i, const GridField& n_e) const;

    const GridSpec& grid() const { return grid_; }
    const FluidParams& params() const { return params_; }
    const SolverConfig& config() const { return config_; }
    const UhatEngine& engine(Species s) const {
        return s == Species::Ion ? eng_i_ : eng_e_;
    }

    // Cached reference-flow sample at time t (exact-time hit or fresh solve
    // warm-started from the nearest cached sample).
    const UhatField& stage_sample(Species s, double t) const;

  private:
    GridSpec grid_;
    FluidParams params_;
    SolverConfig config_;
    UhatEngine eng_i_, eng_e_;
    FreeSpacePoisson poisson_;
    GridField bump_N_;  // F(|x|/N) sampled once; all-ones when N = inf
    struct SamplerState;
    std::unique_ptr<SamplerState> sampler_;

    void species_rhs(const GridField& n, const GridField& V, const UhatField& uh,
                     const GridField& grad_phi, Species s, GridField& dn,
                     GridField& dV) const;
    void limit_fill_ni(SymmState& s, const UhatField& ui,
                       const DensityProfile& rho_i_profile) const;
    long clip_negative(GridField& n, double* worst) const;
};

}  // namespace eplb
