#include "eplb/solver.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "eplb/core_model.hpp"

namespace eplb {

double DensityProfile::n0(const Eigen::Vector3d& x, const FluidParams& p,
                          Species s) const {
    return rho_to_n_coeff(p, s) * std::pow(rho(x), (p.gamma(s) - 1.0) / 2.0);
}

bool DensityProfile::empty() const {
    for (const auto& t : terms)
        if (t.amplitude != 0.0) return false;
    return true;
}

void SolverConfig::validate() const {
    if (!(cfl > 0.0 && cfl < 1.0))
        throw std::invalid_argument("SolverConfig: cfl must lie in (0,1)");
    if (nu_art < 0.0) throw std::invalid_argument("SolverConfig: nu_art >= 0");
    if (stencil_order != 2 && stencil_order != 4 && stencil_order != 6)
        throw std::invalid_argument("SolverConfig: stencil order in {2,4,6}");
    if (record_every < 1) throw std::invalid_argument("SolverConfig: record_every >= 1");
}

SymmState build_initial_state(const GridSpec& grid, const FluidParams& p,
                              const DensityProfile& rho_i,
                              const DensityProfile& rho_e) {
    SymmState st;
    st.t = 0.0;
    st.n_i = GridField::sample_scalar(grid, [&](double x, double y, double z) {
        return rho_i.n0(Eigen::Vector3d(x, y, z), p, Species::Ion);
    });
    st.n_e = GridField::sample_scalar(grid, [&](double x, double y, double z) {
        return rho_e.n0(Eigen::Vector3d(x, y, z), p, Species::Electron);
    });
    st.v_i = GridField(grid, 3);
    st.v_e = GridField(grid, 3);
    st.support_radius_i = support_radius(st.n_i, 1e-13);
    st.support_radius_e = support_radius(st.n_e, 1e-13);
    return st;
}

double support_radius(const GridField& n, double rel_threshold) {
    const int nc = n.spec.n_cells;
    const double thr = rel_threshold * n.max_abs();
    double r2max = 0.0;
    for (int iz = 0; iz < nc; ++iz)
        for (int iy = 0; iy < nc; ++iy)
            for (int ix = 0; ix < nc; ++ix)
                if (n.at(0, ix, iy, iz) > thr) {
                    const double x = n.spec.coord(ix), y = n.spec.coord(iy),
                                 z = n.spec.coord(iz);
                    r2max = std::max(r2max, x * x + y * y + z * z);
                }
    return std::sqrt(r2max);
}

double total_mass(const GridField& n, const FluidParams& p, Species s) {
    const double pw = 2.0 / (p.gamma(s) - 1.0);
    const double h = n.spec.spacing();
    double acc = 0.0;
    for (double v : n.data) acc += std::pow(std::max(v, 0.0), pw);
    return p.poisson_coeff(s) * acc * h * h * h;
}

double support_growth_bound(double R0, double T, double w_inf_max,
                            double galilean_const) {
    return (R0 + (w_inf_max + galilean_const) * T) * std::exp(galilean_const * T);
}

// ---------------------------------------------------------------------------

struct StageCache {
    static constexpr int kSlots = 4;
    std::array<UhatField, kSlots> slot;
    std::array<bool, kSlots> valid{};
    int next = 0;

    const UhatField* find(double t) const {
        for (int k = 0; k < kSlots; ++k)
            if (valid[k] && std::abs(slot[k].t - t) <= 1e-14 * (1.0 + std::abs(t)))
                return &slot[k];
        return nullptr;
    }
    const UhatField* nearest(double t) const {
        const UhatField* best = nullptr;
        double dist = std::numeric_limits<double>::infinity();
        for (int k = 0; k < kSlots; ++k)
            if (valid[k] && std::abs(slot[k].t - t) < dist) {
                dist = std::abs(slot[k].t - t);
                best = &slot[k];
            }
        return best;
    }
    const UhatField& put(UhatField&& f) {
        slot[next] = std::move(f);
        valid[next] = true;
        const UhatField& ref = slot[next];
        next = (next + 1) % kSlots;
        return ref;
    }
};

struct BipolarSolver::SamplerState {
    StageCache ion, electron;
};

BipolarSolver::BipolarSolver(const GridSpec& grid, const FluidParams& params,
                             const BurgersInitial& u0_ion,
                             const BurgersInitial& u0_electron,
                             const SolverConfig& config)
    : grid_(grid), params_(params), config_(config), poisson_(grid),
      sampler_(new SamplerState) {
    grid_.validate();
    params_.validate();
    config_.validate();
    eng_i_.init = u0_ion;
    eng_e_.init = u0_electron;

    bump_N_ = GridField(grid_, 1);
    const double N = config_.truncation_N;
    for (int iz = 0; iz < grid_.n_cells; ++iz)
        for (int iy = 0; iy < grid_.n_cells; ++iy)
            for (int ix = 0; ix < grid_.n_cells; ++ix) {
                const double x = grid_.coord(ix), y = grid_.coord(iy), z = grid_.coord(iz);
                bump_N_.at(0, ix, iy, iz) =
                    std::isfinite(N) ? bump(std::sqrt(x * x + y * y + z * z) / N) : 1.0;
            }
}

BipolarSolver::~BipolarSolver() = default;

const UhatField& BipolarSolver::stage_sample(Species s, double t) const {
    StageCache& cache = s == Species::Ion ? sampler_->ion : sampler_->electron;
    if (const UhatField* hit = cache.find(t)) return *hit;
    const UhatField* warm = cache.nearest(t);
    UhatField f = sample_uhat(s == Species::Ion ? eng_i_ : eng_e_, grid_, t, warm);
    return cache.put(std::move(f));
}

PoissonSolution BipolarSolver::solve_poisson(const GridField& n_i,
                                             const GridField& n_e) const {
    // Stage states can dip slightly negative before the step-level floor, so
    // clamp inside the coupling (the public rhs_from_densities stays strict).
    const double Ci = params_.poisson_coeff(Species::Ion);
    const double Ce = params_.poisson_coeff(Species::Electron);
    const double pi_exp = 2.0 / (params_.gamma_i - 1.0);
    const double pe_exp = 2.0 / (params_.gamma_e - 1.0);
    GridField f(grid_, 1);
    for (long k = 0; k < f.n3(); ++k) {
        f.data[k] = Ci * std::pow(std::max(n_i.data[k], 0.0), pi_exp) -
                    Ce * std::pow(std::max(n_e.data[k], 0.0), pe_exp);
    }
    return poisson_.solve(f);
}

void BipolarSolver::species_rhs(const GridField& n, const GridField& V,
                                const UhatField& uh, const GridField& grad_phi,
                                Species s, GridField& dn, GridField& dV) const {
    const long m = n.n3();
    const int ord = config_.stencil_order;
    const double eb = params_.eps_beta(s);
    const double half_gm1 = (params_.gamma(s) - 1.0) / 2.0;
    const double ebq = eb * params_.charge(s);

    GridField grad_n = gradient(n, ord);
    GridField gradV(grid_, 9);  // component 3a+c = d_a V_c
    for (int c = 0; c < 3; ++c)
        for (int a = 0; a < 3; ++a)
            derivative(V, c, a, ord, gradV.comp(3 * a + c));

    const double* FN = bump_N_.comp(0);
    for (long i = 0; i < m; ++i) {
        double conv[3];
        for (int a = 0; a < 3; ++a)
            conv[a] = eb * V.data[a * m + i] + FN[i] * uh.u.data[a * m + i];

        const double divV = gradV.data[0 * m + i] + gradV.data[4 * m + i] +
                            gradV.data[8 * m + i];
        double acc_n = -half_gm1 * n.data[i] * (eb * divV + uh.div_u.data[i]);
        for (int a = 0; a < 3; ++a) acc_n -= conv[a] * grad_n.data[a * m + i];
        dn.data[i] = acc_n;

        for (int c = 0; c < 3; ++c) {
            double acc = ebq * grad_phi.data[c * m + i] -
                         eb * half_gm1 * n.data[i] * grad_n.data[c * m + i];
            for (int a = 0; a < 3; ++a) {
                acc -= conv[a] * gradV.data[(3 * a + c) * m + i];
                acc -= V.data[a * m + i] * uh.grad.data[(3 * a + c) * m + i];
            }
            dV.data[c * m + i] = acc;
        }
    }

    if (config_.nu_art > 0.0) {
        const double h = grid_.spacing();
        const double coef = -config_.nu_art * h * h * h * h;
        GridField lap = laplacian_7pt(n);
        GridField lap2 = laplacian_7pt(lap);
        for (long i = 0; i < m; ++i) dn.data[i] += coef * lap2.data[i];
        for (int c = 0; c < 3; ++c) {
            GridField vc(grid_, 1);
            std::copy(V.comp(c), V.comp(c) + m, vc.comp(0));
            GridField l1 = laplacian_7pt(vc);
            GridField l2 = laplacian_7pt(l1);
            for (long i = 0; i < m; ++i) dV.data[c * m + i] += coef * l2.data[i];
        }
    }
}

void BipolarSolver::rhs_semidiscrete(const SymmState& state, const UhatField& uhat_i,
                                     const UhatField& uhat_e, SymmState& deriv,
                                     bool limit_mode) const {
    const PoissonSolution ps = solve_poisson(state.n_i, state.n_e);
    if (!ps.phi.all_finite())
        throw std::runtime_error("rhs_semidiscrete: Poisson solve produced non-finite values");

    species_rhs(state.n_e, state.v_e, uhat_e, ps.grad_phi, Species::Electron,
                deriv.n_e, deriv.v_e);
    if (limit_mode) {
        deriv.n_i.fill(0.0);
        deriv.v_i.fill(0.0);
    } else {
        species_rhs(state.n_i, state.v_i, uhat_i, ps.grad_phi, Species::Ion,
                    deriv.n_i, deriv.v_i);
    }
}

double BipolarSolver::max_wave_speed(const SymmState& state) const {
    const long m = state.n_i.n3();
    const double* FN = bump_N_.comp(0);
    double speed = 0.0;
    for (int si = 0; si < 2; ++si) {
        const Species s = si == 0 ? Species::Ion : Species::Electron;
        const GridField& n = si == 0 ? state.n_i : state.n_e;
        const GridField& V = si == 0 ? state.v_i : state.v_e;
        const double eb = params_.eps_beta(s);
        const double gm1 = params_.gamma(s) - 1.0;
        const UhatField& uh = stage_sample(s, state.t);
        for (long i = 0; i < m; ++i) {
            const double sound = eb * gm1 * std::max(n.data[i], 0.0) / 2.0;
            for (int a = 0; a < 3; ++a) {
                const double c =
                    std::abs(eb * V.data[a * m + i] + FN[i] * uh.u.data[a * m + i]) +
                    sound;
                speed = std::max(speed, c);
            }
        }
    }
    return speed;
}

long BipolarSolver::clip_negative(GridField& n, double* worst) const {
    const double mx = n.max_abs();
    long clipped = 0;
    if (mx <= 0.0) {
        for (double& v : n.data)
            if (v < 0.0) v = 0.0;
        return 0;
    }
    for (double& v : n.data) {
        if (v < 0.0) {
            const double rel = -v / mx;
            *worst = std::max(*worst, rel);
            if (rel > config_.floor_log_tol) ++clipped;
            v = 0.0;
        }
    }
    return clipped;
}

namespace {

void state_axpy(SymmState& y, double a, const SymmState& x) {
    y.n_i.axpy(a, x.n_i);
    y.v_i.axpy(a, x.v_i);
    y.n_e.axpy(a, x.n_e);
    y.v_e.axpy(a, x.v_e);
}

}  // namespace

void BipolarSolver::limit_fill_ni(SymmState& s, const UhatField& ui,
                                  const DensityProfile& rho_i_profile) const {
    const long m = s.n_i.n3();
    const double expo = -(params_.gamma_i - 1.0) / 2.0;
    for (long i = 0; i < m; ++i) {
        const Eigen::Vector3d x0(ui.foot.data[i], ui.foot.data[m + i],
                                 ui.foot.data[2 * m + i]);
        s.n_i.data[i] = rho_i_profile.n0(x0, params_, Species::Ion) *
                        std::pow(ui.det_jac.data[i], expo);
    }
}

BipolarSolver::StepStats BipolarSolver::step_rk4(SymmState& state, double dt,
                                                 bool limit_mode,
                                                 const DensityProfile* rho_i_profile) {
    if (limit_mode && !rho_i_profile)
        throw std::invalid_argument("step_rk4: limit mode requires the ion profile");
    const double t0 = state.t;
    StepStats stats;
    stats.dt = dt;

    const UhatField& ui0 = stage_sample(Species::Ion, t0);
    const UhatField& ue0 = stage_sample(Species::Electron, t0);
    const UhatField& ui1 = stage_sample(Species::Ion, t0 + 0.5 * dt);
    const UhatField& ue1 = stage_sample(Species::Electron, t0 + 0.5 * dt);
    const UhatField& ui2 = stage_sample(Species::Ion, t0 + dt);
    const UhatField& ue2 = stage_sample(Species::Electron, t0 + dt);

    SymmState k1 = state, k2 = state, k3 = state, k4 = state;  // shape copies
    SymmState tmp = state;

    if (limit_mode) limit_fill_ni(state, ui0, *rho_i_profile);
    rhs_semidiscrete(state, ui0, ue0, k1, limit_mode);

    tmp = state;
    state_axpy(tmp, 0.5 * dt, k1);
    tmp.t = t0 + 0.5 * dt;
    if (limit_mode) limit_fill_ni(tmp, ui1, *rho_i_profile);
    rhs_semidiscrete(tmp, ui1, ue1, k2, limit_mode);

    tmp = state;
    state_axpy(tmp, 0.5 * dt, k2);
    tmp.t = t0 + 0.5 * dt;
    if (limit_mode) limit_fill_ni(tmp, ui1, *rho_i_profile);
    rhs_semidiscrete(tmp, ui1, ue1, k3, limit_mode);

    tmp = state;
    state_axpy(tmp, dt, k3);
    tmp.t = t0 + dt;
    if (limit_mode) limit_fill_ni(tmp, ui2, *rho_i_profile);
    rhs_semidiscrete(tmp, ui2, ue2, k4, limit_mode);

    state_axpy(state, dt / 6.0, k1);
    state_axpy(state, dt / 3.0, k2);
    state_axpy(state, dt / 3.0, k3);
    state_axpy(state, dt / 6.0, k4);
    state.t = t0 + dt;
    if (limit_mode) limit_fill_ni(state, ui2, *rho_i_profile);

    double worst = 0.0;
    stats.clipped += clip_negative(state.n_i, &worst);
    stats.clipped += clip_negative(state.n_e, &worst);
    stats.worst_undershoot = worst;

    state.support_radius_i = support_radius(state.n_i, config_.support_threshold);
    state.support_radius_e = support_radius(state.n_e, config_.support_threshold);
    return stats;
}

RunRecord BipolarSolver::run(SymmState& state, bool limit_mode,
                             const DensityProfile* rho_i_profile) {
    RunRecord rec;
    const double L = grid_.half_length;
    const double R0_i = state.support_radius_i;
    const double R0_e = state.support_radius_e;
    const double h = grid_.spacing();
    double last_recorded = -1.0;

    auto record = [&](const SymmState& s) {
        if (s.t == last_recorded) return;
        last_recorded = s.t;
        const PoissonSolution ps = solve_poisson(s.n_i, s.n_e);
        rec.times.push_back(s.t);
        rec.ion.rows.push_back(measure_norms(s.t, s.n_i, s.v_i, ps.grad_phi, params_,
                                             Species::Ion, config_.norm_backend));
        rec.electron.rows.push_back(measure_norms(s.t, s.n_e, s.v_e, ps.grad_phi,
                                                  params_, Species::Electron,
                                                  config_.norm_backend));
        rec.support_i.push_back(s.support_radius_i);
        rec.support_e.push_back(s.support_radius_e);
        rec.mass_i.push_back(total_mass(s.n_i, params_, Species::Ion));
        rec.mass_e.push_back(total_mass(s.n_e, params_, Species::Electron));
    };

    auto update_bound_data = [&](const SymmState& s) {
        const UhatField& ui = stage_sample(Species::Ion, s.t);
        const long m = s.n_i.n3();
        const int nsz = grid_.n_cells;
        for (long i = 0; i < m; i += 7) {
            const int ix = static_cast<int>(i % nsz);
            const int iy = static_cast<int>((i / nsz) % nsz);
            const int iz = static_cast<int>(i / (static_cast<long>(nsz) * nsz));
            const double x = grid_.coord(ix), y = grid_.coord(iy), z = grid_.coord(iz);
            const double r = std::sqrt(x * x + y * y + z * z);
            double umag = 0.0;
            for (int c = 0; c < 3; ++c) {
                const double v = ui.u.data[c * m + i];
                umag += v * v;
            }
            rec.galilean_const =
                std::max(rec.galilean_const, std::sqrt(umag) / (1.0 + r));
        }
        rec.w_inf_max_i = std::max(
            rec.w_inf_max_i, params_.eps_beta(Species::Ion) * norm_inf(s.v_i));
        rec.w_inf_max_e = std::max(
            rec.w_inf_max_e, params_.eps_beta(Species::Electron) * norm_inf(s.v_e));
    };

    try {
        if (limit_mode) {
            if (!rho_i_profile)
                throw std::invalid_argument("run: limit mode requires the ion profile");
            state.v_i.fill(0.0);
            limit_fill_ni(state, stage_sample(Species::Ion, state.t), *rho_i_profile);
        }
        record(state);
        update_bound_data(state);
        long step = 0;
        while (state.t < config_.t_final - 1e-14) {
            if (++step > config_.max_steps)
                throw std::runtime_error("run: max step count exceeded");

            const double speed = max_wave_speed(state);
            double dt = config_.fixed_dt ? *config_.fixed_dt
                                         : (speed > 0.0 ? config_.cfl * h / speed
                                                        : config_.cfl * h);
            dt = std::min(dt, config_.t_final - state.t);

            const StepStats st = step_rk4(state, dt, limit_mode, rho_i_profile);
            rec.steps = step;
            rec.dts.push_back(st.dt);
            rec.wave_speeds.push_back(speed);
            rec.clipped_cells += st.clipped;
            rec.worst_undershoot = std::max(rec.worst_undershoot, st.worst_undershoot);

            if (st.worst_undershoot > config_.floor_abort_tol) {
                rec.status = RunStatus::AbortUndershoot;
                std::ostringstream os;
                os << "density undershoot " << st.worst_undershoot
                   << " exceeded the abort threshold at t=" << state.t;
                rec.message = os.str();
                break;
            }
            if (!state.n_i.all_finite() || !state.v_i.all_finite() ||
                !state.n_e.all_finite() || !state.v_e.all_finite()) {
                rec.status = RunStatus::AbortNaN;
                std::ostringstream os;
                os << "non-finite state at t=" << state.t << " (step " << step << ")";
                rec.message = os.str();
                break;
            }
            if (state.support_radius_i > config_.support_abort_frac * L ||
                state.support_radius_e > config_.support_abort_frac * L) {
                rec.status = RunStatus::AbortSupport;
                std::ostringstream os;
                os << "density support reached " << config_.support_abort_frac
                   << " of the box at t=" << state.t;
                rec.message = os.str();
                break;
            }

            update_bound_data(state);
            rec.support_bound_i = support_growth_bound(R0_i, state.t, rec.w_inf_max_i,
                                                       rec.galilean_const);
            rec.support_bound_e = support_growth_bound(R0_e, state.t, rec.w_inf_max_e,
                                                       rec.galilean_const);
            if (state.support_radius_i > rec.support_bound_i + h ||
                state.support_radius_e > rec.support_bound_e + h) {
                rec.status = RunStatus::AbortOther;
                rec.message = "support radius exceeded the a-priori growth bound";
                break;
            }

            if (step % config_.record_every == 0 ||
                state.t >= config_.t_final - 1e-14)
                record(state);
        }
    } catch (const std::exception& e) {
        rec.status = RunStatus::AbortOther;
        rec.message = e.what();
    }
    return rec;
}

}  // namespace eplb
