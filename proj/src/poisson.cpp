#include "eplb/poisson.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>
#include <stdexcept>

#include "eplb/lattice_green.hpp"

namespace eplb {

GridField rhs_from_densities(const GridField& n_i, const GridField& n_e,
                             const FluidParams& p) {
    if (!(n_i.spec == n_e.spec))
        throw std::invalid_argument("rhs_from_densities: grid mismatch");
    const double Ci = p.poisson_coeff(Species::Ion);
    const double Ce = p.poisson_coeff(Species::Electron);
    const double pi_exp = 2.0 / (p.gamma_i - 1.0);
    const double pe_exp = 2.0 / (p.gamma_e - 1.0);
    GridField f(n_i.spec, 1);
    for (long k = 0; k < n_i.n3(); ++k) {
        const double a = n_i.data[k], b = n_e.data[k];
        if (a < 0.0 || b < 0.0)
            throw std::invalid_argument("rhs_from_densities: negative density sample");
        f.data[k] = Ci * std::pow(a, pi_exp) - Ce * std::pow(b, pe_exp);
    }
    return f;
}

namespace {
std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

struct FreeSpacePoisson::Impl {
    fftw_plan fwd = nullptr, bwd = nullptr;
    double* real_buf = nullptr;
    fftw_complex* cplx_buf = nullptr;
    std::vector<double> kernel_hat;  // FFT of wrapped W table (real spectrum)
    long nc = 0;                     // complex array size

    ~Impl() {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
        if (real_buf) fftw_free(real_buf);
        if (cplx_buf) fftw_free(cplx_buf);
    }
};

FreeSpacePoisson::FreeSpacePoisson(const GridSpec& grid)
    : grid_(grid), impl_(new Impl) {
    grid.validate();
    const int n = grid.n_cells;
    P_ = 2 * (n + margin_);
    const long P = P_;
    const long nreal = P * P * P;
    impl_->nc = P * P * (P / 2 + 1);

    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        impl_->real_buf = fftw_alloc_real(nreal);
        impl_->cplx_buf = fftw_alloc_complex(impl_->nc);
        impl_->fwd = fftw_plan_dft_r2c_3d(P_, P_, P_, impl_->real_buf,
                                          impl_->cplx_buf, FFTW_ESTIMATE);
        impl_->bwd = fftw_plan_dft_c2r_3d(P_, P_, P_, impl_->cplx_buf,
                                          impl_->real_buf, FFTW_ESTIMATE);
    }

    // Wrapped kernel: offset o per axis lives in (-P/2, P/2].
    const LatticeGreen& lg = LatticeGreen::instance();
    for (long iz = 0; iz < P; ++iz)
        for (long iy = 0; iy < P; ++iy)
            for (long ix = 0; ix < P; ++ix) {
                const int ox = ix <= P / 2 ? static_cast<int>(ix) : static_cast<int>(ix - P);
                const int oy = iy <= P / 2 ? static_cast<int>(iy) : static_cast<int>(iy - P);
                const int oz = iz <= P / 2 ? static_cast<int>(iz) : static_cast<int>(iz - P);
                impl_->real_buf[(iz * P + iy) * P + ix] = lg.W(ox, oy, oz);
            }
    fftw_execute(impl_->fwd);
    impl_->kernel_hat.resize(2 * impl_->nc);
    std::memcpy(impl_->kernel_hat.data(), impl_->cplx_buf,
                sizeof(double) * 2 * impl_->nc);
}

FreeSpacePoisson::~FreeSpacePoisson() = default;

static void check_compact(const GridField& rhs) {
    const int n = rhs.spec.n_cells;
    const double tol = 1e-14 * std::max(rhs.max_abs(), 1e-300);
    for (int iz = 0; iz < n; ++iz)
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix) {
                const bool edge = ix < 2 || iy < 2 || iz < 2 || ix >= n - 2 ||
                                  iy >= n - 2 || iz >= n - 2;
                if (edge && std::abs(rhs.at(0, ix, iy, iz)) > tol)
                    throw std::invalid_argument(
                        "FreeSpacePoisson: RHS touches the 2-cell boundary margin");
            }
}

PoissonSolution FreeSpacePoisson::solve(const GridField& rhs) const {
    if (!(rhs.spec == grid_))
        throw std::invalid_argument("FreeSpacePoisson: RHS grid mismatch");
    check_compact(rhs);

    const int n = grid_.n_cells;
    const long P = P_;
    const double h = grid_.spacing();

    std::memset(impl_->real_buf, 0, sizeof(double) * P * P * P);
    for (int iz = 0; iz < n; ++iz)
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix)
                impl_->real_buf[(static_cast<long>(iz) * P + iy) * P + ix] =
                    rhs.at(0, ix, iy, iz);
    fftw_execute(impl_->fwd);

    const double scale = -h * h / static_cast<double>(P * P * P);
    const double* kh = impl_->kernel_hat.data();
    for (long k = 0; k < impl_->nc; ++k) {
        const double fr = impl_->cplx_buf[k][0], fi = impl_->cplx_buf[k][1];
        const double gr = kh[2 * k], gi = kh[2 * k + 1];
        impl_->cplx_buf[k][0] = scale * (fr * gr - fi * gi);
        impl_->cplx_buf[k][1] = scale * (fr * gi + fi * gr);
    }
    fftw_execute(impl_->bwd);

    // Extract phi on the haloed box [-margin, n+margin).
    const int E = n + 2 * margin_;
    last_ext_.assign(static_cast<size_t>(E) * E * E, 0.0);
    for (int iz = -margin_; iz < n + margin_; ++iz)
        for (int iy = -margin_; iy < n + margin_; ++iy)
            for (int ix = -margin_; ix < n + margin_; ++ix) {
                const long px = ix < 0 ? ix + P : ix;
                const long py = iy < 0 ? iy + P : iy;
                const long pz = iz < 0 ? iz + P : iz;
                last_ext_[((static_cast<long>(iz + margin_) * E) + (iy + margin_)) * E +
                          (ix + margin_)] = impl_->real_buf[(pz * P + py) * P + px];
            }

    PoissonSolution sol;
    sol.phi = GridField(grid_, 1);
    sol.grad_phi = GridField(grid_, 3);
    const long E2 = static_cast<long>(E) * E;
    auto ext = [&](int ix, int iy, int iz) {
        return last_ext_[(static_cast<long>(iz + margin_) * E + (iy + margin_)) * E +
                         (ix + margin_)];
    };
    const double c1 = 8.0 / (12.0 * h), c2 = 1.0 / (12.0 * h);
    (void)E2;
    for (int iz = 0; iz < n; ++iz)
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix) {
                sol.phi.at(0, ix, iy, iz) = ext(ix, iy, iz);
                sol.grad_phi.at(0, ix, iy, iz) =
                    c1 * (ext(ix + 1, iy, iz) - ext(ix - 1, iy, iz)) -
                    c2 * (ext(ix + 2, iy, iz) - ext(ix - 2, iy, iz));
                sol.grad_phi.at(1, ix, iy, iz) =
                    c1 * (ext(ix, iy + 1, iz) - ext(ix, iy - 1, iz)) -
                    c2 * (ext(ix, iy + 2, iz) - ext(ix, iy - 2, iz));
                sol.grad_phi.at(2, ix, iy, iz) =
                    c1 * (ext(ix, iy, iz + 1) - ext(ix, iy, iz - 1)) -
                    c2 * (ext(ix, iy, iz + 2) - ext(ix, iy, iz - 2));
            }
    return sol;
}

std::vector<double> FreeSpacePoisson::oracle(
    const GridField& rhs, const std::vector<std::array<int, 3>>& queries) const {
    if (!(rhs.spec == grid_))
        throw std::invalid_argument("FreeSpacePoisson::oracle: RHS grid mismatch");
    const int n = grid_.n_cells;
    const double h = grid_.spacing();
    const LatticeGreen& lg = LatticeGreen::instance();
    std::vector<double> out;
    out.reserve(queries.size());
    for (const auto& qp : queries) {
        double acc = 0.0;
        for (int iz = 0; iz < n; ++iz)
            for (int iy = 0; iy < n; ++iy)
                for (int ix = 0; ix < n; ++ix) {
                    const double f = rhs.at(0, ix, iy, iz);
                    if (f == 0.0) continue;
                    acc += lg.W(qp[0] - ix, qp[1] - iy, qp[2] - iz) * f;
                }
        out.push_back(-h * h * acc);
    }
    return out;
}

double FreeSpacePoisson::laplacian_residual(const PoissonSolution& sol,
                                            const GridField& rhs) const {
    const int n = grid_.n_cells;
    const double h = grid_.spacing();
    const int E = n + 2 * margin_;
    auto ext = [&](int ix, int iy, int iz) {
        return last_ext_[(static_cast<long>(iz + margin_) * E + (iy + margin_)) * E +
                         (ix + margin_)];
    };
    (void)sol;
    double num = 0.0, den = 0.0;
    for (int iz = 0; iz < n; ++iz)
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix) {
                const double f = rhs.at(0, ix, iy, iz);
                den += f * f;
                const double lap =
                    (ext(ix + 1, iy, iz) + ext(ix - 1, iy, iz) + ext(ix, iy + 1, iz) +
                     ext(ix, iy - 1, iz) + ext(ix, iy, iz + 1) + ext(ix, iy, iz - 1) -
                     6.0 * ext(ix, iy, iz)) /
                    (h * h);
                const double r = lap - f;
                num += r * r;
            }
    if (den == 0.0) return 0.0;
    return std::sqrt(num / den);
}

double FreeSpacePoisson::sphere_flux(const PoissonSolution& sol, double R) const {
    const int n_theta = 24, n_phi = 48;
    // Gauss-Legendre in cos(theta), uniform in phi.
    std::vector<double> xs(n_theta), ws(n_theta);
    for (int i = 0; i < n_theta; ++i) {
        // Newton for Legendre roots (small n, quick)
        double x = std::cos(M_PI * (i + 0.75) / (n_theta + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n_theta; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n_theta * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        xs[i] = x;
        ws[i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
    double flux = 0.0;
    for (int i = 0; i < n_theta; ++i) {
        const double ct = xs[i], st = std::sqrt(1.0 - ct * ct);
        for (int j = 0; j < n_phi; ++j) {
            const double ph = 2.0 * M_PI * j / n_phi;
            const double dir[3] = {st * std::cos(ph), st * std::sin(ph), ct};
            const double x = R * dir[0], y = R * dir[1], z = R * dir[2];
            double gdotr = 0.0;
            for (int c = 0; c < 3; ++c)
                gdotr += dir[c] * interpolate(sol.grad_phi, c, x, y, z, 6);
            flux += ws[i] * (2.0 * M_PI / n_phi) * gdotr;
        }
    }
    return flux * R * R;
}

Lemma5Report lemma5_diagnostics(const FreeSpacePoisson& solver, const GridField& f,
                                double q) {
    const int d = 3;
    if (!(q > std::max(1.0, static_cast<double>(d) / (d - 1))))
        throw std::invalid_argument("lemma5_diagnostics: q too small");
    Lemma5Report rep;
    rep.q = q;
    rep.lp_exponent = q * d / (q + d);
    const double h = f.spec.spacing();
    const double h3 = h * h * h;

    double fsum = 0.0;
    for (double v : f.data) fsum += std::pow(std::abs(v), rep.lp_exponent);
    rep.f_lp = std::pow(fsum * h3, 1.0 / rep.lp_exponent);

    const PoissonSolution sol = solver.solve(f);
    double gsum = 0.0;
    const long m = f.n3();
    for (long k = 0; k < m; ++k) {
        const double gx = sol.grad_phi.data[k];
        const double gy = sol.grad_phi.data[m + k];
        const double gz = sol.grad_phi.data[2 * m + k];
        gsum += std::pow(std::sqrt(gx * gx + gy * gy + gz * gz), q);
    }
    rep.grad_phi_q = std::pow(gsum * h3, 1.0 / q);

    rep.defined = rep.f_lp > 0.0;
    rep.ratio = rep.defined ? rep.grad_phi_q / rep.f_lp : 0.0;
    return rep;
}

}  // namespace eplb
