#pragma once

#include <array>
#include <memory>
#include <vector>

#include "eplb/field.hpp"
#include "eplb/params.hpp"

namespace eplb {

// Poisson right-hand side f = C_i n_i^{2/(gamma_i-1)} - C_e n_e^{2/(gamma_e-1)}.
GridField rhs_from_densities(const GridField& n_i, const GridField& n_e,
                             const FluidParams& p);

struct PoissonSolution {
    GridField phi;        // 1 component
    GridField grad_phi;   // 3 components
};

// Free-space solve on the box via zero-padded FFT convolution against the
// lattice Green's function; phi is also kept on a 4-cell halo so interior
// gradients and discrete-Laplacian residuals use true potential values.
class FreeSpacePoisson {
  public:
    explicit FreeSpacePoisson(const GridSpec& grid);
    ~FreeSpacePoisson();
    FreeSpacePoisson(const FreeSpacePoisson&) = delete;
    FreeSpacePoisson& operator=(const FreeSpacePoisson&) = delete;

    // Requires the RHS to vanish within 2 cells of the box boundary.
    PoissonSolution solve(const GridField& rhs) const;

    // Direct O(N*M) summation of the same kernel at grid-point queries.
    std::vector<double> oracle(const GridField& rhs,
                               const std::vector<std::array<int, 3>>& queries) const;

    // || Delta_h phi - f ||_2 / ||f||_2 over the support interior (cells where
    // |f| > 0 shrunk by one), using the halo so all neighbors are genuine.
    double laplacian_residual(const PoissonSolution& sol, const GridField& rhs) const;

    // Flux of grad phi through the sphere |x| = R (outward normal).
    double sphere_flux(const PoissonSolution& sol, double R) const;

    const GridSpec& grid() const { return grid_; }

  private:
    GridSpec grid_;
    int margin_ = 4;
    int P_ = 0;  // padded extent per axis
    struct Impl;
    std::unique_ptr<Impl> impl_;
    double phi_ext(const std::vector<double>& ext, int ix, int iy, int iz) const;
    mutable std::vector<double> last_ext_;  // (n+2*margin)^3 potential
};

struct Lemma5Report {
    double q;
    double lp_exponent;       // q d / (q + d)
    double grad_phi_q;
    double f_lp;
    double ratio;             // |grad phi|_q / |f|_{qd/(q+d)}
    bool defined;
};

Lemma5Report lemma5_diagnostics(const FreeSpacePoisson& solver, const GridField& f,
                                double q);

}  // namespace eplb
