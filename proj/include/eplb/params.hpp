#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace eplb {

enum class Species { Ion = 0, Electron = 1 };

inline const char* species_name(Species s) {
    return s == Species::Ion ? "ion" : "electron";
}

// Per-species fluid constants plus the coupling parameters of the two-fluid
// model.  The scaled velocity V = eps^{-beta} w is the stored unknown, so the
// eps-exponents beta_i = 1, beta_e = 0 appear all over the flux/source
// assembly.
struct FluidParams {
    double gamma_i = 4.0 / 3.0;
    double gamma_e = 4.0 / 3.0;
    double A_i = 1.0;
    double A_e = 1.0;
    double epsilon = 1.0;   // mass-ratio root, in (0, 1]
    int d = 3;
    int q_lq = 4;           // Lebesgue exponent for diagnostics
    int s_order = 3;        // Sobolev order for diagnostics
    bool strict_paper_regime = true;

    double gamma(Species s) const { return s == Species::Ion ? gamma_i : gamma_e; }
    double entropy_const(Species s) const { return s == Species::Ion ? A_i : A_e; }
    double charge(Species s) const { return s == Species::Ion ? 1.0 : -1.0; }
    int beta(Species s) const { return s == Species::Ion ? 1 : 0; }
    double eps_beta(Species s) const { return s == Species::Ion ? epsilon : 1.0; }

    // Coefficient of the Poisson right-hand side, rho = C_nu * n^{2/(gamma-1)}.
    double poisson_coeff(Species s) const;

    // Time-decay exponents b_nu = min{d(gamma-1)/2, 1} and a_nu = 1 + b_nu.
    double b_decay(Species s) const;
    double a_decay(Species s) const { return 1.0 + b_decay(s); }

    double gamma_max() const { return gamma_i > gamma_e ? gamma_i : gamma_e; }

    // Throws std::invalid_argument when out of range.  With
    // strict_paper_regime the (s, d, q, gamma) admissibility constraints are
    // enforced as well (no upper bound on s when 2/(gamma-1) is an integer).
    void validate() const;
};

// Uniform cell-centered Cartesian box [-L, L]^3.
struct GridSpec {
    double half_length = 4.0;
    int n_cells = 32;

    double spacing() const { return 2.0 * half_length / n_cells; }
    double coord(int i) const { return -half_length + (i + 0.5) * spacing(); }
    long total_cells() const {
        return static_cast<long>(n_cells) * n_cells * n_cells;
    }
    void validate() const;
    bool operator==(const GridSpec& o) const {
        return half_length == o.half_length && n_cells == o.n_cells;
    }
};

}  // namespace eplb
