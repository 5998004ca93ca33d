#include "eplb/params.hpp"

#include <algorithm>
#include <cmath>

namespace eplb {

double FluidParams::poisson_coeff(Species s) const {
    const double g = gamma(s);
    const double A = entropy_const(s);
    return std::pow((g - 1.0) * (g - 1.0) / (4.0 * A * g), 1.0 / (g - 1.0));
}

double FluidParams::b_decay(Species s) const {
    return std::min(d * (gamma(s) - 1.0) / 2.0, 1.0);
}

static bool near_integer(double x) {
    return std::abs(x - std::round(x)) < 1e-12;
}

void FluidParams::validate() const {
    if (!(gamma_i > 1.0) || !(gamma_e > 1.0))
        throw std::invalid_argument("FluidParams: gamma must exceed 1");
    if (!(A_i > 0.0) || !(A_e > 0.0))
        throw std::invalid_argument("FluidParams: entropy constants must be positive");
    if (!(epsilon > 0.0) || epsilon > 1.0)
        throw std::invalid_argument("FluidParams: epsilon must lie in (0,1]");
    if (d < 1) throw std::invalid_argument("FluidParams: dimension must be >= 1");
    if (!strict_paper_regime) return;

    // Admissibility of (s, d, q, gamma): s, d >= 3 integers,
    // d/2 + 1 < s <= 2/(gamma_max - 1) + 3/2 (upper bound void when both
    // 2/(gamma - 1) are integers), and
    // gamma < 1 + min{2/3, 4/(d-1), 4/q, 2d/(d+q)}.
    if (d < 3 || s_order < 3)
        throw std::invalid_argument("FluidParams: strict regime needs s, d >= 3");
    if (!(s_order > d / 2.0 + 1.0))
        throw std::invalid_argument("FluidParams: strict regime needs s > d/2 + 1");
    const bool exempt_s =
        near_integer(2.0 / (gamma_i - 1.0)) && near_integer(2.0 / (gamma_e - 1.0));
    const double s_max = 2.0 / (gamma_max() - 1.0) + 1.5;
    if (!exempt_s && s_order > s_max + 1e-12)
        throw std::invalid_argument("FluidParams: strict regime violates the s upper bound");
    const double q = static_cast<double>(q_lq);
    const double cap = 1.0 + std::min(std::min(2.0 / 3.0, 4.0 / (d - 1.0)),
                                      std::min(4.0 / q, 2.0 * d / (d + q)));
    if (!(gamma_i < cap) || !(gamma_e < cap))
        throw std::invalid_argument("FluidParams: strict regime violates the gamma cap");
    if (!(q > std::max(1.0, d / (d - 1.0))))
        throw std::invalid_argument("FluidParams: q must exceed max{1, d/(d-1)}");
}

void GridSpec::validate() const {
    if (!(half_length > 0.0))
        throw std::invalid_argument("GridSpec: half_length must be positive");
    if (n_cells < 8)
        throw std::invalid_argument("GridSpec: n_cells must be at least 8");
}

}  // namespace eplb
