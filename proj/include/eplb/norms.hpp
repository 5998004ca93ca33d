#pragma once

#include <vector>

#include "eplb/field.hpp"

namespace eplb {

enum class HdotBackend { Stencil, Spectral };

// Max of the pointwise component-magnitude (Euclidean across components).
double norm_inf(const GridField& f);

// (sum |f|^q h^d)^{1/q} with the pointwise component-magnitude.
double norm_q(const GridField& f, double q);

double norm_l2(const GridField& f);

// Homogeneous Sobolev seminorm |grad^sigma f|_2 summed over components.
// Stencil backend: repeated 4th-order differencing (zero extension).
// Spectral backend: |k|^sigma multiplier on the box treated as periodic.
double norm_hdot(const GridField& f, int sigma, HdotBackend backend);

}  // namespace eplb
