#pragma once

#include <vector>

namespace eplb {

// Free-space Green's function of the 7-point discrete Laplacian on the unit
// lattice, normalized so that G_h(n) = -W(n)/h satisfies
// Delta_h G_h = delta_{n0}/h^3 and W(n) -> 1/(4*pi*|n|) at large |n|.
//
// Near field (max |n_j| <= cutoff): Bessel-ladder quadrature of
//   W(n) = int_0^inf e^{-6t} I_{n1}(2t) I_{n2}(2t) I_{n3}(2t) dt.
// Far field: asymptotic expansion with the exact lattice corrections through
// O(|n|^-5); the two representations are cross-checked in the test suite.
class LatticeGreen {
  public:
    static const LatticeGreen& instance();

    double W(int n1, int n2, int n3) const;

    static double W_far(int n1, int n2, int n3);
    static double W_integral(int n1, int n2, int n3);  // slow, any |n|

    int cutoff() const { return cutoff_; }

  private:
    LatticeGreen();
    int cutoff_ = 16;
    std::vector<double> table_;  // sorted triples a >= b >= c >= 0
};

// Scaled modified Bessel ladder e^{-x} I_nu(x), nu = 0..nu_max, by Miller's
// backward recurrence.  Exposed for tests.
void scaled_bessel_ladder(double x, int nu_max, double* out);

}  // namespace eplb
