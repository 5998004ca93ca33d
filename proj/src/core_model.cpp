#include "eplb/core_model.hpp"

#include <cmath>
#include <sstream>

namespace eplb {

double rho_to_n_coeff(const FluidParams& p, Species s) {
    const double g = p.gamma(s);
    return std::sqrt(4.0 * p.entropy_const(s) * g / ((g - 1.0) * (g - 1.0)));
}

static void reject_negative(const GridField& f, const char* what) {
    const int n = f.spec.n_cells;
    for (int iz = 0; iz < n; ++iz)
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix)
                if (f.at(0, ix, iy, iz) < 0.0) {
                    std::ostringstream os;
                    os << what << ": negative sample " << f.at(0, ix, iy, iz)
                       << " at cell (" << ix << "," << iy << "," << iz << ")";
                    throw std::invalid_argument(os.str());
                }
}

GridField rho_to_n(const GridField& rho, const FluidParams& p, Species s) {
    reject_negative(rho, "rho_to_n");
    const double c = rho_to_n_coeff(p, s);
    const double e = (p.gamma(s) - 1.0) / 2.0;
    GridField out(rho.spec, 1);
    for (long i = 0; i < rho.n3(); ++i) out.data[i] = c * std::pow(rho.data[i], e);
    return out;
}

GridField n_to_rho(const GridField& n, const FluidParams& p, Species s) {
    reject_negative(n, "n_to_rho");
    const double c = 1.0 / rho_to_n_coeff(p, s);
    const double e = 2.0 / (p.gamma(s) - 1.0);
    GridField out(n.spec, 1);
    for (long i = 0; i < n.n3(); ++i) out.data[i] = std::pow(c * n.data[i], e);
    return out;
}

Eigen::MatrixXd assemble_flux_matrix(const Eigen::VectorXd& W_point,
                                     const Eigen::VectorXd& u_hat_point,
                                     const FluidParams& p, Species s, int j) {
    const int d = static_cast<int>(u_hat_point.size());
    if (W_point.size() != d + 1)
        throw std::invalid_argument("assemble_flux_matrix: W must have d+1 entries");
    if (j < 1 || j > d)
        throw std::invalid_argument("assemble_flux_matrix: axis out of range");

    const double n = W_point(0);
    const double eb = p.eps_beta(s);
    // stored V = eps^{-beta} w, so w^{(j)} = eps^beta V^{(j)}
    const double conv = eb * W_point(j) + u_hat_point(j - 1);
    const double off = eb * (p.gamma(s) - 1.0) / 2.0 * n;

    Eigen::MatrixXd A = conv * Eigen::MatrixXd::Identity(d + 1, d + 1);
    A(0, j) = off;
    A(j, 0) = off;
    return A;
}

Eigen::VectorXd flux_matrix_eigenvalues(const Eigen::VectorXd& W_point,
                                        const Eigen::VectorXd& u_hat_point,
                                        const FluidParams& p, Species s, int j) {
    const int d = static_cast<int>(u_hat_point.size());
    const double eb = p.eps_beta(s);
    const double conv = eb * W_point(j) + u_hat_point(j - 1);
    const double off = eb * (p.gamma(s) - 1.0) / 2.0 * W_point(0);
    Eigen::VectorXd ev(d + 1);
    ev(0) = conv - std::abs(off);
    for (int k = 1; k < d; ++k) ev(k) = conv;
    ev(d) = conv + std::abs(off);
    return ev;
}

SourcePoint assemble_source_point(double n, const Eigen::Vector3d& V,
                                  const UhatPoint& uh,
                                  const Eigen::Vector3d& grad_phi,
                                  const FluidParams& p, Species s) {
    const Eigen::Matrix3d G = uh.effective_grad();
    SourcePoint out;
    out.density = -(p.gamma(s) - 1.0) / 2.0 * n * G.trace();
    // (V . grad) uhat_m = sum_a V_a G(a, m)
    out.velocity = p.eps_beta(s) * p.charge(s) * grad_phi - G.transpose() * V;
    return out;
}

GridField assemble_sources(const GridField& n, const GridField& V,
                           const GridField& uhat, const GridField& grad_uhat,
                           const GridField& grad_phi, double t, bool split_form,
                           const GridField* K_field, const FluidParams& p,
                           Species s) {
    if (!(n.spec == V.spec) || !(n.spec == grad_phi.spec) || !(n.spec == uhat.spec))
        throw std::invalid_argument("assemble_sources: grid spec mismatch");
    (void)uhat;

    GridField out(n.spec, 4);
    const long m = n.n3();
    const double half_gm1 = (p.gamma(s) - 1.0) / 2.0;
    const double ebq = p.eps_beta(s) * p.charge(s);
    const double w1 = 1.0 / (1.0 + t);
    const double w2 = w1 * w1;

    for (long i = 0; i < m; ++i) {
        double G[3][3];
        if (!split_form) {
            for (int a = 0; a < 3; ++a)
                for (int c = 0; c < 3; ++c) G[a][c] = grad_uhat.data[(3 * a + c) * m + i];
        } else {
            for (int a = 0; a < 3; ++a)
                for (int c = 0; c < 3; ++c)
                    G[a][c] = (a == c ? w1 : 0.0) + w2 * K_field->data[(3 * a + c) * m + i];
        }
        const double div_u = G[0][0] + G[1][1] + G[2][2];
        out.data[i] = -half_gm1 * n.data[i] * div_u;
        for (int c = 0; c < 3; ++c) {
            double adv = 0.0;
            for (int a = 0; a < 3; ++a) adv += V.data[a * m + i] * G[a][c];
            out.data[(1 + c) * m + i] = ebq * grad_phi.data[c * m + i] - adv;
        }
    }
    return out;
}

}  // namespace eplb
