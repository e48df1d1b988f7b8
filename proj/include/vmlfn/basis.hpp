#ifndef VMLFN_BASIS_HPP
#define VMLFN_BASIS_HPP

#include <cstdint>
#include <vector>

#include "vmlfn/geometry.hpp"
#include "vmlfn/types.hpp"

namespace vmlfn {

struct BasisConfig {
    int n_hidden = 0;
    double omega_min = 0.05;   // normalized-coordinate cycles
    double omega_max = 1.0;
    double gamma = 5.0;        // envelope steepness
    int input_dim = 3;         // spatial + parametric axes
    int spatial_dim = 3;       // axes the PDE operator acts on
    std::uint64_t seed = 0;

    void validate() const;
};

struct BasisEval {
    Matrix H;                  // N x Nh
    std::vector<Matrix> B;     // spatial_dim matrices, N x Nh, physical-coordinate gradient
    Matrix L;                  // N x Nh, physical Laplacian over the spatial axes
};

// frozen random sine feature bank: Psi_j(x) = D(x) * eta_j * sin(2π w_j·x + b_j)
// in normalized coordinates, with D the Dirichlet envelope. Immutable after
// construction; eval paths are pure and safe to call concurrently.
class FourierBasis {
  public:
    FourierBasis(BasisConfig config, const BoundarySpec& spec);

    // deserialization path: reconstruct from stored arrays
    FourierBasis(BasisConfig config, const BoundarySpec& spec, Matrix omega, Vector phase);

    const BasisConfig& config() const { return config_; }
    const Matrix& omega() const { return omega_; }      // Nh x input_dim
    const Vector& phase() const { return phase_; }      // in [0, 2π)
    const Vector& eta() const { return eta_; }          // 1/(1+||2π w||²)
    const std::vector<FaceId>& dirichlet_faces() const { return dfaces_; }
    const BoxDomain& domain() const { return domain_; }

    Matrix eval(const Matrix& x_norm) const;
    std::vector<Matrix> eval_grad(const Matrix& x_norm) const;
    Matrix eval_laplacian(const Matrix& x_norm) const;

    // combined pass sharing the trig evaluation
    BasisEval eval_parts(const Matrix& x_norm, bool grad, bool laplacian) const;

    // envelope D(x) and its first/second derivatives w.r.t. normalized
    // coordinates; product of per-face tanh(gamma*d) factors, which is smooth
    // everywhere, vanishes on every Dirichlet face, and reduces to the single
    // tanh when Gamma_D has one face
    void envelope(const Matrix& x_norm, Vector& g, Matrix& dg, Matrix& d2g) const;

  private:
    void check_input(const Matrix& x_norm) const;

    BasisConfig config_;
    BoxDomain domain_;
    std::vector<FaceId> dfaces_;
    Matrix omega_;
    Vector phase_;
    Vector eta_;
    Vector norm_scale_;        // 2/(hi-lo) per spatial axis
};

FourierBasis build_basis(const BasisConfig& config, const BoundarySpec& spec);

}  // namespace vmlfn

#endif
