#ifndef VMLFN_ELASTICITY_HPP
#define VMLFN_ELASTICITY_HPP

#include <array>
#include <vector>

#include "vmlfn/assembly.hpp"
#include "vmlfn/basis.hpp"
#include "vmlfn/solver.hpp"
#include "vmlfn/types.hpp"

namespace vmlfn {

struct Layer {
    double z_lo = 0.0, z_hi = 0.0;
    double e_modulus = 0.0;   // Young's modulus, Pa
    double nu = 0.0;          // Poisson ratio
    double alpha_th = 0.0;    // thermal expansion, 1/K

    double lame_lambda() const { return e_modulus * nu / ((1.0 + nu) * (1.0 - 2.0 * nu)); }
    double lame_mu() const { return e_modulus / (2.0 * (1.0 + nu)); }
};

// stack of z-layers partitioning the domain's z-extent; lookup is a sharp
// interval test, the weak form handles the coefficient discontinuity
class LayeredMaterial {
  public:
    LayeredMaterial(std::vector<Layer> layers, double z_min, double z_max);

    const Layer& at(double z) const;
    const std::vector<Layer>& layers() const { return layers_; }

  private:
    std::vector<Layer> layers_;
    double z_min_, z_max_;
};

struct BlockSystem {
    Matrix k00, k11, k22;     // diagonal displacement blocks
    Matrix k01, k02, k12;     // couplings; K_10 = K_01^T etc. by construction
    std::array<Vector, 3> f;  // thermal loads F_Ex, F_Ey, F_Ez
    Eigen::Index n_points = 0;
    double output_scale = 1.0;
    Precision precision = Precision::fp64;

    Matrix global_k() const;  // 3Nh x 3Nh, exactly symmetric
    Vector global_f() const;
};

BlockSystem assemble_elastic(const FourierBasis& basis, const LayeredMaterial& material,
                             const SpatialFn& delta_t, const PointSet& interior,
                             const AssemblyOptions& options = {});

// (K + beta I) W = F with W stacked [Wx; Wy; Wz]; beta must be positive since
// the traction-free problem carries a rigid-body null space
SolveResult solve_elastic(const BlockSystem& system, double beta);

// field evaluation from the stacked weights
Matrix displacement(const FourierBasis& basis, const SolveResult& result, const Matrix& x_norm);
// strain rows: (exx, eyy, ezz, exy, exz, eyz), built from sym(grad u)
Matrix strain(const FourierBasis& basis, const SolveResult& result, const Matrix& x_norm);

}  // namespace vmlfn

#endif
