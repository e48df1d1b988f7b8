#ifndef VMLFN_ORACLE_HPP
#define VMLFN_ORACLE_HPP

#include <string>
#include <vector>

#include "vmlfn/assembly.hpp"
#include "vmlfn/types.hpp"

namespace vmlfn {

struct Metrics {
    double avg_diff = 0.0;   // mean |pred - ref|
    double max_diff = 0.0;
    double rel_l2 = 0.0;     // ||pred-ref|| / ||ref||; absolute ||pred|| when ref is zero
    bool ref_zero = false;
};

Metrics metrics(const Vector& pred, const Vector& ref);

enum class MmsKind { polynomial, coscossin, user };

// analytically manufactured solution: u plus its physical-space Laplacian and
// the matching source for the case operator. A numerical self-consistency
// check runs at construction.
struct ManufacturedSolution {
    std::string name;
    SpatialFn u;
    SpatialFn lap_u;
    SpatialFn f;

    // |applied operator - f| at random points, relative to max|f|
    double self_check(const BoxDomain& domain, const SpatialFn& a, const SpatialFn& c,
                      int n_points = 200, std::uint64_t seed = 41) const;
};

// the two built-in Helmholtz families on a 3-D box: both vanish on the bottom
// face and have exact zero normal derivative on every other face, so the
// Case-I boundary conditions (Dirichlet bottom, zero-flux Neumann elsewhere)
// hold exactly
ManufacturedSolution mms_helmholtz(MmsKind kind, double k, const BoxDomain& domain);

// first positive root of sin(a) + 2 a cos(a) = 0; makes the coscossin family's
// top-face normal derivative vanish
double coscossin_z_root();

struct FdReference {
    std::vector<Vector> grids;    // node coordinates per axis
    Vector values;                // x-fastest ordering over all axes
    double residual_rel = 0.0;    // ||A u - rhs|| / ||rhs|| of the discrete system

    Eigen::Index size() const { return values.size(); }
    Matrix points() const;        // all nodes, N x dim, same ordering as values
    void save(const std::string& path) const;   // grid-source text format
};

// second-order central-difference reference on a tensor grid; Dirichlet faces
// pinned to the boundary constant, Neumann faces by symmetric ghost
// elimination. The separable discrete operator is solved directly through
// per-axis eigendecompositions and the discrete residual is verified.
FdReference fd_solve(const PdeCase& pde, const std::vector<Eigen::Index>& resolution);

// convenience: collapse a parametric case to a fixed-kappa heat case
PdeCase heat_case_at(const PdeCase& parametric, double kappa);

}  // namespace vmlfn

#endif
