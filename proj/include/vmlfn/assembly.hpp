#ifndef VMLFN_ASSEMBLY_HPP
#define VMLFN_ASSEMBLY_HPP

#include <atomic>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "vmlfn/basis.hpp"
#include "vmlfn/geometry.hpp"
#include "vmlfn/types.hpp"

namespace vmlfn {

using SpatialFn = std::function<double(const Vector&)>;

// unified coefficients of -div(a grad u) + c u = f with isotropic a
struct PdeCoefficients {
    SpatialFn a;               // > 0 (ellipticity); identity or conductivity
    SpatialFn c;               // reaction; may be negative (Helmholtz c = -k²)
    SpatialFn f;               // source
    int output_dim = 1;
};

struct PdeCase {
    enum class Kind { helmholtz, heat, heat_flux, parametric4d };

    Kind kind;
    BoxDomain domain;          // spatial box
    BoundarySpec boundary;
    PdeCoefficients coeffs;    // functions take the full input point (4 comps for 4-D)

    double k = 0.0;            // Helmholtz wavenumber
    double kappa = 0.0;        // conductivity for the heat cases
    double q_top = 0.0;        // prescribed top-surface flux (heat_flux)
    double kappa_min = 0.0, kappa_max = 0.0;   // conductivity interval (parametric4d)
    int kappa_snapshots = 0;
    bool normalize_field = false;

    int input_dim() const;
    BoxDomain basis_domain() const;     // spatial box, or Omega x Lambda when parametric
    BoundarySpec basis_boundary() const;
};

std::string to_string(PdeCase::Kind k);
PdeCase::Kind parse_case_kind(const std::string& s);

PdeCase make_helmholtz_case(const BoxDomain& domain, const BoundarySpec& boundary, double k,
                            SpatialFn f);
PdeCase make_heat_case(const BoxDomain& domain, const BoundarySpec& boundary, double kappa,
                       SpatialFn source);
PdeCase make_heat_flux_case(const BoxDomain& domain, const BoundarySpec& boundary, double kappa,
                            SpatialFn source, double q_top);
PdeCase make_parametric4d_case(const BoxDomain& domain, const BoundarySpec& boundary,
                               std::function<double(const Vector&, double)> source,
                               double kappa_min, double kappa_max, int snapshots);

// generic scalar case with caller-supplied coefficients (tests, scan problems)
PdeCase make_custom_case(const BoxDomain& domain, const BoundarySpec& boundary,
                         PdeCoefficients coeffs);

struct WeakFormSystem {
    Matrix K;                  // Nh x Nh, symmetric
    Matrix F;                  // Nh x d_u
    Eigen::Index n_interior = 0;
    Eigen::Index n_boundary = 0;
    Precision precision = Precision::fp64;
    double output_scale = 1.0; // normalization already applied to F
};

struct AssemblyOptions {
    Precision precision = Precision::fp64;
    Eigen::Index block_size = 1024;     // FP64 partial sums accumulate per block
    bool normalize_field = false;       // scale loads so the field is O(1)
};

WeakFormSystem assemble_scalar(const FourierBasis& basis, const PdeCase& pde,
                               const PointSet& interior, const std::vector<PointSet>& neumann,
                               const AssemblyOptions& options = {});

// boundary-flux load increment dF = w * H_face^T * q; caller adds it to F
Vector assemble_flux_load(const FourierBasis& basis, const PointSet& face_points, double q);

WeakFormSystem assemble_parametric4d(const FourierBasis& basis, const PdeCase& pde,
                                     const PointSet& augmented_points,
                                     const AssemblyOptions& options = {});

// points over Omega x Lambda: one spatial sample per conductivity snapshot
PointSet sample_augmented(const PdeCase& pde, Eigen::Index n_per_snapshot,
                          std::uint64_t rng_seed,
                          SampleStrategy strategy = SampleStrategy::monte_carlo);

// gridded volumetric source (text format: "nx ny nz" / lo / hi header, then
// nodal values in x-fastest order); multilinear interpolation, queries outside
// the grid clamp to the boundary value and bump a warning counter
class GridSource {
  public:
    static GridSource load(const std::string& path);
    static GridSource read(std::istream& in, const std::string& origin);

    double value(const Vector& x) const;
    SpatialFn as_function() const;      // cheap shared handle into the grid data

    const std::vector<Eigen::Index>& shape() const;
    std::uint64_t clamped_queries() const;

  private:
    struct Data {
        std::vector<Eigen::Index> n;    // nodes per axis
        Vector lo, hi;
        std::vector<double> values;     // x-fastest
        mutable std::atomic<std::uint64_t> clamped{0};
        double value(const Vector& x) const;
    };
    std::shared_ptr<const Data> data_;
};

}  // namespace vmlfn

#endif
