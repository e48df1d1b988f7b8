#ifndef VMLFN_MODEL_IO_HPP
#define VMLFN_MODEL_IO_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vmlfn/basis.hpp"
#include "vmlfn/geometry.hpp"
#include "vmlfn/solver.hpp"
#include "vmlfn/types.hpp"

namespace vmlfn {

enum class ModelKind : std::uint8_t {
    helmholtz = 0,
    heat = 1,
    heat_flux = 2,
    parametric4d = 3,
    elasticity = 4
};

std::string to_string(ModelKind k);

// a trained surrogate: frozen basis bank plus output weights, everything
// needed for zero-shot prediction without reassembly
struct Model {
    ModelKind kind = ModelKind::heat;
    BasisConfig basis_config;
    Vector domain_lo, domain_hi;           // basis domain (Omega, or Omega x Lambda)
    std::vector<FaceId> dirichlet_faces;
    double dirichlet_offset = 0.0;
    Matrix omega;
    Vector phase;
    bool has_result = false;
    SolveResult result;

    BoundarySpec make_boundary() const;
    FourierBasis make_basis() const;
    bool parametric() const { return kind == ModelKind::parametric4d; }
    double kappa_min() const;               // parametric models only
    double kappa_max() const;

    // physical query points (N x spatial_dim); kappa required for parametric
    // models and rejected outside the trained interval
    Matrix predict_at(const Matrix& points, std::optional<double> kappa = std::nullopt) const;
};

// "VMLF" container: magic, version, config, raw FP64 arrays; byte-identical
// for identical inputs
void save_model(const Model& model, const std::string& path);
void write_model(const Model& model, std::ostream& out);
Model load_model(const std::string& path);
Model read_model(std::istream& in, const std::string& origin);

}  // namespace vmlfn

#endif
