#ifndef VMLFN_CONFIG_HPP
#define VMLFN_CONFIG_HPP

#include <optional>
#include <string>
#include <vector>

#include "vmlfn/assembly.hpp"
#include "vmlfn/elasticity.hpp"
#include "vmlfn/scan.hpp"
#include "vmlfn/types.hpp"

namespace vmlfn {

struct SourceSpec {
    enum class Type { zero, constant, gaussian, grid, mms };
    Type type = Type::zero;
    double value = 0.0;                 // constant
    double amplitude = 0.0;             // gaussian peak
    std::vector<double> center, sigma;  // gaussian
    std::string path;                   // grid file

    // mms type resolves against the case's manufactured solution elsewhere
    SpatialFn build(int dim) const;
};

struct CaseConfig {
    std::string kind;                   // helmholtz|heat|heat-flux|parametric-4d|elasticity
    std::vector<double> lo, hi;
    std::vector<std::string> dirichlet_faces;
    double dirichlet_value = 0.0;
    double k = 0.0;
    double kappa = 0.0;
    double q_top = 0.0;
    std::vector<double> kappa_range;    // [min, max]
    int kappa_snapshots = 10;
    SourceSpec source;
    std::vector<Layer> layers;          // elasticity
    SourceSpec delta_t;                 // elasticity temperature change
};

struct ScanSection {
    double candidates_lo = 0.01, candidates_hi = 4.0;
    int candidates_count = 15;
    std::vector<double> candidates;     // explicit list wins over the range
    Eigen::Index n_scan = 800, n_holdout = 400;
    double alpha_penalty = 1e-3;
    double holdout_shell = 0.02;
    int n_hidden = 0;                   // probe-basis size for temporary solves

    std::vector<double> resolve() const;
};

struct RunConfig {
    int schema = 1;
    CaseConfig pde;
    BasisConfig basis;                  // omega_max meaningful only when fixed_omega
    std::optional<double> fixed_omega;
    std::optional<ScanSection> scan;
    double beta = 1e-4;
    std::string beta_mode = "absolute"; // or "trace-relative"
    Precision precision = Precision::fp64;
    Eigen::Index n_interior = 8000;
    Eigen::Index n_boundary_per_face = 600;
    SampleStrategy strategy = SampleStrategy::monte_carlo;
    int normalize_field = -1;           // -1 auto (per case kind), 0 off, 1 on
    std::string oracle = "none";        // none|mms-polynomial|mms-coscossin|fd
    std::vector<Eigen::Index> fd_resolution;
    int threads = 0;                    // 0 = hardware default

    static RunConfig from_file(const std::string& path);
    static RunConfig from_string(const std::string& text, const std::string& origin = "<string>");
    std::string to_json_string() const;

    void validate() const;
    bool is_elasticity() const { return pde.kind == "elasticity"; }
    BoxDomain build_domain() const;
    BoundarySpec build_boundary() const;
    PdeCase build_case() const;         // scalar kinds
    LayeredMaterial build_material() const;
    ScanConfig build_scan_config() const;
    AssemblyOptions build_assembly_options() const;
};

}  // namespace vmlfn

#endif
