#ifndef VMLFN_SCAN_HPP
#define VMLFN_SCAN_HPP

#include <cstdint>
#include <vector>

#include "vmlfn/assembly.hpp"
#include "vmlfn/basis.hpp"
#include "vmlfn/types.hpp"

namespace vmlfn {

struct ScanError : Error {
    using Error::Error;
};

struct ScanConfig {
    std::vector<double> candidates;     // strictly increasing, all > 0
    Eigen::Index n_scan = 800;
    Eigen::Index n_holdout = 400;
    double alpha_penalty = 1e-3;
    double beta = 1e-4;                 // regularization for the temporary solves
    std::uint64_t seed = 0;
    double holdout_shell = 0.02;        // normalized exclusion band next to Gamma_D
    SampleStrategy strategy = SampleStrategy::monte_carlo;
    Eigen::Index n_face = 0;            // flux-face budget for temporary solves (0 = auto)
    int n_hidden = 0;                   // probe-basis size (0 = template); keep <= n_scan,
                                        // an underdetermined probe cannot rank bandwidths

    void validate() const;
};

std::vector<double> uniform_candidates(double lo, double hi, int count);

struct ScanRow {
    double omega = 0.0;
    double e_r = 0.0;       // holdout mean L1 strong-form residual
    double w_inf = 0.0;     // max |W| of the temporary solve
    double score = 0.0;     // E_r (1 + alpha ||W||_inf)
    bool failed = false;
};

struct ScanReport {
    std::vector<ScanRow> rows;
    double selected = 0.0;          // argmin score, first occurrence on ties
    std::uint64_t scan_seed = 0;
    std::string rng_name;
};

double score(double e_r, double w_inf, double alpha);

struct ScanSets {
    PointSet scan;       // assembly subset
    Matrix holdout;      // residual-evaluation points (physical), shell-excluded
};

// the two disjoint subsets the scan uses, reproducible from (case, config)
ScanSets make_scan_sets(const PdeCase& pde, const ScanConfig& cfg);

// mean L1 strong-form residual of a solved system at the given points
double holdout_residual(const FourierBasis& basis, const PdeCase& pde, const Matrix& points,
                        const Matrix& weights, double output_scale);

// heuristic maximum-frequency selection: per candidate, a temporary basis is
// solved on the scanning subset and judged by the strong-form residual on a
// disjoint holdout set plus a weight-norm stability penalty
ScanReport scan_frequency(const PdeCase& pde, const BasisConfig& basis_template,
                          const ScanConfig& cfg, const AssemblyOptions& assembly = {});

}  // namespace vmlfn

#endif
