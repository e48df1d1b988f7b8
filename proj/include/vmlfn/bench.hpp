#ifndef VMLFN_BENCH_HPP
#define VMLFN_BENCH_HPP

#include <string>
#include <vector>

namespace vmlfn {

struct CriterionResult {
    std::string id;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

// packaged desk-scale acceptance suites:
//   helmholtz-mms              manufactured-solution accuracy and runtime
//   scan-selection             frequency-scan mode coverage and overhead
//   heat-oracle                Gaussian-source and top-flux agreement with FD
//   parametric-zero-shot       4-D surrogate at unseen conductivities
//   elasticity-free-expansion  uniform-dT strain identity
//   elasticity-warpage         heterogeneous 3-layer assembly/solve budget
//   properties                 fast invariant checks, no oracle solves
//   all                        everything above
std::vector<CriterionResult> run_suite(const std::string& name);

std::vector<std::string> suite_names();

}  // namespace vmlfn

#endif
