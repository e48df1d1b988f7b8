#ifndef VMLFN_TYPES_HPP
#define VMLFN_TYPES_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace vmlfn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// error hierarchy: every failure mode maps to one of these so the CLI can
// translate them into its exit-code contract (2 = config, 1 = numerical)
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvalidArgument : Error {
    using Error::Error;
};
struct DomainViolation : Error {
    using Error::Error;
};
struct AssemblyError : Error {
    using Error::Error;
};
struct SolverError : Error {
    using Error::Error;
};
struct OracleError : Error {
    using Error::Error;
};
struct IoError : Error {
    using Error::Error;
};
struct ConfigError : Error {
    using Error::Error;
};

enum class Precision { fp32, fp64 };

inline std::string to_string(Precision p) { return p == Precision::fp32 ? "fp32" : "fp64"; }

}  // namespace vmlfn

#endif
