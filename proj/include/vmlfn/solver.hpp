#ifndef VMLFN_SOLVER_HPP
#define VMLFN_SOLVER_HPP

#include <string>

#include "vmlfn/basis.hpp"
#include "vmlfn/types.hpp"

namespace vmlfn {

enum class SolvePath { cholesky, ldlt, qr, svd };
enum class MatrixHint { spd, symmetric, general };

std::string to_string(SolvePath p);

struct SolveResult {
    Matrix W;                    // Nh x d_u output weights
    double beta_used = 0.0;
    SolvePath path = SolvePath::cholesky;
    double w_inf_norm = 0.0;     // max |W_ij|
    double residual_norm = 0.0;  // ||(K+beta I)W - F||_F / ||F||_F
    double output_scale = 1.0;   // field normalization applied to loads
    double cond_estimate = 0.0;  // power-iteration estimate of ||A|| * ||A^-1||
};

// regularized direct solve (K + beta I) W = F. Tries the cheapest suitable
// factorization for the hint and falls back (LLT -> LDLT -> SVD, or QR -> SVD
// for general matrices) whenever the factorization fails or the residual
// check is violated. Never forms an explicit inverse.
SolveResult solve(const Matrix& K, const Matrix& F, double beta,
                  MatrixHint hint = MatrixHint::symmetric);

// u = offset + (Psi(x) W) / output_scale, rows of x_norm are query points
Matrix predict(const FourierBasis& basis, const SolveResult& result, const Matrix& x_norm,
               double offset = 0.0);

// residual contract for the direct factorization paths (FP64)
inline constexpr double kResidualTol = 1e-8;

}  // namespace vmlfn

#endif
