#include "vmlfn/solver.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>

namespace vmlfn {

std::string to_string(SolvePath p) {
    switch (p) {
        case SolvePath::cholesky: return "cholesky";
        case SolvePath::ldlt: return "ldlt";
        case SolvePath::qr: return "qr";
        case SolvePath::svd: return "svd";
    }
    return "?";
}

namespace {

double relative_residual(const Matrix& A, const Matrix& W, const Matrix& F) {
    const double fn = F.norm();
    const double rn = (A * W - F).norm();
    if (fn == 0.0) return W.norm() == 0.0 ? 0.0 : rn;
    return rn / fn;
}

// power iteration on A and on solve(A, .) using an already-built factorization
template <typename Solve>
double condition_estimate(const Matrix& A, Solve&& apply_inverse) {
    const Eigen::Index n = A.rows();
    Vector v = Vector::LinSpaced(n, 1.0, 2.0).array().sin();
    v.normalize();
    double nrm = 0.0;
    for (int it = 0; it < 15; ++it) {
        v = A * v;
        nrm = v.norm();
        if (nrm == 0.0) return 0.0;
        v /= nrm;
    }
    Vector w = Vector::LinSpaced(n, -1.0, 1.0).array().cos();
    w.normalize();
    double inrm = 0.0;
    for (int it = 0; it < 15; ++it) {
        w = apply_inverse(w);
        inrm = w.norm();
        if (!std::isfinite(inrm) || inrm == 0.0) return std::numeric_limits<double>::infinity();
        w /= inrm;
    }
    return nrm * inrm;
}

}  // namespace

SolveResult solve(const Matrix& K, const Matrix& F, double beta, MatrixHint hint) {
    if (K.rows() != K.cols()) throw InvalidArgument("solve: K must be square");
    if (F.rows() != K.rows()) throw InvalidArgument("solve: F row count mismatch");
    if (beta < 0.0) throw InvalidArgument("solve: beta must be >= 0");
    if (!K.allFinite() || !F.allFinite())
        throw InvalidArgument("solve: non-finite entries in K or F");

    Matrix A = K;
    A.diagonal().array() += beta;

    SolveResult res;
    res.beta_used = beta;

    auto finish = [&](SolvePath path, Matrix W, double cond) {
        res.path = path;
        res.W = std::move(W);
        res.w_inf_norm = res.W.size() ? res.W.cwiseAbs().maxCoeff() : 0.0;
        res.residual_norm = relative_residual(A, res.W, F);
        res.cond_estimate = cond;
        if (!res.W.allFinite())
            throw SolverError("solve: non-finite solution on path " + to_string(path));
        return res;
    };

    if (hint == MatrixHint::spd) {
        Eigen::LLT<Matrix> llt(A);
        if (llt.info() == Eigen::Success) {
            Matrix W = llt.solve(F);
            if (W.allFinite() && relative_residual(A, W, F) <= kResidualTol) {
                double cond = condition_estimate(A, [&](const Vector& v) { return llt.solve(v); });
                return finish(SolvePath::cholesky, std::move(W), cond);
            }
        }
        hint = MatrixHint::symmetric;   // fall through to LDLT
    }
    if (hint == MatrixHint::symmetric) {
        Eigen::LDLT<Matrix> ldlt(A);
        if (ldlt.info() == Eigen::Success) {
            Matrix W = ldlt.solve(F);
            if (W.allFinite() && relative_residual(A, W, F) <= kResidualTol) {
                double cond = condition_estimate(A, [&](const Vector& v) { return ldlt.solve(v); });
                return finish(SolvePath::ldlt, std::move(W), cond);
            }
        }
    }
    if (hint == MatrixHint::general) {
        Eigen::ColPivHouseholderQR<Matrix> qr(A);
        Matrix W = qr.solve(F);
        if (W.allFinite() && relative_residual(A, W, F) <= kResidualTol) {
            double cond = condition_estimate(A, [&](const Vector& v) { return qr.solve(v); });
            return finish(SolvePath::qr, std::move(W), cond);
        }
    }
    // least-squares fallback for ill-conditioned systems
    Eigen::BDCSVD<Matrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Matrix W = svd.solve(F);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(svd.singularValues().size() - 1);
    finish(SolvePath::svd, std::move(W),
           smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity());
    if (res.residual_norm > 1e-6)
        throw SolverError("solve: all paths failed the residual check; svd residual " +
                          std::to_string(res.residual_norm) + ", cond estimate " +
                          std::to_string(res.cond_estimate) + ", beta " + std::to_string(beta));
    return res;
}

Matrix predict(const FourierBasis& basis, const SolveResult& result, const Matrix& x_norm,
               double offset) {
    if (result.W.rows() != basis.config().n_hidden)
        throw InvalidArgument("predict: weight rows != basis size");
    // feature blocks keep the N x Nh evaluation memory bounded
    const Eigen::Index bs = 2048;
    Matrix u(x_norm.rows(), result.W.cols());
    for (Eigen::Index start = 0; start < x_norm.rows(); start += bs) {
        const Eigen::Index m = std::min(bs, x_norm.rows() - start);
        u.middleRows(start, m).noalias() = basis.eval(x_norm.middleRows(start, m)) * result.W;
    }
    u /= result.output_scale;
    u.array() += offset;
    return u;
}

}  // namespace vmlfn
