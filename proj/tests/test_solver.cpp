#include <gtest/gtest.h>   // testing framework

#include <Eigen/SVD>

#include "vmlfn/rng.hpp"
#include "vmlfn/solver.hpp"

using namespace vmlfn;

namespace {

Matrix random_matrix(Eigen::Index r, Eigen::Index c, std::uint64_t seed) {
    CounterRng rng(seed, 1);
    Matrix m(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < c; ++j) m(i, j) = rng.normal();
    return m;
}

Matrix random_spd(Eigen::Index n, std::uint64_t seed) {
    Matrix a = random_matrix(n, n, seed);
    return a * a.transpose() + Matrix::Identity(n, n);
}

}  // namespace

TEST(solver, identity_unit_load) {
    Matrix k = Matrix::Identity(4, 4);
    Matrix f = Matrix::Zero(4, 1);
    f(0, 0) = 1.0;
    SolveResult r = solve(k, f, 0.0, MatrixHint::spd);
    EXPECT_EQ(r.path, SolvePath::cholesky);
    EXPECT_NEAR((r.W - f).norm(), 0.0, 1e-14);
    EXPECT_NEAR(r.residual_norm, 0.0, 1e-14);
    EXPECT_DOUBLE_EQ(r.w_inf_norm, 1.0);
}

TEST(solver, spd_matches_svd_pseudo_solve) {
    Matrix k = random_spd(50, 3);
    Matrix f = random_matrix(50, 2, 4);
    SolveResult r = solve(k, f, 0.0, MatrixHint::spd);
    Matrix w_svd =
        Eigen::BDCSVD<Matrix>(k, Eigen::ComputeThinU | Eigen::ComputeThinV).solve(f);
    EXPECT_LE((r.W - w_svd).norm() / w_svd.norm(), 1e-9);
}

TEST(solver, indefinite_falls_back_to_ldlt) {
    Matrix k = Matrix::Zero(3, 3);
    k.diagonal() << 2.0, -1.0, 3.0;
    Matrix f = random_matrix(3, 1, 5);
    SolveResult r = solve(k, f, 0.0, MatrixHint::spd);
    EXPECT_EQ(r.path, SolvePath::ldlt);
    EXPECT_LE(r.residual_norm, 1e-10);
}

TEST(solver, beta_shifts_diagonal) {
    Matrix k = random_spd(20, 7);
    Matrix f = random_matrix(20, 1, 8);
    SolveResult r = solve(k, f, 0.5, MatrixHint::spd);
    Matrix a = k + 0.5 * Matrix::Identity(20, 20);
    EXPECT_LE((a * r.W - f).norm() / f.norm(), 1e-12);
    EXPECT_DOUBLE_EQ(r.beta_used, 0.5);
}

TEST(solver, monotone_regularization) {
    // ||W(beta2)|| <= ||W(beta1)|| whenever beta2 >= beta1 > 0, SPD case
    Matrix k = random_spd(30, 11);
    Matrix f = random_matrix(30, 1, 12);
    double prev = std::numeric_limits<double>::infinity();
    for (double beta : {1e-6, 1e-4, 1e-2, 1.0, 100.0}) {
        SolveResult r = solve(k, f, beta, MatrixHint::spd);
        EXPECT_LE(r.W.norm(), prev * (1 + 1e-12));
        prev = r.W.norm();
    }
}

TEST(solver, consistent_singular_system_solved) {
    Matrix k = Matrix::Zero(3, 3);
    k(0, 0) = 1.0;
    k(1, 1) = 1.0;   // rank 2
    Matrix f(3, 1);
    f << 1.0, 2.0, 0.0;   // consistent with the null space
    SolveResult r = solve(k, f, 0.0, MatrixHint::spd);
    EXPECT_NE(r.path, SolvePath::cholesky);   // LLT cannot factor the singular matrix
    EXPECT_LE(r.residual_norm, 1e-10);
    EXPECT_NEAR(r.W(0, 0), 1.0, 1e-10);
    EXPECT_NEAR(r.W(1, 0), 2.0, 1e-10);
    EXPECT_NEAR(r.W(2, 0), 0.0, 1e-10);   // minimum-norm member
}

TEST(solver, inconsistent_singular_system_fails_with_diagnostics) {
    Matrix k = Matrix::Zero(3, 3);
    k(0, 0) = 1.0;
    k(1, 1) = 1.0;
    Matrix f(3, 1);
    f << 1.0, 2.0, 3.0;   // unreachable third component
    try {
        solve(k, f, 0.0, MatrixHint::spd);
        FAIL() << "expected SolverError";
    } catch (const SolverError& e) {
        EXPECT_NE(std::string(e.what()).find("residual"), std::string::npos);
    }
}

TEST(solver, rejects_bad_inputs) {
    Matrix k = Matrix::Identity(3, 3);
    Matrix f = Matrix::Ones(2, 1);
    EXPECT_THROW(solve(k, f, 0.0), InvalidArgument);
    Matrix knan = k;
    knan(1, 1) = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(solve(knan, Matrix::Ones(3, 1), 0.0), InvalidArgument);
    EXPECT_THROW(solve(k, Matrix::Ones(3, 1), -1.0), InvalidArgument);
}

TEST(solver, condition_estimate_order_of_magnitude) {
    Matrix k = Matrix::Zero(40, 40);
    for (int i = 0; i < 40; ++i) k(i, i) = 1.0 + i * (999.0 / 39.0);   // cond = 1000
    Matrix f = Matrix::Ones(40, 1);
    SolveResult r = solve(k, f, 0.0, MatrixHint::spd);
    EXPECT_GT(r.cond_estimate, 100.0);
    EXPECT_LT(r.cond_estimate, 2000.0);
}
