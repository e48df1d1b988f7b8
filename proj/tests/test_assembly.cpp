#include <gtest/gtest.h>   // testing framework

#include <cmath>
#include <set>
#include <sstream>

#include "vmlfn/assembly.hpp"
#include "vmlfn/rng.hpp"
#include "vmlfn/solver.hpp"

using namespace vmlfn;

namespace {

BoxDomain case1_box() {
    Vector lo(3), hi(3);
    lo << 0, 0, 0;
    hi << 10, 10, 2;
    return BoxDomain(lo, hi);
}

BasisConfig bcfg(int nh, std::uint64_t seed = 13, int input_dim = 3) {
    BasisConfig c;
    c.n_hidden = nh;
    c.omega_min = 0.05;
    c.omega_max = 1.2;
    c.gamma = 5.0;
    c.input_dim = input_dim;
    c.spatial_dim = 3;
    c.seed = seed;
    return c;
}

// naive triple-loop weak-form assembly, the independent oracle
void brute_force(const FourierBasis& basis, const PdeCase& pde, const PointSet& pts,
                 Matrix& k_ref, Vector& f_ref) {
    const int nh = basis.config().n_hidden;
    Matrix xn = basis.domain().normalize(pts.coords);
    BasisEval e = basis.eval_parts(xn, true, false);
    k_ref = Matrix::Zero(nh, nh);
    f_ref = Vector::Zero(nh);
    for (Eigen::Index i = 0; i < pts.size(); ++i) {
        const Vector p = pts.coords.row(i).transpose();
        const double a = pde.coeffs.a(p), c = pde.coeffs.c(p), f = pde.coeffs.f(p);
        for (int r = 0; r < nh; ++r) {
            for (int s = 0; s < nh; ++s) {
                double grad = 0.0;
                for (size_t ax = 0; ax < e.B.size(); ++ax) grad += e.B[ax](i, r) * e.B[ax](i, s);
                k_ref(r, s) += pts.weight * (a * grad + c * e.H(i, r) * e.H(i, s));
            }
            f_ref[r] += pts.weight * e.H(i, r) * f;
        }
    }
}

}  // namespace

TEST(assembly, matches_brute_force_oracle) {
    BoxDomain box = case1_box();
    BoundarySpec bc(box, {{2, -1}});
    FourierBasis basis(bcfg(8), bc);
    PdeCase pde = make_helmholtz_case(box, bc, 1.3,
                                      [](const Vector& x) { return std::sin(x[0]) + x[2]; });
    PointSet pts = sample_interior(box, 32, 21);
    WeakFormSystem sys = assemble_scalar(basis, pde, pts, {});
    Matrix k_ref;
    Vector f_ref;
    brute_force(basis, pde, pts, k_ref, f_ref);
    EXPECT_LE((sys.K - k_ref).norm() / k_ref.norm(), 1e-10);
    EXPECT_LE((sys.F.col(0) - f_ref).norm() / f_ref.norm(), 1e-10);
}

TEST(assembly, block_size_does_not_change_result) {
    BoxDomain box = case1_box();
    BoundarySpec bc(box, {{2, -1}});
    FourierBasis basis(bcfg(16), bc);
    PdeCase pde = make_heat_case(box, bc, 3.0, [](const Vector& x) { return x[0] * x[1]; });
    PointSet pts = sample_interior(box, 500, 23);
    AssemblyOptions o1, o2;
    o1.block_size = 1024;
    o2.block_size = 77;
    WeakFormSystem a = assemble_scalar(basis, pde, pts, {}, o1);
    WeakFormSystem b = assemble_scalar(basis, pde, pts, {}, o2);
    EXPECT_LE((a.K - b.K).norm() / a.K.norm(), 1e-13);
    EXPECT_LE((a.F - b.F).norm() / std::max(a.F.norm(), 1e-300), 1e-13);
}

TEST(assembly, symmetry_exact_and_finite) {
    BoxDomain box = case1_box();
    BoundarySpec bc(box, {{2, -1}});
    FourierBasis basis(bcfg(32), bc);
    PdeCase pde = make_helmholtz_case(box, bc, 1.4, [](const Vector&) { return 1.0; });
    WeakFormSystem sys = assemble_scalar(basis, pde, sample_interior(box, 400, 3), {});
    EXPECT_EQ((sys.K - sys.K.transpose()).norm(), 0.0);
    EXPECT_TRUE(sys.K.allFinite());
}

TEST(assembly, heat_spd_after_shift) {
    BoxDomain box = case1_box();
    BoundarySpec bc(box, {{2, -1}});
    FourierBasis basis(bcfg(48), bc);
    PdeCase pde = make_heat_case(box, bc, 2.0, [](const Vector&) { return 1.0; });
    WeakFormSystem sys = assemble_scalar(basis, pde, sample_interior(box, 600, 5), {});
    const double beta = 1e-12 * sys.K.trace() / double(sys.K.rows());
    Matrix shifted = sys.K + beta * Matrix::Identity(sys.K.rows(), sys.K.cols());
    Eigen::LLT<Matrix> llt(shifted);
    EXPECT_EQ(llt.info(), Eigen::Success);
}

TEST(assembly, zero_source_zero_load) {
    BoxDomain box = case1_box();
    BoundarySpec bc(box, {{2, -1}});
    FourierBasis basis(bcfg(16), bc);
    PdeCase pde = make_heat_case(box, bc, 2.0, [](const Vector&) { return 0.0; });
    WeakFormSystem sys = assemble_scalar(basis, pde, sample_interior(box, 100, 7), {});
    EXPECT_EQ(sys.F.cwiseAbs().maxCoeff(), 0.0);
    SolveResult sol = solve(sys.K, sys.F, 1e-8, MatrixHint::spd);
    EXPECT_EQ(sol.W.cwiseAbs().maxCoeff(), 0.0);
}

TEST(assembly, nonfinite_coefficient_names_point) {
    BoxDomain box = case1_box();
    BoundarySpec bc(box, {{2, -1}});
    FourierBasis basis(bcfg(8), bc);
    PdeCase pde = make_heat_case(box, bc, 2.0, [](const Vector& x) {
        return x[0] > 5.0 ? std::numeric_limits<double>::quiet_NaN() : 1.0;
    });
    try {
        assemble_scalar(basis, pde, sample_interior(box, 64, 9), {});
        FAIL() << "expected AssemblyError";
    } catch (const AssemblyError& e) {
        EXPECT_NE(std::string(e.what()).find("'f'"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("point"), std::string::npos);
    }
}

TEST(assembly, flux_load_hand_value) {
    // single point, single column: dF = weight * H * q, one-term hand sum
    Vector lo(3), hi(3);
    lo << -1, -1, -1;
    hi << 1, 1, 1;
    BoxDomain box(lo, hi);
    BoundarySpec none(box, {});
    BasisConfig c = bcfg(1);
    Matrix omega(1, 3);
    omega << 0.25, 0.0, 0.0;   // sin(pi/2)=1 at x=(1,0,0) with phase 0
    Vector phase(1);
    phase << 0.0;
    FourierBasis basis(c, none, omega, phase);
    PointSet face;
    face.kind = PointSet::Kind::boundary;
    face.face = {0, +1};
    face.coords = Matrix(1, 3);
    face.coords << 1.0, 0.0, 0.0;
    face.weight = 2.0;
    const double eta = 1.0 / (1.0 + std::pow(2 * M_PI * 0.25, 2));   // H = eta at this point
    Vector df = assemble_flux_load(basis, face, 3.0);
    EXPECT_NEAR(df[0], 2.0 * eta * 3.0, 1e-14);
}

TEST(assembly, flux_zero_is_zero) {
    BoxDomain box = case1_box();
    BoundarySpec bc(box, {{2, -1}});
    FourierBasis basis(bcfg(8), bc);
    PointSet top = sample_face(box, {2, +1}, 25, 3);
    EXPECT_EQ(assemble_flux_load(basis, top, 0.0).cwiseAbs().maxCoeff(), 0.0);
}

TEST(assembly, fp32_mode_rounds_but_stays_close) {
    BoxDomain box = case1_box();
    BoundarySpec bc(box, {{2, -1}});
    FourierBasis basis(bcfg(32), bc);
    PdeCase pde = make_heat_case(box, bc, 2.0, [](const Vector& x) { return x[0]; });
    PointSet pts = sample_interior(box, 500, 31);
    AssemblyOptions o32, o64;
    o32.precision = Precision::fp32;
    WeakFormSystem a = assemble_scalar(basis, pde, pts, {}, o32);
    WeakFormSystem b = assemble_scalar(basis, pde, pts, {}, o64);
    EXPECT_EQ(a.precision, Precision::fp32);
    const double rel = (a.K - b.K).norm() / b.K.norm();
    EXPECT_GT(rel, 0.0);        // fp32 rounding happened
    EXPECT_LT(rel, 1e-5);       // but blocked fp64 accumulation keeps it tight
    // fp32 values are exactly representable in float
    Eigen::MatrixXf kf = a.K.cast<float>();
    EXPECT_EQ((kf.cast<double>() - a.K).norm(), 0.0);
}

TEST(assembly, parametric_hadamard_matches_fixed_kappa) {
    // kappa == const over all points reproduces assemble_scalar with a == kappa
    BoxDomain box = case1_box();
    BoundarySpec bc(box, {{2, -1}});
    PdeCase pde = make_parametric4d_case(
        box, bc, [](const Vector& x, double) { return x[0] + 1.0; }, 30.0, 90.0, 10);
    FourierBasis basis(bcfg(12, 13, 4), pde.basis_boundary());

    PointSet spatial = sample_interior(box, 64, 3);
    PointSet aug;
    aug.kind = PointSet::Kind::interior;
    aug.coords = Matrix(64, 4);
    aug.coords.leftCols(3) = spatial.coords;
    aug.coords.col(3).setConstant(60.0);
    aug.weight = 0.5;
    WeakFormSystem sys = assemble_parametric4d(basis, pde, aug, {});

    // oracle: brute force with a = 60 on the same augmented points
    Matrix xn = basis.domain().normalize(aug.coords);
    BasisEval e = basis.eval_parts(xn, true, false);
    Matrix k_ref = Matrix::Zero(12, 12);
    for (Eigen::Index i = 0; i < 64; ++i)
        for (int r = 0; r < 12; ++r)
            for (int s = 0; s < 12; ++s) {
                double g = 0.0;
                for (int ax = 0; ax < 3; ++ax) g += e.B[ax](i, r) * e.B[ax](i, s);
                k_ref(r, s) += aug.weight * 60.0 * g;
            }
    EXPECT_LE((sys.K - k_ref).norm() / k_ref.norm(), 1e-10);
}

TEST(assembly, parametric_rejects_kappa_outside_range) {
    BoxDomain box = case1_box();
    BoundarySpec bc(box, {{2, -1}});
    PdeCase pde = make_parametric4d_case(
        box, bc, [](const Vector&, double) { return 1.0; }, 30.0, 90.0, 10);
    FourierBasis basis(bcfg(8, 13, 4), pde.basis_boundary());
    PointSet aug;
    aug.kind = PointSet::Kind::interior;
    aug.coords = Matrix::Zero(4, 4);
    aug.coords.col(3).setConstant(120.0);   // outside Lambda
    aug.coords.col(0).setConstant(1.0);
    aug.weight = 1.0;
    EXPECT_THROW(assemble_parametric4d(basis, pde, aug, {}), InvalidArgument);
}

TEST(assembly, sample_augmented_snapshots) {
    BoxDomain box = case1_box();
    BoundarySpec bc(box, {{2, -1}});
    PdeCase pde = make_parametric4d_case(
        box, bc, [](const Vector&, double) { return 1.0; }, 30.0, 90.0, 10);
    PointSet aug = sample_augmented(pde, 100, 5);
    EXPECT_EQ(aug.size(), 1000);
    EXPECT_DOUBLE_EQ(aug.weight, 200.0 * 60.0 / 1000.0);
    // snapshots are uniform over [30, 90] and exclude nothing
    std::set<double> kappas(aug.coords.col(3).data(), aug.coords.col(3).data() + aug.size());
    EXPECT_EQ(kappas.size(), 10u);
    EXPECT_DOUBLE_EQ(*kappas.begin(), 30.0);
    EXPECT_DOUBLE_EQ(*kappas.rbegin(), 90.0);
    // unseen test values are not training snapshots
    for (double unseen : {45.0, 60.0, 75.0}) EXPECT_EQ(kappas.count(unseen), 0u);
}

TEST(assembly, helmholtz_indefiniteness_permitted) {
    // c = -k^2 makes K indefinite; no SPD assertion may hold for Case I
    BoxDomain box = case1_box();
    BoundarySpec bc(box, {{2, -1}});
    FourierBasis basis(bcfg(64), bc);
    PdeCase pde = make_helmholtz_case(box, bc, 1.4, [](const Vector&) { return 1.0; });
    WeakFormSystem sys =
        assemble_scalar(basis, pde, sample_interior(box, 2000, 5, SampleStrategy::grid), {});
    Eigen::SelfAdjointEigenSolver<Matrix> eig(sys.K);
    EXPECT_LT(eig.eigenvalues().minCoeff(), 0.0);
    EXPECT_GT(eig.eigenvalues().maxCoeff(), 0.0);
}

TEST(assembly, monte_carlo_quadrature_scaling) {
    // K perturbation shrinks like N^{-1/2}: a 16x point spread separates the
    // rate from O(1) and O(1/N) even with seed-to-seed noise (10 seeds, RMS)
    BoxDomain box = case1_box();
    BoundarySpec bc(box, {{2, -1}});
    FourierBasis basis(bcfg(12), bc);
    PdeCase pde = make_heat_case(box, bc, 1.0, [](const Vector&) { return 1.0; });
    Matrix k_ref =
        assemble_scalar(basis, pde, sample_interior(box, 400000, 999), {}).K;
    double err_n = 0.0, err_16n = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        err_n += (assemble_scalar(basis, pde, sample_interior(box, 500, seed), {}).K - k_ref)
                     .squaredNorm();
        err_16n += (assemble_scalar(basis, pde, sample_interior(box, 8000, seed + 500), {}).K -
                    k_ref)
                       .squaredNorm();
    }
    const double ratio = std::sqrt(err_n / err_16n);   // expect ~ sqrt(16) = 4
    EXPECT_GT(ratio, 2.4);
    EXPECT_LT(ratio, 6.0);
}

TEST(grid_source, node_exact_and_midpoint) {
    std::istringstream in(
        "2 1 1\n"
        "0 0 0\n"
        "1 1 1\n"
        "0 4\n");
    GridSource g = GridSource::read(in, "<test>");
    Vector x(3);
    x << 0, 0, 0;
    EXPECT_DOUBLE_EQ(g.value(x), 0.0);
    x << 1, 0, 0;
    EXPECT_DOUBLE_EQ(g.value(x), 4.0);
    x << 0.5, 0, 0;
    EXPECT_DOUBLE_EQ(g.value(x), 2.0);   // linear midpoint
    EXPECT_EQ(g.clamped_queries(), 0u);
    x << 2.0, 0, 0;
    EXPECT_DOUBLE_EQ(g.value(x), 4.0);   // clamped to the boundary value
    EXPECT_EQ(g.clamped_queries(), 1u);
}

TEST(grid_source, trilinear_convergence_order) {
    // sampling an analytic field to grids with halved spacing: error ~ h^2
    auto field = [](const Vector& x) {
        return std::sin(2.0 * x[0]) * std::cos(1.5 * x[1]) + 0.3 * x[2] * x[2];
    };
    auto build = [&](Eigen::Index n) {
        std::ostringstream os;
        os << n << ' ' << n << ' ' << n << "\n0 0 0\n1 1 1\n";
        Vector x(3);
        for (Eigen::Index k = 0; k < n; ++k)
            for (Eigen::Index j = 0; j < n; ++j)
                for (Eigen::Index i = 0; i < n; ++i) {
                    x << double(i) / double(n - 1), double(j) / double(n - 1),
                        double(k) / double(n - 1);
                    os << field(x) << ' ';
                }
        std::istringstream in(os.str());
        return GridSource::read(in, "<gen>");
    };
    double errs[2];
    int idx = 0;
    for (Eigen::Index n : {17, 33}) {
        GridSource g = build(n);
        double worst = 0.0;
        vmlfn::CounterRng rng(3, 1);
        Vector x(3);
        for (int t = 0; t < 500; ++t) {
            for (int k = 0; k < 3; ++k) x[k] = rng.next_double();
            worst = std::max(worst, std::abs(g.value(x) - field(x)));
        }
        errs[idx++] = worst;
    }
    EXPECT_LT(errs[1], errs[0] / 2.5);   // roughly quadratic
}
