#include "vmlfn/elasticity.hpp"

#include <algorithm>
#include <cmath>

namespace vmlfn {

LayeredMaterial::LayeredMaterial(std::vector<Layer> layers, double z_min, double z_max)
    : layers_(std::move(layers)), z_min_(z_min), z_max_(z_max) {
    if (layers_.empty()) throw InvalidArgument("material: at least one layer required");
    std::sort(layers_.begin(), layers_.end(),
              [](const Layer& a, const Layer& b) { return a.z_lo < b.z_lo; });
    const double tol = 1e-9 * (z_max - z_min);
    double cursor = z_min;
    for (const Layer& l : layers_) {
        if (!(l.e_modulus > 0.0)) throw InvalidArgument("material: E must be > 0");
        if (!(l.nu > 0.0 && l.nu < 0.5)) throw InvalidArgument("material: need 0 < nu < 0.5");
        if (std::abs(l.z_lo - cursor) > tol)
            throw InvalidArgument("material: layers must partition the z-extent without gaps");
        if (!(l.z_hi > l.z_lo)) throw InvalidArgument("material: layer needs z_hi > z_lo");
        cursor = l.z_hi;
    }
    if (std::abs(cursor - z_max) > tol)
        throw InvalidArgument("material: layers must reach the top of the domain");
}

const Layer& LayeredMaterial::at(double z) const {
    for (size_t i = 0; i < layers_.size(); ++i) {
        const bool last = i + 1 == layers_.size();
        if (z >= layers_[i].z_lo && (z < layers_[i].z_hi || (last && z <= layers_[i].z_hi)))
            return layers_[i];
    }
    throw AssemblyError("material lookup failed at z = " + std::to_string(z));
}

Matrix BlockSystem::global_k() const {
    const Eigen::Index n = k00.rows();
    Matrix g(3 * n, 3 * n);
    g.block(0, 0, n, n) = k00;
    g.block(n, n, n, n) = k11;
    g.block(2 * n, 2 * n, n, n) = k22;
    g.block(0, n, n, n) = k01;
    g.block(n, 0, n, n) = k01.transpose();
    g.block(0, 2 * n, n, n) = k02;
    g.block(2 * n, 0, n, n) = k02.transpose();
    g.block(n, 2 * n, n, n) = k12;
    g.block(2 * n, n, n, n) = k12.transpose();
    return g;
}

Vector BlockSystem::global_f() const {
    const Eigen::Index n = f[0].size();
    Vector g(3 * n);
    g.segment(0, n) = f[0];
    g.segment(n, n) = f[1];
    g.segment(2 * n, n) = f[2];
    return g;
}

namespace {

void round_fp32(Matrix& m) { m = m.cast<float>().cast<double>(); }

struct GramAcc {
    Matrix k;                     // lower triangle accumulated
    Eigen::MatrixXf scratch;

    explicit GramAcc(Eigen::Index n) : k(Matrix::Zero(n, n)) {}

    void add(const Matrix& b, const Vector& d, Precision prec) {   // K += B^T diag(d) B
        if (prec == Precision::fp32) {
            Eigen::MatrixXf bs = (d.cwiseSqrt().asDiagonal() * b).cast<float>();
            scratch.setZero(b.cols(), b.cols());
            scratch.selfadjointView<Eigen::Lower>().rankUpdate(bs.transpose(), 1.0f);
            k += scratch.cast<double>();
        } else {
            Matrix bs = d.cwiseSqrt().asDiagonal() * b;
            k.selfadjointView<Eigen::Lower>().rankUpdate(bs.transpose(), 1.0);
        }
    }
    Matrix take() { return Matrix(k.selfadjointView<Eigen::Lower>()); }
};

Matrix cross_gram(const Matrix& ba, const Vector& da, const Matrix& bb, const Matrix& bc,
                  const Vector& dc, const Matrix& bd, Precision prec) {
    // A^T diag(da) B + C^T diag(dc) D, optionally through fp32 products
    if (prec == Precision::fp32) {
        Eigen::MatrixXf a = ba.cast<float>(), b = (da.asDiagonal() * bb).cast<float>();
        Eigen::MatrixXf c = bc.cast<float>(), d = (dc.asDiagonal() * bd).cast<float>();
        return (a.transpose() * b + c.transpose() * d).cast<double>();
    }
    return ba.transpose() * (da.asDiagonal() * bb) + bc.transpose() * (dc.asDiagonal() * bd);
}

}  // namespace

BlockSystem assemble_elastic(const FourierBasis& basis, const LayeredMaterial& material,
                             const SpatialFn& delta_t, const PointSet& interior,
                             const AssemblyOptions& options) {
    if (interior.kind != PointSet::Kind::interior)
        throw InvalidArgument("assemble_elastic: interior point set required");
    if (basis.config().spatial_dim != 3)
        throw InvalidArgument("assemble_elastic: 3-D basis required");
    const Eigen::Index nh = basis.config().n_hidden;
    const Eigen::Index n = interior.size();
    const Eigen::Index bs = std::max<Eigen::Index>(1, options.block_size);
    const BoxDomain& box = basis.domain();
    const double w = interior.weight;

    GramAcc a00(nh), a11(nh), a22(nh);
    Matrix k01 = Matrix::Zero(nh, nh), k02 = Matrix::Zero(nh, nh), k12 = Matrix::Zero(nh, nh);
    std::array<Vector, 3> f{Vector::Zero(nh), Vector::Zero(nh), Vector::Zero(nh)};
    double th_max = 0.0;

    for (Eigen::Index start = 0; start < n; start += bs) {
        const Eigen::Index m = std::min(bs, n - start);
        const Matrix pts = interior.coords.middleRows(start, m);
        BasisEval e = basis.eval_parts(box.normalize(pts), true, false);
        if (options.precision == Precision::fp32)
            for (Matrix& b : e.B) round_fp32(b);
        Vector lam(m), mu(m), th(m);
        for (Eigen::Index i = 0; i < m; ++i) {
            const Layer& l = material.at(pts(i, 2));
            lam[i] = l.lame_lambda();
            mu[i] = l.lame_mu();
            const double dt = delta_t(pts.row(i).transpose());
            if (!std::isfinite(dt))
                throw AssemblyError("assemble_elastic: non-finite delta T at point " +
                                    std::to_string(start + i));
            th[i] = (3.0 * lam[i] + 2.0 * mu[i]) * l.alpha_th * dt;
            th_max = std::max(th_max, std::abs(l.alpha_th * dt));
        }
        const Matrix& bx = e.B[0];
        const Matrix& by = e.B[1];
        const Matrix& bz = e.B[2];
        Vector l2m = w * (lam + 2.0 * mu);
        Vector muw = w * mu;
        Vector lamw = w * lam;

        a00.add(bx, l2m, options.precision);
        a00.add(by, muw, options.precision);
        a00.add(bz, muw, options.precision);
        a11.add(by, l2m, options.precision);
        a11.add(bz, muw, options.precision);
        a11.add(bx, muw, options.precision);
        a22.add(bz, l2m, options.precision);
        a22.add(bx, muw, options.precision);
        a22.add(by, muw, options.precision);
        k01 += cross_gram(bx, lamw, by, by, muw, bx, options.precision);
        k02 += cross_gram(bx, lamw, bz, bz, muw, bx, options.precision);
        k12 += cross_gram(by, lamw, bz, bz, muw, by, options.precision);

        f[0].noalias() += w * (bx.transpose() * th);
        f[1].noalias() += w * (by.transpose() * th);
        f[2].noalias() += w * (bz.transpose() * th);
    }

    BlockSystem sys;
    sys.n_points = n;
    sys.precision = options.precision;
    sys.k00 = a00.take();
    sys.k11 = a11.take();
    sys.k22 = a22.take();
    sys.k01 = std::move(k01);
    sys.k02 = std::move(k02);
    sys.k12 = std::move(k12);
    sys.output_scale = 1.0;
    if (options.normalize_field && th_max > 0.0) {
        double len = 0.0;
        for (int i = 0; i < 3; ++i) len = std::max(len, box.side(i));
        sys.output_scale = 1.0 / (th_max * len);   // free-expansion displacement scale
    }
    for (Vector& fe : f) fe *= sys.output_scale;
    sys.f = std::move(f);
    if (options.precision == Precision::fp32) {
        round_fp32(sys.k00);
        round_fp32(sys.k11);
        round_fp32(sys.k22);
        round_fp32(sys.k01);
        round_fp32(sys.k02);
        round_fp32(sys.k12);
    }
    return sys;
}

SolveResult solve_elastic(const BlockSystem& system, double beta) {
    if (!(beta > 0.0))
        throw InvalidArgument("solve_elastic: beta must be > 0 (rigid-body null space)");
    SolveResult res = solve(system.global_k(), system.global_f(), beta, MatrixHint::spd);
    res.output_scale = system.output_scale;
    return res;
}

namespace {

std::array<Vector, 3> split_weights(const FourierBasis& basis, const SolveResult& result) {
    const Eigen::Index nh = basis.config().n_hidden;
    if (result.W.rows() != 3 * nh || result.W.cols() != 1)
        throw InvalidArgument("elasticity: weights must be a stacked 3Nh vector");
    return {result.W.col(0).segment(0, nh), result.W.col(0).segment(nh, nh),
            result.W.col(0).segment(2 * nh, nh)};
}

}  // namespace

Matrix displacement(const FourierBasis& basis, const SolveResult& result, const Matrix& x_norm) {
    auto wxyz = split_weights(basis, result);
    Matrix h = basis.eval(x_norm);
    Matrix u(x_norm.rows(), 3);
    for (int c = 0; c < 3; ++c) u.col(c) = (h * wxyz[c]) / result.output_scale;
    return u;
}

Matrix strain(const FourierBasis& basis, const SolveResult& result, const Matrix& x_norm) {
    auto wxyz = split_weights(basis, result);
    std::vector<Matrix> b = basis.eval_grad(x_norm);
    const double s = result.output_scale;
    Matrix eps(x_norm.rows(), 6);
    eps.col(0) = (b[0] * wxyz[0]) / s;
    eps.col(1) = (b[1] * wxyz[1]) / s;
    eps.col(2) = (b[2] * wxyz[2]) / s;
    eps.col(3) = 0.5 * (b[1] * wxyz[0] + b[0] * wxyz[1]) / s;
    eps.col(4) = 0.5 * (b[2] * wxyz[0] + b[0] * wxyz[2]) / s;
    eps.col(5) = 0.5 * (b[2] * wxyz[1] + b[1] * wxyz[2]) / s;
    return eps;
}

}  // namespace vmlfn
