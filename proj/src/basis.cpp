#include "vmlfn/basis.hpp"

#include <cmath>

#include "vmlfn/rng.hpp"

namespace vmlfn {

void BasisConfig::validate() const {
    if (n_hidden < 1) throw InvalidArgument("basis: n_hidden must be >= 1");
    if (!(omega_min > 0.0) || !(omega_max >= omega_min))
        throw InvalidArgument("basis: need 0 < omega_min <= omega_max");
    if (!(gamma > 0.0)) throw InvalidArgument("basis: gamma must be > 0");
    if (spatial_dim < 1 || spatial_dim > input_dim)
        throw InvalidArgument("basis: need 1 <= spatial_dim <= input_dim");
}

FourierBasis::FourierBasis(BasisConfig config, const BoundarySpec& spec)
    : FourierBasis(std::move(config), spec, Matrix(), Vector()) {
    CounterRng rng(config_.seed, 1);
    const int nh = config_.n_hidden;
    const int d = config_.input_dim;
    omega_.resize(nh, d);
    phase_.resize(nh);
    const double llo = std::log10(config_.omega_min);
    const double lhi = std::log10(config_.omega_max);
    for (int j = 0; j < nh; ++j) {
        // direction uniform on the unit hypersphere, magnitude log-uniform
        Vector dir(d);
        double nrm = 0.0;
        do {
            for (int k = 0; k < d; ++k) dir[k] = rng.normal();
            nrm = dir.norm();
        } while (nrm == 0.0);
        const double mag = std::pow(10.0, rng.uniform(llo, lhi));
        omega_.row(j) = (mag / nrm) * dir.transpose();
        phase_[j] = rng.uniform(0.0, 2.0 * M_PI);
    }
    eta_ = (1.0 + (2.0 * M_PI * omega_).rowwise().squaredNorm().array()).inverse();
}

FourierBasis::FourierBasis(BasisConfig config, const BoundarySpec& spec, Matrix omega,
                           Vector phase)
    : config_(std::move(config)),
      domain_(spec.domain()),
      dfaces_(spec.dirichlet_faces()),
      omega_(std::move(omega)),
      phase_(std::move(phase)) {
    config_.validate();
    if (domain_.dim() != config_.input_dim)
        throw InvalidArgument("basis: domain dimension must equal input_dim");
    for (const FaceId& f : dfaces_)
        if (f.axis >= config_.spatial_dim)
            throw InvalidArgument("basis: Dirichlet face on a parametric axis");
    norm_scale_.resize(config_.spatial_dim);
    for (int k = 0; k < config_.spatial_dim; ++k) norm_scale_[k] = 2.0 / domain_.side(k);
    if (omega_.size() > 0) {
        if (omega_.rows() != config_.n_hidden || omega_.cols() != config_.input_dim ||
            phase_.size() != config_.n_hidden)
            throw InvalidArgument("basis: stored array shapes inconsistent with config");
        eta_ = (1.0 + (2.0 * M_PI * omega_).rowwise().squaredNorm().array()).inverse();
    }
}

FourierBasis build_basis(const BasisConfig& config, const BoundarySpec& spec) {
    return FourierBasis(config, spec);
}

void FourierBasis::check_input(const Matrix& x_norm) const {
    if (x_norm.cols() != config_.input_dim)
        throw InvalidArgument("basis eval: point dimension != input_dim");
}

void FourierBasis::envelope(const Matrix& x_norm, Vector& g, Matrix& dg, Matrix& d2g) const {
    const Eigen::Index n = x_norm.rows();
    const int sd = config_.spatial_dim;
    g = Vector::Ones(n);
    dg = Matrix::Zero(n, sd);
    d2g = Matrix::Zero(n, sd);
    if (dfaces_.empty()) return;

    // per-axis factor t and its derivatives; each axis holds <= 2 tanh factors
    Matrix t = Matrix::Ones(n, sd), dt = Matrix::Zero(n, sd), d2t = Matrix::Zero(n, sd);
    const double gm = config_.gamma;
    for (const FaceId& f : dfaces_) {
        const int ax = f.axis;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double dist = (f.side < 0) ? (x_norm(i, ax) + 1.0) : (1.0 - x_norm(i, ax));
            const double sgn = (f.side < 0) ? 1.0 : -1.0;
            const double th = std::tanh(gm * dist);
            const double sech2 = 1.0 - th * th;
            const double v = th;
            const double dv = gm * sech2 * sgn;
            const double d2v = -2.0 * gm * gm * th * sech2;
            const double t0 = t(i, ax), dt0 = dt(i, ax), d2t0 = d2t(i, ax);
            t(i, ax) = t0 * v;
            dt(i, ax) = dt0 * v + t0 * dv;
            d2t(i, ax) = d2t0 * v + 2.0 * dt0 * dv + t0 * d2v;
        }
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        double prod = 1.0;
        for (int k = 0; k < sd; ++k) prod *= t(i, k);
        g[i] = prod;
        for (int k = 0; k < sd; ++k) {
            double others = 1.0;
            for (int j = 0; j < sd; ++j)
                if (j != k) others *= t(i, j);
            dg(i, k) = dt(i, k) * others;
            d2g(i, k) = d2t(i, k) * others;
        }
    }
}

BasisEval FourierBasis::eval_parts(const Matrix& x_norm, bool grad, bool laplacian) const {
    check_input(x_norm);
    const Eigen::Index n = x_norm.rows();
    const int nh = config_.n_hidden;
    const int sd = config_.spatial_dim;

    Matrix theta = 2.0 * M_PI * (x_norm * omega_.transpose());
    theta.rowwise() += phase_.transpose();
    Matrix s = theta.array().sin();

    Vector g;
    Matrix dg, d2g;
    envelope(x_norm, g, dg, d2g);

    BasisEval out;
    out.H = s.array().colwise() * g.array();
    out.H.array().rowwise() *= eta_.transpose().array();

    if (!grad && !laplacian) return out;
    Matrix c = theta.array().cos();

    if (grad) {
        out.B.resize(sd);
        for (int k = 0; k < sd; ++k) {
            Vector wk = 2.0 * M_PI * omega_.col(k);
            Matrix bk = (c.array().rowwise() * wk.transpose().array()).colwise() * g.array();
            bk.array() += s.array().colwise() * dg.col(k).array();
            bk.array().rowwise() *= eta_.transpose().array();
            out.B[k] = norm_scale_[k] * bk;
        }
    }
    if (laplacian) {
        out.L = Matrix::Zero(n, nh);
        for (int k = 0; k < sd; ++k) {
            Vector wk = 2.0 * M_PI * omega_.col(k);
            Matrix lk = s.array().colwise() * d2g.col(k).array();
            lk.array() += 2.0 * ((c.array().rowwise() * wk.transpose().array()).colwise() *
                                 dg.col(k).array());
            lk.array() -= (s.array().rowwise() * wk.array().square().transpose()).colwise() *
                          g.array();
            out.L += (norm_scale_[k] * norm_scale_[k]) * lk;
        }
        out.L.array().rowwise() *= eta_.transpose().array();
    }
    return out;
}

Matrix FourierBasis::eval(const Matrix& x_norm) const {
    return eval_parts(x_norm, false, false).H;
}

std::vector<Matrix> FourierBasis::eval_grad(const Matrix& x_norm) const {
    return eval_parts(x_norm, true, false).B;
}

Matrix FourierBasis::eval_laplacian(const Matrix& x_norm) const {
    return eval_parts(x_norm, false, true).L;
}

}  // namespace vmlfn
