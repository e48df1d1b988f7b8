#include "vmlfn/assembly.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace vmlfn {

int PdeCase::input_dim() const {
    return kind == Kind::parametric4d ? domain.dim() + 1 : domain.dim();
}

BoxDomain PdeCase::basis_domain() const {
    if (kind != Kind::parametric4d) return domain;
    Vector lo(domain.dim() + 1), hi(domain.dim() + 1);
    lo.head(domain.dim()) = domain.lo();
    hi.head(domain.dim()) = domain.hi();
    lo[domain.dim()] = kappa_min;
    hi[domain.dim()] = kappa_max;
    return BoxDomain(lo, hi);
}

BoundarySpec PdeCase::basis_boundary() const {
    if (kind != Kind::parametric4d) return boundary;
    return BoundarySpec(basis_domain(), boundary.dirichlet_faces(), {},
                        boundary.dirichlet_offset());
}

std::string to_string(PdeCase::Kind k) {
    switch (k) {
        case PdeCase::Kind::helmholtz: return "helmholtz";
        case PdeCase::Kind::heat: return "heat";
        case PdeCase::Kind::heat_flux: return "heat-flux";
        case PdeCase::Kind::parametric4d: return "parametric-4d";
    }
    return "?";
}

PdeCase::Kind parse_case_kind(const std::string& s) {
    if (s == "helmholtz") return PdeCase::Kind::helmholtz;
    if (s == "heat") return PdeCase::Kind::heat;
    if (s == "heat-flux") return PdeCase::Kind::heat_flux;
    if (s == "parametric-4d") return PdeCase::Kind::parametric4d;
    throw InvalidArgument("unknown case kind '" + s + "'");
}

PdeCase make_helmholtz_case(const BoxDomain& domain, const BoundarySpec& boundary, double k,
                            SpatialFn f) {
    PdeCase c{PdeCase::Kind::helmholtz, domain, boundary,
              PdeCoefficients{[](const Vector&) { return 1.0; },
                              [k](const Vector&) { return -k * k; }, std::move(f), 1}};
    c.k = k;
    c.normalize_field = false;
    return c;
}

PdeCase make_heat_case(const BoxDomain& domain, const BoundarySpec& boundary, double kappa,
                       SpatialFn source) {
    if (!(kappa > 0.0)) throw InvalidArgument("heat case: kappa must be > 0");
    PdeCase c{PdeCase::Kind::heat, domain, boundary,
              PdeCoefficients{[kappa](const Vector&) { return kappa; },
                              [](const Vector&) { return 0.0; }, std::move(source), 1}};
    c.kappa = kappa;
    c.normalize_field = true;
    return c;
}

PdeCase make_heat_flux_case(const BoxDomain& domain, const BoundarySpec& boundary, double kappa,
                            SpatialFn source, double q_top) {
    PdeCase c = make_heat_case(domain, boundary, kappa, std::move(source));
    c.kind = PdeCase::Kind::heat_flux;
    c.q_top = q_top;
    return c;
}

PdeCase make_parametric4d_case(const BoxDomain& domain, const BoundarySpec& boundary,
                               std::function<double(const Vector&, double)> source,
                               double kappa_min, double kappa_max, int snapshots) {
    if (!(kappa_min > 0.0) || !(kappa_max > kappa_min))
        throw InvalidArgument("parametric case: need 0 < kappa_min < kappa_max");
    if (snapshots < 2) throw InvalidArgument("parametric case: need >= 2 snapshots");
    const int sd = domain.dim();
    auto src = [source, sd](const Vector& p) { return source(p.head(sd), p[sd]); };
    PdeCase c{PdeCase::Kind::parametric4d, domain, boundary,
              PdeCoefficients{[sd](const Vector& p) { return p[sd]; },
                              [](const Vector&) { return 0.0; }, src, 1}};
    c.kappa_min = kappa_min;
    c.kappa_max = kappa_max;
    c.kappa_snapshots = snapshots;
    c.normalize_field = true;
    return c;
}

PdeCase make_custom_case(const BoxDomain& domain, const BoundarySpec& boundary,
                         PdeCoefficients coeffs) {
    return PdeCase{PdeCase::Kind::heat, domain, boundary, std::move(coeffs)};
}

namespace {

Vector eval_coeff(const SpatialFn& fn, const Matrix& pts, const char* name) {
    Vector out(pts.rows());
    for (Eigen::Index i = 0; i < pts.rows(); ++i) {
        out[i] = fn(pts.row(i).transpose());
        if (!std::isfinite(out[i])) {
            std::ostringstream os;
            os << "assembly: coefficient '" << name << "' is non-finite at point ("
               << pts.row(i) << ")";
            throw AssemblyError(os.str());
        }
    }
    return out;
}

void round_fp32(Matrix& m) { m = m.cast<float>().cast<double>(); }

// K += alpha * A^T diag(d) A with d >= 0, through an fp32 or fp64 rank update
void add_weighted_gram(Matrix& k_acc, Eigen::MatrixXf& kf_scratch, const Matrix& a,
                       const Vector& d, double alpha, Precision prec) {
    if (prec == Precision::fp32) {
        Eigen::MatrixXf as = (d.cwiseSqrt().asDiagonal() * a).cast<float>();
        kf_scratch.setZero(a.cols(), a.cols());
        kf_scratch.selfadjointView<Eigen::Lower>().rankUpdate(as.transpose(),
                                                              static_cast<float>(alpha));
        k_acc += kf_scratch.cast<double>();
    } else {
        Matrix as = d.cwiseSqrt().asDiagonal() * a;
        k_acc.selfadjointView<Eigen::Lower>().rankUpdate(as.transpose(), alpha);
    }
}

struct ScaleEstimate {
    double f_max = 0.0;
    double a_min = std::numeric_limits<double>::infinity();
};

}  // namespace

WeakFormSystem assemble_scalar(const FourierBasis& basis, const PdeCase& pde,
                               const PointSet& interior, const std::vector<PointSet>& neumann,
                               const AssemblyOptions& options) {
    if (interior.kind != PointSet::Kind::interior)
        throw InvalidArgument("assemble_scalar: interior point set required");
    const int nh = basis.config().n_hidden;
    const BoxDomain box = basis.domain();
    const Eigen::Index n = interior.size();
    const Eigen::Index bs = std::max<Eigen::Index>(1, options.block_size);

    Matrix K = Matrix::Zero(nh, nh);
    Matrix F = Matrix::Zero(nh, pde.coeffs.output_dim);
    Eigen::MatrixXf kf_scratch;
    ScaleEstimate est;

    for (Eigen::Index start = 0; start < n; start += bs) {
        const Eigen::Index m = std::min(bs, n - start);
        const Matrix pts = interior.coords.middleRows(start, m);
        Matrix xn = box.normalize(pts);
        BasisEval e = basis.eval_parts(xn, true, false);
        if (options.precision == Precision::fp32) {
            round_fp32(e.H);
            for (Matrix& b : e.B) round_fp32(b);
        }
        Vector a = eval_coeff(pde.coeffs.a, pts, "a");
        Vector c = eval_coeff(pde.coeffs.c, pts, "c");
        Vector f = eval_coeff(pde.coeffs.f, pts, "f");
        if (a.minCoeff() <= 0.0)
            throw AssemblyError("assembly: coefficient 'a' must be positive (ellipticity)");
        est.f_max = std::max(est.f_max, f.cwiseAbs().maxCoeff());
        est.a_min = std::min(est.a_min, a.minCoeff());

        for (const Matrix& bk : e.B)
            add_weighted_gram(K, kf_scratch, bk, interior.weight * a, 1.0, options.precision);
        // reaction term may change sign; split into the two definite parts
        Vector cpos = c.cwiseMax(0.0), cneg = (-c).cwiseMax(0.0);
        if (cpos.maxCoeff() > 0.0)
            add_weighted_gram(K, kf_scratch, e.H, interior.weight * cpos, 1.0, options.precision);
        if (cneg.maxCoeff() > 0.0)
            add_weighted_gram(K, kf_scratch, e.H, interior.weight * cneg, -1.0, options.precision);
        F.noalias() += interior.weight * (e.H.transpose() * f);
    }

    WeakFormSystem sys;
    sys.n_interior = n;
    sys.precision = options.precision;

    double flux_max = 0.0;
    for (const PointSet& fs : neumann) {
        if (fs.kind != PointSet::Kind::boundary)
            throw InvalidArgument("assemble_scalar: Neumann set must be a boundary PointSet");
        if (pde.boundary.is_dirichlet(fs.face))
            throw InvalidArgument("assemble_scalar: Neumann set lies on a Dirichlet face");
        const NeumannFace* nf = nullptr;
        for (const NeumannFace& cand : pde.boundary.neumann_faces())
            if (cand.face == fs.face) nf = &cand;
        if (nf == nullptr || !nf->flux) continue;   // zero-flux face contributes nothing
        Matrix xn = box.normalize(fs.coords);
        Matrix hf = basis.eval(xn);
        if (options.precision == Precision::fp32) round_fp32(hf);
        Vector h = eval_coeff(nf->flux, fs.coords, "h");
        flux_max = std::max(flux_max, h.cwiseAbs().maxCoeff());
        F.noalias() += fs.weight * (hf.transpose() * h);
        sys.n_boundary += fs.size();
    }

    // symmetrize: only the lower triangle was accumulated
    K = K.selfadjointView<Eigen::Lower>();
    if (options.precision == Precision::fp32) {
        round_fp32(K);
        round_fp32(F);
    }
    if (!K.allFinite() || !F.allFinite())
        throw AssemblyError("assembly produced non-finite entries");

    sys.output_scale = 1.0;
    if (options.normalize_field) {
        // crude field magnitude estimate: max|f| L^2 / a plus the flux rise
        double len = 0.0;
        for (int i = 0; i < pde.domain.dim(); ++i) len = std::max(len, pde.domain.side(i));
        const double u_est = est.f_max * len * len / est.a_min + flux_max * len / est.a_min;
        if (u_est > 0.0 && std::isfinite(u_est)) sys.output_scale = 1.0 / u_est;
    }
    F *= sys.output_scale;
    sys.K = std::move(K);
    sys.F = std::move(F);
    return sys;
}

Vector assemble_flux_load(const FourierBasis& basis, const PointSet& face_points, double q) {
    if (face_points.kind != PointSet::Kind::boundary)
        throw InvalidArgument("assemble_flux_load: boundary point set required");
    Matrix xn = basis.domain().normalize(face_points.coords);
    Matrix h = basis.eval(xn);
    return face_points.weight * q * h.colwise().sum().transpose();
}

WeakFormSystem assemble_parametric4d(const FourierBasis& basis, const PdeCase& pde,
                                     const PointSet& augmented_points,
                                     const AssemblyOptions& options) {
    if (pde.kind != PdeCase::Kind::parametric4d)
        throw InvalidArgument("assemble_parametric4d: case kind mismatch");
    const int sd = pde.domain.dim();
    if (basis.config().input_dim != sd + 1)
        throw InvalidArgument("assemble_parametric4d: basis input_dim must be spatial_dim + 1");
    const auto& kcol = augmented_points.coords.col(sd);
    if (kcol.minCoeff() < pde.kappa_min - 1e-12 * (pde.kappa_max - pde.kappa_min) ||
        kcol.maxCoeff() > pde.kappa_max + 1e-12 * (pde.kappa_max - pde.kappa_min))
        throw InvalidArgument("assemble_parametric4d: kappa sample outside Lambda");
    return assemble_scalar(basis, pde, augmented_points, {}, options);
}

PointSet sample_augmented(const PdeCase& pde, Eigen::Index n_per_snapshot,
                          std::uint64_t rng_seed, SampleStrategy strategy) {
    if (pde.kind != PdeCase::Kind::parametric4d)
        throw InvalidArgument("sample_augmented: parametric case required");
    const int sd = pde.domain.dim();
    const int ns = pde.kappa_snapshots;
    std::vector<Matrix> parts;
    Eigen::Index total = 0;
    for (int i = 0; i < ns; ++i) {
        PointSet sp = sample_interior(pde.domain, n_per_snapshot, rng_seed + 1000003ULL * i,
                                      strategy);
        const double kappa =
            pde.kappa_min + (pde.kappa_max - pde.kappa_min) * double(i) / double(ns - 1);
        Matrix aug(sp.size(), sd + 1);
        aug.leftCols(sd) = sp.coords;
        aug.col(sd).setConstant(kappa);
        total += sp.size();
        parts.push_back(std::move(aug));
    }
    PointSet out;
    out.coords.resize(total, sd + 1);
    Eigen::Index row = 0;
    for (const Matrix& p : parts) {
        out.coords.middleRows(row, p.rows()) = p;
        row += p.rows();
    }
    out.kind = PointSet::Kind::interior;
    out.weight = pde.domain.volume() * (pde.kappa_max - pde.kappa_min) / double(total);
    return out;
}

GridSource GridSource::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open grid source file '" + path + "'");
    return read(in, path);
}

GridSource GridSource::read(std::istream& in, const std::string& origin) {
    auto data = std::make_shared<Data>();
    Eigen::Index nx, ny, nz;
    if (!(in >> nx >> ny >> nz) || nx < 1 || ny < 1 || nz < 1)
        throw IoError("grid source '" + origin + "': bad node counts");
    data->n = {nx, ny, nz};
    data->lo.resize(3);
    data->hi.resize(3);
    for (int i = 0; i < 3; ++i)
        if (!(in >> data->lo[i])) throw IoError("grid source '" + origin + "': bad lo");
    for (int i = 0; i < 3; ++i)
        if (!(in >> data->hi[i])) throw IoError("grid source '" + origin + "': bad hi");
    for (int i = 0; i < 3; ++i)
        if (data->n[i] > 1 && !(data->hi[i] > data->lo[i]))
            throw IoError("grid source '" + origin + "': hi must exceed lo");
    const Eigen::Index total = nx * ny * nz;
    data->values.resize(total);
    for (Eigen::Index i = 0; i < total; ++i)
        if (!(in >> data->values[i]))
            throw IoError("grid source '" + origin + "': expected " + std::to_string(total) +
                          " nodal values");
    GridSource g;
    g.data_ = std::move(data);
    return g;
}

double GridSource::Data::value(const Vector& x) const {
    double t[3];
    Eigen::Index i0[3];
    bool clamp = false;
    for (int ax = 0; ax < 3; ++ax) {
        if (n[ax] == 1) {
            i0[ax] = 0;
            t[ax] = 0.0;
            continue;
        }
        const double h = (hi[ax] - lo[ax]) / double(n[ax] - 1);
        double s = (x[ax] - lo[ax]) / h;
        if (s < 0.0) {
            s = 0.0;
            clamp = true;
        }
        if (s > double(n[ax] - 1)) {
            s = double(n[ax] - 1);
            clamp = true;
        }
        Eigen::Index i = static_cast<Eigen::Index>(std::floor(s));
        if (i >= n[ax] - 1) i = n[ax] - 2;
        i0[ax] = i;
        t[ax] = s - double(i);
    }
    if (clamp) clamped.fetch_add(1, std::memory_order_relaxed);
    auto at = [&](Eigen::Index i, Eigen::Index j, Eigen::Index k) {
        return values[i + n[0] * (j + n[1] * k)];
    };
    double acc = 0.0;
    for (int dz = 0; dz < 2; ++dz)
        for (int dy = 0; dy < 2; ++dy)
            for (int dx = 0; dx < 2; ++dx) {
                const double w = (dx ? t[0] : 1.0 - t[0]) * (dy ? t[1] : 1.0 - t[1]) *
                                 (dz ? t[2] : 1.0 - t[2]);
                if (w == 0.0) continue;
                acc += w * at(std::min(i0[0] + dx, n[0] - 1), std::min(i0[1] + dy, n[1] - 1),
                              std::min(i0[2] + dz, n[2] - 1));
            }
    return acc;
}

double GridSource::value(const Vector& x) const { return data_->value(x); }

SpatialFn GridSource::as_function() const {
    auto d = data_;
    return [d](const Vector& x) { return d->value(x); };
}

const std::vector<Eigen::Index>& GridSource::shape() const { return data_->n; }

std::uint64_t GridSource::clamped_queries() const { return data_->clamped.load(); }

}  // namespace vmlfn
