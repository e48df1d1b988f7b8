#include "vmlfn/oracle.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <fstream>

#include "vmlfn/rng.hpp"

namespace vmlfn {

Metrics metrics(const Vector& pred, const Vector& ref) {
    if (pred.size() != ref.size() || pred.size() < 1)
        throw InvalidArgument("metrics: length mismatch or empty input");
    Metrics m;
    Vector d = (pred - ref).cwiseAbs();
    m.avg_diff = d.mean();
    m.max_diff = d.maxCoeff();
    const double rn = ref.norm();
    if (rn == 0.0) {
        m.ref_zero = true;
        m.rel_l2 = pred.norm();
    } else {
        m.rel_l2 = (pred - ref).norm() / rn;
    }
    return m;
}

double coscossin_z_root() {
    // Newton on g(a) = sin(a) + 2 a cos(a), root in (pi/2, pi)
    double a = 1.8;
    for (int it = 0; it < 60; ++it) {
        const double g = std::sin(a) + 2.0 * a * std::cos(a);
        const double dg = 3.0 * std::cos(a) - 2.0 * a * std::sin(a);
        const double step = g / dg;
        a -= step;
        if (std::abs(step) < 1e-15) break;
    }
    return a;
}

namespace {

// sparse trivariate polynomial in normalized coordinates
struct Poly3 {
    struct Term {
        int e[3];
        double coeff;
    };
    std::vector<Term> terms;

    double eval(double x, double y, double z) const {
        double acc = 0.0;
        for (const Term& t : terms)
            acc += t.coeff * std::pow(x, t.e[0]) * std::pow(y, t.e[1]) * std::pow(z, t.e[2]);
        return acc;
    }
    Poly3 derivative(int axis) const {
        Poly3 out;
        for (const Term& t : terms) {
            if (t.e[axis] == 0) continue;
            Term d = t;
            d.coeff *= t.e[axis];
            d.e[axis] -= 1;
            out.terms.push_back(d);
        }
        return out;
    }
    friend Poly3 operator*(const Poly3& a, const Poly3& b) {
        Poly3 out;
        for (const Term& ta : a.terms)
            for (const Term& tb : b.terms)
                out.terms.push_back(
                    {{ta.e[0] + tb.e[0], ta.e[1] + tb.e[1], ta.e[2] + tb.e[2]},
                     ta.coeff * tb.coeff});
        return out;
    }
};

Poly3 univariate(int axis, std::vector<std::pair<int, double>> powers) {
    Poly3 p;
    for (auto [e, c] : powers) {
        Poly3::Term t{{0, 0, 0}, c};
        t.e[axis] = e;
        p.terms.push_back(t);
    }
    return p;
}

struct NormMap {
    Vector lo, inv_half_side;   // xn = (x - lo) * inv_half_side - 1
    Vector scale;               // d xn / d x = 2/side

    explicit NormMap(const BoxDomain& d) : lo(d.lo()), inv_half_side(d.dim()), scale(d.dim()) {
        for (int i = 0; i < d.dim(); ++i) {
            inv_half_side[i] = 2.0 / d.side(i);
            scale[i] = 2.0 / d.side(i);
        }
    }
    Vector to_norm(const Vector& x) const {
        return ((x - lo).cwiseProduct(inv_half_side)).array() - 1.0;
    }
};

}  // namespace

double ManufacturedSolution::self_check(const BoxDomain& domain, const SpatialFn& a,
                                        const SpatialFn& c, int n_points,
                                        std::uint64_t seed) const {
    CounterRng rng(seed, 3);
    double worst = 0.0;
    double f_scale = 0.0;
    std::vector<Vector> pts;
    for (int i = 0; i < n_points; ++i) {
        Vector x(domain.dim());
        for (int k = 0; k < domain.dim(); ++k)
            x[k] = domain.lo()[k] + rng.next_double() * domain.side(k);
        pts.push_back(x);
        f_scale = std::max(f_scale, std::abs(f(x)));
    }
    if (f_scale == 0.0) f_scale = 1.0;
    for (const Vector& x : pts) {
        // fourth-order central second differences, axis by axis
        double lap = 0.0;
        for (int k = 0; k < domain.dim(); ++k) {
            const double h = 1e-3 * domain.side(k);
            Vector xp = x;
            double s = -30.0 * u(x);
            xp[k] = x[k] + h;
            s += 16.0 * u(xp);
            xp[k] = x[k] - h;
            s += 16.0 * u(xp);
            xp[k] = x[k] + 2 * h;
            s -= u(xp);
            xp[k] = x[k] - 2 * h;
            s -= u(xp);
            lap += s / (12.0 * h * h);
        }
        const double resid = std::abs(-a(x) * lap + c(x) * u(x) - f(x)) / f_scale;
        worst = std::max(worst, resid);
    }
    return worst;
}

ManufacturedSolution mms_helmholtz(MmsKind kind, double k, const BoxDomain& domain) {
    if (domain.dim() != 3) throw InvalidArgument("mms_helmholtz: 3-D domain required");
    NormMap nm(domain);
    ManufacturedSolution m;

    if (kind == MmsKind::polynomial) {
        m.name = "polynomial-mms";
        // 0.05 (zn+1)(3-zn) (xn^3-3xn)(yn^3-3yn): vanishes at zn=-1, zero normal
        // derivative at xn,yn = ±1 and at zn = +1
        Poly3 px = univariate(0, {{3, 1.0}, {1, -3.0}});
        Poly3 py = univariate(1, {{3, 1.0}, {1, -3.0}});
        Poly3 pz = univariate(2, {{0, 3.0}, {1, 2.0}, {2, -1.0}});   // (z+1)(3-z)
        Poly3 amp = univariate(0, {{0, 0.05}});
        auto p = std::make_shared<Poly3>(amp * px * py * pz);
        auto d2 = std::make_shared<std::vector<Poly3>>();
        for (int ax = 0; ax < 3; ++ax) d2->push_back(p->derivative(ax).derivative(ax));
        m.u = [p, nm](const Vector& x) {
            Vector xn = nm.to_norm(x);
            return p->eval(xn[0], xn[1], xn[2]);
        };
        m.lap_u = [d2, nm](const Vector& x) {
            Vector xn = nm.to_norm(x);
            double lap = 0.0;
            for (int ax = 0; ax < 3; ++ax)
                lap += nm.scale[ax] * nm.scale[ax] * (*d2)[ax].eval(xn[0], xn[1], xn[2]);
            return lap;
        };
    } else if (kind == MmsKind::coscossin) {
        m.name = "coscossin-mms";
        const double a3 = coscossin_z_root();
        auto gz = [a3](double z) { return (z + 1.0) * std::sin(a3 * z); };
        auto d2gz = [a3](double z) {
            return 2.0 * a3 * std::cos(a3 * z) - a3 * a3 * (z + 1.0) * std::sin(a3 * z);
        };
        m.u = [nm, gz](const Vector& x) {
            Vector xn = nm.to_norm(x);
            return std::cos(M_PI * xn[0]) * std::cos(M_PI * xn[1]) * gz(xn[2]);
        };
        m.lap_u = [nm, gz, d2gz](const Vector& x) {
            Vector xn = nm.to_norm(x);
            const double cx = std::cos(M_PI * xn[0]);
            const double cy = std::cos(M_PI * xn[1]);
            const double sx = nm.scale[0], sy = nm.scale[1], sz = nm.scale[2];
            return -sx * sx * M_PI * M_PI * cx * cy * gz(xn[2]) -
                   sy * sy * M_PI * M_PI * cx * cy * gz(xn[2]) +
                   sz * sz * cx * cy * d2gz(xn[2]);
        };
    } else {
        throw InvalidArgument("mms_helmholtz: user kind requires explicit functions");
    }
    auto u = m.u;
    auto lap = m.lap_u;
    m.f = [u, lap, k](const Vector& x) { return -lap(x) - k * k * u(x); };

    const double resid = m.self_check(
        domain, [](const Vector&) { return 1.0; }, [k](const Vector&) { return -k * k; });
    if (resid > 1e-8)
        throw OracleError("manufactured solution failed self-consistency: residual " +
                          std::to_string(resid));
    return m;
}

Matrix FdReference::points() const {
    const int dim = static_cast<int>(grids.size());
    Eigen::Index total = 1;
    for (const Vector& g : grids) total *= g.size();
    Matrix out(total, dim);
    std::vector<Eigen::Index> idx(dim, 0);
    for (Eigen::Index r = 0; r < total; ++r) {
        for (int ax = 0; ax < dim; ++ax) out(r, ax) = grids[ax][idx[ax]];
        for (int ax = 0; ax < dim; ++ax) {
            if (++idx[ax] < grids[ax].size()) break;
            idx[ax] = 0;
        }
    }
    return out;
}

void FdReference::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path + "'");
    Eigen::Index n[3] = {1, 1, 1};
    double lo[3] = {0, 0, 0}, hi[3] = {1, 1, 1};
    for (size_t ax = 0; ax < grids.size(); ++ax) {
        n[ax] = grids[ax].size();
        lo[ax] = grids[ax][0];
        hi[ax] = grids[ax][grids[ax].size() - 1];
    }
    out << n[0] << ' ' << n[1] << ' ' << n[2] << "\n";
    out << lo[0] << ' ' << lo[1] << ' ' << lo[2] << "\n";
    out << hi[0] << ' ' << hi[1] << ' ' << hi[2] << "\n";
    out.precision(17);
    for (Eigen::Index i = 0; i < values.size(); ++i)
        out << values[i] << ((i + 1) % 6 == 0 ? '\n' : ' ');
    out << "\n";
}

namespace {

struct AxisOp {
    Eigen::Index n_nodes = 0, i0 = 0, i1 = 0;   // kept node range
    double h = 0.0;
    Matrix t;          // kept x kept operator for -d²/dx² (ghost-eliminated rows)
    Vector ws;         // sqrt of symmetrization weights
    Vector lam;        // eigenvalues of the symmetrized operator
    Matrix v;          // eigenvectors
    bool neumann_lo = false, neumann_hi = false;

    Eigen::Index m() const { return i1 - i0 + 1; }
};

AxisOp build_axis(const BoxDomain& box, const BoundarySpec& bc, int axis, Eigen::Index n) {
    if (n < 3) throw InvalidArgument("fd_solve: need >= 3 nodes per axis");
    AxisOp op;
    op.n_nodes = n;
    op.h = box.side(axis) / double(n - 1);
    const bool d_lo = bc.is_dirichlet({axis, -1});
    const bool d_hi = bc.is_dirichlet({axis, +1});
    op.neumann_lo = !d_lo;
    op.neumann_hi = !d_hi;
    op.i0 = d_lo ? 1 : 0;
    op.i1 = d_hi ? n - 2 : n - 1;
    const Eigen::Index m = op.m();
    op.t = Matrix::Zero(m, m);
    Vector w = Vector::Ones(m);
    for (Eigen::Index r = 0; r < m; ++r) {
        op.t(r, r) = 2.0;
        if (r > 0) op.t(r, r - 1) = -1.0;
        if (r < m - 1) op.t(r, r + 1) = -1.0;
    }
    if (op.neumann_lo) {
        op.t(0, 1) = -2.0;
        w[0] = 0.5;
    }
    if (op.neumann_hi) {
        op.t(m - 1, m - 2) = -2.0;
        w[m - 1] = 0.5;
    }
    op.t /= op.h * op.h;
    op.ws = w.cwiseSqrt();
    Matrix ts = op.ws.asDiagonal() * op.t * op.ws.cwiseInverse().asDiagonal();
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (ts + ts.transpose()));
    if (eig.info() != Eigen::Success) throw OracleError("fd_solve: axis eigensolve failed");
    op.lam = eig.eigenvalues();
    op.v = eig.eigenvectors();
    return op;
}

// contract a per-axis matrix against the flattened field (x-fastest layout)
void apply_axis(const std::vector<AxisOp>& ops, int axis, const Matrix& mat, Vector& field) {
    Eigen::Index pre = 1, post = 1;
    for (int i = 0; i < axis; ++i) pre *= ops[i].m();
    for (size_t i = axis + 1; i < ops.size(); ++i) post *= ops[i].m();
    const Eigen::Index m = ops[axis].m();
    Vector slice(m), res(m);
    for (Eigen::Index po = 0; po < post; ++po) {
        for (Eigen::Index pr = 0; pr < pre; ++pr) {
            const Eigen::Index base = pr + pre * m * po;
            for (Eigen::Index i = 0; i < m; ++i) slice[i] = field[base + pre * i];
            res.noalias() = mat * slice;
            for (Eigen::Index i = 0; i < m; ++i) field[base + pre * i] = res[i];
        }
    }
}

void scale_axis(const std::vector<AxisOp>& ops, int axis, const Vector& diag, Vector& field) {
    Eigen::Index pre = 1, post = 1;
    for (int i = 0; i < axis; ++i) pre *= ops[i].m();
    for (size_t i = axis + 1; i < ops.size(); ++i) post *= ops[i].m();
    const Eigen::Index m = ops[axis].m();
    for (Eigen::Index po = 0; po < post; ++po)
        for (Eigen::Index i = 0; i < m; ++i) {
            const Eigen::Index base = pre * (i + m * po);
            field.segment(base, pre) *= diag[i];
        }
}

}  // namespace

FdReference fd_solve(const PdeCase& pde, const std::vector<Eigen::Index>& resolution) {
    const BoxDomain& box = pde.domain;
    const int dim = box.dim();
    if (static_cast<int>(resolution.size()) != dim)
        throw InvalidArgument("fd_solve: resolution size must match dimension");
    if (pde.kind == PdeCase::Kind::parametric4d)
        throw InvalidArgument("fd_solve: collapse the parametric case to a fixed kappa first");

    // constant-coefficient check: the separable solver requires it
    Vector probe = 0.5 * (box.lo() + box.hi());
    const double a0 = pde.coeffs.a(probe);
    const double c0 = pde.coeffs.c(probe);

    std::vector<AxisOp> ops;
    for (int ax = 0; ax < dim; ++ax) ops.push_back(build_axis(box, pde.boundary, ax, resolution[ax]));

    Eigen::Index total = 1;
    for (const AxisOp& op : ops) total *= op.m();

    // rhs over kept nodes: f - c*g, plus Neumann flux terms 2 q / h
    const double g = pde.boundary.dirichlet_offset();
    Vector rhs(total);
    {
        std::vector<Eigen::Index> idx(dim, 0);
        Vector x(dim);
        for (Eigen::Index r = 0; r < total; ++r) {
            for (int ax = 0; ax < dim; ++ax) {
                const Eigen::Index node = ops[ax].i0 + idx[ax];
                x[ax] = box.lo()[ax] + ops[ax].h * double(node);
            }
            rhs[r] = pde.coeffs.f(x) - c0 * g;
            for (int ax = 0; ax < dim; ++ax) {
                const bool at_lo = ops[ax].neumann_lo && idx[ax] == 0;
                const bool at_hi = ops[ax].neumann_hi && idx[ax] == ops[ax].m() - 1;
                if (!at_lo && !at_hi) continue;
                const FaceId face{ax, at_lo ? -1 : +1};
                for (const NeumannFace& nf : pde.boundary.neumann_faces())
                    if (nf.face == face && nf.flux) rhs[r] += 2.0 * nf.flux(x) / ops[ax].h;
            }
            for (int ax = 0; ax < dim; ++ax) {
                if (++idx[ax] < ops[ax].m()) break;
                idx[ax] = 0;
            }
        }
    }

    // solve a * sum_ax T_ax v + c v = rhs via the symmetrized eigenbasis
    Vector work = rhs;
    for (int ax = 0; ax < dim; ++ax) scale_axis(ops, ax, ops[ax].ws, work);
    for (int ax = 0; ax < dim; ++ax) apply_axis(ops, ax, ops[ax].v.transpose(), work);
    {
        std::vector<Eigen::Index> idx(dim, 0);
        double min_denom = std::numeric_limits<double>::infinity();
        for (Eigen::Index r = 0; r < total; ++r) {
            double lam = 0.0;
            for (int ax = 0; ax < dim; ++ax) lam += ops[ax].lam[idx[ax]];
            const double denom = a0 * lam + c0;
            min_denom = std::min(min_denom, std::abs(denom));
            if (std::abs(denom) < 1e-11 * std::abs(a0 * lam) + 1e-300)
                throw OracleError(
                    "fd_solve: singular discrete operator (pure-Neumann problem needs a "
                    "Dirichlet face, or the wavenumber hits a resonance)");
            work[r] /= denom;
            for (int ax = 0; ax < dim; ++ax) {
                if (++idx[ax] < ops[ax].m()) break;
                idx[ax] = 0;
            }
        }
        if (min_denom == 0.0) throw OracleError("fd_solve: singular discrete operator");
    }
    for (int ax = 0; ax < dim; ++ax) apply_axis(ops, ax, ops[ax].v, work);
    for (int ax = 0; ax < dim; ++ax) scale_axis(ops, ax, ops[ax].ws.cwiseInverse(), work);

    // embed kept values into the full grid and add the Dirichlet offset
    FdReference ref;
    ref.grids.resize(dim);
    Eigen::Index full_total = 1;
    for (int ax = 0; ax < dim; ++ax) {
        ref.grids[ax] = Vector::LinSpaced(resolution[ax], box.lo()[ax], box.hi()[ax]);
        full_total *= resolution[ax];
    }
    ref.values = Vector::Constant(full_total, g);
    {
        std::vector<Eigen::Index> idx(dim, 0);
        for (Eigen::Index r = 0; r < total; ++r) {
            Eigen::Index full = 0;
            for (int ax = dim - 1; ax >= 0; --ax)
                full = full * resolution[ax] + (ops[ax].i0 + idx[ax]);
            ref.values[full] = g + work[r];
            for (int ax = 0; ax < dim; ++ax) {
                if (++idx[ax] < ops[ax].m()) break;
                idx[ax] = 0;
            }
        }
    }
    // discrete residual of the kept system
    {
        Vector resid = Vector::Zero(total);
        for (int ax = 0; ax < dim; ++ax) {
            Vector tmp = work;
            apply_axis(ops, ax, ops[ax].t, tmp);
            resid += tmp;
        }
        resid = a0 * resid + c0 * work - rhs;
        ref.residual_rel = resid.norm() / std::max(rhs.norm(), 1e-300);
        if (ref.residual_rel > 1e-10)
            throw OracleError("fd_solve: discrete residual " + std::to_string(ref.residual_rel) +
                              " exceeds 1e-10");
    }
    return ref;
}

PdeCase heat_case_at(const PdeCase& parametric, double kappa) {
    if (parametric.kind != PdeCase::Kind::parametric4d)
        throw InvalidArgument("heat_case_at: parametric case required");
    if (kappa < parametric.kappa_min || kappa > parametric.kappa_max)
        throw InvalidArgument("heat_case_at: kappa outside the trained interval");
    auto src4 = parametric.coeffs.f;
    const int sd = parametric.domain.dim();
    auto src = [src4, kappa, sd](const Vector& x) {
        Vector p(sd + 1);
        p.head(sd) = x;
        p[sd] = kappa;
        return src4(p);
    };
    return make_heat_case(parametric.domain, parametric.boundary, kappa, src);
}

}  // namespace vmlfn
