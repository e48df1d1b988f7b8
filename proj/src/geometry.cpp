#include "vmlfn/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "vmlfn/rng.hpp"

namespace vmlfn {

std::string face_name(const FaceId& f) {
    static const char* axes = "xyzw";
    std::string s(1, axes[f.axis]);
    s += (f.side < 0) ? '-' : '+';
    return s;
}

FaceId parse_face(const std::string& name) {
    if (name.size() != 2) throw InvalidArgument("bad face id: '" + name + "'");
    const std::string axes = "xyzw";
    auto pos = axes.find(name[0]);
    if (pos == std::string::npos || (name[1] != '-' && name[1] != '+'))
        throw InvalidArgument("bad face id: '" + name + "'");
    return FaceId{static_cast<int>(pos), name[1] == '-' ? -1 : +1};
}

BoxDomain::BoxDomain(Vector lo, Vector hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    if (lo_.size() != hi_.size() || lo_.size() < 1 || lo_.size() > 4)
        throw InvalidArgument("box dimension must be 1..4");
    for (Eigen::Index i = 0; i < lo_.size(); ++i)
        if (!(hi_[i] > lo_[i]))
            throw InvalidArgument("box requires hi > lo on axis " + std::to_string(i));
}

double BoxDomain::volume() const {
    double v = 1.0;
    for (Eigen::Index i = 0; i < lo_.size(); ++i) v *= hi_[i] - lo_[i];
    return v;
}

double BoxDomain::face_area(const FaceId& f) const {
    if (f.axis < 0 || f.axis >= dim()) throw InvalidArgument("face axis out of range");
    double a = 1.0;
    for (int i = 0; i < dim(); ++i)
        if (i != f.axis) a *= side(i);
    return a;
}

std::vector<FaceId> BoxDomain::all_faces() const {
    std::vector<FaceId> out;
    for (int ax = 0; ax < dim(); ++ax) {
        out.push_back({ax, -1});
        out.push_back({ax, +1});
    }
    return out;
}

bool BoxDomain::contains(const Vector& x, double rel_tol) const {
    if (x.size() != dim()) return false;
    for (int i = 0; i < dim(); ++i) {
        const double slack = rel_tol * side(i);
        if (x[i] < lo_[i] - slack || x[i] > hi_[i] + slack) return false;
    }
    return true;
}

Vector BoxDomain::normalize(const Vector& x) const {
    if (!contains(x))
        throw DomainViolation("point outside domain");
    Vector out(dim());
    for (int i = 0; i < dim(); ++i) out[i] = 2.0 * (x[i] - lo_[i]) / side(i) - 1.0;
    return out;
}

Matrix BoxDomain::normalize(const Matrix& x) const {
    if (x.cols() != dim()) throw InvalidArgument("normalize: column count != dim");
    Matrix out(x.rows(), x.cols());
    for (int i = 0; i < dim(); ++i) {
        const double slack = 1e-12 * side(i);
        if (x.rows() > 0 &&
            (x.col(i).minCoeff() < lo_[i] - slack || x.col(i).maxCoeff() > hi_[i] + slack))
            throw DomainViolation("point outside domain on axis " + std::to_string(i));
        out.col(i) = 2.0 * (x.col(i).array() - lo_[i]) / side(i) - 1.0;
    }
    return out;
}

Vector BoxDomain::denormalize(const Vector& xn) const {
    Vector out(dim());
    for (int i = 0; i < dim(); ++i) out[i] = lo_[i] + 0.5 * (xn[i] + 1.0) * side(i);
    return out;
}

Matrix BoxDomain::denormalize(const Matrix& xn) const {
    Matrix out(xn.rows(), xn.cols());
    for (int i = 0; i < dim(); ++i)
        out.col(i) = lo_[i] + 0.5 * (xn.col(i).array() + 1.0) * side(i);
    return out;
}

SampleStrategy parse_strategy(const std::string& s) {
    if (s == "monte-carlo") return SampleStrategy::monte_carlo;
    if (s == "stratified") return SampleStrategy::stratified;
    if (s == "grid") return SampleStrategy::grid;
    throw InvalidArgument("unknown sampling strategy '" + s + "'");
}

std::string to_string(SampleStrategy s) {
    switch (s) {
        case SampleStrategy::monte_carlo: return "monte-carlo";
        case SampleStrategy::stratified: return "stratified";
        case SampleStrategy::grid: return "grid";
    }
    return "?";
}

namespace {

// smallest m with m^d >= n
Eigen::Index lattice_side(Eigen::Index n, int d) {
    Eigen::Index m = static_cast<Eigen::Index>(std::floor(std::pow(double(n), 1.0 / d)));
    m = std::max<Eigen::Index>(m - 1, 1);
    auto pow_d = [d](Eigen::Index v) {
        Eigen::Index p = 1;
        for (int i = 0; i < d; ++i) p *= v;
        return p;
    };
    while (pow_d(m) < n) ++m;
    return m;
}

// unit-cube samples, rows x d, in [0,1)^d
Matrix unit_samples(Eigen::Index n, int d, std::uint64_t seed, SampleStrategy strategy) {
    if (strategy == SampleStrategy::monte_carlo) {
        CounterRng rng(seed, 7);
        Matrix u(n, d);
        for (Eigen::Index i = 0; i < n; ++i)
            for (int j = 0; j < d; ++j) u(i, j) = rng.next_double();
        return u;
    }
    const Eigen::Index m = lattice_side(n, d);
    Eigen::Index total = 1;
    for (int i = 0; i < d; ++i) total *= m;
    Matrix u(total, d);
    std::vector<Eigen::Index> idx(d, 0);
    for (Eigen::Index r = 0; r < total; ++r) {
        for (int j = 0; j < d; ++j) u(r, j) = (idx[j] + 0.5) / double(m);
        for (int j = 0; j < d; ++j) {     // x-fastest increment
            if (++idx[j] < m) break;
            idx[j] = 0;
        }
    }
    if (strategy == SampleStrategy::grid) return u;
    // stratified: jitter each cell, then keep a random subset of exactly n cells
    CounterRng rng(seed, 7);
    for (Eigen::Index r = 0; r < total; ++r)
        for (int j = 0; j < d; ++j) u(r, j) += (rng.next_double() - 0.5) / double(m);
    if (total == n) return u;
    std::vector<Eigen::Index> perm(total);
    for (Eigen::Index i = 0; i < total; ++i) perm[i] = i;
    CounterRng sel = rng.substream(13);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index j = i + static_cast<Eigen::Index>(sel.next_u64() % (total - i));
        std::swap(perm[i], perm[j]);
    }
    Matrix out(n, d);
    for (Eigen::Index i = 0; i < n; ++i) out.row(i) = u.row(perm[i]);
    return out;
}

}  // namespace

PointSet sample_interior(const BoxDomain& domain, Eigen::Index n, std::uint64_t rng_seed,
                         SampleStrategy strategy) {
    if (n < 1) throw InvalidArgument("sample_interior: n must be >= 1");
    Matrix u = unit_samples(n, domain.dim(), rng_seed, strategy);
    PointSet ps;
    ps.coords.resize(u.rows(), domain.dim());
    for (int j = 0; j < domain.dim(); ++j)
        ps.coords.col(j) = domain.lo()[j] + u.col(j).array() * domain.side(j);
    ps.weight = domain.volume() / double(u.rows());
    ps.kind = PointSet::Kind::interior;
    return ps;
}

PointSet sample_face(const BoxDomain& domain, const FaceId& face, Eigen::Index n,
                     std::uint64_t rng_seed, SampleStrategy strategy) {
    if (n < 1) throw InvalidArgument("sample_face: n must be >= 1");
    if (face.axis < 0 || face.axis >= domain.dim() || (face.side != -1 && face.side != 1))
        throw InvalidArgument("sample_face: invalid face id");
    const int d = domain.dim();
    PointSet ps;
    ps.kind = PointSet::Kind::boundary;
    ps.face = face;
    if (d == 1) {
        ps.coords.resize(1, 1);
        ps.coords(0, 0) = face.side < 0 ? domain.lo()[0] : domain.hi()[0];
        ps.weight = 1.0;   // 0-dimensional face: the boundary "integral" is a point value
        return ps;
    }
    Matrix u = unit_samples(n, d - 1, rng_seed + 1000003ULL * (2 * face.axis + (face.side > 0)),
                            strategy);
    ps.coords.resize(u.rows(), d);
    int uc = 0;
    for (int j = 0; j < d; ++j) {
        if (j == face.axis) {
            ps.coords.col(j).setConstant(face.side < 0 ? domain.lo()[j] : domain.hi()[j]);
        } else {
            ps.coords.col(j) = domain.lo()[j] + u.col(uc++).array() * domain.side(j);
        }
    }
    ps.weight = domain.face_area(face) / double(u.rows());
    return ps;
}

BoundarySpec::BoundarySpec(BoxDomain domain, std::vector<FaceId> dirichlet_faces,
                           std::vector<NeumannFace> neumann_faces, double dirichlet_offset)
    : domain_(std::move(domain)),
      dirichlet_(std::move(dirichlet_faces)),
      neumann_(std::move(neumann_faces)),
      offset_(dirichlet_offset) {
    auto listed = [this](const FaceId& f) {
        bool in_d = std::find(dirichlet_.begin(), dirichlet_.end(), f) != dirichlet_.end();
        bool in_n = std::any_of(neumann_.begin(), neumann_.end(),
                                [&](const NeumannFace& nf) { return nf.face == f; });
        if (in_d && in_n)
            throw InvalidArgument("face " + face_name(f) + " is both Dirichlet and Neumann");
        return in_d || in_n;
    };
    for (const FaceId& f : domain_.all_faces()) {
        if (!listed(f)) neumann_.push_back({f, FluxFn{}});   // default: zero flux
    }
    for (const FaceId& f : dirichlet_)
        if (f.axis < 0 || f.axis >= domain_.dim())
            throw InvalidArgument("Dirichlet face axis out of range");
}

bool BoundarySpec::is_dirichlet(const FaceId& f) const {
    return std::find(dirichlet_.begin(), dirichlet_.end(), f) != dirichlet_.end();
}

double dirichlet_distance(const BoundarySpec& spec, const Vector& x_norm) {
    if (spec.dirichlet_faces().empty()) return kNoDirichlet;
    double d = kNoDirichlet;
    for (const FaceId& f : spec.dirichlet_faces()) {
        const double v = (f.side < 0) ? (x_norm[f.axis] + 1.0) : (1.0 - x_norm[f.axis]);
        d = std::min(d, v);
    }
    return std::max(d, 0.0);
}

}  // namespace vmlfn
