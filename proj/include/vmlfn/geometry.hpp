#ifndef VMLFN_GEOMETRY_HPP
#define VMLFN_GEOMETRY_HPP

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "vmlfn/types.hpp"

namespace vmlfn {

// one axis-aligned face of a box: axis index plus which side (-1 low, +1 high)
struct FaceId {
    int axis = 0;
    int side = -1;

    friend bool operator==(const FaceId& a, const FaceId& b) {
        return a.axis == b.axis && a.side == b.side;
    }
};

std::string face_name(const FaceId& f);          // e.g. "z-" / "x+"
FaceId parse_face(const std::string& name);

// axis-aligned box, dimension 1..4 (4 covers the parameter-augmented domain)
class BoxDomain {
  public:
    BoxDomain(Vector lo, Vector hi);

    int dim() const { return static_cast<int>(lo_.size()); }
    const Vector& lo() const { return lo_; }
    const Vector& hi() const { return hi_; }
    double side(int axis) const { return hi_[axis] - lo_[axis]; }
    double volume() const;
    double face_area(const FaceId& f) const;
    std::vector<FaceId> all_faces() const;

    bool contains(const Vector& x, double rel_tol = 1e-12) const;

    // affine map onto [-1,1]^dim; throws DomainViolation outside the box
    Vector normalize(const Vector& x) const;
    Matrix normalize(const Matrix& x) const;      // row-wise
    Vector denormalize(const Vector& xn) const;
    Matrix denormalize(const Matrix& xn) const;

  private:
    Vector lo_, hi_;
};

enum class SampleStrategy { monte_carlo, stratified, grid };

SampleStrategy parse_strategy(const std::string& s);
std::string to_string(SampleStrategy s);

struct PointSet {
    enum class Kind { interior, boundary };

    Matrix coords;           // N x dim, physical coordinates
    double weight = 0.0;     // per-point integration weight (|Omega|/N or |face|/N)
    Kind kind = Kind::interior;
    FaceId face;             // valid when kind == boundary

    Eigen::Index size() const { return coords.rows(); }
};

// uniform interior sample; monte_carlo and stratified return exactly n points,
// grid rounds n up to the nearest full midpoint lattice m^dim
PointSet sample_interior(const BoxDomain& domain, Eigen::Index n, std::uint64_t rng_seed,
                         SampleStrategy strategy = SampleStrategy::monte_carlo);

PointSet sample_face(const BoxDomain& domain, const FaceId& face, Eigen::Index n,
                     std::uint64_t rng_seed,
                     SampleStrategy strategy = SampleStrategy::monte_carlo);

using FluxFn = std::function<double(const Vector&)>;

struct NeumannFace {
    FaceId face;
    FluxFn flux;             // h(x) on the face, physical units
};

// partition of the box boundary into Dirichlet faces (constant value g) and
// Neumann faces with attached flux; faces not listed become zero-flux Neumann
class BoundarySpec {
  public:
    BoundarySpec(BoxDomain domain, std::vector<FaceId> dirichlet_faces,
                 std::vector<NeumannFace> neumann_faces = {}, double dirichlet_offset = 0.0);

    const BoxDomain& domain() const { return domain_; }
    const std::vector<FaceId>& dirichlet_faces() const { return dirichlet_; }
    const std::vector<NeumannFace>& neumann_faces() const { return neumann_; }
    double dirichlet_offset() const { return offset_; }
    bool is_dirichlet(const FaceId& f) const;

  private:
    BoxDomain domain_;
    std::vector<FaceId> dirichlet_;
    std::vector<NeumannFace> neumann_;
    double offset_;
};

// distance (in normalized coordinates) from x_norm to the nearest Dirichlet
// face; largest finite double when Gamma_D is empty
double dirichlet_distance(const BoundarySpec& spec, const Vector& x_norm);

inline constexpr double kNoDirichlet = std::numeric_limits<double>::max();

}  // namespace vmlfn

#endif
