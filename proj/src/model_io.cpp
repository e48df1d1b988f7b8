#include "vmlfn/model_io.hpp"

#include <cstring>
#include <fstream>

#include "vmlfn/elasticity.hpp"

namespace vmlfn {

std::string to_string(ModelKind k) {
    switch (k) {
        case ModelKind::helmholtz: return "helmholtz";
        case ModelKind::heat: return "heat";
        case ModelKind::heat_flux: return "heat-flux";
        case ModelKind::parametric4d: return "parametric-4d";
        case ModelKind::elasticity: return "elasticity";
    }
    return "?";
}

double Model::kappa_min() const {
    if (!parametric()) throw InvalidArgument("model: not a parametric surrogate");
    return domain_lo[domain_lo.size() - 1];
}

double Model::kappa_max() const {
    if (!parametric()) throw InvalidArgument("model: not a parametric surrogate");
    return domain_hi[domain_hi.size() - 1];
}

BoundarySpec Model::make_boundary() const {
    return BoundarySpec(BoxDomain(domain_lo, domain_hi), dirichlet_faces, {}, dirichlet_offset);
}

FourierBasis Model::make_basis() const {
    return FourierBasis(basis_config, make_boundary(), omega, phase);
}

Matrix Model::predict_at(const Matrix& points, std::optional<double> kappa) const {
    if (!has_result) throw InvalidArgument("model: no trained weights present");
    FourierBasis basis = make_basis();
    Matrix in = points;
    if (parametric()) {
        if (!kappa)
            throw InvalidArgument("model: parametric surrogate requires a kappa query value");
        if (*kappa < kappa_min() || *kappa > kappa_max())
            throw InvalidArgument("model: kappa " + std::to_string(*kappa) +
                                  " outside the trained interval [" +
                                  std::to_string(kappa_min()) + ", " +
                                  std::to_string(kappa_max()) + "]");
        in.conservativeResize(points.rows(), points.cols() + 1);
        in.col(points.cols()).setConstant(*kappa);
    }
    Matrix xn = basis.domain().normalize(in);
    if (kind == ModelKind::elasticity) return displacement(basis, result, xn);
    return predict(basis, result, xn, dirichlet_offset);
}

namespace {

constexpr char kMagic[4] = {'V', 'M', 'L', 'F'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ostream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in, const std::string& origin) {
    T v;
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw IoError("model file '" + origin + "': truncated");
    return v;
}

void put_vec(std::ostream& out, const Vector& v) {
    put<std::int64_t>(out, v.size());
    out.write(reinterpret_cast<const char*>(v.data()), sizeof(double) * v.size());
}

Vector get_vec(std::istream& in, const std::string& origin) {
    const auto n = get<std::int64_t>(in, origin);
    if (n < 0 || n > (1ll << 32)) throw IoError("model file '" + origin + "': bad vector size");
    Vector v(n);
    in.read(reinterpret_cast<char*>(v.data()), sizeof(double) * n);
    if (!in) throw IoError("model file '" + origin + "': truncated");
    return v;
}

void put_mat(std::ostream& out, const Matrix& m) {
    put<std::int64_t>(out, m.rows());
    put<std::int64_t>(out, m.cols());
    out.write(reinterpret_cast<const char*>(m.data()), sizeof(double) * m.size());
}

Matrix get_mat(std::istream& in, const std::string& origin) {
    const auto r = get<std::int64_t>(in, origin);
    const auto c = get<std::int64_t>(in, origin);
    if (r < 0 || c < 0 || r * c > (1ll << 34))
        throw IoError("model file '" + origin + "': bad matrix size");
    Matrix m(r, c);
    in.read(reinterpret_cast<char*>(m.data()), sizeof(double) * m.size());
    if (!in) throw IoError("model file '" + origin + "': truncated");
    return m;
}

}  // namespace

void write_model(const Model& model, std::ostream& out) {
    out.write(kMagic, 4);
    put(out, kVersion);
    put(out, static_cast<std::uint8_t>(model.kind));
    put<std::int32_t>(out, model.basis_config.n_hidden);
    put(out, model.basis_config.omega_min);
    put(out, model.basis_config.omega_max);
    put(out, model.basis_config.gamma);
    put<std::int32_t>(out, model.basis_config.input_dim);
    put<std::int32_t>(out, model.basis_config.spatial_dim);
    put(out, model.basis_config.seed);
    put_vec(out, model.domain_lo);
    put_vec(out, model.domain_hi);
    put<std::int32_t>(out, static_cast<std::int32_t>(model.dirichlet_faces.size()));
    for (const FaceId& f : model.dirichlet_faces) {
        put<std::int32_t>(out, f.axis);
        put<std::int32_t>(out, f.side);
    }
    put(out, model.dirichlet_offset);
    put_mat(out, model.omega);
    put_vec(out, model.phase);
    put<std::uint8_t>(out, model.has_result ? 1 : 0);
    if (model.has_result) {
        put_mat(out, model.result.W);
        put(out, model.result.beta_used);
        put<std::uint8_t>(out, static_cast<std::uint8_t>(model.result.path));
        put(out, model.result.w_inf_norm);
        put(out, model.result.residual_norm);
        put(out, model.result.output_scale);
        put(out, model.result.cond_estimate);
    }
}

void save_model(const Model& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write model file '" + path + "'");
    write_model(model, out);
    if (!out) throw IoError("failed writing model file '" + path + "'");
}

Model read_model(std::istream& in, const std::string& origin) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw IoError("model file '" + origin + "': bad magic (not a VMLF file)");
    const auto version = get<std::uint32_t>(in, origin);
    if (version != kVersion)
        throw IoError("model file '" + origin + "': unsupported version " +
                      std::to_string(version));
    Model m;
    m.kind = static_cast<ModelKind>(get<std::uint8_t>(in, origin));
    m.basis_config.n_hidden = get<std::int32_t>(in, origin);
    m.basis_config.omega_min = get<double>(in, origin);
    m.basis_config.omega_max = get<double>(in, origin);
    m.basis_config.gamma = get<double>(in, origin);
    m.basis_config.input_dim = get<std::int32_t>(in, origin);
    m.basis_config.spatial_dim = get<std::int32_t>(in, origin);
    m.basis_config.seed = get<std::uint64_t>(in, origin);
    m.domain_lo = get_vec(in, origin);
    m.domain_hi = get_vec(in, origin);
    const auto nfaces = get<std::int32_t>(in, origin);
    for (std::int32_t i = 0; i < nfaces; ++i) {
        FaceId f;
        f.axis = get<std::int32_t>(in, origin);
        f.side = get<std::int32_t>(in, origin);
        m.dirichlet_faces.push_back(f);
    }
    m.dirichlet_offset = get<double>(in, origin);
    m.omega = get_mat(in, origin);
    m.phase = get_vec(in, origin);
    m.has_result = get<std::uint8_t>(in, origin) != 0;
    if (m.has_result) {
        m.result.W = get_mat(in, origin);
        m.result.beta_used = get<double>(in, origin);
        m.result.path = static_cast<SolvePath>(get<std::uint8_t>(in, origin));
        m.result.w_inf_norm = get<double>(in, origin);
        m.result.residual_norm = get<double>(in, origin);
        m.result.output_scale = get<double>(in, origin);
        m.result.cond_estimate = get<double>(in, origin);
    }
    return m;
}

Model load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open model file '" + path + "'");
    return read_model(in, path);
}

}  // namespace vmlfn
