#include "vmlfn/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "vmlfn/oracle.hpp"

namespace vmlfn {

using nlohmann::json;

namespace {

void require_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
    if (!obj.is_object()) throw ConfigError("config: '" + where + "' must be an object");
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError("config: unknown key '" + where + "." + it.key() + "'");
}

template <typename T>
T get_or(const json& obj, const std::string& key, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError("config: bad value for '" + key + "': " + e.what());
    }
}

std::vector<double> get_dvec(const json& obj, const std::string& key) {
    return get_or<std::vector<double>>(obj, key, {});
}

SourceSpec parse_source(const json& j, const std::string& where) {
    require_keys(j, where, {"type", "value", "amplitude", "center", "sigma", "path"});
    SourceSpec s;
    const std::string type = get_or<std::string>(j, "type", "zero");
    if (type == "zero")
        s.type = SourceSpec::Type::zero;
    else if (type == "constant")
        s.type = SourceSpec::Type::constant;
    else if (type == "gaussian")
        s.type = SourceSpec::Type::gaussian;
    else if (type == "grid")
        s.type = SourceSpec::Type::grid;
    else if (type == "mms")
        s.type = SourceSpec::Type::mms;
    else
        throw ConfigError("config: unknown source type '" + type + "' at " + where);
    s.value = get_or<double>(j, "value", 0.0);
    s.amplitude = get_or<double>(j, "amplitude", 0.0);
    s.center = get_dvec(j, "center");
    s.sigma = get_dvec(j, "sigma");
    s.path = get_or<std::string>(j, "path", "");
    if (s.type == SourceSpec::Type::grid) {
        if (s.path.empty()) throw ConfigError("config: grid source needs 'path' at " + where);
        if (!std::filesystem::exists(s.path))
            throw ConfigError("config: grid source file '" + s.path + "' does not exist");
    }
    return s;
}

json source_to_json(const SourceSpec& s) {
    json j;
    switch (s.type) {
        case SourceSpec::Type::zero: j["type"] = "zero"; break;
        case SourceSpec::Type::constant: j["type"] = "constant"; break;
        case SourceSpec::Type::gaussian: j["type"] = "gaussian"; break;
        case SourceSpec::Type::grid: j["type"] = "grid"; break;
        case SourceSpec::Type::mms: j["type"] = "mms"; break;
    }
    if (s.value != 0.0) j["value"] = s.value;
    if (s.amplitude != 0.0) j["amplitude"] = s.amplitude;
    if (!s.center.empty()) j["center"] = s.center;
    if (!s.sigma.empty()) j["sigma"] = s.sigma;
    if (!s.path.empty()) j["path"] = s.path;
    return j;
}

}  // namespace

SpatialFn SourceSpec::build(int dim) const {
    switch (type) {
        case Type::zero:
            return [](const Vector&) { return 0.0; };
        case Type::constant: {
            const double v = value;
            return [v](const Vector&) { return v; };
        }
        case Type::gaussian: {
            if (static_cast<int>(center.size()) != dim || sigma.size() != center.size())
                throw ConfigError("config: gaussian source needs center/sigma of dimension " +
                                  std::to_string(dim));
            Vector c(dim), s(dim);
            for (int i = 0; i < dim; ++i) {
                c[i] = center[i];
                s[i] = sigma[i];
                if (!(s[i] > 0.0)) throw ConfigError("config: gaussian sigma must be > 0");
            }
            const double amp = amplitude;
            return [c, s, amp](const Vector& x) {
                double e = 0.0;
                for (int i = 0; i < c.size(); ++i) {
                    const double d = (x[i] - c[i]) / s[i];
                    e += 0.5 * d * d;
                }
                return amp * std::exp(-e);
            };
        }
        case Type::grid:
            return GridSource::load(path).as_function();
        case Type::mms:
            throw ConfigError("config: 'mms' source resolves through the oracle section");
    }
    throw ConfigError("config: unhandled source type");
}

std::vector<double> ScanSection::resolve() const {
    if (!candidates.empty()) return candidates;
    return uniform_candidates(candidates_lo, candidates_hi, candidates_count);
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return from_string(ss.str(), path);
}

RunConfig RunConfig::from_string(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("config '" + origin + "': " + e.what());
    }
    require_keys(j, "<root>",
                 {"schema", "case", "basis", "scan", "solver", "points", "output", "oracle",
                  "threads"});
    RunConfig c;
    c.schema = get_or<int>(j, "schema", 0);
    if (c.schema != 1) throw ConfigError("config: schema must be 1");

    if (!j.contains("case")) throw ConfigError("config: missing 'case' section");
    const json& jc = j.at("case");
    require_keys(jc, "case",
                 {"kind", "domain", "dirichlet_faces", "dirichlet_value", "k", "kappa", "q_top",
                  "kappa_range", "kappa_snapshots", "source", "layers", "delta_t"});
    c.pde.kind = get_or<std::string>(jc, "kind", "");
    if (!jc.contains("domain")) throw ConfigError("config: missing 'case.domain'");
    require_keys(jc.at("domain"), "case.domain", {"lo", "hi"});
    c.pde.lo = get_dvec(jc.at("domain"), "lo");
    c.pde.hi = get_dvec(jc.at("domain"), "hi");
    c.pde.dirichlet_faces = get_or<std::vector<std::string>>(jc, "dirichlet_faces", {});
    c.pde.dirichlet_value = get_or<double>(jc, "dirichlet_value", 0.0);
    c.pde.k = get_or<double>(jc, "k", 0.0);
    c.pde.kappa = get_or<double>(jc, "kappa", 0.0);
    c.pde.q_top = get_or<double>(jc, "q_top", 0.0);
    c.pde.kappa_range = get_dvec(jc, "kappa_range");
    c.pde.kappa_snapshots = get_or<int>(jc, "kappa_snapshots", 10);
    if (jc.contains("source")) c.pde.source = parse_source(jc.at("source"), "case.source");
    if (jc.contains("delta_t")) c.pde.delta_t = parse_source(jc.at("delta_t"), "case.delta_t");
    if (jc.contains("layers")) {
        for (const json& jl : jc.at("layers")) {
            require_keys(jl, "case.layers[]", {"z", "E", "nu", "alpha"});
            Layer l;
            auto z = jl.at("z").get<std::vector<double>>();
            if (z.size() != 2) throw ConfigError("config: layer 'z' must be [lo, hi]");
            l.z_lo = z[0];
            l.z_hi = z[1];
            l.e_modulus = jl.at("E").get<double>();
            l.nu = jl.at("nu").get<double>();
            l.alpha_th = get_or<double>(jl, "alpha", 0.0);
            c.pde.layers.push_back(l);
        }
    }

    if (!j.contains("basis")) throw ConfigError("config: missing 'basis' section");
    const json& jb = j.at("basis");
    require_keys(jb, "basis",
                 {"n_hidden", "omega_min", "omega_max", "gamma", "seed"});
    c.basis.n_hidden = get_or<int>(jb, "n_hidden", 0);
    c.basis.omega_min = get_or<double>(jb, "omega_min", 0.05);
    c.basis.gamma = get_or<double>(jb, "gamma", 5.0);
    c.basis.seed = get_or<std::uint64_t>(jb, "seed", 0);
    if (jb.contains("omega_max")) c.fixed_omega = jb.at("omega_max").get<double>();

    if (j.contains("scan")) {
        const json& js = j.at("scan");
        require_keys(js, "scan",
                     {"candidates", "candidates_lo", "candidates_hi", "candidates_count",
                      "n_scan", "n_holdout", "alpha_penalty", "holdout_shell", "n_hidden"});
        ScanSection s;
        s.candidates = get_dvec(js, "candidates");
        s.candidates_lo = get_or<double>(js, "candidates_lo", 0.01);
        s.candidates_hi = get_or<double>(js, "candidates_hi", 4.0);
        s.candidates_count = get_or<int>(js, "candidates_count", 15);
        s.n_scan = get_or<Eigen::Index>(js, "n_scan", 800);
        s.n_holdout = get_or<Eigen::Index>(js, "n_holdout", 400);
        s.alpha_penalty = get_or<double>(js, "alpha_penalty", 1e-3);
        s.holdout_shell = get_or<double>(js, "holdout_shell", 0.02);
        s.n_hidden = get_or<int>(js, "n_hidden", 0);
        c.scan = s;
    }

    if (j.contains("solver")) {
        const json& js = j.at("solver");
        require_keys(js, "solver", {"beta", "beta_mode", "precision"});
        c.beta = get_or<double>(js, "beta", 1e-4);
        c.beta_mode = get_or<std::string>(js, "beta_mode", "absolute");
        const std::string prec = get_or<std::string>(js, "precision", "fp64");
        if (prec == "fp32")
            c.precision = Precision::fp32;
        else if (prec == "fp64")
            c.precision = Precision::fp64;
        else
            throw ConfigError("config: precision must be fp32 or fp64");
    }
    if (j.contains("points")) {
        const json& jp = j.at("points");
        require_keys(jp, "points", {"n_interior", "n_boundary_per_face", "strategy"});
        c.n_interior = get_or<Eigen::Index>(jp, "n_interior", 8000);
        c.n_boundary_per_face = get_or<Eigen::Index>(jp, "n_boundary_per_face", 600);
        c.strategy = parse_strategy(get_or<std::string>(jp, "strategy", "monte-carlo"));
    }
    if (j.contains("output")) {
        const json& jo = j.at("output");
        require_keys(jo, "output", {"normalize_field"});
        if (jo.contains("normalize_field"))
            c.normalize_field = jo.at("normalize_field").get<bool>() ? 1 : 0;
    }
    if (j.contains("oracle")) {
        const json& jo = j.at("oracle");
        require_keys(jo, "oracle", {"type", "fd_resolution"});
        c.oracle = get_or<std::string>(jo, "type", "none");
        for (double v : get_dvec(jo, "fd_resolution"))
            c.fd_resolution.push_back(static_cast<Eigen::Index>(v));
    }
    c.threads = get_or<int>(j, "threads", 0);
    c.validate();
    return c;
}

std::string RunConfig::to_json_string() const {
    json j;
    j["schema"] = schema;
    json jc;
    jc["kind"] = pde.kind;
    jc["domain"]["lo"] = pde.lo;
    jc["domain"]["hi"] = pde.hi;
    if (!pde.dirichlet_faces.empty()) jc["dirichlet_faces"] = pde.dirichlet_faces;
    if (pde.dirichlet_value != 0.0) jc["dirichlet_value"] = pde.dirichlet_value;
    if (pde.k != 0.0) jc["k"] = pde.k;
    if (pde.kappa != 0.0) jc["kappa"] = pde.kappa;
    if (pde.q_top != 0.0) jc["q_top"] = pde.q_top;
    if (!pde.kappa_range.empty()) {
        jc["kappa_range"] = pde.kappa_range;
        jc["kappa_snapshots"] = pde.kappa_snapshots;
    }
    jc["source"] = source_to_json(pde.source);
    if (!pde.layers.empty()) {
        json jl = json::array();
        for (const Layer& l : pde.layers)
            jl.push_back({{"z", {l.z_lo, l.z_hi}},
                          {"E", l.e_modulus},
                          {"nu", l.nu},
                          {"alpha", l.alpha_th}});
        jc["layers"] = jl;
        jc["delta_t"] = source_to_json(pde.delta_t);
    }
    j["case"] = jc;
    json jb;
    jb["n_hidden"] = basis.n_hidden;
    jb["omega_min"] = basis.omega_min;
    jb["gamma"] = basis.gamma;
    jb["seed"] = basis.seed;
    if (fixed_omega) jb["omega_max"] = *fixed_omega;
    j["basis"] = jb;
    if (scan) {
        json js;
        if (!scan->candidates.empty()) {
            js["candidates"] = scan->candidates;
        } else {
            js["candidates_lo"] = scan->candidates_lo;
            js["candidates_hi"] = scan->candidates_hi;
            js["candidates_count"] = scan->candidates_count;
        }
        js["n_scan"] = scan->n_scan;
        js["n_holdout"] = scan->n_holdout;
        js["alpha_penalty"] = scan->alpha_penalty;
        js["holdout_shell"] = scan->holdout_shell;
        if (scan->n_hidden > 0) js["n_hidden"] = scan->n_hidden;
        j["scan"] = js;
    }
    j["solver"] = {{"beta", beta}, {"beta_mode", beta_mode},
                   {"precision", to_string(precision)}};
    j["points"] = {{"n_interior", n_interior},
                   {"n_boundary_per_face", n_boundary_per_face},
                   {"strategy", to_string(strategy)}};
    if (normalize_field >= 0) j["output"] = {{"normalize_field", normalize_field == 1}};
    if (oracle != "none") {
        json jo;
        jo["type"] = oracle;
        if (!fd_resolution.empty()) {
            std::vector<double> r(fd_resolution.begin(), fd_resolution.end());
            jo["fd_resolution"] = r;
        }
        j["oracle"] = jo;
    }
    if (threads != 0) j["threads"] = threads;
    return j.dump(2);
}

void RunConfig::validate() const {
    static const std::set<std::string> kinds = {"helmholtz", "heat", "heat-flux",
                                                "parametric-4d", "elasticity"};
    if (!kinds.count(pde.kind))
        throw ConfigError("config: case.kind must be one of helmholtz/heat/heat-flux/"
                          "parametric-4d/elasticity");
    if (pde.lo.empty() || pde.lo.size() != pde.hi.size())
        throw ConfigError("config: case.domain lo/hi must be same-length vectors");
    if (static_cast<bool>(fixed_omega) == static_cast<bool>(scan))
        throw ConfigError("config: exactly one of basis.omega_max or the scan section required");
    if (basis.n_hidden < 1) throw ConfigError("config: basis.n_hidden must be >= 1");
    if (beta < 0.0) throw ConfigError("config: solver.beta must be >= 0");
    if (beta_mode != "absolute" && beta_mode != "trace-relative")
        throw ConfigError("config: solver.beta_mode must be absolute or trace-relative");
    if (pde.kind == "parametric-4d" && pde.kappa_range.size() != 2)
        throw ConfigError("config: parametric case needs kappa_range [min, max]");
    if (pde.kind == "elasticity" && pde.layers.empty())
        throw ConfigError("config: elasticity case needs layers");
    if (oracle != "none" && oracle != "fd" && oracle != "mms-polynomial" &&
        oracle != "mms-coscossin")
        throw ConfigError("config: oracle.type must be none/fd/mms-polynomial/mms-coscossin");
}

BoxDomain RunConfig::build_domain() const {
    Vector lo(pde.lo.size()), hi(pde.hi.size());
    for (size_t i = 0; i < pde.lo.size(); ++i) {
        lo[i] = pde.lo[i];
        hi[i] = pde.hi[i];
    }
    return BoxDomain(lo, hi);
}

BoundarySpec RunConfig::build_boundary() const {
    BoxDomain d = build_domain();
    std::vector<FaceId> dir;
    for (const std::string& s : pde.dirichlet_faces) dir.push_back(parse_face(s));
    std::vector<NeumannFace> neu;
    if (pde.kind == "heat-flux") {
        const double q = pde.q_top;
        neu.push_back({FaceId{d.dim() - 1, +1}, [q](const Vector&) { return q; }});
    }
    return BoundarySpec(d, dir, neu, pde.dirichlet_value);
}

PdeCase RunConfig::build_case() const {
    BoxDomain d = build_domain();
    BoundarySpec bc = build_boundary();
    const int dim = d.dim();
    if (pde.kind == "helmholtz") {
        SpatialFn f;
        if (pde.source.type == SourceSpec::Type::mms) {
            MmsKind kind = oracle == "mms-coscossin" ? MmsKind::coscossin : MmsKind::polynomial;
            f = mms_helmholtz(kind, pde.k, d).f;
        } else {
            f = pde.source.build(dim);
        }
        return make_helmholtz_case(d, bc, pde.k, f);
    }
    if (pde.kind == "heat") return make_heat_case(d, bc, pde.kappa, pde.source.build(dim));
    if (pde.kind == "heat-flux")
        return make_heat_flux_case(d, bc, pde.kappa, pde.source.build(dim), pde.q_top);
    if (pde.kind == "parametric-4d") {
        SpatialFn spatial = pde.source.build(dim);
        auto src = [spatial](const Vector& x, double) { return spatial(x); };
        return make_parametric4d_case(d, bc, src, pde.kappa_range[0], pde.kappa_range[1],
                                      pde.kappa_snapshots);
    }
    throw ConfigError("config: build_case does not handle kind '" + pde.kind + "'");
}

LayeredMaterial RunConfig::build_material() const {
    if (!is_elasticity()) throw ConfigError("config: not an elasticity case");
    BoxDomain d = build_domain();
    return LayeredMaterial(pde.layers, d.lo()[d.dim() - 1], d.hi()[d.dim() - 1]);
}

ScanConfig RunConfig::build_scan_config() const {
    ScanConfig sc;
    if (!scan) throw ConfigError("config: no scan section");
    sc.candidates = scan->resolve();
    sc.n_scan = scan->n_scan;
    sc.n_holdout = scan->n_holdout;
    sc.alpha_penalty = scan->alpha_penalty;
    sc.holdout_shell = scan->holdout_shell;
    sc.n_hidden = scan->n_hidden;
    sc.beta = beta;
    sc.seed = basis.seed;
    return sc;
}

AssemblyOptions RunConfig::build_assembly_options() const {
    AssemblyOptions o;
    o.precision = precision;
    if (normalize_field >= 0) o.normalize_field = normalize_field == 1;
    return o;
}

}  // namespace vmlfn
