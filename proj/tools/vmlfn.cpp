#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <thread>

#include "vmlfn/bench.hpp"
#include "vmlfn/config.hpp"
#include "vmlfn/elasticity.hpp"
#include "vmlfn/model_io.hpp"
#include "vmlfn/oracle.hpp"
#include "vmlfn/rng.hpp"
#include "vmlfn/scan.hpp"
#include "vmlfn/solver.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace vmlfn;

namespace {

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt3(double v) {
    std::ostringstream os;
    os << std::setprecision(3) << v;
    return os.str();
}

struct CommonFlags {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::optional<std::string> precision;
};

fs::path resolve_out(const CommonFlags& flags) {
    if (!flags.out_dir.empty()) return flags.out_dir;
    if (const char* env = std::getenv("VMLFN_OUT")) return env;
    return ".";
}

RunConfig load_config(const CommonFlags& flags) {
    if (flags.config_path.empty()) throw ConfigError("--config PATH is required");
    RunConfig cfg = RunConfig::from_file(flags.config_path);
    if (flags.seed) cfg.basis.seed = *flags.seed;
    if (flags.threads) cfg.threads = *flags.threads;
    if (flags.precision) {
        if (*flags.precision == "fp32")
            cfg.precision = Precision::fp32;
        else if (*flags.precision == "fp64")
            cfg.precision = Precision::fp64;
        else
            throw ConfigError("--precision must be fp32 or fp64");
    }
    const int hw = static_cast<int>(std::thread::hardware_concurrency());
    Eigen::setNbThreads(cfg.threads > 0 ? cfg.threads : std::max(1, hw));
    return cfg;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << text;
}

json report_header(const RunConfig& cfg) {
    json h;
    h["config"] = json::parse(cfg.to_json_string());
    h["seed"] = cfg.basis.seed;
    h["rng"] = CounterRng::kName;
    return h;
}

std::string scan_table(const ScanReport& rep) {
    std::ostringstream os;
    os << "  omega       E_r        ||W||inf   score      status\n";
    for (const ScanRow& r : rep.rows) {
        os << "  " << std::setw(10) << std::left << fmt3(r.omega) << std::setw(11)
           << fmt3(r.e_r) << std::setw(11) << fmt3(r.w_inf) << std::setw(11) << fmt3(r.score)
           << (r.failed ? "failed" : (r.omega == rep.selected ? "selected" : "")) << "\n";
    }
    return os.str();
}

json scan_json(const ScanReport& rep) {
    json rows = json::array();
    for (const ScanRow& r : rep.rows)
        rows.push_back({{"omega", r.omega},
                        {"e_r", r.failed ? -1.0 : r.e_r},
                        {"w_inf", r.w_inf},
                        {"score", r.failed ? -1.0 : r.score},
                        {"failed", r.failed}});
    return {{"rows", rows}, {"selected", rep.selected}, {"scan_seed", rep.scan_seed},
            {"rng", rep.rng_name}};
}

void write_xyz(const fs::path& path, const Matrix& pts, const Matrix& values) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out.precision(10);
    for (Eigen::Index i = 0; i < pts.rows(); ++i) {
        for (Eigen::Index j = 0; j < pts.cols(); ++j) out << pts(i, j) << ' ';
        for (Eigen::Index j = 0; j < values.cols(); ++j)
            out << values(i, j) << (j + 1 < values.cols() ? ' ' : '\n');
    }
}

// legacy structured-points format for grid-spec queries
void write_vtk(const fs::path& path, const std::array<Eigen::Index, 3>& n, const Vector& lo,
               const Vector& spacing, const Matrix& values, const std::string& field_name) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << "# vtk DataFile Version 3.0\nvmlfn field\nASCII\nDATASET STRUCTURED_POINTS\n";
    out << "DIMENSIONS " << n[0] << ' ' << n[1] << ' ' << n[2] << "\n";
    out << "ORIGIN " << lo[0] << ' ' << lo[1] << ' ' << (lo.size() > 2 ? lo[2] : 0.0) << "\n";
    out << "SPACING " << spacing[0] << ' ' << spacing[1] << ' '
        << (spacing.size() > 2 ? spacing[2] : 1.0) << "\n";
    out << "POINT_DATA " << n[0] * n[1] * n[2] << "\n";
    out.precision(10);
    if (values.cols() == 1) {
        out << "SCALARS " << field_name << " double 1\nLOOKUP_TABLE default\n";
        for (Eigen::Index i = 0; i < values.rows(); ++i) out << values(i, 0) << "\n";
    } else {
        out << "VECTORS " << field_name << " double\n";
        for (Eigen::Index i = 0; i < values.rows(); ++i)
            out << values(i, 0) << ' ' << values(i, 1) << ' ' << values(i, 2) << "\n";
    }
}

Matrix grid_points(const BoxDomain& box, const std::array<Eigen::Index, 3>& n) {
    Matrix pts(n[0] * n[1] * n[2], box.dim());
    Eigen::Index r = 0;
    for (Eigen::Index iz = 0; iz < n[2]; ++iz)
        for (Eigen::Index iy = 0; iy < n[1]; ++iy)
            for (Eigen::Index ix = 0; ix < n[0]; ++ix) {
                const std::array<Eigen::Index, 3> idx{ix, iy, iz};
                for (int ax = 0; ax < box.dim(); ++ax) {
                    const Eigen::Index steps = std::max<Eigen::Index>(1, n[ax] - 1);
                    pts(r, ax) = box.lo()[ax] + box.side(ax) * double(idx[ax]) / double(steps);
                }
                ++r;
            }
    return pts;
}

ModelKind model_kind_of(const RunConfig& cfg) {
    if (cfg.pde.kind == "helmholtz") return ModelKind::helmholtz;
    if (cfg.pde.kind == "heat") return ModelKind::heat;
    if (cfg.pde.kind == "heat-flux") return ModelKind::heat_flux;
    if (cfg.pde.kind == "parametric-4d") return ModelKind::parametric4d;
    return ModelKind::elasticity;
}

double effective_beta(const RunConfig& cfg, const Matrix& k) {
    if (cfg.beta_mode == "trace-relative") return cfg.beta * k.trace() / double(k.rows());
    return cfg.beta;
}

// ------------------------------------------------------------ commands -----

int cmd_scan(const CommonFlags& flags) {
    RunConfig cfg = load_config(flags);
    if (!cfg.scan) throw ConfigError("scan command requires a scan section in the config");
    if (cfg.is_elasticity()) throw ConfigError("scan does not support the elasticity case");
    const fs::path out = resolve_out(flags);
    fs::create_directories(out);

    PdeCase pde = cfg.build_case();
    BasisConfig bcfg = cfg.basis;
    bcfg.input_dim = pde.input_dim();
    bcfg.spatial_dim = pde.domain.dim();
    bcfg.omega_max = cfg.scan->candidates_hi;   // placeholder; candidates override
    ScanConfig scfg = cfg.build_scan_config();
    scfg.strategy = cfg.strategy;

    const auto t0 = Clock::now();
    ScanReport rep = scan_frequency(pde, bcfg, scfg, cfg.build_assembly_options());
    const double secs = elapsed(t0);

    std::ostringstream txt;
    txt << "frequency scan (" << rep.rows.size() << " candidates, seed " << scfg.seed
        << ", rng " << rep.rng_name << ")\n"
        << scan_table(rep) << "selected omega_max = " << fmt3(rep.selected) << "  ("
        << fmt3(secs) << " s)\n";
    write_file(out / "scan_report.txt", txt.str());
    json j = report_header(cfg);
    j["scan"] = scan_json(rep);
    j["seconds"] = secs;
    write_file(out / "scan_report.json", j.dump(2));
    std::cout << txt.str();
    return 0;
}

struct SolveArtifacts {
    Model model;
    json report;
    double omega_max = 0.0;
};

SolveArtifacts run_scalar_solve(const RunConfig& cfg) {
    PdeCase pde = cfg.build_case();
    BasisConfig bcfg = cfg.basis;
    bcfg.input_dim = pde.input_dim();
    bcfg.spatial_dim = pde.domain.dim();

    json rep = report_header(cfg);
    double omega = 0.0;
    if (cfg.fixed_omega) {
        omega = *cfg.fixed_omega;
    } else {
        ScanConfig scfg = cfg.build_scan_config();
        const auto ts = Clock::now();
        ScanReport sr = scan_frequency(pde, bcfg, scfg, cfg.build_assembly_options());
        omega = sr.selected;
        rep["scan"] = scan_json(sr);
        rep["timings"]["scan_s"] = elapsed(ts);
    }
    bcfg.omega_max = omega;
    bcfg.omega_min = std::min(bcfg.omega_min, omega);

    BoundarySpec bc = pde.basis_boundary();
    const auto ta = Clock::now();
    FourierBasis basis(bcfg, bc);
    AssemblyOptions opts = cfg.build_assembly_options();
    if (cfg.normalize_field < 0) opts.normalize_field = pde.normalize_field;
    WeakFormSystem sys;
    if (pde.kind == PdeCase::Kind::parametric4d) {
        const Eigen::Index per =
            std::max<Eigen::Index>(1, cfg.n_interior / pde.kappa_snapshots);
        PointSet aug = sample_augmented(pde, per, cfg.basis.seed, cfg.strategy);
        sys = assemble_parametric4d(basis, pde, aug, opts);
    } else {
        PointSet interior = sample_interior(pde.domain, cfg.n_interior, cfg.basis.seed,
                                            cfg.strategy);
        std::vector<PointSet> neumann;
        for (const NeumannFace& nf : bc.neumann_faces()) {
            if (!nf.flux) continue;
            neumann.push_back(sample_face(pde.domain, nf.face, cfg.n_boundary_per_face,
                                          cfg.basis.seed, cfg.strategy));
        }
        sys = assemble_scalar(basis, pde, interior, neumann, opts);
    }
    const double t_asm = elapsed(ta);

    const auto tsv = Clock::now();
    const double beta = effective_beta(cfg, sys.K);
    const MatrixHint hint =
        pde.kind == PdeCase::Kind::helmholtz ? MatrixHint::symmetric : MatrixHint::spd;
    SolveResult sol = solve(sys.K, sys.F, beta, hint);
    sol.output_scale = sys.output_scale;
    const double t_solve = elapsed(tsv);

    rep["timings"]["assembly_s"] = fmt3(t_asm);
    rep["timings"]["solve_s"] = fmt3(t_solve);
    rep["timings"]["total_s"] = fmt3(t_asm + t_solve);
    rep["solver"] = {{"path", to_string(sol.path)},
                     {"beta_used", sol.beta_used},
                     {"residual_norm", sol.residual_norm},
                     {"w_inf_norm", sol.w_inf_norm},
                     {"cond_estimate", sol.cond_estimate},
                     {"output_scale", sol.output_scale},
                     {"precision", to_string(sys.precision)}};
    rep["omega_max"] = omega;

    // oracle comparison
    if (cfg.oracle == "mms-polynomial" || cfg.oracle == "mms-coscossin") {
        MmsKind kind =
            cfg.oracle == "mms-coscossin" ? MmsKind::coscossin : MmsKind::polynomial;
        ManufacturedSolution mms = mms_helmholtz(kind, pde.k, pde.domain);
        CounterRng rng(cfg.basis.seed, 99);
        Matrix tst(2000, 3);
        for (Eigen::Index i = 0; i < tst.rows(); ++i)
            for (int k2 = 0; k2 < 3; ++k2)
                tst(i, k2) = pde.domain.lo()[k2] + rng.next_double() * pde.domain.side(k2);
        Vector pred = predict(basis, sol, pde.domain.normalize(tst)).col(0);
        Vector ref(tst.rows());
        for (Eigen::Index i = 0; i < tst.rows(); ++i) ref[i] = mms.u(tst.row(i).transpose());
        Metrics m = metrics(pred, ref);
        rep["metrics"] = {{"avg_diff", m.avg_diff},
                          {"max_diff", m.max_diff},
                          {"rel_l2_percent", 100.0 * m.rel_l2}};
    } else if (cfg.oracle == "fd") {
        std::vector<Eigen::Index> resolution = cfg.fd_resolution;
        if (resolution.empty())
            resolution.assign(pde.domain.dim(), pde.domain.dim() == 3 ? 0 : 65);
        if (pde.domain.dim() == 3 && cfg.fd_resolution.empty()) resolution = {81, 81, 33};
        PdeCase fd_case =
            pde.kind == PdeCase::Kind::parametric4d
                ? heat_case_at(pde, 0.5 * (pde.kappa_min + pde.kappa_max))
                : pde;
        FdReference fd = fd_solve(fd_case, resolution);
        Matrix pts = fd.points();
        Matrix in = pts;
        if (pde.kind == PdeCase::Kind::parametric4d) {
            in.conservativeResize(pts.rows(), pts.cols() + 1);
            in.col(pts.cols()).setConstant(0.5 * (pde.kappa_min + pde.kappa_max));
        }
        Vector pred = predict(basis, sol, basis.domain().normalize(in),
                              pde.boundary.dirichlet_offset())
                          .col(0);
        Metrics m = metrics(pred, fd.values);
        rep["metrics"] = {{"avg_diff", m.avg_diff},
                          {"max_diff", m.max_diff},
                          {"rel_l2_percent", 100.0 * m.rel_l2},
                          {"fd_residual", fd.residual_rel}};
    }

    SolveArtifacts art;
    art.omega_max = omega;
    art.report = std::move(rep);
    art.model.kind = model_kind_of(cfg);
    art.model.basis_config = bcfg;
    art.model.domain_lo = basis.domain().lo();
    art.model.domain_hi = basis.domain().hi();
    art.model.dirichlet_faces = bc.dirichlet_faces();
    art.model.dirichlet_offset = pde.boundary.dirichlet_offset();
    art.model.omega = basis.omega();
    art.model.phase = basis.phase();
    art.model.has_result = true;
    art.model.result = sol;
    return art;
}

SolveArtifacts run_elasticity_solve(const RunConfig& cfg) {
    BoxDomain box = cfg.build_domain();
    BoundarySpec bc = cfg.build_boundary();
    LayeredMaterial mat = cfg.build_material();
    SpatialFn dT = cfg.pde.delta_t.build(box.dim());

    BasisConfig bcfg = cfg.basis;
    bcfg.input_dim = box.dim();
    bcfg.spatial_dim = box.dim();
    if (!cfg.fixed_omega)
        throw ConfigError("elasticity solve requires basis.omega_max (no scan support)");
    bcfg.omega_max = *cfg.fixed_omega;

    json rep = report_header(cfg);
    const auto ta = Clock::now();
    FourierBasis basis(bcfg, bc);
    PointSet interior = sample_interior(box, cfg.n_interior, cfg.basis.seed, cfg.strategy);
    AssemblyOptions opts = cfg.build_assembly_options();
    if (cfg.normalize_field < 0) opts.normalize_field = true;
    BlockSystem sys = assemble_elastic(basis, mat, dT, interior, opts);
    const double t_asm = elapsed(ta);
    const auto tsv = Clock::now();
    double beta = cfg.beta;
    if (cfg.beta_mode == "trace-relative")
        beta *= (sys.k00.trace() + sys.k11.trace() + sys.k22.trace()) /
                double(3 * bcfg.n_hidden);
    SolveResult sol = solve_elastic(sys, beta);
    const double t_solve = elapsed(tsv);
    rep["timings"]["assembly_s"] = fmt3(t_asm);
    rep["timings"]["solve_s"] = fmt3(t_solve);
    rep["timings"]["total_s"] = fmt3(t_asm + t_solve);
    rep["solver"] = {{"path", to_string(sol.path)},
                     {"beta_used", sol.beta_used},
                     {"residual_norm", sol.residual_norm},
                     {"w_inf_norm", sol.w_inf_norm},
                     {"output_scale", sol.output_scale}};

    SolveArtifacts art;
    art.omega_max = bcfg.omega_max;
    art.report = std::move(rep);
    art.model.kind = ModelKind::elasticity;
    art.model.basis_config = bcfg;
    art.model.domain_lo = box.lo();
    art.model.domain_hi = box.hi();
    art.model.dirichlet_faces = bc.dirichlet_faces();
    art.model.dirichlet_offset = 0.0;
    art.model.omega = basis.omega();
    art.model.phase = basis.phase();
    art.model.has_result = true;
    art.model.result = sol;
    return art;
}

int cmd_solve(const CommonFlags& flags) {
    RunConfig cfg = load_config(flags);
    const fs::path out = resolve_out(flags);
    fs::create_directories(out);

    SolveArtifacts art =
        cfg.is_elasticity() ? run_elasticity_solve(cfg) : run_scalar_solve(cfg);
    save_model(art.model, (out / "model.vmlf").string());

    // default field export on a coarse grid
    BoxDomain box(art.model.domain_lo.head(cfg.pde.lo.size()),
                  art.model.domain_hi.head(cfg.pde.hi.size()));
    std::array<Eigen::Index, 3> n{21, 21, 9};
    if (box.dim() == 1) n = {201, 1, 1};
    if (box.dim() == 2) n = {41, 41, 1};
    Matrix pts = grid_points(box, n);
    Matrix vals = art.model.predict_at(
        pts, art.model.parametric()
                 ? std::optional<double>(0.5 * (art.model.kappa_min() + art.model.kappa_max()))
                 : std::nullopt);
    write_xyz(out / "field.xyz", pts, vals);

    art.report["outputs"] = {{"model", (out / "model.vmlf").string()},
                             {"field", (out / "field.xyz").string()}};
    write_file(out / "solve_report.json", art.report.dump(2));
    std::ostringstream txt;
    txt << "solve: " << cfg.pde.kind << ", omega_max " << fmt3(art.omega_max) << "\n"
        << art.report.dump(2) << "\n";
    write_file(out / "solve_report.txt", txt.str());
    std::cout << "solve complete: omega_max " << fmt3(art.omega_max);
    if (art.report.contains("metrics"))
        std::cout << ", metrics " << art.report["metrics"].dump();
    std::cout << "\nmodel: " << (out / "model.vmlf").string() << "\n";
    return 0;
}

int cmd_predict(const CommonFlags& flags, const std::string& model_path,
                const std::string& points_path, const std::string& grid_spec,
                std::optional<double> kappa) {
    const fs::path out = resolve_out(flags);
    fs::create_directories(out);
    Model model = load_model(model_path);
    const int sdim = model.basis_config.spatial_dim;

    Matrix pts;
    std::array<Eigen::Index, 3> gn{0, 0, 0};
    if (!grid_spec.empty()) {
        std::istringstream is(grid_spec);
        char comma;
        if (!(is >> gn[0] >> comma >> gn[1] >> comma >> gn[2]) || gn[0] < 1 || gn[1] < 1 ||
            gn[2] < 1)
            throw ConfigError("--grid expects nx,ny,nz");
        BoxDomain box(model.domain_lo.head(sdim), model.domain_hi.head(sdim));
        pts = grid_points(box, gn);
    } else if (!points_path.empty()) {
        std::ifstream in(points_path);
        if (!in) throw IoError("cannot open points file '" + points_path + "'");
        std::vector<double> buf;
        double v;
        while (in >> v) buf.push_back(v);
        if (buf.size() % sdim != 0)
            throw IoError("points file does not contain a multiple of " +
                          std::to_string(sdim) + " values");
        pts.resize(buf.size() / sdim, sdim);
        for (Eigen::Index i = 0; i < pts.rows(); ++i)
            for (int j = 0; j < sdim; ++j) pts(i, j) = buf[i * sdim + j];
    } else {
        throw ConfigError("predict requires --points FILE or --grid nx,ny,nz");
    }

    if (pts.rows() == 0) {
        write_file(out / "prediction.xyz", "");
        std::cout << "0 points, empty output\n";
        return 0;
    }
    const auto t0 = Clock::now();
    Matrix vals = model.predict_at(pts, kappa);
    const double secs = elapsed(t0);
    write_xyz(out / "prediction.xyz", pts, vals);
    if (gn[0] > 0) {
        BoxDomain box(model.domain_lo.head(sdim), model.domain_hi.head(sdim));
        Vector spacing(3);
        for (int ax = 0; ax < 3; ++ax)
            spacing[ax] = ax < sdim && gn[ax] > 1 ? box.side(ax) / double(gn[ax] - 1) : 1.0;
        write_vtk(out / "prediction.vtk", gn, box.lo(), spacing, vals,
                  model.kind == ModelKind::elasticity ? "displacement" : "field");
    }
    std::cout << pts.rows() << " points in " << fmt3(secs * 1e3) << " ms ("
              << fmt3(secs / double(pts.rows()) * 1e6) << " us/point)\n";
    return 0;
}

int cmd_bench(const CommonFlags& flags, const std::string& suite) {
    if (flags.threads) Eigen::setNbThreads(*flags.threads);
    const fs::path out = resolve_out(flags);
    fs::create_directories(out);
    const auto results = run_suite(suite);
    json rows = json::array();
    bool all_ok = true;
    for (const CriterionResult& r : results) {
        all_ok = all_ok && r.passed;
        std::cout << (r.passed ? "PASS" : "FAIL") << "  " << std::setw(40) << std::left << r.id
                  << r.detail << "\n";
        rows.push_back(
            {{"id", r.id}, {"passed", r.passed}, {"detail", r.detail}, {"seconds", r.seconds}});
    }
    write_file(out / "bench_report.json",
               json{{"suite", suite}, {"results", rows}, {"all_passed", all_ok}}.dump(2));
    std::cout << (all_ok ? "all criteria passed" : "FAILURES present") << "\n";
    return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"vmlfn: mesh-free weak-form random-feature PDE solver"};
    app.require_subcommand(1);
    CommonFlags flags;

    auto add_common = [&flags](CLI::App* cmd, bool needs_config) {
        auto* opt = cmd->add_option("--config", flags.config_path, "run configuration (JSON)");
        if (needs_config) opt->required();
        cmd->add_option("--out", flags.out_dir, "output directory (default $VMLFN_OUT or .)");
        cmd->add_option_function<std::uint64_t>(
            "--seed", [&flags](const std::uint64_t& s) { flags.seed = s; },
            "override the basis seed");
        cmd->add_option_function<int>(
            "--threads", [&flags](const int& t) { flags.threads = t; }, "worker thread count");
        cmd->add_option_function<std::string>(
            "--precision", [&flags](const std::string& p) { flags.precision = p; },
            "fp32 or fp64 assembly");
    };

    auto* scan_cmd = app.add_subcommand("scan", "run frequency scanning and write the report");
    add_common(scan_cmd, true);
    auto* solve_cmd = app.add_subcommand("solve", "assemble and solve, write model + reports");
    add_common(solve_cmd, true);
    auto* predict_cmd =
        app.add_subcommand("predict", "evaluate a saved model at query points");
    add_common(predict_cmd, false);
    std::string model_path, points_path, grid_spec;
    double kappa_val = std::numeric_limits<double>::quiet_NaN();
    predict_cmd->add_option("--model", model_path, "VMLF model file")->required();
    predict_cmd->add_option("--points", points_path, "whitespace-separated coordinates file");
    predict_cmd->add_option("--grid", grid_spec, "nx,ny,nz query lattice over the domain");
    predict_cmd->add_option("--kappa", kappa_val, "conductivity for parametric models");
    auto* bench_cmd = app.add_subcommand("bench", "run packaged acceptance suites");
    add_common(bench_cmd, false);
    std::string suite = "all";
    bench_cmd->add_option("suite", suite, "suite name or 'all'");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (scan_cmd->parsed()) return cmd_scan(flags);
        if (solve_cmd->parsed()) return cmd_solve(flags);
        if (predict_cmd->parsed()) {
            std::optional<double> kappa;
            if (!std::isnan(kappa_val)) kappa = kappa_val;
            return cmd_predict(flags, model_path, points_path, grid_spec, kappa);
        }
        if (bench_cmd->parsed()) return cmd_bench(flags, suite);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
