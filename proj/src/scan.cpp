#include "vmlfn/scan.hpp"

#include <cmath>
#include <limits>

#include "vmlfn/geometry.hpp"
#include "vmlfn/rng.hpp"
#include "vmlfn/solver.hpp"

namespace vmlfn {

void ScanConfig::validate() const {
    if (candidates.empty()) throw InvalidArgument("scan: empty candidate list");
    for (size_t i = 0; i < candidates.size(); ++i) {
        if (!(candidates[i] > 0.0)) throw InvalidArgument("scan: candidates must be > 0");
        if (i > 0 && !(candidates[i] > candidates[i - 1]))
            throw InvalidArgument("scan: candidates must be strictly increasing");
    }
    if (n_scan < 1 || n_holdout < 1) throw InvalidArgument("scan: point budgets must be >= 1");
    if (alpha_penalty < 0.0) throw InvalidArgument("scan: alpha_penalty must be >= 0");
    if (beta < 0.0) throw InvalidArgument("scan: beta must be >= 0");
}

std::vector<double> uniform_candidates(double lo, double hi, int count) {
    if (count < 1 || !(hi >= lo)) throw InvalidArgument("uniform_candidates: bad range");
    std::vector<double> out(count);
    for (int i = 0; i < count; ++i)
        out[i] = lo + (hi - lo) * double(i) / double(count - 1);
    out.front() = lo;
    if (count > 1) out.back() = hi;   // hit the endpoints exactly
    return out;
}

double score(double e_r, double w_inf, double alpha) {
    if (e_r < 0.0 || w_inf < 0.0) throw InvalidArgument("score: negative inputs");
    return e_r * (1.0 + alpha * w_inf);
}

namespace {

// holdout sample excluding a thin normalized band next to the Dirichlet faces,
// where the envelope's second derivatives dominate the strong-form residual
Matrix sample_holdout(const BoxDomain& box, const BoundarySpec& bc, Eigen::Index n,
                      std::uint64_t seed, double shell) {
    CounterRng rng(seed, 12);
    Matrix out(n, box.dim());
    Eigen::Index kept = 0;
    Vector x(box.dim()), xn(box.dim());
    std::uint64_t guard = 0;
    while (kept < n) {
        if (++guard > 1000ull * static_cast<std::uint64_t>(n) + 100000ull)
            throw ScanError("scan: holdout shell excludes nearly the whole domain");
        for (int k = 0; k < box.dim(); ++k) {
            x[k] = box.lo()[k] + rng.next_double() * box.side(k);
            xn[k] = 2.0 * (x[k] - box.lo()[k]) / box.side(k) - 1.0;
        }
        if (!bc.dirichlet_faces().empty() && dirichlet_distance(bc, xn) <= shell) continue;
        out.row(kept++) = x.transpose();
    }
    return out;
}

}  // namespace

ScanSets make_scan_sets(const PdeCase& pde, const ScanConfig& cfg) {
    const BoxDomain box = pde.basis_domain();
    const BoundarySpec bc = pde.basis_boundary();
    // scanning and holdout subsets from distinct substreams, disjoint by construction
    CounterRng root(cfg.seed);
    const std::uint64_t scan_seed = root.substream(0xA11CE).next_u64();
    const std::uint64_t hold_seed = root.substream(0xB0B).next_u64();
    ScanSets sets;
    sets.scan = sample_interior(box, cfg.n_scan, scan_seed, cfg.strategy);
    sets.holdout = sample_holdout(box, bc, cfg.n_holdout, hold_seed, cfg.holdout_shell);
    return sets;
}

double holdout_residual(const FourierBasis& basis, const PdeCase& pde, const Matrix& points,
                        const Matrix& weights, double output_scale) {
    const BoxDomain box = pde.basis_domain();
    Matrix xn = box.normalize(points);
    BasisEval e = basis.eval_parts(xn, false, true);
    Vector u = (e.H * weights).col(0) / output_scale;
    u.array() += pde.boundary.dirichlet_offset();
    Vector lap = (e.L * weights).col(0) / output_scale;
    Vector r(points.rows());
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        const Vector p = points.row(i).transpose();
        r[i] = -pde.coeffs.a(p) * lap[i] + pde.coeffs.c(p) * u[i] - pde.coeffs.f(p);
    }
    return r.cwiseAbs().mean();
}

ScanReport scan_frequency(const PdeCase& pde, const BasisConfig& basis_template,
                          const ScanConfig& cfg, const AssemblyOptions& assembly) {
    cfg.validate();
    const BoxDomain box = pde.basis_domain();
    const BoundarySpec bc = pde.basis_boundary();

    ScanSets sets = make_scan_sets(pde, cfg);
    PointSet& scan_set = sets.scan;
    Matrix& holdout = sets.holdout;
    const std::uint64_t hold_seed = CounterRng(cfg.seed).substream(0xB0B).next_u64();

    // flux faces get their own reduced budget during temporary solves
    std::vector<PointSet> neumann;
    const Eigen::Index n_face =
        cfg.n_face > 0 ? cfg.n_face : std::max<Eigen::Index>(64, cfg.n_scan / 8);
    for (const NeumannFace& nf : bc.neumann_faces()) {
        if (!nf.flux) continue;
        neumann.push_back(sample_face(box, nf.face, n_face, hold_seed + 17, cfg.strategy));
    }

    AssemblyOptions opts = assembly;
    opts.normalize_field = pde.normalize_field;
    const MatrixHint hint =
        pde.kind == PdeCase::Kind::helmholtz ? MatrixHint::symmetric : MatrixHint::spd;

    ScanReport report;
    report.scan_seed = cfg.seed;
    report.rng_name = CounterRng::kName;
    for (double omega : cfg.candidates) {
        ScanRow row;
        row.omega = omega;
        try {
            BasisConfig bcfg = basis_template;
            if (cfg.n_hidden > 0) bcfg.n_hidden = cfg.n_hidden;
            bcfg.omega_max = omega;
            bcfg.omega_min = std::min(basis_template.omega_min, omega);
            FourierBasis basis(bcfg, bc);
            WeakFormSystem sys = assemble_scalar(basis, pde, scan_set, neumann, opts);
            SolveResult sol = solve(sys.K, sys.F, cfg.beta, hint);
            row.e_r = holdout_residual(basis, pde, holdout, sol.W, sys.output_scale);
            row.w_inf = sol.w_inf_norm;
            row.score = score(row.e_r, row.w_inf, cfg.alpha_penalty);
        } catch (const Error&) {
            row.failed = true;
            row.e_r = row.score = std::numeric_limits<double>::infinity();
        }
        report.rows.push_back(row);
    }

    double best = std::numeric_limits<double>::infinity();
    bool any = false;
    for (const ScanRow& row : report.rows) {
        if (row.failed) continue;
        any = true;
        if (row.score < best) {
            best = row.score;
            report.selected = row.omega;
        }
    }
    if (!any) throw ScanError("scan: every candidate failed its temporary solve");
    return report;
}

}  // namespace vmlfn
