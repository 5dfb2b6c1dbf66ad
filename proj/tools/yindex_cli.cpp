// Command-line front end: index, steklov, dtn, verify, converge, null-basis, fields.
//
// Exit status: 0 when every requested check passes, 2 when a check fails,
// 1 on usage or IO errors.

#include "yindex/yindex.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>

namespace fs = std::filesystem;
using namespace yindex;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCheck = 2;

struct RunConfig {
    std::string command;
    std::string surface = "ycone";
    std::vector<double> levels;
    int k = 10;
    double c0 = 5.0;
    std::string out_dir;
    std::uint64_t seed = 20240601;
    std::string route = "bulk";
    std::string gamma = "neumann";
    int modes = 6;
    int n = 64;
    std::string input;
    std::optional<double> threshold;
    std::optional<int> expect_index;
    std::optional<int> expect_nullity;
    double min_order = 1.7;
    bool finite_differences = false;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string tag(double h)
{
    std::ostringstream os;
    os << h;
    return os.str();
}

Json provenance(const RunConfig& c)
{
    Json p;
    p["tool"] = "yindex";
    p["schema_version"] = kSchemaVersion;
    Json cfg;
    cfg["command"] = c.command;
    cfg["surface"] = c.surface;
    cfg["levels"] = c.levels;
    cfg["k"] = c.k;
    cfg["c0"] = c.c0;
    cfg["seed"] = c.seed;
    cfg["route"] = c.route;
    if (c.command == "steklov") {
        cfg["gamma"] = c.gamma;
        cfg["modes"] = c.modes;
    }
    if (c.command == "verify") {
        cfg["n"] = c.n;
        cfg["input"] = c.input;
        cfg["finite_differences"] = c.finite_differences;
    }
    if (c.threshold) cfg["threshold"] = *c.threshold;
    if (c.expect_index) cfg["expect_index"] = *c.expect_index;
    if (c.expect_nullity) cfg["expect_nullity"] = *c.expect_nullity;
    p["config"] = cfg;
    return p;
}

Json mesh_stats(const YMesh& m)
{
    Json s;
    s["faces"] = m.face_count();
    s["dofs"] = m.dof_count();
    s["junction_nodes"] = m.junction_count();
    int tris = 0;
    double angle = 180.0;
    for (const auto& f : m.faces) {
        tris += f.triangle_count();
        angle = std::min(angle, min_angle_deg(f));
    }
    s["triangles"] = tris;
    s["min_angle_deg"] = angle;
    return s;
}

YSurfaceSpec load_surface(const std::string& s)
{
    if (s.size() > 5 && s.substr(s.size() - 5) == ".json") return surface_from_json(read_json_file(s));
    return canonical_surface(s);
}

void write_json(const RunConfig& c, const std::string& name, const Json& j)
{
    write_text_file((fs::path(c.out_dir) / name).string(), j.dump(2) + "\n");
}

void write_csv(const RunConfig& c, const std::string& name, const std::vector<EigenRow>& rows)
{
    std::ostringstream os;
    write_eigen_csv(os, rows);
    write_text_file((fs::path(c.out_dir) / name).string(), os.str());
}

std::vector<double> levels_or(const RunConfig& c, std::vector<double> fallback)
{
    return c.levels.empty() ? fallback : c.levels;
}

struct Checks {
    bool ok = true;
    void expect(bool cond, const std::string& what)
    {
        if (!cond) {
            ok = false;
            std::cout << "CHECK FAILED: " << what << "\n";
        }
    }
    [[nodiscard]] int code() const { return ok ? kExitOk : kExitCheck; }
};

void expect_counts(Checks& checks, const RunConfig& c, int index, int nullity, const std::string& where)
{
    if (c.expect_index)
        checks.expect(index == *c.expect_index,
                      where + ": Morse index " + std::to_string(index) + " != expected " + std::to_string(*c.expect_index));
    if (c.expect_nullity)
        checks.expect(nullity == *c.expect_nullity,
                      where + ": nullity " + std::to_string(nullity) + " != expected " + std::to_string(*c.expect_nullity));
}

int run_index(const RunConfig& c)
{
    const YSurfaceSpec spec = load_surface(c.surface);
    const ClassifyRule rule{c.c0, {}};
    LowSpectrumOptions opts;
    opts.seed = c.seed;
    Checks checks;
    for (double h : levels_or(c, {0.05})) {
        Json out;
        out["provenance"] = provenance(c);
        const std::string where = spec.name + " h=" + tag(h);
        if (c.route == "bulk" || c.route == "both") {
            IndexRun run = compute_index(spec, h, c.k, rule, opts);
            out["report"] = to_json(run.report);
            out["mesh"] = mesh_stats(build_ymesh(spec, h));
            write_csv(c, "index_" + spec.name + "_h" + tag(h) + ".csv", eigen_rows(run.report));
            std::cout << where << " bulk: index " << run.report.index << ", nullity " << run.report.nullity
                      << " (tol " << run.report.tolerance << ", inertia " << *run.report.inertia_below << "/"
                      << *run.report.inertia_above << (run.report.ambiguous ? ", ambiguous" : "") << ")\n";
            checks.expect(run.report.inertia_agrees,
                          "classify: eigenvalue counts disagree with inertia at " + where);
            expect_counts(checks, c, run.report.index, run.report.nullity, where + " bulk");
            if (c.route == "both") {
                const DtnResult d = dtn_index(build_ymesh(spec, h), spec, rule);
                out["dtn"] = to_json(d.spectrum);
                std::cout << where << " dtn: index " << d.index << ", nullity " << d.nullity << "\n";
                checks.expect(d.index == run.report.index && d.nullity == run.report.nullity,
                              "route equivalence: DtN (" + std::to_string(d.index) + ", " + std::to_string(d.nullity) +
                                  ") differs from bulk at " + where);
            }
        } else if (c.route == "dtn") {
            const YMesh mesh = build_ymesh(spec, h);
            const DtnResult d = dtn_index(mesh, spec, rule);
            out["dtn"] = to_json(d.spectrum);
            out["mesh"] = mesh_stats(mesh);
            std::cout << where << " dtn: index " << d.index << ", nullity " << d.nullity << "\n";
            expect_counts(checks, c, d.index, d.nullity, where + " dtn");
        } else {
            throw UsageError("--route must be bulk, dtn or both");
        }
        write_json(c, "index_" + spec.name + "_h" + tag(h) + ".json", out);
    }
    return checks.code();
}

int run_steklov(const RunConfig& c)
{
    const GammaCondition cond = gamma_condition_from_string(c.gamma);
    if (cond == GammaCondition::ConstrainedY) throw UsageError("steklov handles neumann or dirichlet; use dtn for the junction");
    const double tol = c.threshold.value_or(0.01);
    Checks checks;
    for (double h : levels_or(c, {0.02})) {
        const FaceMesh mesh = mesh_face(FaceDomain{DomainKind::HalfDisk, 0.0}, h);
        const SteklovSpectrum s = steklov_face(mesh, cond, ClassifyRule{c.c0, {}});
        if (s.eigenvalues.size() < c.modes) throw UsageError("mesh too coarse for the requested number of modes");
        std::ostringstream csv;
        csv << std::setprecision(17) << "h,n,delta,analytic,error\n";
        Json rows = Json::array();
        std::cout << "steklov " << c.gamma << " h=" << tag(h) << "\n  n  delta  analytic  error\n";
        for (int i = 0; i < c.modes; ++i) {
            const double analytic = cond == GammaCondition::Neumann ? i : i + 1;
            const double delta = s.eigenvalues[i];
            // Relative error, absolute for the zero mode.
            const double err = analytic == 0.0 ? std::abs(delta) : std::abs(delta - analytic) / analytic;
            csv << h << ',' << i << ',' << delta << ',' << analytic << ',' << err << '\n';
            rows.push_back({{"n", i}, {"delta", delta}, {"analytic", analytic}, {"error", err}});
            std::cout << "  " << i << "  " << delta << "  " << analytic << "  " << err << "\n";
            checks.expect(err <= tol, "steklov mode " + std::to_string(i) + " error " + tag(err) + " exceeds " + tag(tol));
        }
        Json out;
        out["provenance"] = provenance(c);
        out["spectrum"] = to_json(s);
        out["table"] = rows;
        write_json(c, "steklov_" + c.gamma + "_h" + tag(h) + ".json", out);
        write_text_file((fs::path(c.out_dir) / ("steklov_" + c.gamma + "_h" + tag(h) + ".csv")).string(), csv.str());
    }
    return checks.code();
}

int run_dtn(const RunConfig& c)
{
    const YSurfaceSpec spec = load_surface(c.surface);
    Checks checks;
    for (double h : levels_or(c, {0.05})) {
        const YMesh mesh = build_ymesh(spec, h);
        const DtnResult d = dtn_index(mesh, spec, ClassifyRule{c.c0, {}});
        Json out;
        out["provenance"] = provenance(c);
        out["mesh"] = mesh_stats(mesh);
        out["spectrum"] = to_json(d.spectrum);
        out["morse_index"] = d.index;
        out["nullity"] = d.nullity;
        out["reduced_form_negative"] = d.reduced_form_negative;
        write_json(c, "dtn_" + spec.name + "_h" + tag(h) + ".json", out);
        std::cout << spec.name << " h=" << tag(h) << " dtn: index " << d.index << ", nullity " << d.nullity
                  << "; first deltas";
        for (Eigen::Index i = 0; i < std::min<Eigen::Index>(8, d.spectrum.eigenvalues.size()); ++i)
            std::cout << ' ' << d.spectrum.eigenvalues[i];
        std::cout << "\n";
        checks.expect(d.reduced_form_negative == d.index, "steklov threshold identity fails at h=" + tag(h));
        expect_counts(checks, c, d.index, d.nullity, spec.name + " h=" + tag(h) + " dtn");
    }
    return checks.code();
}

int run_verify(const RunConfig& c)
{
    CertificateOptions opts;
    opts.threshold = c.threshold;
    PolarGridSet grids;
    std::string label;
    if (!c.input.empty()) {
        grids = grids_from_json(read_json_file(c.input));
        validate_grids(grids);
        label = fs::path(c.input).stem().string();
    } else {
        const YSurfaceSpec spec = load_surface(c.surface);
        grids = sample_immersion(spec, c.n, c.n);
        label = spec.name;
    }
    const ResidualReport rep = certificate_residuals(derivative_grids(grids, !c.finite_differences), opts);
    Json out;
    out["provenance"] = provenance(c);
    out["report"] = to_json(rep);
    write_json(c, "verify_" + label + ".json", out);
    Checks checks;
    for (const auto& r : rep.checks) {
        std::cout << std::left << std::setw(24) << r.name;
        if (!r.applicable) {
            std::cout << "skipped\n";
            continue;
        }
        std::cout << "max " << std::setw(14) << r.max << " threshold " << r.threshold << (r.pass ? "  pass" : "  FAIL");
        if (!r.note.empty()) std::cout << "  (" << r.note << ")";
        std::cout << "\n";
        checks.expect(r.pass, "certificate check '" + r.name + "' above threshold");
    }
    return checks.code();
}

int run_converge(const RunConfig& c)
{
    const YSurfaceSpec spec = load_surface(c.surface);
    const ClassifyRule rule{c.c0, {}};
    LowSpectrumOptions opts;
    opts.seed = c.seed;
    const auto levels = levels_or(c, {0.1, 0.05, 0.025});
    Checks checks;
    std::vector<EigenRow> rows;
    std::vector<double> hs, cluster;
    Json per_level = Json::array();
    std::optional<std::pair<int, int>> first;
    for (double h : levels) {
        IndexRun run = compute_index(spec, h, c.k, rule, opts);
        const auto& r = run.report;
        auto lr = eigen_rows(r);
        rows.insert(rows.end(), lr.begin(), lr.end());
        double mag = 0.0;
        Json zeros = Json::array();
        for (double l : r.eigenvalues)
            if (std::abs(l) <= r.tolerance) {
                mag = std::max(mag, std::abs(l));
                zeros.push_back(std::abs(l));
            }
        hs.push_back(h);
        cluster.push_back(mag);
        per_level.push_back({{"h", h},
                             {"morse_index", r.index},
                             {"nullity", r.nullity},
                             {"zero_tolerance", r.tolerance},
                             {"inertia_agrees", r.inertia_agrees},
                             {"zero_cluster", zeros}});
        std::cout << spec.name << " h=" << tag(h) << ": index " << r.index << ", nullity " << r.nullity
                  << ", max |lambda| in zero cluster " << mag << "\n";
        if (!first) first = std::make_pair(r.index, r.nullity);
        checks.expect(std::make_pair(r.index, r.nullity) == *first, "counts change across refinement levels");
        checks.expect(r.inertia_agrees, "eigenvalue counts disagree with inertia at h=" + tag(h));
        expect_counts(checks, c, r.index, r.nullity, spec.name + " h=" + tag(h));
    }
    Json out;
    out["provenance"] = provenance(c);
    out["levels"] = per_level;
    const bool fit = hs.size() >= 2 && std::all_of(cluster.begin(), cluster.end(), [](double v) { return v > 0.0; });
    if (fit) {
        const double slope = fitted_order(hs, cluster);
        out["zero_cluster_order"] = slope;
        std::cout << "fitted order of the zero cluster: " << slope << "\n";
        checks.expect(slope >= c.min_order, "zero-cluster order " + tag(slope) + " below " + tag(c.min_order));
    }
    write_json(c, "converge_" + spec.name + ".json", out);
    write_csv(c, "converge_" + spec.name + ".csv", rows);
    return checks.code();
}

int run_null_basis(const RunConfig& c)
{
    const YSurfaceSpec spec = load_surface(c.surface);
    const auto levels = levels_or(c, {0.1, 0.05, 0.025});
    std::vector<std::vector<double>> residuals;
    std::vector<std::string> labels;
    Json per_level = Json::array();
    for (double h : levels) {
        const YMesh mesh = build_ymesh(spec, h);
        const ReducedPencil pencil = reduce(assemble_forms(mesh, spec), constraint_basis(mesh), h, spec.name);
        const AnalyticNullBasis basis = analytic_null_basis(mesh, spec);
        labels = basis.labels;
        residuals.push_back(null_projection_residuals(basis.vectors, pencil));
        Json lv;
        lv["h"] = h;
        for (std::size_t i = 0; i < labels.size(); ++i) lv["residuals"][labels[i]] = residuals.back()[i];
        per_level.push_back(lv);
        std::cout << spec.name << " h=" << tag(h) << ":";
        for (std::size_t i = 0; i < labels.size(); ++i) std::cout << ' ' << labels[i] << '=' << residuals.back()[i];
        std::cout << "\n";
    }
    Json out;
    out["provenance"] = provenance(c);
    out["levels"] = per_level;
    Checks checks;
    if (levels.size() >= 2) {
        for (std::size_t i = 0; i < labels.size(); ++i) {
            std::vector<double> v;
            for (const auto& r : residuals) v.push_back(r[i]);
            const double slope = fitted_order(levels, v);
            out["orders"][labels[i]] = slope;
            std::cout << "fitted order " << labels[i] << ": " << slope << "\n";
            checks.expect(slope >= c.min_order, "null vector " + labels[i] + " residual order " + tag(slope) + " below " +
                                                    tag(c.min_order));
        }
    }
    write_json(c, "null_basis_" + spec.name + ".json", out);
    return checks.code();
}

int run_fields(const RunConfig& c)
{
    const YSurfaceSpec spec = load_surface(c.surface);
    const double tol = c.threshold.value_or(1e-3);
    const auto levels = levels_or(c, {0.05});
    Checks checks;
    Json out;
    out["provenance"] = provenance(c);
    Json per_level = Json::array();
    for (double h : levels) {
        const YMesh mesh = build_ymesh(spec, h);
        Json lv;
        lv["h"] = h;
        const char* names[3] = {"e1", "e2", "e3"};
        for (int a = 0; a < 3; ++a) {
            const CoordinateField f = coordinate_field_test(mesh, spec, Vec3::Unit(a));
            lv["fields"][names[a]] = {{"face_values", f.face_values}, {"q", f.q}, {"tangential", f.tangential}};
            std::cout << spec.name << " h=" << tag(h) << " E=" << names[a] << ": Q = " << f.q
                      << (f.tangential ? " (tangential)" : "") << "\n";
            if (spec.kind == SurfaceKind::YCone) {
                if (a == 0) {
                    checks.expect(f.tangential && f.q == 0.0, "junction-axis field is not tangential");
                } else {
                    const double expected = -1.5 * std::numbers::pi;
                    checks.expect(std::abs(f.q - expected) <= tol * std::abs(expected),
                                  std::string("coordinate field ") + names[a] + " Q off -3pi/2 by more than " + tag(tol));
                }
            }
        }
        per_level.push_back(lv);
    }
    out["levels"] = per_level;
    write_json(c, "fields_" + spec.name + ".json", out);
    return checks.code();
}

void validate_config(const RunConfig& c)
{
    for (double h : c.levels)
        if (!(h > 0.0 && h < 1.0)) throw UsageError("mesh sizes must lie in (0, 1)");
    if (c.k < 1) throw UsageError("--k must be positive");
    if (!(c.c0 > 0.0)) throw UsageError("--c0 must be positive");
    if (c.modes < 1) throw UsageError("--modes must be positive");
    if (c.n < 8) throw UsageError("--n must be at least 8");
    if (c.threshold && !(*c.threshold > 0.0)) throw UsageError("--threshold must be positive");
    if (!c.input.empty() && !fs::exists(c.input)) throw UsageError("input file '" + c.input + "' does not exist");
    std::error_code ec;
    fs::create_directories(c.out_dir, ec);
    if (ec || !fs::is_directory(c.out_dir)) throw UsageError("output directory '" + c.out_dir + "' is not usable");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Morse index, nullity and minimality certificates for free-boundary Y-surfaces"};
    app.set_help_flag("--help", "print this help message and exit");
    app.require_subcommand(1);
    RunConfig cfg;
    const char* env_out = std::getenv("YINDEX_OUT_DIR");
    cfg.out_dir = env_out ? env_out : ".";
    std::optional<double> single_h;
    std::optional<int> expect_index, expect_nullity;
    std::optional<double> threshold;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--out", cfg.out_dir, "output directory (default $YINDEX_OUT_DIR or .)");
        sub->add_option("--seed", cfg.seed, "random seed for iterative solvers");
        sub->add_option("--c0", cfg.c0, "zero tolerance constant: tol = c0 h^2");
    };
    auto meshing = [&](CLI::App* sub) {
        sub->add_option("--surface", cfg.surface, "ycone, equatorial-disk, critical-catenoid or a surface JSON file");
        sub->add_option("--h", single_h, "mesh size");
        sub->add_option("--levels", cfg.levels, "list of mesh sizes")->delimiter(',');
        sub->add_option("--expect-index", expect_index, "fail unless the Morse index equals this");
        sub->add_option("--expect-nullity", expect_nullity, "fail unless the nullity equals this");
    };

    auto* index = app.add_subcommand("index", "Morse index and nullity from the reduced pencil");
    common(index);
    meshing(index);
    index->add_option("--k", cfg.k, "number of eigenvalues to report");
    index->add_option("--route", cfg.route, "bulk, dtn or both")->check(CLI::IsMember({"bulk", "dtn", "both"}));

    auto* steklov = app.add_subcommand("steklov", "per-face Steklov spectrum against delta_n = n");
    common(steklov);
    steklov->add_option("--h", single_h, "mesh size");
    steklov->add_option("--levels", cfg.levels, "list of mesh sizes")->delimiter(',');
    steklov->add_option("--gamma", cfg.gamma, "neumann or dirichlet")->check(CLI::IsMember({"neumann", "dirichlet"}));
    steklov->add_option("--modes", cfg.modes, "number of modes to compare");
    steklov->add_option("--threshold", threshold, "relative error bound (default 0.01)");

    auto* dtn = app.add_subcommand("dtn", "junction-constrained Dirichlet-to-Neumann route");
    common(dtn);
    meshing(dtn);

    auto* verify = app.add_subcommand("verify", "minimality certificate of a sampled immersion");
    common(verify);
    verify->add_option("--surface", cfg.surface, "canonical surface to sample");
    verify->add_option("--input", cfg.input, "immersion JSON file");
    verify->add_option("--n", cfg.n, "grid size in r and theta");
    verify->add_option("--threshold", threshold, "residual threshold for every check");
    verify->add_flag("--fd", cfg.finite_differences, "use finite differences instead of exact derivatives");

    auto* converge = app.add_subcommand("converge", "refinement sweep with zero-cluster convergence order");
    common(converge);
    meshing(converge);
    converge->add_option("--k", cfg.k, "number of eigenvalues per level");
    converge->add_option("--min-order", cfg.min_order, "required fitted order of the zero cluster");

    auto* null_basis = app.add_subcommand("null-basis", "pencil residuals of the analytic null vectors");
    common(null_basis);
    meshing(null_basis);
    null_basis->add_option("--min-order", cfg.min_order, "required fitted order of each residual");

    auto* fields = app.add_subcommand("fields", "second variation of coordinate-field normal variations");
    common(fields);
    meshing(fields);
    fields->add_option("--threshold", threshold, "relative tolerance on -3 pi / 2 (default 1e-3)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        cfg.command = app.get_subcommands().front()->get_name();
        if (single_h) cfg.levels.insert(cfg.levels.begin(), *single_h);
        cfg.expect_index = expect_index;
        cfg.expect_nullity = expect_nullity;
        cfg.threshold = threshold;
        validate_config(cfg);
        if (cfg.command == "index") return run_index(cfg);
        if (cfg.command == "steklov") return run_steklov(cfg);
        if (cfg.command == "dtn") return run_dtn(cfg);
        if (cfg.command == "verify") return run_verify(cfg);
        if (cfg.command == "converge") return run_converge(cfg);
        if (cfg.command == "null-basis") return run_null_basis(cfg);
        if (cfg.command == "fields") return run_fields(cfg);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const InvalidArgument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return kExitUsage;
    } catch (const UnsupportedRoute& e) {
        std::cerr << "unsupported: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCheck;
    }
    return kExitUsage;
}
