#include "yindex/spectra.hpp"

#include "yindex/error.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

namespace yindex {

namespace {

std::string fmt(double v)
{
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

double inf_norm(const SpMat& a)
{
    Vec rows = Vec::Zero(a.rows());
    for (Eigen::Index c = 0; c < a.outerSize(); ++c)
        for (SpMat::InnerIterator it(a, c); it; ++it) rows[it.row()] += std::abs(it.value());
    return rows.size() ? rows.maxCoeff() : 0.0;
}

void compute_residuals(const ReducedPencil& p, EigenPairs& out)
{
    out.residuals.resize(out.values.size());
    for (Eigen::Index i = 0; i < out.values.size(); ++i) {
        const Vec y = out.vectors.col(i);
        out.residuals[i] = (p.stiffness * y - out.values[i] * (p.mass * y)).norm();
    }
}

EigenPairs dense_pairs(const ReducedPencil& p, int k)
{
    const Eigen::MatrixXd a(p.stiffness);
    const Eigen::MatrixXd m(p.mass);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(a, m);
    if (es.info() != Eigen::Success) throw SolverError("dense generalized eigensolve failed (mass matrix not positive definite?)");
    EigenPairs out;
    out.values = es.eigenvalues().head(k);
    out.vectors = es.eigenvectors().leftCols(k);
    out.method = "dense";
    compute_residuals(p, out);
    return out;
}

EigenPairs subspace_pairs(const ReducedPencil& p, int k, const LowSpectrumOptions& opts)
{
    const Eigen::Index m = p.size();
    const double a_norm = inf_norm(p.stiffness);
    const double m_norm = inf_norm(p.mass);

    // Shift below the spectrum: A - sM must be positive definite.
    double shift = -1.0;
    Eigen::SimplicialLLT<SpMat> llt;
    for (int attempt = 0;; ++attempt) {
        if (attempt > 80) throw SolverError("no positive definite shift found for the pencil");
        SpMat shifted = p.stiffness - shift * p.mass;
        llt.compute(shifted);
        if (llt.info() == Eigen::Success) break;
        shift *= 2.0;
    }

    const Eigen::Index block = std::min<Eigen::Index>(m, 2 * static_cast<Eigen::Index>(k) + 10);
    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> normal;
    Eigen::MatrixXd x(m, block);
    for (Eigen::Index c = 0; c < block; ++c)
        for (Eigen::Index r = 0; r < m; ++r) x(r, c) = normal(rng);

    EigenPairs out;
    out.method = "shift-invert";
    out.shift = shift;
    for (int it = 1; it <= opts.max_iterations; ++it) {
        Eigen::MatrixXd y = llt.solve(Eigen::MatrixXd(p.mass * x));
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
        y = qr.householderQ() * Eigen::MatrixXd::Identity(m, block);
        const Eigen::MatrixXd ay = p.stiffness * y;
        const Eigen::MatrixXd my = p.mass * y;
        Eigen::MatrixXd ap = y.transpose() * ay;
        Eigen::MatrixXd mp = y.transpose() * my;
        ap = 0.5 * (ap + ap.transpose()).eval();
        mp = 0.5 * (mp + mp.transpose()).eval();
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(ap, mp);
        if (es.info() != Eigen::Success) throw SolverError("Rayleigh-Ritz projection failed at iteration " + std::to_string(it));
        x = y * es.eigenvectors();

        out.values = es.eigenvalues().head(k);
        out.vectors = x.leftCols(k);
        out.iterations = it;
        compute_residuals(p, out);
        bool done = true;
        for (int i = 0; i < k; ++i) {
            const double bound =
                opts.residual_tol * (a_norm + std::abs(out.values[i]) * m_norm) * out.vectors.col(i).norm();
            if (!(out.residuals[i] <= bound)) {
                done = false;
                break;
            }
        }
        if (done) return out;
    }
    throw SolverError("shift-invert iteration did not converge in " + std::to_string(opts.max_iterations) +
                      " iterations (max residual " + fmt(out.residuals.maxCoeff()) + ")");
}

// Index lists -> dense blocks of a sparse matrix.
Eigen::MatrixXd dense_block(const SpMat& a, const std::vector<int>& rows, const std::vector<int>& cols)
{
    std::vector<int> rmap(static_cast<std::size_t>(a.rows()), -1), cmap(static_cast<std::size_t>(a.cols()), -1);
    for (std::size_t i = 0; i < rows.size(); ++i) rmap[static_cast<std::size_t>(rows[i])] = static_cast<int>(i);
    for (std::size_t i = 0; i < cols.size(); ++i) cmap[static_cast<std::size_t>(cols[i])] = static_cast<int>(i);
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (Eigen::Index c = 0; c < a.outerSize(); ++c)
        for (SpMat::InnerIterator it(a, c); it; ++it) {
            const int r = rmap[static_cast<std::size_t>(it.row())];
            const int cc = cmap[static_cast<std::size_t>(it.col())];
            if (r >= 0 && cc >= 0) out(r, cc) = it.value();
        }
    return out;
}

SpMat sparse_block(const SpMat& a, const std::vector<int>& rows, const std::vector<int>& cols)
{
    std::vector<int> rmap(static_cast<std::size_t>(a.rows()), -1), cmap(static_cast<std::size_t>(a.cols()), -1);
    for (std::size_t i = 0; i < rows.size(); ++i) rmap[static_cast<std::size_t>(rows[i])] = static_cast<int>(i);
    for (std::size_t i = 0; i < cols.size(); ++i) cmap[static_cast<std::size_t>(cols[i])] = static_cast<int>(i);
    std::vector<Eigen::Triplet<double>> t;
    for (Eigen::Index c = 0; c < a.outerSize(); ++c)
        for (SpMat::InnerIterator it(a, c); it; ++it) {
            const int r = rmap[static_cast<std::size_t>(it.row())];
            const int cc = cmap[static_cast<std::size_t>(it.col())];
            if (r >= 0 && cc >= 0) t.emplace_back(r, cc, it.value());
        }
    SpMat out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    out.setFromTriplets(t.begin(), t.end());
    return out;
}

struct BoundaryReduction {
    Eigen::MatrixXd schur;
    Eigen::MatrixXd trace_mass;
};

/// Eliminates the `interior` unknowns of K by harmonic extension, keeping `kept`.
BoundaryReduction reduce_to_boundary(const SpMat& k, const SpMat& trace_mass, const std::vector<int>& kept,
                                     const std::vector<int>& interior)
{
    BoundaryReduction out;
    out.trace_mass = dense_block(trace_mass, kept, kept);
    out.schur = dense_block(k, kept, kept);
    if (!interior.empty()) {
        const SpMat kii = sparse_block(k, interior, interior);
        const SpMat kib = sparse_block(k, interior, kept);
        Eigen::SimplicialLDLT<SpMat> ldlt(kii);
        if (ldlt.info() != Eigen::Success) throw SolverError("interior block of the harmonic extension is singular");
        const Eigen::MatrixXd x = ldlt.solve(Eigen::MatrixXd(kib));
        if (ldlt.info() != Eigen::Success || !x.allFinite())
            throw SolverError("interior block of the harmonic extension is singular");
        out.schur -= Eigen::MatrixXd(kib.transpose()) * x;
    }
    out.schur = 0.5 * (out.schur + out.schur.transpose()).eval();
    out.trace_mass = 0.5 * (out.trace_mass + out.trace_mass.transpose()).eval();
    return out;
}

Vec steklov_values(const BoundaryReduction& b)
{
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(b.schur, b.trace_mass, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw SolverError("boundary trace mass is not positive definite");
    return es.eigenvalues();
}

void count_threshold(SteklovSpectrum& s)
{
    s.below_one = 0;
    s.at_one = 0;
    for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) {
        const double d = s.eigenvalues[i];
        if (d < 1.0 - s.tolerance) ++s.below_one;
        else if (std::abs(d - 1.0) <= s.tolerance) ++s.at_one;
    }
}

double sparse_max_abs(const SpMat& a)
{
    double m = 0.0;
    for (Eigen::Index c = 0; c < a.outerSize(); ++c)
        for (SpMat::InnerIterator it(a, c); it; ++it) m = std::max(m, std::abs(it.value()));
    return m;
}

} // namespace

Inertia inertia_count(const ReducedPencil& pencil, double shift)
{
    if (pencil.stiffness.rows() != pencil.mass.rows())
        throw SolverError("stiffness and mass sizes differ in the reduced pencil");
    SpMat shifted = pencil.stiffness - shift * pencil.mass;
    Eigen::SimplicialLDLT<SpMat, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt(shifted);
    const Vec d = ldlt.vectorD();
    if (ldlt.info() != Eigen::Success || d.size() != shifted.rows()) {
        Eigen::Index bad = 0;
        for (; bad < d.size(); ++bad)
            if (!(std::isfinite(d[bad]) && d[bad] != 0.0)) break;
        throw SolverError("LDL^T breakdown at shift " + fmt(shift) + ": pivot " + std::to_string(bad) + " of " +
                          std::to_string(shifted.rows()) + (bad < d.size() ? " is " + fmt(d[bad]) : std::string{}));
    }
    Inertia in;
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        if (!std::isfinite(d[i]))
            throw SolverError("LDL^T breakdown at shift " + fmt(shift) + ": pivot " + std::to_string(i) + " is not finite");
        if (d[i] < 0.0) ++in.negative;
        else if (d[i] > 0.0) ++in.positive;
        else ++in.zero;
    }
    return in;
}

EigenPairs low_spectrum(const ReducedPencil& pencil, int k, const LowSpectrumOptions& opts)
{
    if (k < 1 || k > pencil.size())
        throw SolverError("requested " + std::to_string(k) + " eigenpairs from a pencil of size " +
                          std::to_string(pencil.size()));
    if (pencil.size() < opts.dense_limit) return dense_pairs(pencil, k);
    return subspace_pairs(pencil, k, opts);
}

double zero_tolerance(double h, const ClassifyRule& rule)
{
    if (rule.tolerance) return *rule.tolerance;
    return rule.c0 * h * h;
}

SpectrumReport classify(const Vec& eigenvalues, double h, const ClassifyRule& rule, const ReducedPencil* pencil)
{
    SpectrumReport rep;
    rep.h = h;
    rep.c0 = rule.c0;
    rep.tolerance = zero_tolerance(h, rule);
    if (!(rep.tolerance > 0.0)) throw InvalidArgument("zero tolerance must be positive");
    rep.eigenvalues = eigenvalues;
    std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end());
    const double tol = rep.tolerance;

    double largest = 0.0;
    for (double l : rep.eigenvalues) {
        largest = std::max(largest, std::abs(l));
        if (l < -tol) ++rep.index;
        else if (std::abs(l) <= tol) ++rep.nullity;
    }
    for (Eigen::Index i = 0; i < rep.eigenvalues.size(); ++i) {
        const double a = std::abs(rep.eigenvalues[i]);
        if (a >= 0.5 * tol && a <= 2.0 * tol) {
            rep.ambiguous = true;
            rep.ambiguity = "eigenvalue " + std::to_string(i) + " = " + fmt(rep.eigenvalues[i]) +
                            " lies within [0.5 tol, 2 tol]";
            break;
        }
    }
    const double floor = 1e3 * std::numeric_limits<double>::epsilon() * std::max(1.0, largest);
    if (!rep.ambiguous && tol < floor) {
        rep.ambiguous = true;
        rep.ambiguity = "tolerance " + fmt(tol) + " is below the roundoff floor " + fmt(floor);
    }
    rep.truncated = rep.eigenvalues.size() > 0 && rep.eigenvalues[rep.eigenvalues.size() - 1] <= tol;

    if (pencil) {
        rep.surface = pencil->surface;
        rep.reduced_dofs = pencil->size();
        rep.dofs = pencil->basis.rows();
        rep.inertia_below = inertia_count(*pencil, -tol).negative;
        rep.inertia_above = inertia_count(*pencil, tol).negative;
        rep.inertia_agrees = *rep.inertia_below == rep.index;
        if (!rep.truncated) rep.inertia_agrees = rep.inertia_agrees && *rep.inertia_above == rep.index + rep.nullity;
    }
    return rep;
}

IndexRun compute_index(const YSurfaceSpec& spec, double h, int k, const ClassifyRule& rule, const LowSpectrumOptions& opts)
{
    const YMesh mesh = build_ymesh(spec, h);
    const QuadFormSet forms = assemble_forms(mesh, spec);
    IndexRun run;
    run.pencil = reduce(forms, constraint_basis(mesh), h, spec.name);
    const double tol = zero_tolerance(h, rule);
    const auto above = inertia_count(run.pencil, tol).negative;
    const auto want = std::min<Eigen::Index>(run.pencil.size(), std::max<Eigen::Index>(k, above + 3));
    run.pairs = low_spectrum(run.pencil, static_cast<int>(want), opts);
    run.report = classify(run.pairs.values, h, rule, &run.pencil);
    run.report.solver = run.pairs.method;
    return run;
}

std::string to_string(GammaCondition c)
{
    switch (c) {
    case GammaCondition::Neumann: return "neumann";
    case GammaCondition::Dirichlet: return "dirichlet";
    case GammaCondition::ConstrainedY: return "constrained-Y";
    }
    return "?";
}

GammaCondition gamma_condition_from_string(const std::string& s)
{
    if (s == "neumann") return GammaCondition::Neumann;
    if (s == "dirichlet") return GammaCondition::Dirichlet;
    if (s == "constrained-Y" || s == "constrained-y") return GammaCondition::ConstrainedY;
    throw InvalidArgument("unknown gamma condition '" + s + "' (expected neumann, dirichlet or constrained-Y)");
}

SteklovSpectrum steklov_face(const FaceMesh& mesh, GammaCondition condition, const ClassifyRule& rule)
{
    if (condition == GammaCondition::ConstrainedY)
        throw InvalidArgument("steklov_face handles one face; use dtn_index for the constrained junction");
    if (condition == GammaCondition::Dirichlet && !mesh.domain.has_gamma())
        throw InvalidArgument("dirichlet gamma condition needs a half-disk face");
    if (mesh.domain.kind == DomainKind::AnnulusBand) throw UnsupportedRoute("steklov_face supports disk domains only");

    const SpMat k = parameter_stiffness(mesh);
    const SpMat ms = assemble_face_forms(mesh, FaceImmersion::planar(mesh.domain)).sigma_mass;
    std::vector<int> kept, interior;
    for (int v = 0; v < mesh.vertex_count(); ++v) {
        const bool gamma = mesh.on_gamma(v);
        if (condition == GammaCondition::Dirichlet && gamma) continue;
        (mesh.on_sigma(v) ? kept : interior).push_back(v);
    }
    SteklovSpectrum s;
    s.condition = condition;
    s.h = mesh.h;
    s.surface = to_string(mesh.domain.kind);
    s.eigenvalues = steklov_values(reduce_to_boundary(k, ms, kept, interior));
    s.tolerance = zero_tolerance(mesh.h, rule);
    count_threshold(s);
    return s;
}

DtnResult dtn_index(const YMesh& mesh, const YSurfaceSpec& spec, const ClassifyRule& rule)
{
    const QuadFormSet forms = assemble_forms(mesh, spec);
    if (forms.potential.nonZeros() != 0)
        throw UnsupportedRoute("DtN route needs flat faces, but the potential |A|^2 is nonzero for '" + spec.name + "'");
    if (forms.boundary_gamma.nonZeros() != 0)
        throw UnsupportedRoute("DtN route needs a straight junction, but the junction term is nonzero for '" + spec.name + "'");
    const SpMat gap = forms.boundary_sigma + forms.sigma_mass;
    if (sparse_max_abs(gap) > 1e-12 * sparse_max_abs(forms.sigma_mass))
        throw UnsupportedRoute("DtN route needs the sigma coefficient to be -1 for '" + spec.name + "'");

    const ConstraintBasis z = constraint_basis(mesh);
    const SpMat zt = z.basis.transpose();
    const SpMat k = zt * forms.stiffness * z.basis;
    const SpMat ms = zt * forms.sigma_mass * z.basis;
    std::vector<int> kept, interior;
    for (Eigen::Index c = 0; c < z.reduced_size(); ++c)
        (z.column_on_sigma[static_cast<std::size_t>(c)] ? kept : interior).push_back(static_cast<int>(c));

    const BoundaryReduction b = reduce_to_boundary(k, ms, kept, interior);
    DtnResult out;
    out.spectrum.surface = spec.name;
    out.spectrum.condition = mesh.junction.empty() ? GammaCondition::Neumann : GammaCondition::ConstrainedY;
    out.spectrum.h = mesh.h;
    out.spectrum.eigenvalues = steklov_values(b);
    out.spectrum.tolerance = zero_tolerance(mesh.h, rule);
    count_threshold(out.spectrum);
    out.index = out.spectrum.below_one;
    out.nullity = out.spectrum.at_one;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b.schur - b.trace_mass, Eigen::EigenvaluesOnly);
    const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()[i] < -1e-9 * scale) ++out.reduced_form_negative;
    return out;
}

AnalyticNullBasis analytic_null_basis(const YMesh& mesh, const YSurfaceSpec& spec)
{
    if (spec.kind != SurfaceKind::YCone || mesh.face_count() != 3)
        throw UnsupportedRoute("analytic null basis is defined on the Y-cone only (got '" + spec.name + "')");
    AnalyticNullBasis b;
    for (int j = 0; j < 3; ++j) {
        b.vectors.push_back(interpolate(mesh, [j](int face, const Vec2& p) { return face == j ? p.y() : 0.0; }));
        b.labels.push_back("sine-" + std::to_string(j + 1));
    }
    const double a = 1.0 / std::sqrt(2.0);
    const double c = 1.0 / std::sqrt(6.0);
    const std::array<std::array<double, 3>, 2> weights{{{a, -a, 0.0}, {c, c, -2.0 * c}}};
    for (const auto& w : weights)
        b.vectors.push_back(interpolate(mesh, [w](int face, const Vec2& p) { return w[static_cast<std::size_t>(face)] * p.x(); }));
    b.labels.emplace_back("cosine-a");
    b.labels.emplace_back("cosine-b");
    return b;
}

std::vector<double> null_projection_residuals(const std::vector<Vec>& vectors, const ReducedPencil& pencil)
{
    std::vector<double> out;
    for (const Vec& f : vectors) {
        if (f.size() != pencil.basis.rows())
            throw SolverError("null vector of size " + std::to_string(f.size()) + " does not match the pencil's " +
                              std::to_string(pencil.basis.rows()) + " DOFs");
        const Vec z = pencil.basis.transpose() * f;
        const double mnorm = std::sqrt(z.dot(pencil.mass * z));
        out.push_back((pencil.stiffness * z).norm() / mnorm);
    }
    return out;
}

CoordinateField coordinate_field_test(const YMesh& mesh, const YSurfaceSpec& spec, const Vec3& direction)
{
    if (std::abs(direction.norm() - 1.0) > 1e-12) throw InvalidArgument("direction must be a unit vector");
    if (spec.kind != SurfaceKind::YCone && spec.kind != SurfaceKind::EquatorialDisk)
        throw UnsupportedRoute("coordinate field test needs faces with constant normals");
    CoordinateField out;
    for (int j = 0; j < spec.face_count(); ++j) {
        double value = direction.dot(evaluate_frame(spec, j, {0.5, 0.5 * std::numbers::pi}).normal);
        if (std::abs(value) < 1e-14) value = 0.0;
        out.face_values.push_back(value);
    }
    out.values = interpolate(mesh, [&](int face, const Vec2&) { return out.face_values[static_cast<std::size_t>(face)]; });
    out.q = apply_form(assemble_forms(mesh, spec), out.values);
    out.tangential = std::all_of(out.face_values.begin(), out.face_values.end(), [](double v) { return v == 0.0; });
    for (const auto& triple : mesh.junction) {
        double sum = 0.0;
        for (int j = 0; j < 3; ++j) sum += out.values[mesh.dof(j, triple[static_cast<std::size_t>(j)])];
        out.junction_violation = std::max(out.junction_violation, std::abs(sum));
    }
    return out;
}

double fitted_order(const std::vector<double>& h, const std::vector<double>& value)
{
    if (h.size() != value.size() || h.size() < 2) throw InvalidArgument("slope fit needs at least two matching samples");
    const auto n = static_cast<double>(h.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (!(h[i] > 0.0 && value[i] > 0.0)) throw InvalidArgument("slope fit needs positive samples");
        const double x = std::log(h[i]);
        const double y = std::log(value[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace yindex
