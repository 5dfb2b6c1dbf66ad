#pragma once

// Index and nullity of the reduced pencil A_r y = lambda M_r y.
//
// Integer counts always come from Sylvester inertia of A_r - s M_r (sparse
// LDL^T); eigenvalues are computed separately for classification and
// convergence diagnostics. The boundary (DtN) route reduces the form to
// sigma traces and counts Steklov eigenvalues below and at 1.

#include "yindex/assembly.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace yindex {

struct Inertia {
    Eigen::Index negative = 0;
    Eigen::Index zero = 0;
    Eigen::Index positive = 0;
};

/// Inertia of A_r - shift * M_r. Throws SolverError with the pivot index and
/// value when the factorization breaks down.
Inertia inertia_count(const ReducedPencil& pencil, double shift);

struct LowSpectrumOptions {
    Eigen::Index dense_limit = 2000; ///< dense solve below this reduced size
    int max_iterations = 1000;
    std::uint64_t seed = 20240601;
    double residual_tol = 1e-8;
};

struct EigenPairs {
    Vec values;              ///< ascending
    Eigen::MatrixXd vectors; ///< M_r-orthonormal columns
    Vec residuals;           ///< ||A y - lambda M y||
    std::string method;      ///< "dense" or "shift-invert"
    int iterations = 0;
    double shift = 0.0;
};

/// k smallest eigenpairs. Each pair satisfies
/// ||A y - lambda M y|| <= residual_tol * (||A||_inf + |lambda| ||M||_inf) * ||y||.
EigenPairs low_spectrum(const ReducedPencil& pencil, int k, const LowSpectrumOptions& opts = {});

struct ClassifyRule {
    double c0 = 5.0;
    std::optional<double> tolerance; ///< overrides c0 * h^2 when set
};

double zero_tolerance(double h, const ClassifyRule& rule);

struct SpectrumReport {
    std::string surface;
    double h = 0.0;
    std::string route = "bulk";
    Vec eigenvalues;
    int index = 0;
    int nullity = 0;
    double tolerance = 0.0;
    double c0 = 0.0;
    bool ambiguous = false;
    std::string ambiguity;
    /// n_neg(-tol) and n_neg(+tol) from inertia, when a pencil was supplied.
    std::optional<Eigen::Index> inertia_below;
    std::optional<Eigen::Index> inertia_above;
    bool inertia_agrees = true;
    /// Set when every computed eigenvalue is <= tol, so counts may be truncated.
    bool truncated = false;
    std::vector<double> null_residuals;
    Eigen::Index dofs = 0;
    Eigen::Index reduced_dofs = 0;
    std::string solver;
};

/// Classifies eigenvalues against tol. With a pencil, the counts are
/// cross-checked against inertia at -tol and +tol.
SpectrumReport classify(const Vec& eigenvalues, double h, const ClassifyRule& rule = {},
                        const ReducedPencil* pencil = nullptr);

/// Mesh, assemble, reduce, solve and classify in one call. k is raised so
/// the computed eigenvalues always cover the inertia count at +tol.
struct IndexRun {
    ReducedPencil pencil;
    EigenPairs pairs;
    SpectrumReport report;
};
IndexRun compute_index(const YSurfaceSpec& spec, double h, int k = 10, const ClassifyRule& rule = {},
                       const LowSpectrumOptions& opts = {});

enum class GammaCondition { Neumann, Dirichlet, ConstrainedY };

std::string to_string(GammaCondition c);
GammaCondition gamma_condition_from_string(const std::string& s);

struct SteklovSpectrum {
    std::string surface;
    GammaCondition condition = GammaCondition::Neumann;
    double h = 0.0;
    Vec eigenvalues; ///< ascending
    double tolerance = 0.0;
    int below_one = 0; ///< #{delta < 1 - tol}
    int at_one = 0;    ///< #{|delta - 1| <= tol}
};

/// Discrete Dirichlet-to-Neumann spectrum on sigma of one flat half-disk face.
SteklovSpectrum steklov_face(const FaceMesh& mesh, GammaCondition condition, const ClassifyRule& rule = {});

struct DtnResult {
    SteklovSpectrum spectrum;
    int index = 0;
    int nullity = 0;
    /// Negative eigenvalues of the boundary-reduced form S - M_sigma.
    int reduced_form_negative = 0;
};

/// Junction-constrained DtN route. Requires P = 0, B_gamma = 0 and
/// B_sigma = -M_sigma; throws UnsupportedRoute otherwise.
DtnResult dtn_index(const YMesh& mesh, const YSurfaceSpec& spec, const ClassifyRule& rule = {});

/// Three single-face sine vectors (r sin(theta) on face j) followed by two
/// cosine vectors (r cos(theta) weighted by (1,-1,0)/sqrt(2) and
/// (1,1,-2)/sqrt(6)), as nodal vectors.
struct AnalyticNullBasis {
    std::vector<Vec> vectors;
    std::vector<std::string> labels;
};

AnalyticNullBasis analytic_null_basis(const YMesh& mesh, const YSurfaceSpec& spec);

/// ||A_r z|| / ||z||_{M_r} for z = Z^T f of each basis vector.
std::vector<double> null_projection_residuals(const std::vector<Vec>& vectors, const ReducedPencil& pencil);

struct CoordinateField {
    Vec values;               ///< n = <E, N_j> on face j
    std::vector<double> face_values;
    double q = 0.0;           ///< Q(n, n)
    bool tangential = false;  ///< n vanishes identically
    double junction_violation = 0.0;
};

CoordinateField coordinate_field_test(const YMesh& mesh, const YSurfaceSpec& spec, const Vec3& direction);

/// Least-squares slope of log(value) against log(h).
double fitted_order(const std::vector<double>& h, const std::vector<double>& value);

} // namespace yindex
