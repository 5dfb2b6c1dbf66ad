#pragma once

// Minimality certificate for immersions sampled on polar grids.
//
// Each face is sampled at r_i = i / n_r (i = 1..n_r) and theta_k = k * span / n_theta
// (k = 0..n_theta), stored r-major: sample (i, k) sits at (i - 1) * (n_theta + 1) + k.
// span is pi for half-disk faces (theta = 0 and pi form the junction) and
// 2 pi for a full-disk face, whose last column repeats the first.
//
// With z = r e^{i theta}:
//   u_zz = 1/4 e^{-2 i theta} (a - i b),
//   a = u_rr - u_r / r - u_tt / r^2,   b = 2 u_rt / r - 2 u_t / r^2,
// and the certificate field is H = z^4 sum_j u_{j,zz} . u_{j,zz}.

#include "yindex/geometry.hpp"

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace yindex {

using JetFn = std::function<PolarJet(double r, double theta)>;

struct PolarGridSet {
    int n_r = 0;
    int n_theta = 0;
    bool periodic = false; ///< full-disk face: theta spans 2 pi
    std::vector<std::vector<Vec3>> samples;
    /// Exact derivative closures, one per face, when the source is analytic.
    std::vector<JetFn> closures;

    [[nodiscard]] int face_count() const { return static_cast<int>(samples.size()); }
    [[nodiscard]] int columns() const { return n_theta + 1; }
    [[nodiscard]] int node(int i, int k) const { return i * columns() + k; }
    [[nodiscard]] double radius(int i) const { return static_cast<double>(i + 1) / n_r; }
    [[nodiscard]] double theta(int k) const;
    [[nodiscard]] double theta_span() const;
};

/// Samples every face of a canonical surface exactly and keeps the closures.
PolarGridSet sample_immersion(const YSurfaceSpec& spec, int n_r, int n_theta);

/// Samples analytic closures (one per face).
PolarGridSet sample_closures(std::vector<JetFn> closures, int n_r, int n_theta, bool periodic = false);

/// Checks grid shape, finiteness and, for three faces, that the junction
/// columns agree within tolerance. Throws InputError naming the first mismatch.
void validate_grids(const PolarGridSet& grids, double junction_tolerance = 1e-9);

struct FaceDerivatives {
    std::vector<Vec3> u, u_r, u_t, u_rr, u_rt, u_tt;
    std::vector<Vec3> normal;
    std::vector<Vec3> u_rr_perp, u_rt_perp, u_tt_perp;
};

struct DerivGrids {
    PolarGridSet grids;
    std::vector<FaceDerivatives> faces;
    bool exact = false;
};

/// Derivatives on the grid: exact closures when present and use_closures is
/// set, otherwise second-order finite differences (central inside, one-sided
/// at the grid ends). Throws DegenerateImmersion where |u_r x u_t| < 1e-10.
DerivGrids derivative_grids(const PolarGridSet& grids, bool use_closures = true);

struct HopfField {
    std::vector<std::complex<double>> h;      ///< sum_j Q_j . Q_j per node
    std::vector<std::complex<double>> field;  ///< H = z^4 h per node
    double max_imag_sigma = 0.0;
    double max_imag_gamma = 0.0;
    double max_cauchy_riemann = 0.0;
    double max_inner_ring = 0.0;
};

/// Three-face grids only; throws UnsupportedRoute otherwise.
HopfField hopf_field(const DerivGrids& derivs);

struct CheckResult {
    std::string name;
    double max = 0.0;
    double rms = 0.0;
    double threshold = 0.0;
    bool pass = true;
    bool applicable = true;
    std::string note;
};

struct ResidualReport {
    std::vector<CheckResult> checks;
    bool exact = false;
    bool hopf_meaningful = false;
    int n_r = 0;
    int n_theta = 0;

    [[nodiscard]] const CheckResult& get(const std::string& name) const;
    [[nodiscard]] bool all_pass() const;
};

struct CertificateOptions {
    /// Threshold for every check; defaults to 1e-10 with exact closures and
    /// 10 * max(dr, dtheta)^2 with finite differences.
    std::optional<double> threshold;
};

/// Check names: harmonic, conformal-angle, conformal-scale,
/// free-boundary-radius, free-boundary-parallel, junction-match,
/// theta2-match, y-balance, hopf-imag-sigma, hopf-imag-gamma,
/// hopf-cauchy-riemann, hopf-inner-ring.
ResidualReport certificate_residuals(const DerivGrids& derivs, const CertificateOptions& opts = {});

/// sample/derive/check in one call for a canonical surface.
ResidualReport verify_surface(const YSurfaceSpec& spec, int n, bool use_closures = true, const CertificateOptions& opts = {});

} // namespace yindex
