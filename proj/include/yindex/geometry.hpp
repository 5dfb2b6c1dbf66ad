#pragma once

// Canonical free-boundary surfaces in the unit ball: the flat Y-cone, the
// equatorial disk and the critical catenoid.
//
// Conventions. Every face is parametrized over a planar domain in polar
// coordinates (r, theta). For the Y-cone the junction is the diameter along
// e1 (theta in {0, pi}); face 1 is the upper half of the unit disk in the
// plane z = 0 and face j is its image under the rotation about e1 by the
// face's rotation angle (+120 and -120 degrees for faces 2 and 3). Face 1
// carries the normal +e3 and the other faces carry the rotated normals, so
// that the three normals sum to zero along the junction.

#include <Eigen/Core>

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace yindex {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;

enum class DomainKind { HalfDisk, FullDisk, AnnulusBand };

std::string to_string(DomainKind kind);
DomainKind domain_kind_from_string(std::string_view s);

/// Parameter domain of one face.
///
/// half-disk:    0 <= r <= 1, 0 <= theta <= pi; gamma = {theta in {0, pi}}, sigma = {r = 1}
/// full-disk:    0 <= r <= 1, theta periodic; sigma = {r = 1}, no gamma
/// annulus-band: inner_radius <= r <= 1, theta periodic; both circles are sigma
struct FaceDomain {
    DomainKind kind = DomainKind::HalfDisk;
    double inner_radius = 0.0;

    [[nodiscard]] bool has_gamma() const { return kind == DomainKind::HalfDisk; }
    [[nodiscard]] double theta_span() const;
};

enum class SurfaceKind { YCone, EquatorialDisk, CriticalCatenoid };

struct FaceSpec {
    FaceDomain domain;
    double rotation_deg = 0.0; ///< rotation about e1 applied after the local map
    std::string plane = "xy";  ///< plane of the unrotated face
};

struct YSurfaceSpec {
    std::string name;
    SurfaceKind kind = SurfaceKind::YCone;
    std::vector<FaceSpec> faces;
    bool has_junction = false;
    std::map<std::string, double> params;

    [[nodiscard]] int face_count() const { return static_cast<int>(faces.size()); }
};

/// Builds one of "ycone", "equatorial-disk", "critical-catenoid".
///
/// ycone accepts face1_deg, face2_deg, face3_deg (defaults 0, 120, -120) so that
/// perturbed configurations can be described; critical-catenoid accepts
/// param_inner_radius in (0, 1), the inner radius of its annular parameter
/// domain (default 0.5).
YSurfaceSpec canonical_surface(std::string_view name, const std::map<std::string, double>& params = {});

/// Y-cone with the given face rotation angles in degrees.
YSurfaceSpec ycone_with_rotations(const std::array<double, 3>& degrees);

/// Root of t * tanh(t) = 1 (bisection, 1e-12): the height parameter at which
/// a catenoid meets the sphere through its boundary orthogonally.
double critical_catenoid_height();

/// Scale of the critical catenoid so its boundary lies on the unit sphere.
double critical_catenoid_scale();

struct PolarPoint {
    double r = 0.0;
    double theta = 0.0;
};

/// Position and polar derivatives of an immersion at one parameter point.
struct PolarJet {
    Vec3 u = Vec3::Zero();
    Vec3 u_r = Vec3::Zero();
    Vec3 u_t = Vec3::Zero();
    Vec3 u_rr = Vec3::Zero();
    Vec3 u_rt = Vec3::Zero();
    Vec3 u_tt = Vec3::Zero();
};

/// Analytic immersion of one face: rigid rotation composed with a local map.
/// Rotation-invariant quantities (metric, |A|^2) are evaluated on the local
/// map, so flat faces give exact zeros for the second fundamental form.
class FaceImmersion {
public:
    FaceImmersion(const YSurfaceSpec& spec, int face);

    /// Planar identity immersion of a half- or full-disk domain.
    static FaceImmersion planar(FaceDomain domain);

    [[nodiscard]] PolarJet local_jet(double r, double theta) const;
    [[nodiscard]] PolarJet jet(double r, double theta) const;
    [[nodiscard]] const Mat3& rotation() const { return rotation_; }
    [[nodiscard]] const FaceDomain& domain() const { return domain_; }
    [[nodiscard]] bool is_flat() const { return kind_ != SurfaceKind::CriticalCatenoid; }

private:
    FaceImmersion() = default;

    SurfaceKind kind_ = SurfaceKind::YCone;
    FaceDomain domain_;
    Mat3 rotation_ = Mat3::Identity();
    double scale_ = 1.0;
    double height_ = 0.0;
};

struct FrameData {
    Vec3 position;
    Vec3 tangent_r;
    Vec3 tangent_theta;
    Vec3 normal;
    double second_fundamental_norm2 = 0.0; ///< |A|^2
    Mat2 metric;                           ///< induced metric in (r, theta)
};

/// Exact frame of a face at an interior or boundary parameter point.
/// Throws SingularPointError at r = 0.
FrameData evaluate_frame(const YSurfaceSpec& spec, int face, PolarPoint p);

enum class BoundaryPart { Sigma, Gamma };

struct BoundaryFrame {
    Vec3 conormal;   ///< outward unit conormal tau
    Vec3 tangent;    ///< unit tangent eta (increasing theta on sigma, increasing x = r cos(theta) on gamma)
    Vec3 curvature;  ///< curvature vector of the boundary curve in R^3
    double geodesic_curvature = 0.0;    ///< kappa = <curvature, tau>
    double curvature_dot_conormal = 0.0; ///< H . tau (same number as kappa)
};

BoundaryFrame boundary_frame(const YSurfaceSpec& spec, int face, PolarPoint p, BoundaryPart which);
BoundaryFrame boundary_frame(const FaceImmersion& immersion, PolarPoint p, BoundaryPart which);

/// Maximum violations of the Y-structure identities. Junction entries are
/// empty for surfaces without a junction.
struct YStructureReport {
    std::optional<double> conormal_sum;  ///< max |tau_1 + tau_2 + tau_3| on Gamma
    std::optional<double> normal_sum;    ///< max |N_1 + N_2 + N_3| on Gamma
    std::optional<double> curvature_sum; ///< max |kappa_1 + kappa_2 + kappa_3| on Gamma
    double sigma_radius = 0.0;           ///< max ||u| - 1| on sigma
    double sigma_parallel = 0.0;         ///< max |tau x u| on sigma
};

YStructureReport check_y_structure(const YSurfaceSpec& spec, int samples = 64);

/// Rotation about e1 by the given angle in degrees.
Mat3 rotation_about_junction(double degrees);

} // namespace yindex
