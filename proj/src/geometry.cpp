#include "yindex/geometry.hpp"

#include "yindex/error.hpp"

#include <Eigen/Geometry>

#include <cmath>
#include <numbers>

namespace yindex {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kParamTol = 1e-12;

double deg2rad(double d) { return d * kPi / 180.0; }

Vec3 unit(const Vec3& v) { return v / v.norm(); }

/// Component of v orthogonal to the unit vector t.
Vec3 reject(const Vec3& v, const Vec3& t) { return v - v.dot(t) * t; }

void check_face(const YSurfaceSpec& spec, int face)
{
    if (face < 0 || face >= spec.face_count())
        throw InvalidArgument("face index " + std::to_string(face) + " out of range for surface '" + spec.name +
                              "' with " + std::to_string(spec.face_count()) + " faces");
}

void check_in_domain(const FaceDomain& d, PolarPoint p)
{
    if (!(p.r <= 1.0 + kParamTol) || (d.kind == DomainKind::AnnulusBand && p.r < d.inner_radius - kParamTol))
        throw InvalidArgument("parameter point r=" + std::to_string(p.r) + " outside the face domain");
    if (d.kind == DomainKind::HalfDisk && (p.theta < -kParamTol || p.theta > kPi + kParamTol))
        throw InvalidArgument("parameter point theta=" + std::to_string(p.theta) + " outside [0, pi]");
}

} // namespace

std::string to_string(DomainKind kind)
{
    switch (kind) {
    case DomainKind::HalfDisk: return "half-disk";
    case DomainKind::FullDisk: return "full-disk";
    case DomainKind::AnnulusBand: return "annulus-band";
    }
    return "unknown";
}

DomainKind domain_kind_from_string(std::string_view s)
{
    if (s == "half-disk") return DomainKind::HalfDisk;
    if (s == "full-disk") return DomainKind::FullDisk;
    if (s == "annulus-band") return DomainKind::AnnulusBand;
    throw InvalidArgument("unknown face domain kind '" + std::string(s) + "'");
}

double FaceDomain::theta_span() const { return kind == DomainKind::HalfDisk ? kPi : 2.0 * kPi; }

Mat3 rotation_about_junction(double degrees)
{
    return Eigen::AngleAxisd(deg2rad(degrees), Vec3::UnitX()).toRotationMatrix();
}

double critical_catenoid_height()
{
    // f(t) = t tanh t - 1 is increasing on (0, inf); root lies in [1, 1.5].
    double lo = 1.0;
    double hi = 1.5;
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (mid * std::tanh(mid) - 1.0 < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double critical_catenoid_scale()
{
    const double t0 = critical_catenoid_height();
    return 1.0 / std::sqrt(std::cosh(t0) * std::cosh(t0) + t0 * t0);
}

YSurfaceSpec ycone_with_rotations(const std::array<double, 3>& degrees)
{
    YSurfaceSpec spec;
    spec.name = "ycone";
    spec.kind = SurfaceKind::YCone;
    spec.has_junction = true;
    for (int j = 0; j < 3; ++j) {
        spec.faces.push_back(FaceSpec{FaceDomain{DomainKind::HalfDisk, 0.0}, degrees[j], "xy"});
        spec.params["face" + std::to_string(j + 1) + "_deg"] = degrees[j];
    }
    return spec;
}

YSurfaceSpec canonical_surface(std::string_view name, const std::map<std::string, double>& params)
{
    auto reject_unknown = [&](std::initializer_list<std::string_view> allowed) {
        for (const auto& [key, value] : params) {
            bool ok = false;
            for (auto a : allowed) ok = ok || key == a;
            if (!ok) throw InvalidArgument("parameter '" + key + "' not accepted by surface '" + std::string(name) + "'");
            if (!std::isfinite(value)) throw InvalidArgument("parameter '" + key + "' is not finite");
        }
    };

    if (name == "ycone") {
        reject_unknown({"face1_deg", "face2_deg", "face3_deg"});
        std::array<double, 3> deg{0.0, 120.0, -120.0};
        for (int j = 0; j < 3; ++j) {
            auto it = params.find("face" + std::to_string(j + 1) + "_deg");
            if (it != params.end()) deg[j] = it->second;
        }
        return ycone_with_rotations(deg);
    }
    if (name == "equatorial-disk") {
        reject_unknown({});
        YSurfaceSpec spec;
        spec.name = "equatorial-disk";
        spec.kind = SurfaceKind::EquatorialDisk;
        spec.faces.push_back(FaceSpec{FaceDomain{DomainKind::FullDisk, 0.0}, 0.0, "xy"});
        return spec;
    }
    if (name == "critical-catenoid") {
        reject_unknown({"param_inner_radius"});
        double inner = 0.5;
        if (auto it = params.find("param_inner_radius"); it != params.end()) inner = it->second;
        if (!(inner > 0.0 && inner < 1.0))
            throw InvalidArgument("critical-catenoid param_inner_radius must lie in (0, 1)");
        YSurfaceSpec spec;
        spec.name = "critical-catenoid";
        spec.kind = SurfaceKind::CriticalCatenoid;
        spec.faces.push_back(FaceSpec{FaceDomain{DomainKind::AnnulusBand, inner}, 0.0, "xy"});
        spec.params["param_inner_radius"] = inner;
        spec.params["neck_scale"] = critical_catenoid_scale();
        return spec;
    }
    throw InvalidArgument("unknown surface name '" + std::string(name) + "'");
}

FaceImmersion::FaceImmersion(const YSurfaceSpec& spec, int face)
{
    check_face(spec, face);
    const auto& f = spec.faces[static_cast<std::size_t>(face)];
    kind_ = spec.kind;
    domain_ = f.domain;
    rotation_ = rotation_about_junction(f.rotation_deg);
    if (kind_ == SurfaceKind::CriticalCatenoid) {
        height_ = critical_catenoid_height();
        scale_ = 1.0 / std::sqrt(std::cosh(height_) * std::cosh(height_) + height_ * height_);
    }
}

FaceImmersion FaceImmersion::planar(FaceDomain domain)
{
    FaceImmersion im;
    im.kind_ = SurfaceKind::EquatorialDisk;
    im.domain_ = domain;
    return im;
}

PolarJet FaceImmersion::local_jet(double r, double theta) const
{
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    PolarJet j;
    if (kind_ != SurfaceKind::CriticalCatenoid) {
        j.u = Vec3(r * c, r * s, 0.0);
        j.u_r = Vec3(c, s, 0.0);
        j.u_t = Vec3(-r * s, r * c, 0.0);
        j.u_rr = Vec3::Zero();
        j.u_rt = Vec3(-s, c, 0.0);
        j.u_tt = Vec3(-r * c, -r * s, 0.0);
        return j;
    }
    // Catenoid lambda (cosh t cos, cosh t sin, t) with t affine in r.
    const double a = 2.0 * height_ / (1.0 - domain_.inner_radius);
    const double t = -height_ + a * (r - domain_.inner_radius);
    const double ch = std::cosh(t);
    const double sh = std::sinh(t);
    const double l = scale_;
    j.u = l * Vec3(ch * c, ch * s, t);
    j.u_r = l * a * Vec3(sh * c, sh * s, 1.0);
    j.u_t = l * Vec3(-ch * s, ch * c, 0.0);
    j.u_rr = l * a * a * Vec3(ch * c, ch * s, 0.0);
    j.u_rt = l * a * Vec3(-sh * s, sh * c, 0.0);
    j.u_tt = l * Vec3(-ch * c, -ch * s, 0.0);
    return j;
}

PolarJet FaceImmersion::jet(double r, double theta) const
{
    PolarJet j = local_jet(r, theta);
    j.u = rotation_ * j.u;
    j.u_r = rotation_ * j.u_r;
    j.u_t = rotation_ * j.u_t;
    j.u_rr = rotation_ * j.u_rr;
    j.u_rt = rotation_ * j.u_rt;
    j.u_tt = rotation_ * j.u_tt;
    return j;
}

FrameData evaluate_frame(const YSurfaceSpec& spec, int face, PolarPoint p)
{
    check_face(spec, face);
    if (p.r <= 0.0)
        throw SingularPointError("frame undefined at the cone point r = 0 (face " + std::to_string(face) + ")");
    const FaceImmersion im(spec, face);
    check_in_domain(im.domain(), p);

    const PolarJet j = im.local_jet(p.r, p.theta);
    const Vec3 cross = j.u_r.cross(j.u_t);
    const Vec3 nu = unit(cross);

    Mat2 g;
    g << j.u_r.dot(j.u_r), j.u_r.dot(j.u_t), j.u_r.dot(j.u_t), j.u_t.dot(j.u_t);
    Mat2 b;
    b << j.u_rr.dot(nu), j.u_rt.dot(nu), j.u_rt.dot(nu), j.u_tt.dot(nu);
    const Mat2 shape = g.inverse() * b;

    FrameData f;
    const Mat3& R = im.rotation();
    f.position = R * j.u;
    f.tangent_r = R * j.u_r;
    f.tangent_theta = R * j.u_t;
    f.normal = R * nu;
    f.second_fundamental_norm2 = (shape * shape).trace();
    f.metric = g;
    return f;
}

BoundaryFrame boundary_frame(const YSurfaceSpec& spec, int face, PolarPoint p, BoundaryPart which)
{
    check_face(spec, face);
    return boundary_frame(FaceImmersion(spec, face), p, which);
}

BoundaryFrame boundary_frame(const FaceImmersion& im, PolarPoint p, BoundaryPart which)
{
    const FaceDomain& d = im.domain();
    if (p.r <= 0.0) throw SingularPointError("boundary frame undefined at the cone point r = 0");
    check_in_domain(d, p);

    const PolarJet j = im.local_jet(p.r, p.theta);
    BoundaryFrame bf;
    Vec3 tangent;
    Vec3 conormal;
    Vec3 curvature;
    if (which == BoundaryPart::Sigma) {
        const bool outer = std::abs(p.r - 1.0) <= kParamTol;
        const bool inner = d.kind == DomainKind::AnnulusBand && std::abs(p.r - d.inner_radius) <= kParamTol;
        if (!outer && !inner)
            throw InvalidArgument("point r=" + std::to_string(p.r) + " is not on sigma");
        tangent = unit(j.u_t);
        curvature = reject(j.u_tt, tangent) / j.u_t.squaredNorm();
        conormal = unit(reject(j.u_r, tangent));
        if (inner) conormal = -conormal;
    } else {
        if (!d.has_gamma()) throw InvalidArgument("surface face has no junction boundary");
        const bool at_zero = std::abs(p.theta) <= kParamTol;
        const bool at_pi = std::abs(p.theta - kPi) <= kParamTol;
        if (!at_zero && !at_pi)
            throw InvalidArgument("point theta=" + std::to_string(p.theta) + " is not on gamma");
        const Vec3 t = unit(j.u_r);
        curvature = reject(j.u_rr, t) / j.u_r.squaredNorm();
        tangent = at_zero ? t : Vec3(-t);
        conormal = unit(reject(j.u_t, t));
        if (at_zero) conormal = -conormal;
    }
    const Mat3& R = im.rotation();
    bf.conormal = R * conormal;
    bf.tangent = R * tangent;
    bf.curvature = R * curvature;
    bf.geodesic_curvature = curvature.dot(conormal);
    bf.curvature_dot_conormal = bf.geodesic_curvature;
    return bf;
}

YStructureReport check_y_structure(const YSurfaceSpec& spec, int samples)
{
    YStructureReport rep;
    samples = std::max(samples, 2);

    for (int f = 0; f < spec.face_count(); ++f) {
        const FaceImmersion im(spec, f);
        const FaceDomain& d = im.domain();
        std::vector<double> radii{1.0};
        if (d.kind == DomainKind::AnnulusBand) radii.push_back(d.inner_radius);
        for (double rb : radii) {
            for (int k = 0; k <= samples; ++k) {
                const double theta = d.theta_span() * k / samples;
                const PolarPoint p{rb, theta};
                const Vec3 u = im.jet(rb, theta).u;
                const BoundaryFrame bf = boundary_frame(spec, f, p, BoundaryPart::Sigma);
                rep.sigma_radius = std::max(rep.sigma_radius, std::abs(u.norm() - 1.0));
                rep.sigma_parallel = std::max(rep.sigma_parallel, bf.conormal.cross(u).norm());
            }
        }
    }

    if (!spec.has_junction) return rep;

    double tau_max = 0.0;
    double normal_max = 0.0;
    double kappa_max = 0.0;
    for (double theta : {0.0, kPi}) {
        for (int i = 1; i <= samples; ++i) {
            const PolarPoint p{static_cast<double>(i) / samples, theta};
            Vec3 tau_sum = Vec3::Zero();
            Vec3 normal_sum = Vec3::Zero();
            double kappa_sum = 0.0;
            for (int f = 0; f < spec.face_count(); ++f) {
                const BoundaryFrame bf = boundary_frame(spec, f, p, BoundaryPart::Gamma);
                tau_sum += bf.conormal;
                kappa_sum += bf.geodesic_curvature;
                normal_sum += evaluate_frame(spec, f, p).normal;
            }
            tau_max = std::max(tau_max, tau_sum.norm());
            normal_max = std::max(normal_max, normal_sum.norm());
            kappa_max = std::max(kappa_max, std::abs(kappa_sum));
        }
    }
    rep.conormal_sum = tau_max;
    rep.normal_sum = normal_max;
    rep.curvature_sum = kappa_max;
    return rep;
}

} // namespace yindex
