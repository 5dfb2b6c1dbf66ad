#pragma once

// Perturbed Y-configurations used to exercise the certificate checks.

#include "yindex/hopf.hpp"

#include <cmath>
#include <vector>

namespace yindex::testing {

inline PolarJet rotate(const Mat3& q, PolarJet j)
{
    for (Vec3* v : {&j.u, &j.u_r, &j.u_t, &j.u_rr, &j.u_rt, &j.u_tt}) *v = q * *v;
    return j;
}

inline PolarJet planar_jet(double r, double t)
{
    const double c = std::cos(t), s = std::sin(t);
    PolarJet j;
    j.u = {r * c, r * s, 0};
    j.u_r = {c, s, 0};
    j.u_t = {-r * s, r * c, 0};
    j.u_rr = Vec3::Zero();
    j.u_rt = {-s, c, 0};
    j.u_tt = {-r * c, -r * s, 0};
    return j;
}

/// Face rotated about the junction while its radial lines twist out of the
/// face plane: the boundary meets the sphere at angle atan(k) off orthogonal.
inline PolarJet twisted_jet(double r, double t, double k)
{
    const double c = std::cos(t), s = std::sin(t);
    const double C = std::cos(k * r), S = std::sin(k * r);
    PolarJet j;
    j.u = {r * c, r * s * C, r * s * S};
    j.u_r = {c, s * (C - k * r * S), s * (S + k * r * C)};
    j.u_t = {-r * s, r * c * C, r * c * S};
    j.u_rr = {0, s * (-2 * k * S - k * k * r * C), s * (2 * k * C - k * k * r * S)};
    j.u_rt = {-s, c * (C - k * r * S), c * (S + k * r * C)};
    j.u_tt = {-r * c, -r * s * C, -r * s * S};
    return j;
}

/// Face 1 bent onto a cylinder of radius R: every point keeps |u| = r, so the
/// boundary stays on the sphere, but it is no longer a great circle.
inline PolarJet bent_jet(double r, double t, double R)
{
    const double c = std::cos(t), s = std::sin(t);
    const double rho = r * s;
    const double w = rho / (2 * R);
    const double phi = 2 * std::asin(w);
    const double d1 = 1.0 / (R * std::sqrt(1 - w * w));
    const double d2 = w / (2 * R * R) * std::pow(1 - w * w, -1.5);
    const double y1 = R * std::cos(phi) * d1, y2 = R * (-std::sin(phi) * d1 * d1 + std::cos(phi) * d2);
    const double z1 = R * std::sin(phi) * d1, z2 = R * (std::cos(phi) * d1 * d1 + std::sin(phi) * d2);
    PolarJet j;
    j.u = {r * c, R * std::sin(phi), R * (1 - std::cos(phi))};
    j.u_r = {c, y1 * s, z1 * s};
    j.u_t = {-r * s, y1 * r * c, z1 * r * c};
    j.u_rr = {0, y2 * s * s, z2 * s * s};
    j.u_rt = {-s, y2 * s * r * c + y1 * c, z2 * s * r * c + z1 * c};
    j.u_tt = {-r * c, y2 * r * r * c * c - y1 * r * s, z2 * r * r * c * c - z1 * r * s};
    return j;
}

/// Radial reparametrization r -> r^2 of the flat face: same image, not conformal.
inline PolarJet squared_radius_jet(double r, double t)
{
    const double c = std::cos(t), s = std::sin(t);
    PolarJet j;
    j.u = {r * r * c, r * r * s, 0};
    j.u_r = {2 * r * c, 2 * r * s, 0};
    j.u_t = {-r * r * s, r * r * c, 0};
    j.u_rr = {2 * c, 2 * s, 0};
    j.u_rt = {-2 * r * s, 2 * r * c, 0};
    j.u_tt = {-r * r * c, -r * r * s, 0};
    return j;
}

inline std::vector<JetFn> y_faces(const std::vector<JetFn>& local, const Mat3& gauge = Mat3::Identity())
{
    std::vector<JetFn> out;
    const double angles[3] = {0.0, 120.0, -120.0};
    for (int j = 0; j < 3; ++j) {
        const Mat3 q = gauge * rotation_about_junction(angles[j]);
        JetFn f = local[static_cast<std::size_t>(j)];
        out.emplace_back([q, f](double r, double t) { return rotate(q, f(r, t)); });
    }
    return out;
}

inline std::vector<JetFn> flat_faces(const Mat3& gauge = Mat3::Identity())
{
    return y_faces({planar_jet, planar_jet, planar_jet}, gauge);
}

inline std::vector<JetFn> twisted_faces(double tilt_rad)
{
    const double k = std::tan(tilt_rad);
    JetFn f = [k](double r, double t) { return twisted_jet(r, t, k); };
    return y_faces({f, f, f});
}

inline std::vector<JetFn> bent_faces(double R = 1.0)
{
    JetFn f = [R](double r, double t) { return bent_jet(r, t, R); };
    return y_faces({f, planar_jet, planar_jet});
}

inline std::vector<JetFn> squared_radius_faces()
{
    return y_faces({squared_radius_jet, squared_radius_jet, squared_radius_jet});
}

inline std::vector<JetFn> imbalanced_faces()
{
    const YSurfaceSpec spec = ycone_with_rotations({0.0, 115.0, 235.0});
    std::vector<JetFn> out;
    for (int j = 0; j < 3; ++j) {
        FaceImmersion im(spec, j);
        out.emplace_back([im](double r, double t) { return im.jet(r, t); });
    }
    return out;
}

} // namespace yindex::testing
