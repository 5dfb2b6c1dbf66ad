#include "yindex/error.hpp"
#include "yindex/geometry.hpp"

#include "doctest.h"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

using namespace yindex;
using doctest::Approx;

namespace {

constexpr double pi = std::numbers::pi;

void check_vec(const Vec3& got, const Vec3& want, double tol)
{
    INFO("got " << got.transpose() << ", want " << want.transpose());
    CHECK((got - want).norm() <= tol);
}

} // namespace

TEST_SUITE("geometry") {

TEST_CASE("ycone face points")
{
    const auto y = canonical_surface("ycone");
    REQUIRE(y.face_count() == 3);
    check_vec(evaluate_frame(y, 0, {1.0, pi / 2}).position, {0, 1, 0}, 1e-15);
    // Face-1 point rotated by 120 degrees about e1.
    check_vec(evaluate_frame(y, 1, {1.0, pi / 2}).position, {0.0, -0.4999999999999998, 0.8660254037844387}, 1e-15);
    const Vec3 p0 = evaluate_frame(y, 0, {0.5, 0.0}).position;
    for (int j = 1; j < 3; ++j) CHECK((evaluate_frame(y, j, {0.5, 0.0}).position - p0).norm() == 0.0);
}

TEST_CASE("frames of flat faces")
{
    const auto y = canonical_surface("ycone");
    CHECK(evaluate_frame(y, 0, {0.5, pi / 4}).second_fundamental_norm2 == 0.0);
    const auto d = canonical_surface("equatorial-disk");
    const Vec3 n = evaluate_frame(d, 0, {0.7, 1.0}).normal;
    CHECK(std::abs(std::abs(n.z()) - 1.0) < 1e-15);
    CHECK(std::hypot(n.x(), n.y()) < 1e-15);
    CHECK_THROWS_AS(evaluate_frame(y, 0, {0.0, 1.0}), SingularPointError);
    CHECK_THROWS_AS(evaluate_frame(y, 3, {0.5, 1.0}), InvalidArgument);
}

TEST_CASE("unknown surfaces and parameters are rejected")
{
    CHECK_THROWS_AS(canonical_surface("torus"), InvalidArgument);
    CHECK_THROWS_AS(canonical_surface("ycone", {{"bogus", 1.0}}), InvalidArgument);
    CHECK_THROWS_AS(canonical_surface("critical-catenoid", {{"param_inner_radius", 1.5}}), InvalidArgument);
}

TEST_CASE("critical catenoid scaling")
{
    CHECK(critical_catenoid_height() == Approx(1.1996786402577338).epsilon(1e-11));
    CHECK(critical_catenoid_scale() == Approx(0.46048508825013391).epsilon(1e-11));
    const auto c = canonical_surface("critical-catenoid");
    // Boundary circles on the unit sphere, conormal radial.
    for (double r : {0.5, 1.0}) {
        for (double t : {0.0, 1.0, 4.0}) {
            const auto f = evaluate_frame(c, 0, {r, t});
            CHECK(std::abs(f.position.norm() - 1.0) < 1e-11);
            const auto b = boundary_frame(c, 0, {r, t}, BoundaryPart::Sigma);
            CHECK((b.conormal - f.position).norm() < 1e-11);
            CHECK(b.curvature_dot_conormal == Approx(-1.0).epsilon(1e-11));
        }
    }
}

TEST_CASE("catenoid |A|^2 matches the closed form and finite differences")
{
    const auto c = canonical_surface("critical-catenoid");
    const auto f = evaluate_frame(c, 0, {0.7, 1.0});
    CHECK(f.second_fundamental_norm2 == Approx(8.4152585445412477).epsilon(1e-12));

    // Second fundamental form from central differences of the position.
    const FaceImmersion im(c, 0);
    auto a2_fd = [&](double step) {
        auto u = [&](double r, double t) { return im.jet(r, t).u; };
        const double r = 0.7, t = 1.0;
        const Vec3 ur = (u(r + step, t) - u(r - step, t)) / (2 * step);
        const Vec3 ut = (u(r, t + step) - u(r, t - step)) / (2 * step);
        const Vec3 urr = (u(r + step, t) - 2 * u(r, t) + u(r - step, t)) / (step * step);
        const Vec3 utt = (u(r, t + step) - 2 * u(r, t) + u(r, t - step)) / (step * step);
        const Vec3 urt = (u(r + step, t + step) - u(r + step, t - step) - u(r - step, t + step) + u(r - step, t - step)) /
                         (4 * step * step);
        const Vec3 nu = ur.cross(ut).normalized();
        Mat2 g, b;
        g << ur.dot(ur), ur.dot(ut), ur.dot(ut), ut.dot(ut);
        b << urr.dot(nu), urt.dot(nu), urt.dot(nu), utt.dot(nu);
        const Mat2 s = g.inverse() * b;
        return (s * s).trace();
    };
    const double e1 = std::abs(a2_fd(1e-2) - f.second_fundamental_norm2);
    const double e2 = std::abs(a2_fd(5e-3) - f.second_fundamental_norm2);
    CHECK(e1 < 1e-2);
    CHECK(e1 / e2 == Approx(4.0).epsilon(0.1));
}

TEST_CASE("boundary frames of the ycone")
{
    const auto y = canonical_surface("ycone");
    const auto b = boundary_frame(y, 0, {1.0, pi / 2}, BoundaryPart::Sigma);
    check_vec(b.conormal, {0, 1, 0}, 1e-15);
    CHECK(b.curvature_dot_conormal == Approx(-1.0).epsilon(1e-14));
    CHECK(boundary_frame(y, 0, {0.5, 0.0}, BoundaryPart::Gamma).geodesic_curvature == 0.0);
    for (double r : {0.25, 0.5, 1.0}) {
        for (double t : {0.0, pi}) {
            Vec3 sum = Vec3::Zero();
            for (int j = 0; j < 3; ++j) sum += boundary_frame(y, j, {r, t}, BoundaryPart::Gamma).conormal;
            CHECK(sum.norm() < 1e-15);
        }
    }
    CHECK_THROWS_AS(boundary_frame(y, 0, {0.5, 1.0}, BoundaryPart::Sigma), InvalidArgument);
    CHECK_THROWS_AS(boundary_frame(y, 0, {0.5, 1.0}, BoundaryPart::Gamma), InvalidArgument);
}

TEST_CASE("boundary frame invariants on every canonical surface")
{
    for (const char* name : {"ycone", "equatorial-disk", "critical-catenoid"}) {
        const auto s = canonical_surface(name);
        for (int j = 0; j < s.face_count(); ++j) {
            const auto& dom = s.faces[static_cast<std::size_t>(j)].domain;
            for (int k = 0; k <= 16; ++k) {
                const double t = dom.theta_span() * k / 16.0;
                if (dom.kind != DomainKind::HalfDisk && k == 16) continue;
                const auto b = boundary_frame(s, j, {1.0, t}, BoundaryPart::Sigma);
                CHECK(std::abs(b.conormal.norm() - 1.0) < 1e-12);
                CHECK(std::abs(b.conormal.dot(b.tangent)) < 1e-12);
                CHECK(std::abs(b.conormal.dot(evaluate_frame(s, j, {1.0, t}).normal)) < 1e-12);
                CHECK(std::abs(evaluate_frame(s, j, {1.0, t}).position.norm() - 1.0) < 1e-12);
            }
            if (dom.has_gamma()) {
                for (double r : {0.1, 0.5, 0.9}) {
                    const auto b = boundary_frame(s, j, {r, pi}, BoundaryPart::Gamma);
                    CHECK(std::abs(b.conormal.norm() - 1.0) < 1e-12);
                    CHECK(std::abs(b.conormal.dot(b.tangent)) < 1e-12);
                }
            }
        }
    }
}

TEST_CASE("faces are rotations of face 1")
{
    const auto y = canonical_surface("ycone");
    for (int j = 1; j < 3; ++j) {
        const Mat3 q = rotation_about_junction(120.0 * j);
        for (double r : {0.3, 0.8})
            for (double t : {0.2, 1.3, 2.9}) {
                const auto f1 = evaluate_frame(y, 0, {r, t});
                const auto fj = evaluate_frame(y, j, {r, t});
                CHECK((fj.position - q * f1.position).norm() < 1e-12);
                CHECK((fj.tangent_r - q * f1.tangent_r).norm() < 1e-12);
                CHECK((fj.tangent_theta - q * f1.tangent_theta).norm() < 1e-12);
                CHECK((fj.normal - q * f1.normal).norm() < 1e-12);
                CHECK((fj.metric - f1.metric).norm() < 1e-12);
            }
    }
}

TEST_CASE("normals sum to zero along the junction")
{
    const auto y = canonical_surface("ycone");
    for (double r : {0.1, 0.5, 1.0})
        for (double t : {0.0, pi}) {
            Vec3 sum = Vec3::Zero();
            for (int j = 0; j < 3; ++j) sum += evaluate_frame(y, j, {r, t}).normal;
            CHECK(sum.norm() < 1e-15);
        }
}

TEST_CASE("Y-structure report")
{
    const auto y = check_y_structure(canonical_surface("ycone"));
    REQUIRE(y.conormal_sum);
    CHECK(*y.conormal_sum <= 1e-14);
    CHECK(*y.normal_sum <= 1e-14);
    CHECK(*y.curvature_sum <= 1e-14);
    CHECK(y.sigma_radius <= 1e-14);
    CHECK(y.sigma_parallel <= 1e-14);

    const auto tilted = check_y_structure(ycone_with_rotations({0.0, 120.0, -119.0}));
    CHECK(*tilted.conormal_sum == Approx(0.01745307099674808).epsilon(1e-12));

    const auto d = check_y_structure(canonical_surface("equatorial-disk"));
    CHECK_FALSE(d.conormal_sum.has_value());
    CHECK_FALSE(d.normal_sum.has_value());
    CHECK(d.sigma_radius <= 1e-14);
    CHECK(d.sigma_parallel <= 1e-14);
}

}
