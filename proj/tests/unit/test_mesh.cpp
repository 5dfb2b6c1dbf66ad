#include "yindex/error.hpp"
#include "yindex/io.hpp"
#include "yindex/mesh.hpp"

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

using namespace yindex;

namespace {

int euler_characteristic(const FaceMesh& m)
{
    std::set<std::pair<int, int>> edges;
    for (const auto& t : m.triangles)
        for (int e = 0; e < 3; ++e) {
            const int a = t[static_cast<std::size_t>(e)], b = t[static_cast<std::size_t>((e + 1) % 3)];
            edges.insert({std::min(a, b), std::max(a, b)});
        }
    return m.vertex_count() - static_cast<int>(edges.size()) + m.triangle_count();
}

const FaceDomain half{DomainKind::HalfDisk, 0.0};
const FaceDomain full{DomainKind::FullDisk, 0.0};

} // namespace

TEST_SUITE("mesh") {

TEST_CASE("topology of each domain kind")
{
    for (double h : {0.5, 0.2, 0.1}) {
        CHECK(euler_characteristic(mesh_face(half, h)) == 1);
        CHECK(euler_characteristic(mesh_face(full, h)) == 1);
        CHECK(euler_characteristic(mesh_face(FaceDomain{DomainKind::AnnulusBand, 0.5}, h)) == 0);
    }
}

TEST_CASE("junction node counts")
{
    const auto m = mesh_face(half, 0.1);
    CHECK(m.gamma_vertex_count() == 21);
    CHECK(mesh_face(full, 0.25).gamma_vertex_count() == 0);

    const auto y = build_ymesh(canonical_surface("ycone"), 0.1);
    CHECK(y.face_count() == 3);
    CHECK(y.junction_count() == 21);
    CHECK(build_ymesh(canonical_surface("equatorial-disk"), 0.1).junction_count() == 0);
}

TEST_CASE("explicit junction radii")
{
    const std::vector<double> radii{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    const auto m = mesh_face(half, 0.1, radii);
    CHECK(m.gamma_vertex_count() == 21);
    for (int v = 0; v < m.vertex_count(); ++v) {
        if (!m.on_gamma(v)) continue;
        const double r = m.vertices[static_cast<std::size_t>(v)].norm();
        const bool listed = std::any_of(radii.begin(), radii.end(), [&](double x) { return std::abs(x - r) < 1e-14; });
        CHECK(listed);
    }
    CHECK_THROWS(mesh_face(half, 0.1, std::vector<double>{0.0, 0.5, 0.4, 1.0}));
    CHECK_THROWS(mesh_face(full, 0.1, radii));
}

TEST_CASE("faces of a Y-mesh are combinatorially identical")
{
    const auto y = build_ymesh(canonical_surface("ycone"), 0.1);
    for (int j = 1; j < 3; ++j) {
        const auto& a = y.faces[0];
        const auto& b = y.faces[static_cast<std::size_t>(j)];
        CHECK(a.triangles == b.triangles);
        CHECK(a.vertex_tags == b.vertex_tags);
        CHECK(a.vertices == b.vertices);
    }
    for (const auto& t : y.junction) {
        const Vec2 p = y.faces[0].vertices[static_cast<std::size_t>(t[0])];
        for (int j = 1; j < 3; ++j) CHECK(y.faces[static_cast<std::size_t>(j)].vertices[static_cast<std::size_t>(t[static_cast<std::size_t>(j)])] == p);
    }
}

TEST_CASE("perturbed junction node is rejected")
{
    auto y = build_ymesh(canonical_surface("ycone"), 0.1);
    validate(y);
    const int v = y.junction[5][1];
    y.faces[1].vertices[static_cast<std::size_t>(v)].x() += 1e-3;
    CHECK_THROWS_AS(validate(y), MeshError);
}

TEST_CASE("uniform refinement")
{
    const auto y = build_ymesh(canonical_surface("ycone"), 0.2);
    const auto r = refine(y);
    CHECK(r.h == doctest::Approx(0.1));
    CHECK(r.junction_count() == 2 * y.junction_count() - 1);
    for (int j = 0; j < 3; ++j) {
        const auto& f = r.faces[static_cast<std::size_t>(j)];
        CHECK(f.triangle_count() == 4 * y.faces[static_cast<std::size_t>(j)].triangle_count());
        for (int v = 0; v < f.vertex_count(); ++v)
            if (f.on_sigma(v)) CHECK(std::abs(f.vertices[static_cast<std::size_t>(v)].norm() - 1.0) <= 1e-14);
        validate(f);
    }
    validate(r);
    CHECK(euler_characteristic(r.faces[0]) == 1);

    const auto a = refine(mesh_face(FaceDomain{DomainKind::AnnulusBand, 0.5}, 0.2));
    for (int v = 0; v < a.vertex_count(); ++v) {
        if (!a.on_sigma(v)) continue;
        const double n = a.vertices[static_cast<std::size_t>(v)].norm();
        CHECK(std::min(std::abs(n - 1.0), std::abs(n - 0.5)) <= 1e-14);
    }
}

TEST_CASE("triangle quality")
{
    for (double h : {0.2, 0.1, 0.05}) {
        CHECK(min_angle_deg(mesh_face(half, h)) >= 20.0);
        CHECK(min_angle_deg(mesh_face(full, h)) >= 20.0);
    }
    CHECK(min_angle_deg(refine(mesh_face(half, 0.1))) >= 20.0);
}

TEST_CASE("invalid requests")
{
    CHECK_THROWS_AS(mesh_face(half, 0.0), MeshError);
    CHECK_THROWS_AS(mesh_face(half, 1.5), MeshError);
    MeshOptions tiny;
    tiny.max_vertices = 50;
    CHECK_THROWS_AS(mesh_face(half, 0.01, {}, tiny), MeshError);
}

TEST_CASE("JSON round trip is exact")
{
    const auto y = build_ymesh(canonical_surface("ycone"), 0.1);
    const std::string text = to_json(y).dump();
    const YMesh back = mesh_from_json(Json::parse(text));
    CHECK(to_json(back).dump() == text);
    for (int j = 0; j < 3; ++j) CHECK(back.faces[static_cast<std::size_t>(j)].vertices == y.faces[static_cast<std::size_t>(j)].vertices);
    CHECK(back.junction == y.junction);

    Json bad = Json::parse(text);
    bad["faces"][1]["vertices"][static_cast<std::size_t>(y.junction[3][1])][0] = 0.123456;
    CHECK_THROWS_AS(mesh_from_json(bad), InputError);
}

}
