#include "yindex/mesh.hpp"

#include "yindex/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <utility>

namespace yindex {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMinAngleDeg = 20.0;
constexpr double kJunctionTol = 1e-9;

using EdgeKey = std::pair<int, int>;

EdgeKey key(int a, int b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

void check_budget(std::size_t estimate, const MeshOptions& opts)
{
    if (estimate > opts.max_vertices)
        throw MeshError("mesh would need " + std::to_string(estimate) + " vertices, over the node budget of " +
                        std::to_string(opts.max_vertices));
}

double outer_radius_of(const FaceMesh& m, int v)
{
    const double r = m.vertices[static_cast<std::size_t>(v)].norm();
    if (m.domain.kind == DomainKind::AnnulusBand &&
        std::abs(r - m.domain.inner_radius) < std::abs(r - 1.0))
        return m.domain.inner_radius;
    return 1.0;
}

/// Half-disk (3 sectors) or full disk (6 sectors) with rings at the given radii.
FaceMesh mesh_sectors(const FaceDomain& domain, const std::vector<double>& radii)
{
    const bool half = domain.kind == DomainKind::HalfDisk;
    const int sectors = half ? 3 : 6;
    const int rings = static_cast<int>(radii.size()) - 1;

    FaceMesh m;
    m.domain = domain;
    // ring_start[i] is the index of node m = 0 on ring i.
    std::vector<int> ring_start(static_cast<std::size_t>(rings + 1));
    m.vertices.emplace_back(0.0, 0.0);
    m.vertex_tags.push_back(half ? VertexTag::Gamma : VertexTag::Interior);
    ring_start[0] = 0;
    for (int i = 1; i <= rings; ++i) {
        ring_start[static_cast<std::size_t>(i)] = m.vertex_count();
        const int segs = sectors * i;
        const int count = half ? segs + 1 : segs;
        const double r = radii[static_cast<std::size_t>(i)];
        for (int k = 0; k < count; ++k) {
            Vec2 p;
            if (half && k == 0)
                p = Vec2(r, 0.0);
            else if (half && k == segs)
                p = Vec2(-r, 0.0);
            else {
                const double theta = (half ? kPi : 2.0 * kPi) * k / segs;
                p = Vec2(r * std::cos(theta), r * std::sin(theta));
            }
            m.vertices.push_back(p);
            const bool ray = half && (k == 0 || k == segs);
            VertexTag tag = VertexTag::Interior;
            if (i == rings)
                tag = ray ? VertexTag::Corner : VertexTag::Sigma;
            else if (ray)
                tag = VertexTag::Gamma;
            m.vertex_tags.push_back(tag);
        }
    }

    auto node = [&](int i, int k) {
        if (i == 0) return 0;
        const int segs = sectors * i;
        if (!half) k = ((k % segs) + segs) % segs;
        return ring_start[static_cast<std::size_t>(i)] + k;
    };

    for (int i = 1; i <= rings; ++i) {
        for (int s = 0; s < sectors; ++s) {
            for (int t = 0; t < i; ++t)
                m.triangles.push_back({node(i, s * i + t), node(i, s * i + t + 1), node(i - 1, s * (i - 1) + t)});
            for (int t = 0; t + 1 < i; ++t)
                m.triangles.push_back(
                    {node(i - 1, s * (i - 1) + t), node(i, s * i + t + 1), node(i - 1, s * (i - 1) + t + 1)});
        }
    }

    const int outer_segs = sectors * rings;
    for (int k = 0; k < outer_segs; ++k) m.boundary_edges.push_back({node(rings, k), node(rings, k + 1), EdgeTag::Sigma});
    if (half) {
        for (int i = 0; i < rings; ++i) {
            m.boundary_edges.push_back({node(i, 0), node(i + 1, 0), EdgeTag::Gamma});
            m.boundary_edges.push_back({node(i, sectors * i), node(i + 1, sectors * (i + 1)), EdgeTag::Gamma});
        }
    }

    double h = 0.0;
    for (int i = 0; i < rings; ++i)
        h = std::max(h, radii[static_cast<std::size_t>(i + 1)] - radii[static_cast<std::size_t>(i)]);
    m.h = h;
    return m;
}

FaceMesh mesh_annulus(const FaceDomain& domain, double h)
{
    const double r0 = domain.inner_radius;
    const int rings = std::max(1, static_cast<int>(std::ceil((1.0 - r0) / h - 1e-9)));
    const int segs = std::max(12, static_cast<int>(std::ceil(2.0 * kPi / h - 1e-9)));

    FaceMesh m;
    m.domain = domain;
    for (int i = 0; i <= rings; ++i) {
        const double r = r0 + (1.0 - r0) * i / rings;
        for (int k = 0; k < segs; ++k) {
            const double theta = 2.0 * kPi * k / segs;
            m.vertices.emplace_back(r * std::cos(theta), r * std::sin(theta));
            m.vertex_tags.push_back(i == 0 || i == rings ? VertexTag::Sigma : VertexTag::Interior);
        }
    }
    auto node = [&](int i, int k) { return i * segs + (k % segs); };
    for (int i = 0; i < rings; ++i) {
        for (int k = 0; k < segs; ++k) {
            m.triangles.push_back({node(i, k), node(i + 1, k + 1), node(i, k + 1)});
            m.triangles.push_back({node(i, k), node(i + 1, k), node(i + 1, k + 1)});
        }
    }
    for (int k = 0; k < segs; ++k) {
        m.boundary_edges.push_back({node(0, k + 1), node(0, k), EdgeTag::Sigma});
        m.boundary_edges.push_back({node(rings, k), node(rings, k + 1), EdgeTag::Sigma});
    }
    m.h = (1.0 - r0) / rings;
    return m;
}

} // namespace

std::string to_string(VertexTag tag)
{
    switch (tag) {
    case VertexTag::Interior: return "interior";
    case VertexTag::Sigma: return "sigma";
    case VertexTag::Gamma: return "gamma";
    case VertexTag::Corner: return "corner";
    }
    return "unknown";
}

std::string to_string(EdgeTag tag) { return tag == EdgeTag::Sigma ? "sigma" : "gamma"; }

int FaceMesh::gamma_vertex_count() const
{
    return static_cast<int>(std::count_if(vertex_tags.begin(), vertex_tags.end(), [](VertexTag t) {
        return t == VertexTag::Gamma || t == VertexTag::Corner;
    }));
}

bool FaceMesh::on_sigma(int v) const
{
    const auto t = vertex_tags[static_cast<std::size_t>(v)];
    return t == VertexTag::Sigma || t == VertexTag::Corner;
}

bool FaceMesh::on_gamma(int v) const
{
    const auto t = vertex_tags[static_cast<std::size_t>(v)];
    return t == VertexTag::Gamma || t == VertexTag::Corner;
}

FaceMesh mesh_face(const FaceDomain& domain, double h, const std::optional<std::vector<double>>& gamma_nodes,
                   const MeshOptions& opts)
{
    if (!(h > 0.0 && h < 1.0)) throw MeshError("mesh size h must lie in (0, 1), got " + std::to_string(h));

    FaceMesh m;
    switch (domain.kind) {
    case DomainKind::HalfDisk:
    case DomainKind::FullDisk: {
        std::vector<double> radii;
        if (gamma_nodes) {
            if (domain.kind != DomainKind::HalfDisk) throw MeshError("gamma_nodes given for a domain without gamma");
            radii = *gamma_nodes;
            if (radii.size() < 2 || radii.front() != 0.0 || radii.back() != 1.0)
                throw MeshError("degenerate gamma_nodes: must start at r = 0 and end at r = 1");
            for (std::size_t i = 1; i < radii.size(); ++i)
                if (!(radii[i] > radii[i - 1])) throw MeshError("degenerate gamma_nodes: radii must be strictly increasing");
        } else {
            const int rings = static_cast<int>(std::ceil(1.0 / h - 1e-9));
            for (int i = 0; i <= rings; ++i) radii.push_back(static_cast<double>(i) / rings);
        }
        const std::size_t n = radii.size() - 1;
        const std::size_t sectors = domain.kind == DomainKind::HalfDisk ? 3 : 6;
        check_budget(1 + sectors * n * (n + 1) / 2 + n, opts);
        m = mesh_sectors(domain, radii);
        break;
    }
    case DomainKind::AnnulusBand: {
        if (!(domain.inner_radius > 0.0 && domain.inner_radius < 1.0))
            throw MeshError("annulus inner radius must lie in (0, 1)");
        if (gamma_nodes) throw MeshError("gamma_nodes given for a domain without gamma");
        const double rings = std::ceil((1.0 - domain.inner_radius) / h);
        const double segs = std::ceil(2.0 * kPi / h);
        check_budget(static_cast<std::size_t>((rings + 1) * segs), opts);
        m = mesh_annulus(domain, h);
        break;
    }
    }
    validate(m);
    return m;
}

FaceMesh refine(const FaceMesh& mesh, const MeshOptions& opts)
{
    check_budget(mesh.vertices.size() * 4, opts);

    FaceMesh out;
    out.domain = mesh.domain;
    out.vertices = mesh.vertices;
    out.vertex_tags = mesh.vertex_tags;
    out.h = mesh.h / 2.0;

    std::map<EdgeKey, EdgeTag> boundary;
    for (const auto& e : mesh.boundary_edges) boundary[key(e.a, e.b)] = e.tag;

    std::map<EdgeKey, int> midpoint;
    auto mid = [&](int a, int b) {
        const EdgeKey k = key(a, b);
        if (auto it = midpoint.find(k); it != midpoint.end()) return it->second;
        Vec2 p = 0.5 * (mesh.vertices[static_cast<std::size_t>(a)] + mesh.vertices[static_cast<std::size_t>(b)]);
        VertexTag tag = VertexTag::Interior;
        if (auto bt = boundary.find(k); bt != boundary.end()) {
            if (bt->second == EdgeTag::Sigma) {
                p *= outer_radius_of(mesh, a) / p.norm();
                tag = VertexTag::Sigma;
            } else {
                p.y() = 0.0;
                tag = VertexTag::Gamma;
            }
        }
        const int id = static_cast<int>(out.vertices.size());
        out.vertices.push_back(p);
        out.vertex_tags.push_back(tag);
        midpoint.emplace(k, id);
        return id;
    };

    for (const auto& t : mesh.triangles) {
        const int ab = mid(t[0], t[1]);
        const int bc = mid(t[1], t[2]);
        const int ca = mid(t[2], t[0]);
        out.triangles.push_back({t[0], ab, ca});
        out.triangles.push_back({ab, t[1], bc});
        out.triangles.push_back({ca, bc, t[2]});
        out.triangles.push_back({ab, bc, ca});
    }
    for (const auto& e : mesh.boundary_edges) {
        const int c = midpoint.at(key(e.a, e.b));
        out.boundary_edges.push_back({e.a, c, e.tag});
        out.boundary_edges.push_back({c, e.b, e.tag});
    }
    validate(out);
    return out;
}

double min_angle_deg(const FaceMesh& mesh)
{
    double best = 180.0;
    for (const auto& t : mesh.triangles) {
        for (int k = 0; k < 3; ++k) {
            const Vec2& p = mesh.vertices[static_cast<std::size_t>(t[static_cast<std::size_t>(k)])];
            const Vec2 u = mesh.vertices[static_cast<std::size_t>(t[static_cast<std::size_t>((k + 1) % 3)])] - p;
            const Vec2 w = mesh.vertices[static_cast<std::size_t>(t[static_cast<std::size_t>((k + 2) % 3)])] - p;
            const double c = std::clamp(u.dot(w) / (u.norm() * w.norm()), -1.0, 1.0);
            best = std::min(best, std::acos(c) * 180.0 / kPi);
        }
    }
    return best;
}

void validate(const FaceMesh& m)
{
    const int nv = m.vertex_count();
    if (static_cast<int>(m.vertex_tags.size()) != nv) throw MeshError("vertex tag count differs from vertex count");

    std::map<EdgeKey, int> edge_use;
    for (const auto& t : m.triangles) {
        for (int v : t)
            if (v < 0 || v >= nv) throw MeshError("triangle references vertex " + std::to_string(v) + " out of range");
        const Vec2& a = m.vertices[static_cast<std::size_t>(t[0])];
        const Vec2& b = m.vertices[static_cast<std::size_t>(t[1])];
        const Vec2& c = m.vertices[static_cast<std::size_t>(t[2])];
        const double area2 = (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
        if (!(area2 > 0.0)) throw MeshError("triangle with non-positive orientation");
        for (int k = 0; k < 3; ++k) ++edge_use[key(t[static_cast<std::size_t>(k)], t[static_cast<std::size_t>((k + 1) % 3)])];
    }

    std::map<EdgeKey, int> tagged;
    for (const auto& e : m.boundary_edges) {
        if (++tagged[key(e.a, e.b)] > 1) throw MeshError("boundary edge carries more than one tag");
        auto it = edge_use.find(key(e.a, e.b));
        if (it == edge_use.end() || it->second != 1) throw MeshError("tagged edge is not a boundary edge");
        for (int v : {e.a, e.b}) {
            const bool ok = e.tag == EdgeTag::Sigma ? m.on_sigma(v) : m.on_gamma(v);
            if (!ok) throw MeshError("boundary edge endpoint " + std::to_string(v) + " has an inconsistent vertex tag");
        }
    }
    for (const auto& [k, uses] : edge_use) {
        if (uses > 2) throw MeshError("non-manifold edge");
        if (uses == 1 && !tagged.count(k)) throw MeshError("untagged boundary edge");
    }

    const long euler = static_cast<long>(nv) - static_cast<long>(edge_use.size()) + static_cast<long>(m.triangles.size());
    const long expected = m.domain.kind == DomainKind::AnnulusBand ? 0 : 1;
    if (euler != expected)
        throw MeshError("Euler characteristic " + std::to_string(euler) + " differs from " + std::to_string(expected));

    for (int v = 0; v < nv; ++v) {
        const Vec2& p = m.vertices[static_cast<std::size_t>(v)];
        if (m.on_sigma(v)) {
            const double radius = outer_radius_of(m, v);
            if (std::abs(p.norm() - radius) > 1e-12) throw MeshError("sigma vertex " + std::to_string(v) + " is off its circle");
        }
        if (m.on_gamma(v) && p.y() != 0.0) throw MeshError("gamma vertex " + std::to_string(v) + " is off the diameter");
    }

    if (min_angle_deg(m) < kMinAngleDeg) throw MeshError("minimum triangle angle below 20 degrees");
}

int YMesh::dof_count() const
{
    int n = 0;
    for (const auto& f : faces) n += f.vertex_count();
    return n;
}

YMesh make_ymesh(std::vector<FaceMesh> faces)
{
    YMesh y;
    y.faces = std::move(faces);
    int offset = 0;
    for (const auto& f : y.faces) {
        y.dof_offset.push_back(offset);
        offset += f.vertex_count();
        y.h = std::max(y.h, f.h);
    }

    if (y.faces.size() == 3 && y.faces[0].domain.has_gamma()) {
        std::array<std::vector<int>, 3> lists;
        for (std::size_t j = 0; j < 3; ++j) {
            const auto& f = y.faces[j];
            for (int v = 0; v < f.vertex_count(); ++v)
                if (f.on_gamma(v)) lists[j].push_back(v);
            std::stable_sort(lists[j].begin(), lists[j].end(), [&](int a, int b) {
                return f.vertices[static_cast<std::size_t>(a)].x() < f.vertices[static_cast<std::size_t>(b)].x();
            });
        }
        if (lists[0].size() != lists[1].size() || lists[0].size() != lists[2].size())
            throw MeshError("faces carry different numbers of junction vertices");
        for (std::size_t g = 0; g < lists[0].size(); ++g) y.junction.push_back({lists[0][g], lists[1][g], lists[2][g]});
    }
    return y;
}

YMesh build_ymesh(const YSurfaceSpec& spec, double h, const MeshOptions& opts)
{
    std::vector<FaceMesh> faces;
    if (spec.has_junction) {
        // Junction discretization generated once and shared by every face.
        const int rings = static_cast<int>(std::ceil(1.0 / h - 1e-9));
        std::vector<double> gamma;
        for (int i = 0; i <= rings; ++i) gamma.push_back(static_cast<double>(i) / rings);
        for (const auto& f : spec.faces) faces.push_back(mesh_face(f.domain, h, gamma, opts));
    } else {
        for (const auto& f : spec.faces) faces.push_back(mesh_face(f.domain, h, std::nullopt, opts));
    }
    YMesh y = make_ymesh(std::move(faces));
    validate(y);
    return y;
}

YMesh refine(const YMesh& mesh, const MeshOptions& opts)
{
    std::vector<FaceMesh> faces;
    for (const auto& f : mesh.faces) faces.push_back(refine(f, opts));
    YMesh y = make_ymesh(std::move(faces));
    validate(y);
    return y;
}

void validate(const YMesh& y)
{
    for (const auto& f : y.faces) validate(f);
    if (y.dof_offset.size() != y.faces.size()) throw MeshError("dof offsets do not match face count");

    std::vector<std::vector<int>> seen(y.faces.size());
    for (std::size_t j = 0; j < y.faces.size(); ++j) seen[j].assign(static_cast<std::size_t>(y.faces[j].vertex_count()), 0);
    for (const auto& triple : y.junction) {
        if (y.faces.size() != 3) throw MeshError("junction map present on a surface without three faces");
        const Vec2& ref = y.faces[0].vertices[static_cast<std::size_t>(triple[0])];
        for (std::size_t j = 0; j < 3; ++j) {
            const int v = triple[j];
            if (v < 0 || v >= y.faces[j].vertex_count()) throw MeshError("junction map references a missing vertex");
            if (!y.faces[j].on_gamma(v)) throw MeshError("junction map references a non-gamma vertex");
            ++seen[j][static_cast<std::size_t>(v)];
            const Vec2& p = y.faces[j].vertices[static_cast<std::size_t>(v)];
            if ((p - ref).norm() > kJunctionTol)
                throw MeshError("junction node coordinates disagree across faces (face " + std::to_string(j + 1) +
                                ", vertex " + std::to_string(v) + ")");
        }
    }
    for (std::size_t j = 0; j < y.faces.size(); ++j) {
        for (int v = 0; v < y.faces[j].vertex_count(); ++v) {
            const int count = seen[j][static_cast<std::size_t>(v)];
            const bool gamma = y.faces[j].on_gamma(v);
            if (gamma && y.faces.size() == 3 && count != 1)
                throw MeshError("gamma vertex " + std::to_string(v) + " of face " + std::to_string(j + 1) +
                                " is not in exactly one junction triple");
        }
    }
}

} // namespace yindex
