#pragma once

// Structured polar triangulations of face parameter domains.
//
// The half-disk is meshed as a half-hexagon of three sectors: ring i (radius
// r_i) carries 3i segments, so ring spacing and arc spacing stay comparable
// and every triangle is close to equilateral. The full disk uses six sectors
// (6i segments per ring); the annulus band uses a fixed number of segments per
// ring. Vertex coordinates are Cartesian points x = r cos(theta),
// y = r sin(theta) of the parameter domain.

#include "yindex/geometry.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace yindex {

enum class VertexTag { Interior, Sigma, Gamma, Corner };
enum class EdgeTag { Sigma, Gamma };

std::string to_string(VertexTag tag);
std::string to_string(EdgeTag tag);

struct BoundaryEdge {
    int a = 0;
    int b = 0;
    EdgeTag tag = EdgeTag::Sigma;
};

struct FaceMesh {
    FaceDomain domain;
    std::vector<Vec2> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::vector<BoundaryEdge> boundary_edges;
    std::vector<VertexTag> vertex_tags;
    double h = 0.0;

    [[nodiscard]] int vertex_count() const { return static_cast<int>(vertices.size()); }
    [[nodiscard]] int triangle_count() const { return static_cast<int>(triangles.size()); }
    /// Number of vertices tagged Gamma or Corner.
    [[nodiscard]] int gamma_vertex_count() const;
    [[nodiscard]] bool on_sigma(int v) const;
    [[nodiscard]] bool on_gamma(int v) const;
};

struct MeshOptions {
    std::size_t max_vertices = 2'000'000;
};

/// Triangulates a face domain with nominal ring spacing h.
///
/// When gamma_nodes is given (half-disk only) it lists the radii of the
/// junction nodes on each ray, starting at 0 and ending at 1; the rings of
/// the mesh are placed at exactly those radii.
FaceMesh mesh_face(const FaceDomain& domain, double h, const std::optional<std::vector<double>>& gamma_nodes = {},
                   const MeshOptions& opts = {});

/// Uniform refinement: each triangle is split in four; sigma midpoints are
/// projected back onto their circle.
FaceMesh refine(const FaceMesh& mesh, const MeshOptions& opts = {});

/// Throws MeshError naming the first violated invariant.
void validate(const FaceMesh& mesh);

/// Minimum interior angle over all triangles, in degrees.
double min_angle_deg(const FaceMesh& mesh);

/// The discrete triple junction surface: one mesh per face plus the junction
/// identification. Junction node g sits at vertex junction[g][j] of face j.
/// Degrees of freedom are numbered face by face; junction values stay
/// independent per face (compatibility is a constraint, not a merge).
struct YMesh {
    std::vector<FaceMesh> faces;
    std::vector<std::array<int, 3>> junction;
    std::vector<int> dof_offset;
    double h = 0.0;

    [[nodiscard]] int face_count() const { return static_cast<int>(faces.size()); }
    [[nodiscard]] int dof_count() const;
    [[nodiscard]] int dof(int face, int vertex) const { return dof_offset[static_cast<std::size_t>(face)] + vertex; }
    [[nodiscard]] int junction_count() const { return static_cast<int>(junction.size()); }
};

YMesh build_ymesh(const YSurfaceSpec& spec, double h, const MeshOptions& opts = {});
YMesh refine(const YMesh& mesh, const MeshOptions& opts = {});

/// Assembles a YMesh from face meshes: recomputes offsets and the junction map
/// (junction vertices matched by their position along the diameter).
YMesh make_ymesh(std::vector<FaceMesh> faces);

/// Validates every face and the junction identification (tolerance 1e-9).
void validate(const YMesh& mesh);

} // namespace yindex
