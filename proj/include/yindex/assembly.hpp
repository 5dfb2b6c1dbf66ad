#pragma once

// Discrete second variation of area on a triple junction surface.
//
//   Q(f, f) = sum_j  int |grad f_j|^2 - |A|^2 f_j^2
//                  + int_sigma (H . tau) f_j^2 - int_gamma (H . tau) f_j^2
//
// assembled with piecewise-linear elements over the induced metric of the
// immersion (3-point degree-2 rule on triangles, 2-point Gauss on edges).
// Admissible variations satisfy f_1 + f_2 + f_3 = 0 at every junction node;
// the constraint is imposed through an explicit null-space basis Z.

#include "yindex/geometry.hpp"
#include "yindex/mesh.hpp"

#include <Eigen/SparseCore>

#include <iosfwd>
#include <string>

namespace yindex {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

struct QuadFormSet {
    SpMat stiffness;      ///< K: int |grad f|^2
    SpMat potential;      ///< P: int |A|^2 f^2
    SpMat boundary_sigma; ///< B_sigma: int_sigma (H . tau) f^2
    SpMat boundary_gamma; ///< B_gamma: -int_gamma (H . tau) f^2
    SpMat mass;           ///< M: int f^2
    SpMat sigma_mass;     ///< int_sigma f^2 (boundary trace mass)

    [[nodiscard]] Eigen::Index size() const { return stiffness.rows(); }
    /// K - P + B_sigma + B_gamma
    [[nodiscard]] SpMat index_form() const;
};

QuadFormSet assemble_forms(const YMesh& mesh, const YSurfaceSpec& spec);

/// Forms of one face under the given immersion (no junction coupling).
QuadFormSet assemble_face_forms(const FaceMesh& mesh, const FaceImmersion& immersion);

/// Stiffness of one face using the flat parameter-domain metric.
SpMat parameter_stiffness(const FaceMesh& mesh);

struct ConstraintBasis {
    SpMat basis;      ///< Z, n x m, orthonormal columns spanning {C f = 0}
    SpMat constraint; ///< C, one row per junction node
    /// For every column of Z, whether its support touches a sigma vertex.
    std::vector<bool> column_on_sigma;

    [[nodiscard]] Eigen::Index reduced_size() const { return basis.cols(); }
};

/// Non-junction DOFs keep identity columns (in global order); each junction
/// node contributes (1,-1,0)/sqrt(2) and (1,1,-2)/sqrt(6) on its three DOFs.
ConstraintBasis constraint_basis(const YMesh& mesh);

struct ReducedPencil {
    SpMat stiffness; ///< A_r = Z^T (K - P + B_sigma + B_gamma) Z
    SpMat mass;      ///< M_r = Z^T M Z
    SpMat basis;     ///< Z, kept to map reduced vectors back to nodal values
    double h = 0.0;
    std::string surface;

    [[nodiscard]] Eigen::Index size() const { return stiffness.rows(); }
};

ReducedPencil reduce(const QuadFormSet& forms, const ConstraintBasis& z, double h = 0.0, std::string surface = {});

/// f^T (K - P + B_sigma + B_gamma) f
double apply_form(const QuadFormSet& forms, const Vec& f);

/// Nodal interpolant of a function of the parameter point, face by face.
template <class Fn>
Vec interpolate(const YMesh& mesh, Fn&& fn)
{
    Vec f(mesh.dof_count());
    for (int j = 0; j < mesh.face_count(); ++j) {
        const auto& face = mesh.faces[static_cast<std::size_t>(j)];
        for (int v = 0; v < face.vertex_count(); ++v) f[mesh.dof(j, v)] = fn(j, face.vertices[static_cast<std::size_t>(v)]);
    }
    return f;
}

/// Writes "row col value" lines in row-major order, values with 17 digits.
void write_triplets(std::ostream& os, const SpMat& m);

} // namespace yindex
