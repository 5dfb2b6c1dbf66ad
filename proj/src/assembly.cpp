#include "yindex/assembly.hpp"

#include "yindex/error.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <vector>

namespace yindex {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

struct TripletSet {
    Triplets stiffness, potential, boundary_sigma, boundary_gamma, mass, sigma_mass;
};

// 3-point rule, exact for quadratics: barycentric (2/3, 1/6, 1/6) and permutations.
constexpr double kTriBary[3][3] = {{2.0 / 3, 1.0 / 6, 1.0 / 6}, {1.0 / 6, 2.0 / 3, 1.0 / 6}, {1.0 / 6, 1.0 / 6, 2.0 / 3}};

PolarPoint to_polar(const Vec2& p) { return {p.norm(), std::atan2(p.y(), p.x())}; }

/// Jacobian of the immersion with respect to the Cartesian parameter (x, y),
/// from the polar derivatives of the local map.
Eigen::Matrix<double, 3, 2> cartesian_jacobian(const FaceImmersion& im, const Vec2& p)
{
    const PolarPoint q = to_polar(p);
    const PolarJet j = im.local_jet(q.r, q.theta);
    const double c = std::cos(q.theta);
    const double s = std::sin(q.theta);
    Eigen::Matrix<double, 3, 2> J;
    J.col(0) = c * j.u_r - (s / q.r) * j.u_t;
    J.col(1) = s * j.u_r + (c / q.r) * j.u_t;
    return J;
}

double second_fundamental_norm2(const FaceImmersion& im, const Vec2& p)
{
    if (im.is_flat()) return 0.0;
    const PolarPoint q = to_polar(p);
    const PolarJet j = im.local_jet(q.r, q.theta);
    const Vec3 nu = j.u_r.cross(j.u_t).normalized();
    Mat2 g;
    g << j.u_r.dot(j.u_r), j.u_r.dot(j.u_t), j.u_r.dot(j.u_t), j.u_t.dot(j.u_t);
    Mat2 b;
    b << j.u_rr.dot(nu), j.u_rt.dot(nu), j.u_rt.dot(nu), j.u_tt.dot(nu);
    const Mat2 shape = g.inverse() * b;
    return (shape * shape).trace();
}

double boundary_radius(const FaceMesh& mesh, const Vec2& a)
{
    if (mesh.domain.kind == DomainKind::AnnulusBand &&
        std::abs(a.norm() - mesh.domain.inner_radius) < std::abs(a.norm() - 1.0))
        return mesh.domain.inner_radius;
    return 1.0;
}

void assemble_face(const FaceMesh& mesh, const FaceImmersion& im, int offset, TripletSet& out)
{
    for (const auto& tri : mesh.triangles) {
        const Vec2& p0 = mesh.vertices[static_cast<std::size_t>(tri[0])];
        const Vec2& p1 = mesh.vertices[static_cast<std::size_t>(tri[1])];
        const Vec2& p2 = mesh.vertices[static_cast<std::size_t>(tri[2])];
        const double area2 = (p1 - p0).x() * (p2 - p0).y() - (p1 - p0).y() * (p2 - p0).x();
        const double area = 0.5 * area2;

        // Gradients of the barycentric coordinates in parameter space.
        std::array<Vec2, 3> grad;
        const std::array<const Vec2*, 3> pts{&p0, &p1, &p2};
        for (int a = 0; a < 3; ++a) {
            const Vec2& pj = *pts[static_cast<std::size_t>((a + 1) % 3)];
            const Vec2& pk = *pts[static_cast<std::size_t>((a + 2) % 3)];
            grad[static_cast<std::size_t>(a)] = Vec2(pj.y() - pk.y(), pk.x() - pj.x()) / area2;
        }

        Eigen::Matrix3d ke = Eigen::Matrix3d::Zero();
        Eigen::Matrix3d me = Eigen::Matrix3d::Zero();
        Eigen::Matrix3d pe = Eigen::Matrix3d::Zero();
        bool any_curvature = false;
        for (const auto& bary : kTriBary) {
            const Vec2 q = bary[0] * p0 + bary[1] * p1 + bary[2] * p2;
            const auto J = cartesian_jacobian(im, q);
            const Mat2 g = J.transpose() * J;
            const double det = g.determinant();
            if (!(det > 1e-300)) throw AssemblyError("degenerate element metric at parameter point (" +
                                                     std::to_string(q.x()) + ", " + std::to_string(q.y()) + ")");
            const double w = area / 3.0 * std::sqrt(det);
            const Mat2 ginv = g.inverse();
            const double a2 = second_fundamental_norm2(im, q);
            any_curvature = any_curvature || a2 != 0.0;
            for (int a = 0; a < 3; ++a) {
                for (int b = 0; b < 3; ++b) {
                    const double phi = bary[a] * bary[b];
                    ke(a, b) += w * grad[static_cast<std::size_t>(a)].dot(ginv * grad[static_cast<std::size_t>(b)]);
                    me(a, b) += w * phi;
                    pe(a, b) += w * a2 * phi;
                }
            }
        }
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                const int r = offset + tri[static_cast<std::size_t>(a)];
                const int c = offset + tri[static_cast<std::size_t>(b)];
                out.stiffness.emplace_back(r, c, ke(a, b));
                out.mass.emplace_back(r, c, me(a, b));
                if (any_curvature) out.potential.emplace_back(r, c, pe(a, b));
            }
        }
    }

    static const double gauss[2] = {0.5 - 0.5 / std::sqrt(3.0), 0.5 + 0.5 / std::sqrt(3.0)};
    for (const auto& e : mesh.boundary_edges) {
        const Vec2& pa = mesh.vertices[static_cast<std::size_t>(e.a)];
        const Vec2& pb = mesh.vertices[static_cast<std::size_t>(e.b)];
        const double len = (pb - pa).norm();
        const Vec2 t = (pb - pa) / len;
        Eigen::Matrix2d be = Eigen::Matrix2d::Zero();
        Eigen::Matrix2d bm = Eigen::Matrix2d::Zero();
        bool any_coefficient = false;
        for (double s : gauss) {
            const Vec2 q = (1.0 - s) * pa + s * pb;
            const double ds = 0.5 * len * (cartesian_jacobian(im, q) * t).norm();
            double coefficient = 0.0;
            if (e.tag == EdgeTag::Sigma) {
                const PolarPoint on_circle{boundary_radius(mesh, pa), std::atan2(q.y(), q.x())};
                coefficient = boundary_frame(im, on_circle, BoundaryPart::Sigma).curvature_dot_conormal;
            } else {
                const PolarPoint on_ray{std::abs(q.x()), q.x() >= 0.0 ? 0.0 : std::numbers::pi};
                coefficient = -boundary_frame(im, on_ray, BoundaryPart::Gamma).curvature_dot_conormal;
            }
            any_coefficient = any_coefficient || coefficient != 0.0;
            const double phi[2] = {1.0 - s, s};
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    be(a, b) += ds * coefficient * phi[a] * phi[b];
                    bm(a, b) += ds * phi[a] * phi[b];
                }
        }
        const int ids[2] = {offset + e.a, offset + e.b};
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                if (e.tag == EdgeTag::Sigma) {
                    out.sigma_mass.emplace_back(ids[a], ids[b], bm(a, b));
                    if (any_coefficient) out.boundary_sigma.emplace_back(ids[a], ids[b], be(a, b));
                } else if (any_coefficient) {
                    out.boundary_gamma.emplace_back(ids[a], ids[b], be(a, b));
                }
            }
    }
}

SpMat build(Eigen::Index n, const Triplets& t)
{
    SpMat m(n, n);
    m.setFromTriplets(t.begin(), t.end());
    m.prune(0.0);
    m.makeCompressed();
    return m;
}

QuadFormSet finish(Eigen::Index n, const TripletSet& t)
{
    QuadFormSet f;
    f.stiffness = build(n, t.stiffness);
    f.potential = build(n, t.potential);
    f.boundary_sigma = build(n, t.boundary_sigma);
    f.boundary_gamma = build(n, t.boundary_gamma);
    f.mass = build(n, t.mass);
    f.sigma_mass = build(n, t.sigma_mass);
    return f;
}

SpMat symmetrized(const SpMat& a)
{
    SpMat t = a.transpose();
    SpMat s = 0.5 * (a + t);
    s.makeCompressed();
    return s;
}

} // namespace

SpMat QuadFormSet::index_form() const
{
    SpMat a = stiffness - potential + boundary_sigma + boundary_gamma;
    a.makeCompressed();
    return a;
}

QuadFormSet assemble_forms(const YMesh& mesh, const YSurfaceSpec& spec)
{
    if (mesh.face_count() != spec.face_count())
        throw AssemblyError("mesh has " + std::to_string(mesh.face_count()) + " faces but surface '" + spec.name + "' has " +
                            std::to_string(spec.face_count()));
    TripletSet t;
    for (int j = 0; j < mesh.face_count(); ++j) {
        const auto& face = mesh.faces[static_cast<std::size_t>(j)];
        if (face.domain.kind != spec.faces[static_cast<std::size_t>(j)].domain.kind)
            throw AssemblyError("face " + std::to_string(j + 1) + " domain kind differs between mesh and surface");
        assemble_face(face, FaceImmersion(spec, j), mesh.dof_offset[static_cast<std::size_t>(j)], t);
    }
    return finish(mesh.dof_count(), t);
}

QuadFormSet assemble_face_forms(const FaceMesh& mesh, const FaceImmersion& immersion)
{
    TripletSet t;
    assemble_face(mesh, immersion, 0, t);
    return finish(mesh.vertex_count(), t);
}

SpMat parameter_stiffness(const FaceMesh& mesh)
{
    Triplets t;
    for (const auto& tri : mesh.triangles) {
        std::array<Vec2, 3> p;
        for (int a = 0; a < 3; ++a) p[static_cast<std::size_t>(a)] = mesh.vertices[static_cast<std::size_t>(tri[static_cast<std::size_t>(a)])];
        const double area2 = (p[1] - p[0]).x() * (p[2] - p[0]).y() - (p[1] - p[0]).y() * (p[2] - p[0]).x();
        std::array<Vec2, 3> grad;
        for (int a = 0; a < 3; ++a) {
            const Vec2& pj = p[static_cast<std::size_t>((a + 1) % 3)];
            const Vec2& pk = p[static_cast<std::size_t>((a + 2) % 3)];
            grad[static_cast<std::size_t>(a)] = Vec2(pj.y() - pk.y(), pk.x() - pj.x()) / area2;
        }
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                t.emplace_back(tri[static_cast<std::size_t>(a)], tri[static_cast<std::size_t>(b)],
                               0.5 * area2 * grad[static_cast<std::size_t>(a)].dot(grad[static_cast<std::size_t>(b)]));
    }
    return build(mesh.vertex_count(), t);
}

ConstraintBasis constraint_basis(const YMesh& mesh)
{
    const int n = mesh.dof_count();
    std::vector<char> in_junction(static_cast<std::size_t>(n), 0);
    for (const auto& triple : mesh.junction)
        for (int j = 0; j < 3; ++j) in_junction[static_cast<std::size_t>(mesh.dof(j, triple[static_cast<std::size_t>(j)]))] = 1;

    std::vector<bool> dof_on_sigma(static_cast<std::size_t>(n), false);
    for (int j = 0; j < mesh.face_count(); ++j)
        for (int v = 0; v < mesh.faces[static_cast<std::size_t>(j)].vertex_count(); ++v)
            dof_on_sigma[static_cast<std::size_t>(mesh.dof(j, v))] = mesh.faces[static_cast<std::size_t>(j)].on_sigma(v);

    ConstraintBasis cb;
    Triplets z;
    int col = 0;
    for (int d = 0; d < n; ++d) {
        if (in_junction[static_cast<std::size_t>(d)]) continue;
        z.emplace_back(d, col++, 1.0);
        cb.column_on_sigma.push_back(dof_on_sigma[static_cast<std::size_t>(d)]);
    }
    const double a = 1.0 / std::sqrt(2.0);
    const double b = 1.0 / std::sqrt(6.0);
    Triplets c;
    int row = 0;
    for (const auto& triple : mesh.junction) {
        const int d1 = mesh.dof(0, triple[0]);
        const int d2 = mesh.dof(1, triple[1]);
        const int d3 = mesh.dof(2, triple[2]);
        z.emplace_back(d1, col, a);
        z.emplace_back(d2, col, -a);
        ++col;
        z.emplace_back(d1, col, b);
        z.emplace_back(d2, col, b);
        z.emplace_back(d3, col, -2.0 * b);
        ++col;
        const bool sigma = dof_on_sigma[static_cast<std::size_t>(d1)];
        cb.column_on_sigma.push_back(sigma);
        cb.column_on_sigma.push_back(sigma);
        for (int d : {d1, d2, d3}) c.emplace_back(row, d, 1.0);
        ++row;
    }
    cb.basis.resize(n, col);
    cb.basis.setFromTriplets(z.begin(), z.end());
    cb.constraint.resize(row, n);
    cb.constraint.setFromTriplets(c.begin(), c.end());
    return cb;
}

ReducedPencil reduce(const QuadFormSet& forms, const ConstraintBasis& z, double h, std::string surface)
{
    if (z.basis.rows() != forms.size())
        throw AssemblyError("constraint basis has " + std::to_string(z.basis.rows()) + " rows but the forms have " +
                            std::to_string(forms.size()) + " DOFs");
    const SpMat zt = z.basis.transpose();
    ReducedPencil p;
    p.stiffness = symmetrized(SpMat(zt * forms.index_form() * z.basis));
    p.mass = symmetrized(SpMat(zt * forms.mass * z.basis));
    p.basis = z.basis;
    p.h = h;
    p.surface = std::move(surface);
    return p;
}

double apply_form(const QuadFormSet& forms, const Vec& f)
{
    if (f.size() != forms.size())
        throw AssemblyError("vector of size " + std::to_string(f.size()) + " applied to a form of size " +
                            std::to_string(forms.size()));
    return f.dot(forms.stiffness * f) - f.dot(forms.potential * f) + f.dot(forms.boundary_sigma * f) +
           f.dot(forms.boundary_gamma * f);
}

void write_triplets(std::ostream& os, const SpMat& m)
{
    Eigen::SparseMatrix<double, Eigen::RowMajor> rm = m;
    rm.makeCompressed();
    const auto flags = os.flags();
    const auto prec = os.precision();
    os << std::setprecision(17);
    for (Eigen::Index r = 0; r < rm.outerSize(); ++r)
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(rm, r); it; ++it)
            os << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
    os.flags(flags);
    os.precision(prec);
}

} // namespace yindex
