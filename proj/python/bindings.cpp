#include "yindex/yindex.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace yindex;

namespace {

py::dict frame_dict(const FrameData& f)
{
    py::dict d;
    d["position"] = f.position;
    d["tangent_r"] = f.tangent_r;
    d["tangent_theta"] = f.tangent_theta;
    d["normal"] = f.normal;
    d["second_fundamental_norm2"] = f.second_fundamental_norm2;
    d["metric"] = f.metric;
    return d;
}

BoundaryPart part_from(const std::string& s)
{
    if (s == "sigma") return BoundaryPart::Sigma;
    if (s == "gamma") return BoundaryPart::Gamma;
    throw InvalidArgument("boundary part must be 'sigma' or 'gamma'");
}

} // namespace

PYBIND11_MODULE(_yindex, m)
{
    m.doc() = "Morse index, nullity and minimality certificates for free-boundary Y-surfaces.";

    py::register_exception<Error>(m, "YIndexError", PyExc_RuntimeError);
    py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);

    py::class_<YSurfaceSpec>(m, "Surface")
        .def_readonly("name", &YSurfaceSpec::name)
        .def_readonly("params", &YSurfaceSpec::params)
        .def_property_readonly("face_count", &YSurfaceSpec::face_count)
        .def_readonly("has_junction", &YSurfaceSpec::has_junction)
        .def("to_json", [](const YSurfaceSpec& s) { return to_json(s).dump(); })
        .def("__repr__", [](const YSurfaceSpec& s) { return "<Surface " + s.name + ">"; });

    m.def("canonical_surface", &canonical_surface, py::arg("name"), py::arg("params") = std::map<std::string, double>{});
    m.def("surface_from_json", [](const std::string& text) { return surface_from_json(Json::parse(text)); });

    m.def("evaluate_frame", [](const YSurfaceSpec& s, int face, double r, double theta) {
        return frame_dict(evaluate_frame(s, face, {r, theta}));
    });
    m.def("boundary_frame", [](const YSurfaceSpec& s, int face, double r, double theta, const std::string& which) {
        const BoundaryFrame b = boundary_frame(s, face, {r, theta}, part_from(which));
        py::dict d;
        d["conormal"] = b.conormal;
        d["tangent"] = b.tangent;
        d["curvature"] = b.curvature;
        d["geodesic_curvature"] = b.geodesic_curvature;
        d["curvature_dot_conormal"] = b.curvature_dot_conormal;
        return d;
    });
    m.def("check_y_structure", [](const YSurfaceSpec& s, int samples) {
        const YStructureReport r = check_y_structure(s, samples);
        py::dict d;
        d["conormal_sum"] = r.conormal_sum;
        d["normal_sum"] = r.normal_sum;
        d["curvature_sum"] = r.curvature_sum;
        d["sigma_radius"] = r.sigma_radius;
        d["sigma_parallel"] = r.sigma_parallel;
        return d;
    }, py::arg("surface"), py::arg("samples") = 64);

    py::class_<YMesh>(m, "Mesh")
        .def_readonly("h", &YMesh::h)
        .def_readonly("junction", &YMesh::junction)
        .def_property_readonly("dof_count", &YMesh::dof_count)
        .def_property_readonly("face_count", &YMesh::face_count)
        .def_property_readonly("junction_count", &YMesh::junction_count)
        .def("triangle_count", [](const YMesh& y, int face) { return y.faces.at(static_cast<std::size_t>(face)).triangle_count(); })
        .def("vertices", [](const YMesh& y, int face) {
            const auto& f = y.faces.at(static_cast<std::size_t>(face));
            Eigen::MatrixXd v(f.vertex_count(), 2);
            for (int i = 0; i < f.vertex_count(); ++i) v.row(i) = f.vertices[static_cast<std::size_t>(i)].transpose();
            return v;
        })
        .def("to_json", [](const YMesh& y) { return to_json(y).dump(); })
        .def("validate", [](const YMesh& y) { validate(y); });

    m.def("build_ymesh", [](const YSurfaceSpec& s, double h) { return build_ymesh(s, h); }, py::arg("surface"), py::arg("h"));
    m.def("refine", [](const YMesh& y) { return refine(y); });
    m.def("mesh_from_json", [](const std::string& text) { return mesh_from_json(Json::parse(text)); });

    m.def("assemble_forms", [](const YMesh& mesh, const YSurfaceSpec& s) {
        const QuadFormSet f = assemble_forms(mesh, s);
        py::dict d;
        d["stiffness"] = f.stiffness;
        d["potential"] = f.potential;
        d["boundary_sigma"] = f.boundary_sigma;
        d["boundary_gamma"] = f.boundary_gamma;
        d["mass"] = f.mass;
        d["sigma_mass"] = f.sigma_mass;
        return d;
    });
    m.def("constraint_basis", [](const YMesh& mesh) {
        const ConstraintBasis z = constraint_basis(mesh);
        return py::make_tuple(z.basis, z.constraint);
    }, "Returns (Z, C).");

    py::class_<ReducedPencil>(m, "ReducedPencil")
        .def_readonly("stiffness", &ReducedPencil::stiffness)
        .def_readonly("mass", &ReducedPencil::mass)
        .def_readonly("basis", &ReducedPencil::basis)
        .def_readonly("h", &ReducedPencil::h)
        .def_readonly("surface", &ReducedPencil::surface)
        .def_property_readonly("size", &ReducedPencil::size);

    m.def("reduced_pencil", [](const YMesh& mesh, const YSurfaceSpec& s) {
        return reduce(assemble_forms(mesh, s), constraint_basis(mesh), mesh.h, s.name);
    });
    m.def("inertia_count", [](const ReducedPencil& p, double shift) {
        const Inertia in = inertia_count(p, shift);
        return py::make_tuple(in.negative, in.zero, in.positive);
    });
    m.def("low_spectrum", [](const ReducedPencil& p, int k, std::uint64_t seed) {
        LowSpectrumOptions opts;
        opts.seed = seed;
        const EigenPairs e = low_spectrum(p, k, opts);
        return py::make_tuple(e.values, e.vectors);
    }, py::arg("pencil"), py::arg("k"), py::arg("seed") = LowSpectrumOptions{}.seed);
    m.def("compute_index", [](const YSurfaceSpec& s, double h, int k, double c0) {
        return to_json(compute_index(s, h, k, ClassifyRule{c0, {}}).report).dump();
    }, py::arg("surface"), py::arg("h"), py::arg("k") = 10, py::arg("c0") = 5.0);
    m.def("classify", [](const Vec& eigs, double h, double c0, std::optional<double> tolerance) {
        return to_json(classify(eigs, h, ClassifyRule{c0, tolerance})).dump();
    }, py::arg("eigenvalues"), py::arg("h"), py::arg("c0") = 5.0, py::arg("tolerance") = std::nullopt);

    m.def("steklov_half_disk", [](double h, const std::string& gamma) {
        return steklov_face(mesh_face(FaceDomain{DomainKind::HalfDisk, 0.0}, h), gamma_condition_from_string(gamma)).eigenvalues;
    }, py::arg("h"), py::arg("gamma") = "neumann");
    m.def("dtn_index", [](const YMesh& mesh, const YSurfaceSpec& s, double c0) {
        const DtnResult d = dtn_index(mesh, s, ClassifyRule{c0, {}});
        return py::make_tuple(d.index, d.nullity, d.spectrum.eigenvalues);
    }, py::arg("mesh"), py::arg("surface"), py::arg("c0") = 5.0);
    m.def("null_basis_residuals", [](const YMesh& mesh, const YSurfaceSpec& s) {
        const ReducedPencil p = reduce(assemble_forms(mesh, s), constraint_basis(mesh), mesh.h, s.name);
        const AnalyticNullBasis b = analytic_null_basis(mesh, s);
        py::dict d;
        const auto r = null_projection_residuals(b.vectors, p);
        for (std::size_t i = 0; i < r.size(); ++i) d[py::str(b.labels[i])] = r[i];
        return d;
    });
    m.def("coordinate_field", [](const YMesh& mesh, const YSurfaceSpec& s, const Vec3& e) {
        const CoordinateField f = coordinate_field_test(mesh, s, e);
        return py::make_tuple(f.face_values, f.q, f.tangential);
    });

    m.def("verify_surface", [](const YSurfaceSpec& s, int n, bool exact) {
        return to_json(verify_surface(s, n, exact)).dump();
    }, py::arg("surface"), py::arg("n") = 64, py::arg("exact") = true);
    m.def("verify_samples", [](const std::string& text, std::optional<double> threshold) {
        PolarGridSet g = grids_from_json(Json::parse(text));
        validate_grids(g);
        CertificateOptions opts;
        opts.threshold = threshold;
        return to_json(certificate_residuals(derivative_grids(g, false), opts)).dump();
    }, py::arg("grids_json"), py::arg("threshold") = std::nullopt);
    m.def("sample_surface", [](const YSurfaceSpec& s, int n_r, int n_theta) {
        return to_json(sample_immersion(s, n_r, n_theta)).dump();
    });
}
