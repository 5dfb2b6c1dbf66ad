#include "yindex/io.hpp"

#include "yindex/error.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace yindex {

namespace {

VertexTag vertex_tag_from_string(const std::string& s)
{
    if (s == "interior") return VertexTag::Interior;
    if (s == "sigma") return VertexTag::Sigma;
    if (s == "gamma") return VertexTag::Gamma;
    if (s == "corner") return VertexTag::Corner;
    throw InputError("unknown vertex tag '" + s + "'");
}

EdgeTag edge_tag_from_string(const std::string& s)
{
    if (s == "sigma" || s == "SIGMA") return EdgeTag::Sigma;
    if (s == "gamma" || s == "GAMMA") return EdgeTag::Gamma;
    throw InputError("unknown edge tag '" + s + "'");
}

template <class T>
T field(const Json& j, const char* key)
{
    if (!j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("field '") + key + "': " + e.what());
    }
}

Json vec_json(const Vec& v)
{
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

} // namespace

Json to_json(const YSurfaceSpec& spec)
{
    Json j;
    j["name"] = spec.name;
    Json faces = Json::array();
    for (const auto& f : spec.faces)
        faces.push_back({{"kind", to_string(f.domain.kind)}, {"rotation_deg", f.rotation_deg}, {"plane", f.plane}});
    j["faces"] = faces;
    Json params = Json::object();
    for (const auto& [k, v] : spec.params) params[k] = v;
    j["params"] = params;
    return j;
}

YSurfaceSpec surface_from_json(const Json& j)
{
    const auto name = field<std::string>(j, "name");
    std::map<std::string, double> params;
    if (j.contains("params"))
        for (const auto& [k, v] : j.at("params").items())
            if (k != "neck_scale") params[k] = v.get<double>();
    if (name == "ycone" && j.contains("faces")) {
        const auto& faces = j.at("faces");
        if (faces.size() != 3) throw InputError("ycone needs exactly three faces");
        for (std::size_t f = 0; f < 3; ++f) params["face" + std::to_string(f + 1) + "_deg"] = faces[f].value("rotation_deg", 0.0);
    }
    YSurfaceSpec spec;
    try {
        spec = canonical_surface(name, params);
    } catch (const InvalidArgument& e) {
        throw InputError(e.what());
    }
    if (j.contains("faces")) {
        const auto& faces = j.at("faces");
        if (faces.size() != spec.faces.size())
            throw InputError("surface '" + name + "' has " + std::to_string(spec.faces.size()) + " faces, file lists " +
                             std::to_string(faces.size()));
        for (std::size_t f = 0; f < faces.size(); ++f) {
            if (faces[f].contains("kind") && domain_kind_from_string(faces[f].at("kind").get<std::string>()) != spec.faces[f].domain.kind)
                throw InputError("face " + std::to_string(f + 1) + " kind does not match surface '" + name + "'");
        }
    }
    return spec;
}

Json to_json(const YMesh& mesh)
{
    Json j;
    j["h"] = mesh.h;
    Json faces = Json::array();
    for (const auto& f : mesh.faces) {
        Json jf;
        jf["kind"] = to_string(f.domain.kind);
        jf["inner_radius"] = f.domain.inner_radius;
        jf["h"] = f.h;
        Json verts = Json::array();
        for (const auto& v : f.vertices) verts.push_back({v.x(), v.y()});
        jf["vertices"] = verts;
        Json tris = Json::array();
        for (const auto& t : f.triangles) tris.push_back({t[0], t[1], t[2]});
        jf["triangles"] = tris;
        Json vtags = Json::array();
        for (auto t : f.vertex_tags) vtags.push_back(to_string(t));
        jf["vertex_tags"] = vtags;
        Json etags = Json::array();
        for (const auto& e : f.boundary_edges) etags.push_back({e.a, e.b, to_string(e.tag)});
        jf["edge_tags"] = etags;
        faces.push_back(jf);
    }
    j["faces"] = faces;
    Json jm = Json::array();
    for (const auto& t : mesh.junction) jm.push_back({t[0], t[1], t[2]});
    j["junction_map"] = jm;
    return j;
}

YMesh mesh_from_json(const Json& j)
{
    YMesh mesh;
    mesh.h = field<double>(j, "h");
    int offset = 0;
    for (const auto& jf : field<Json>(j, "faces")) {
        FaceMesh f;
        f.domain.kind = domain_kind_from_string(field<std::string>(jf, "kind"));
        f.domain.inner_radius = jf.value("inner_radius", 0.0);
        f.h = jf.value("h", mesh.h);
        for (const auto& v : field<Json>(jf, "vertices")) f.vertices.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
        for (const auto& t : field<Json>(jf, "triangles")) f.triangles.push_back({t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<int>()});
        for (const auto& t : field<Json>(jf, "vertex_tags")) f.vertex_tags.push_back(vertex_tag_from_string(t.get<std::string>()));
        for (const auto& e : field<Json>(jf, "edge_tags"))
            f.boundary_edges.push_back({e.at(0).get<int>(), e.at(1).get<int>(), edge_tag_from_string(e.at(2).get<std::string>())});
        if (f.vertex_tags.size() != f.vertices.size()) throw InputError("vertex_tags and vertices differ in length");
        mesh.dof_offset.push_back(offset);
        offset += f.vertex_count();
        mesh.faces.push_back(std::move(f));
    }
    for (const auto& t : field<Json>(j, "junction_map")) mesh.junction.push_back({t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<int>()});
    try {
        validate(mesh);
    } catch (const MeshError& e) {
        throw InputError(std::string("mesh file rejected: ") + e.what());
    }
    return mesh;
}

Json to_json(const SpectrumReport& r)
{
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["surface"] = r.surface;
    j["h"] = r.h;
    j["route"] = r.route;
    j["morse_index"] = r.index;
    j["nullity"] = r.nullity;
    j["zero_tolerance"] = r.tolerance;
    j["c0"] = r.c0;
    j["ambiguous"] = r.ambiguous;
    if (r.ambiguous) j["ambiguity"] = r.ambiguity;
    j["truncated"] = r.truncated;
    j["eigenvalues"] = vec_json(r.eigenvalues);
    Json inertia;
    inertia["n_neg_below"] = r.inertia_below ? Json(*r.inertia_below) : Json(nullptr);
    inertia["n_neg_above"] = r.inertia_above ? Json(*r.inertia_above) : Json(nullptr);
    inertia["agrees"] = r.inertia_agrees;
    j["inertia"] = inertia;
    j["null_residuals"] = r.null_residuals;
    j["dofs"] = r.dofs;
    j["reduced_dofs"] = r.reduced_dofs;
    j["solver"] = r.solver;
    return j;
}

Json to_json(const SteklovSpectrum& s)
{
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["surface"] = s.surface;
    j["gamma_condition"] = to_string(s.condition);
    j["h"] = s.h;
    j["tolerance"] = s.tolerance;
    j["below_one"] = s.below_one;
    j["at_one"] = s.at_one;
    j["eigenvalues"] = vec_json(s.eigenvalues);
    return j;
}

Json to_json(const ResidualReport& r)
{
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["n_r"] = r.n_r;
    j["n_theta"] = r.n_theta;
    j["derivatives"] = r.exact ? "exact" : "finite-difference";
    j["hopf_meaningful"] = r.hopf_meaningful;
    j["pass"] = r.all_pass();
    Json checks = Json::object();
    for (const auto& c : r.checks) {
        Json jc;
        jc["applicable"] = c.applicable;
        if (c.applicable) {
            jc["max"] = c.max;
            jc["rms"] = c.rms;
        }
        jc["threshold"] = c.threshold;
        jc["pass"] = c.pass;
        if (!c.note.empty()) jc["note"] = c.note;
        checks[c.name] = jc;
    }
    j["checks"] = checks;
    return j;
}

Json to_json(const PolarGridSet& g)
{
    Json j;
    j["n_r"] = g.n_r;
    j["n_theta"] = g.n_theta;
    j["periodic"] = g.periodic;
    Json faces = Json::array();
    for (const auto& s : g.samples) {
        Json arr = Json::array();
        for (const auto& p : s) arr.push_back({p.x(), p.y(), p.z()});
        faces.push_back({{"samples", arr}});
    }
    j["faces"] = faces;
    return j;
}

PolarGridSet grids_from_json(const Json& j)
{
    PolarGridSet g;
    g.n_r = field<int>(j, "n_r");
    g.n_theta = field<int>(j, "n_theta");
    g.periodic = j.value("periodic", false);
    for (const auto& f : field<Json>(j, "faces")) {
        std::vector<Vec3> s;
        for (const auto& p : field<Json>(f, "samples")) {
            if (!p.is_array() || p.size() != 3) throw InputError("each sample must be an [x, y, z] triple");
            s.emplace_back(p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>());
        }
        g.samples.push_back(std::move(s));
    }
    return g;
}

std::vector<EigenRow> eigen_rows(const SpectrumReport& r)
{
    std::vector<EigenRow> rows;
    for (Eigen::Index i = 0; i < r.eigenvalues.size(); ++i) {
        const double l = r.eigenvalues[i];
        const char* cls = l < -r.tolerance ? "negative" : (std::abs(l) <= r.tolerance ? "zero" : "positive");
        rows.push_back({r.h, static_cast<int>(i + 1), l, cls});
    }
    return rows;
}

void write_eigen_csv(std::ostream& os, const std::vector<EigenRow>& rows)
{
    std::ostringstream out;
    out << std::setprecision(17);
    out << "h,k,lambda,class\n";
    for (const auto& r : rows) out << r.h << ',' << r.k << ',' << r.lambda << ',' << r.cls << '\n';
    os << out.str();
}

Json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw InputError("malformed JSON in '" + path + "': " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << text;
    if (!out) throw InputError("write to '" + path + "' failed");
}

} // namespace yindex
