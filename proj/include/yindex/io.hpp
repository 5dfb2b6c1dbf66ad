#pragma once

// JSON and CSV formats for surfaces, meshes, reports and sampled immersions.

#include "yindex/hopf.hpp"
#include "yindex/mesh.hpp"
#include "yindex/spectra.hpp"

#include "json.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace yindex {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// {name, faces: [{kind, rotation_deg, plane}], params}
Json to_json(const YSurfaceSpec& spec);
YSurfaceSpec surface_from_json(const Json& j);

/// {h, faces: [{kind, inner_radius, h, vertices, triangles, vertex_tags,
/// edge_tags: [[a, b, tag]]}], junction_map}. Doubles round-trip exactly.
Json to_json(const YMesh& mesh);
YMesh mesh_from_json(const Json& j);

Json to_json(const SpectrumReport& report);
Json to_json(const SteklovSpectrum& spectrum);
Json to_json(const ResidualReport& report);

/// {n_r, n_theta, periodic, faces: [{samples: [[x, y, z], ...]}]}
Json to_json(const PolarGridSet& grids);
PolarGridSet grids_from_json(const Json& j);

struct EigenRow {
    double h = 0.0;
    int k = 0;
    double lambda = 0.0;
    std::string cls; ///< negative, zero or positive
};

/// Rows for every eigenvalue of a report, classified against its tolerance.
std::vector<EigenRow> eigen_rows(const SpectrumReport& report);

/// Header "h,k,lambda,class" followed by one line per row, 17 significant digits.
void write_eigen_csv(std::ostream& os, const std::vector<EigenRow>& rows);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

} // namespace yindex
