#include "yindex/error.hpp"
#include "yindex/io.hpp"

#include "doctest.h"

#include <sstream>

using namespace yindex;

TEST_SUITE("io") {

TEST_CASE("surface round trip")
{
    for (const char* name : {"ycone", "equatorial-disk", "critical-catenoid"}) {
        const auto s = canonical_surface(name);
        const auto back = surface_from_json(to_json(s));
        CHECK(to_json(back).dump() == to_json(s).dump());
    }
    const auto tilted = ycone_with_rotations({0.0, 120.0, -119.0});
    CHECK(surface_from_json(to_json(tilted)).faces[2].rotation_deg == -119.0);

    CHECK_THROWS_AS(surface_from_json(Json::parse(R"({"faces": []})")), InputError);
    CHECK_THROWS_AS(surface_from_json(Json::parse(R"({"name": "klein-bottle"})")), InputError);
    CHECK_THROWS_AS(surface_from_json(Json::parse(R"({"name": "ycone", "faces": [{}, {}]})")), InputError);
}

TEST_CASE("grid round trip")
{
    const auto g = sample_immersion(canonical_surface("ycone"), 8, 8);
    const auto back = grids_from_json(Json::parse(to_json(g).dump()));
    CHECK(back.n_r == 8);
    CHECK(back.samples == g.samples);
    CHECK(back.closures.empty());
    CHECK_THROWS_AS(grids_from_json(Json::parse(R"({"n_r": 8, "n_theta": 8, "faces": [{"samples": [[1, 2]]}]})")), InputError);
}

TEST_CASE("report documents")
{
    const auto run = compute_index(canonical_surface("equatorial-disk"), 0.2);
    const Json j = to_json(run.report);
    CHECK(j["schema_version"] == kSchemaVersion);
    CHECK(j["morse_index"] == 1);
    CHECK(j["nullity"] == 2);
    CHECK(j["inertia"]["agrees"] == true);

    std::ostringstream os;
    write_eigen_csv(os, eigen_rows(run.report));
    const std::string csv = os.str();
    CHECK(csv.rfind("h,k,lambda,class\n", 0) == 0);
    CHECK(csv.find(",1,") != std::string::npos);
    CHECK(csv.find("negative") != std::string::npos);
    CHECK(csv.find("zero") != std::string::npos);

    const Json v = to_json(verify_surface(canonical_surface("ycone"), 16));
    CHECK(v["pass"] == true);
    CHECK(v["derivatives"] == "exact");
    CHECK(v["checks"].contains("hopf-inner-ring"));
}

TEST_CASE("file errors")
{
    CHECK_THROWS_AS(read_json_file("/nonexistent/file.json"), InputError);
}

}
