#include <istream>
#include <ostream>

#include "json.hpp"

#include "scsip/errors.hpp"
#include "scsip/mesh.hpp"

namespace scsip {

using nlohmann::json;

void write_mesh_json(const PolyMesh& poly, std::ostream& out)
{
    json j;
    auto& verts = j["vertices"] = json::array();
    for (const auto& v : poly.tri.vertices)
        verts.push_back({v.x, v.y});
    auto& tris = j["triangles"] = json::array();
    for (const auto& t : poly.tri.triangles)
        tris.push_back({t[0], t[1], t[2]});
    j["cell_of_triangle"] = poly.cell_of_triangle;
    auto& seeds = j["seeds"] = json::array();
    for (const auto& s : poly.seeds)
        seeds.push_back({s.x, s.y});
    out << j.dump() << '\n';
}

PolyMesh read_mesh_json(std::istream& in)
{
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("mesh json: ") + e.what());
    }
    try {
        TriMesh tri;
        for (const auto& v : j.at("vertices"))
            tri.vertices.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
        for (const auto& t : j.at("triangles"))
            tri.triangles.push_back({t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<int>()});
        validate(tri);
        for (const auto& e : collect_edges(tri))
            if (e.on_boundary())
                tri.boundary_edges.push_back({e.v0, e.v1});
        auto owner = j.at("cell_of_triangle").get<std::vector<int>>();
        std::optional<std::vector<Point>> seeds;
        if (j.contains("seeds")) {
            seeds.emplace();
            for (const auto& s : j["seeds"])
                seeds->push_back({s.at(0).get<double>(), s.at(1).get<double>()});
        }
        return make_poly_mesh(std::move(tri), std::move(owner), std::move(seeds));
    } catch (const json::exception& e) {
        throw ConfigError(std::string("mesh json: ") + e.what());
    }
}

} // namespace scsip
