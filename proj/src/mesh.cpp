#include "scsip/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <unordered_map>

#include "scsip/errors.hpp"

namespace scsip {

namespace {

std::uint64_t edge_key(int a, int b)
{
    auto lo = static_cast<std::uint64_t>(std::min(a, b));
    auto hi = static_cast<std::uint64_t>(std::max(a, b));
    return (lo << 32) | hi;
}

// Barycentric containment with a small inclusive tolerance.
bool contains(const std::array<Point, 3>& p, Point q)
{
    const double area = signed_area(p[0], p[1], p[2]);
    const double tol = 1e-12 * std::abs(area);
    return signed_area(q, p[1], p[2]) >= -tol && signed_area(p[0], q, p[2]) >= -tol &&
           signed_area(p[0], p[1], q) >= -tol;
}

std::vector<std::vector<int>> triangle_neighbors(const TriMesh& tri, const std::vector<TriEdge>& edges)
{
    std::vector<std::vector<int>> nb(tri.num_triangles());
    for (const auto& e : edges) {
        if (e.on_boundary())
            continue;
        nb[e.triangles[0]].push_back(e.triangles[1]);
        nb[e.triangles[1]].push_back(e.triangles[0]);
    }
    return nb;
}

} // namespace

double TriMesh::triangle_area(std::size_t t) const
{
    const auto p = triangle_points(t);
    return signed_area(p[0], p[1], p[2]);
}

std::array<Point, 3> TriMesh::triangle_points(std::size_t t) const
{
    const auto& v = triangles[t];
    return {vertices[v[0]], vertices[v[1]], vertices[v[2]]};
}

std::vector<TriEdge> collect_edges(const TriMesh& tri)
{
    std::vector<TriEdge> edges;
    std::unordered_map<std::uint64_t, std::size_t> index;
    index.reserve(3 * tri.num_triangles());
    for (std::size_t t = 0; t < tri.num_triangles(); ++t) {
        const auto& v = tri.triangles[t];
        for (int i = 0; i < 3; ++i) {
            const int a = v[i];
            const int b = v[(i + 1) % 3];
            auto [it, inserted] = index.try_emplace(edge_key(a, b), edges.size());
            if (inserted) {
                TriEdge e;
                e.v0 = a;
                e.v1 = b;
                e.triangles[0] = static_cast<int>(t);
                edges.push_back(e);
            } else {
                auto& e = edges[it->second];
                if (e.triangles[1] >= 0)
                    throw TopologyError("edge (" + std::to_string(a) + ", " + std::to_string(b) +
                                        ") shared by more than two triangles");
                e.triangles[1] = static_cast<int>(t);
            }
        }
    }
    return edges;
}

void validate(const TriMesh& tri)
{
    const int nv = static_cast<int>(tri.vertices.size());
    for (std::size_t t = 0; t < tri.num_triangles(); ++t) {
        for (int v : tri.triangles[t])
            if (v < 0 || v >= nv)
                throw TopologyError("triangle " + std::to_string(t) + " references a missing vertex");
        if (!(tri.triangle_area(t) > 0.0))
            throw TopologyError("triangle " + std::to_string(t) + " has non-positive signed area");
    }
    collect_edges(tri);
}

double Facet::total_length() const
{
    double s = 0.0;
    for (const auto& e : edges)
        s += e.length;
    return s;
}

double PolyMesh::cell_area(std::size_t cell) const
{
    double a = 0.0;
    for (int t : cells[cell])
        a += tri.triangle_area(t);
    return a;
}

double PolyMesh::cell_perimeter(std::size_t cell) const
{
    if (!has_topology)
        throw StateError("cell_perimeter requires topology");
    double s = 0.0;
    for (const auto& f : facets)
        if (f.cells[0] == static_cast<int>(cell) || f.cells[1] == static_cast<int>(cell))
            s += f.total_length();
    return s;
}

std::vector<std::vector<int>> PolyMesh::facets_of_cells() const
{
    if (!has_topology)
        throw StateError("facets_of_cells requires topology");
    std::vector<std::vector<int>> out(num_cells());
    for (std::size_t f = 0; f < facets.size(); ++f)
        for (int c : facets[f].cells)
            if (c >= 0)
                out[c].push_back(static_cast<int>(f));
    return out;
}

TriMesh generate_background(int n)
{
    if (n < 1)
        throw InvalidArgument("generate_background: n must be positive, got " + std::to_string(n));
    const int m = 4 * n;
    TriMesh tri;
    tri.vertices.reserve(static_cast<std::size_t>(m + 1) * (m + 1));
    for (int j = 0; j <= m; ++j)
        for (int i = 0; i <= m; ++i)
            tri.vertices.push_back({static_cast<double>(i) / m, static_cast<double>(j) / m});
    auto vid = [m](int i, int j) { return j * (m + 1) + i; };
    tri.triangles.reserve(2 * static_cast<std::size_t>(m) * m);
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < m; ++i) {
            const int v00 = vid(i, j), v10 = vid(i + 1, j), v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
            tri.triangles.push_back({v00, v10, v11});
            tri.triangles.push_back({v00, v11, v01});
        }
    }
    for (int i = 0; i < m; ++i) {
        tri.boundary_edges.push_back({vid(i, 0), vid(i + 1, 0)});
        tri.boundary_edges.push_back({vid(m, i), vid(m, i + 1)});
        tri.boundary_edges.push_back({vid(m - i, m), vid(m - i - 1, m)});
        tri.boundary_edges.push_back({vid(0, m - i), vid(0, m - i - 1)});
    }
    return tri;
}

PolyMesh agglomerate(const TriMesh& tri, int n)
{
    if (n < 1)
        throw InvalidArgument("agglomerate: n must be positive, got " + std::to_string(n));
    const auto edges = collect_edges(tri);
    const auto nb = triangle_neighbors(tri, edges);
    const std::size_t num_cells = static_cast<std::size_t>(n) * n;

    std::vector<Point> seeds;
    seeds.reserve(num_cells);
    for (int j = 1; j <= n; ++j)
        for (int i = 1; i <= n; ++i)
            seeds.push_back({(i - 0.5) / n, (j - 0.5) / n});

    std::vector<int> owner(tri.num_triangles(), -1);
    std::vector<std::vector<int>> layer(num_cells);
    for (std::size_t c = 0; c < num_cells; ++c) {
        int found = -1;
        for (std::size_t t = 0; t < tri.num_triangles(); ++t) {
            if (owner[t] < 0 && contains(tri.triangle_points(t), seeds[c])) {
                found = static_cast<int>(t);
                break;
            }
        }
        if (found < 0)
            throw TopologyError("no free triangle contains seed of cell " + std::to_string(c));
        owner[found] = static_cast<int>(c);
        layer[c] = {found};
    }

    std::size_t assigned = num_cells;
    bool progress = true;
    while (assigned < tri.num_triangles() && progress) {
        progress = false;
        for (std::size_t c = 0; c < num_cells; ++c) {
            std::vector<int> next;
            for (int t : layer[c])
                for (int s : nb[t])
                    if (owner[s] < 0)
                        next.push_back(s);
            std::sort(next.begin(), next.end());
            next.erase(std::unique(next.begin(), next.end()), next.end());
            for (int s : next)
                owner[s] = static_cast<int>(c);
            assigned += next.size();
            progress = progress || !next.empty();
            layer[c] = std::move(next);
        }
    }
    if (assigned < tri.num_triangles())
        throw TopologyError("agglomeration left " + std::to_string(tri.num_triangles() - assigned) +
                            " unreachable triangles");
    return make_poly_mesh(tri, std::move(owner), std::move(seeds));
}

PolyMesh make_poly_mesh(TriMesh tri, std::vector<int> cell_of_triangle, std::optional<std::vector<Point>> seeds)
{
    if (cell_of_triangle.size() != tri.num_triangles())
        throw TopologyError("cell_of_triangle has " + std::to_string(cell_of_triangle.size()) + " entries for " +
                            std::to_string(tri.num_triangles()) + " triangles");
    int max_cell = -1;
    for (int c : cell_of_triangle) {
        if (c < 0)
            throw TopologyError("negative cell index in cell_of_triangle");
        max_cell = std::max(max_cell, c);
    }
    PolyMesh poly;
    poly.cells.resize(static_cast<std::size_t>(max_cell + 1));
    for (std::size_t t = 0; t < cell_of_triangle.size(); ++t)
        poly.cells[cell_of_triangle[t]].push_back(static_cast<int>(t));
    for (std::size_t c = 0; c < poly.cells.size(); ++c)
        if (poly.cells[c].empty())
            throw TopologyError("cell " + std::to_string(c) + " has no triangles");

    poly.tri = std::move(tri);
    poly.cell_of_triangle = std::move(cell_of_triangle);

    if (seeds) {
        if (seeds->size() != poly.cells.size())
            throw TopologyError("seed count does not match cell count");
        poly.seeds = std::move(*seeds);
    } else {
        poly.seeds.reserve(poly.cells.size());
        for (const auto& cell : poly.cells) {
            double area = 0.0;
            Point m{};
            for (int t : cell) {
                const auto p = poly.tri.triangle_points(t);
                const double a = signed_area(p[0], p[1], p[2]);
                area += a;
                m = m + (a / 3.0) * (p[0] + p[1] + p[2]);
            }
            poly.seeds.push_back((1.0 / area) * m);
        }
    }

    poly.h_T.assign(poly.cells.size(), 0.0);
    for (std::size_t c = 0; c < poly.cells.size(); ++c) {
        std::vector<int> verts;
        for (int t : poly.cells[c])
            verts.insert(verts.end(), poly.tri.triangles[t].begin(), poly.tri.triangles[t].end());
        std::sort(verts.begin(), verts.end());
        verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
        double h = 0.0;
        for (std::size_t a = 0; a < verts.size(); ++a)
            for (std::size_t b = a + 1; b < verts.size(); ++b)
                h = std::max(h, distance(poly.tri.vertices[verts[a]], poly.tri.vertices[verts[b]]));
        poly.h_T[c] = h;
    }
    return poly;
}

double harmonic_facet_scale(double h1, double h2) { return 2.0 / (1.0 / h1 + 1.0 / h2); }

PolyMesh build_topology(PolyMesh poly, const TopologyOptions& options)
{
    const auto edges = collect_edges(poly.tri);
    const auto& owner = poly.cell_of_triangle;

    // Cells must be edge-connected.
    {
        const auto nb = triangle_neighbors(poly.tri, edges);
        std::vector<char> seen(poly.tri.num_triangles(), 0);
        for (std::size_t c = 0; c < poly.num_cells(); ++c) {
            std::vector<int> stack{poly.cells[c].front()};
            seen[stack.back()] = 1;
            std::size_t reached = 0;
            while (!stack.empty()) {
                const int t = stack.back();
                stack.pop_back();
                ++reached;
                for (int s : nb[t])
                    if (!seen[s] && owner[s] == static_cast<int>(c)) {
                        seen[s] = 1;
                        stack.push_back(s);
                    }
            }
            if (reached != poly.cells[c].size())
                throw TopologyError("cell " + std::to_string(c) + " is not edge-connected");
        }
    }

    std::map<std::pair<int, int>, Facet> interior;
    std::map<int, Facet> boundary;
    for (const auto& e : edges) {
        // (v0, v1) follows the counterclockwise traversal of the first triangle.
        const int t0 = e.triangles[0];
        int a = e.v0, b = e.v1;
        const int c0 = owner[t0];
        if (e.on_boundary()) {
            Facet& f = boundary[c0];
            f.kind = FacetKind::boundary;
            f.cells = {c0, -1};
            const Point pa = poly.tri.vertices[a], pb = poly.tri.vertices[b];
            const double len = distance(pa, pb);
            const Point d = pb - pa;
            f.edges.push_back({pa, pb, {d.y / len, -d.x / len}, len});
            continue;
        }
        const int c1 = owner[e.triangles[1]];
        if (c0 == c1)
            continue;
        // Normal points from the lower-indexed cell to the higher one.
        if (c0 > c1)
            std::swap(a, b);
        const int lo = std::min(c0, c1), hi = std::max(c0, c1);
        Facet& f = interior[{lo, hi}];
        f.kind = FacetKind::interior;
        f.cells = {lo, hi};
        const Point pa = poly.tri.vertices[a], pb = poly.tri.vertices[b];
        const double len = distance(pa, pb);
        const Point d = pb - pa;
        f.edges.push_back({pa, pb, {d.y / len, -d.x / len}, len});
    }

    const double uniform_h =
        options.uniform_h.value_or(1.0 / std::sqrt(static_cast<double>(poly.num_cells())));
    if (options.he_mode == HeMode::uniform && !(uniform_h > 0.0))
        throw InvalidArgument("uniform facet scale must be positive");

    poly.facets.clear();
    for (auto& [key, f] : interior) {
        f.h_E = options.he_mode == HeMode::uniform ? uniform_h
                                                   : harmonic_facet_scale(poly.h_T[key.first], poly.h_T[key.second]);
        poly.facets.push_back(std::move(f));
    }
    for (auto& [cell, f] : boundary) {
        f.h_E = options.he_mode == HeMode::uniform ? uniform_h : poly.h_T[cell];
        poly.facets.push_back(std::move(f));
    }
    poly.has_topology = true;
    return poly;
}

QualityReport quality_report(const PolyMesh& poly)
{
    if (!poly.has_topology)
        throw StateError("quality_report requires topology");
    const double inf = std::numeric_limits<double>::infinity();
    QualityReport report;
    report.cells.resize(poly.num_cells());
    std::vector<Point> centers(poly.num_cells());

    for (auto& q : report.cells)
        q.perimeter = 0.0;
    for (const auto& f : poly.facets)
        for (int c : f.cells)
            if (c >= 0)
                report.cells[c].perimeter += f.total_length();

    for (std::size_t c = 0; c < poly.num_cells(); ++c) {
        auto& q = report.cells[c];
        q.h = poly.h_T[c];
        q.area = poly.cell_area(c);

        // Bounding ball about the midpoint of the farthest vertex pair.
        std::vector<int> verts;
        for (int t : poly.cells[c])
            verts.insert(verts.end(), poly.tri.triangles[t].begin(), poly.tri.triangles[t].end());
        std::sort(verts.begin(), verts.end());
        verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
        double best = -1.0;
        for (std::size_t a = 0; a < verts.size(); ++a)
            for (std::size_t b = a + 1; b < verts.size(); ++b) {
                const Point pa = poly.tri.vertices[verts[a]], pb = poly.tri.vertices[verts[b]];
                const double d = distance(pa, pb);
                if (d > best) {
                    best = d;
                    centers[c] = 0.5 * (pa + pb);
                }
            }
        q.outer_radius = 0.5 * q.h;

        for (int t : poly.cells[c]) {
            const auto p = poly.tri.triangle_points(t);
            const double per = distance(p[0], p[1]) + distance(p[1], p[2]) + distance(p[2], p[0]);
            const double a = signed_area(p[0], p[1], p[2]);
            if (per > 0.0)
                q.inner_radius = std::max(q.inner_radius, 2.0 * a / per);
        }

        q.degenerate = !(q.area > 0.0) || !(q.inner_radius > 0.0) || !(q.h > 0.0);
        if (q.degenerate) {
            q.rho1 = inf;
            q.rho3 = inf;
            report.degenerate = true;
        } else {
            q.rho1 = q.outer_radius / q.inner_radius;
            q.rho3 = q.perimeter / q.h;
        }
        report.rho1_max = std::max(report.rho1_max, q.rho1);
        report.rho3_max = std::max(report.rho3_max, q.rho3);
    }

    for (std::size_t a = 0; a < poly.num_cells(); ++a)
        for (std::size_t b = a + 1; b < poly.num_cells(); ++b) {
            const auto& qa = report.cells[a];
            const auto& qb = report.cells[b];
            if (distance(centers[a], centers[b]) > qa.outer_radius + qb.outer_radius)
                continue;
            const double ratio = qa.degenerate || qb.degenerate ? inf : std::max(qa.h / qb.h, qb.h / qa.h);
            report.rho2_max = std::max(report.rho2_max, ratio);
        }
    return report;
}

} // namespace scsip
