#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "scsip/geometry.hpp"

namespace scsip {

/// Background triangulation of the unit square.
struct TriMesh {
    std::vector<Point> vertices;
    std::vector<std::array<int, 3>> triangles; // counterclockwise
    std::vector<std::array<int, 2>> boundary_edges;

    std::size_t num_triangles() const { return triangles.size(); }
    double triangle_area(std::size_t t) const;
    std::array<Point, 3> triangle_points(std::size_t t) const;
};

/// Unique edge of a triangulation with its one or two incident triangles.
struct TriEdge {
    int v0 = -1;
    int v1 = -1;
    std::array<int, 2> triangles{-1, -1}; // second is -1 on the boundary
    bool on_boundary() const { return triangles[1] < 0; }
};

std::vector<TriEdge> collect_edges(const TriMesh& tri);

/// Throws TopologyError unless areas are positive and every edge has one or two triangles.
void validate(const TriMesh& tri);

enum class FacetKind { interior, boundary };

/// One background edge on a facet; the normal points from cells[0] to cells[1], or outward.
struct FacetEdge {
    Point a;
    Point b;
    Point normal;
    double length = 0.0;
};

struct Facet {
    FacetKind kind = FacetKind::interior;
    std::array<int, 2> cells{-1, -1};
    std::vector<FacetEdge> edges;
    double h_E = 0.0;

    bool is_boundary() const { return kind == FacetKind::boundary; }
    double total_length() const;
};

enum class HeMode { facet, uniform };

struct TopologyOptions {
    HeMode he_mode = HeMode::facet;
    // Used in uniform mode; defaults to 1/sqrt(number of cells), i.e. 1/n on n x n agglomerations.
    std::optional<double> uniform_h;
};

/// Polygonal cells obtained by agglomerating background triangles.
struct PolyMesh {
    TriMesh tri;
    std::vector<std::vector<int>> cells;  // triangle indices per cell, ascending
    std::vector<int> cell_of_triangle;
    std::vector<Point> seeds;             // basis shift point per cell
    std::vector<Facet> facets;            // empty until build_topology
    std::vector<double> h_T;
    bool has_topology = false;

    std::size_t num_cells() const { return cells.size(); }
    double cell_area(std::size_t cell) const;
    /// Sum of facet edge lengths around the cell; requires topology.
    double cell_perimeter(std::size_t cell) const;
    /// Facet indices touching each cell; requires topology.
    std::vector<std::vector<int>> facets_of_cells() const;
};

/// Structured (4n)x(4n) grid of the unit square, every square split along its rising diagonal.
TriMesh generate_background(int n);

/// Cells seeded at ((i-1/2)/n, (j-1/2)/n) and grown by round-robin breadth-first search.
PolyMesh agglomerate(const TriMesh& tri, int n);

/// Wraps an explicit triangle-to-cell map. Missing seeds default to cell centroids.
PolyMesh make_poly_mesh(TriMesh tri, std::vector<int> cell_of_triangle,
                        std::optional<std::vector<Point>> seeds = std::nullopt);

PolyMesh build_topology(PolyMesh poly, const TopologyOptions& options = {});

/// Interior facets: harmonic-mean scale 2/(1/h1 + 1/h2). Boundary facets use h_T.
double harmonic_facet_scale(double h1, double h2);

struct CellQuality {
    double h = 0.0;
    double outer_radius = 0.0;   // R_T
    double inner_radius = 0.0;   // lower bound on r_T
    double perimeter = 0.0;
    double area = 0.0;
    double rho1 = 0.0;           // upper estimate of R_T / r_T
    double rho3 = 0.0;           // |dT| / h_T
    bool degenerate = false;
};

struct QualityReport {
    double rho1_max = 0.0;
    double rho2_max = 1.0;
    double rho3_max = 0.0;
    bool degenerate = false;
    std::vector<CellQuality> cells;
};

QualityReport quality_report(const PolyMesh& poly);

void write_mesh_json(const PolyMesh& poly, std::ostream& out);
PolyMesh read_mesh_json(std::istream& in);

} // namespace scsip
