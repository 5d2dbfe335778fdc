#pragma once

// Rectilinear truncations of chimney domains and their quadrilateral marks.

#include <limits>
#include <string>
#include <vector>

#include "chimlab/domain_spec.hpp"
#include "chimlab/lamination.hpp"
#include "json.hpp"

namespace chimlab {

struct TruncationConfig {
    int n_max = 1;       // chimneys 0..n_max per family
    double H_top = 4.0;  // chimney height cut
    double depth = 4.0;  // lower cut
    double R_out = 4.0;  // right cut of the quadrant (one-sided only)
};

enum class Mark { Neumann, Dirichlet0, Dirichlet1 };

enum class EdgeRole {
    Wall,        // chimney side
    Top,         // chimney cut at H_top
    Floor,       // real-axis segment between chimneys
    Side,        // vertical boundary line Re z = const below the real axis
    Bottom,      // lower cut
    OuterFloor,  // real axis beyond the last chimney family (one-sided)
    OuterSide,   // right cut of the quadrant
    Slit,        // two-sided slit between strips
    Plain        // user-supplied polygon edge
};

struct Point {
    double x = 0.0, y = 0.0;
    bool operator==(const Point&) const = default;
};

// Counterclockwise boundary walk; edge i runs from vertices[i] to vertices[i+1].
struct AxisPolygonDomain {
    std::vector<Point> vertices;
    std::vector<EdgeRole> roles;
    std::vector<std::string> symbols;  // prime-end symbol carried by each edge, or ""
    std::vector<Mark> marks;

    std::size_t size() const { return vertices.size(); }
    Point edge_start(std::size_t i) const { return vertices[i]; }
    Point edge_end(std::size_t i) const { return vertices[(i + 1) % vertices.size()]; }
    double edge_length(std::size_t i) const;
    double perimeter() const;
    double signed_area() const;
    bool is_rectilinear() const;
};

// Plain polygon from a counterclockwise vertex list, all edges Neumann.
AxisPolygonDomain make_polygon(const std::vector<Point>& vertices);

AxisPolygonDomain build_domain(const DomainSpec& spec, const TruncationConfig& trunc);

AxisPolygonDomain vertical_compress(const AxisPolygonDomain& domain, double eps);

// Source: the top-boundary edges (walls, tops, floors) with x in [x_lo, x_hi].
struct SourceArc {
    double x_lo = -std::numeric_limits<double>::infinity();
    double x_hi = std::numeric_limits<double>::infinity();
};

// Target: boundary segment {x0} x [y_lo, y_hi].
struct TargetArc {
    double x0 = 0.0;
    double y_hi = -1.0;
    double y_lo = -std::numeric_limits<double>::infinity();
};

TargetArc j0_ray(double eps, double scale = 1.0);
TargetArc j1_ray(double eps);           // two-sided: {3} x (-inf, -eps]
TargetArc jj_ray(int j, double eps);    // multi-strip: {3j} x (-inf, -eps]

AxisPolygonDomain mark_quadrilateral(const AxisPolygonDomain& domain, const SourceArc& source,
                                     const TargetArc& target);

// Maximal runs of equal marks: (first edge, edge count, mark).
struct MarkRun { std::size_t first, count; Mark mark; };
std::vector<MarkRun> mark_runs(const AxisPolygonDomain& domain);

// Exactly one maximal Dirichlet0 run and one maximal Dirichlet1 run.
bool is_quadrilateral(const AxisPolygonDomain& domain);

std::vector<std::string> boundary_symbol_order(const DomainSpec& spec, int n_max);

// Symbols met by the boundary walk, in walk order.
std::vector<std::string> walk_symbols(const AxisPolygonDomain& domain);

std::string to_string(Mark m);
std::string to_string(EdgeRole r);

nlohmann::json to_json(const AxisPolygonDomain& d);
AxisPolygonDomain polygon_from_json(const nlohmann::json& j);
std::string debug_dump(const AxisPolygonDomain& d);

}  // namespace chimlab
