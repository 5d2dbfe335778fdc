#include <doctest.h>

#include <cmath>
#include <limits>

#include "chimlab/chimney.hpp"
#include "chimlab/errors.hpp"

using namespace chimlab;
using doctest::Approx;

namespace {

double marked_length(const AxisPolygonDomain& d, Mark m) {
    double s = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i)
        if (d.marks[i] == m) s += d.edge_length(i);
    return s;
}

// Chimney symbols in a walk, with the non-chimney symbols removed.
std::vector<std::string> only_named(const std::vector<std::string>& v) {
    std::vector<std::string> out;
    for (const auto& s : v)
        if (!s.empty()) out.push_back(s);
    return out;
}

const DomainSpec kPow{OneSided{Power{2.0, 0.5}}};

}  // namespace

TEST_CASE("one-sided truncation") {
    const auto d = build_domain(kPow, TruncationConfig{});
    CHECK(d.size() == 12);
    CHECK(d.is_rectilinear());
    CHECK(d.signed_area() > 0.0);
    CHECK(d.vertices[0] == Point{1.0, 0.0});
    // Walls 2H per chimney, the horizontal top level telescopes, plus two sides and two cuts.
    CHECK(d.perimeter() == Approx(2 * 2 * 4.0 + 2 * 4.0 + 2 * 4.0).epsilon(1e-14));
    // Area: quadrant box plus chimney rectangles.
    const double area = 16.0 + 4.0 * (1.0 - 0.5) + 4.0 * (0.25 - 0.0625);
    CHECK(d.signed_area() == Approx(area).epsilon(1e-14));
}

TEST_CASE("truncation sizes and limits") {
    TruncationConfig t;
    t.n_max = 3;
    CHECK(build_domain(OneSided{Factorial{}}, t).size() == 20);
    // a_3 = 2^-64 is below the resolution floor.
    CHECK_THROWS_AS(build_domain(kPow, t), ValidationError);
    t.n_max = 1;
    t.R_out = 0.5;
    CHECK_THROWS_AS(build_domain(kPow, t), ValidationError);
}

TEST_CASE("two-sided truncation") {
    const auto d = build_domain(TwoSided{2.0, 3.0, 0.5}, TruncationConfig{});
    CHECK(d.is_rectilinear());
    CHECK(d.size() == 20);
    double xmin = 1e9, xmax = -1e9;
    for (const auto& p : d.vertices) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
    }
    CHECK(xmin == 0.0);
    CHECK(xmax == 3.0);
    // q-side chimneys mirror Power(3, 0.5): the first one is 3 - (b_0, a_0) = (2, 2.5).
    bool found = false;
    for (std::size_t i = 0; i < d.size(); ++i)
        if (d.symbols[i] == "zq_0") found = d.edge_start(i) == Point{2.5, 4.0} && d.edge_end(i) == Point{2.0, 4.0};
    CHECK(found);
}

TEST_CASE("single-strip multi domain equals the symmetric two-sided domain") {
    for (int n_max : {0, 1, 2}) {
        TruncationConfig t;
        t.n_max = n_max;
        const auto m = build_domain(MultiK{{2.0}, 0.5}, t);
        const auto s = build_domain(TwoSided{2.0, 2.0, 0.5}, t);
        CHECK(m.vertices == s.vertices);
    }
}

TEST_CASE("multi-strip truncation has slits") {
    const auto d = build_domain(MultiK{{2.0, 3.0}, 0.5}, TruncationConfig{});
    CHECK(d.is_rectilinear());
    int slits = 0;
    for (auto r : d.roles) slits += r == EdgeRole::Slit;
    CHECK(slits == 2);
}

TEST_CASE("boundary symbol order") {
    const auto o = boundary_symbol_order(kPow, 0);
    CHECK(o == std::vector<std::string>{"beta_0", "z_0", "alpha_0", "-1", "-i"});
    const auto o2 = boundary_symbol_order(TwoSided{2.0, 3.0, 0.5}, 0);
    CHECK(o2.front() == "1");
    CHECK(o2.back() == "-i");
}

TEST_CASE("property: polygon walks meet symbols in prime-end order") {
    const std::vector<std::pair<DomainSpec, int>> cases{
        {kPow, 2}, {TwoSided{2.0, 3.0, 0.5}, 1}, {MultiK{{2.0, 3.0}, 0.5}, 1}, {OneSided{Factorial{}}, 3}};
    for (const auto& [d, deepest] : cases) {
        for (int n_max = 0; n_max <= deepest; ++n_max) {
            TruncationConfig t;
            t.n_max = n_max;
            const auto walk = only_named(walk_symbols(build_domain(d, t)));
            auto order = boundary_symbol_order(d, n_max);
            CHECK(walk == order);
        }
    }
}

TEST_CASE("vertical compression") {
    const auto d = build_domain(kPow, TruncationConfig{});
    CHECK(vertical_compress(d, 1.0).vertices == d.vertices);
    const auto sq = make_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    const auto r = vertical_compress(sq, 0.25);
    CHECK(r.vertices == std::vector<Point>{{0, 0}, {1, 0}, {1, 0.25}, {0, 0.25}});
    const auto c = vertical_compress(d, 0.5);
    for (std::size_t i = 0; i < d.size(); ++i) {
        CHECK(c.vertices[i].x == d.vertices[i].x);
        CHECK(c.vertices[i].y == 0.5 * d.vertices[i].y);
    }
    CHECK_THROWS_AS(vertical_compress(d, 0.0), ValidationError);
}

TEST_CASE("property: compressions compose") {
    const auto d = build_domain(kPow, TruncationConfig{});
    // Dyadic factors compose exactly.
    CHECK(vertical_compress(vertical_compress(d, 0.5), 0.125).vertices == vertical_compress(d, 0.0625).vertices);
    for (double e1 : {0.3, 0.7}) {
        for (double e2 : {0.11, 0.9}) {
            const auto a = vertical_compress(vertical_compress(d, e1), e2);
            const auto b = vertical_compress(d, e1 * e2);
            for (std::size_t i = 0; i < d.size(); ++i) {
                CHECK(a.vertices[i].x == b.vertices[i].x);
                CHECK(a.vertices[i].y == Approx(b.vertices[i].y).epsilon(1e-15));
            }
            CHECK(a.is_rectilinear());
        }
    }
}

TEST_CASE("marking the standard quadrilateral") {
    const auto d = build_domain(kPow, TruncationConfig{});
    const auto m = mark_quadrilateral(d, SourceArc{}, j0_ray(0.25));
    CHECK(is_quadrilateral(m));
    CHECK(marked_length(m, Mark::Dirichlet0) == Approx(4.0 - 0.25));
    // Source: walls, tops and floors of the chimney region.
    CHECK(marked_length(m, Mark::Dirichlet1) == Approx(2 * 2 * 4.0 + 1.0));
    CHECK(m.marks.size() == m.size());
    CHECK(m.is_rectilinear());
    const auto runs = mark_runs(m);
    CHECK(runs.size() == 4);
}

TEST_CASE("marking custom arcs") {
    const auto d = build_domain(kPow, TruncationConfig{});
    const double x_hi = 0.5 * (0.25 + 0.5);
    const auto m = mark_quadrilateral(d, SourceArc{-std::numeric_limits<double>::infinity(), x_hi},
                                      j0_ray(0.1, 2.0));
    CHECK(is_quadrilateral(m));
    CHECK(marked_length(m, Mark::Dirichlet0) == Approx(4.0 - 0.2));
    CHECK(marked_length(m, Mark::Dirichlet1) == Approx(2 * 4.0 + x_hi));
}

TEST_CASE("two-sided J1 ray") {
    const auto d = build_domain(TwoSided{2.0, 3.0, 0.5}, TruncationConfig{});
    const auto m = mark_quadrilateral(d, SourceArc{}, j1_ray(0.1));
    CHECK(is_quadrilateral(m));
    for (std::size_t i = 0; i < m.size(); ++i)
        if (m.marks[i] == Mark::Dirichlet0) {
            CHECK(m.edge_start(i).x == 3.0);
            CHECK(m.edge_end(i).x == 3.0);
        }
    CHECK(marked_length(m, Mark::Dirichlet0) == Approx(4.0 - 0.1));
}

TEST_CASE("marking errors") {
    const auto d = build_domain(kPow, TruncationConfig{});
    CHECK_THROWS_AS(j0_ray(0.0), ValidationError);
    CHECK_THROWS_AS(mark_quadrilateral(d, SourceArc{}, TargetArc{0.7, -1.0}), ValidationError);
    CHECK_THROWS_AS(mark_quadrilateral(d, SourceArc{}, j0_ray(5.0)), ValidationError);
    const auto k = build_domain(MultiK{{2.0, 3.0}, 0.5}, TruncationConfig{});
    CHECK_THROWS_AS(mark_quadrilateral(k, SourceArc{}, jj_ray(1, 0.1)), ValidationError);
}

TEST_CASE("polygon JSON round trip") {
    const auto d = mark_quadrilateral(build_domain(kPow, TruncationConfig{}), SourceArc{}, j0_ray(0.25));
    const auto back = polygon_from_json(to_json(d));
    CHECK(back.vertices == d.vertices);
    CHECK(back.marks == d.marks);
    CHECK(back.roles == d.roles);
    CHECK_FALSE(debug_dump(d).empty());
    CHECK_THROWS_AS(make_polygon({{0, 0}, {0, 1}, {1, 1}, {1, 0}}), ValidationError);
}
