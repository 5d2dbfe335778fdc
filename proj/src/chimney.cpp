#include "chimlab/chimney.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "chimlab/errors.hpp"
#include "chimlab/seqlab.hpp"

namespace chimlab {

namespace {

constexpr double kMinChimney = 1e-8;

class Walker {
public:
    explicit Walker(Point start) { d_.vertices.push_back(start); }
    Point here() const { return d_.vertices.back(); }
    void to(Point p, EdgeRole role, std::string sym = "") {
        d_.roles.push_back(role);
        d_.symbols.push_back(std::move(sym));
        d_.vertices.push_back(p);
    }
    AxisPolygonDomain close(EdgeRole role, std::string sym = "") {
        d_.roles.push_back(role);
        d_.symbols.push_back(std::move(sym));
        d_.marks.assign(d_.vertices.size(), Mark::Neumann);
        return std::move(d_);
    }

private:
    AxisPolygonDomain d_;
};

std::string sym(const char* head, long n, int family) {
    std::string s = std::string(head) + "_" + std::to_string(n);
    if (family > 0) s += "." + std::to_string(family);
    return s;
}

// Chimney (lo, hi) x [0, H] walked right wall up, top leftwards, left wall down.
void chimney(Walker& w, double lo, double hi, double H, const std::string& right,
             const std::string& top, const std::string& left) {
    w.to({hi, H}, EdgeRole::Wall, right);
    w.to({lo, H}, EdgeRole::Top, top);
    w.to({lo, 0.0}, EdgeRole::Wall, left);
}

struct Family { std::vector<double> a, b; };

Family power_family(double p, double a, int n_max) {
    const ChimneySequence seq(Power{p, a});
    Family f;
    for (int n = 0; n <= n_max; ++n) {
        f.a.push_back(std::exp(seq.log_a(n)));
        f.b.push_back(std::exp(seq.log_b(n)));
    }
    require(f.a.back() >= kMinChimney, "truncation too coarse: a_{n_max} below 1e-8");
    return f;
}

// One strip [o, o+3] x [-depth, 0] top boundary walked from (o+3, 0) to (o, 0).
void strip_top(Walker& w, double o, const Family& P, const Family& Q, double H, int family,
               const std::string& first_symbol) {
    const int N = static_cast<int>(P.a.size()) - 1;
    w.to({o + 3.0 - Q.a[N], 0.0}, EdgeRole::Floor, first_symbol);
    for (int n = N; n >= 0; --n) {
        chimney(w, o + 3.0 - Q.b[n], o + 3.0 - Q.a[n], H, sym("c", n, family), sym("zq", n, family),
                sym("d", n, family));
        const double next = n > 0 ? o + 3.0 - Q.a[n - 1] : o + P.b[0];
        w.to({next, 0.0}, EdgeRole::Floor);
    }
    for (int n = 0; n <= N; ++n) {
        chimney(w, o + P.a[n], o + P.b[n], H, sym("beta", n, family), sym("z", n, family),
                sym("alpha", n, family));
        const double next = n < N ? o + P.b[n + 1] : o;
        w.to({next, 0.0}, EdgeRole::Floor);
    }
}

void check_trunc(const TruncationConfig& t) {
    require(t.n_max >= 0, "n_max must be non-negative");
    require(t.H_top >= 1.0 && t.depth >= 1.0, "H_top and depth must be >= 1");
    require(std::isfinite(t.H_top) && std::isfinite(t.depth) && std::isfinite(t.R_out),
            "truncation cuts must be finite");
}

bool vertical(const AxisPolygonDomain& d, std::size_t i) {
    return d.edge_start(i).x == d.edge_end(i).x;
}

void split_edge(AxisPolygonDomain& d, std::size_t i, Point p) {
    d.vertices.insert(d.vertices.begin() + static_cast<long>(i) + 1, p);
    d.roles.insert(d.roles.begin() + static_cast<long>(i) + 1, d.roles[i]);
    d.symbols.insert(d.symbols.begin() + static_cast<long>(i) + 1, "");
    d.marks.insert(d.marks.begin() + static_cast<long>(i) + 1, d.marks[i]);
}

bool strictly_inside(double v, double a, double b) { return std::min(a, b) < v && v < std::max(a, b); }

bool is_top_role(EdgeRole r) { return r == EdgeRole::Wall || r == EdgeRole::Top || r == EdgeRole::Floor; }

}  // namespace

double AxisPolygonDomain::edge_length(std::size_t i) const {
    const Point a = edge_start(i), b = edge_end(i);
    return std::fabs(a.x - b.x) + std::fabs(a.y - b.y);
}

double AxisPolygonDomain::perimeter() const {
    double s = 0.0;
    for (std::size_t i = 0; i < size(); ++i) s += edge_length(i);
    return s;
}

double AxisPolygonDomain::signed_area() const {
    double s = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
        const Point a = edge_start(i), b = edge_end(i);
        s += a.x * b.y - b.x * a.y;
    }
    return 0.5 * s;
}

bool AxisPolygonDomain::is_rectilinear() const {
    for (std::size_t i = 0; i < size(); ++i) {
        const Point a = edge_start(i), b = edge_end(i);
        if (a.x != b.x && a.y != b.y) return false;
    }
    return true;
}

AxisPolygonDomain make_polygon(const std::vector<Point>& vertices) {
    require(vertices.size() >= 4, "polygon needs at least four vertices");
    AxisPolygonDomain d;
    d.vertices = vertices;
    d.roles.assign(vertices.size(), EdgeRole::Plain);
    d.symbols.assign(vertices.size(), "");
    d.marks.assign(vertices.size(), Mark::Neumann);
    require(d.is_rectilinear(), "polygon edges must be axis-parallel");
    require(d.signed_area() > 0.0, "polygon vertices must be counterclockwise");
    return d;
}

AxisPolygonDomain build_domain(const DomainSpec& spec, const TruncationConfig& trunc) {
    validate(spec);
    check_trunc(trunc);
    const int N = trunc.n_max;
    const double H = trunc.H_top, D = trunc.depth;

    if (auto o = std::get_if<OneSided>(&spec)) {
        const ChimneySequence seq(o->seq);
        if (auto len = seq.length()) require(N < *len, "n_max exceeds explicit sequence length");
        require(seq.log_a(N) >= std::log(kMinChimney), "truncation too coarse: a_{n_max} below 1e-8");
        const double b0 = std::exp(seq.log_b(0));
        require(trunc.R_out > b0, "R_out must exceed b_0");
        Walker w({b0, 0.0});
        for (int n = 0; n <= N; ++n) {
            chimney(w, std::exp(seq.log_a(n)), std::exp(seq.log_b(n)), H, sym("beta", n, 0),
                    sym("z", n, 0), sym("alpha", n, 0));
            w.to({n < N ? std::exp(seq.log_b(n + 1)) : 0.0, 0.0}, EdgeRole::Floor);
        }
        w.to({0.0, -D}, EdgeRole::Side, "-1");
        w.to({trunc.R_out, -D}, EdgeRole::Bottom, "-i");
        w.to({trunc.R_out, 0.0}, EdgeRole::OuterSide);
        return w.close(EdgeRole::OuterFloor);
    }

    if (auto t = std::get_if<TwoSided>(&spec)) {
        const Family P = power_family(t->p, t->a, N), Q = power_family(t->q, t->a, N);
        Walker w({3.0, 0.0});
        strip_top(w, 0.0, P, Q, H, 0, "1");
        w.to({0.0, -D}, EdgeRole::Side, "-1");
        w.to({3.0, -D}, EdgeRole::Bottom, "-i");
        return w.close(EdgeRole::Side);
    }

    const auto& m = std::get<MultiK>(spec);
    const int k = static_cast<int>(m.ps.size());
    require(k == 1 || D > 1.0, "multi-strip domains need depth > 1 for the slits");
    Walker w({3.0 * k, 0.0});
    for (int j = k; j >= 1; --j) {
        const Family F = power_family(m.ps[j - 1], m.a, N);
        strip_top(w, 3.0 * (j - 1), F, F, H, j, sym("xi", j, 0));
    }
    w.to({0.0, -D}, EdgeRole::Side, "xi_0");
    for (int j = 1; j <= k; ++j) {
        w.to({3.0 * j, -D}, EdgeRole::Bottom, sym("zeta", j, 0));
        if (j < k) {
            w.to({3.0 * j, -1.0}, EdgeRole::Slit);
            w.to({3.0 * j, -D}, EdgeRole::Slit, sym("tip", j, 0));
        }
    }
    return w.close(EdgeRole::Side);
}

AxisPolygonDomain vertical_compress(const AxisPolygonDomain& domain, double eps) {
    require(eps > 0.0 && eps <= 1.0, "compression factor must lie in (0, 1]");
    AxisPolygonDomain out = domain;
    for (auto& v : out.vertices) v.y *= eps;
    return out;
}

TargetArc j0_ray(double eps, double scale) {
    require(eps > 0.0 && scale > 0.0, "ray target needs eps > 0");
    return {0.0, -eps * scale};
}

TargetArc j1_ray(double eps) {
    require(eps > 0.0, "ray target needs eps > 0");
    return {3.0, -eps};
}

TargetArc jj_ray(int j, double eps) {
    require(eps > 0.0 && j >= 0, "ray target needs eps > 0 and j >= 0");
    return {3.0 * j, -eps};
}

AxisPolygonDomain mark_quadrilateral(const AxisPolygonDomain& domain, const SourceArc& source,
                                     const TargetArc& target) {
    require(target.y_hi < 0.0 && target.y_lo < target.y_hi, "target arc must lie below the real axis");
    require(source.x_lo < source.x_hi, "source arc is empty");
    AxisPolygonDomain d = domain;
    d.marks.assign(d.size(), Mark::Neumann);
    for (std::size_t i = 0; i < d.size(); ++i)
        require(d.roles[i] != EdgeRole::Slit || d.edge_start(i).x != target.x0,
                "targets on an interior slit are not supported");

    // Split the vertical edge carrying the target endpoints.
    for (double y : {target.y_hi, target.y_lo}) {
        if (!std::isfinite(y)) continue;
        for (std::size_t i = 0; i < d.size(); ++i)
            if (vertical(d, i) && d.edge_start(i).x == target.x0 &&
                strictly_inside(y, d.edge_start(i).y, d.edge_end(i).y)) {
                split_edge(d, i, {target.x0, y});
                break;
            }
    }
    // Split floors at the source bounds.
    for (double x : {source.x_lo, source.x_hi}) {
        if (!std::isfinite(x)) continue;
        for (std::size_t i = 0; i < d.size(); ++i)
            if (d.roles[i] == EdgeRole::Floor && strictly_inside(x, d.edge_start(i).x, d.edge_end(i).x)) {
                split_edge(d, i, {x, 0.0});
                break;
            }
    }

    bool any_source = false, any_target = false;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const Point a = d.edge_start(i), b = d.edge_end(i);
        if (is_top_role(d.roles[i]) && std::min(a.x, b.x) >= source.x_lo &&
            std::max(a.x, b.x) <= source.x_hi) {
            d.marks[i] = Mark::Dirichlet1;
            any_source = true;
        }
        if (vertical(d, i) && a.x == target.x0 && std::max(a.y, b.y) <= target.y_hi &&
            std::min(a.y, b.y) >= target.y_lo) {
            require(d.marks[i] != Mark::Dirichlet1, "source and target arcs overlap");
            d.marks[i] = Mark::Dirichlet0;
            any_target = true;
        }
    }
    require(any_source, "source arc selects no boundary edge");
    require(any_target, "target arc selects no boundary edge (eps below resolution?)");
    require(is_quadrilateral(d), "marks do not form a quadrilateral");
    return d;
}

std::vector<MarkRun> mark_runs(const AxisPolygonDomain& d) {
    const std::size_t n = d.size();
    std::size_t start = 0;
    while (start < n && d.marks[start] == d.marks[(start + n - 1) % n]) ++start;
    if (start == n) return {{0, n, d.marks[0]}};
    std::vector<MarkRun> runs;
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t i = (start + k) % n;
        if (runs.empty() || runs.back().mark != d.marks[i]) runs.push_back({i, 1, d.marks[i]});
        else ++runs.back().count;
    }
    return runs;
}

bool is_quadrilateral(const AxisPolygonDomain& d) {
    int zeros = 0, ones = 0;
    for (const auto& r : mark_runs(d)) {
        if (r.mark == Mark::Dirichlet0) ++zeros;
        if (r.mark == Mark::Dirichlet1) ++ones;
    }
    return zeros == 1 && ones == 1;
}

std::vector<std::string> boundary_symbol_order(const DomainSpec& spec, int n_max) {
    validate(spec);
    require(n_max >= 0, "n_max must be non-negative");
    std::vector<std::string> out;
    auto left_family = [&](int family) {
        for (int n = 0; n <= n_max; ++n)
            for (const char* h : {"beta", "z", "alpha"}) out.push_back(sym(h, n, family));
    };
    auto right_family = [&](int family) {
        for (int n = n_max; n >= 0; --n)
            for (const char* h : {"c", "zq", "d"}) out.push_back(sym(h, n, family));
    };
    if (std::holds_alternative<OneSided>(spec)) {
        left_family(0);
        out.insert(out.end(), {"-1", "-i"});
    } else if (std::holds_alternative<TwoSided>(spec)) {
        out.push_back("1");
        right_family(0);
        left_family(0);
        out.insert(out.end(), {"-1", "-i"});
    } else {
        const int k = static_cast<int>(std::get<MultiK>(spec).ps.size());
        for (int j = k; j >= 1; --j) {
            out.push_back(sym("xi", j, 0));
            right_family(j);
            left_family(j);
        }
        out.push_back("xi_0");
        for (int j = 1; j <= k; ++j) {
            out.push_back(sym("zeta", j, 0));
            if (j < k) out.push_back(sym("tip", j, 0));
        }
    }
    return out;
}

std::vector<std::string> walk_symbols(const AxisPolygonDomain& d) {
    std::vector<std::string> out;
    for (const auto& s : d.symbols)
        if (!s.empty()) out.push_back(s);
    return out;
}

std::string to_string(Mark m) {
    switch (m) {
        case Mark::Dirichlet0: return "dirichlet0";
        case Mark::Dirichlet1: return "dirichlet1";
        default: return "neumann";
    }
}

std::string to_string(EdgeRole r) {
    switch (r) {
        case EdgeRole::Wall: return "wall";
        case EdgeRole::Top: return "top";
        case EdgeRole::Floor: return "floor";
        case EdgeRole::Side: return "side";
        case EdgeRole::Bottom: return "bottom";
        case EdgeRole::OuterFloor: return "outer_floor";
        case EdgeRole::OuterSide: return "outer_side";
        case EdgeRole::Slit: return "slit";
        default: return "plain";
    }
}

namespace {

Mark parse_mark(const std::string& s) {
    if (s == "dirichlet0") return Mark::Dirichlet0;
    if (s == "dirichlet1") return Mark::Dirichlet1;
    if (s == "neumann") return Mark::Neumann;
    throw ValidationError("unknown mark: " + s);
}

EdgeRole parse_role(const std::string& s) {
    for (auto r : {EdgeRole::Wall, EdgeRole::Top, EdgeRole::Floor, EdgeRole::Side, EdgeRole::Bottom,
                   EdgeRole::OuterFloor, EdgeRole::OuterSide, EdgeRole::Slit, EdgeRole::Plain})
        if (to_string(r) == s) return r;
    throw ValidationError("unknown edge role: " + s);
}

}  // namespace

nlohmann::json to_json(const AxisPolygonDomain& d) {
    nlohmann::json verts = nlohmann::json::array(), edges = nlohmann::json::array(),
                   arcs = nlohmann::json::array();
    for (const auto& v : d.vertices) verts.push_back({v.x, v.y});
    for (std::size_t i = 0; i < d.size(); ++i)
        edges.push_back({{"role", to_string(d.roles[i])}, {"symbol", d.symbols[i]},
                         {"mark", to_string(d.marks[i])}});
    for (const auto& r : mark_runs(d))
        arcs.push_back({{"first_edge", r.first}, {"edge_count", r.count}, {"mark", to_string(r.mark)}});
    return {{"vertices", verts}, {"edges", edges}, {"arcs", arcs}};
}

AxisPolygonDomain polygon_from_json(const nlohmann::json& j) {
    try {
        std::vector<Point> pts;
        for (const auto& v : j.at("vertices")) pts.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
        AxisPolygonDomain d = make_polygon(pts);
        if (j.contains("edges")) {
            const auto& e = j.at("edges");
            require(e.size() == d.size(), "edge list must match the vertex list");
            for (std::size_t i = 0; i < d.size(); ++i) {
                if (e[i].contains("role")) d.roles[i] = parse_role(e[i].at("role").get<std::string>());
                if (e[i].contains("symbol")) d.symbols[i] = e[i].at("symbol").get<std::string>();
                if (e[i].contains("mark")) d.marks[i] = parse_mark(e[i].at("mark").get<std::string>());
            }
        }
        return d;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed polygon: ") + e.what());
    }
}

std::string debug_dump(const AxisPolygonDomain& d) {
    std::string out;
    char buf[256];
    for (std::size_t i = 0; i < d.size(); ++i) {
        const Point a = d.edge_start(i), b = d.edge_end(i);
        std::snprintf(buf, sizeof buf, "%zu (%.17g, %.17g) -> (%.17g, %.17g) %s %s %s\n", i, a.x, a.y, b.x,
                      b.y, to_string(d.roles[i]).c_str(), d.symbols[i].empty() ? "-" : d.symbols[i].c_str(),
                      to_string(d.marks[i]).c_str());
        out += buf;
    }
    return out;
}

}  // namespace chimlab
