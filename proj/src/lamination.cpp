#include "chimlab/lamination.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "chimlab/errors.hpp"

namespace chimlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct KindName { Symbol::Kind kind; const char* name; };

constexpr KindName kIndexed[] = {
    {Symbol::Kind::Beta, "beta"}, {Symbol::Kind::Z, "z"},       {Symbol::Kind::Alpha, "alpha"},
    {Symbol::Kind::C, "c"},       {Symbol::Kind::Zq, "zq"},     {Symbol::Kind::D, "d"},
    {Symbol::Kind::Xi, "xi"},     {Symbol::Kind::Zeta, "zeta"}, {Symbol::Kind::Tip, "tip"},
};

bool is_chimney(Symbol::Kind k) {
    using K = Symbol::Kind;
    return k == K::Beta || k == K::Z || k == K::Alpha || k == K::C || k == K::Zq || k == K::D;
}

bool is_left_side(Symbol::Kind k) {
    using K = Symbol::Kind;
    return k == K::Beta || k == K::Z || k == K::Alpha;
}

double slot(Symbol::Kind k) {
    using K = Symbol::Kind;
    switch (k) {
        case K::Beta: case K::C: return 0.0;
        case K::Z: case K::Zq: return 1.0;
        default: return 2.0;
    }
}

double rel_angle(double from, double x) {
    double d = std::fmod(x - from, kTwoPi);
    if (d < 0) d += kTwoPi;
    return d;
}

double angle_of(const CirclePoint& p) {
    if (auto a = std::get_if<Angle>(&p)) return a->theta;
    throw ValidationError("numeric angle required, got symbol " + to_string(p));
}

bool key_in_arc(const OrderKey& x, const OrderKey& f, const OrderKey& t) {
    if (f <= t) return f <= x && x <= t;
    return x >= f || x <= t;
}

// Strict interior of the open arc (f, t), for chord interleaving.
bool key_strictly_between(const OrderKey& x, const OrderKey& f, const OrderKey& t) {
    if (f < t) return f < x && x < t;
    return x > f || x < t;
}

OrderKey key_of(const CirclePoint& p, const SymbolLayout& layout) {
    if (auto a = std::get_if<Angle>(&p)) return {a->theta, 0, 0, 0};
    return order_key(std::get<Symbol>(p), layout);
}

bool is_symbolic(const CirclePoint& p) { return std::holds_alternative<Symbol>(p); }

}  // namespace

std::string to_string(const Symbol& s) {
    using K = Symbol::Kind;
    if (s.kind == K::One) return "1";
    if (s.kind == K::MinusOne) return "-1";
    if (s.kind == K::MinusI) return "-i";
    for (const auto& kn : kIndexed) {
        if (kn.kind != s.kind) continue;
        std::string out = std::string(kn.name) + "_" + std::to_string(s.n);
        if (is_chimney(s.kind) && s.family > 0) out += "." + std::to_string(s.family);
        return out;
    }
    return "?";
}

Symbol parse_symbol(const std::string& text) {
    using K = Symbol::Kind;
    if (text == "1") return {K::One, 0, 0};
    if (text == "-1") return {K::MinusOne, 0, 0};
    if (text == "-i") return {K::MinusI, 0, 0};
    const auto us = text.find('_');
    if (us == std::string::npos) throw ValidationError("unknown symbol: " + text);
    const std::string head = text.substr(0, us);
    std::string rest = text.substr(us + 1);
    int family = 0;
    if (const auto dot = rest.find('.'); dot != std::string::npos) {
        try {
            family = std::stoi(rest.substr(dot + 1));
        } catch (const std::exception&) {
            throw ValidationError("bad family index in symbol: " + text);
        }
        rest = rest.substr(0, dot);
    }
    long n = 0;
    try {
        std::size_t used = 0;
        n = std::stol(rest, &used);
        if (used != rest.size()) throw ValidationError("bad index");
    } catch (const std::exception&) {
        throw ValidationError("bad index in symbol: " + text);
    }
    require(n >= 0 && family >= 0, "symbol indices must be non-negative: " + text);
    for (const auto& kn : kIndexed)
        if (head == kn.name) {
            require(family == 0 || is_chimney(kn.kind), "only chimney symbols carry a family: " + text);
            return {kn.kind, n, family};
        }
    throw ValidationError("unknown symbol: " + text);
}

Angle make_angle(double theta) {
    require(std::isfinite(theta), "angle must be finite");
    return Angle{rel_angle(0.0, theta)};
}

std::string to_string(const CirclePoint& p) {
    if (auto s = std::get_if<Symbol>(&p)) return to_string(*s);
    return std::to_string(std::get<Angle>(p).theta);
}

SymbolLayout layout_of(const DomainSpec& spec) {
    if (std::holds_alternative<OneSided>(spec)) return {SymbolLayout::Kind::OneSided, 1};
    if (std::holds_alternative<TwoSided>(spec)) return {SymbolLayout::Kind::TwoSided, 1};
    return {SymbolLayout::Kind::MultiK, static_cast<int>(std::get<MultiK>(spec).ps.size())};
}

OrderKey order_key(const Symbol& s, const SymbolLayout& layout) {
    using K = Symbol::Kind;
    const auto n = static_cast<double>(s.n);
    switch (layout.kind) {
        case SymbolLayout::Kind::OneSided:
            require(s.family == 0, "one-sided symbols carry no family");
            if (s.kind == K::One) return {0, 0, 0, 0};
            if (is_left_side(s.kind)) return {0, n, slot(s.kind), 0};
            if (s.kind == K::MinusOne) return {1, 0, 0, 0};
            if (s.kind == K::MinusI) return {2, 0, 0, 0};
            break;
        case SymbolLayout::Kind::TwoSided:
            require(s.family == 0, "two-sided symbols carry no family");
            if (s.kind == K::One) return {0, 0, 0, 0};
            if (is_chimney(s.kind)) {
                if (is_left_side(s.kind)) return {2, n, slot(s.kind), 0};
                return {1, -n, slot(s.kind), 0};
            }
            if (s.kind == K::MinusOne) return {3, 0, 0, 0};
            if (s.kind == K::MinusI) return {4, 0, 0, 0};
            break;
        case SymbolLayout::Kind::MultiK: {
            const int k = layout.k;
            const double kk = k;
            if (is_chimney(s.kind)) {
                require(s.family >= 1 && s.family <= k, "strip index out of range: " + to_string(s));
                const double base = 3.0 * (k - s.family);
                if (is_left_side(s.kind)) return {base + 2, n, slot(s.kind), 0};
                return {base + 1, -n, slot(s.kind), 0};
            }
            if (s.kind == K::One) return {0, 0, 0, 0};
            if (s.kind == K::MinusOne) return {3 * kk, 0, 0, 0};
            if (s.kind == K::Xi) {
                require(s.n >= 0 && s.n <= k, "xi index out of range");
                return {3.0 * (k - s.n), 0, 0, 0};
            }
            if (s.kind == K::Zeta || (s.kind == K::MinusI && k == 1)) {
                const double j = s.kind == K::MinusI ? 1 : n;
                require(j >= 1 && j <= k, "zeta index out of range");
                return {3 * kk + 2 * j - 1, 0, 0, 0};
            }
            if (s.kind == K::Tip) {
                require(s.n >= 1 && s.n < k, "slit tip index out of range");
                return {3 * kk + 2 * n, 0, 0, 0};
            }
            break;
        }
    }
    throw ValidationError("symbol " + to_string(s) + " does not belong to this domain layout");
}

bool in_arc(const CirclePoint& x, const Arc& arc, const SymbolLayout& layout) {
    const bool sym = is_symbolic(x);
    require(is_symbolic(arc.from) == sym && is_symbolic(arc.to) == sym,
            "cannot compare symbolic and numeric circle points without an order embedding");
    return key_in_arc(key_of(x, layout), key_of(arc.from, layout), key_of(arc.to, layout));
}

double liouville_box(const CirclePoint& a, const CirclePoint& b, const CirclePoint& c,
                     const CirclePoint& d) {
    const double ta = angle_of(a), tb = angle_of(b), tc = angle_of(c), td = angle_of(d);
    const double rb = rel_angle(ta, tb), rc = rel_angle(ta, tc), rd = rel_angle(ta, td);
    require(0.0 < rb && rb < rc && rc < rd && rd < kTwoPi,
            "liouville_box needs four distinct points in counterclockwise order");
    auto chord = [](double s, double t) { return 2.0 * std::fabs(std::sin(0.5 * (s - t))); };
    return std::log(chord(ta, tc)) + std::log(chord(tb, td)) - std::log(chord(ta, td)) -
           std::log(chord(tb, tc));
}

std::vector<std::pair<Symbol, Symbol>> chimney_geodesics(const SymbolLayout& layout, long n0, long n1) {
    using K = Symbol::Kind;
    std::vector<std::pair<Symbol, Symbol>> out;
    std::vector<int> fams;
    bool right_side = layout.kind != SymbolLayout::Kind::OneSided;
    if (layout.kind == SymbolLayout::Kind::MultiK)
        for (int j = 1; j <= layout.k; ++j) fams.push_back(j);
    else
        fams.push_back(0);
    for (int f : fams)
        for (long n = n0; n <= n1; ++n) {
            out.push_back({{K::Z, n, f}, {K::Alpha, n, f}});
            out.push_back({{K::Z, n, f}, {K::Beta, n, f}});
            if (right_side) {
                out.push_back({{K::Zq, n, f}, {K::C, n, f}});
                out.push_back({{K::Zq, n, f}, {K::D, n, f}});
            }
        }
    return out;
}

MeasuredLamination chimney_lamination(const SymbolLayout& layout, double weight) {
    require(weight >= 0.0, "weights must be non-negative");
    MeasuredLamination lam;
    lam.layout = layout;
    lam.tail_weight = weight;
    lam.tail_from = 0;
    return lam;
}

double lamination_mass(const MeasuredLamination& lam, const GeodesicBox& box) {
    const auto& L = lam.layout;
    const CirclePoint ends[] = {box.I.from, box.I.to, box.J.from, box.J.to};
    const bool sym = is_symbolic(ends[0]);
    for (const auto& e : ends)
        require(is_symbolic(e) == sym, "box mixes symbolic and numeric endpoints");
    for (const auto& a : lam.atoms)
        require(is_symbolic(a.x) == sym && is_symbolic(a.y) == sym,
                "lamination and box use incomparable coordinates");
    require(!lam.tail_weight || sym, "a chimney tail needs a symbolic box");
    require(!in_arc(box.I.from, box.J, L) && !in_arc(box.I.to, box.J, L) &&
                !in_arc(box.J.from, box.I, L) && !in_arc(box.J.to, box.I, L),
            "box arcs must be disjoint");

    auto crosses = [&](const CirclePoint& x, const CirclePoint& y) {
        return (in_arc(x, box.I, L) && in_arc(y, box.J, L)) ||
               (in_arc(y, box.I, L) && in_arc(x, box.J, L));
    };
    double mass = 0.0;
    for (const auto& a : lam.atoms) {
        require(a.weight >= 0.0, "weights must be non-negative");
        if (crosses(a.x, a.y)) mass += a.weight;
    }
    if (lam.tail_weight && *lam.tail_weight > 0.0) {
        // Chimneys beyond every index named by the box sit inside one gap of
        // the box endpoints, so their geodesics cannot cross it.
        long n_cut = lam.tail_from;
        for (const auto& e : ends) {
            const auto& s = std::get<Symbol>(e);
            if (is_chimney(s.kind)) n_cut = std::max(n_cut, s.n + 1);
        }
        for (const auto& [x, y] : chimney_geodesics(L, lam.tail_from, n_cut))
            if (crosses(x, y)) mass += *lam.tail_weight;
    }
    return mass;
}

bool is_non_crossing(const MeasuredLamination& lam, long n_check) {
    std::vector<std::pair<OrderKey, OrderKey>> chords;
    for (const auto& a : lam.atoms) {
        require(is_symbolic(a.x) == is_symbolic(a.y), "atom mixes symbolic and numeric endpoints");
        chords.push_back({key_of(a.x, lam.layout), key_of(a.y, lam.layout)});
    }
    if (lam.tail_weight)
        for (const auto& [x, y] : chimney_geodesics(lam.layout, lam.tail_from, lam.tail_from + n_check))
            chords.push_back({order_key(x, lam.layout), order_key(y, lam.layout)});
    for (std::size_t i = 0; i < chords.size(); ++i)
        for (std::size_t j = i + 1; j < chords.size(); ++j) {
            const auto& [f, t] = chords[i];
            const auto& [u, v] = chords[j];
            if (u == f || u == t || v == f || v == t) continue;
            if (key_strictly_between(u, f, t) != key_strictly_between(v, f, t)) return false;
        }
    return true;
}

std::vector<std::pair<double, double>> axis_intervals(const DomainSpec& spec) {
    validate(spec);
    if (auto o = std::get_if<OneSided>(&spec)) {
        if (has_closed_form(o->seq)) return {closed_form_limits(o->seq)};
        const ChimneySequence seq(o->seq);
        const long len = *seq.length();
        require(len >= 3, "explicit sequence too short to estimate limits");
        const auto est = exponent_limits(seq, std::max(1L, len / 2), len - 1);
        return {{est.m_hat, est.M_hat}};
    }
    if (auto t = std::get_if<TwoSided>(&spec)) return {power_limits(t->p), power_limits(t->q)};
    std::vector<std::pair<double, double>> out;
    for (double p : std::get<MultiK>(spec).ps) out.push_back(power_limits(p));
    return out;
}

namespace {

std::vector<std::vector<std::pair<Symbol, Symbol>>> distinguished_geodesics(const DomainSpec& spec) {
    using K = Symbol::Kind;
    const Symbol minus_one{K::MinusOne, 0, 0}, minus_i{K::MinusI, 0, 0}, one{K::One, 0, 0};
    if (std::holds_alternative<OneSided>(spec)) return {{{minus_one, minus_i}}};
    if (std::holds_alternative<TwoSided>(spec)) return {{{minus_one, minus_i}}, {{one, minus_i}}};
    const int k = static_cast<int>(std::get<MultiK>(spec).ps.size());
    std::vector<std::vector<std::pair<Symbol, Symbol>>> out;
    for (int j = 1; j <= k; ++j) {
        const Symbol zeta{K::Zeta, j, 0};
        out.push_back({{zeta, Symbol{K::Xi, j - 1, 0}}, {zeta, Symbol{K::Xi, j, 0}}});
    }
    return out;
}

std::optional<bool> advisory_for(const DomainSpec& spec) {
    if (auto t = std::get_if<TwoSided>(&spec)) return rationally_independent_advisory({t->p, t->q});
    if (auto m = std::get_if<MultiK>(&spec)) return rationally_independent_advisory(m->ps);
    return std::nullopt;
}

}  // namespace

MeasuredLamination build_limit_lamination(const DomainSpec& spec, const std::vector<double>& weights) {
    const auto axes = axis_intervals(spec);
    require(weights.size() == axes.size(), "need one weight per chimney family");
    MeasuredLamination lam = chimney_lamination(layout_of(spec), 2.0 / 3.0);
    const auto geos = distinguished_geodesics(spec);
    for (std::size_t j = 0; j < axes.size(); ++j) {
        const double tol = 1e-12;
        require(weights[j] >= axes[j].first - tol && weights[j] <= axes[j].second + tol,
                "weight " + std::to_string(weights[j]) + " outside its axis interval");
        for (const auto& [x, y] : geos[j]) lam.atoms.push_back({x, y, weights[j]});
    }
    return lam;
}

LimitSetDescriptor limit_set(const DomainSpec& spec) {
    LimitSetDescriptor out;
    out.base = chimney_lamination(layout_of(spec), 2.0 / 3.0);
    const auto axes = axis_intervals(spec);
    const auto geos = distinguished_geodesics(spec);
    for (std::size_t j = 0; j < axes.size(); ++j)
        out.free_axes.push_back({geos[j], axes[j].first, axes[j].second});
    out.independence_advisory = advisory_for(spec);
    return out;
}

double mod_liouville_residual(double mod_value, double L_value) {
    require(std::isfinite(mod_value) && std::isfinite(L_value), "residual needs finite inputs");
    return mod_value - L_value / std::numbers::pi - (2.0 / std::numbers::pi) * std::log(4.0);
}

bool rationally_independent_advisory(const std::vector<double>& ps, long max_den) {
    for (std::size_t i = 0; i < ps.size(); ++i)
        for (std::size_t j = i + 1; j < ps.size(); ++j) {
            const double x = std::log(ps[i]) / std::log(ps[j]);
            // Convergents h/k of the continued fraction of x.
            double h0 = 1, h1 = std::floor(x), k0 = 0, k1 = 1, r = x - std::floor(x);
            while (k1 <= max_den) {
                if (std::fabs(x - h1 / k1) < 1e-10) return false;
                if (r < 1e-15) break;
                const double inv = 1.0 / r, ai = std::floor(inv);
                r = inv - ai;
                const double h2 = ai * h1 + h0, k2 = ai * k1 + k0;
                h0 = h1; h1 = h2; k0 = k1; k1 = k2;
            }
        }
    return true;
}

namespace {

nlohmann::json endpoint_json(const CirclePoint& p) {
    if (auto s = std::get_if<Symbol>(&p)) return to_string(*s);
    return std::get<Angle>(p).theta;
}

nlohmann::json pair_json(const Symbol& x, const Symbol& y) { return {to_string(x), to_string(y)}; }

}  // namespace

nlohmann::json to_json(const MeasuredLamination& lam) {
    nlohmann::json atoms = nlohmann::json::array();
    for (const auto& a : lam.atoms)
        atoms.push_back({{endpoint_json(a.x), endpoint_json(a.y)}, a.weight});
    nlohmann::json j = {{"atoms", atoms}};
    if (lam.tail_weight) {
        j["tail_weight"] = *lam.tail_weight;
        j["tail_from"] = lam.tail_from;
    }
    return j;
}

nlohmann::json to_json(const LimitSetDescriptor& ls) {
    nlohmann::json axes = nlohmann::json::array();
    for (const auto& ax : ls.free_axes) {
        nlohmann::json g = nlohmann::json::array();
        for (const auto& [x, y] : ax.geodesics) g.push_back(pair_json(x, y));
        axes.push_back({{"geodesics", g}, {"interval", {ax.lo, ax.hi}}});
    }
    nlohmann::json j = {{"base", to_json(ls.base)}, {"free_axes", axes}, {"dimension", ls.dimension()}};
    if (ls.independence_advisory) j["independence_advisory"] = *ls.independence_advisory;
    return j;
}

}  // namespace chimlab
