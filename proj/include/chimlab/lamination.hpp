#pragma once

// Geodesic boxes, the Liouville measure and atomic measured laminations on
// the unit circle. Endpoints are either numeric angles or prime-end symbols
// compared through their cyclic order.

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "chimlab/domain_spec.hpp"
#include "json.hpp"

namespace chimlab {

struct Symbol {
    enum class Kind {
        Beta, Z, Alpha,  // right wall, top and left wall of a chimney near the left end of a strip
        C, Zq, D,        // right wall, top and left wall of a chimney near the right end
        One, MinusOne, MinusI,
        Xi, Zeta, Tip
    };
    Kind kind = Kind::One;
    long n = 0;      // chimney index, or j for Xi / Zeta / Tip
    int family = 0;  // strip index for chimney symbols in a multi-strip layout

    bool operator==(const Symbol&) const = default;
};

std::string to_string(const Symbol& s);
Symbol parse_symbol(const std::string& text);

struct Angle { double theta = 0.0; };  // normalized to [0, 2pi)

Angle make_angle(double theta);

using CirclePoint = std::variant<Angle, Symbol>;

std::string to_string(const CirclePoint& p);

// Which domain the prime-end symbols refer to.
struct SymbolLayout {
    enum class Kind { OneSided, TwoSided, MultiK };
    Kind kind = Kind::OneSided;
    int k = 1;
};

SymbolLayout layout_of(const DomainSpec& spec);

using OrderKey = std::array<double, 4>;

// Position in the counterclockwise prime-end order starting at 1.
OrderKey order_key(const Symbol& s, const SymbolLayout& layout);

// Closed counterclockwise arc from `from` to `to`; from == to is a single point.
struct Arc { CirclePoint from, to; };

struct GeodesicBox { Arc I, J; };

bool in_arc(const CirclePoint& x, const Arc& arc, const SymbolLayout& layout);

double liouville_box(const CirclePoint& a, const CirclePoint& b, const CirclePoint& c,
                     const CirclePoint& d);

struct Atom {
    CirclePoint x, y;
    double weight = 0.0;
};

struct MeasuredLamination {
    SymbolLayout layout;
    std::vector<Atom> atoms;
    // Uniform weight on every chimney geodesic with index >= tail_from.
    std::optional<double> tail_weight;
    long tail_from = 0;
};

// The geodesics joining each chimney top to its two walls, for n in [n0, n1].
std::vector<std::pair<Symbol, Symbol>> chimney_geodesics(const SymbolLayout& layout, long n0, long n1);

// lambda_W with unit weights.
MeasuredLamination chimney_lamination(const SymbolLayout& layout, double weight = 1.0);

double lamination_mass(const MeasuredLamination& lam, const GeodesicBox& box);

// No two chords interleave; the tail is expanded up to n_check.
bool is_non_crossing(const MeasuredLamination& lam, long n_check = 4);

struct FreeAxis {
    std::vector<std::pair<Symbol, Symbol>> geodesics;
    double lo = 0.0, hi = 0.0;
};

struct LimitSetDescriptor {
    MeasuredLamination base;
    std::vector<FreeAxis> free_axes;
    // Pairwise rational-independence heuristic for the logs of the p_j.
    std::optional<bool> independence_advisory;

    std::size_t dimension() const { return free_axes.size(); }
};

// [m, M] for each chimney family of the domain.
std::vector<std::pair<double, double>> axis_intervals(const DomainSpec& spec);

MeasuredLamination build_limit_lamination(const DomainSpec& spec, const std::vector<double>& weights);

LimitSetDescriptor limit_set(const DomainSpec& spec);

double mod_liouville_residual(double mod_value, double L_value);

// Continued-fraction test: true when no ratio ln p_i / ln p_j has a convergent
// with denominator <= max_den matching it to 1e-10.
bool rationally_independent_advisory(const std::vector<double>& ps, long max_den = 10000);

nlohmann::json to_json(const MeasuredLamination& lam);
nlohmann::json to_json(const LimitSetDescriptor& ls);

}  // namespace chimlab
