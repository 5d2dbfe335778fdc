#pragma once

#include <variant>
#include <vector>

#include "chimlab/seqlab.hpp"
#include "json.hpp"

namespace chimlab {

// Quadrant with chimneys (a_n, b_n) x [0, inf).
struct OneSided { SequenceSpec seq; };
// Strip 0 < Re z < 3 with power-p chimneys near 0 and power-q chimneys near 3.
struct TwoSided { double p = 2.0, q = 3.0, a = 0.5; };
// k strips of width 3 side by side, joined by the channel (0, 3k) x (-1, 0).
struct MultiK { std::vector<double> ps; double a = 0.5; };

using DomainSpec = std::variant<OneSided, TwoSided, MultiK>;

void validate(const DomainSpec& spec);

// Number of independent chimney families (axes of the limit set).
int family_count(const DomainSpec& spec);

void to_json(nlohmann::json& j, const DomainSpec& spec);
void from_json(const nlohmann::json& j, DomainSpec& spec);

}  // namespace chimlab
