#pragma once

// Chimney sequences {a_n}, {b_n} kept in log space, the exponents m_n, M_n
// and the profile Phi_p used to hit prescribed limit points.

#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

namespace chimlab {

struct Factorial {};
struct RisingFactorial { int p = 1, q = 1, r = 2; };
struct Power { double p = 2.0, a = 0.5; };
struct PowerPair { double p = 2.0, q = 3.0, a = 0.5; };
struct Explicit { std::vector<double> log_a, log_b; };

using SequenceSpec = std::variant<Factorial, RisingFactorial, Power, PowerPair, Explicit>;

void validate(const SequenceSpec& spec);

class ChimneySequence {
public:
    explicit ChimneySequence(SequenceSpec spec);

    const SequenceSpec& spec() const { return spec_; }
    double log_a(long n) const;
    double log_b(long n) const;
    // Number of terms for Explicit specs; empty for infinite families.
    std::optional<long> length() const;

private:
    SequenceSpec spec_;
};

ChimneySequence make_sequence(const SequenceSpec& spec);

// Walks n = 0, 1, 2, ... producing ln a_n and ln b_n in O(1) per step.
class SequenceCursor {
public:
    explicit SequenceCursor(const ChimneySequence& seq);
    long n() const { return n_; }
    double log_a() const { return la_; }
    double log_b() const { return lb_; }
    void advance();

private:
    void load();
    const ChimneySequence* seq_;
    long n_ = 0;
    double la_ = 0.0, lb_ = 0.0;
};

struct LogProducts { double logA = 0.0, logB = 0.0; };

LogProducts log_products(const ChimneySequence& seq, long n);

struct ExponentPair { double m = 0.0, M = 0.0; };

ExponentPair exponents(const ChimneySequence& seq, long n);

// Both algebraic forms of m_n and M_n, for identity checks.
struct ExponentForms { double m_first, m_second, M_first, M_second; };

ExponentForms exponent_forms(const ChimneySequence& seq, long n);

struct LimitEstimate {
    double m_hat = 0.0, M_hat = 0.0;
    long argmin = 0, argmax = 0;
    double drift_m = 0.0, drift_M = 0.0;  // change over the last quartile
    bool settled = false;                 // both drifts below 1e-3
};

LimitEstimate exponent_limits(const ChimneySequence& seq, long n_min, long n_max);

struct ValidityReport {
    double c_est = 0.0;
    long c_at = 0;
    std::vector<double> root_seq;  // max(ln a_n / n, ln b_n / n), n = 1..N
    bool ratio_ok = false, roots_ok = false, pass = false;
};

ValidityReport validate_hypotheses(const ChimneySequence& seq, long N);

double phi(double p, double alpha);

enum class PhiBranch { Decreasing, Increasing };

double invert_phi(double p, double s, PhiBranch branch = PhiBranch::Decreasing);

std::pair<double, double> closed_form_limits(const SequenceSpec& spec);
bool has_closed_form(const SequenceSpec& spec);

// m_p = 1 + 1/(p+1), M_p = 2 - 1/(p+1).
std::pair<double, double> power_limits(double p);

// PowerPair with limits (1 + alpha, 1 + beta) for 0 < alpha < beta < 1.
PowerPair power_pair_for_interval(double alpha, double beta, double a = 0.5);

void to_json(nlohmann::json& j, const SequenceSpec& spec);
void from_json(const nlohmann::json& j, SequenceSpec& spec);

}  // namespace chimlab
