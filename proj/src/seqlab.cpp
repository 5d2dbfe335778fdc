#include "chimlab/seqlab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "chimlab/errors.hpp"

namespace chimlab {

namespace {

template <class... Ts> struct overloaded : Ts... { using Ts::operator()...; };
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

// ln[(x)^{n̄}] for the rising factorial x(x+1)...(x+n-1).
double log_rising(double x, int n) { return std::lgamma(x + n) - std::lgamma(x); }

double rising_step(int r, int s, long n) {
    const double x = static_cast<double>(n) * r + 1.0;
    return log_rising(x, s) - log_rising(x, r);
}

double finite_or_throw(double v, long n) {
    if (!std::isfinite(v))
        throw ValidationError("sequence term not representable at n=" + std::to_string(n));
    return v;
}

// Compensated long double accumulator; keeps partial log-products exact to
// well below the two-form tolerance even for n ~ 1e6.
struct Accumulator {
    long double sum = 0.0L, comp = 0.0L;
    void add(long double v) {
        long double t = sum + v;
        if (std::fabs(sum) >= std::fabs(v)) comp += (sum - t) + v;
        else comp += (v - t) + sum;
        sum = t;
    }
    long double value() const { return sum + comp; }
};

}  // namespace

void validate(const SequenceSpec& spec) {
    std::visit(overloaded{
        [](const Factorial&) {},
        [](const RisingFactorial& s) {
            require(s.p >= 1 && s.q >= 1, "rising factorial needs p, q >= 1");
            require(s.r > std::max(s.p, s.q), "rising factorial needs r > max(p, q)");
        },
        [](const Power& s) {
            require(s.p > 1.0 && std::isfinite(s.p), "power needs p > 1");
            require(s.a > 0.0 && s.a < 1.0, "power needs a in (0,1)");
        },
        [](const PowerPair& s) {
            require(s.p > 1.0 && s.q > 1.0 && std::isfinite(s.p) && std::isfinite(s.q),
                    "power pair needs p, q > 1");
            require(s.a > 0.0 && s.a < 1.0, "power pair needs a in (0,1)");
        },
        [](const Explicit& s) {
            require(!s.log_a.empty() && s.log_a.size() == s.log_b.size(),
                    "explicit sequence needs equal, non-empty log_a and log_b");
            require(s.log_b[0] == 0.0, "explicit sequence needs log_b[0] = 0");
            for (std::size_t n = 0; n < s.log_a.size(); ++n) {
                require(std::isfinite(s.log_a[n]) && std::isfinite(s.log_b[n]),
                        "explicit sequence values must be finite");
                require(s.log_a[n] < s.log_b[n],
                        "interlacing violated: need a_n < b_n at n=" + std::to_string(n));
                if (n > 0)
                    require(s.log_b[n] < s.log_a[n - 1],
                            "interlacing violated: need b_n < a_{n-1} at n=" + std::to_string(n));
            }
        },
    }, spec);
}

ChimneySequence::ChimneySequence(SequenceSpec spec) : spec_(std::move(spec)) { validate(spec_); }

ChimneySequence make_sequence(const SequenceSpec& spec) { return ChimneySequence(spec); }

std::optional<long> ChimneySequence::length() const {
    if (auto e = std::get_if<Explicit>(&spec_)) return static_cast<long>(e->log_a.size());
    return std::nullopt;
}

double ChimneySequence::log_a(long n) const {
    require(n >= 0, "sequence index must be non-negative");
    return std::visit(overloaded{
        [n](const Factorial&) { return -std::lgamma(2.0 * n + 3.0); },
        [n](const RisingFactorial& s) {
            double v = rising_step(s.r, s.p, 0);
            for (long k = 1; k <= n; ++k) v += rising_step(s.r, s.q, k) + rising_step(s.r, s.p, k);
            return v;
        },
        [n](const Power& s) {
            return finite_or_throw(std::pow(s.p, 2.0 * n) * std::log(s.a), n);
        },
        [n](const PowerPair& s) {
            return finite_or_throw(std::pow(s.p * s.q, static_cast<double>(n)) * std::log(s.a), n);
        },
        [n](const Explicit& s) {
            require(n < static_cast<long>(s.log_a.size()), "explicit sequence index out of range");
            return s.log_a[n];
        },
    }, spec_);
}

double ChimneySequence::log_b(long n) const {
    require(n >= 0, "sequence index must be non-negative");
    if (n == 0) {
        if (auto e = std::get_if<Explicit>(&spec_)) return e->log_b[0];
        return 0.0;
    }
    return std::visit(overloaded{
        [n](const Factorial&) { return -std::lgamma(2.0 * n + 2.0); },
        [this, n](const RisingFactorial& s) { return log_a(n - 1) + rising_step(s.r, s.q, n); },
        [n](const Power& s) {
            return finite_or_throw(std::pow(s.p, 2.0 * n - 1.0) * std::log(s.a), n);
        },
        [n](const PowerPair& s) {
            return finite_or_throw(
                std::pow(s.p, n - 1.0) * std::pow(s.q, static_cast<double>(n)) * std::log(s.a), n);
        },
        [n](const Explicit& s) {
            require(n < static_cast<long>(s.log_b.size()), "explicit sequence index out of range");
            return s.log_b[n];
        },
    }, spec_);
}

SequenceCursor::SequenceCursor(const ChimneySequence& seq) : seq_(&seq) { load(); }

void SequenceCursor::load() {
    if (auto rf = std::get_if<RisingFactorial>(&seq_->spec())) {
        if (n_ == 0) {
            lb_ = 0.0;
        } else {
            lb_ = la_ + rising_step(rf->r, rf->q, n_);
        }
        la_ = lb_ + rising_step(rf->r, rf->p, n_);
        return;
    }
    la_ = seq_->log_a(n_);
    lb_ = seq_->log_b(n_);
}

void SequenceCursor::advance() {
    ++n_;
    load();
}

LogProducts log_products(const ChimneySequence& seq, long n) {
    require(n >= 0, "log_products needs n >= 0");
    Accumulator A, B;
    SequenceCursor c(seq);
    for (;;) {
        A.add(c.log_a());
        B.add(c.log_b());
        if (c.n() == n) break;
        c.advance();
    }
    return {static_cast<double>(A.value()), static_cast<double>(B.value())};
}

namespace {

struct WindowState {
    long double A_prev;  // logA_{n-1}
    long double A;       // logA_n
    long double B;       // logB_n
    long double B_prev;  // logB_{n-1}
    double la, lb;
};

ExponentForms forms_from(const WindowState& w) {
    const long double xa = -static_cast<long double>(w.la);
    const long double xb = -static_cast<long double>(w.lb);
    ExponentForms f{};
    f.m_first = static_cast<double>(1.0L + (w.A_prev - w.B) / xa);
    f.m_second = static_cast<double>(2.0L - (w.B - w.A) / xa);
    f.M_first = static_cast<double>(1.0L + (w.A_prev - w.B) / xb);
    f.M_second = static_cast<double>(2.0L - (w.B_prev - w.A_prev) / xb);
    return f;
}

// Visits n = 1..n_last with running log-products.
template <class F>
void walk_exponents(const ChimneySequence& seq, long n_last, F&& visit) {
    Accumulator A, B;
    SequenceCursor c(seq);
    A.add(c.log_a());
    B.add(c.log_b());
    while (c.n() < n_last) {
        const long double A_prev = A.value(), B_prev = B.value();
        c.advance();
        A.add(c.log_a());
        B.add(c.log_b());
        visit(c.n(), WindowState{A_prev, A.value(), B.value(), B_prev, c.log_a(), c.log_b()});
    }
}

void check_range(const ChimneySequence& seq, long n_last) {
    if (auto len = seq.length())
        require(n_last < *len, "window exceeds explicit sequence length");
}

}  // namespace

ExponentForms exponent_forms(const ChimneySequence& seq, long n) {
    require(n >= 1, "exponents need n >= 1");
    check_range(seq, n);
    ExponentForms out{};
    walk_exponents(seq, n, [&](long k, const WindowState& w) {
        if (k == n) out = forms_from(w);
    });
    return out;
}

ExponentPair exponents(const ChimneySequence& seq, long n) {
    const ExponentForms f = exponent_forms(seq, n);
    return {f.m_first, f.M_first};
}

LimitEstimate exponent_limits(const ChimneySequence& seq, long n_min, long n_max) {
    require(n_min >= 1 && n_min < n_max, "exponent window needs 1 <= n_min < n_max");
    check_range(seq, n_max);
    LimitEstimate est;
    est.m_hat = std::numeric_limits<double>::infinity();
    est.M_hat = -std::numeric_limits<double>::infinity();
    const long q_start = n_max - (n_max - n_min) / 4;
    double m_q = 0.0, M_q = 0.0, m_last = 0.0, M_last = 0.0;
    walk_exponents(seq, n_max, [&](long n, const WindowState& w) {
        if (n < n_min) return;
        const ExponentForms f = forms_from(w);
        if (f.m_first < est.m_hat) { est.m_hat = f.m_first; est.argmin = n; }
        if (f.M_first > est.M_hat) { est.M_hat = f.M_first; est.argmax = n; }
        if (n == q_start) { m_q = f.m_first; M_q = f.M_first; }
        m_last = f.m_first;
        M_last = f.M_first;
    });
    est.drift_m = std::fabs(m_last - m_q);
    est.drift_M = std::fabs(M_last - M_q);
    est.settled = est.drift_m < 1e-3 && est.drift_M < 1e-3;
    return est;
}

ValidityReport validate_hypotheses(const ChimneySequence& seq, long N) {
    require(N >= 2, "validate_hypotheses needs N >= 2");
    if (auto len = seq.length()) N = std::min(N, *len - 1);
    ValidityReport rep;
    rep.c_est = 0.0;
    if (N < 1) return rep;
    SequenceCursor c(seq);
    double prev_la = c.log_a(), prev_lb = c.log_b();
    bool monotone = true;
    for (long n = 1; n <= N; ++n) {
        c.advance();
        const double r1 = std::exp(c.log_b() - prev_la);   // b_n / a_{n-1}
        const double r2 = std::exp(prev_la - prev_lb);     // a_{n-1} / b_{n-1}
        const double r = std::max(r1, r2);
        if (r > rep.c_est) { rep.c_est = r; rep.c_at = n - 1; }
        const double root = std::max(c.log_a() / n, c.log_b() / n);
        if (!rep.root_seq.empty() && root > rep.root_seq.back()) monotone = false;
        rep.root_seq.push_back(root);
        prev_la = c.log_a();
        prev_lb = c.log_b();
    }
    rep.ratio_ok = rep.c_est < 1.0;
    rep.roots_ok = monotone && rep.root_seq.size() >= 2 && rep.root_seq.back() < rep.root_seq.front();
    rep.pass = rep.ratio_ok && rep.roots_ok;
    return rep;
}

double phi(double p, double alpha) {
    require(p > 1.0, "phi needs p > 1");
    require(alpha >= 1.0 && alpha <= p * p, "phi needs alpha in [1, p^2]");
    if (alpha <= p) return 1.0 + p / (alpha * (p + 1.0));
    return 2.0 - p * p / (alpha * (p + 1.0));
}

std::pair<double, double> power_limits(double p) {
    return {1.0 + 1.0 / (p + 1.0), 2.0 - 1.0 / (p + 1.0)};
}

double invert_phi(double p, double s, PhiBranch branch) {
    require(p > 1.0, "invert_phi needs p > 1");
    const auto [m, M] = power_limits(p);
    const double slack = 1e-14;
    require(s >= m - slack && s <= M + slack, "invert_phi needs s in [m_p, M_p]");
    s = std::clamp(s, m, M);
    if (branch == PhiBranch::Decreasing)
        return std::clamp(p / ((s - 1.0) * (p + 1.0)), 1.0, p);
    return std::clamp(p * p / ((2.0 - s) * (p + 1.0)), p, p * p);
}

bool has_closed_form(const SequenceSpec& spec) { return !std::holds_alternative<Explicit>(spec); }

std::pair<double, double> closed_form_limits(const SequenceSpec& spec) {
    validate(spec);
    return std::visit(overloaded{
        [](const Factorial&) { return std::pair{1.5, 1.5}; },
        [](const RisingFactorial& s) {
            const double v = 2.0 - static_cast<double>(s.r - s.p) / (2 * s.r - s.p - s.q);
            return std::pair{v, v};
        },
        [](const Power& s) { return power_limits(s.p); },
        [](const PowerPair& s) {
            const double d = s.p * s.q - 1.0;
            return std::pair{1.0 + (s.q - 1.0) / d, 1.0 + s.p * (s.q - 1.0) / d};
        },
        [](const Explicit&) -> std::pair<double, double> {
            throw ValidationError("explicit sequences have no closed-form limits");
        },
    }, spec);
}

PowerPair power_pair_for_interval(double alpha, double beta, double a) {
    require(alpha > 0.0 && alpha < beta && beta < 1.0, "need 0 < alpha < beta < 1");
    return PowerPair{beta / alpha, (1.0 - alpha) / (1.0 - beta), a};
}

void to_json(nlohmann::json& j, const SequenceSpec& spec) {
    std::visit(overloaded{
        [&](const Factorial&) { j = {{"kind", "factorial"}}; },
        [&](const RisingFactorial& s) {
            j = {{"kind", "rising_factorial"}, {"p", s.p}, {"q", s.q}, {"r", s.r}};
        },
        [&](const Power& s) { j = {{"kind", "power"}, {"p", s.p}, {"a", s.a}}; },
        [&](const PowerPair& s) {
            j = {{"kind", "power_pair"}, {"p", s.p}, {"q", s.q}, {"a", s.a}};
        },
        [&](const Explicit& s) { j = {{"kind", "explicit"}, {"log_a", s.log_a}, {"log_b", s.log_b}}; },
    }, spec);
}

void from_json(const nlohmann::json& j, SequenceSpec& spec) {
    try {
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "factorial") spec = Factorial{};
        else if (kind == "rising_factorial")
            spec = RisingFactorial{j.at("p").get<int>(), j.at("q").get<int>(), j.at("r").get<int>()};
        else if (kind == "power") spec = Power{j.at("p").get<double>(), j.at("a").get<double>()};
        else if (kind == "power_pair")
            spec = PowerPair{j.at("p").get<double>(), j.at("q").get<double>(), j.at("a").get<double>()};
        else if (kind == "explicit")
            spec = Explicit{j.at("log_a").get<std::vector<double>>(),
                            j.at("log_b").get<std::vector<double>>()};
        else throw ValidationError("unknown sequence kind: " + kind);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed sequence spec: ") + e.what());
    }
    validate(spec);
}

}  // namespace chimlab
