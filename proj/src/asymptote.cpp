#include "chimlab/asymptote.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "chimlab/errors.hpp"

namespace chimlab {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

std::string fmt_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.8g", v);
    return buf;
}

long double frac(long double x) { return x - std::floor(x); }

}  // namespace

ChimneySequence ray_sequence(const DomainSpec& spec) {
    validate(spec);
    if (auto o = std::get_if<OneSided>(&spec)) return make_sequence(o->seq);
    if (auto t = std::get_if<TwoSided>(&spec)) return make_sequence(Power{t->p, t->a});
    const auto& m = std::get<MultiK>(spec);
    return make_sequence(Power{m.ps.front(), m.a});
}

std::vector<double> resolve_eps_grid(const ChimneySequence& seq, const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        require(!tok.empty(), "empty entry in eps grid");
        if (tok[0] == 'a' || tok[0] == 'b') {
            long n = -1;
            const auto* first = tok.data() + 1;
            const auto* last = tok.data() + tok.size();
            auto [ptr, ec] = std::from_chars(first, last, n);
            require(ec == std::errc{} && ptr == last && n >= 0, "bad symbolic eps '" + tok + "'");
            out.push_back(tok[0] == 'a' ? seq.log_a(n) : seq.log_b(n));
        } else {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(tok, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            require(used == tok.size(), "bad eps value '" + tok + "'");
            require(v > 0.0 && v < 1.0, "eps must lie in (0, 1)");
            out.push_back(std::log(v));
        }
    }
    require(!out.empty(), "empty eps grid");
    return out;
}

std::vector<SweepRow> sweep(const DomainSpec& spec, const std::vector<double>& log_eps, SweepMode mode,
                            const TruncationConfig& trunc, const MeshConfig& mesh) {
    require(!log_eps.empty(), "empty eps grid");
    for (std::size_t i = 1; i < log_eps.size(); ++i)
        require(log_eps[i] < log_eps[i - 1], "eps grid must be strictly decreasing");
    const ChimneySequence seq = ray_sequence(spec);
    if (mode == SweepMode::Pde)
        require(log_eps.back() >= std::log(kPdeEpsFloor), "eps below the PDE resolution floor");

    std::optional<AxisPolygonDomain> domain;
    if (mode == SweepMode::Pde) domain = build_domain(spec, trunc);

    std::vector<SweepRow> rows;
    for (double le : log_eps) {
        const SandwichBound sb = sandwich_bounds(seq, le);
        SweepRow row;
        row.log_eps = le;
        row.lower = sb.lower;
        row.upper_leading = sb.upper_leading;
        row.regime = sb.regime;
        row.n = sb.n;
        row.o1_flag = sb.o1_flag;
        if (domain) {
            const double eps = std::exp(le);
            const auto marked = mark_quadrilateral(*domain, SourceArc{}, j0_ray(eps));
            const ModulusResult r = solve_modulus(marked, mesh);
            row.mod = r.value;
            row.M_value = normalized_M_log(r.value, le);
            row.error_est = r.error_est;
            row.cells = r.cells;
        }
        rows.push_back(row);
    }
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = std::string(kSweepHeader) + "\n";
    for (const auto& r : rows) {
        out += fmt_g(std::exp(r.log_eps)) + "," + fmt_g(-r.log_eps) + ",";
        out += (r.mod ? fmt_g(*r.mod) : "") + ",";
        out += (r.M_value ? fmt_g(*r.M_value) : "") + ",";
        out += fmt_g(r.lower) + "," + fmt_g(r.upper_leading) + "," + (r.o1_flag ? "1" : "0") + ",";
        out += (r.error_est ? fmt_g(*r.error_est) : "") + ",";
        out += (r.cells ? std::to_string(*r.cells) : "") + "\n";
    }
    return out;
}

double circular_distance(double x, double y) {
    const double d = std::fabs(x - y);
    const double r = d - std::floor(d);
    return std::min(r, 1.0 - r);
}

double max_circular_gap(std::vector<double> points) {
    if (points.empty()) return 1.0;
    std::sort(points.begin(), points.end());
    double gap = points.front() + 1.0 - points.back();
    for (std::size_t i = 1; i < points.size(); ++i) gap = std::max(gap, points[i] - points[i - 1]);
    return gap;
}

OrbitReport rotation_orbit(double theta, double sigma, long N) {
    require(N >= 1, "orbit length must be at least 1");
    OrbitReport r{theta, sigma, {}, 0.0};
    r.points.reserve(static_cast<std::size_t>(N));
    for (long n = 0; n < N; ++n)
        r.points.push_back(static_cast<double>(frac(static_cast<long double>(theta) * n + sigma)));
    r.max_gap = max_circular_gap(r.points);
    return r;
}

std::optional<long> kronecker_search(const std::vector<double>& thetas, const std::vector<double>& sigmas,
                                     const std::vector<double>& targets, double tol, long n_max) {
    require(!thetas.empty(), "need at least one rotation");
    require(thetas.size() == sigmas.size() && thetas.size() == targets.size(),
            "thetas, sigmas and targets must have equal length");
    require(tol > 0.0, "tolerance must be positive");
    for (long n = 1; n <= n_max; ++n) {
        bool ok = true;
        for (std::size_t j = 0; j < thetas.size() && ok; ++j) {
            const double x = static_cast<double>(frac(static_cast<long double>(thetas[j]) * n + sigmas[j]));
            ok = circular_distance(x, targets[j]) < tol;
        }
        if (ok) return n;
    }
    return std::nullopt;
}

TargetPlan target_subsequence(double p, double q, double s, double t, int K, double a, long n_limit) {
    require(p > 1.0 && q > 1.0, "target needs p, q > 1");
    require(K >= 1, "need at least one step");
    require(a > 0.0 && a < 1.0, "target needs a in (0, 1)");
    const auto [mp, Mp] = power_limits(p);
    const auto [mq, Mq] = power_limits(q);
    require(s >= mp - 1e-14 && s <= Mp + 1e-14, "s outside [m_p, M_p]");
    require(t >= mq - 1e-14 && t <= Mq + 1e-14, "t outside [m_q, M_q]");

    TargetPlan plan;
    plan.alpha = invert_phi(p, s);
    plan.beta = 0.5 * std::log(invert_phi(q, t)) / std::log(q);
    plan.theta = std::log(p) / std::log(q);
    plan.sigma = 0.5 * (1.0 + std::log(plan.alpha / p) / std::log(q));

    const long double th = plan.theta, sg = plan.sigma, beta = plan.beta;
    long double prev = std::numeric_limits<long double>::infinity();
    long n = 0;
    for (int k = 1; k <= K; ++k) {
        const long double tol = std::ldexp(1.0L, -k);
        for (;;) {
            ++n;
            if (n > n_limit) throw SolverError("target search exceeded its index limit");
            const long double b = frac(th * n + sg);
            const long double d = b - beta;
            if (d >= 0 && d < tol && b < prev) {
                prev = b;
                break;
            }
        }
        TargetStep st;
        st.n = n;
        st.beta_n = static_cast<double>(prev);
        st.log_neg_ln_eps = std::log(plan.alpha) + (2.0 * n - 1.0) * std::log(p) + std::log(-std::log(a));
        st.predicted_s = phi(p, plan.alpha);
        st.predicted_t = phi(q, std::pow(q, 2.0 * st.beta_n));
        plan.steps.push_back(st);
    }
    return plan;
}

std::vector<BoxDeviation> independence_check(const DomainSpec& spec, const std::vector<RayBox>& boxes,
                                             const std::vector<double>& log_eps, const TruncationConfig& trunc,
                                             const MeshConfig& mesh) {
    require(std::holds_alternative<OneSided>(spec), "independence check runs on one-sided domains");
    require(!log_eps.empty(), "empty eps grid");
    const ChimneySequence seq = ray_sequence(spec);
    const double b0 = std::exp(seq.log_b(0));
    for (const auto& bx : boxes) {
        require(bx.i_right_x > 0.0, "I must reach the corner side of the boundary");
        require(bx.i_right_x <= b0, "I must exclude the prime end 1");
        require(bx.j_scale > 0.0, "J scale must be positive");
    }
    for (double le : log_eps) require(le >= std::log(kPdeEpsFloor), "eps below the PDE resolution floor");

    const AxisPolygonDomain domain = build_domain(spec, trunc);
    std::vector<ModulusResult> base;
    for (double le : log_eps)
        base.push_back(solve_modulus(mark_quadrilateral(domain, SourceArc{}, j0_ray(std::exp(le))), mesh));

    std::vector<BoxDeviation> out;
    for (const auto& bx : boxes) {
        BoxDeviation dev;
        dev.box = bx;
        for (std::size_t i = 0; i < log_eps.size(); ++i) {
            const SourceArc src{-std::numeric_limits<double>::infinity(), bx.i_right_x};
            const auto r = solve_modulus(mark_quadrilateral(domain, src, j0_ray(std::exp(log_eps[i]), bx.j_scale)), mesh);
            dev.deviation.push_back(std::fabs(r.value - base[i].value));
            dev.error_bar.push_back(r.error_est + base[i].error_est);
        }
        dev.max_deviation = *std::max_element(dev.deviation.begin(), dev.deviation.end());
        dev.growth = dev.deviation.back() > dev.deviation.front() + 2.0 * (dev.error_bar.front() + dev.error_bar.back());
        out.push_back(dev);
    }
    return out;
}

Verdict verdict(const DomainSpec& spec) {
    const auto axes = axis_intervals(spec);
    Verdict v;
    v.converges = std::all_of(axes.begin(), axes.end(),
                              [](const auto& ax) { return std::fabs(ax.second - ax.first) <= 1e-9; });
    if (v.converges) {
        for (const auto& ax : axes) v.weights.push_back(ax.first);
    } else {
        v.axes = axes;
        v.limit_set = limit_set(spec);
    }
    return v;
}

nlohmann::json to_json(const OrbitReport& r) {
    return {{"theta", r.theta}, {"sigma", r.sigma}, {"N", r.points.size()}, {"points", r.points},
            {"max_gap", r.max_gap}};
}

nlohmann::json to_json(const TargetPlan& plan) {
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& s : plan.steps)
        steps.push_back({{"n", s.n}, {"beta_n", s.beta_n}, {"log_neg_ln_eps", s.log_neg_ln_eps},
                         {"predicted", {s.predicted_s, s.predicted_t}}});
    return {{"alpha", plan.alpha}, {"beta", plan.beta}, {"theta", plan.theta}, {"sigma", plan.sigma},
            {"steps", steps}};
}

nlohmann::json to_json(const std::vector<BoxDeviation>& report) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& d : report)
        out.push_back({{"i_right_x", d.box.i_right_x}, {"j_scale", d.box.j_scale}, {"deviation", d.deviation},
                       {"error_bar", d.error_bar}, {"max_deviation", d.max_deviation}, {"growth", d.growth}});
    return out;
}

nlohmann::json to_json(const Verdict& v) {
    nlohmann::json axes = nlohmann::json::array();
    for (const auto& [lo, hi] : v.axes) axes.push_back({lo, hi});
    nlohmann::json j{{"kind", v.converges ? "converges" : "diverges"},
                     {"weights", {{"distinguished", v.weights}, {"chimney", 2.0 / 3.0}}},
                     {"axes", axes}};
    if (v.limit_set) j["limit_set"] = to_json(*v.limit_set);
    return j;
}

}  // namespace chimlab
