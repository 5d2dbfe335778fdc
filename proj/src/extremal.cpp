#include "chimlab/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "chimlab/errors.hpp"
#include "chimlab/lamination.hpp"

namespace chimlab {

namespace {
constexpr double kPi = std::numbers::pi;
}

double rect_modulus(double l, double w) {
    require(l > 0.0 && w > 0.0, "rectangle sides must be positive");
    return w / l;
}

double annulus_modulus(double r1, double r2, AnnulusFamily kind) {
    require(r1 > 0.0 && r2 > r1, "annulus needs 0 < r1 < r2");
    const double lr = std::log(r2 / r1);
    return kind == AnnulusFamily::Separating ? lr / (2.0 * kPi) : 2.0 * kPi / lr;
}

double reldist_upper_bound(double delta) {
    require(delta > 0.0, "relative distance must be positive");
    if (std::isinf(delta)) return kPi;
    const double t = 1.0 + 1.0 / (2.0 * delta);
    return kPi * t * t;
}

double agm(double a, double b) {
    require(a > 0.0 && b > 0.0, "agm needs positive arguments");
    for (int it = 0; it < 64 && std::fabs(a - b) > 1e-15 * a; ++it) {
        const double m = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = m;
    }
    return 0.5 * (a + b);
}

double ellipk(double k) {
    require(k >= 0.0 && k < 1.0, "modulus k must lie in [0, 1)");
    return kPi / (2.0 * agm(1.0, std::sqrt((1.0 - k) * (1.0 + k))));
}

double ellipk_complement(double k) {
    require(k > 0.0 && k <= 1.0, "modulus k must lie in (0, 1]");
    return kPi / (2.0 * agm(1.0, k));
}

double disk_quad_modulus(double a, double b, double c, double d) {
    const double L = liouville_box(make_angle(a), make_angle(b), make_angle(c), make_angle(d));
    // Half-plane normal form -1/k, -1, 1, 1/k has cross-ratio (1 + k)^2 / (4k).
    const double r = std::exp(L);
    const double s = 2.0 * r - 1.0;
    const double k = 1.0 / (s + std::sqrt((s - 1.0) * (s + 1.0)));
    require(k > 0.0 && k < 1.0, "degenerate quadruple");
    return agm(1.0, std::sqrt((1.0 - k) * (1.0 + k))) / (2.0 * agm(1.0, k));
}

std::vector<double> quadruple_with_liouville(double L) {
    require(L > 0.0, "Liouville value must be positive");
    const double t = std::acos(std::exp(-0.5 * L));
    return {-t, t, kPi - t, kPi + t};
}

double normalized_M(double mod_value, double eps) {
    require(eps > 0.0 && eps < 1.0, "normalization needs eps in (0, 1)");
    return mod_value * kPi / std::log(1.0 / eps);
}

double normalized_M_log(double mod_value, double log_eps) {
    require(log_eps < 0.0, "normalization needs eps in (0, 1)");
    return mod_value * kPi / -log_eps;
}

SandwichBound sandwich_bounds(const ChimneySequence& seq, double log_eps) {
    require(std::isfinite(log_eps), "eps must be positive");
    const double lb1 = seq.log_b(1);
    require(log_eps <= lb1 * (1.0 - 1e-15), "sandwich bounds need eps in (0, b_1]");
    SequenceCursor c(seq);
    long double A_prev = c.log_a(), B_prev = c.log_b();
    const long double x = -static_cast<long double>(log_eps);
    for (;;) {
        c.advance();
        const long n = c.n();
        const long double A = A_prev + c.log_a(), B = B_prev + c.log_b();
        SandwichBound out;
        out.n = n;
        if (log_eps >= c.log_a()) {
            out.regime = SandwichBound::Regime::Outer;
            out.lower = static_cast<double>(1.0L + (A_prev - B) / x);
        } else {
            if (auto len = seq.length())
                require(n + 1 < *len, "eps below the range covered by the explicit sequence");
            if (log_eps <= seq.log_b(n + 1)) {
                A_prev = A;
                B_prev = B;
                continue;
            }
            out.regime = SandwichBound::Regime::Inner;
            out.lower = static_cast<double>(2.0L - (B - A) / x);
        }
        out.upper_leading = out.lower;
        out.o1_flag = true;
        return out;
    }
}

double subfamily_constant_c1(double c) {
    require(c > 0.0 && c < 1.0, "c must lie in (0, 1)");
    return (2.0 / kPi) * std::log(1.0 / (c * c)) + 2.0 * kPi / std::log(1.0 / c);
}

double subfamily_constant_c2(double c) {
    require(c > 0.0 && c < 1.0, "c must lie in (0, 1)");
    const double lc = std::log(1.0 / c), l1c = std::log(1.0 / (1.0 - c));
    return 12.0 + 2.0 / c + 2.0 * kPi / lc + 2.0 * kPi / l1c + (lc + l1c) / kPi;
}

SubfamilyBounds subfamily_upper_bounds(const ChimneySequence& seq, long k, double log_eps, double c) {
    require(k >= 1, "subfamily bounds need k >= 1");
    const double la_k = seq.log_a(k), lb_k = seq.log_b(k), la_km1 = seq.log_a(k - 1);
    require(log_eps < lb_k, "subfamily bounds need eps < b_k");
    SubfamilyBounds out{};
    out.bound_k1 = (lb_k - std::max(log_eps, la_k)) / kPi + subfamily_constant_c2(c);
    out.bound_k2 = (2.0 / kPi) * (la_km1 - std::max(log_eps, lb_k)) + subfamily_constant_c1(c);
    out.bound_02 = 2.0;
    return out;
}

nlohmann::json to_json(const ModulusResult& r) {
    return {{"value", r.value},         {"energy", r.energy},
            {"error_est", r.error_est}, {"cells", r.cells},
            {"level_values", r.level_values}, {"level_cells", r.level_cells},
            {"iterations", r.iterations}};
}

}  // namespace chimlab
