#pragma once

// Epsilon sweeps of the normalized modulus, rotation orbits, simultaneous
// Kronecker approximation, target subsequences and divergence verdicts.

#include <optional>
#include <string>
#include <vector>

#include "chimlab/chimney.hpp"
#include "chimlab/domain_spec.hpp"
#include "chimlab/extremal.hpp"
#include "chimlab/lamination.hpp"
#include "json.hpp"

namespace chimlab {

// Sequence whose chimneys sit next to the ray {0} x (-inf, -eps].
ChimneySequence ray_sequence(const DomainSpec& spec);

// Comma-separated grid: numbers, or symbols a<n> / b<n> resolved through the
// sequence. Returned as ln(eps).
std::vector<double> resolve_eps_grid(const ChimneySequence& seq, const std::string& text);

enum class SweepMode { Analytic, Pde };

struct SweepRow {
    double log_eps = 0.0;
    double lower = 0.0;
    double upper_leading = 0.0;
    SandwichBound::Regime regime = SandwichBound::Regime::Outer;
    long n = 1;
    bool o1_flag = true;
    std::optional<double> mod, M_value, error_est;
    std::optional<long> cells;
};

// Smallest eps the PDE mode accepts.
inline constexpr double kPdeEpsFloor = 1e-7;

// log_eps must be strictly decreasing (eps decreasing).
std::vector<SweepRow> sweep(const DomainSpec& spec, const std::vector<double>& log_eps, SweepMode mode,
                            const TruncationConfig& trunc = {}, const MeshConfig& mesh = {});

inline const char* kSweepHeader = "epsilon,log_inv_eps,mod,M_value,lower,upper_leading,o1_flag,error_est,cells";
std::string sweep_csv(const std::vector<SweepRow>& rows);

struct OrbitReport {
    double theta = 0.0, sigma = 0.0;
    std::vector<double> points;  // {theta n + sigma}, n = 0..N-1
    double max_gap = 0.0;
};

OrbitReport rotation_orbit(double theta, double sigma, long N);

// Largest gap between consecutive points of a finite subset of the circle R/Z.
double max_circular_gap(std::vector<double> points);

double circular_distance(double x, double y);

// Smallest n in [1, n_max] with |{theta_j n + sigma_j} - target_j| < tol for all j.
std::optional<long> kronecker_search(const std::vector<double>& thetas, const std::vector<double>& sigmas,
                                     const std::vector<double>& targets, double tol, long n_max);

struct TargetStep {
    long n = 0;
    double beta_n = 0.0;
    // ln(-ln eps_n); ln eps_n itself underflows double range after a few steps.
    double log_neg_ln_eps = 0.0;
    double predicted_s = 0.0, predicted_t = 0.0;
};

struct TargetPlan {
    double alpha = 0.0, beta = 0.0, theta = 0.0, sigma = 0.0;
    std::vector<TargetStep> steps;
};

// Indices n_k with {theta n_k + sigma} decreasing to beta, tolerance 2^-k at step k.
TargetPlan target_subsequence(double p, double q, double s, double t, int K = 16, double a = 0.5,
                              long n_limit = 100000000);

// Boxes of the form I = top boundary left of i_right_x, J = {0} x (-inf, -j_scale eps].
struct RayBox {
    double i_right_x = 1.0;
    double j_scale = 1.0;
};

struct BoxDeviation {
    RayBox box;
    std::vector<double> deviation;  // per eps
    std::vector<double> error_bar;  // error_est of both solves, per eps
    double max_deviation = 0.0;
    bool growth = false;            // last > first + 2 (bar_first + bar_last)
};

std::vector<BoxDeviation> independence_check(const DomainSpec& spec, const std::vector<RayBox>& boxes,
                                             const std::vector<double>& log_eps,
                                             const TruncationConfig& trunc = {}, const MeshConfig& mesh = {});

struct Verdict {
    bool converges = false;
    std::vector<double> weights;                   // weight on each distinguished geodesic when convergent
    std::vector<std::pair<double, double>> axes;   // [m_j, M_j] when divergent
    std::optional<LimitSetDescriptor> limit_set;
};

Verdict verdict(const DomainSpec& spec);

nlohmann::json to_json(const OrbitReport& r);
nlohmann::json to_json(const TargetPlan& plan);
nlohmann::json to_json(const std::vector<BoxDeviation>& report);
nlohmann::json to_json(const Verdict& v);

}  // namespace chimlab
