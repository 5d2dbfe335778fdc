// chimlab command-line front end.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>

#include "chimlab/asymptote.hpp"
#include "chimlab/errors.hpp"
#include "chimlab/extremal.hpp"
#include "chimlab/lamination.hpp"
#include "chimlab/seqlab.hpp"

using namespace chimlab;
using nlohmann::json;

namespace {

struct SpecFlags {
    std::string kind = "power";
    double p = 2.0, q = 3.0, a = 0.5;
    int ip = 1, iq = 1, ir = 2;
    std::vector<double> ps;
    std::string file;
};

void add_spec_flags(CLI::App* cmd, SpecFlags& f) {
    cmd->add_option("--kind", f.kind,
                    "factorial | rising_factorial | power | power_pair | explicit | two_sided | multi_k");
    cmd->add_option("--p", f.p, "exponent p (power, power_pair, two_sided)");
    cmd->add_option("--q", f.q, "exponent q (power_pair, two_sided)");
    cmd->add_option("--a", f.a, "base a in (0, 1)");
    cmd->add_option("--rp", f.ip, "rising factorial p");
    cmd->add_option("--rq", f.iq, "rising factorial q");
    cmd->add_option("--r", f.ir, "rising factorial r");
    cmd->add_option("--ps", f.ps, "exponents for multi_k")->delimiter(',');
    cmd->add_option("--spec", f.file, "JSON file with a sequence or domain spec")->check(CLI::ExistingFile);
}

json read_json(const std::string& path) {
    std::ifstream in(path);
    require(static_cast<bool>(in), "cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("bad JSON in ") + path + ": " + e.what());
    }
}

DomainSpec domain_from(const SpecFlags& f) {
    DomainSpec d;
    if (!f.file.empty()) {
        const json j = read_json(f.file);
        const std::string kind = j.value("kind", "");
        if (kind == "one_sided" || kind == "two_sided" || kind == "multi_k") {
            from_json(j, d);
        } else {
            SequenceSpec s;
            from_json(j, s);
            d = OneSided{s};
        }
    } else if (f.kind == "factorial") {
        d = OneSided{Factorial{}};
    } else if (f.kind == "rising_factorial") {
        d = OneSided{RisingFactorial{f.ip, f.iq, f.ir}};
    } else if (f.kind == "power") {
        d = OneSided{Power{f.p, f.a}};
    } else if (f.kind == "power_pair") {
        d = OneSided{PowerPair{f.p, f.q, f.a}};
    } else if (f.kind == "two_sided") {
        d = TwoSided{f.p, f.q, f.a};
    } else if (f.kind == "multi_k") {
        d = MultiK{f.ps, f.a};
    } else if (f.kind == "explicit") {
        throw ValidationError("explicit sequences are read with --spec FILE");
    } else {
        throw ValidationError("unknown kind '" + f.kind + "'");
    }
    validate(d);
    return d;
}

SequenceSpec sequence_from(const SpecFlags& f) {
    const DomainSpec d = domain_from(f);
    const auto* o = std::get_if<OneSided>(&d);
    require(o != nullptr, "this command needs a sequence kind");
    return o->seq;
}

double round8(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.8g", v);
    return std::strtod(buf, nullptr);
}

void add_mesh_flags(CLI::App* cmd, MeshConfig& m) {
    cmd->add_option("--base-h", m.base_h, "largest cell relative to the domain extent");
    cmd->add_option("--grading", m.grading, "cell growth ratio");
    cmd->add_option("--corner-h", m.corner_h, "first cell relative to the shorter neighbouring gap");
    cmd->add_option("--max-cells", m.max_cells, "cell budget for the finest level");
    cmd->add_option("--cg-tol", m.cg_tol, "conjugate gradient relative tolerance");
    cmd->add_option("--levels", m.refinement_levels, "refinement levels (>= 2)");
}

void add_trunc_flags(CLI::App* cmd, TruncationConfig& t) {
    cmd->add_option("--n-max", t.n_max, "chimneys kept per family");
    cmd->add_option("--h-top", t.H_top, "chimney height cut");
    cmd->add_option("--depth", t.depth, "lower cut");
    cmd->add_option("--r-out", t.R_out, "right cut (one-sided)");
}

void apply_env_budget(MeshConfig& m) {
    if (const char* env = std::getenv("CHIMLAB_MAX_CELLS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        require(end != env && *end == '\0' && v > 0, "CHIMLAB_MAX_CELLS must be a positive integer");
        m.max_cells = v;
    }
}

struct CheckLine {
    std::string name;
    bool pass;
    std::string detail;
};

std::vector<CheckLine> run_checks() {
    std::vector<CheckLine> out;
    auto add = [&](std::string name, bool pass, double value) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.12g", value);
        out.push_back({std::move(name), pass, buf});
    };
    {
        const auto est = exponent_limits(make_sequence(Power{2.0, 0.5}), 10, 40);
        add("power limits (4/3, 5/3)",
            std::fabs(est.m_hat - 4.0 / 3.0) < 1e-6 && std::fabs(est.M_hat - 5.0 / 3.0) < 1e-6, est.m_hat);
    }
    {
        const auto e = exponents(make_sequence(Factorial{}), 1000000);
        add("factorial exponents near 3/2", std::fabs(e.m - 1.5) < 0.01 && std::fabs(e.M - 1.5) < 0.01, e.m);
    }
    {
        const double L = liouville_box(Angle{0.0}, Angle{std::numbers::pi / 2}, Angle{std::numbers::pi},
                                       Angle{3 * std::numbers::pi / 2});
        add("liouville box of the square quadruple", std::fabs(L - std::log(2.0)) < 1e-12, L);
    }
    {
        const double m = disk_quad_modulus(0.0, std::numbers::pi / 2, std::numbers::pi, 3 * std::numbers::pi / 2);
        add("disk modulus of the square quadruple", std::fabs(m - 1.0) < 1e-12, m);
    }
    {
        auto sq = make_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
        sq.marks = {Mark::Neumann, Mark::Dirichlet1, Mark::Neumann, Mark::Dirichlet0};
        const auto r = solve_modulus(sq, MeshConfig{});
        add("unit square modulus", std::fabs(r.value - 1.0) < 5e-3, r.value);
    }
    {
        const auto o = rotation_orbit(std::log(2.0) / std::log(3.0), 0.0, 10000);
        add("irrational rotation gap", o.max_gap < 0.01, o.max_gap);
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Chimney domains, extremal length and Teichmueller ray limits"};
    app.require_subcommand(1);

    SpecFlags spec;
    MeshConfig mesh;
    TruncationConfig trunc;
    bool as_json = false;

    auto* seq_cmd = app.add_subcommand("seq", "sequence terms and exponents as CSV");
    add_spec_flags(seq_cmd, spec);
    long n_from = 0, n_to = 10;
    seq_cmd->add_option("--from", n_from, "first index");
    seq_cmd->add_option("--to", n_to, "last index");

    auto* limits_cmd = app.add_subcommand("limits", "limits m and M of the exponents");
    add_spec_flags(limits_cmd, spec);
    limits_cmd->add_flag("--json", as_json, "JSON output");

    auto* phi_cmd = app.add_subcommand("phi", "profile Phi_p or its inverse");
    double phi_p = 2.0;
    std::optional<double> phi_alpha, phi_s;
    std::string branch = "decreasing";
    phi_cmd->add_option("--p", phi_p, "p > 1");
    auto* alpha_opt = phi_cmd->add_option("--alpha", phi_alpha, "evaluate Phi_p(alpha)");
    phi_cmd->add_option("--invert", phi_s, "solve Phi_p(alpha) = s")->excludes(alpha_opt);
    phi_cmd->add_option("--branch", branch, "decreasing | increasing")
        ->check(CLI::IsMember({"decreasing", "increasing"}));

    auto* mod_cmd = app.add_subcommand("modulus", "finite-difference modulus of a marked polygon");
    std::string domain_file;
    bool conjugate = false;
    mod_cmd->add_option("--domain", domain_file, "polygon JSON")->required()->check(CLI::ExistingFile);
    mod_cmd->add_flag("--conjugate", conjugate, "swap Dirichlet and Neumann arcs first");
    add_mesh_flags(mod_cmd, mesh);

    auto* sweep_cmd = app.add_subcommand("sweep", "normalized modulus over an eps grid as CSV");
    add_spec_flags(sweep_cmd, spec);
    std::string eps_text = "b1,a1,b2", mode = "analytic";
    sweep_cmd->add_option("--eps", eps_text, "decreasing grid: numbers or symbols a<n>, b<n>");
    sweep_cmd->add_option("--mode", mode, "analytic | pde")->check(CLI::IsMember({"analytic", "pde"}));
    add_trunc_flags(sweep_cmd, trunc);
    add_mesh_flags(sweep_cmd, mesh);

    auto* ls_cmd = app.add_subcommand("limitset", "limit set of the Teichmueller ray as JSON");
    add_spec_flags(ls_cmd, spec);

    auto* orbit_cmd = app.add_subcommand("orbit", "orbit of an irrational rotation as JSON");
    double theta = 0.0, sigma = 0.0;
    long orbit_n = 100;
    bool with_points = false;
    orbit_cmd->add_option("--theta", theta, "rotation number")->required();
    orbit_cmd->add_option("--sigma", sigma, "starting point");
    orbit_cmd->add_option("--n", orbit_n, "orbit length");
    orbit_cmd->add_flag("--points", with_points, "include the orbit points");

    auto* kr_cmd = app.add_subcommand("kronecker", "simultaneous approximation search as JSON");
    std::vector<double> thetas, sigmas, targets;
    double tol = 0.05;
    long kr_n_max = 1000000;
    kr_cmd->add_option("--thetas", thetas, "rotation numbers")->required()->delimiter(',');
    kr_cmd->add_option("--sigmas", sigmas, "starting points (default 0)")->delimiter(',');
    kr_cmd->add_option("--targets", targets, "target points")->required()->delimiter(',');
    kr_cmd->add_option("--tol", tol, "circular tolerance");
    kr_cmd->add_option("--n-max", kr_n_max, "largest index searched");

    auto* target_cmd = app.add_subcommand("target", "subsequence realizing a prescribed limit point as JSON");
    double tp = 2.0, tq = 3.0, ts = 1.4, tt = 1.6, ta = 0.5;
    int tK = 16;
    target_cmd->add_option("--p", tp, "p > 1");
    target_cmd->add_option("--q", tq, "q > 1");
    target_cmd->add_option("--s", ts, "target in [m_p, M_p]");
    target_cmd->add_option("--t", tt, "target in [m_q, M_q]");
    target_cmd->add_option("--K", tK, "number of steps");
    target_cmd->add_option("--a", ta, "base a in (0, 1)");

    auto* verdict_cmd = app.add_subcommand("verdict", "convergence verdict as JSON");
    add_spec_flags(verdict_cmd, spec);

    auto* check_cmd = app.add_subcommand("check", "built-in oracle checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        apply_env_budget(mesh);
        if (*seq_cmd) {
            require(n_from >= 0 && n_to >= n_from, "need 0 <= --from <= --to");
            const ChimneySequence seq = make_sequence(sequence_from(spec));
            std::printf("n,log_a,log_b,m_n,M_n\n");
            for (long n = n_from; n <= n_to; ++n) {
                std::printf("%ld,%.17g,%.17g", n, seq.log_a(n), seq.log_b(n));
                if (n >= 1) {
                    const auto e = exponents(seq, n);
                    std::printf(",%.17g,%.17g\n", e.m, e.M);
                } else {
                    std::printf(",,\n");
                }
            }
        } else if (*limits_cmd) {
            const DomainSpec d = domain_from(spec);
            const auto axes = axis_intervals(d);
            if (as_json) {
                json j;
                if (axes.size() == 1) {
                    j = {{"m", round8(axes[0].first)}, {"M", round8(axes[0].second)}};
                } else {
                    j = json::array();
                    for (const auto& [m, M] : axes) j.push_back({{"m", round8(m)}, {"M", round8(M)}});
                }
                std::cout << j.dump() << "\n";
            } else {
                for (const auto& [m, M] : axes) std::printf("m = %.12g\nM = %.12g\n", m, M);
            }
        } else if (*phi_cmd) {
            json j{{"p", phi_p}};
            if (phi_s) {
                const auto br = branch == "increasing" ? PhiBranch::Increasing : PhiBranch::Decreasing;
                j["s"] = *phi_s;
                j["alpha"] = invert_phi(phi_p, *phi_s, br);
            } else {
                require(phi_alpha.has_value(), "give --alpha or --invert");
                j["alpha"] = *phi_alpha;
                j["s"] = phi(phi_p, *phi_alpha);
            }
            std::cout << j.dump() << "\n";
        } else if (*mod_cmd) {
            AxisPolygonDomain d = polygon_from_json(read_json(domain_file));
            if (conjugate) d = conjugate_quadrilateral(d);
            std::cout << to_json(solve_modulus(d, mesh)).dump() << "\n";
        } else if (*sweep_cmd) {
            const DomainSpec d = domain_from(spec);
            const auto grid = resolve_eps_grid(ray_sequence(d), eps_text);
            const auto rows = sweep(d, grid, mode == "pde" ? SweepMode::Pde : SweepMode::Analytic, trunc, mesh);
            std::cout << sweep_csv(rows);
        } else if (*ls_cmd) {
            std::cout << to_json(limit_set(domain_from(spec))).dump() << "\n";
        } else if (*orbit_cmd) {
            const OrbitReport r = rotation_orbit(theta, sigma, orbit_n);
            json j = to_json(r);
            if (!with_points) j.erase("points");
            std::cout << j.dump() << "\n";
        } else if (*kr_cmd) {
            if (sigmas.empty()) sigmas.assign(thetas.size(), 0.0);
            const auto n = kronecker_search(thetas, sigmas, targets, tol, kr_n_max);
            json j{{"found", n.has_value()}};
            j["n"] = n ? json(*n) : json(nullptr);
            std::cout << j.dump() << "\n";
        } else if (*target_cmd) {
            std::cout << to_json(target_subsequence(tp, tq, ts, tt, tK, ta)).dump() << "\n";
        } else if (*verdict_cmd) {
            std::cout << to_json(verdict(domain_from(spec))).dump() << "\n";
        } else if (*check_cmd) {
            bool all = true;
            for (const auto& c : run_checks()) {
                std::printf("%s %s (%s)\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
                all = all && c.pass;
            }
            return all ? 0 : 1;
        }
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 3;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
