#pragma once

// Conformal moduli: closed forms, disk quadrilaterals via elliptic integrals,
// a finite-difference solver for marked rectilinear polygons, and the
// analytic sandwich bounds for the normalized modulus.

#include <vector>

#include "chimlab/chimney.hpp"
#include "chimlab/seqlab.hpp"
#include "json.hpp"

namespace chimlab {

double rect_modulus(double l, double w);

enum class AnnulusFamily { Separating, Connecting };

double annulus_modulus(double r1, double r2, AnnulusFamily kind);

double reldist_upper_bound(double delta);

// Arithmetic-geometric mean, iterated to 1e-15 relative.
double agm(double a, double b);

// K(k) and K'(k) = K(sqrt(1 - k^2)).
double ellipk(double k);
double ellipk_complement(double k);

// Modulus of the curves joining arc [a, b] to arc [c, d] in the unit disk;
// arguments are counterclockwise angles.
double disk_quad_modulus(double a, double b, double c, double d);

// Four angles whose disk quadrilateral has Liouville box value L.
std::vector<double> quadruple_with_liouville(double L);

struct MeshConfig {
    double base_h = 0.025;     // largest cell, relative to the domain extent
    double grading = 1.15;     // growth ratio away from breakpoints
    double corner_h = 0.025;   // first cell at a breakpoint, relative to the shorter neighbouring gap
    long max_cells = 400000;   // budget for the finest level
    double cg_tol = 1e-10;     // relative residual
    int refinement_levels = 2;
};

struct ModulusResult {
    double value = 0.0;
    double energy = 0.0;
    double error_est = 0.0;
    long cells = 0;
    std::vector<double> level_values;
    std::vector<long> level_cells;
    long iterations = 0;
};

ModulusResult solve_modulus(const AxisPolygonDomain& marked, const MeshConfig& mesh);

// Swaps the Dirichlet arcs with the Neumann arcs of a quadrilateral.
AxisPolygonDomain conjugate_quadrilateral(const AxisPolygonDomain& marked);

double normalized_M(double mod_value, double eps);
double normalized_M_log(double mod_value, double log_eps);

struct SandwichBound {
    enum class Regime { Inner, Outer };
    double lower = 0.0;
    double upper_leading = 0.0;
    Regime regime = Regime::Outer;
    long n = 1;
    bool o1_flag = true;  // upper_leading omits the o(1) term
};

// eps is passed as ln(eps) so that deep scales never underflow.
SandwichBound sandwich_bounds(const ChimneySequence& seq, double log_eps);

struct SubfamilyBounds { double bound_k1, bound_k2, bound_02; };

double subfamily_constant_c1(double c);
double subfamily_constant_c2(double c);

SubfamilyBounds subfamily_upper_bounds(const ChimneySequence& seq, long k, double log_eps, double c);

nlohmann::json to_json(const ModulusResult& r);

}  // namespace chimlab
