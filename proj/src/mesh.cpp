// Finite-difference modulus solver on graded tensor meshes.
//
// The polygon's vertex coordinates are mesh lines, so every cell is either
// inside or outside. Each active cell hx * hy contributes the five-point
// energy (hy/hx)/2 [(u00-u10)^2 + (u01-u11)^2] + (hx/hy)/2 [(u00-u01)^2 + (u10-u11)^2];
// Neumann conditions are natural and the modulus is the minimal energy.

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <limits>

#include "chimlab/errors.hpp"
#include "chimlab/extremal.hpp"

namespace chimlab {

namespace {

std::vector<double> breakpoints(const AxisPolygonDomain& d, bool xs) {
    std::vector<double> v;
    for (const auto& p : d.vertices) v.push_back(xs ? p.x : p.y);
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

// Graded lines through every breakpoint: cells start at corner_h times the
// shorter neighbouring gap and grow by `grading` up to h_max.
std::vector<double> graded_axis(const std::vector<double>& bp, const MeshConfig& cfg, double h_max) {
    const std::size_t nb = bp.size();
    std::vector<double> start(nb);
    for (std::size_t i = 0; i < nb; ++i) {
        double gap = std::numeric_limits<double>::infinity();
        if (i > 0) gap = std::min(gap, bp[i] - bp[i - 1]);
        if (i + 1 < nb) gap = std::min(gap, bp[i + 1] - bp[i]);
        start[i] = std::min(h_max, cfg.corner_h * gap);
    }
    std::vector<double> out{bp[0]};
    for (std::size_t i = 0; i + 1 < nb; ++i) {
        const double u = bp[i], v = bp[i + 1], len = v - u;
        std::vector<double> left, right;
        double total = 0.0;
        double nl = start[i], nr = start[i + 1];
        while (total < len) {
            if (nl <= nr) {
                left.push_back(nl);
                total += nl;
                nl = std::min(h_max, nl * cfg.grading);
            } else {
                right.push_back(nr);
                total += nr;
                nr = std::min(h_max, nr * cfg.grading);
            }
        }
        left.insert(left.end(), right.rbegin(), right.rend());
        const double scale = len / total;
        double acc = 0.0;
        for (std::size_t k = 0; k + 1 < left.size(); ++k) {
            acc += left[k];
            out.push_back(u + acc * scale);
        }
        out.push_back(v);
    }
    return out;
}

std::vector<double> subdivide(const std::vector<double>& lines, int times) {
    std::vector<double> out = lines;
    for (int t = 0; t < times; ++t) {
        std::vector<double> next{out[0]};
        for (std::size_t i = 0; i + 1 < out.size(); ++i) {
            next.push_back(0.5 * (out[i] + out[i + 1]));
            next.push_back(out[i + 1]);
        }
        out.swap(next);
    }
    return out;
}

struct Grid {
    std::vector<double> X, Y;
    std::vector<char> active;  // per cell, row-major over (j, i)
    long n_active = 0;
    std::size_t nx() const { return X.size(); }
    std::size_t ny() const { return Y.size(); }
    bool cell(long i, long j) const {
        if (i < 0 || j < 0 || i + 1 >= static_cast<long>(nx()) || j + 1 >= static_cast<long>(ny())) return false;
        return active[static_cast<std::size_t>(j) * (nx() - 1) + static_cast<std::size_t>(i)] != 0;
    }
    std::size_t node(std::size_t i, std::size_t j) const { return j * nx() + i; }
};

void classify(Grid& g, const AxisPolygonDomain& d) {
    const std::size_t cx = g.nx() - 1, cy = g.ny() - 1;
    g.active.assign(cx * cy, 0);
    g.n_active = 0;
    std::vector<double> cuts;
    for (std::size_t j = 0; j < cy; ++j) {
        const double yc = 0.5 * (g.Y[j] + g.Y[j + 1]);
        cuts.clear();
        for (std::size_t e = 0; e < d.size(); ++e) {
            const Point a = d.edge_start(e), b = d.edge_end(e);
            if (a.x == b.x && std::min(a.y, b.y) < yc && yc < std::max(a.y, b.y)) cuts.push_back(a.x);
        }
        std::sort(cuts.begin(), cuts.end());
        std::size_t k = 0;
        for (std::size_t i = 0; i < cx; ++i) {
            const double xc = 0.5 * (g.X[i] + g.X[i + 1]);
            while (k < cuts.size() && cuts[k] < xc) ++k;
            if (k % 2 == 1) {
                g.active[j * cx + i] = 1;
                ++g.n_active;
            }
        }
    }
}

std::size_t line_index(const std::vector<double>& lines, double v) {
    auto it = std::lower_bound(lines.begin(), lines.end(), v);
    if (it == lines.end() || *it != v) throw SolverError("polygon vertex missing from mesh lines");
    return static_cast<std::size_t>(it - lines.begin());
}

constexpr double kFree = std::numeric_limits<double>::quiet_NaN();

// Dirichlet data per node: NaN for free nodes.
std::vector<double> dirichlet_data(const Grid& g, const AxisPolygonDomain& d) {
    std::vector<double> bc(g.nx() * g.ny(), kFree);
    for (std::size_t e = 0; e < d.size(); ++e) {
        if (d.marks[e] == Mark::Neumann) continue;
        const double val = d.marks[e] == Mark::Dirichlet1 ? 1.0 : 0.0;
        const Point a = d.edge_start(e), b = d.edge_end(e);
        const std::size_t i0 = line_index(g.X, std::min(a.x, b.x)), i1 = line_index(g.X, std::max(a.x, b.x));
        const std::size_t j0 = line_index(g.Y, std::min(a.y, b.y)), j1 = line_index(g.Y, std::max(a.y, b.y));
        for (std::size_t j = j0; j <= j1; ++j)
            for (std::size_t i = i0; i <= i1; ++i) {
                double& slot = bc[g.node(i, j)];
                if (!std::isnan(slot) && slot != val)
                    throw ValidationError("Dirichlet arcs touch: marks overlap at a mesh node");
                slot = val;
            }
    }
    return bc;
}

struct LevelSolution {
    std::vector<double> u;  // per node; NaN where unused
    double energy = 0.0;
    long iterations = 0;
};

double cell_energy(const Grid& g, const std::vector<double>& u, std::size_t i, std::size_t j) {
    const double hx = g.X[i + 1] - g.X[i], hy = g.Y[j + 1] - g.Y[j];
    const double u00 = u[g.node(i, j)], u10 = u[g.node(i + 1, j)];
    const double u01 = u[g.node(i, j + 1)], u11 = u[g.node(i + 1, j + 1)];
    const double ex = (u00 - u10) * (u00 - u10) + (u01 - u11) * (u01 - u11);
    const double ey = (u00 - u01) * (u00 - u01) + (u10 - u11) * (u10 - u11);
    return 0.5 * (hy / hx) * ex + 0.5 * (hx / hy) * ey;
}

LevelSolution solve_level(const Grid& g, const AxisPolygonDomain& d, const MeshConfig& cfg,
                          const std::vector<double>* guess) {
    const std::size_t nx = g.nx(), ny = g.ny();
    const std::vector<double> bc = dirichlet_data(g, d);
    std::vector<char> used(nx * ny, 0);
    for (std::size_t j = 0; j + 1 < ny; ++j)
        for (std::size_t i = 0; i + 1 < nx; ++i)
            if (g.cell(static_cast<long>(i), static_cast<long>(j))) {
                used[g.node(i, j)] = used[g.node(i + 1, j)] = 1;
                used[g.node(i, j + 1)] = used[g.node(i + 1, j + 1)] = 1;
            }
    std::vector<long> index(nx * ny, -1);
    long n = 0;
    for (std::size_t p = 0; p < nx * ny; ++p)
        if (used[p] && std::isnan(bc[p])) index[p] = n++;
    bool has0 = false, has1 = false;
    for (std::size_t p = 0; p < nx * ny; ++p)
        if (used[p] && !std::isnan(bc[p])) (bc[p] == 0.0 ? has0 : has1) = true;
    if (!has0 || !has1) throw ValidationError("both Dirichlet arcs must be resolved by the mesh");

    Eigen::SparseMatrix<double, Eigen::RowMajor> A(n, n);
    A.reserve(Eigen::VectorXi::Constant(n, 5));
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd x0 = Eigen::VectorXd::Constant(n, 0.5);

    for (std::size_t j = 0; j < ny; ++j)
        for (std::size_t i = 0; i < nx; ++i) {
            const long row = index[g.node(i, j)];
            if (row < 0) continue;
            const long li = static_cast<long>(i), lj = static_cast<long>(j);
            // Edge weights to the four neighbours from the adjacent active cells.
            double wE = 0, wW = 0, wN = 0, wS = 0;
            for (int dj = -1; dj <= 0; ++dj)
                for (int di = -1; di <= 0; ++di) {
                    const long ci = li + di, cj = lj + dj;
                    if (!g.cell(ci, cj)) continue;
                    const double hx = g.X[ci + 1] - g.X[ci], hy = g.Y[cj + 1] - g.Y[cj];
                    const double wx = 0.5 * hy / hx, wy = 0.5 * hx / hy;
                    (di == 0 ? wE : wW) += wx;
                    (dj == 0 ? wN : wS) += wy;
                }
            double diag = 0.0;
            auto couple = [&](std::size_t ni, std::size_t nj, double w) {
                if (w == 0.0) return;
                diag += w;
                const std::size_t q = g.node(ni, nj);
                if (index[q] >= 0) A.insert(row, index[q]) = -w;
                else rhs[row] += w * bc[q];
            };
            if (wW > 0) couple(i - 1, j, wW);
            if (wE > 0) couple(i + 1, j, wE);
            if (wS > 0) couple(i, j - 1, wS);
            if (wN > 0) couple(i, j + 1, wN);
            A.insert(row, row) = diag;
            if (guess && !std::isnan((*guess)[g.node(i, j)])) x0[row] = (*guess)[g.node(i, j)];
        }
    A.makeCompressed();

    Eigen::ConjugateGradient<Eigen::SparseMatrix<double, Eigen::RowMajor>, Eigen::Lower | Eigen::Upper,
                             Eigen::DiagonalPreconditioner<double>>
        cg;
    cg.setTolerance(cfg.cg_tol);
    cg.setMaxIterations(std::max<long>(2000, 40 * static_cast<long>(std::sqrt(static_cast<double>(n))) * 20));
    cg.compute(A);
    const Eigen::VectorXd x = cg.solveWithGuess(rhs, x0);
    if (cg.info() != Eigen::Success)
        throw SolverError("conjugate gradient did not reach tolerance (residual " + std::to_string(cg.error()) + ")");

    LevelSolution out;
    out.iterations = cg.iterations();
    out.u.assign(nx * ny, kFree);
    for (std::size_t p = 0; p < nx * ny; ++p) {
        if (!used[p]) continue;
        out.u[p] = index[p] >= 0 ? x[index[p]] : bc[p];
    }
    double e = 0.0;
    for (std::size_t j = 0; j + 1 < ny; ++j)
        for (std::size_t i = 0; i + 1 < nx; ++i)
            if (g.cell(static_cast<long>(i), static_cast<long>(j))) e += cell_energy(g, out.u, i, j);
    out.energy = e;
    return out;
}

// Coarse-to-fine initial guess: fine lines are the coarse lines plus midpoints.
std::vector<double> prolong(const Grid& coarse, const std::vector<double>& uc, const Grid& fine) {
    std::vector<double> uf(fine.nx() * fine.ny(), kFree);
    auto at = [&](std::size_t i, std::size_t j) { return uc[coarse.node(i, j)]; };
    for (std::size_t j = 0; j < fine.ny(); ++j)
        for (std::size_t i = 0; i < fine.nx(); ++i) {
            double sum = 0.0;
            int cnt = 0;
            const std::size_t is[2] = {i / 2, (i + 1) / 2}, js[2] = {j / 2, (j + 1) / 2};
            for (auto ci : is)
                for (auto cj : js) {
                    const double v = at(ci, cj);
                    if (!std::isnan(v)) {
                        sum += v;
                        ++cnt;
                    }
                }
            if (cnt > 0) uf[fine.node(i, j)] = sum / cnt;
        }
    return uf;
}

void check_solvable(const AxisPolygonDomain& d) {
    require(d.size() >= 4, "polygon needs at least four vertices");
    require(d.is_rectilinear(), "solver needs an axis-parallel polygon");
    require(d.signed_area() > 0.0, "solver needs a counterclockwise polygon");
    for (std::size_t i = 0; i < d.size(); ++i) {
        require(d.roles[i] != EdgeRole::Slit, "slit domains are not supported by the solver");
        require(d.edge_length(i) > 0.0, "polygon has a zero-length edge");
    }
    require(is_quadrilateral(d), "solver needs exactly one Dirichlet0 and one Dirichlet1 arc");
}

}  // namespace

ModulusResult solve_modulus(const AxisPolygonDomain& marked, const MeshConfig& cfg) {
    check_solvable(marked);
    require(cfg.base_h > 0.0 && cfg.corner_h > 0.0 && cfg.grading >= 1.0, "bad mesh grading parameters");
    require(cfg.refinement_levels >= 2, "need at least two refinement levels");
    require(cfg.cg_tol > 0.0 && cfg.max_cells > 0, "bad solver tolerance or budget");

    const auto bx = breakpoints(marked, true), by = breakpoints(marked, false);
    const double extent = std::max(bx.back() - bx.front(), by.back() - by.front());
    const double h_max = cfg.base_h * extent;
    const auto X0 = graded_axis(bx, cfg, h_max), Y0 = graded_axis(by, cfg, h_max);

    Grid base;
    base.X = X0;
    base.Y = Y0;
    classify(base, marked);
    const int L = cfg.refinement_levels;
    const double finest = static_cast<double>(base.n_active) * std::pow(4.0, L - 1);
    if (finest > static_cast<double>(cfg.max_cells))
        throw BudgetError("mesh budget exceeded: finest level needs " + std::to_string(static_cast<long>(finest)) +
                          " cells, budget " + std::to_string(cfg.max_cells));

    ModulusResult res;
    Grid prev;
    std::vector<double> prev_u;
    for (int lev = 0; lev < L; ++lev) {
        Grid g;
        g.X = subdivide(X0, lev);
        g.Y = subdivide(Y0, lev);
        classify(g, marked);
        std::vector<double> guess;
        if (lev > 0) guess = prolong(prev, prev_u, g);
        LevelSolution sol = solve_level(g, marked, cfg, lev > 0 ? &guess : nullptr);
        res.level_values.push_back(sol.energy);
        res.level_cells.push_back(g.n_active);
        res.iterations += sol.iterations;
        prev = std::move(g);
        prev_u = std::move(sol.u);
    }
    res.energy = res.level_values.back();
    res.value = res.energy;
    res.error_est = std::fabs(res.level_values[L - 1] - res.level_values[L - 2]);
    res.cells = res.level_cells.back();
    return res;
}

AxisPolygonDomain conjugate_quadrilateral(const AxisPolygonDomain& marked) {
    require(is_quadrilateral(marked), "conjugation needs a marked quadrilateral");
    const auto runs = mark_runs(marked);
    require(runs.size() == 4, "conjugation needs four boundary arcs");
    AxisPolygonDomain out = marked;
    bool first_neumann = true;
    for (const auto& r : runs) {
        Mark m = Mark::Neumann;
        if (r.mark == Mark::Neumann) {
            m = first_neumann ? Mark::Dirichlet1 : Mark::Dirichlet0;
            first_neumann = false;
        }
        for (std::size_t k = 0; k < r.count; ++k) out.marks[(r.first + k) % out.size()] = m;
    }
    return out;
}

}  // namespace chimlab
