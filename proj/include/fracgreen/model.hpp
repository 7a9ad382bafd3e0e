#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "fracgreen/quadrature.hpp"

namespace fracgreen {

// Normalization constant of the singular-integral operator, Gamma closed
// form. Valid for alpha in (0,1); the solver separately restricts to
// (1/2, 1).
double normalization_constant(int dim, double alpha);

// Same constant from numerical quadrature of the defining Fourier-side
// integral. Independent route used for verification; agrees with the Gamma
// form to ~1e-10 (dim 1) / ~1e-7 (dim 2).
double normalization_constant_fourier(int dim, double alpha);

struct FracParams {
    int dim = 1;        // 1 or 2
    double alpha = 0.75; // order, in (1/2, 1) for the solver
    double c_norm = 0.0; // normalization constant

    // Critical gradient exponent dim / (dim - (2 alpha - 1)).
    double p_star() const;
};

// Builds params with c_norm filled in; throws ParameterError outside the
// admissible range.
FracParams make_params(int dim, double alpha);

// Uniform discretization of the unit ball: interval (-1,1) for dim 1,
// lattice points strictly inside the unit disk for dim 2. Spacing
// h = 2/(n+1) per axis.
struct Grid {
    int dim = 1;
    int n = 0;      // nodes per axis
    double h = 0.0; // 2/(n+1)
    std::vector<Point> nodes;
    std::vector<std::array<int, 2>> lattice; // per-node axis indices
    std::vector<double> dist;                // 1 - |x|

    int size() const { return static_cast<int>(nodes.size()); }
    double x(int k) const { return nodes[k][0]; }
    double cell_volume() const { return dim == 1 ? h : h * h; }
};

std::shared_ptr<const Grid> make_grid(int dim, int n);

struct RadonMeasure;

enum class Extension { Zero, MeasureDensity };

struct GridField {
    std::shared_ptr<const Grid> grid;
    std::vector<double> values;
    Extension ext = Extension::Zero;
    std::shared_ptr<const RadonMeasure> ext_measure; // set when ext == MeasureDensity
    double ext_weight = 1.0;                          // scaling of the exterior measure

    double& operator[](int i) { return values[i]; }
    double operator[](int i) const { return values[i]; }
    int size() const { return static_cast<int>(values.size()); }
};

GridField make_field(std::shared_ptr<const Grid> grid, double fill = 0.0);
GridField make_field(std::shared_ptr<const Grid> grid,
                     const std::function<double(Point)>& f);

// Discrete L1 norm (cell volume weighted).
double l1_norm(const GridField& u);
double linf_norm(const GridField& u);

enum class Support { Interior, Exterior, Boundary };

struct MeasureAtom {
    Point point{0.0, 0.0};
    double mass = 0.0;
};

// Nonnegative Radon measure: atoms plus an optional density on the grid.
// Exterior measures are purely atomic with a declared separation from the
// closed ball; boundary measures sit exactly on |x| = 1.
struct RadonMeasure {
    Support support = Support::Interior;
    std::vector<MeasureAtom> atoms;
    std::optional<GridField> density; // Interior only
    double separation = 0.05;         // exterior: |z| >= 1 + separation

    double atom_mass() const;
    double total_mass() const; // atoms + density L1
};

struct SolverConfig {
    double tol = 1e-8;
    int max_iter = 200;
    double theta = 1.0; // damping in (0, 1]
};

// Growth data g(x, s) = c s^p + eps |f(x)|. A user callback may replace the
// evaluation but must itself obey that bound with the declared coefficients.
struct GrowthSpec {
    double c = 0.0;
    double p = 1.0;
    double eps = 0.0;
    GridField f;
    std::function<double(int node, double s)> callback;

    double eval(int node, double s) const;
};

struct ProblemSpec {
    FracParams params;
    std::shared_ptr<const Grid> grid;
    GrowthSpec g;
    double sigma = 0.0;
    double rho = 0.0;
    RadonMeasure nu;               // Interior
    RadonMeasure mu;               // Exterior
    std::optional<RadonMeasure> eta; // Boundary
    SolverConfig solver;
    double p_star = 0.0; // filled by validate_problem
};

// Checks every model invariant; returns the spec with p_star filled in.
// Throws ValidationError naming the violated assumption.
ProblemSpec validate_problem(ProblemSpec spec);

struct Solution {
    GridField u;
    GridField g_part; // Green potential of the nonlinear source + sigma nu
    GridField p_part; // rho * Poisson potential of mu
    std::optional<GridField> eta_part;
    int iterations = 0;
    std::vector<double> residual_history;
    double lambda_star = 0.0;
    std::vector<double> grad_lp_history;
    double c0 = 0.0;               // gradient-bound estimate used for lambda_star
    double route_discrepancy = 0.0; // Poisson dual-route relative gap
    std::vector<int> levels;
    std::vector<int> level_iterations; // Picard count per level
    std::vector<double> level_diffs;   // successive-level W^{1,p} differences
};

} // namespace fracgreen
