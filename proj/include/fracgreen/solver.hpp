#pragma once

#include <cstdint>
#include <memory>

#include "fracgreen/green.hpp"
#include "fracgreen/model.hpp"

namespace fracgreen {

enum class Regime { Superlinear, Sublinear };

Regime regime_of(double p);

// Scalar inputs of the smallness function. grad_p_poisson carries
// rho^p ||grad P[mu]||_p^p in the superlinear regime and
// rho ||grad P[mu]||_1 in the sublinear one.
struct SmallnessCoeffs {
    double c0 = 0.0;
    double c = 0.0;
    double p = 1.0;
    double eps_f_l1 = 0.0;
    double sigma_C0 = 0.0;
    double grad_p_poisson = 0.0;
    double domain_vol = 0.0; // sublinear only
};

// Empirical lower bound for the L^1 -> gradient-L^p constant of the Green
// operator: max over a probe set of unit-mass sources. The probe set mixes
// Diracs and normalized densities; `extra_probes` appends seeded locations.
double estimate_c0(const GreenTable& green, double p, std::uint64_t seed = 0,
                   int extra_probes = 4);

double evaluate_F(double lambda, const SmallnessCoeffs& coeffs, Regime regime);

// Positive root of the smallness function, bisected to relative 1e-10.
// Throws NoRootError carrying the largest admissible growth coefficient when
// no root exists. Degenerate all-zero data returns 0.
double lambda_star(const SmallnessCoeffs& coeffs, Regime regime);

// Level-n approximation of an interior measure: compactly supported C^1
// mollifier of radius r0 / n, discretely renormalized so the total mass is
// preserved exactly (also under boundary clipping).
GridField mollify_measure(const RadonMeasure& nu, int level,
                          std::shared_ptr<const Grid> grid, double r0 = 0.4);

// Truncated growth: min(g(x, s), n).
double truncated_growth(const GrowthSpec& g, int level, int node, double s);

// Everything a Picard run needs that does not depend on the level.
struct SolverSetup {
    std::shared_ptr<const Grid> grid;
    GreenTable green;
    GridField frozen_part;     // rho P[mu] (+ lifted boundary part when present)
    GridField p_part;          // rho P[mu] alone
    std::optional<GridField> eta_part;
    GridField eta_source;      // fixed density added to the right-hand side
    double route_discrepancy = 0.0;
    SmallnessCoeffs coeffs;
    Regime regime = Regime::Superlinear;
    double lambda = 0.0;
};

// Builds the Green table, the Poisson part, the coefficient estimates and
// lambda_star. `eta_source` is an optional fixed interior density whose Green
// potential joins the frozen part (boundary-concentrated data enters here).
SolverSetup prepare_solver(const ProblemSpec& problem,
                           const GridField* eta_source = nullptr,
                           std::uint64_t seed = 0);

// Damped Picard iteration at one truncation/mollification level. The start
// defaults to the Green potential of the fixed sources; `start` overrides it
// (used by the two-initialization uniqueness probe).
Solution picard_solve(const ProblemSpec& problem, int level, const SolverSetup& setup,
                      const GridField* start = nullptr);
Solution picard_solve(const ProblemSpec& problem, int level);

// Full solve across the level schedule {16, 32, 64}.
Solution solve_full(const ProblemSpec& problem);
Solution solve_full(const ProblemSpec& problem, const SolverSetup& setup);

} // namespace fracgreen
