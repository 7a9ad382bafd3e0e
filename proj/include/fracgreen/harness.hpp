#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fracgreen/model.hpp"
#include "fracgreen/norms.hpp"
#include "fracgreen/solver.hpp"

namespace fracgreen {

// Smooth compactly supported test function exp(1 - 1/(1 - t^2)) with
// t = (x - center)/width; unit height, vanishing to all orders at the
// support edge.
struct Bump {
    double center = 0.0;
    double width = 0.2;
    double operator()(double x) const;
};

// Finite surrogate of the admissible test class: seeded bumps staying at
// least 0.05 away from the boundary, with their fractional Laplacians
// precomputed at the nodes by direct singular quadrature, plus a family of
// boundary-rate functions (dist^{-a} xi continuous).
struct TestBattery {
    std::shared_ptr<const Grid> grid;
    FracParams params;
    std::vector<Bump> bumps;
    std::vector<std::vector<double>> bump_laplacians;
    std::vector<double> bump_scale; // L1 norm of each Laplacian (residual scale)
    std::vector<std::function<double(double)>> calpha;
};

TestBattery make_battery(std::shared_ptr<const Grid> grid, const FracParams& params,
                         std::uint64_t seed = 0, int n_bumps = 8);

// Normalized weak-formulation residual of u against the battery: the maximum
// over bumps of the defect in the integral identity, every pairing by
// quadrature independent of the solve path. `extra_source` joins the
// right-hand side (used for lifted boundary densities, whose boundary pairing
// vanishes against interior bumps).
double weak_residual(const GridField& u, const ProblemSpec& problem,
                     const TestBattery& battery,
                     const GridField* extra_source = nullptr);

struct ComparisonReport {
    bool ordered = false;       // larger source gives the larger solution
    double max_violation = 0.0; // worst negative gap
    int counterexample_node = -1;
    double two_start_gap = 0.0; // sup difference between two Picard starts
};

// Sub/super pair built from sigma nu versus sigma nu plus a positive bump,
// plus a two-initialization uniqueness probe on the identical problem.
ComparisonReport comparison_experiment(const ProblemSpec& base,
                                       double bump_height = 0.2,
                                       double tol = 1e-6);

struct StabilityReport {
    std::vector<int> schedule;
    std::vector<double> distances; // W^{1,p} distance to the proxy solution
    bool eventually_decreasing = false;
    double final_distance = 0.0;
};

// Perturbed-data solves: the interior measure mollified at each schedule
// level, exterior atoms shifted outward by 1/level; distances are measured
// against the proxy solution at `proxy_level`.
StabilityReport stability_experiment(const ProblemSpec& base,
                                     const std::vector<int>& schedule = {4, 8, 16,
                                                                         32},
                                     int proxy_level = 64);

struct SweepRow {
    double q = 0.0;         // effective exponent (clamped to >= 1)
    double q_factor = 0.0;  // multiple of p*
    std::vector<double> norm;     // W^{1,q} per refinement
    std::vector<double> weighted; // gradient norm weighted by dist^{1-a}
    double ratio_norm = 0.0;      // finest successive-refinement ratio
    double ratio_weighted = 0.0;
    std::string verdict_norm;     // stable / growing / indeterminate
    std::string verdict_weighted;
};

struct SweepReport {
    std::vector<int> refinements;
    std::vector<SweepRow> rows;
};

// Refinement sweep of the Green potential of a unit Dirac at the origin.
// Verdicts classify the finest ratio: within [0.95, 1.05] is stable,
// >= 1.10 is growing.
SweepReport critical_sweep(const FracParams& params,
                           const std::vector<int>& refinements = {128, 256, 512},
                           const std::vector<double>& q_factors = {0.5, 0.8, 0.9,
                                                                   1.0, 1.1});

} // namespace fracgreen
