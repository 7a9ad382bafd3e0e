#pragma once

#include <functional>
#include <vector>

#include "fracgreen/model.hpp"
#include "fracgreen/solver.hpp"

namespace fracgreen {

// Largest admissible lift level for the unit ball; conservative so every
// lifted set stays a comfortably interior sphere.
inline constexpr double kMaxLiftLevel = 0.25;

// Boundary measure lifted to the interior level set {dist = t}: each atom
// moves radially to (1 - t) x with unchanged mass; the scale t^{-a} turns the
// family into an approximation of the fractional normal derivative.
struct LiftedMeasure {
    double t = 0.0;
    RadonMeasure measure; // Interior, supported on {dist = t}
    double scale = 1.0;   // t^{-a}
};

LiftedMeasure lift_measure(const RadonMeasure& eta, double t, const Grid& grid,
                           const FracParams& params);

struct NormalLimit {
    double value = 0.0;
    bool converged = false;
    double order = 0.0; // estimated convergence order of t^{-a} xi(x + t n)
};

// Richardson-extrapolated limit of t^{-a} xi(x + t n_x) along t = t0 2^{-j},
// j = 0..8, with the inward normal n_x = -x. Flags non-Cauchy sequences
// instead of throwing.
NormalLimit fractional_normal_test(const std::function<double(double)>& xi,
                                   double x_boundary, const FracParams& params);

// C^1 density of a lifted measure: quartic mollifier of radius t/2 around
// each lifted atom, mass-exact; support stays inside {dist < 2t}.
GridField lifted_density(const LiftedMeasure& lifted,
                         std::shared_ptr<const Grid> grid);

struct BoundaryLevelReport {
    double t = 0.0;
    double l1 = 0.0;          // L1 norm of the solution
    double cauchy = 0.0;      // L1 distance to the previous level (0 for the first)
    double w11 = 0.0;         // W^{1,1} norm
    double w1q = 0.0;         // W^{1,(1+p*)/2} norm
};

struct BoundaryReport {
    std::vector<BoundaryLevelReport> levels;
    std::vector<Solution> solutions;
};

// Solves the base problem with the source augmented by scale * lifted
// density for every t in the (decreasing) schedule. Throws
// DivergingSequenceError when the Cauchy differences grow twice in a row.
BoundaryReport solve_concentrated(const RadonMeasure& eta, const ProblemSpec& base,
                                  const std::vector<double>& schedule);

} // namespace fracgreen
