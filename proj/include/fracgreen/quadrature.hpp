#pragma once

#include <array>
#include <functional>

namespace fracgreen {

using Point = std::array<double, 2>;

// Adaptive Simpson on [a, b] to absolute tolerance. Splits until the local
// error estimate is below the budget or max_depth is reached.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol = 1e-10, int max_depth = 40);

// Fixed 12-point Gauss-Legendre rule on [a, b]. For smooth integrands where
// a deterministic cheap rule beats adaptivity.
double gauss1d(const std::function<double(double)>& f, double a, double b);

// Nodes/weights of the tensor Gauss-Legendre rule on a rectangle, fixed
// 12-point basis per axis. Used for smooth 2-D cell integrals.
double gauss2d(const std::function<double(double, double)>& f, double ax, double bx,
               double ay, double by);

// One-sided pair integral C * int_0^inf (2u(x) - u(x+s) - u(x-s)) s^{-1-2a} ds
// for a smooth callback u on R (N = 1). The singular end is handled by a
// Taylor expansion on [0, delta] with finite-difference derivatives; the far
// end is cut at `cutoff` after which u is assumed to vanish identically.
// `breaks` lists interior points where u loses smoothness (support edges).
double singular_pair_integral(const std::function<double(double)>& u, double x,
                              double alpha, double c_norm, double cutoff,
                              const std::array<double, 4>& breaks, int n_breaks,
                              double tol = 1e-10);

} // namespace fracgreen
