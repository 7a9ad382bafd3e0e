#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>

#include "fracgreen/model.hpp"

namespace fracgreen {

// Dense table of the discretized operator with zero extension. Row i of
// `weights` applied to nodal values gives the operator at node i.
//
// Structure: weights(i,j) = -pair(|i-j|) off the diagonal, and
// weights(i,i) = sum_{j != i} pair + tail(i), so constant fields map to
// tail exactly. Pair coefficients are exact kernel masses over cells of the
// symmetrized difference quadrature, plus a Taylor correction for the
// singular cell; tail(i) is the kernel mass of everything the node pairing
// does not cover (the exterior of the ball up to half a cell).
struct OperatorTable {
    std::shared_ptr<const Grid> grid;
    FracParams params;
    Eigen::MatrixXd weights;
    Eigen::VectorXd tail;
};

OperatorTable assemble_operator(std::shared_ptr<const Grid> grid, const FracParams& params);

// Applies the table. Zero extension is the plain matvec; a measure-valued
// exterior extension subtracts its trace density.
GridField apply_operator(const OperatorTable& table, const GridField& u);

// Truncated operator on a smooth callback: the singular integral with the
// ball |y - x| < eps removed. `support_radius` bounds the support of u so
// the far field reduces to an analytic power tail.
double apply_truncated(const FracParams& params, const std::function<double(Point)>& u,
                       double eps, Point x, double support_radius = 4.0);

// Closed-form exterior tail for dim 1: c_norm * [(1-x)^{-2a} + (1+x)^{-2a}] / (2a).
double exterior_tail_1d(double x, const FracParams& params);

} // namespace fracgreen
