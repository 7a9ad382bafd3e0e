#pragma once

#include <Eigen/Dense>
#include <memory>

#include "fracgreen/model.hpp"
#include "fracgreen/operator.hpp"

namespace fracgreen {

enum class GreenRoute { Explicit, NumericInverse };

// Dense symmetric Green table. Explicit entries come from the closed-form
// ball kernel; NumericInverse entries from dense solves of the operator
// table against discrete Diracs.
struct GreenTable {
    std::shared_ptr<const Grid> grid;
    FracParams params;
    GreenRoute route = GreenRoute::Explicit;
    Eigen::MatrixXd G;
};

// Ball Green kernel value at distinct interior points, evaluated through
// the one-dimensional incomplete kernel integral.
double green_kernel_ball(Point x, Point y, const FracParams& params);

// Explicit route needs nothing extra; NumericInverse needs the assembled
// operator table.
GreenTable build_green(std::shared_ptr<const Grid> grid, const FracParams& params,
                       GreenRoute route, const OperatorTable* op = nullptr);

// Green potential of an interior source.
GridField green_apply(const GreenTable& table, const GridField& density);
GridField green_apply(const GreenTable& table, const RadonMeasure& source);

// Trace density of an exterior measure:
// w_mu(x) = c_norm * sum_k m_k |z_k - x|^{-N-2a}.
GridField exterior_trace_density(const RadonMeasure& mu,
                                 std::shared_ptr<const Grid> grid,
                                 const FracParams& params);

struct PoissonResult {
    GridField field;          // route (a): Green potential of the trace density
    double route_discrepancy; // sup-relative gap against the direct route (b)
};

// Poisson potential of an exterior measure by both routes; returns route (a)
// and records the relative discrepancy. Throws InconsistencyError when the
// routes disagree beyond `tol`.
PoissonResult poisson_apply(const RadonMeasure& mu, const GreenTable& table,
                            const FracParams& params, double tol = 0.02);

// Exterior-point flux functional on a zero-extended grid field:
// -c_norm * int_Omega phi(y) |x - y|^{-N-2a} dy, cell-exact kernel masses.
double nonlocal_normal_derivative(const GridField& phi, Point x_ext,
                                  const FracParams& params);

// Nodal gradient: central differences inside, one-sided second order at the
// nodes adjacent to the boundary. dim 1 only.
std::vector<double> gradient(const GridField& u);

} // namespace fracgreen
