#pragma once

#include "fracgreen/model.hpp"

namespace fracgreen {

// Discrete W^{1,q} norm: (sum |u|^q h^N + sum |grad u|^q h^N)^{1/q} with the
// one-sided stencils at boundary-adjacent nodes. q >= 1.
double w1q_norm(const GridField& u, double q);

// Gradient part only: (sum |grad u|^q h^N)^{1/q}; q > 0 accepted since the
// fixed-point ball also uses sublinear exponents through L^1.
double grad_lq_norm(const GridField& u, double q);

} // namespace fracgreen
