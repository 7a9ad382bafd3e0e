#include "fracgreen/norms.hpp"

#include <cmath>

#include "fracgreen/errors.hpp"
#include "fracgreen/green.hpp"

namespace fracgreen {

double w1q_norm(const GridField& u, double q) {
    if (q < 1.0) throw ParameterError("w1q_norm: q must be >= 1");
    const double vol = u.grid->cell_volume();
    auto du = gradient(u);
    double s = 0.0;
    for (int i = 0; i < u.size(); ++i)
        s += (std::pow(std::abs(u[i]), q) + std::pow(std::abs(du[i]), q)) * vol;
    return std::pow(s, 1.0 / q);
}

double grad_lq_norm(const GridField& u, double q) {
    const double vol = u.grid->cell_volume();
    auto du = gradient(u);
    double s = 0.0;
    for (int i = 0; i < u.size(); ++i) s += std::pow(std::abs(du[i]), q) * vol;
    return std::pow(s, 1.0 / q);
}

} // namespace fracgreen
