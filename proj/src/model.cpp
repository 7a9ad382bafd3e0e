#include "fracgreen/model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "fracgreen/errors.hpp"

namespace fracgreen {

namespace {

// int_A^inf cos(s) s^{-1-2a} ds by repeated integration by parts; remainder
// O(A^{-5-2a}).
double oscillatory_tail_cos(double A, double two_a) {
    auto g = [&](int k) { // k-th derivative of s^{-1-2a} at A, signs included
        double c = k % 2 == 0 ? 1.0 : -1.0;
        for (int j = 0; j < k; ++j) c *= (1.0 + two_a + j);
        return c * std::pow(A, -1.0 - two_a - k);
    };
    const double s = std::sin(A), c = std::cos(A);
    // I = -sin(A) g - cos(A) g' + sin(A) g'' + cos(A) g''' + O(g'''')
    return -s * g(0) - c * g(1) + s * g(2) + c * g(3);
}

double fourier_integral_1d(double alpha) {
    const double two_a = 2.0 * alpha;
    const double delta = 0.1, A = 200.0;
    // Series on [0, delta]: 1 - cos(s) = s^2/2 - s^4/24 + s^6/720 - s^8/40320.
    double head = std::pow(delta, 2.0 - two_a) / (2.0 * (2.0 - two_a)) -
                  std::pow(delta, 4.0 - two_a) / (24.0 * (4.0 - two_a)) +
                  std::pow(delta, 6.0 - two_a) / (720.0 * (6.0 - two_a)) -
                  std::pow(delta, 8.0 - two_a) / (40320.0 * (8.0 - two_a));
    double mid = 0.0;
    double a = delta;
    while (a < A) { // window the oscillation
        double b = std::min(a + 8.0, A);
        mid += adaptive_simpson(
            [&](double s) { return (1.0 - std::cos(s)) * std::pow(s, -1.0 - two_a); }, a,
            b, 1e-13, 40);
        a = b;
    }
    double tail = std::pow(A, -two_a) / two_a - oscillatory_tail_cos(A, two_a);
    return 2.0 * (head + mid + tail);
}

double fourier_integral_2d(double alpha) {
    const double two_a = 2.0 * alpha;
    const double delta = 0.1, A = 4000.0;
    // 2 pi int_0^inf (1 - J_0(r)) r^{-1-2a} dr.
    // Series of 1 - J_0: r^2/4 - r^4/64 + r^6/2304 - r^8/147456.
    double head = std::pow(delta, 2.0 - two_a) / (4.0 * (2.0 - two_a)) -
                  std::pow(delta, 4.0 - two_a) / (64.0 * (4.0 - two_a)) +
                  std::pow(delta, 6.0 - two_a) / (2304.0 * (6.0 - two_a)) -
                  std::pow(delta, 8.0 - two_a) / (147456.0 * (8.0 - two_a));
    double mid = 0.0;
    // Piecewise over ~pi-length windows keeps the adaptive rule honest on the
    // oscillation; absolute budget is spread over the windows.
    double a = delta;
    while (a < A) {
        double b = std::min(a + 16.0, A);
        mid += adaptive_simpson(
            [&](double r) {
                return (1.0 - std::cyl_bessel_j(0.0, r)) * std::pow(r, -1.0 - two_a);
            },
            a, b, 1e-12, 36);
        a = b;
    }
    // Neglected oscillatory remainder is O(A^{-3/2-2a}).
    double tail = std::pow(A, -two_a) / two_a;
    return 2.0 * std::numbers::pi * (head + mid + tail);
}

} // namespace

double normalization_constant(int dim, double alpha) {
    if (dim != 1 && dim != 2)
        throw ParameterError("normalization_constant: dimension must be 1 or 2");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw ParameterError("normalization_constant: alpha must lie in (0, 1)");
    const double num = std::pow(2.0, 2.0 * alpha) * std::tgamma(0.5 * dim + alpha);
    const double den = std::pow(std::numbers::pi, 0.5 * dim) * std::tgamma(-alpha);
    return -num / den;
}

double normalization_constant_fourier(int dim, double alpha) {
    if (dim != 1 && dim != 2)
        throw ParameterError("normalization_constant_fourier: dimension must be 1 or 2");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw ParameterError("normalization_constant_fourier: alpha must lie in (0, 1)");
    const double integral = dim == 1 ? fourier_integral_1d(alpha) : fourier_integral_2d(alpha);
    return 1.0 / integral;
}

double FracParams::p_star() const { return dim / (dim - (2.0 * alpha - 1.0)); }

FracParams make_params(int dim, double alpha) {
    if (dim != 1 && dim != 2) throw ParameterError("dimension must be 1 or 2");
    if (!(alpha > 0.5 && alpha < 1.0))
        throw ParameterError("alpha must lie in (1/2, 1)");
    return FracParams{dim, alpha, normalization_constant(dim, alpha)};
}

std::shared_ptr<const Grid> make_grid(int dim, int n) {
    if (dim != 1 && dim != 2) throw ParameterError("grid dimension must be 1 or 2");
    if (n < 1) throw ParameterError("grid needs at least one node per axis");
    auto g = std::make_shared<Grid>();
    g->dim = dim;
    g->n = n;
    g->h = 2.0 / (n + 1);
    if (dim == 1) {
        g->nodes.reserve(n);
        for (int i = 0; i < n; ++i) {
            const double xi = -1.0 + (i + 1) * g->h;
            g->nodes.push_back({xi, 0.0});
            g->lattice.push_back({i, 0});
            g->dist.push_back(1.0 - std::abs(xi));
        }
    } else {
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                const double xi = -1.0 + (i + 1) * g->h;
                const double yj = -1.0 + (j + 1) * g->h;
                const double r = std::hypot(xi, yj);
                if (r < 1.0 - 1e-12) {
                    g->nodes.push_back({xi, yj});
                    g->lattice.push_back({i, j});
                    g->dist.push_back(1.0 - r);
                }
            }
    }
    return g;
}

GridField make_field(std::shared_ptr<const Grid> grid, double fill) {
    GridField f;
    f.grid = std::move(grid);
    f.values.assign(f.grid->size(), fill);
    return f;
}

GridField make_field(std::shared_ptr<const Grid> grid,
                     const std::function<double(Point)>& fn) {
    GridField f;
    f.grid = std::move(grid);
    f.values.resize(f.grid->size());
    for (int i = 0; i < f.grid->size(); ++i) f.values[i] = fn(f.grid->nodes[i]);
    return f;
}

double l1_norm(const GridField& u) {
    double s = 0.0;
    for (double v : u.values) s += std::abs(v);
    return s * u.grid->cell_volume();
}

double linf_norm(const GridField& u) {
    double s = 0.0;
    for (double v : u.values) s = std::max(s, std::abs(v));
    return s;
}

double RadonMeasure::atom_mass() const {
    double s = 0.0;
    for (const auto& a : atoms) s += a.mass;
    return s;
}

double RadonMeasure::total_mass() const {
    double s = atom_mass();
    if (density) s += l1_norm(*density);
    return s;
}

double GrowthSpec::eval(int node, double s) const {
    if (callback) return callback(node, s);
    return c * std::pow(s, p) + eps * std::abs(f.values.empty() ? 0.0 : f[node]);
}

namespace {

void check_measure(const RadonMeasure& m, const char* name) {
    for (const auto& a : m.atoms) {
        if (a.mass < 0.0) {
            std::ostringstream os;
            os << name << ": measures must be non-negative (atom mass " << a.mass << ")";
            throw ValidationError(os.str());
        }
        const double r = std::hypot(a.point[0], a.point[1]);
        switch (m.support) {
        case Support::Interior:
            if (r >= 1.0)
                throw ValidationError(std::string(name) +
                                      ": interior measure has an atom outside the open ball");
            break;
        case Support::Exterior:
            if (m.separation <= 0.0)
                throw ValidationError(std::string(name) +
                                      ": exterior measure needs a positive separation");
            if (r < 1.0 + m.separation)
                throw ValidationError(
                    std::string(name) +
                    ": exterior support violated; atoms must satisfy |z| >= 1 + separation");
            break;
        case Support::Boundary:
            if (std::abs(r - 1.0) > 1e-14)
                throw ValidationError(std::string(name) +
                                      ": boundary measure atoms must satisfy |z| = 1");
            break;
        }
    }
    if (m.density && m.support != Support::Interior)
        throw ValidationError(std::string(name) + ": only interior measures carry a density");
    if (m.density)
        for (double v : m.density->values)
            if (v < 0.0)
                throw ValidationError(std::string(name) + ": density must be non-negative");
    if (m.support == Support::Exterior && !std::isfinite(m.atom_mass()))
        throw ValidationError(std::string(name) + ": exterior mass must be finite");
}

} // namespace

ProblemSpec validate_problem(ProblemSpec spec) {
    if (!(spec.params.alpha > 0.5 && spec.params.alpha < 1.0))
        throw ValidationError("alpha must lie in (1/2, 1)");
    if (spec.params.dim != 1 && spec.params.dim != 2)
        throw ValidationError("dimension must be 1 or 2");
    const double expected = normalization_constant(spec.params.dim, spec.params.alpha);
    if (!(spec.params.c_norm > 0.0) ||
        std::abs(spec.params.c_norm - expected) > 1e-10 * expected)
        throw ValidationError("c_norm does not match the normalization constant");
    if (!spec.grid) throw ValidationError("problem needs a grid");
    if (spec.grid->dim != spec.params.dim)
        throw ValidationError("grid dimension does not match params");
    for (int i = 0; i < spec.grid->size(); ++i)
        if (!(spec.grid->dist[i] > 0.0))
            throw ValidationError("grid node on or outside the boundary");

    spec.p_star = spec.params.p_star();
    if (!(spec.g.p > 0.0) || spec.g.p >= spec.p_star) {
        std::ostringstream os;
        os << "growth exponent p = " << spec.g.p << " must lie in (0, p*) with p* = "
           << spec.p_star;
        throw ValidationError(os.str());
    }
    if (spec.g.c < 0.0 || spec.g.eps < 0.0)
        throw ValidationError("growth coefficients c, eps must be non-negative");
    if (spec.sigma < 0.0 || spec.rho < 0.0)
        throw ValidationError("weights sigma, rho must be non-negative");
    if (!spec.g.f.values.empty() && spec.g.f.grid && spec.g.f.grid->size() != spec.grid->size())
        throw ValidationError("growth density f lives on a different grid");

    if (spec.nu.support != Support::Interior)
        throw ValidationError("nu must be an interior measure");
    if (spec.mu.support != Support::Exterior)
        throw ValidationError("mu must be an exterior measure");
    check_measure(spec.nu, "nu");
    check_measure(spec.mu, "mu");
    if (spec.eta) {
        if (spec.eta->support != Support::Boundary)
            throw ValidationError("eta must be a boundary measure");
        check_measure(*spec.eta, "eta");
    }

    if (!(spec.solver.tol > 0.0)) throw ValidationError("solver tol must be positive");
    if (spec.solver.max_iter < 1) throw ValidationError("solver max_iter must be >= 1");
    if (!(spec.solver.theta > 0.0 && spec.solver.theta <= 1.0))
        throw ValidationError("damping theta must lie in (0, 1]");
    return spec;
}

} // namespace fracgreen
