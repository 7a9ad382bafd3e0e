#include "fracgreen/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace fracgreen {

namespace {

double simpson(const std::function<double(double)>& f, double a, double fa, double b,
               double fb, double m, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

// `force` levels always subdivide; periodic or symmetric integrands can fool
// the error estimate when the initial samples land on symmetry points.
double adapt(const std::function<double(double)>& f, double a, double fa, double b,
             double fb, double m, double fm, double whole, double tol, int depth,
             int force) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(f, a, fa, m, fm, lm, flm);
    const double right = simpson(f, m, fm, b, fb, rm, frm);
    const double delta = left + right - whole;
    if (depth <= 0 || (force <= 0 && std::abs(delta) <= 15.0 * tol))
        return left + right + delta / 15.0;
    return adapt(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1, force - 1) +
           adapt(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1, force - 1);
}

// 12-point Gauss-Legendre abscissae/weights on [-1, 1].
constexpr int kGaussN = 12;
constexpr double kGaussX[kGaussN] = {
    -0.9815606342467192, -0.9041172563704749, -0.7699026741943047,
    -0.5873179542866175, -0.3678314989981802, -0.1252334085114689,
    0.1252334085114689,  0.3678314989981802,  0.5873179542866175,
    0.7699026741943047,  0.9041172563704749,  0.9815606342467192};
constexpr double kGaussW[kGaussN] = {
    0.0471753363865118, 0.1069393259953184, 0.1600783285433462,
    0.2031674267230659, 0.2334925365383548, 0.2491470458134028,
    0.2491470458134028, 0.2334925365383548, 0.2031674267230659,
    0.1600783285433462, 0.1069393259953184, 0.0471753363865118};

} // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, int max_depth) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    const double whole = simpson(f, a, fa, b, fb, m, fm);
    return adapt(f, a, fa, b, fb, m, fm, whole, abs_tol, max_depth, 5);
}

double gauss1d(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < kGaussN; ++i) sum += kGaussW[i] * f(c + hw * kGaussX[i]);
    return sum * hw;
}

double gauss2d(const std::function<double(double, double)>& f, double ax, double bx,
               double ay, double by) {
    const double cx = 0.5 * (ax + bx), hx = 0.5 * (bx - ax);
    const double cy = 0.5 * (ay + by), hy = 0.5 * (by - ay);
    double sum = 0.0;
    for (int i = 0; i < kGaussN; ++i)
        for (int j = 0; j < kGaussN; ++j)
            sum += kGaussW[i] * kGaussW[j] * f(cx + hx * kGaussX[i], cy + hy * kGaussX[j]);
    return sum * hx * hy;
}

double singular_pair_integral(const std::function<double(double)>& u, double x,
                              double alpha, double c_norm, double cutoff,
                              const std::array<double, 4>& breaks, int n_breaks,
                              double tol) {
    const double two_a = 2.0 * alpha;
    const double delta = 1e-2;

    // Taylor end: int_0^delta (2u(x)-u(x+s)-u(x-s)) s^{-1-2a} ds
    //           ~ -u''(x) delta^{2-2a}/(2-2a) - u''''(x) delta^{4-2a}/(12 (4-2a)).
    // Derivatives by centered finite differences; step chosen for smooth bumps.
    const double fd = 2.5e-3;
    const double um2 = u(x - 2 * fd), um1 = u(x - fd), u0 = u(x), up1 = u(x + fd),
                 up2 = u(x + 2 * fd);
    const double d2 = (-um2 + 16 * um1 - 30 * u0 + 16 * up1 - up2) / (12 * fd * fd);
    const double d4 = (um2 - 4 * um1 + 6 * u0 - 4 * up1 + up2) / std::pow(fd, 4);
    double head = -d2 * std::pow(delta, 2.0 - two_a) / (2.0 - two_a) -
                  d4 * std::pow(delta, 4.0 - two_a) / (12.0 * (4.0 - two_a));

    // Middle: adaptive quadrature split at support edges of u seen from x.
    std::vector<double> pts{delta};
    for (int k = 0; k < n_breaks; ++k) {
        const double s = std::abs(breaks[k] - x);
        if (s > delta && s < cutoff) pts.push_back(s);
    }
    pts.push_back(cutoff);
    std::sort(pts.begin(), pts.end());
    auto integrand = [&](double s) {
        return (2.0 * u0 - u(x + s) - u(x - s)) * std::pow(s, -1.0 - two_a);
    };
    double mid = 0.0;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k)
        mid += adaptive_simpson(integrand, pts[k], pts[k + 1], tol, 36);

    // Far end: u(x +- s) = 0 for s >= cutoff.
    const double tail = 2.0 * u0 * std::pow(cutoff, -two_a) / two_a;

    return c_norm * (head + mid + tail);
}

} // namespace fracgreen
