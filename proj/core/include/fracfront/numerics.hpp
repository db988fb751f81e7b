#pragma once

// Shared numerical primitives: adaptive quadrature, tanh-sinh quadrature for
// endpoint singularities, cubic splines, bracketed root solves, Richardson
// extrapolation on geometric ladders.

#include <functional>
#include <stdexcept>
#include <vector>

namespace fracfront {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;      // estimated absolute error
    long evaluations = 0;
    bool converged = false;
};

// Adaptive Gauss-Kronrod (G7,K15) on [a,b]. Splits the worst interval until
// the summed error estimate meets tol_abs + tol_rel*|value|.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b,
                                    double tol_abs = 1e-11,
                                    double tol_rel = 1e-11,
                                    int max_intervals = 4000);

// Same, but seeds the interval stack with the given breakpoints (useful when
// the integrand has known kinks or near-discontinuities).
QuadratureResult integrate_adaptive_segmented(const std::function<double(double)>& f,
                                              const std::vector<double>& breakpoints,
                                              double tol_abs = 1e-11,
                                              double tol_rel = 1e-11,
                                              int max_intervals = 8000);

// Tanh-sinh quadrature on (a,b); handles integrable endpoint singularities.
QuadratureResult integrate_tanh_sinh(const std::function<double(double)>& f,
                                     double a, double b,
                                     double tol = 1e-12,
                                     int max_level = 12);

// Integrates f over [a, infinity) where f = envelope * oscillation with
// half-period `half_period`: sums per-segment Gauss panels until the segment
// contribution falls below tol.
QuadratureResult integrate_oscillatory_tail(const std::function<double(double)>& f,
                                            double a, double half_period,
                                            double tol_abs,
                                            int max_segments = 200000);

// Fixed-order Gauss-Legendre nodes/weights on [-1,1], order n in {7, 15, 32}.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Brent-style bracketed root solve: requires f(a)*f(b) <= 0.
double solve_bracketed(const std::function<double(double)>& f,
                       double a, double b,
                       double tol_abs = 1e-14, int max_iter = 200);

// Richardson extrapolation of g(R) = limit + c*R^{-q} + o(R^{-q}) sampled on a
// geometric ladder R_k = R0 * ratio^k (values in ladder order). Each pass
// removes one power q, q+q_step, ... Returns the fully extrapolated estimate.
double richardson_geometric(const std::vector<double>& values,
                            double ratio, double q, double q_step = 1.0);

// Natural cubic spline through (x_i, y_i), x strictly increasing.
class CubicSpline {
  public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> x, std::vector<double> y);
    double operator()(double x) const;
    double derivative(double x) const;
    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }

  private:
    std::vector<double> x_, y_, m_;  // m_: second derivatives
};

// Least-squares line fit y = a + b*x; returns {a, b}.
std::pair<double, double> fit_line(const std::vector<double>& x,
                                   const std::vector<double>& y);

}  // namespace fracfront
