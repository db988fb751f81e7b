#pragma once

// Independent evaluation of the limiting motions: the regime constants
// C_alpha, the fractional curvature of a set at a boundary point, exact
// radius laws for spherical fronts, and the numerical verification of the
// differentiation identity behind the consistency argument.

#include <array>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "fracfront/kernel.hpp"
#include "fracfront/profile.hpp"

namespace fracfront {

struct LimitConstant {
    double alpha = 0.0;
    int dim = 0;
    NormalizationConvention convention;
    double value = 0.0;
    double error_estimate = 0.0;
    // Factors entering the defining formula (standard-symbol units):
    //   slice_integral     : int_{R^{N-1}} P(0,y') dy'
    //   second_moment      : int y2^2 P(0,y') dy'        (alpha in (1,2))
    //   tail_limit         : lim R^{N+1} P1(0,R)          (alpha = 1)
    //   omega              : area of the unit sphere in R^{N-1} (alpha = 1)
    //   small_time_constant: lim t^{-1} p(x,t) |x|^{N+alpha} (alpha in (0,1))
    //   symbol_a           : the convention's symbol constant
    std::map<std::string, double> components;
};

// Dispatches on the regime of alpha. dim must be >= 2. Throws if alpha = 1 is
// forced through the (1,2) moment formula (use force_moment_formula to probe
// that rejection).
LimitConstant limit_constant(double alpha, int dim,
                             const NormalizationConvention& convention,
                             bool force_moment_formula = false);

struct CurvatureResult {
    double value = 0.0;
    double error_bar = 0.0;   // analytic tail bound + quadrature estimates
    double tail_term = 0.0;   // added contribution from r > r_max
    std::string to_json() const;
};

// Principal-value fractional curvature at a boundary point x of the set
// {phi < 0} (phi is a signed-distance-like callable, positive outside).
// Positive for convex sets; alpha must lie in (0,1). delta splits the
// singular inner region (handled via spherical averages, O(r) near 0) from
// the direct outer quadrature up to r_max.
CurvatureResult fractional_curvature(
    int dim, const std::function<double(const std::array<double, 3>&)>& phi,
    const std::array<double, 3>& x, double alpha, double delta = 0.25,
    double r_max = 64.0);

// kappa_alpha of the unit ball at a boundary point, via fractional_curvature.
double ball_curvature(int dim, double alpha);

enum class Regime { Mcf, Fractional };

struct RadiusLaw {
    Regime regime = Regime::Mcf;
    double alpha = 0.0;
    int dim = 0;
    double r0 = 0.0;
    double constant = 0.0;    // C_alpha of the regime
    double c_ball = 0.0;      // fractional regime: C_alpha * kappa_alpha(B_1)
    double extinction_time = 0.0;

    // MCF:        R(t) = sqrt(R0^2 - 2 C (N-1) t)
    // FRACTIONAL: R(t) = (R0^{1+a} - (1+a) c_ball t)^{1/(1+a)}
    double radius(double t) const;
    double velocity(double t) const;  // -dR/dt
};

RadiusLaw radius_law(Regime regime, double alpha, int dim, double r0,
                     const NormalizationConvention& convention);

// --- Lemma 3.8 style identity -------------------------------------------
//
// For f(sigma) = int 1+(y1 + F(y,sigma)) P(y) dy the identity expresses
// f(sigma) - f(0) through three derivative integrals. The check uses the
// quadratic family of the consistency proof, smoothly tapered at radius
// taper_r so every term is absolutely convergent for alpha < 1:
//   F(y, rho) = chi(|y|/taper_r) * (rho^{1/alpha} (A y, y) - a rho).
struct QuadraticFamily {
    double alpha = 0.5;
    double a = 0.0;                      // time-shift coefficient
    std::array<double, 3> quad{};        // A11, A12, A22
    double taper_r = 3.0;

    double taper(double r) const;        // C^2 cutoff, 1 on [0,1], 0 on [2,inf)
    double taper_d(double r) const;
    double F(double y1, double y2, double rho) const;
    double dF_drho(double y1, double y2, double rho) const;
    double dF_dy1(double y1, double y2, double rho) const;
    double d2F_dy1_drho(double y1, double y2, double rho) const;
};

struct Lemma38Entry {
    double sigma = 0.0;
    double eps = 0.0;
    double lhs = 0.0;   // f(sigma) - f(0), exact indicator
    double rhs = 0.0;   // three-term side, mollified step of width eps
    double gap = 0.0;
};

struct Lemma38Report {
    std::vector<Lemma38Entry> entries;  // grouped by sigma, eps decreasing
    double floor = 0.0;
    bool pass = false;                  // gap at least halves per eps halving, until floor
    std::string to_json() const;
};

Lemma38Report verify_lemma38(const QuadraticFamily& family,
                             const RadialProfile& profile,
                             const std::vector<double>& sigma_list,
                             const std::vector<double>& eps_list,
                             double floor = 1e-8);

}  // namespace fracfront
