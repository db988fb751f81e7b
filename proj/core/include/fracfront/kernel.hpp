#pragma once

// The fractional heat kernel p_alpha(., t) as a Fourier multiplier on a
// periodic grid, plus validators for its tail bound and small-time limit.

#include <string>
#include <vector>

#include "fracfront/grid.hpp"

namespace fracfront {

enum class ConventionMode { StandardSymbol, UnnormalizedPaper };

// Generator symbol is -A(N,alpha)*|xi|^alpha. StandardSymbol fixes A = 1;
// UnnormalizedPaper uses A = integral (1 - cos y1) |y|^{-(N+alpha)} dy, the
// symbol constant of the constant-free integral generator.
struct NormalizationConvention {
    ConventionMode mode = ConventionMode::StandardSymbol;
    double symbol_a = 1.0;

    static NormalizationConvention standard();
    static NormalizationConvention paper(int dim, double alpha);
    std::string name() const;
};

// A(N, alpha), computed from the closed form
//   pi^{N/2} * (2/alpha) * Gamma(1 - alpha/2) / (2^alpha * Gamma((N+alpha)/2))
// and cross-checked by adaptive quadrature in polar coordinates; throws if
// the two routes disagree beyond 1e-6 relative.
double symbol_constant(int dim, double alpha);
double symbol_constant_closed_form(int dim, double alpha);
double symbol_constant_quadrature(int dim, double alpha, double* err_estimate = nullptr);

struct SpectralKernel {
    Grid grid;
    double alpha = 0.0;
    double time = 0.0;
    NormalizationConvention convention;

    // exp(-t * A * |xi_j|^alpha) per FFT mode (flat, row-major mode order).
    std::vector<double> multiplier;
    // Sampling of p_alpha(., t) at the grid nodes (density units: the
    // discrete integral sum(real_space)*cell_volume equals multiplier[0]).
    RealField real_space;
    // Multiplier actually used by the scheme step: spectrum of the
    // symmetrized, negativity-clamped, mass-renormalized kernel.
    std::vector<double> step_multiplier;

    // Diagnostics.
    double min_value = 0.0;
    double max_value = 0.0;
    double wrap_mass = 0.0;        // discrete integral of |p| outside |x| > extent/4
    double clamped_mass = 0.0;     // mass removed by the negativity clamp
    bool ringing_ok = true;        // min_value >= -1e-10 * max_value
    bool wrap_ok = true;           // wrap_mass below the configured tolerance
};

// Builds the kernel spectrally. wrap_tolerance only controls the wrap_ok
// warning flag; construction never fails for large wrap mass.
SpectralKernel build_kernel(const Grid& grid, double alpha, double t,
                            const NormalizationConvention& convention,
                            double wrap_tolerance = 0.05);

// Smallest power-of-two point count such that the kernel of time t is
// resolvable: (A*t)^{1/alpha} >= 2 * spacing.
std::int64_t minimal_resolvable_points(double extent, double alpha, double t,
                                       const NormalizationConvention& convention);
bool kernel_resolvable(const Grid& grid, double alpha, double t,
                       const NormalizationConvention& convention);
// Smallest kernel time resolvable on the grid: (A*t)^{1/alpha} = 2 * spacing.
double minimal_resolvable_time(const Grid& grid, double alpha,
                               const NormalizationConvention& convention);

struct TailBoundReport {
    double alpha = 0.0;
    double time = 0.0;
    std::string convention;
    double fitted_constant = 0.0;   // sup of P*(1+|x|^{N+alpha}) on the sample range
    double ratio_min = 0.0;
    double ratio_max = 0.0;         // over 0.5 <= |x| <= r_max
    double r_max = 0.0;
    double negativity_floor = 0.0;  // min_value / max_value
    double gradient_constant = 0.0; // sup |DP| (1+|x|^{N+a})^2 / |x|^{N-1+a}
    bool pass = false;
    std::string to_json() const;
};

// Checks 0 <= P <= C (1+|x|^{N+alpha})^{-1} and the matching gradient bound
// on the annulus 0.5 <= |x| <= r_max (kernel must be built at t = 1).
TailBoundReport validate_tail_bound(const SpectralKernel& kernel, double r_max = 10.0);

struct SmallTimeReport {
    double alpha = 0.0;
    std::string convention;
    std::vector<double> times;            // decreasing
    std::vector<double> sup_errors;       // sup over annulus of |p/t - C r^-(N+a)|
    std::vector<double> fitted_constants; // C fitted at the annulus outer edge
    bool monotone = false;                // sup_errors strictly decreasing
    bool constant_near_one = false;       // paper convention: last C within 5% of 1
    bool pass = false;
    std::string to_json() const;
};

// Measures t^{-1} p_alpha(., t) against C |x|^{-(N+alpha)} on the annulus
// 0.5 <= |x| <= 2 for a decreasing list of times. All times must be
// resolvable on the grid.
SmallTimeReport validate_small_time_limit(const Grid& grid, double alpha,
                                          const NormalizationConvention& convention,
                                          const std::vector<double>& times);

}  // namespace fracfront
