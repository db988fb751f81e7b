#pragma once

// The threshold-dynamics iteration: time-step scaling sigma_alpha(h), the
// convolve-and-threshold step, and trajectory generation.

#include <functional>
#include <optional>
#include <vector>

#include "fracfront/grid.hpp"
#include "fracfront/kernel.hpp"

namespace fracfront {

// Regime-dependent kernel time per step:
//   sigma = h^{alpha/2}          for alpha in (1,2)
//   h = sigma^2 |ln sigma|       for alpha = 1 (solved on the monotone branch
//                                sigma < 1/e, to 1e-12 relative; requires h < 0.1)
//   sigma = h^{alpha/(1+alpha)}  for alpha in (0,1)
double sigma_of_h(double alpha, double h);
// Forward map sigma -> h (exact power laws; alpha = 1 evaluates sigma^2|ln sigma|).
double h_of_sigma(double alpha, double sigma);

struct SchemeParams {
    double alpha = 1.5;
    double h = 0.0;
    double sigma = 0.0;  // always equals sigma_of_h(alpha, h)
    std::int64_t steps = 1;
    NormalizationConvention convention = NormalizationConvention::standard();

    static SchemeParams from_h(double alpha, double h, std::int64_t steps,
                               const NormalizationConvention& convention);
    static SchemeParams from_sigma(double alpha, double sigma, std::int64_t steps,
                                   const NormalizationConvention& convention);
};

// +1 where the indicator says inside, -1 otherwise.
SignField initialize(const Grid& grid,
                     const std::function<bool(const std::array<double, 3>&)>& inside);

// sign(W) with the paper's convention sign(0) = -1.
SignField threshold(const RealField& smoothed);

// Smoothed field J * u computed spectrally with the kernel's step multiplier.
RealField convolve(const SignField& field, const SpectralKernel& kernel);

// One scheme step: threshold(convolve(field, kernel)).
SignField step(const SignField& field, const SpectralKernel& kernel);

struct TrajectorySample {
    std::int64_t step = 0;
    double time = 0.0;
    SignField sign;
    RealField smoothed;  // the convolution that produced `sign` (empty at step 0)
};

struct Trajectory {
    SchemeParams params;
    std::vector<TrajectorySample> samples;  // every snapshot_every steps (incl. 0 and last)
    std::optional<double> extinction_time;
    std::int64_t steps_taken = 0;
};

struct RunOptions {
    std::int64_t snapshot_every = 1;
    // Called after every step with (n, t, sign, smoothed); use for on-the-fly
    // measurement without retaining fields.
    std::function<void(std::int64_t, double, const SignField&, const RealField&)> observer;
};

// Iterates `step` params.steps times. Stops early when the +1 phase dies out
// and records the extinction time. Throws if the kernel is not resolvable on
// the grid (error names the minimal resolvable point count).
Trajectory run(const SchemeParams& params, const Grid& grid, const SignField& initial,
               const RunOptions& options = {});

}  // namespace fracfront
