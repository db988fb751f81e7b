#include "fracfront/scheme.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fracfront/numerics.hpp"

namespace fracfront {

double h_of_sigma(double alpha, double sigma) {
    if (!(alpha > 0.0 && alpha < 2.0)) throw std::invalid_argument("alpha outside (0,2)");
    if (sigma <= 0.0) throw std::invalid_argument("sigma must be positive");
    if (alpha > 1.0) return std::pow(sigma, 2.0 / alpha);
    if (alpha < 1.0) return std::pow(sigma, (1.0 + alpha) / alpha);
    if (sigma >= std::exp(-1.0))
        throw std::invalid_argument("alpha=1 requires sigma < 1/e (monotone branch)");
    return sigma * sigma * std::abs(std::log(sigma));
}

double sigma_of_h(double alpha, double h) {
    if (!(alpha > 0.0 && alpha < 2.0)) throw std::invalid_argument("alpha outside (0,2)");
    if (h <= 0.0) throw std::invalid_argument("h must be positive");
    if (alpha > 1.0) return std::pow(h, alpha / 2.0);
    if (alpha < 1.0) return std::pow(h, alpha / (1.0 + alpha));
    // alpha = 1: solve sigma^2 |ln sigma| = h on (0, 1/e), where the map is
    // strictly increasing. Bisection bracket, then Newton polish.
    if (h >= 0.1)
        throw std::invalid_argument("sigma_of_h: alpha=1 requires h < 0.1");
    const double b = std::exp(-1.0) * (1.0 - 1e-12);
    double sigma = solve_bracketed(
        [h](double s) { return s * s * std::abs(std::log(s)) - h; }, 1e-300, b, 0.0);
    for (int it = 0; it < 60; ++it) {
        const double l = -std::log(sigma);
        const double f = sigma * sigma * l - h;
        const double df = sigma * (2.0 * l - 1.0);
        const double delta = f / df;
        sigma -= delta;
        if (std::abs(delta) <= 1e-15 * sigma) break;
    }
    return sigma;
}

SchemeParams SchemeParams::from_h(double alpha, double h, std::int64_t steps,
                                  const NormalizationConvention& convention) {
    SchemeParams p;
    p.alpha = alpha;
    p.h = h;
    p.sigma = sigma_of_h(alpha, h);
    p.steps = steps;
    p.convention = convention;
    return p;
}

SchemeParams SchemeParams::from_sigma(double alpha, double sigma, std::int64_t steps,
                                      const NormalizationConvention& convention) {
    return from_h(alpha, h_of_sigma(alpha, sigma), steps, convention);
}

SignField initialize(const Grid& grid,
                     const std::function<bool(const std::array<double, 3>&)>& inside) {
    SignField f;
    f.grid = grid;
    f.values.resize(grid.node_count());
    std::array<double, 3> x{};
    for (std::int64_t i = 0; i < grid.node_count(); ++i) {
        grid.node_position(i, x);
        f.values[i] = inside(x) ? 1.0 : -1.0;
    }
    return f;
}

SignField threshold(const RealField& smoothed) {
    SignField f;
    f.grid = smoothed.grid;
    f.values.resize(smoothed.values.size());
    for (size_t i = 0; i < smoothed.values.size(); ++i)
        f.values[i] = smoothed.values[i] > 0.0 ? 1.0 : -1.0;
    return f;
}

RealField convolve(const SignField& field, const SpectralKernel& kernel) {
    if (!(field.grid == kernel.grid))
        throw std::invalid_argument("convolve: field and kernel grids differ");
    SpectralField data(field.values.begin(), field.values.end());
    fft_forward_inplace(field.grid, data);
    for (std::int64_t i = 0; i < field.grid.node_count(); ++i)
        data[i] *= kernel.step_multiplier[i];
    fft_inverse_inplace(field.grid, data);
    RealField out = make_real_field(field.grid);
    for (std::int64_t i = 0; i < field.grid.node_count(); ++i)
        out.values[i] = data[i].real();
    return out;
}

SignField step(const SignField& field, const SpectralKernel& kernel) {
    return threshold(convolve(field, kernel));
}

Trajectory run(const SchemeParams& params, const Grid& grid, const SignField& initial,
               const RunOptions& options) {
    if (!(initial.grid == grid)) throw std::invalid_argument("run: grid mismatch");
    if (!kernel_resolvable(grid, params.alpha, params.sigma, params.convention)) {
        const std::int64_t need = minimal_resolvable_points(
            grid.extent(), params.alpha, params.sigma, params.convention);
        throw std::invalid_argument(
            "run: kernel width below 2 cells; need at least " + std::to_string(need) +
            " points per axis at this extent");
    }
    const SpectralKernel kernel =
        build_kernel(grid, params.alpha, params.sigma, params.convention);

    Trajectory traj;
    traj.params = params;
    traj.samples.push_back({0, 0.0, initial, RealField{}});

    SignField u = initial;
    for (std::int64_t n = 1; n <= params.steps; ++n) {
        RealField w = convolve(u, kernel);
        u = threshold(w);
        const double t = static_cast<double>(n) * params.h;
        traj.steps_taken = n;
        if (options.observer) options.observer(n, t, u, w);
        const bool extinct = u.positive_count() == 0;
        if (n % options.snapshot_every == 0 || n == params.steps || extinct)
            traj.samples.push_back({n, t, u, std::move(w)});
        if (extinct) {
            traj.extinction_time = t;
            break;
        }
    }
    return traj;
}

}  // namespace fracfront
