#include "fracfront/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "fracfront/numerics.hpp"

namespace fracfront {

namespace {

void require_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 2.0))
        throw std::invalid_argument("alpha must lie in (0,2)");
}

// Surface area of the unit sphere S^{N-1}.
double sphere_area(int dim) {
    switch (dim) {
        case 1: return 2.0;
        case 2: return 2.0 * M_PI;
        case 3: return 4.0 * M_PI;
        default: throw std::invalid_argument("dim must be 1, 2, or 3");
    }
}

// Spherical average of (1 - cos(r * omega_1)) over the unit sphere, times the
// sphere area. N=1: 2(1-cos r); N=2: 2pi(1-J0(r)); N=3: 4pi(1-sin(r)/r).
double angular_factor(int dim, double r) {
    switch (dim) {
        case 1: return 2.0 * (1.0 - std::cos(r));
        case 2: return 2.0 * M_PI * (1.0 - std::cyl_bessel_j(0.0, r));
        case 3: return 4.0 * M_PI * (1.0 - (r == 0.0 ? 1.0 : std::sin(r) / r));
        default: throw std::invalid_argument("dim must be 1, 2, or 3");
    }
}

// Small-r evaluation of angular_factor avoiding cancellation: the integrand
// behaves like (area/2N) r^2 for r -> 0.
double angular_factor_small(int dim, double r) {
    const double r2 = r * r;
    switch (dim) {
        case 1: {
            // 2(1-cos r) = r^2 - r^4/12 + r^6/360 ...
            return r2 * (1.0 - r2 / 12.0 * (1.0 - r2 / 30.0));
        }
        case 2: {
            // 1-J0(r) = r^2/4 - r^4/64 + r^6/2304 ...
            return 2.0 * M_PI * (r2 / 4.0) * (1.0 - r2 / 16.0 * (1.0 - r2 / 36.0));
        }
        case 3: {
            // 1-sin(r)/r = r^2/6 - r^4/120 + r^6/5040 ...
            return 4.0 * M_PI * (r2 / 6.0) * (1.0 - r2 / 20.0 * (1.0 - r2 / 42.0));
        }
        default: throw std::invalid_argument("dim must be 1, 2, or 3");
    }
}

}  // namespace

NormalizationConvention NormalizationConvention::standard() {
    return NormalizationConvention{ConventionMode::StandardSymbol, 1.0};
}

NormalizationConvention NormalizationConvention::paper(int dim, double alpha) {
    return NormalizationConvention{ConventionMode::UnnormalizedPaper,
                                   symbol_constant(dim, alpha)};
}

std::string NormalizationConvention::name() const {
    return mode == ConventionMode::StandardSymbol ? "STANDARD_SYMBOL"
                                                  : "UNNORMALIZED_PAPER";
}

double symbol_constant_closed_form(int dim, double alpha) {
    require_alpha(alpha);
    return std::pow(M_PI, dim / 2.0) * (2.0 / alpha) * std::tgamma(1.0 - alpha / 2.0) /
           (std::pow(2.0, alpha) * std::tgamma((dim + alpha) / 2.0));
}

double symbol_constant_quadrature(int dim, double alpha, double* err_estimate) {
    require_alpha(alpha);
    // Inner region [0,1]: below r = 0.5 the series form of the angular factor
    // avoids the 1-cos cancellation; integrand ~ r^{1-alpha} there.
    auto inner = integrate_adaptive_segmented(
        [dim, alpha](double r) {
            const double f = r < 0.5 ? angular_factor_small(dim, r)
                                     : angular_factor(dim, r);
            return f * std::pow(r, -1.0 - alpha);
        },
        {0.0, 0.5, 1.0}, 1e-12, 1e-12);
    // Outer region: area * r^{-1-alpha} integrates in closed form; the
    // oscillatory remainder -area*<cos> decays and is summed per half-period.
    const double area_part = sphere_area(dim) / alpha;
    auto osc = integrate_oscillatory_tail(
        [dim, alpha](double r) {
            return (angular_factor(dim, r) - sphere_area(dim)) *
                   std::pow(r, -1.0 - alpha);
        },
        1.0, M_PI, 1e-12);
    if (err_estimate) *err_estimate = inner.error + osc.error;
    if (!inner.converged)
        throw std::runtime_error("symbol_constant: quadrature did not converge");
    return inner.value + area_part + osc.value;
}

double symbol_constant(int dim, double alpha) {
    const double closed = symbol_constant_closed_form(dim, alpha);
    double err = 0.0;
    const double quad = symbol_constant_quadrature(dim, alpha, &err);
    if (std::abs(closed - quad) > 1e-6 * std::abs(closed))
        throw std::runtime_error("symbol_constant: closed form and quadrature disagree");
    return closed;
}

SpectralKernel build_kernel(const Grid& grid, double alpha, double t,
                            const NormalizationConvention& convention,
                            double wrap_tolerance) {
    require_alpha(alpha);
    if (t <= 0.0) throw std::invalid_argument("build_kernel: t must be positive");

    SpectralKernel k;
    k.grid = grid;
    k.alpha = alpha;
    k.time = t;
    k.convention = convention;

    const std::int64_t nodes = grid.node_count();
    const std::int64_t p = grid.points();
    k.multiplier.resize(nodes);

    // Per-axis |frequency| values, reused across modes.
    std::vector<double> freq(p);
    for (std::int64_t j = 0; j < p; ++j) freq[j] = grid.frequency(j);

    const double ta = t * convention.symbol_a;
    for (std::int64_t flat = 0; flat < nodes; ++flat) {
        const auto idx = grid.unflatten(flat);
        double xi2 = 0.0;
        for (int d = 0; d < grid.dim(); ++d) xi2 += freq[idx[d]] * freq[idx[d]];
        k.multiplier[flat] = std::exp(-ta * std::pow(std::sqrt(xi2), alpha));
    }

    // Real-space sampling (displacement order), averaged over the full grid
    // symmetry group (per-axis flips and axis permutations) so that evenness
    // and radial grid symmetry hold bit-for-bit, not just to FFT roundoff.
    SpectralField buf(k.multiplier.begin(), k.multiplier.end());
    fft_inverse_inplace(grid, buf);
    std::vector<double> disp(nodes);
    for (std::int64_t i = 0; i < nodes; ++i) disp[i] = buf[i].real();
    {
        std::vector<double> orbit_sum(nodes, 0.0);
        std::vector<std::int32_t> orbit_count(nodes, 0);
        std::vector<std::int64_t> canon(nodes);
        for (std::int64_t flat = 0; flat < nodes; ++flat) {
            auto idx = grid.unflatten(flat);
            for (int d = 0; d < grid.dim(); ++d) idx[d] = std::min(idx[d], (p - idx[d]) % p);
            std::sort(idx.begin(), idx.begin() + grid.dim());
            const std::int64_t c = grid.flatten(idx);
            canon[flat] = c;
            orbit_sum[c] += disp[flat];
            orbit_count[c] += 1;
        }
        for (std::int64_t flat = 0; flat < nodes; ++flat)
            disp[flat] = orbit_sum[canon[flat]] / orbit_count[canon[flat]];
    }

    k.min_value = *std::min_element(disp.begin(), disp.end());
    k.max_value = *std::max_element(disp.begin(), disp.end());
    k.ringing_ok = k.min_value >= -1e-10 * k.max_value;

    double wrap = 0.0;
    for (std::int64_t flat = 0; flat < nodes; ++flat) {
        if (grid.displacement_radius(flat) > grid.extent() / 4.0)
            wrap += std::abs(disp[flat]);
    }
    k.wrap_mass = wrap;  // already in discrete-mass units (sums to ~1)
    k.wrap_ok = wrap <= wrap_tolerance;

    // Step weights: clamp sub-floor negatives, renormalize to unit mass, and
    // store their spectrum. The clamp keeps the step monotone when spectral
    // truncation produces ringing (only seen on coarse 3-D grids).
    std::vector<double> step = disp;
    double removed = 0.0;
    for (double& v : step) {
        if (v < 0.0) {
            removed += -v;
            v = 0.0;
        }
    }
    k.clamped_mass = removed;
    const double mass = std::accumulate(step.begin(), step.end(), 0.0);
    for (double& v : step) v /= mass;
    SpectralField sbuf(step.begin(), step.end());
    fft_forward_inplace(grid, sbuf);
    k.step_multiplier.resize(nodes);
    for (std::int64_t i = 0; i < nodes; ++i) k.step_multiplier[i] = sbuf[i].real();

    // Node-order density sampling: real_space[x] = disp[(x index - P/2) mod P] / cellvol.
    k.real_space = make_real_field(grid);
    const double inv_vol = 1.0 / grid.cell_volume();
    for (std::int64_t flat = 0; flat < nodes; ++flat) {
        auto idx = grid.unflatten(flat);
        for (int d = 0; d < grid.dim(); ++d) idx[d] = (idx[d] + p / 2) % p;
        k.real_space.values[grid.flatten(idx)] = disp[flat] * inv_vol;
    }
    k.min_value *= inv_vol;
    k.max_value *= inv_vol;
    return k;
}

std::int64_t minimal_resolvable_points(double extent, double alpha, double t,
                                       const NormalizationConvention& convention) {
    const double width = std::pow(convention.symbol_a * t, 1.0 / alpha);
    std::int64_t p = 8;
    while (extent / static_cast<double>(p) > width / 2.0) {
        p *= 2;
        if (p > (std::int64_t{1} << 30))
            throw std::runtime_error("minimal_resolvable_points: kernel unresolvably thin");
    }
    return p;
}

bool kernel_resolvable(const Grid& grid, double alpha, double t,
                       const NormalizationConvention& convention) {
    const double width = std::pow(convention.symbol_a * t, 1.0 / alpha);
    return width >= 2.0 * grid.spacing();
}

double minimal_resolvable_time(const Grid& grid, double alpha,
                               const NormalizationConvention& convention) {
    return std::pow(2.0 * grid.spacing(), alpha) / convention.symbol_a;
}

TailBoundReport validate_tail_bound(const SpectralKernel& kernel, double r_max) {
    const Grid& g = kernel.grid;
    TailBoundReport rep;
    rep.alpha = kernel.alpha;
    rep.time = kernel.time;
    rep.convention = kernel.convention.name();
    rep.r_max = r_max;
    rep.negativity_floor = kernel.max_value > 0.0 ? kernel.min_value / kernel.max_value : 0.0;
    if (r_max > g.extent() / 2.0)
        throw std::invalid_argument("validate_tail_bound: r_max outside the grid");

    const double expo = g.dim() + kernel.alpha;
    double rmin_ratio = std::numeric_limits<double>::infinity();
    double rmax_ratio = 0.0;
    double grad_const = 0.0;
    std::array<double, 3> x{};
    const std::int64_t p = g.points();
    for (std::int64_t flat = 0; flat < g.node_count(); ++flat) {
        g.node_position(flat, x);
        double r2 = 0.0;
        for (int d = 0; d < g.dim(); ++d) r2 += x[d] * x[d];
        const double r = std::sqrt(r2);
        if (r < 0.5 || r > r_max) continue;
        const double ratio = kernel.real_space.values[flat] * (1.0 + std::pow(r, expo));
        rmin_ratio = std::min(rmin_ratio, ratio);
        rmax_ratio = std::max(rmax_ratio, ratio);
        // centered finite differences for |DP|
        double grad2 = 0.0;
        auto idx = g.unflatten(flat);
        for (int d = 0; d < g.dim(); ++d) {
            auto ip = idx, im = idx;
            ip[d] = (idx[d] + 1) % p;
            im[d] = (idx[d] + p - 1) % p;
            const double dv = (kernel.real_space.values[g.flatten(ip)] -
                               kernel.real_space.values[g.flatten(im)]) /
                              (2.0 * g.spacing());
            grad2 += dv * dv;
        }
        const double bound_shape = std::pow(r, g.dim() - 1.0 + kernel.alpha) /
                                   std::pow(1.0 + std::pow(r, expo), 2.0);
        grad_const = std::max(grad_const, std::sqrt(grad2) / bound_shape);
    }
    rep.fitted_constant = rmax_ratio;
    rep.ratio_min = rmin_ratio;
    rep.ratio_max = rmax_ratio;
    rep.gradient_constant = grad_const;
    rep.pass = std::isfinite(rmax_ratio) && rmax_ratio > 0.0 &&
               rep.negativity_floor >= -1e-10 && std::isfinite(grad_const);
    return rep;
}

std::string TailBoundReport::to_json() const {
    nlohmann::json j = {
        {"alpha", alpha},
        {"t", time},
        {"convention", convention},
        {"fitted_constants",
         {{"tail", fitted_constant}, {"gradient", gradient_constant}}},
        {"ratio_min", ratio_min},
        {"ratio_max", ratio_max},
        {"r_max", r_max},
        {"negativity_floor", negativity_floor},
        {"pass", pass},
    };
    return j.dump(2);
}

SmallTimeReport validate_small_time_limit(const Grid& grid, double alpha,
                                          const NormalizationConvention& convention,
                                          const std::vector<double>& times) {
    SmallTimeReport rep;
    rep.alpha = alpha;
    rep.convention = convention.name();
    rep.times = times;
    for (size_t i = 0; i + 1 < times.size(); ++i)
        if (times[i] <= times[i + 1])
            throw std::invalid_argument("validate_small_time_limit: times must decrease");
    for (double t : times)
        if (!kernel_resolvable(grid, alpha, t, convention))
            throw std::invalid_argument("validate_small_time_limit: time too small for grid");

    const double expo = grid.dim() + alpha;
    std::array<double, 3> x{};
    for (double t : times) {
        SpectralKernel k = build_kernel(grid, alpha, t, convention);
        // Fit C at the outer edge of the annulus (shell 1.9 <= |x| <= 2).
        double c_fit = 0.0;
        std::int64_t n_fit = 0;
        for (std::int64_t flat = 0; flat < grid.node_count(); ++flat) {
            grid.node_position(flat, x);
            double r2 = 0.0;
            for (int d = 0; d < grid.dim(); ++d) r2 += x[d] * x[d];
            const double r = std::sqrt(r2);
            if (r < 1.9 || r > 2.0) continue;
            c_fit += (k.real_space.values[flat] / t) * std::pow(r, expo);
            ++n_fit;
        }
        c_fit /= static_cast<double>(n_fit);
        double sup = 0.0;
        for (std::int64_t flat = 0; flat < grid.node_count(); ++flat) {
            grid.node_position(flat, x);
            double r2 = 0.0;
            for (int d = 0; d < grid.dim(); ++d) r2 += x[d] * x[d];
            const double r = std::sqrt(r2);
            if (r < 0.5 || r > 2.0) continue;
            sup = std::max(sup, std::abs(k.real_space.values[flat] / t -
                                         c_fit * std::pow(r, -expo)));
        }
        rep.fitted_constants.push_back(c_fit);
        rep.sup_errors.push_back(sup);
    }
    rep.monotone = true;
    for (size_t i = 0; i + 1 < rep.sup_errors.size(); ++i)
        if (rep.sup_errors[i + 1] >= rep.sup_errors[i]) rep.monotone = false;
    if (convention.mode == ConventionMode::UnnormalizedPaper)
        rep.constant_near_one = std::abs(rep.fitted_constants.back() - 1.0) <= 0.05;
    else
        rep.constant_near_one = true;
    rep.pass = rep.monotone && rep.constant_near_one;
    return rep;
}

std::string SmallTimeReport::to_json() const {
    nlohmann::json j = {
        {"alpha", alpha},
        {"convention", convention},
        {"times", times},
        {"sup_errors", sup_errors},
        {"fitted_constants", fitted_constants},
        {"monotone", monotone},
        {"constant_near_one", constant_near_one},
        {"pass", pass},
    };
    return j.dump(2);
}

}  // namespace fracfront
