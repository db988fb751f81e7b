#include "fracfront/profile.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace fracfront {

namespace {

// Integrand of the radial Fourier inversion against e^{-s^alpha}:
//   N=1: (1/pi)    cos(rs) e^{-s^a}
//   N=2: (1/2pi)   J0(rs)  e^{-s^a} s
//   N=3: (1/2pi^2) sinc(rs) e^{-s^a} s^2
double inversion_integrand(int dim, double alpha, double r, double s) {
    const double damp = std::exp(-std::pow(s, alpha));
    switch (dim) {
        case 1: return std::cos(r * s) * damp / M_PI;
        case 2: return std::cyl_bessel_j(0.0, r * s) * damp * s / (2.0 * M_PI);
        case 3: {
            const double rs = r * s;
            const double sinc = rs == 0.0 ? 1.0 : std::sin(rs) / rs;
            return sinc * damp * s * s / (2.0 * M_PI * M_PI);
        }
        default: throw std::invalid_argument("dim must be 1, 2, or 3");
    }
}

}  // namespace

RadialProfile::RadialProfile(int dim, double alpha, double knot_scale)
    : dim_(dim), alpha_(alpha) {
    if (dim < 1 || dim > 3) throw std::invalid_argument("RadialProfile: bad dim");
    if (!(alpha > 0.0 && alpha < 2.0))
        throw std::invalid_argument("RadialProfile: alpha outside (0,2)");
    s_max_ = std::pow(34.0, 1.0 / alpha);  // e^{-34} ~ 2e-15 damping at cutoff
    r_cut_ = 24.0;

    // Spline knots: uniform on [0,4], geometric up to r_cut.
    std::vector<double> xs, ys;
    const double fine = 0.03 / knot_scale;
    for (double r = 0.0; r < 4.0 + 0.5 * fine; r += fine) xs.push_back(r);
    double r = xs.back();
    const double ratio = 1.0 + 0.04 / knot_scale;
    while (r < r_cut_) {
        r = std::min(r * ratio, r_cut_);
        xs.push_back(r);
    }
    ys.reserve(xs.size());
    for (double x : xs) ys.push_back(value_exact(x));
    spline_ = CubicSpline(xs, ys);

    // Two-term tail fit at radii near r_cut (least squares on the two known
    // decay powers).
    const std::vector<double> rf = {0.5 * r_cut_, 0.65 * r_cut_, 0.8 * r_cut_, r_cut_};
    double a11 = 0, a12 = 0, a22 = 0, b1 = 0, b2 = 0;
    for (double rv : rf) {
        const double f1 = std::pow(rv, -(dim_ + alpha_));
        const double f2 = std::pow(rv, -(dim_ + 2.0 * alpha_));
        const double v = value_exact(rv);
        a11 += f1 * f1;
        a12 += f1 * f2;
        a22 += f2 * f2;
        b1 += f1 * v;
        b2 += f2 * v;
    }
    const double det = a11 * a22 - a12 * a12;
    k1_ = (b1 * a22 - b2 * a12) / det;
    k2_ = (a11 * b2 - a12 * b1) / det;
}

double RadialProfile::value_exact(double r) const {
    // Segment the spectral integral finely enough to resolve the oscillation
    // (half-period pi/r) and the e^{-s^alpha} decay.
    const double seg = std::min(M_PI / std::max(r, 1e-9), s_max_ / 64.0);
    std::vector<double> breaks;
    for (double s = 0.0; s < s_max_; s += seg) breaks.push_back(s);
    breaks.push_back(s_max_);
    double total = 0.0;
    // Plain GK15 panel per segment: integrand is smooth within a half-period.
    std::vector<double> nodes, weights;
    gauss_legendre(15, nodes, weights);
    for (size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double c = 0.5 * (breaks[i] + breaks[i + 1]);
        const double h = 0.5 * (breaks[i + 1] - breaks[i]);
        double acc = 0.0;
        for (size_t k = 0; k < nodes.size(); ++k)
            acc += weights[k] * inversion_integrand(dim_, alpha_, r, c + h * nodes[k]);
        total += acc * h;
    }
    return total;
}

double RadialProfile::operator()(double r) const {
    if (r <= r_cut_) return spline_(r);
    return k1_ * std::pow(r, -(dim_ + alpha_)) + k2_ * std::pow(r, -(dim_ + 2.0 * alpha_));
}

double RadialProfile::derivative(double r) const {
    if (r <= r_cut_) return spline_.derivative(r);
    return -(dim_ + alpha_) * k1_ * std::pow(r, -(dim_ + alpha_ + 1.0)) -
           (dim_ + 2.0 * alpha_) * k2_ * std::pow(r, -(dim_ + 2.0 * alpha_ + 1.0));
}

double RadialProfile::tail_constant() const {
    // alpha = 1: corrections go like r^{-2}; otherwise like r^{-alpha}.
    const double q = alpha_ == 1.0 ? 2.0 : alpha_;
    const double q_step = alpha_ == 1.0 ? 2.0 : alpha_;
    const std::vector<double> ladder = {8.0, 16.0, 32.0, 64.0};
    std::vector<double> vals;
    vals.reserve(ladder.size());
    for (double rv : ladder)
        vals.push_back(value_exact(rv) * std::pow(rv, dim_ + alpha_));
    return richardson_geometric(vals, 2.0, q, q_step);
}

double RadialProfile::mass() const {
    auto body = integrate_adaptive([this](double r) {
        const double p = (*this)(r);
        switch (dim_) {
            case 1: return 2.0 * p;
            case 2: return 2.0 * M_PI * r * p;
            default: return 4.0 * M_PI * r * r * p;
        }
    }, 0.0, r_cut_, 1e-11, 1e-11);
    // analytic tail of the fitted form
    double tail = 0.0;
    const double c1 = dim_ + alpha_, c2 = dim_ + 2.0 * alpha_;
    switch (dim_) {
        case 1:
            tail = 2.0 * (k1_ * std::pow(r_cut_, 1.0 - c1) / (c1 - 1.0) +
                          k2_ * std::pow(r_cut_, 1.0 - c2) / (c2 - 1.0));
            break;
        case 2:
            tail = 2.0 * M_PI * (k1_ * std::pow(r_cut_, 2.0 - c1) / (c1 - 2.0) +
                                 k2_ * std::pow(r_cut_, 2.0 - c2) / (c2 - 2.0));
            break;
        default:
            tail = 4.0 * M_PI * (k1_ * std::pow(r_cut_, 3.0 - c1) / (c1 - 3.0) +
                                 k2_ * std::pow(r_cut_, 3.0 - c2) / (c2 - 3.0));
    }
    return body.value + tail;
}

std::shared_ptr<const RadialProfile> shared_profile(int dim, double alpha) {
    static std::mutex mu;
    static std::map<std::pair<int, double>, std::shared_ptr<const RadialProfile>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(dim, alpha);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto p = std::make_shared<const RadialProfile>(dim, alpha);
    return cache.emplace(key, p).first->second;
}

}  // namespace fracfront
