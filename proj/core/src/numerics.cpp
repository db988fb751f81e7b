#include "fracfront/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace fracfront {

namespace {

// Gauss-Kronrod 7-15 nodes on [-1,1] (symmetric; nonnegative half listed).
constexpr double kKronrodNodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
constexpr double kKronrodWeights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
constexpr double kGaussWeights[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

struct Panel {
    double a, b;
    double value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel evaluate_panel(const std::function<double(double)>& f, double a, double b,
                     long& evals) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fc = f(c);
    evals += 15;
    double kron = kKronrodWeights[7] * fc;
    double gauss = kGaussWeights[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double x = h * kKronrodNodes[i];
        const double fsum = f(c - x) + f(c + x);
        kron += kKronrodWeights[i] * fsum;
        if (i % 2 == 1) gauss += kGaussWeights[i / 2] * fsum;
    }
    kron *= h;
    gauss *= h;
    double err = std::pow(200.0 * std::abs(kron - gauss), 1.5);
    err = std::min(err, std::abs(kron - gauss) * 200.0);
    return Panel{a, b, kron, err};
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b, double tol_abs,
                                    double tol_rel, int max_intervals) {
    return integrate_adaptive_segmented(f, {a, b}, tol_abs, tol_rel, max_intervals);
}

QuadratureResult integrate_adaptive_segmented(const std::function<double(double)>& f,
                                              const std::vector<double>& breakpoints,
                                              double tol_abs, double tol_rel,
                                              int max_intervals) {
    QuadratureResult res;
    if (breakpoints.size() < 2) return res;
    std::priority_queue<Panel> heap;
    long evals = 0;
    double total = 0.0, toterr = 0.0;
    for (size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (breakpoints[i] == breakpoints[i + 1]) continue;
        Panel p = evaluate_panel(f, breakpoints[i], breakpoints[i + 1], evals);
        total += p.value;
        toterr += p.error;
        heap.push(p);
    }
    int n = static_cast<int>(heap.size());
    while (n < max_intervals) {
        if (toterr <= tol_abs + tol_rel * std::abs(total)) break;
        Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {  // interval at fp resolution
            heap.push(Panel{worst.a, worst.b, worst.value, 0.0});
            toterr -= worst.error;
            continue;
        }
        Panel left = evaluate_panel(f, worst.a, mid, evals);
        Panel right = evaluate_panel(f, mid, worst.b, evals);
        total += left.value + right.value - worst.value;
        toterr += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++n;
    }
    res.value = total;
    res.error = toterr;
    res.evaluations = evals;
    res.converged = toterr <= tol_abs + tol_rel * std::abs(total);
    return res;
}

QuadratureResult integrate_tanh_sinh(const std::function<double(double)>& f,
                                     double a, double b, double tol,
                                     int max_level) {
    // x = (a+b)/2 + (b-a)/2 * tanh(pi/2 sinh t); trapezoid in t, halving h.
    QuadratureResult res;
    const double c = 0.5 * (a + b);
    const double d = 0.5 * (b - a);
    const double tmax = 3.8;  // weight underflows beyond
    double h = 1.0;
    auto point = [&](double t, double& x, double& w) {
        const double st = std::sinh(t);
        const double u = 0.5 * M_PI * st;
        const double ch = std::cosh(u);
        x = c + d * std::tanh(u);
        w = d * 0.5 * M_PI * std::cosh(t) / (ch * ch);
    };
    double x, w;
    point(0.0, x, w);
    double sum = f(x) * w;
    res.evaluations = 1;
    double prev = sum * 2.0 * h;
    double integral = 0.0;
    for (int level = 1; level <= max_level; ++level) {
        h *= 0.5;
        double add = 0.0;
        // new points at odd multiples of h
        for (double t = h; t <= tmax; t += 2.0 * h) {
            for (double sgn : {1.0, -1.0}) {
                point(sgn * t, x, w);
                if (w < 1e-320) continue;
                if (x <= std::min(a, b) || x >= std::max(a, b)) continue;
                double v = f(x) * w;
                if (std::isfinite(v)) add += v;
                ++res.evaluations;
            }
        }
        sum += add;
        integral = sum * h;
        res.error = std::abs(integral - prev);
        prev = integral;
        if (level >= 4 && res.error <= tol * std::max(1.0, std::abs(integral))) {
            res.converged = true;
            break;
        }
    }
    res.value = integral;
    return res;
}

QuadratureResult integrate_oscillatory_tail(const std::function<double(double)>& f,
                                            double a, double half_period,
                                            double tol_abs, int max_segments) {
    QuadratureResult res;
    long evals = 0;
    double x = a;
    double total = 0.0;
    int quiet = 0;
    for (int s = 0; s < max_segments; ++s) {
        Panel p = evaluate_panel(f, x, x + half_period, evals);
        total += p.value;
        x += half_period;
        if (std::abs(p.value) < tol_abs) {
            if (++quiet >= 4) {  // several consecutive negligible segments
                res.converged = true;
                break;
            }
        } else {
            quiet = 0;
        }
    }
    res.value = total;
    res.error = tol_abs;
    res.evaluations = evals;
    return res;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    // Newton iteration on Legendre polynomials.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
}

double solve_bracketed(const std::function<double(double)>& f, double a, double b,
                       double tol_abs, int max_iter) {
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (fa * fb > 0.0) throw std::invalid_argument("solve_bracketed: no sign change");
    double c = a, fc = fa;
    double d = b - a, e = d;
    for (int it = 0; it < max_iter; ++it) {
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol = 2.0 * 1e-16 * std::abs(b) + 0.5 * tol_abs;
        const double m = 0.5 * (c - b);
        if (std::abs(m) <= tol || fb == 0.0) return b;
        if (std::abs(e) < tol || std::abs(fa) <= std::abs(fb)) {
            d = e = m;  // bisection
        } else {
            double s = fb / fa, p, q;
            if (a == c) {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                double qq = fa / fc, r = fb / fc;
                p = s * (2.0 * m * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = e = m;
            }
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol) ? d : (m > 0 ? tol : -tol);
        fb = f(b);
        if ((fb > 0) == (fc > 0)) {
            c = a;
            fc = fa;
            e = d = b - a;
        }
    }
    return b;
}

double richardson_geometric(const std::vector<double>& values, double ratio,
                            double q, double q_step) {
    std::vector<double> row = values;
    double exponent = q;
    while (row.size() > 1) {
        const double w = std::pow(ratio, exponent);
        std::vector<double> next(row.size() - 1);
        for (size_t i = 0; i + 1 < row.size(); ++i)
            next[i] = (w * row[i + 1] - row[i]) / (w - 1.0);
        row = std::move(next);
        exponent += q_step;
    }
    return row.front();
}

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const size_t n = x_.size();
    if (n < 3 || y_.size() != n) throw std::invalid_argument("CubicSpline: bad data");
    m_.assign(n, 0.0);
    std::vector<double> u(n, 0.0);
    for (size_t i = 1; i + 1 < n; ++i) {
        const double sig = (x_[i] - x_[i - 1]) / (x_[i + 1] - x_[i - 1]);
        const double p = sig * m_[i - 1] + 2.0;
        m_[i] = (sig - 1.0) / p;
        u[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]) -
               (y_[i] - y_[i - 1]) / (x_[i] - x_[i - 1]);
        u[i] = (6.0 * u[i] / (x_[i + 1] - x_[i - 1]) - sig * u[i - 1]) / p;
    }
    for (size_t k = n - 1; k-- > 0;) m_[k] = m_[k] * m_[k + 1] + u[k];
}

double CubicSpline::operator()(double x) const {
    const size_t n = x_.size();
    size_t lo = std::upper_bound(x_.begin(), x_.end(), x) - x_.begin();
    lo = std::clamp<size_t>(lo, 1, n - 1) - 1;
    const size_t hi = lo + 1;
    const double h = x_[hi] - x_[lo];
    const double a = (x_[hi] - x) / h;
    const double b = (x - x_[lo]) / h;
    return a * y_[lo] + b * y_[hi] +
           ((a * a * a - a) * m_[lo] + (b * b * b - b) * m_[hi]) * h * h / 6.0;
}

double CubicSpline::derivative(double x) const {
    const size_t n = x_.size();
    size_t lo = std::upper_bound(x_.begin(), x_.end(), x) - x_.begin();
    lo = std::clamp<size_t>(lo, 1, n - 1) - 1;
    const size_t hi = lo + 1;
    const double h = x_[hi] - x_[lo];
    const double a = (x_[hi] - x) / h;
    const double b = (x - x_[lo]) / h;
    return (y_[hi] - y_[lo]) / h +
           ((3.0 * b * b - 1.0) * m_[hi] - (3.0 * a * a - 1.0) * m_[lo]) * h / 6.0;
}

std::pair<double, double> fit_line(const std::vector<double>& x,
                                   const std::vector<double>& y) {
    const size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    const double b = (n * sxy - sx * sy) / denom;
    const double a = (sy - b * sx) / n;
    return {a, b};
}

}  // namespace fracfront
