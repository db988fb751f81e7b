#include "fracfront/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <sstream>

#include "fracfront/numerics.hpp"

namespace fracfront {

FrontSnapshot extract_front(const RealField& smoothed, double time) {
    const Grid& g = smoothed.grid;
    FrontSnapshot snap;
    snap.time = time;
    snap.dim = g.dim();

    const std::int64_t p = g.points();
    bool any_pos = false, any_neg = false;
    for (double v : smoothed.values) {
        (v > 0.0 ? any_pos : any_neg) = true;
        if (any_pos && any_neg) break;
    }
    if (!(any_pos && any_neg)) {
        snap.extinct = !any_pos;
        snap.extinct_complement = !any_neg;
        return snap;
    }

    std::array<double, 3> x{};
    for (std::int64_t flat = 0; flat < g.node_count(); ++flat) {
        const double w0 = smoothed.values[flat];
        const auto idx = g.unflatten(flat);
        g.node_position(flat, x);
        for (int d = 0; d < g.dim(); ++d) {
            auto nb = idx;
            nb[d] = (idx[d] + 1) % p;
            const double w1 = smoothed.values[g.flatten(nb)];
            if ((w0 > 0.0) == (w1 > 0.0)) continue;
            const double t = w0 / (w0 - w1);  // w0 != w1 since signs differ
            auto pt = x;
            pt[d] += t * g.spacing();  // seam edges continue past extent/2
            snap.points.push_back(pt);
        }
    }

    auto& c = snap.centroid;
    for (const auto& pt : snap.points)
        for (int d = 0; d < 3; ++d) c[d] += pt[d];
    for (int d = 0; d < 3; ++d) c[d] /= static_cast<double>(snap.points.size());
    double rsum = 0.0, rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
    for (const auto& pt : snap.points) {
        double r2 = 0.0;
        for (int d = 0; d < g.dim(); ++d) r2 += (pt[d] - c[d]) * (pt[d] - c[d]);
        const double r = std::sqrt(r2);
        rsum += r;
        rmin = std::min(rmin, r);
        rmax = std::max(rmax, r);
    }
    snap.radius_mean = rsum / static_cast<double>(snap.points.size());
    snap.radius_min = rmin;
    snap.radius_max = rmax;
    return snap;
}

namespace {

double sq_dist(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    double s = 0.0;
    for (int d = 0; d < 3; ++d) s += (a[d] - b[d]) * (a[d] - b[d]);
    return s;
}

double directed_hausdorff(const std::vector<std::array<double, 3>>& a,
                          const std::vector<std::array<double, 3>>& b) {
    double worst = 0.0;
    size_t hint = 0;  // nearest neighbours of consecutive points cluster
    for (const auto& pa : a) {
        double best = std::numeric_limits<double>::infinity();
        const size_t n = b.size();
        for (size_t k = 0; k < n; ++k) {
            const size_t j = (hint + k) % n;
            const double d2 = sq_dist(pa, b[j]);
            if (d2 < best) {
                best = d2;
                hint = j;
                if (best <= worst) break;  // cannot raise the max
            }
        }
        worst = std::max(worst, best);
    }
    return std::sqrt(worst);
}

}  // namespace

double hausdorff_distance(const std::vector<std::array<double, 3>>& a,
                          const std::vector<std::array<double, 3>>& b) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("hausdorff_distance: empty point set");
    return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

std::vector<std::array<double, 3>> sample_circle(double radius, int samples,
                                                 const std::array<double, 3>& center) {
    std::vector<std::array<double, 3>> pts(samples);
    for (int i = 0; i < samples; ++i) {
        const double th = 2.0 * M_PI * i / samples;
        pts[i] = {center[0] + radius * std::cos(th), center[1] + radius * std::sin(th),
                  center[2]};
    }
    return pts;
}

namespace {

StudyRung run_rung(const StudyConfig& cfg, const RadiusLaw& law, std::int64_t points,
                   double slope_target) {
    StudyRung rung;
    rung.points = points;
    const Grid grid = make_grid(cfg.dim, cfg.extent, points);
    const double width = cfg.cells_per_width * grid.spacing();
    rung.sigma = std::pow(width, cfg.alpha) / cfg.convention.symbol_a;
    rung.h = h_of_sigma(cfg.alpha, rung.sigma);

    const double t_end = cfg.window_fraction * law.extinction_time;
    rung.steps = static_cast<std::int64_t>(std::ceil(t_end / rung.h));

    SignField u0 = initialize(grid, [&](const std::array<double, 3>& x) {
        double r2 = 0.0;
        for (int d = 0; d < cfg.dim; ++d) r2 += x[d] * x[d];
        return std::sqrt(r2) < cfg.r0;
    });

    SchemeParams params =
        SchemeParams::from_sigma(cfg.alpha, rung.sigma, rung.steps, cfg.convention);

    double sup_err = 0.0;
    double centroid_drift = 0.0;
    RunOptions opts;
    opts.snapshot_every = std::numeric_limits<std::int64_t>::max();  // observer only
    opts.observer = [&](std::int64_t, double t, const SignField&, const RealField& w) {
        if (t > t_end + 1e-12) return;
        FrontSnapshot f = extract_front(w, t);
        const double r_law = law.radius(t);
        if (f.extinct || f.extinct_complement) {
            sup_err = std::max(sup_err, r_law);
            return;
        }
        auto circle = sample_circle(r_law, cfg.circle_samples);
        sup_err = std::max(sup_err, hausdorff_distance(f.points, circle));
        double drift = 0.0;
        for (int d = 0; d < cfg.dim; ++d) drift += f.centroid[d] * f.centroid[d];
        centroid_drift = std::max(centroid_drift, std::sqrt(drift));
        rung.times.push_back(t);
        rung.radii.push_back(f.radius_mean);
    };
    run(params, grid, u0, opts);
    rung.sup_hausdorff = sup_err;
    rung.max_centroid_drift = centroid_drift;

    // Slope of R^p over the early window: skip the start-up steps, stop once
    // the radius has dropped below the fit floor.
    const double pw = cfg.alpha >= 1.0 ? 2.0 : 1.0 + cfg.alpha;
    const size_t skip = std::max<size_t>(
        1, static_cast<size_t>(cfg.slope_skip_fraction * rung.times.size()));
    std::vector<double> ts, ys;
    for (size_t i = skip; i < rung.times.size(); ++i) {
        if (rung.radii[i] < cfg.slope_rmin_fraction * cfg.r0) break;
        ts.push_back(rung.times[i]);
        ys.push_back(std::pow(rung.radii[i], pw));
    }
    if (ts.size() >= 2) {
        rung.slope = fit_line(ts, ys).second;
        rung.slope_ratio = rung.slope / slope_target;
    } else {
        rung.failed = true;
        rung.failure = "too few steps inside the slope-fit window";
    }
    return rung;
}

}  // namespace

ConvergenceTable convergence_study(const StudyConfig& cfg) {
    ConvergenceTable table;
    table.config = cfg;
    const Regime regime = cfg.alpha >= 1.0 ? Regime::Mcf : Regime::Fractional;
    table.law = radius_law(regime, cfg.alpha, cfg.dim, cfg.r0, cfg.convention);
    table.slope_target = regime == Regime::Mcf
                             ? -2.0 * table.law.constant * (cfg.dim - 1)
                             : -(1.0 + cfg.alpha) * table.law.c_ball;

    std::vector<std::future<StudyRung>> futures;
    std::vector<StudyRung> rungs(cfg.rungs);
    const int workers = std::max(1, cfg.threads);
    for (int r = 0; r < cfg.rungs; ++r) {
        const std::int64_t pts = cfg.base_points << r;
        auto task = [&, pts]() -> StudyRung {
            try {
                return run_rung(cfg, table.law, pts, table.slope_target);
            } catch (const std::exception& e) {
                StudyRung bad;
                bad.points = pts;
                bad.failed = true;
                bad.failure = e.what();
                return bad;
            }
        };
        if (workers > 1) {
            futures.push_back(std::async(std::launch::async, task));
        } else {
            rungs[r] = task();
        }
    }
    for (size_t i = 0; i < futures.size(); ++i) rungs[i] = futures[i].get();

    for (size_t i = 1; i < rungs.size(); ++i) {
        if (rungs[i].failed || rungs[i - 1].failed) continue;
        rungs[i].observed_order = std::log(rungs[i - 1].sup_hausdorff /
                                           rungs[i].sup_hausdorff) /
                                  std::log(rungs[i - 1].h / rungs[i].h);
    }
    table.rows = rungs;

    // Ladder extrapolation of the slope in 1/|ln sigma|: the alpha = 1
    // effective constant approaches its limit only logarithmically, so the
    // per-rung slopes are fitted against that scale and extrapolated to 0.
    std::vector<double> xs, ys;
    for (const auto& r : table.rows)
        if (!r.failed) {
            xs.push_back(1.0 / std::abs(std::log(r.sigma)));
            ys.push_back(r.slope);
        }
    if (xs.size() >= 2) table.extrapolated_slope = fit_line(xs, ys).first;
    return table;
}

std::string ConvergenceTable::to_csv() const {
    std::ostringstream os;
    os.precision(12);
    os << "points,h,sigma,steps,sup_hausdorff,observed_order,slope,slope_target,"
          "slope_ratio\n";
    for (const auto& r : rows) {
        if (r.failed) {
            os << r.points << ",failed:" << r.failure << ",,,,,,,\n";
            continue;
        }
        os << r.points << ',' << r.h << ',' << r.sigma << ',' << r.steps << ','
           << r.sup_hausdorff << ',' << r.observed_order << ',' << r.slope << ','
           << slope_target << ',' << r.slope_ratio << '\n';
    }
    if (extrapolated_slope)
        os << "# extrapolated_slope," << *extrapolated_slope << '\n';
    return os.str();
}

std::string ConvergenceTable::to_text() const {
    std::ostringstream os;
    os << "alpha=" << config.alpha << " convention=" << config.convention.name()
       << " R0=" << config.r0 << " extent=" << config.extent
       << " slope_target=" << slope_target << "\n";
    char buf[256];
    std::snprintf(buf, sizeof buf, "%8s %12s %12s %6s %14s %8s %12s %8s\n", "points",
                  "h", "sigma", "steps", "sup_hausdorff", "order", "slope", "ratio");
    os << buf;
    for (const auto& r : rows) {
        if (r.failed) {
            std::snprintf(buf, sizeof buf, "%8lld failed: %s\n",
                          static_cast<long long>(r.points), r.failure.c_str());
            os << buf;
            continue;
        }
        std::snprintf(buf, sizeof buf,
                      "%8lld %12.5g %12.5g %6lld %14.6g %8.3f %12.6g %8.4f\n",
                      static_cast<long long>(r.points), r.h, r.sigma,
                      static_cast<long long>(r.steps), r.sup_hausdorff,
                      r.observed_order, r.slope, r.slope_ratio);
        os << buf;
    }
    if (extrapolated_slope) {
        std::snprintf(buf, sizeof buf, "extrapolated slope (1/|ln sigma| -> 0): %.6g\n",
                      *extrapolated_slope);
        os << buf;
    }
    return os.str();
}

namespace {

// Minimal SVG polyline plot.
struct SvgPlot {
    double x0, x1, y0, y1;
    std::ostringstream body;
    static constexpr int W = 640, H = 480, M = 56;

    double px(double x) const { return M + (x - x0) / (x1 - x0) * (W - 2 * M); }
    double py(double y) const { return H - M - (y - y0) / (y1 - y0) * (H - 2 * M); }

    void polyline(const std::vector<double>& xs, const std::vector<double>& ys,
                  const std::string& color) {
        body << "<polyline fill='none' stroke='" << color << "' points='";
        for (size_t i = 0; i < xs.size(); ++i) body << px(xs[i]) << ',' << py(ys[i]) << ' ';
        body << "'/>\n";
    }
    void label(double x, double y, const std::string& text, const std::string& color) {
        body << "<text x='" << x << "' y='" << y << "' fill='" << color
             << "' font-size='12'>" << text << "</text>\n";
    }
    void write(const std::string& path, const std::string& title) {
        std::ofstream out(path);
        out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='"
            << H << "'>\n<rect width='100%' height='100%' fill='white'/>\n"
            << "<rect x='" << M << "' y='" << M << "' width='" << W - 2 * M
            << "' height='" << H - 2 * M << "' fill='none' stroke='black'/>\n"
            << "<text x='" << M << "' y='" << M - 12 << "' font-size='14'>" << title
            << "</text>\n"
            << body.str() << "</svg>\n";
    }
};

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b"};

}  // namespace

void write_radius_plot(const std::string& path, const ConvergenceTable& table) {
    SvgPlot plot{0.0, 1e-12, 0.0, table.config.r0 * 1.1, {}};
    for (const auto& r : table.rows)
        if (!r.failed && !r.times.empty()) plot.x1 = std::max(plot.x1, r.times.back());
    int ci = 0;
    for (const auto& r : table.rows) {
        if (r.failed || r.times.empty()) continue;
        plot.polyline(r.times, r.radii, kColors[ci % 5]);
        plot.label(SvgPlot::W - 170, SvgPlot::M + 16 * (ci + 1),
                   "points=" + std::to_string(r.points), kColors[ci % 5]);
        ++ci;
    }
    std::vector<double> ts, rs;
    for (double t = 0.0; t <= plot.x1; t += plot.x1 / 256.0) {
        ts.push_back(t);
        rs.push_back(table.law.radius(t));
    }
    plot.polyline(ts, rs, "black");
    plot.label(SvgPlot::W - 170, SvgPlot::M + 16 * (ci + 1), "exact law", "black");
    plot.write(path, "front radius vs t");
}

void write_error_plot(const std::string& path, const ConvergenceTable& table) {
    std::vector<double> xs, ys;
    for (const auto& r : table.rows)
        if (!r.failed) {
            xs.push_back(std::log10(r.h));
            ys.push_back(std::log10(r.sup_hausdorff));
        }
    if (xs.empty()) return;
    SvgPlot plot{*std::min_element(xs.begin(), xs.end()) - 0.2,
                 *std::max_element(xs.begin(), xs.end()) + 0.2,
                 *std::min_element(ys.begin(), ys.end()) - 0.2,
                 *std::max_element(ys.begin(), ys.end()) + 0.2,
                 {}};
    plot.polyline(xs, ys, kColors[0]);
    plot.label(SvgPlot::M + 8, SvgPlot::H - SvgPlot::M - 8,
               "log10 sup-Hausdorff vs log10 h", kColors[0]);
    plot.write(path, "convergence (log-log)");
}

}  // namespace fracfront
