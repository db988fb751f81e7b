#pragma once

// Measurement layer: sub-cell front extraction from the smoothed field,
// Hausdorff distances, and h-ladder convergence studies against the exact
// sphere laws.

#include <optional>
#include <string>
#include <vector>

#include "fracfront/grid.hpp"
#include "fracfront/nonlocal.hpp"
#include "fracfront/scheme.hpp"

namespace fracfront {

struct FrontSnapshot {
    double time = 0.0;
    int dim = 0;
    std::vector<std::array<double, 3>> points;  // deterministic order
    std::array<double, 3> centroid{};
    double radius_mean = 0.0;
    double radius_min = 0.0;
    double radius_max = 0.0;
    bool extinct = false;             // phase is all -1 (no zero level)
    bool extinct_complement = false;  // phase is all +1
};

// Zero-level extraction from the smoothed field: one interpolated point per
// sign-changing grid edge (the marching-squares / marching-cubes vertex set),
// edges scanned in row-major order per axis.
FrontSnapshot extract_front(const RealField& smoothed, double time = 0.0);

// Exact max of the two directed sup-min distances over the given point sets.
// Throws on empty input.
double hausdorff_distance(const std::vector<std::array<double, 3>>& a,
                          const std::vector<std::array<double, 3>>& b);

// Dense point sampling of the circle |x - center| = radius (dim 2).
std::vector<std::array<double, 3>> sample_circle(double radius, int samples,
                                                 const std::array<double, 3>& center = {});

struct StudyConfig {
    double alpha = 1.5;
    int dim = 2;
    NormalizationConvention convention = NormalizationConvention::standard();
    double extent = 8.0;
    double r0 = 1.0;
    std::int64_t base_points = 256;  // coarsest rung
    int rungs = 3;                   // grid doubles per rung
    double cells_per_width = 4.0;    // kernel width in cells (grid rule)
    double window_fraction = 0.5;    // compare for t <= fraction * extinction
    double slope_skip_fraction = 0.08;
    double slope_rmin_fraction = 0.6;  // stop the slope fit when R < frac * R0
    int circle_samples = 2048;
    int threads = 1;
};

struct StudyRung {
    std::int64_t points = 0;
    double h = 0.0;
    double sigma = 0.0;
    std::int64_t steps = 0;
    double sup_hausdorff = 0.0;
    double observed_order = 0.0;  // log(e_prev/e_this)/log(h_prev/h_this)
    double slope = 0.0;           // fitted d/dt of R^2 (MCF) or R^{1+alpha}
    double slope_ratio = 0.0;     // slope / target
    double max_centroid_drift = 0.0;
    bool failed = false;
    std::string failure;
    std::vector<double> times;
    std::vector<double> radii;  // mean front radius per step
};

struct ConvergenceTable {
    StudyConfig config;
    RadiusLaw law;
    double slope_target = 0.0;
    std::vector<StudyRung> rows;  // sorted by decreasing h
    // Rung slopes extrapolated in 1/|ln sigma|; meaningful for alpha = 1
    // where the effective constant converges logarithmically.
    std::optional<double> extrapolated_slope;

    std::string to_csv() const;
    std::string to_text() const;
};

ConvergenceTable convergence_study(const StudyConfig& config);

// Minimal SVG line plots for the study artifacts.
void write_radius_plot(const std::string& path, const ConvergenceTable& table);
void write_error_plot(const std::string& path, const ConvergenceTable& table);

}  // namespace fracfront
