#include "fracfront/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace fracfront {

namespace {

bool is_power_of_two(std::int64_t v) { return v > 0 && (v & (v - 1)) == 0; }

// FFTW planner is not thread-safe; execution with distinct buffers is.
std::mutex planner_mutex;

struct PlanPair {
    fftw_plan forward = nullptr;
    fftw_plan inverse = nullptr;
};

struct PlanKey {
    int dim;
    std::int64_t points;
    bool operator<(const PlanKey& o) const {
        return dim != o.dim ? dim < o.dim : points < o.points;
    }
};

PlanPair& plans_for(const Grid& g) {
    static std::map<PlanKey, PlanPair> cache;
    std::lock_guard<std::mutex> lock(planner_mutex);
    PlanKey key{g.dim(), g.points()};
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    const int n = static_cast<int>(g.points());
    std::vector<std::complex<double>> buf(g.node_count());
    auto* p = reinterpret_cast<fftw_complex*>(buf.data());
    int dims[3] = {n, n, n};
    PlanPair pp;
    // FFTW_UNALIGNED: plans stay valid for any buffer passed to execute_dft.
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    pp.forward = fftw_plan_dft(g.dim(), dims, p, p, FFTW_FORWARD, flags);
    pp.inverse = fftw_plan_dft(g.dim(), dims, p, p, FFTW_BACKWARD, flags);
    return cache.emplace(key, pp).first->second;
}

}  // namespace

Grid::Grid(int dim, double extent, std::int64_t points)
    : dim_(dim), extent_(extent), points_(points) {
    if (dim < 1 || dim > 3) throw std::invalid_argument("Grid: dim must be 1, 2, or 3");
    if (extent <= 0.0) throw std::invalid_argument("Grid: extent must be positive");
    if (points < 8 || !is_power_of_two(points))
        throw std::invalid_argument("Grid: points must be a power of two >= 8");
    spacing_ = extent_ / static_cast<double>(points_);
    nodes_ = 1;
    for (int k = 0; k < dim_; ++k) nodes_ *= points_;
}

double Grid::cell_volume() const {
    double v = 1.0;
    for (int k = 0; k < dim_; ++k) v *= spacing_;
    return v;
}

std::array<std::int64_t, 3> Grid::unflatten(std::int64_t flat) const {
    std::array<std::int64_t, 3> idx{0, 0, 0};
    for (int k = dim_ - 1; k >= 0; --k) {
        idx[k] = flat % points_;
        flat /= points_;
    }
    return idx;
}

std::int64_t Grid::flatten(const std::array<std::int64_t, 3>& idx) const {
    std::int64_t flat = 0;
    for (int k = 0; k < dim_; ++k) flat = flat * points_ + idx[k];
    return flat;
}

void Grid::node_position(std::int64_t flat, std::array<double, 3>& x) const {
    const auto idx = unflatten(flat);
    for (int k = 0; k < dim_; ++k) x[k] = coordinate(idx[k]);
}

double Grid::displacement_radius(std::int64_t flat) const {
    const auto idx = unflatten(flat);
    double r2 = 0.0;
    for (int k = 0; k < dim_; ++k) {
        std::int64_t d = idx[k];
        if (d >= points_ / 2) d -= points_;
        const double xd = static_cast<double>(d) * spacing_;
        r2 += xd * xd;
    }
    return std::sqrt(r2);
}

Grid make_grid(int dim, double extent, std::int64_t points) {
    return Grid(dim, extent, points);
}

bool RealField::finite() const {
    for (double v : values)
        if (!std::isfinite(v)) return false;
    return true;
}

RealField make_real_field(const Grid& g, double fill) {
    RealField f;
    f.grid = g;
    f.values.assign(g.node_count(), fill);
    return f;
}

std::int64_t SignField::positive_count() const {
    std::int64_t n = 0;
    for (double v : values) n += (v > 0.0);
    return n;
}

bool SignField::valid() const {
    for (double v : values)
        if (v != 1.0 && v != -1.0) return false;
    return true;
}

SpectralField fft_forward(const RealField& field) {
    SpectralField data(field.values.begin(), field.values.end());
    fft_forward_inplace(field.grid, data);
    return data;
}

RealField fft_inverse(const Grid& grid, const SpectralField& spectrum) {
    SpectralField data = spectrum;
    fft_inverse_inplace(grid, data);
    RealField out = make_real_field(grid);
    for (std::int64_t i = 0; i < grid.node_count(); ++i) out.values[i] = data[i].real();
    return out;
}

void fft_forward_inplace(const Grid& grid, SpectralField& data) {
    if (static_cast<std::int64_t>(data.size()) != grid.node_count())
        throw std::invalid_argument("fft_forward: size mismatch");
    auto& pp = plans_for(grid);
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(pp.forward, p, p);
}

void fft_inverse_inplace(const Grid& grid, SpectralField& data) {
    if (static_cast<std::int64_t>(data.size()) != grid.node_count())
        throw std::invalid_argument("fft_inverse: size mismatch");
    auto& pp = plans_for(grid);
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(pp.inverse, p, p);
    const double scale = 1.0 / static_cast<double>(grid.node_count());
    for (auto& z : data) z *= scale;
}

}  // namespace fracfront
