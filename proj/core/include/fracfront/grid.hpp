#pragma once

// Periodic N-dimensional sampling grids (N in {1,2,3}), real/spectral fields,
// and FFTW-backed transforms. One normalization convention repo-wide: the
// forward transform is the plain DFT sum, the inverse carries 1/nodes.

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace fracfront {

class Grid {
  public:
    Grid() = default;
    Grid(int dim, double extent, std::int64_t points);

    int dim() const { return dim_; }
    double extent() const { return extent_; }
    std::int64_t points() const { return points_; }
    double spacing() const { return spacing_; }
    std::int64_t node_count() const { return nodes_; }
    double cell_volume() const;

    // Node coordinate along one axis: x_i = (i - points/2) * spacing,
    // spanning [-extent/2, extent/2).
    double coordinate(std::int64_t index) const {
        return (static_cast<double>(index) - static_cast<double>(points_ / 2)) * spacing_;
    }
    // Angular frequency of FFT mode j along one axis: 2*pi*j_signed/extent.
    double frequency(std::int64_t mode) const {
        const std::int64_t half = points_ / 2;
        const std::int64_t js = mode < half ? mode : mode - points_;
        return 2.0 * M_PI * static_cast<double>(js) / extent_;
    }

    std::array<std::int64_t, 3> unflatten(std::int64_t flat) const;
    std::int64_t flatten(const std::array<std::int64_t, 3>& idx) const;
    void node_position(std::int64_t flat, std::array<double, 3>& x) const;
    // |x| of the wrapped displacement for a flat displacement index.
    double displacement_radius(std::int64_t flat) const;

    bool operator==(const Grid& o) const {
        return dim_ == o.dim_ && extent_ == o.extent_ && points_ == o.points_;
    }

  private:
    int dim_ = 0;
    double extent_ = 0.0;
    std::int64_t points_ = 0;
    double spacing_ = 0.0;
    std::int64_t nodes_ = 0;
};

Grid make_grid(int dim, double extent, std::int64_t points);

struct RealField {
    Grid grid;
    std::vector<double> values;  // row-major, axis 0 slowest

    bool finite() const;
};

RealField make_real_field(const Grid& g, double fill = 0.0);

// Values are exactly -1 or +1.
struct SignField {
    Grid grid;
    std::vector<double> values;

    std::int64_t positive_count() const;
    bool valid() const;
};

using SpectralField = std::vector<std::complex<double>>;

// fft_forward/fft_inverse round-trip to ~1e-15; plans are cached per grid
// size and created with FFTW_ESTIMATE so results are run-to-run deterministic.
SpectralField fft_forward(const RealField& field);
RealField fft_inverse(const Grid& grid, const SpectralField& spectrum);

// In-place c2c transforms on raw complex buffers (used by the scheme's step).
void fft_forward_inplace(const Grid& grid, SpectralField& data);
void fft_inverse_inplace(const Grid& grid, SpectralField& data);

}  // namespace fracfront
