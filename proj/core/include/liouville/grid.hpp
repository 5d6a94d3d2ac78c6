#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace liouville {

/// Uniform periodic box [-L/2, L/2)^N used as a truncation of R^N.
///
/// Coordinates along each axis are x_i = (i - n/2) * h with h = L/n, so the
/// origin sits exactly on a grid point and the box is centered.  Fields are
/// stored row-major with axis order (x1, ..., xN): the last axis is the
/// fastest-varying index.
class Grid {
public:
    /// dims must be 2 or 3, points_per_axis a power of two >= 16, length > 0.
    Grid(int dims, int points_per_axis, double length);

    int dims() const { return dims_; }
    int n() const { return n_; }
    double length() const { return length_; }
    double spacing() const { return spacing_; }

    /// Total number of grid points, n^dims.
    std::size_t size() const { return size_; }

    /// Coordinate of index i along any axis; i in [0, n).
    double coord(int i) const { return (i - n_ / 2) * spacing_; }

    /// Quadrature weight of one cell, h^dims.
    double cell_volume() const;

    bool operator==(const Grid& other) const = default;

private:
    int dims_;
    int n_;
    double length_;
    double spacing_;
    std::size_t size_;
};

/// Real scalar samples on a Grid.
class ScalarField {
public:
    explicit ScalarField(const Grid& grid);

    const Grid& grid() const { return grid_; }

    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }

    std::span<double> values() { return values_; }
    std::span<const double> values() const { return values_; }
    std::size_t size() const { return values_.size(); }

    /// Sample f(x) at every grid point; f receives the coordinates with
    /// x[2] = 0 when dims == 2.
    static ScalarField sample(const Grid& grid,
                              const std::function<double(const std::array<double, 3>&)>& f);

private:
    Grid grid_;
    std::vector<double> values_;
};

/// N real components sharing one Grid.
class VectorField {
public:
    explicit VectorField(const Grid& grid);

    const Grid& grid() const { return grid_; }
    int dims() const { return grid_.dims(); }

    ScalarField& comp(int j) { return comps_[static_cast<std::size_t>(j)]; }
    const ScalarField& comp(int j) const { return comps_[static_cast<std::size_t>(j)]; }

private:
    Grid grid_;
    std::vector<ScalarField> comps_;
};

/// Visit every grid point in storage order.  The callback gets the flat
/// index and the point coordinates (x[2] = 0 for dims == 2).
void for_each_point(const Grid& grid,
                    const std::function<void(std::size_t, const std::array<double, 3>&)>& f);

/// Compensated (Kahan) sum of a range; keeps quadrature error near eps
/// even for ~1e7 terms.
double kahan_sum(std::span<const double> values);

/// h^N * sum of samples: the trapezoid rule on the torus.  Spectrally
/// accurate for smooth fields that decay below ~1e-14 at the box edge.
double integrate(const ScalarField& f);

/// integrate(f*g).
double inner(const ScalarField& f, const ScalarField& g);

double l2_norm(const ScalarField& f);
double l2_norm(const VectorField& v);
double max_abs(const ScalarField& f);

/// Pointwise magnitude max |v(x)|.
double max_abs(const VectorField& v);

/// Largest |x| over points where |v(x)| > rel_tol * max|v|.  Returns 0 for
/// a zero field.
double support_radius(const VectorField& v, double rel_tol = 1e-3);

/// max |v(x)| over points with |x| > radius, as a fraction of max |v|.
double exterior_fraction(const VectorField& v, double radius);

inline constexpr int kMinPointsPerAxis = 16;

}  // namespace liouville
