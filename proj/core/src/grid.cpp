#include "liouville/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace liouville {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

Grid::Grid(int dims, int points_per_axis, double length)
    : dims_(dims), n_(points_per_axis), length_(length) {
    if (dims != 2 && dims != 3) {
        throw std::invalid_argument("Grid: dims must be 2 or 3, got " + std::to_string(dims));
    }
    if (!is_power_of_two(points_per_axis) || points_per_axis < kMinPointsPerAxis) {
        throw std::invalid_argument("Grid: points per axis must be a power of two >= 16, got " +
                                    std::to_string(points_per_axis));
    }
    if (!(length > 0.0)) {
        throw std::invalid_argument("Grid: box length must be positive");
    }
    spacing_ = length_ / n_;
    size_ = 1;
    for (int d = 0; d < dims_; ++d) size_ *= static_cast<std::size_t>(n_);
}

double Grid::cell_volume() const {
    double v = 1.0;
    for (int d = 0; d < dims_; ++d) v *= spacing_;
    return v;
}

ScalarField::ScalarField(const Grid& grid) : grid_(grid), values_(grid.size(), 0.0) {}

ScalarField ScalarField::sample(const Grid& grid,
                                const std::function<double(const std::array<double, 3>&)>& f) {
    ScalarField out(grid);
    for_each_point(grid, [&](std::size_t idx, const std::array<double, 3>& x) {
        out[idx] = f(x);
    });
    return out;
}

VectorField::VectorField(const Grid& grid) : grid_(grid) {
    comps_.reserve(static_cast<std::size_t>(grid.dims()));
    for (int d = 0; d < grid.dims(); ++d) comps_.emplace_back(grid);
}

void for_each_point(const Grid& grid,
                    const std::function<void(std::size_t, const std::array<double, 3>&)>& f) {
    const int n = grid.n();
    std::array<double, 3> x{0.0, 0.0, 0.0};
    std::size_t idx = 0;
    if (grid.dims() == 2) {
        for (int i = 0; i < n; ++i) {
            x[0] = grid.coord(i);
            for (int j = 0; j < n; ++j) {
                x[1] = grid.coord(j);
                f(idx++, x);
            }
        }
    } else {
        for (int i = 0; i < n; ++i) {
            x[0] = grid.coord(i);
            for (int j = 0; j < n; ++j) {
                x[1] = grid.coord(j);
                for (int k = 0; k < n; ++k) {
                    x[2] = grid.coord(k);
                    f(idx++, x);
                }
            }
        }
    }
}

double kahan_sum(std::span<const double> values) {
    double sum = 0.0;
    double carry = 0.0;
    for (double v : values) {
        const double y = v - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    return sum;
}

double integrate(const ScalarField& f) {
    return f.grid().cell_volume() * kahan_sum(f.values());
}

double inner(const ScalarField& f, const ScalarField& g) {
    if (!(f.grid() == g.grid())) throw std::invalid_argument("inner: grid mismatch");
    double sum = 0.0, carry = 0.0;
    const auto fv = f.values();
    const auto gv = g.values();
    for (std::size_t i = 0; i < fv.size(); ++i) {
        const double y = fv[i] * gv[i] - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    return f.grid().cell_volume() * sum;
}

double l2_norm(const ScalarField& f) { return std::sqrt(std::max(0.0, inner(f, f))); }

double l2_norm(const VectorField& v) {
    double sq = 0.0;
    for (int d = 0; d < v.dims(); ++d) {
        const double c = l2_norm(v.comp(d));
        sq += c * c;
    }
    return std::sqrt(sq);
}

double max_abs(const ScalarField& f) {
    double m = 0.0;
    for (double v : f.values()) m = std::max(m, std::abs(v));
    return m;
}

double max_abs(const VectorField& v) {
    double m = 0.0;
    const std::size_t count = v.comp(0).size();
    for (std::size_t i = 0; i < count; ++i) {
        double sq = 0.0;
        for (int d = 0; d < v.dims(); ++d) sq += v.comp(d)[i] * v.comp(d)[i];
        m = std::max(m, sq);
    }
    return std::sqrt(m);
}

double support_radius(const VectorField& v, double rel_tol) {
    const double vmax = max_abs(v);
    if (vmax == 0.0) return 0.0;
    const double thresh_sq = (rel_tol * vmax) * (rel_tol * vmax);
    double radius_sq = 0.0;
    for_each_point(v.grid(), [&](std::size_t idx, const std::array<double, 3>& x) {
        double sq = 0.0;
        for (int d = 0; d < v.dims(); ++d) sq += v.comp(d)[idx] * v.comp(d)[idx];
        if (sq > thresh_sq) {
            const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
            radius_sq = std::max(radius_sq, r2);
        }
    });
    return std::sqrt(radius_sq);
}

double exterior_fraction(const VectorField& v, double radius) {
    const double vmax = max_abs(v);
    if (vmax == 0.0) return 0.0;
    const double r2 = radius * radius;
    double outside_sq = 0.0;
    for_each_point(v.grid(), [&](std::size_t idx, const std::array<double, 3>& x) {
        if (x[0] * x[0] + x[1] * x[1] + x[2] * x[2] <= r2) return;
        double sq = 0.0;
        for (int d = 0; d < v.dims(); ++d) sq += v.comp(d)[idx] * v.comp(d)[idx];
        outside_sq = std::max(outside_sq, sq);
    });
    return std::sqrt(outside_sq) / vmax;
}

}  // namespace liouville
