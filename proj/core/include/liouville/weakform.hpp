#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "liouville/grid.hpp"
#include "liouville/riesz.hpp"

namespace liouville {

/// Smooth radial cutoff sigma(s): 1 for s <= 1, 0 for s >= 2, with the
/// classical exp(-1/t) bridge sigma = g(2-s)/(g(2-s)+g(s-1)).  Scaled copies
/// sigma_R(x) = sigma(|x|/R) have all derivatives up to order m bounded by
/// C_m / R^m.
namespace cutoff {

double value(double s);
double d1(double s);
double d2(double s);
double d3(double s);

/// Frozen regression constants: measured maxima of |sigma'|, |sigma''|,
/// |sigma'''| over the bridge (see tests for the measurement).
inline constexpr double kMaxD1 = 2.0;     // at s = 1.5
inline constexpr double kMaxD2 = 9.842;   // at s ~ 1.218
inline constexpr double kMaxD3 = 110.57;  // at s ~ 1.135

}  // namespace cutoff

/// sigma_R and its spatial derivatives at one point, from exact symbolic
/// differentiation of the radial profile (never spectral differencing).
struct CutoffDerivs {
    double sigma = 0.0;
    std::array<double, 3> grad{};
    std::array<std::array<double, 3>, 3> hess{};
    double lap = 0.0;
    /// gradient of the Laplacian of sigma_R (for third-order test integrals)
    std::array<double, 3> grad_lap{};
};

CutoffDerivs cutoff_derivs(const std::array<double, 3>& x, double radius, int dims);

/// Largest admissible cutoff radius on a grid: 2R <= 0.45 L.
double max_cutoff_radius(const Grid& grid);

/// psi = x_j^2/2 * sigma_R sampled on the grid, together with its exact
/// symbolic gradient.  Throws if 2R > 0.45 L.
struct TestFunction {
    ScalarField psi;
    VectorField grad;
};

TestFunction test_function_diag(int j, double radius, const Grid& grid);
TestFunction test_function_offdiag(int j, int k, double radius, const Grid& grid);

/// The six diagonal ledger terms for axis j at cutoff radius R:
///   T1 = integral (v^j)^2 sigma_R
///   T2 = integral p sigma_R
///   T3 = integral (v^j)^2 [2 x_j d_j sigma_R + (x_j^2/2) d_j^2 sigma_R]
///   T4 = 2 sum_{l != j} integral v^j v^l [x_j d_l sigma_R + (x_j^2/2) d_j d_l sigma_R]
///   T5 = sum_{l,m != j} integral v^l v^m (x_j^2/2) d_l d_m sigma_R
///   T6 = integral p [2 x_j d_j sigma_R + (x_j^2/2) Lap sigma_R]
/// They sum to zero up to quadrature at every R.
std::array<double, 6> weakform_terms_diag(const VectorField& v, const ScalarField& p,
                                          int j, double radius);

/// The eight off-diagonal ledger terms for the axis pair (j, k), from
/// psi = x_j x_k sigma_R; sum is zero up to quadrature, and the first term
/// tends to 2 M_jk as R grows.
std::array<double, 8> weakform_terms_offdiag(const VectorField& v, const ScalarField& p,
                                             int j, int k, double radius);

/// Which ledger a scan evaluates.
struct ScanCase {
    enum class Kind { diag, offdiag };
    Kind kind = Kind::diag;
    int j = 0;
    int k = 1;  // used by offdiag only

    std::string name() const;
};

struct ScanRow {
    double radius = 0.0;
    std::vector<double> terms;
    std::vector<double> partial_sums;
    double total = 0.0;
};

/// Per-R values of the ledger terms with convergence summaries.
struct ScanTable {
    ScanCase scan_case;
    std::vector<std::string> term_names;
    std::vector<ScanRow> rows;

    /// Geometric-decay flag per cutoff term (terms 3.. for diag, 2.. for
    /// offdiag), same ratio rule as the L1 diagnostic.
    std::vector<bool> cutoff_term_decays;
    /// 1/R^2-extrapolated limit of the sigma_R-weighted pressure integral.
    double pressure_term_limit = 0.0;
    /// Value of the leading term at the largest R.
    double leading_term_final = 0.0;

    void write_csv(std::ostream& os) const;
};

/// Evaluate the ledger over an increasing radius list (max 2R <= 0.45 L).
ScanTable r_scan(const VectorField& v, const ScalarField& p, const ScanCase& scan_case,
                 const std::vector<double>& radii);

/// Default radius ladder for scans: geometric between 1.2 * core and 0.22 L.
std::vector<double> default_scan_radii(const Grid& grid, double core_radius);

}  // namespace liouville
