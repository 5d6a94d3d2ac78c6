#pragma once

#include <string>
#include <vector>

#include "liouville/grid.hpp"
#include "liouville/riesz.hpp"

namespace liouville {

/// E_j = 1/2 integral (v^j)^2 dx, the j-th component of the total energy.
struct ComponentEnergies {
    std::vector<double> e;
    double total() const;
};

ComponentEnergies component_energies(const VectorField& v);

enum class LiouvilleCase { trivial_forced, equipartition_case, not_L1, undetermined };

std::string to_string(LiouvilleCase c);

/// Outcome of evaluating the Liouville/equipartition dichotomy on a state.
struct LiouvilleVerdict {
    L1Class l1_class = L1Class::undetermined;
    /// PV integral of p over R^N (the quantity whose sign decides the case).
    double pressure_integral = 0.0;
    LiouvilleCase verdict_case = LiouvilleCase::undetermined;
    /// max_j |E_j + 1/2 integral p|.
    double equipartition_defect = 0.0;
    /// max_{j != k} |M_jk|.
    double cross_defect = 0.0;
    /// Set when a state contradicts the triviality statement: integrable
    /// pressure with nonnegative integral but a nonzero velocity.  Any such
    /// state is a counterexample and must fail the suite.
    bool falsification = false;

    double velocity_l2 = 0.0;
    double trace_m = 0.0;
};

/// Evaluate the dichotomy on a divergence-free state: integrable p with
/// integral >= 0 forces v = 0 (checked, never constructible); integrable p
/// with negative integral forces equipartition of the component energies and
/// vanishing cross moments; otherwise the state is outside the L1 class.
LiouvilleVerdict classify_state(const VectorField& v);

/// Serialize with full-precision floats.
std::string verdict_to_json(const LiouvilleVerdict& verdict);

/// Maximal-function diagnostic for membership in the Hardy space H^1.
struct HardyReport {
    /// integral of max_{t in scales} |f * phi_t| at the largest scale.
    double norm_proxy = 0.0;
    /// Growth d(proxy)/d(log t) over the top three scales, relative to the
    /// proxy at the top scale.  Members of H^1 stabilize (slope -> 0);
    /// nonzero-mean functions keep growing logarithmically.
    double slope = 0.0;
    /// True when the per-octave proxy increments decay geometrically over
    /// the top scales (the proxy converges as the window grows), or the
    /// slope is already below kHardySlopeTol.  Nonzero-mean tails keep the
    /// increments flat.
    bool stable = false;
    /// integral of f; zero (within quadrature) whenever the proxy stabilizes.
    double mean = 0.0;
    /// Proxy value per scale prefix.
    std::vector<double> proxy_by_scale;
};

/// phi is the unit-mass Gaussian; the maximal function is evaluated as a
/// pointwise max over spectral convolutions at the given dyadic scales.
/// Scales must be increasing and inside [2h, L/4].
HardyReport hardy_norm_estimate(const ScalarField& f, const std::vector<double>& scales);

/// Default dyadic scale ladder [2h, 4h, ..., L/4] for a grid.
std::vector<double> hardy_default_scales(const Grid& grid);

/// "v = 0 a.e." rendered numerically: |v|_L2 <= kZeroVelocityTol * L^{N/2}.
inline constexpr double kZeroVelocityTol = 1e-8;
/// Proxy-norm slope below this means "stable" (calibrated on the Gaussian
/// bump and its derivative).
inline constexpr double kHardySlopeTol = 0.05;
/// Pass thresholds relative to trace M: equipartition defect and cross
/// moments of an integrable-pressure state.  The cross tolerance is ~100x
/// the observed quadrature error at n=256; the equipartition tolerance is
/// limited by the PV extrapolation.
inline constexpr double kEquipartitionRelTol = 1e-3;
inline constexpr double kCrossRelTol = 1e-6;

}  // namespace liouville
