#pragma once

#include <array>
#include <string>
#include <vector>

#include "liouville/grid.hpp"
#include "liouville/spectral.hpp"

namespace liouville {

/// M_jk = integral v^j v^k dx.  Symmetric positive semidefinite;
/// trace M = 2 * total kinetic energy.
class MomentumTensor {
public:
    MomentumTensor() = default;
    explicit MomentumTensor(int dims);

    int dims() const { return dims_; }
    double& at(int j, int k) { return m_[static_cast<std::size_t>(j * dims_ + k)]; }
    double at(int j, int k) const { return m_[static_cast<std::size_t>(j * dims_ + k)]; }

    double trace() const;
    /// Frobenius norm of M - (trace/N) Id.
    double deviatoric_norm() const;
    /// max_{j != k} |M_jk|.
    double max_offdiag() const;
    /// e^T M e.
    double quadratic_form(const std::array<double, 3>& e) const;

private:
    int dims_ = 0;
    std::array<double, 9> m_{};
};

MomentumTensor momentum_tensor(const VectorField& v);

/// Pressure from velocity: phat(k) = -sum_jk k_j k_k What_jk(k)/|k|^2 with
/// W_jk = v^j v^k; the zero mode is set to 0 (box pressure is mean-free; the
/// physically meaningful integral of p over R^N is reported separately as a
/// principal-value estimate).  Warns on stderr if v is not effectively
/// supported inside radius L/3, where periodization error starts to dominate.
ScalarField compute_pressure(const VectorField& v);

/// Spectral-side variant, shared with the MHD module.
SpectralField pressure_spectral(const VectorField& v);

/// lim_{t->0+} phat(t e) along the unit direction e, by Richardson
/// extrapolation of -e^T What(t e) e over t_k = t0/2^k.  The limit is
/// direction dependent exactly when M is anisotropic; it equals -e^T M e.
/// Throws std::runtime_error if the extrapolation does not settle.
double directional_pressure_limit(const VectorField& v, const std::array<double, 3>& e);

enum class L1Class { integrable, log_divergent, undetermined };

std::string to_string(L1Class c);

/// Numerical rendering of the hypothesis "p is integrable on R^N".
struct L1Report {
    L1Class classification = L1Class::undetermined;
    /// Extrapolated principal value of the centered-ball integrals of p.
    double pv_estimate = 0.0;
    /// Least-squares slope of integral_{B_R} |p| against log R.
    double log_slope = 0.0;
    /// RMS residual of the log-log annulus fit.
    double fit_rms = 0.0;
    /// Annulus ladder radii and sums A_R = integral_{R<|x|<2R} |p|.
    std::vector<double> radii;
    std::vector<double> annulus_sums;
};

/// Classify the tail of p from dyadic annulus sums between the support
/// radius and the largest annulus that fits the box, and estimate the
/// principal-value integral of p from volume-corrected ball integrals.
/// `core_radius` is the effective support radius of the generating velocity
/// (see support_radius()).  When the stress tensor is supplied, the
/// wrap-around tails of the neighboring box images (amplitude set by the
/// deviatoric part of M) are subtracted before the tail statistics.
L1Report l1_diagnostic(const ScalarField& p, double core_radius,
                       const MomentumTensor* stress = nullptr);

/// Same, reusing an existing transform of p.
L1Report l1_diagnostic(const SpectralField& phat, const ScalarField& p, double core_radius,
                       const MomentumTensor* stress = nullptr);

/// Tail of the periodized pattern from the neighboring box images,
/// sum over 0 < |m|_inf <= 1 of farfield_pattern(M, x + L m).
double image_pattern(const MomentumTensor& m, const std::array<double, 3>& x, int dims,
                     double box_length);

/// Shared spectral assembly: phat from a symmetric stress given by its upper
/// triangle in row order (W11, W12[, W13], W22[, W23, W33]).
SpectralField pressure_from_stress_upper(const Grid& grid,
                                         const std::vector<ScalarField>& w_upper);

enum class FarfieldStatus { ok, undetermined };

struct FarfieldReport {
    FarfieldStatus status = FarfieldStatus::undetermined;
    /// Fitted radial decay exponent of shell-averaged |p|.
    double exponent = 0.0;
    /// False when M is isotropic (the predicted leading pattern vanishes
    /// identically) or the shell has too few points.
    bool pattern_valid = false;
    /// Pearson correlation between the measured angular pattern on the
    /// outermost reliable shell and the Newtonian-potential tensor pattern
    /// contracted with M.
    double pattern_correlation = 0.0;
};

/// Shell decay fit over radii in [1.5*core_radius, 0.4*L] plus angular
/// comparison against the second-derivative tensor of the Newtonian
/// potential contracted with M.
FarfieldReport farfield_analysis(const ScalarField& p, const MomentumTensor& m,
                                 double core_radius);

/// Predicted far-field tensor pattern sum_jk M_jk T_jk(x); T is trace-free
/// away from the origin so only the deviatoric part of M contributes.
double farfield_pattern(const MomentumTensor& m, const std::array<double, 3>& x, int dims);

/// PV estimate from ball integrals of a mean-free spectral field:
/// F(R) = ball/(1 - vol(B_R)/L^N) extrapolated in 1/R^2 over a radius ladder.
double pv_from_balls(const SpectralField& phat, double r_lo, double r_hi);

/// Thresholds (referenced by tests and docs).
inline constexpr double kAnnulusDecayFactor = 1.5;   // integrable: A_R/A_2R >= 1.5
inline constexpr double kAnnulusFlatBand = 0.2;      // log-divergent: within +-20% of flat
inline constexpr int kDirectionalLevels = 6;         // Richardson depth for t->0
inline constexpr double kSupportWarnTol = 1e-10;     // relative exterior magnitude

}  // namespace liouville
