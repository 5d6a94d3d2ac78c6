#pragma once

#include <string>
#include <vector>

#include "liouville/grid.hpp"
#include "liouville/riesz.hpp"

namespace liouville {

/// Kinematic velocity/magnetic-field snapshot, both divergence-free.
struct MHDState {
    VectorField v;
    VectorField b;
};

/// Pressure from the momentum balance: with P = p + |b|^2/2,
///   Lap P = -sum_jk d_j d_k (v^j v^k - b^j b^k),
/// solved spectrally exactly like the hydrodynamic pressure (P mean-free),
/// then p = P - |b|^2/2.  With b = 0 this reduces bit-for-bit to
/// compute_pressure(v).
ScalarField mhd_pressure(const MHDState& state);

/// Spectral P = p + |b|^2/2 (the Riesz-potential part).
SpectralField mhd_head_pressure_spectral(const MHDState& state);

/// Finite-R residual of the static component identity for axis j:
///   res_j(R) = -integral (v^j)^2 sigma_R + integral (b^j)^2 sigma_R
///              - integral P sigma_R,
/// which tends to 0 as R grows exactly when the pressure is in the L1
/// class; otherwise the surviving cutoff residue is returned.
double mhd_component_identity(const MHDState& state, int j, double radius);

/// res_j extrapolated in 1/R^2 over a radius ladder.
double mhd_component_residual(const MHDState& state, int j);

struct MHDVerdict {
    /// PV integral of p: -(1/N)(tr M_v - tr M_b) - 1/2 integral |b|^2.
    double pressure_integral = 0.0;
    /// Residual of the summed identity
    /// integral |v|^2 + (N-2)/2 integral |b|^2 + N PV(p) = 0.
    double sum_identity_residual = 0.0;
    std::vector<double> component_residuals;
    /// N = 2 only: |integral (b^1)^2 - integral (b^2)^2|.
    double b_equipartition_defect = 0.0;
    L1Class l1_class = L1Class::undetermined;
    bool falsification = false;
    /// Set when v ~ 0: the induction equation then reduces to the heat
    /// equation for b (recorded, not evolved).
    bool heat_equation_regime = false;

    double v_l2 = 0.0;
    double b_l2 = 0.0;
};

MHDVerdict mhd_classify(const MHDState& state);

std::string mhd_verdict_to_json(const MHDVerdict& verdict);

}  // namespace liouville
