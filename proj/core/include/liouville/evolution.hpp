#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "liouville/generate.hpp"
#include "liouville/grid.hpp"
#include "liouville/identity.hpp"
#include "liouville/riesz.hpp"

namespace liouville {

/// 2D incompressible flow in vorticity form: omega = d1 v2 - d2 v1,
/// v = perp-grad of the stream function with Lap psi = omega.  Pressure
/// never enters the stepper, so the Riesz pressure diagnostics below are a
/// genuine cross-check on the evolved velocity, not a solver byproduct.
struct FlowState {
    ScalarField omega;
    double time = 0.0;
    double nu = 0.0;
};

/// Velocity recovered spectrally from the vorticity; divergence-free by
/// construction.
VectorField velocity_of(const FlowState& state);

/// One classical RK4 step of d omega/dt = -v.grad(omega) + nu Lap(omega)
/// with 2/3-rule dealiasing and the exact integrating factor
/// exp(-nu |k|^2 dt) for the viscous term.  The mean of omega is conserved
/// to machine precision.  Throws on CFL violation (dt > 0.5 h / max|v|)
/// or when the state stops being finite.
FlowState ns2d_step(const FlowState& state, double dt);

struct EvolveConfig {
    GeneratorSpec init;
    double nu = 0.0;
    double dt = 0.01;
    double t_end = 1.0;
    int snapshot_every = 10;
    /// Evaluate pressure/verdict diagnostics at snapshots.
    bool diagnostics = true;
    /// Called with (snapshot index, vorticity, time) at every snapshot.
    std::function<void(int, const ScalarField&, double)> on_snapshot;
};

struct Snapshot {
    double time = 0.0;
    std::vector<double> energies;       // E_j
    MomentumTensor m;
    double pv_estimate = 0.0;
    L1Class l1_class = L1Class::undetermined;
    double energy = 0.0;                // E = 1/2 integral |v|^2
    double enstrophy = 0.0;             // Z = 1/2 integral omega^2
    bool support_ok = true;
};

struct DiagnosticsSeries {
    std::vector<Snapshot> snapshots;
    /// integral of Z dt accumulated at the step cadence (trapezoid).
    double viscous_dissipation_integral = 0.0;
    /// max |E(t2)-E(t1) + 2 nu int Z dt| over snapshot pairs (t1, t2=next).
    double energy_law_residual = 0.0;
    /// False once a snapshot violates the support-radius condition; later
    /// diagnostics are still recorded but flagged.
    bool support_valid = true;

    void write_csv(std::ostream& os) const;
    std::string summary_json() const;
};

/// Step from the generated initial vorticity to t_end, recording
/// diagnostics every snapshot_every steps (plus t = 0 and the final time).
DiagnosticsSeries run_simulation(const EvolveConfig& config, const Grid& grid);

/// CFL bound used by the stepper and by pre-run validation.
double cfl_limit(const FlowState& state);

}  // namespace liouville
