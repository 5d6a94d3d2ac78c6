#include <doctest.h>

#include <cmath>
#include <sstream>

#include "liouville/evolution.hpp"
#include "liouville/generate.hpp"
#include "liouville/grid.hpp"
#include "liouville/spectral.hpp"

using namespace liouville;

namespace {

const Grid kGrid2(2, 256, 16.0);

FlowState state_from(const ScalarField& omega, double nu) { return FlowState{omega, 0.0, nu}; }

double omega_l2_diff(const ScalarField& a, const ScalarField& b) {
    double sq = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sq += d * d;
    }
    return std::sqrt(sq * a.grid().cell_volume());
}

}  // namespace

TEST_CASE("single Fourier mode decays at the exact viscous rate") {
    const double L = kGrid2.length();
    const double k1 = 2.0 * M_PI / L * 3.0;
    const double k2 = 2.0 * M_PI / L * 1.0;
    auto omega0 = ScalarField::sample(kGrid2, [&](const std::array<double, 3>& x) {
        return std::cos(k1 * x[0] + k2 * x[1]);
    });
    const double nu = 0.05;
    FlowState state = state_from(omega0, nu);
    const double dt = 0.01;
    for (int i = 0; i < 20; ++i) state = ns2d_step(state, dt);

    const double decay = std::exp(-nu * (k1 * k1 + k2 * k2) * state.time);
    double err = 0.0;
    for (std::size_t i = 0; i < omega0.size(); ++i) {
        err = std::max(err, std::abs(state.omega[i] - decay * omega0[i]));
    }
    CHECK(err < 1e-10);
}

TEST_CASE("Euler invariants: energy and enstrophy on a short inviscid run") {
    GeneratorSpec spec;
    spec.shape = "x1x2";
    spec.amplitude = 0.5;
    const ScalarField omega0 = gen_vorticity2d(spec, kGrid2);
    FlowState state = state_from(omega0, 0.0);

    const SpectralField w0 = to_spectral(omega0);
    const double z0 = 0.5 * spectral_inner(w0, w0);
    const double e0 = [&] {
        const VectorField v = velocity_of(state);
        return 0.5 * inner(v.comp(0), v.comp(0)) + 0.5 * inner(v.comp(1), v.comp(1));
    }();

    const double dt = 0.01;
    for (int i = 0; i < 50; ++i) state = ns2d_step(state, dt);

    const SpectralField wT = to_spectral(state.omega);
    const double zT = 0.5 * spectral_inner(wT, wT);
    const double eT = [&] {
        const VectorField v = velocity_of(state);
        return 0.5 * inner(v.comp(0), v.comp(0)) + 0.5 * inner(v.comp(1), v.comp(1));
    }();
    CHECK(std::abs(eT - e0) < 1e-8 * e0);
    CHECK(std::abs(zT - z0) < 1e-8 * z0);
}

TEST_CASE("vorticity mean is conserved to machine precision") {
    GeneratorSpec spec;
    spec.shape = "x1";
    const ScalarField omega0 = gen_vorticity2d(spec, kGrid2);
    FlowState state = state_from(omega0, 0.01);
    const double mean0 = integrate(state.omega);
    for (int i = 0; i < 10; ++i) state = ns2d_step(state, 0.02);
    CHECK(std::abs(integrate(state.omega) - mean0) < 1e-13);
}

TEST_CASE("RK4 self-convergence is fourth order") {
    GeneratorSpec spec;
    spec.shape = "x1x2";
    spec.amplitude = 0.5;
    const ScalarField omega0 = gen_vorticity2d(spec, kGrid2);
    const double nu = 0.01;
    const double T = 0.4;

    auto run = [&](double dt) {
        FlowState state = state_from(omega0, nu);
        const int n = static_cast<int>(std::round(T / dt));
        for (int i = 0; i < n; ++i) state = ns2d_step(state, dt);
        return state.omega;
    };

    const ScalarField sol_h = run(0.04);
    const ScalarField sol_h2 = run(0.02);
    const ScalarField sol_h4 = run(0.01);
    const double e_h = omega_l2_diff(sol_h, sol_h2);
    const double e_h2 = omega_l2_diff(sol_h2, sol_h4);
    const double order = std::log2(e_h / e_h2);
    CHECK(order >= 3.8);
    CHECK(order <= 4.5);
}

TEST_CASE("stepper contracts: CFL, positivity, finiteness") {
    GeneratorSpec spec;
    const ScalarField omega0 = gen_vorticity2d(spec, kGrid2);
    const FlowState state = state_from(omega0, 0.0);
    const double limit = cfl_limit(state);
    CHECK(limit > 0.0);
    CHECK_THROWS_AS(ns2d_step(state, 10.0 * limit), std::runtime_error);
    CHECK_THROWS_AS(ns2d_step(state, -0.1), std::invalid_argument);
}

TEST_CASE("zero initial data stays identically zero") {
    EvolveConfig config;
    config.init.amplitude = 0.0;
    config.nu = 0.01;
    config.dt = 0.05;
    config.t_end = 0.5;
    config.snapshot_every = 2;
    const DiagnosticsSeries series = run_simulation(config, kGrid2);
    for (const Snapshot& s : series.snapshots) {
        CHECK(s.energy == 0.0);
        CHECK(s.enstrophy == 0.0);
        CHECK(s.pv_estimate == 0.0);
    }
    CHECK(series.energy_law_residual == 0.0);
}

TEST_CASE("D4-symmetric run: isotropy persists and the energy law holds") {
    EvolveConfig config;
    config.init.shape = "x4";  // invariant under 90-degree rotation
    config.init.amplitude = 0.25;
    config.nu = 0.01;
    config.dt = 0.02;
    config.t_end = 1.2;
    config.snapshot_every = 6;
    const DiagnosticsSeries series = run_simulation(config, kGrid2);
    REQUIRE(series.snapshots.size() >= 5);
    CHECK(series.support_valid);

    const double e0 = series.snapshots.front().energy;
    CHECK(series.energy_law_residual <= 1e-4 * e0);

    for (const Snapshot& s : series.snapshots) {
        const double tr = s.m.trace();
        // D4 symmetry is preserved by the flow: M stays isotropic
        CHECK(std::abs(s.m.at(0, 0) - s.m.at(1, 1)) <= 1e-6 * tr);
        CHECK(std::abs(s.m.at(0, 1)) <= 1e-6 * tr);
        // trace identity: tr M = 2 E by definition
        CHECK(s.m.trace() == doctest::Approx(2.0 * s.energy).epsilon(1e-13));
        // PV relation in 2D: integral p = -E
        CHECK(std::abs(s.pv_estimate + s.energy) <= 1e-3 * std::max(1.0, e0));
        // equipartition at every snapshot
        for (double ej : s.energies) {
            CHECK(std::abs(ej + 0.5 * s.pv_estimate) <= 1e-3 * tr);
        }
        CHECK(s.l1_class == L1Class::integrable);
    }

    // timestamps strictly increase
    for (std::size_t i = 1; i < series.snapshots.size(); ++i) {
        CHECK(series.snapshots[i].time > series.snapshots[i - 1].time);
    }
}

TEST_CASE("mirror-symmetric data: cross moments stay zero, anisotropy drifts") {
    // psi = x1 x2 e^{-|x|^2} flips sign under a quarter turn, so only the
    // axis mirrors survive along the flow: M12 stays pinned at zero while
    // M11 - M22 drifts away from zero at a finite rate, and the
    // classification leaves the integrable class accordingly.
    EvolveConfig config;
    config.init.shape = "x1x2";
    config.init.amplitude = 0.6;
    config.nu = 0.01;
    config.dt = 0.02;
    config.t_end = 0.8;
    config.snapshot_every = 10;
    const DiagnosticsSeries series = run_simulation(config, kGrid2);
    for (const Snapshot& s : series.snapshots) {
        CHECK(std::abs(s.m.at(0, 1)) <= 1e-12 * s.m.trace());
    }
    const Snapshot& last = series.snapshots.back();
    CHECK(std::abs(last.m.at(0, 0) - last.m.at(1, 1)) > 1e-3 * last.m.trace());
}

TEST_CASE("viscous vortex run obeys the energy law") {
    EvolveConfig config;  // radial stream: a steady Euler flow that diffuses
    config.nu = 0.01;
    config.dt = 0.02;
    config.t_end = 1.0;
    config.snapshot_every = 10;
    const DiagnosticsSeries series = run_simulation(config, kGrid2);
    const double e0 = series.snapshots.front().energy;
    CHECK(series.energy_law_residual <= 1e-4 * e0);
    CHECK(series.snapshots.back().energy < e0);  // strictly dissipative
}

TEST_CASE("series CSV has one row per snapshot") {
    EvolveConfig config;
    config.init.shape = "x1x2";
    config.nu = 0.02;
    config.dt = 0.05;
    config.t_end = 0.2;
    config.snapshot_every = 2;
    config.diagnostics = false;
    const DiagnosticsSeries series = run_simulation(config, kGrid2);
    std::ostringstream os;
    series.write_csv(os);
    const std::string csv = os.str();
    CHECK(csv.find("t,E1,E2,M11,M12,M22,pv_estimate,l1_class,energy,enstrophy,support_ok") == 0);
    std::size_t lines = 0;
    for (char ch : csv) lines += ch == '\n' ? 1 : 0;
    CHECK(lines == series.snapshots.size() + 1);
}
