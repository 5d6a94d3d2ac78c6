#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "liouville/generate.hpp"
#include "liouville/grid.hpp"
#include "liouville/riesz.hpp"
#include "liouville/spectral.hpp"
#include "liouville/weakform.hpp"

using namespace liouville;

namespace {

const Grid kGrid2(2, 256, 16.0);

VectorField radial_anchor() {
    GeneratorSpec spec;
    return gen_divfree(spec, kGrid2);
}

VectorField aniso_anchor() {
    GeneratorSpec spec;
    spec.shape = "x1";
    return gen_divfree(spec, kGrid2);
}

double sum_of(std::span<const double> terms) {
    double s = 0.0;
    for (double t : terms) s += t;
    return s;
}

}  // namespace

TEST_CASE("cutoff bridge: values, frozen derivative bounds, FD oracle") {
    CHECK(cutoff::value(0.3) == 1.0);
    CHECK(cutoff::value(1.0) == 1.0);
    CHECK(cutoff::value(2.0) == 0.0);
    CHECK(cutoff::value(2.7) == 0.0);
    CHECK(cutoff::value(1.5) == doctest::Approx(0.5).epsilon(1e-15));

    double m1 = 0.0, m2 = 0.0, m3 = 0.0;
    for (int i = 0; i <= 20000; ++i) {
        const double s = 1.0 + i * (1.0 / 20000.0);
        m1 = std::max(m1, std::abs(cutoff::d1(s)));
        m2 = std::max(m2, std::abs(cutoff::d2(s)));
        m3 = std::max(m3, std::abs(cutoff::d3(s)));
        CHECK(cutoff::value(s) >= 0.0);
        CHECK(cutoff::value(s) <= 1.0);
    }
    CHECK(m1 <= cutoff::kMaxD1 * (1.0 + 1e-9));
    CHECK(m1 >= cutoff::kMaxD1 * 0.999);
    CHECK(m2 <= cutoff::kMaxD2);
    CHECK(m2 >= cutoff::kMaxD2 * 0.99);
    CHECK(m3 <= cutoff::kMaxD3);
    CHECK(m3 >= cutoff::kMaxD3 * 0.99);

    // symbolic derivatives against central differences
    const double h = 1e-6;
    for (double s : {1.1, 1.35, 1.5, 1.77, 1.94}) {
        CHECK(cutoff::d1(s) ==
              doctest::Approx((cutoff::value(s + h) - cutoff::value(s - h)) / (2 * h))
                  .epsilon(1e-6));
        CHECK(cutoff::d2(s) ==
              doctest::Approx((cutoff::d1(s + h) - cutoff::d1(s - h)) / (2 * h)).epsilon(1e-6));
        CHECK(cutoff::d3(s) ==
              doctest::Approx((cutoff::d2(s + h) - cutoff::d2(s - h)) / (2 * h)).epsilon(1e-5));
    }
}

TEST_CASE("diagonal test function: plateau, support, bridge bound") {
    const double radius = 3.0;
    const TestFunction tf = test_function_diag(0, radius, kGrid2);
    double bridge_grad_max = 0.0;
    for_each_point(kGrid2, [&](std::size_t idx, const std::array<double, 3>& x) {
        const double r = std::hypot(x[0], x[1]);
        if (r < radius * 0.999) {
            CHECK(tf.psi[idx] == 0.5 * x[0] * x[0]);
            CHECK(tf.grad.comp(0)[idx] == x[0]);
            CHECK(tf.grad.comp(1)[idx] == 0.0);
        } else if (r > 2.0 * radius * 1.001) {
            CHECK(tf.psi[idx] == 0.0);
            CHECK(tf.grad.comp(0)[idx] == 0.0);
        } else {
            const CutoffDerivs c = cutoff_derivs(x, radius, 2);
            bridge_grad_max = std::max({bridge_grad_max, std::abs(c.grad[0]), std::abs(c.grad[1])});
            // |d_k psi| <= |x_j| + (x_j^2/2) max|grad sigma_R|
            const double bound = std::abs(x[0]) + 0.5 * x[0] * x[0] * cutoff::kMaxD1 / radius;
            CHECK(std::abs(tf.grad.comp(0)[idx]) <= bound * (1.0 + 1e-12));
        }
    });
    CHECK(bridge_grad_max <= cutoff::kMaxD1 / radius);

    CHECK_THROWS_AS(test_function_diag(0, 0.3 * kGrid2.length(), kGrid2), std::invalid_argument);
}

TEST_CASE("ledger sums vanish at every radius") {
    GeneratorSpec rnd;
    rnd.kind = GeneratorSpec::Kind::random_divfree;
    rnd.seed = 13;
    rnd.width = 0.85;
    const VectorField fields[] = {radial_anchor(), aniso_anchor(), gen_divfree(rnd, kGrid2)};
    for (const VectorField& v : fields) {
        const ScalarField p = compute_pressure(v);
        const double scale = momentum_tensor(v).trace();
        for (double radius : {1.5, 2.4, 3.6}) {
            for (int j = 0; j < 2; ++j) {
                const auto terms = weakform_terms_diag(v, p, j, radius);
                CHECK(std::abs(sum_of(terms)) <= 1e-8 * scale);
            }
            const auto jterms = weakform_terms_offdiag(v, p, 0, 1, radius);
            CHECK(std::abs(sum_of(jterms)) <= 1e-8 * scale);
        }
    }

    const VectorField zero(kGrid2);
    const auto zterms = weakform_terms_diag(zero, ScalarField(kGrid2), 0, 2.0);
    for (double t : zterms) CHECK(t == 0.0);
}

TEST_CASE("ledger limits: leading terms reach the momentum tensor") {
    const VectorField vr = radial_anchor();
    const ScalarField pr = compute_pressure(vr);
    const MomentumTensor mr = momentum_tensor(vr);
    // support at the 1e-2 level, capped by the admissible cutoff radius
    const double r_big = std::min(1.5 * support_radius(vr, 1e-2), max_cutoff_radius(kGrid2));

    const auto ir = weakform_terms_diag(vr, pr, 0, r_big);
    CHECK(std::abs(ir[0] - mr.at(0, 0)) < 1e-6);
    // integrable pressure: sigma-weighted pressure term reaches PV and the
    // cutoff terms die
    CHECK(ir[1] == doctest::Approx(-M_PI / 2.0).epsilon(2e-3));
    CHECK(std::abs(ir[2]) + std::abs(ir[3]) + std::abs(ir[4]) + std::abs(ir[5]) < 2e-3);

    const auto jr = weakform_terms_offdiag(vr, pr, 0, 1, r_big);
    CHECK(std::abs(jr[0] - 2.0 * mr.at(0, 1)) < 1e-6);

    const VectorField va = aniso_anchor();
    const ScalarField pa = compute_pressure(va);
    const MomentumTensor ma = momentum_tensor(va);
    const double r_a = std::min(1.5 * support_radius(va, 1e-2), max_cutoff_radius(kGrid2));
    const auto ia = weakform_terms_diag(va, pa, 0, r_a);
    CHECK(std::abs(ia[0] - ma.at(0, 0)) < 1e-6);

    const auto ja = weakform_terms_offdiag(va, pa, 0, 1, r_a);
    CHECK(std::abs(ja[0] - 2.0 * ma.at(0, 1)) < 1e-6);  // cross moment is 0
}

TEST_CASE("anisotropic anchor: pressure term converges to PV, cutoff residue survives") {
    // the non-integrable tail leaves a +pi/8 residue in the cutoff terms of
    // the j=1 ledger while the sigma-weighted pressure term goes to -pi/4
    const VectorField v = aniso_anchor();
    const ScalarField p = compute_pressure(v);
    const ScanCase diag1{ScanCase::Kind::diag, 0, 1};
    const ScanTable table = r_scan(v, p, diag1, default_scan_radii(kGrid2, support_radius(v)));

    CHECK(table.pressure_term_limit == doctest::Approx(-M_PI / 4.0).epsilon(4e-3));
    const ScanRow& last = table.rows.back();
    const double residue = last.terms[2] + last.terms[3] + last.terms[4] + last.terms[5];
    CHECK(residue == doctest::Approx(M_PI / 8.0).epsilon(4e-3));
    CHECK(std::abs(last.terms[0] - M_PI / 8.0) < 1e-6);
}

TEST_CASE("gradient test functions are orthogonal to divergence-free fields") {
    GeneratorSpec rnd;
    rnd.kind = GeneratorSpec::Kind::random_divfree;
    rnd.width = 0.85;
    for (std::uint64_t seed : {1ull, 22ull}) {
        rnd.seed = seed;
        const VectorField v = gen_divfree(rnd, kGrid2);
        // quadrature against the Gevrey-regular cutoff needs a refined grid
        const Grid fine(2, 4 * kGrid2.n(), kGrid2.length());
        const ScalarField v0 = upsample(v.comp(0), 4);
        const ScalarField v1 = upsample(v.comp(1), 4);
        for (double radius : {2.0, 3.2}) {
            for (int variant = 0; variant < 2; ++variant) {
                double psi_acc = 0.0, lap_acc = 0.0;
                for_each_point(fine, [&](std::size_t idx, const std::array<double, 3>& x) {
                    const CutoffDerivs c = cutoff_derivs(x, radius, 2);
                    double p0, p1;  // grad psi
                    double g0, g1;  // grad lap psi
                    if (variant == 0) {
                        const double xj = x[0];
                        p0 = xj * c.sigma + 0.5 * xj * xj * c.grad[0];
                        p1 = 0.5 * xj * xj * c.grad[1];
                        g0 = c.grad[0] + 2.0 * c.grad[0] + 2.0 * xj * c.hess[0][0] + xj * c.lap +
                             0.5 * xj * xj * c.grad_lap[0];
                        g1 = c.grad[1] + 2.0 * xj * c.hess[0][1] + 0.5 * xj * xj * c.grad_lap[1];
                    } else {
                        const double xj = x[0], xk = x[1];
                        p0 = xk * c.sigma + xj * xk * c.grad[0];
                        p1 = xj * c.sigma + xj * xk * c.grad[1];
                        g0 = 2.0 * c.grad[1] + 2.0 * xk * c.hess[0][0] + 2.0 * xj * c.hess[0][1] +
                             xk * c.lap + xj * xk * c.grad_lap[0];
                        g1 = 2.0 * c.grad[0] + 2.0 * xk * c.hess[0][1] + 2.0 * xj * c.hess[1][1] +
                             xj * c.lap + xj * xk * c.grad_lap[1];
                    }
                    psi_acc += v0[idx] * p0 + v1[idx] * p1;
                    lap_acc += v0[idx] * g0 + v1[idx] * g1;
                });
                const double cell = fine.cell_volume();
                CHECK(std::abs(psi_acc * cell) < 1e-10);
                CHECK(std::abs(lap_acc * cell) < 1e-10);
            }
        }
    }
}

TEST_CASE("cutoff terms obey the annulus energy bound") {
    // |I_m| for the velocity-quadratic cutoff terms is controlled by
    // C * integral of |v|^2 over the bridge annulus, C independent of R
    const double C = 8.0 * cutoff::kMaxD1 + 4.0 * cutoff::kMaxD2;
    GeneratorSpec rnd;
    rnd.kind = GeneratorSpec::Kind::random_divfree;
    rnd.seed = 4;
    rnd.width = 0.9;
    const VectorField fields[] = {radial_anchor(), aniso_anchor(), gen_divfree(rnd, kGrid2)};
    for (const VectorField& v : fields) {
        const ScalarField p = compute_pressure(v);
        for (double radius : {1.2, 1.8, 2.7}) {
            double annulus_energy = 0.0;
            for_each_point(kGrid2, [&](std::size_t idx, const std::array<double, 3>& x) {
                const double r = std::hypot(x[0], x[1]);
                if (r <= radius || r >= 2.0 * radius) return;
                annulus_energy +=
                    v.comp(0)[idx] * v.comp(0)[idx] + v.comp(1)[idx] * v.comp(1)[idx];
            });
            annulus_energy *= kGrid2.cell_volume();
            const auto terms = weakform_terms_diag(v, p, 0, radius);
            for (int m = 2; m < 5; ++m) {
                CHECK(std::abs(terms[static_cast<std::size_t>(m)]) <= C * annulus_energy);
            }
        }
    }
}

TEST_CASE("r_scan: decay flags, degenerate scan, CSV shape") {
    const VectorField vr = radial_anchor();
    const ScalarField pr = compute_pressure(vr);
    const ScanCase diag1{ScanCase::Kind::diag, 0, 1};
    const auto radii = default_scan_radii(kGrid2, support_radius(vr));
    const ScanTable tr = r_scan(vr, pr, diag1, radii);
    // integrable pressure: every cutoff term decays
    for (bool flag : tr.cutoff_term_decays) CHECK(flag);
    CHECK(tr.pressure_term_limit == doctest::Approx(-M_PI / 2.0).epsilon(2e-3));

    const VectorField va = aniso_anchor();
    const ScalarField pa = compute_pressure(va);
    const ScanTable ta = r_scan(va, pa, diag1, radii);
    // log-divergent pressure: the pressure-cutoff term I6 plateaus
    CHECK_FALSE(ta.cutoff_term_decays.back());

    const ScanTable single = r_scan(vr, pr, diag1, {2.5});
    CHECK(single.rows.size() == 1);
    CHECK(std::abs(single.rows[0].total) < 1e-8 * momentum_tensor(vr).trace());

    std::ostringstream os;
    ta.write_csv(os);
    const std::string csv = os.str();
    CHECK(csv.find("case,R,I1,I2,I3,I4,I5,I6,sum1") == 0);
    std::size_t lines = 0;
    for (char ch : csv) lines += ch == '\n' ? 1 : 0;
    CHECK(lines == radii.size() + 1);

    CHECK_THROWS_AS(r_scan(vr, pr, diag1, {}), std::invalid_argument);
    CHECK_THROWS_AS(r_scan(vr, pr, diag1, {3.0, 2.0}), std::invalid_argument);
}

TEST_CASE("N=3 ledger closes as well") {
    Grid grid3(3, 64, 12.0);
    GeneratorSpec spec;
    spec.kind = GeneratorSpec::Kind::potential3d;
    spec.shape = "random";
    spec.seed = 6;
    spec.width = 0.7;
    const VectorField v = gen_divfree(spec, grid3);
    const ScalarField p = compute_pressure(v);
    const double scale = momentum_tensor(v).trace();
    // closure at n=64 is limited by how well 64 points resolve the bridge;
    // the 1e-8 closure criterion lives on the n=256 2D grid
    for (double radius : {2.2, 2.6}) {
        for (int j = 0; j < 3; ++j) {
            const auto terms = weakform_terms_diag(v, p, j, radius);
            CHECK(std::abs(sum_of(terms)) <= 1e-6 * scale);
        }
        const auto j01 = weakform_terms_offdiag(v, p, 0, 1, radius);
        CHECK(std::abs(sum_of(j01)) <= 1e-6 * scale);
        const auto j12 = weakform_terms_offdiag(v, p, 1, 2, radius);
        CHECK(std::abs(sum_of(j12)) <= 1e-6 * scale);
    }
    const double r_big = 1.5 * support_radius(v);
    if (2.0 * r_big <= 0.45 * grid3.length()) {
        const MomentumTensor m = momentum_tensor(v);
        const auto terms = weakform_terms_diag(v, p, 1, r_big);
        CHECK(std::abs(terms[0] - m.at(1, 1)) < 1e-6 * std::max(1.0, scale));
    }
}
