#include <doctest.h>

#include <cmath>

#include "liouville/generate.hpp"
#include "liouville/grid.hpp"
#include "liouville/riesz.hpp"
#include "liouville/rng.hpp"
#include "liouville/spectral.hpp"
#include "liouville/weakform.hpp"
#include "oracle.hpp"

using namespace liouville;

namespace {

const Grid kGrid2(2, 256, 16.0);

VectorField radial_anchor() {
    GeneratorSpec spec;  // psi = e^{-|x|^2}
    return gen_divfree(spec, kGrid2);
}

VectorField aniso_anchor() {
    GeneratorSpec spec;  // psi = x1 e^{-|x|^2}
    spec.shape = "x1";
    return gen_divfree(spec, kGrid2);
}

std::array<double, 3> direction2d(double angle) {
    return {std::cos(angle), std::sin(angle), 0.0};
}

}  // namespace

TEST_CASE("momentum tensor: Gaussian moment anchors") {
    // oracle: adaptive quadrature of the closed-form integrands
    const double m11_radial = oracle::integrate2d(
        [](double x, double y) { return 4.0 * y * y * std::exp(-2.0 * (x * x + y * y)); }, 8.0);
    CHECK(m11_radial == doctest::Approx(M_PI / 2.0).epsilon(1e-10));

    const MomentumTensor mr = momentum_tensor(radial_anchor());
    CHECK(mr.at(0, 0) == doctest::Approx(M_PI / 2.0).epsilon(1e-10));
    CHECK(mr.at(1, 1) == doctest::Approx(M_PI / 2.0).epsilon(1e-10));
    CHECK(std::abs(mr.at(0, 1)) < 1e-12);
    CHECK(mr.trace() == doctest::Approx(M_PI).epsilon(1e-10));

    const double m11_aniso = oracle::integrate2d(
        [](double x, double y) {
            return 4.0 * x * x * y * y * std::exp(-2.0 * (x * x + y * y));
        },
        8.0);
    const double m22_aniso = oracle::integrate2d(
        [](double x, double y) {
            const double g = (1.0 - 2.0 * x * x);
            return g * g * std::exp(-2.0 * (x * x + y * y));
        },
        8.0);
    CHECK(m11_aniso == doctest::Approx(M_PI / 8.0).epsilon(1e-9));
    CHECK(m22_aniso == doctest::Approx(3.0 * M_PI / 8.0).epsilon(1e-9));

    const MomentumTensor ma = momentum_tensor(aniso_anchor());
    CHECK(ma.at(0, 0) == doctest::Approx(M_PI / 8.0).epsilon(1e-10));
    CHECK(ma.at(1, 1) == doctest::Approx(3.0 * M_PI / 8.0).epsilon(1e-10));
    CHECK(std::abs(ma.at(0, 1)) < 1e-12);

    const MomentumTensor mz = momentum_tensor(VectorField(kGrid2));
    CHECK(mz.trace() == 0.0);
    CHECK(mz.max_offdiag() == 0.0);
}

TEST_CASE("momentum tensor equals the stress transform at zero frequency") {
    const VectorField v = aniso_anchor();
    const MomentumTensor m = momentum_tensor(v);
    for (int j = 0; j < 2; ++j) {
        for (int k = j; k < 2; ++k) {
            ScalarField w(kGrid2);
            for (std::size_t i = 0; i < w.size(); ++i) w[i] = v.comp(j)[i] * v.comp(k)[i];
            const auto w0 = nudft(w, {0.0, 0.0, 0.0});
            CHECK(std::abs(w0.real() - m.at(j, k)) < 1e-12);
        }
    }
}

TEST_CASE("pressure of the zero field is zero") {
    const ScalarField p = compute_pressure(VectorField(kGrid2));
    CHECK(max_abs(p) == 0.0);
}

TEST_CASE("pressure of the radial anchor is radially symmetric") {
    const ScalarField p = compute_pressure(radial_anchor());
    const std::size_t n = static_cast<std::size_t>(kGrid2.n());
    // 90-degree rotation permutes the centered grid onto itself
    double asym = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t rotated = ((n - j) % n) * n + i;
            asym = std::max(asym, std::abs(p[i * n + j] - p[rotated]));
        }
    }
    CHECK(asym < 1e-10 * max_abs(p));

    // for this stream function the pressure has the closed form -e^{-2|x|^2};
    // the box field is mean-free, so it sits (pi/2)/L^2 above it
    const double L2 = kGrid2.length() * kGrid2.length();
    const double shift = (M_PI / 2.0) / L2;
    double err = 0.0;
    for_each_point(kGrid2, [&](std::size_t idx, const std::array<double, 3>& x) {
        const double want = -std::exp(-2.0 * (x[0] * x[0] + x[1] * x[1])) + shift;
        err = std::max(err, std::abs(p[idx] - want));
    });
    CHECK(err < 1e-12);
}

TEST_CASE("discrete trace identity |k|^2 phat = -sum k_j k_k What_jk") {
    const VectorField v = aniso_anchor();
    const SpectralField phat = pressure_spectral(v);
    std::array<SpectralField, 3> what{SpectralField(kGrid2), SpectralField(kGrid2),
                                      SpectralField(kGrid2)};
    int c = 0;
    for (int j = 0; j < 2; ++j) {
        for (int k = j; k < 2; ++k, ++c) {
            ScalarField w(kGrid2);
            for (std::size_t i = 0; i < w.size(); ++i) w[i] = v.comp(j)[i] * v.comp(k)[i];
            what[static_cast<std::size_t>(c)] = to_spectral(w);
        }
    }
    double worst = 0.0;
    double scale = 0.0;
    for_each_mode(phat, [&](std::size_t idx, const std::array<double, 3>& k) {
        const double k2 = k[0] * k[0] + k[1] * k[1];
        if (k2 == 0.0) return;
        const std::complex<double> contraction = k[0] * k[0] * what[0][idx] +
                                                 2.0 * k[0] * k[1] * what[1][idx] +
                                                 k[1] * k[1] * what[2][idx];
        worst = std::max(worst, std::abs(k2 * phat[idx] + contraction));
        scale = std::max(scale, std::abs(contraction));
    });
    CHECK(worst < 1e-12 * scale);
}

TEST_CASE("weak identity -int p lap(psi) = sum int v^j v^k d_j d_k psi") {
    // psi = x1 x2 sigma_R with R = L/6, both sides by quadrature
    const double radius = kGrid2.length() / 6.0;
    for (const VectorField& v : {radial_anchor(), aniso_anchor()}) {
        const ScalarField p = compute_pressure(v);
        double lhs_acc = 0.0, rhs_acc = 0.0;
        for_each_point(kGrid2, [&](std::size_t idx, const std::array<double, 3>& x) {
            const CutoffDerivs cd = cutoff_derivs(x, radius, 2);
            const double lap_psi = 2.0 * x[1] * cd.grad[0] + 2.0 * x[0] * cd.grad[1] +
                                   x[0] * x[1] * cd.lap;
            lhs_acc += -p[idx] * lap_psi;
            const double d11 = 2.0 * x[1] * cd.grad[0] + x[0] * x[1] * cd.hess[0][0];
            const double d22 = 2.0 * x[0] * cd.grad[1] + x[0] * x[1] * cd.hess[1][1];
            const double d12 = cd.sigma + x[0] * cd.grad[0] + x[1] * cd.grad[1] +
                               x[0] * x[1] * cd.hess[0][1];
            const double v1 = v.comp(0)[idx];
            const double v2 = v.comp(1)[idx];
            rhs_acc += v1 * v1 * d11 + 2.0 * v1 * v2 * d12 + v2 * v2 * d22;
        });
        const double cell = kGrid2.cell_volume();
        CHECK(lhs_acc * cell == doctest::Approx(rhs_acc * cell).epsilon(1e-8).scale(1.0));
    }
}

TEST_CASE("directional pressure limits equal -e.M.e") {
    const VectorField vr = radial_anchor();
    const VectorField va = aniso_anchor();
    const MomentumTensor mr = momentum_tensor(vr);
    const MomentumTensor ma = momentum_tensor(va);

    CHECK(directional_pressure_limit(va, {1.0, 0.0, 0.0}) ==
          doctest::Approx(-M_PI / 8.0).epsilon(1e-4));
    CHECK(directional_pressure_limit(va, {0.0, 1.0, 0.0}) ==
          doctest::Approx(-3.0 * M_PI / 8.0).epsilon(1e-4));
    CHECK(directional_pressure_limit(vr, direction2d(0.7)) ==
          doctest::Approx(-M_PI / 2.0).epsilon(1e-4));

    Rng rng(123);
    for (int trial = 0; trial < 8; ++trial) {
        const auto e = direction2d(rng.uniform(0.0, 2.0 * M_PI));
        const double lim_r = directional_pressure_limit(vr, e);
        const double lim_a = directional_pressure_limit(va, e);
        CHECK(std::abs(lim_r + mr.quadratic_form(e)) < 1e-4);
        CHECK(std::abs(lim_a + ma.quadratic_form(e)) < 1e-4);
    }

    // and for a generic random field
    GeneratorSpec spec;
    spec.kind = GeneratorSpec::Kind::random_divfree;
    spec.seed = 64;
    spec.width = 0.85;
    const VectorField vg = gen_divfree(spec, kGrid2);
    const MomentumTensor mg = momentum_tensor(vg);
    for (int trial = 0; trial < 4; ++trial) {
        const auto e = direction2d(rng.uniform(0.0, 2.0 * M_PI));
        CHECK(std::abs(directional_pressure_limit(vg, e) + mg.quadratic_form(e)) < 1e-4);
    }
}

TEST_CASE("spherical mean of directional limits matches the PV estimate") {
    const VectorField v = aniso_anchor();
    const MomentumTensor m = momentum_tensor(v);
    double mean = 0.0;
    const int ndirs = 16;
    for (int i = 0; i < ndirs; ++i) {
        mean += directional_pressure_limit(v, direction2d(2.0 * M_PI * i / ndirs));
    }
    mean /= ndirs;
    CHECK(mean == doctest::Approx(-m.trace() / 2.0).epsilon(1e-6));

    const ScalarField p = compute_pressure(v);
    const L1Report l1 = l1_diagnostic(p, support_radius(v), &m);
    CHECK(std::abs(mean - l1.pv_estimate) < 1e-3);
}

TEST_CASE("L1 diagnostic: integrable/log-divergent dichotomy on the anchors") {
    const VectorField vr = radial_anchor();
    const ScalarField pr = compute_pressure(vr);
    const MomentumTensor mr = momentum_tensor(vr);
    const L1Report lr = l1_diagnostic(pr, support_radius(vr), &mr);
    CHECK(lr.classification == L1Class::integrable);
    CHECK(lr.pv_estimate == doctest::Approx(-M_PI / 2.0).epsilon(1e-3));

    const VectorField va = aniso_anchor();
    const ScalarField pa = compute_pressure(va);
    const MomentumTensor ma = momentum_tensor(va);
    const L1Report la = l1_diagnostic(pa, support_radius(va), &ma);
    CHECK(la.classification == L1Class::log_divergent);
    CHECK(std::abs(la.pv_estimate + M_PI / 4.0) < 1e-3);

    const L1Report lz = l1_diagnostic(ScalarField(kGrid2), 2.0);
    CHECK(lz.classification == L1Class::integrable);
    CHECK(lz.pv_estimate == 0.0);
}

TEST_CASE("PV estimate: oracle cross-check via -tr M / N") {
    for (std::uint64_t seed : {2ull, 31ull, 77ull}) {
        GeneratorSpec spec;
        spec.kind = GeneratorSpec::Kind::random_divfree;
        spec.seed = seed;
        spec.width = 0.85;
        const VectorField v = gen_divfree(spec, kGrid2);
        const MomentumTensor m = momentum_tensor(v);
        const ScalarField p = compute_pressure(v);
        const L1Report l1 = l1_diagnostic(p, support_radius(v), &m);
        CHECK(std::abs(l1.pv_estimate + m.trace() / 2.0) < 1e-3 * std::max(1.0, m.trace()));
    }
}

TEST_CASE("log slope separates the two anchor tails") {
    const VectorField vr = radial_anchor();
    const MomentumTensor mr0 = momentum_tensor(vr);
    const L1Report lr = l1_diagnostic(compute_pressure(vr), support_radius(vr), &mr0);
    const VectorField va = aniso_anchor();
    const MomentumTensor ma0 = momentum_tensor(va);
    const L1Report la = l1_diagnostic(compute_pressure(va), support_radius(va), &ma0);
    // cumulative integral of |p| against log R: flat for integrable tails,
    // strictly positive rate for the |x|^-N tail
    CHECK(std::abs(lr.log_slope) < 0.05 * la.log_slope);
    CHECK(la.log_slope > 0.0);
}

TEST_CASE("far-field analysis: exponent and tensor pattern") {
    const VectorField va = aniso_anchor();
    const MomentumTensor ma = momentum_tensor(va);
    const ScalarField pa = compute_pressure(va);
    const FarfieldReport fa = farfield_analysis(pa, ma, support_radius(va));
    CHECK(fa.status == FarfieldStatus::ok);
    CHECK(fa.exponent == doctest::Approx(-2.0).epsilon(0.05));
    CHECK(fa.pattern_valid);
    CHECK(fa.pattern_correlation >= 0.99);

    const VectorField vr = radial_anchor();
    const MomentumTensor mr = momentum_tensor(vr);
    const ScalarField prs = compute_pressure(vr);
    const FarfieldReport fr = farfield_analysis(prs, mr, support_radius(vr));
    CHECK(fr.status == FarfieldStatus::ok);
    CHECK(fr.exponent <= -3.0);
    CHECK_FALSE(fr.pattern_valid);  // isotropic M: predicted pattern vanishes

    const FarfieldReport fz = farfield_analysis(ScalarField(kGrid2), mr, 2.0);
    CHECK(fz.status == FarfieldStatus::undetermined);
}

TEST_CASE("isotropy of M decides integrability for the shipped families") {
    for (std::uint64_t seed : {5ull, 6ull}) {
        GeneratorSpec spec;  // radial profiles: exactly isotropic M
        spec.shape = "radial_poly";
        spec.seed = seed;
        spec.width = 0.9;
        const VectorField v = gen_divfree(spec, kGrid2);
        const MomentumTensor m = momentum_tensor(v);
        CHECK(m.deviatoric_norm() < 1e-10 * m.trace());
        const L1Report l1 = l1_diagnostic(compute_pressure(v), support_radius(v), &m);
        CHECK(l1.classification == L1Class::integrable);
    }
    for (std::uint64_t seed : {8ull, 9ull}) {
        GeneratorSpec spec;  // generic random fields: anisotropic M
        spec.kind = GeneratorSpec::Kind::random_divfree;
        spec.seed = seed;
        spec.width = 0.85;
        const VectorField v = gen_divfree(spec, kGrid2);
        const MomentumTensor m = momentum_tensor(v);
        const L1Report l1 = l1_diagnostic(compute_pressure(v), support_radius(v), &m);
        if (m.deviatoric_norm() > 1e-3 * m.trace()) {
            CHECK(l1.classification == L1Class::log_divergent);
        }
    }
}

TEST_CASE("too few usable annuli yields undetermined") {
    // a 16-point box leaves at most one annulus between the support radius
    // and the largest annulus that fits
    const Grid tiny(2, 16, 16.0);
    GeneratorSpec spec;
    const VectorField v = gen_divfree(spec, tiny);
    const ScalarField p = compute_pressure(v);
    const L1Report l1 = l1_diagnostic(p, support_radius(v));
    CHECK(l1.classification == L1Class::undetermined);
    CHECK(l1.radii.size() < 3);
}

TEST_CASE("momentum tensor is symmetric positive semidefinite") {
    for (std::uint64_t seed : {12ull, 55ull, 91ull}) {
        GeneratorSpec spec;
        spec.kind = GeneratorSpec::Kind::random_divfree;
        spec.seed = seed;
        spec.width = 0.85;
        const MomentumTensor m = momentum_tensor(gen_divfree(spec, kGrid2));
        CHECK(m.at(0, 1) == m.at(1, 0));
        CHECK(m.trace() >= 0.0);
        // 2x2 PSD: nonnegative trace and determinant
        const double det = m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0);
        CHECK(det >= -1e-12 * m.trace() * m.trace());
        // trace identity: tr M = 2 E
        GeneratorSpec again = spec;
        const VectorField v = gen_divfree(again, kGrid2);
        const double energy = 0.5 * (inner(v.comp(0), v.comp(0)) + inner(v.comp(1), v.comp(1)));
        CHECK(m.trace() == doctest::Approx(2.0 * energy).epsilon(1e-13));
    }
}

TEST_CASE("directional limits agree with the tensor in three dimensions") {
    Grid grid3(3, 64, 12.0);
    GeneratorSpec spec;
    spec.kind = GeneratorSpec::Kind::potential3d;
    spec.shape = "random";
    spec.seed = 23;
    spec.width = 0.7;
    const VectorField v = gen_divfree(spec, grid3);
    const MomentumTensor m = momentum_tensor(v);
    const std::array<double, 3> dirs[] = {
        {1.0, 0.0, 0.0},
        {0.0, 0.0, 1.0},
        {1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0)},
    };
    for (const auto& e : dirs) {
        CHECK(std::abs(directional_pressure_limit(v, e) + m.quadratic_form(e)) <
              1e-4 * std::max(1.0, m.trace()));
    }
}
