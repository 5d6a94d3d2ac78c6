#include "liouville/mhd.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

#include <json.hpp>

#include "liouville/spectral.hpp"
#include "liouville/weakform.hpp"

namespace liouville {

namespace {

void check_state(const MHDState& state) {
    if (!(state.v.grid() == state.b.grid())) {
        throw std::invalid_argument("MHDState: v and b must share one grid");
    }
}

// Upper triangle of v (x) v - b (x) b.
std::vector<ScalarField> stress_upper(const MHDState& state) {
    const Grid& grid = state.v.grid();
    std::vector<ScalarField> w;
    for (int j = 0; j < grid.dims(); ++j) {
        for (int k = j; k < grid.dims(); ++k) {
            ScalarField wjk(grid);
            const auto& vj = state.v.comp(j);
            const auto& vk = state.v.comp(k);
            const auto& bj = state.b.comp(j);
            const auto& bk = state.b.comp(k);
            for (std::size_t i = 0; i < wjk.size(); ++i) {
                wjk[i] = vj[i] * vk[i] - bj[i] * bk[i];
            }
            w.push_back(std::move(wjk));
        }
    }
    return w;
}

ScalarField magnetic_energy_density(const VectorField& b) {
    ScalarField half_b2(b.grid());
    for (std::size_t i = 0; i < half_b2.size(); ++i) {
        double sq = 0.0;
        for (int d = 0; d < b.dims(); ++d) sq += b.comp(d)[i] * b.comp(d)[i];
        half_b2[i] = 0.5 * sq;
    }
    return half_b2;
}

// The spectral head pressure is mean-free; it sits -PV_P/L^N below the
// continuum field with PV_P = -(tr M_v - tr M_b)/N.
double head_background(const MHDState& state) {
    const Grid& grid = state.v.grid();
    double volume = 1.0;
    for (int d = 0; d < grid.dims(); ++d) volume *= grid.length();
    const double pv_head =
        -(momentum_tensor(state.v).trace() - momentum_tensor(state.b).trace()) / grid.dims();
    return -pv_head / volume;
}

double component_residual_at(const MHDState& state, const ScalarField& head,
                             double background, int j, double radius) {
    const Grid& grid = state.v.grid();
    double sum = 0.0, carry = 0.0;
    for_each_point(grid, [&](std::size_t idx, const std::array<double, 3>& x) {
        const CutoffDerivs c = cutoff_derivs(x, radius, grid.dims());
        if (c.sigma == 0.0) return;
        const double vj = state.v.comp(j)[idx];
        const double bj = state.b.comp(j)[idx];
        const double y = (-vj * vj + bj * bj - (head[idx] - background)) * c.sigma - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    });
    return grid.cell_volume() * sum;
}

double extrapolate_r2(const std::vector<double>& radii, const std::vector<double>& values) {
    // least-squares fit c + a / R^2, returns c
    double s11 = 0.0, s1x = 0.0, sxx = 0.0, s1y = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const double x = 1.0 / (radii[i] * radii[i]);
        s11 += 1.0;
        s1x += x;
        sxx += x * x;
        s1y += values[i];
        sxy += x * values[i];
    }
    const double det = s11 * sxx - s1x * s1x;
    if (det == 0.0) return values.back();
    return (sxx * s1y - s1x * sxy) / det;
}

std::vector<double> residual_radii(const Grid& grid) {
    const double r_hi = max_cutoff_radius(grid) / 1.02;
    const double r_lo = 0.55 * r_hi;
    return {r_lo, r_lo * std::pow(r_hi / r_lo, 1.0 / 3.0),
            r_lo * std::pow(r_hi / r_lo, 2.0 / 3.0), r_hi};
}

}  // namespace

SpectralField mhd_head_pressure_spectral(const MHDState& state) {
    check_state(state);
    return pressure_from_stress_upper(state.v.grid(), stress_upper(state));
}

ScalarField mhd_pressure(const MHDState& state) {
    check_state(state);
    const double bound = state.v.grid().length() / 3.0;
    const double outside = std::max(exterior_fraction(state.v, bound),
                                    exterior_fraction(state.b, bound));
    if (outside > kSupportWarnTol) {
        std::cerr << "mhd_pressure: fields not supported inside radius L/3 "
                  << "(exterior fraction " << outside
                  << "); periodization error may dominate\n";
    }
    const ScalarField head = from_spectral(mhd_head_pressure_spectral(state));
    const ScalarField half_b2 = magnetic_energy_density(state.b);
    ScalarField p(state.v.grid());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = head[i] - half_b2[i];
    return p;
}

double mhd_component_identity(const MHDState& state, int j, double radius) {
    check_state(state);
    if (j < 0 || j >= state.v.dims()) throw std::invalid_argument("mhd_component_identity: bad axis");
    const ScalarField head = from_spectral(mhd_head_pressure_spectral(state));
    return component_residual_at(state, head, head_background(state), j, radius);
}

double mhd_component_residual(const MHDState& state, int j) {
    check_state(state);
    const ScalarField head = from_spectral(mhd_head_pressure_spectral(state));
    const double background = head_background(state);
    const std::vector<double> radii = residual_radii(state.v.grid());
    std::vector<double> values;
    for (double r : radii) values.push_back(component_residual_at(state, head, background, j, r));
    return extrapolate_r2(radii, values);
}

MHDVerdict mhd_classify(const MHDState& state) {
    check_state(state);
    const Grid& grid = state.v.grid();
    const int dims = grid.dims();
    MHDVerdict verdict;
    verdict.v_l2 = l2_norm(state.v);
    verdict.b_l2 = l2_norm(state.b);

    const MomentumTensor mv = momentum_tensor(state.v);
    const MomentumTensor mb = momentum_tensor(state.b);
    const double b_energy2 = mb.trace();  // integral |b|^2

    const SpectralField head_hat = mhd_head_pressure_spectral(state);
    const ScalarField head = from_spectral(head_hat);

    double core = std::max(support_radius(state.v), support_radius(state.b));
    const bool zero_state = verdict.v_l2 <= 1e-300 && verdict.b_l2 <= 1e-300;
    if (zero_state) {
        verdict.l1_class = L1Class::integrable;
        verdict.component_residuals.assign(static_cast<std::size_t>(dims), 0.0);
        return verdict;
    }

    MomentumTensor stress(dims);  // tensor sourcing the head pressure
    for (int j = 0; j < dims; ++j) {
        for (int k = 0; k < dims; ++k) stress.at(j, k) = mv.at(j, k) - mb.at(j, k);
    }
    const L1Report l1 = l1_diagnostic(head_hat, head, core, &stress);
    verdict.l1_class = l1.classification;
    // PV of p: PV of the head part minus the (absolutely convergent)
    // magnetic correction 1/2 integral |b|^2.
    verdict.pressure_integral = l1.pv_estimate - 0.5 * b_energy2;

    verdict.sum_identity_residual = mv.trace() + 0.5 * (dims - 2) * b_energy2 +
                                    dims * verdict.pressure_integral;

    const double background = head_background(state);
    const std::vector<double> radii = residual_radii(grid);
    for (int j = 0; j < dims; ++j) {
        std::vector<double> values;
        for (double r : radii) {
            values.push_back(component_residual_at(state, head, background, j, r));
        }
        verdict.component_residuals.push_back(extrapolate_r2(radii, values));
    }

    if (dims == 2) {
        verdict.b_equipartition_defect = std::abs(mb.at(0, 0) - mb.at(1, 1));
    }

    const double box_scale = std::pow(grid.length(), dims / 2.0);
    const bool v_zero = verdict.v_l2 <= 1e-8 * box_scale;
    verdict.heat_equation_regime = v_zero && verdict.b_l2 > 1e-8 * box_scale;

    if (verdict.l1_class == L1Class::integrable && verdict.pressure_integral >= 1e-6) {
        const double eps = 1e-6;
        const double scale_b = std::max(b_energy2, 1e-300);
        if (dims >= 3) {
            if (verdict.v_l2 + verdict.b_l2 > eps) verdict.falsification = true;
        } else {
            if (verdict.v_l2 > eps || verdict.b_equipartition_defect > eps * scale_b) {
                verdict.falsification = true;
            }
        }
    }
    return verdict;
}

std::string mhd_verdict_to_json(const MHDVerdict& verdict) {
    nlohmann::json j;
    j["pressure_integral"] = verdict.pressure_integral;
    j["sum_identity_residual"] = verdict.sum_identity_residual;
    j["component_residuals"] = verdict.component_residuals;
    j["b_equipartition_defect"] = verdict.b_equipartition_defect;
    j["l1_class"] = to_string(verdict.l1_class);
    j["falsification"] = verdict.falsification;
    j["heat_equation_regime"] = verdict.heat_equation_regime;
    j["v_l2"] = verdict.v_l2;
    j["b_l2"] = verdict.b_l2;
    return j.dump(2);
}

}  // namespace liouville
