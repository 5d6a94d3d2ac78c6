#include "liouville/identity.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "liouville/spectral.hpp"

namespace liouville {

double ComponentEnergies::total() const {
    double t = 0.0;
    for (double x : e) t += x;
    return t;
}

ComponentEnergies component_energies(const VectorField& v) {
    ComponentEnergies out;
    for (int j = 0; j < v.dims(); ++j) out.e.push_back(0.5 * inner(v.comp(j), v.comp(j)));
    return out;
}

std::string to_string(LiouvilleCase c) {
    switch (c) {
        case LiouvilleCase::trivial_forced: return "trivial_forced";
        case LiouvilleCase::equipartition_case: return "equipartition_case";
        case LiouvilleCase::not_L1: return "not_L1";
        case LiouvilleCase::undetermined: return "undetermined";
    }
    return "?";
}

LiouvilleVerdict classify_state(const VectorField& v) {
    const Grid& grid = v.grid();
    LiouvilleVerdict verdict;
    verdict.velocity_l2 = l2_norm(v);

    const double vmax = max_abs(v);
    if (vmax > 0.0) {
        const double div_max = max_abs(divergence(v));
        if (div_max > 1e-6 * vmax / grid.spacing()) {
            throw std::invalid_argument("classify_state: input is not divergence-free");
        }
    }

    const double box_scale = std::pow(grid.length(), grid.dims() / 2.0);
    if (verdict.velocity_l2 <= 1e-300) {
        verdict.l1_class = L1Class::integrable;
        verdict.verdict_case = LiouvilleCase::trivial_forced;
        return verdict;
    }

    const MomentumTensor m = momentum_tensor(v);
    verdict.trace_m = m.trace();
    verdict.cross_defect = m.max_offdiag();

    const SpectralField phat = pressure_spectral(v);
    const ScalarField p = from_spectral(phat);
    const double core = support_radius(v);
    const L1Report l1 = l1_diagnostic(phat, p, core, &m);
    verdict.l1_class = l1.classification;
    verdict.pressure_integral = l1.pv_estimate;

    const ComponentEnergies energies = component_energies(v);
    double defect = 0.0;
    for (double ej : energies.e) {
        defect = std::max(defect, std::abs(ej + 0.5 * verdict.pressure_integral));
    }
    verdict.equipartition_defect = defect;

    switch (l1.classification) {
        case L1Class::integrable:
            if (verdict.pressure_integral >= 0.0) {
                verdict.verdict_case = LiouvilleCase::trivial_forced;
                // No nontrivial state can land here; one that does would
                // contradict the triviality statement.
                if (verdict.pressure_integral >= 1e-6 &&
                    verdict.velocity_l2 > std::max(1e-6, kZeroVelocityTol * box_scale)) {
                    verdict.falsification = true;
                }
            } else {
                verdict.verdict_case = LiouvilleCase::equipartition_case;
            }
            break;
        case L1Class::log_divergent:
            verdict.verdict_case = LiouvilleCase::not_L1;
            break;
        case L1Class::undetermined:
            verdict.verdict_case = LiouvilleCase::undetermined;
            break;
    }
    return verdict;
}

std::string verdict_to_json(const LiouvilleVerdict& verdict) {
    nlohmann::json j;
    j["l1_class"] = to_string(verdict.l1_class);
    j["pressure_integral"] = verdict.pressure_integral;
    j["case"] = to_string(verdict.verdict_case);
    j["equipartition_defect"] = verdict.equipartition_defect;
    j["cross_defect"] = verdict.cross_defect;
    j["falsification"] = verdict.falsification;
    j["velocity_l2"] = verdict.velocity_l2;
    j["trace_m"] = verdict.trace_m;
    return j.dump(2);
}

std::vector<double> hardy_default_scales(const Grid& grid) {
    std::vector<double> scales;
    const double top = grid.length() / 4.0;
    for (double t = 2.0 * grid.spacing(); t <= top * (1.0 + 1e-12); t *= 2.0) {
        scales.push_back(t);
    }
    return scales;
}

HardyReport hardy_norm_estimate(const ScalarField& f, const std::vector<double>& scales) {
    const Grid& grid = f.grid();
    if (scales.size() < 2) throw std::invalid_argument("hardy_norm_estimate: need >= 2 scales");
    const double lo = 2.0 * grid.spacing() * (1.0 - 1e-9);
    const double hi = grid.length() / 4.0 * (1.0 + 1e-9);
    for (std::size_t i = 0; i < scales.size(); ++i) {
        if (scales[i] < lo || scales[i] > hi) {
            throw std::invalid_argument("hardy_norm_estimate: scale outside [2h, L/4]");
        }
        if (i > 0 && scales[i] <= scales[i - 1]) {
            throw std::invalid_argument("hardy_norm_estimate: scales must increase");
        }
    }

    HardyReport report;
    report.mean = integrate(f);

    const SpectralField fhat = to_spectral(f);
    ScalarField maximal(grid);  // running max over scales of |f * phi_t|
    for (double t : scales) {
        SpectralField ghat = fhat;
        // phi = unit-mass Gaussian; phi_t has transform e^{-t^2 |k|^2 / 4}
        for_each_mode(ghat, [&](std::size_t idx, const std::array<double, 3>& k) {
            const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
            ghat[idx] *= std::exp(-0.25 * t * t * k2);
        });
        const ScalarField g = from_spectral(ghat);
        for (std::size_t i = 0; i < maximal.size(); ++i) {
            maximal[i] = std::max(maximal[i], std::abs(g[i]));
        }
        report.proxy_by_scale.push_back(integrate(maximal));
    }
    report.norm_proxy = report.proxy_by_scale.back();

    const std::size_t n = report.proxy_by_scale.size();
    if (n >= 3) {
        const double dp = report.proxy_by_scale[n - 1] - report.proxy_by_scale[n - 3];
        const double dl = std::log(scales[n - 1]) - std::log(scales[n - 3]);
        const double ref = std::max(report.norm_proxy, 1e-300);
        report.slope = dp / dl / ref;

        const double inc_last = report.proxy_by_scale[n - 1] - report.proxy_by_scale[n - 2];
        const double inc_prev = report.proxy_by_scale[n - 2] - report.proxy_by_scale[n - 3];
        const bool decaying = inc_last <= inc_prev / 1.4 + 1e-14 * ref;
        report.stable = decaying || report.slope < kHardySlopeTol;
    }
    return report;
}

}  // namespace liouville
