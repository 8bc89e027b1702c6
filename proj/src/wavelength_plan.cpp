#include "opal/wavelength_plan.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace opal {

namespace {

constexpr double kTolNm = 1e-6;
constexpr int kMaxIter = 100;

// Resonance condition lambda = n_eff(lambda) * L / m by fixed-point
// iteration; the map contracts with factor |a1*L/m| << 1 for these combs.
double solve_resonance(double l_rtr_nm, long mode, const DispersionModel& disp, double guess_nm) {
    double lam = guess_nm;
    for (int it = 0; it < kMaxIter; ++it) {
        const double next = disp.n_eff(lam) * l_rtr_nm / static_cast<double>(mode);
        if (std::abs(next - lam) < kTolNm) return next;
        lam = next;
    }
    throw std::domain_error("resonance fixed-point iteration did not converge");
}

}  // namespace

WavelengthPlan plan_wavelengths(int d, double lambda_max_nm, double delta_target_nm,
                                const DispersionModel& disp) {
    if (d < 1) throw std::invalid_argument("plan_wavelengths: d must be >= 1");
    if (lambda_max_nm <= 0.0 || delta_target_nm <= 0.0)
        throw std::invalid_argument("plan_wavelengths: lambda_max and spacing must be positive");
    if ((d - 1) * delta_target_nm >= lambda_max_nm)
        throw std::invalid_argument("plan_wavelengths: grid exits the band below lambda_max");

    // Perimeter from the FSR condition at the band midpoint, so the target
    // spacing is met on average across the comb rather than at one edge.
    const double lambda_eff = lambda_max_nm - 0.5 * (d - 1) * delta_target_nm;
    const double l_rtr_nm = lambda_eff * lambda_eff / (disp.n_g(lambda_eff) * delta_target_nm);

    const long anchor =
        std::lround(disp.n_eff(lambda_max_nm) * l_rtr_nm / lambda_max_nm);
    if (anchor < 1) throw std::domain_error("plan_wavelengths: anchor mode underflow");

    WavelengthPlan plan;
    plan.d = d;
    plan.rtr_perimeter_um = l_rtr_nm * 1e-3;
    plan.lambdas_nm.resize(d);
    plan.spacings_nm.resize(d);
    plan.rtr_modes.resize(d);

    double guess = lambda_max_nm;
    for (int j = 0; j < d; ++j) {
        const long mode = anchor + j;  // higher mode -> shorter wavelength
        const double lam = solve_resonance(l_rtr_nm, mode, disp, guess);
        const int idx = d - 1 - j;  // store ascending in wavelength
        plan.lambdas_nm[idx] = lam;
        plan.rtr_modes[idx] = mode;
        plan.spacings_nm[idx] = lam * lam / (disp.n_g(lam) * l_rtr_nm);
        guess = lam;
    }

    for (int j = 1; j < d; ++j) {
        if (!(plan.lambdas_nm[j] > plan.lambdas_nm[j - 1]))
            throw std::domain_error("plan_wavelengths: wavelengths not strictly increasing");
        if (plan.rtr_modes[j] >= plan.rtr_modes[j - 1])
            throw std::domain_error("plan_wavelengths: duplicate resonance modes");
    }
    const double lo = std::min(plan.lambdas_nm.front(), plan.lambdas_nm.back());
    if (disp.n_g(lo) <= disp.n_eff(lo))
        throw std::domain_error("plan_wavelengths: dispersion invalid over the band");
    return plan;
}

MrmGeometry mrm_geometry_for_mode(double lambda_nm, long mode, const DispersionModel& disp) {
    if (mode < 1) throw std::invalid_argument("mrm_geometry_for_mode: mode must be >= 1");
    MrmGeometry g;
    g.mode = mode;
    g.resonance_nm = lambda_nm;
    const double r_nm =
        lambda_nm * static_cast<double>(mode) / (2.0 * std::numbers::pi * disp.n_eff(lambda_nm));
    g.radius_um = r_nm * 1e-3;
    g.fsr_nm = lambda_nm * lambda_nm / (disp.n_g(lambda_nm) * 2.0 * std::numbers::pi * r_nm);
    return g;
}

MrmGeometry solve_mrm_radius(double lambda_nm, const WavelengthPlan& plan,
                             const DispersionModel& disp) {
    bool member = false;
    for (double l : plan.lambdas_nm)
        if (std::abs(l - lambda_nm) < 1e-9) member = true;
    if (!member)
        throw std::invalid_argument("solve_mrm_radius: wavelength not in plan");

    double band = 0.0;
    for (double s : plan.spacings_nm) band += s;

    // FSR >= total band caps the radius; take the largest mode under the cap.
    const double bound_nm =
        lambda_nm * lambda_nm / (disp.n_g(lambda_nm) * 2.0 * std::numbers::pi * band);
    const double per_mode_nm = lambda_nm / (2.0 * std::numbers::pi * disp.n_eff(lambda_nm));
    const long mode = static_cast<long>(std::floor(bound_nm / per_mode_nm + 1e-12));
    if (mode < 1) throw std::domain_error("solve_mrm_radius: no mode satisfies the FSR bound");
    return mrm_geometry_for_mode(lambda_nm, mode, disp);
}

RtrGeometry rtr_geometry(double perimeter_um, double bend_radius_um) {
    RtrGeometry g;
    g.bend_radius_um = bend_radius_um;
    g.perimeter_um = perimeter_um;
    g.straight_um = 0.5 * (perimeter_um - 2.0 * std::numbers::pi * bend_radius_um);
    if (!(g.straight_um > 0.0))
        throw std::invalid_argument("rtr_geometry: perimeter leaves no straight section");
    return g;
}

}  // namespace opal
