#pragma once

#include <vector>

#include "opal/dispersion.hpp"

namespace opal {

/// The d-wavelength comb grid shared by one racetrack photodetector.
/// Wavelengths ascend, resonance modes descend, and every (lambda, mode)
/// pair satisfies lambda = n_eff(lambda) * L / m for the common perimeter.
struct WavelengthPlan {
    int d = 0;
    std::vector<double> lambdas_nm;   // strictly increasing
    std::vector<double> spacings_nm;  // FSR-derived WDM isolation per channel
    std::vector<long> rtr_modes;      // strictly decreasing, consecutive
    double rtr_perimeter_um = 0.0;
};

/// Solve the comb grid for d channels below lambda_max.
///
/// The perimeter is anchored mid-band: L = lambda_eff^2 / (n_g * dlam) with
/// lambda_eff = lambda_max - (d-1)/2 * dlam, the anchor mode is
/// round(n_eff(lambda_max) * L / lambda_max), and the remaining channels
/// follow consecutive modes solved by fixed-point iteration of the
/// resonance condition (|dlambda| < 1e-6 nm, 100 steps).
WavelengthPlan plan_wavelengths(int d, double lambda_max_nm, double delta_target_nm,
                                const DispersionModel& disp);

/// Ring modulator geometry for one comb channel.
struct MrmGeometry {
    double radius_um = 0.0;
    long mode = 0;
    double resonance_nm = 0.0;
    double fsr_nm = 0.0;
};

/// Direct resonance-condition geometry for a chosen mode integer:
/// r = lambda * m / (2*pi*n_eff(lambda)).
MrmGeometry mrm_geometry_for_mode(double lambda_nm, long mode, const DispersionModel& disp);

/// Largest ring (largest mode) whose FSR still covers the plan's total WDM
/// band. Throws std::domain_error when no positive mode fits.
MrmGeometry solve_mrm_radius(double lambda_nm, const WavelengthPlan& plan,
                             const DispersionModel& disp);

/// Racetrack: two half-circles of bend_radius plus two straights.
struct RtrGeometry {
    double bend_radius_um = 0.0;
    double straight_um = 0.0;
    double perimeter_um = 0.0;
};

/// Split a perimeter into bend + straight sections. Throws
/// std::invalid_argument when the straights would be non-positive.
RtrGeometry rtr_geometry(double perimeter_um, double bend_radius_um);

}  // namespace opal
