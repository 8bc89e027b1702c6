#pragma once

#include <optional>
#include <span>
#include <vector>

namespace opal {

/// Measured waveguide index data at one wavelength. n_g is optional; when
/// present it pins the group index of the fitted model.
struct DispersionSample {
    double lambda_nm = 0.0;
    double n_eff = 0.0;
    std::optional<double> n_g;
};

/// Affine effective-index model n_eff(lambda) = a0 + a1*lambda.
/// The group index n_g = n_eff - lambda * dn_eff/dlambda collapses to the
/// constant a0, so a1 < 0 is required for normal dispersion (n_g > n_eff).
struct DispersionModel {
    double a0 = 0.0;
    double a1 = 0.0;  // 1/nm

    double n_eff(double lambda_nm) const { return a0 + a1 * lambda_nm; }
    double n_g(double /*lambda_nm*/) const { return a0; }
};

/// Fit the affine model to index samples.
///
/// With group-index data present the n_g equations are treated as exact
/// (a0 = mean of the n_g samples) and a1 is the least-squares solution of
/// the remaining n_eff equations. Without n_g data the model is the plain
/// least-squares line through (lambda, n_eff), which interpolates two
/// samples exactly.
///
/// Throws std::invalid_argument for fewer than two samples, duplicate
/// wavelengths, or a fit with a1 >= 0.
DispersionModel calibrate_dispersion(std::span<const DispersionSample> samples);

/// Built-in index calibrations for the C-band design points used by the
/// `design` command. Each set reproduces one catalogued racetrack design
/// (perimeter, mode ladder and wavelength grid) when fed to
/// plan_wavelengths with the matching channel spacing.
const std::vector<DispersionSample>& cband_samples_half_nm();        // 0.5 nm grid, 1534.5-1550 nm
const std::vector<DispersionSample>& cband_samples_one_nm_wide();    // 1.0 nm grid, 1519-1550 nm
const std::vector<DispersionSample>& cband_samples_one_nm_narrow();  // 1.0 nm grid, 1535-1550 nm

/// Pick the built-in sample set matching a (d, channel spacing) design point.
const std::vector<DispersionSample>& default_dispersion_samples(int d, double delta_lambda_nm);

}  // namespace opal
