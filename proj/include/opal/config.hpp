#pragma once

#include <string>

#include "opal/analog_frontend.hpp"

namespace opal {

/// Every electrical/optical constant of the accelerator model. Defaults
/// reproduce the catalogued 4-bit, 2 GHz design point; all fields can be
/// overridden from a JSON config file (see load_config).
struct AccelConfig {
    int d = 32;                       // vector dimension (power of two for splitter staging)
    int bits = 4;                     // data precision B
    double f_clk_hz = 2e9;

    // supplies and DAC resistances
    double vddh_v = 2.4;
    double vdd_v = 1.2;
    double r_hs_ohm = 2000.0;
    double r_u_ohm = 5e6;

    // optical budget
    double dr_eo_w = 670e-6;          // O/E dynamic range at the photodetector
    double responsivity_a_per_w = 0.5;
    double splitter_loss_db = 0.07;   // excess loss per Y-junction stage
    double mrm_dr_db = 2.5;
    double rtr_dr_db = 2.5;

    // ring transfer model
    double q_factor = 10000.0;
    double shift_rate_nm_per_v = 0.04;

    // thermal tuning
    double heater_unit_w = 2.4e-3;    // per FSR of tuning range

    // per-row electrical blocks (hs_dac_dyn is quoted at 2 GS/s and scales
    // linearly with f_clk)
    double hs_dac_dyn_w = 0.2e-3;
    double tia_w = 0.1e-3;
    double s2d_w = 0.75e-3;
    double adc_w = 1.2e-3;
    double per_row_overhead_w = 0.641845e-3;  // clock/digital residual, fitted

    // layout tiles (um^2)
    double tile_hs_dac_um2 = 1000.0;   // 50 x 20
    double tile_r2r_um2 = 200.0;       // 20 x 10
    double tile_mrm_um2 = 400.0;       // 20 x 20
    double tile_rtr_pd_um2 = 9600.0;   // 480 x 20
    double splitter_pitch_um = 35.0;   // per O-PS stage
    double row_height_um = 20.0;
    double per_cell_overhead_um2 = 297.4061;  // fitted residual per weight cell
    double per_row_fixed_um2 = -7584.3107;    // fitted residual per row

    // receive chain
    TiaModel tia{};
    AmpModel amp{};
    double adc_full_scale_v = 1.0;

    AdcModel adc_model() const { return AdcModel{bits, adc_full_scale_v, f_clk_hz}; }
};

/// Parse a JSON config file. Unknown keys are rejected; missing keys keep
/// their defaults. Keys are the field names above (units in the suffix).
AccelConfig load_config(const std::string& path);
AccelConfig parse_config_json(const std::string& text);

/// Validation shared by the CLI and the models: throws
/// std::invalid_argument on non-positive constants, bits < 1, d < 1, or a
/// non-power-of-two d.
void validate(const AccelConfig& cfg);

bool is_power_of_two(int v);

}  // namespace opal
