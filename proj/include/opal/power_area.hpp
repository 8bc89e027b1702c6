#pragma once

#include <vector>

#include "opal/config.hpp"

namespace opal {

/// Average static power of one voltage-divider HS-DAC over a uniform code
/// distribution:
///   (vddh^2 / r_hs) * sum_{k=1}^{2^B-1} (k-1)(2^B-k) / (2^B (2^B-1)^2).
/// The 2^B code-count divisor is fixed by the brute-force divider-state
/// enumeration (the published prefactor is off by 2 from its own quoted
/// milliwatt figure).
double hs_dac_static_power(int bits, double r_hs_ohm, double vddh_v);

/// R-2R ladder static power via the node-equivalent recursion
/// R_p = R_{p-1} || 2R_U + R_U (R_1 = inf) and the KVL superposition
/// V_{k,p}/V = sum_q y_k<B-q> * min(G_p, G_q) / 2^(p+q-1).
struct R2rPowerDetail {
    double total_w = 0.0;             // published normalization: sum over the
                                      // 2^B code states of the per-code power
    double code_average_w = 0.0;      // total / 2^B
    std::vector<double> per_code_w;   // physical dissipation per code state
};
R2rPowerDetail r2r_static_power_detail(int bits, double r_u_ohm, double vddh_v);

/// The scalar used in the system budget (R2rPowerDetail::total_w).
double r2r_static_power(int bits, double r_u_ohm, double vddh_v);

/// Laser injection power against two modulator DR losses, one detector DR
/// loss, and log2(d) splitter stages of excess loss; the 1/d power split
/// and the d-wavelength aggregation cancel.
struct LaserBudget {
    double per_lambda_w = 0.0;
    double total_w = 0.0;
};
LaserBudget laser_power(const AccelConfig& cfg);

/// Tungsten-heater budget: d(1+d) ring tuning ranges shared per row plus d
/// racetrack detectors, one WDM spacing (= FSR/d) each.
double heater_power(int d, double heater_unit_w);

/// Full SoC power: laser + heater + per-row electronics + d^2 weight DACs.
double soc_power(const AccelConfig& cfg);

/// Layout model: d^2 weight cells, d rows of converters and detector, and
/// the log2(d)-stage splitter tree, with two fitted overhead constants.
double area_mm2(const AccelConfig& cfg);

/// One performance-table row.
struct PerfReport {
    int d = 0;
    double laser_w = 0.0;
    double heater_w = 0.0;
    double soc_w = 0.0;
    double area_mm2 = 0.0;
    double throughput_mac_s = 0.0;
    double density_tmac_s_mm2 = 0.0;
    double energy_fj_mac = 0.0;
};
PerfReport perf_report(const AccelConfig& cfg);

}  // namespace opal
