#include "opal/power_area.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace opal {

double hs_dac_static_power(int bits, double r_hs_ohm, double vddh_v) {
    if (bits < 1) throw std::invalid_argument("hs_dac_static_power: bits must be >= 1");
    const long n = 1L << bits;
    double sum = 0.0;
    for (long k = 1; k < n; ++k)
        sum += static_cast<double>(k - 1) * static_cast<double>(n - k);
    const double denom = static_cast<double>(n) * static_cast<double>(n - 1) *
                         static_cast<double>(n - 1);
    return vddh_v * vddh_v / r_hs_ohm * sum / denom;
}

R2rPowerDetail r2r_static_power_detail(int bits, double r_u_ohm, double vddh_v) {
    if (bits < 1) throw std::invalid_argument("r2r_static_power: bits must be >= 1");
    const int b = bits;

    // Numerators G_p of R_p = (G_p/H_p) R_U; the superposition kernel uses
    // min of the integer numerators. G_1=1 (R_1 = inf), then 3, 11, 43, ...
    std::vector<double> g(b);
    g[0] = 1.0;
    for (int p = 1; p < b; ++p) g[p] = 4.0 * g[p - 1] - 1.0;

    R2rPowerDetail out;
    const long codes = 1L << b;
    out.per_code_w.resize(codes, 0.0);
    double sum = 0.0;
    for (long k = 0; k < codes; ++k) {
        double s_k = 0.0;
        for (int p = 1; p <= b; ++p) {
            if (((k >> (b - p)) & 1L) == 0) continue;
            double v = 0.0;  // V_{k,p} / V_DDH
            for (int q = 1; q <= b; ++q) {
                if (((k >> (b - q)) & 1L) == 0) continue;
                v += std::min(g[p - 1], g[q - 1]) / std::pow(2.0, p + q - 1);
            }
            s_k += 1.0 - v;
        }
        // per-code source power: each pulled-up 2R_U leg carries (V-Vnode)/2R_U
        out.per_code_w[k] = vddh_v * vddh_v / (2.0 * r_u_ohm) * s_k;
        sum += s_k;
    }
    out.total_w = vddh_v * vddh_v / r_u_ohm * sum / 2.0;
    out.code_average_w = out.total_w / static_cast<double>(codes);
    return out;
}

double r2r_static_power(int bits, double r_u_ohm, double vddh_v) {
    return r2r_static_power_detail(bits, r_u_ohm, vddh_v).total_w;
}

LaserBudget laser_power(const AccelConfig& cfg) {
    if (!is_power_of_two(cfg.d))
        throw std::invalid_argument("laser_power: d must be a power of two");
    const double stages = std::log2(static_cast<double>(cfg.d));
    const double dr_loss = std::pow(10.0, -(2.0 * cfg.mrm_dr_db + cfg.rtr_dr_db) / 10.0);
    const double excess = std::pow(10.0, -stages * cfg.splitter_loss_db / 10.0);
    LaserBudget b;
    b.per_lambda_w = cfg.dr_eo_w / (dr_loss * excess);
    b.total_w = cfg.d * b.per_lambda_w;
    return b;
}

double heater_power(int d, double heater_unit_w) {
    if (d < 1) throw std::invalid_argument("heater_power: d must be >= 1");
    return (1.0 + d) * heater_unit_w + d * heater_unit_w;
}

double soc_power(const AccelConfig& cfg) {
    validate(cfg);
    const double hs_static = hs_dac_static_power(cfg.bits, cfg.r_hs_ohm, cfg.vddh_v);
    const double hs_dyn = cfg.hs_dac_dyn_w * (cfg.f_clk_hz / 2e9);
    const double per_row =
        hs_static + hs_dyn + cfg.tia_w + cfg.s2d_w + cfg.adc_w + cfg.per_row_overhead_w;
    const double r2r = r2r_static_power(cfg.bits, cfg.r_u_ohm, cfg.vddh_v);
    return laser_power(cfg).total_w + heater_power(cfg.d, cfg.heater_unit_w) +
           cfg.d * per_row + static_cast<double>(cfg.d) * cfg.d * r2r;
}

double area_mm2(const AccelConfig& cfg) {
    validate(cfg);
    const double d = cfg.d;
    const double cells = d * d * (cfg.tile_mrm_um2 + cfg.tile_r2r_um2 + cfg.per_cell_overhead_um2);
    const double rows = d * (cfg.tile_hs_dac_um2 + cfg.tile_mrm_um2 + cfg.tile_rtr_pd_um2 +
                             cfg.per_row_fixed_um2);
    const double ops = cfg.splitter_pitch_um * std::log2(d) * d * cfg.row_height_um;
    return (cells + rows + ops) * 1e-6;
}

PerfReport perf_report(const AccelConfig& cfg) {
    PerfReport r;
    r.d = cfg.d;
    const LaserBudget lb = laser_power(cfg);
    r.laser_w = lb.total_w;
    r.heater_w = heater_power(cfg.d, cfg.heater_unit_w);
    r.soc_w = soc_power(cfg);
    r.area_mm2 = area_mm2(cfg);
    r.throughput_mac_s = static_cast<double>(cfg.d) * cfg.d * cfg.f_clk_hz;
    r.density_tmac_s_mm2 = r.throughput_mac_s / 1e12 / r.area_mm2;
    r.energy_fj_mac = r.soc_w / r.throughput_mac_s * 1e15;
    return r;
}

}  // namespace opal
