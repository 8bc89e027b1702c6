#pragma once

#include <functional>
#include <span>
#include <vector>

namespace opal {

/// Lorentzian notch model of a depletion-tuned ring modulator.
/// T(lambda, V) = ig * (1 - (1 - t_min) / (1 + ((lambda - lambda_res(V))/HWHM)^2))
/// with HWHM = lambda_res0 / (2 Q) and lambda_res(V) = lambda_res0 + shift*V.
struct MrmTransferModel {
    double q_factor = 10000.0;
    double lambda_res0_nm = 1534.5;        // resonance at 0 V reverse bias
    double shift_rate_nm_per_v = 0.04;
    double t_min = 0.439482;               // extinction floor (linear power gain)
    double insertion_gain = 1.0;           // off-resonance through gain

    double hwhm_nm() const { return lambda_res0_nm / (2.0 * q_factor); }
    double lambda_res(double volts) const { return lambda_res0_nm + shift_rate_nm_per_v * volts; }
};

/// Build a transfer model whose bias sweep 0..vddh spans exactly dr_db of
/// power gain with the laser parked on the 0 V resonance (t_min solved in
/// closed form from the Lorentzian).
MrmTransferModel make_mrm_transfer(double lambda_res0_nm, double q_factor,
                                   double shift_rate_nm_per_v, double dr_db, double vddh);

/// Linear power gain seen by one wavelength at one reverse bias.
double transmission(const MrmTransferModel& m, double lambda_nm, double volts);

/// Uniform voltage-divider DAC level: code * vddh / (2^bits - 1).
double dac_level(int code, int bits, double vddh);

/// B -> (B+1)-bit linearizing code map: entry k is the extended DAC code
/// driving level k of the linearized E/O ramp. Strictly increasing.
struct CalibrationMap {
    int bits = 4;                 // B of the incoming data
    std::vector<int> mapping;     // 2^B picks out of 2^(B+1) extended codes
};

/// Gains of a model swept over the 2^bits uniform levels of a `bits`-wide
/// DAC at the given laser wavelength.
std::vector<double> gain_sweep(const MrmTransferModel& m, double lambda_laser_nm, int bits,
                               double vddh);

/// Select 2^bits of the 2^(bits+1) extended-code gains to best fit the
/// ideal linear ramp between the achievable end gains. The selection
/// minimizes the worst ramp deviation over all strictly increasing picks
/// (ties broken by total deviation, then lowest codes), so it never loses
/// to the identity subsampling. Throws std::domain_error when the gain set
/// is not monotone non-decreasing.
CalibrationMap build_calibration(std::span<const double> extended_gains, int bits);
CalibrationMap build_calibration(const MrmTransferModel& m, double lambda_laser_nm, int bits,
                                 double vddh);

/// Converter linearity of a 2^B-level gain staircase, in LSB units with
/// LSB = (g_max - g_min)/(2^B - 1):
///   DNL_k = (g_{k+1} - g_k)/LSB - 1,  INL_k = (g_k - g_0)/LSB - k.
struct DnlInl {
    std::vector<double> dnl;
    std::vector<double> inl;
    double max_abs_dnl = 0.0;
    double max_abs_inl = 0.0;
};
DnlInl dnl_inl(std::span<const double> gains);

/// RC settling budget of the high-speed DAC against one clock period.
struct DacTiming {
    double r_hs_ohm = 2000.0;
    double c_load_f = 30e-15;
    double settle_budget_s = 58e-12;
    int resolution_bits = 4;
};

struct SettleReport {
    bool ok = false;
    double rc_s = 0.0;
    double settle_time_s = 0.0;  // rc * ln(2^(B+1)) for a half-LSB landing
    double margin_s = 0.0;       // period - (settle + logic latency)
};

/// Settling must finish within half an LSB, exp(-t/RC) < 2^-(B+1), and the
/// fixed 100 ps logic latency must still fit the clock period.
SettleReport check_settling(const DacTiming& t, double clock_hz);

/// Quantized transmission readback available to the trimming loop: probe
/// wavelength plus the candidate device state.
using GainReadback = std::function<double(double probe_lambda_nm, const MrmTransferModel&)>;

/// Move the zero-bias resonance onto lambda_target by bisecting a trim
/// offset, deciding direction purely from two readback probes one HWHM to
/// either side of the target. Converges to 1e-4 nm; throws
/// std::invalid_argument when the target is outside the capture range and
/// std::domain_error on non-convergence within 64 steps.
MrmTransferModel trim_resonance(const MrmTransferModel& m, double lambda_target_nm,
                                const GainReadback& readback, double capture_range_nm);

}  // namespace opal
