#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "opal/config.hpp"
#include "opal/wavelength_plan.hpp"

namespace opal {

/// Unsigned B-bit code container. Codes live in [0, 2^bits - 1].
struct QuantizedMatrix {
    Eigen::MatrixXi codes;
    int bits = 4;
};
struct QuantizedVector {
    Eigen::VectorXi codes;
    int bits = 4;
};

void validate_codes(const QuantizedMatrix& m);
void validate_codes(const QuantizedVector& v);

enum class Nonlinearity { ideal, uncalibrated, calibrated };

struct SimFlags {
    Nonlinearity nonlinearity = Nonlinearity::ideal;
    bool noise = false;
    std::uint64_t seed = 0;
    bool crosstalk = false;  // evaluate Lorentzian tails at neighbor channels
};

/// Fixed-point reference: code_i = round_half_up(sum_j y_ij z_j / (d (2^B-1))).
/// The chain computes the dot product of full-scale-normalized operands,
/// averaged over d and requantized to B bits.
QuantizedVector mvm_oracle(const QuantizedMatrix& y, const QuantizedVector& z);

/// Per-stage optical record of one MVM evaluation. Powers are the
/// data-carrying modulation depth per wavelength (code 0 -> 0), so every
/// stage is non-increasing along a wavelength's path.
struct RowTrace {
    Eigen::VectorXd after_mmrm_w;
    double pd_absorbed_w = 0.0;
    double photocurrent_a = 0.0;
    double tia_v = 0.0;
    double adc_in_v = 0.0;
    int code = 0;
    bool saturated = false;
};

struct ChainTrace {
    double p_lambda_w = 0.0;
    Eigen::VectorXd after_vmrm_w;
    Eigen::VectorXd after_omux_w;
    Eigen::VectorXd after_ops_w;  // per wavelength, identical for every row
    std::vector<RowTrace> rows;
    double full_scale_adc_v = 0.0;  // self-calibrated ADC reference
    int photodetections = 0;
};

struct MvmResult {
    QuantizedVector codes;
    ChainTrace trace;
};

/// Behavioral simulation of the full chain: HS-DAC/V-MRM encoding, O-MUX,
/// 1-to-d splitter with excess loss, per-row weight rings, racetrack
/// photodetection, TIA and S2D gain, and the flash ADC quantizing against
/// the chain's own full-scale reference. Ideal flags reproduce mvm_oracle
/// exactly.
MvmResult mvm_simulate(const QuantizedMatrix& y, const QuantizedVector& z,
                       const AccelConfig& cfg, const WavelengthPlan& plan,
                       const SimFlags& flags);

struct ErrorStats {
    double max_abs_lsb = 0.0;
    double rms_lsb = 0.0;
    double saturation_rate = 0.0;  // rail-valued codes that disagree with the reference
};
ErrorStats error_stats(const Eigen::VectorXi& sim, const Eigen::VectorXi& reference, int bits);
ErrorStats error_stats(const Eigen::MatrixXi& sim, const Eigen::MatrixXi& reference, int bits);

namespace detail {

/// Normalized E/O values (code 0 -> 0, full scale -> 1) per comb channel,
/// for one nonlinearity mode. values[j][code].
std::vector<std::vector<double>> modulator_values(const AccelConfig& cfg,
                                                  const WavelengthPlan& plan,
                                                  Nonlinearity mode);

/// Round-half-up quantization of v against a same-pipeline full scale,
/// with a relative guard absorbing float noise in exact-tie cases. The
/// guard (1e-12) is far below the 1/(2 q d^2) spacing of distinct chain
/// outputs, so it can only repair ties, never move a code.
int quantize_against(double v, double full_scale, int bits, bool* saturated = nullptr);

}  // namespace detail

}  // namespace opal
