#pragma once

namespace opal {

/// Self-biased feedback TIA: complementary transconductance stage with a
/// feedback resistor, loaded by the S2D amplifier input capacitance.
struct TiaModel {
    double g_m_a_per_v = 1e-3;
    double r_f_ohm = 1650.0;
    double c_tia_f = 30e-15;
    double gamma = 2.5;           // excess noise coefficient
    double temperature_k = 300.0;

    double r_tia_ohm() const { return r_f_ohm / (1.0 + g_m_a_per_v * r_f_ohm); }
};

struct TiaCharacteristics {
    double r_tia_ohm = 0.0;
    double dc_transimpedance_ohm = 0.0;
    double bandwidth_hz = 0.0;
    double input_noise_a_rthz = 0.0;
};
TiaCharacteristics tia_characteristics(const TiaModel& m);

/// Single-ended-to-differential stage with an active-inductor load.
/// bw_boost stretches the RC pole to the peaked bandwidth.
struct AmpModel {
    double g_m_a_per_v = 5e-3;
    double r_amp_ohm = 600.0;
    double c_amp_f = 80e-15;
    double g_m_ind_a_per_v = 23e-3;  // active-inductor device
    double bw_boost = 1.658761;
};

struct AmpCharacteristics {
    double dc_gain = 0.0;
    double bandwidth_hz = 0.0;
};
AmpCharacteristics amp_characteristics(const AmpModel& m);

/// Total noise power at the ADC input (V^2, reported in the uW-into-1-Ohm
/// convention): PD shot noise and TIA thermal noise folded through the
/// amplifier's noise bandwidth, plus the amplifier's own contribution.
double oe_noise_power(const TiaModel& tia, const AmpModel& amp, double i_pd_a);

/// Flash ADC with 2^B - 1 comparator thresholds over a differential full
/// scale.
struct AdcModel {
    int bits = 4;
    double full_scale_v = 1.0;
    double sample_rate_hz = 2e9;

    double lsb_v() const { return full_scale_v / ((1 << bits) - 1); }
};

struct SnrMargin {
    double quant_noise = 0.0;  // (FS/(2^B-1))^2 / 12
    double margin_db = 0.0;
    double margin_bits = 0.0;  // margin_db / 6.02
};
SnrMargin snr_margin(double noise_power, const AdcModel& adc);

/// Mid-tread saturating quantizer over [0, full_scale]; exact half-LSB
/// ties round up.
int adc_quantize(double v, const AdcModel& adc);
double adc_dequantize(int code, const AdcModel& adc);

}  // namespace opal
