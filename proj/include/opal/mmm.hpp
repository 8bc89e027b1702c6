#pragma once

#include "opal/mvm.hpp"

namespace opal {

/// How the n column-MVMs of an MMM are laid onto hardware.
struct MmmStrategy {
    enum class Mode { parallel, time_multiplexed, hybrid };
    Mode mode = Mode::parallel;
    int units = 1;  // hybrid only

    static MmmStrategy parallel() { return {Mode::parallel, 1}; }
    static MmmStrategy time_multiplexed() { return {Mode::time_multiplexed, 1}; }
    static MmmStrategy hybrid(int k) { return {Mode::hybrid, k}; }
};

struct ScheduleReport {
    int units_used = 0;
    long cycles = 0;
    double area_mm2 = 0.0;
    double energy_j = 0.0;
    double latency_s = 0.0;
};

struct MmmResult {
    QuantizedMatrix codes;
    ScheduleReport schedule;
};

/// Y (d x d) times Z (d x n), one chain evaluation per column. Codes are
/// strategy-independent; only the schedule changes.
MmmResult mmm(const QuantizedMatrix& y, const QuantizedMatrix& z, const MmmStrategy& strategy,
              const AccelConfig& cfg, const WavelengthPlan& plan, const SimFlags& flags);

/// Fixed-point reference for X (n x d) * Y (d x d) * Z (d x n): stage-1
/// values stay unquantized and a single rounding happens at the output,
///   code_ij = round_half_up( (X Y Z)_ij / (d^2 (2^B-1)^2) ).
QuantizedMatrix dmmm_oracle(const QuantizedMatrix& x, const QuantizedMatrix& y,
                            const QuantizedMatrix& z);

/// Structural counters proving the single-conversion property.
struct DmmmTrace {
    long photodetections = 0;      // n^2, one per output element
    long intermediate_oeo = 0;     // always 0 in this architecture
    long vmrm_events = 0;          // n*d dynamic input modulations
    long rtm_events = 0;           // n*d broadband modulator settings
    long mmrm_weights = 0;         // d^2 static weight rings
    double full_scale_adc_v = 0.0;
    Eigen::MatrixXd adc_in_v;      // n x n analog values before quantization
};

struct DmmmResult {
    QuantizedMatrix codes;
    ScheduleReport schedule;
    DmmmTrace trace;
};

/// Double MMM in one optical pass: per column of Z the first-stage MVM
/// runs without photodetection, each resulting d-wavelength bundle is
/// split 1-to-n, scaled broadband by the racetrack modulators carrying X,
/// recombined per output row and detected once. Ideal flags reproduce
/// dmmm_oracle exactly.
DmmmResult dmmm_simulate(const QuantizedMatrix& x, const QuantizedMatrix& y,
                         const QuantizedMatrix& z, const AccelConfig& cfg,
                         const WavelengthPlan& plan, const SimFlags& flags);

}  // namespace opal
