#pragma once

#include <functional>
#include <span>
#include <vector>

#include "opal/mmm.hpp"

namespace opal {

/// Head projections as B-bit codes plus the score shift. The 1/sqrt(d_k)
/// scale is applied as a right-shift by shift_m bits, i.e. a factor 2^-m
/// (exact when d_k = 4^m).
struct AttentionWeights {
    QuantizedMatrix w_q;
    QuantizedMatrix w_k;
    QuantizedMatrix w_v;
    int shift_m = 1;
};

/// Offline collapse W_C = W_Q * W_K^T, requantized to B bits with a stored
/// scale (codes * scale reproduces the exact integer product to half a
/// code).
struct CollapsedWeights {
    QuantizedMatrix w_c;
    double scale = 0.0;  // integer-product units per code
};
CollapsedWeights collapse_qk(const QuantizedMatrix& w_q, const QuantizedMatrix& w_k);

/// Arithmetic right shift with floor semantics: scale_scores(c, m) =
/// floor(c / 2^m) for every integer c.
long long scale_score(long long c, int m);
Eigen::MatrixXi scale_scores(const Eigen::MatrixXi& c, int m);

/// Sampled exp/log tables for the division-free softmax. Defaults place
/// both grids at 2^-6 spacing so integer (and grid-aligned) inputs hit the
/// exp table exactly and the worst-case output error is bounded by
/// exp_step/2 + log_step/2 = 2^-6.
struct SoftmaxLut {
    double exp_range = 8.0;     // exp table covers [-range, 0]
    double exp_step = 0.015625;
    std::vector<double> exp_table;  // exp_table[k] = exp(-k*step)
    double sum_max = 4.0;       // log table covers sums in [1, sum_max]
    double log_step = 0.015625;
    std::vector<double> log_table;  // log(1 + j*step)
    int input_bits = 4;         // score quantization this table was sized for

    static SoftmaxLut make(double range, double sum_max, int input_bits = 4,
                           double step = 0.015625);
    double exp_lookup(double x) const;   // nearest entry, clamped at the tail
    double log_lookup(double s) const;   // nearest entry over [1, sum_max]
    double derived_error_bound() const;  // max |p_lut - p_exact| for on-grid inputs
};

/// Eq-style division-free softmax: p_i = exp(a_i - a_max - log(sum_j
/// exp(a_j - a_max))) with table lookups. Rows sum to 1 within the
/// table-spacing bound and outputs are nonnegative.
Eigen::VectorXd softmax_lut(std::span<const double> row, const SoftmaxLut& lut);
Eigen::VectorXd softmax_exact(std::span<const double> row);

/// Evaluator slot for the two in-pipeline double products, letting tests
/// substitute the fixed-point reference for the optical chain.
using DmmmFn = std::function<QuantizedMatrix(const QuantizedMatrix&, const QuantizedMatrix&,
                                             const QuantizedMatrix&)>;

/// Per-stage record of one head evaluation, on full-scale-normalized
/// values (code q represents 1.0).
struct AttentionStages {
    Eigen::MatrixXd scores;  // after 2^-m scaling, real units
    Eigen::MatrixXd probs;
    Eigen::MatrixXd output;
    std::vector<double> prob_row_scales;
};

/// Exact real-arithmetic reference of the collapsed-head pipeline.
AttentionStages attention_exact(const QuantizedMatrix& x, const AttentionWeights& w);

/// Quantized pipeline: C = dmmm(X, W_C, X^T) codes, shift, LUT softmax on
/// rescaled scores, row-quantized probabilities driving the broadband
/// modulator plane of a second dmmm (S, X, W_V). Requires n == d (the
/// token matrix doubles as the square weight plane of the second product).
AttentionStages attention_quantized(const QuantizedMatrix& x, const AttentionWeights& w,
                                    const SoftmaxLut& lut, const DmmmFn& dmmm_fn);

struct SimulatedBackend {
    AccelConfig cfg;
    WavelengthPlan plan;
    SimFlags flags;
};

/// Head evaluation on the simulated optical chain (or exact reference when
/// backend is empty).
AttentionStages attention_head(const QuantizedMatrix& x, const AttentionWeights& w,
                               const SimulatedBackend* backend, const SoftmaxLut& lut);

/// Concatenate head outputs along features and apply the projection W_O.
/// The exact path is dense; the quantized path re-quantizes the
/// concatenation per row and uses the fixed-point product normalization.
Eigen::MatrixXd multihead(const QuantizedMatrix& x, std::span<const AttentionWeights> heads,
                          const QuantizedMatrix& w_o, const SimulatedBackend* backend,
                          const SoftmaxLut& lut);

struct FidelityReport {
    double score_max_abs = 0.0;
    double softmax_max_abs = 0.0;
    double output_max_abs = 0.0;
    double output_rms = 0.0;
};
FidelityReport fidelity_report(const AttentionStages& exact, const AttentionStages& sim);

}  // namespace opal
