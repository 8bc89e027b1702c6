#include "opal/attention.hpp"

#include <cmath>
#include <stdexcept>

namespace opal {

CollapsedWeights collapse_qk(const QuantizedMatrix& w_q, const QuantizedMatrix& w_k) {
    const long d = w_q.codes.rows();
    if (w_q.codes.cols() != d || w_k.codes.rows() != d || w_k.codes.cols() != d)
        throw std::invalid_argument("collapse_qk: weights must be square with matching d");
    if (w_q.bits != w_k.bits) throw std::invalid_argument("collapse_qk: bit width mismatch");
    validate_codes(w_q);
    validate_codes(w_k);

    using MatLL = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;
    const MatLL p = w_q.codes.cast<long long>() * w_k.codes.transpose().cast<long long>();

    CollapsedWeights out;
    out.w_c.bits = w_q.bits;
    out.w_c.codes.resize(d, d);
    const long long peak = p.maxCoeff();
    const int q = (1 << w_q.bits) - 1;
    if (peak == 0) {
        out.scale = 0.0;
        out.w_c.codes.setZero();
        return out;
    }
    out.scale = static_cast<double>(peak) / q;
    for (long i = 0; i < d; ++i)
        for (long j = 0; j < d; ++j) {
            const double c = std::floor(static_cast<double>(p(i, j)) / out.scale + 0.5);
            out.w_c.codes(i, j) = static_cast<int>(std::min(c, static_cast<double>(q)));
        }
    return out;
}

long long scale_score(long long c, int m) {
    if (m < 0) throw std::invalid_argument("scale_score: shift must be >= 0");
    return c >> m;  // arithmetic shift: floor(c / 2^m) in C++20
}

Eigen::MatrixXi scale_scores(const Eigen::MatrixXi& c, int m) {
    if (m < 0) throw std::invalid_argument("scale_scores: shift must be >= 0");
    return c.unaryExpr([m](int v) { return v >> m; });
}

SoftmaxLut SoftmaxLut::make(double range, double sum_max, int input_bits, double step) {
    if (range <= 0.0 || sum_max < 1.0 || step <= 0.0)
        throw std::invalid_argument("SoftmaxLut: invalid grid spec");
    SoftmaxLut lut;
    lut.exp_range = range;
    lut.exp_step = step;
    lut.sum_max = sum_max;
    lut.log_step = step;
    lut.input_bits = input_bits;
    const int n_exp = static_cast<int>(std::ceil(range / step)) + 1;
    lut.exp_table.resize(n_exp);
    for (int k = 0; k < n_exp; ++k) lut.exp_table[k] = std::exp(-k * step);
    const int n_log = static_cast<int>(std::ceil((sum_max - 1.0) / step)) + 1;
    lut.log_table.resize(n_log);
    for (int j = 0; j < n_log; ++j) lut.log_table[j] = std::log1p(j * step);
    return lut;
}

double SoftmaxLut::exp_lookup(double x) const {
    long k = std::lround(-x / exp_step);
    k = std::clamp(k, 0L, static_cast<long>(exp_table.size()) - 1);
    return exp_table[static_cast<std::size_t>(k)];
}

double SoftmaxLut::log_lookup(double s) const {
    long j = std::lround((s - 1.0) / log_step);
    j = std::clamp(j, 0L, static_cast<long>(log_table.size()) - 1);
    return log_table[static_cast<std::size_t>(j)];
}

double SoftmaxLut::derived_error_bound() const {
    // Common log offset (table spacing) plus the outer grid rounding, both
    // acting on probabilities <= 1; the exp tail clamp adds exp(-range).
    return 0.5 * exp_step + 0.5 * log_step + std::exp(-exp_range);
}

Eigen::VectorXd softmax_lut(std::span<const double> row, const SoftmaxLut& lut) {
    if (row.empty()) throw std::invalid_argument("softmax_lut: empty row");
    double amax = row[0];
    for (double v : row) amax = std::max(amax, v);
    Eigen::VectorXd p(static_cast<Eigen::Index>(row.size()));
    double sum = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) sum += lut.exp_lookup(row[i] - amax);
    const double lg = lut.log_lookup(sum);
    for (std::size_t i = 0; i < row.size(); ++i)
        p(static_cast<Eigen::Index>(i)) = lut.exp_lookup(row[i] - amax - lg);
    return p;
}

Eigen::VectorXd softmax_exact(std::span<const double> row) {
    if (row.empty()) throw std::invalid_argument("softmax_exact: empty row");
    double amax = row[0];
    for (double v : row) amax = std::max(amax, v);
    Eigen::VectorXd p(static_cast<Eigen::Index>(row.size()));
    double sum = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) {
        p(static_cast<Eigen::Index>(i)) = std::exp(row[i] - amax);
        sum += p(static_cast<Eigen::Index>(i));
    }
    return p / sum;
}

AttentionStages attention_exact(const QuantizedMatrix& x, const AttentionWeights& w) {
    validate_codes(x);
    const double q = static_cast<double>((1 << x.bits) - 1);
    const Eigen::MatrixXd xn = x.codes.cast<double>() / q;
    const Eigen::MatrixXd wq = w.w_q.codes.cast<double>() / q;
    const Eigen::MatrixXd wk = w.w_k.codes.cast<double>() / q;
    const Eigen::MatrixXd wv = w.w_v.codes.cast<double>() / q;

    AttentionStages s;
    const Eigen::MatrixXd c = (xn * (wq * wk.transpose())) * xn.transpose();
    s.scores = c / std::pow(2.0, w.shift_m);
    s.probs.resize(s.scores.rows(), s.scores.cols());
    for (Eigen::Index i = 0; i < s.scores.rows(); ++i) {
        const Eigen::VectorXd r = s.scores.row(i);
        s.probs.row(i) = softmax_exact(std::span<const double>(r.data(),
                                                               static_cast<std::size_t>(r.size())))
                             .transpose();
    }
    s.output = s.probs * (xn * wv);
    return s;
}

AttentionStages attention_quantized(const QuantizedMatrix& x, const AttentionWeights& w,
                                    const SoftmaxLut& lut, const DmmmFn& dmmm_fn) {
    validate_codes(x);
    const long n = x.codes.rows();
    const long d = x.codes.cols();
    if (n != d)
        throw std::invalid_argument(
            "attention_quantized: the second product needs n == d (token matrix is the square "
            "weight plane)");
    const int q = (1 << x.bits) - 1;

    const CollapsedWeights col = collapse_qk(w.w_q, w.w_k);
    QuantizedMatrix xt{x.codes.transpose(), x.bits};
    const QuantizedMatrix c_codes = dmmm_fn(x, col.w_c, xt);

    const Eigen::MatrixXi shifted = scale_scores(c_codes.codes, w.shift_m);
    // codes -> normalized score units: code * d^2 q^2 * (1/q)(scale/q^2)(1/q)
    const double kappa =
        col.scale * static_cast<double>(d) * d / (static_cast<double>(q) * q);

    AttentionStages s;
    s.scores = shifted.cast<double>() * kappa;
    s.probs.resize(n, n);
    s.prob_row_scales.resize(static_cast<std::size_t>(n));

    QuantizedMatrix probs_q;
    probs_q.bits = x.bits;
    probs_q.codes.resize(n, n);
    for (long i = 0; i < n; ++i) {
        const Eigen::VectorXd r = s.scores.row(i);
        const Eigen::VectorXd p =
            softmax_lut(std::span<const double>(r.data(), static_cast<std::size_t>(r.size())),
                        lut);
        s.probs.row(i) = p.transpose();
        const double scale = p.maxCoeff() / q;
        s.prob_row_scales[static_cast<std::size_t>(i)] = scale;
        for (long j = 0; j < n; ++j)
            probs_q.codes(i, j) =
                scale > 0.0 ? static_cast<int>(std::min(
                                  std::floor(p(j) / scale + 0.5), static_cast<double>(q)))
                            : 0;
    }

    const QuantizedMatrix out_codes = dmmm_fn(probs_q, x, w.w_v);
    s.output.resize(n, n);
    for (long i = 0; i < n; ++i) {
        // code * d^2 q^2 * s_row * (1/q)(1/q) = code * d^2 * s_row
        const double scale =
            static_cast<double>(d) * d * s.prob_row_scales[static_cast<std::size_t>(i)];
        for (long j = 0; j < n; ++j) s.output(i, j) = out_codes.codes(i, j) * scale;
    }
    return s;
}

AttentionStages attention_head(const QuantizedMatrix& x, const AttentionWeights& w,
                               const SimulatedBackend* backend, const SoftmaxLut& lut) {
    if (backend == nullptr) return attention_exact(x, w);
    const SimulatedBackend& b = *backend;
    return attention_quantized(
        x, w, lut, [&b](const QuantizedMatrix& xx, const QuantizedMatrix& yy,
                        const QuantizedMatrix& zz) {
            return dmmm_simulate(xx, yy, zz, b.cfg, b.plan, b.flags).codes;
        });
}

Eigen::MatrixXd multihead(const QuantizedMatrix& x, std::span<const AttentionWeights> heads,
                          const QuantizedMatrix& w_o, const SimulatedBackend* backend,
                          const SoftmaxLut& lut) {
    if (heads.empty()) throw std::invalid_argument("multihead: need at least one head");
    const long n = x.codes.rows();
    const long d = x.codes.cols();
    const long dt = static_cast<long>(heads.size()) * d;
    if (w_o.codes.rows() != dt || w_o.codes.cols() != dt)
        throw std::invalid_argument("multihead: w_o must be (h*d) x (h*d)");
    const int q = (1 << x.bits) - 1;

    Eigen::MatrixXd concat(n, dt);
    for (std::size_t h = 0; h < heads.size(); ++h) {
        const AttentionStages s = attention_head(x, heads[h], backend, lut);
        concat.middleCols(static_cast<long>(h) * d, d) = s.output;
    }

    const Eigen::MatrixXd wo = w_o.codes.cast<double>() / q;
    if (backend == nullptr) return concat * wo;

    // Quantized projection: per-row scale, fixed-point product, dequant.
    Eigen::MatrixXd out(n, dt);
    for (long i = 0; i < n; ++i) {
        const double peak = concat.row(i).maxCoeff();
        const double scale = peak > 0.0 ? peak / q : 0.0;
        Eigen::VectorXi hq(dt);
        for (long k = 0; k < dt; ++k)
            hq(k) = scale > 0.0
                        ? static_cast<int>(std::min(std::floor(concat(i, k) / scale + 0.5),
                                                    static_cast<double>(q)))
                        : 0;
        for (long j = 0; j < dt; ++j) {
            long long acc = 0;
            for (long k = 0; k < dt; ++k)
                acc += static_cast<long long>(hq(k)) * w_o.codes(k, j);
            const long long den = dt * q;
            const int code = static_cast<int>((2 * acc + den) / (2 * den));
            out(i, j) = static_cast<double>(code) * dt * scale / q * q;  // code * dt * scale
        }
    }
    return out;
}

FidelityReport fidelity_report(const AttentionStages& exact, const AttentionStages& sim) {
    if (exact.output.rows() != sim.output.rows() || exact.output.cols() != sim.output.cols())
        throw std::invalid_argument("fidelity_report: shape mismatch");
    FidelityReport r;
    r.score_max_abs = (exact.scores - sim.scores).cwiseAbs().maxCoeff();
    r.softmax_max_abs = (exact.probs - sim.probs).cwiseAbs().maxCoeff();
    const Eigen::MatrixXd diff = exact.output - sim.output;
    r.output_max_abs = diff.cwiseAbs().maxCoeff();
    r.output_rms = std::sqrt(diff.array().square().mean());
    return r;
}

}  // namespace opal
