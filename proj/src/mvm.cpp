#include "opal/mvm.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "opal/analog_frontend.hpp"
#include "opal/eo_transfer.hpp"
#include "opal/power_area.hpp"

namespace opal {

namespace {

void check_range(const Eigen::MatrixXi& codes, int bits, const char* what) {
    const int hi = (1 << bits) - 1;
    if ((codes.array() < 0).any() || (codes.array() > hi).any())
        throw std::invalid_argument(std::string(what) + ": code out of range");
}

double splitter_transmission(int fanout, double excess_db) {
    const double stages = std::log2(static_cast<double>(fanout));
    return std::pow(10.0, -stages * excess_db / 10.0) / static_cast<double>(fanout);
}

}  // namespace

void validate_codes(const QuantizedMatrix& m) { check_range(m.codes, m.bits, "QuantizedMatrix"); }
void validate_codes(const QuantizedVector& v) {
    check_range(v.codes, v.bits, "QuantizedVector");
}

QuantizedVector mvm_oracle(const QuantizedMatrix& y, const QuantizedVector& z) {
    if (y.codes.rows() != y.codes.cols())
        throw std::invalid_argument("mvm_oracle: weight matrix must be square");
    if (y.codes.cols() != z.codes.size() || y.bits != z.bits)
        throw std::invalid_argument("mvm_oracle: dimension or bit-width mismatch");
    validate_codes(y);
    validate_codes(z);

    const long d = y.codes.rows();
    const long q = (1L << y.bits) - 1;
    QuantizedVector out;
    out.bits = y.bits;
    out.codes.resize(d);
    for (long i = 0; i < d; ++i) {
        long long acc = 0;
        for (long j = 0; j < d; ++j)
            acc += static_cast<long long>(y.codes(i, j)) * z.codes(j);
        // round_half_up(acc / (d*q)) in exact integer arithmetic
        const long long den = static_cast<long long>(d) * q;
        out.codes(i) = static_cast<int>((2 * acc + den) / (2 * den));
    }
    return out;
}

namespace detail {

std::vector<std::vector<double>> modulator_values(const AccelConfig& cfg,
                                                  const WavelengthPlan& plan,
                                                  Nonlinearity mode) {
    const int levels = 1 << cfg.bits;
    std::vector<std::vector<double>> values(plan.lambdas_nm.size());
    for (std::size_t j = 0; j < plan.lambdas_nm.size(); ++j) {
        std::vector<double>& v = values[j];
        v.resize(levels);
        if (mode == Nonlinearity::ideal) {
            for (int k = 0; k < levels; ++k)
                v[k] = static_cast<double>(k) / (levels - 1);
            continue;
        }
        const MrmTransferModel m =
            make_mrm_transfer(plan.lambdas_nm[j], cfg.q_factor, cfg.shift_rate_nm_per_v,
                              cfg.mrm_dr_db, cfg.vddh_v);
        std::vector<double> gains;
        if (mode == Nonlinearity::uncalibrated) {
            gains = gain_sweep(m, plan.lambdas_nm[j], cfg.bits, cfg.vddh_v);
        } else {
            const auto ext = gain_sweep(m, plan.lambdas_nm[j], cfg.bits + 1, cfg.vddh_v);
            const CalibrationMap map = build_calibration(ext, cfg.bits);
            gains.resize(levels);
            for (int k = 0; k < levels; ++k) gains[k] = ext[map.mapping[k]];
        }
        const double span = gains.back() - gains.front();
        for (int k = 0; k < levels; ++k) v[k] = (gains[k] - gains.front()) / span;
    }
    return values;
}

int quantize_against(double v, double full_scale, int bits, bool* saturated) {
    const int max_code = (1 << bits) - 1;
    const double x = v / full_scale * max_code;
    const long code = std::lround(std::floor(x + 0.5 + 1e-12 * (1.0 + std::abs(x))));
    if (saturated) *saturated = (code < 0 || code > max_code);
    return static_cast<int>(std::clamp(code, 0L, static_cast<long>(max_code)));
}

}  // namespace detail

MvmResult mvm_simulate(const QuantizedMatrix& y, const QuantizedVector& z,
                       const AccelConfig& cfg, const WavelengthPlan& plan,
                       const SimFlags& flags) {
    const int d = static_cast<int>(y.codes.rows());
    if (y.codes.cols() != d || z.codes.size() != d)
        throw std::invalid_argument("mvm_simulate: operand shapes must be d x d and d");
    if (plan.d != d || cfg.d != d)
        throw std::invalid_argument("mvm_simulate: plan/config dimension mismatch");
    if (y.bits != cfg.bits || z.bits != cfg.bits)
        throw std::invalid_argument("mvm_simulate: bit width mismatch");
    validate_codes(y);
    validate_codes(z);

    const int levels = 1 << cfg.bits;
    const double p_lambda = laser_power(cfg).per_lambda_w;
    const double split = splitter_transmission(d, cfg.splitter_loss_db);
    const double tia_gain = tia_characteristics(cfg.tia).dc_transimpedance_ohm;
    const double s2d_gain = amp_characteristics(cfg.amp).dc_gain;
    const double chain_gain = cfg.responsivity_a_per_w * tia_gain * s2d_gain;

    MvmResult res;
    res.codes.bits = cfg.bits;
    res.codes.codes.resize(d);
    ChainTrace& tr = res.trace;
    tr.p_lambda_w = p_lambda;
    tr.after_vmrm_w.resize(d);
    tr.after_omux_w.resize(d);
    tr.after_ops_w.resize(d);
    tr.rows.resize(d);

    // Crosstalk mode works on raw transmissions (floors included); the
    // default mode works on normalized modulation depth.
    std::vector<std::vector<double>> values;
    std::vector<MrmTransferModel> rings;
    if (flags.crosstalk) {
        rings.reserve(d);
        for (int j = 0; j < d; ++j)
            rings.push_back(make_mrm_transfer(plan.lambdas_nm[j], cfg.q_factor,
                                              cfg.shift_rate_nm_per_v, cfg.mrm_dr_db,
                                              cfg.vddh_v));
    } else {
        values = detail::modulator_values(cfg, plan, flags.nonlinearity);
    }

    // In crosstalk mode the input comb passes its own V-MRM raw transmission;
    // the row rings are where the neighbor tails accumulate.
    auto vmrm_only = [&](int j, int code) {
        if (!flags.crosstalk) return p_lambda * values[j][code];
        return p_lambda *
               transmission(rings[j], plan.lambdas_nm[j], dac_level(code, cfg.bits, cfg.vddh_v));
    };
    auto row_gain = [&](int i, int j, const Eigen::MatrixXi& w) {
        if (!flags.crosstalk) return values[j][w(i, j)];
        double t = 1.0;
        for (int k = 0; k < d; ++k)
            t *= transmission(rings[k], plan.lambdas_nm[j],
                              dac_level(w(i, k), cfg.bits, cfg.vddh_v));
        return t;
    };

    auto run_chain = [&](const Eigen::MatrixXi& w, const Eigen::VectorXi& x, ChainTrace* trace,
                         std::vector<double>& adc_in) {
        Eigen::VectorXd vm(d);
        for (int j = 0; j < d; ++j) vm(j) = vmrm_only(j, x(j));
        Eigen::VectorXd ops = vm * split;
        if (trace) {
            trace->after_vmrm_w = vm;
            trace->after_omux_w = vm;  // merged onto one waveguide, powers unchanged
            trace->after_ops_w = ops;
        }
        adc_in.assign(d, 0.0);
        for (int i = 0; i < d; ++i) {
            Eigen::VectorXd after(d);
            double pd = 0.0;
            for (int j = 0; j < d; ++j) {
                after(j) = ops(j) * row_gain(i, j, w);
                pd += after(j);
            }
            if (trace) {
                RowTrace& rt = trace->rows[i];
                rt.after_mmrm_w = after;
                rt.pd_absorbed_w = pd;
                rt.photocurrent_a = cfg.responsivity_a_per_w * pd;
                rt.tia_v = rt.photocurrent_a * tia_gain;
                rt.adc_in_v = rt.tia_v * s2d_gain;
            }
            adc_in[i] = pd * chain_gain;
        }
    };

    std::vector<double> adc_in;
    run_chain(y.codes, z.codes, &tr, adc_in);

    // Self-calibrated ADC reference: the same pipeline driven at full scale.
    const Eigen::MatrixXi w_fs = Eigen::MatrixXi::Constant(d, d, levels - 1);
    const Eigen::VectorXi x_fs = Eigen::VectorXi::Constant(d, levels - 1);
    std::vector<double> fs;
    run_chain(w_fs, x_fs, nullptr, fs);
    tr.full_scale_adc_v = fs[0];

    std::mt19937_64 rng(flags.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int i = 0; i < d; ++i) {
        double v = adc_in[i];
        if (flags.noise) {
            const double var = oe_noise_power(cfg.tia, cfg.amp, tr.rows[i].photocurrent_a);
            v += std::sqrt(var) * gauss(rng);
            tr.rows[i].adc_in_v = v;
        }
        bool sat = false;
        res.codes.codes(i) = detail::quantize_against(v, tr.full_scale_adc_v, cfg.bits, &sat);
        tr.rows[i].code = res.codes.codes(i);
        tr.rows[i].saturated = sat;
    }
    tr.photodetections = d;
    return res;
}

namespace {

ErrorStats stats_impl(const Eigen::VectorXi& sim, const Eigen::VectorXi& ref, int bits) {
    if (sim.size() != ref.size())
        throw std::invalid_argument("error_stats: length mismatch");
    ErrorStats s;
    const int rail = (1 << bits) - 1;
    double sq = 0.0;
    int sat = 0;
    for (Eigen::Index i = 0; i < sim.size(); ++i) {
        const double e = std::abs(static_cast<double>(sim(i)) - ref(i));
        s.max_abs_lsb = std::max(s.max_abs_lsb, e);
        sq += e * e;
        if ((sim(i) == 0 || sim(i) == rail) && sim(i) != ref(i)) ++sat;
    }
    s.rms_lsb = std::sqrt(sq / static_cast<double>(sim.size()));
    s.saturation_rate = static_cast<double>(sat) / static_cast<double>(sim.size());
    return s;
}

}  // namespace

ErrorStats error_stats(const Eigen::VectorXi& sim, const Eigen::VectorXi& reference, int bits) {
    return stats_impl(sim, reference, bits);
}

ErrorStats error_stats(const Eigen::MatrixXi& sim, const Eigen::MatrixXi& reference, int bits) {
    if (sim.rows() != reference.rows() || sim.cols() != reference.cols())
        throw std::invalid_argument("error_stats: shape mismatch");
    Eigen::VectorXi a = sim.reshaped();
    Eigen::VectorXi b = reference.reshaped();
    return stats_impl(a, b, bits);
}

}  // namespace opal
