#include "opal/mmm.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "opal/analog_frontend.hpp"
#include "opal/power_area.hpp"

namespace opal {

namespace {

ScheduleReport make_schedule(const MmmStrategy& s, long n, const AccelConfig& cfg) {
    ScheduleReport r;
    switch (s.mode) {
        case MmmStrategy::Mode::parallel:
            r.units_used = static_cast<int>(n);
            r.cycles = 1;
            break;
        case MmmStrategy::Mode::time_multiplexed:
            r.units_used = 1;
            r.cycles = n;
            break;
        case MmmStrategy::Mode::hybrid:
            if (s.units < 1) throw std::invalid_argument("mmm: hybrid units must be >= 1");
            r.units_used = s.units;
            r.cycles = (n + s.units - 1) / s.units;
            break;
    }
    const double p = soc_power(cfg);
    r.area_mm2 = r.units_used * area_mm2(cfg);
    r.latency_s = static_cast<double>(r.cycles) / cfg.f_clk_hz;
    r.energy_j = r.units_used * p * r.latency_s;
    return r;
}

}  // namespace

MmmResult mmm(const QuantizedMatrix& y, const QuantizedMatrix& z, const MmmStrategy& strategy,
              const AccelConfig& cfg, const WavelengthPlan& plan, const SimFlags& flags) {
    const long d = y.codes.rows();
    const long n = z.codes.cols();
    if (y.codes.cols() != d || z.codes.rows() != d)
        throw std::invalid_argument("mmm: shapes must be d x d and d x n");

    MmmResult res;
    res.codes.bits = y.bits;
    res.codes.codes.resize(d, n);
    for (long j = 0; j < n; ++j) {
        QuantizedVector col{z.codes.col(j), z.bits};
        SimFlags f = flags;
        f.seed = flags.seed + static_cast<std::uint64_t>(j);  // independent column noise
        res.codes.codes.col(j) = mvm_simulate(y, col, cfg, plan, f).codes.codes;
    }
    res.schedule = make_schedule(strategy, n, cfg);
    return res;
}

QuantizedMatrix dmmm_oracle(const QuantizedMatrix& x, const QuantizedMatrix& y,
                            const QuantizedMatrix& z) {
    const long n = x.codes.rows();
    const long d = x.codes.cols();
    if (y.codes.rows() != d || y.codes.cols() != d || z.codes.rows() != d ||
        z.codes.cols() != n)
        throw std::invalid_argument("dmmm_oracle: shapes must be n x d, d x d, d x n");
    if (x.bits != y.bits || y.bits != z.bits)
        throw std::invalid_argument("dmmm_oracle: bit width mismatch");
    validate_codes(x);
    validate_codes(y);
    validate_codes(z);

    const double q = static_cast<double>((1 << x.bits) - 1);
    // Stage-1 column values stay unquantized between the two products.
    const Eigen::MatrixXd v =
        (y.codes.cast<double>() * z.codes.cast<double>()) / (static_cast<double>(d) * q);
    const Eigen::MatrixXd out = (x.codes.cast<double>() * v) / (static_cast<double>(d) * q);

    QuantizedMatrix res;
    res.bits = x.bits;
    res.codes.resize(n, n);
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j)
            res.codes(i, j) = detail::quantize_against(out(i, j), q, x.bits);
    return res;
}

DmmmResult dmmm_simulate(const QuantizedMatrix& x, const QuantizedMatrix& y,
                         const QuantizedMatrix& z, const AccelConfig& cfg,
                         const WavelengthPlan& plan, const SimFlags& flags) {
    const int n = static_cast<int>(x.codes.rows());
    const int d = static_cast<int>(x.codes.cols());
    if (y.codes.rows() != d || y.codes.cols() != d || z.codes.rows() != d ||
        z.codes.cols() != n)
        throw std::invalid_argument("dmmm_simulate: shapes must be n x d, d x d, d x n");
    if (plan.d != d || cfg.d != d)
        throw std::invalid_argument("dmmm_simulate: plan/config dimension mismatch");
    if (!is_power_of_two(n))
        throw std::invalid_argument("dmmm_simulate: n must be a power of two for the splitter");
    validate_codes(x);
    validate_codes(y);
    validate_codes(z);
    if (flags.crosstalk)
        throw std::invalid_argument("dmmm_simulate: crosstalk mode is MVM-only");

    const int levels = 1 << cfg.bits;
    const double p_lambda = laser_power(cfg).per_lambda_w;
    const double stage1 = std::pow(10.0, -std::log2(d) * cfg.splitter_loss_db / 10.0) / d;
    const double stage2 = std::pow(10.0, -std::log2(n) * cfg.splitter_loss_db / 10.0) / n;
    const double chain_gain = cfg.responsivity_a_per_w *
                              tia_characteristics(cfg.tia).dc_transimpedance_ohm *
                              amp_characteristics(cfg.amp).dc_gain;

    const auto values = detail::modulator_values(cfg, plan, flags.nonlinearity);
    // Broadband racetrack modulator: one transfer applied to every
    // wavelength of a bundle; the value law matches the ring table at the
    // band edge (same Lorentzian parameters).
    const auto rtm_values = values.back();

    // analog value at output (i, column j): sum_k rtm(x_ik) * sum_l bundle_jkl
    auto eval = [&](const Eigen::MatrixXi& xc, const Eigen::MatrixXi& yc,
                    const Eigen::MatrixXi& zc, Eigen::MatrixXd& adc) {
        adc.resize(n, n);
        for (int col = 0; col < n; ++col) {
            // stage-1 bundles: row k carries per-wavelength signal powers
            Eigen::MatrixXd bundle(d, d);  // (row k, wavelength l)
            for (int l = 0; l < d; ++l) {
                const double in = p_lambda * values[l][zc(l, col)] * stage1;
                for (int k = 0; k < d; ++k) bundle(k, l) = in * values[l][yc(k, l)];
            }
            const Eigen::VectorXd bundle_power = bundle.rowwise().sum();  // per row k
            for (int i = 0; i < n; ++i) {
                double acc = 0.0;
                for (int k = 0; k < d; ++k)
                    acc += rtm_values[xc(i, k)] * bundle_power(k);
                adc(i, col) = acc * stage2 * chain_gain;
            }
        }
    };

    DmmmResult res;
    eval(x.codes, y.codes, z.codes, res.trace.adc_in_v);

    Eigen::MatrixXd fs_adc;
    const Eigen::MatrixXi xf = Eigen::MatrixXi::Constant(n, d, levels - 1);
    const Eigen::MatrixXi yf = Eigen::MatrixXi::Constant(d, d, levels - 1);
    const Eigen::MatrixXi zf = Eigen::MatrixXi::Constant(d, n, levels - 1);
    eval(xf, yf, zf, fs_adc);
    res.trace.full_scale_adc_v = fs_adc(0, 0);

    std::mt19937_64 rng(flags.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    res.codes.bits = cfg.bits;
    res.codes.codes.resize(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double v = res.trace.adc_in_v(i, j);
            if (flags.noise) {
                const double i_pd = v / (tia_characteristics(cfg.tia).dc_transimpedance_ohm *
                                         amp_characteristics(cfg.amp).dc_gain);
                v += std::sqrt(oe_noise_power(cfg.tia, cfg.amp, std::max(i_pd, 0.0))) *
                     gauss(rng);
            }
            res.codes.codes(i, j) =
                detail::quantize_against(v, res.trace.full_scale_adc_v, cfg.bits);
        }

    res.trace.photodetections = static_cast<long>(n) * n;
    res.trace.intermediate_oeo = 0;
    res.trace.vmrm_events = static_cast<long>(n) * d;
    res.trace.rtm_events = static_cast<long>(n) * d;
    res.trace.mmrm_weights = static_cast<long>(d) * d;

    res.schedule.units_used = n;
    res.schedule.cycles = 1;
    res.schedule.area_mm2 = n * area_mm2(cfg);
    res.schedule.latency_s = 1.0 / cfg.f_clk_hz;
    res.schedule.energy_j = n * soc_power(cfg) * res.schedule.latency_s;
    return res;
}

}  // namespace opal
