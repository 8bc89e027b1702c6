#include "opal/eo_transfer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace opal {

MrmTransferModel make_mrm_transfer(double lambda_res0_nm, double q_factor,
                                   double shift_rate_nm_per_v, double dr_db, double vddh) {
    MrmTransferModel m;
    m.q_factor = q_factor;
    m.lambda_res0_nm = lambda_res0_nm;
    m.shift_rate_nm_per_v = shift_rate_nm_per_v;
    m.insertion_gain = 1.0;
    // Full-sweep detuning in HWHM units; T(x_fs)/T(0) = 10^(dr/10) solves to
    // t_min = x^2 / (rho (1 + x^2) - 1).
    const double x = shift_rate_nm_per_v * vddh / (lambda_res0_nm / (2.0 * q_factor));
    const double rho = std::pow(10.0, dr_db / 10.0);
    m.t_min = x * x / (rho * (1.0 + x * x) - 1.0);
    if (!(m.t_min > 0.0 && m.t_min < 1.0))
        throw std::invalid_argument("make_mrm_transfer: unreachable dynamic range");
    return m;
}

double transmission(const MrmTransferModel& m, double lambda_nm, double volts) {
    const double x = (lambda_nm - m.lambda_res(volts)) / m.hwhm_nm();
    return m.insertion_gain * (1.0 - (1.0 - m.t_min) / (1.0 + x * x));
}

double dac_level(int code, int bits, double vddh) {
    const int levels = (1 << bits) - 1;
    if (code < 0 || code > levels) throw std::invalid_argument("dac_level: code out of range");
    return static_cast<double>(code) * vddh / static_cast<double>(levels);
}

std::vector<double> gain_sweep(const MrmTransferModel& m, double lambda_laser_nm, int bits,
                               double vddh) {
    std::vector<double> g(static_cast<std::size_t>(1) << bits);
    for (int c = 0; c < static_cast<int>(g.size()); ++c)
        g[c] = transmission(m, lambda_laser_nm, dac_level(c, bits, vddh));
    return g;
}

CalibrationMap build_calibration(std::span<const double> extended_gains, int bits) {
    const int n_t = 1 << bits;
    const int n_e = static_cast<int>(extended_gains.size());
    if (n_e != 2 * n_t)
        throw std::invalid_argument("build_calibration: need 2^(B+1) extended gains");
    for (int c = 1; c < n_e; ++c)
        if (extended_gains[c] < extended_gains[c - 1])
            throw std::domain_error("build_calibration: achievable gain set is not monotone");

    const double lsb = (extended_gains[n_e - 1] - extended_gains[0]) / (n_t - 1);
    std::vector<double> target(n_t);
    for (int k = 0; k < n_t; ++k) target[k] = extended_gains[0] + k * lsb;

    // Minimax assignment over strictly increasing code picks, endpoints
    // pinned to the extended extremes (both have zero ramp deviation).
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> mx(static_cast<std::size_t>(n_t) * n_e, inf);
    std::vector<double> sm(static_cast<std::size_t>(n_t) * n_e, inf);
    std::vector<int> prev(static_cast<std::size_t>(n_t) * n_e, -1);
    auto at = [n_e](int k, int c) { return static_cast<std::size_t>(k) * n_e + c; };

    mx[at(0, 0)] = std::abs(extended_gains[0] - target[0]);
    sm[at(0, 0)] = mx[at(0, 0)];
    for (int k = 1; k < n_t; ++k) {
        int lo = k, hi = n_e - (n_t - k);
        if (k == n_t - 1) lo = hi = n_e - 1;
        for (int c = lo; c <= hi; ++c) {
            const double dev = std::abs(extended_gains[c] - target[k]);
            double best_mx = inf, best_sm = inf;
            int best_p = -1;
            for (int p = k - 1; p < c; ++p) {
                if (mx[at(k - 1, p)] == inf) continue;
                const double cand_mx = std::max(mx[at(k - 1, p)], dev);
                const double cand_sm = sm[at(k - 1, p)] + dev;
                if (cand_mx < best_mx || (cand_mx == best_mx && cand_sm < best_sm)) {
                    best_mx = cand_mx;
                    best_sm = cand_sm;
                    best_p = p;
                }
            }
            mx[at(k, c)] = best_mx;
            sm[at(k, c)] = best_sm;
            prev[at(k, c)] = best_p;
        }
    }

    CalibrationMap map;
    map.bits = bits;
    map.mapping.resize(n_t);
    int c = n_e - 1;
    for (int k = n_t - 1; k >= 0; --k) {
        map.mapping[k] = c;
        c = (k > 0) ? prev[at(k, c)] : -1;
    }
    return map;
}

CalibrationMap build_calibration(const MrmTransferModel& m, double lambda_laser_nm, int bits,
                                 double vddh) {
    const auto gains = gain_sweep(m, lambda_laser_nm, bits + 1, vddh);
    return build_calibration(gains, bits);
}

DnlInl dnl_inl(std::span<const double> gains) {
    const int n = static_cast<int>(gains.size());
    if (n < 2) throw std::invalid_argument("dnl_inl: need at least two samples");
    const double lsb = (gains[n - 1] - gains[0]) / (n - 1);
    DnlInl r;
    r.dnl.resize(n - 1);
    r.inl.resize(n);
    for (int k = 0; k + 1 < n; ++k) {
        r.dnl[k] = (gains[k + 1] - gains[k]) / lsb - 1.0;
        r.max_abs_dnl = std::max(r.max_abs_dnl, std::abs(r.dnl[k]));
    }
    for (int k = 0; k < n; ++k) {
        r.inl[k] = (gains[k] - gains[0]) / lsb - k;
        r.max_abs_inl = std::max(r.max_abs_inl, std::abs(r.inl[k]));
    }
    return r;
}

SettleReport check_settling(const DacTiming& t, double clock_hz) {
    if (t.r_hs_ohm < 0.0 || t.c_load_f <= 0.0 || clock_hz <= 0.0 || t.resolution_bits < 1)
        throw std::invalid_argument("check_settling: fields must be positive");
    constexpr double kLogicLatency = 100e-12;  // 5x FO4 register-to-driver path
    SettleReport r;
    r.rc_s = t.r_hs_ohm * t.c_load_f;
    r.settle_time_s = r.rc_s * std::log(std::pow(2.0, t.resolution_bits + 1));
    const double period = 1.0 / clock_hz;
    r.margin_s = period - (r.settle_time_s + kLogicLatency);
    r.ok = r.margin_s >= 0.0;
    return r;
}

MrmTransferModel trim_resonance(const MrmTransferModel& m, double lambda_target_nm,
                                const GainReadback& readback, double capture_range_nm) {
    constexpr double kTol = 1e-4;
    constexpr int kMaxIter = 64;
    if (std::abs(lambda_target_nm - m.lambda_res0_nm) > capture_range_nm)
        throw std::invalid_argument("trim_resonance: target outside capture range");

    const double probe = m.hwhm_nm();
    auto with_offset = [&](double delta) {
        MrmTransferModel c = m;
        c.lambda_res0_nm += delta;
        return c;
    };
    // Resonance below the target absorbs more at target-probe than at
    // target+probe; the comparison flips exactly when the notch crosses.
    auto below_target = [&](double delta) {
        const MrmTransferModel c = with_offset(delta);
        return readback(lambda_target_nm - probe, c) < readback(lambda_target_nm + probe, c);
    };

    double lo = -capture_range_nm, hi = capture_range_nm;
    const bool lo_side = below_target(lo);
    if (lo_side == below_target(hi))
        throw std::invalid_argument("trim_resonance: no crossing inside capture range");

    int it = 0;
    while (hi - lo > kTol) {
        if (++it > kMaxIter) throw std::domain_error("trim_resonance: did not converge");
        const double mid = 0.5 * (lo + hi);
        (below_target(mid) == lo_side ? lo : hi) = mid;
    }
    return with_offset(0.5 * (lo + hi));
}

}  // namespace opal
