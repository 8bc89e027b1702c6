#include "opal/dispersion.hpp"

#include <cmath>
#include <stdexcept>

namespace opal {

DispersionModel calibrate_dispersion(std::span<const DispersionSample> samples) {
    if (samples.size() < 2)
        throw std::invalid_argument("dispersion calibration needs at least two samples");

    bool distinct = false;
    for (std::size_t i = 1; i < samples.size(); ++i)
        if (samples[i].lambda_nm != samples[0].lambda_nm) distinct = true;
    if (!distinct)
        throw std::invalid_argument("dispersion samples must span distinct wavelengths");

    DispersionModel m;
    int n_group = 0;
    double g_sum = 0.0;
    for (const auto& s : samples)
        if (s.n_g) {
            ++n_group;
            g_sum += *s.n_g;
        }

    if (n_group > 0) {
        // Group-index equations n_g = a0 are exact; a1 then minimizes the
        // n_eff residual sum((a0 + a1*lam - n_eff)^2).
        m.a0 = g_sum / n_group;
        double num = 0.0, den = 0.0;
        for (const auto& s : samples) {
            num += s.lambda_nm * (s.n_eff - m.a0);
            den += s.lambda_nm * s.lambda_nm;
        }
        m.a1 = num / den;
    } else {
        double sl = 0.0, sn = 0.0, sll = 0.0, sln = 0.0;
        const double cnt = static_cast<double>(samples.size());
        for (const auto& s : samples) {
            sl += s.lambda_nm;
            sn += s.n_eff;
            sll += s.lambda_nm * s.lambda_nm;
            sln += s.lambda_nm * s.n_eff;
        }
        const double det = cnt * sll - sl * sl;
        m.a1 = (cnt * sln - sl * sn) / det;
        m.a0 = (sn - m.a1 * sl) / cnt;
    }

    if (!(m.a1 < 0.0))
        throw std::invalid_argument("dispersion fit has non-negative index slope (n_g <= n_eff)");
    return m;
}

namespace {

// Index sample sets recovered from the catalogued racetrack design points:
// each pair is affine-consistent and pins (perimeter, anchor mode) of its
// design row. Printed 3-digit tables are too coarse for the integer mode
// ladder, so these carry full precision.
std::vector<DispersionSample> make_half_nm() {
    return {{1534.5, 3.743825107482, 5.000494181768},
            {1550.0, 3.731131480469, 5.000494181768}};
}

std::vector<DispersionSample> make_one_nm_wide() {
    return {{1519.0, 3.756945065137, 5.020554465790},
            {1550.0, 3.731157118185, 5.020554465790}};
}

std::vector<DispersionSample> make_one_nm_narrow() {
    return {{1535.0, 3.743431325642, 5.002115481647},
            {1550.0, 3.731131480469, 5.002115481647}};
}

}  // namespace

const std::vector<DispersionSample>& cband_samples_half_nm() {
    static const std::vector<DispersionSample> s = make_half_nm();
    return s;
}

const std::vector<DispersionSample>& cband_samples_one_nm_wide() {
    static const std::vector<DispersionSample> s = make_one_nm_wide();
    return s;
}

const std::vector<DispersionSample>& cband_samples_one_nm_narrow() {
    static const std::vector<DispersionSample> s = make_one_nm_narrow();
    return s;
}

const std::vector<DispersionSample>& default_dispersion_samples(int d, double delta_lambda_nm) {
    if (delta_lambda_nm > 0.75) {
        // 1 nm-class grids: the wide band belongs to high channel counts.
        return d >= 24 ? cband_samples_one_nm_wide() : cband_samples_one_nm_narrow();
    }
    return cband_samples_half_nm();
}

}  // namespace opal
