#include "opal/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace opal {

bool is_power_of_two(int v) { return v >= 1 && (v & (v - 1)) == 0; }

void validate(const AccelConfig& cfg) {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0)) throw std::invalid_argument(std::string("config: ") + name + " must be > 0");
    };
    if (cfg.bits < 1) throw std::invalid_argument("config: bits must be >= 1");
    if (cfg.d < 1) throw std::invalid_argument("config: d must be >= 1");
    if (!is_power_of_two(cfg.d))
        throw std::invalid_argument("config: d must be a power of two for the splitter tree");
    positive(cfg.f_clk_hz, "f_clk_hz");
    positive(cfg.vddh_v, "vddh_v");
    positive(cfg.vdd_v, "vdd_v");
    positive(cfg.r_hs_ohm, "r_hs_ohm");
    positive(cfg.r_u_ohm, "r_u_ohm");
    positive(cfg.dr_eo_w, "dr_eo_w");
    positive(cfg.responsivity_a_per_w, "responsivity_a_per_w");
    positive(cfg.mrm_dr_db, "mrm_dr_db");
    positive(cfg.rtr_dr_db, "rtr_dr_db");
    positive(cfg.heater_unit_w, "heater_unit_w");
    positive(cfg.q_factor, "q_factor");
    positive(cfg.adc_full_scale_v, "adc_full_scale_v");
    if (cfg.splitter_loss_db < 0.0)
        throw std::invalid_argument("config: splitter_loss_db must be >= 0");
}

namespace {

using nlohmann::json;

void apply(const json& j, AccelConfig& c) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        const json& v = it.value();
        if (k == "d") c.d = v.get<int>();
        else if (k == "bits") c.bits = v.get<int>();
        else if (k == "f_clk_hz") c.f_clk_hz = v.get<double>();
        else if (k == "vddh_v") c.vddh_v = v.get<double>();
        else if (k == "vdd_v") c.vdd_v = v.get<double>();
        else if (k == "r_hs_ohm") c.r_hs_ohm = v.get<double>();
        else if (k == "r_u_ohm") c.r_u_ohm = v.get<double>();
        else if (k == "dr_eo_w") c.dr_eo_w = v.get<double>();
        else if (k == "responsivity_a_per_w") c.responsivity_a_per_w = v.get<double>();
        else if (k == "splitter_loss_db") c.splitter_loss_db = v.get<double>();
        else if (k == "mrm_dr_db") c.mrm_dr_db = v.get<double>();
        else if (k == "rtr_dr_db") c.rtr_dr_db = v.get<double>();
        else if (k == "q_factor") c.q_factor = v.get<double>();
        else if (k == "shift_rate_nm_per_v") c.shift_rate_nm_per_v = v.get<double>();
        else if (k == "heater_unit_w") c.heater_unit_w = v.get<double>();
        else if (k == "hs_dac_dyn_w") c.hs_dac_dyn_w = v.get<double>();
        else if (k == "tia_w") c.tia_w = v.get<double>();
        else if (k == "s2d_w") c.s2d_w = v.get<double>();
        else if (k == "adc_w") c.adc_w = v.get<double>();
        else if (k == "per_row_overhead_w") c.per_row_overhead_w = v.get<double>();
        else if (k == "tile_hs_dac_um2") c.tile_hs_dac_um2 = v.get<double>();
        else if (k == "tile_r2r_um2") c.tile_r2r_um2 = v.get<double>();
        else if (k == "tile_mrm_um2") c.tile_mrm_um2 = v.get<double>();
        else if (k == "tile_rtr_pd_um2") c.tile_rtr_pd_um2 = v.get<double>();
        else if (k == "splitter_pitch_um") c.splitter_pitch_um = v.get<double>();
        else if (k == "row_height_um") c.row_height_um = v.get<double>();
        else if (k == "per_cell_overhead_um2") c.per_cell_overhead_um2 = v.get<double>();
        else if (k == "per_row_fixed_um2") c.per_row_fixed_um2 = v.get<double>();
        else if (k == "tia_gm_a_per_v") c.tia.g_m_a_per_v = v.get<double>();
        else if (k == "tia_rf_ohm") c.tia.r_f_ohm = v.get<double>();
        else if (k == "tia_c_f") c.tia.c_tia_f = v.get<double>();
        else if (k == "tia_gamma") c.tia.gamma = v.get<double>();
        else if (k == "temperature_k") c.tia.temperature_k = v.get<double>();
        else if (k == "amp_gm_a_per_v") c.amp.g_m_a_per_v = v.get<double>();
        else if (k == "amp_r_ohm") c.amp.r_amp_ohm = v.get<double>();
        else if (k == "amp_c_f") c.amp.c_amp_f = v.get<double>();
        else if (k == "amp_gm_ind_a_per_v") c.amp.g_m_ind_a_per_v = v.get<double>();
        else if (k == "amp_bw_boost") c.amp.bw_boost = v.get<double>();
        else if (k == "adc_full_scale_v") c.adc_full_scale_v = v.get<double>();
        else throw std::invalid_argument("config: unknown key '" + k + "'");
    }
}

}  // namespace

AccelConfig parse_config_json(const std::string& text) {
    AccelConfig c;
    const json j = json::parse(text);
    if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
    apply(j, c);
    validate(c);
    return c;
}

AccelConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_json(ss.str());
}

}  // namespace opal
