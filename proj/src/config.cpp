#include "wtsim/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace wtsim {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
        ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
        --e;
    return s.substr(b, e - b);
}

// Consumes keys from the parsed map with type/shape errors attributed to the
// dotted key; leftover keys are reported as unknown.
class KvReader {
public:
    explicit KvReader(const KeyValueMap& kv) : kv_(kv) {}

    bool has(const std::string& key) const { return kv_.count(key) != 0; }

    double req_double(const std::string& key) {
        const std::string* raw = fetch(key);
        if (!raw)
            throw ConfigError(ConfigError::Kind::validation, key, "missing required key");
        return to_double(key, *raw);
    }

    double opt_double(const std::string& key, double def) {
        const std::string* raw = fetch(key);
        return raw ? to_double(key, *raw) : def;
    }

    int opt_int(const std::string& key, int def) {
        const std::string* raw = fetch(key);
        if (!raw)
            return def;
        const double v = to_double(key, *raw);
        if (v != std::floor(v))
            throw ConfigError(ConfigError::Kind::validation, key, "expected an integer");
        return static_cast<int>(v);
    }

    int req_int(const std::string& key) {
        const std::string* raw = fetch(key);
        if (!raw)
            throw ConfigError(ConfigError::Kind::validation, key, "missing required key");
        const double v = to_double(key, *raw);
        if (v != std::floor(v))
            throw ConfigError(ConfigError::Kind::validation, key, "expected an integer");
        return static_cast<int>(v);
    }

    bool opt_bool(const std::string& key, bool def) {
        const std::string* raw = fetch(key);
        if (!raw)
            return def;
        if (*raw == "true" || *raw == "1")
            return true;
        if (*raw == "false" || *raw == "0")
            return false;
        throw ConfigError(ConfigError::Kind::validation, key, "expected true/false");
    }

    std::string opt_string(const std::string& key, const std::string& def) {
        const std::string* raw = fetch(key);
        return raw ? *raw : def;
    }

    void finish() const {
        for (const auto& [key, value] : kv_) {
            if (!consumed_.count(key))
                throw ConfigError(ConfigError::Kind::validation, key, "unknown key");
        }
    }

private:
    const std::string* fetch(const std::string& key) {
        auto it = kv_.find(key);
        if (it == kv_.end())
            return nullptr;
        consumed_.insert(key);
        return &it->second;
    }

    static double to_double(const std::string& key, const std::string& raw) {
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(raw, &pos);
        } catch (const std::exception&) {
            throw ConfigError(ConfigError::Kind::validation, key, "not a number: " + raw);
        }
        if (pos != raw.size())
            throw ConfigError(ConfigError::Kind::validation, key, "not a number: " + raw);
        return v;
    }

    const KeyValueMap& kv_;
    std::set<std::string> consumed_;
};

void check(bool ok, const std::string& key, const std::string& msg) {
    if (!ok)
        throw ConfigError(ConfigError::Kind::validation, key, msg);
}

PiGains read_pi(KvReader& r, const std::string& prefix) {
    PiGains g;
    g.kp = r.req_double(prefix + "_kp");
    g.ki = r.req_double(prefix + "_ki");
    g.out_min = r.req_double(prefix + "_min");
    g.out_max = r.req_double(prefix + "_max");
    check(g.out_min < g.out_max, prefix + "_min", "out_min must be < out_max");
    return g;
}

bool is_multiple(double value, double base) {
    const auto n = std::llround(value / base);
    return n >= 1 && std::abs(static_cast<double>(n) * base - value) <= 1e-9 * value;
}

std::vector<std::pair<double, double>> parse_wind_steps(const std::string& key,
                                                        const std::string& raw) {
    // "t:v; t:v" pairs, ascending times.
    std::vector<std::pair<double, double>> steps;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ';')) {
        item = trim(item);
        if (item.empty())
            continue;
        const auto colon = item.find(':');
        check(colon != std::string::npos, key, "expected t:v pairs separated by ';'");
        try {
            const double t = std::stod(item.substr(0, colon));
            const double v = std::stod(item.substr(colon + 1));
            check(t >= 0.0, key, "step times must be >= 0");
            check(v > 0.0, key, "step speeds must be > 0");
            check(steps.empty() || t > steps.back().first, key, "step times must ascend");
            steps.emplace_back(t, v);
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            throw ConfigError(ConfigError::Kind::validation, key, "malformed step list");
        }
    }
    return steps;
}

}  // namespace

KeyValueMap parse_config_text(const std::string& text) {
    KeyValueMap kv;
    std::string section;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3)
                throw ConfigError(ConfigError::Kind::parse, "",
                                  "line " + std::to_string(line_no) + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(ConfigError::Kind::parse, "",
                              "line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || section.empty())
            throw ConfigError(ConfigError::Kind::parse, "",
                              "line " + std::to_string(line_no) + ": key outside a section");
        kv[section + "." + key] = value;
    }
    return kv;
}

void apply_overrides(KeyValueMap& kv, const std::vector<std::string>& overrides) {
    for (const auto& ov : overrides) {
        const auto eq = ov.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ConfigError(ConfigError::Kind::validation, ov,
                              "override must have the form section.key=value");
        const std::string key = trim(ov.substr(0, eq));
        if (key.find('.') == std::string::npos)
            throw ConfigError(ConfigError::Kind::validation, key,
                              "override key must be dotted (section.key)");
        kv[key] = trim(ov.substr(eq + 1));
    }
}

std::uint64_t hash_config(const KeyValueMap& kv) {
    // FNV-1a, 64 bit; the map is ordered so iteration is canonical.
    std::uint64_t h = 1469598103934665603ull;
    const auto mix = [&h](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ull;
        }
    };
    for (const auto& [key, value] : kv) {
        mix(key);
        mix("=");
        mix(value);
        mix("\n");
    }
    return h;
}

ScenarioConfig scenario_from_map(const KeyValueMap& kv) {
    KvReader r(kv);
    ScenarioConfig cfg;

    // turbine
    const double rho = r.opt_double("turbine.rho", 1.225);
    const double radius = r.req_double("turbine.radius");
    const double beta = r.opt_double("turbine.beta_deg", 0.0);
    CpCoeffs cp;
    cp.c1 = r.opt_double("turbine.cp_c1", cp.c1);
    cp.c2 = r.opt_double("turbine.cp_c2", cp.c2);
    cp.c3 = r.opt_double("turbine.cp_c3", cp.c3);
    cp.c4 = r.opt_double("turbine.cp_c4", cp.c4);
    cp.c5 = r.opt_double("turbine.cp_c5", cp.c5);
    cp.c6 = r.opt_double("turbine.cp_c6", cp.c6);
    check(rho > 0.0, "turbine.rho", "must be > 0");
    check(radius > 0.0, "turbine.radius", "must be > 0");
    check(beta >= 0.0, "turbine.beta_deg", "must be >= 0");
    try {
        cfg.turbine = make_turbine_params(rho, radius, beta, cp);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(ConfigError::Kind::validation, "turbine.cp_c1", e.what());
    }

    // mech
    cfg.mech.inertia = r.req_double("mech.inertia");
    cfg.mech.friction = r.opt_double("mech.friction", 0.0);
    check(cfg.mech.inertia > 0.0, "mech.inertia", "must be > 0");
    check(cfg.mech.friction >= 0.0, "mech.friction", "must be >= 0");

    // pmsg
    {
        const double r_s = r.req_double("pmsg.r_s");
        const double l_ls = r.req_double("pmsg.l_ls");
        const double l_dm = r.req_double("pmsg.l_dm");
        const double l_qm = r.req_double("pmsg.l_qm");
        const double psi_f = r.req_double("pmsg.psi_f");
        const int pole_pairs = r.req_int("pmsg.pole_pairs");
        const double l_d = r.opt_double("pmsg.l_d", l_ls + l_dm);
        const double l_q = r.opt_double("pmsg.l_q", l_ls + l_qm);

        check(r_s >= 0.0, "pmsg.r_s", "must be >= 0");
        check(l_d > 0.0, "pmsg.l_d", "must be > 0");
        check(l_q > 0.0, "pmsg.l_q", "must be > 0");
        check(std::abs(l_d - (l_ls + l_dm)) <= 1e-9 * std::max(1.0, std::abs(l_d)),
              "pmsg.l_d", "must equal l_ls + l_dm");
        check(std::abs(l_q - (l_ls + l_qm)) <= 1e-9 * std::max(1.0, std::abs(l_q)),
              "pmsg.l_q", "must equal l_ls + l_qm");
        check(psi_f > 0.0, "pmsg.psi_f", "must be > 0");
        check(pole_pairs >= 1, "pmsg.pole_pairs", "must be >= 1");
        cfg.pmsg = make_pmsg_params(r_s, l_ls, l_dm, l_qm, psi_f, pole_pairs);
    }

    // converter
    cfg.converter.c_dc = r.req_double("converter.c_dc");
    cfg.converter.m_max = r.opt_double("converter.m_max", 1.15);
    cfg.converter.v_dc_floor_frac = r.opt_double("converter.v_dc_floor_frac", 0.01);
    cfg.converter.v_dc_init = r.opt_double("converter.v_dc_init", 0.0);
    check(cfg.converter.c_dc > 0.0, "converter.c_dc", "must be > 0");
    check(cfg.converter.m_max > 0.0 && cfg.converter.m_max <= 1.1547, "converter.m_max",
          "must lie within the space-vector range (0, 2/sqrt(3)]");
    check(cfg.converter.v_dc_floor_frac >= 0.0 && cfg.converter.v_dc_floor_frac < 1.0,
          "converter.v_dc_floor_frac", "must lie in [0, 1)");
    check(cfg.converter.v_dc_init >= 0.0, "converter.v_dc_init", "must be >= 0");

    // grid
    cfg.grid.v_nom = r.req_double("grid.v_nom");
    cfg.grid.f_nom = r.req_double("grid.f_nom");
    cfg.grid.r_g = r.req_double("grid.r_g");
    cfg.grid.l_g = r.req_double("grid.l_g");
    cfg.grid.r_tr = r.req_double("grid.r_tr");
    cfg.grid.l_tr = r.req_double("grid.l_tr");
    cfg.grid.r_f = r.req_double("grid.r_f");
    cfg.grid.l_f = r.req_double("grid.l_f");
    check(cfg.grid.v_nom > 0.0, "grid.v_nom", "must be > 0");
    check(cfg.grid.f_nom > 0.0, "grid.f_nom", "must be > 0");
    check(cfg.grid.r_g >= 0.0, "grid.r_g", "must be >= 0");
    check(cfg.grid.r_tr >= 0.0, "grid.r_tr", "must be >= 0");
    check(cfg.grid.r_f >= 0.0, "grid.r_f", "must be >= 0");
    check(cfg.grid.l_g > 0.0, "grid.l_g", "must be > 0");
    check(cfg.grid.l_tr > 0.0, "grid.l_tr", "must be > 0");
    check(cfg.grid.l_f > 0.0, "grid.l_f", "must be > 0");

    // fault
    cfg.fault.enabled = r.opt_bool("fault.enabled", false);
    cfg.fault.t_on = r.opt_double("fault.t_on", 0.0);
    cfg.fault.t_off = r.opt_double("fault.t_off", 0.0);
    cfg.fault.r_fault = r.opt_double("fault.r_fault", 0.0);
    const std::string loc = r.opt_string("fault.location", "pcc");
    cfg.fault.remote_frac = r.opt_double("fault.remote_frac", 0.5);
    if (loc == "pcc")
        cfg.fault.location = FaultLocation::pcc;
    else if (loc == "filter_bus")
        cfg.fault.location = FaultLocation::filter_bus;
    else if (loc == "remote")
        cfg.fault.location = FaultLocation::remote;
    else
        throw ConfigError(ConfigError::Kind::validation, "fault.location",
                          "expected pcc, filter_bus or remote");
    if (cfg.fault.enabled) {
        check(cfg.fault.t_on >= 0.0, "fault.t_on", "must be >= 0");
        check(cfg.fault.t_on < cfg.fault.t_off, "fault.t_off", "must be > t_on");
        check(cfg.fault.r_fault >= 0.0, "fault.r_fault", "must be >= 0");
        if (cfg.fault.location == FaultLocation::remote)
            check(cfg.fault.remote_frac > 0.0 && cfg.fault.remote_frac < 1.0,
                  "fault.remote_frac", "must lie in (0, 1)");
    }

    // control
    cfg.ctrl.speed = read_pi(r, "control.speed");
    cfg.ctrl.msc_id = read_pi(r, "control.msc_id");
    cfg.ctrl.msc_iq = read_pi(r, "control.msc_iq");
    cfg.ctrl.vdc = read_pi(r, "control.vdc");
    cfg.ctrl.q = read_pi(r, "control.q");
    cfg.ctrl.gsc_id = read_pi(r, "control.gsc_id");
    cfg.ctrl.gsc_iq = read_pi(r, "control.gsc_iq");

    const std::string w_mode = r.opt_string("control.w_ref_mode", "mppt");
    if (w_mode == "rated")
        cfg.ctrl.w_ref_mode = SpeedRefMode::rated;
    else if (w_mode == "mppt")
        cfg.ctrl.w_ref_mode = SpeedRefMode::mppt;
    else
        throw ConfigError(ConfigError::Kind::validation, "control.w_ref_mode",
                          "expected rated or mppt");
    cfg.ctrl.w_rated = r.req_double("control.w_rated");
    check(cfg.ctrl.w_rated > 0.0, "control.w_rated", "must be > 0");
    cfg.ctrl.i_sd_ref = r.opt_double("control.i_sd_ref", 0.0);

    cfg.ctrl.v_dc_ref = r.req_double("control.v_dc_ref");
    check(cfg.ctrl.v_dc_ref > 0.0, "control.v_dc_ref", "must be > 0");
    check(cfg.converter.m_max * cfg.ctrl.v_dc_ref * 0.5 > cfg.grid.v_nom,
          "control.v_dc_ref",
          "modulation infeasible: m_max*v_dc_ref/2 must exceed grid.v_nom");

    const std::string q_mode = r.opt_string("control.q_ref_mode", "constant");
    if (q_mode == "constant")
        cfg.ctrl.q_ref_mode = QRefMode::constant;
    else if (q_mode == "droop")
        cfg.ctrl.q_ref_mode = QRefMode::droop;
    else
        throw ConfigError(ConfigError::Kind::validation, "control.q_ref_mode",
                          "expected constant or droop");
    cfg.ctrl.q_ref_const = r.opt_double("control.q_ref_const", 0.0);
    cfg.ctrl.droop.v_pcc_ref = r.opt_double("control.droop_v_ref", 1.0);
    cfg.ctrl.droop.k_q = r.opt_double("control.droop_k_q", 0.0);
    cfg.ctrl.droop.q_min = r.opt_double("control.droop_q_min", 0.0);
    cfg.ctrl.droop.q_max = r.opt_double("control.droop_q_max", 0.0);
    check(cfg.ctrl.droop.k_q >= 0.0, "control.droop_k_q", "must be >= 0");
    check(cfg.ctrl.droop.q_min <= 0.0 && 0.0 <= cfg.ctrl.droop.q_max,
          "control.droop_q_min", "need q_min <= 0 <= q_max");

    const std::string a_mode = r.opt_string("control.angle_mode", "ideal");
    if (a_mode == "ideal")
        cfg.ctrl.angle_mode = AngleMode::ideal;
    else if (a_mode == "pll")
        cfg.ctrl.angle_mode = AngleMode::pll;
    else
        throw ConfigError(ConfigError::Kind::validation, "control.angle_mode",
                          "expected ideal or pll");
    cfg.ctrl.pll_kp = r.opt_double("control.pll_kp", 0.0);
    cfg.ctrl.pll_ki = r.opt_double("control.pll_ki", 0.0);
    check(cfg.ctrl.pll_kp >= 0.0, "control.pll_kp", "must be >= 0");
    check(cfg.ctrl.pll_ki >= 0.0, "control.pll_ki", "must be >= 0");
    cfg.ctrl.theta0 = r.opt_double("control.theta0", 0.0);
    cfg.ctrl.l_decouple = r.opt_double("control.l_decouple", 0.0);
    check(cfg.ctrl.l_decouple >= 0.0, "control.l_decouple", "must be >= 0");
    cfg.ctrl.vff_tau = r.opt_double("control.vff_tau", 1e-4);
    check(cfg.ctrl.vff_tau >= 0.0, "control.vff_tau", "must be >= 0");
    cfg.ctrl.msc_feedforward = r.opt_bool("control.msc_feedforward", true);
    cfg.ctrl.gsc_feedforward = r.opt_bool("control.gsc_feedforward", true);

    // wind
    cfg.wind.base = r.req_double("wind.speed");
    check(cfg.wind.base > 0.0, "wind.speed", "must be > 0");
    if (r.has("wind.steps"))
        cfg.wind.steps = parse_wind_steps("wind.steps", r.opt_string("wind.steps", ""));

    // sim
    cfg.t_end = r.req_double("sim.t_end");
    cfg.dt_plant = r.opt_double("sim.dt_plant", 2e-5);
    cfg.dt_ctrl = r.opt_double("sim.dt_ctrl", 1e-4);
    cfg.sample_dt = r.opt_double("sim.sample_dt", cfg.dt_ctrl);
    cfg.sag_settle = r.opt_double("sim.sag_settle", 0.05);
    cfg.turbine_connected = r.opt_bool("sim.turbine_connected", true);
    check(cfg.sag_settle >= 0.0, "sim.sag_settle", "must be >= 0");
    check(cfg.t_end > 0.0, "sim.t_end", "must be > 0");
    check(cfg.dt_plant > 0.0, "sim.dt_plant", "must be > 0");
    check(is_multiple(cfg.dt_ctrl, cfg.dt_plant), "sim.dt_ctrl",
          "must be an integer multiple of dt_plant");
    check(is_multiple(cfg.sample_dt, cfg.dt_plant), "sim.sample_dt",
          "must be an integer multiple of dt_plant");
    check(is_multiple(cfg.t_end, cfg.dt_plant), "sim.t_end",
          "must be an integer multiple of dt_plant");

    r.finish();
    cfg.config_hash = hash_config(kv);
    return cfg;
}

ScenarioConfig scenario_from_text(const std::string& text,
                                  const std::vector<std::string>& overrides) {
    KeyValueMap kv = parse_config_text(text);
    apply_overrides(kv, overrides);
    return scenario_from_map(kv);
}

ScenarioConfig load_scenario(const std::string& path,
                             const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError(ConfigError::Kind::io, "", "cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return scenario_from_text(buf.str(), overrides);
}

}  // namespace wtsim
