#include "linkcalc/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace linkcalc {
namespace {

struct RawConfig {
    // section -> key -> (value, line)
    std::map<std::string, std::map<std::string, std::pair<std::string, int>>> data;
};

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

RawConfig parse_raw(const std::string& text, const std::string& origin) {
    RawConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw InputError(origin + ":" + std::to_string(line_no) + ": bad section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw InputError(origin + ":" + std::to_string(line_no) + ": empty section name");
            cfg.data[section];
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InputError(origin + ":" + std::to_string(line_no) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (section.empty())
            throw InputError(origin + ":" + std::to_string(line_no) + ": key outside any section");
        if (key.empty() || val.empty())
            throw InputError(origin + ":" + std::to_string(line_no) + ": empty key or value");
        cfg.data[section][key] = {val, line_no};
    }
    return cfg;
}

double parse_double(const std::string& v, const std::string& origin, int line) {
    std::size_t pos = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw InputError(origin + ":" + std::to_string(line) + ": not a number: '" + v + "'");
    }
    if (pos != v.size())
        throw InputError(origin + ":" + std::to_string(line) + ": trailing junk in '" + v + "'");
    return x;
}

bool parse_bool(const std::string& v, const std::string& origin, int line) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw InputError(origin + ":" + std::to_string(line) + ": expected boolean, got '" + v + "'");
}

// Field registry; consuming a key removes it so leftovers can be reported.
struct Reader {
    RawConfig cfg;
    std::string origin;

    bool take(const std::string& sec, const std::string& key, std::string& out, int& line) {
        auto s = cfg.data.find(sec);
        if (s == cfg.data.end()) return false;
        auto k = s->second.find(key);
        if (k == s->second.end()) return false;
        out = k->second.first;
        line = k->second.second;
        s->second.erase(k);
        return true;
    }

    void number(const std::string& sec, const std::string& key, double& target) {
        std::string v;
        int line;
        if (take(sec, key, v, line)) target = parse_double(v, origin, line);
    }

    void integer(const std::string& sec, const std::string& key, int& target) {
        std::string v;
        int line;
        if (take(sec, key, v, line)) {
            double x = parse_double(v, origin, line);
            if (x != std::floor(x))
                throw InputError(origin + ":" + std::to_string(line) + ": expected integer");
            target = static_cast<int>(x);
        }
    }

    void boolean(const std::string& sec, const std::string& key, bool& target) {
        std::string v;
        int line;
        if (take(sec, key, v, line)) target = parse_bool(v, origin, line);
    }

    void reject_leftovers() const {
        for (const auto& [sec, kv] : cfg.data) {
            static const char* known[] = {"satellite", "uav", "ground",
                                          "relay", "qos", "snr_override"};
            bool ok = false;
            for (const char* k : known) ok = ok || sec == k;
            if (!ok) throw InputError(origin + ": unknown section [" + sec + "]");
            if (!kv.empty())
                throw InputError(origin + ":" + std::to_string(kv.begin()->second.second) +
                                 ": unknown key '" + kv.begin()->first + "' in [" + sec + "]");
        }
    }
};

Scenario build_scenario(Reader& r) {
    Scenario sc = default_scenario();

    double b_s = 0.25, omega_sr = 0.5;
    int gamma_s = 2;
    r.number("satellite", "b_s", b_s);
    r.integer("satellite", "gamma_s", gamma_s);
    r.number("satellite", "omega_sr", omega_sr);
    r.number("satellite", "p_s_dbm", sc.budget.p_s_dbm);
    r.number("satellite", "sigma2_sr_dbm", sc.budget.sigma2_sr_dbm);
    r.number("satellite", "d_sr_m", sc.budget.d_sr_m);
    r.number("satellite", "alpha_p", sc.budget.alpha_p);
    r.number("satellite", "wavelength_m", sc.budget.wavelength_m);
    sc.sr = shadowed_rician_from_physical(b_s, gamma_s, omega_sr);

    r.number("uav", "altitude_m", sc.budget.altitude_uav_m);
    r.number("uav", "d_u_m", sc.budget.d_u_m);
    r.number("uav", "elevation_deg", sc.budget.elevation_deg);
    r.number("uav", "s_curve_a", sc.budget.s_curve_a);
    r.number("uav", "s_curve_b", sc.budget.s_curve_b);
    r.number("uav", "eta_los_db", sc.budget.eta_los_db);
    r.number("uav", "eta_nlos_db", sc.budget.eta_nlos_db);
    r.number("uav", "p_r_dbm", sc.budget.p_r_dbm);
    r.number("uav", "sigma2_ru_dbm", sc.budget.sigma2_ru_dbm);
    sc.budget.validate();

    double m = 1.1, m_s = 2.1, omega_m = 0.0, omega_s = 0.0;
    r.number("ground", "m", m);
    r.number("ground", "m_s", m_s);
    r.number("ground", "omega_m", omega_m);
    r.number("ground", "omega_s", omega_s);
    if (omega_m > 0.0 || omega_s > 0.0) {
        if (!(omega_m > 0.0 && omega_s > 0.0))
            throw InputError(r.origin + ": [ground] omega_m and omega_s must be set together");
        sc.ru = fisher_f_params(m, m_s, omega_m, omega_s);
    } else {
        sc.ru = fisher_f_normalized(m, m_s);
    }

    std::string scheme_s;
    int line;
    RelayScheme scheme = RelayScheme::DF;
    if (r.take("relay", "scheme", scheme_s, line)) {
        if (scheme_s == "af" || scheme_s == "fixed_gain_af") scheme = RelayScheme::FixedGainAF;
        else if (scheme_s == "df") scheme = RelayScheme::DF;
        else throw InputError(r.origin + ":" + std::to_string(line) + ": scheme must be af or df");
    }
    double c_param = 1.0, gain_g = 0.0;
    std::string c_mode = "semi_blind";
    r.number("relay", "c_param", c_param);
    r.number("relay", "gain_g", gain_g);
    if (r.take("relay", "c_mode", c_mode, line) &&
        c_mode != "fixed" && c_mode != "semi_blind")
        throw InputError(r.origin + ":" + std::to_string(line) +
                         ": c_mode must be fixed or semi_blind");
    if (gain_g > 0.0)
        sc.relay = relay_from_gain(scheme, gain_g, sc.budget);
    else if (c_mode == "semi_blind")
        sc.relay = relay_semi_blind(scheme);
    else
        sc.relay = relay_from_c(scheme, c_param);

    r.number("qos", "theta", sc.qos.theta);
    r.number("qos", "bandwidth_hz", sc.qos.bandwidth_hz);
    r.number("qos", "duration_s", sc.qos.duration_s);
    r.number("qos", "gamma_th_db", sc.gamma_th_db);
    sc.qos.validate();

    r.boolean("snr_override", "enabled", sc.snr_override);
    r.number("snr_override", "gbar_sr_db", sc.gbar_sr_db);
    r.number("snr_override", "gbar_ru_db", sc.gbar_ru_db);

    r.reject_leftovers();
    return sc;
}

} // namespace

Scenario default_scenario() {
    Scenario sc;
    return sc;
}

Scenario parse_scenario(const std::string& text, const std::string& origin) {
    Reader r{parse_raw(text, origin), origin};
    return build_scenario(r);
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str(), path);
}

void apply_override(Scenario& sc, const std::string& assignment) {
    auto eq = assignment.find('=');
    auto dot = assignment.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq)
        throw InputError("--set expects section.key=value, got '" + assignment + "'");
    std::string text = sc.canonical();
    // rebuild through the canonical form with the key replaced
    std::string sec = assignment.substr(0, dot);
    std::string key = assignment.substr(dot + 1, eq - dot - 1);
    std::string val = assignment.substr(eq + 1);
    std::istringstream in(text);
    std::ostringstream out;
    std::string line, cur;
    bool applied = false;
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (!t.empty() && t.front() == '[') cur = t.substr(1, t.size() - 2);
        auto e = t.find('=');
        if (!applied && cur == sec && e != std::string::npos &&
            trim(t.substr(0, e)) == key) {
            out << key << " = " << val << "\n";
            applied = true;
        } else {
            out << line << "\n";
        }
    }
    if (!applied)
        throw InputError("--set: unknown key '" + sec + "." + key + "'");
    sc = parse_scenario(out.str(), "--set " + assignment);
}

double Scenario::gbar_sr_linear() const {
    if (snr_override) return db_to_linear(gbar_sr_db);
    return average_snr(budget.p_s_dbm, budget.sigma2_sr_dbm, sr_path_loss(budget));
}

double Scenario::gbar_ru_linear() const {
    if (snr_override) return db_to_linear(gbar_ru_db);
    return average_snr(budget.p_r_dbm, budget.sigma2_ru_dbm,
                       db_to_linear(ru_path_loss_db(budget)));
}

double Scenario::gamma_th_linear() const { return db_to_linear(gamma_th_db); }

SnrDistribution Scenario::distribution(LinkKind kind) const {
    SnrDistribution d;
    d.kind = kind;
    d.sr = sr;
    d.ru = ru;
    d.gbar_sr = gbar_sr_linear();
    d.gbar_ru = gbar_ru_linear();
    d.relay = relay;
    if (kind == LinkKind::AF) d.relay.scheme = RelayScheme::FixedGainAF;
    return d;
}

std::string Scenario::canonical() const {
    char buf[64];
    auto num = [&buf](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    std::ostringstream o;
    o << "[satellite]\n"
      << "b_s = " << num(sr.b_s) << "\n"
      << "gamma_s = " << sr.gamma_s << "\n"
      << "omega_sr = " << num(sr.omega_sr) << "\n"
      << "p_s_dbm = " << num(budget.p_s_dbm) << "\n"
      << "sigma2_sr_dbm = " << num(budget.sigma2_sr_dbm) << "\n"
      << "d_sr_m = " << num(budget.d_sr_m) << "\n"
      << "alpha_p = " << num(budget.alpha_p) << "\n"
      << "wavelength_m = " << num(budget.wavelength_m) << "\n"
      << "[uav]\n"
      << "altitude_m = " << num(budget.altitude_uav_m) << "\n"
      << "d_u_m = " << num(budget.d_u_m) << "\n"
      << "elevation_deg = " << num(budget.elevation_deg) << "\n"
      << "s_curve_a = " << num(budget.s_curve_a) << "\n"
      << "s_curve_b = " << num(budget.s_curve_b) << "\n"
      << "eta_los_db = " << num(budget.eta_los_db) << "\n"
      << "eta_nlos_db = " << num(budget.eta_nlos_db) << "\n"
      << "p_r_dbm = " << num(budget.p_r_dbm) << "\n"
      << "sigma2_ru_dbm = " << num(budget.sigma2_ru_dbm) << "\n"
      << "[ground]\n"
      << "m = " << num(ru.m) << "\n"
      << "m_s = " << num(ru.m_s) << "\n";
    // explicit omegas only when they deviate from power normalization, so a
    // later --set ground.m_s=... renormalizes instead of keeping stale values
    double omega_s_norm = std::sqrt(ru.m_s / (ru.m_s - 1.0));
    if (std::abs(ru.omega_s - omega_s_norm) > 1e-12 * omega_s_norm ||
        std::abs(ru.omega_m * ru.omega_s - 1.0) > 1e-12) {
        o << "omega_m = " << num(ru.omega_m) << "\n"
          << "omega_s = " << num(ru.omega_s) << "\n";
    }
    o
      << "[relay]\n"
      << "scheme = " << (relay.scheme == RelayScheme::FixedGainAF ? "af" : "df") << "\n"
      << "c_mode = " << (relay.semi_blind ? "semi_blind" : "fixed") << "\n"
      << "c_param = " << num(relay.c_param) << "\n"
      << "[qos]\n"
      << "theta = " << num(qos.theta) << "\n"
      << "bandwidth_hz = " << num(qos.bandwidth_hz) << "\n"
      << "duration_s = " << num(qos.duration_s) << "\n"
      << "gamma_th_db = " << num(gamma_th_db) << "\n"
      << "[snr_override]\n"
      << "enabled = " << (snr_override ? "true" : "false") << "\n"
      << "gbar_sr_db = " << num(gbar_sr_db) << "\n"
      << "gbar_ru_db = " << num(gbar_ru_db) << "\n";
    return o.str();
}

std::uint64_t Scenario::hash() const {
    std::string c = canonical();
    std::uint64_t h = 1469598103934665603ull; // FNV-1a
    for (unsigned char ch : c) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace linkcalc
