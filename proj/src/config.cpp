#include "relscat/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace relscat {

Task task_from_string(const std::string& s) {
    if (s == "fields-check") return Task::fields_check;
    if (s == "free-solve") return Task::free_solve;
    if (s == "scatter") return Task::scatter;
    if (s == "scatter-mod") return Task::scatter_mod;
    if (s == "verify-asymptotics") return Task::verify_asymptotics;
    if (s == "xray") return Task::xray;
    if (s == "reconstruct") return Task::reconstruct;
    throw ConfigError("unknown task '" + s + "'");
}

std::string task_to_string(Task t) {
    switch (t) {
        case Task::fields_check: return "fields-check";
        case Task::free_solve: return "free-solve";
        case Task::scatter: return "scatter";
        case Task::scatter_mod: return "scatter-mod";
        case Task::verify_asymptotics: return "verify-asymptotics";
        case Task::xray: return "xray";
        case Task::reconstruct: return "reconstruct";
    }
    return "?";
}

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<double> parse_numbers(const std::string& s, int line) {
    std::vector<double> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) {
        try {
            size_t used = 0;
            double v = std::stod(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            out.push_back(v);
        } catch (const std::exception&) {
            throw ConfigError("expected a number, got '" + tok + "'", line);
        }
    }
    return out;
}

double parse_one(const std::string& s, int line) {
    auto v = parse_numbers(s, line);
    if (v.size() != 1) throw ConfigError("expected a single number", line);
    return v[0];
}


}  // namespace

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::istringstream is(text);
    std::string line;
    std::string section;
    int lineno = 0;
    std::vector<std::pair<std::vector<double>, int>> raw_rays;
    std::vector<double> raw_w, raw_anchor, raw_center;
    bool have_center = false;

    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("malformed section header", lineno);
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("expected key = value", lineno);
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty()) throw ConfigError("empty key or value", lineno);

        if (section == "model") {
            if (key == "family") {
                if (val == "zero") cfg.field.family = FieldFamily::zero;
                else if (val == "soft_coulomb") cfg.field.family = FieldFamily::soft_coulomb;
                else if (val == "gauss_short") cfg.field.family = FieldFamily::gauss_short;
                else throw ConfigError("unknown family '" + val + "'", lineno);
            } else if (key == "n") cfg.n = static_cast<int>(parse_one(val, lineno));
            else if (key == "c") cfg.c = parse_one(val, lineno);
            else if (key == "alpha") cfg.alpha = parse_one(val, lineno);
            else if (key == "q_l") cfg.field.q_l = parse_one(val, lineno);
            else if (key == "q_s") cfg.field.q_s = parse_one(val, lineno);
            else if (key == "m_l") cfg.field.m_l = parse_one(val, lineno);
            else if (key == "m_s") cfg.field.m_s = parse_one(val, lineno);
            else if (key == "gauss_amp") cfg.field.gauss_amp = parse_one(val, lineno);
            else if (key == "gauss_width") cfg.field.gauss_width = parse_one(val, lineno);
            else if (key == "gauss_b_amp") cfg.field.gauss_b_amp = parse_one(val, lineno);
            else if (key == "gauss_center") { raw_center = parse_numbers(val, lineno); have_center = true; }
            else throw ConfigError("unknown model key '" + key + "'", lineno);
        } else if (section == "run") {
            if (key == "task") cfg.task = task_from_string(val);
            else if (key == "mode") {
                if (val == "strict") cfg.mode = Mode::strict;
                else if (val == "empirical") cfg.mode = Mode::empirical;
                else throw ConfigError("mode must be strict or empirical", lineno);
            } else if (key == "threads") cfg.threads = static_cast<int>(parse_one(val, lineno));
            else if (key == "out") cfg.out = val;
            else if (key == "r") cfg.r = parse_one(val, lineno);
            else throw ConfigError("unknown run key '" + key + "'", lineno);
        } else if (section == "tolerances") {
            if (key == "picard") cfg.picard_tol = parse_one(val, lineno);
            else if (key == "quadrature") cfg.quad_tol = parse_one(val, lineno);
            else if (key == "ode") cfg.ode_tol = parse_one(val, lineno);
            else if (key == "grid_nodes") cfg.grid_nodes = static_cast<int>(parse_one(val, lineno));
            else throw ConfigError("unknown tolerances key '" + key + "'", lineno);
        } else if (section == "rays") {
            if (key == "ray") raw_rays.push_back({parse_numbers(val, lineno), lineno});
            else throw ConfigError("unknown rays key '" + key + "'", lineno);
        } else if (section == "rho") {
            if (key == "values") cfg.rhos = parse_numbers(val, lineno);
            else throw ConfigError("unknown rho key '" + key + "'", lineno);
        } else if (section == "free") {
            if (key == "w") raw_w = parse_numbers(val, lineno);
            else if (key == "anchor") raw_anchor = parse_numbers(val, lineno);
            else if (key == "direction") {
                if (val == "past") cfg.free_direction = Direction::past;
                else if (val == "future") cfg.free_direction = Direction::future;
                else throw ConfigError("direction must be past or future", lineno);
            } else throw ConfigError("unknown free key '" + key + "'", lineno);
        } else if (section == "verify") {
            if (key == "data") {
                if (val != "standard" && val != "modified")
                    throw ConfigError("verify data must be standard or modified", lineno);
                cfg.verify_data = val;
            } else throw ConfigError("unknown verify key '" + key + "'", lineno);
        } else if (section == "xray") {
            if (key == "field") cfg.xray_field = val;
            else if (key == "angles") cfg.xray_angles = static_cast<int>(parse_one(val, lineno));
            else if (key == "offsets") cfg.xray_offsets = static_cast<int>(parse_one(val, lineno));
            else if (key == "extent") cfg.xray_extent = parse_one(val, lineno);
            else throw ConfigError("unknown xray key '" + key + "'", lineno);
        } else if (section == "reconstruct") {
            if (key == "angles") cfg.rec_angles = static_cast<int>(parse_one(val, lineno));
            else if (key == "offsets") cfg.rec_offsets = static_cast<int>(parse_one(val, lineno));
            else if (key == "extent") cfg.rec_extent = parse_one(val, lineno);
            else if (key == "grid") cfg.rec_grid = static_cast<int>(parse_one(val, lineno));
            else if (key == "degree") cfg.rec_degree = static_cast<int>(parse_one(val, lineno));
            else throw ConfigError("unknown reconstruct key '" + key + "'", lineno);
        } else if (section.empty()) {
            throw ConfigError("key outside any section", lineno);
        } else {
            throw ConfigError("unknown section '" + section + "'", lineno);
        }
    }

    if (cfg.n < 2 || cfg.n > kMaxDim) throw ConfigError("n must be in [2, 8]");
    if (have_center) {
        if (static_cast<int>(raw_center.size()) != cfg.n)
            throw ConfigError("gauss_center needs n components");
        Vec ctr(cfg.n);
        for (int i = 0; i < cfg.n; ++i) ctr[i] = raw_center[i];
        cfg.field.gauss_center = ctr;
    }
    if (!(cfg.quad_tol <= cfg.picard_tol / 10.0))
        throw ConfigError("tolerance hierarchy violated: quadrature must be <= picard/10");

    for (auto& [nums, ln] : raw_rays) {
        if (static_cast<int>(nums.size()) != 2 * cfg.n)
            throw ConfigError("ray needs 2n numbers (theta then x)", ln);
        Vec theta(cfg.n), x(cfg.n);
        for (int i = 0; i < cfg.n; ++i) {
            theta[i] = nums[i];
            x[i] = nums[cfg.n + i];
        }
        double tn = norm(theta);
        if (tn == 0.0) throw ConfigError("ray direction must be nonzero", ln);
        theta *= 1.0 / tn;
        x -= theta * dot(x, theta);  // project onto theta^perp
        if (std::abs(dot(theta, x)) > 1e-12 * std::max(1.0, norm(x)))
            throw ConfigError("ray failed perpendicularity after projection", ln);
        cfg.rays.push_back({theta, x});
    }

    if (!raw_w.empty()) {
        if (static_cast<int>(raw_w.size()) != cfg.n)
            throw ConfigError("free w needs n components");
        cfg.free_w = Vec(cfg.n);
        for (int i = 0; i < cfg.n; ++i) cfg.free_w[i] = raw_w[i];
    }
    if (!raw_anchor.empty()) {
        if (static_cast<int>(raw_anchor.size()) != cfg.n)
            throw ConfigError("free anchor needs n components");
        cfg.free_anchor = Vec(cfg.n);
        for (int i = 0; i < cfg.n; ++i) cfg.free_anchor[i] = raw_anchor[i];
    }
    if (cfg.free_w.size() == 0) cfg.free_w = Vec(cfg.n);
    if (cfg.free_anchor.size() == 0) cfg.free_anchor = Vec(cfg.n);
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str());
}

FieldModel RunConfig::make_model() const {
    return FieldModel(n, c, alpha, field);
}

}  // namespace relscat
