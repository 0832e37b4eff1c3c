#include "seqbayes/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace seqbayes {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

double parse_double(const std::string& text, const std::string& where) {
    const std::string t = lower(trim(text));
    if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
    if (t == "-inf") return -std::numeric_limits<double>::infinity();
    try {
        std::size_t used = 0;
        const double v = std::stod(t, &used);
        if (used != t.size()) throw std::invalid_argument(t);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(where + ": expected a number, got '" + text + "'");
    }
}

}  // namespace

IniFile IniFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str(), path);
}

IniFile IniFile::parse_string(const std::string& text, const std::string& name) {
    IniFile ini;
    ini.name_ = name;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto comment = line.find_first_of(";#");
        if (comment != std::string::npos) line.erase(comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError(name + ":" + std::to_string(lineno) + ": unterminated section header");
            }
            section = lower(trim(line.substr(1, line.size() - 2)));
            if (section.empty()) {
                throw ConfigError(name + ":" + std::to_string(lineno) + ": empty section name");
            }
            ini.sections_[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(name + ":" + std::to_string(lineno) + ": expected 'key = value'");
        }
        const std::string key = lower(trim(line.substr(0, eq)));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError(name + ":" + std::to_string(lineno) + ": empty key");
        }
        if (section.empty()) {
            throw ConfigError(name + ":" + std::to_string(lineno) + ": key outside any [section]");
        }
        auto [it, inserted] = ini.sections_[section].emplace(key, Entry{value, lineno, false});
        if (!inserted) {
            throw ConfigError(name + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
        }
    }
    return ini;
}

const IniFile::Entry* IniFile::find(const std::string& section, const std::string& key) const {
    const auto sit = sections_.find(lower(section));
    if (sit == sections_.end()) return nullptr;
    const auto kit = sit->second.find(lower(key));
    if (kit == sit->second.end()) return nullptr;
    kit->second.consumed = true;
    return &kit->second;
}

const IniFile::Entry& IniFile::require(const std::string& section, const std::string& key) const {
    const Entry* e = find(section, key);
    if (!e) {
        throw ConfigError(name_ + ": missing required key '" + key + "' in [" + section + "]");
    }
    return *e;
}

std::string IniFile::location(const std::string& section, const std::string& key) const {
    const Entry* e = find(section, key);
    if (!e) return name_;
    return name_ + ":" + std::to_string(e->line);
}

bool IniFile::has(const std::string& section, const std::string& key) const {
    return find(section, key) != nullptr;
}

std::string IniFile::get_string(const std::string& section, const std::string& key) const {
    return require(section, key).value;
}

std::string IniFile::get_string(const std::string& section, const std::string& key,
                                const std::string& fallback) const {
    const Entry* e = find(section, key);
    return e ? e->value : fallback;
}

double IniFile::get_double(const std::string& section, const std::string& key) const {
    const Entry& e = require(section, key);
    return parse_double(e.value, name_ + ":" + std::to_string(e.line));
}

double IniFile::get_double(const std::string& section, const std::string& key,
                           double fallback) const {
    const Entry* e = find(section, key);
    if (!e) return fallback;
    return parse_double(e->value, name_ + ":" + std::to_string(e->line));
}

long long IniFile::get_int(const std::string& section, const std::string& key,
                           long long fallback) const {
    const Entry* e = find(section, key);
    if (!e) return fallback;
    const std::string t = trim(e->value);
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) {
        throw ConfigError(name_ + ":" + std::to_string(e->line) + ": expected an integer, got '" +
                          e->value + "'");
    }
    return v;
}

bool IniFile::get_bool(const std::string& section, const std::string& key, bool fallback) const {
    const Entry* e = find(section, key);
    if (!e) return fallback;
    const std::string t = lower(trim(e->value));
    if (t == "true" || t == "on" || t == "yes" || t == "1") return true;
    if (t == "false" || t == "off" || t == "no" || t == "0") return false;
    throw ConfigError(name_ + ":" + std::to_string(e->line) + ": expected a boolean, got '" +
                      e->value + "'");
}

std::vector<double> IniFile::get_double_list(const std::string& section,
                                             const std::string& key) const {
    const Entry* e = find(section, key);
    std::vector<double> out;
    if (!e) return out;
    std::istringstream in(e->value);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(parse_double(item, name_ + ":" + std::to_string(e->line)));
    }
    return out;
}

void IniFile::check_all_consumed() const {
    for (const auto& [section, entries] : sections_) {
        for (const auto& [key, e] : entries) {
            if (!e.consumed) {
                throw ConfigError(name_ + ":" + std::to_string(e.line) + ": unknown key '" + key +
                                  "' in [" + section + "]");
            }
        }
    }
}

ProblemConfig load_problem(const IniFile& ini) {
    ProblemConfig pc;

    const std::string penalty = lower(ini.get_string("problem", "penalty", "classic"));
    if (penalty == "classic") {
        pc.penalty = PenaltyModel::classic();
    } else if (penalty == "cross_entropy" || penalty == "crossentropy") {
        pc.penalty = PenaltyModel::cross_entropy();
    } else if (penalty == "l2") {
        pc.penalty = PenaltyModel::l2();
    } else {
        throw ConfigError(ini.location("problem", "penalty") + ": unknown penalty '" + penalty +
                          "' (expected classic, cross_entropy or l2)");
    }

    const double c = ini.get_double("problem", "c", 1.0);
    if (!(c > 0.0)) throw ConfigError(ini.location("problem", "c") + ": time cost c must be > 0");

    const std::string cost = lower(ini.get_string("problem", "cost", "quadratic"));
    if (cost == "quadratic") {
        pc.cost = CostModel::quadratic(ini.get_double("problem", "a", 1.0),
                                       ini.get_double("problem", "b", 1.0), c);
    } else if (cost == "power") {
        pc.cost = CostModel::power(ini.get_double("problem", "coef"),
                                   ini.get_double("problem", "exponent"), c);
    } else if (cost == "table") {
        const std::string spec = ini.get_string("problem", "table");
        std::vector<std::pair<double, double>> pts;
        std::istringstream in(spec);
        std::string item;
        while (std::getline(in, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            const auto colon = item.find(':');
            if (colon == std::string::npos) {
                throw ConfigError(ini.location("problem", "table") +
                                  ": table entries must look like 'u:phi'");
            }
            pts.emplace_back(parse_double(item.substr(0, colon), ini.location("problem", "table")),
                             parse_double(item.substr(colon + 1), ini.location("problem", "table")));
        }
        if (pts.empty()) throw ConfigError(ini.location("problem", "table") + ": empty table");
        pc.cost = CostModel::table_cost(std::move(pts), c);
    } else {
        throw ConfigError(ini.location("problem", "cost") + ": unknown cost '" + cost +
                          "' (expected quadratic, power or table)");
    }

    const std::string control = lower(ini.get_string("problem", "control", "reals"));
    if (control == "reals") {
        pc.uset = ControlSet::all_reals_nonzero();
    } else if (control == "positive") {
        pc.uset = ControlSet::positive_reals();
    } else if (control == "interval") {
        pc.uset = ControlSet::interval(ini.get_double("problem", "lo"),
                                       ini.get_double("problem", "hi"),
                                       ini.get_bool("problem", "lo_closed", false),
                                       ini.get_bool("problem", "hi_closed", true));
    } else if (control == "points") {
        const auto pts = ini.get_double_list("problem", "points");
        if (pts.empty()) throw ConfigError(ini.location("problem", "points") + ": empty point list");
        pc.uset = ControlSet::points(pts);
    } else {
        throw ConfigError(ini.location("problem", "control") + ": unknown control set '" + control +
                          "' (expected reals, positive, interval or points)");
    }

    if (pc.cost.kind == CostModel::Kind::Table && !pc.uset.points_only()) {
        throw ConfigError(ini.location("problem", "table") +
                          ": table costs need a point control set");
    }
    return pc;
}

SimulateRequest load_simulate(const IniFile& ini) {
    SimulateRequest req;
    req.sim.p = ini.get_double("simulate", "pi");
    req.sim.delta = ini.get_double("simulate", "delta", 0.0);
    req.sim.u = ini.get_double("simulate", "u");
    req.sim.dt = ini.get_double("simulate", "dt", 1e-4);
    req.sim.n_paths = ini.get_int("simulate", "paths", 10000);
    req.sim.t_max = ini.get_double("simulate", "t_max", -1.0);
    req.sim.n_threads = static_cast<int>(ini.get_int("simulate", "threads", 0));
    req.sim.bridge_correction = ini.get_bool("simulate", "bridge", true);
    if (ini.has("simulate", "seed")) {
        req.sim.seed = static_cast<std::uint64_t>(ini.get_int("simulate", "seed", 0));
        req.have_seed = true;
    }

    const std::string theta = lower(ini.get_string("simulate", "theta", "bernoulli"));
    if (theta == "bernoulli") {
        req.sim.theta_mode = ThetaMode::Bernoulli;
    } else if (theta == "fixed0") {
        req.sim.theta_mode = ThetaMode::Fixed0;
    } else if (theta == "fixed1") {
        req.sim.theta_mode = ThetaMode::Fixed1;
    } else {
        throw ConfigError(ini.location("simulate", "theta") + ": unknown theta mode '" + theta +
                          "' (expected bernoulli, fixed0 or fixed1)");
    }

    const std::string space = lower(ini.get_string("simulate", "space", "logit"));
    if (space == "logit" || space == "logit_exact") {
        req.sim.space = PathSpace::LogitExact;
    } else if (space == "pi_euler" || space == "pieuler") {
        req.sim.space = PathSpace::PiEuler;
    } else if (space == "strong_x" || space == "strongx") {
        req.sim.space = PathSpace::StrongX;
    } else {
        throw ConfigError(ini.location("simulate", "space") + ": unknown space '" + space +
                          "' (expected logit, pi_euler or strong_x)");
    }

    req.alphas = ini.get_double_list("simulate", "alphas");
    req.bins = static_cast<int>(ini.get_int("simulate", "bins", 50));
    req.t_hi = ini.get_double("simulate", "t_hi", 8.0);
    req.raw_csv = ini.get_bool("simulate", "raw_csv", false);

    std::istringstream est(lower(ini.get_string("simulate", "estimators", "tau,decision")));
    std::string item;
    while (std::getline(est, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        if (item != "tau" && item != "decision" && item != "laplace" && item != "density") {
            throw ConfigError(ini.location("simulate", "estimators") + ": unknown estimator '" +
                              item + "'");
        }
        req.estimators.push_back(item);
    }
    return req;
}

StatsRequest load_stats(const IniFile& ini) {
    StatsRequest req;
    req.A = ini.get_double("stats", "a_boundary", 0.25);
    req.pi = ini.get_double("stats", "pi", 0.5);
    req.u = ini.get_double("stats", "u", 1.0);
    req.alphas = ini.get_double_list("stats", "alphas");
    req.density_t = ini.get_double_list("stats", "density_t");
    req.theta = static_cast<int>(ini.get_int("stats", "theta", 1));
    if (ini.has("stats", "sweep_param")) {
        req.sweep_param = lower(ini.get_string("stats", "sweep_param"));
        if (*req.sweep_param != "a" && *req.sweep_param != "b" && *req.sweep_param != "c") {
            throw ConfigError(ini.location("stats", "sweep_param") +
                              ": sweep_param must be a, b or c");
        }
        req.sweep_from = ini.get_double("stats", "sweep_from");
        req.sweep_to = ini.get_double("stats", "sweep_to");
        req.sweep_n = static_cast<int>(ini.get_int("stats", "sweep_n", 11));
        if (req.sweep_n < 2) {
            throw ConfigError(ini.location("stats", "sweep_n") + ": sweep_n must be >= 2");
        }
    }
    return req;
}

}  // namespace seqbayes
