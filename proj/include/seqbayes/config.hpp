#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "seqbayes/control.hpp"
#include "seqbayes/penalty.hpp"
#include "seqbayes/simulate.hpp"

namespace seqbayes {

// Minimal INI reader: [section] headers, key = value lines, ';' or '#'
// comments. Parse and lookup failures throw ConfigError carrying
// "file:line:" positions.
class IniFile {
  public:
    static IniFile parse_file(const std::string& path);
    static IniFile parse_string(const std::string& text, const std::string& name = "<config>");

    bool has(const std::string& section, const std::string& key) const;
    std::string get_string(const std::string& section, const std::string& key) const;
    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    long long get_int(const std::string& section, const std::string& key, long long fallback) const;
    bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
    std::vector<double> get_double_list(const std::string& section, const std::string& key) const;

    // ConfigError naming the first key that was never read (typo guard).
    void check_all_consumed() const;

    std::string location(const std::string& section, const std::string& key) const;

  private:
    struct Entry {
        std::string value;
        int line = 0;
        mutable bool consumed = false;
    };
    std::string name_;
    std::map<std::string, std::map<std::string, Entry>> sections_;

    const Entry* find(const std::string& section, const std::string& key) const;
    const Entry& require(const std::string& section, const std::string& key) const;
};

// The [problem] section: penalty, cost model, control set.
struct ProblemConfig {
    PenaltyModel penalty = PenaltyModel::classic();
    CostModel cost = CostModel::quadratic(1.0, 1.0, 1.0);
    ControlSet uset = ControlSet::all_reals_nonzero();
};

ProblemConfig load_problem(const IniFile& ini);

// The [simulate] section plus command-line overrides; seed is mandatory.
struct SimulateRequest {
    SimConfig sim;
    bool have_seed = false;
    std::vector<double> alphas;
    std::vector<std::string> estimators;  // subset of tau, decision, laplace, density
    int bins = 50;
    double t_hi = 8.0;
    bool raw_csv = false;
};

SimulateRequest load_simulate(const IniFile& ini);

// The [stats] section: closed-form evaluation point and optional sweep.
struct StatsRequest {
    double A = 0.25;
    double pi = 0.5;
    double u = 1.0;
    std::vector<double> alphas;
    std::vector<double> density_t;
    int theta = 1;
    std::optional<std::string> sweep_param;  // a | b | c  (quadratic cost sweep)
    double sweep_from = 0.0, sweep_to = 1.0;
    int sweep_n = 11;
};

StatsRequest load_stats(const IniFile& ini);

}  // namespace seqbayes
