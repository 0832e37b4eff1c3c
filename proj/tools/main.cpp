// Command-line front end: solve / simulate / stats / figures.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "nlohmann/json.hpp"
#include "seqbayes/config.hpp"
#include "seqbayes/figures.hpp"
#include "seqbayes/geometry.hpp"
#include "seqbayes/solver.hpp"
#include "seqbayes/stats.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace seqbayes;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitConvergence = 3;

struct CommonArgs {
    std::string config_path;
    std::string out_dir = "out";
    std::string format = "csv";
    std::optional<std::uint64_t> seed;
    std::optional<long long> paths;
    std::optional<double> dt;
};

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open output file " + path.string());
    out << text;
}

const char* regime_name(SolRegime r) {
    switch (r) {
        case SolRegime::PositiveM:
            return "PositiveM";
        case SolRegime::ZeroM:
            return "ZeroM";
        case SolRegime::NegativeM:
            return "NegativeM";
    }
    return "?";
}

int cmd_solve(const CommonArgs& args) {
    const IniFile ini = IniFile::parse_file(args.config_path);
    const ProblemConfig pc = load_problem(ini);
    const int samples = static_cast<int>(ini.get_int("solve", "value_samples", 512));
    ini.check_all_consumed();

    const Solution sol = solve(pc.penalty, pc.cost, pc.uset);

    fs::create_directories(args.out_dir);
    const json j = sol.to_json(samples);
    write_text(fs::path(args.out_dir) / "solution.json", j.dump(2) + "\n");

    std::cout << "regime: " << regime_name(sol.regime()) << "\n";
    switch (sol.regime()) {
        case SolRegime::PositiveM: {
            std::cout << "M = " << sol.M() << "\n";
            if (sol.eta_solution().attained) {
                std::cout << "u* = " << *sol.eta_solution().u_star << " (attained)\n";
            } else {
                std::cout << "u* not attained; epsilon-optimal control family applies\n";
            }
            std::cout << "A* = " << sol.A_star() << ", continuation region (" << sol.A_star()
                      << ", " << 1.0 - sol.A_star() << ")\n";
            break;
        }
        case SolRegime::ZeroM:
            std::cout << "M = 0; value identically 0";
            if (sol.eta_solution().attained) {
                std::cout << "; u* = " << *sol.eta_solution().u_star << ", never stop\n";
            } else {
                std::cout << "; epsilon-optimal control family applies\n";
            }
            break;
        case SolRegime::NegativeM:
            std::cout << "M = " << sol.M() << "; value -inf; never stop";
            if (sol.policy().u_star) {
                std::cout << " (e.g. u = " << *sol.policy().u_star << ", eta < 0)";
            }
            std::cout << "\n";
            break;
    }
    std::cout << "solution written to " << (fs::path(args.out_dir) / "solution.json").string()
              << "\n";

    if (args.format == "csv" && sol.regime() != SolRegime::NegativeM) {
        std::ofstream csv(fs::path(args.out_dir) / "value_samples.csv");
        csv << "pi,V\n";
        for (int i = 0; i <= samples; ++i) {
            const double pi = static_cast<double>(i) / samples;
            csv << csv_number(pi) << ',' << csv_number(sol.value(pi)) << '\n';
        }
    }
    return 0;
}

json estimate_json(const McEstimate& e, double closed_form) {
    return json{{"mean", e.mean},
                {"std_error", e.std_error},
                {"n", e.n},
                {"censored", e.censored_count},
                {"closed_form", closed_form}};
}

void print_row(const std::string& label, const McEstimate& e, double closed) {
    std::printf("%-26s %12.6f +- %-10.6f closed form %12.6f\n", label.c_str(), e.mean,
                e.std_error, closed);
}

int cmd_simulate(const CommonArgs& args) {
    const IniFile ini = IniFile::parse_file(args.config_path);
    SimulateRequest req = load_simulate(ini);
    ini.check_all_consumed();

    if (args.seed) {
        req.sim.seed = *args.seed;
        req.have_seed = true;
    }
    if (!req.have_seed) {
        throw ConfigError("simulate: an explicit seed is required (--seed or [simulate] seed)");
    }
    if (args.paths) req.sim.n_paths = *args.paths;
    if (args.dt) req.sim.dt = *args.dt;

    const double pi = req.sim.p;
    const double delta = req.sim.delta;
    const double u = req.sim.u;

    fs::create_directories(args.out_dir);
    json out;
    out["config"] = {{"pi", pi},
                     {"delta", delta},
                     {"u", u},
                     {"dt", req.sim.dt},
                     {"paths", req.sim.n_paths},
                     {"seed", req.sim.seed},
                     {"bridge", req.sim.bridge_correction}};

    for (const std::string& which : req.estimators) {
        if (which == "tau") {
            const McEstimate est = mc_expected_tau(req.sim, pi);
            const double closed = 2.0 / (u * u) * (psi(pi) - psi(delta));
            print_row("E[tau]", est, closed);
            out["expected_tau"] = estimate_json(est, closed);
        } else if (which == "decision") {
            const DecisionErrors de = mc_decision_and_errors(req.sim, pi);
            const auto [q1, q0] = decision_probabilities(delta, pi);
            print_row("P(upper | theta=1)", de.p_upper_given_1, q1);
            print_row("P(upper | theta=0)", de.p_upper_given_0, q0);
            print_row("type I error", de.type1, q0);
            print_row("type II error", de.type2, 1.0 - q1);
            print_row("power", de.power, q1);
            out["decision"] = {{"p_upper_given_1", estimate_json(de.p_upper_given_1, q1)},
                               {"p_upper_given_0", estimate_json(de.p_upper_given_0, q0)},
                               {"type1", estimate_json(de.type1, q0)},
                               {"type2", estimate_json(de.type2, 1.0 - q1)},
                               {"power", estimate_json(de.power, q1)}};
        } else if (which == "laplace") {
            if (req.alphas.empty()) {
                throw ConfigError("simulate: laplace estimator needs [simulate] alphas");
            }
            const int theta = req.sim.theta_mode == ThetaMode::Fixed0 ? 0 : 1;
            const auto ests = mc_laplace(req.sim, pi, req.alphas);
            json rows = json::array();
            for (std::size_t i = 0; i < req.alphas.size(); ++i) {
                const double closed = laplace_tau(delta, pi, u, req.alphas[i], theta);
                print_row("E[e^-a*tau], a=" + std::to_string(req.alphas[i]), ests[i], closed);
                rows.push_back({{"alpha", req.alphas[i]},
                                {"estimate", estimate_json(ests[i], closed)}});
            }
            out["laplace"] = std::move(rows);
        } else if (which == "density") {
            const int theta = req.sim.theta_mode == ThetaMode::Fixed0 ? 0 : 1;
            if (req.sim.theta_mode == ThetaMode::Bernoulli) {
                throw ConfigError("simulate: density estimator needs a fixed theta mode");
            }
            const TauHistogram h =
                mc_tau_density_histogram(req.sim, pi, req.bins, req.t_hi, theta);
            const DensitySeries dens(delta, pi, u, theta);
            std::ofstream csv(fs::path(args.out_dir) / "tau_density.csv");
            csv << "t_lo,t_hi,mc_density,series_density\n";
            for (std::size_t i = 0; i < h.counts.size(); ++i) {
                const double lo = h.t_lo + h.bin_width() * static_cast<double>(i);
                const double mid = lo + 0.5 * h.bin_width();
                csv << csv_number(lo) << ',' << csv_number(lo + h.bin_width()) << ','
                    << csv_number(h.density(i)) << ',' << csv_number(dens(mid)) << '\n';
            }
            std::cout << "density histogram written to "
                      << (fs::path(args.out_dir) / "tau_density.csv").string() << "\n";
            out["density"] = {{"bins", req.bins}, {"t_hi", req.t_hi}, {"n", h.n_total},
                              {"beyond", h.n_beyond}};
        }
    }

    if (req.raw_csv) {
        const auto outcomes = simulate_paths(req.sim);
        std::ofstream csv(fs::path(args.out_dir) / "tau_samples.csv");
        csv << "path_index,theta,tau,exit_side\n";
        for (std::size_t i = 0; i < outcomes.size(); ++i) {
            const auto& o = outcomes[i];
            const char* side = o.exit_side == ExitSide::Upper
                                   ? "upper"
                                   : (o.exit_side == ExitSide::Lower ? "lower" : "censored");
            csv << i << ',' << o.theta << ',' << csv_number(o.tau) << ',' << side << '\n';
        }
    }

    write_text(fs::path(args.out_dir) / "simulate_summary.json", out.dump(2) + "\n");
    return 0;
}

int cmd_stats(const CommonArgs& args) {
    const IniFile ini = IniFile::parse_file(args.config_path);
    const StatsRequest req = load_stats(ini);

    fs::create_directories(args.out_dir);

    if (req.sweep_param) {
        // Characteristic sweep of the quadratic-cost problem over a, b or c.
        const ProblemConfig pc = load_problem(ini);
        ini.check_all_consumed();
        if (pc.cost.kind != CostModel::Kind::Quadratic) {
            throw ConfigError("stats sweep: requires a quadratic cost in [problem]");
        }
        std::ofstream csv(fs::path(args.out_dir) / "characteristics_sweep.csv");
        csv << "parameter,type1,type2,power,mean_tau_1,mean_tau_0\n";
        for (int i = 0; i < req.sweep_n; ++i) {
            const double v =
                req.sweep_from + (req.sweep_to - req.sweep_from) * i / (req.sweep_n - 1.0);
            double a = pc.cost.a, b = pc.cost.b, c = pc.cost.c;
            (*req.sweep_param == "a" ? a : *req.sweep_param == "b" ? b : c) = v;
            const Solution sol = solve(pc.penalty, CostModel::quadratic(a, b, c), pc.uset);
            if (sol.regime() != SolRegime::PositiveM || !sol.eta_solution().attained) {
                throw ConvergenceError("stats sweep point is degenerate (regime not PositiveM)");
            }
            const TestCharacteristics tc = characteristics(sol, req.pi, pc.penalty);
            csv << csv_number(v) << ',' << csv_number(tc.type1) << ',' << csv_number(tc.type2)
                << ',' << csv_number(tc.power) << ',' << csv_number(tc.mean_tau_1) << ','
                << csv_number(tc.mean_tau_0) << '\n';
        }
        std::cout << "sweep written to "
                  << (fs::path(args.out_dir) / "characteristics_sweep.csv").string() << "\n";
        return 0;
    }

    ini.check_all_consumed();
    const auto [q1, q0] = decision_probabilities(req.A, req.pi);
    const auto [m1, m0] = conditional_mean_tau(req.A, req.pi, req.u);
    std::printf("boundary A = %g, start pi = %g, u = %g\n", req.A, req.pi, req.u);
    std::printf("P(upper | theta=1) = %.12f\n", q1);
    std::printf("P(upper | theta=0) = %.12f\n", q0);
    std::printf("E[tau | theta=1]   = %.12f\n", m1);
    std::printf("E[tau | theta=0]   = %.12f\n", m0);
    std::printf("type I = %.12f, type II = %.12f, power = %.12f\n", q0, 1.0 - q1, q1);

    json out{{"A", req.A},          {"pi", req.pi},   {"u", req.u},
             {"p_upper_1", q1},     {"p_upper_0", q0}, {"mean_tau_1", m1},
             {"mean_tau_0", m0},    {"type1", q0},     {"type2", 1.0 - q1},
             {"power", q1}};
    if (!req.alphas.empty()) {
        json rows = json::array();
        for (double alpha : req.alphas) {
            const double v = laplace_tau(req.A, req.pi, req.u, alpha, req.theta);
            std::printf("E[e^-a*tau | theta=%d], a=%-8g = %.12f\n", req.theta, alpha, v);
            rows.push_back({{"alpha", alpha}, {"value", v}});
        }
        out["laplace"] = std::move(rows);
    }
    if (!req.density_t.empty()) {
        const DensitySeries dens(req.A, req.pi, req.u, req.theta);
        json rows = json::array();
        for (double t : req.density_t) {
            rows.push_back({{"t", t}, {"density", dens(t)}});
        }
        out["density"] = std::move(rows);
    }
    write_text(fs::path(args.out_dir) / "stats.json", out.dump(2) + "\n");
    return 0;
}

int cmd_figures(const CommonArgs& args) {
    FigureOptions opts;
    if (!args.config_path.empty()) {
        const IniFile ini = IniFile::parse_file(args.config_path);
        opts.fig1_points = static_cast<int>(ini.get_int("figures", "fig1_points", opts.fig1_points));
        opts.fig2_pi_points =
            static_cast<int>(ini.get_int("figures", "fig2_pi_points", opts.fig2_pi_points));
        opts.fig3_t_max = ini.get_double("figures", "fig3_t_max", opts.fig3_t_max);
        opts.fig3_t_points =
            static_cast<int>(ini.get_int("figures", "fig3_t_points", opts.fig3_t_points));
        opts.fig3_errors_points = static_cast<int>(
            ini.get_int("figures", "fig3_errors_points", opts.fig3_errors_points));
    }
    write_figure_csvs(args.out_dir, opts);
    std::cout << "figure data written to " << args.out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"solver and Monte Carlo validator for controlled Bayesian sequential testing"};
    app.require_subcommand(1);

    CommonArgs args;

    auto add_common = [&](CLI::App* sub, bool config_required) {
        auto* opt = sub->add_option("--config", args.config_path, "INI config file");
        if (config_required) opt->required();
        sub->add_option("--out", args.out_dir, "output directory");
        sub->add_option("--format", args.format, "output format")
            ->check(CLI::IsMember({"csv", "json"}));
    };

    auto* solve_cmd = app.add_subcommand("solve", "compute regime, boundary and value function");
    add_common(solve_cmd, true);
    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo estimates vs closed forms");
    add_common(sim_cmd, true);
    std::uint64_t seed_arg = 0;
    long long paths_arg = 0;
    double dt_arg = 0.0;
    sim_cmd->add_option("--seed", seed_arg, "RNG seed (required unless set in config)");
    sim_cmd->add_option("--paths", paths_arg, "number of Monte Carlo paths");
    sim_cmd->add_option("--dt", dt_arg, "time step");
    auto* stats_cmd = app.add_subcommand("stats", "closed-form operating characteristics");
    add_common(stats_cmd, true);
    auto* fig_cmd = app.add_subcommand("figures", "regenerate figure CSV data");
    add_common(fig_cmd, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    if (sim_cmd->parsed()) {
        if (sim_cmd->count("--seed")) args.seed = seed_arg;
        if (sim_cmd->count("--paths")) args.paths = paths_arg;
        if (sim_cmd->count("--dt")) args.dt = dt_arg;
    }

    try {
        if (solve_cmd->parsed()) return cmd_solve(args);
        if (sim_cmd->parsed()) return cmd_simulate(args);
        if (stats_cmd->parsed()) return cmd_stats(args);
        if (fig_cmd->parsed()) return cmd_figures(args);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const DomainError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ConvergenceError& e) {
        std::cerr << "convergence error: " << e.what() << "\n";
        return kExitConvergence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
