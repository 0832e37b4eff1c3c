#include "seqbayes/figures.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <vector>

#include "seqbayes/solver.hpp"
#include "seqbayes/stats.hpp"

namespace seqbayes {

namespace {

std::ofstream open_csv(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open output file " + path.string());
    return out;
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        xs[static_cast<std::size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    }
    xs.back() = hi;
    return xs;
}

Solution solve_quadratic(double a, double b, double c) {
    return solve(PenaltyModel::classic(), CostModel::quadratic(a, b, c),
                 ControlSet::all_reals_nonzero());
}

}  // namespace

std::string csv_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_figure_csvs(const std::string& out_dir, const FigureOptions& opts) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);

    // fig1: boundary sweeps. The b sweep ends just short of the degenerate
    // point b = 2 sqrt(ac), where the boundaries reach 0 and 1.
    {
        auto out = open_csv(dir / "fig1_boundaries.csv");
        out << "sweep,value,A_star,one_minus_A_star,M,u_star\n";
        auto emit = [&](const char* sweep, double v, double a, double b, double c) {
            const Solution sol = solve_quadratic(a, b, c);
            if (sol.regime() != SolRegime::PositiveM) {
                throw ConvergenceError("fig1 sweep point left the PositiveM regime");
            }
            const double us = sol.eta_solution().u_star
                                  ? *sol.eta_solution().u_star
                                  : std::numeric_limits<double>::quiet_NaN();
            out << sweep << ',' << csv_number(v) << ',' << csv_number(sol.A_star()) << ','
                << csv_number(1.0 - sol.A_star()) << ',' << csv_number(sol.M()) << ','
                << csv_number(us) << '\n';
        };
        for (double a : linspace(0.26, 5.0, opts.fig1_points)) emit("a", a, a, 1.0, 1.0);
        for (double b : linspace(0.0, 2.0 - 1e-6, opts.fig1_points)) emit("b", b, 1.0, b, 1.0);
        for (double c : linspace(0.26, 5.0, opts.fig1_points)) emit("c", c, 1.0, 1.0, c);
    }

    // fig2: value function curves. M >= 0 everywhere on these grids; ZeroM
    // endpoints emit the identically-zero value.
    {
        auto out = open_csv(dir / "fig2_value.csv");
        out << "family,param,pi,V\n";
        auto emit_curve = [&](const char* family, double param, double a, double b, double c) {
            const Solution sol = solve_quadratic(a, b, c);
            for (int i = 0; i <= opts.fig2_pi_points; ++i) {
                const double pi = static_cast<double>(i) / opts.fig2_pi_points;
                out << family << ',' << csv_number(param) << ',' << csv_number(pi) << ','
                    << csv_number(sol.value(pi)) << '\n';
            }
        };
        for (double a : {0.25, 0.5, 1.0, 2.0, 3.0, 5.0, 1e4}) emit_curve("a", a, a, 1.0, 1.0);
        for (double b : {0.0, 0.4, 0.8, 1.2, 1.6, 2.0}) emit_curve("b", b, 1.0, b, 1.0);
    }

    // fig3 left/middle: conditional stopping-time densities at pi = 0.625.
    {
        auto out = open_csv(dir / "fig3_densities.csv");
        out << "b,theta,t,density\n";
        for (double b : {1.28, 1.31, 1.34, 1.37, 1.4}) {
            const Solution sol = solve_quadratic(0.5, b, 1.0);
            if (sol.regime() != SolRegime::PositiveM || !sol.eta_solution().attained) {
                throw ConvergenceError("fig3 density point is degenerate");
            }
            for (int theta : {0, 1}) {
                const DensitySeries dens(sol.A_star(), 0.625, *sol.eta_solution().u_star, theta);
                for (int i = 1; i <= opts.fig3_t_points; ++i) {
                    const double t = opts.fig3_t_max * static_cast<double>(i) / opts.fig3_t_points;
                    out << csv_number(b) << ',' << theta << ',' << csv_number(t) << ','
                        << csv_number(dens(t)) << '\n';
                }
            }
        }
    }

    // fig3 right: operating characteristics over b in [1, sqrt(2)]. At the
    // upper endpoint M = 0: the test never stops and identifies theta with
    // certainty, so type1 = type2 = 0, power = 1 and the mean times diverge.
    {
        auto out = open_csv(dir / "fig3_errors.csv");
        out << "parameter,type1,type2,power,mean_tau_1,mean_tau_0\n";
        for (double b : linspace(1.0, std::sqrt(2.0), opts.fig3_errors_points)) {
            const Solution sol = solve_quadratic(0.5, b, 1.0);
            double t1, t2, pw, m1, m0;
            if (sol.regime() != SolRegime::PositiveM) {
                t1 = 0.0;
                t2 = 0.0;
                pw = 1.0;
                m1 = m0 = std::numeric_limits<double>::infinity();
            } else {
                const TestCharacteristics tc = characteristics(sol, 0.625, PenaltyModel::classic());
                t1 = tc.type1;
                t2 = tc.type2;
                pw = tc.power;
                m1 = tc.mean_tau_1;
                m0 = tc.mean_tau_0;
            }
            out << csv_number(b) << ',' << csv_number(t1) << ',' << csv_number(t2) << ','
                << csv_number(pw) << ',' << csv_number(m1) << ',' << csv_number(m0) << '\n';
        }
    }
}

}  // namespace seqbayes
