#pragma once

#include <cstdint>
#include <vector>

#include "seqbayes/errors.hpp"

namespace seqbayes {

enum class ThetaMode { Bernoulli, Fixed0, Fixed1 };

// Which of the three equivalent representations drives a path:
//   PiEuler    Euler-Maruyama on the posterior SDE, innovation increments
//              reconstructed from dX = theta u dt + dW.
//   LogitExact exact Gaussian transition of Y = logit(Pi); only the
//              boundary-crossing time is discretized.
//   StrongX    advance X = theta u t + W and map through the likelihood
//              ratio L = exp(u X - u^2 t / 2).
enum class PathSpace { PiEuler, LogitExact, StrongX };

struct SimConfig {
    double p = 0.5;           // prior P(theta = 1) and posterior start
    double u = 1.0;           // constant signal intensity, != 0
    double delta = 0.0;       // stop when posterior exits (delta, 1-delta); 0 = no boundary
    double dt = 1e-4;         // time step (<= 1e-2)
    std::int64_t n_paths = 1;
    double t_max = -1.0;      // horizon cap; < 0 = auto (1e3 x closed-form E[tau])
    std::uint64_t seed = 0;
    ThetaMode theta_mode = ThetaMode::Bernoulli;
    PathSpace space = PathSpace::LogitExact;
    bool bridge_correction = true;  // Brownian-bridge boundary-crossing correction
    int n_threads = 0;              // 0 = hardware default; results identical either way

    // ConfigError on broken invariants. Hitting-time estimators additionally
    // require delta < p < 1 - delta and delta > 0.
    void validate(bool hitting_run) const;
    double effective_t_max() const;
};

enum class ExitSide { Lower, Upper, Censored };

struct PathOutcome {
    double tau = 0.0;            // exit time, or t_max when censored
    ExitSide exit_side = ExitSide::Censored;
    int theta = 0;
    double pi_at_exit = 0.0;     // clamped to the crossed boundary on exit
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;      // sample std / sqrt(n)
    std::int64_t n = 0;
    std::int64_t censored_count = 0;
};

// Simulate one path of the configured representation until the posterior
// exits (delta, 1-delta) or t_max is reached. Starting on or outside the
// boundary exits immediately with tau = 0.
PathOutcome simulate_path(const SimConfig& cfg, std::int64_t path_index);

// All paths, in path-index order (parallel internally, deterministic output).
std::vector<PathOutcome> simulate_paths(const SimConfig& cfg);

// Sample mean of tau over non-censored paths. Censored paths are counted and
// excluded from the mean.
McEstimate mc_expected_tau(const SimConfig& cfg, double pi_start);

struct DecisionErrors {
    McEstimate p_upper_given_1;
    McEstimate p_upper_given_0;
    McEstimate type1;   // upper exit frequency under theta = 0
    McEstimate type2;   // lower exit frequency under theta = 1
    McEstimate power;   // upper exit frequency under theta = 1
};

// Conditional exit-side frequencies by theta (Bernoulli runs).
DecisionErrors mc_decision_and_errors(const SimConfig& cfg, double pi_start);

// Sample means of e^{-alpha tau} per alpha. Requires a Fixed theta mode.
// Censored paths contribute e^{-alpha t_max} and are counted.
std::vector<McEstimate> mc_laplace(const SimConfig& cfg, double pi_start,
                                   const std::vector<double>& alphas);

struct TauHistogram {
    double t_lo = 0.0, t_hi = 0.0;
    std::vector<std::int64_t> counts;   // bins of [t_lo, t_hi)
    std::int64_t n_total = 0;           // all simulated paths
    std::int64_t n_beyond = 0;          // tau >= t_hi (incl. censored)
    double bin_width() const { return (t_hi - t_lo) / static_cast<double>(counts.size()); }
    double density(std::size_t i) const {
        return static_cast<double>(counts[i]) / (static_cast<double>(n_total) * bin_width());
    }
};

// Histogram of tau samples conditioned on theta (use a Fixed theta mode, or
// Bernoulli plus select_theta to keep only matching paths).
TauHistogram mc_tau_density_histogram(const SimConfig& cfg, double pi_start, int bins,
                                      double t_hi, int select_theta = -1);

struct CrosscheckReport {
    double max_diff_euler_vs_likelihood = 0.0;  // PiEuler vs exact posterior, shared X path
    double max_diff_logit_vs_strongx = 0.0;     // two exact representations, shared W path
    int theta = 0;
};

// Drive all three representations with one shared increment stream over a
// fixed horizon (no stopping) and report maximal pathwise deviations.
CrosscheckReport crosscheck_representations(const SimConfig& cfg, double t_horizon,
                                            std::int64_t path_index = 0);

// Deterministic pairwise reduction helpers (fixed association order, so sums
// are bitwise reproducible regardless of thread count).
double pairwise_sum(const double* data, std::size_t n);
McEstimate summarize(const std::vector<double>& values, std::int64_t censored);

}  // namespace seqbayes
