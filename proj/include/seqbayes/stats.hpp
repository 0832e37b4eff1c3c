#pragma once

#include <atomic>

#include "seqbayes/errors.hpp"
#include "seqbayes/solver.hpp"

namespace seqbayes {

// Closed-form operating characteristics of the constant-control threshold
// test with boundary A, start pi and control u. Everything here is exact
// (no Monte Carlo): these are the cross-check targets for the simulator.

// (P(upper exit | theta = 1), P(upper exit | theta = 0)).
std::pair<double, double> decision_probabilities(double A, double pi);

// (E[tau | theta = 1], E[tau | theta = 0]).
std::pair<double, double> conditional_mean_tau(double A, double pi, double u);

// E[e^{-alpha tau} | theta]. Evaluated in exponential form with all
// exponents <= 0, stable for any boundary width. theta in {0, 1}.
double laplace_tau(double A, double pi, double u, double alpha, int theta);

// Truncated series for the conditional density of tau. Terms are the
// two-barrier Brownian exit kernel in logit coordinates
// (Gamma = ln((1-A)/A), y = ln(pi/(1-pi))), summed outward from k = 0 with
// early exit once a term falls below 1e-16 of the running sum.
class DensitySeries {
  public:
    DensitySeries(double A, double pi, double u, int theta, int truncation_K = 50);

    double operator()(double t) const;

    double A() const { return A_; }
    double pi() const { return pi_; }
    double u() const { return u_; }
    int theta() const { return theta_; }

    // Set when some evaluation exhausted the truncation budget while the last
    // |k| term still carried more than 1e-14 relative mass.
    bool truncation_warning() const { return warning_.load(std::memory_order_relaxed); }

  private:
    double A_, pi_, u_;
    int theta_;
    int truncation_K_;
    double gamma_, y_;
    mutable std::atomic<bool> warning_{false};
};

inline double tau_density(const DensitySeries& series, double t) { return series(t); }

struct TestCharacteristics {
    double A = 0.0;
    double pi = 0.0;
    double u = 0.0;
    double p_upper_1 = 0.0;
    double p_upper_0 = 0.0;
    double mean_tau_1 = 0.0;
    double mean_tau_0 = 0.0;
    double type1 = 0.0;   // P(reject | theta = 0)
    double type2 = 0.0;   // P(fail to reject | theta = 1)
    double power = 0.0;   // P(reject | theta = 1)
    bool degenerate = false;  // start outside the continuation region
};

// Assemble the full operating characteristics of the solved test at start
// belief pi, with the hard-classification labeling h(1-A*) = reject.
// Start beliefs outside the continuation region follow the degenerate
// conventions: pi >= 1-A* rejects immediately (type1 = 1, type2 = 0),
// pi <= A* accepts immediately (type1 = 0, type2 = 1). Requires a PositiveM
// solution with attained minimizer; throws NotApplicableError otherwise.
TestCharacteristics characteristics(const Solution& sol, double pi, const PenaltyModel& penalty);

}  // namespace seqbayes
