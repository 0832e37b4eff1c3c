#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nlohmann/json_fwd.hpp"
#include "seqbayes/control.hpp"
#include "seqbayes/geometry.hpp"
#include "seqbayes/penalty.hpp"

namespace seqbayes {

enum class SolRegime { PositiveM, ZeroM, NegativeM };

enum class PolicyKind {
    ConstantControlAndThreshold,  // constant u*, stop when posterior exits (A*, 1-A*)
    EpsilonOptimalFamily,         // no optimal pair; (u_n, delta_n) recipes
    StopImmediately,              // continuation region empty (A* = 1/2)
    NeverStop                     // M < 0: run any control with eta < 0 forever
};

struct PolicyDescription {
    PolicyKind kind = PolicyKind::ConstantControlAndThreshold;
    std::optional<double> u_star;
    double A_star = 0.0;
    bool has_epsilon_recipe = false;  // pairs produced by Solution::epsilon_recipe
};

// Linear stopping boundaries for the observation process X: stop when
// X(t) leaves (u* t / 2 + gamma_lower / u*,  u* t / 2 + gamma_upper / u*).
struct XBoundaries {
    double p = 0.5;
    double u_star = 0.0;
    double gamma_upper = 0.0;  // ln((1-A*)(1-p) / (A* p))
    double gamma_lower = 0.0;  // ln(A*(1-p) / ((1-A*) p))
};

// Assembled solution: regime, boundary, evaluable value function, policy.
// Immutable and shareable across threads.
class Solution {
  public:
    SolRegime regime() const { return regime_; }
    double M() const { return M_; }
    double K() const { return K_; }  // = 2M in the PositiveM regime, else 0
    double A_star() const { return A_star_; }
    const EtaSolution& eta_solution() const { return eta_; }
    const PolicyDescription& policy() const { return policy_; }
    const PenaltyModel& penalty() const { return penalty_; }
    const CostModel& cost() const { return cost_; }
    const ControlSet& control_set() const { return uset_; }

    // Value function V(pi) on [0,1]. Endpoints return the g-limits (= 0).
    // ZeroM: identically 0. NegativeM: -infinity (a genuine IEEE -inf, and
    // regime() discriminates it from any finite value).
    double value(double pi) const;

    // Epsilon-optimal (u, delta) pairs for the given start pi, when the
    // policy is an epsilon family (empty otherwise):
    //   PositiveM, not attained: delta_n decreasing to A*, u_n minimizing.
    //   ZeroM, not attained: delta_k solving Psi(pi) - Psi(delta_k) = k and
    //   u_{n_k} chosen with eta(u_{n_k}) <= 1/k^2.
    std::vector<std::pair<double, double>> epsilon_recipe(double pi, int count) const;

    // {regime, M, u_star, attained, A_star, value_samples}. Non-finite
    // numbers are serialized as the strings "inf" / "-inf".
    nlohmann::json to_json(int n_value_samples = 512) const;

  private:
    friend Solution solve(const PenaltyModel&, const CostModel&, const ControlSet&);

    SolRegime regime_ = SolRegime::PositiveM;
    double M_ = 0.0;
    double K_ = 0.0;
    double A_star_ = 0.0;
    EtaSolution eta_;
    PolicyDescription policy_;
    PenaltyModel penalty_;
    CostModel cost_;
    ControlSet uset_ = ControlSet::all_reals_nonzero();
};

// Full assembly: minimize eta, classify the regime, locate the boundary
// (root of g' = 2M Psi'), and attach the value function and policy.
Solution solve(const PenaltyModel& penalty, const CostModel& cost, const ControlSet& uset);

// Pointwise verification of the variational inequalities on a grid of (0,1)
// excluding 1e-6 neighborhoods of the non-smooth points {A*, 1-A*}:
//   (i)   V <= g
//   (ii)  inf_u [ V''(pi) (u pi (1-pi))^2 / 2 + phi(u) ] + c >= 0
//   (iii) (g - V) * (expression in (ii)) = 0,
// (iii) checked only when a bounded minimizing sequence for eta exists.
struct VIReport {
    double max_violation_i = 0.0;
    double max_violation_ii = 0.0;
    double max_violation_iii = 0.0;
    bool iii_checked = false;
    double smooth_fit_gap = 0.0;  // |2M Psi'(A*) - g'(A*)|, 0 when A* = 1/2
    int grid_points = 0;

    bool ok(double tol) const {
        return max_violation_i <= tol && max_violation_ii <= tol &&
               (!iii_checked || max_violation_iii <= tol);
    }
};

VIReport verify_vi(const Solution& sol, const PenaltyModel& penalty, const CostModel& cost,
                   const ControlSet& uset, int grid_n = 4096);

// Same check against an explicitly supplied boundary (diagnostic use: probing
// perturbed boundaries). The value function is V-hat(.; 2M, boundary).
VIReport verify_vi_at_boundary(const Solution& sol, double boundary, const PenaltyModel& penalty,
                               const CostModel& cost, const ControlSet& uset, int grid_n = 4096);

// X-space linear stopping boundaries. Requires PositiveM with an attained
// minimizer and 0 < p < 1; throws NotApplicableError otherwise.
XBoundaries x_space_boundaries(const Solution& sol, double p);

}  // namespace seqbayes
