#include "seqbayes/solver.hpp"

#include <cmath>
#include <limits>

#include "nlohmann/json.hpp"

namespace seqbayes {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBoundaryExclusion = 1e-6;

// Solve Psi(delta) = target on (0, 1/2) by bisection; Psi is increasing there
// from -inf to 0. Returns 0.5 when the target is not reachable (target >= 0).
double invert_psi_lower(double target) {
    if (target >= 0.0) return 0.5;
    double lo = 1e-300, hi = 0.5;
    // Psi(lo) ~ ln(lo) -> -inf, so a root always exists for target < 0.
    for (int it = 0; it < 400 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (psi(mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

Solution solve(const PenaltyModel& penalty, const CostModel& cost, const ControlSet& uset) {
    Solution sol;
    sol.penalty_ = penalty;
    sol.cost_ = cost;
    sol.uset_ = uset;
    sol.eta_ = minimize_eta(cost, uset);
    sol.M_ = sol.eta_.M;

    switch (sol.eta_.regime) {
        case Regime::Positive: {
            sol.regime_ = SolRegime::PositiveM;
            sol.K_ = 2.0 * sol.M_;
            sol.A_star_ = solve_boundary(penalty, sol.K_);
            if (sol.A_star_ >= 0.5) {
                sol.policy_.kind = PolicyKind::StopImmediately;
            } else if (sol.eta_.attained) {
                sol.policy_.kind = PolicyKind::ConstantControlAndThreshold;
                sol.policy_.u_star = sol.eta_.u_star;
            } else {
                sol.policy_.kind = PolicyKind::EpsilonOptimalFamily;
                sol.policy_.has_epsilon_recipe = true;
            }
            sol.policy_.A_star = sol.A_star_;
            break;
        }
        case Regime::Zero: {
            sol.regime_ = SolRegime::ZeroM;
            sol.K_ = 0.0;
            sol.A_star_ = 0.0;
            sol.policy_.A_star = 0.0;
            if (sol.eta_.attained) {
                // tau_0 never stops; the posterior converges to theta and the
                // terminal penalty vanishes in the limit.
                sol.policy_.kind = PolicyKind::ConstantControlAndThreshold;
                sol.policy_.u_star = sol.eta_.u_star;
            } else {
                sol.policy_.kind = PolicyKind::EpsilonOptimalFamily;
                sol.policy_.has_epsilon_recipe = true;
            }
            break;
        }
        case Regime::Negative: {
            sol.regime_ = SolRegime::NegativeM;
            sol.K_ = 0.0;
            sol.A_star_ = 0.0;
            sol.policy_.kind = PolicyKind::NeverStop;
            sol.policy_.A_star = 0.0;
            sol.policy_.u_star = sol.eta_.negative_eta_witness;
            break;
        }
    }
    return sol;
}

double Solution::value(double pi) const {
    if (!(pi >= 0.0 && pi <= 1.0)) {
        throw DomainError("value: pi must lie in [0,1]");
    }
    switch (regime_) {
        case SolRegime::ZeroM:
            return 0.0;
        case SolRegime::NegativeM:
            return -kInf;
        case SolRegime::PositiveM:
            break;
    }
    if (pi == 0.0 || pi == 1.0) return 0.0;
    if (pi > A_star_ && pi < 1.0 - A_star_) {
        return K_ * (psi(pi) - psi(A_star_)) + penalty_.g(A_star_);
    }
    return penalty_.g(pi);
}

std::vector<std::pair<double, double>> Solution::epsilon_recipe(double pi, int count) const {
    std::vector<std::pair<double, double>> out;
    if (!policy_.has_epsilon_recipe || count <= 0) return out;
    out.reserve(static_cast<std::size_t>(count));

    if (regime_ == SolRegime::PositiveM) {
        // delta_n decreasing to A* inside (A*, min(pi, 1-pi)).
        const double cap = std::min(pi, 1.0 - pi);
        const double span = std::max(cap - A_star_, 0.0);
        for (int n = 1; n <= count; ++n) {
            const double delta = A_star_ + span * std::exp2(-n);
            out.emplace_back(eta_.minimizing_sequence.u_at(n), delta);
        }
        return out;
    }

    // ZeroM: delta_k solves Psi(pi) - Psi(delta_k) = k, and u_{n_k} walks the
    // minimizing sequence until eta(u) <= 1/k^2.
    const double psi_pi = psi(pi);
    int n = 1;
    for (int k = 1; k <= count; ++k) {
        const double delta_k = invert_psi_lower(psi_pi - static_cast<double>(k));
        const double threshold = 1.0 / (static_cast<double>(k) * static_cast<double>(k));
        double u = eta_.minimizing_sequence.u_at(n);
        for (int guard = 0; guard < 4000; ++guard) {
            const double e = eta(cost_, u);
            if (!std::isfinite(e) || e - M_ <= threshold) break;
            u = eta_.minimizing_sequence.u_at(++n);
        }
        out.emplace_back(u, delta_k);
    }
    return out;
}

nlohmann::json Solution::to_json(int n_value_samples) const {
    nlohmann::json j;
    switch (regime_) {
        case SolRegime::PositiveM:
            j["regime"] = "PositiveM";
            break;
        case SolRegime::ZeroM:
            j["regime"] = "ZeroM";
            break;
        case SolRegime::NegativeM:
            j["regime"] = "NegativeM";
            break;
    }
    auto encode = [](double x) -> nlohmann::json {
        if (std::isfinite(x)) return x;
        return x > 0 ? "inf" : "-inf";
    };
    j["M"] = encode(M_);
    j["attained"] = eta_.attained;
    if (eta_.u_star)
        j["u_star"] = *eta_.u_star;
    else
        j["u_star"] = nullptr;
    j["A_star"] = A_star_;
    nlohmann::json samples = nlohmann::json::array();
    for (int i = 0; i <= n_value_samples; ++i) {
        const double pi = static_cast<double>(i) / n_value_samples;
        samples.push_back({pi, encode(value(pi))});
    }
    j["value_samples"] = std::move(samples);
    return j;
}

namespace {

VIReport verify_impl(const Solution& sol, double boundary, const PenaltyModel& penalty,
                     const CostModel& cost, const ControlSet& uset, int grid_n) {
    if (sol.regime() == SolRegime::NegativeM) {
        throw NotApplicableError("verify_vi: requires the PositiveM or ZeroM regime");
    }
    VIReport rep;
    rep.iii_checked = sol.eta_solution().bounded_minimizing_sequence;

    const double M = sol.M();
    const double K = 2.0 * M;
    const bool zero_regime = sol.regime() == SolRegime::ZeroM;
    const double A = zero_regime ? 0.0 : boundary;

    auto vhat = [&](double pi) {
        if (zero_regime) return 0.0;
        if (pi > A && pi < 1.0 - A) return K * (psi(pi) - psi(A)) + penalty.g(A);
        return penalty.g(pi);
    };

    // Bellman expression on the continuation region reduces to
    // inf_u [phi(u) - M u^2] + c, independent of pi.
    const ScanResult continuation_scan =
        minimize_over_set([&](double u) { return cost.phi(u) - M * u * u; }, uset);
    const double continuation_expr = continuation_scan.inf_value + cost.c;

    // In the stopping region the expression depends on pi only through
    // Lg(pi); for the classic penalty that is identically zero.
    double classic_stop_expr = 0.0;
    if (penalty.kind() == PenaltyKind::Classic) {
        const ScanResult stop_scan = minimize_over_set([&](double u) { return cost.phi(u); }, uset);
        classic_stop_expr = stop_scan.inf_value + cost.c;
    }
    auto stopping_expr = [&](double pi) {
        if (penalty.kind() == PenaltyKind::Classic) return classic_stop_expr;
        const double half_lg = 0.5 * penalty.lg(pi);
        const ScanResult scan =
            minimize_over_set([&](double u) { return half_lg * u * u + cost.phi(u); }, uset,
                              MinimizeOptions{512, 60, 128, 1e-10});
        return scan.inf_value + cost.c;
    };

    int used = 0;
    for (int i = 1; i < grid_n; ++i) {
        const double pi = static_cast<double>(i) / grid_n;
        if (!zero_regime &&
            (std::abs(pi - A) < kBoundaryExclusion || std::abs(pi - (1.0 - A)) < kBoundaryExclusion))
            continue;
        ++used;
        const double g = penalty.g(pi);
        const double v = vhat(pi);
        rep.max_violation_i = std::max(rep.max_violation_i, v - g);

        const bool continuation = zero_regime || (pi > A && pi < 1.0 - A);
        const double expr = continuation ? continuation_expr : stopping_expr(pi);
        rep.max_violation_ii = std::max(rep.max_violation_ii, -expr);
        if (rep.iii_checked) {
            rep.max_violation_iii = std::max(rep.max_violation_iii, std::abs((g - v) * expr));
        }
    }
    rep.grid_points = used;

    if (!zero_regime && A < 0.5) {
        // Smooth fit: interior derivative K Psi'(A) against the outside g'(A).
        rep.smooth_fit_gap = std::abs(K * psi1(A) - penalty.g1(A));
    }
    rep.max_violation_i = std::max(rep.max_violation_i, 0.0);
    rep.max_violation_ii = std::max(rep.max_violation_ii, 0.0);
    return rep;
}

}  // namespace

VIReport verify_vi(const Solution& sol, const PenaltyModel& penalty, const CostModel& cost,
                   const ControlSet& uset, int grid_n) {
    return verify_impl(sol, sol.A_star(), penalty, cost, uset, grid_n);
}

VIReport verify_vi_at_boundary(const Solution& sol, double boundary, const PenaltyModel& penalty,
                               const CostModel& cost, const ControlSet& uset, int grid_n) {
    if (sol.regime() != SolRegime::PositiveM) {
        throw NotApplicableError("verify_vi_at_boundary: requires the PositiveM regime");
    }
    return verify_impl(sol, boundary, penalty, cost, uset, grid_n);
}

XBoundaries x_space_boundaries(const Solution& sol, double p) {
    if (sol.regime() != SolRegime::PositiveM || !sol.eta_solution().attained) {
        throw NotApplicableError("x_space_boundaries: requires PositiveM with attained minimizer");
    }
    if (!(p > 0.0 && p < 1.0)) throw DomainError("x_space_boundaries: p must lie in (0,1)");
    const double A = sol.A_star();
    XBoundaries xb;
    xb.p = p;
    xb.u_star = *sol.eta_solution().u_star;
    xb.gamma_upper = std::log((1.0 - A) * (1.0 - p) / (A * p));
    xb.gamma_lower = std::log(A * (1.0 - p) / ((1.0 - A) * p));
    return xb;
}

}  // namespace seqbayes
