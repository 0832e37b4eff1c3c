#include "seqbayes/stats.hpp"

#include <cmath>

namespace seqbayes {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void check_boundary(double A) {
    if (!(A > 0.0 && A < 0.5)) throw DomainError("stats: boundary A must lie in (0, 0.5)");
}

void check_start(double A, double pi) {
    if (!(pi >= A && pi <= 1.0 - A))
        throw DomainError("stats: start pi must lie in [A, 1-A]");
}

void check_u(double u) {
    if (u == 0.0 || !std::isfinite(u)) throw DomainError("stats: u must be finite and nonzero");
}

// sinh(a b) / sinh(2 Gamma b) for 0 <= a <= 2 Gamma, all exponents <= 0.
double sinh_ratio(double a, double two_gamma, double b) {
    const double num = 1.0 - std::exp(-2.0 * a * b);
    const double den = 1.0 - std::exp(-2.0 * two_gamma * b);
    return std::exp((a - two_gamma) * b) * num / den;
}

}  // namespace

std::pair<double, double> decision_probabilities(double A, double pi) {
    check_boundary(A);
    check_start(A, pi);
    const double q1 = (1.0 - A) * (pi - A) / ((1.0 - 2.0 * A) * pi);
    const double q0 = A * (pi - A) / ((1.0 - 2.0 * A) * (1.0 - pi));
    return {q1, q0};
}

std::pair<double, double> conditional_mean_tau(double A, double pi, double u) {
    check_boundary(A);
    check_start(A, pi);
    check_u(u);
    const auto [q1, q0] = decision_probabilities(A, pi);
    const double gamma = std::log((1.0 - A) / A);
    const double gamma_plus_y = std::log((1.0 - A) * pi / (A * (1.0 - pi)));
    const double pref = 2.0 / (u * u);
    const double mean1 = pref * (2.0 * gamma * q1 - gamma_plus_y);
    const double mean0 = pref * (gamma_plus_y - 2.0 * gamma * q0);
    return {mean1, mean0};
}

double laplace_tau(double A, double pi, double u, double alpha, int theta) {
    check_boundary(A);
    check_start(A, pi);
    check_u(u);
    if (alpha < 0.0) throw DomainError("laplace_tau: alpha must be >= 0");
    if (theta != 0 && theta != 1) throw DomainError("laplace_tau: theta must be 0 or 1");

    const double gamma = std::log((1.0 - A) / A);
    const double y = std::log(pi / (1.0 - pi));
    const double beta = std::sqrt(2.0 * alpha / (u * u) + 0.25);
    const double two_gamma = 2.0 * gamma;
    // theta = 1: e^{-(G+y)/2} sinh((G-y)b) + e^{(G-y)/2} sinh((G+y)b), over sinh(2Gb);
    // theta = 0 is the reflection y -> -y.
    const double ys = theta == 1 ? y : -y;
    const double t1 = std::exp(-0.5 * (gamma + ys)) * sinh_ratio(gamma - ys, two_gamma, beta);
    const double t2 = std::exp(0.5 * (gamma - ys)) * sinh_ratio(gamma + ys, two_gamma, beta);
    return t1 + t2;
}

DensitySeries::DensitySeries(double A, double pi, double u, int theta, int truncation_K)
    : A_(A), pi_(pi), u_(u), theta_(theta), truncation_K_(truncation_K) {
    check_boundary(A);
    check_start(A, pi);
    check_u(u);
    if (theta != 0 && theta != 1) throw DomainError("density: theta must be 0 or 1");
    if (truncation_K < 1) throw DomainError("density: truncation_K must be >= 1");
    gamma_ = std::log((1.0 - A) / A);
    y_ = std::log(pi / (1.0 - pi));
}

double DensitySeries::operator()(double t) const {
    if (!(t > 0.0)) throw DomainError("density: t must be positive");
    const double s = u_ * u_ * t;  // two-barrier kernel runs in logit time u^2 t
    const double b = 2.0 * gamma_;
    // Kernel offsets and exponential coefficients per conditioning:
    //   theta = 1: e^{-(G+y)/2} ss_s(G-y, 2G) + e^{(G-y)/2} ss_s(G+y, 2G)
    //   theta = 0: e^{+(G+y)/2} ss_s(G-y, 2G) + e^{(y-G)/2} ss_s(G+y, 2G)
    const double a1 = gamma_ - y_;
    const double a2 = gamma_ + y_;
    const double c1 = theta_ == 1 ? -0.5 * (gamma_ + y_) : 0.5 * (gamma_ + y_);
    const double c2 = theta_ == 1 ? 0.5 * (gamma_ - y_) : 0.5 * (y_ - gamma_);

    const double pref = u_ * u_ / (std::sqrt(kTwoPi) * std::pow(s, 1.5));
    auto term = [&](double a, double c, int k) {
        const double m = b - a + 2.0 * static_cast<double>(k) * b;
        return pref * m * std::exp(c - m * m / (2.0 * s) - s / 8.0);
    };

    double sum = term(a1, c1, 0) + term(a2, c2, 0);
    double last_round = std::abs(sum);
    for (int k = 1; k <= truncation_K_; ++k) {
        const double t1 = term(a1, c1, k);
        const double t2 = term(a1, c1, -k);
        const double t3 = term(a2, c2, k);
        const double t4 = term(a2, c2, -k);
        sum += t1 + t2 + t3 + t4;
        last_round = std::max(std::max(std::abs(t1), std::abs(t2)),
                              std::max(std::abs(t3), std::abs(t4)));
        if (last_round < 1e-16 * std::max(std::abs(sum), 1e-300)) return sum;
    }
    if (last_round > 1e-14 * std::max(std::abs(sum), 1e-300)) {
        warning_.store(true, std::memory_order_relaxed);
    }
    return sum;
}

TestCharacteristics characteristics(const Solution& sol, double pi, const PenaltyModel& penalty) {
    if (sol.regime() != SolRegime::PositiveM || !sol.eta_solution().attained) {
        throw NotApplicableError("characteristics: requires PositiveM with attained minimizer");
    }
    if (!(pi > 0.0 && pi < 1.0)) throw DomainError("characteristics: pi must lie in (0,1)");

    const double A = sol.A_star();
    const double u = *sol.eta_solution().u_star;
    TestCharacteristics tc;
    tc.A = A;
    tc.pi = pi;
    tc.u = u;

    const bool in_continuation = A < 0.5 && pi > A && pi < 1.0 - A;
    if (!in_continuation) {
        // Test never runs; the immediate decision h(pi) settles everything.
        tc.degenerate = true;
        const bool reject = penalty.selector(pi) >= 0.5;
        tc.p_upper_1 = tc.p_upper_0 = reject ? 1.0 : 0.0;
        tc.mean_tau_1 = tc.mean_tau_0 = 0.0;
        tc.type1 = reject ? 1.0 : 0.0;
        tc.type2 = reject ? 0.0 : 1.0;
        tc.power = reject ? 1.0 : 0.0;
        return tc;
    }

    const auto [q1, q0] = decision_probabilities(A, pi);
    const auto [m1, m0] = conditional_mean_tau(A, pi, u);
    tc.p_upper_1 = q1;
    tc.p_upper_0 = q0;
    tc.mean_tau_1 = m1;
    tc.mean_tau_0 = m0;
    tc.type1 = q0;
    tc.type2 = 1.0 - q1;
    tc.power = q1;
    return tc;
}

}  // namespace seqbayes
