#include "seqbayes/geometry.hpp"

#include <cmath>

#include "seqbayes/errors.hpp"

namespace seqbayes {

namespace {

void check_domain(double pi) {
    if (!(pi > 0.0 && pi < 1.0)) {
        throw DomainError("geometry: pi must lie in (0,1), got " + std::to_string(pi));
    }
}

constexpr int kMaxBisectIter = 200;
constexpr double kBoundaryTol = 1e-12;

// Plain bisection for f with f(lo) and f(hi) of opposite sign.
template <typename F>
double bisect(F&& f, double lo, double hi, double flo) {
    for (int it = 0; it < kMaxBisectIter; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo <= kBoundaryTol) return mid;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    throw ConvergenceError("boundary bisection exhausted 200 iterations");
}

}  // namespace

double psi(double pi) {
    check_domain(pi);
    return (1.0 - 2.0 * pi) * std::log(pi / (1.0 - pi));
}

double psi1(double pi) {
    check_domain(pi);
    return (1.0 - 2.0 * pi) / (pi * (1.0 - pi)) - 2.0 * std::log(pi / (1.0 - pi));
}

double psi2(double pi) {
    check_domain(pi);
    const double s = pi * (1.0 - pi);
    return -1.0 / (s * s);
}

double eval_H(const PenaltyModel& penalty, double K, double pi) {
    if (!(K > 0.0)) throw DomainError("eval_H: K must be positive");
    return penalty.g(pi) - K * psi(pi);
}

HClassification classify_H(const PenaltyModel& penalty, double K) {
    if (!(K > 0.0)) throw DomainError("classify_H: K must be positive");
    HClassification out;
    out.K = K;
    out.reliable = !penalty.lg_monotonicity_warning();

    if (penalty.kind() == PenaltyKind::Classic) {
        // H'' = -K Psi'' > 0 off the kink: convex everywhere, root always exists.
        out.pi_star = 0.5;
        out.has_interior_root = true;
        out.pi_0 = solve_boundary(penalty, K);
        return out;
    }

    const double g2_half = penalty.g2(0.5);
    if (g2_half >= -16.0 * K) {
        // H strictly convex on all of (0,1); unique minimum at 1/2.
        out.pi_star = 0.5;
        out.has_interior_root = false;
        return out;
    }

    // Inflection: sign change of pi^2(1-pi)^2 H''(pi) = Lg(pi) + K on (0, 1/2).
    // Positive near 0, negative at 1/2.
    auto s = [&](double pi) { return penalty.lg(pi) + K; };
    double lo = 1e-9;
    double slo = s(lo);
    if (slo <= 0.0) {
        out.pi_star = lo;  // convex sliver numerically invisible
    } else {
        out.pi_star = bisect(s, lo, 0.5, slo);
    }
    out.has_interior_root = true;
    out.pi_0 = solve_boundary(penalty, K);
    return out;
}

double solve_boundary(const PenaltyModel& penalty, double K) {
    if (!(K > 0.0)) throw DomainError("solve_boundary: K must be positive");

    // Root of F(pi) = g'(pi) - K Psi'(pi) in (0, 1/2].
    auto F = [&](double pi) { return penalty.g1(pi) - K * psi1(pi); };

    if (penalty.kind() == PenaltyKind::Classic) {
        // g' = 1 on (0,1/2); Psi' decreases from +inf to 0, one crossing.
        const double lo = 1e-9, hi = 0.5 - 1e-9;
        const double flo = F(lo);
        if (flo > 0.0) return 0.5;  // unreachable for K > 0; kept for safety
        return bisect(F, lo, hi, flo);
    }

    // Smooth penalties: pi = 1/2 always solves (both sides vanish); an
    // interior root exists iff g''(1/2) < -16K. Scan for the leftmost sign
    // change, which handles the up-to-three critical points of H.
    if (penalty.g2(0.5) >= -16.0 * K) return 0.5;

    constexpr int kScan = 4096;
    const double lo = 1e-9, hi = 0.5 - 1e-9;
    double prev_x = lo;
    double prev_f = F(lo);
    for (int i = 1; i <= kScan; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / kScan;
        const double fx = F(x);
        if (prev_f == 0.0) return prev_x;
        if ((prev_f < 0.0) != (fx < 0.0)) {
            return bisect(F, prev_x, x, prev_f);
        }
        prev_x = x;
        prev_f = fx;
    }
    return 0.5;
}

}  // namespace seqbayes
