#pragma once

#include <optional>

#include "seqbayes/penalty.hpp"

namespace seqbayes {

// Fundamental solution Psi(pi) = (1 - 2 pi) ln(pi / (1 - pi)) and its
// derivatives. Psi is symmetric about 1/2, concave, and non-positive on (0,1).
double psi(double pi);
double psi1(double pi);
double psi2(double pi);

// H(pi; K) = g(pi) - K Psi(pi). Its interior minimizers are the optimal
// stopping boundaries.
double eval_H(const PenaltyModel& penalty, double K, double pi);

// Convexity structure of H(.; K): H is strictly convex on
// (0, pi_star) u (1 - pi_star, 1) and strictly concave in between.
struct HClassification {
    double K = 0.0;
    double pi_star = 0.5;                 // inflection point, in (0, 1/2]
    bool has_interior_root = false;       // H'(pi) = 0 solvable in (0, 1/2)
    std::optional<double> pi_0;           // the root, when it exists
    bool reliable = true;                 // false when the penalty carries an
                                          // Lg-monotonicity warning
};

HClassification classify_H(const PenaltyModel& penalty, double K);

// Smallest root A in (0, 1/2] of g'(pi) = K Psi'(pi). Returns 0.5 when no
// interior root exists. Root refined by bisection to 1e-12 absolute in pi.
// Throws ConvergenceError if 200 iterations do not suffice.
double solve_boundary(const PenaltyModel& penalty, double K);

}  // namespace seqbayes
