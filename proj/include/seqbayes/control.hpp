#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "seqbayes/errors.hpp"

namespace seqbayes {

// One piece of the control set: an isolated point or an interval. Infinite
// endpoints are allowed and always open.
struct ControlPiece {
    enum class Type { Point, Interval } type = Type::Point;
    double point = 0.0;                    // Type::Point
    double lo = 0.0, hi = 0.0;             // Type::Interval
    bool lo_closed = false, hi_closed = false;

    static ControlPiece make_point(double u);
    static ControlPiece make_interval(double lo, double hi, bool lo_closed, bool hi_closed);
};

// Control set U as a finite union of points and intervals. 0 is never an
// element; pieces must be non-empty and pairwise disjoint (checked on
// construction, ConfigError on violation).
class ControlSet {
  public:
    explicit ControlSet(std::vector<ControlPiece> pieces);

    static ControlSet all_reals_nonzero();               // R \ {0}
    static ControlSet positive_reals();                  // (0, inf)
    static ControlSet interval(double lo, double hi, bool lo_closed, bool hi_closed);
    static ControlSet points(std::vector<double> us);

    const std::vector<ControlPiece>& pieces() const { return pieces_; }
    bool contains(double u) const;
    bool is_all_reals_nonzero() const;
    bool bounded() const;
    bool points_only() const;

  private:
    std::vector<ControlPiece> pieces_;
};

// Running cost of control phi(u) plus the constant time cost c > 0.
struct CostModel {
    enum class Kind { Quadratic, Power, Table, Custom } kind = Kind::Quadratic;

    double a = 0.0, b = 0.0;          // Quadratic: phi(u) = a u^2 + b u
    double coef = 0.0, exponent = 0.0;  // Power: phi(u) = coef |u|^exponent
    std::vector<std::pair<double, double>> table;  // Table: exact (u, phi) pairs
    std::function<double(double)> custom;
    double c = 1.0;

    static CostModel quadratic(double a, double b, double c);
    static CostModel power(double coef, double exponent, double c);
    static CostModel table_cost(std::vector<std::pair<double, double>> pts, double c);
    static CostModel custom_cost(std::function<double(double)> phi, double c);

    // phi(u); Table costs throw DomainError for u not in the table.
    double phi(double u) const;
};

// eta(u) = (phi(u) + c) / u^2. DomainError at u = 0.
double eta(const CostModel& cost, double u);

enum class Regime { Positive, Zero, Negative };

// Recipe for a sequence u_n in U with eta(u_n) -> inf eta.
struct MinimizingSequence {
    enum class Kind {
        ConstantAtMinimizer,  // u_n = u*
        GeometricUnbounded,   // u_n = sign * base * 2^n  (|u| -> inf)
        EndpointApproach      // u_n = endpoint + sign * span * 2^-n
    } kind = Kind::ConstantAtMinimizer;
    double base = 0.0;
    double span = 0.0;
    double sign = 1.0;

    double u_at(int n) const;  // n >= 1
};

// Result of minimizing eta over U.
struct EtaSolution {
    double M = 0.0;                       // may be -infinity
    bool attained = false;
    std::optional<double> u_star;
    MinimizingSequence minimizing_sequence;
    Regime regime = Regime::Positive;
    // True when some minimizing sequence stays bounded (attained, finite
    // endpoint approach, or bounded U). Needed for the complementarity check.
    bool bounded_minimizing_sequence = false;
    // A control with eta < 0, when one was found (M < 0 case).
    std::optional<double> negative_eta_witness;
};

struct MinimizeOptions {
    int grid_points = 4096;       // per interval piece
    int probe_steps = 60;         // geometric endpoint probes
    int tail_exponent_cap = 256;  // geometric |u| = 2^k probes toward infinity
    double refine_tol = 1e-10;    // |du| target for golden-section refinement
};

// M = inf over U of eta, with attainment detection. M = -infinity is a valid
// outcome (regime Negative), never an error. Quadratic costs on U = R \ {0}
// use the closed form u* = -2c/b, M = -(b^2 - 4ac)/(4c); b = 0 gives
// inf eta = a approached as |u| -> inf, not attained.
EtaSolution minimize_eta(const CostModel& cost, const ControlSet& uset,
                         const MinimizeOptions& opts = {});

// Generic infimum of an arbitrary objective over U with the same grid /
// refinement / endpoint-probe machinery. Used for the Bellman-condition
// checks, where the objective is phi(u) - M u^2 + c and its relatives.
struct ScanResult {
    double inf_value = 0.0;   // may be -infinity
    bool attained = false;
    std::optional<double> arg_best;
    bool diverges_below = false;
};

ScanResult minimize_over_set(const std::function<double(double)>& f, const ControlSet& uset,
                             const MinimizeOptions& opts = {});

}  // namespace seqbayes
