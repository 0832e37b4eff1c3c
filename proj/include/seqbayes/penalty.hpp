#pragma once

#include <functional>
#include <vector>

#include "seqbayes/errors.hpp"

namespace seqbayes {

enum class PenaltyKind { Classic, CrossEntropy, L2, CustomSmooth };

// Decision set D: either an explicit finite list of admissible decisions or
// the full unit interval [0,1]. No other shapes are supported.
struct DecisionSet {
    bool is_interval = false;
    std::vector<double> points;  // used when !is_interval

    static DecisionSet unit_interval() { return DecisionSet{true, {}}; }
    static DecisionSet binary() { return DecisionSet{false, {0.0, 1.0}}; }
};

// Terminal penalty g(pi) induced by a classification loss, together with its
// derivatives and the optimal decision selector h(pi).
//
// Built-in families:
//   Classic       g(pi) = min(pi, 1-pi)          hard decisions, D = {0,1}
//   CrossEntropy  g(pi) = -pi ln pi - (1-pi) ln(1-pi)
//   L2            g(pi) = pi (1-pi)              soft decisions, D = [0,1]
//
// Instances are immutable after construction and safe to share across threads.
class PenaltyModel {
  public:
    using RealFn = std::function<double(double)>;

    static PenaltyModel classic();
    static PenaltyModel cross_entropy();
    static PenaltyModel l2();

    // Custom smooth penalty: caller supplies g, g', g'' (and optionally the
    // selector plus decision set; defaults to d = pi on [0,1]). The
    // constructor checks monotonicity of pi^2(1-pi)^2 g''(pi) on a 1024-point
    // grid and records a warning flag on violation; it does not reject.
    static PenaltyModel custom(RealFn g, RealFn g1, RealFn g2,
                               DecisionSet decisions = DecisionSet::unit_interval(),
                               RealFn selector = nullptr);

    PenaltyKind kind() const { return kind_; }
    const DecisionSet& decisions() const { return decisions_; }
    bool smooth() const { return kind_ != PenaltyKind::Classic; }

    // g(pi); throws DomainError outside (0,1).
    double g(double pi) const;
    // g'(pi); throws KinkError for Classic at pi = 1/2.
    double g1(double pi) const;
    // g''(pi); throws KinkError for Classic at pi = 1/2.
    double g2(double pi) const;
    // (Lg)(pi) = pi^2 (1-pi)^2 g''(pi).
    double lg(double pi) const;

    // Optimal decision h(pi), minimizing the posterior expected loss.
    // Ties in the hard-classification case break to d = 1.
    double selector(double pi) const;

    // Posterior expected loss f(pi, d) = L(1,d) pi + L(0,d)(1-pi) for the
    // built-in loss families (used to cross-check selector minimality).
    // Unavailable for CustomSmooth (throws NotApplicableError).
    double decision_loss(double pi, double d) const;

    // True when construction detected non-monotone pi^2(1-pi)^2 g'' for a
    // custom penalty; downstream boundary classification may be unreliable.
    bool lg_monotonicity_warning() const { return lg_warning_; }

  private:
    PenaltyModel() = default;

    PenaltyKind kind_ = PenaltyKind::Classic;
    DecisionSet decisions_;
    RealFn custom_g_, custom_g1_, custom_g2_, custom_selector_;
    bool lg_warning_ = false;

    static void check_domain(double pi);
};

}  // namespace seqbayes
