#include "seqbayes/penalty.hpp"

#include <cmath>
#include <iostream>
#include <limits>

namespace seqbayes {

namespace {

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace

void PenaltyModel::check_domain(double pi) {
    if (!(pi > 0.0 && pi < 1.0)) {
        throw DomainError("penalty: pi must lie in (0,1), got " + std::to_string(pi));
    }
}

PenaltyModel PenaltyModel::classic() {
    PenaltyModel m;
    m.kind_ = PenaltyKind::Classic;
    m.decisions_ = DecisionSet::binary();
    return m;
}

PenaltyModel PenaltyModel::cross_entropy() {
    PenaltyModel m;
    m.kind_ = PenaltyKind::CrossEntropy;
    m.decisions_ = DecisionSet::unit_interval();
    return m;
}

PenaltyModel PenaltyModel::l2() {
    PenaltyModel m;
    m.kind_ = PenaltyKind::L2;
    m.decisions_ = DecisionSet::unit_interval();
    return m;
}

PenaltyModel PenaltyModel::custom(RealFn g, RealFn g1, RealFn g2, DecisionSet decisions,
                                  RealFn selector) {
    PenaltyModel m;
    m.kind_ = PenaltyKind::CustomSmooth;
    m.decisions_ = std::move(decisions);
    m.custom_g_ = std::move(g);
    m.custom_g1_ = std::move(g1);
    m.custom_g2_ = std::move(g2);
    m.custom_selector_ = std::move(selector);
    if (!m.custom_g_ || !m.custom_g1_ || !m.custom_g2_) {
        throw ConfigError("custom penalty requires g, g' and g''");
    }

    // Lg must be decreasing on (0,1/2) and increasing on (1/2,1) for the
    // single-crossing boundary analysis to be valid; warn, do not reject.
    constexpr int kGrid = 1024;
    double prev = std::numeric_limits<double>::quiet_NaN();
    bool ok = true;
    for (int i = 1; i < kGrid / 2; ++i) {
        const double pi = static_cast<double>(i) / kGrid;
        const double lg = pi * pi * (1.0 - pi) * (1.0 - pi) * m.custom_g2_(pi);
        if (!std::isnan(prev) && lg > prev + 1e-12) {
            ok = false;
            break;
        }
        prev = lg;
    }
    if (!ok) {
        m.lg_warning_ = true;
        std::cerr << "warning: custom penalty has non-monotone pi^2(1-pi)^2 g'' on (0,1/2); "
                     "boundary classification may be unreliable\n";
    }
    return m;
}

double PenaltyModel::g(double pi) const {
    check_domain(pi);
    switch (kind_) {
        case PenaltyKind::Classic:
            return std::min(pi, 1.0 - pi);
        case PenaltyKind::CrossEntropy:
            return -xlogx(pi) - xlogx(1.0 - pi);
        case PenaltyKind::L2:
            return pi * (1.0 - pi);
        case PenaltyKind::CustomSmooth:
            return custom_g_(pi);
    }
    return 0.0;
}

double PenaltyModel::g1(double pi) const {
    check_domain(pi);
    switch (kind_) {
        case PenaltyKind::Classic:
            if (pi == 0.5) throw KinkError("classic penalty: g' undefined at pi = 1/2");
            return pi < 0.5 ? 1.0 : -1.0;
        case PenaltyKind::CrossEntropy:
            return std::log((1.0 - pi) / pi);
        case PenaltyKind::L2:
            return 1.0 - 2.0 * pi;
        case PenaltyKind::CustomSmooth:
            return custom_g1_(pi);
    }
    return 0.0;
}

double PenaltyModel::g2(double pi) const {
    check_domain(pi);
    switch (kind_) {
        case PenaltyKind::Classic:
            if (pi == 0.5) throw KinkError("classic penalty: g'' undefined at pi = 1/2");
            return 0.0;
        case PenaltyKind::CrossEntropy:
            return -1.0 / (pi * (1.0 - pi));
        case PenaltyKind::L2:
            return -2.0;
        case PenaltyKind::CustomSmooth:
            return custom_g2_(pi);
    }
    return 0.0;
}

double PenaltyModel::lg(double pi) const {
    const double s = pi * (1.0 - pi);
    return s * s * g2(pi);
}

double PenaltyModel::selector(double pi) const {
    check_domain(pi);
    switch (kind_) {
        case PenaltyKind::Classic:
            return pi >= 0.5 ? 1.0 : 0.0;  // tie at 1/2 breaks to 1
        case PenaltyKind::CrossEntropy:
        case PenaltyKind::L2:
            return pi;  // posterior expectation
        case PenaltyKind::CustomSmooth:
            if (custom_selector_) return custom_selector_(pi);
            return pi;
    }
    return pi;
}

double PenaltyModel::decision_loss(double pi, double d) const {
    check_domain(pi);
    switch (kind_) {
        case PenaltyKind::Classic:
            return pi * (d != 1.0 ? 1.0 : 0.0) + (1.0 - pi) * (d != 0.0 ? 1.0 : 0.0);
        case PenaltyKind::L2:
            return pi * (1.0 - d) * (1.0 - d) + (1.0 - pi) * d * d;
        case PenaltyKind::CrossEntropy: {
            if (d <= 0.0 || d >= 1.0) return std::numeric_limits<double>::infinity();
            return -pi * std::log(d) - (1.0 - pi) * std::log(1.0 - d);
        }
        case PenaltyKind::CustomSmooth:
            throw NotApplicableError("decision_loss: no built-in loss for custom penalties");
    }
    return 0.0;
}

}  // namespace seqbayes
