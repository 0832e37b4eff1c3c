#include "seqbayes/control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace seqbayes {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDivergenceFloor = -1e15;

double golden_min(const std::function<double(double)>& f, double a, double b, double tol,
                  double& best_u, double& best_v) {
    static const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    auto consider = [&](double u, double v) {
        if (v < best_v) {
            best_v = v;
            best_u = u;
        }
    };
    consider(c, fc);
    consider(d, fd);
    int guard = 0;
    while (b - a > tol && ++guard < 200) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
            consider(c, fc);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
            consider(d, fd);
        }
    }
    return best_v;
}

// Smallest power of two strictly beyond |w|, floor 1.
double tail_base(double w) {
    double base = 1.0;
    const double aw = std::abs(w);
    while (base <= aw) base *= 2.0;
    return base;
}

struct Scanner {
    const std::function<double(double)>& f;
    const MinimizeOptions& opts;

    double best_attained = kInf;
    double best_attained_u = std::numeric_limits<double>::quiet_NaN();
    double best_limit = kInf;
    bool limit_is_tail = false;        // tail (unbounded) vs endpoint approach
    MinimizingSequence limit_seq;
    bool diverges = false;
    double best_seen = kInf;           // smallest value at any evaluated u
    double best_seen_u = std::numeric_limits<double>::quiet_NaN();

    void consider_attained(double u, double v) {
        if (std::isnan(v)) return;
        if (v < best_seen) {
            best_seen = v;
            best_seen_u = u;
        }
        if (v < best_attained) {
            best_attained = v;
            best_attained_u = u;
        }
    }

    void consider_limit(double u, double v, const MinimizingSequence& seq, bool tail) {
        if (std::isnan(v)) return;
        if (v < best_seen) {
            best_seen = v;
            best_seen_u = u;
        }
        if (v < best_limit) {
            best_limit = v;
            limit_seq = seq;
            limit_is_tail = tail;
        }
        if (v < kDivergenceFloor) diverges = true;
    }

    void scan_point(double u) { consider_attained(u, f(u)); }

    void scan_interval(const ControlPiece& piece) {
        const bool lo_inf = std::isinf(piece.lo);
        const bool hi_inf = std::isinf(piece.hi);
        constexpr double kWindow = 1024.0;
        double wlo = lo_inf ? -kWindow : piece.lo;
        double whi = hi_inf ? kWindow : piece.hi;
        if (lo_inf && !hi_inf) wlo = std::min(wlo, whi - 2.0 * kWindow);
        if (hi_inf && !lo_inf) whi = std::max(whi, wlo + 2.0 * kWindow);

        // Dense grid on the finite window, then golden refinement around the
        // best cell. Open finite endpoints are excluded from the grid and
        // probed separately along a geometric approach.
        const int n = std::max(opts.grid_points, 8);
        const double h = (whi - wlo) / n;
        int best_i = -1;
        double best_v = kInf;
        for (int i = 0; i <= n; ++i) {
            const double u = (i == n) ? whi : wlo + i * h;
            if (u == 0.0) continue;
            if (i == 0 && !lo_inf && !piece.lo_closed) continue;
            if (i == n && !hi_inf && !piece.hi_closed) continue;
            const double v = f(u);
            if (std::isnan(v)) continue;
            if (v < best_v) {
                best_v = v;
                best_i = i;
            }
        }
        if (best_i >= 0) {
            double a = wlo + std::max(0, best_i - 1) * h;
            double b = wlo + std::min(n, best_i + 1) * h;
            // keep the refinement bracket clear of an excluded zero
            if (a < 0.0 && b > 0.0) {
                if (wlo + best_i * h > 0.0)
                    a = std::nextafter(0.0, 1.0);
                else
                    b = std::nextafter(0.0, -1.0);
            }
            double bu = wlo + best_i * h, bv = best_v;
            golden_min(f, a, b, opts.refine_tol, bu, bv);
            consider_attained(bu, bv);
        }

        // Geometric probes toward open finite endpoints.
        auto probe_endpoint = [&](double endpoint, double sign) {
            const double span = std::min(1.0, whi - wlo);
            double deepest = kInf;
            double prev = kInf;
            bool decreasing_tail = true;
            for (int k = 1; k <= opts.probe_steps; ++k) {
                const double u = endpoint + sign * span * std::exp2(-k);
                if (u == 0.0 || u <= wlo || u >= whi) continue;
                const double v = f(u);
                if (std::isnan(v)) continue;
                if (k > opts.probe_steps - 5 && v > prev) decreasing_tail = false;
                prev = v;
                deepest = std::min(deepest, v);
                consider_attained(u, v);
            }
            if (deepest < best_attained - 1e-12 * std::max(1.0, std::abs(deepest)) ||
                decreasing_tail) {
                MinimizingSequence seq;
                seq.kind = MinimizingSequence::Kind::EndpointApproach;
                seq.base = endpoint;
                seq.span = span;
                seq.sign = sign;
                consider_limit(endpoint + sign * span * std::exp2(-opts.probe_steps), deepest,
                               seq, /*tail=*/false);
            }
        };
        if (!lo_inf && !piece.lo_closed) probe_endpoint(piece.lo, +1.0);
        if (!hi_inf && !piece.hi_closed) probe_endpoint(piece.hi, -1.0);

        // Geometric probes toward infinite endpoints.
        auto probe_tail = [&](double sign, double beyond) {
            const double base = tail_base(beyond);
            double deepest = kInf;
            double deepest_u = 0.0;
            for (int k = 1; k <= opts.tail_exponent_cap; ++k) {
                const double u = sign * base * std::exp2(k);
                if (!std::isfinite(u)) break;
                const double v = f(u);
                if (!std::isfinite(v) && !(v == -kInf)) break;
                if (v < deepest) {
                    deepest = v;
                    deepest_u = u;
                }
                consider_attained(u, v);
            }
            MinimizingSequence seq;
            seq.kind = MinimizingSequence::Kind::GeometricUnbounded;
            seq.base = base;
            seq.sign = sign;
            consider_limit(deepest_u, deepest, seq, /*tail=*/true);
        };
        if (hi_inf) probe_tail(+1.0, std::max(0.0, wlo));
        if (lo_inf) probe_tail(-1.0, std::max(0.0, -whi));
    }
};

}  // namespace

ControlPiece ControlPiece::make_point(double u) {
    ControlPiece p;
    p.type = Type::Point;
    p.point = u;
    return p;
}

ControlPiece ControlPiece::make_interval(double lo, double hi, bool lo_closed, bool hi_closed) {
    ControlPiece p;
    p.type = Type::Interval;
    p.lo = lo;
    p.hi = hi;
    p.lo_closed = lo_closed && std::isfinite(lo);
    p.hi_closed = hi_closed && std::isfinite(hi);
    return p;
}

ControlSet::ControlSet(std::vector<ControlPiece> pieces) : pieces_(std::move(pieces)) {
    if (pieces_.empty()) throw ConfigError("control set must be non-empty");
    for (const auto& p : pieces_) {
        if (p.type == ControlPiece::Type::Point) {
            if (p.point == 0.0) throw ConfigError("control set cannot contain u = 0");
            if (!std::isfinite(p.point)) throw ConfigError("control point must be finite");
        } else {
            if (!(p.lo < p.hi)) throw ConfigError("control interval must have lo < hi");
            const bool covers_zero =
                (p.lo < 0.0 || (p.lo == 0.0 && p.lo_closed)) &&
                (p.hi > 0.0 || (p.hi == 0.0 && p.hi_closed));
            if (covers_zero) throw ConfigError("control interval cannot contain u = 0");
        }
    }
    auto piece_lo = [](const ControlPiece& p) {
        return p.type == ControlPiece::Type::Point ? p.point : p.lo;
    };
    auto piece_hi = [](const ControlPiece& p) {
        return p.type == ControlPiece::Type::Point ? p.point : p.hi;
    };
    auto sorted = pieces_;
    std::sort(sorted.begin(), sorted.end(),
              [&](const auto& x, const auto& y) { return piece_lo(x) < piece_lo(y); });
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (piece_hi(sorted[i - 1]) > piece_lo(sorted[i])) {
            throw ConfigError("control set pieces must be pairwise disjoint");
        }
    }
}

ControlSet ControlSet::all_reals_nonzero() {
    return ControlSet({ControlPiece::make_interval(-kInf, 0.0, false, false),
                       ControlPiece::make_interval(0.0, kInf, false, false)});
}

ControlSet ControlSet::positive_reals() {
    return ControlSet({ControlPiece::make_interval(0.0, kInf, false, false)});
}

ControlSet ControlSet::interval(double lo, double hi, bool lo_closed, bool hi_closed) {
    return ControlSet({ControlPiece::make_interval(lo, hi, lo_closed, hi_closed)});
}

ControlSet ControlSet::points(std::vector<double> us) {
    std::vector<ControlPiece> pieces;
    pieces.reserve(us.size());
    for (double u : us) pieces.push_back(ControlPiece::make_point(u));
    return ControlSet(std::move(pieces));
}

bool ControlSet::contains(double u) const {
    for (const auto& p : pieces_) {
        if (p.type == ControlPiece::Type::Point) {
            if (u == p.point) return true;
        } else {
            const bool above = p.lo_closed ? u >= p.lo : u > p.lo;
            const bool below = p.hi_closed ? u <= p.hi : u < p.hi;
            if (above && below) return true;
        }
    }
    return false;
}

bool ControlSet::is_all_reals_nonzero() const {
    if (pieces_.size() != 2) return false;
    bool neg = false, pos = false;
    for (const auto& p : pieces_) {
        if (p.type != ControlPiece::Type::Interval) return false;
        if (std::isinf(p.lo) && p.hi == 0.0) neg = true;
        if (p.lo == 0.0 && std::isinf(p.hi)) pos = true;
    }
    return neg && pos;
}

bool ControlSet::bounded() const {
    for (const auto& p : pieces_) {
        if (p.type == ControlPiece::Type::Interval && (std::isinf(p.lo) || std::isinf(p.hi)))
            return false;
    }
    return true;
}

bool ControlSet::points_only() const {
    return std::all_of(pieces_.begin(), pieces_.end(), [](const auto& p) {
        return p.type == ControlPiece::Type::Point;
    });
}

CostModel CostModel::quadratic(double a, double b, double c) {
    CostModel m;
    m.kind = Kind::Quadratic;
    m.a = a;
    m.b = b;
    m.c = c;
    return m;
}

CostModel CostModel::power(double coef, double exponent, double c) {
    CostModel m;
    m.kind = Kind::Power;
    m.coef = coef;
    m.exponent = exponent;
    m.c = c;
    return m;
}

CostModel CostModel::table_cost(std::vector<std::pair<double, double>> pts, double c) {
    CostModel m;
    m.kind = Kind::Table;
    m.table = std::move(pts);
    m.c = c;
    return m;
}

CostModel CostModel::custom_cost(std::function<double(double)> phi, double c) {
    CostModel m;
    m.kind = Kind::Custom;
    m.custom = std::move(phi);
    m.c = c;
    return m;
}

double CostModel::phi(double u) const {
    switch (kind) {
        case Kind::Quadratic:
            return a * u * u + b * u;
        case Kind::Power:
            return coef * std::pow(std::abs(u), exponent);
        case Kind::Table:
            for (const auto& [tu, tv] : table) {
                if (tu == u) return tv;
            }
            throw DomainError("table cost: no entry for u = " + std::to_string(u));
        case Kind::Custom:
            return custom(u);
    }
    return 0.0;
}

double eta(const CostModel& cost, double u) {
    if (u == 0.0) throw DomainError("eta: u must be nonzero");
    return (cost.phi(u) + cost.c) / (u * u);
}

double MinimizingSequence::u_at(int n) const {
    const int k = std::max(n, 1);
    switch (kind) {
        case Kind::ConstantAtMinimizer:
            return base;
        case Kind::GeometricUnbounded:
            return sign * base * std::exp2(std::min(k, 1000));
        case Kind::EndpointApproach:
            return base + sign * span * std::exp2(-k);
    }
    return base;
}

ScanResult minimize_over_set(const std::function<double(double)>& f, const ControlSet& uset,
                             const MinimizeOptions& opts) {
    Scanner sc{f, opts};
    for (const auto& piece : uset.pieces()) {
        if (piece.type == ControlPiece::Type::Point) {
            sc.scan_point(piece.point);
        } else {
            sc.scan_interval(piece);
        }
    }
    ScanResult out;
    if (sc.diverges) {
        out.inf_value = -kInf;
        out.diverges_below = true;
        out.attained = false;
        out.arg_best = sc.best_seen_u;
        return out;
    }
    const double tol = 1e-12 * std::max(1.0, std::abs(sc.best_attained));
    if (sc.best_attained <= sc.best_limit + tol) {
        out.inf_value = sc.best_attained;
        out.attained = true;
        out.arg_best = sc.best_attained_u;
    } else {
        out.inf_value = sc.best_limit;
        out.attained = false;
        out.arg_best = sc.best_seen_u;
    }
    return out;
}

namespace {

Regime classify_regime(double M) {
    if (M < -1e-12) return Regime::Negative;
    if (M <= 1e-12) return Regime::Zero;
    return Regime::Positive;
}

}  // namespace

EtaSolution minimize_eta(const CostModel& cost, const ControlSet& uset,
                         const MinimizeOptions& opts) {
    EtaSolution sol;

    if (cost.kind == CostModel::Kind::Quadratic && uset.is_all_reals_nonzero()) {
        if (cost.b != 0.0) {
            sol.u_star = -2.0 * cost.c / cost.b;
            sol.M = -(cost.b * cost.b - 4.0 * cost.a * cost.c) / (4.0 * cost.c);
            sol.attained = true;
            sol.minimizing_sequence = {MinimizingSequence::Kind::ConstantAtMinimizer,
                                       *sol.u_star, 0.0, 1.0};
        } else {
            // eta(u) = a + c/u^2: infimum a approached as |u| -> inf.
            sol.M = cost.a;
            sol.attained = false;
            sol.minimizing_sequence = {MinimizingSequence::Kind::GeometricUnbounded, 1.0, 0.0,
                                       1.0};
        }
        sol.regime = classify_regime(sol.M);
        sol.bounded_minimizing_sequence = sol.attained;
        if (sol.M < 0.0) sol.negative_eta_witness = sol.u_star;
        return sol;
    }

    auto f = [&](double u) { return eta(cost, u); };
    Scanner sc{f, opts};
    for (const auto& piece : uset.pieces()) {
        if (piece.type == ControlPiece::Type::Point) {
            sc.scan_point(piece.point);
        } else {
            sc.scan_interval(piece);
        }
    }

    if (sc.diverges) {
        sol.M = -kInf;
        sol.attained = false;
        sol.minimizing_sequence = sc.limit_seq;
        sol.regime = Regime::Negative;
        sol.bounded_minimizing_sequence = !sc.limit_is_tail || uset.bounded();
        sol.negative_eta_witness = sc.best_seen_u;
        return sol;
    }

    const double tol = 1e-12 * std::max(1.0, std::abs(sc.best_attained));
    if (sc.best_attained <= sc.best_limit + tol) {
        sol.M = sc.best_attained;
        sol.attained = true;
        sol.u_star = sc.best_attained_u;
        sol.minimizing_sequence = {MinimizingSequence::Kind::ConstantAtMinimizer,
                                   sc.best_attained_u, 0.0, 1.0};
    } else {
        sol.M = sc.best_limit;
        sol.attained = false;
        sol.minimizing_sequence = sc.limit_seq;
    }
    sol.regime = classify_regime(sol.M);
    sol.bounded_minimizing_sequence =
        sol.attained || uset.bounded() ||
        sol.minimizing_sequence.kind == MinimizingSequence::Kind::EndpointApproach;
    if (sol.M < 0.0) {
        sol.negative_eta_witness = sol.attained ? sol.u_star : std::optional<double>(sc.best_seen_u);
    }
    return sol;
}

}  // namespace seqbayes
