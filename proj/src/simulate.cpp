#include "seqbayes/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "seqbayes/geometry.hpp"
#include "seqbayes/rng.hpp"

namespace seqbayes {

namespace {

double logit(double p) { return std::log(p / (1.0 - p)); }
double sigmoid(double y) { return 1.0 / (1.0 + std::exp(-y)); }

// Skip the bridge-crossing draw when the probability is below e^-40.
constexpr double kBridgeLogFloor = -40.0;

int draw_theta(const SimConfig& cfg, PathRng& rng) {
    switch (cfg.theta_mode) {
        case ThetaMode::Fixed0:
            return 0;
        case ThetaMode::Fixed1:
            return 1;
        case ThetaMode::Bernoulli:
            return rng.next_uniform() < cfg.p ? 1 : 0;
    }
    return 0;
}

template <typename Fn>
void parallel_for_paths(std::int64_t n, int n_threads, Fn&& fn) {
    int workers = n_threads > 0 ? n_threads
                                : static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    workers = static_cast<int>(std::min<std::int64_t>(workers, n));
    if (workers <= 1) {
        for (std::int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    const std::int64_t chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const std::int64_t lo = w * chunk;
        const std::int64_t hi = std::min<std::int64_t>(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&fn, lo, hi] {
            for (std::int64_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace

void SimConfig::validate(bool hitting_run) const {
    if (!(p > 0.0 && p < 1.0)) throw ConfigError("simulate: prior p must lie in (0,1)");
    if (u == 0.0 || !std::isfinite(u)) throw ConfigError("simulate: u must be finite and nonzero");
    if (!(dt > 0.0) || dt > 1e-2) throw ConfigError("simulate: dt must lie in (0, 1e-2]");
    if (n_paths < 1) throw ConfigError("simulate: n_paths must be positive");
    if (!(delta >= 0.0 && delta < 0.5)) throw ConfigError("simulate: delta must lie in [0, 0.5)");
    if (hitting_run) {
        if (!(delta > 0.0)) throw ConfigError("simulate: hitting-time runs need delta > 0");
        if (!(delta < p && p < 1.0 - delta))
            throw ConfigError("simulate: hitting-time runs need delta < p < 1-delta");
    }
    if (delta == 0.0 && !(t_max > 0.0))
        throw ConfigError("simulate: delta = 0 runs need an explicit t_max");
}

double SimConfig::effective_t_max() const {
    if (t_max > 0.0) return t_max;
    if (delta > 0.0 && delta < p && p < 1.0 - delta) {
        const double closed_form = 2.0 / (u * u) * (psi(p) - psi(delta));
        return std::max(1e3 * closed_form, 1e3 * dt);
    }
    return 1e3 * dt;
}

PathOutcome simulate_path(const SimConfig& cfg, std::int64_t path_index) {
    cfg.validate(false);
    PathRng rng(cfg.seed, static_cast<std::uint64_t>(path_index));
    PathOutcome out;
    out.theta = draw_theta(cfg, rng);

    // Start on or outside the boundary: stop at once.
    if (cfg.delta > 0.0 && cfg.p <= cfg.delta) {
        out.tau = 0.0;
        out.exit_side = ExitSide::Lower;
        out.pi_at_exit = cfg.p;
        return out;
    }
    if (cfg.delta > 0.0 && cfg.p >= 1.0 - cfg.delta) {
        out.tau = 0.0;
        out.exit_side = ExitSide::Upper;
        out.pi_at_exit = cfg.p;
        return out;
    }

    const double u = cfg.u;
    const double dt = cfg.dt;
    const double sqrt_dt = std::sqrt(dt);
    const double y0 = logit(cfg.p);
    const double y_hi = cfg.delta > 0.0 ? logit(1.0 - cfg.delta)
                                        : std::numeric_limits<double>::infinity();
    const double y_lo = -y_hi;
    const double drift = 0.5 * u * u * (2 * out.theta - 1) * dt;
    const double t_cap = cfg.effective_t_max();
    const std::int64_t max_steps =
        std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(t_cap / dt - 1e-9)));

    double y = y0;          // LogitExact / StrongX state in logit coordinates
    double pi = cfg.p;      // PiEuler state
    double x = 0.0;         // StrongX observation state

    for (std::int64_t step = 1; step <= max_steps; ++step) {
        const double z = rng.next_normal();
        const double t1 = static_cast<double>(step) * dt;
        double y1 = 0.0;
        switch (cfg.space) {
            case PathSpace::LogitExact:
                y1 = y + drift + u * sqrt_dt * z;
                break;
            case PathSpace::StrongX:
                x += out.theta * u * dt + sqrt_dt * z;
                y1 = y0 + u * x - 0.5 * u * u * t1;
                break;
            case PathSpace::PiEuler: {
                const double dX = out.theta * u * dt + sqrt_dt * z;
                pi += u * pi * (1.0 - pi) * (dX - u * pi * dt);
                pi = std::clamp(pi, 1e-15, 1.0 - 1e-15);
                y1 = logit(pi);
                break;
            }
        }

        if (y1 >= y_hi) {
            out.tau = t1;
            out.exit_side = ExitSide::Upper;
            out.pi_at_exit = 1.0 - cfg.delta;
            return out;
        }
        if (y1 <= y_lo) {
            out.tau = t1;
            out.exit_side = ExitSide::Lower;
            out.pi_at_exit = cfg.delta;
            return out;
        }
        if (cfg.bridge_correction && cfg.delta > 0.0) {
            const double var = u * u * dt;
            const double up_log = -2.0 * (y_hi - y) * (y_hi - y1) / var;
            const double lo_log = -2.0 * (y - y_lo) * (y1 - y_lo) / var;
            if (up_log > kBridgeLogFloor || lo_log > kBridgeLogFloor) {
                const double cross = rng.next_uniform();
                const double p_up = std::exp(up_log);
                if (cross < p_up) {
                    out.tau = t1;
                    out.exit_side = ExitSide::Upper;
                    out.pi_at_exit = 1.0 - cfg.delta;
                    return out;
                }
                if (cross < p_up + std::exp(lo_log)) {
                    out.tau = t1;
                    out.exit_side = ExitSide::Lower;
                    out.pi_at_exit = cfg.delta;
                    return out;
                }
            }
        }
        y = y1;
    }

    out.tau = static_cast<double>(max_steps) * dt;
    out.exit_side = ExitSide::Censored;
    out.pi_at_exit = cfg.space == PathSpace::PiEuler ? pi : sigmoid(y);
    return out;
}

std::vector<PathOutcome> simulate_paths(const SimConfig& cfg) {
    cfg.validate(false);
    std::vector<PathOutcome> out(static_cast<std::size_t>(cfg.n_paths));
    parallel_for_paths(cfg.n_paths, cfg.n_threads, [&](std::int64_t i) {
        out[static_cast<std::size_t>(i)] = simulate_path(cfg, i);
    });
    return out;
}

double pairwise_sum(const double* data, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += data[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

McEstimate summarize(const std::vector<double>& values, std::int64_t censored) {
    McEstimate est;
    est.n = static_cast<std::int64_t>(values.size());
    est.censored_count = censored;
    if (values.empty()) return est;
    const double n = static_cast<double>(values.size());
    est.mean = pairwise_sum(values.data(), values.size()) / n;
    if (values.size() > 1) {
        std::vector<double> sq(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) {
            const double d = values[i] - est.mean;
            sq[i] = d * d;
        }
        const double var = pairwise_sum(sq.data(), sq.size()) / (n - 1.0);
        est.std_error = std::sqrt(var / n);
    }
    return est;
}

McEstimate mc_expected_tau(const SimConfig& cfg, double pi_start) {
    SimConfig run = cfg;
    run.p = pi_start;
    run.validate(true);
    const auto outcomes = simulate_paths(run);
    std::vector<double> taus;
    taus.reserve(outcomes.size());
    std::int64_t censored = 0;
    for (const auto& o : outcomes) {
        if (o.exit_side == ExitSide::Censored) {
            ++censored;
        } else {
            taus.push_back(o.tau);
        }
    }
    return summarize(taus, censored);
}

DecisionErrors mc_decision_and_errors(const SimConfig& cfg, double pi_start) {
    SimConfig run = cfg;
    run.p = pi_start;
    run.validate(true);
    if (run.theta_mode != ThetaMode::Bernoulli) {
        throw ConfigError("mc_decision_and_errors: requires Bernoulli theta draws");
    }
    const auto outcomes = simulate_paths(run);
    std::vector<double> up1, up0;
    std::int64_t censored = 0;
    for (const auto& o : outcomes) {
        if (o.exit_side == ExitSide::Censored) {
            ++censored;
            continue;
        }
        const double is_up = o.exit_side == ExitSide::Upper ? 1.0 : 0.0;
        (o.theta == 1 ? up1 : up0).push_back(is_up);
    }
    DecisionErrors de;
    de.p_upper_given_1 = summarize(up1, censored);
    de.p_upper_given_0 = summarize(up0, censored);
    de.power = de.p_upper_given_1;
    de.type1 = de.p_upper_given_0;
    de.type2 = de.p_upper_given_1;
    de.type2.mean = 1.0 - de.p_upper_given_1.mean;
    return de;
}

std::vector<McEstimate> mc_laplace(const SimConfig& cfg, double pi_start,
                                   const std::vector<double>& alphas) {
    SimConfig run = cfg;
    run.p = pi_start;
    run.validate(true);
    if (run.theta_mode == ThetaMode::Bernoulli) {
        throw ConfigError("mc_laplace: requires a fixed theta mode");
    }
    for (double a : alphas) {
        if (a < 0.0) throw ConfigError("mc_laplace: alpha must be >= 0");
    }
    const auto outcomes = simulate_paths(run);
    std::vector<McEstimate> result;
    result.reserve(alphas.size());
    std::vector<double> vals(outcomes.size());
    for (double alpha : alphas) {
        std::int64_t censored = 0;
        for (std::size_t i = 0; i < outcomes.size(); ++i) {
            if (outcomes[i].exit_side == ExitSide::Censored) ++censored;
            vals[i] = std::exp(-alpha * outcomes[i].tau);
        }
        auto est = summarize(vals, censored);
        result.push_back(est);
    }
    return result;
}

TauHistogram mc_tau_density_histogram(const SimConfig& cfg, double pi_start, int bins,
                                      double t_hi, int select_theta) {
    SimConfig run = cfg;
    run.p = pi_start;
    run.validate(true);
    if (bins < 1 || !(t_hi > 0.0)) throw ConfigError("histogram: need bins >= 1 and t_hi > 0");
    const auto outcomes = simulate_paths(run);
    TauHistogram h;
    h.t_lo = 0.0;
    h.t_hi = t_hi;
    h.counts.assign(static_cast<std::size_t>(bins), 0);
    const double width = t_hi / bins;
    for (const auto& o : outcomes) {
        if (select_theta >= 0 && o.theta != select_theta) continue;
        ++h.n_total;
        if (o.exit_side == ExitSide::Censored || o.tau >= t_hi) {
            ++h.n_beyond;
            continue;
        }
        auto idx = static_cast<std::size_t>(o.tau / width);
        if (idx >= h.counts.size()) idx = h.counts.size() - 1;
        ++h.counts[idx];
    }
    return h;
}

CrosscheckReport crosscheck_representations(const SimConfig& cfg, double t_horizon,
                                            std::int64_t path_index) {
    cfg.validate(false);
    if (!(t_horizon > 0.0)) throw ConfigError("crosscheck: t_horizon must be positive");
    PathRng rng(cfg.seed, static_cast<std::uint64_t>(path_index));
    CrosscheckReport rep;
    rep.theta = draw_theta(cfg, rng);

    const double u = cfg.u;
    const double dt = cfg.dt;
    const double sqrt_dt = std::sqrt(dt);
    const double y0 = logit(cfg.p);
    const double drift = 0.5 * u * u * (2 * rep.theta - 1) * dt;
    const auto n = static_cast<std::int64_t>(std::llround(t_horizon / dt));

    double pi_euler = cfg.p;
    double y_logit = y0;
    double x = 0.0;
    for (std::int64_t step = 1; step <= n; ++step) {
        const double z = rng.next_normal();
        const double t1 = static_cast<double>(step) * dt;
        const double dX = rep.theta * u * dt + sqrt_dt * z;

        pi_euler += u * pi_euler * (1.0 - pi_euler) * (dX - u * pi_euler * dt);
        pi_euler = std::clamp(pi_euler, 1e-15, 1.0 - 1e-15);

        y_logit += drift + u * sqrt_dt * z;

        x += dX;
        const double y_strong = y0 + u * x - 0.5 * u * u * t1;

        const double pi_exact = sigmoid(y_strong);
        rep.max_diff_euler_vs_likelihood =
            std::max(rep.max_diff_euler_vs_likelihood, std::abs(pi_euler - pi_exact));
        rep.max_diff_logit_vs_strongx =
            std::max(rep.max_diff_logit_vs_strongx, std::abs(sigmoid(y_logit) - pi_exact));
    }
    return rep;
}

}  // namespace seqbayes
