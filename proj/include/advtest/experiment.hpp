#pragma once

// Monte Carlo engine: estimates the two error probabilities of the acceptance
// regions against adaptive adversaries, fits the error exponent from the decay
// of the type-2 error, and exposes likelihood-ratio probes used to check the
// supermartingale structure empirically. Episodes use counter-based per-episode
// random streams, so any thread count reproduces the serial run bit for bit.

#include <iomanip>
#include <thread>

#include "json.hpp"
#include "rng.hpp"
#include "strategies.hpp"

namespace advtest {

enum class TestFamily { Stein, Chernoff };

struct ExperimentConfig {
    TestFamily family = TestFamily::Stein;
    double epsilon = 0.02;           // Stein slack; ignored for Chernoff
    std::vector<std::size_t> n_values;
    std::size_t trials = 100000;
    std::uint64_t seed = 1;
    std::size_t min_expected_count = 50;  // drop n where trials * e^{-n rate} < this
    std::size_t threads = 0;              // 0 = hardware concurrency
};

struct ExperimentResult {
    std::vector<std::size_t> n_values;  // after the expected-count cap
    std::vector<double> alpha_hat, alpha_se;
    std::vector<double> beta_hat, beta_se;
    double fitted_exponent = 0.0;       // nats; negative LS slope of log beta
    double fitted_half_width = 0.0;     // 1.96 * slope standard error
    double target_exponent = 0.0;       // the solver's exponent (minus epsilon for Stein)
    bool exponent_is_lower_bound = false;  // all beta_hat were zero
    bool degenerate = false;               // classes intersect: no test exists
    std::size_t trials_per_n = 0;
    std::uint64_t seed = 0;
    std::string p_strategy, q_strategy;
};

namespace detail {

struct ProbeResult {
    double mean = 0.0;
    double se = 0.0;
};

inline std::size_t thread_count(std::size_t requested) {
    if (requested) return requested;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? hc : 1;
}

// Runs `trials` episodes of `strategy` for `n` rounds and feeds each episode's
// symbol-count vector to `finish`, summing the returned values. The stream key
// (side_tag, n, episode) makes every episode independent of scheduling.
inline double run_episodes(const AdaptiveStrategy& strategy, std::size_t n, std::size_t trials,
                           std::uint64_t seed, std::uint64_t side_tag, std::size_t threads,
                           const std::function<double(const std::vector<std::size_t>&)>& finish) {
    const std::size_t nt = std::min<std::size_t>(thread_count(threads), trials ? trials : 1);
    std::vector<double> partial(nt, 0.0);
    auto worker = [&](std::size_t t) {
        double acc = 0.0;
        std::vector<std::size_t> history;
        history.reserve(n);
        std::vector<double> px(strategy.cls.alphabet().size);
        for (std::size_t e = t; e < trials; e += nt) {
            CounterRng rng(seed, side_tag, n, e);
            history.clear();
            for (std::size_t k = 0; k < n; ++k) {
                const MixWeights w = strategy.rule(history);
                std::fill(px.begin(), px.end(), 0.0);
                for (std::size_t i = 0; i < w.size(); ++i) {
                    if (w[i] == 0.0) continue;
                    for (std::size_t x = 0; x < px.size(); ++x)
                        px[x] += w[i] * strategy.cls.vertex(i)[x];
                }
                history.push_back(rng.sample(px));
            }
            acc += finish(history);
        }
        partial[t] = acc;
    };
    if (nt == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < nt; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }
    double total = 0.0;
    for (double x : partial) total += x;
    return total;
}

inline double binomial_se(double phat, std::size_t trials) {
    return std::sqrt(std::max(phat * (1.0 - phat), 0.0) / double(trials));
}

// episode statistic with the same infinity conventions as the evaluators
inline double episode_statistic(const LogLikelihoodTable& table,
                                const std::vector<std::size_t>& sample) {
    double s = 0.0;
    bool pinf = false;
    for (std::size_t x : sample) {
        if (table[x] == -kInf) return -kInf;
        if (table[x] == kInf) pinf = true;
        else s += table[x];
    }
    return pinf ? kInf : s;
}

struct LineFit {
    double slope = 0.0;
    double slope_se = 0.0;
    std::size_t points = 0;
};

inline LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
    LineFit f;
    f.points = xs.size();
    if (xs.size() < 2) return f;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) { mx += xs[i]; my += ys[i]; }
    mx /= double(xs.size());
    my /= double(xs.size());
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx <= 0.0) return f;
    f.slope = sxy / sxx;
    if (xs.size() > 2) {
        double ssr = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double r = ys[i] - my - f.slope * (xs[i] - mx);
            ssr += r * r;
        }
        f.slope_se = std::sqrt(ssr / double(xs.size() - 2) / sxx);
    }
    return f;
}

}  // namespace detail

inline ExperimentResult run_experiment(const ConvexClass& P, const ConvexClass& Q,
                                       const AdaptiveStrategy& p_strategy,
                                       const AdaptiveStrategy& q_strategy,
                                       const ExperimentConfig& cfg) {
    if (!(P.alphabet() == Q.alphabet()))
        throw std::invalid_argument("run_experiment: alphabet mismatch");
    if (cfg.n_values.empty()) throw std::invalid_argument("run_experiment: no n values");
    if (cfg.trials == 0) throw std::invalid_argument("run_experiment: trials must be >= 1");

    ExperimentResult res;
    res.trials_per_n = cfg.trials;
    res.seed = cfg.seed;
    res.p_strategy = p_strategy.name;
    res.q_strategy = q_strategy.name;

    LogLikelihoodTable table{P.alphabet(), {}};
    double decay_rate = 0.0;  // expected exponential decay of the rarer error
    std::function<bool(double stat, std::size_t n)> accepts;
    if (cfg.family == TestFamily::Stein) {
        const auto sol = solve_stein(P, Q, 1e-10);
        if (!sol.certificate.pass())
            throw std::runtime_error("run_experiment: Stein certificate failed");
        if (sol.exponent <= 0.0 || !sol.finite) {
            res.degenerate = true;
            res.target_exponent = std::max(sol.exponent, 0.0);
            return res;  // no nondegenerate acceptance region exists
        }
        table = log_likelihood_table(sol.p_star, sol.q_star);
        const double rate = sol.exponent - cfg.epsilon;
        if (rate <= 0.0)
            throw std::invalid_argument("run_experiment: epsilon at least the exponent");
        res.target_exponent = rate;
        decay_rate = rate;
        accepts = [rate](double stat, std::size_t n) { return stat >= double(n) * rate; };
    } else {
        const auto sol = solve_chernoff(P, Q, 1e-10);
        if (!sol.certificate.pass())
            throw std::runtime_error("run_experiment: Chernoff certificate failed");
        if (sol.exponent <= 0.0 || !sol.finite) {
            res.degenerate = true;
            res.target_exponent = std::max(std::min(sol.exponent, kInf), 0.0);
            return res;
        }
        table = log_likelihood_table(sol.p_star, sol.q_star);
        res.target_exponent = sol.exponent;
        decay_rate = sol.exponent;
        accepts = [](double stat, std::size_t) { return stat >= 0.0; };
    }

    for (std::size_t n : cfg.n_values) {
        // honest error bars: skip n where even the theoretical rate leaves
        // fewer than min_expected_count hits among the trials
        const double expected = double(cfg.trials) * std::exp(-double(n) * decay_rate);
        if (expected < double(cfg.min_expected_count)) continue;
        res.n_values.push_back(n);

        const double rejected = detail::run_episodes(
            p_strategy, n, cfg.trials, cfg.seed, 0xA1, cfg.threads,
            [&](const std::vector<std::size_t>& s) {
                return accepts(detail::episode_statistic(table, s), n) ? 0.0 : 1.0;
            });
        const double accepted = detail::run_episodes(
            q_strategy, n, cfg.trials, cfg.seed, 0xB2, cfg.threads,
            [&](const std::vector<std::size_t>& s) {
                return accepts(detail::episode_statistic(table, s), n) ? 1.0 : 0.0;
            });
        res.alpha_hat.push_back(rejected / double(cfg.trials));
        res.alpha_se.push_back(detail::binomial_se(res.alpha_hat.back(), cfg.trials));
        res.beta_hat.push_back(accepted / double(cfg.trials));
        res.beta_se.push_back(detail::binomial_se(res.beta_hat.back(), cfg.trials));
    }
    if (res.n_values.empty())
        throw std::invalid_argument(
            "run_experiment: every n exceeds the expected-count cap; raise trials");

    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < res.n_values.size(); ++i)
        if (res.beta_hat[i] > 0.0) {
            xs.push_back(double(res.n_values[i]));
            ys.push_back(std::log(res.beta_hat[i]));
        }
    if (xs.empty()) {
        res.exponent_is_lower_bound = true;
        // every episode avoided the region: the decay is at least as fast as
        // the resolution of the experiment at the largest n
        res.fitted_exponent = std::log(double(cfg.trials)) / double(res.n_values.back());
    } else {
        const auto fit = detail::fit_line(xs, ys);
        res.fitted_exponent = -fit.slope;
        res.fitted_half_width = 1.96 * fit.slope_se;
    }
    return res;
}

// Empirical mean and standard error of prod_i (p*(x_i)/q*(x_i))^lambda when
// `strategy` generates the sample. lambda = 1 is the raw likelihood-ratio
// product whose mean stays <= 1 under any in-class adversary.
inline detail::ProbeResult likelihood_probe(const AdaptiveStrategy& strategy,
                                            const Distribution& p_star,
                                            const Distribution& q_star, double lambda,
                                            std::size_t n, std::size_t trials,
                                            std::uint64_t seed, std::size_t threads = 0) {
    if (trials == 0) throw std::invalid_argument("likelihood_probe: trials must be >= 1");
    const std::size_t d = p_star.size();
    std::vector<double> lratio(d, 0.0);  // lambda * log(p*/q*), with sign conventions
    std::vector<int> kind(d, 0);         // 0 finite, +1 ratio inf, -1 ratio zero
    for (std::size_t x = 0; x < d; ++x) {
        if (p_star[x] > 0.0 && q_star[x] > 0.0)
            lratio[x] = lambda * (std::log(p_star[x]) - std::log(q_star[x]));
        else if (p_star[x] > 0.0) kind[x] = 1;
        else kind[x] = -1;  // ratio 0 also covers the 0/0 symbol
    }
    auto episode_value = [&](const std::vector<std::size_t>& s) {
        double acc = 0.0;
        int flag = 0;
        for (std::size_t x : s) {
            if (kind[x] == -1) { flag = -1; break; }
            if (kind[x] == 1) flag = 1;
            else acc += lratio[x];
        }
        return flag == -1 ? 0.0 : (flag == 1 ? kInf : std::exp(acc));
    };
    // two deterministic passes over the same episode streams: sum, then sum of
    // squares (workers only ever write their own partial slot)
    const double sum = detail::run_episodes(strategy, n, trials, seed, 0xC3, threads,
                                            episode_value);
    const double sumsq = detail::run_episodes(
        strategy, n, trials, seed, 0xC3, threads, [&](const std::vector<std::size_t>& s) {
            const double v = episode_value(s);
            return v * v;
        });
    detail::ProbeResult r;
    r.mean = sum / double(trials);
    const double var = std::max(sumsq / double(trials) - r.mean * r.mean, 0.0);
    r.se = std::sqrt(var / double(trials));
    return r;
}

inline detail::ProbeResult supermartingale_probe(const AdaptiveStrategy& q_strategy,
                                                 const SteinSolution& sol, std::size_t n,
                                                 std::size_t trials, std::uint64_t seed,
                                                 std::size_t threads = 0) {
    return likelihood_probe(q_strategy, sol.p_star, sol.q_star, 1.0, n, trials, seed, threads);
}

// --- serialization -----------------------------------------------------------

inline std::string to_csv(const ExperimentResult& r) {
    std::ostringstream os;
    os << std::setprecision(12);
    os << "n,alpha_hat,alpha_se,beta_hat,beta_se\n";
    for (std::size_t i = 0; i < r.n_values.size(); ++i)
        os << r.n_values[i] << ',' << r.alpha_hat[i] << ',' << r.alpha_se[i] << ','
           << r.beta_hat[i] << ',' << r.beta_se[i] << '\n';
    return os.str();
}

inline nlohmann::json to_json(const ExperimentResult& r) {
    return nlohmann::json{{"n_values", r.n_values},
                          {"alpha_hat", r.alpha_hat},
                          {"alpha_se", r.alpha_se},
                          {"beta_hat", r.beta_hat},
                          {"beta_se", r.beta_se},
                          {"fitted_exponent", r.fitted_exponent},
                          {"fitted_half_width", r.fitted_half_width},
                          {"target_exponent", r.target_exponent},
                          {"exponent_is_lower_bound", r.exponent_is_lower_bound},
                          {"degenerate", r.degenerate},
                          {"trials_per_n", r.trials_per_n},
                          {"seed", r.seed},
                          {"p_strategy", r.p_strategy},
                          {"q_strategy", r.q_strategy}};
}

}  // namespace advtest
