#pragma once

// Adaptive adversary strategies: a general history-to-weights rule plus the
// builtin catalog used by the Monte Carlo engine. Rules are pure functions so
// strategies can be shared across worker threads.

#include "rng.hpp"
#include "sequential.hpp"

namespace advtest {

// History is the sequence of observed symbol indices so far.
struct AdaptiveStrategy {
    std::string name;
    ConvexClass cls;
    std::function<MixWeights(const std::vector<std::size_t>& history)> rule;

    AdaptiveStrategy(std::string n, ConvexClass c,
                     std::function<MixWeights(const std::vector<std::size_t>&)> r)
        : name(std::move(n)), cls(std::move(c)), rule(std::move(r)) {
        if (!rule) throw std::invalid_argument("AdaptiveStrategy: empty rule");
    }
};

namespace detail {

inline MixWeights vertex_weights(std::size_t k, std::size_t i) {
    MixWeights w(k, 0.0);
    w[i] = 1.0;
    return w;
}

// index of the class vertex maximizing sum_x v(x) * score(x)
inline std::size_t best_vertex(const ConvexClass& cls, const std::vector<double>& score,
                               bool maximize) {
    std::size_t best = 0;
    double best_val = maximize ? -kInf : kInf;
    for (std::size_t i = 0; i < cls.vertex_count(); ++i) {
        double s = 0.0;
        for (std::size_t x = 0; x < score.size(); ++x) {
            if (cls.vertex(i)[x] <= 0.0) continue;
            s += cls.vertex(i)[x] * score[x];
            if (std::isinf(score[x])) { s = score[x]; break; }
        }
        if (maximize ? s > best_val : s < best_val) {
            best_val = s;
            best = i;
        }
    }
    return best;
}

}  // namespace detail

// The strategies named in the engine's contract. `threshold_rate` is the
// per-round statistic target used by ThresholdChaser (the test threshold
// divided by n); GreedyRatio chases the one-step expected likelihood ratio
// E[p*(x)/q*(x)], which the optimal-play certificate bounds by 1.
inline std::vector<AdaptiveStrategy> builtin_strategies(const ConvexClass& cls,
                                                        const Distribution& p_star,
                                                        const Distribution& q_star,
                                                        const MixWeights& optimal_weights,
                                                        double threshold_rate,
                                                        std::uint64_t seed = 12345) {
    validate_mix_weights(optimal_weights, cls.vertex_count());
    const std::size_t k = cls.vertex_count();
    const std::size_t d = cls.alphabet().size;
    std::vector<AdaptiveStrategy> out;

    out.emplace_back("StaticOptimal", cls,
                     [optimal_weights](const std::vector<std::size_t>&) { return optimal_weights; });
    for (std::size_t i = 0; i < k; ++i)
        out.emplace_back("StaticVertex(" + std::to_string(i) + ")", cls,
                         [k, i](const std::vector<std::size_t>&) {
                             return detail::vertex_weights(k, i);
                         });
    out.emplace_back("UniformMixture", cls, [k](const std::vector<std::size_t>&) {
        return MixWeights(k, 1.0 / double(k));
    });

    // ratio score: p*(x)/q*(x) with the 0/0 convention ratio = 0 where p* = 0
    std::vector<double> ratio(d, 0.0);
    for (std::size_t x = 0; x < d; ++x)
        if (p_star[x] > 0.0) ratio[x] = q_star[x] > 0.0 ? p_star[x] / q_star[x] : kInf;
    {
        const std::size_t greedy = detail::best_vertex(cls, ratio, true);
        out.emplace_back("GreedyRatio", cls, [k, greedy](const std::vector<std::size_t>&) {
            return detail::vertex_weights(k, greedy);
        });
    }

    const auto table = log_likelihood_table(p_star, q_star);
    {
        const std::size_t up = detail::best_vertex(cls, table.values, true);
        const std::size_t down = detail::best_vertex(cls, table.values, false);
        out.emplace_back(
            "ThresholdChaser", cls,
            [k, up, down, table, threshold_rate](const std::vector<std::size_t>& hist) {
                double stat = 0.0;
                bool pinf = false, ninf = false;
                for (std::size_t x : hist) {
                    if (table[x] == kInf) pinf = true;
                    else if (table[x] == -kInf) ninf = true;
                    else stat += table[x];
                }
                const double s = ninf ? -kInf : (pinf ? kInf : stat);
                // at-or-below the target trajectory counts as behind, so the
                // very first round chases upward
                const bool below = s <= double(hist.size()) * threshold_rate;
                return detail::vertex_weights(k, below ? up : down);
            });
    }
    out.emplace_back("SeededRandomVertex", cls, [k, seed](const std::vector<std::size_t>& hist) {
        std::uint64_t h = detail::mix64(seed);
        for (std::size_t x : hist) h = detail::mix64(h ^ (x + 1));
        return detail::vertex_weights(k, std::size_t(h % k));
    });
    return out;
}

// Catalog keyed off a solved instance: the per-round statistic target is the
// test threshold divided by n, and StaticOptimal plays the minimizer weights
// for the given side.
inline std::vector<AdaptiveStrategy> builtin_strategies(const ConvexClass& cls,
                                                        const SteinSolution& sol, Side side,
                                                        double epsilon,
                                                        std::uint64_t seed = 12345) {
    return builtin_strategies(cls, sol.p_star, sol.q_star,
                              side == Side::P ? sol.weights_p : sol.weights_q,
                              sol.exponent - epsilon, seed);
}

inline std::vector<AdaptiveStrategy> builtin_strategies(const ConvexClass& cls,
                                                        const ChernoffSolution& sol, Side side,
                                                        std::uint64_t seed = 12345) {
    return builtin_strategies(cls, sol.p_star, sol.q_star,
                              side == Side::P ? sol.weights_p : sol.weights_q, 0.0, seed);
}

// Markov counterparts usable by the exact dynamic program.
inline MarkovStrategy static_markov(const ConvexClass& cls, MixWeights w) {
    validate_mix_weights(w, cls.vertex_count());
    return MarkovStrategy(cls, [w = std::move(w)](std::size_t, double) { return w; });
}

inline MarkovStrategy threshold_chaser_markov(const ConvexClass& cls,
                                              const LogLikelihoodTable& table,
                                              double threshold_rate) {
    const std::size_t k = cls.vertex_count();
    const std::size_t up = detail::best_vertex(cls, table.values, true);
    const std::size_t down = detail::best_vertex(cls, table.values, false);
    return MarkovStrategy(cls, [k, up, down, threshold_rate](std::size_t round, double stat) {
        const bool below = stat <= double(round) * threshold_rate;
        return detail::vertex_weights(k, below ? up : down);
    });
}

}  // namespace advtest
