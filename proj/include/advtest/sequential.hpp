#pragma once

// Acceptance regions as sequential test evaluators: the epsilon-slack
// likelihood-ratio region used for the Stein bound and the symmetric
// zero-threshold region used for the Chernoff bound, plus an exact forward
// dynamic program for adversaries that are Markov in (round, statistic).

#include <cstdint>
#include <map>

#include "convex.hpp"
#include "solvers.hpp"

namespace advtest {

enum class Side { P, Q };

struct TestVerdict {
    bool accepted = false;
    double statistic = 0.0;  // cumulative log-likelihood ratio, nats
    double margin = 0.0;     // statistic - threshold
};

struct SteinTest {
    LogLikelihoodTable table;
    double epsilon = 0.0;
    std::size_t n = 0;
    double threshold = 0.0;  // n * (D(p*||q*) - epsilon)

    SteinTest(const SteinSolution& sol, double eps, std::size_t rounds)
        : table(log_likelihood_table(sol.p_star, sol.q_star)), epsilon(eps), n(rounds) {
        if (eps <= 0.0) throw std::invalid_argument("SteinTest: epsilon must be > 0");
        if (rounds == 0) throw std::invalid_argument("SteinTest: n must be >= 1");
        if (!sol.finite || std::isinf(sol.exponent))
            throw std::invalid_argument("SteinTest: solution exponent must be finite");
        threshold = double(rounds) * (sol.exponent - eps);
        if (!std::isfinite(threshold)) throw std::invalid_argument("SteinTest: threshold not finite");
    }
};

struct ChernoffTest {
    LogLikelihoodTable table;
    std::size_t n = 0;
    double threshold = 0.0;  // accept iff cumulative L >= 0

    ChernoffTest(const ChernoffSolution& sol, std::size_t rounds)
        : table(log_likelihood_table(sol.p_star, sol.q_star)), n(rounds) {
        if (rounds == 0) throw std::invalid_argument("ChernoffTest: n must be >= 1");
    }
};

namespace detail {

// Sum the per-symbol values with explicit infinity bookkeeping: one -inf
// symbol forces reject no matter what else appears (the accepted-hypothesis
// product is then zero), a +inf symbol alone forces accept.
inline double statistic_from_counts(const LogLikelihoodTable& table,
                                    const std::vector<std::uint32_t>& counts) {
    double s = 0.0;
    bool pinf = false;
    for (std::size_t x = 0; x < counts.size(); ++x) {
        if (counts[x] == 0) continue;
        const double lx = table[x];
        if (lx == -kInf) return -kInf;
        if (lx == kInf) pinf = true;
        else s += double(counts[x]) * lx;
    }
    return pinf ? kInf : s;
}

template <class Test>
TestVerdict evaluate_impl(const Test& test, const std::vector<std::size_t>& sample) {
    if (sample.size() != test.n)
        throw std::invalid_argument("evaluate: sample length does not match n");
    std::vector<std::uint32_t> counts(test.table.values.size(), 0);
    for (std::size_t x : sample) {
        if (x >= counts.size()) throw std::out_of_range("evaluate: symbol outside alphabet");
        ++counts[x];
    }
    TestVerdict v;
    v.statistic = statistic_from_counts(test.table, counts);
    v.margin = v.statistic == test.threshold ? 0.0 : v.statistic - test.threshold;
    v.accepted = v.margin >= 0.0;
    return v;
}

}  // namespace detail

inline TestVerdict evaluate(const SteinTest& t, const std::vector<std::size_t>& sample) {
    return detail::evaluate_impl(t, sample);
}
inline TestVerdict evaluate(const ChernoffTest& t, const std::vector<std::size_t>& sample) {
    return detail::evaluate_impl(t, sample);
}

// Adversary whose choice depends on the history only through the round index
// and the cumulative statistic (which may be +/-inf).
struct MarkovStrategy {
    ConvexClass cls;
    std::function<MixWeights(std::size_t round, double statistic)> rule;

    MarkovStrategy(ConvexClass c, std::function<MixWeights(std::size_t, double)> r)
        : cls(std::move(c)), rule(std::move(r)) {
        if (!rule) throw std::invalid_argument("MarkovStrategy: empty rule");
    }
};

namespace detail {

// Forward DP over symbol-count vectors. The statistic is a function of the
// counts, so for a Markov-in-statistic adversary the count vector is a
// sufficient state and the computed probability is exact (no bucketing).
// States that have seen a -inf symbol are absorbed straight into reject mass.
template <class Test>
double exact_acceptance(const Test& test, const MarkovStrategy& strategy) {
    if (!(strategy.cls.alphabet().size == test.table.values.size()))
        throw std::invalid_argument("exact_adversary_error: alphabet mismatch");
    const std::size_t d = test.table.values.size();
    std::map<std::vector<std::uint32_t>, double> layer;
    layer[std::vector<std::uint32_t>(d, 0)] = 1.0;
    double rejected = 0.0;
    std::size_t peak_states = 1;
    for (std::size_t k = 0; k < test.n; ++k) {
        std::map<std::vector<std::uint32_t>, double> next;
        for (const auto& [counts, prob] : layer) {
            const double stat = statistic_from_counts(test.table, counts);
            MixWeights w = strategy.rule(k, stat);
            validate_mix_weights(w, strategy.cls.vertex_count());
            std::vector<double> px(d, 0.0);
            for (std::size_t i = 0; i < w.size(); ++i) {
                if (w[i] == 0.0) continue;
                for (std::size_t x = 0; x < d; ++x) px[x] += w[i] * strategy.cls.vertex(i)[x];
            }
            for (std::size_t x = 0; x < d; ++x) {
                if (px[x] <= 0.0) continue;
                if (test.table[x] == -kInf) {
                    rejected += prob * px[x];  // absorbed: reject regardless of the future
                    continue;
                }
                auto c2 = counts;
                ++c2[x];
                next[std::move(c2)] += prob * px[x];
            }
        }
        layer.swap(next);
        peak_states = std::max(peak_states, layer.size());
        if (peak_states > std::size_t(1e7))
            throw std::length_error("exact_adversary_error: state count exceeds 10^7");
    }
    double accepted = 0.0;
    for (const auto& [counts, prob] : layer) {
        const double stat = statistic_from_counts(test.table, counts);
        if (stat >= test.threshold) accepted += prob;
    }
    (void)rejected;
    return accepted;
}

}  // namespace detail

// Exact probability that the test accepts when `strategy` generates the
// sample. Side::Q callers read this as the type-2 error directly; Side::P
// callers subtract from one for the type-1 error.
inline double exact_adversary_error(const SteinTest& t, const MarkovStrategy& s, Side) {
    return detail::exact_acceptance(t, s);
}
inline double exact_adversary_error(const ChernoffTest& t, const MarkovStrategy& s, Side) {
    return detail::exact_acceptance(t, s);
}

}  // namespace advtest
