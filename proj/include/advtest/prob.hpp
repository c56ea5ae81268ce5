#pragma once

// Finite-alphabet probability primitives: distributions, relative entropy,
// log-likelihood ratios and the Chernoff lambda-functional. All entropic
// values are in nats; +/-infinity is produced only by explicit support
// branching, never by accidental overflow.

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace advtest {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Alphabet {
    std::size_t size = 0;
    std::vector<std::string> labels;  // empty or one label per symbol

    Alphabet() = default;
    explicit Alphabet(std::size_t n) : size(n) {
        if (n == 0) throw std::invalid_argument("Alphabet: size must be >= 1");
    }
    explicit Alphabet(std::vector<std::string> names)
        : size(names.size()), labels(std::move(names)) {
        if (size == 0) throw std::invalid_argument("Alphabet: size must be >= 1");
        for (std::size_t i = 0; i < labels.size(); ++i)
            for (std::size_t j = i + 1; j < labels.size(); ++j)
                if (labels[i] == labels[j])
                    throw std::invalid_argument("Alphabet: duplicate label '" + labels[i] + "'");
    }

    friend bool operator==(const Alphabet& a, const Alphabet& b) {
        if (a.size != b.size) return false;
        if (!a.labels.empty() && !b.labels.empty()) return a.labels == b.labels;
        return true;
    }
};

class Distribution {
public:
    Distribution(Alphabet alphabet, std::vector<double> weights)
        : alphabet_(std::move(alphabet)), w_(std::move(weights)) {
        if (w_.size() != alphabet_.size)
            throw std::invalid_argument("Distribution: weight count != alphabet size");
        double sum = 0.0;
        for (double& x : w_) {
            if (x < 0.0) {
                if (x < -1e-12) throw std::invalid_argument("Distribution: negative weight");
                x = 0.0;
            }
            sum += x;
        }
        if (std::abs(sum - 1.0) > 1e-9)
            throw std::invalid_argument("Distribution: weights sum to " + std::to_string(sum));
        if (std::abs(sum - 1.0) > 1e-12)
            for (double& x : w_) x /= sum;
    }

    const Alphabet& alphabet() const { return alphabet_; }
    std::size_t size() const { return w_.size(); }
    double operator[](std::size_t i) const { return w_[i]; }
    const std::vector<double>& weights() const { return w_; }

    double linf_distance(const Distribution& o) const {
        double d = 0.0;
        for (std::size_t i = 0; i < w_.size(); ++i)
            d = std::max(d, std::abs(w_[i] - o.w_[i]));
        return d;
    }

private:
    Alphabet alphabet_;
    std::vector<double> w_;
};

// Two-point distribution with P(heads) = theta, symbol 0 = heads.
inline Distribution bernoulli(double theta) {
    return Distribution(Alphabet({"heads", "tails"}), {theta, 1.0 - theta});
}

inline void require_shared_alphabet(const Distribution& p, const Distribution& q) {
    if (!(p.alphabet() == q.alphabet()))
        throw std::invalid_argument("mismatched alphabets");
}

// L(x) = log p(x) - log q(x); +inf iff p>0, q=0; -inf iff p=0, q>0; 0 if both vanish.
struct LogLikelihoodTable {
    Alphabet alphabet;
    std::vector<double> values;  // nats, may contain +/-inf

    double operator[](std::size_t i) const { return values[i]; }
};

inline double kl_divergence(const Distribution& p, const Distribution& q) {
    require_shared_alphabet(p, q);
    double d = 0.0;
    for (std::size_t x = 0; x < p.size(); ++x) {
        if (p[x] <= 0.0) continue;
        if (q[x] <= 0.0) return kInf;
        d += p[x] * std::log(p[x] / q[x]);
    }
    // rounding can leave a tiny negative residue when p ~= q
    return d < 0.0 && d > -1e-12 ? 0.0 : d;
}

inline LogLikelihoodTable log_likelihood_table(const Distribution& p, const Distribution& q) {
    require_shared_alphabet(p, q);
    LogLikelihoodTable t{p.alphabet(), std::vector<double>(p.size(), 0.0)};
    for (std::size_t x = 0; x < p.size(); ++x) {
        const bool pp = p[x] > 0.0, qp = q[x] > 0.0;
        if (pp && qp) t.values[x] = std::log(p[x]) - std::log(q[x]);
        else if (pp) t.values[x] = kInf;
        else if (qp) t.values[x] = -kInf;
        else t.values[x] = 0.0;
    }
    return t;
}

// Gamma^lambda(p,q) = -log sum_x p(x)^l q(x)^(1-l), with 0^0-terms dropped.
inline double gamma_lambda(const Distribution& p, const Distribution& q, double lambda) {
    require_shared_alphabet(p, q);
    if (lambda < 0.0 || lambda > 1.0)
        throw std::invalid_argument("gamma_lambda: lambda outside [0,1]");
    double s = 0.0;
    for (std::size_t x = 0; x < p.size(); ++x) {
        if (p[x] <= 0.0 && lambda > 0.0) continue;
        if (q[x] <= 0.0 && lambda < 1.0) continue;
        if (lambda == 0.0) s += q[x];
        else if (lambda == 1.0) s += p[x];
        else s += std::exp(lambda * std::log(p[x]) + (1.0 - lambda) * std::log(q[x]));
    }
    if (s <= 0.0) return kInf;
    return std::max(-std::log(s), 0.0);
}

struct ChernoffInfo {
    double lambda_star;
    double value;  // nats
};

// Maximizes the concave map lambda -> Gamma^lambda by golden-section search.
inline ChernoffInfo chernoff_info(const Distribution& p, const Distribution& q) {
    require_shared_alphabet(p, q);
    if (p.linf_distance(q) <= 1e-12) return {0.5, 0.0};
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = 0.0, b = 1.0;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = gamma_lambda(p, q, x1), f2 = gamma_lambda(p, q, x2);
    if (std::isinf(f1) || std::isinf(f2)) return {0.5, kInf};
    while (b - a > 1e-11) {
        if (f1 < f2) {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + gr * (b - a); f2 = gamma_lambda(p, q, x2);
        } else {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - gr * (b - a); f1 = gamma_lambda(p, q, x1);
        }
    }
    const double lam = 0.5 * (a + b);
    return {lam, gamma_lambda(p, q, lam)};
}

}  // namespace advtest
