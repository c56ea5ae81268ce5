#pragma once

// Finitely generated convex classes of distributions: the sets the adversary
// draws from. Membership is decided by an exact linear feasibility solve, and
// simplex lattice grids support the brute-force oracles.

#include <cstdint>
#include <numeric>
#include <optional>

#include "lp.hpp"
#include "prob.hpp"

namespace advtest {

using MixWeights = std::vector<double>;

inline void validate_mix_weights(const MixWeights& w, std::size_t k) {
    if (w.size() != k) throw std::invalid_argument("MixWeights: length mismatch");
    double s = 0.0;
    for (double x : w) {
        if (x < -1e-12) throw std::invalid_argument("MixWeights: negative weight");
        s += x;
    }
    if (std::abs(s - 1.0) > 1e-9) throw std::invalid_argument("MixWeights: do not sum to 1");
}

class ConvexClass {
public:
    ConvexClass(Alphabet alphabet, std::vector<Distribution> vertices)
        : alphabet_(std::move(alphabet)) {
        if (vertices.empty()) throw std::invalid_argument("ConvexClass: no vertices");
        for (const auto& v : vertices) {
            if (!(v.alphabet() == alphabet_))
                throw std::invalid_argument("ConvexClass: vertex alphabet mismatch");
            bool dup = false;
            for (const auto& kept : vertices_)
                if (kept.linf_distance(v) <= 1e-12) { dup = true; break; }
            if (!dup) vertices_.push_back(v);
        }
    }

    const Alphabet& alphabet() const { return alphabet_; }
    std::size_t vertex_count() const { return vertices_.size(); }
    const Distribution& vertex(std::size_t i) const { return vertices_[i]; }
    const std::vector<Distribution>& vertices() const { return vertices_; }

    // Union of vertex supports.
    std::vector<bool> support_mask() const {
        std::vector<bool> m(alphabet_.size, false);
        for (const auto& v : vertices_)
            for (std::size_t x = 0; x < m.size(); ++x)
                if (v[x] > 0.0) m[x] = true;
        return m;
    }

private:
    Alphabet alphabet_;
    std::vector<Distribution> vertices_;
};

inline Distribution mix(const ConvexClass& cls, const MixWeights& w) {
    validate_mix_weights(w, cls.vertex_count());
    std::vector<double> out(cls.alphabet().size, 0.0);
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] == 0.0) continue;
        for (std::size_t x = 0; x < out.size(); ++x) out[x] += w[i] * cls.vertex(i)[x];
    }
    return Distribution(cls.alphabet(), std::move(out));
}

namespace detail {

// min over the weight simplex of the l-inf distance between sum w_i v_i and
// the target vector; returns (distance, weights).
inline std::pair<double, MixWeights> linf_projection(
    const std::vector<std::vector<double>>& verts, const std::vector<double>& target) {
    const std::size_t k = verts.size(), d = target.size();
    // variables: w (k), t, slack+ (d), slack- (d)
    const std::size_t n = k + 1 + 2 * d;
    std::vector<std::vector<double>> a;
    std::vector<double> b, c(n, 0.0);
    c[k] = 1.0;
    for (std::size_t x = 0; x < d; ++x) {
        std::vector<double> row(n, 0.0);
        for (std::size_t i = 0; i < k; ++i) row[i] = verts[i][x];
        row[k] = -1.0;
        row[k + 1 + x] = 1.0;
        a.push_back(row);
        b.push_back(target[x]);
        std::vector<double> row2(n, 0.0);
        for (std::size_t i = 0; i < k; ++i) row2[i] = -verts[i][x];
        row2[k] = -1.0;
        row2[k + 1 + d + x] = 1.0;
        a.push_back(row2);
        b.push_back(-target[x]);
    }
    std::vector<double> sum_row(n, 0.0);
    for (std::size_t i = 0; i < k; ++i) sum_row[i] = 1.0;
    a.push_back(sum_row);
    b.push_back(1.0);
    LpResult r = solve_lp(std::move(a), std::move(b), std::move(c));
    if (!r.feasible) throw std::logic_error("linf_projection: infeasible simplex LP");
    MixWeights w(r.x.begin(), r.x.begin() + k);
    double s = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& wi : w) wi = std::max(wi, 0.0) / s;
    return {std::max(r.value, 0.0), w};
}

}  // namespace detail

inline std::pair<double, MixWeights> project_weights(const ConvexClass& cls,
                                                     const Distribution& p) {
    require_shared_alphabet(cls.vertex(0), p);
    std::vector<std::vector<double>> verts;
    for (const auto& v : cls.vertices()) verts.push_back(v.weights());
    return detail::linf_projection(verts, p.weights());
}

inline bool contains(const ConvexClass& cls, const Distribution& p, double tol) {
    return project_weights(cls, p).first <= tol + 1e-12;
}

// Minimum l-inf distance between two classes; weights of the closest pair.
struct ClosestPair {
    double distance;
    MixWeights wp, wq;
};

inline ClosestPair closest_pair(const ConvexClass& P, const ConvexClass& Q) {
    const std::size_t kp = P.vertex_count(), kq = Q.vertex_count();
    const std::size_t d = P.alphabet().size;
    // variables: wp (kp), wq (kq), t, slack+ (d), slack- (d)
    const std::size_t n = kp + kq + 1 + 2 * d;
    std::vector<std::vector<double>> a;
    std::vector<double> b, c(n, 0.0);
    c[kp + kq] = 1.0;
    for (std::size_t x = 0; x < d; ++x) {
        std::vector<double> row(n, 0.0);
        for (std::size_t i = 0; i < kp; ++i) row[i] = P.vertex(i)[x];
        for (std::size_t j = 0; j < kq; ++j) row[kp + j] = -Q.vertex(j)[x];
        row[kp + kq] = -1.0;
        row[kp + kq + 1 + x] = 1.0;
        a.push_back(row); b.push_back(0.0);
        std::vector<double> row2(n, 0.0);
        for (std::size_t i = 0; i < kp; ++i) row2[i] = -P.vertex(i)[x];
        for (std::size_t j = 0; j < kq; ++j) row2[kp + j] = Q.vertex(j)[x];
        row2[kp + kq] = -1.0;
        row2[kp + kq + 1 + d + x] = 1.0;
        a.push_back(row2); b.push_back(0.0);
    }
    for (int block = 0; block < 2; ++block) {
        std::vector<double> row(n, 0.0);
        const std::size_t off = block == 0 ? 0 : kp;
        const std::size_t cnt = block == 0 ? kp : kq;
        for (std::size_t i = 0; i < cnt; ++i) row[off + i] = 1.0;
        a.push_back(row); b.push_back(1.0);
    }
    LpResult r = solve_lp(std::move(a), std::move(b), std::move(c));
    if (!r.feasible) throw std::logic_error("closest_pair: infeasible LP");
    auto normalize = [](MixWeights w) {
        double s = std::accumulate(w.begin(), w.end(), 0.0);
        for (double& x : w) x = std::max(x, 0.0) / s;
        return w;
    };
    return {std::max(r.value, 0.0),
            normalize(MixWeights(r.x.begin(), r.x.begin() + kp)),
            normalize(MixWeights(r.x.begin() + kp, r.x.begin() + kp + kq))};
}

// All lattice points of the weight simplex with the given denominator.
inline std::vector<MixWeights> weight_grid(const ConvexClass& cls, std::uint64_t resolution) {
    const std::size_t k = cls.vertex_count();
    if (resolution == 0) throw std::invalid_argument("weight_grid: resolution must be >= 1");
    // count = C(resolution + k - 1, k - 1)
    double count = 1.0;
    for (std::size_t i = 1; i < k; ++i)
        count *= double(resolution + i) / double(i);
    if (count > 1e7) throw std::length_error("weight_grid: grid would exceed 10^7 points");
    std::vector<MixWeights> out;
    std::vector<std::uint64_t> parts(k, 0);
    // enumerate compositions of `resolution` into k parts
    auto rec = [&](auto&& self, std::size_t pos, std::uint64_t rest) -> void {
        if (pos + 1 == k) {
            parts[pos] = rest;
            MixWeights w(k);
            for (std::size_t i = 0; i < k; ++i) w[i] = double(parts[i]) / double(resolution);
            out.push_back(std::move(w));
            return;
        }
        for (std::uint64_t take = 0; take <= rest; ++take) {
            parts[pos] = take;
            self(self, pos + 1, rest - take);
        }
    };
    rec(rec, 0, resolution);
    return out;
}

}  // namespace advtest
