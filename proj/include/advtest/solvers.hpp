#pragma once

// Convex solvers for the adversarial Stein exponent min D(p||q) and the
// adversarial Chernoff exponent min Gamma*(p,q) over a product of weight
// simplices, plus the vertex-inequality certificates that make the
// likelihood-ratio (and tilted) products supermartingales.

#include <algorithm>
#include <functional>
#include <sstream>

#include "convex.hpp"

namespace advtest {

class convergence_error : public std::runtime_error {
public:
    convergence_error(const std::string& msg, double best_value, double gap)
        : std::runtime_error(msg), best_value(best_value), gap(gap) {}
    double best_value;
    double gap;
};

inline Distribution mix_from(const std::vector<std::vector<double>>& verts,
                             const MixWeights& w, const Alphabet& ab) {
    std::vector<double> out(ab.size, 0.0);
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] == 0.0) continue;
        for (std::size_t x = 0; x < out.size(); ++x) out[x] += w[i] * verts[i][x];
    }
    return Distribution(ab, std::move(out));
}

namespace detail {

// Objective over a pair of mixture-weight simplices (u, v). Gradients may be
// clamped for the sake of the linear oracle; dderiv must have the exact sign.
struct PairObjective {
    std::function<double(const MixWeights& u, const MixWeights& v)> value;
    std::function<void(const MixWeights& u, const MixWeights& v,
                       std::vector<double>& gu, std::vector<double>& gv)> grad;
    std::function<double(const MixWeights& u, const MixWeights& v,
                         const MixWeights& du, const MixWeights& dv)> dderiv;
};

struct PairFwResult {
    MixWeights u, v;
    double value;
    double gap;
    std::size_t iterations;
    bool converged;
};

// Away-step Frank-Wolfe on f(u, v) over Delta_kp x Delta_kq. Atoms are vertex
// pairs (i, j); keeping an explicit active set restores linear convergence on
// the polytope. The optional extra stopping predicate sees the current point.
inline PairFwResult pair_frank_wolfe(
    std::size_t kp, std::size_t kq, const PairObjective& obj, double tol,
    std::size_t max_iter = 100000,
    const std::function<bool(const MixWeights&, const MixWeights&)>& extra_stop = nullptr,
    const MixWeights* warm_u = nullptr, const MixWeights* warm_v = nullptr) {
    std::vector<std::pair<std::size_t, std::size_t>> atoms;
    std::vector<double> w;
    if (warm_u && warm_v) {
        // decompose the warm start into a product atom set
        for (std::size_t i = 0; i < kp; ++i)
            for (std::size_t j = 0; j < kq; ++j) {
                const double wij = (*warm_u)[i] * (*warm_v)[j];
                if (wij > 1e-14) { atoms.emplace_back(i, j); w.push_back(wij); }
            }
    }
    if (atoms.empty()) {
        for (std::size_t i = 0; i < kp; ++i)
            for (std::size_t j = 0; j < kq; ++j) atoms.emplace_back(i, j);
        w.assign(atoms.size(), 1.0 / double(atoms.size()));
    }

    MixWeights u(kp), v(kq);
    std::vector<double> gu(kp), gv(kq);
    auto refresh = [&] {
        std::fill(u.begin(), u.end(), 0.0);
        std::fill(v.begin(), v.end(), 0.0);
        for (std::size_t t = 0; t < atoms.size(); ++t) {
            u[atoms[t].first] += w[t];
            v[atoms[t].second] += w[t];
        }
    };
    refresh();

    double gap = kInf;
    std::size_t it = 0;
    for (; it < max_iter; ++it) {
        obj.grad(u, v, gu, gv);
        double cur = 0.0;
        for (std::size_t t = 0; t < atoms.size(); ++t)
            cur += w[t] * (gu[atoms[t].first] + gv[atoms[t].second]);
        const std::size_t fi = std::min_element(gu.begin(), gu.end()) - gu.begin();
        const std::size_t fj = std::min_element(gv.begin(), gv.end()) - gv.begin();
        gap = cur - (gu[fi] + gv[fj]);
        if (gap <= tol && (!extra_stop || extra_stop(u, v))) break;

        std::size_t away = 0;
        double away_score = -kInf;
        for (std::size_t t = 0; t < atoms.size(); ++t) {
            if (w[t] <= 0.0) continue;
            const double s = gu[atoms[t].first] + gv[atoms[t].second];
            if (s > away_score) { away_score = s; away = t; }
        }
        const bool fw_step = gap >= away_score - cur;

        MixWeights du(kp, 0.0), dv(kq, 0.0);
        double gmax;
        std::size_t target;
        if (fw_step) {
            for (std::size_t i = 0; i < kp; ++i) du[i] = -u[i];
            for (std::size_t j = 0; j < kq; ++j) dv[j] = -v[j];
            du[fi] += 1.0;
            dv[fj] += 1.0;
            gmax = 1.0;
            target = atoms.size();
            for (std::size_t t = 0; t < atoms.size(); ++t)
                if (atoms[t] == std::make_pair(fi, fj)) { target = t; break; }
            if (target == atoms.size()) {
                atoms.emplace_back(fi, fj);
                w.push_back(0.0);
            }
        } else {
            const auto [ai, aj] = atoms[away];
            for (std::size_t i = 0; i < kp; ++i) du[i] = u[i];
            for (std::size_t j = 0; j < kq; ++j) dv[j] = v[j];
            du[ai] -= 1.0;
            dv[aj] -= 1.0;
            if (w[away] >= 1.0 - 1e-15) break;  // single-atom degenerate point
            gmax = w[away] / (1.0 - w[away]);
            target = away;
        }

        // Exact line search: the objective is convex along the segment, so
        // bisect on the sign of the directional derivative.
        double step = 0.0;
        if (obj.dderiv(u, v, du, dv) < 0.0) {
            MixWeights ut(kp), vt(kq);
            auto der_at = [&](double g) {
                for (std::size_t i = 0; i < kp; ++i) ut[i] = std::max(u[i] + g * du[i], 0.0);
                for (std::size_t j = 0; j < kq; ++j) vt[j] = std::max(v[j] + g * dv[j], 0.0);
                return obj.dderiv(ut, vt, du, dv);
            };
            if (der_at(gmax) <= 0.0) step = gmax;
            else {
                double lo = 0.0, hi = gmax;
                for (int b = 0; b < 90 && hi - lo > 1e-17; ++b) {
                    const double mid = 0.5 * (lo + hi);
                    (der_at(mid) <= 0.0 ? lo : hi) = mid;
                }
                step = 0.5 * (lo + hi);
            }
        }
        if (step <= 0.0) {
            if (fw_step) break;  // the oracle direction gives no descent
            continue;
        }
        const double scale = fw_step ? (1.0 - step) : (1.0 + step);
        for (double& wt : w) wt *= scale;
        w[target] += fw_step ? step : -step;
        for (std::size_t t = 0; t < atoms.size();) {
            if (w[t] <= 1e-16) {
                atoms[t] = atoms.back(); atoms.pop_back();
                w[t] = w.back(); w.pop_back();
            } else ++t;
        }
        double s = 0.0;
        for (double wt : w) s += wt;
        for (double& wt : w) wt /= s;
        refresh();
    }
    refresh();
    return {u, v, obj.value(u, v), gap, it, it < max_iter};
}

inline std::vector<double> mix_vec(const std::vector<std::vector<double>>& verts,
                                   const MixWeights& w) {
    std::vector<double> out(verts[0].size(), 0.0);
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] == 0.0) continue;
        for (std::size_t x = 0; x < out.size(); ++x) out[x] += w[i] * verts[i][x];
    }
    return out;
}

// sum_m mu_m KL(sum_i u_i pverts[m][i] || sum_j v_j qverts[m][j]): the Stein
// objective is the single-term case, and the minimax machinery reuses the
// weighted form directly.
struct WeightedKlObjective {
    std::vector<std::vector<std::vector<double>>> pverts;  // [term][vertex][symbol]
    std::vector<std::vector<std::vector<double>>> qverts;
    std::vector<double> mu;

    PairObjective make() const {
        const auto* self = this;
        PairObjective o;
        o.value = [self](const MixWeights& u, const MixWeights& v) {
            double total = 0.0;
            for (std::size_t m = 0; m < self->mu.size(); ++m) {
                if (self->mu[m] == 0.0) continue;
                const auto p = mix_vec(self->pverts[m], u);
                const auto q = mix_vec(self->qverts[m], v);
                double d = 0.0;
                for (std::size_t x = 0; x < p.size(); ++x) {
                    if (p[x] <= 0.0) continue;
                    if (q[x] <= 0.0) return kInf;
                    d += p[x] * std::log(p[x] / q[x]);
                }
                total += self->mu[m] * std::max(d, 0.0);
            }
            return total;
        };
        o.grad = [self](const MixWeights& u, const MixWeights& v,
                        std::vector<double>& gu, std::vector<double>& gv) {
            std::fill(gu.begin(), gu.end(), 0.0);
            std::fill(gv.begin(), gv.end(), 0.0);
            for (std::size_t m = 0; m < self->mu.size(); ++m) {
                if (self->mu[m] == 0.0) continue;
                const auto p = mix_vec(self->pverts[m], u);
                const auto q = mix_vec(self->qverts[m], v);
                for (std::size_t x = 0; x < p.size(); ++x) {
                    double lr = 0.0;
                    if (p[x] > 0.0 && q[x] > 0.0) lr = std::log(p[x] / q[x]);
                    else if (p[x] > 0.0) lr = 60.0;
                    else if (q[x] > 0.0) lr = -60.0;
                    lr = std::clamp(lr, -60.0, 60.0) + 1.0;
                    const double ratio = q[x] > 0.0 ? std::min(p[x] / q[x], 1e12)
                                                    : (p[x] > 0.0 ? 1e12 : 0.0);
                    for (std::size_t i = 0; i < gu.size(); ++i)
                        gu[i] += self->mu[m] * self->pverts[m][i][x] * lr;
                    for (std::size_t j = 0; j < gv.size(); ++j)
                        gv[j] -= self->mu[m] * ratio * self->qverts[m][j][x];
                }
            }
        };
        o.dderiv = [self](const MixWeights& u, const MixWeights& v,
                          const MixWeights& du, const MixWeights& dv) {
            double der = 0.0;
            for (std::size_t m = 0; m < self->mu.size(); ++m) {
                if (self->mu[m] == 0.0) continue;
                const auto p = mix_vec(self->pverts[m], u);
                const auto q = mix_vec(self->qverts[m], v);
                const auto dp = mix_vec(self->pverts[m], du);
                const auto dq = mix_vec(self->qverts[m], dv);
                for (std::size_t x = 0; x < p.size(); ++x) {
                    if (p[x] > 0.0) {
                        if (q[x] <= 0.0) return 1e30;
                        der += self->mu[m] * (dp[x] * (std::log(p[x] / q[x]) + 1.0) -
                                              p[x] * dq[x] / q[x]);
                    } else if (dp[x] > 0.0) {
                        if (q[x] <= 0.0 && dq[x] <= 0.0) return 1e30;
                        der += self->mu[m] * dp[x] * -60.0;
                    }
                }
            }
            return der;
        };
        return o;
    }
};

}  // namespace detail

struct SteinCertificate {
    double max_q_ratio = 0.0;  // max over Q vertices of sum_x q(x) p*(x)/q*(x)
    double min_p_drift = 0.0;  // min over P vertices of E_p[L] - D(p*||q*)
    bool pass(double tol = 1e-7) const {
        return max_q_ratio <= 1.0 + tol && min_p_drift >= -tol;
    }
};

struct SteinSolution {
    Distribution p_star, q_star;
    double exponent = 0.0;  // nats; +inf when no support-compatible pair exists
    MixWeights weights_p, weights_q;
    SteinCertificate certificate;
    bool finite = true;
    std::string diagnostic;
};

struct ChernoffCertificate {
    double max_q_tilted_ratio = 0.0;  // max over Q vertices of E_q[(p*/q*)^l] - base
    double max_p_tilted_ratio = 0.0;  // max over P vertices of E_p[(q*/p*)^(1-l)] - base
    bool pass(double tol = 1e-7) const {
        return max_q_tilted_ratio <= tol && max_p_tilted_ratio <= tol;
    }
};

struct ChernoffSolution {
    Distribution p_star, q_star;
    double lambda_star = 0.5;
    double exponent = 0.0;  // nats
    MixWeights weights_p, weights_q;
    ChernoffCertificate certificate;
    bool finite = true;
    bool lambda_on_boundary = false;
    std::string diagnostic;
};

inline SteinCertificate certify_stein(const ConvexClass& P, const ConvexClass& Q,
                                      const SteinSolution& sol) {
    const auto& ps = sol.p_star;
    const auto& qs = sol.q_star;
    SteinCertificate cert;
    cert.max_q_ratio = -kInf;
    for (const auto& q : Q.vertices()) {
        double s = 0.0;
        for (std::size_t x = 0; x < q.size(); ++x) {
            if (ps[x] <= 0.0 || q[x] <= 0.0) continue;  // ratio p*/q* is 0 where p* = 0
            s += qs[x] > 0.0 ? q[x] * ps[x] / qs[x] : kInf;
        }
        cert.max_q_ratio = std::max(cert.max_q_ratio, s);
    }
    const double d_star = kl_divergence(ps, qs);
    const auto table = log_likelihood_table(ps, qs);
    cert.min_p_drift = kInf;
    for (const auto& p : P.vertices()) {
        double s = 0.0;
        for (std::size_t x = 0; x < p.size(); ++x)
            if (p[x] > 0.0 && table[x] != 0.0) s += p[x] * table[x];
        cert.min_p_drift = std::min(cert.min_p_drift, s - d_star);
    }
    return cert;
}

inline ChernoffCertificate certify_chernoff(const ConvexClass& P, const ConvexClass& Q,
                                            const ChernoffSolution& sol) {
    const auto& ps = sol.p_star;
    const auto& qs = sol.q_star;
    const double lam = sol.lambda_star;
    auto tilted = [](double num, double den, double e) {
        if (e == 0.0) return 1.0;
        if (num <= 0.0) return 0.0;
        if (den <= 0.0) return kInf;
        return std::exp(e * (std::log(num) - std::log(den)));
    };
    ChernoffCertificate cert;
    double base_q = 0.0, base_p = 0.0;
    for (std::size_t x = 0; x < ps.size(); ++x) {
        if (qs[x] > 0.0) base_q += qs[x] * tilted(ps[x], qs[x], lam);
        if (ps[x] > 0.0) base_p += ps[x] * tilted(qs[x], ps[x], 1.0 - lam);
    }
    cert.max_q_tilted_ratio = -kInf;
    for (const auto& q : Q.vertices()) {
        double s = 0.0;
        for (std::size_t x = 0; x < q.size(); ++x)
            if (q[x] > 0.0) s += q[x] * tilted(ps[x], qs[x], lam);
        cert.max_q_tilted_ratio = std::max(cert.max_q_tilted_ratio, s - base_q);
    }
    cert.max_p_tilted_ratio = -kInf;
    for (const auto& p : P.vertices()) {
        double s = 0.0;
        for (std::size_t x = 0; x < p.size(); ++x)
            if (p[x] > 0.0) s += p[x] * tilted(qs[x], ps[x], 1.0 - lam);
        cert.max_p_tilted_ratio = std::max(cert.max_p_tilted_ratio, s - base_p);
    }
    return cert;
}

namespace detail {

// P vertices whose support fits inside the union support of Q; a mixture that
// puts weight on any other vertex has infinite divergence against all of Q.
inline std::vector<std::size_t> support_feasible_vertices(const ConvexClass& P,
                                                          const ConvexClass& Q) {
    const auto qmask = Q.support_mask();
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < P.vertex_count(); ++i) {
        bool ok = true;
        for (std::size_t x = 0; x < qmask.size(); ++x)
            if (P.vertex(i)[x] > 0.0 && !qmask[x]) { ok = false; break; }
        if (ok) keep.push_back(i);
    }
    return keep;
}

inline MixWeights expand_weights(const MixWeights& w, const std::vector<std::size_t>& idx,
                                 std::size_t full) {
    MixWeights out(full, 0.0);
    for (std::size_t t = 0; t < idx.size(); ++t) out[idx[t]] = w[t];
    return out;
}

}  // namespace detail

inline SteinSolution solve_stein(const ConvexClass& P, const ConvexClass& Q, double tol) {
    if (!(P.alphabet() == Q.alphabet()))
        throw std::invalid_argument("solve_stein: alphabet mismatch");
    if (tol <= 0.0) throw std::invalid_argument("solve_stein: tol must be > 0");

    const auto feas = detail::support_feasible_vertices(P, Q);
    if (feas.empty()) {
        SteinSolution sol{P.vertex(0),
                          mix(Q, MixWeights(Q.vertex_count(), 1.0 / double(Q.vertex_count()))),
                          kInf,
                          MixWeights(P.vertex_count(), 0.0),
                          MixWeights(Q.vertex_count(), 1.0 / double(Q.vertex_count()))};
        sol.weights_p[0] = 1.0;
        sol.finite = false;
        sol.diagnostic = "every P vertex has mass outside the union support of Q";
        return sol;
    }

    // Intersection shortcut: a common point means exponent 0 with p* = q*.
    const auto cp = closest_pair(P, Q);
    if (cp.distance <= 1e-9) {
        SteinSolution sol{mix(P, cp.wp), mix(Q, cp.wq), 0.0, cp.wp, cp.wq};
        sol.q_star = sol.p_star;  // identical within LP tolerance; pin them equal
        sol.certificate = certify_stein(P, Q, sol);
        return sol;
    }

    detail::WeightedKlObjective wk;
    wk.mu = {1.0};
    wk.pverts.emplace_back();
    wk.qverts.emplace_back();
    for (std::size_t i : feas) wk.pverts[0].push_back(P.vertex(i).weights());
    for (const auto& v : Q.vertices()) wk.qverts[0].push_back(v.weights());
    const auto obj = wk.make();

    // Stop only once the duality gap closes and the vertex inequalities that
    // back the supermartingale certificate hold at the current point.
    auto vertex_stop = [&](const MixWeights& u, const MixWeights& v) {
        SteinSolution probe{mix_from(wk.pverts[0], u, P.alphabet()),
                            mix_from(wk.qverts[0], v, P.alphabet()), 0.0, {}, {}};
        const auto cert = certify_stein(P, Q, probe);
        return cert.max_q_ratio <= 1.0 + 5e-8 && cert.min_p_drift >= -5e-8;
    };
    const auto fw = detail::pair_frank_wolfe(feas.size(), Q.vertex_count(), obj,
                                             std::min(tol, 1e-9), 100000, vertex_stop);
    SteinSolution sol{mix_from(wk.pverts[0], fw.u, P.alphabet()),
                      mix_from(wk.qverts[0], fw.v, P.alphabet()), 0.0,
                      detail::expand_weights(fw.u, feas, P.vertex_count()), fw.v};
    sol.exponent = kl_divergence(sol.p_star, sol.q_star);
    sol.certificate = certify_stein(P, Q, sol);
    if (!fw.converged && fw.gap > tol) {
        std::ostringstream os;
        os << "solve_stein: no convergence after " << fw.iterations << " iterations, gap "
           << fw.gap;
        throw convergence_error(os.str(), sol.exponent, fw.gap);
    }
    return sol;
}

inline ChernoffSolution solve_chernoff(const ConvexClass& P, const ConvexClass& Q, double tol) {
    if (!(P.alphabet() == Q.alphabet()))
        throw std::invalid_argument("solve_chernoff: alphabet mismatch");
    if (tol <= 0.0) throw std::invalid_argument("solve_chernoff: tol must be > 0");

    const auto cp = closest_pair(P, Q);
    if (cp.distance <= 1e-9) {
        ChernoffSolution sol{mix(P, cp.wp), mix(Q, cp.wq), 0.5, 0.0, cp.wp, cp.wq};
        sol.q_star = sol.p_star;
        sol.certificate = certify_chernoff(P, Q, sol);
        return sol;
    }
    if (P.vertex_count() == 1 && Q.vertex_count() == 1) {
        const auto ci = chernoff_info(P.vertex(0), Q.vertex(0));
        ChernoffSolution sol{P.vertex(0), Q.vertex(0), ci.lambda_star, ci.value, {1.0}, {1.0}};
        sol.finite = !std::isinf(ci.value);
        sol.lambda_on_boundary = ci.lambda_star <= 1e-9 || ci.lambda_star >= 1.0 - 1e-9;
        sol.certificate = certify_chernoff(P, Q, sol);
        return sol;
    }

    std::vector<std::vector<double>> pverts, qverts;
    for (const auto& v : P.vertices()) pverts.push_back(v.weights());
    for (const auto& v : Q.vertices()) qverts.push_back(v.weights());
    const Alphabet& ab = P.alphabet();

    auto inner = [&ab, &pverts, &qverts](const MixWeights& u, const MixWeights& v) {
        return chernoff_info(mix_from(pverts, u, ab), mix_from(qverts, v, ab));
    };
    // Danskin: a subgradient of Gamma* = max_l Gamma^l is the gradient of
    // Gamma^lambda at the inner maximizer lambda*. Derivatives are taken in
    // symbol space first, then pushed onto the weight simplices.
    auto tilted_grad = [&](const MixWeights& u, const MixWeights& v, double lam, double value,
                           std::vector<double>& dp_sym, std::vector<double>& dq_sym) {
        const auto p = detail::mix_vec(pverts, u);
        const auto q = detail::mix_vec(qverts, v);
        const double s = std::exp(-std::min(value, 700.0));  // the inner tilted sum
        dp_sym.assign(p.size(), 0.0);
        dq_sym.assign(q.size(), 0.0);
        for (std::size_t x = 0; x < p.size(); ++x) {
            double dpt = 0.0, dqt = 0.0;
            if (p[x] > 0.0 && q[x] > 0.0) {
                const double lp = std::log(p[x]), lq = std::log(q[x]);
                dpt = lam * std::exp((lam - 1.0) * lp + (1.0 - lam) * lq);
                dqt = (1.0 - lam) * std::exp(lam * (lp - lq));
            } else if (p[x] <= 0.0 && q[x] > 0.0) {
                dpt = lam > 0.0 ? 1e12 : 0.0;
                dqt = lam >= 1.0 - 1e-12 ? 1.0 : 0.0;
            } else if (q[x] <= 0.0 && p[x] > 0.0) {
                dqt = lam < 1.0 ? 1e12 : 0.0;
                dpt = lam <= 1e-12 ? 1.0 : 0.0;
            }
            dp_sym[x] = -std::min(dpt, 1e12) / s;  // d(-log s)/dp_x
            dq_sym[x] = -std::min(dqt, 1e12) / s;
        }
    };

    detail::PairObjective obj;
    obj.value = [inner](const MixWeights& u, const MixWeights& v) { return inner(u, v).value; };
    obj.grad = [&](const MixWeights& u, const MixWeights& v, std::vector<double>& gu,
                   std::vector<double>& gv) {
        const auto ci = inner(u, v);
        std::vector<double> dp, dq;
        tilted_grad(u, v, ci.lambda_star, ci.value, dp, dq);
        for (std::size_t i = 0; i < gu.size(); ++i) {
            gu[i] = 0.0;
            for (std::size_t x = 0; x < dp.size(); ++x) gu[i] += pverts[i][x] * dp[x];
        }
        for (std::size_t j = 0; j < gv.size(); ++j) {
            gv[j] = 0.0;
            for (std::size_t x = 0; x < dq.size(); ++x) gv[j] += qverts[j][x] * dq[x];
        }
    };
    obj.dderiv = [&](const MixWeights& u, const MixWeights& v, const MixWeights& du,
                     const MixWeights& dv) {
        const auto ci = inner(u, v);
        std::vector<double> dp, dq;
        tilted_grad(u, v, ci.lambda_star, ci.value, dp, dq);
        const auto dpm = detail::mix_vec(pverts, du);
        const auto dqm = detail::mix_vec(qverts, dv);
        double der = 0.0;
        for (std::size_t x = 0; x < dp.size(); ++x) der += dp[x] * dpm[x] + dq[x] * dqm[x];
        return der;
    };

    auto vertex_stop = [&](const MixWeights& u, const MixWeights& v) {
        ChernoffSolution probe{mix_from(pverts, u, ab), mix_from(qverts, v, ab),
                               0.5, 0.0, {}, {}};
        probe.lambda_star = chernoff_info(probe.p_star, probe.q_star).lambda_star;
        const auto cert = certify_chernoff(P, Q, probe);
        return cert.max_q_tilted_ratio <= 5e-8 && cert.max_p_tilted_ratio <= 5e-8;
    };
    const auto fw = detail::pair_frank_wolfe(P.vertex_count(), Q.vertex_count(), obj,
                                             std::min(tol, 1e-9), 100000, vertex_stop);
    ChernoffSolution sol{mix_from(pverts, fw.u, ab), mix_from(qverts, fw.v, ab),
                         0.5, 0.0, fw.u, fw.v};
    const auto ci = chernoff_info(sol.p_star, sol.q_star);
    sol.lambda_star = ci.lambda_star;
    sol.exponent = ci.value;
    sol.finite = !std::isinf(ci.value);
    sol.lambda_on_boundary = ci.lambda_star <= 1e-9 || ci.lambda_star >= 1.0 - 1e-9;
    sol.certificate = certify_chernoff(P, Q, sol);
    if (!fw.converged && fw.gap > tol) {
        std::ostringstream os;
        os << "solve_chernoff: no convergence after " << fw.iterations << " iterations, gap "
           << fw.gap;
        throw convergence_error(os.str(), sol.exponent, fw.gap);
    }
    return sol;
}

// --- brute-force oracles ----------------------------------------------------

namespace detail {

inline Distribution mix_raw(const ConvexClass& cls, const MixWeights& w) {
    std::vector<double> out(cls.alphabet().size, 0.0);
    for (std::size_t i = 0; i < w.size(); ++i)
        for (std::size_t x = 0; x < out.size(); ++x) out[x] += w[i] * cls.vertex(i)[x];
    return Distribution(cls.alphabet(), std::move(out));
}

// Grid of weight vectors around a center: every coordinate offset in
// {-span..span} * h, renormalized back onto the simplex.
inline std::vector<MixWeights> local_grid(const MixWeights& center, double h, int span) {
    std::vector<MixWeights> out;
    const std::size_t k = center.size();
    std::vector<int> offs(k, -span);
    while (true) {
        MixWeights w(k);
        double s = 0.0;
        bool ok = true;
        for (std::size_t i = 0; i < k; ++i) {
            w[i] = center[i] + offs[i] * h;
            if (w[i] < -1e-12) { ok = false; break; }
            w[i] = std::max(w[i], 0.0);
            s += w[i];
        }
        if (ok && s > 1e-12) {
            for (double& x : w) x /= s;
            out.push_back(std::move(w));
        }
        std::size_t pos = 0;
        while (pos < k && ++offs[pos] > span) offs[pos++] = -span;
        if (pos == k) break;
    }
    return out;
}

}  // namespace detail

// Independent check: minimum of the divergence over a simplex-lattice product
// grid. When the full product grid would be too large, a coarse full scan is
// refined locally down to the requested lattice step; joint convexity of the
// divergence means the coarse argmin already sits in the basin of the minimum.
inline double brute_force_stein(const ConvexClass& P, const ConvexClass& Q,
                                std::uint64_t resolution) {
    auto scan = [&](const std::vector<MixWeights>& gp, const std::vector<MixWeights>& gq,
                    MixWeights* bp, MixWeights* bq) {
        double best = kInf;
        for (const auto& wp : gp) {
            const auto p = detail::mix_raw(P, wp);
            for (const auto& wq : gq) {
                const double d = kl_divergence(p, detail::mix_raw(Q, wq));
                if (d < best) {
                    best = d;
                    if (bp) *bp = wp;
                    if (bq) *bq = wq;
                }
            }
        }
        return best;
    };
    {
        const auto gp = weight_grid(P, std::min<std::uint64_t>(resolution, 4000));
        const auto gq = weight_grid(Q, std::min<std::uint64_t>(resolution, 4000));
        if (double(gp.size()) * double(gq.size()) <= 2.5e6) return scan(gp, gq, nullptr, nullptr);
    }
    std::uint64_t coarse = 24;
    MixWeights bp, bq;
    double best = scan(weight_grid(P, coarse), weight_grid(Q, coarse), &bp, &bq);
    double h = 1.0 / double(coarse);
    while (h > 1.0 / double(resolution)) {
        h /= 4.0;
        best = std::min(best, scan(detail::local_grid(bp, h, 5),
                                   detail::local_grid(bq, h, 5), &bp, &bq));
    }
    return best;
}

// Independent check for the Chernoff exponent: a coarse lambda grid during the
// pair scan picks the minimizing pair, then a fine lambda grid evaluates it.
inline double brute_force_chernoff(const ConvexClass& P, const ConvexClass& Q,
                                   std::uint64_t resolution, std::size_t lambda_grid = 10000) {
    auto gamma_max_coarse = [](const Distribution& p, const Distribution& q) {
        double best = 0.0;
        for (int i = 0; i <= 80; ++i) {
            const double g = gamma_lambda(p, q, double(i) / 80.0);
            if (!std::isinf(g)) best = std::max(best, g);
        }
        return best;
    };
    auto scan = [&](const std::vector<MixWeights>& gp, const std::vector<MixWeights>& gq,
                    MixWeights* bp, MixWeights* bq) {
        double best = kInf;
        for (const auto& wp : gp) {
            const auto p = detail::mix_raw(P, wp);
            for (const auto& wq : gq) {
                const double g = gamma_max_coarse(p, detail::mix_raw(Q, wq));
                if (g < best) {
                    best = g;
                    if (bp) *bp = wp;
                    if (bq) *bq = wq;
                }
            }
        }
        return best;
    };
    MixWeights bp(P.vertex_count(), 1.0 / double(P.vertex_count()));
    MixWeights bq(Q.vertex_count(), 1.0 / double(Q.vertex_count()));
    {
        const auto gp = weight_grid(P, std::min<std::uint64_t>(resolution, 1200));
        const auto gq = weight_grid(Q, std::min<std::uint64_t>(resolution, 1200));
        if (double(gp.size()) * double(gq.size()) <= 3e5) {
            scan(gp, gq, &bp, &bq);
        } else {
            std::uint64_t coarse = 16;
            scan(weight_grid(P, coarse), weight_grid(Q, coarse), &bp, &bq);
            double h = 1.0 / double(coarse);
            while (h > 1.0 / double(resolution)) {
                h /= 4.0;
                scan(detail::local_grid(bp, h, 5), detail::local_grid(bq, h, 5), &bp, &bq);
            }
        }
    }
    const auto p = detail::mix_raw(P, bp);
    const auto q = detail::mix_raw(Q, bq);
    double best = 0.0;
    for (std::size_t i = 0; i <= lambda_grid; ++i) {
        const double g = gamma_lambda(p, q, double(i) / double(lambda_grid));
        if (!std::isinf(g)) best = std::max(best, g);
    }
    return best;
}

}  // namespace advtest
