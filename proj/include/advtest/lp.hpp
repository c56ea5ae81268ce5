#pragma once

// Dense two-phase primal simplex for the small linear programs used by the
// polytope machinery (membership, polytope distance). Bland's rule, so no
// cycling. Problem form: min c.x  s.t.  A x = b, x >= 0.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace advtest {

struct LpResult {
    bool feasible = false;
    double value = 0.0;
    std::vector<double> x;
};

namespace detail {

class SimplexTableau {
public:
    // rows m, structural columns n. Tableau gets m artificial columns appended.
    SimplexTableau(std::vector<std::vector<double>> a, std::vector<double> b,
                   std::vector<double> c)
        : m_(b.size()), n_(c.size()), a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {
        for (std::size_t i = 0; i < m_; ++i)
            if (b_[i] < 0.0) {
                b_[i] = -b_[i];
                for (double& v : a_[i]) v = -v;
            }
    }

    LpResult solve() {
        const std::size_t total = n_ + m_;
        t_.assign(m_, std::vector<double>(total + 1, 0.0));
        basis_.resize(m_);
        for (std::size_t i = 0; i < m_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) t_[i][j] = a_[i][j];
            t_[i][n_ + i] = 1.0;
            t_[i][total] = b_[i];
            basis_[i] = n_ + i;
        }
        // Phase 1: minimize sum of artificials.
        std::vector<double> cost(total, 0.0);
        for (std::size_t j = n_; j < total; ++j) cost[j] = 1.0;
        if (run(cost, total) > 1e-8) return {};
        // Pivot any artificial out of the basis if possible.
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] < n_) continue;
            std::size_t piv = n_;
            for (std::size_t j = 0; j < n_; ++j)
                if (std::abs(t_[i][j]) > 1e-9) { piv = j; break; }
            if (piv < n_) pivot(i, piv);
            // else: redundant row, artificial stays at level zero.
        }
        // Phase 2 over structural columns only.
        std::vector<double> cost2(total, 0.0);
        for (std::size_t j = 0; j < n_; ++j) cost2[j] = c_[j];
        const double v = run(cost2, n_);
        LpResult r;
        r.feasible = true;
        r.value = v;
        r.x.assign(n_, 0.0);
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] < n_) r.x[basis_[i]] = t_[i][total];
        return r;
    }

private:
    std::size_t m_, n_;
    std::vector<std::vector<double>> a_;
    std::vector<double> b_, c_;
    std::vector<std::vector<double>> t_;
    std::vector<std::size_t> basis_;

    void pivot(std::size_t row, std::size_t col) {
        const std::size_t total = n_ + m_;
        const double piv = t_[row][col];
        for (std::size_t j = 0; j <= total; ++j) t_[row][j] /= piv;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == row) continue;
            const double f = t_[i][col];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j <= total; ++j) t_[i][j] -= f * t_[row][j];
        }
        basis_[row] = col;
    }

    // Minimizes cost over columns [0, ncols); returns the objective value.
    double run(const std::vector<double>& cost, std::size_t ncols) {
        const std::size_t total = n_ + m_;
        for (std::size_t iter = 0; iter < 20000; ++iter) {
            // reduced costs: r_j = c_j - c_B . B^-1 A_j
            std::size_t enter = total;
            for (std::size_t j = 0; j < ncols; ++j) {
                double rj = cost[j];
                for (std::size_t i = 0; i < m_; ++i) rj -= cost[basis_[i]] * t_[i][j];
                if (rj < -1e-10) { enter = j; break; }  // Bland: first improving column
            }
            if (enter == total) break;
            std::size_t leave = m_;
            double best = 0.0;
            for (std::size_t i = 0; i < m_; ++i) {
                if (t_[i][enter] <= 1e-11) continue;
                const double ratio = t_[i][total] / t_[i][enter];
                if (leave == m_ || ratio < best - 1e-12 ||
                    (ratio < best + 1e-12 && basis_[i] < basis_[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave == m_) throw std::runtime_error("simplex: unbounded");
            pivot(leave, enter);
        }
        double v = 0.0;
        for (std::size_t i = 0; i < m_; ++i) v += cost[basis_[i]] * t_[i][total];
        return v;
    }
};

}  // namespace detail

inline LpResult solve_lp(std::vector<std::vector<double>> a, std::vector<double> b,
                         std::vector<double> c) {
    return detail::SimplexTableau(std::move(a), std::move(b), std::move(c)).solve();
}

}  // namespace advtest
