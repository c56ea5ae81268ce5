#pragma once

// Quantum layer at desk scale: density matrices, POVMs, the Born rule,
// quantum relative entropy with explicit support handling, the
// nonnegative-eigenspace projector test, partial trace, the partial-transpose
// criterion, and conditional mutual information.

#include "matrix.hpp"
#include "prob.hpp"

namespace advtest {

class DensityMatrix {
public:
    explicit DensityMatrix(CMat entries) : m_(std::move(entries)) {
        const std::size_t d = m_.rows();
        if (d == 0 || m_.cols() != d)
            throw std::invalid_argument("DensityMatrix: entries must be square and nonempty");
        if (m_.hermitian_deviation() > 1e-12)
            throw std::invalid_argument("DensityMatrix: not Hermitian within 1e-12");
        const auto eig = hermitian_eig(m_);
        if (eig.values.front() < -1e-10)
            throw std::invalid_argument("DensityMatrix: negative eigenvalue below -1e-10");
        if (std::abs(m_.trace().real() - 1.0) > 1e-10 || std::abs(m_.trace().imag()) > 1e-10)
            throw std::invalid_argument("DensityMatrix: trace must be 1 within 1e-10");
        if (eig.values.front() < 0.0) {
            // clip the tiny negative tail and renormalize
            CMat fixed(d, d);
            double tr = 0.0;
            for (std::size_t k = 0; k < d; ++k) {
                const double lam = std::max(eig.values[k], 0.0);
                tr += lam;
                if (lam == 0.0) continue;
                for (std::size_t i = 0; i < d; ++i)
                    for (std::size_t j = 0; j < d; ++j)
                        fixed(i, j) += lam * eig.vectors(i, k) * std::conj(eig.vectors(j, k));
            }
            m_ = Complex(1.0 / tr, 0.0) * fixed;
        }
    }

    std::size_t dim() const { return m_.rows(); }
    const CMat& entries() const { return m_; }

private:
    CMat m_;
};

inline DensityMatrix pure_state(const std::vector<Complex>& amplitudes) {
    double norm2 = 0.0;
    for (const Complex& a : amplitudes) norm2 += std::norm(a);
    if (norm2 <= 0.0) throw std::invalid_argument("pure_state: zero vector");
    CMat m(amplitudes.size(), amplitudes.size());
    for (std::size_t i = 0; i < amplitudes.size(); ++i)
        for (std::size_t j = 0; j < amplitudes.size(); ++j)
            m(i, j) = amplitudes[i] * std::conj(amplitudes[j]) / norm2;
    return DensityMatrix(std::move(m));
}

inline DensityMatrix maximally_mixed(std::size_t d) {
    return DensityMatrix(Complex(1.0 / double(d), 0.0) * CMat::identity(d));
}

class Povm {
public:
    Povm(std::size_t dim, std::vector<CMat> effects) : dim_(dim), effects_(std::move(effects)) {
        if (effects_.empty()) throw std::invalid_argument("Povm: no effects");
        CMat sum(dim_, dim_);
        for (const auto& e : effects_) {
            if (e.rows() != dim_ || e.cols() != dim_)
                throw std::invalid_argument("Povm: effect dimension mismatch");
            if (e.hermitian_deviation() > 1e-10)
                throw std::invalid_argument("Povm: effect not Hermitian");
            const auto eig = hermitian_eig(e);
            if (eig.values.front() < -1e-10)
                throw std::invalid_argument("Povm: effect not positive semidefinite");
            sum = sum + e;
        }
        if ((sum - CMat::identity(dim_)).linf_norm() > 1e-10)
            throw std::invalid_argument("Povm: effects do not sum to the identity");
    }

    std::size_t dim() const { return dim_; }
    std::size_t outcomes() const { return effects_.size(); }
    const CMat& effect(std::size_t i) const { return effects_[i]; }
    const std::vector<CMat>& effects() const { return effects_; }

private:
    std::size_t dim_;
    std::vector<CMat> effects_;
};

inline Povm basis_povm(std::size_t d) {
    std::vector<CMat> effects;
    for (std::size_t i = 0; i < d; ++i) {
        CMat e(d, d);
        e(i, i) = 1.0;
        effects.push_back(std::move(e));
    }
    return Povm(d, std::move(effects));
}

inline Distribution apply_measurement(const Povm& m, const DensityMatrix& rho) {
    if (m.dim() != rho.dim()) throw std::invalid_argument("apply_measurement: dim mismatch");
    std::vector<double> w(m.outcomes(), 0.0);
    for (std::size_t i = 0; i < m.outcomes(); ++i)
        w[i] = std::max((m.effect(i) * rho.entries()).trace().real(), 0.0);
    return Distribution(Alphabet(m.outcomes()), std::move(w));
}

// D(rho||sigma) = tr rho (log rho - log sigma); +inf when sigma's kernel
// carries rho-mass. Support decided at 1e-10 on the spectrum.
inline double quantum_relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.dim() != sigma.dim())
        throw std::invalid_argument("quantum_relative_entropy: dim mismatch");
    const std::size_t d = rho.dim();
    const auto es = hermitian_eig(sigma.entries());
    // rho-mass on the kernel of sigma
    for (std::size_t k = 0; k < d; ++k) {
        if (es.values[k] > 1e-10) continue;
        Complex mass = 0.0;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                mass += std::conj(es.vectors(i, k)) * rho.entries()(i, j) * es.vectors(j, k);
        if (mass.real() > 1e-9) return kInf;
    }
    const CMat log_sigma = hermitian_function(
        sigma.entries(), [](double x) { return x > 1e-10 ? std::log(x) : 0.0; });
    const CMat log_rho = hermitian_function(
        rho.entries(), [](double x) { return x > 1e-10 ? std::log(x) : 0.0; });
    const double v = (rho.entries() * (log_rho - log_sigma)).trace().real();
    return v < 0.0 && v > -1e-9 ? 0.0 : v;
}

inline double von_neumann_entropy(const DensityMatrix& rho) {
    const auto eig = hermitian_eig(rho.entries());
    double h = 0.0;
    for (double lam : eig.values)
        if (lam > 1e-12) h -= lam * std::log(lam);
    return std::max(h, 0.0);
}

// Projector onto the nonnegative eigenspace of theta*rho - sigma; eigenvalues
// down to -1e-12 count as nonnegative.
inline CMat neyman_pearson_effect(double theta, const DensityMatrix& rho,
                                  const DensityMatrix& sigma) {
    if (rho.dim() != sigma.dim())
        throw std::invalid_argument("neyman_pearson_effect: dim mismatch");
    if (theta < 0.0) throw std::invalid_argument("neyman_pearson_effect: theta must be >= 0");
    const CMat x = Complex(theta, 0.0) * rho.entries() - sigma.entries();
    const auto eig = hermitian_eig(x);
    const std::size_t d = x.rows();
    CMat p(d, d);
    for (std::size_t k = 0; k < d; ++k) {
        if (eig.values[k] < -1e-12) continue;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                p(i, j) += eig.vectors(i, k) * std::conj(eig.vectors(j, k));
    }
    return p;
}

inline double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.dim() != sigma.dim()) throw std::invalid_argument("trace_distance: dim mismatch");
    const auto eig = hermitian_eig(rho.entries() - sigma.entries());
    double s = 0.0;
    for (double lam : eig.values) s += std::abs(lam);
    return std::clamp(0.5 * s, 0.0, 1.0);
}

// Tensor-factor labeling, subsystems map to factors left to right.
struct BipartiteStructure {
    std::vector<std::size_t> dims;

    explicit BipartiteStructure(std::vector<std::size_t> d) : dims(std::move(d)) {
        if (dims.size() < 2 || dims.size() > 3)
            throw std::invalid_argument("BipartiteStructure: need 2 or 3 subsystems");
        for (std::size_t x : dims)
            if (x == 0) throw std::invalid_argument("BipartiteStructure: zero dimension");
    }

    std::size_t total() const {
        std::size_t t = 1;
        for (std::size_t x : dims) t *= x;
        return t;
    }
};

namespace detail {

inline std::vector<std::size_t> unpack_index(std::size_t idx,
                                             const std::vector<std::size_t>& dims) {
    std::vector<std::size_t> out(dims.size());
    for (std::size_t s = dims.size(); s-- > 0;) {
        out[s] = idx % dims[s];
        idx /= dims[s];
    }
    return out;
}

inline std::size_t pack_index(const std::vector<std::size_t>& parts,
                              const std::vector<std::size_t>& dims) {
    std::size_t idx = 0;
    for (std::size_t s = 0; s < dims.size(); ++s) idx = idx * dims[s] + parts[s];
    return idx;
}

}  // namespace detail

// Keeps the listed subsystems (in their original order) and traces the rest.
inline DensityMatrix partial_trace(const DensityMatrix& rho, const BipartiteStructure& st,
                                   std::vector<std::size_t> keep) {
    if (st.total() != rho.dim())
        throw std::invalid_argument("partial_trace: structure does not match dimension");
    std::sort(keep.begin(), keep.end());
    if (std::unique(keep.begin(), keep.end()) != keep.end() || keep.empty())
        throw std::invalid_argument("partial_trace: keep set must be nonempty without repeats");
    for (std::size_t s : keep)
        if (s >= st.dims.size()) throw std::invalid_argument("partial_trace: bad subsystem");
    std::vector<std::size_t> kept_dims;
    for (std::size_t s : keep) kept_dims.push_back(st.dims[s]);
    std::size_t dk = 1;
    for (std::size_t x : kept_dims) dk *= x;
    CMat out(dk, dk);
    const std::size_t dt = rho.dim();
    for (std::size_t i = 0; i < dt; ++i) {
        const auto pi = detail::unpack_index(i, st.dims);
        for (std::size_t j = 0; j < dt; ++j) {
            const auto pj = detail::unpack_index(j, st.dims);
            bool diag = true;
            for (std::size_t s = 0; s < st.dims.size(); ++s) {
                if (std::find(keep.begin(), keep.end(), s) != keep.end()) continue;
                if (pi[s] != pj[s]) { diag = false; break; }
            }
            if (!diag) continue;
            std::vector<std::size_t> ki, kj;
            for (std::size_t s : keep) { ki.push_back(pi[s]); kj.push_back(pj[s]); }
            out(detail::pack_index(ki, kept_dims), detail::pack_index(kj, kept_dims)) +=
                rho.entries()(i, j);
        }
    }
    return DensityMatrix(std::move(out));
}

// Partial transpose on the last subsystem of a bipartite split.
inline CMat partial_transpose(const CMat& m, const BipartiteStructure& st) {
    if (st.dims.size() != 2) throw std::invalid_argument("partial_transpose: need 2 subsystems");
    const std::size_t da = st.dims[0], db = st.dims[1];
    if (m.rows() != da * db || m.cols() != da * db)
        throw std::invalid_argument("partial_transpose: dimension mismatch");
    CMat out(da * db, da * db);
    for (std::size_t ia = 0; ia < da; ++ia)
        for (std::size_t ja = 0; ja < da; ++ja)
            for (std::size_t ib = 0; ib < db; ++ib)
                for (std::size_t jb = 0; jb < db; ++jb)
                    out(ia * db + jb, ja * db + ib) = m(ia * db + ib, ja * db + jb);
    return out;
}

// True iff the partial transpose is positive semidefinite. At total dimension
// <= 6 this decides separability exactly; above that it is only necessary.
inline bool ppt_check(const DensityMatrix& rho, const BipartiteStructure& st) {
    if (st.dims.size() != 2 || st.total() != rho.dim())
        throw std::invalid_argument("ppt_check: bipartite structure required");
    const auto eig = hermitian_eig(partial_transpose(rho.entries(), st));
    return eig.values.front() >= -1e-10;
}

// I(A:B|C) = H(AC) + H(BC) - H(ABC) - H(C); nonnegative by strong
// subadditivity, so anything below -1e-9 signals a numerical defect upstream.
inline double cmi(const DensityMatrix& rho, const BipartiteStructure& st) {
    if (st.dims.size() != 3 || st.total() != rho.dim())
        throw std::invalid_argument("cmi: tripartite structure required");
    const double hac = von_neumann_entropy(partial_trace(rho, st, {0, 2}));
    const double hbc = von_neumann_entropy(partial_trace(rho, st, {1, 2}));
    const double habc = von_neumann_entropy(rho);
    const double hc = von_neumann_entropy(partial_trace(rho, st, {2}));
    const double v = hac + hbc - habc - hc;
    if (v < -1e-9) throw std::runtime_error("cmi: strong subadditivity violated numerically");
    return std::max(v, 0.0);
}

}  // namespace advtest
