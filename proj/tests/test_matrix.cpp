#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "advtest/matrix.hpp"

using namespace advtest;

namespace {

CMat random_hermitian(std::mt19937_64& gen, std::size_t d) {
    std::normal_distribution<> g;
    CMat m(d, d);
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c <= r; ++c) {
            if (r == c) {
                m(r, c) = g(gen);
            } else {
                m(r, c) = Complex(g(gen), g(gen));
                m(c, r) = std::conj(m(r, c));
            }
        }
    return m;
}

}  // namespace

TEST_CASE("matrix arithmetic and adjoints") {
    CMat a(2, 3);
    a(0, 0) = 1.0;
    a(0, 2) = Complex(0.0, 2.0);
    a(1, 1) = -1.0;
    const auto ad = a.adjoint();
    CHECK(ad.rows() == 3);
    CHECK(ad(2, 0) == Complex(0.0, -2.0));
    const auto id = CMat::identity(3);
    const auto prod = a * id;
    CHECK(prod.linf_norm() == a.linf_norm());
    CHECK(CMat::identity(4).trace() == Complex(4.0, 0.0));
}

TEST_CASE("kron dimensions and values") {
    CMat x(2, 2), y(2, 2);
    x(0, 0) = 2.0;
    x(1, 1) = 3.0;
    y(0, 1) = 1.0;
    const auto k = kron(x, y);
    REQUIRE(k.rows() == 4);
    CHECK(k(0, 1) == Complex(2.0, 0.0));
    CHECK(k(2, 3) == Complex(3.0, 0.0));
    CHECK(k(1, 0) == Complex(0.0, 0.0));
}

TEST_CASE("eigendecomposition of a diagonal matrix is exact") {
    CMat d(3, 3);
    d(0, 0) = 3.0;
    d(1, 1) = -1.0;
    d(2, 2) = 2.0;
    const auto e = hermitian_eig(d);
    CHECK(e.values[0] == Catch::Approx(-1.0).margin(1e-14));
    CHECK(e.values[1] == Catch::Approx(2.0).margin(1e-14));
    CHECK(e.values[2] == Catch::Approx(3.0).margin(1e-14));
}

TEST_CASE("eigendecomposition reconstructs random hermitian matrices") {
    std::mt19937_64 gen(2024);
    for (std::size_t d : {2, 3, 5, 8, 12, 16}) {
        const auto h = random_hermitian(gen, d);
        const auto e = hermitian_eig(h);
        // ascending eigenvalues
        for (std::size_t i = 1; i < d; ++i) CHECK(e.values[i] >= e.values[i - 1]);
        // V Lambda V^dagger == H
        CMat lam(d, d);
        for (std::size_t i = 0; i < d; ++i) lam(i, i) = e.values[i];
        const auto rec = e.vectors * lam * e.vectors.adjoint();
        CHECK((rec - h).linf_norm() <= 1e-10 * std::max(1.0, h.linf_norm()));
        // unitarity of the eigenvector matrix
        const auto gram = e.vectors.adjoint() * e.vectors;
        CHECK((gram - CMat::identity(d)).linf_norm() <= 1e-10);
    }
}

TEST_CASE("eigendecomposition rejects bad inputs") {
    CHECK_THROWS_AS(hermitian_eig(CMat(2, 3)), std::invalid_argument);
    CMat big(17, 17);
    CHECK_THROWS_AS(hermitian_eig(big), std::invalid_argument);
    CMat nh(2, 2);
    nh(0, 1) = 1.0;  // missing conjugate partner
    CHECK_THROWS_AS(hermitian_eig(nh), std::invalid_argument);
}

TEST_CASE("hermitian_function applies a scalar map to the spectrum") {
    CMat h(2, 2);
    h(0, 0) = 1.0;
    h(1, 1) = 4.0;
    const auto s = hermitian_function(h, [](double x) { return std::sqrt(x); });
    CHECK(s(0, 0).real() == Catch::Approx(1.0).margin(1e-12));
    CHECK(s(1, 1).real() == Catch::Approx(2.0).margin(1e-12));
    // works through a basis change: f(U h U*) = U f(h) U*
    std::mt19937_64 gen(5);
    const auto r = random_hermitian(gen, 4);
    const auto sq = hermitian_function(r * r, [](double x) { return std::sqrt(x); });
    const auto back = sq * sq;
    CHECK((back - r * r).linf_norm() <= 1e-9);
}
