#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "advtest/prob.hpp"

using namespace advtest;

namespace {
const double kLn2Over3 = 0.23104906018664842;  // D(Bern(1/3)||Bern(2/3))
const double kCoinChernoff = 0.05889151782819171;  // -ln(2*sqrt(2)/3)
}  // namespace

TEST_CASE("bernoulli builds a labeled coin distribution") {
    const auto b = bernoulli(1.0 / 3.0);
    REQUIRE(b.size() == 2);
    CHECK(b[0] == Catch::Approx(1.0 / 3.0).margin(1e-15));
    CHECK(b[1] == Catch::Approx(2.0 / 3.0).margin(1e-15));
    CHECK(b.alphabet().labels[0] == "heads");
    CHECK(b.alphabet().labels[1] == "tails");
    CHECK_THROWS_AS(bernoulli(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(bernoulli(1.1), std::invalid_argument);
}

TEST_CASE("distribution validation") {
    Alphabet ab{3};
    CHECK_THROWS_AS(Distribution(ab, {0.5, 0.5}), std::invalid_argument);   // wrong length
    CHECK_THROWS_AS(Distribution(ab, {0.7, 0.4, 0.0}), std::invalid_argument);  // bad sum
    CHECK_THROWS_AS(Distribution(ab, {1.2, -0.2, 0.0}), std::invalid_argument); // negative
    // tiny negatives are clipped, tiny sum error tolerated
    const Distribution d(ab, {1.0 + 5e-13, -5e-13, 0.0});
    CHECK(d[1] == 0.0);
    CHECK(d[0] + d[1] + d[2] == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("kl divergence basics") {
    const auto p = bernoulli(1.0 / 3.0), q = bernoulli(2.0 / 3.0);
    CHECK(kl_divergence(p, q) == Catch::Approx(kLn2Over3).margin(1e-14));
    CHECK(kl_divergence(p, p) == 0.0);
    CHECK(kl_divergence(q, q) == 0.0);
    // support mismatch: p has mass where q does not
    CHECK(std::isinf(kl_divergence(bernoulli(0.5), bernoulli(1.0))));
    // zero p-mass symbols contribute nothing
    CHECK(kl_divergence(bernoulli(1.0), bernoulli(0.5)) ==
          Catch::Approx(std::log(2.0)).margin(1e-14));
}

TEST_CASE("kl divergence is nonnegative on random pairs") {
    std::mt19937_64 gen(12);
    Alphabet ab{4};
    for (int t = 0; t < 200; ++t) {
        std::vector<double> w1(4), w2(4);
        double s1 = 0, s2 = 0;
        for (int i = 0; i < 4; ++i) {
            w1[i] = std::uniform_real_distribution<>(0.01, 1.0)(gen);
            w2[i] = std::uniform_real_distribution<>(0.01, 1.0)(gen);
            s1 += w1[i];
            s2 += w2[i];
        }
        for (int i = 0; i < 4; ++i) {
            w1[i] /= s1;
            w2[i] /= s2;
        }
        const Distribution p(ab, w1), q(ab, w2);
        CHECK(kl_divergence(p, q) >= 0.0);
    }
}

TEST_CASE("log likelihood table with infinities") {
    Alphabet ab{3};
    const Distribution p(ab, {0.5, 0.5, 0.0});
    const Distribution q(ab, {0.5, 0.0, 0.5});
    const auto t = log_likelihood_table(p, q);
    CHECK(t[0] == 0.0);
    CHECK(t[1] == kInf);       // p-only symbol forces accept
    CHECK(t[2] == -kInf);      // q-only symbol forces reject
    const auto tt = log_likelihood_table(bernoulli(1.0 / 3.0), bernoulli(2.0 / 3.0));
    CHECK(tt[0] == Catch::Approx(-std::log(2.0)).margin(1e-14));
    CHECK(tt[1] == Catch::Approx(std::log(2.0)).margin(1e-14));
}

TEST_CASE("gamma_lambda endpoints and interior") {
    const auto p = bernoulli(1.0 / 3.0), q = bernoulli(2.0 / 3.0);
    // lambda = 0: -log of q's mass on supp(p); full overlap gives 0
    CHECK(gamma_lambda(p, q, 0.0) == Catch::Approx(0.0).margin(1e-14));
    CHECK(gamma_lambda(p, q, 1.0) == Catch::Approx(0.0).margin(1e-14));
    // lambda = 1/2: -log Bhattacharyya coefficient = -ln(2*sqrt(2)/3)
    CHECK(gamma_lambda(p, q, 0.5) == Catch::Approx(kCoinChernoff).margin(1e-14));
    CHECK_THROWS_AS(gamma_lambda(p, q, 1.5), std::invalid_argument);
    // the endpoints use the 0^0 = 1 convention, so they vanish even under
    // support mismatch; just inside the interval the missing mass is charged
    CHECK(gamma_lambda(bernoulli(0.5), bernoulli(1.0), 0.0) ==
          Catch::Approx(0.0).margin(1e-14));
    CHECK(gamma_lambda(bernoulli(0.5), bernoulli(1.0), 1.0 - 1e-9) >
          std::log(2.0) - 1e-6);
}

TEST_CASE("chernoff_info on the coin pair") {
    const auto ci = chernoff_info(bernoulli(1.0 / 3.0), bernoulli(2.0 / 3.0));
    CHECK(ci.lambda_star == Catch::Approx(0.5).margin(1e-6));
    CHECK(ci.value == Catch::Approx(kCoinChernoff).margin(1e-10));
}

TEST_CASE("chernoff_info degenerate cases") {
    const auto same = chernoff_info(bernoulli(0.4), bernoulli(0.4));
    CHECK(same.value == Catch::Approx(0.0).margin(1e-12));
    Alphabet ab{2};
    const auto disj = chernoff_info(Distribution(ab, {1.0, 0.0}), Distribution(ab, {0.0, 1.0}));
    CHECK(std::isinf(disj.value));
}

TEST_CASE("chernoff value never exceeds either kl divergence") {
    std::mt19937_64 gen(7);
    for (int t = 0; t < 100; ++t) {
        const auto p = bernoulli(std::uniform_real_distribution<>(0.05, 0.95)(gen));
        const auto q = bernoulli(std::uniform_real_distribution<>(0.05, 0.95)(gen));
        const auto ci = chernoff_info(p, q);
        CHECK(ci.value <= kl_divergence(p, q) + 1e-8);
        CHECK(ci.value <= kl_divergence(q, p) + 1e-8);
        CHECK(ci.value >= -1e-12);
    }
}
