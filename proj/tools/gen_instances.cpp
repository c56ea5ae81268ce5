// One-shot generator for the shipped instance files under instances/.
// Run from the repository root; kept in the tree so the instances are
// reproducible from source.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "advtest/io.hpp"

using namespace advtest;
namespace fs = std::filesystem;

namespace {

void put(const fs::path& p, const std::string& content) {
    fs::create_directories(p.parent_path());
    std::ofstream f(p);
    f << content;
    std::cout << "wrote " << p.string() << "\n";
}

Distribution bern(double heads) {
    return Distribution(Alphabet{{"heads", "tails"}}, {heads, 1.0 - heads});
}

CMat diag2(double a, double b) {
    CMat m(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

}  // namespace

int main() {
    const fs::path root = "instances";

    // classical coin classes
    const Alphabet coin{{"heads", "tails"}};
    put(root / "coin/interval_p.cls",
        serialize_class(ConvexClass(coin, {bern(0.0), bern(1.0 / 3.0)})));
    put(root / "coin/interval_q.cls",
        serialize_class(ConvexClass(coin, {bern(2.0 / 3.0), bern(1.0)})));
    put(root / "coin/singleton_p.cls", serialize_class(ConvexClass(coin, {bern(1.0 / 3.0)})));
    put(root / "coin/singleton_q.cls", serialize_class(ConvexClass(coin, {bern(2.0 / 3.0)})));

    // qubit measurement bases
    CMat p0(2, 2), p1(2, 2);
    p0(0, 0) = 1.0;
    p1(1, 1) = 1.0;
    put(root / "quantum/basis.povm", serialize_povm(Povm(2, {p0, p1})));
    CMat plus(2, 2), minus(2, 2);
    plus(0, 0) = plus(0, 1) = plus(1, 0) = plus(1, 1) = 0.5;
    minus(0, 0) = minus(1, 1) = 0.5;
    minus(0, 1) = minus(1, 0) = -0.5;
    put(root / "quantum/hadamard.povm", serialize_povm(Povm(2, {plus, minus})));
    put(root / "quantum/basis.menu", "basis.povm\n");
    put(root / "quantum/two_bases.menu", "basis.povm\nhadamard.povm\n");

    // dyadic diagonal states: their basis-measurement probabilities are exact
    // binary fractions, so the classical image classes match them bit for bit
    put(root / "quantum/r1.qst", serialize_state(DensityMatrix(diag2(0.125, 0.875))));
    put(root / "quantum/r2.qst", serialize_state(DensityMatrix(diag2(0.25, 0.75))));
    put(root / "quantum/s1.qst", serialize_state(DensityMatrix(diag2(0.625, 0.375))));
    put(root / "quantum/s2.qst", serialize_state(DensityMatrix(diag2(0.75, 0.25))));

    // noncommuting full-rank witness pair: every single-copy measurement loses
    // information, so the measured divergence stays below D(rho||sigma)
    CMat wr(2, 2);
    wr(0, 0) = wr(1, 1) = 0.5;
    wr(0, 1) = wr(1, 0) = 0.2;
    put(root / "quantum/witness_rho.qst", serialize_state(DensityMatrix(wr)));
    put(root / "quantum/witness_sigma.qst", serialize_state(DensityMatrix(diag2(0.3, 0.7))));

    // correlated two-qubit pair with local basis measurements
    CMat tau0(2, 2), tau1(2, 2);
    tau0(0, 0) = 0.8;
    tau0(1, 1) = 0.2;
    tau0(0, 1) = tau0(1, 0) = 0.1;
    tau1(0, 0) = 0.3;
    tau1(1, 1) = 0.7;
    tau1(0, 1) = tau1(1, 0) = -0.15;
    const CMat rho_xy = Complex(0.55) * kron(p0, tau0) + Complex(0.45) * kron(p1, tau1);
    const CMat sigma_xy = kron(diag2(0.5, 0.5), diag2(0.6, 0.4));
    put(root / "quantum/superadd_rho.qst", serialize_state(DensityMatrix(rho_xy)));
    put(root / "quantum/superadd_sigma.qst", serialize_state(DensityMatrix(sigma_xy)));

    // config manifests for the CLI
    put(root / "configs/coin_stein.cfg",
        "mode = stein\n"
        "p_class = instances/coin/interval_p.cls\n"
        "q_class = instances/coin/interval_q.cls\n"
        "tol = 1e-9\n");
    put(root / "configs/coin_chernoff.cfg",
        "mode = chernoff\n"
        "p_class = instances/coin/singleton_p.cls\n"
        "q_class = instances/coin/singleton_q.cls\n"
        "tol = 1e-9\n");
    put(root / "configs/coin_simulate.cfg",
        "mode = simulate\n"
        "family = stein\n"
        "p_class = instances/coin/interval_p.cls\n"
        "q_class = instances/coin/interval_q.cls\n"
        "epsilon = 0.02\n"
        "n_values = 10,20,30,40\n"
        "trials = 20000\n"
        "seed = 7\n"
        "p_strategy = StaticOptimal\n"
        "q_strategy = StaticOptimal\n");
    put(root / "configs/quantum_stein.cfg",
        "mode = quantum-stein\n"
        "menu = instances/quantum/two_bases.menu\n"
        "r_states = instances/quantum/witness_rho.qst\n"
        "s_states = instances/quantum/witness_sigma.qst\n"
        "block_size = 1\n");
    put(root / "configs/quantum_chernoff.cfg",
        "mode = quantum-chernoff\n"
        "menu = instances/quantum/two_bases.menu\n"
        "r_states = instances/quantum/witness_rho.qst\n"
        "s_states = instances/quantum/witness_sigma.qst\n"
        "block_size = 1\n");
    put(root / "configs/audit_swap.cfg",
        "mode = audit\n"
        "audit = swap\n"
        "swap_dim = 2\n");
    put(root / "configs/audit_superadd.cfg",
        "mode = audit\n"
        "audit = superadd\n"
        "rho = instances/quantum/superadd_rho.qst\n"
        "sigma = instances/quantum/superadd_sigma.qst\n"
        "povm_x = instances/quantum/basis.povm\n"
        "povm_y = instances/quantum/basis.povm\n");
    put(root / "configs/audit_minimax.cfg",
        "mode = audit\n"
        "audit = minimax\n"
        "menu = instances/quantum/two_bases.menu\n"
        "r_states = instances/quantum/witness_rho.qst,instances/quantum/r2.qst\n"
        "s_states = instances/quantum/witness_sigma.qst\n"
        "tol = 1e-4\n");
    return 0;
}
