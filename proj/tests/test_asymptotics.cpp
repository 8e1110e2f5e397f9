#include <doctest.h>

#include "support/test_support.hpp"

using namespace cpasym;

namespace {

constexpr double kPi = 3.14159265358979323846;

CpMap cycle3_map() {
    return pf::stochastic_to_cpmap(pf::StochasticMatrix(testsup::cycle3()));
}

} // namespace

TEST_CASE("asymptotic decomposition: identity map") {
    const BlockStructure s({2});
    const auto dec = asymptotic_decomposition(identity_map(s));
    CHECK(map_sup_difference(dec.E, identity_map(s)) < 1e-12);
    CHECK(map_sup_difference(dec.Q, identity_map(s)) < 1e-12);
    CHECK(dec.peripheral_pairs.size() == 4);
}

TEST_CASE("asymptotic decomposition: dephasing") {
    const CpMap p = gen::dephasing_channel(0.25);
    const auto dec = asymptotic_decomposition(p);
    // E kills off-diagonals, Q = E (alpha is the identity on the diagonal part)
    CHECK(map_sup_difference(dec.Q, dec.E) < 1e-10);
    for (const auto& [eig, vec] : dec.peripheral_pairs) {
        CHECK(std::abs(eig - 1.0) < 1e-10);
        CHECK(operator_norm(p(vec) - vec) < 1e-9);
    }
    CHECK(dec.gap == doctest::Approx(0.5));
}

TEST_CASE("asymptotic decomposition: amplitude damping absorbs into E(a) = <0|a|0>1") {
    const CpMap p = gen::amplitude_damping_channel(0.5);
    const auto dec = asymptotic_decomposition(p);
    const BlockStructure& s = p.structure();
    CHECK(dec.peripheral_pairs.size() == 1);
    CHECK(map_sup_difference(dec.Q, dec.E) < 1e-10);

    // E(e00) = 1, E(e11) = 0, E(e01) = 0
    const AlgebraElement e00 = devectorize(s, Vector::Unit(4, 0));
    const AlgebraElement e11 = devectorize(s, Vector::Unit(4, 3));
    const AlgebraElement e01 = devectorize(s, Vector::Unit(4, 2));
    CHECK(operator_norm(dec.E(e00) - identity_element(s)) < 1e-10);
    CHECK(operator_norm(dec.E(e11)) < 1e-10);
    CHECK(operator_norm(dec.E(e01)) < 1e-10);
}

TEST_CASE("alpha matrix carries exactly the peripheral spectrum") {
    for (std::uint64_t seed : {12u, 13u}) {
        const CpMap p = gen::random_unital_channel(BlockStructure({2, 2}), 2, seed);
        const auto dec = asymptotic_decomposition(p);
        const auto spec = spectral_decomposition(p);
        Eigen::ComplexEigenSolver<Matrix> es(dec.alpha_matrix, false);
        std::vector<Complex> alpha_eigs;
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
            alpha_eigs.push_back(es.eigenvalues()(i));
        }
        REQUIRE(alpha_eigs.size() == spec.peripheral_indices.size());
        for (int idx : spec.peripheral_indices) {
            const Complex target = spec.eigenvalues[static_cast<std::size_t>(idx)];
            double best = 1e9;
            for (const Complex& a : alpha_eigs) best = std::min(best, std::abs(a - target));
            CHECK(best < 1e-8);
        }
    }
}

TEST_CASE("kuperberg idempotent") {
    SUBCASE("flip permutation: recurrence 2, E = identity") {
        const CpMap flip = pf::stochastic_to_cpmap(pf::StochasticMatrix(testsup::flip2()));
        const auto res = kuperberg_idempotent_detailed(flip, 1e-10, 1000, 1);
        CHECK(res.recurrence_time == 2);
        CHECK(map_sup_difference(res.E, identity_map(flip.structure())) < 1e-10);
    }

    SUBCASE("averaging matrix is already idempotent at n = 1") {
        const CpMap avg = pf::stochastic_to_cpmap(pf::StochasticMatrix(testsup::averaging2()));
        const auto res = kuperberg_idempotent_detailed(avg, 1e-10, 1000, 1);
        CHECK(res.recurrence_time == 1);
        CHECK(map_sup_difference(res.E, avg) < 1e-10);
    }

    SUBCASE("random aperiodic stochastic map vs power-iteration oracle") {
        std::mt19937_64 rng(2024);
        const auto S = testsup::random_irreducible_stochastic(4, 1, rng);
        const CpMap p = pf::stochastic_to_cpmap(S);
        const CpMap e = kuperberg_idempotent(p, 1e-9, 1000);

        // oracle: brute-force high power
        RealMatrix pow = RealMatrix::Identity(4, 4);
        for (int i = 0; i < 4096; ++i) pow *= S.entries();
        CHECK((e.superop() - pow.cast<Complex>()).cwiseAbs().maxCoeff() < 1e-6);

        const auto spec_e = peripheral_projection(spectral_decomposition(p));
        CHECK(map_sup_difference(e, spec_e) < 1e-6);
    }

    SUBCASE("rejects non-CP maps") {
        const BlockStructure s({2});
        Matrix transpose = Matrix::Zero(4, 4);
        transpose(0, 0) = transpose(1, 2) = transpose(2, 1) = transpose(3, 3) = 1.0;
        CHECK_THROWS_AS(kuperberg_idempotent(CpMap(s, transpose), 1e-9, 100), DomainError);
    }
}

TEST_CASE("convergence profiles") {
    SUBCASE("Q = P gives zeros") {
        const CpMap p = gen::dephasing_channel(0.3);
        const auto prof = convergence_profile(p, p, identity_element(p.structure()), 5);
        for (double v : prof) CHECK(v == 0.0);
    }

    SUBCASE("dephasing off-diagonal decays as (1-2p)^n exactly") {
        const CpMap p = gen::dephasing_channel(0.25);
        const auto dec = asymptotic_decomposition(p);
        const AlgebraElement e01 = devectorize(p.structure(), Vector::Unit(4, 2));
        const auto prof = convergence_profile(p, dec.Q, e01, 12);
        CHECK(prof[0] == 0.0);  // both zeroth powers are the identity
        for (std::size_t n = 1; n < prof.size(); ++n) {
            CHECK(prof[n] == doctest::Approx(std::pow(0.5, double(n))).epsilon(1e-12));
        }
    }

    SUBCASE("damped 3-cycle drops below 1e-8 at the predicted horizon") {
        // lazy cyclic walk: mostly rotate, some uniform leakage
        RealMatrix s = 0.8 * testsup::cycle3() + 0.2 * RealMatrix::Constant(3, 3, 1.0 / 3.0);
        const CpMap p = pf::stochastic_to_cpmap(pf::StochasticMatrix(s));
        const auto dec = asymptotic_decomposition(p);
        const long horizon = stability_horizon(dec.gap, p.structure().coord_dim());
        const AlgebraElement probe = devectorize(p.structure(), Vector::Unit(3, 1));
        const auto prof = convergence_profile(p, dec.Q, probe, horizon);
        CHECK(prof.back() <= 1e-8);
    }
}

TEST_CASE("predual convergence profiles") {
    std::mt19937_64 rng(91);

    SUBCASE("amplitude damping: states absorb into the ground state") {
        const CpMap p = gen::amplitude_damping_channel(0.5);
        const auto dec = asymptotic_decomposition(p);
        const State rho = testsup::make_random_state(p.structure(), rng);
        const auto prof = predual_convergence_profile(p, dec.Q, rho, 80);
        CHECK(prof.front() == 0.0);
        CHECK(prof.back() < 1e-9);

        // limit of the predual powers is |0><0|
        const CpMap pre = predual_map(p);
        AlgebraElement r = rho.density();
        for (int i = 0; i < 200; ++i) r = pre(r);
        Matrix ground = Matrix::Zero(2, 2);
        ground(0, 0) = 1.0;
        CHECK(operator_norm(r - AlgebraElement(p.structure(), {ground})) < 1e-9);
    }

    SUBCASE("mixing channel: predual powers settle on omega") {
        const CpMap p = gen::random_unital_channel(BlockStructure({2}), 3, 17);
        const auto omega = detect_mixing(p);
        REQUIRE(omega.has_value());
        const CpMap pre = predual_map(p);
        AlgebraElement r = testsup::make_random_state(p.structure(), rng).density();
        for (int i = 0; i < 400; ++i) r = pre(r);
        CHECK(trace_norm(r - omega->density()) < 1e-8);
    }
}

TEST_CASE("Choi-Effros algebra") {
    SUBCASE("identity map on M_2: bullet is the ordinary product") {
        const BlockStructure s({2});
        const auto dec = asymptotic_decomposition(identity_map(s));
        const auto cea = choi_effros_algebra(dec);
        REQUIRE(cea.basis.size() == 4);
        for (const auto& b : cea.basis) CHECK(hermiticity_defect(b) < 1e-12);
        // trace-orthonormal
        for (std::size_t i = 0; i < 4; ++i) {
            for (std::size_t j = 0; j < 4; ++j) {
                const Complex g = trace_pairing(cea.basis[i], cea.basis[j]);
                CHECK(std::abs(g - (i == j ? 1.0 : 0.0)) < 1e-12);
            }
        }
        // x • y = xy on the nose
        for (std::size_t i = 0; i < 4; ++i) {
            for (std::size_t j = 0; j < 4; ++j) {
                const AlgebraElement prod = multiply(cea.basis[i], cea.basis[j]);
                AlgebraElement bullet_result = zero_element(s);
                for (int kk = 0; kk < 4; ++kk) {
                    bullet_result =
                        bullet_result +
                        cea.basis[static_cast<std::size_t>(kk)] *
                            cea.structure_constants[static_cast<std::size_t>(kk)](
                                static_cast<int>(i), static_cast<int>(j));
                }
                CHECK(operator_norm(bullet_result - prod) < 1e-10);
            }
        }
    }

    SUBCASE("dephasing: range(E) is the diagonal subalgebra, bullet = product") {
        const auto dec = asymptotic_decomposition(gen::dephasing_channel(0.25));
        const auto cea = choi_effros_algebra(dec);
        REQUIRE(cea.basis.size() == 2);
        for (std::size_t i = 0; i < 2; ++i) {
            for (std::size_t j = 0; j < 2; ++j) {
                const AlgebraElement prod = multiply(cea.basis[i], cea.basis[j]);
                CHECK(operator_norm(dec.E(prod) - prod) < 1e-10);
            }
        }
    }

    SUBCASE("rotate-and-average: range(E) is not a subalgebra") {
        const CpMap q = gen::rotate_and_average_channel(2, {0.0, 2.0 * kPi / 5.0});
        const auto dec = asymptotic_decomposition(q);
        const auto cea = choi_effros_algebra(dec);
        double worst = 0.0;
        for (const auto& x : cea.basis) {
            for (const auto& y : cea.basis) {
                const AlgebraElement prod = multiply(x, y);
                worst = std::max(worst, operator_norm(dec.E(prod) - prod));
            }
        }
        CHECK(worst > 0.1);
    }
}

TEST_CASE("verify_quasiautomorphism") {
    SUBCASE("identity map: all residuals vanish") {
        const auto dec = asymptotic_decomposition(identity_map(BlockStructure({2})));
        const auto rep = verify_quasiautomorphism(dec);
        CHECK(rep.passed);
        CHECK(rep.projection_residual < 1e-12);
        CHECK(rep.homomorphism_residual < 1e-12);
    }

    SUBCASE("3-cycle: alpha is a cyclic shift of order 3") {
        const auto dec = asymptotic_decomposition(cycle3_map());
        const auto rep = verify_quasiautomorphism(dec);
        CHECK(rep.passed);
        const Matrix a3 = dec.alpha_matrix * dec.alpha_matrix * dec.alpha_matrix;
        CHECK((a3 - Matrix::Identity(3, 3)).norm() < 1e-9);
    }

    SUBCASE("random channels pass with small residuals") {
        for (std::uint64_t seed : {31u, 32u}) {
            const CpMap p = gen::random_unital_channel(BlockStructure({3}), 2, seed);
            const auto rep = verify_quasiautomorphism(asymptotic_decomposition(p));
            CHECK(rep.passed);
            CHECK(rep.homomorphism_residual <= 1e-8);
            CHECK(rep.power_residual <= 1e-8);
        }
    }
}

TEST_CASE("idempotent uniqueness check") {
    SUBCASE("identity and flip") {
        const auto rep1 = idempotent_uniqueness_check(identity_map(BlockStructure({2})));
        CHECK(rep1.passed);
        const CpMap flip = pf::stochastic_to_cpmap(pf::StochasticMatrix(testsup::flip2()));
        const auto rep2 = idempotent_uniqueness_check(flip);
        CHECK(rep2.passed);
        CHECK(rep2.recurrence_time_1 == 2);
        CHECK(rep2.recurrence_time_2 == 4);
    }

    SUBCASE("random periodic stochastic map vs brute-force oracle") {
        std::mt19937_64 rng(55);
        const auto S = testsup::random_irreducible_stochastic(6, 3, rng);
        const CpMap p = pf::stochastic_to_cpmap(S);
        const auto rep = idempotent_uniqueness_check(p);
        CHECK(rep.passed);
        CHECK(rep.spectral_vs_kuperberg < 1e-6);

        // brute-force P^{3m} limit
        RealMatrix pow = RealMatrix::Identity(6, 6);
        const RealMatrix s3 = S.entries() * S.entries() * S.entries();
        for (int i = 0; i < 2048; ++i) pow *= s3;
        const auto spec_e = peripheral_projection(spectral_decomposition(p));
        CHECK((spec_e.superop() - pow.cast<Complex>()).cwiseAbs().maxCoeff() < 1e-6);
    }
}

TEST_CASE("predual of E is the peripheral projection of the predual map") {
    for (std::uint64_t seed : {61u, 62u}) {
        const CpMap p = gen::random_unital_channel(BlockStructure({2, 2}), 3, seed);
        const auto dec = asymptotic_decomposition(p);
        const CpMap pre_e = predual_map(dec.E);
        const CpMap e_of_pre =
            peripheral_projection(spectral_decomposition(predual_map(p)));
        CHECK(map_sup_difference(pre_e, e_of_pre) < 1e-9);
    }
}

TEST_CASE("reducible stochastic matrices go through the general machinery") {
    // two disconnected aperiodic components; PF-specific operations reject it
    RealMatrix s = RealMatrix::Zero(4, 4);
    s.block(0, 0, 2, 2) = testsup::averaging2();
    s.block(2, 2, 2, 2) = testsup::averaging2();
    const pf::StochasticMatrix sm(s);
    CHECK_FALSE(pf::irreducibility_and_period(sm).first);
    CHECK_THROWS_AS(pf::cyclic_decomposition(sm), ReducibilityError);

    const CpMap p = pf::stochastic_to_cpmap(sm);
    const auto dec = asymptotic_decomposition(p);
    CHECK(dec.peripheral_pairs.size() == 2);  // one fixed vector per component
    CHECK(map_sup_difference(dec.Q, dec.E) < 1e-10);
    const auto rep = verify_quasiautomorphism(dec);
    CHECK(rep.passed);
}

TEST_CASE("detect_mixing") {
    CHECK_FALSE(detect_mixing(gen::dephasing_channel(0.25)).has_value());
    CHECK_FALSE(detect_mixing(identity_map(BlockStructure({2}))).has_value());

    const auto omega = detect_mixing(gen::amplitude_damping_channel(0.5));
    REQUIRE(omega.has_value());
    Matrix ground = Matrix::Zero(2, 2);
    ground(0, 0) = 1.0;
    CHECK(operator_norm(omega->density() -
                        AlgebraElement(BlockStructure({2}), {ground})) < 1e-9);
}

TEST_CASE("factorization and conjugacy witness") {
    SUBCASE("identity map: phi = identity") {
        const auto dec = asymptotic_decomposition(identity_map(BlockStructure({2})));
        const auto f = factorization(dec);
        const auto rep = conjugacy_witness(f, f);
        CHECK(rep.passed);
        CHECK((rep.phi - Matrix::Identity(4, 4)).norm() < 1e-10);
    }

    SUBCASE("spectral vs kuperberg factorization of the 3-cycle") {
        const CpMap p = cycle3_map();
        const auto f1 = factorization(asymptotic_decomposition(p));
        const CpMap e2 = kuperberg_idempotent(p, 1e-11, 1000);
        const auto f2 = factorization(decomposition_with_idempotent(p, e2));
        const auto rep = conjugacy_witness(f1, f2, 1e-6);
        CHECK(rep.passed);
        CHECK(rep.intertwining_residual < 1e-6);
        CHECK(rep.product_residual < 1e-6);
    }

    SUBCASE("same map through a different basis construction") {
        const CpMap p = gen::random_unital_channel(BlockStructure({2, 2}), 2, 99);
        const auto dec = asymptotic_decomposition(p);
        const auto f1 = factorization(dec);
        const auto f2 = factorization(decomposition_with_idempotent(p, dec.E));
        const auto rep = conjugacy_witness(f1, f2, 1e-9);
        CHECK(rep.passed);
        CHECK(rep.intertwining_residual < 1e-9);
    }
}

TEST_CASE("orbit compactness diagnostic") {
    const BlockStructure s({2});
    std::mt19937_64 rng(3);

    SUBCASE("N = coord_dim spans everything") {
        const CpMap p = gen::random_unital_channel(s, 2, 41);
        const AlgebraElement a = testsup::random_element(s, rng);
        const auto rep = orbit_compactness_diagnostic(p, a, s.coord_dim(), 1e-10);
        CHECK(rep.within_eps);
        for (double r : rep.residuals) CHECK(r <= 1e-10);
    }

    SUBCASE("identity map, N = 0") {
        const auto rep = orbit_compactness_diagnostic(identity_map(s),
                                                      identity_element(s), 0, 1e-12);
        CHECK(rep.within_eps);
    }

    SUBCASE("dephasing on e01 has a one-dimensional orbit span") {
        const CpMap p = gen::dephasing_channel(0.25);
        const AlgebraElement e01 = devectorize(s, Vector::Unit(4, 2));
        const auto rep = orbit_compactness_diagnostic(p, e01, 1, 1e-10);
        CHECK(rep.within_eps);
    }
}

TEST_CASE("stability horizon") {
    CHECK(stability_horizon(0.5, 4) == 27);
    CHECK(stability_horizon(1.0, 7) == 7);
    CHECK(stability_horizon(1e-9, 4) == 10000);       // capped
    CHECK(stability_horizon(1.0 - 8e-10, 4) == 4);    // nilpotent-tail floor
}
