#include <doctest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include "support/test_support.hpp"
#include "cpasym/semigroup.hpp"

using namespace cpasym;
using namespace cpasym::sg;

namespace {

constexpr double kPi = 3.14159265358979323846;

AlgebraElement pauli_z_element(double scale = 1.0) {
    Matrix z(2, 2);
    z << scale, 0.0, 0.0, -scale;
    return AlgebraElement(BlockStructure({2}), {z});
}

// Dephasing generator with off-diagonal decay rate c: single jump sqrt(c/2)·Z.
SemigroupGenerator dephasing_generator(double c) {
    Matrix z(2, 2);
    z << std::sqrt(c / 2.0), 0.0, 0.0, -std::sqrt(c / 2.0);
    return gkls_generator(zero_element(BlockStructure({2})),
                          {AlgebraElement(BlockStructure({2}), {z})});
}

SemigroupGenerator random_gkls(const BlockStructure& s, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const AlgebraElement h = testsup::random_hermitian(s, rng);
    const AlgebraElement v = testsup::random_element(s, rng);
    return gkls_generator(h, {v});
}

} // namespace

TEST_CASE("exponentiate basics") {
    const SemigroupGenerator l = dephasing_generator(1.0);
    CHECK(map_sup_difference(exponentiate(l, 0.0), identity_map(l.structure)) < 1e-14);
    CHECK_THROWS_AS(exponentiate(l, -0.5), DomainError);
}

TEST_CASE("Hamiltonian flow: purely imaginary spectrum, unitary conjugation") {
    const BlockStructure s({2});
    std::mt19937_64 rng(12);
    const AlgebraElement h = testsup::random_hermitian(s, rng);
    const SemigroupGenerator l = gkls_generator(h, {});

    Eigen::ComplexEigenSolver<Matrix> es(l.generator, false);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        CHECK(std::abs(es.eigenvalues()(i).real()) < 1e-10);
    }

    // exp(tL)(a) = e^{itH} a e^{-itH}
    const double t = 0.7;
    const CpMap tt = exponentiate(l, t);
    const Matrix u = (Complex(0.0, t) * h.block(0)).exp();
    const AlgebraElement a = testsup::random_element(s, rng);
    const AlgebraElement expect(s, {u * a.block(0) * u.adjoint()});
    CHECK(operator_norm(tt(a) - expect) < 1e-10);

    const auto dec = semigroup_asymptotics(l);
    CHECK(map_sup_difference(dec.E, identity_map(s)) < 1e-10);
}

TEST_CASE("dephasing generator: closed-form decay") {
    const double c = 0.8;
    const SemigroupGenerator l = dephasing_generator(c);

    // eigenvalues {0, 0, -c, -c}
    Eigen::ComplexEigenSolver<Matrix> es(l.generator, false);
    int zero_count = 0;
    int decay_count = 0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        if (std::abs(es.eigenvalues()(i)) < 1e-10) ++zero_count;
        if (std::abs(es.eigenvalues()(i) - Complex(-c, 0.0)) < 1e-10) ++decay_count;
    }
    CHECK(zero_count == 2);
    CHECK(decay_count == 2);

    const auto dec = semigroup_asymptotics(l);
    // E is the diagonal projection; S_t = exp(tL)·E stays E for every t
    for (double t : {0.3, 1.0, 2.5}) {
        const CpMap tt = exponentiate(l, t);
        CHECK(map_norm(l.structure, tt.superop() * dec.E.superop() - dec.E.superop()) <
              1e-10);
    }

    // profile on e01 is exactly e^{-ct}
    const AlgebraElement e01 = devectorize(l.structure, Vector::Unit(4, 2));
    const std::vector<double> grid{0.0, 0.5, 1.0, 2.0, 4.0};
    const auto prof = semigroup_convergence_profile(l, dec, e01, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(prof[i] == doctest::Approx(std::exp(-c * grid[i])).epsilon(1e-10));
    }
}

TEST_CASE("semigroup law and CP certification on sampled t") {
    const SemigroupGenerator l = random_gkls(BlockStructure({2}), 31);
    for (const auto& [s, t] :
         std::vector<std::pair<double, double>>{{0.1, 0.5}, {0.7, 1.3}, {2.0, 0.4}}) {
        const Matrix lhs = exponentiate(l, s + t).superop();
        const Matrix rhs = exponentiate(l, s).superop() * exponentiate(l, t).superop();
        CHECK((lhs - rhs).norm() < 1e-10);
    }
    for (double t : {0.1, 0.5, 1.0, 2.0}) {
        const CpMap tt = exponentiate(l, t);
        CHECK(is_unital(tt, 1e-9));
        CHECK(choi_min_eigenvalue(tt) > -1e-10);
    }
}

TEST_CASE("H-plus-dephasing with diagonal H keeps the diagonal projection") {
    const double c = 0.6;
    Matrix z(2, 2);
    z << std::sqrt(c / 2.0), 0.0, 0.0, -std::sqrt(c / 2.0);
    const BlockStructure s({2});
    const SemigroupGenerator l =
        gkls_generator(pauli_z_element(0.9), {AlgebraElement(s, {z})});

    const auto dec = semigroup_asymptotics(l);
    // E = diagonal projection
    Matrix expected = Matrix::Zero(4, 4);
    expected(0, 0) = expected(3, 3) = 1.0;
    CHECK((dec.E.superop() - expected).cwiseAbs().maxCoeff() < 1e-9);

    // H acts trivially on the diagonal algebra: exp(tL)∘E = E
    for (double t : {0.5, 1.5}) {
        CHECK(map_norm(s, exponentiate(l, t).superop() * dec.E.superop() -
                              dec.E.superop()) < 1e-9);
    }

    // convergence profile decays like e^{-ct}
    const AlgebraElement e01 = devectorize(s, Vector::Unit(4, 2));
    const auto prof = semigroup_convergence_profile(l, dec, e01, {0.0, 1.0, 3.0});
    CHECK(prof[1] == doctest::Approx(std::exp(-c)).epsilon(1e-9));
}

TEST_CASE("random GKLS: E properties and profile horizon") {
    for (std::uint64_t seed : {41u, 42u}) {
        const SemigroupGenerator l = random_gkls(BlockStructure({2}), seed);
        const auto dec = semigroup_asymptotics(l);
        const Matrix& se = dec.E.superop();
        CHECK(map_norm(l.structure, se * se - se) < 1e-9);
        CHECK(choi_min_eigenvalue(dec.E) > -1e-10);
        const AlgebraElement one = identity_element(l.structure);
        CHECK(operator_norm(dec.E(one) - one) < 1e-9);

        // generator eigenvalues selected by E are purely imaginary
        for (const auto& [eig, vec] : dec.peripheral_pairs) {
            CHECK(std::abs(eig.real()) < 1e-9);
            // U_t is isometric on range(E)
            for (double t : {0.4, 1.7}) {
                const CpMap tt = exponentiate(l, t);
                CHECK(operator_norm(tt(vec)) == doctest::Approx(operator_norm(vec))
                                                    .epsilon(1e-9));
            }
        }

        const double g = spectral_abscissa_gap(l);
        REQUIRE(std::isfinite(g));
        const double t_star = -std::log(1e-8) / g;
        std::mt19937_64 rng(seed + 100);
        const AlgebraElement probe = testsup::random_element(l.structure, rng);
        const auto prof = semigroup_convergence_profile(l, dec, probe, {0.0, t_star});
        CHECK(prof.back() <= 1e-6);
    }
}

TEST_CASE("discretization consistency") {
    SUBCASE("dephasing at s = 1 agrees") {
        const auto rep = discretization_consistency(dephasing_generator(1.0), 1.0);
        CHECK(rep.within_tol);
        CHECK_FALSE(rep.aliasing);
    }

    SUBCASE("H = diag(0, 2pi) at s = 1 is an aliasing instance") {
        const BlockStructure s({2});
        Matrix h(2, 2);
        h << 0.0, 0.0, 0.0, 2.0 * kPi;
        const SemigroupGenerator l = gkls_generator(AlgebraElement(s, {h}), {});
        const auto rep = discretization_consistency(l, 1.0);
        CHECK(rep.aliasing);
        CHECK_FALSE(rep.aliased_pairs.empty());
    }

    SUBCASE("random GKLS at a generic step agrees within 1e-7") {
        const SemigroupGenerator l = random_gkls(BlockStructure({2}), 57);
        const auto rep = discretization_consistency(l, 0.7);
        CHECK(rep.within_tol);
        CHECK(rep.e_difference < 1e-7);
    }
}

TEST_CASE("raw generators validate the half-plane condition") {
    const BlockStructure s({1, 1});
    Matrix bad(2, 2);
    bad << 0.1, 0.0, 0.0, -1.0;
    CHECK_THROWS_AS(raw_generator(s, bad), DomainError);

    Matrix ok(2, 2);
    ok << 0.0, 0.0, 0.0, -1.0;
    CHECK_NOTHROW(raw_generator(s, ok));
}
