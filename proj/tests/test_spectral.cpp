#include <doctest.h>

#include "support/test_support.hpp"

using namespace cpasym;

namespace {

constexpr double kPi = 3.14159265358979323846;

} // namespace

TEST_CASE("spectral decomposition: identity map") {
    const BlockStructure s({2});
    const auto dec = spectral_decomposition(identity_map(s));
    REQUIRE(dec.eigenvalues.size() == 4);
    for (const Complex& l : dec.eigenvalues) CHECK(std::abs(l - 1.0) < 1e-12);
    CHECK(dec.peripheral_indices.size() == 4);
    CHECK(dec.gap == doctest::Approx(1.0));
}

TEST_CASE("spectral decomposition: dephasing closed form") {
    const auto dec = spectral_decomposition(gen::dephasing_channel(0.25));
    REQUIRE(dec.eigenvalues.size() == 4);
    // sorted: descending modulus
    CHECK(std::abs(dec.eigenvalues[0] - 1.0) < 1e-12);
    CHECK(std::abs(dec.eigenvalues[1] - 1.0) < 1e-12);
    CHECK(std::abs(dec.eigenvalues[2] - 0.5) < 1e-12);
    CHECK(std::abs(dec.eigenvalues[3] - 0.5) < 1e-12);
    CHECK(dec.peripheral_indices.size() == 2);
    CHECK(dec.gap == doctest::Approx(0.5));
}

TEST_CASE("spectral decomposition: 3-cycle has the cube roots of unity") {
    const CpMap p = pf::stochastic_to_cpmap(pf::StochasticMatrix(testsup::cycle3()));
    const auto dec = spectral_decomposition(p);
    REQUIRE(dec.eigenvalues.size() == 3);
    CHECK(dec.peripheral_indices.size() == 3);
    // the multiset {1, ζ, ζ²}
    const Complex zeta = std::polar(1.0, 2.0 * kPi / 3.0);
    for (const Complex expected : {Complex(1.0, 0.0), zeta, zeta * zeta}) {
        double best = 1e9;
        for (const Complex& l : dec.eigenvalues) best = std::min(best, std::abs(l - expected));
        CHECK(best < 1e-9);
    }
}

TEST_CASE("contraction violation is reported") {
    const BlockStructure s({1, 1});
    const CpMap expanding(s, 2.0 * Matrix::Identity(2, 2));
    CHECK_THROWS_AS(spectral_decomposition(expanding), ContractionViolationError);
}

TEST_CASE("peripheral projection golden cases") {
    SUBCASE("identity") {
        const BlockStructure s({2});
        const auto dec = spectral_decomposition(identity_map(s));
        CHECK(map_sup_difference(peripheral_projection(dec), identity_map(s)) < 1e-12);
    }

    SUBCASE("dephasing projects onto the diagonal part") {
        const CpMap p = gen::dephasing_channel(0.25);
        const auto e = peripheral_projection(spectral_decomposition(p));
        const BlockStructure& s = p.structure();
        Matrix expected = Matrix::Zero(4, 4);
        expected(0, 0) = 1.0;  // e00 fixed
        expected(3, 3) = 1.0;  // e11 fixed
        CHECK((e.superop() - expected).cwiseAbs().maxCoeff() < 1e-10);
        const AlgebraElement e12 = devectorize(s, Vector::Unit(4, 2));
        CHECK(operator_norm(e(e12)) < 1e-10);
    }

    SUBCASE("rank-1 averaging matrix is its own projection") {
        const CpMap p = pf::stochastic_to_cpmap(pf::StochasticMatrix(testsup::averaging2()));
        const auto e = peripheral_projection(spectral_decomposition(p));
        CHECK(map_sup_difference(e, p) < 1e-10);
    }
}

TEST_CASE("peripheral projection properties on random unital channels") {
    for (std::uint64_t seed : {3u, 4u, 5u}) {
        const BlockStructure s({2, 3});
        const CpMap p = gen::random_unital_channel(s, 2 + static_cast<int>(seed % 2), seed);
        const auto dec = spectral_decomposition(p);
        const CpMap e = peripheral_projection(dec);
        const Matrix& se = e.superop();

        CHECK(map_norm(s, se * se - se) < 1e-9);
        CHECK(map_norm(s, se * p.superop() - p.superop() * se) < 1e-9);
        CHECK(choi_min_eigenvalue(e) > -1e-10);
        const AlgebraElement one = identity_element(s);
        CHECK(operator_norm(e(one) - one) < 1e-10);

        // rank of E equals the peripheral count
        Eigen::JacobiSVD<Matrix> svd(se);
        int rank = 0;
        for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
            if (svd.singularValues()(i) > 1e-7) ++rank;
        }
        CHECK(rank == static_cast<int>(dec.peripheral_indices.size()));

        // no eigenvalue beyond the circle
        for (const Complex& l : dec.eigenvalues) CHECK(std::abs(l) <= 1.0 + 1e-9);
    }
}

TEST_CASE("peripheral semisimplicity check") {
    SUBCASE("unitary conjugation: semisimple") {
        std::mt19937_64 rng(6);
        const Matrix g = testsup::random_matrix(3, 3, rng);
        Eigen::HouseholderQR<Matrix> qr(g);
        const CpMap conj = from_kraus(BlockStructure({3}), {Matrix(qr.householderQ())});
        CHECK(check_peripheral_semisimple(spectral_decomposition(conj)));
    }

    SUBCASE("Jordan block control: defective") {
        const BlockStructure s({1, 1});
        Matrix jordan(2, 2);
        jordan << 1.0, 1.0, 0.0, 1.0;
        const CpMap raw(s, jordan);
        const auto dec = spectral_decomposition(raw);
        CHECK_FALSE(check_peripheral_semisimple(dec));
        CHECK_THROWS_AS(peripheral_projection(dec), SemisimplicityError);
    }

    SUBCASE("random CP unital channels: semisimple") {
        for (std::uint64_t seed : {8u, 9u}) {
            const CpMap p = gen::random_unital_channel(BlockStructure({3}), 3, seed);
            CHECK(check_peripheral_semisimple(spectral_decomposition(p)));
        }
    }
}

TEST_CASE("recurrence time search") {
    CHECK(find_recurrence_time({Complex(-1.0, 0.0)}, 1e-9, 100) == 2);

    const Complex zeta = std::polar(1.0, 2.0 * kPi / 3.0);
    CHECK(find_recurrence_time({zeta, zeta * zeta}, 1e-9, 100) == 3);

    // brute-force scan oracle for an irrational-ish phase
    const Complex lambda = std::polar(1.0, 2.0 * kPi * 0.382);
    const long n = find_recurrence_time({lambda}, 0.05, 100000);
    long expected = -1;
    for (long m = 1; m <= 100000; ++m) {
        if (std::abs(std::pow(lambda, m) - 1.0) <= 0.05) {
            expected = m;
            break;
        }
    }
    CHECK(n == expected);
    CHECK(std::abs(std::pow(lambda, n) - 1.0) <= 0.05);

    CHECK_THROWS_AS(find_recurrence_time({Complex(-1.0, 0.0)}, 1e-9, 1),
                    SearchExhaustedError);
    CHECK_THROWS_AS(find_recurrence_time({Complex(0.5, 0.0)}, 1e-9, 10), DomainError);
}

TEST_CASE("second recurrence time starts past the first") {
    const Complex zeta = std::polar(1.0, 2.0 * kPi / 3.0);
    const long n1 = find_recurrence_time({zeta}, 1e-9, 100);
    const long n2 = find_recurrence_time({zeta}, 1e-9, 100, n1 + 1);
    CHECK(n1 == 3);
    CHECK(n2 == 6);
}
