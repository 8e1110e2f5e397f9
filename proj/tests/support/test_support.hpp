// test_support.hpp — Shared fixtures and independent oracles for the test
// suites. Everything here is deterministic given the caller's RNG.

#pragma once

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "cpasym/asymptotics.hpp"
#include "cpasym/generators.hpp"
#include "cpasym/perron_frobenius.hpp"

namespace testsup {

using namespace cpasym;

inline Matrix random_matrix(int rows, int cols, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) m(i, j) = Complex(gauss(rng), gauss(rng));
    }
    return m;
}

inline AlgebraElement random_element(const BlockStructure& s, std::mt19937_64& rng) {
    std::vector<Matrix> blocks;
    for (int k = 0; k < s.blocks(); ++k) blocks.push_back(random_matrix(s.dim(k), s.dim(k), rng));
    return AlgebraElement(s, std::move(blocks));
}

inline AlgebraElement random_hermitian(const BlockStructure& s, std::mt19937_64& rng) {
    const AlgebraElement x = random_element(s, rng);
    return (x + x.adjoint()) * Complex(0.5, 0.0);
}

inline State make_random_state(const BlockStructure& s, std::mt19937_64& rng) {
    std::vector<Matrix> blocks;
    for (int k = 0; k < s.blocks(); ++k) {
        const Matrix g = random_matrix(s.dim(k), s.dim(k), rng);
        blocks.push_back(g * g.adjoint());
    }
    AlgebraElement density(s, std::move(blocks));
    density = density * Complex(1.0 / density.trace().real(), 0.0);
    return State(s, density);
}

// Entrywise triple-sum product, the oracle for multiply().
inline AlgebraElement naive_multiply(const AlgebraElement& x, const AlgebraElement& y) {
    std::vector<Matrix> blocks;
    for (int k = 0; k < x.structure().blocks(); ++k) {
        const int d = x.structure().dim(k);
        Matrix out = Matrix::Zero(d, d);
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) {
                for (int l = 0; l < d; ++l) out(i, j) += x.block(k)(i, l) * y.block(k)(l, j);
            }
        }
        blocks.push_back(std::move(out));
    }
    return AlgebraElement(x.structure(), std::move(blocks));
}

// ---- small named stochastic matrices --------------------------------------

inline RealMatrix flip2() {
    RealMatrix s(2, 2);
    s << 0, 1, 1, 0;
    return s;
}

// Oriented so that the cyclic classes come out as ({0}, {1}, {2}).
inline RealMatrix cycle3() {
    RealMatrix s = RealMatrix::Zero(3, 3);
    s(0, 2) = 1;
    s(2, 1) = 1;
    s(1, 0) = 1;
    return s;
}

inline RealMatrix averaging2() {
    RealMatrix s(2, 2);
    s << 0.5, 0.5, 0.5, 0.5;
    return s;
}

// Random irreducible row-stochastic matrix with exact graph period `period`:
// classes of random sizes, fully positive cyclic blocks, then a random
// relabeling.
inline pf::StochasticMatrix random_irreducible_stochastic(int n, int period,
                                                          std::mt19937_64& rng) {
    if (period < 1 || n < period) throw std::invalid_argument("need n >= period >= 1");
    // random composition of n into `period` positive parts
    std::vector<int> sizes(static_cast<std::size_t>(period), 1);
    for (int extra = n - period; extra > 0; --extra) {
        sizes[std::uniform_int_distribution<std::size_t>(0, sizes.size() - 1)(rng)] += 1;
    }
    std::vector<int> class_of;
    for (int c = 0; c < period; ++c) {
        for (int i = 0; i < sizes[static_cast<std::size_t>(c)]; ++i) class_of.push_back(c);
    }

    std::uniform_real_distribution<double> weight(0.1, 1.0);
    RealMatrix s = RealMatrix::Zero(n, n);
    for (int u = 0; u < n; ++u) {
        // row u (class c) supports exactly class c−1 mod k
        const int target = ((class_of[static_cast<std::size_t>(u)] - 1) % period + period) % period;
        double row_sum = 0.0;
        for (int v = 0; v < n; ++v) {
            if (class_of[static_cast<std::size_t>(v)] == target) {
                s(u, v) = weight(rng);
                row_sum += s(u, v);
            }
        }
        for (int v = 0; v < n; ++v) s(u, v) /= row_sum;
    }

    std::vector<int> relabel(static_cast<std::size_t>(n));
    std::iota(relabel.begin(), relabel.end(), 0);
    std::shuffle(relabel.begin(), relabel.end(), rng);
    RealMatrix shuffled(n, n);
    for (int u = 0; u < n; ++u) {
        for (int v = 0; v < n; ++v) {
            shuffled(relabel[static_cast<std::size_t>(u)],
                     relabel[static_cast<std::size_t>(v)]) = s(u, v);
        }
    }
    return pf::StochasticMatrix(shuffled);
}

// Mixture of normalized irreducible characters of Z_n: positive definite with
// value 1 at the identity.
inline gen::PositiveDefiniteFunction cyclic_character_mixture(
    int n, const std::vector<std::pair<int, double>>& weighted_characters) {
    std::vector<Complex> phi(static_cast<std::size_t>(n), Complex(0.0, 0.0));
    for (int x = 0; x < n; ++x) {
        for (const auto& [j, w] : weighted_characters) {
            phi[static_cast<std::size_t>(x)] +=
                w * std::polar(1.0, 2.0 * 3.14159265358979323846 * j * x / n);
        }
    }
    return gen::PositiveDefiniteFunction(gen::FiniteGroup::cyclic(n), phi);
}

} // namespace testsup
