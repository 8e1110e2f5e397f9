// perron_frobenius.hpp — The classical commutative specialization: irreducible
// row-stochastic matrices on ℂⁿ, graph period, cyclic class decomposition,
// explicit maximal eigenvectors, and the idempotent limit of P^{nk}.

#pragma once

#include <vector>

#include "cpasym/cpmap.hpp"

namespace cpasym::pf {

// Row-stochastic nonnegative matrix.
class StochasticMatrix {
public:
    explicit StochasticMatrix(RealMatrix entries, double tol = 1e-12);

    int size() const { return static_cast<int>(entries_.rows()); }
    const RealMatrix& entries() const { return entries_; }

private:
    RealMatrix entries_;
};

struct CyclicDecomposition {
    int period = 1;
    std::vector<std::vector<int>> classes;  // ordered partition C_0,…,C_{k−1}
    std::vector<int> permutation;           // relabeling: sorted by (class, index)
};

// The matrix viewed as a unital positive (hence CP) map on the commutative
// algebra ℂⁿ, acting on coordinate vectors exactly as S.
CpMap stochastic_to_cpmap(const StochasticMatrix& S);

// Strong connectivity of the support digraph and the gcd period from a BFS
// level assignment. For reducible input the period refers to the strong
// component of index 0.
std::pair<bool, int> irreducibility_and_period(const StochasticMatrix& S);

// Classes C_i from BFS levels mod k on the predecessor digraph, rooted at
// index 0, so that elements supported in C_i map into C_{i+1 mod k}. The
// permuted matrix has nonzero entries only in the cyclic off-diagonal blocks
// (class i rows, class i−1 mod k columns) with square zero diagonal blocks.
CyclicDecomposition cyclic_decomposition(const StochasticMatrix& S);

// The k pairs (ζ^ℓ, x_ℓ), ζ = e^{2πi/k}, x_ℓ = Σ_j ζ̄^{jℓ}·1_{C_j}; each is
// verified to satisfy S·x_ℓ = ζ^ℓ·x_ℓ within 1e-9.
std::vector<std::pair<Complex, Vector>> pf_maximal_eigenvectors(
    const StochasticMatrix& S, const CyclicDecomposition& dec);

// E = lim_n S^{nk}, computed by repeated squaring of S^k until successive
// iterates agree within 1e-12.
CpMap pf_idempotent(const StochasticMatrix& S);

// True when the permuted matrix matches the cyclic block template: for k > 1,
// nonzero entries only in blocks (i, i−1 mod k).
bool cyclic_pattern_holds(const StochasticMatrix& S, const CyclicDecomposition& dec,
                          double tol = 0.0);

} // namespace cpasym::pf
