// spectral.hpp — Eigenstructure of superoperators: peripheral classification,
// spectral projections via reordered Schur form, semisimplicity checks, and
// the recurrence-time search on the unit circle.

#pragma once

#include <vector>

#include "cpasym/cpmap.hpp"

namespace cpasym {

struct SpectralDecomposition {
    BlockStructure structure;
    Matrix superop;                 // the analyzed operator
    Matrix schur_u;                 // unitary factor, superop = U T U†
    Matrix schur_t;                 // upper-triangular factor
    std::vector<Complex> eigenvalues;      // sorted: descending |λ|, ascending phase
    std::vector<int> schur_position;       // eigenvalues[i] = T(p, p), p = schur_position[i]
    std::vector<int> peripheral_indices;   // indices into eigenvalues with 1 − |λ| ≤ tol
    std::vector<bool> peripheral_at_schur; // peripheral flag per Schur position
    double gap = 1.0;               // 1 − max{|λ| : λ not peripheral}; 1 if all peripheral
    double peripheral_tol = 1e-9;
};

// Complete eigenvalue list of the superoperator with deterministic ordering;
// throws ContractionViolationError when some |λ| > 1 + peripheral_tol.
SpectralDecomposition spectral_decomposition(const CpMap& P, const ToleranceConfig& cfg = {});

// Spectral projection onto the span of the peripheral eigenvectors, computed
// by reordering the Schur form and decoupling the invariant subspace through
// a triangular Sylvester solve. Requires peripheral semisimplicity.
CpMap peripheral_projection(const SpectralDecomposition& dec);

// True iff every distinct peripheral eigenvalue λ (clustered within 1e-8)
// satisfies rank(superop − λI) = coord_dim − multiplicity, with ranks taken
// at singular-value threshold tol.
bool check_peripheral_semisimple(const SpectralDecomposition& dec, double tol = 1e-7);

// Same rank test for an arbitrary eigenvalue selection of a square operator.
bool check_selected_semisimple(const Matrix& superop,
                               const std::vector<Complex>& selected_values,
                               double tol = 1e-7);

// Smallest n in [start, n_max] with max_j |λ_j^n − 1| ≤ eps. The inputs are
// normalized onto the unit circle first; throws SearchExhaustedError if no n
// qualifies within the budget.
long find_recurrence_time(const std::vector<Complex>& lambdas, double eps, long n_max,
                          long start = 1);

// --------- shared invariant-subspace machinery (also used by semigroup) ----------

struct InvariantSplit {
    Matrix projection;  // n × n spectral projection onto the selected subspace
    Matrix basis;       // n × p orthonormal basis of the subspace
    Matrix restricted;  // p × p upper-triangular matrix of the restricted action
};

// Decouples the invariant subspace of the eigenvalues flagged in `selected`
// (indexed by Schur position). The Schur factors are reordered on a copy.
InvariantSplit split_invariant(const Matrix& schur_u, const Matrix& schur_t,
                               const std::vector<bool>& selected);

} // namespace cpasym
