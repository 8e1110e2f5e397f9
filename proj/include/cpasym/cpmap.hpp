// cpmap.hpp — Linear maps on a block algebra: superoperator form, optional Kraus
// data, Choi-matrix complete-positivity certification, composition, and the
// predual (trace-pairing adjoint) map.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cpasym/algebra.hpp"

namespace cpasym {

// Cached map properties; nullopt = not yet determined.
struct MapFlags {
    std::optional<bool> completely_positive;
    std::optional<bool> unital;
    std::optional<bool> contraction;
};

// Linear map P: A → A carried as a coord_dim × coord_dim superoperator acting
// on vectorized elements, vec(P(a)) = superop · vec(a). Kraus data, when
// present, describes the Heisenberg-picture action a ↦ Σ A_i† a A_i.
class CpMap {
public:
    CpMap(BlockStructure structure, Matrix superop, MapFlags flags = {},
          std::vector<Matrix> kraus = {});

    const BlockStructure& structure() const { return structure_; }
    const Matrix& superop() const { return superop_; }
    const MapFlags& flags() const { return flags_; }
    bool has_kraus() const { return !kraus_.empty(); }
    const std::vector<Matrix>& kraus() const { return kraus_; }

    AlgebraElement operator()(const AlgebraElement& a) const;

private:
    BlockStructure structure_;
    Matrix superop_;
    MapFlags flags_;
    std::vector<Matrix> kraus_;
};

// Choi matrix of the extension P∘E_blk to M_D, where E_blk is the blockwise
// compression; D² × D², unnormalized (Σ_ij e_ij ⊗ P̃(e_ij)).
struct ChoiMatrix {
    BlockStructure structure;
    Matrix matrix;
    double hermiticity_defect = 0.0;
};

CpMap identity_map(const BlockStructure& structure);

// Builds the Heisenberg-picture channel a ↦ Σ A_i† a A_i. Every Kraus matrix
// must be D × D and block-diagonal for the structure (maps A into A).
CpMap from_kraus(const BlockStructure& structure, const std::vector<Matrix>& kraus);

ChoiMatrix choi_matrix(const CpMap& P);

// True iff the Choi matrix is Hermitian and its minimum eigenvalue is ≥ −tol.
bool is_completely_positive(const CpMap& P, double tol = 1e-10);

// Minimum eigenvalue of the symmetrized Choi matrix.
double choi_min_eigenvalue(const CpMap& P);

// ‖P(1) − 1‖ ≤ tol.
bool is_unital(const CpMap& P, double tol = 1e-10);

struct ContractionCheck {
    bool contraction = false;
    std::string method;   // "unital-cp-norm" or "power-bounded-heuristic"
    double witness = 0.0; // ‖P(1)‖, or the largest normalized power norm seen
};

// For CP maps: exact test ‖P(1)‖ ≤ 1 + tol. For maps that are not CP,
// falls back to a power-boundedness scan sup_{n ≤ 4·coord_dim} ‖superopⁿ‖₂,
// accepted when bounded by 1 + tol·n.
ContractionCheck contraction_check(const CpMap& P, double tol = 1e-10);
bool is_contraction(const CpMap& P, double tol = 1e-10);

// Returns a copy of P with all three flags resolved.
CpMap recompute_flags(const CpMap& P, double tol = 1e-10);

// compose(P, R) = P∘R.
CpMap compose(const CpMap& P, const CpMap& R);
CpMap power(const CpMap& P, long n);
AlgebraElement apply(const CpMap& P, const AlgebraElement& a);

// Trace-pairing adjoint: ⟨predual(P)(ρ), a⟩ = ⟨ρ, P(a)⟩. Superoperator is the
// conjugate transpose; Kraus data (when present) maps to ρ ↦ Σ A_i ρ A_i†.
CpMap predual_map(const CpMap& P);

// Induced map norm on the matrix-unit basis: max over coordinate basis
// vectors u (the matrix units of A) of ‖devectorize(S·u)‖ in operator norm.
double map_norm(const BlockStructure& structure, const Matrix& superop_matrix);
double map_sup_difference(const CpMap& P, const CpMap& R);

} // namespace cpasym
