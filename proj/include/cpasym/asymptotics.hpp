// asymptotics.hpp — Asymptotic decomposition of a completely positive map:
// the idempotent E cut out of the peripheral spectrum, the quasiautomorphism
// Q = P∘E it converges to, the C*-structure x•y = E(xy) on the range of E,
// subsequence-limit cross checks, and mixing detection.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cpasym/spectral.hpp"

namespace cpasym {

struct AsymptoticDecomposition {
    CpMap P;  // input map
    CpMap E;  // idempotent onto the span of the maximal eigenvectors
    CpMap Q;  // = P∘E
    // (eigenvalue, eigenvector) pairs spanning range(E). Eigenvalues are
    // unimodular for discrete maps; purely imaginary generator eigenvalues
    // when produced by semigroup_asymptotics.
    std::vector<std::pair<Complex, AlgebraElement>> peripheral_pairs;
    Matrix range_basis;   // coord_dim × p, orthonormal basis of range(E)
    Matrix alpha_matrix;  // action of P restricted to range(E) in that basis
    double gap = 1.0;
};

// Range of E as an abstract C*-algebra: a self-adjoint-closed trace-orthonormal
// basis, the structure constants of x•y = E(xy), and the action of α.
struct ChoiEffrosAlgebra {
    std::vector<AlgebraElement> basis;   // Hermitian, tr(b_i b_j) = δ_ij
    Matrix basis_coords;                 // coord_dim × p, columns vectorize(b_i)
    std::vector<Matrix> structure_constants; // [k](i,j) = coefficient of b_k in b_i • b_j
    Vector unit_coords;                  // coordinates of E(1)
    Matrix alpha_matrix;                 // α in this basis
};

// P = θ_*∘β∘θ with θ the coordinate map of E onto the range algebra,
// θ_* the inclusion back into A, and β the automorphism in coordinates.
struct Factorization {
    ChoiEffrosAlgebra algebra;
    Matrix theta;       // p × coord_dim
    Matrix theta_star;  // coord_dim × p
    Matrix beta;        // p × p
    CpMap E;
};

struct QuasiautomorphismReport {
    double projection_residual = 0.0;     // max(‖Q∘E − Q‖, ‖E∘Q − Q‖)
    double alpha_unimodularity = 0.0;     // max | |λ| − 1 | over σ(α)
    double alpha_min_singular = 0.0;
    double homomorphism_residual = 0.0;   // α(x•y) vs α(x)•α(y) on basis pairs
    double involution_residual = 0.0;     // α(x*) vs α(x)* on the basis
    double power_residual = 0.0;          // Qⁿ vs αⁿ∘E on sampled n
    double isometry_residual_level1 = 0.0;
    double isometry_residual_level2 = 0.0; // amplified check id₂⊗P; a proxy, not
                                           // a proof of complete isometry
    bool passed = false;
    std::vector<std::string> failures;
};

struct UniquenessReport {
    long recurrence_time_1 = 0;
    long recurrence_time_2 = 0;
    double spectral_vs_kuperberg = 0.0;
    double spectral_vs_second = 0.0;
    double kuperberg_vs_second = 0.0;
    double idempotent_residual = 0.0;
    double commutation_residual = 0.0;
    double unital_residual = 0.0;
    double choi_min_eigenvalue = 0.0;
    bool passed = false;
    std::vector<std::string> failures;
};

struct ConjugacyReport {
    Matrix phi;  // θ̃∘θ_*
    double intertwining_residual = 0.0;  // ‖φ∘β₁ − β₂∘φ‖
    double product_residual = 0.0;       // φ(x•₁y) vs φ(x)•₂φ(y) on basis pairs
    double min_singular = 0.0;
    bool passed = false;
};

struct OrbitCompactnessReport {
    int span_order = 0;    // N: the orbit segment spanned
    double eps = 0.0;
    std::vector<double> residuals;  // dist(Pⁿ(a), span{a,…,P^N(a)}), n = 0..4N
    bool within_eps = false;
};

// Builds E (spectral projection), Q = P∘E, the peripheral eigenpairs, and the
// matrix of α on range(E). Requires a power-bounded map with semisimple
// peripheral spectrum.
AsymptoticDecomposition asymptotic_decomposition(const CpMap& P,
                                                 const ToleranceConfig& cfg = {});

// Rebuilds the decomposition data around an explicitly supplied idempotent
// (e.g. a Kuperberg limit): the range basis, α, and the eigenpairs are all
// recomputed from the projection's range. Useful for producing a second
// factorization of the same map.
AsymptoticDecomposition decomposition_with_idempotent(const CpMap& P, const CpMap& E,
                                                      const ToleranceConfig& cfg = {});

struct KuperbergResult {
    CpMap E;
    long recurrence_time = 0;
    long power = 0;        // E ≈ P^power
    double residual = 0.0; // last observed ‖P^{2m} − P^m‖
};

// Approximates the idempotent limit of a subsequence of powers: picks a
// recurrence time n with all peripheral eigenvalue powers near 1, then squares
// Pⁿ until successive squares agree within eps. `subsequence` selects the
// first or second admissible recurrence time.
KuperbergResult kuperberg_idempotent_detailed(const CpMap& P, double eps, long n_max,
                                              int subsequence = 1);
CpMap kuperberg_idempotent(const CpMap& P, double eps, long n_max);

// ‖Pⁿ(a) − Qⁿ(a)‖ for n = 0..n_max.
std::vector<double> convergence_profile(const CpMap& P, const CpMap& Q,
                                        const AlgebraElement& a, long n_max);

// trace_norm(P_*ⁿ(ρ) − Q_*ⁿ(ρ)) for n = 0..n_max.
std::vector<double> predual_convergence_profile(const CpMap& P, const CpMap& Q,
                                                const State& rho, long n_max);

ChoiEffrosAlgebra choi_effros_algebra(const AsymptoticDecomposition& dec);

QuasiautomorphismReport verify_quasiautomorphism(const AsymptoticDecomposition& dec,
                                                 const ToleranceConfig& cfg = {});

// Computes E three ways (spectral projection, two Kuperberg subsequences) and
// cross-checks them together with the idempotent/CP/unital/commutation
// properties of the spectral E.
UniquenessReport idempotent_uniqueness_check(const CpMap& P,
                                             const ToleranceConfig& cfg = {});

// Returns the unique absorbing state ω when the peripheral spectrum is exactly
// {1} with one-dimensional fixed space ℂ·1; absent otherwise.
std::optional<State> detect_mixing(const CpMap& P, const ToleranceConfig& cfg = {});

Factorization factorization(const AsymptoticDecomposition& dec);

// φ = θ̃∘θ_* between two factorizations of the same map; verifies that φ is an
// invertible intertwiner and a •-isomorphism on basis pairs.
ConjugacyReport conjugacy_witness(const Factorization& f1, const Factorization& f2,
                                  double tol = 1e-8);

OrbitCompactnessReport orbit_compactness_diagnostic(const CpMap& P,
                                                    const AlgebraElement& a,
                                                    int span_order, double eps);

// n* = ⌈log(target)/log(1−gap)⌉ floored by coord_dim (the bound on any
// nilpotent transient) and capped at cap.
long stability_horizon(double gap, int coord_dim, double target = 1e-8,
                       long cap = 10000);

} // namespace cpasym
