// semigroup.hpp — Continuous-time contraction semigroups T_t = exp(tL) on a
// block algebra, their asymptotic quasiautomorphism semigroup S_t = T_t∘E, and
// discrete/continuous consistency diagnostics.

#pragma once

#include <vector>

#include "cpasym/asymptotics.hpp"

namespace cpasym::sg {

enum class GeneratorForm { gkls, raw };

// Generator L of a contraction semigroup in the Heisenberg picture. For the
// gkls form, L(a) = i[H,a] + Σ (V_i† a V_i − ½(V_i†V_i a + a V_i†V_i)), which
// satisfies L(1) = 0.
struct SemigroupGenerator {
    BlockStructure structure;
    Matrix generator;  // superoperator of L
    GeneratorForm form = GeneratorForm::raw;
};

SemigroupGenerator gkls_generator(const AlgebraElement& hamiltonian,
                                  const std::vector<AlgebraElement>& jumps);

// Raw superoperator; validates that the spectrum lies in the closed left
// half-plane within tol (necessary for a contraction semigroup).
SemigroupGenerator raw_generator(const BlockStructure& structure, Matrix superop,
                                 double tol = 1e-9);

// CpMap with superoperator exp(tL); t ≥ 0.
CpMap exponentiate(const SemigroupGenerator& L, double t);

// E = spectral projection of L onto eigenvalues with |Re λ| ≤ peripheral_tol;
// the returned decomposition carries P = exp(L), Q = P∘E, and — unlike the
// discrete case — peripheral_pairs hold the purely imaginary generator
// eigenvalues (T_t x = e^{tλ} x on the pairs).
AsymptoticDecomposition semigroup_asymptotics(const SemigroupGenerator& L,
                                              const ToleranceConfig& cfg = {});

// ‖exp(tL)(a) − exp(tL)(E(a))‖ per grid point; the grid must be nonnegative
// and ascending.
std::vector<double> semigroup_convergence_profile(const SemigroupGenerator& L,
                                                  const AsymptoticDecomposition& dec,
                                                  const AlgebraElement& a,
                                                  const std::vector<double>& t_grid);

// Spectral abscissa gap g = −max{Re λ : Re λ < −tol}; +infinity when every
// eigenvalue sits on the imaginary axis.
double spectral_abscissa_gap(const SemigroupGenerator& L, double tol = 1e-9);

struct ConsistencyReport {
    double e_difference = 0.0;  // ‖E_continuous − E_discrete‖ in the map norm
    bool aliasing = false;
    // pairs of distinct imaginary-axis eigenvalues of L that differ by a
    // nonzero integer multiple of 2πi/s
    std::vector<std::pair<Complex, Complex>> aliased_pairs;
    bool within_tol = false;
};

// Compares the semigroup E with the E of the discrete map exp(sL); flags the
// aliasing configurations in which the discrete-time analysis may merge
// distinct rotation frequencies.
ConsistencyReport discretization_consistency(const SemigroupGenerator& L, double s,
                                             const ToleranceConfig& cfg = {},
                                             double tol = 1e-7);

} // namespace cpasym::sg
