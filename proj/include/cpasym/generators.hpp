// generators.hpp — Constructors for the example families: group-algebra Schur
// multipliers, tensor products, deterministic random unital channels, and the
// small named channels used across the test batteries.

#pragma once

#include <cstdint>
#include <vector>

#include "cpasym/cpmap.hpp"

namespace cpasym::gen {

// Finite group given by its multiplication table; table(i, j) = index of x_i·x_j.
class FiniteGroup {
public:
    explicit FiniteGroup(std::vector<std::vector<int>> table);

    int order() const { return order_; }
    int multiply(int x, int y) const {
        return table_.at(static_cast<std::size_t>(x)).at(static_cast<std::size_t>(y));
    }
    int inverse(int x) const { return inverse_.at(static_cast<std::size_t>(x)); }
    int identity() const { return identity_; }
    const std::vector<std::vector<int>>& table() const { return table_; }

    static FiniteGroup cyclic(int n);
    static FiniteGroup symmetric3();
    static FiniteGroup dihedral4();

private:
    std::vector<std::vector<int>> table_;
    std::vector<int> inverse_;
    int order_ = 0;
    int identity_ = 0;
};

// φ: G → ℂ with φ(e) = 1 and [φ(x·y⁻¹)] positive semidefinite.
struct PositiveDefiniteFunction {
    FiniteGroup group;
    std::vector<Complex> values;

    PositiveDefiniteFunction(FiniteGroup g, std::vector<Complex> vals,
                             double psd_floor = 1e-10);

    // Gram matrix [φ(x·y⁻¹)] whose PSD-ness certifies the function.
    Matrix kernel_matrix() const;
};

// The group algebra ℂ[G] realized inside M_g by the left regular representation
// and block-diagonalized numerically: simultaneous diagonalization of a generic
// central element (isotypic split) and a generic commutant element (irreducible
// split) yields one irreducible block per isotypic component.
struct GroupAlgebraRealization {
    FiniteGroup group;
    BlockStructure structure;       // dims = irreducible degrees
    Matrix coords_from_group;       // g × g: column x = block coordinates of U_x
    Matrix group_from_coords;       // inverse of the above

    // Block coordinates of the algebra element Σ c_x U_x.
    Vector coords(const Vector& group_coefficients) const;
    // Superoperator of the multiplier U_x ↦ m(x)·U_x.
    Matrix multiplier_superop(const std::vector<Complex>& m) const;
};

GroupAlgebraRealization realize_group_algebra(const FiniteGroup& group);

// Schur multiplier P(U_x) = φ(x)·U_x on the block-diagonalized group algebra.
// Complete positivity is certified by the PSD kernel criterion.
CpMap group_schur_map(const PositiveDefiniteFunction& phi);
CpMap group_schur_map(const GroupAlgebraRealization& realization,
                      const PositiveDefiniteFunction& phi);

// K = {x : 1 − |φ(x)| ≤ tol}; verified closed under product and inverse, with
// φ|K multiplicative within tol.
std::vector<int> kernel_subgroup(const PositiveDefiniteFunction& phi, double tol = 1e-9);

// Map on the tensor-product algebra with P(x ⊗ y) = P0(x) ⊗ P1(y); at least
// one factor must have single-block structure.
CpMap tensor_map(const CpMap& P0, const CpMap& P1);

// Deterministic unital CP channel: kraus_count block-diagonal Gaussian Kraus
// matrices, right-normalized so that Σ A_i† A_i = 1.
CpMap random_unital_channel(const BlockStructure& structure, int kraus_count,
                            std::uint64_t seed);

// P(a) = (1−p)·a + p·ZaZ on M_2.
CpMap dephasing_channel(double p);

// Heisenberg-picture amplitude damping on M_2 with decay rate gamma.
CpMap amplitude_damping_channel(double gamma);

// Quasiautomorphism on M_d ⊕ M_d that rotates the first summand by the
// diagonal unitary with the given phases and replaces the second summand by
// the normalized trace of the first: (a, b) ↦ (u a u†, tr(a)/d · 1). Its
// asymptotic idempotent has range {(a, tr(a)/d·1)}, which is an operator
// system but not a subalgebra.
CpMap rotate_and_average_channel(int d, const std::vector<double>& phases);

} // namespace cpasym::gen
