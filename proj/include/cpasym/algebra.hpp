// algebra.hpp — Finite-dimensional block-diagonal matrix algebras A = ⊕_k M_{d_k}:
// structures, elements, states, norms, and the trace pairing.
//
// Coordinate convention (fixed for the whole library): an element is vectorized
// by column-stacking each block in order of dims; every superoperator acts on
// this coordinate vector.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

#include "cpasym/errors.hpp"

namespace cpasym {

using Complex    = std::complex<double>;
using Matrix     = Eigen::MatrixXcd;
using Vector     = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Direct-sum shape of the algebra: block dimensions (d_1,…,d_m).
class BlockStructure {
public:
    explicit BlockStructure(std::vector<int> dims);

    int blocks() const { return static_cast<int>(dims_.size()); }
    int dim(int k) const { return dims_.at(static_cast<std::size_t>(k)); }
    const std::vector<int>& dims() const { return dims_; }

    // D = Σ d_k, the size of the containing full matrix algebra M_D.
    int total_dim() const { return total_dim_; }
    // Σ d_k², the dimension of A as a complex vector space.
    int coord_dim() const { return coord_dim_; }

    // Offset of block k inside the coordinate vector.
    int coord_offset(int k) const { return coord_offsets_.at(static_cast<std::size_t>(k)); }
    // Offset of block k inside M_D (row/column index).
    int space_offset(int k) const { return space_offsets_.at(static_cast<std::size_t>(k)); }

    // Coordinate index of the matrix unit e_ij of block k (column-stacked).
    int coord_index(int k, int i, int j) const { return coord_offset(k) + j * dim(k) + i; }

    bool operator==(const BlockStructure& other) const { return dims_ == other.dims_; }
    bool operator!=(const BlockStructure& other) const { return !(*this == other); }

private:
    std::vector<int> dims_;
    std::vector<int> coord_offsets_;
    std::vector<int> space_offsets_;
    int total_dim_ = 0;
    int coord_dim_ = 0;
};

// Element of A: one complex matrix per block.
class AlgebraElement {
public:
    AlgebraElement(BlockStructure structure, std::vector<Matrix> blocks);

    const BlockStructure& structure() const { return structure_; }
    const Matrix& block(int k) const { return blocks_.at(static_cast<std::size_t>(k)); }
    Matrix& block(int k) { return blocks_.at(static_cast<std::size_t>(k)); }
    const std::vector<Matrix>& blocks() const { return blocks_; }

    AlgebraElement adjoint() const;
    Complex trace() const;

    AlgebraElement operator+(const AlgebraElement& other) const;
    AlgebraElement operator-(const AlgebraElement& other) const;
    AlgebraElement operator*(Complex scalar) const;

private:
    BlockStructure structure_;
    std::vector<Matrix> blocks_;
};

AlgebraElement identity_element(const BlockStructure& structure);
AlgebraElement zero_element(const BlockStructure& structure);

// Column-stacks every block in order; length = coord_dim.
Vector vectorize(const AlgebraElement& a);
AlgebraElement devectorize(const BlockStructure& structure, const Vector& coords);

// Embed A into M_D as block-diagonal matrices, and compress back
// (the compression a ↦ Σ_k p_k a p_k onto the block diagonal).
Matrix embed(const AlgebraElement& a);
AlgebraElement compress(const BlockStructure& structure, const Matrix& full);

// C*-norm: max over blocks of the largest singular value.
double operator_norm(const AlgebraElement& a);
// Predual norm: sum over blocks of all singular values.
double trace_norm(const AlgebraElement& a);

// Blockwise matrix product. Structures must match.
AlgebraElement multiply(const AlgebraElement& x, const AlgebraElement& y);

// ⟨x, y⟩ = Σ_k tr(x_k† y_k); equals vectorize(x)† vectorize(y).
Complex trace_pairing(const AlgebraElement& x, const AlgebraElement& y);

// Kronecker product, column-stacking convention.
Matrix kronecker(const Matrix& a, const Matrix& b);

// ‖a − a†‖ in the operator norm.
double hermiticity_defect(const AlgebraElement& a);

// Hermitian within tol relative to ‖a‖ (a zero element counts as Hermitian).
bool is_hermitian(const AlgebraElement& a, double tol = 1e-10);

// True iff a is Hermitian (within tol) and every block eigenvalue is ≥ −tol.
// Throws DomainError when the input is not Hermitian at the given tolerance.
bool is_positive_element(const AlgebraElement& a, double tol = 1e-10);

// State ρ on A carried by its density element: ρ(a) = Σ_k tr(density_k a_k).
class State {
public:
    State(BlockStructure structure, AlgebraElement density, double tol = 1e-8);

    const BlockStructure& structure() const { return structure_; }
    const AlgebraElement& density() const { return density_; }

    Complex operator()(const AlgebraElement& a) const;

private:
    BlockStructure structure_;
    AlgebraElement density_;
};

struct ToleranceConfig {
    double peripheral_tol     = 1e-9;   // unit-circle classification, absolute on 1 − |λ|
    double idempotent_tol     = 1e-9;   // residual bound for E² = E and [E, P] = 0
    double psd_floor          = 1e-10;  // admissible negative eigenvalue slack in PSD tests
    double convergence_target = 1e-6;   // profile / agreement target

    void validate() const;
};

} // namespace cpasym
