// algebra.cpp — Block algebra elements, norms, and states.

#include "cpasym/algebra.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <sstream>
#include <utility>

namespace cpasym {

namespace {

void require_same_structure(const AlgebraElement& x, const AlgebraElement& y,
                            const char* op) {
    if (x.structure() != y.structure()) {
        std::ostringstream msg;
        msg << op << ": block structure mismatch";
        throw StructuralError(msg.str());
    }
}

} // namespace

BlockStructure::BlockStructure(std::vector<int> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) {
        throw StructuralError("BlockStructure: need at least one block");
    }
    coord_offsets_.reserve(dims_.size());
    space_offsets_.reserve(dims_.size());
    for (int d : dims_) {
        if (d < 1) {
            throw StructuralError("BlockStructure: block dimensions must be >= 1");
        }
        coord_offsets_.push_back(coord_dim_);
        space_offsets_.push_back(total_dim_);
        total_dim_ += d;
        coord_dim_ += d * d;
    }
}

AlgebraElement::AlgebraElement(BlockStructure structure, std::vector<Matrix> blocks)
    : structure_(std::move(structure)), blocks_(std::move(blocks)) {
    if (static_cast<int>(blocks_.size()) != structure_.blocks()) {
        throw StructuralError("AlgebraElement: block count mismatch");
    }
    for (int k = 0; k < structure_.blocks(); ++k) {
        const Matrix& b = blocks_[static_cast<std::size_t>(k)];
        if (b.rows() != structure_.dim(k) || b.cols() != structure_.dim(k)) {
            std::ostringstream msg;
            msg << "AlgebraElement: block " << k << " has shape " << b.rows() << "x"
                << b.cols() << ", expected " << structure_.dim(k) << "x" << structure_.dim(k);
            throw StructuralError(msg.str());
        }
    }
}

AlgebraElement AlgebraElement::adjoint() const {
    std::vector<Matrix> out;
    out.reserve(blocks_.size());
    for (const Matrix& b : blocks_) out.push_back(b.adjoint());
    return AlgebraElement(structure_, std::move(out));
}

Complex AlgebraElement::trace() const {
    Complex t = 0.0;
    for (const Matrix& b : blocks_) t += b.trace();
    return t;
}

AlgebraElement AlgebraElement::operator+(const AlgebraElement& other) const {
    require_same_structure(*this, other, "operator+");
    std::vector<Matrix> out;
    out.reserve(blocks_.size());
    for (std::size_t k = 0; k < blocks_.size(); ++k) out.push_back(blocks_[k] + other.blocks_[k]);
    return AlgebraElement(structure_, std::move(out));
}

AlgebraElement AlgebraElement::operator-(const AlgebraElement& other) const {
    require_same_structure(*this, other, "operator-");
    std::vector<Matrix> out;
    out.reserve(blocks_.size());
    for (std::size_t k = 0; k < blocks_.size(); ++k) out.push_back(blocks_[k] - other.blocks_[k]);
    return AlgebraElement(structure_, std::move(out));
}

AlgebraElement AlgebraElement::operator*(Complex scalar) const {
    std::vector<Matrix> out;
    out.reserve(blocks_.size());
    for (const Matrix& b : blocks_) out.push_back(scalar * b);
    return AlgebraElement(structure_, std::move(out));
}

AlgebraElement identity_element(const BlockStructure& structure) {
    std::vector<Matrix> blocks;
    blocks.reserve(static_cast<std::size_t>(structure.blocks()));
    for (int k = 0; k < structure.blocks(); ++k) {
        blocks.push_back(Matrix::Identity(structure.dim(k), structure.dim(k)));
    }
    return AlgebraElement(structure, std::move(blocks));
}

AlgebraElement zero_element(const BlockStructure& structure) {
    std::vector<Matrix> blocks;
    blocks.reserve(static_cast<std::size_t>(structure.blocks()));
    for (int k = 0; k < structure.blocks(); ++k) {
        blocks.push_back(Matrix::Zero(structure.dim(k), structure.dim(k)));
    }
    return AlgebraElement(structure, std::move(blocks));
}

Vector vectorize(const AlgebraElement& a) {
    const BlockStructure& s = a.structure();
    Vector v(s.coord_dim());
    for (int k = 0; k < s.blocks(); ++k) {
        const Matrix& b = a.block(k);
        const int d = s.dim(k);
        // Eigen stores column-major, so the raw data is already column-stacked.
        v.segment(s.coord_offset(k), d * d) =
            Eigen::Map<const Vector>(b.data(), d * d);
    }
    return v;
}

AlgebraElement devectorize(const BlockStructure& structure, const Vector& coords) {
    if (coords.size() != structure.coord_dim()) {
        throw StructuralError("devectorize: coordinate length mismatch");
    }
    std::vector<Matrix> blocks;
    blocks.reserve(static_cast<std::size_t>(structure.blocks()));
    for (int k = 0; k < structure.blocks(); ++k) {
        const int d = structure.dim(k);
        Matrix b(d, d);
        Eigen::Map<Vector>(b.data(), d * d) = coords.segment(structure.coord_offset(k), d * d);
        blocks.push_back(std::move(b));
    }
    return AlgebraElement(structure, std::move(blocks));
}

Matrix embed(const AlgebraElement& a) {
    const BlockStructure& s = a.structure();
    Matrix full = Matrix::Zero(s.total_dim(), s.total_dim());
    for (int k = 0; k < s.blocks(); ++k) {
        const int off = s.space_offset(k);
        full.block(off, off, s.dim(k), s.dim(k)) = a.block(k);
    }
    return full;
}

AlgebraElement compress(const BlockStructure& structure, const Matrix& full) {
    if (full.rows() != structure.total_dim() || full.cols() != structure.total_dim()) {
        throw StructuralError("compress: matrix size does not match total_dim");
    }
    std::vector<Matrix> blocks;
    blocks.reserve(static_cast<std::size_t>(structure.blocks()));
    for (int k = 0; k < structure.blocks(); ++k) {
        const int off = structure.space_offset(k);
        blocks.push_back(full.block(off, off, structure.dim(k), structure.dim(k)));
    }
    return AlgebraElement(structure, std::move(blocks));
}

double operator_norm(const AlgebraElement& a) {
    double norm = 0.0;
    for (const Matrix& b : a.blocks()) {
        if (b.size() == 1) {
            norm = std::max(norm, std::abs(b(0, 0)));
            continue;
        }
        Eigen::JacobiSVD<Matrix> svd(b);
        norm = std::max(norm, svd.singularValues()(0));
    }
    return norm;
}

double trace_norm(const AlgebraElement& a) {
    double norm = 0.0;
    for (const Matrix& b : a.blocks()) {
        if (b.size() == 1) {
            norm += std::abs(b(0, 0));
            continue;
        }
        Eigen::JacobiSVD<Matrix> svd(b);
        norm += svd.singularValues().sum();
    }
    return norm;
}

AlgebraElement multiply(const AlgebraElement& x, const AlgebraElement& y) {
    require_same_structure(x, y, "multiply");
    std::vector<Matrix> out;
    out.reserve(x.blocks().size());
    for (int k = 0; k < x.structure().blocks(); ++k) {
        out.push_back(x.block(k) * y.block(k));
    }
    return AlgebraElement(x.structure(), std::move(out));
}

Complex trace_pairing(const AlgebraElement& x, const AlgebraElement& y) {
    require_same_structure(x, y, "trace_pairing");
    Complex t = 0.0;
    for (int k = 0; k < x.structure().blocks(); ++k) {
        t += (x.block(k).adjoint() * y.block(k)).trace();
    }
    return t;
}

Matrix kronecker(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

double hermiticity_defect(const AlgebraElement& a) {
    return operator_norm(a - a.adjoint());
}

bool is_hermitian(const AlgebraElement& a, double tol) {
    const double scale = operator_norm(a);
    if (scale == 0.0) return true;
    return hermiticity_defect(a) <= tol * scale;
}

bool is_positive_element(const AlgebraElement& a, double tol) {
    const double scale = operator_norm(a);
    if (scale == 0.0) return true;
    if (hermiticity_defect(a) > std::max(tol, 1e-10 * scale)) {
        throw DomainError("is_positive_element: input is not Hermitian at the given tolerance");
    }
    for (const Matrix& b : a.blocks()) {
        const Matrix h = 0.5 * (b + b.adjoint());
        Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success) {
            throw NumericalError("is_positive_element: eigensolver failed");
        }
        if (es.eigenvalues().minCoeff() < -tol) return false;
    }
    return true;
}

State::State(BlockStructure structure, AlgebraElement density, double tol)
    : structure_(std::move(structure)), density_(std::move(density)) {
    if (density_.structure() != structure_) {
        throw StructuralError("State: density structure mismatch");
    }
    if (!is_positive_element(density_, tol)) {
        throw DomainError("State: density is not positive semidefinite");
    }
    const double tr = density_.trace().real();
    if (std::abs(tr - 1.0) > tol || std::abs(density_.trace().imag()) > tol) {
        throw DomainError("State: density trace must equal 1");
    }
}

Complex State::operator()(const AlgebraElement& a) const {
    // density is Hermitian, so the sesquilinear pairing reduces to Σ tr(ρ_k a_k).
    return trace_pairing(density_, a);
}

void ToleranceConfig::validate() const {
    if (peripheral_tol <= 0.0 || idempotent_tol <= 0.0 || psd_floor <= 0.0 ||
        convergence_target <= 0.0) {
        throw DomainError("ToleranceConfig: all tolerances must be strictly positive");
    }
    if (peripheral_tol >= 1.0) {
        throw DomainError("ToleranceConfig: peripheral_tol must be < 1");
    }
}

} // namespace cpasym
