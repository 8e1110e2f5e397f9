// cpmap.cpp — Superoperator assembly, Choi test, composition, predual.

#include "cpasym/cpmap.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <sstream>
#include <utility>

namespace cpasym {

namespace {

// Largest singular value of a square complex matrix.
double spectral_norm(const Matrix& m) {
    if (m.size() == 1) return std::abs(m(0, 0));
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

// Off-block mass of a D × D matrix relative to the block-diagonal pattern.
double off_block_mass(const BlockStructure& s, const Matrix& m) {
    Matrix residual = m;
    for (int k = 0; k < s.blocks(); ++k) {
        const int off = s.space_offset(k);
        residual.block(off, off, s.dim(k), s.dim(k)).setZero();
    }
    return residual.norm();
}

void require_same_structure(const CpMap& P, const CpMap& R, const char* op) {
    if (P.structure() != R.structure()) {
        std::ostringstream msg;
        msg << op << ": block structure mismatch";
        throw StructuralError(msg.str());
    }
}

} // namespace

CpMap::CpMap(BlockStructure structure, Matrix superop, MapFlags flags,
             std::vector<Matrix> kraus)
    : structure_(std::move(structure)),
      superop_(std::move(superop)),
      flags_(flags),
      kraus_(std::move(kraus)) {
    if (superop_.rows() != structure_.coord_dim() || superop_.cols() != structure_.coord_dim()) {
        throw StructuralError("CpMap: superoperator must be coord_dim x coord_dim");
    }
    for (const Matrix& a : kraus_) {
        if (a.rows() != structure_.total_dim() || a.cols() != structure_.total_dim()) {
            throw StructuralError("CpMap: Kraus matrices must be total_dim x total_dim");
        }
    }
}

AlgebraElement CpMap::operator()(const AlgebraElement& a) const {
    if (a.structure() != structure_) {
        throw StructuralError("CpMap: element structure mismatch");
    }
    return devectorize(structure_, superop_ * vectorize(a));
}

CpMap identity_map(const BlockStructure& structure) {
    MapFlags flags;
    flags.completely_positive = true;
    flags.unital = true;
    flags.contraction = true;
    return CpMap(structure, Matrix::Identity(structure.coord_dim(), structure.coord_dim()),
                 flags);
}

CpMap from_kraus(const BlockStructure& structure, const std::vector<Matrix>& kraus) {
    if (kraus.empty()) {
        throw DomainError("from_kraus: Kraus list must be nonempty");
    }
    const int D = structure.total_dim();
    for (const Matrix& a : kraus) {
        if (a.rows() != D || a.cols() != D) {
            throw StructuralError("from_kraus: Kraus matrices must be total_dim x total_dim");
        }
        const double off = off_block_mass(structure, a);
        if (off > 1e-12 * std::max(1.0, a.norm())) {
            throw DomainError("from_kraus: Kraus matrix has entries outside the block pattern");
        }
    }

    // Per block, vec(A† a A) = (Aᵀ ⊗ A†) vec(a); the superoperator is the
    // direct sum over blocks of these Kronecker factors, summed over Kraus terms.
    Matrix superop = Matrix::Zero(structure.coord_dim(), structure.coord_dim());
    for (const Matrix& a : kraus) {
        for (int k = 0; k < structure.blocks(); ++k) {
            const int d = structure.dim(k);
            const int off = structure.space_offset(k);
            const Matrix blk = a.block(off, off, d, d);
            const Matrix left = blk.transpose();
            const Matrix right = blk.adjoint();
            Matrix kron(d * d, d * d);
            for (int i = 0; i < d; ++i) {
                for (int j = 0; j < d; ++j) {
                    kron.block(i * d, j * d, d, d) = left(i, j) * right;
                }
            }
            const int c = structure.coord_offset(k);
            superop.block(c, c, d * d, d * d) += kron;
        }
    }

    MapFlags flags;
    flags.completely_positive = true;
    return CpMap(structure, std::move(superop), flags, kraus);
}

ChoiMatrix choi_matrix(const CpMap& P) {
    const BlockStructure& s = P.structure();
    const int D = s.total_dim();
    Matrix choi = Matrix::Zero(D * D, D * D);
    // Matrix units within a block are exactly the coordinate basis vectors, so
    // the image of each one is a column of the superoperator.
    for (int k = 0; k < s.blocks(); ++k) {
        const int d = s.dim(k);
        const int off = s.space_offset(k);
        for (int j = 0; j < d; ++j) {
            for (int i = 0; i < d; ++i) {
                const int col = s.coord_index(k, i, j);
                const Matrix image = embed(devectorize(s, P.superop().col(col)));
                const int gi = off + i;
                const int gj = off + j;
                for (int r = 0; r < D; ++r) {
                    for (int c = 0; c < D; ++c) {
                        choi(gi * D + r, gj * D + c) = image(r, c);
                    }
                }
            }
        }
    }
    ChoiMatrix out{s, std::move(choi), 0.0};
    out.hermiticity_defect = (out.matrix - out.matrix.adjoint()).norm();
    return out;
}

namespace {

double choi_min_eigenvalue_of(const ChoiMatrix& choi) {
    const Matrix h = 0.5 * (choi.matrix + choi.matrix.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
        throw NumericalError("choi_min_eigenvalue: Choi eigensolver failed");
    }
    return es.eigenvalues().minCoeff();
}

} // namespace

bool is_completely_positive(const CpMap& P, double tol) {
    const ChoiMatrix choi = choi_matrix(P);
    const double scale = std::max(1.0, choi.matrix.norm());
    if (choi.hermiticity_defect > 1e-10 * scale) return false;
    return choi_min_eigenvalue_of(choi) >= -tol;
}

double choi_min_eigenvalue(const CpMap& P) {
    return choi_min_eigenvalue_of(choi_matrix(P));
}

bool is_unital(const CpMap& P, double tol) {
    const AlgebraElement one = identity_element(P.structure());
    return operator_norm(P(one) - one) <= tol;
}

ContractionCheck contraction_check(const CpMap& P, double tol) {
    ContractionCheck out;
    bool cp = P.flags().completely_positive.value_or(false);
    if (!P.flags().completely_positive.has_value()) {
        cp = is_completely_positive(P, tol);
    }
    if (cp) {
        const AlgebraElement one = identity_element(P.structure());
        out.witness = operator_norm(P(one));
        out.contraction = out.witness <= 1.0 + tol;
        out.method = "unital-cp-norm";
        return out;
    }
    // Power-boundedness scan for maps outside the CP cone.
    const int budget = 4 * P.structure().coord_dim();
    Matrix pow = P.superop();
    out.method = "power-bounded-heuristic";
    out.contraction = true;
    for (int n = 1; n <= budget; ++n) {
        const double norm = spectral_norm(pow);
        out.witness = std::max(out.witness, norm);
        if (norm > 1.0 + tol * static_cast<double>(n)) {
            out.contraction = false;
            break;
        }
        if (n < budget) pow = pow * P.superop();
    }
    return out;
}

bool is_contraction(const CpMap& P, double tol) {
    return contraction_check(P, tol).contraction;
}

CpMap recompute_flags(const CpMap& P, double tol) {
    MapFlags flags;
    flags.completely_positive = is_completely_positive(P, tol);
    flags.unital = is_unital(P, tol);
    CpMap tagged(P.structure(), P.superop(), flags, P.kraus());
    flags.contraction = contraction_check(tagged, tol).contraction;
    return CpMap(P.structure(), P.superop(), flags, P.kraus());
}

CpMap compose(const CpMap& P, const CpMap& R) {
    require_same_structure(P, R, "compose");
    MapFlags flags;
    if (P.flags().completely_positive == true && R.flags().completely_positive == true) {
        flags.completely_positive = true;
    }
    if (P.flags().unital == true && R.flags().unital == true) flags.unital = true;
    if (P.flags().contraction == true && R.flags().contraction == true) {
        flags.contraction = true;
    }
    std::vector<Matrix> kraus;
    if (P.has_kraus() && R.has_kraus() &&
        P.kraus().size() * R.kraus().size() <= 64) {
        // (P∘R)(a) = Σ_ij (B_j A_i)† a (B_j A_i) for P = {A_i}, R = {B_j}.
        for (const Matrix& b : R.kraus()) {
            for (const Matrix& a : P.kraus()) {
                kraus.push_back(b * a);
            }
        }
    }
    return CpMap(P.structure(), P.superop() * R.superop(), flags, std::move(kraus));
}

CpMap power(const CpMap& P, long n) {
    if (n < 0) throw DomainError("power: exponent must be nonnegative");
    const int dim = P.structure().coord_dim();
    Matrix result = Matrix::Identity(dim, dim);
    Matrix base = P.superop();
    long e = n;
    while (e > 0) {
        if (e & 1) result = result * base;
        e >>= 1;
        if (e > 0) base = base * base;
    }
    MapFlags flags;
    if (n == 0) {
        flags.completely_positive = true;
        flags.unital = true;
        flags.contraction = true;
    } else {
        flags = P.flags();
    }
    return CpMap(P.structure(), std::move(result), flags);
}

AlgebraElement apply(const CpMap& P, const AlgebraElement& a) {
    return P(a);
}

CpMap predual_map(const CpMap& P) {
    MapFlags flags;
    flags.completely_positive = P.flags().completely_positive;
    std::vector<Matrix> kraus;
    kraus.reserve(P.kraus().size());
    for (const Matrix& a : P.kraus()) kraus.push_back(a.adjoint());
    return CpMap(P.structure(), P.superop().adjoint(), flags, std::move(kraus));
}

double map_norm(const BlockStructure& structure, const Matrix& superop_matrix) {
    if (superop_matrix.rows() != structure.coord_dim() ||
        superop_matrix.cols() != structure.coord_dim()) {
        throw StructuralError("map_norm: superoperator size mismatch");
    }
    double norm = 0.0;
    for (int c = 0; c < superop_matrix.cols(); ++c) {
        norm = std::max(norm, operator_norm(devectorize(structure, superop_matrix.col(c))));
    }
    return norm;
}

double map_sup_difference(const CpMap& P, const CpMap& R) {
    require_same_structure(P, R, "map_sup_difference");
    return map_norm(P.structure(), P.superop() - R.superop());
}

} // namespace cpasym
