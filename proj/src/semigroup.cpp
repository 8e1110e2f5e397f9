// semigroup.cpp — exp(tL), generator spectral splitting, consistency checks.

#include "cpasym/semigroup.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <sstream>

namespace cpasym::sg {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

// Schur data of the generator plus the imaginary-axis selection.
struct GeneratorSplit {
    Matrix schur_u;
    Matrix schur_t;
    std::vector<Complex> eigenvalues;  // by Schur position
    std::vector<bool> on_axis;
};

GeneratorSplit generator_split(const SemigroupGenerator& L, double tol) {
    Eigen::ComplexSchur<Matrix> schur(L.generator);
    if (schur.info() != Eigen::Success) {
        throw NumericalError("semigroup: Schur factorization of the generator failed");
    }
    GeneratorSplit out;
    out.schur_u = schur.matrixU();
    out.schur_t = schur.matrixT();
    const int n = static_cast<int>(out.schur_t.rows());
    out.eigenvalues.reserve(static_cast<std::size_t>(n));
    out.on_axis.assign(static_cast<std::size_t>(n), false);
    for (int i = 0; i < n; ++i) {
        const Complex lambda = out.schur_t(i, i);
        if (lambda.real() > tol) {
            std::ostringstream msg;
            msg << "semigroup: generator eigenvalue with Re = " << lambda.real()
                << " lies in the open right half-plane";
            throw DomainError(msg.str());
        }
        out.eigenvalues.push_back(lambda);
        out.on_axis[static_cast<std::size_t>(i)] = std::abs(lambda.real()) <= tol;
    }
    return out;
}

} // namespace

SemigroupGenerator gkls_generator(const AlgebraElement& hamiltonian,
                                  const std::vector<AlgebraElement>& jumps) {
    const BlockStructure& s = hamiltonian.structure();
    if (!is_hermitian(hamiltonian, 1e-10)) {
        throw DomainError("gkls_generator: Hamiltonian must be Hermitian");
    }
    for (const AlgebraElement& v : jumps) {
        if (v.structure() != s) {
            throw StructuralError("gkls_generator: jump operator structure mismatch");
        }
    }

    Matrix superop = Matrix::Zero(s.coord_dim(), s.coord_dim());
    const Complex iu(0.0, 1.0);
    for (int k = 0; k < s.blocks(); ++k) {
        const int d = s.dim(k);
        const Matrix id = Matrix::Identity(d, d);
        const Matrix& h = hamiltonian.block(k);
        // vec(Xa) = (I ⊗ X)vec(a), vec(aY) = (Yᵀ ⊗ I)vec(a)
        Matrix blk = iu * (kronecker(id, h) - kronecker(h.transpose(), id));
        for (const AlgebraElement& v : jumps) {
            const Matrix& vk = v.block(k);
            const Matrix vv = vk.adjoint() * vk;
            blk += kronecker(vk.transpose(), vk.adjoint()) -
                   0.5 * kronecker(id, vv) - 0.5 * kronecker(vv.transpose(), id);
        }
        const int c = s.coord_offset(k);
        superop.block(c, c, d * d, d * d) = blk;
    }

    const Vector unit_image = superop * vectorize(identity_element(s));
    if (unit_image.norm() > 1e-10 * std::max(1.0, superop.norm())) {
        throw NumericalError("gkls_generator: L(1) != 0 after assembly");
    }
    return SemigroupGenerator{s, std::move(superop), GeneratorForm::gkls};
}

SemigroupGenerator raw_generator(const BlockStructure& structure, Matrix superop,
                                 double tol) {
    if (superop.rows() != structure.coord_dim() ||
        superop.cols() != structure.coord_dim()) {
        throw StructuralError("raw_generator: superoperator must be coord_dim x coord_dim");
    }
    SemigroupGenerator out{structure, std::move(superop), GeneratorForm::raw};
    generator_split(out, tol);  // validates the half-plane condition
    return out;
}

CpMap exponentiate(const SemigroupGenerator& L, double t) {
    if (t < 0.0) throw DomainError("exponentiate: t must be nonnegative");
    const Matrix exp_tl = (t * L.generator).exp();
    if (!exp_tl.allFinite()) {
        throw DomainError("exponentiate: matrix exponential overflowed");
    }
    MapFlags flags;
    if (L.form == GeneratorForm::gkls) {
        flags.completely_positive = true;
        flags.unital = true;
        flags.contraction = true;
    }
    return CpMap(L.structure, exp_tl, flags);
}

double spectral_abscissa_gap(const SemigroupGenerator& L, double tol) {
    Eigen::ComplexEigenSolver<Matrix> es(L.generator, false);
    if (es.info() != Eigen::Success) {
        throw NumericalError("spectral_abscissa_gap: eigensolver failed");
    }
    double gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double re = es.eigenvalues()(i).real();
        if (re < -tol) gap = std::min(gap, -re);
    }
    return gap;
}

AsymptoticDecomposition semigroup_asymptotics(const SemigroupGenerator& L,
                                              const ToleranceConfig& cfg) {
    cfg.validate();
    const GeneratorSplit gs = generator_split(L, cfg.peripheral_tol);

    std::vector<Complex> axis_values;
    for (std::size_t i = 0; i < gs.eigenvalues.size(); ++i) {
        if (gs.on_axis[i]) axis_values.push_back(gs.eigenvalues[i]);
    }
    if (axis_values.empty()) {
        throw DomainError("semigroup_asymptotics: no imaginary-axis spectrum; the "
                          "semigroup tends to zero");
    }
    if (!check_selected_semisimple(L.generator, axis_values)) {
        throw SemisimplicityError("semigroup_asymptotics: defective imaginary-axis "
                                  "eigenvalue");
    }

    const InvariantSplit split = split_invariant(gs.schur_u, gs.schur_t, gs.on_axis);
    CpMap p_map = exponentiate(L, 1.0);
    MapFlags eflags;
    eflags.completely_positive = p_map.flags().completely_positive;
    eflags.unital = p_map.flags().unital;
    eflags.contraction = p_map.flags().contraction;
    CpMap e_map(L.structure, split.projection, eflags);
    CpMap q_map = compose(p_map, e_map);

    const double g = spectral_abscissa_gap(L, cfg.peripheral_tol);
    const double gap = std::isinf(g) ? 1.0 : 1.0 - std::exp(-g);

    AsymptoticDecomposition out{p_map, e_map, std::move(q_map), {}, split.basis,
                                split.basis.adjoint() * p_map.superop() * split.basis,
                                gap};

    Eigen::ComplexEigenSolver<Matrix> es(split.restricted);
    if (es.info() != Eigen::Success) {
        throw NumericalError("semigroup_asymptotics: restricted eigensolver failed");
    }
    for (Eigen::Index j = 0; j < es.eigenvalues().size(); ++j) {
        Vector coords = split.basis * es.eigenvectors().col(j);
        coords /= coords.norm();
        Eigen::Index piv = 0;
        coords.cwiseAbs().maxCoeff(&piv);
        coords /= coords(piv) / std::abs(coords(piv));
        out.peripheral_pairs.emplace_back(es.eigenvalues()(j),
                                          devectorize(L.structure, coords));
    }
    return out;
}

std::vector<double> semigroup_convergence_profile(const SemigroupGenerator& L,
                                                  const AsymptoticDecomposition& dec,
                                                  const AlgebraElement& a,
                                                  const std::vector<double>& t_grid) {
    if (a.structure() != L.structure) {
        throw StructuralError("semigroup_convergence_profile: element structure mismatch");
    }
    double prev = -1.0;
    for (double t : t_grid) {
        if (t < 0.0 || t < prev) {
            throw DomainError("semigroup_convergence_profile: grid must be nonnegative "
                              "ascending");
        }
        prev = t;
    }
    const Vector tail = vectorize(a) - dec.E.superop() * vectorize(a);
    std::vector<double> out;
    out.reserve(t_grid.size());
    for (double t : t_grid) {
        const Matrix exp_tl = (t * L.generator).exp();
        out.push_back(operator_norm(devectorize(L.structure, exp_tl * tail)));
    }
    return out;
}

ConsistencyReport discretization_consistency(const SemigroupGenerator& L, double s,
                                             const ToleranceConfig& cfg, double tol) {
    if (s <= 0.0) throw DomainError("discretization_consistency: s must be positive");
    const AsymptoticDecomposition continuous = semigroup_asymptotics(L, cfg);
    const CpMap discrete_map = exponentiate(L, s);
    const AsymptoticDecomposition discrete = asymptotic_decomposition(discrete_map, cfg);

    ConsistencyReport rep;
    rep.e_difference = map_sup_difference(continuous.E, discrete.E);
    rep.within_tol = rep.e_difference <= tol;

    // Aliasing guard: distinct axis eigenvalues folding onto the same point of
    // the unit circle under t ↦ e^{st}.
    std::vector<Complex> axis;
    for (const auto& pair : continuous.peripheral_pairs) axis.push_back(pair.first);
    for (std::size_t i = 0; i < axis.size(); ++i) {
        for (std::size_t j = i + 1; j < axis.size(); ++j) {
            if (std::abs(axis[i] - axis[j]) <= 1e-8) continue;
            const double ratio = (axis[i].imag() - axis[j].imag()) * s / kTwoPi;
            const double nearest = std::round(ratio);
            if (nearest != 0.0 && std::abs(ratio - nearest) <= 1e-8) {
                rep.aliasing = true;
                rep.aliased_pairs.emplace_back(axis[i], axis[j]);
            }
        }
    }
    return rep;
}

} // namespace cpasym::sg
