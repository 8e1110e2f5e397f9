// asymptotics.cpp — E, Q = P∘E, the Choi–Effros structure on range(E),
// Kuperberg subsequence limits, mixing detection, and conjugacy witnesses.

#include "cpasym/asymptotics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "cpasym/generators.hpp"

namespace cpasym {

namespace {

constexpr std::uint64_t kSamplingSeed = 0x9e3779b97f4a7c15ull;

Matrix matrix_power(const Matrix& m, long n) {
    Matrix result = Matrix::Identity(m.rows(), m.cols());
    Matrix base = m;
    long e = n;
    while (e > 0) {
        if (e & 1) result = result * base;
        e >>= 1;
        if (e > 0) base = base * base;
    }
    return result;
}

double spectral_norm(const Matrix& m) {
    if (m.size() == 1) return std::abs(m(0, 0));
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

Vector random_complex_vector(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector v(n);
    for (int i = 0; i < n; ++i) v(i) = Complex(gauss(rng), gauss(rng));
    return v;
}

// Hermitian trace-orthonormal basis of the subspace spanned by the orthonormal
// columns of V, found as the fixed space of the adjoint involution restricted
// to span(V). Requires span(V) to be closed under x ↦ x†.
std::pair<std::vector<AlgebraElement>, Matrix>
hermitian_basis(const BlockStructure& s, const Matrix& v) {
    const int n = static_cast<int>(v.rows());
    const int p = static_cast<int>(v.cols());

    // w.col(i) = coordinates of devectorize(v.col(i))†.
    Matrix w(n, p);
    for (int i = 0; i < p; ++i) {
        w.col(i) = vectorize(devectorize(s, v.col(i)).adjoint());
    }

    // x = V(a + ib) is Hermitian iff (V − W)a + i(V + W)b = 0; solve the
    // 2n × 2p real system for its nullspace.
    const Matrix diff = v - w;
    const Matrix sum = v + w;
    RealMatrix sys(2 * n, 2 * p);
    sys.block(0, 0, n, p) = diff.real();
    sys.block(0, p, n, p) = -sum.imag();
    sys.block(n, 0, n, p) = diff.imag();
    sys.block(n, p, n, p) = sum.real();

    Eigen::JacobiSVD<RealMatrix> svd(sys, Eigen::ComputeFullV);
    const RealVector& sv = svd.singularValues();
    const double floor = 1e-8 * std::max(1.0, sv.size() > 0 ? sv(0) : 1.0);
    int nullity = 0;
    for (Eigen::Index i = sv.size(); i-- > 0;) {
        if (sv(i) <= floor) ++nullity;
        else break;
    }
    if (nullity < p) {
        throw NumericalError("hermitian_basis: range is not closed under the adjoint "
                             "(Hermitian part too small)");
    }

    std::vector<AlgebraElement> basis;
    basis.reserve(static_cast<std::size_t>(p));
    Matrix coords(n, p);
    for (int i = 0; i < p; ++i) {
        const RealVector real_c = svd.matrixV().col(2 * p - 1 - i);
        Vector c(p);
        for (int j = 0; j < p; ++j) c(j) = Complex(real_c(j), real_c(p + j));
        AlgebraElement b = devectorize(s, v * c);
        b = (b + b.adjoint()) * Complex(0.5, 0.0);  // scrub rounding drift
        const Vector bc = vectorize(b);
        const double norm = bc.norm();
        if (norm < 1e-10) {
            throw NumericalError("hermitian_basis: degenerate basis candidate");
        }
        coords.col(i) = bc / norm;
        basis.push_back(devectorize(s, coords.col(i)));
    }
    return {std::move(basis), std::move(coords)};
}

// •-product in coordinates: bilinear extension of the structure constants.
Vector bullet(const std::vector<Matrix>& sc, const Vector& u, const Vector& v) {
    const int p = static_cast<int>(u.size());
    Vector out(p);
    for (int k = 0; k < p; ++k) {
        out(k) = u.transpose() * sc[static_cast<std::size_t>(k)] * v;
    }
    return out;
}

void require_completely_positive(const CpMap& P, const char* op) {
    bool cp;
    if (P.flags().completely_positive.has_value()) {
        cp = *P.flags().completely_positive;
    } else {
        cp = is_completely_positive(P);
    }
    if (!cp) {
        std::ostringstream msg;
        msg << op << ": the map is not completely positive";
        throw DomainError(msg.str());
    }
}

} // namespace

long stability_horizon(double gap, int coord_dim, double target, long cap) {
    // The eigenvalue rate alone understates the horizon when the decaying part
    // is defective (a nilpotent tail can persist for up to coord_dim steps
    // while every eigenvalue is already below target), so the dimension is a
    // floor on the answer.
    const long floor_n = std::clamp<long>(coord_dim, 1, cap);
    if (gap >= 1.0 - 1e-15) return floor_n;
    const double steps = std::log(target) / std::log1p(-gap);
    const long n = static_cast<long>(std::ceil(steps));
    return std::clamp<long>(std::max(n, floor_n), 1, cap);
}

AsymptoticDecomposition asymptotic_decomposition(const CpMap& P,
                                                 const ToleranceConfig& cfg) {
    const SpectralDecomposition dec = spectral_decomposition(P, cfg);
    if (dec.peripheral_indices.empty()) {
        throw DomainError("asymptotic_decomposition: no peripheral spectrum; "
                          "the powers of the map tend to zero");
    }
    if (!check_peripheral_semisimple(dec)) {
        throw SemisimplicityError("asymptotic_decomposition: peripheral spectrum is "
                                  "defective");
    }
    const InvariantSplit split =
        split_invariant(dec.schur_u, dec.schur_t, dec.peripheral_at_schur);

    MapFlags eflags;
    eflags.completely_positive = P.flags().completely_positive;
    eflags.unital = P.flags().unital;
    eflags.contraction = P.flags().contraction;
    CpMap e_map(P.structure(), split.projection, eflags);
    CpMap q_map = compose(P, e_map);

    AsymptoticDecomposition out{P, e_map, std::move(q_map), {}, split.basis,
                                split.basis.adjoint() * P.superop() * split.basis,
                                dec.gap};

    // Peripheral eigenpairs from the restricted triangular factor.
    Eigen::ComplexEigenSolver<Matrix> es(split.restricted);
    if (es.info() != Eigen::Success) {
        throw NumericalError("asymptotic_decomposition: peripheral eigensolver failed");
    }
    const int p = static_cast<int>(split.restricted.rows());
    std::vector<int> order(static_cast<std::size_t>(p));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&es](int a, int b) {
        return std::arg(es.eigenvalues()(a)) < std::arg(es.eigenvalues()(b));
    });
    for (int idx : order) {
        Vector coords = split.basis * es.eigenvectors().col(idx);
        coords /= coords.norm();
        // fix the phase on the largest coordinate for reproducible output
        Eigen::Index piv = 0;
        coords.cwiseAbs().maxCoeff(&piv);
        const Complex ph = coords(piv) / std::abs(coords(piv));
        coords /= ph;
        out.peripheral_pairs.emplace_back(es.eigenvalues()(idx),
                                          devectorize(P.structure(), coords));
    }
    return out;
}

AsymptoticDecomposition decomposition_with_idempotent(const CpMap& P, const CpMap& E,
                                                      const ToleranceConfig& cfg) {
    cfg.validate();
    if (P.structure() != E.structure()) {
        throw StructuralError("decomposition_with_idempotent: structure mismatch");
    }
    const BlockStructure& s = P.structure();
    const Matrix& se = E.superop();
    if (map_norm(s, se * se - se) > 1e-6) {
        throw DomainError("decomposition_with_idempotent: the supplied map is not an "
                          "idempotent");
    }

    Eigen::ColPivHouseholderQR<Matrix> qr(se);
    qr.setThreshold(1e-8);
    const int p = static_cast<int>(qr.rank());
    if (p == 0) {
        throw DomainError("decomposition_with_idempotent: idempotent has trivial range");
    }
    const Matrix q_full = qr.householderQ();
    const Matrix basis = q_full.leftCols(p);

    CpMap q_map = compose(P, E);
    AsymptoticDecomposition out{P, E, std::move(q_map), {}, basis,
                                basis.adjoint() * P.superop() * basis,
                                spectral_decomposition(P, cfg).gap};

    Eigen::ComplexEigenSolver<Matrix> es(out.alpha_matrix);
    if (es.info() != Eigen::Success) {
        throw NumericalError("decomposition_with_idempotent: alpha eigensolver failed");
    }
    std::vector<int> order(static_cast<std::size_t>(p));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&es](int a, int b) {
        return std::arg(es.eigenvalues()(a)) < std::arg(es.eigenvalues()(b));
    });
    for (int idx : order) {
        Vector coords = basis * es.eigenvectors().col(idx);
        coords /= coords.norm();
        Eigen::Index piv = 0;
        coords.cwiseAbs().maxCoeff(&piv);
        coords /= coords(piv) / std::abs(coords(piv));
        out.peripheral_pairs.emplace_back(es.eigenvalues()(idx), devectorize(s, coords));
    }
    return out;
}

KuperbergResult kuperberg_idempotent_detailed(const CpMap& P, double eps, long n_max,
                                              int subsequence) {
    if (eps <= 0.0) throw DomainError("kuperberg_idempotent: eps must be positive");
    require_completely_positive(P, "kuperberg_idempotent");
    const SpectralDecomposition dec = spectral_decomposition(P);
    if (dec.peripheral_indices.empty()) {
        throw DomainError("kuperberg_idempotent: no peripheral spectrum");
    }
    std::vector<Complex> lambdas;
    lambdas.reserve(dec.peripheral_indices.size());
    for (int idx : dec.peripheral_indices) {
        lambdas.push_back(dec.eigenvalues[static_cast<std::size_t>(idx)]);
    }

    const double phase_eps = std::min(eps / 16.0, 1e-10);
    long n = find_recurrence_time(lambdas, phase_eps, n_max);
    if (subsequence >= 2) {
        n = find_recurrence_time(lambdas, phase_eps, n_max, n + 1);
    }

    Matrix a = matrix_power(P.superop(), n);
    long power_count = n;
    double residual = 0.0;
    for (int iter = 0; iter < 50; ++iter) {
        const Matrix b = a * a;
        residual = map_norm(P.structure(), b - a);
        if (power_count < (1L << 55)) power_count *= 2;  // saturate, avoid overflow
        if (residual <= eps) {
            MapFlags flags;
            flags.completely_positive = P.flags().completely_positive;
            flags.unital = P.flags().unital;
            flags.contraction = P.flags().contraction;
            return KuperbergResult{CpMap(P.structure(), b, flags), n, power_count,
                                   residual};
        }
        a = b;
    }
    std::ostringstream msg;
    msg << "kuperberg_idempotent: residual " << residual
        << " after squaring budget; target " << eps;
    throw ConvergenceError(msg.str());
}

CpMap kuperberg_idempotent(const CpMap& P, double eps, long n_max) {
    return kuperberg_idempotent_detailed(P, eps, n_max, 1).E;
}

std::vector<double> convergence_profile(const CpMap& P, const CpMap& Q,
                                        const AlgebraElement& a, long n_max) {
    if (P.structure() != Q.structure() || P.structure() != a.structure()) {
        throw StructuralError("convergence_profile: structure mismatch");
    }
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n_max + 1));
    AlgebraElement ap = a;
    AlgebraElement aq = a;
    for (long n = 0; n <= n_max; ++n) {
        out.push_back(operator_norm(ap - aq));
        if (n < n_max) {
            ap = P(ap);
            aq = Q(aq);
        }
    }
    return out;
}

std::vector<double> predual_convergence_profile(const CpMap& P, const CpMap& Q,
                                                const State& rho, long n_max) {
    if (P.structure() != Q.structure() || P.structure() != rho.structure()) {
        throw StructuralError("predual_convergence_profile: structure mismatch");
    }
    const CpMap ps = predual_map(P);
    const CpMap qs = predual_map(Q);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n_max + 1));
    AlgebraElement rp = rho.density();
    AlgebraElement rq = rho.density();
    for (long n = 0; n <= n_max; ++n) {
        out.push_back(trace_norm(rp - rq));
        if (n < n_max) {
            rp = ps(rp);
            rq = qs(rq);
        }
    }
    return out;
}

ChoiEffrosAlgebra choi_effros_algebra(const AsymptoticDecomposition& dec) {
    const BlockStructure& s = dec.P.structure();
    ChoiEffrosAlgebra out;
    auto [basis, coords] = hermitian_basis(s, dec.range_basis);
    out.basis = std::move(basis);
    out.basis_coords = std::move(coords);

    const int p = static_cast<int>(out.basis_coords.cols());
    const Matrix& se = dec.E.superop();
    out.structure_constants.assign(static_cast<std::size_t>(p), Matrix::Zero(p, p));
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
            const AlgebraElement prod = multiply(out.basis[static_cast<std::size_t>(i)],
                                                 out.basis[static_cast<std::size_t>(j)]);
            const Vector c = out.basis_coords.adjoint() * (se * vectorize(prod));
            for (int k = 0; k < p; ++k) {
                out.structure_constants[static_cast<std::size_t>(k)](i, j) = c(k);
            }
        }
    }
    out.unit_coords = out.basis_coords.adjoint() * (se * vectorize(identity_element(s)));
    out.alpha_matrix = out.basis_coords.adjoint() * dec.P.superop() * out.basis_coords;
    return out;
}

QuasiautomorphismReport verify_quasiautomorphism(const AsymptoticDecomposition& dec,
                                                 const ToleranceConfig& cfg) {
    cfg.validate();
    const BlockStructure& s = dec.P.structure();
    const ChoiEffrosAlgebra cea = choi_effros_algebra(dec);
    const Matrix& se = dec.E.superop();
    const Matrix& sq = dec.Q.superop();
    const Matrix& b = cea.basis_coords;
    const Matrix& alpha = cea.alpha_matrix;
    const int p = static_cast<int>(b.cols());

    QuasiautomorphismReport rep;

    rep.projection_residual =
        std::max(map_norm(s, sq * se - sq), map_norm(s, se * sq - sq));

    Eigen::ComplexEigenSolver<Matrix> es(alpha, false);
    if (es.info() != Eigen::Success) {
        throw NumericalError("verify_quasiautomorphism: alpha eigensolver failed");
    }
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        rep.alpha_unimodularity = std::max(
            rep.alpha_unimodularity, std::abs(std::abs(es.eigenvalues()(i)) - 1.0));
    }
    {
        Eigen::JacobiSVD<Matrix> svd(alpha);
        rep.alpha_min_singular = svd.singularValues()(p - 1);
    }

    // α as •-homomorphism and the involution compatibility on the basis.
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
            Vector eij = Vector::Zero(p);
            eij(i) = 1.0;
            Vector ej = Vector::Zero(p);
            ej(j) = 1.0;
            const Vector lhs = alpha * bullet(cea.structure_constants, eij, ej);
            const Vector rhs =
                bullet(cea.structure_constants, alpha.col(i), alpha.col(j));
            rep.homomorphism_residual =
                std::max(rep.homomorphism_residual, (lhs - rhs).norm());
        }
        const AlgebraElement img = dec.P(cea.basis[static_cast<std::size_t>(i)]);
        rep.involution_residual =
            std::max(rep.involution_residual, operator_norm(img - img.adjoint()));
    }

    // Qⁿ = αⁿ∘E on sampled n.
    for (long n : {1L, 2L, 3L, 5L, 8L}) {
        const Matrix lhs = matrix_power(sq, n);
        const Matrix rhs = b * matrix_power(alpha, n) * b.adjoint() * se;
        rep.power_residual = std::max(rep.power_residual, map_norm(s, lhs - rhs));
    }

    // Isometry of α on range(E), levels 1 and 2 (amplified by id₂⊗P).
    std::mt19937_64 rng(kSamplingSeed);
    for (int trial = 0; trial < 8; ++trial) {
        const Vector x = se * random_complex_vector(s.coord_dim(), rng);
        const AlgebraElement el = devectorize(s, x);
        const double nx = operator_norm(el);
        if (nx < 1e-12) continue;
        rep.isometry_residual_level1 = std::max(
            rep.isometry_residual_level1, std::abs(operator_norm(dec.P(el)) - nx) / nx);
    }
    {
        const BlockStructure m2({2});
        const CpMap amplified = gen::tensor_map(identity_map(m2), dec.P);
        const CpMap amplified_e = gen::tensor_map(identity_map(m2), dec.E);
        const BlockStructure& s2 = amplified.structure();
        for (int trial = 0; trial < 8; ++trial) {
            const Vector x =
                amplified_e.superop() * random_complex_vector(s2.coord_dim(), rng);
            const AlgebraElement el = devectorize(s2, x);
            const double nx = operator_norm(el);
            if (nx < 1e-12) continue;
            rep.isometry_residual_level2 =
                std::max(rep.isometry_residual_level2,
                         std::abs(operator_norm(amplified(el)) - nx) / nx);
        }
    }

    const auto check = [&rep](bool ok, const char* what) {
        if (!ok) rep.failures.emplace_back(what);
    };
    check(rep.projection_residual <= 1e-9, "Q-E projection identities");
    check(rep.alpha_unimodularity <= 1e-8, "alpha spectrum unimodular");
    check(rep.alpha_min_singular >= 1e-8, "alpha invertible");
    check(rep.homomorphism_residual <= 1e-9, "alpha bullet-homomorphism");
    check(rep.involution_residual <= 1e-9, "alpha involution compatibility");
    check(rep.power_residual <= 1e-8, "Q^n = alpha^n E");
    check(rep.isometry_residual_level1 <= 1e-8, "alpha isometric on range(E)");
    check(rep.isometry_residual_level2 <= 1e-8, "alpha isometric at level 2");
    rep.passed = rep.failures.empty();
    return rep;
}

UniquenessReport idempotent_uniqueness_check(const CpMap& P, const ToleranceConfig& cfg) {
    cfg.validate();
    const SpectralDecomposition dec = spectral_decomposition(P, cfg);
    const CpMap e_spec = peripheral_projection(dec);

    const double kuperberg_eps = 1e-9;
    const long n_max = 1000000;
    const KuperbergResult k1 = kuperberg_idempotent_detailed(P, kuperberg_eps, n_max, 1);
    const KuperbergResult k2 = kuperberg_idempotent_detailed(P, kuperberg_eps, n_max, 2);

    UniquenessReport rep;
    rep.recurrence_time_1 = k1.recurrence_time;
    rep.recurrence_time_2 = k2.recurrence_time;
    rep.spectral_vs_kuperberg = map_sup_difference(e_spec, k1.E);
    rep.spectral_vs_second = map_sup_difference(e_spec, k2.E);
    rep.kuperberg_vs_second = map_sup_difference(k1.E, k2.E);

    const Matrix& se = e_spec.superop();
    rep.idempotent_residual = map_norm(P.structure(), se * se - se);
    rep.commutation_residual =
        map_norm(P.structure(), se * P.superop() - P.superop() * se);
    const AlgebraElement one = identity_element(P.structure());
    rep.unital_residual = operator_norm(e_spec(one) - one);
    rep.choi_min_eigenvalue = choi_min_eigenvalue(e_spec);

    const bool p_unital = is_unital(P, 1e-9);
    const auto check = [&rep](bool ok, const char* what) {
        if (!ok) rep.failures.emplace_back(what);
    };
    check(rep.spectral_vs_kuperberg <= cfg.convergence_target, "spectral vs kuperberg E");
    check(rep.spectral_vs_second <= cfg.convergence_target, "spectral vs second E");
    check(rep.kuperberg_vs_second <= cfg.convergence_target, "kuperberg vs second E");
    check(rep.idempotent_residual <= cfg.idempotent_tol, "E idempotent");
    check(rep.commutation_residual <= cfg.idempotent_tol, "E commutes with P");
    if (p_unital) check(rep.unital_residual <= 1e-9, "E unital");
    check(rep.choi_min_eigenvalue >= -1e-10, "E completely positive");
    rep.passed = rep.failures.empty();
    return rep;
}

std::optional<State> detect_mixing(const CpMap& P, const ToleranceConfig& cfg) {
    cfg.validate();
    if (!is_unital(P, 1e-8)) {
        throw DomainError("detect_mixing: map is not unital");
    }
    const SpectralDecomposition dec = spectral_decomposition(P, cfg);
    if (dec.peripheral_indices.size() != 1) return std::nullopt;
    const Complex lambda =
        dec.eigenvalues[static_cast<std::size_t>(dec.peripheral_indices[0])];
    if (std::abs(lambda - 1.0) > 1e-6) return std::nullopt;

    const CpMap e_map = peripheral_projection(dec);
    const AlgebraElement one = identity_element(P.structure());
    if (operator_norm(e_map(one) - one) > 1e-8) return std::nullopt;

    // E(a) = ω(a)·1, so the predual of E sends every state to ω's density.
    const BlockStructure& s = P.structure();
    const double d_total = static_cast<double>(s.total_dim());
    const Vector sigma = vectorize(one * Complex(1.0 / d_total, 0.0));
    AlgebraElement density = devectorize(s, e_map.superop().adjoint() * sigma);
    density = (density + density.adjoint()) * Complex(0.5, 0.0);

    // Clip rounding-level negative eigenvalues and renormalize the trace.
    std::vector<Matrix> blocks;
    blocks.reserve(density.blocks().size());
    for (const Matrix& blk : density.blocks()) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(blk);
        if (es.info() != Eigen::Success) {
            throw NumericalError("detect_mixing: density eigensolver failed");
        }
        RealVector vals = es.eigenvalues();
        for (Eigen::Index i = 0; i < vals.size(); ++i) {
            if (vals(i) < 0.0) {
                if (vals(i) < -1e-8) {
                    throw NumericalError("detect_mixing: invariant functional is not "
                                         "positive");
                }
                vals(i) = 0.0;
            }
        }
        blocks.push_back(es.eigenvectors() * vals.asDiagonal().toDenseMatrix().cast<Complex>() *
                         es.eigenvectors().adjoint());
    }
    AlgebraElement clipped(s, std::move(blocks));
    const double tr = clipped.trace().real();
    if (tr <= 0.0) {
        throw NumericalError("detect_mixing: invariant functional has zero trace");
    }
    clipped = clipped * Complex(1.0 / tr, 0.0);
    return State(s, clipped, 1e-8);
}

Factorization factorization(const AsymptoticDecomposition& dec) {
    ChoiEffrosAlgebra cea = choi_effros_algebra(dec);
    Factorization out{std::move(cea), {}, {}, {}, dec.E};
    out.theta = out.algebra.basis_coords.adjoint() * dec.E.superop();
    out.theta_star = out.algebra.basis_coords;
    out.beta = out.algebra.alpha_matrix;
    const int p = static_cast<int>(out.theta_star.cols());
    const double residual =
        (out.theta * out.theta_star - Matrix::Identity(p, p)).norm();
    if (residual > 1e-8) {
        throw NumericalError("factorization: theta∘theta_* deviates from the identity");
    }
    return out;
}

ConjugacyReport conjugacy_witness(const Factorization& f1, const Factorization& f2,
                                  double tol) {
    if (f1.theta.cols() != f2.theta.cols() ||
        f1.theta_star.cols() != f2.theta_star.cols()) {
        throw StructuralError("conjugacy_witness: factorizations have different shapes");
    }
    ConjugacyReport rep;
    rep.phi = f2.theta * f1.theta_star;
    rep.intertwining_residual = spectral_norm(rep.phi * f1.beta - f2.beta * rep.phi);

    const int p = static_cast<int>(rep.phi.cols());
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
            Vector ei = Vector::Zero(p);
            ei(i) = 1.0;
            Vector ej = Vector::Zero(p);
            ej(j) = 1.0;
            const Vector lhs = rep.phi * bullet(f1.algebra.structure_constants, ei, ej);
            const Vector rhs = bullet(f2.algebra.structure_constants, rep.phi.col(i),
                                      rep.phi.col(j));
            rep.product_residual = std::max(rep.product_residual, (lhs - rhs).norm());
        }
    }
    Eigen::JacobiSVD<Matrix> svd(rep.phi);
    rep.min_singular = svd.singularValues()(p - 1);
    rep.passed = rep.intertwining_residual <= tol &&
                 rep.product_residual <= std::max(tol, 1e-8) &&
                 rep.min_singular >= 1e-8;
    return rep;
}

OrbitCompactnessReport orbit_compactness_diagnostic(const CpMap& P,
                                                    const AlgebraElement& a,
                                                    int span_order, double eps) {
    if (span_order < 0) throw DomainError("orbit_compactness_diagnostic: N must be >= 0");
    const BlockStructure& s = P.structure();
    const int n = s.coord_dim();

    Matrix orbit(n, span_order + 1);
    Vector x = vectorize(a);
    for (int j = 0; j <= span_order; ++j) {
        orbit.col(j) = x;
        x = P.superop() * x;
    }

    Eigen::ColPivHouseholderQR<Matrix> qr(orbit);
    qr.setThreshold(1e-12);
    const int rank = static_cast<int>(qr.rank());
    const Matrix q_full = qr.householderQ();
    const Matrix q = q_full.leftCols(rank);

    OrbitCompactnessReport rep;
    rep.span_order = span_order;
    rep.eps = eps;
    rep.within_eps = true;
    x = vectorize(a);
    const long horizon = 4L * std::max(span_order, 1);
    for (long m = 0; m <= horizon; ++m) {
        const double residual = (x - q * (q.adjoint() * x)).norm();
        rep.residuals.push_back(residual);
        if (residual > eps) rep.within_eps = false;
        x = P.superop() * x;
    }
    return rep;
}

} // namespace cpasym
