// generators.cpp — Example-family constructors.

#include "cpasym/generators.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace cpasym::gen {

namespace {

std::vector<std::vector<int>> conjugacy_classes(const FiniteGroup& g) {
    const int n = g.order();
    std::vector<int> cls(static_cast<std::size_t>(n), -1);
    std::vector<std::vector<int>> classes;
    for (int x = 0; x < n; ++x) {
        if (cls[static_cast<std::size_t>(x)] >= 0) continue;
        const int id = static_cast<int>(classes.size());
        classes.emplace_back();
        for (int h = 0; h < n; ++h) {
            const int y = g.multiply(g.multiply(h, x), g.inverse(h));
            if (cls[static_cast<std::size_t>(y)] < 0) {
                cls[static_cast<std::size_t>(y)] = id;
                classes.back().push_back(y);
            }
        }
    }
    return classes;
}

// Left regular representation U_x e_y = e_{xy}.
Matrix left_regular(const FiniteGroup& g, int x) {
    const int n = g.order();
    Matrix u = Matrix::Zero(n, n);
    for (int y = 0; y < n; ++y) u(g.multiply(x, y), y) = 1.0;
    return u;
}

// Right regular representation R_x e_y = e_{yx}; commutes with every U_z.
Matrix right_regular(const FiniteGroup& g, int x) {
    const int n = g.order();
    Matrix r = Matrix::Zero(n, n);
    for (int y = 0; y < n; ++y) r(g.multiply(y, x), y) = 1.0;
    return r;
}

// Generic Hermitian combination of the given matrices and their adjoints.
Matrix generic_hermitian(const std::vector<Matrix>& parts, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> coeff(0.25, 1.75);
    Matrix out = Matrix::Zero(parts.front().rows(), parts.front().cols());
    for (const Matrix& m : parts) {
        const double re = coeff(rng);
        const double im = coeff(rng);
        out += re * (m + m.adjoint()) + Complex(0.0, im) * (m - m.adjoint());
    }
    return out;
}

std::vector<std::vector<int>> cluster_sorted(const RealVector& vals, double tol) {
    std::vector<std::vector<int>> clusters;
    for (int i = 0; i < vals.size(); ++i) {
        if (clusters.empty() || vals(i) - vals(clusters.back().back()) > tol) {
            clusters.push_back({i});
        } else {
            clusters.back().push_back(i);
        }
    }
    return clusters;
}

} // namespace

FiniteGroup::FiniteGroup(std::vector<std::vector<int>> table) : table_(std::move(table)) {
    order_ = static_cast<int>(table_.size());
    if (order_ < 1) throw DomainError("FiniteGroup: empty table");
    for (const auto& row : table_) {
        if (static_cast<int>(row.size()) != order_) {
            throw DomainError("FiniteGroup: table is not square");
        }
        for (int v : row) {
            if (v < 0 || v >= order_) throw DomainError("FiniteGroup: index out of range");
        }
    }
    // Latin square check.
    for (int i = 0; i < order_; ++i) {
        std::vector<bool> row_seen(static_cast<std::size_t>(order_), false);
        std::vector<bool> col_seen(static_cast<std::size_t>(order_), false);
        for (int j = 0; j < order_; ++j) {
            if (row_seen[static_cast<std::size_t>(table_[static_cast<std::size_t>(i)]
                                                        [static_cast<std::size_t>(j)])] ||
                col_seen[static_cast<std::size_t>(table_[static_cast<std::size_t>(j)]
                                                        [static_cast<std::size_t>(i)])]) {
                throw DomainError("FiniteGroup: table is not a Latin square");
            }
            row_seen[static_cast<std::size_t>(
                table_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)])] = true;
            col_seen[static_cast<std::size_t>(
                table_[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)])] = true;
        }
    }
    // Identity.
    identity_ = -1;
    for (int e = 0; e < order_; ++e) {
        bool ok = true;
        for (int x = 0; x < order_ && ok; ++x) {
            ok = multiply(e, x) == x && multiply(x, e) == x;
        }
        if (ok) {
            identity_ = e;
            break;
        }
    }
    if (identity_ < 0) throw DomainError("FiniteGroup: no identity element");
    // Associativity (full scan; orders here are small).
    if (order_ <= 12) {
        for (int a = 0; a < order_; ++a) {
            for (int b = 0; b < order_; ++b) {
                for (int c = 0; c < order_; ++c) {
                    if (multiply(multiply(a, b), c) != multiply(a, multiply(b, c))) {
                        throw DomainError("FiniteGroup: table is not associative");
                    }
                }
            }
        }
    }
    // Inverses.
    inverse_.assign(static_cast<std::size_t>(order_), -1);
    for (int x = 0; x < order_; ++x) {
        for (int y = 0; y < order_; ++y) {
            if (multiply(x, y) == identity_ && multiply(y, x) == identity_) {
                inverse_[static_cast<std::size_t>(x)] = y;
                break;
            }
        }
        if (inverse_[static_cast<std::size_t>(x)] < 0) {
            throw DomainError("FiniteGroup: element without inverse");
        }
    }
}

FiniteGroup FiniteGroup::cyclic(int n) {
    if (n < 1 || n > 12) throw DomainError("FiniteGroup::cyclic: order must be in [1, 12]");
    std::vector<std::vector<int>> table(static_cast<std::size_t>(n),
                                        std::vector<int>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = (i + j) % n;
        }
    }
    return FiniteGroup(std::move(table));
}

FiniteGroup FiniteGroup::symmetric3() {
    // Permutations of {0,1,2} listed as images (p[0], p[1], p[2]).
    const int perms[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1},
                             {0, 2, 1}, {2, 1, 0}, {1, 0, 2}};
    auto compose_index = [&perms](int a, int b) {
        int c[3];
        for (int i = 0; i < 3; ++i) c[i] = perms[a][perms[b][i]];
        for (int k = 0; k < 6; ++k) {
            if (perms[k][0] == c[0] && perms[k][1] == c[1] && perms[k][2] == c[2]) return k;
        }
        return -1;
    };
    std::vector<std::vector<int>> table(6, std::vector<int>(6));
    for (int a = 0; a < 6; ++a) {
        for (int b = 0; b < 6; ++b) {
            table[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
                compose_index(a, b);
        }
    }
    return FiniteGroup(std::move(table));
}

FiniteGroup FiniteGroup::dihedral4() {
    // Elements r^a s^b indexed a + 4b, with s·r = r⁻¹·s.
    auto index = [](int a, int b) { return (a % 4 + 4) % 4 + 4 * (b % 2); };
    std::vector<std::vector<int>> table(8, std::vector<int>(8));
    for (int a1 = 0; a1 < 4; ++a1) {
        for (int b1 = 0; b1 < 2; ++b1) {
            for (int a2 = 0; a2 < 4; ++a2) {
                for (int b2 = 0; b2 < 2; ++b2) {
                    // (r^a1 s^b1)(r^a2 s^b2) = r^{a1 + a2·(−1)^{b1}} s^{b1+b2}
                    const int a = b1 == 0 ? a1 + a2 : a1 - a2;
                    table[static_cast<std::size_t>(index(a1, b1))]
                         [static_cast<std::size_t>(index(a2, b2))] = index(a, b1 + b2);
                }
            }
        }
    }
    return FiniteGroup(std::move(table));
}

PositiveDefiniteFunction::PositiveDefiniteFunction(FiniteGroup g,
                                                   std::vector<Complex> vals,
                                                   double psd_floor)
    : group(std::move(g)), values(std::move(vals)) {
    if (static_cast<int>(values.size()) != group.order()) {
        throw DomainError("PositiveDefiniteFunction: value count must equal group order");
    }
    if (std::abs(values[static_cast<std::size_t>(group.identity())] - 1.0) > 1e-12) {
        throw DomainError("PositiveDefiniteFunction: phi(e) must equal 1");
    }
    const Matrix kernel = kernel_matrix();
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (kernel + kernel.adjoint()),
                                             Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
        throw NumericalError("PositiveDefiniteFunction: kernel eigensolver failed");
    }
    const double min_eig = es.eigenvalues().minCoeff();
    if (min_eig < -psd_floor) {
        std::ostringstream msg;
        msg << "PositiveDefiniteFunction: kernel matrix has eigenvalue " << min_eig;
        throw DomainError(msg.str());
    }
    for (const Complex& v : values) {
        if (std::abs(v) > 1.0 + 1e-10) {
            throw DomainError("PositiveDefiniteFunction: |phi(x)| exceeds phi(e) = 1");
        }
    }
}

Matrix PositiveDefiniteFunction::kernel_matrix() const {
    const int n = group.order();
    Matrix kernel(n, n);
    for (int x = 0; x < n; ++x) {
        for (int y = 0; y < n; ++y) {
            kernel(x, y) = values[static_cast<std::size_t>(
                group.multiply(x, group.inverse(y)))];
        }
    }
    return kernel;
}

Vector GroupAlgebraRealization::coords(const Vector& group_coefficients) const {
    if (group_coefficients.size() != group.order()) {
        throw StructuralError("GroupAlgebraRealization: coefficient length mismatch");
    }
    return coords_from_group * group_coefficients;
}

Matrix GroupAlgebraRealization::multiplier_superop(const std::vector<Complex>& m) const {
    if (static_cast<int>(m.size()) != group.order()) {
        throw StructuralError("GroupAlgebraRealization: multiplier length mismatch");
    }
    Vector diag(group.order());
    for (int x = 0; x < group.order(); ++x) diag(x) = m[static_cast<std::size_t>(x)];
    return coords_from_group * diag.asDiagonal() * group_from_coords;
}

GroupAlgebraRealization realize_group_algebra(const FiniteGroup& group) {
    const int g = group.order();
    std::vector<Matrix> regular;
    regular.reserve(static_cast<std::size_t>(g));
    for (int x = 0; x < g; ++x) regular.push_back(left_regular(group, x));

    const auto classes = conjugacy_classes(group);
    std::vector<Matrix> class_sums;
    class_sums.reserve(classes.size());
    for (const auto& cls : classes) {
        Matrix sum = Matrix::Zero(g, g);
        for (int x : cls) sum += regular[static_cast<std::size_t>(x)];
        class_sums.push_back(std::move(sum));
    }
    std::vector<Matrix> commutant;
    commutant.reserve(static_cast<std::size_t>(g));
    for (int x = 0; x < g; ++x) commutant.push_back(right_regular(group, x));

    std::mt19937_64 rng(0x7a5c3b19d4e2f601ull);
    const double cluster_tol = 1e-8;

    for (int attempt = 0; attempt < 5; ++attempt) {
        // Isotypic split from a generic element of the center.
        const Matrix central = generic_hermitian(class_sums, rng);
        Eigen::SelfAdjointEigenSolver<Matrix> ces(central);
        if (ces.info() != Eigen::Success) {
            throw NumericalError("realize_group_algebra: central eigensolver failed");
        }
        const auto iso_clusters =
            cluster_sorted(ces.eigenvalues(), cluster_tol * std::max(1.0, double(g)));
        if (static_cast<int>(iso_clusters.size()) != static_cast<int>(classes.size())) {
            continue;  // coefficients failed to separate the components; retry
        }

        const Matrix comm = generic_hermitian(commutant, rng);
        struct IrreducibleSlot {
            int degree = 0;
            double tag = 0.0;  // central eigenvalue, for deterministic ordering
            Matrix basis;      // g × degree
        };
        std::vector<IrreducibleSlot> slots;
        bool ok = true;
        for (const auto& cluster : iso_clusters) {
            const int m = static_cast<int>(cluster.size());
            const int d = static_cast<int>(std::lround(std::sqrt(double(m))));
            if (d * d != m) {
                ok = false;
                break;
            }
            Matrix q(g, m);
            for (int i = 0; i < m; ++i) q.col(i) = ces.eigenvectors().col(cluster[i]);

            // Inside the isotypic component the commutant element acts as
            // 1 ⊗ C with C generic Hermitian d × d, so each of its eigenspaces
            // is one irreducible copy.
            Eigen::SelfAdjointEigenSolver<Matrix> res(q.adjoint() * comm * q);
            if (res.info() != Eigen::Success) {
                ok = false;
                break;
            }
            const auto sub = cluster_sorted(res.eigenvalues(), cluster_tol);
            if (static_cast<int>(sub.size()) != d ||
                static_cast<int>(sub.front().size()) != d) {
                ok = false;
                break;
            }
            Matrix w(g, d);
            for (int i = 0; i < d; ++i) {
                w.col(i) = q * res.eigenvectors().col(sub.front()[static_cast<std::size_t>(i)]);
            }
            slots.push_back({d, ces.eigenvalues()(cluster.front()), std::move(w)});
        }
        if (!ok) continue;

        std::stable_sort(slots.begin(), slots.end(),
                         [](const IrreducibleSlot& a, const IrreducibleSlot& b) {
                             if (a.degree != b.degree) return a.degree < b.degree;
                             return a.tag < b.tag;
                         });

        std::vector<int> dims;
        dims.reserve(slots.size());
        for (const auto& slot : slots) dims.push_back(slot.degree);
        BlockStructure structure(dims);
        if (structure.coord_dim() != g) continue;  // degenerate split

        Matrix t(g, g);
        for (int x = 0; x < g; ++x) {
            std::vector<Matrix> blocks;
            blocks.reserve(slots.size());
            for (const auto& slot : slots) {
                blocks.push_back(slot.basis.adjoint() * regular[static_cast<std::size_t>(x)] *
                                 slot.basis);
            }
            t.col(x) = vectorize(AlgebraElement(structure, std::move(blocks)));
        }
        Eigen::PartialPivLU<Matrix> lu(t);
        const Matrix t_inv = lu.inverse();
        if (!t_inv.allFinite() || (t * t_inv - Matrix::Identity(g, g)).norm() > 1e-8 * g) {
            throw NumericalError("realize_group_algebra: coordinate change is singular");
        }
        return GroupAlgebraRealization{group, structure, std::move(t), t_inv};
    }
    throw NumericalError("realize_group_algebra: failed to separate isotypic components");
}

CpMap group_schur_map(const GroupAlgebraRealization& realization,
                      const PositiveDefiniteFunction& phi) {
    if (phi.group.order() != realization.group.order() ||
        phi.group.table() != realization.group.table()) {
        throw StructuralError("group_schur_map: realization and phi use different groups");
    }
    Matrix superop = realization.multiplier_superop(phi.values);
    MapFlags flags;
    flags.completely_positive = true;  // PSD kernel criterion, checked at construction
    flags.unital = true;               // U_e is the unit and phi(e) = 1
    flags.contraction = true;
    return CpMap(realization.structure, std::move(superop), flags);
}

CpMap group_schur_map(const PositiveDefiniteFunction& phi) {
    return group_schur_map(realize_group_algebra(phi.group), phi);
}

std::vector<int> kernel_subgroup(const PositiveDefiniteFunction& phi, double tol) {
    const FiniteGroup& g = phi.group;
    std::vector<int> kernel;
    for (int x = 0; x < g.order(); ++x) {
        if (1.0 - std::abs(phi.values[static_cast<std::size_t>(x)]) <= tol) {
            kernel.push_back(x);
        }
    }
    std::vector<bool> member(static_cast<std::size_t>(g.order()), false);
    for (int x : kernel) member[static_cast<std::size_t>(x)] = true;
    for (int x : kernel) {
        if (!member[static_cast<std::size_t>(g.inverse(x))]) {
            throw ToleranceError("kernel_subgroup: not closed under inverses at this tol");
        }
        for (int y : kernel) {
            if (!member[static_cast<std::size_t>(g.multiply(x, y))]) {
                throw ToleranceError("kernel_subgroup: not closed under products at this tol");
            }
            const Complex lhs = phi.values[static_cast<std::size_t>(g.multiply(x, y))];
            const Complex rhs = phi.values[static_cast<std::size_t>(x)] *
                                phi.values[static_cast<std::size_t>(y)];
            if (std::abs(lhs - rhs) > std::max(tol, 1e-8)) {
                throw ToleranceError("kernel_subgroup: phi is not multiplicative on K");
            }
        }
    }
    return kernel;
}

CpMap tensor_map(const CpMap& P0, const CpMap& P1) {
    const BlockStructure& s0 = P0.structure();
    const BlockStructure& s1 = P1.structure();
    if (s0.blocks() != 1 && s1.blocks() != 1) {
        throw StructuralError("tensor_map: at least one factor must be single-block");
    }

    // Tensor blocks are the pairs (k0, k1) in lexicographic order.
    std::vector<int> dims;
    for (int k0 = 0; k0 < s0.blocks(); ++k0) {
        for (int k1 = 0; k1 < s1.blocks(); ++k1) {
            dims.push_back(s0.dim(k0) * s1.dim(k1));
        }
    }
    BlockStructure st(dims);

    // Coordinate shuffle ι(μ, ν): position of the product basis element
    // (matrix unit of A) ⊗ (matrix unit of B) inside the tensor coordinates.
    const int coord0 = s0.coord_dim();
    const int coord1 = s1.coord_dim();
    std::vector<int> target(static_cast<std::size_t>(coord0 * coord1));
    for (int k0 = 0; k0 < s0.blocks(); ++k0) {
        const int da = s0.dim(k0);
        for (int k1 = 0; k1 < s1.blocks(); ++k1) {
            const int db = s1.dim(k1);
            const int t = k0 * s1.blocks() + k1;
            const int toff = st.coord_offset(t);
            for (int j1 = 0; j1 < da; ++j1) {
                for (int i1 = 0; i1 < da; ++i1) {
                    const int mu = s0.coord_index(k0, i1, j1);
                    for (int j2 = 0; j2 < db; ++j2) {
                        for (int i2 = 0; i2 < db; ++i2) {
                            const int nu = s1.coord_index(k1, i2, j2);
                            target[static_cast<std::size_t>(mu * coord1 + nu)] =
                                toff + (j1 * db + j2) * (da * db) + (i1 * db + i2);
                        }
                    }
                }
            }
        }
    }

    // superop = Π (S0 ⊗ S1) Π† entry by entry through the shuffle.
    Matrix superop(st.coord_dim(), st.coord_dim());
    for (int mu = 0; mu < coord0; ++mu) {
        for (int nu = 0; nu < coord1; ++nu) {
            const int row = target[static_cast<std::size_t>(mu * coord1 + nu)];
            for (int mu2 = 0; mu2 < coord0; ++mu2) {
                const Complex f0 = P0.superop()(mu, mu2);
                for (int nu2 = 0; nu2 < coord1; ++nu2) {
                    const int col = target[static_cast<std::size_t>(mu2 * coord1 + nu2)];
                    superop(row, col) = f0 * P1.superop()(nu, nu2);
                }
            }
        }
    }

    MapFlags flags;
    if (P0.flags().completely_positive == true && P1.flags().completely_positive == true) {
        flags.completely_positive = true;
    }
    if (P0.flags().unital == true && P1.flags().unital == true) flags.unital = true;
    if (P0.flags().contraction == true && P1.flags().contraction == true) {
        flags.contraction = true;
    }

    std::vector<Matrix> kraus;
    if (P0.has_kraus() && P1.has_kraus() &&
        P0.kraus().size() * P1.kraus().size() <= 64) {
        for (const Matrix& a : P0.kraus()) {
            for (const Matrix& b : P1.kraus()) {
                Matrix full = Matrix::Zero(st.total_dim(), st.total_dim());
                for (int k0 = 0; k0 < s0.blocks(); ++k0) {
                    for (int k1 = 0; k1 < s1.blocks(); ++k1) {
                        const int t = k0 * s1.blocks() + k1;
                        const int off = st.space_offset(t);
                        const Matrix a_blk = a.block(s0.space_offset(k0), s0.space_offset(k0),
                                                     s0.dim(k0), s0.dim(k0));
                        const Matrix b_blk = b.block(s1.space_offset(k1), s1.space_offset(k1),
                                                     s1.dim(k1), s1.dim(k1));
                        full.block(off, off, st.dim(t), st.dim(t)) = kronecker(a_blk, b_blk);
                    }
                }
                kraus.push_back(std::move(full));
            }
        }
    }
    return CpMap(st, std::move(superop), flags, std::move(kraus));
}

CpMap random_unital_channel(const BlockStructure& structure, int kraus_count,
                            std::uint64_t seed) {
    if (kraus_count < 1) {
        throw DomainError("random_unital_channel: kraus_count must be >= 1");
    }
    const int D = structure.total_dim();
    std::uint64_t attempt_seed = seed;
    for (int attempt = 0; attempt < 3; ++attempt) {
        std::mt19937_64 rng(attempt_seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::vector<Matrix> kraus(static_cast<std::size_t>(kraus_count),
                                  Matrix::Zero(D, D));
        for (auto& a : kraus) {
            for (int k = 0; k < structure.blocks(); ++k) {
                const int off = structure.space_offset(k);
                const int d = structure.dim(k);
                for (int i = 0; i < d; ++i) {
                    for (int j = 0; j < d; ++j) {
                        a(off + i, off + j) = Complex(gauss(rng), gauss(rng));
                    }
                }
            }
        }
        // Right-normalize: A_i ← A_i G^{−1/2} with G = Σ A_i† A_i, so that
        // Σ A_i† A_i = 1 exactly (up to rounding).
        Matrix gram = Matrix::Zero(D, D);
        for (const Matrix& a : kraus) gram += a.adjoint() * a;
        bool singular = false;
        Matrix gram_inv_sqrt = Matrix::Zero(D, D);
        for (int k = 0; k < structure.blocks(); ++k) {
            const int off = structure.space_offset(k);
            const int d = structure.dim(k);
            Eigen::SelfAdjointEigenSolver<Matrix> es(gram.block(off, off, d, d));
            if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() < 1e-8) {
                singular = true;
                break;
            }
            gram_inv_sqrt.block(off, off, d, d) =
                es.eigenvectors() *
                es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal().toDenseMatrix()
                    .cast<Complex>() *
                es.eigenvectors().adjoint();
        }
        if (singular) {
            attempt_seed += 0x9e3779b97f4a7c15ull;
            continue;
        }
        for (auto& a : kraus) a = a * gram_inv_sqrt;
        return from_kraus(structure, kraus);
    }
    throw NumericalError("random_unital_channel: Kraus normalization kept failing "
                         "(singular Gram) across seed retries");
}

CpMap dephasing_channel(double p) {
    if (p < 0.0 || p > 1.0) throw DomainError("dephasing_channel: p must lie in [0, 1]");
    const BlockStructure m2({2});
    Matrix z(2, 2);
    z << 1.0, 0.0, 0.0, -1.0;
    std::vector<Matrix> kraus{std::sqrt(1.0 - p) * Matrix::Identity(2, 2),
                              std::sqrt(p) * z};
    return from_kraus(m2, kraus);
}

CpMap amplitude_damping_channel(double gamma) {
    if (gamma < 0.0 || gamma > 1.0) {
        throw DomainError("amplitude_damping_channel: gamma must lie in [0, 1]");
    }
    const BlockStructure m2({2});
    Matrix a0 = Matrix::Zero(2, 2);
    a0(0, 0) = 1.0;
    a0(1, 1) = std::sqrt(1.0 - gamma);
    Matrix a1 = Matrix::Zero(2, 2);
    a1(0, 1) = std::sqrt(gamma);
    return from_kraus(m2, {a0, a1});
}

CpMap rotate_and_average_channel(int d, const std::vector<double>& phases) {
    if (d < 1) throw DomainError("rotate_and_average_channel: d must be >= 1");
    if (static_cast<int>(phases.size()) != d) {
        throw DomainError("rotate_and_average_channel: need one phase per dimension");
    }
    BlockStructure st({d, d});
    Matrix u = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i) u(i, i) = std::polar(1.0, phases[static_cast<std::size_t>(i)]);

    // Columns over the first summand's matrix units; the second summand is
    // annihilated, so those columns stay zero.
    Matrix superop = Matrix::Zero(st.coord_dim(), st.coord_dim());
    for (int j = 0; j < d; ++j) {
        for (int i = 0; i < d; ++i) {
            const int col = st.coord_index(0, i, j);
            Matrix unit = Matrix::Zero(d, d);
            unit(i, j) = 1.0;
            const Matrix rotated = u.adjoint() * unit * u;
            const Matrix averaged =
                (unit.trace() / static_cast<double>(d)) * Matrix::Identity(d, d);
            superop.col(col) = vectorize(
                AlgebraElement(st, {rotated, averaged}));
        }
    }
    MapFlags flags;
    flags.completely_positive = true;  // direct sum of uau† and tr(a)/d · 1
    flags.unital = true;
    flags.contraction = true;
    return CpMap(st, std::move(superop), flags);
}

} // namespace cpasym::gen
