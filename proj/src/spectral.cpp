// spectral.cpp — Schur-based spectral analysis of superoperators.

#include "cpasym/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace cpasym {

namespace {

// Swaps the diagonal entries at positions (i, i+1) of the upper-triangular
// factor by a unitary similarity, updating T and U in place.
void swap_adjacent(Matrix& t, Matrix& u, int i) {
    const Eigen::Index n = t.rows();
    const Complex a = t(i, i);
    const Complex b = t(i, i + 1);
    const Complex c = t(i + 1, i + 1);

    // Eigenvector of [[a, b], [0, c]] for eigenvalue c is (b, c − a).
    const Complex v0 = b;
    const Complex v1 = c - a;
    const double r = std::sqrt(std::norm(v0) + std::norm(v1));
    if (r == 0.0) return;  // identical eigenvalues, nothing to move

    Matrix g(2, 2);
    g(0, 0) = v0 / r;
    g(1, 0) = v1 / r;
    g(0, 1) = -std::conj(v1) / r;
    g(1, 1) = std::conj(v0) / r;

    t.block(i, i, 2, n - i) = g.adjoint() * t.block(i, i, 2, n - i);
    t.block(0, i, i + 2, 2) = t.block(0, i, i + 2, 2) * g;
    t(i + 1, i) = 0.0;
    u.middleCols(i, 2) = u.middleCols(i, 2) * g;
}

// Bubbles every selected diagonal entry of T to the leading positions.
// Returns the number of selected entries.
int reorder_schur(Matrix& t, Matrix& u, std::vector<bool> selected) {
    const int n = static_cast<int>(t.rows());
    int target = 0;
    for (int i = 0; i < n; ++i) {
        if (!selected[static_cast<std::size_t>(i)]) continue;
        for (int j = i; j > target; --j) {
            swap_adjacent(t, u, j - 1);
            std::swap(selected[static_cast<std::size_t>(j - 1)],
                      selected[static_cast<std::size_t>(j)]);
        }
        ++target;
    }
    return target;
}

// Solves T11 Y − Y T22 = T12 with both factors upper triangular, by forward
// column sweep; requires the spectra of T11 and T22 to be disjoint.
Matrix solve_triangular_sylvester(const Matrix& t11, const Matrix& t22, const Matrix& t12) {
    const Eigen::Index p = t11.rows();
    const Eigen::Index q = t22.rows();
    Matrix y(p, q);
    for (Eigen::Index j = 0; j < q; ++j) {
        Vector rhs = t12.col(j);
        for (Eigen::Index k = 0; k < j; ++k) {
            rhs += y.col(k) * t22(k, j);
        }
        Matrix lhs = t11;
        lhs.diagonal().array() -= t22(j, j);
        y.col(j) = lhs.triangularView<Eigen::Upper>().solve(rhs);
    }
    return y;
}

// Clusters sorted-by-anything eigenvalues: greedy union of values within tol.
std::vector<std::vector<int>> cluster_eigenvalues(const std::vector<Complex>& values,
                                                  const std::vector<int>& indices,
                                                  double tol) {
    std::vector<std::vector<int>> clusters;
    std::vector<bool> used(indices.size(), false);
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (used[i]) continue;
        std::vector<int> cluster{indices[i]};
        used[i] = true;
        for (std::size_t j = i + 1; j < indices.size(); ++j) {
            if (used[j]) continue;
            if (std::abs(values[static_cast<std::size_t>(indices[i])] -
                         values[static_cast<std::size_t>(indices[j])]) <= tol) {
                cluster.push_back(indices[j]);
                used[j] = true;
            }
        }
        clusters.push_back(std::move(cluster));
    }
    return clusters;
}

} // namespace

InvariantSplit split_invariant(const Matrix& schur_u, const Matrix& schur_t,
                               const std::vector<bool>& selected) {
    Matrix t = schur_t;
    Matrix u = schur_u;
    const int p = reorder_schur(t, u, selected);
    const int n = static_cast<int>(t.rows());
    const int q = n - p;

    InvariantSplit out;
    out.basis = u.leftCols(p);
    out.restricted = t.topLeftCorner(p, p);

    Matrix m = Matrix::Zero(n, n);
    m.topLeftCorner(p, p) = Matrix::Identity(p, p);
    if (p > 0 && q > 0) {
        const Matrix y = solve_triangular_sylvester(
            t.topLeftCorner(p, p), t.bottomRightCorner(q, q), t.topRightCorner(p, q));
        m.topRightCorner(p, q) = y;
    }
    out.projection = u * m * u.adjoint();
    return out;
}

SpectralDecomposition spectral_decomposition(const CpMap& P, const ToleranceConfig& cfg) {
    cfg.validate();
    SpectralDecomposition dec{P.structure(), P.superop(), {}, {}, {}, {}, {}, {}, 1.0,
                              cfg.peripheral_tol};

    Eigen::ComplexSchur<Matrix> schur(P.superop());
    if (schur.info() != Eigen::Success) {
        throw NumericalError("spectral_decomposition: Schur factorization failed");
    }
    dec.schur_u = schur.matrixU();
    dec.schur_t = schur.matrixT();

    const int n = P.structure().coord_dim();
    std::vector<Complex> raw(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) raw[static_cast<std::size_t>(i)] = dec.schur_t(i, i);

    // Descending modulus, then ascending phase, stable by Schur position.
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&raw](int a, int b) {
        const double ma = std::abs(raw[static_cast<std::size_t>(a)]);
        const double mb = std::abs(raw[static_cast<std::size_t>(b)]);
        if (ma != mb) return ma > mb;
        const double pa = std::arg(raw[static_cast<std::size_t>(a)]);
        const double pb = std::arg(raw[static_cast<std::size_t>(b)]);
        if (pa != pb) return pa < pb;
        return false;
    });

    dec.peripheral_at_schur.assign(static_cast<std::size_t>(n), false);
    double max_nonperipheral = 0.0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const int pos = order[i];
        const Complex lambda = raw[static_cast<std::size_t>(pos)];
        const double mod = std::abs(lambda);
        if (mod > 1.0 + cfg.peripheral_tol) {
            std::ostringstream msg;
            msg << "spectral_decomposition: eigenvalue with |lambda| = " << mod
                << " exceeds the unit circle; input is not a contraction";
            throw ContractionViolationError(msg.str());
        }
        dec.eigenvalues.push_back(lambda);
        dec.schur_position.push_back(pos);
        if (1.0 - mod <= cfg.peripheral_tol) {
            dec.peripheral_indices.push_back(static_cast<int>(i));
            dec.peripheral_at_schur[static_cast<std::size_t>(pos)] = true;
        } else {
            max_nonperipheral = std::max(max_nonperipheral, mod);
        }
    }
    const bool all_peripheral =
        dec.peripheral_indices.size() == dec.eigenvalues.size();
    dec.gap = all_peripheral ? 1.0 : 1.0 - max_nonperipheral;
    return dec;
}

CpMap peripheral_projection(const SpectralDecomposition& dec) {
    if (dec.peripheral_indices.empty()) {
        throw DomainError("peripheral_projection: no peripheral eigenvalues; "
                          "the powers of the map tend to zero");
    }
    if (!check_peripheral_semisimple(dec)) {
        throw SemisimplicityError(
            "peripheral_projection: defective peripheral eigenvalue; input is not "
            "power-bounded or tolerances are misconfigured");
    }
    const InvariantSplit split =
        split_invariant(dec.schur_u, dec.schur_t, dec.peripheral_at_schur);
    return CpMap(dec.structure, split.projection);
}

bool check_peripheral_semisimple(const SpectralDecomposition& dec, double tol) {
    std::vector<Complex> values;
    values.reserve(dec.peripheral_indices.size());
    for (int idx : dec.peripheral_indices) {
        values.push_back(dec.eigenvalues[static_cast<std::size_t>(idx)]);
    }
    return check_selected_semisimple(dec.superop, values, tol);
}

bool check_selected_semisimple(const Matrix& superop,
                               const std::vector<Complex>& selected_values,
                               double tol) {
    if (selected_values.empty()) return true;
    const int n = static_cast<int>(superop.rows());
    std::vector<int> all(selected_values.size());
    std::iota(all.begin(), all.end(), 0);
    const auto clusters = cluster_eigenvalues(selected_values, all, 1e-8);
    for (const auto& cluster : clusters) {
        Complex center = 0.0;
        for (int idx : cluster) center += selected_values[static_cast<std::size_t>(idx)];
        center /= static_cast<double>(cluster.size());

        Matrix shifted = superop;
        shifted.diagonal().array() -= center;
        Eigen::JacobiSVD<Matrix> svd(shifted);
        const auto& sv = svd.singularValues();
        int rank = 0;
        for (Eigen::Index i = 0; i < sv.size(); ++i) {
            if (sv(i) > tol) ++rank;
        }
        if (rank != n - static_cast<int>(cluster.size())) return false;
    }
    return true;
}

long find_recurrence_time(const std::vector<Complex>& lambdas, double eps, long n_max,
                          long start) {
    if (eps <= 0.0) throw DomainError("find_recurrence_time: eps must be positive");
    if (start < 1) throw DomainError("find_recurrence_time: start must be >= 1");
    if (lambdas.empty()) return start;
    std::vector<Complex> unit;
    unit.reserve(lambdas.size());
    for (Complex l : lambdas) {
        const double mod = std::abs(l);
        if (std::abs(mod - 1.0) > 1e-6) {
            throw DomainError("find_recurrence_time: eigenvalue is not unimodular");
        }
        unit.push_back(l / mod);
    }
    std::vector<Complex> pow(unit.size());
    for (std::size_t j = 0; j < unit.size(); ++j) {
        pow[j] = std::polar(1.0, static_cast<double>(start) * std::arg(unit[j]));
    }
    for (long n = start; n <= n_max; ++n) {
        double worst = 0.0;
        for (const Complex& p : pow) worst = std::max(worst, std::abs(p - 1.0));
        if (worst <= eps) return n;
        for (std::size_t j = 0; j < pow.size(); ++j) {
            pow[j] *= unit[j];
            // renormalize to kill drift over long scans
            pow[j] /= std::abs(pow[j]);
        }
    }
    std::ostringstream msg;
    msg << "find_recurrence_time: no n in [" << start << ", " << n_max
        << "] brings all eigenvalue powers within " << eps << " of 1";
    throw SearchExhaustedError(msg.str());
}

} // namespace cpasym
