// perron_frobenius.cpp — Irreducible stochastic structure theory.

#include "cpasym/perron_frobenius.hpp"

#include <cmath>
#include <deque>
#include <numeric>
#include <sstream>

namespace cpasym::pf {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Adjacency of the predecessor digraph: edge v → u iff S(u, v) > 0. BFS levels
// on this orientation make the class index increase along the action of the
// map (elements supported in C_i map into C_{i+1}).
std::vector<std::vector<int>> predecessor_adjacency(const RealMatrix& s) {
    const int n = static_cast<int>(s.rows());
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (int u = 0; u < n; ++u) {
        for (int v = 0; v < n; ++v) {
            if (s(u, v) > 0.0) adj[static_cast<std::size_t>(v)].push_back(u);
        }
    }
    return adj;
}

std::vector<int> bfs_levels(const std::vector<std::vector<int>>& adj, int root) {
    std::vector<int> level(adj.size(), -1);
    std::deque<int> queue{root};
    level[static_cast<std::size_t>(root)] = 0;
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        for (int w : adj[static_cast<std::size_t>(u)]) {
            if (level[static_cast<std::size_t>(w)] < 0) {
                level[static_cast<std::size_t>(w)] = level[static_cast<std::size_t>(u)] + 1;
                queue.push_back(w);
            }
        }
    }
    return level;
}

bool strongly_connected(const RealMatrix& s) {
    const int n = static_cast<int>(s.rows());
    std::vector<std::vector<int>> fwd(static_cast<std::size_t>(n));
    std::vector<std::vector<int>> bwd(static_cast<std::size_t>(n));
    for (int u = 0; u < n; ++u) {
        for (int v = 0; v < n; ++v) {
            if (s(u, v) > 0.0) {
                fwd[static_cast<std::size_t>(u)].push_back(v);
                bwd[static_cast<std::size_t>(v)].push_back(u);
            }
        }
    }
    for (const auto* adj : {&fwd, &bwd}) {
        const auto level = bfs_levels(*adj, 0);
        for (int v = 0; v < n; ++v) {
            if (level[static_cast<std::size_t>(v)] < 0) return false;
        }
    }
    return true;
}

} // namespace

StochasticMatrix::StochasticMatrix(RealMatrix entries, double tol)
    : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols() || entries_.rows() < 1) {
        throw StructuralError("StochasticMatrix: matrix must be square and nonempty");
    }
    for (Eigen::Index i = 0; i < entries_.rows(); ++i) {
        double row_sum = 0.0;
        for (Eigen::Index j = 0; j < entries_.cols(); ++j) {
            if (entries_(i, j) < 0.0) {
                throw DomainError("StochasticMatrix: entries must be nonnegative");
            }
            row_sum += entries_(i, j);
        }
        if (std::abs(row_sum - 1.0) > tol) {
            std::ostringstream msg;
            msg << "StochasticMatrix: row " << i << " sums to " << row_sum;
            throw DomainError(msg.str());
        }
    }
}

CpMap stochastic_to_cpmap(const StochasticMatrix& S) {
    const int n = S.size();
    BlockStructure st(std::vector<int>(static_cast<std::size_t>(n), 1));
    MapFlags flags;
    flags.completely_positive = true;  // positive map on a commutative algebra
    flags.unital = true;               // unit row sums
    flags.contraction = true;
    return CpMap(st, S.entries().cast<Complex>(), flags);
}

std::pair<bool, int> irreducibility_and_period(const StochasticMatrix& S) {
    const RealMatrix& s = S.entries();
    const int n = S.size();
    const bool irreducible = strongly_connected(s);

    const auto adj = predecessor_adjacency(s);
    const auto level = bfs_levels(adj, 0);
    long g = 0;
    for (int v = 0; v < n; ++v) {
        if (level[static_cast<std::size_t>(v)] < 0) continue;
        for (int u : adj[static_cast<std::size_t>(v)]) {
            if (level[static_cast<std::size_t>(u)] < 0) continue;
            const long diff = level[static_cast<std::size_t>(v)] + 1 -
                              level[static_cast<std::size_t>(u)];
            g = std::gcd(g, std::abs(diff));
        }
    }
    return {irreducible, g == 0 ? 1 : static_cast<int>(g)};
}

CyclicDecomposition cyclic_decomposition(const StochasticMatrix& S) {
    const auto [irreducible, k] = irreducibility_and_period(S);
    if (!irreducible) {
        throw ReducibilityError("cyclic_decomposition: support digraph is not strongly "
                                "connected");
    }
    const auto adj = predecessor_adjacency(S.entries());
    const auto level = bfs_levels(adj, 0);

    CyclicDecomposition dec;
    dec.period = k;
    dec.classes.assign(static_cast<std::size_t>(k), {});
    for (int v = 0; v < S.size(); ++v) {
        const int cls = level[static_cast<std::size_t>(v)] % k;
        dec.classes[static_cast<std::size_t>(cls)].push_back(v);
    }
    for (const auto& cls : dec.classes) {
        for (int v : cls) dec.permutation.push_back(v);
    }
    if (!cyclic_pattern_holds(S, dec)) {
        throw NumericalError("cyclic_decomposition: permuted matrix violates the cyclic "
                             "block template");
    }
    return dec;
}

bool cyclic_pattern_holds(const StochasticMatrix& S, const CyclicDecomposition& dec,
                          double tol) {
    const int k = dec.period;
    if (k == 1) return true;
    std::vector<int> class_of(static_cast<std::size_t>(S.size()), -1);
    for (int c = 0; c < k; ++c) {
        for (int v : dec.classes[static_cast<std::size_t>(c)]) {
            class_of[static_cast<std::size_t>(v)] = c;
        }
    }
    for (int u = 0; u < S.size(); ++u) {
        for (int v = 0; v < S.size(); ++v) {
            if (S.entries()(u, v) <= tol) continue;
            const int cu = class_of[static_cast<std::size_t>(u)];
            const int cv = class_of[static_cast<std::size_t>(v)];
            if ((cv + 1) % k != cu) return false;
        }
    }
    return true;
}

std::vector<std::pair<Complex, Vector>> pf_maximal_eigenvectors(
    const StochasticMatrix& S, const CyclicDecomposition& dec) {
    const int k = dec.period;
    const int n = S.size();
    std::vector<int> class_of(static_cast<std::size_t>(n), 0);
    for (int c = 0; c < k; ++c) {
        for (int v : dec.classes[static_cast<std::size_t>(c)]) {
            class_of[static_cast<std::size_t>(v)] = c;
        }
    }
    const Matrix action = S.entries().cast<Complex>();
    std::vector<std::pair<Complex, Vector>> out;
    out.reserve(static_cast<std::size_t>(k));
    for (int l = 0; l < k; ++l) {
        const Complex eig = std::polar(1.0, 2.0 * kPi * l / k);
        Vector x(n);
        for (int v = 0; v < n; ++v) {
            x(v) = std::polar(1.0, -2.0 * kPi * l * class_of[static_cast<std::size_t>(v)] / k);
        }
        const double residual = (action * x - eig * x).norm();
        if (residual > 1e-9 * std::sqrt(static_cast<double>(n))) {
            std::ostringstream msg;
            msg << "pf_maximal_eigenvectors: class-indicator eigenvector " << l
                << " has residual " << residual << "; period/classes inconsistent";
            throw NumericalError(msg.str());
        }
        out.emplace_back(eig, std::move(x));
    }
    return out;
}

CpMap pf_idempotent(const StochasticMatrix& S) {
    const auto [irreducible, k] = irreducibility_and_period(S);
    if (!irreducible) {
        throw ReducibilityError("pf_idempotent: matrix is reducible");
    }
    const int n = S.size();
    RealMatrix base = RealMatrix::Identity(n, n);
    for (int i = 0; i < k; ++i) base = base * S.entries();

    RealMatrix current = base;
    for (int iter = 0; iter < 200; ++iter) {
        RealMatrix next = current * current;
        const double diff = (next - current).cwiseAbs().maxCoeff();
        if (diff <= 1e-12) {
            BlockStructure st(std::vector<int>(static_cast<std::size_t>(n), 1));
            MapFlags flags;
            flags.completely_positive = true;
            flags.unital = true;
            flags.contraction = true;
            return CpMap(st, next.cast<Complex>(), flags);
        }
        current = std::move(next);
    }
    throw ConvergenceError("pf_idempotent: S^{nk} did not settle within the squaring "
                           "budget");
}

} // namespace cpasym::pf
