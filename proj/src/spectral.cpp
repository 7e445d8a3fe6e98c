#include "netstab/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

#include "netstab/error.hpp"

namespace netstab {

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) : n_(rows.size()), data_() {
    data_.reserve(n_ * n_);
    for (const auto& r : rows) {
        if (r.size() != n_) {
            throw DomainError("matrix must be square");
        }
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    Matrix m(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows.size()) {
            throw DomainError("matrix must be square");
        }
        for (std::size_t j = 0; j < rows.size(); ++j) {
            m(i, j) = rows[i][j];
        }
    }
    return m;
}

void Matrix::set_labels(std::vector<std::string> labels) {
    if (!labels.empty() && labels.size() != n_) {
        throw DomainError("label count does not match the matrix dimension");
    }
    labels_ = std::move(labels);
}

std::vector<std::vector<double>> Matrix::rows() const {
    std::vector<std::vector<double>> out(n_, std::vector<double>(n_));
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < n_; ++j) {
            out[i][j] = (*this)(i, j);
        }
    }
    return out;
}

NonnegMatrix::NonnegMatrix(Matrix m) : m_(std::move(m)) {
    for (std::size_t i = 0; i < m_.size(); ++i) {
        for (std::size_t j = 0; j < m_.size(); ++j) {
            const double v = m_(i, j);
            if (!std::isfinite(v) || v < 0.0) {
                throw DomainError("entry (" + std::to_string(i) + "," + std::to_string(j) +
                                  ") is not a finite nonnegative number");
            }
        }
    }
}

namespace {

struct Csr {
    std::vector<std::size_t> start;
    std::vector<std::size_t> col;
    std::vector<double> val;
};

// Sub-matrix on `members` in compressed rows, with 1 added to the diagonal.
Csr shifted_block(const NonnegMatrix& m, const std::vector<std::size_t>& members) {
    std::vector<std::size_t> local(m.size(), std::numeric_limits<std::size_t>::max());
    for (std::size_t k = 0; k < members.size(); ++k) {
        local[members[k]] = k;
    }
    Csr c;
    c.start.push_back(0);
    for (std::size_t r = 0; r < members.size(); ++r) {
        const std::size_t i = members[r];
        for (std::size_t j = 0; j < m.size(); ++j) {
            if (local[j] == std::numeric_limits<std::size_t>::max()) {
                continue;
            }
            const double v = m(i, j) + (i == j ? 1.0 : 0.0);
            if (v > 0.0) {
                c.col.push_back(local[j]);
                c.val.push_back(v);
            }
        }
        c.start.push_back(c.col.size());
    }
    return c;
}

// Power iteration on an irreducible block with positive diagonal. Returns
// rho of the unshifted block and the Perron vector (max entry 1).
PerronPair power_iteration(const NonnegMatrix& m, const std::vector<std::size_t>& members,
                           const SpectralOptions& opts) {
    const Csr b = shifted_block(m, members);
    const std::size_t n = members.size();
    std::vector<double> v(n, 1.0);
    std::vector<double> w(n);
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    for (std::size_t it = 0; it < opts.max_iterations; ++it) {
        for (std::size_t r = 0; r < n; ++r) {
            double s = 0.0;
            for (std::size_t k = b.start[r]; k < b.start[r + 1]; ++k) {
                s += b.val[k] * v[b.col[k]];
            }
            w[r] = s;
        }
        lo = std::numeric_limits<double>::infinity();
        hi = 0.0;
        double top = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            const double ratio = w[r] / v[r];
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
            top = std::max(top, w[r]);
        }
        for (std::size_t r = 0; r < n; ++r) {
            v[r] = w[r] / top;
        }
        if (hi - lo <= opts.relative_gap * (hi + 1.0)) {
            return {std::max(0.0, 0.5 * (lo + hi) - 1.0), v};
        }
    }
    throw ConvergenceError("spectral radius did not converge within " + std::to_string(opts.max_iterations) +
                           " iterations (bracket [" + std::to_string(lo - 1.0) + ", " + std::to_string(hi - 1.0) +
                           "])");
}

} // namespace

std::vector<Component> strongly_connected_components(const NonnegMatrix& m) {
    const std::size_t n = m.size();
    constexpr std::size_t unvisited = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> index(n, unvisited);
    std::vector<std::size_t> low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::vector<Component> out;
    std::size_t counter = 0;

    struct Frame {
        std::size_t v;
        std::size_t next;
    };
    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != unvisited) {
            continue;
        }
        std::vector<Frame> call{{root, 0}};
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            Frame& f = call.back();
            if (f.next < n) {
                const std::size_t w = f.next++;
                if (m(f.v, w) <= 0.0) {
                    continue;
                }
                if (index[w] == unvisited) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
                continue;
            }
            const std::size_t v = f.v;
            call.pop_back();
            if (!call.empty()) {
                low[call.back().v] = std::min(low[call.back().v], low[v]);
            }
            if (low[v] == index[v]) {
                Component c;
                std::size_t w = 0;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    c.members.push_back(w);
                } while (w != v);
                std::sort(c.members.begin(), c.members.end());
                c.trivial = c.members.size() == 1 && m(v, v) <= 0.0;
                out.push_back(std::move(c));
            }
        }
    }
    return out;
}

double spectral_radius(const NonnegMatrix& m, const SpectralOptions& opts) {
    double rho = 0.0;
    for (const Component& c : strongly_connected_components(m)) {
        if (c.trivial) {
            continue;
        }
        if (c.members.size() == 1) {
            rho = std::max(rho, m(c.members[0], c.members[0]));
            continue;
        }
        rho = std::max(rho, power_iteration(m, c.members, opts).rho);
    }
    return rho;
}

bool is_irreducible(const NonnegMatrix& m) {
    return m.size() >= 1 && strongly_connected_components(m).size() == 1;
}

PerronPair perron_eigenvector(const NonnegMatrix& m, const SpectralOptions& opts) {
    if (!is_irreducible(m)) {
        throw DomainError("perron_eigenvector needs an irreducible matrix");
    }
    std::vector<std::size_t> all(m.size());
    for (std::size_t i = 0; i < all.size(); ++i) {
        all[i] = i;
    }
    if (m.size() == 1) {
        return {m(0, 0), {1.0}};
    }
    return power_iteration(m, all, opts);
}

NonnegMatrix theta_extension(const NonnegMatrix& m, std::size_t l, std::size_t col, double alpha, double L,
                             double theta) {
    const std::size_t n = m.size();
    if (l >= n || col >= n) {
        throw DomainError("theta_extension index out of range");
    }
    if (!(alpha >= 0.0) || !(L >= 0.0)) {
        throw DomainError("theta_extension needs alpha >= 0 and L >= 0");
    }
    if (!(theta > 0.0) || !std::isfinite(theta)) {
        throw DomainError("theta_extension needs a finite theta > 0");
    }
    if (std::fabs(alpha + L - m(l, col)) > 1e-12) {
        throw DomainError("theta_extension needs alpha + L == M(l, m)");
    }
    Matrix out(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            out(i + 1, j + 1) = m(i, j);
        }
    }
    out(0, col + 1) = alpha;
    out(l + 1, col + 1) = L;
    out(l + 1, 0) = theta;
    return NonnegMatrix(std::move(out));
}

double spectral_radius_general(const Matrix& m) {
    const auto n = static_cast<Eigen::Index>(m.size());
    if (n == 0) {
        return 0.0;
    }
    Eigen::MatrixXd a(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            a(i, j) = m(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        }
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(a, false);
    if (solver.info() != Eigen::Success) {
        throw ConvergenceError("eigenvalue computation failed");
    }
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

NonnegMatrix abs(const Matrix& m) {
    Matrix out(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = 0; j < m.size(); ++j) {
            out(i, j) = std::fabs(m(i, j));
        }
    }
    out.set_labels(m.labels());
    return NonnegMatrix(std::move(out));
}

} // namespace netstab
