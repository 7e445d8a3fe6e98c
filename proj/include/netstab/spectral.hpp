#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace netstab {

/// Dense square matrix, row-major, with optional index labels.
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}
    Matrix(std::initializer_list<std::initializer_list<double>> rows);
    static Matrix from_rows(const std::vector<std::vector<double>>& rows);

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

    [[nodiscard]] const std::vector<std::string>& labels() const noexcept { return labels_; }
    void set_labels(std::vector<std::string> labels);

    [[nodiscard]] std::vector<std::vector<double>> rows() const;
    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
    std::vector<std::string> labels_;
};

/// A Matrix whose entries are all finite and nonnegative; checked on
/// construction.
class NonnegMatrix {
public:
    NonnegMatrix() = default;
    explicit NonnegMatrix(Matrix m);
    NonnegMatrix(std::initializer_list<std::initializer_list<double>> rows) : NonnegMatrix(Matrix(rows)) {}

    [[nodiscard]] const Matrix& matrix() const noexcept { return m_; }
    [[nodiscard]] std::size_t size() const noexcept { return m_.size(); }
    double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
    [[nodiscard]] const std::vector<std::string>& labels() const noexcept { return m_.labels(); }

    friend bool operator==(const NonnegMatrix&, const NonnegMatrix&) = default;

private:
    Matrix m_;
};

struct Component {
    std::vector<std::size_t> members;  ///< ascending
    bool trivial = false;              ///< single vertex without a loop
};

/// Tarjan's algorithm on the digraph i -> j iff M(i, j) > 0. Components come
/// out in reverse topological order (sinks first).
std::vector<Component> strongly_connected_components(const NonnegMatrix& m);

struct SpectralOptions {
    std::size_t max_iterations = 100000;
    /// Iteration stops once the Collatz-Wielandt bracket is narrower than
    /// relative_gap * (rho + 1).
    double relative_gap = 1e-12;
};

/// Largest |eigenvalue| of a nonnegative matrix, maximized over the
/// nontrivial strongly connected components. Throws ConvergenceError at the
/// iteration cap.
double spectral_radius(const NonnegMatrix& m, const SpectralOptions& opts = {});

[[nodiscard]] bool is_irreducible(const NonnegMatrix& m);

struct PerronPair {
    double rho = 0.0;
    std::vector<double> vector;  ///< strictly positive, max entry 1
};

/// Throws DomainError for reducible input.
PerronPair perron_eigenvector(const NonnegMatrix& m, const SpectralOptions& opts = {});

/// Splits edge (l, m) through a new vertex placed at index 0; original index
/// k becomes k + 1. Entries: (0, m) = alpha, (l, m) = L, (l, 0) = theta.
NonnegMatrix theta_extension(const NonnegMatrix& m, std::size_t l, std::size_t col, double alpha, double L,
                             double theta);

/// Spectral radius of an arbitrary real matrix via a dense eigen-solver.
double spectral_radius_general(const Matrix& m);

/// Entrywise absolute value.
NonnegMatrix abs(const Matrix& m);

} // namespace netstab
