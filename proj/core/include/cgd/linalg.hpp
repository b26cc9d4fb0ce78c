#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "cgd/error.hpp"

namespace cgd {

using Vector = std::vector<double>;

/// Dense symmetric matrix. Both triangles are stored and every mutation
/// writes the mirrored entry, so (i, j) and (j, i) are always bit-identical.
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(std::size_t dim);

    static SymMatrix identity(std::size_t dim);
    static SymMatrix diagonal(std::span<const double> diag);

    /// Throws DomainError unless the rows form an exactly symmetric square matrix.
    static SymMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
    static SymMatrix from_rows(const std::vector<Vector>& rows);

    /// Builds a matrix by evaluating fn(i, j) on the upper triangle (i <= j) and mirroring.
    template <typename Fn>
    static SymMatrix generate(std::size_t dim, Fn&& fn) {
        SymMatrix m(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            for (std::size_t j = i; j < dim; ++j) {
                m.set(i, j, fn(i, j));
            }
        }
        return m;
    }

    std::size_t dim() const noexcept { return dim_; }

    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * dim_ + j]; }

    void set(std::size_t i, std::size_t j, double value) noexcept {
        data_[i * dim_ + j] = value;
        data_[j * dim_ + i] = value;
    }

    /// Row-major view of all dim*dim entries.
    std::span<const double> values() const noexcept { return data_; }

    Vector diagonal_entries() const;

    bool operator==(const SymMatrix&) const = default;

private:
    std::size_t dim_ = 0;
    std::vector<double> data_;
};

/// Eigenvalues in ascending order; eigenvector j is column j of `vectors`
/// (row-major, dim x dim).
struct EigenDecomposition {
    Vector eigenvalues;
    std::vector<double> vectors;

    std::size_t dim() const noexcept { return eigenvalues.size(); }
    double vector_component(std::size_t row, std::size_t col) const noexcept {
        return vectors[row * dim() + col];
    }
};

enum class EigenSolver {
    /// Jacobi up to kAutoJacobiMaxDim, LAPACK divide-and-conquer above it.
    Auto,
    Jacobi,
    Tridiagonal,
};

inline constexpr std::size_t kAutoJacobiMaxDim = 64;

struct JacobiOptions {
    int max_sweeps = 100;
    /// Stop once the off-diagonal Frobenius norm is <= tolerance * ||A||_F.
    double tolerance = 1e-12;
};

EigenDecomposition eigendecompose(const SymMatrix& a, EigenSolver solver = EigenSolver::Auto,
                                  JacobiOptions options = {});

/// Eigenvalues only, ascending. Cheaper than a full decomposition on the LAPACK path.
Vector eigenvalues(const SymMatrix& a, EigenSolver solver = EigenSolver::Auto);

/// V diag(lambda) V^T, symmetrized from the upper triangle.
SymMatrix reconstruct(const EigenDecomposition& eig);

/// V diag(f(lambda_i)) V^T.
template <typename Fn>
SymMatrix spectral_map(const EigenDecomposition& eig, Fn&& fn) {
    EigenDecomposition mapped = eig;
    for (double& lambda : mapped.eigenvalues) lambda = fn(lambda);
    return reconstruct(mapped);
}

/// Fractional power V diag(max(lambda_i, floor)^power) V^T.
///
/// With `floor` unset no clamping happens, and a non-integer power of a
/// negative eigenvalue raises DomainError. Any non-finite mapped eigenvalue
/// (for instance 0 raised to a negative power) also raises DomainError.
/// power == 0 returns the identity without decomposing.
SymMatrix sym_matrix_power(const SymMatrix& a, double power, std::optional<double> floor,
                           EigenSolver solver = EigenSolver::Auto);

/// Inverse-metric action g^{-1} f for g = (eps I + clamp0(C))^power, where
/// clamp0 replaces negative eigenvalues of C by zero.
Vector apply_inverse_metric(const SymMatrix& c, double power, double eps,
                            std::span<const double> force,
                            EigenSolver solver = EigenSolver::Auto);

/// Same as above, reusing a decomposition of C computed earlier.
Vector apply_inverse_metric(const EigenDecomposition& c_eig, double power, double eps,
                            std::span<const double> force);

/// Elementwise fast path for a diagonal statistic: f_i * (eps + max(v_i, 0))^(-power).
Vector apply_inverse_metric_diagonal(std::span<const double> diag, double power, double eps,
                                     std::span<const double> force);

Vector matvec(const SymMatrix& a, std::span<const double> x);

double dot(std::span<const double> x, std::span<const double> y);

double max_abs(std::span<const double> x);

}  // namespace cgd
