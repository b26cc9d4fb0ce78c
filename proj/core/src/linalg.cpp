#include "cgd/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

extern "C" {
// LAPACK divide-and-conquer symmetric eigensolver (Fortran ABI, trailing
// hidden string lengths for jobz and uplo).
void dsyevd_(const char* jobz, const char* uplo, const int* n, double* a, const int* lda,
             double* w, double* work, const int* lwork, int* iwork, const int* liwork, int* info,
             std::size_t jobz_len, std::size_t uplo_len);
}

namespace cgd {

SymMatrix::SymMatrix(std::size_t dim) : dim_(dim), data_(dim * dim, 0.0) {}

SymMatrix SymMatrix::identity(std::size_t dim) {
    SymMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m.data_[i * dim + i] = 1.0;
    return m;
}

SymMatrix SymMatrix::diagonal(std::span<const double> diag) {
    SymMatrix m(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m.data_[i * diag.size() + i] = diag[i];
    return m;
}

SymMatrix SymMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    std::vector<Vector> copy;
    copy.reserve(rows.size());
    for (const auto& row : rows) copy.emplace_back(row);
    return from_rows(copy);
}

SymMatrix SymMatrix::from_rows(const std::vector<Vector>& rows) {
    const std::size_t n = rows.size();
    SymMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n) throw DomainError("SymMatrix rows must form a square matrix");
        for (std::size_t j = 0; j < n; ++j) m.data_[i * n + j] = rows[i][j];
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (m(i, j) != m(j, i)) {
                throw DomainError("SymMatrix entries (" + std::to_string(i) + "," +
                                  std::to_string(j) + ") and their mirror differ");
            }
        }
    }
    return m;
}

Vector SymMatrix::diagonal_entries() const {
    Vector d(dim_);
    for (std::size_t i = 0; i < dim_; ++i) d[i] = data_[i * dim_ + i];
    return d;
}

namespace {

void check_finite(const SymMatrix& a) {
    for (double v : a.values()) {
        if (!std::isfinite(v)) throw DomainError("eigendecompose: matrix has non-finite entries");
    }
}

bool use_jacobi(std::size_t dim, EigenSolver solver) {
    switch (solver) {
    case EigenSolver::Jacobi: return true;
    case EigenSolver::Tridiagonal: return false;
    case EigenSolver::Auto: break;
    }
    return dim <= kAutoJacobiMaxDim;
}

// Sorts eigenpairs ascending by eigenvalue; stable so ties keep solver order.
EigenDecomposition sorted(Vector values, std::vector<double> vectors) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return values[x] < values[y]; });

    EigenDecomposition out;
    out.eigenvalues.resize(n);
    out.vectors.resize(n * n);
    for (std::size_t col = 0; col < n; ++col) {
        out.eigenvalues[col] = values[order[col]];
        for (std::size_t row = 0; row < n; ++row) {
            out.vectors[row * n + col] = vectors[row * n + order[col]];
        }
    }
    return out;
}

EigenDecomposition jacobi(const SymMatrix& input, const JacobiOptions& options) {
    const std::size_t n = input.dim();
    std::vector<double> a(input.values().begin(), input.values().end());
    std::vector<double> v(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

    auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };

    double total = 0.0;
    for (double x : a) total += x * x;
    const double threshold = options.tolerance * std::sqrt(total);

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * at(i, j) * at(i, j);
        }
        return std::sqrt(s);
    };

    int sweep = 0;
    while (off_norm() > threshold) {
        if (sweep++ >= options.max_sweeps) {
            throw NonConvergence("Jacobi eigensolver did not converge in " +
                                 std::to_string(options.max_sweeps) + " sweeps");
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = at(p, q);
                if (apq == 0.0) continue;
                const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                // A <- A J, then A <- J^T A, with J the (p, q) plane rotation.
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = at(k, p);
                    const double akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = at(p, k);
                    const double aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
                at(p, q) = 0.0;
                at(q, p) = 0.0;

                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v[k * n + p];
                    const double vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    Vector values(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = at(i, i);
    return sorted(std::move(values), std::move(v));
}

// Returns eigenvalues (ascending) and, when wanted, eigenvectors stored
// column-major in `a` on exit.
Vector lapack_syevd(const SymMatrix& input, bool want_vectors, std::vector<double>& a) {
    const int n = static_cast<int>(input.dim());
    a.assign(input.values().begin(), input.values().end());
    Vector w(input.dim());
    const char jobz = want_vectors ? 'V' : 'N';
    const char uplo = 'U';
    int info = 0;
    int lwork = -1;
    int liwork = -1;
    double work_query = 0.0;
    int iwork_query = 0;
    dsyevd_(&jobz, &uplo, &n, a.data(), &n, w.data(), &work_query, &lwork, &iwork_query, &liwork,
            &info, 1, 1);
    if (info != 0) throw NonConvergence("dsyevd workspace query failed, info=" + std::to_string(info));
    lwork = static_cast<int>(work_query);
    liwork = iwork_query;
    std::vector<double> work(static_cast<std::size_t>(std::max(lwork, 1)));
    std::vector<int> iwork(static_cast<std::size_t>(std::max(liwork, 1)));
    dsyevd_(&jobz, &uplo, &n, a.data(), &n, w.data(), work.data(), &lwork, iwork.data(), &liwork,
            &info, 1, 1);
    if (info != 0) throw NonConvergence("dsyevd failed to converge, info=" + std::to_string(info));
    return w;
}

EigenDecomposition tridiagonal(const SymMatrix& input) {
    const std::size_t n = input.dim();
    std::vector<double> z;
    Vector w = lapack_syevd(input, true, z);
    // Column-major eigenvectors -> row-major with eigenvectors as columns.
    std::vector<double> v(n * n);
    for (std::size_t col = 0; col < n; ++col) {
        for (std::size_t row = 0; row < n; ++row) v[row * n + col] = z[col * n + row];
    }
    return sorted(std::move(w), std::move(v));
}

}  // namespace

EigenDecomposition eigendecompose(const SymMatrix& a, EigenSolver solver, JacobiOptions options) {
    check_finite(a);
    if (a.dim() == 0) return {};
    return use_jacobi(a.dim(), solver) ? jacobi(a, options) : tridiagonal(a);
}

Vector eigenvalues(const SymMatrix& a, EigenSolver solver) {
    check_finite(a);
    if (a.dim() == 0) return {};
    if (use_jacobi(a.dim(), solver)) return jacobi(a, {}).eigenvalues;
    std::vector<double> scratch;
    Vector w = lapack_syevd(a, false, scratch);
    std::sort(w.begin(), w.end());
    return w;
}

SymMatrix reconstruct(const EigenDecomposition& eig) {
    const std::size_t n = eig.dim();
    return SymMatrix::generate(n, [&](std::size_t i, std::size_t j) {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            s += eig.vector_component(i, k) * eig.eigenvalues[k] * eig.vector_component(j, k);
        }
        return s;
    });
}

SymMatrix sym_matrix_power(const SymMatrix& a, double power, std::optional<double> floor,
                           EigenSolver solver) {
    if (!std::isfinite(power)) throw DomainError("sym_matrix_power: power must be finite");
    if (floor && !(*floor >= 0.0)) throw DomainError("sym_matrix_power: floor must be >= 0");
    if (power == 0.0) return SymMatrix::identity(a.dim());

    const bool integer_power = std::trunc(power) == power;
    const EigenDecomposition eig = eigendecompose(a, solver);
    return spectral_map(eig, [&](double lambda) {
        if (floor) {
            lambda = std::max(lambda, *floor);
        } else if (lambda < 0.0 && !integer_power) {
            throw DomainError("sym_matrix_power: non-integer power of a negative eigenvalue");
        }
        const double mapped = std::pow(lambda, power);
        if (!std::isfinite(mapped)) {
            throw DomainError("sym_matrix_power: eigenvalue maps to a non-finite value");
        }
        return mapped;
    });
}

Vector apply_inverse_metric(const EigenDecomposition& c_eig, double power, double eps,
                            std::span<const double> force) {
    const std::size_t n = c_eig.dim();
    if (force.size() != n) throw DimensionMismatch("apply_inverse_metric", n, force.size());
    if (power == 0.0) return Vector(force.begin(), force.end());

    // y = V diag(w) V^T f
    Vector projected(n, 0.0);
    for (std::size_t row = 0; row < n; ++row) {
        const double f = force[row];
        const double* vrow = &c_eig.vectors[row * n];
        for (std::size_t k = 0; k < n; ++k) projected[k] += vrow[k] * f;
    }
    for (std::size_t k = 0; k < n; ++k) {
        projected[k] *= std::pow(std::max(c_eig.eigenvalues[k], 0.0) + eps, -power);
    }
    Vector out(n, 0.0);
    for (std::size_t row = 0; row < n; ++row) {
        const double* vrow = &c_eig.vectors[row * n];
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) s += vrow[k] * projected[k];
        out[row] = s;
    }
    return out;
}

Vector apply_inverse_metric(const SymMatrix& c, double power, double eps,
                            std::span<const double> force, EigenSolver solver) {
    if (force.size() != c.dim()) throw DimensionMismatch("apply_inverse_metric", c.dim(), force.size());
    if (power == 0.0) return Vector(force.begin(), force.end());
    return apply_inverse_metric(eigendecompose(c, solver), power, eps, force);
}

Vector apply_inverse_metric_diagonal(std::span<const double> diag, double power, double eps,
                                     std::span<const double> force) {
    if (force.size() != diag.size()) {
        throw DimensionMismatch("apply_inverse_metric_diagonal", diag.size(), force.size());
    }
    Vector out(force.begin(), force.end());
    if (power == 0.0) return out;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] *= std::pow(std::max(diag[i], 0.0) + eps, -power);
    }
    return out;
}

Vector matvec(const SymMatrix& a, std::span<const double> x) {
    if (x.size() != a.dim()) throw DimensionMismatch("matvec", a.dim(), x.size());
    const std::size_t n = a.dim();
    Vector y(n, 0.0);
    const auto values = a.values();
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += values[i * n + j] * x[j];
        y[i] = s;
    }
    return y;
}

double dot(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DimensionMismatch("dot", x.size(), y.size());
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

double max_abs(std::span<const double> x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace cgd
