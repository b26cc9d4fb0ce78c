#include <algorithm>
#include <cmath>
#include <random>

#include "cgd/problems.hpp"
#include "cgd/random.hpp"

namespace cgd {

Vector finite_diff_grad(const Problem& problem, std::span<const double> q, double h,
                        std::uint64_t batch_seed) {
    if (!(h > 0.0)) throw DomainError("finite_diff_grad: step h must be > 0");
    if (q.size() != problem.dim()) throw DimensionMismatch("finite_diff_grad", problem.dim(), q.size());
    Vector probe(q.begin(), q.end());
    Vector g(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) {
        const double saved = probe[i];
        probe[i] = saved + h;
        const double up = problem.loss(probe, batch_seed);
        probe[i] = saved - h;
        const double down = problem.loss(probe, batch_seed);
        probe[i] = saved;
        g[i] = (up - down) / (2.0 * h);
    }
    return g;
}

double relative_error(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw DimensionMismatch("relative_error", a.size(), b.size());
    double diff = 0.0;
    double na = 0.0;
    double nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        diff += (a[i] - b[i]) * (a[i] - b[i]);
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    const double scale = std::sqrt(std::max(na, nb));
    return scale == 0.0 ? 0.0 : std::sqrt(diff) / scale;
}

GradcheckReport gradcheck_rosenbrock(std::size_t dim, std::size_t points, std::uint64_t seed) {
    const Rosenbrock problem(dim);
    std::mt19937_64 rng(seed);
    GradcheckReport report;
    Vector q(dim);
    for (std::size_t p = 0; p < points; ++p) {
        for (double& v : q) v = uniform(rng, -2.0, 2.0);
        const double err = relative_error(problem.gradient(q, 0), finite_diff_grad(problem, q, 1e-6));
        report.max_relative_error = std::max(report.max_relative_error, err);
        ++report.points;
    }
    return report;
}

GradcheckReport gradcheck_multiply(std::size_t points, std::uint64_t seed, std::size_t batch_size) {
    const MultiplyProblem problem(batch_size, seed);
    std::mt19937_64 rng(mix_seed(seed));
    // Small, initialization-sized and saturating weight magnitudes.
    constexpr double kScales[] = {0.1, 0.3, 1.0};
    GradcheckReport report;
    Vector q(problem.dim());
    for (std::size_t p = 0; p < points; ++p) {
        const double scale = kScales[p % std::size(kScales)];
        for (double& v : q) v = uniform(rng, -scale, scale);
        const double err =
            relative_error(problem.gradient(q, p), finite_diff_grad(problem, q, 1e-5, p));
        report.max_relative_error = std::max(report.max_relative_error, err);
        ++report.points;
    }
    return report;
}

}  // namespace cgd
