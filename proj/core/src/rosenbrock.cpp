#include "cgd/problems.hpp"

#include <string>

namespace cgd {
namespace {

void require_dim(std::size_t d) {
    if (d < 2) throw DimensionTooSmall("rosenbrock needs dimension >= 2, got " + std::to_string(d));
}

}  // namespace

double rosenbrock_loss(std::span<const double> q) {
    require_dim(q.size());
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < q.size(); ++i) {
        const double a = 1.0 - q[i];
        const double b = q[i + 1] - q[i] * q[i];
        sum += a * a + 100.0 * b * b;
    }
    return sum;
}

Vector rosenbrock_grad(std::span<const double> q) {
    require_dim(q.size());
    Vector g(q.size(), 0.0);
    for (std::size_t i = 0; i + 1 < q.size(); ++i) {
        const double b = q[i + 1] - q[i] * q[i];
        g[i] += -2.0 * (1.0 - q[i]) - 400.0 * q[i] * b;
        g[i + 1] += 200.0 * b;
    }
    return g;
}

Rosenbrock::Rosenbrock(std::size_t dim) : dim_(dim) { require_dim(dim); }

double Rosenbrock::loss(std::span<const double> q, std::uint64_t) const {
    if (q.size() != dim_) throw DimensionMismatch("rosenbrock", dim_, q.size());
    return rosenbrock_loss(q);
}

Vector Rosenbrock::gradient(std::span<const double> q, std::uint64_t) const {
    if (q.size() != dim_) throw DimensionMismatch("rosenbrock", dim_, q.size());
    return rosenbrock_grad(q);
}

}  // namespace cgd
