#include "cgd/moments.hpp"

#include <cmath>

namespace cgd {

void validate(const Timescales& ts) {
    if (!std::isfinite(ts.tau1) || ts.tau1 < 0.0) throw DomainError("tau1 must be finite and >= 0");
    if (!std::isfinite(ts.tau2) || ts.tau2 < 0.0) throw DomainError("tau2 must be finite and >= 0");
}

Vector ema_update(std::span<const double> prev, std::span<const double> sample, double tau) {
    if (prev.size() != sample.size()) throw DimensionMismatch("ema_update", prev.size(), sample.size());
    Vector out(prev.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = ema_update(prev[i], sample[i], tau);
    return out;
}

SymMatrix ema_update(const SymMatrix& prev, const SymMatrix& sample, double tau) {
    if (prev.dim() != sample.dim()) throw DimensionMismatch("ema_update", prev.dim(), sample.dim());
    return SymMatrix::generate(prev.dim(), [&](std::size_t i, std::size_t j) {
        return ema_update(prev(i, j), sample(i, j), tau);
    });
}

MomentState MomentState::initial(std::size_t dim, MomentMode mode) {
    MomentState s;
    s.m1.assign(dim, 0.0);
    if (mode == MomentMode::Full) {
        s.m2 = SymMatrix::identity(dim);
    } else {
        s.m2 = Vector(dim, 1.0);
    }
    return s;
}

const SymMatrix& MomentState::full_m2() const {
    if (const auto* m = std::get_if<SymMatrix>(&m2)) return *m;
    throw ModeMismatch("full second moment requested from a diagonal moment state");
}

Vector MomentState::m2_diagonal() const {
    if (const auto* m = std::get_if<SymMatrix>(&m2)) return m->diagonal_entries();
    return std::get<Vector>(m2);
}

MomentState update_moments(const MomentState& state, std::span<const double> grad,
                           const Timescales& ts) {
    const std::size_t n = state.dim();
    if (grad.size() != n) throw DimensionMismatch("update_moments", n, grad.size());

    MomentState next;
    next.step = state.step + 1;
    next.m1 = ema_update(state.m1, grad, ts.tau1);

    if (const auto* full = std::get_if<SymMatrix>(&state.m2)) {
        // Fused EMA with the outer product; grad[i]*grad[j] is commutative so
        // the mirrored entries stay identical.
        next.m2 = SymMatrix::generate(n, [&](std::size_t i, std::size_t j) {
            return ema_update((*full)(i, j), grad[i] * grad[j], ts.tau2);
        });
    } else {
        const Vector& diag = std::get<Vector>(state.m2);
        Vector m2(n);
        for (std::size_t i = 0; i < n; ++i) m2[i] = ema_update(diag[i], grad[i] * grad[i], ts.tau2);
        next.m2 = std::move(m2);
    }
    return next;
}

Vector covariance_diagonal(const MomentState& state) {
    Vector cov = state.m2_diagonal();
    for (std::size_t i = 0; i < cov.size(); ++i) cov[i] -= state.m1[i] * state.m1[i];
    return cov;
}

SymMatrix covariance_full(const MomentState& state) {
    const SymMatrix& m2 = state.full_m2();
    return SymMatrix::generate(state.dim(), [&](std::size_t i, std::size_t j) {
        return m2(i, j) - state.m1[i] * state.m1[j];
    });
}

}  // namespace cgd
