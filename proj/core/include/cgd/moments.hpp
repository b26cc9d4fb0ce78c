#pragma once

#include <cstdint>
#include <span>
#include <variant>

#include "cgd/linalg.hpp"

namespace cgd {

enum class MomentMode { Diagonal, Full };

/// EMA memory lengths in steps; beta = tau / (1 + tau).
struct Timescales {
    double tau1 = 0.0;
    double tau2 = 0.0;
};

void validate(const Timescales& ts);

/// Backward-difference exponential average sample/(1+tau) + prev*tau/(1+tau),
/// evaluated as prev + (sample - prev)/(1+tau) so that a constant input is an
/// exact fixed point. tau == 0 returns the sample itself.
inline double ema_update(double prev, double sample, double tau) {
    if (tau == 0.0) return sample;
    return prev + (sample - prev) / (1.0 + tau);
}

Vector ema_update(std::span<const double> prev, std::span<const double> sample, double tau);
SymMatrix ema_update(const SymMatrix& prev, const SymMatrix& sample, double tau);

/// Running gradient moments. m2 is a vector of squared-gradient averages in
/// diagonal mode and the full outer-product average in full mode.
struct MomentState {
    Vector m1;
    std::variant<Vector, SymMatrix> m2;
    std::uint64_t step = 0;

    /// m1 = 0, m2 = identity (all ones in diagonal mode), step = 0.
    static MomentState initial(std::size_t dim, MomentMode mode);

    std::size_t dim() const noexcept { return m1.size(); }
    MomentMode mode() const noexcept {
        return std::holds_alternative<SymMatrix>(m2) ? MomentMode::Full : MomentMode::Diagonal;
    }

    /// Throws ModeMismatch in diagonal mode.
    const SymMatrix& full_m2() const;
    /// Diagonal of m2 in either mode.
    Vector m2_diagonal() const;

    bool operator==(const MomentState&) const = default;
};

/// Folds one gradient into both moments. Mode is the state's own mode.
MomentState update_moments(const MomentState& state, std::span<const double> grad,
                           const Timescales& ts);

/// m2 - m1 m1^T restricted to the diagonal. Entries may be negative.
Vector covariance_diagonal(const MomentState& state);

/// Full m2 - m1 m1^T. Throws ModeMismatch for a diagonal state. May be indefinite.
SymMatrix covariance_full(const MomentState& state);

}  // namespace cgd
