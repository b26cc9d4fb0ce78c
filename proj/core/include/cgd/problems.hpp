#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cgd/linalg.hpp"

namespace cgd {

struct LossAndGradient {
    double loss = 0.0;
    Vector gradient;
};

/// Optimization target. Stochastic problems draw their mini-batch from
/// `batch_seed`; deterministic ones ignore it. Evaluations are reentrant.
class Problem {
public:
    virtual ~Problem() = default;

    virtual std::size_t dim() const = 0;
    virtual double loss(std::span<const double> q, std::uint64_t batch_seed) const = 0;
    virtual Vector gradient(std::span<const double> q, std::uint64_t batch_seed) const = 0;

    virtual LossAndGradient loss_and_gradient(std::span<const double> q,
                                              std::uint64_t batch_seed) const {
        return {loss(q, batch_seed), gradient(q, batch_seed)};
    }
};

// ---------------------------------------------------------------------------
// Rosenbrock

double rosenbrock_loss(std::span<const double> q);
Vector rosenbrock_grad(std::span<const double> q);

class Rosenbrock final : public Problem {
public:
    /// Throws DimensionTooSmall for dim < 2.
    explicit Rosenbrock(std::size_t dim = 2);

    std::size_t dim() const override { return dim_; }
    double loss(std::span<const double> q, std::uint64_t) const override;
    Vector gradient(std::span<const double> q, std::uint64_t) const override;

private:
    std::size_t dim_;
};

// ---------------------------------------------------------------------------
// Unconstrained tanh network for the multiplication task.
//
// One 23x23 weight matrix W and bias b are applied kDepth times:
// x^{k+1} = tanh(W x^k + b). Inputs are written into neurons 0 and 1 of x^0
// (everything else zero) and the prediction is neuron 2 of x^kDepth.
// Parameter layout: W row-major (W[i][j] multiplies x_j into neuron i), then b.

struct UnconstrainedNet {
    static constexpr std::size_t kNeurons = 23;
    static constexpr std::size_t kDepth = 5;
    static constexpr std::size_t kInputX = 0;
    static constexpr std::size_t kInputY = 1;
    static constexpr std::size_t kOutput = 2;
    static constexpr std::size_t kWeightCount = kNeurons * kNeurons;
    static constexpr std::size_t kParamCount = kWeightCount + kNeurons;

    static constexpr std::size_t weight_index(std::size_t to, std::size_t from) {
        return to * kNeurons + from;
    }
    static constexpr std::size_t bias_index(std::size_t neuron) { return kWeightCount + neuron; }

    /// i.i.d. uniform on [-0.5, 0.5] / sqrt(23), seeded.
    static Vector initial_params(std::uint64_t seed);
};

struct Sample {
    double x = 0.0;
    double y = 0.0;
    double target = 0.0;
};

double net_forward(std::span<const double> params, double x, double y);

/// Mean squared error over the batch and its gradient by reverse accumulation
/// through the unrolled iterations. Throws EmptyBatch.
LossAndGradient net_loss_and_grad(std::span<const double> params, std::span<const Sample> batch);
double net_loss(std::span<const double> params, std::span<const Sample> batch);

/// x, y i.i.d. uniform on [-1, 1], target x*y. Deterministic in `seed`.
std::vector<Sample> sample_batch(std::uint64_t seed, std::size_t size);

class MultiplyProblem final : public Problem {
public:
    /// Mini-batches are sample_batch(mix_seed(data_seed, batch_seed), batch_size).
    MultiplyProblem(std::size_t batch_size, std::uint64_t data_seed);

    std::size_t dim() const override { return UnconstrainedNet::kParamCount; }
    double loss(std::span<const double> q, std::uint64_t batch_seed) const override;
    Vector gradient(std::span<const double> q, std::uint64_t batch_seed) const override;
    LossAndGradient loss_and_gradient(std::span<const double> q,
                                      std::uint64_t batch_seed) const override;

    std::vector<Sample> batch(std::uint64_t batch_seed) const;
    std::size_t batch_size() const { return batch_size_; }

private:
    std::size_t batch_size_;
    std::uint64_t data_seed_;
};

// ---------------------------------------------------------------------------
// Finite-difference oracle

/// Central differences (loss(q + h e_i) - loss(q - h e_i)) / 2h with the batch held fixed.
Vector finite_diff_grad(const Problem& problem, std::span<const double> q, double h,
                        std::uint64_t batch_seed = 0);

/// ||a - b||_2 / max(||a||_2, ||b||_2); zero when both vectors vanish.
double relative_error(std::span<const double> a, std::span<const double> b);

struct GradcheckReport {
    std::size_t points = 0;
    double max_relative_error = 0.0;
};

/// Worst relative error of the analytic gradient against finite_diff_grad over
/// `points` random parameter vectors. Rosenbrock points are uniform on
/// [-2, 2]^dim with h = 1e-6; network points are uniform weights at a few
/// scales with h = 1e-5 on a fixed random batch.
GradcheckReport gradcheck_rosenbrock(std::size_t dim, std::size_t points, std::uint64_t seed);
GradcheckReport gradcheck_multiply(std::size_t points, std::uint64_t seed,
                                   std::size_t batch_size = 100);

}  // namespace cgd
