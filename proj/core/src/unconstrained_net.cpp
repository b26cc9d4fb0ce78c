#include "cgd/problems.hpp"

#include <array>
#include <cmath>
#include <random>

#include "cgd/random.hpp"

namespace cgd {
namespace {

using Net = UnconstrainedNet;
using State = std::array<double, Net::kNeurons>;

void require_params(std::span<const double> params) {
    if (params.size() != Net::kParamCount) {
        throw DimensionMismatch("unconstrained net parameters", Net::kParamCount, params.size());
    }
}

// Fills states[0..kDepth]; states[0] is the injected input.
void forward(std::span<const double> params, double x, double y,
             std::array<State, Net::kDepth + 1>& states) {
    states[0].fill(0.0);
    states[0][Net::kInputX] = x;
    states[0][Net::kInputY] = y;
    const double* w = params.data();
    const double* b = params.data() + Net::kWeightCount;
    for (std::size_t k = 0; k < Net::kDepth; ++k) {
        const State& in = states[k];
        State& out = states[k + 1];
        for (std::size_t i = 0; i < Net::kNeurons; ++i) {
            double pre = b[i];
            const double* wrow = w + i * Net::kNeurons;
            for (std::size_t j = 0; j < Net::kNeurons; ++j) pre += wrow[j] * in[j];
            out[i] = std::tanh(pre);
        }
    }
}

}  // namespace

Vector UnconstrainedNet::initial_params(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const double scale = 1.0 / std::sqrt(static_cast<double>(kNeurons));
    Vector p(kParamCount);
    for (double& v : p) v = uniform(rng, -0.5, 0.5) * scale;
    return p;
}

double net_forward(std::span<const double> params, double x, double y) {
    require_params(params);
    std::array<State, Net::kDepth + 1> states;
    forward(params, x, y, states);
    return states[Net::kDepth][Net::kOutput];
}

double net_loss(std::span<const double> params, std::span<const Sample> batch) {
    require_params(params);
    if (batch.empty()) throw EmptyBatch("net_loss: batch is empty");
    std::array<State, Net::kDepth + 1> states;
    double sum = 0.0;
    for (const Sample& s : batch) {
        forward(params, s.x, s.y, states);
        const double r = states[Net::kDepth][Net::kOutput] - s.target;
        sum += r * r;
    }
    return sum / static_cast<double>(batch.size());
}

LossAndGradient net_loss_and_grad(std::span<const double> params, std::span<const Sample> batch) {
    require_params(params);
    if (batch.empty()) throw EmptyBatch("net_loss_and_grad: batch is empty");

    const double* w = params.data();
    LossAndGradient out;
    out.gradient.assign(Net::kParamCount, 0.0);
    double* dw = out.gradient.data();
    double* db = out.gradient.data() + Net::kWeightCount;

    std::array<State, Net::kDepth + 1> states;
    State adjoint;
    State delta;
    double sum = 0.0;
    for (const Sample& s : batch) {
        forward(params, s.x, s.y, states);
        const double residual = states[Net::kDepth][Net::kOutput] - s.target;
        sum += residual * residual;

        // Gradients are accumulated unnormalized and scaled once at the end.
        adjoint.fill(0.0);
        adjoint[Net::kOutput] = 2.0 * residual;
        for (std::size_t k = Net::kDepth; k >= 1; --k) {
            const State& post = states[k];
            const State& prev = states[k - 1];
            for (std::size_t i = 0; i < Net::kNeurons; ++i) {
                delta[i] = adjoint[i] * (1.0 - post[i] * post[i]);
            }
            for (std::size_t i = 0; i < Net::kNeurons; ++i) {
                const double d = delta[i];
                db[i] += d;
                double* dwrow = dw + i * Net::kNeurons;
                for (std::size_t j = 0; j < Net::kNeurons; ++j) dwrow[j] += d * prev[j];
            }
            adjoint.fill(0.0);
            for (std::size_t i = 0; i < Net::kNeurons; ++i) {
                const double d = delta[i];
                const double* wrow = w + i * Net::kNeurons;
                for (std::size_t j = 0; j < Net::kNeurons; ++j) adjoint[j] += wrow[j] * d;
            }
        }
    }
    const double inv_n = 1.0 / static_cast<double>(batch.size());
    out.loss = sum * inv_n;
    for (double& g : out.gradient) g *= inv_n;
    return out;
}

std::vector<Sample> sample_batch(std::uint64_t seed, std::size_t size) {
    std::mt19937_64 rng(seed);
    std::vector<Sample> batch(size);
    for (Sample& s : batch) {
        s.x = uniform(rng, -1.0, 1.0);
        s.y = uniform(rng, -1.0, 1.0);
        s.target = s.x * s.y;
    }
    return batch;
}

MultiplyProblem::MultiplyProblem(std::size_t batch_size, std::uint64_t data_seed)
    : batch_size_(batch_size), data_seed_(data_seed) {
    if (batch_size == 0) throw EmptyBatch("MultiplyProblem: batch size must be >= 1");
}

std::vector<Sample> MultiplyProblem::batch(std::uint64_t batch_seed) const {
    return sample_batch(mix_seed(data_seed_, batch_seed), batch_size_);
}

double MultiplyProblem::loss(std::span<const double> q, std::uint64_t batch_seed) const {
    return net_loss(q, batch(batch_seed));
}

Vector MultiplyProblem::gradient(std::span<const double> q, std::uint64_t batch_seed) const {
    return net_loss_and_grad(q, batch(batch_seed)).gradient;
}

LossAndGradient MultiplyProblem::loss_and_gradient(std::span<const double> q,
                                                   std::uint64_t batch_seed) const {
    return net_loss_and_grad(q, batch(batch_seed));
}

}  // namespace cgd
