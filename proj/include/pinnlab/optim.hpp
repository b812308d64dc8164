// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pinnlab/rng.hpp"

namespace pinnlab {

struct HyperParams {
    double gamma = 0.001;
    double beta1 = 0.99;
    double beta2 = 0.99;
    double epsilon = 1e-8;
};

/// Classic Adam moments. beta powers are carried incrementally so bias
/// correction is identical across every optimizer built on this state.
struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    long t = 0;
    double beta1_pow = 1.0;
    double beta2_pow = 1.0;
};

AdamState make_adam_state(std::size_t n);

/// Independent Adam moments per loss group sharing one step counter.
struct MultiAdamState {
    std::vector<std::vector<double>> m;
    std::vector<std::vector<double>> v;
    long t = 0;
    double beta1_pow = 1.0;
    double beta2_pow = 1.0;
    std::size_t boundary_index = 1;  // group whose ||v|| normalizes weight_estimate
};

MultiAdamState make_multiadam_state(std::size_t groups, std::size_t n);

/// One Adam step: moments decay with beta1/beta2, bias-corrected, update
/// entry -gamma * m_hat / (sqrt(v_hat) + epsilon). Throws NonFiniteGradient
/// on NaN/inf gradient entries.
void adam_step(AdamState& state, std::span<const double> g, const HyperParams& hp,
               std::span<double> update);

/// One MultiAdam step: per-group Adam moments, update is the mean of the
/// per-group preconditioned directions scaled by -gamma. With one group this
/// reproduces adam_step bit-for-bit.
void multiadam_step(MultiAdamState& state, std::span<const std::vector<double>> grads,
                    const HyperParams& hp, std::span<double> update);

/// Learning-rate annealing baseline: a running boundary weight chases
/// max|g_pde| / mean|g_boundary|, and Adam runs on g_pde + lambda * g_b.
struct LraState {
    AdamState adam;
    double lambda_b = 1.0;
    double alpha = 0.1;
};

LraState make_lra_state(std::size_t n, double alpha = 0.1);

void lra_step(LraState& state, std::span<const double> g_pde, std::span<const double> g_boundary,
              const HyperParams& hp, std::span<double> update);

/// Gradient-surgery baseline: each task gradient is projected off every
/// conflicting task gradient (negative inner product) in shuffled order, the
/// surgered gradients are summed and fed to one Adam state.
struct PcgradState {
    AdamState adam;
    Rng rng;
};

PcgradState make_pcgrad_state(std::size_t n, std::uint64_t seed);

void pcgrad_step(PcgradState& state, std::span<const std::vector<double>> grads,
                 const HyperParams& hp, std::span<double> update);

/// ||v_i||_2 per group divided by the boundary group's value, so the
/// boundary entry is 1. Throws ZeroMomentum when ||v_boundary|| = 0.
std::vector<double> weight_estimate(const MultiAdamState& state);

}  // namespace pinnlab
