// SPDX-License-Identifier: Apache-2.0
#include "pinnlab/optim.hpp"

#include <cmath>

#include "pinnlab/errors.hpp"

namespace pinnlab {

namespace {

void check_finite(std::span<const double> g) {
    for (double x : g) {
        if (!std::isfinite(x)) throw NonFiniteGradient("gradient contains NaN or infinity");
    }
}

void check_hyper(const HyperParams& hp) {
    // gamma = 0 is allowed: it yields the zero update, which the trainer's
    // no-op contract depends on.
    if (!(hp.gamma >= 0.0)) throw ConfigError("gamma must be non-negative");
    if (hp.beta1 < 0.0 || hp.beta1 >= 1.0 || hp.beta2 < 0.0 || hp.beta2 >= 1.0) {
        throw ConfigError("betas must lie in [0, 1)");
    }
    if (hp.epsilon < 0.0) throw ConfigError("epsilon must be non-negative");
}

// Bias-corrected preconditioned direction for one coordinate.
inline double adam_direction(double m, double v, double bc1, double bc2, double eps) {
    const double mhat = m / bc1;
    const double vhat = v / bc2;
    return mhat / (std::sqrt(vhat) + eps);
}

void update_moments(std::vector<double>& m, std::vector<double>& v, std::span<const double> g,
                    const HyperParams& hp) {
    for (std::size_t i = 0; i < g.size(); ++i) {
        m[i] = hp.beta1 * m[i] + (1.0 - hp.beta1) * g[i];
        v[i] = hp.beta2 * v[i] + (1.0 - hp.beta2) * g[i] * g[i];
    }
}

}  // namespace

AdamState make_adam_state(std::size_t n) {
    AdamState s;
    s.m.assign(n, 0.0);
    s.v.assign(n, 0.0);
    return s;
}

MultiAdamState make_multiadam_state(std::size_t groups, std::size_t n) {
    MultiAdamState s;
    s.m.assign(groups, std::vector<double>(n, 0.0));
    s.v.assign(groups, std::vector<double>(n, 0.0));
    if (groups < 2) s.boundary_index = 0;
    return s;
}

void adam_step(AdamState& state, std::span<const double> g, const HyperParams& hp,
               std::span<double> update) {
    check_hyper(hp);
    if (g.size() != state.m.size() || update.size() != g.size()) {
        throw ShapeMismatch("adam_step: gradient length does not match state");
    }
    check_finite(g);
    state.t += 1;
    state.beta1_pow *= hp.beta1;
    state.beta2_pow *= hp.beta2;
    const double bc1 = 1.0 - state.beta1_pow;
    const double bc2 = 1.0 - state.beta2_pow;
    update_moments(state.m, state.v, g, hp);
    for (std::size_t i = 0; i < g.size(); ++i) {
        update[i] = -hp.gamma * adam_direction(state.m[i], state.v[i], bc1, bc2, hp.epsilon);
    }
}

void multiadam_step(MultiAdamState& state, std::span<const std::vector<double>> grads,
                    const HyperParams& hp, std::span<double> update) {
    check_hyper(hp);
    if (grads.size() != state.m.size()) {
        throw GroupCountMismatch("multiadam_step: expected " + std::to_string(state.m.size()) +
                                 " gradient groups, got " + std::to_string(grads.size()));
    }
    const std::size_t n_params = state.m.empty() ? 0 : state.m[0].size();
    for (const auto& g : grads) {
        if (g.size() != n_params) throw ShapeMismatch("multiadam_step: gradient length mismatch");
        check_finite(g);
    }
    if (update.size() != n_params) throw ShapeMismatch("multiadam_step: update length mismatch");

    state.t += 1;
    state.beta1_pow *= hp.beta1;
    state.beta2_pow *= hp.beta2;
    const double bc1 = 1.0 - state.beta1_pow;
    const double bc2 = 1.0 - state.beta2_pow;
    const double n_groups = static_cast<double>(grads.size());
    const double scale = -(hp.gamma / n_groups);

    for (std::size_t i = 0; i < n_params; ++i) update[i] = 0.0;
    for (std::size_t gi = 0; gi < grads.size(); ++gi) {
        update_moments(state.m[gi], state.v[gi], grads[gi], hp);
        for (std::size_t i = 0; i < n_params; ++i) {
            update[i] += adam_direction(state.m[gi][i], state.v[gi][i], bc1, bc2, hp.epsilon);
        }
    }
    for (std::size_t i = 0; i < n_params; ++i) update[i] *= scale;
}

LraState make_lra_state(std::size_t n, double alpha) {
    LraState s;
    s.adam = make_adam_state(n);
    s.alpha = alpha;
    return s;
}

void lra_step(LraState& state, std::span<const double> g_pde, std::span<const double> g_boundary,
              const HyperParams& hp, std::span<double> update) {
    if (g_pde.size() != g_boundary.size()) throw ShapeMismatch("lra_step: gradient length mismatch");
    check_finite(g_pde);
    check_finite(g_boundary);
    double max_f = 0.0;
    double mean_b = 0.0;
    for (double x : g_pde) max_f = std::max(max_f, std::abs(x));
    for (double x : g_boundary) mean_b += std::abs(x);
    mean_b /= static_cast<double>(g_boundary.size());
    if (mean_b < 1e-300) throw DegenerateGradient("lra_step: boundary gradient is numerically zero");
    const double lambda_hat = max_f / mean_b;
    state.lambda_b = (1.0 - state.alpha) * state.lambda_b + state.alpha * lambda_hat;

    std::vector<double> combined(g_pde.size());
    for (std::size_t i = 0; i < combined.size(); ++i) {
        combined[i] = g_pde[i] + state.lambda_b * g_boundary[i];
    }
    adam_step(state.adam, combined, hp, update);
}

PcgradState make_pcgrad_state(std::size_t n, std::uint64_t seed) {
    return PcgradState{make_adam_state(n), Rng::derive(seed, 0x9C9C)};
}

void pcgrad_step(PcgradState& state, std::span<const std::vector<double>> grads,
                 const HyperParams& hp, std::span<double> update) {
    if (grads.size() < 2) throw GroupCountMismatch("pcgrad_step: needs at least two groups");
    const std::size_t n = grads[0].size();
    for (const auto& g : grads) {
        if (g.size() != n) throw ShapeMismatch("pcgrad_step: gradient length mismatch");
        check_finite(g);
    }

    std::vector<double> norms_sq(grads.size(), 0.0);
    for (std::size_t j = 0; j < grads.size(); ++j) {
        for (double x : grads[j]) norms_sq[j] += x * x;
    }

    std::vector<double> sum(n, 0.0);
    std::vector<double> surgered;
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < grads.size(); ++i) {
        surgered.assign(grads[i].begin(), grads[i].end());
        order.clear();
        for (std::size_t j = 0; j < grads.size(); ++j) {
            if (j != i) order.push_back(j);
        }
        // Fisher-Yates shuffle of the opposing task order.
        for (std::size_t k = order.size(); k > 1; --k) {
            std::swap(order[k - 1], order[state.rng.below(k)]);
        }
        for (std::size_t j : order) {
            if (norms_sq[j] == 0.0) continue;
            double dot = 0.0;
            for (std::size_t c = 0; c < n; ++c) dot += surgered[c] * grads[j][c];
            if (dot < 0.0) {
                const double coef = dot / norms_sq[j];
                for (std::size_t c = 0; c < n; ++c) surgered[c] -= coef * grads[j][c];
            }
        }
        for (std::size_t c = 0; c < n; ++c) sum[c] += surgered[c];
    }
    adam_step(state.adam, sum, hp, update);
}

std::vector<double> weight_estimate(const MultiAdamState& state) {
    if (state.t < 1) throw ZeroMomentum("weight_estimate: no steps taken yet");
    std::vector<double> norms(state.v.size(), 0.0);
    for (std::size_t gi = 0; gi < state.v.size(); ++gi) {
        double acc = 0.0;
        for (double x : state.v[gi]) acc += x * x;
        norms[gi] = std::sqrt(acc);
    }
    const double base = norms.at(state.boundary_index);
    if (base == 0.0) throw ZeroMomentum("weight_estimate: boundary second momentum is zero");
    for (double& x : norms) x /= base;
    return norms;
}

}  // namespace pinnlab
