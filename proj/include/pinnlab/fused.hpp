// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "pinnlab/losses.hpp"
#include "pinnlab/network.hpp"
#include "pinnlab/problems.hpp"

namespace pinnlab {

/// Tape-free evaluator of group losses and parameter gradients.
///
/// The training loop needs, per epoch, the same quantities group_gradients
/// produces — but that route materializes tens of thousands of tape nodes
/// per collocation point. This engine propagates (value, gradient, Hessian)
/// jets through the network with hand-derived forward and reverse passes
/// over flat per-layer buffers, so a full epoch touches only a few KB of
/// state. Results agree with group_gradients to roundoff (see tests); the
/// tape route remains the reference implementation.
class FusedEngine {
public:
    explicit FusedEngine(const MlpConfig& config);

    /// Drop-in equivalent of group_gradients for the same (params, problem,
    /// groups). Buffers are reused across calls.
    GroupEval evaluate(const MlpParams& params, const PdeProblem& problem,
                       std::span<const LossGroup> groups);

private:
    // One collocation point: jet forward, residual seed, reverse sweep
    // accumulating 2r/n-scaled parameter gradients into `grad`.
    double interior_point(const MlpParams& params, const PdeProblem& problem, const Point& x,
                          double inv_n, std::vector<double>& grad);
    // One boundary point: value forward and plain backprop.
    double boundary_point(const MlpParams& params, const BoundaryPoint& bp, double inv_n,
                          std::vector<double>& grad);

    void forward_jets(const MlpParams& params, const Point& x);
    void forward_value_only(const MlpParams& params, const Point& x);
    // Reverse pass from the output adjoint jet seeded in adj_out_;
    // ncomp > 1 for jets, 1 for value-only. Dispatches to a fixed-size
    // implementation so the per-component accumulations unroll.
    void backward(const MlpParams& params, int ncomp, std::vector<double>& grad);
    template <int NC>
    void backward_impl(const MlpParams& params, std::vector<double>& grad);
    // Select which second-derivative components the residual needs: the
    // Laplacian kinds skip the mixed entry, the advection kind also skips
    // the second space-time derivative.
    void configure_comps(ResidualKind kind);

    // Column-major copies of the weight matrices, refreshed once per
    // evaluate call. They let the jet forward pass run as per-column axpy
    // updates, which vectorize under strict FP semantics (unlike row dot
    // products, whose reduction order the compiler must preserve).
    void refresh_weight_transposes(const MlpParams& params);

    MlpConfig config_;
    std::vector<LayerLayout> layout_;
    std::vector<std::vector<double>> wt_;  // wt_[l][col * rows + r]
    int depth_ = 0;     // number of affine layers
    int maxw_ = 0;      // widest layer (inputs included)
    static constexpr int kDim = 2;
    static constexpr int kMaxHess = 3;
    static constexpr int kComps = 1 + kDim + kMaxHess;  // val, g0, g1, hess...

    // Active component set (set per problem by configure_comps). Components
    // 0..2 are always value and the two first derivatives; components
    // 3..3+nhess_-1 are second derivatives d2/dx_{hi}dx_{hj}.
    int ncomp_ = kComps;
    int nhess_ = kMaxHess;
    int hess_i_[kMaxHess] = {0, 0, 1};
    int hess_j_[kMaxHess] = {0, 1, 1};

    // Forward storage, comp-major per layer: buffer[c * maxw_ + i].
    std::vector<std::vector<double>> input_;  // input jets of each affine layer
    std::vector<std::vector<double>> pre_;    // pre-activation jets (hidden layers)
    std::vector<std::vector<double>> dphi_;   // activation first derivative
    std::vector<double> out_;                 // output-layer jet (width 1)

    // Reverse storage.
    std::vector<double> adj_a_, adj_b_, adj_out_;
};

/// Convenience wrapper constructing a throwaway engine.
GroupEval fused_group_gradients(const MlpParams& params, const MlpConfig& config,
                                const PdeProblem& problem, std::span<const LossGroup> groups);

}  // namespace pinnlab
