// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>
#include <vector>

#include "pinnlab/network.hpp"
#include "pinnlab/problems.hpp"
#include "pinnlab/tape.hpp"

namespace pinnlab {

enum class GroupKind : std::uint8_t { pde, boundary };

/// One optimizer group: either the PDE residual over the interior slice of a
/// sample set or the merged boundary mismatch over its boundary slice.
struct LossGroup {
    std::string id;
    GroupKind kind = GroupKind::pde;
    const SampleSet* samples = nullptr;
    double weight = 1.0;
};

/// The standard two-group split: one PDE group, one merged boundary group.
std::vector<LossGroup> default_groups(const SampleSet& samples);

struct LossReport {
    std::vector<double> losses;
    double total = 0.0;
    long epoch = 0;
};

LossReport make_report(std::span<const LossGroup> groups, std::span<const double> losses,
                       long epoch);

/// Mean squared residual (pde) or mean squared boundary mismatch (boundary),
/// built on the tape so it stays differentiable with respect to `net`.
NodeRef group_loss(Tape& tape, const TapedMlp& net, const PdeProblem& problem,
                   const LossGroup& group);

struct GroupEval {
    std::vector<double> losses;                  // per-group values
    std::vector<std::vector<double>> gradients;  // per-group, full parameter length
};

/// Evaluates every group's loss on one shared tape, then runs one reverse
/// sweep per group. This is the reference gradient route; the trainer's
/// fused kernels are tested against it.
GroupEval group_gradients(const MlpParams& params, const MlpConfig& config,
                          const PdeProblem& problem, std::span<const LossGroup> groups);

struct ScalingRatios {
    double ratio_pde = 0.0;
    double ratio_boundary = 0.0;
};

/// Narrows the domain by t and re-evaluates both losses at matched points
/// x' = x/t with the network u'(x') = u(t x') (first-layer weights scaled by
/// t). For a homogeneous operator of order k the PDE ratio is exactly t^{2k}
/// and the boundary ratio exactly 1; powers of two reproduce this bitwise.
ScalingRatios verify_scaling(const PdeProblem& problem, const MlpParams& params,
                             const MlpConfig& config, double t, std::uint64_t seed,
                             int n_interior = 256, int n_boundary = 128);

}  // namespace pinnlab
