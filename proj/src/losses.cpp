// SPDX-License-Identifier: Apache-2.0
#include "pinnlab/losses.hpp"

#include <cmath>

#include "pinnlab/errors.hpp"

namespace pinnlab {

std::vector<LossGroup> default_groups(const SampleSet& samples) {
    std::vector<LossGroup> groups(2);
    groups[0].id = "pde";
    groups[0].kind = GroupKind::pde;
    groups[0].samples = &samples;
    groups[1].id = "boundary";
    groups[1].kind = GroupKind::boundary;
    groups[1].samples = &samples;
    return groups;
}

LossReport make_report(std::span<const LossGroup> groups, std::span<const double> losses,
                       long epoch) {
    if (groups.size() != losses.size()) {
        throw GroupCountMismatch("make_report: group and loss counts differ");
    }
    LossReport r;
    r.epoch = epoch;
    r.losses.assign(losses.begin(), losses.end());
    for (std::size_t i = 0; i < groups.size(); ++i) r.total += groups[i].weight * losses[i];
    return r;
}

NodeRef group_loss(Tape& tape, const TapedMlp& net, const PdeProblem& problem,
                   const LossGroup& group) {
    if (group.samples == nullptr) throw EmptyGroup("group '" + group.id + "' has no sample set");
    if (group.kind == GroupKind::pde) {
        const auto& pts = group.samples->interior;
        if (pts.empty()) throw EmptyGroup("group '" + group.id + "' has no interior points");
        NodeRef acc = tape.constant(0.0);
        for (const Point& x : pts) {
            const Jet2 jet = jet_forward(net, tape, x);
            const NodeRef r = problem.residual(tape, jet, x);
            acc = add(tape, acc, square(tape, r));
        }
        return div(tape, acc, tape.constant(static_cast<double>(pts.size())));
    }
    const auto& pts = group.samples->boundary;
    if (pts.empty()) throw EmptyGroup("group '" + group.id + "' has no boundary points");
    NodeRef acc = tape.constant(0.0);
    for (const BoundaryPoint& bp : pts) {
        const NodeRef u = forward(net, tape, bp.x);
        const NodeRef err = sub(tape, u, tape.constant(bp.target));
        acc = add(tape, acc, square(tape, err));
    }
    return div(tape, acc, tape.constant(static_cast<double>(pts.size())));
}

GroupEval group_gradients(const MlpParams& params, const MlpConfig& config,
                          const PdeProblem& problem, std::span<const LossGroup> groups) {
    if (groups.empty()) throw EmptyGroup("group_gradients: no groups");
    Tape tape;
    const TapedMlp net = register_params(tape, params, config);

    std::vector<NodeRef> loss_nodes;
    loss_nodes.reserve(groups.size());
    for (const LossGroup& g : groups) loss_nodes.push_back(group_loss(tape, net, problem, g));

    GroupEval eval;
    eval.losses.reserve(groups.size());
    eval.gradients.assign(groups.size(), {});
    std::vector<double> scratch;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        eval.losses.push_back(tape.value(loss_nodes[i]));
        eval.gradients[i].assign(params.flat.size(), 0.0);
        backward_into(tape, loss_nodes[i], net.flat, scratch, eval.gradients[i]);
    }
    return eval;
}

namespace {

// Mean squared residual through the plain-double jet route.
double pde_loss_value(const MlpParams& params, const MlpConfig& config, const PdeProblem& problem,
                      std::span<const Point> pts) {
    double acc = 0.0;
    for (const Point& x : pts) {
        const JetVal jet = jet_forward_value(params, config, x);
        const double r = problem.residual_value(jet, x);
        acc += r * r;
    }
    return acc / static_cast<double>(pts.size());
}

double boundary_loss_value(const MlpParams& params, const MlpConfig& config,
                           std::span<const BoundaryPoint> pts) {
    double acc = 0.0;
    for (const BoundaryPoint& bp : pts) {
        const double err = forward_value(params, config, bp.x) - bp.target;
        acc += err * err;
    }
    return acc / static_cast<double>(pts.size());
}

}  // namespace

ScalingRatios verify_scaling(const PdeProblem& problem, const MlpParams& params,
                             const MlpConfig& config, double t, std::uint64_t seed,
                             int n_interior, int n_boundary) {
    if (!(t > 0.0)) throw ConfigError("verify_scaling: t must be positive");
    const SampleSet samples = make_samples(problem, n_interior, n_boundary, seed);

    const double lf = pde_loss_value(params, config, problem, samples.interior);
    const double lb = boundary_loss_value(params, config, samples.boundary);

    // Matched points x' = x/t on the narrowed domain; u'(x') = u(t x') is
    // realized by scaling the first affine layer's weights (not biases) by t.
    const PdeProblem narrowed = scale_domain(problem, t);
    MlpParams scaled = params;
    const LayerLayout& first = scaled.layout.front();
    const std::size_t wcount =
        static_cast<std::size_t>(first.rows) * static_cast<std::size_t>(first.cols);
    for (std::size_t i = 0; i < wcount; ++i) scaled.flat[first.weight_offset + i] *= t;

    std::vector<Point> interior2(samples.interior.size());
    for (std::size_t i = 0; i < interior2.size(); ++i) {
        interior2[i] = {samples.interior[i][0] / t, samples.interior[i][1] / t};
    }
    std::vector<BoundaryPoint> boundary2(samples.boundary.size());
    for (std::size_t i = 0; i < boundary2.size(); ++i) {
        boundary2[i] = samples.boundary[i];
        boundary2[i].x = {samples.boundary[i].x[0] / t, samples.boundary[i].x[1] / t};
        // target is unchanged: g'(x') = g(t x')
    }

    const double lf2 = pde_loss_value(scaled, config, narrowed, interior2);
    const double lb2 = boundary_loss_value(scaled, config, boundary2);

    return ScalingRatios{lf2 / lf, lb2 / lb};
}

}  // namespace pinnlab
