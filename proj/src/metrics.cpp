// SPDX-License-Identifier: Apache-2.0
#include "pinnlab/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "pinnlab/errors.hpp"

namespace pinnlab {

double relative_l2(std::span<const double> pred, std::span<const double> ref) {
    if (pred.size() != ref.size() || pred.empty()) {
        throw ShapeMismatch("relative_l2: vectors must have equal nonzero length");
    }
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double d = pred[i] - ref[i];
        num += d * d;
        den += ref[i] * ref[i];
    }
    if (den == 0.0) throw ZeroReference("relative_l2: reference is identically zero");
    return std::sqrt(num) / std::sqrt(den);
}

double mean_absolute_error(std::span<const double> pred, std::span<const double> ref) {
    if (pred.size() != ref.size() || pred.empty()) {
        throw ShapeMismatch("mean_absolute_error: vectors must have equal nonzero length");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) acc += std::abs(pred[i] - ref[i]);
    return acc / static_cast<double>(pred.size());
}

Histogram gradient_histogram(std::span<const double> grad, const HistogramSpec& spec) {
    if (spec.bins < 1) throw ConfigError("gradient_histogram: bins must be at least 1");
    for (double x : grad) {
        if (!std::isfinite(x)) throw NonFiniteGradient("gradient_histogram: non-finite entry");
    }
    double lo = spec.lo, hi = spec.hi;
    if (spec.auto_range) {
        std::vector<double> mags(grad.size());
        for (std::size_t i = 0; i < grad.size(); ++i) mags[i] = std::abs(grad[i]);
        std::sort(mags.begin(), mags.end());
        double p99 = 0.0;
        if (!mags.empty()) {
            const std::size_t idx =
                static_cast<std::size_t>(std::ceil(0.99 * static_cast<double>(mags.size()))) - 1;
            p99 = mags[std::min(idx, mags.size() - 1)];
        }
        if (p99 == 0.0) p99 = 1e-12;  // keep the all-zero gradient in one central bin
        lo = -p99;
        hi = p99;
    }
    if (!(hi > lo)) throw ConfigError("gradient_histogram: empty range");

    Histogram h;
    h.group_id = spec.group_id;
    h.edges.resize(static_cast<std::size_t>(spec.bins) + 1);
    const double width = (hi - lo) / spec.bins;
    for (int i = 0; i <= spec.bins; ++i) {
        h.edges[static_cast<std::size_t>(i)] = lo + width * i;
    }
    h.counts.assign(static_cast<std::size_t>(spec.bins), 0);
    for (double x : grad) {
        int bin = static_cast<int>(std::floor((x - lo) / width));
        bin = std::clamp(bin, 0, spec.bins - 1);  // outliers to the edge bins
        h.counts[static_cast<std::size_t>(bin)] += 1;
    }
    return h;
}

double central_bin_fraction(const Histogram& hist) {
    std::size_t total = 0;
    for (std::size_t c : hist.counts) total += c;
    if (total == 0) return 0.0;
    for (std::size_t i = 0; i + 1 < hist.edges.size(); ++i) {
        if (hist.edges[i] <= 0.0 && 0.0 < hist.edges[i + 1]) {
            return static_cast<double>(hist.counts[i]) / static_cast<double>(total);
        }
    }
    return 0.0;
}

EvalGrid make_eval_grid(const PdeProblem& problem,
                        const std::function<double(const Point&)>& reference, int nx, int ny) {
    if (nx < 2 || ny < 2) throw ConfigError("make_eval_grid: lattice needs at least 2x2 points");
    EvalGrid grid;
    const Domain& d = problem.domain;
    for (int j = 0; j < ny; ++j) {
        const double y = d.lo[1] + (d.hi[1] - d.lo[1]) * j / (ny - 1);
        for (int i = 0; i < nx; ++i) {
            const double x = d.lo[0] + (d.hi[0] - d.lo[0]) * i / (nx - 1);
            const Point p = {x, y};
            bool keep = true;
            for (const Disk& disk : d.disks) {
                const double dx = p[0] - disk.center[0];
                const double dy = p[1] - disk.center[1];
                if (dx * dx + dy * dy < disk.radius * disk.radius) {
                    keep = false;
                    break;
                }
            }
            if (!keep) continue;
            grid.points.push_back(p);
            grid.reference.push_back(reference(p));
        }
    }
    grid.prediction.assign(grid.points.size(), 0.0);
    return grid;
}

void evaluate_grid(EvalGrid& grid, const MlpParams& params, const MlpConfig& config) {
    grid.prediction.resize(grid.points.size());
    for (std::size_t i = 0; i < grid.points.size(); ++i) {
        grid.prediction[i] = forward_value(params, config, grid.points[i]);
    }
}

}  // namespace pinnlab
