// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "pinnlab/problems.hpp"

namespace pinnlab {

/// sqrt(sum |pred - ref|^2) / sqrt(sum |ref|^2). Throws ZeroReference when
/// the reference is identically zero.
double relative_l2(std::span<const double> pred, std::span<const double> ref);

/// (1/N) sum |pred_i - ref_i|
double mean_absolute_error(std::span<const double> pred, std::span<const double> ref);

struct HistogramSpec {
    int bins = 61;   // odd so one bin is centered on zero
    bool auto_range = true;
    double lo = 0.0;
    double hi = 0.0;
    std::string group_id;
};

struct Histogram {
    std::vector<double> edges;        // bins + 1 ascending edges
    std::vector<std::size_t> counts;  // per bin; entries outside the range
                                      // land in the nearest edge bin
    std::string group_id;
};

/// Bins gradient entries. Auto range is symmetric about zero and covers the
/// 99th percentile of |entries|; counts always sum to the entry count.
Histogram gradient_histogram(std::span<const double> grad, const HistogramSpec& spec);

/// Fraction of entries in the bin containing zero — the concentration
/// diagnostic used to compare optimizers' PDE-gradient distributions.
double central_bin_fraction(const Histogram& hist);

/// Held-out evaluation lattice: nx-by-ny points over the bounding rectangle
/// filtered to the domain, with reference values from `reference`.
struct EvalGrid {
    std::vector<Point> points;
    std::vector<double> reference;
    std::vector<double> prediction;
};

EvalGrid make_eval_grid(const PdeProblem& problem,
                        const std::function<double(const Point&)>& reference, int nx = 101,
                        int ny = 101);

/// Fills grid.prediction with the network's values at grid.points.
void evaluate_grid(EvalGrid& grid, const MlpParams& params, const MlpConfig& config);

}  // namespace pinnlab
