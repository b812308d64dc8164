// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pinnlab/losses.hpp"
#include "pinnlab/metrics.hpp"
#include "pinnlab/network.hpp"
#include "pinnlab/optim.hpp"
#include "pinnlab/problems.hpp"

namespace pinnlab {

enum class OptimizerKind : std::uint8_t { adam, multiadam, lra, pcgrad };

/// Parses "adam" / "multiadam" / "lra" / "pcgrad"; throws ConfigError listing
/// the known names otherwise.
OptimizerKind optimizer_from_name(const std::string& name);
std::string optimizer_name(OptimizerKind kind);

/// Recommended hyperparameters: MultiAdam runs with its own betas
/// (0.99, 0.99); the baselines use the customary (0.9, 0.999).
HyperParams default_hyper(OptimizerKind kind);

/// One training run, fully specified. Every field is plain data so a config
/// can be serialized, hashed, and reproduced exactly.
struct TrainConfig {
    std::string problem = "poisson-1";
    OptimizerKind optimizer = OptimizerKind::multiadam;
    HyperParams hyper{};
    int epochs = 5000;
    int n_interior = 2000;
    int n_boundary = 400;
    std::vector<std::uint64_t> seeds = {1, 2, 3};
    MlpConfig network;
    int eval_every = 500;
    std::vector<long> histogram_epochs;
    double lra_alpha = 0.1;  // annealing rate, used by the lra optimizer only
};

/// Desk-scale defaults for a registered problem: 3x32 network with the
/// problem's preferred activation, 2000/400 points, 5000 epochs, 3 seeds.
TrainConfig make_desk_config(const std::string& problem, OptimizerKind optimizer);

/// One evaluation-cadence record. weight_estimate_pde is present for
/// MultiAdam runs (the PDE group's second-momentum norm over the boundary
/// group's) and LRA runs (the reciprocal of the annealed boundary weight,
/// i.e. the PDE weight with the boundary's normalized to one).
struct MetricRow {
    long epoch = 0;
    double loss_pde = 0.0;
    double loss_boundary = 0.0;
    double mae = 0.0;
    double rel_l2 = 0.0;
    std::optional<double> weight_estimate_pde;
};

struct HistogramCapture {
    long epoch = 0;
    std::vector<Histogram> groups;
};

struct RunResult {
    std::uint64_t seed = 0;
    MlpConfig network;
    MlpParams params;                  // parameters after the last applied step
    std::vector<LossReport> history;   // one entry per epoch reached
    std::vector<MetricRow> evals;
    std::vector<HistogramCapture> histograms;
    std::optional<long> abort_epoch;   // set when a loss or update went non-finite
    std::string abort_reason;
    double wall_seconds = 0.0;

    bool aborted() const { return abort_epoch.has_value(); }
};

/// Trains one network: fixed sample set drawn once from (problem, seed),
/// full-batch gradients, one optimizer step per epoch. Deterministic for a
/// fixed (cfg, seed). A non-finite loss or update ends the run with the
/// offending epoch recorded instead of throwing.
RunResult train(const TrainConfig& cfg, std::uint64_t seed);

/// One summary cell: means over seeds of the final evaluation metrics.
/// A cell with any aborted run carries no means (rendered "N/A").
struct SuiteRow {
    std::string problem;
    std::string optimizer;
    HyperParams hyper{};
    int runs = 0;
    int aborted = 0;
    std::vector<double> final_mae;     // per completed seed, run order
    std::vector<double> final_rel_l2;
    double mean_mae = 0.0;
    double mean_rel_l2 = 0.0;
    bool valid = false;
};

/// Trains every (config, seed) pair and aggregates one row per config.
/// When `collect` is given it receives the full per-config run results in
/// grid order, for callers that persist histories and checkpoints.
std::vector<SuiteRow> run_suite(const std::vector<TrainConfig>& grid,
                                std::vector<std::vector<RunResult>>* collect = nullptr);

/// The held-out evaluation lattice with reference values for a problem:
/// exact formula for Helmholtz, interpolated relaxation solve for the
/// perforated squares, the integral solution for Burgers. Cached per
/// problem; prediction is left empty.
const EvalGrid& reference_grid(const PdeProblem& problem);

}  // namespace pinnlab
