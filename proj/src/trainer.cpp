// SPDX-License-Identifier: Apache-2.0
#include "pinnlab/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>

#include "pinnlab/errors.hpp"
#include "pinnlab/fused.hpp"
#include "pinnlab/oracles.hpp"

namespace pinnlab {

OptimizerKind optimizer_from_name(const std::string& name) {
    if (name == "adam") return OptimizerKind::adam;
    if (name == "multiadam") return OptimizerKind::multiadam;
    if (name == "lra") return OptimizerKind::lra;
    if (name == "pcgrad") return OptimizerKind::pcgrad;
    throw ConfigError("unknown optimizer '" + name +
                      "' (known: adam, multiadam, lra, pcgrad)");
}

std::string optimizer_name(OptimizerKind kind) {
    switch (kind) {
        case OptimizerKind::adam: return "adam";
        case OptimizerKind::multiadam: return "multiadam";
        case OptimizerKind::lra: return "lra";
        case OptimizerKind::pcgrad: return "pcgrad";
    }
    return "?";
}

HyperParams default_hyper(OptimizerKind kind) {
    HyperParams hp;
    if (kind != OptimizerKind::multiadam) {
        hp.beta1 = 0.9;
        hp.beta2 = 0.999;
    }
    return hp;
}

TrainConfig make_desk_config(const std::string& problem, OptimizerKind optimizer) {
    TrainConfig cfg;
    cfg.problem = problem;
    cfg.optimizer = optimizer;
    cfg.hyper = default_hyper(optimizer);
    cfg.network.activation = make_problem(problem).default_activation;
    return cfg;
}

namespace {

bool all_finite(std::span<const double> v) {
    for (double x : v) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

}  // namespace

const EvalGrid& reference_grid(const PdeProblem& problem) {
    static std::mutex mu;
    static std::map<std::string, EvalGrid> cache;
    std::scoped_lock lock(mu);
    auto it = cache.find(problem.name);
    if (it != cache.end()) return it->second;

    EvalGrid grid;
    if (problem.exact) {
        grid = make_eval_grid(problem, problem.exact);
    } else if (problem.residual_kind == ResidualKind::burgers) {
        grid = make_eval_grid(
            problem, [](const Point& p) { return burgers_cole_hopf(p[0], p[1]); }, 256, 100);
    } else {
        const double side = problem.domain.hi[0] - problem.domain.lo[0];
        const FdSolution fd = poisson_fd_solve(problem.domain, side / 256.0, 1e-9);
        grid = make_eval_grid(problem, [&fd](const Point& p) {
            // Lattice points hugging a disk can land in a staircase cell
            // without values; they sit within one fine-grid spacing of the
            // u = 0 circle, so the boundary value stands in.
            try {
                return fd.interpolate(p);
            } catch (const ConfigError&) {
                return 0.0;
            }
        });
    }
    return cache.emplace(problem.name, std::move(grid)).first->second;
}

RunResult train(const TrainConfig& cfg, std::uint64_t seed) {
    if (cfg.epochs < 1) throw ConfigError("epochs must be at least 1");
    if (cfg.eval_every < 1) throw ConfigError("eval_every must be at least 1");
    const auto wall_start = std::chrono::steady_clock::now();

    const PdeProblem problem = make_problem(cfg.problem);
    RunResult run;
    run.seed = seed;
    run.network = cfg.network;
    run.params = init_glorot_normal(cfg.network, seed);

    const SampleSet samples = make_samples(problem, cfg.n_interior, cfg.n_boundary, seed);
    const std::vector<LossGroup> groups = default_groups(samples);
    const std::size_t n_params = run.params.flat.size();
    const std::size_t n_groups = groups.size();

    FusedEngine engine(cfg.network);
    EvalGrid grid = reference_grid(problem);

    AdamState adam;
    MultiAdamState multi;
    LraState lra;
    PcgradState pcgrad{make_adam_state(0), Rng(0)};
    switch (cfg.optimizer) {
        case OptimizerKind::adam: adam = make_adam_state(n_params); break;
        case OptimizerKind::multiadam: multi = make_multiadam_state(n_groups, n_params); break;
        case OptimizerKind::lra: lra = make_lra_state(n_params, cfg.lra_alpha); break;
        case OptimizerKind::pcgrad: pcgrad = make_pcgrad_state(n_params, seed); break;
    }

    std::vector<double> update(n_params, 0.0);
    std::vector<double> combined(n_params, 0.0);

    auto abort_run = [&run](long epoch, std::string why) {
        run.abort_epoch = epoch;
        run.abort_reason = std::move(why);
    };

    for (long epoch = 1; epoch <= cfg.epochs; ++epoch) {
        const GroupEval eval = engine.evaluate(run.params, problem, groups);
        run.history.push_back(make_report(groups, eval.losses, epoch));
        if (!all_finite(eval.losses)) {
            abort_run(epoch, "non-finite loss");
            break;
        }

        // One optimizer step. A gradient or update that went non-finite ends
        // the run the same way a non-finite loss does: recorded, not thrown.
        try {
            switch (cfg.optimizer) {
                case OptimizerKind::adam: {
                    for (std::size_t i = 0; i < n_params; ++i) {
                        combined[i] = eval.gradients[0][i] + eval.gradients[1][i];
                    }
                    adam_step(adam, combined, cfg.hyper, update);
                    break;
                }
                case OptimizerKind::multiadam:
                    multiadam_step(multi, eval.gradients, cfg.hyper, update);
                    break;
                case OptimizerKind::lra:
                    lra_step(lra, eval.gradients[0], eval.gradients[1], cfg.hyper, update);
                    break;
                case OptimizerKind::pcgrad:
                    pcgrad_step(pcgrad, eval.gradients, cfg.hyper, update);
                    break;
            }
        } catch (const NonFiniteGradient&) {
            abort_run(epoch, "non-finite gradient");
            break;
        }
        if (!all_finite(update)) {
            abort_run(epoch, "non-finite update");
            break;
        }
        for (std::size_t i = 0; i < n_params; ++i) run.params.flat[i] += update[i];

        if (!cfg.histogram_epochs.empty() &&
            std::find(cfg.histogram_epochs.begin(), cfg.histogram_epochs.end(), epoch) !=
                cfg.histogram_epochs.end()) {
            HistogramCapture cap;
            cap.epoch = epoch;
            for (std::size_t g = 0; g < n_groups; ++g) {
                HistogramSpec spec;
                spec.group_id = groups[g].id;
                cap.groups.push_back(gradient_histogram(eval.gradients[g], spec));
            }
            run.histograms.push_back(std::move(cap));
        }

        if (epoch % cfg.eval_every == 0 || epoch == cfg.epochs) {
            evaluate_grid(grid, run.params, cfg.network);
            MetricRow row;
            row.epoch = epoch;
            row.loss_pde = eval.losses[0];
            row.loss_boundary = eval.losses[1];
            row.mae = mean_absolute_error(grid.prediction, grid.reference);
            row.rel_l2 = relative_l2(grid.prediction, grid.reference);
            if (cfg.optimizer == OptimizerKind::multiadam) {
                row.weight_estimate_pde = weight_estimate(multi)[0];
            } else if (cfg.optimizer == OptimizerKind::lra) {
                row.weight_estimate_pde = 1.0 / lra.lambda_b;
            }
            run.evals.push_back(row);
        }
    }

    run.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
    return run;
}

std::vector<SuiteRow> run_suite(const std::vector<TrainConfig>& grid,
                                std::vector<std::vector<RunResult>>* collect) {
    if (grid.empty()) throw ConfigError("suite needs at least one configuration");
    std::vector<SuiteRow> rows;
    rows.reserve(grid.size());
    if (collect) collect->clear();
    for (const TrainConfig& cfg : grid) {
        if (cfg.seeds.empty()) throw ConfigError("config has no seeds");
        SuiteRow row;
        row.problem = cfg.problem;
        row.optimizer = optimizer_name(cfg.optimizer);
        row.hyper = cfg.hyper;
        std::vector<RunResult> cell_runs;
        for (std::uint64_t seed : cfg.seeds) {
            RunResult r = train(cfg, seed);
            ++row.runs;
            const bool bad = r.aborted() || r.evals.empty();
            if (!bad) {
                row.final_mae.push_back(r.evals.back().mae);
                row.final_rel_l2.push_back(r.evals.back().rel_l2);
            } else {
                ++row.aborted;
            }
            if (collect) cell_runs.push_back(std::move(r));
        }
        if (collect) collect->push_back(std::move(cell_runs));
        // Any aborted seed voids the cell, matching how a diverging method is
        // reported as N/A rather than averaged over survivors.
        row.valid = row.aborted == 0;
        if (row.valid) {
            row.mean_mae = std::accumulate(row.final_mae.begin(), row.final_mae.end(), 0.0) /
                           static_cast<double>(row.final_mae.size());
            row.mean_rel_l2 =
                std::accumulate(row.final_rel_l2.begin(), row.final_rel_l2.end(), 0.0) /
                static_cast<double>(row.final_rel_l2.size());
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace pinnlab
