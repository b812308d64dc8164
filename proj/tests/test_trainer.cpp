// SPDX-License-Identifier: Apache-2.0
//
// Training loop: deterministic end-to-end runs, evaluation cadence,
// non-finite abort capture, and suite aggregation.
#include <cmath>
#include <numbers>

#include <doctest.h>

#include "pinnlab/errors.hpp"
#include "pinnlab/oracles.hpp"
#include "pinnlab/trainer.hpp"

using namespace pinnlab;

namespace {

// Small network and batch so a full run takes milliseconds.
TrainConfig tiny_config(const std::string& problem, OptimizerKind opt, int epochs) {
    TrainConfig cfg = make_desk_config(problem, opt);
    cfg.network.hidden_widths = {8, 8};
    cfg.epochs = epochs;
    cfg.n_interior = 64;
    cfg.n_boundary = 32;
    cfg.eval_every = 20;
    return cfg;
}

}  // namespace

TEST_CASE("desk config adopts the problem activation and optimizer defaults") {
    const TrainConfig helm = make_desk_config("helmholtz-1", OptimizerKind::multiadam);
    CHECK(helm.network.activation == Activation::sin);
    CHECK(helm.hyper.beta1 == 0.99);
    CHECK(helm.hyper.beta2 == 0.99);
    CHECK(helm.epochs == 5000);
    CHECK(helm.n_interior == 2000);
    CHECK(helm.n_boundary == 400);
    CHECK(helm.seeds.size() == 3);

    const TrainConfig pois = make_desk_config("poisson-1", OptimizerKind::adam);
    CHECK(pois.network.activation == Activation::tanh);
    CHECK(pois.hyper.beta1 == 0.9);
    CHECK(pois.hyper.beta2 == 0.999);

    for (OptimizerKind k : {OptimizerKind::adam, OptimizerKind::multiadam, OptimizerKind::lra,
                            OptimizerKind::pcgrad}) {
        CHECK(optimizer_from_name(optimizer_name(k)) == k);
    }
    CHECK_THROWS_AS(optimizer_from_name("sgd"), ConfigError);
    CHECK_THROWS_AS(make_desk_config("poisson-7", OptimizerKind::adam), ConfigError);
}

TEST_CASE("zero learning rate leaves the parameters at initialization") {
    TrainConfig cfg = tiny_config("helmholtz-1", OptimizerKind::multiadam, 1);
    cfg.hyper.gamma = 0.0;
    cfg.eval_every = 1;
    const RunResult run = train(cfg, 7);
    REQUIRE(!run.aborted());
    const MlpParams fresh = init_glorot_normal(cfg.network, 7);
    REQUIRE(run.params.flat.size() == fresh.flat.size());
    for (std::size_t i = 0; i < fresh.flat.size(); ++i) {
        CHECK(run.params.flat[i] == fresh.flat[i]);
    }
    // The single evaluation row describes the untouched initialization.
    REQUIRE(run.evals.size() == 1);
    EvalGrid grid = reference_grid(make_problem(cfg.problem));
    evaluate_grid(grid, fresh, cfg.network);
    CHECK(run.evals[0].rel_l2 == relative_l2(grid.prediction, grid.reference));
}

TEST_CASE("identical configs and seeds reproduce bit-identical runs") {
    TrainConfig cfg = tiny_config("helmholtz-0.2", OptimizerKind::multiadam, 60);
    cfg.histogram_epochs = {30};
    const RunResult a = train(cfg, 3);
    const RunResult b = train(cfg, 3);
    REQUIRE(!a.aborted());
    REQUIRE(a.history.size() == 60);
    REQUIRE(a.history.size() == b.history.size());
    for (std::size_t e = 0; e < a.history.size(); ++e) {
        for (std::size_t g = 0; g < a.history[e].losses.size(); ++g) {
            CHECK(a.history[e].losses[g] == b.history[e].losses[g]);
        }
    }
    for (std::size_t i = 0; i < a.params.flat.size(); ++i) {
        CHECK(a.params.flat[i] == b.params.flat[i]);
    }
    REQUIRE(a.evals.size() == b.evals.size());
    for (std::size_t r = 0; r < a.evals.size(); ++r) {
        CHECK(a.evals[r].rel_l2 == b.evals[r].rel_l2);
        CHECK(a.evals[r].mae == b.evals[r].mae);
        CHECK(a.evals[r].weight_estimate_pde.value() ==
              b.evals[r].weight_estimate_pde.value());
    }
    REQUIRE(a.histograms.size() == 1);
    REQUIRE(a.histograms[0].groups.size() == 2);
    for (std::size_t g = 0; g < 2; ++g) {
        CHECK(a.histograms[0].groups[g].counts == b.histograms[0].groups[g].counts);
    }
}

TEST_CASE("a run that goes non-finite records the epoch instead of throwing") {
    TrainConfig cfg = tiny_config("helmholtz-1", OptimizerKind::adam, 50);
    cfg.hyper.gamma = 1e150;  // one step flings the weights beyond overflow
    const RunResult run = train(cfg, 1);
    REQUIRE(run.aborted());
    CHECK(*run.abort_epoch >= 1);
    CHECK(*run.abort_epoch <= 50);
    CHECK(run.history.size() == static_cast<std::size_t>(*run.abort_epoch));
    CHECK(!run.abort_reason.empty());
}

TEST_CASE("evaluation cadence and histogram capture land on requested epochs") {
    TrainConfig cfg = tiny_config("helmholtz-1", OptimizerKind::adam, 10);
    cfg.eval_every = 4;
    cfg.histogram_epochs = {3, 7};
    const RunResult run = train(cfg, 2);
    REQUIRE(!run.aborted());
    REQUIRE(run.evals.size() == 3);
    CHECK(run.evals[0].epoch == 4);
    CHECK(run.evals[1].epoch == 8);
    CHECK(run.evals[2].epoch == 10);  // final epoch always evaluated
    CHECK(!run.evals[0].weight_estimate_pde.has_value());

    REQUIRE(run.histograms.size() == 2);
    CHECK(run.histograms[0].epoch == 3);
    CHECK(run.histograms[1].epoch == 7);
    const std::size_t n_params = run.params.flat.size();
    for (const HistogramCapture& cap : run.histograms) {
        REQUIRE(cap.groups.size() == 2);
        for (const Histogram& h : cap.groups) {
            std::size_t total = 0;
            for (std::size_t c : h.counts) total += c;
            CHECK(total == n_params);
        }
    }

    TrainConfig multi = tiny_config("helmholtz-1", OptimizerKind::multiadam, 4);
    multi.eval_every = 2;
    const RunResult mrun = train(multi, 2);
    REQUIRE(!mrun.aborted());
    for (const MetricRow& row : mrun.evals) {
        CHECK(row.weight_estimate_pde.has_value());
        CHECK(*row.weight_estimate_pde > 0.0);
    }
}

TEST_CASE("suite rows average seeds and void aborted cells") {
    TrainConfig good = tiny_config("helmholtz-1", OptimizerKind::multiadam, 30);
    good.seeds = {1, 2, 3};
    TrainConfig bad = tiny_config("helmholtz-1", OptimizerKind::adam, 30);
    bad.hyper.gamma = 1e150;
    bad.seeds = {1, 2};

    const std::vector<SuiteRow> rows = run_suite({good, bad});
    REQUIRE(rows.size() == 2);

    const SuiteRow& ok = rows[0];
    CHECK(ok.valid);
    CHECK(ok.runs == 3);
    CHECK(ok.aborted == 0);
    REQUIRE(ok.final_rel_l2.size() == 3);
    const double mean =
        (ok.final_rel_l2[0] + ok.final_rel_l2[1] + ok.final_rel_l2[2]) / 3.0;
    CHECK(ok.mean_rel_l2 == doctest::Approx(mean).epsilon(1e-12));
    // Each seed entry matches an independent run of the same config.
    const RunResult solo = train(good, 2);
    CHECK(ok.final_rel_l2[1] == solo.evals.back().rel_l2);

    const SuiteRow& na = rows[1];
    CHECK(!na.valid);
    CHECK(na.runs == 2);
    CHECK(na.aborted == 2);
    CHECK(na.final_rel_l2.empty());

    CHECK_THROWS_AS(run_suite({}), ConfigError);
    TrainConfig seedless = good;
    seedless.seeds.clear();
    CHECK_THROWS_AS(run_suite({seedless}), ConfigError);
}

TEST_CASE("reference grids carry each problem's oracle values") {
    const PdeProblem helm = make_problem("helmholtz-1");
    const EvalGrid& hg = reference_grid(helm);
    REQUIRE(hg.points.size() == 101 * 101);
    for (std::size_t i = 0; i < hg.points.size(); i += 997) {
        CHECK(hg.reference[i] == helm.exact(hg.points[i]));
    }

    const PdeProblem pois = make_problem("poisson-1");
    const EvalGrid& pg = reference_grid(pois);
    CHECK(pg.points.size() < 101 * 101);  // disks removed
    for (double v : pg.reference) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }

    const PdeProblem burg = make_problem("burgers-1");
    const EvalGrid& bg = reference_grid(burg);
    REQUIRE(bg.points.size() == 256 * 100);
    for (std::size_t i = 0; i < bg.points.size(); i += 499) {
        CHECK(bg.reference[i] == burgers_cole_hopf(bg.points[i][0], bg.points[i][1]));
    }
}
