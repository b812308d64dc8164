// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "pinnlab/fused.hpp"
#include "pinnlab/losses.hpp"
#include "pinnlab/network.hpp"
#include "pinnlab/problems.hpp"

using namespace pinnlab;

namespace {

// Relative agreement with an absolute floor, so near-zero entries do not
// inflate the relative error.
void check_close(const std::vector<double>& a, const std::vector<double>& b, double tol) {
    REQUIRE(a.size() == b.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double scale = std::max({1.0, std::fabs(a[i]), std::fabs(b[i])});
        worst = std::max(worst, std::fabs(a[i] - b[i]) / scale);
    }
    CHECK(worst <= tol);
}

void compare_routes(const std::string& problem_name, Activation act, std::uint64_t seed) {
    PdeProblem problem = make_problem(problem_name);
    MlpConfig config;
    config.hidden_widths = {11, 7};
    config.activation = act;
    MlpParams params = init_glorot_normal(config, seed);
    SampleSet samples = make_samples(problem, 64, 32, seed + 1);
    std::vector<LossGroup> groups = default_groups(samples);

    GroupEval tape_eval = group_gradients(params, config, problem, groups);
    GroupEval fused_eval = fused_group_gradients(params, config, problem, groups);

    REQUIRE(fused_eval.losses.size() == tape_eval.losses.size());
    for (std::size_t g = 0; g < tape_eval.losses.size(); ++g) {
        CHECK(fused_eval.losses[g] ==
              doctest::Approx(tape_eval.losses[g]).epsilon(1e-14));
        check_close(fused_eval.gradients[g], tape_eval.gradients[g], 1e-12);
    }
}

}  // namespace

TEST_CASE("fused engine matches tape gradients on the multi-hole Poisson problem") {
    compare_routes("poisson-8", Activation::tanh, 11);
}

TEST_CASE("fused engine matches tape gradients on the scaled Poisson problem") {
    compare_routes("poisson-1", Activation::tanh, 12);
}

TEST_CASE("fused engine matches tape gradients on Helmholtz with sin activation") {
    compare_routes("helmholtz-1", Activation::sin, 13);
}

TEST_CASE("fused engine matches tape gradients on the thin Helmholtz domain") {
    compare_routes("helmholtz-0.2", Activation::sin, 14);
}

TEST_CASE("fused engine matches tape gradients on Burgers") {
    compare_routes("burgers-1", Activation::tanh, 15);
}

TEST_CASE("fused engine matches tape gradients with a linear activation") {
    compare_routes("poisson-1", Activation::linear, 16);
}

TEST_CASE("fused engine matches tape gradients on a single-hidden-layer net") {
    PdeProblem problem = make_problem("helmholtz-1");
    MlpConfig config;
    config.hidden_widths = {5};
    config.activation = Activation::tanh;
    MlpParams params = init_glorot_normal(config, 7);
    SampleSet samples = make_samples(problem, 16, 8, 8);
    std::vector<LossGroup> groups = default_groups(samples);
    GroupEval tape_eval = group_gradients(params, config, problem, groups);
    GroupEval fused_eval = fused_group_gradients(params, config, problem, groups);
    for (std::size_t g = 0; g < tape_eval.losses.size(); ++g) {
        CHECK(fused_eval.losses[g] ==
              doctest::Approx(tape_eval.losses[g]).epsilon(1e-14));
        check_close(fused_eval.gradients[g], tape_eval.gradients[g], 1e-12);
    }
}

TEST_CASE("fused engine reuses buffers across repeated evaluations") {
    PdeProblem problem = make_problem("poisson-1");
    MlpConfig config;
    config.hidden_widths = {9, 9};
    MlpParams params = init_glorot_normal(config, 21);
    SampleSet samples = make_samples(problem, 32, 16, 22);
    std::vector<LossGroup> groups = default_groups(samples);

    FusedEngine engine(config);
    GroupEval first = engine.evaluate(params, problem, groups);
    GroupEval second = engine.evaluate(params, problem, groups);
    REQUIRE(first.losses.size() == second.losses.size());
    for (std::size_t g = 0; g < first.losses.size(); ++g) {
        CHECK(first.losses[g] == second.losses[g]);
        REQUIRE(first.gradients[g] == second.gradients[g]);
    }
}

TEST_CASE("fused engine rejects mismatched parameter vectors") {
    PdeProblem problem = make_problem("poisson-1");
    MlpConfig config;
    config.hidden_widths = {4};
    MlpParams params = init_glorot_normal(config, 3);
    params.flat.push_back(0.0);
    SampleSet samples = make_samples(problem, 4, 10, 5);
    std::vector<LossGroup> groups = default_groups(samples);
    FusedEngine engine(config);
    CHECK_THROWS_AS(engine.evaluate(params, problem, groups), ShapeMismatch);
}
