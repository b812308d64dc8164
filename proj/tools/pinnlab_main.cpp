// SPDX-License-Identifier: Apache-2.0
//
// pinnlab command-line front end.
//
// Subcommands:
//   run             train a suite described by a JSON config plus overrides
//   ablate-betas    run the (beta1, beta2) grid on one problem
//   verify-scaling  check the t^{2k} loss ratio under domain narrowing
//   weights         theoretical loss-weight constants, with optional run overlay
//   oracle          dump a reference solution field as CSV
//
// Exit codes: 0 success, 1 configuration error, 2 runtime failure,
// 3 tolerance failure (verify-scaling only).

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pinnlab/errors.hpp"
#include "pinnlab/losses.hpp"
#include "pinnlab/metrics.hpp"
#include "pinnlab/network.hpp"
#include "pinnlab/oracles.hpp"
#include "pinnlab/problems.hpp"
#include "pinnlab/trainer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "1.0.0";
constexpr const char* kSeedEnv = "PINNLAB_SEED";

std::string fmt_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_short(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string iso_utc_now() {
    const std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return buf;
}

pinnlab::Activation activation_from_name(const std::string& name) {
    if (name == "tanh") return pinnlab::Activation::tanh;
    if (name == "sin") return pinnlab::Activation::sin;
    if (name == "linear") return pinnlab::Activation::linear;
    throw pinnlab::ConfigError("unknown activation '" + name +
                               "' (known: tanh, sin, linear)");
}

const char* activation_label(pinnlab::Activation a) {
    switch (a) {
        case pinnlab::Activation::tanh: return "tanh";
        case pinnlab::Activation::sin: return "sin";
        case pinnlab::Activation::linear: return "linear";
    }
    return "?";
}

/// Baseline config document; `--set` overrides and config files are merged
/// into this. network.activation null means "the problem's default".
json default_config_doc() {
    return json{
        {"output_dir", "runs/latest"},
        {"problems", json::array({"poisson-1"})},
        {"optimizers", json::array({"multiadam"})},
        {"seeds", json::array({1, 2, 3})},
        {"epochs", 5000},
        {"n_interior", 2000},
        {"n_boundary", 400},
        {"eval_every", 500},
        {"histogram_epochs", json::array()},
        {"network", json{{"hidden_widths", json::array({32, 32, 32})},
                         {"activation", nullptr}}},
        {"hyper", json::object()},
    };
}

/// Applies one `--set key=value` override. Bare keys for common fields are
/// aliased to their dotted locations; values parse as JSON when they can and
/// fall back to plain strings.
void apply_override(json& doc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw pinnlab::ConfigError("override '" + assignment + "' is not of the form key=value");
    std::string key = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);

    static const std::map<std::string, std::string> alias = {
        {"gamma", "hyper.gamma"},           {"beta1", "hyper.beta1"},
        {"beta2", "hyper.beta2"},           {"epsilon", "hyper.epsilon"},
        {"lra_alpha", "hyper.lra_alpha"},   {"activation", "network.activation"},
        {"width", "network.width"},         {"depth", "network.depth"},
        {"hidden_widths", "network.hidden_widths"},
        {"problem", "problems"},            {"optimizer", "optimizers"},
    };
    if (const auto it = alias.find(key); it != alias.end()) key = it->second;

    json value;
    try {
        value = json::parse(raw);
    } catch (const json::exception&) {
        value = raw;
    }
    if ((key == "problems" || key == "optimizers") && value.is_string())
        value = json::array({value});

    json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const auto dot = key.find('.', start);
        if (dot == std::string::npos) {
            (*node)[key.substr(start)] = value;
            return;
        }
        node = &(*node)[key.substr(start, dot - start)];
        start = dot + 1;
    }
}

std::vector<std::uint64_t> seeds_from_doc(const json& doc) {
    std::vector<std::uint64_t> seeds;
    for (const auto& s : doc.at("seeds")) seeds.push_back(s.get<std::uint64_t>());
    if (const char* env = std::getenv(kSeedEnv)) {
        seeds = {std::stoull(env)};
    }
    return seeds;
}

pinnlab::MlpConfig network_from_doc(const json& doc, pinnlab::Activation fallback) {
    pinnlab::MlpConfig net;
    net.activation = fallback;
    const json& nd = doc.at("network");
    if (nd.contains("hidden_widths")) {
        net.hidden_widths = nd.at("hidden_widths").get<std::vector<int>>();
    }
    if (nd.contains("width") || nd.contains("depth")) {
        const int width = nd.value("width", 32);
        const int depth = nd.value("depth", 3);
        if (width < 1 || depth < 1)
            throw pinnlab::ConfigError("network.width and network.depth must be positive");
        net.hidden_widths.assign(static_cast<std::size_t>(depth), width);
    }
    if (nd.contains("activation") && !nd.at("activation").is_null()) {
        net.activation = activation_from_name(nd.at("activation").get<std::string>());
    }
    return net;
}

/// Expands the config document into the problems-by-optimizers grid.
std::vector<pinnlab::TrainConfig> build_grid(const json& doc) {
    std::vector<pinnlab::TrainConfig> grid;
    const std::vector<std::uint64_t> seeds = seeds_from_doc(doc);
    for (const auto& problem : doc.at("problems")) {
        for (const auto& opt : doc.at("optimizers")) {
            pinnlab::TrainConfig cfg = pinnlab::make_desk_config(
                problem.get<std::string>(),
                pinnlab::optimizer_from_name(opt.get<std::string>()));
            cfg.epochs = doc.at("epochs").get<int>();
            cfg.n_interior = doc.at("n_interior").get<int>();
            cfg.n_boundary = doc.at("n_boundary").get<int>();
            cfg.eval_every = doc.at("eval_every").get<int>();
            cfg.histogram_epochs = doc.at("histogram_epochs").get<std::vector<long>>();
            cfg.seeds = seeds;
            cfg.network = network_from_doc(doc, cfg.network.activation);
            const json& hp = doc.at("hyper");
            if (hp.contains("gamma")) cfg.hyper.gamma = hp.at("gamma").get<double>();
            if (hp.contains("beta1")) cfg.hyper.beta1 = hp.at("beta1").get<double>();
            if (hp.contains("beta2")) cfg.hyper.beta2 = hp.at("beta2").get<double>();
            if (hp.contains("epsilon")) cfg.hyper.epsilon = hp.at("epsilon").get<double>();
            if (hp.contains("lra_alpha")) cfg.lra_alpha = hp.at("lra_alpha").get<double>();
            grid.push_back(std::move(cfg));
        }
    }
    return grid;
}

std::string run_label(const pinnlab::TrainConfig& cfg) {
    return cfg.problem + "_" + pinnlab::optimizer_name(cfg.optimizer);
}

json hyper_to_json(const pinnlab::HyperParams& hp) {
    return json{{"gamma", hp.gamma},
                {"beta1", hp.beta1},
                {"beta2", hp.beta2},
                {"epsilon", hp.epsilon}};
}

json config_to_json(const pinnlab::TrainConfig& cfg) {
    return json{{"problem", cfg.problem},
                {"optimizer", pinnlab::optimizer_name(cfg.optimizer)},
                {"hyper", hyper_to_json(cfg.hyper)},
                {"lra_alpha", cfg.lra_alpha},
                {"epochs", cfg.epochs},
                {"n_interior", cfg.n_interior},
                {"n_boundary", cfg.n_boundary},
                {"seeds", cfg.seeds},
                {"eval_every", cfg.eval_every},
                {"histogram_epochs", cfg.histogram_epochs},
                {"network", json{{"hidden_widths", cfg.network.hidden_widths},
                                 {"activation", activation_label(cfg.network.activation)}}}};
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);  // binary: LF endings everywhere
    if (!out) throw pinnlab::ConfigError("cannot open '" + path.string() + "' for writing");
    out << text;
}

/// The manifest is written before any training so a crashed or interrupted
/// suite still leaves enough on disk to reproduce it.
void write_manifest(const fs::path& dir, const std::vector<pinnlab::TrainConfig>& grid,
                    const std::vector<std::string>& labels, const json& doc,
                    const std::vector<std::string>& argv_tail) {
    json manifest;
    manifest["tool"] = "pinnlab";
    manifest["version"] = kVersion;
    manifest["started"] = iso_utc_now();
    manifest["output_dir"] = dir.string();
    manifest["invocation"] = argv_tail;
    manifest["config"] = doc;
    if (const char* env = std::getenv(kSeedEnv)) manifest["seed_override"] = env;
    json cells = json::array();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        json cell = config_to_json(grid[i]);
        cell["label"] = labels[i];
        cells.push_back(std::move(cell));
    }
    manifest["cells"] = std::move(cells);
    write_text(dir / "manifest.json", manifest.dump(2) + "\n");
}

void write_history_csv(const fs::path& dir, const std::vector<pinnlab::TrainConfig>& grid,
                       const std::vector<std::string>& labels,
                       const std::vector<std::vector<pinnlab::RunResult>>& results) {
    std::string out = "run_id,problem,optimizer,seed,epoch,loss_pde,loss_boundary\n";
    for (std::size_t c = 0; c < grid.size(); ++c) {
        for (const pinnlab::RunResult& run : results[c]) {
            const std::string id = labels[c] + "_s" + std::to_string(run.seed);
            for (const pinnlab::LossReport& rep : run.history) {
                out += id + ',' + grid[c].problem + ',' +
                       pinnlab::optimizer_name(grid[c].optimizer) + ',' +
                       std::to_string(run.seed) + ',' + std::to_string(rep.epoch) + ',' +
                       fmt_full(rep.losses.at(0)) + ',' + fmt_full(rep.losses.at(1)) + '\n';
            }
        }
    }
    write_text(dir / "history.csv", out);
}

void write_metrics_csv(const fs::path& dir, const std::vector<pinnlab::TrainConfig>& grid,
                       const std::vector<std::string>& labels,
                       const std::vector<std::vector<pinnlab::RunResult>>& results) {
    std::string out =
        "run_id,problem,optimizer,seed,epoch,loss_pde,loss_boundary,mae,rel_l2,"
        "weight_estimate_pde\n";
    for (std::size_t c = 0; c < grid.size(); ++c) {
        for (const pinnlab::RunResult& run : results[c]) {
            const std::string id = labels[c] + "_s" + std::to_string(run.seed);
            for (const pinnlab::MetricRow& row : run.evals) {
                out += id + ',' + grid[c].problem + ',' +
                       pinnlab::optimizer_name(grid[c].optimizer) + ',' +
                       std::to_string(run.seed) + ',' + std::to_string(row.epoch) + ',' +
                       fmt_full(row.loss_pde) + ',' + fmt_full(row.loss_boundary) + ',' +
                       fmt_full(row.mae) + ',' + fmt_full(row.rel_l2) + ',' +
                       (row.weight_estimate_pde ? fmt_full(*row.weight_estimate_pde)
                                                : std::string{}) +
                       '\n';
            }
        }
    }
    write_text(dir / "metrics.csv", out);
}

json histogram_to_json(const pinnlab::Histogram& h) {
    return json{{"group_id", h.group_id}, {"edges", h.edges}, {"counts", h.counts}};
}

void write_run_artifacts(const fs::path& dir, const std::vector<pinnlab::TrainConfig>& grid,
                         const std::vector<std::string>& labels,
                         const std::vector<std::vector<pinnlab::RunResult>>& results) {
    fs::create_directories(dir / "checkpoints");
    bool any_hist = false;
    for (const auto& cell : results)
        for (const auto& run : cell)
            if (!run.histograms.empty()) any_hist = true;
    if (any_hist) fs::create_directories(dir / "histograms");

    for (std::size_t c = 0; c < grid.size(); ++c) {
        for (const pinnlab::RunResult& run : results[c]) {
            const std::string id = labels[c] + "_s" + std::to_string(run.seed);
            pinnlab::save_checkpoint((dir / "checkpoints" / id).string(), run.params,
                                     run.network);
            if (run.histograms.empty()) continue;
            json caps = json::array();
            for (const pinnlab::HistogramCapture& cap : run.histograms) {
                json groups = json::array();
                for (const pinnlab::Histogram& h : cap.groups)
                    groups.push_back(histogram_to_json(h));
                caps.push_back(json{{"epoch", cap.epoch}, {"groups", std::move(groups)}});
            }
            write_text(dir / "histograms" / (id + ".json"),
                       json{{"run_id", id}, {"captures", std::move(caps)}}.dump(2) + "\n");
        }
    }
}

void write_summary_json(const fs::path& dir, const std::vector<pinnlab::SuiteRow>& rows,
                        const std::vector<std::string>& labels,
                        const std::vector<std::vector<pinnlab::RunResult>>& results) {
    json out = json::array();
    for (std::size_t c = 0; c < rows.size(); ++c) {
        const pinnlab::SuiteRow& row = rows[c];
        json cell;
        cell["label"] = labels[c];
        cell["problem"] = row.problem;
        cell["optimizer"] = row.optimizer;
        cell["hyper"] = hyper_to_json(row.hyper);
        cell["runs"] = row.runs;
        cell["aborted"] = row.aborted;
        json per_seed = json::array();
        for (const pinnlab::RunResult& run : results[c]) {
            json r;
            r["seed"] = run.seed;
            r["wall_seconds"] = run.wall_seconds;
            if (run.aborted()) {
                r["aborted_at"] = *run.abort_epoch;
                r["abort_reason"] = run.abort_reason;
            } else if (!run.evals.empty()) {
                r["final_mae"] = run.evals.back().mae;
                r["final_rel_l2"] = run.evals.back().rel_l2;
            }
            per_seed.push_back(std::move(r));
        }
        cell["per_seed"] = std::move(per_seed);
        if (row.valid) {
            cell["mean_mae"] = row.mean_mae;
            cell["mean_rel_l2"] = row.mean_rel_l2;
        } else {
            cell["mean_mae"] = nullptr;
            cell["mean_rel_l2"] = nullptr;
            cell["status"] = "N/A";
        }
        out.push_back(std::move(cell));
    }
    write_text(dir / "summary.json", out.dump(2) + "\n");
}

void print_summary_table(const std::vector<pinnlab::SuiteRow>& rows) {
    std::printf("%-14s %-10s %-12s %5s %12s %12s\n", "problem", "optimizer", "betas", "runs",
                "mean_mae", "mean_rel_l2");
    for (const pinnlab::SuiteRow& row : rows) {
        const std::string betas =
            fmt_short(row.hyper.beta1) + "," + fmt_short(row.hyper.beta2);
        if (row.valid) {
            std::printf("%-14s %-10s %-12s %5d %12.4e %11.2f%%\n", row.problem.c_str(),
                        row.optimizer.c_str(), betas.c_str(), row.runs, row.mean_mae,
                        100.0 * row.mean_rel_l2);
        } else {
            std::printf("%-14s %-10s %-12s %5d %12s %12s\n", row.problem.c_str(),
                        row.optimizer.c_str(), betas.c_str(), row.runs, "N/A", "N/A");
        }
    }
}

/// Shared back end of `run` and `ablate-betas`: manifest first, then the
/// suite, then every artifact the run directory promises.
int execute_suite(const json& doc, const std::vector<pinnlab::TrainConfig>& grid,
                  const std::vector<std::string>& labels,
                  const std::vector<std::string>& argv_tail) {
    const fs::path dir = doc.at("output_dir").get<std::string>();
    fs::create_directories(dir);
    write_manifest(dir, grid, labels, doc, argv_tail);

    std::vector<std::vector<pinnlab::RunResult>> results;
    const std::vector<pinnlab::SuiteRow> rows = pinnlab::run_suite(grid, &results);

    write_history_csv(dir, grid, labels, results);
    write_metrics_csv(dir, grid, labels, results);
    write_run_artifacts(dir, grid, labels, results);
    write_summary_json(dir, rows, labels, results);
    print_summary_table(rows);
    std::printf("artifacts: %s\n", dir.string().c_str());
    return 0;
}

int cmd_run(const std::string& config_path, const std::vector<std::string>& overrides,
            const std::vector<std::string>& argv_tail) {
    json doc = default_config_doc();
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw pinnlab::ConfigError("cannot read config file '" + config_path + "'");
        json file_doc;
        try {
            file_doc = json::parse(in);
        } catch (const json::exception& e) {
            throw pinnlab::ConfigError("config file '" + config_path + "': " + e.what());
        }
        doc.merge_patch(file_doc);
    }
    for (const std::string& assignment : overrides) apply_override(doc, assignment);

    try {
        const std::vector<pinnlab::TrainConfig> grid = build_grid(doc);
        std::vector<std::string> labels;
        labels.reserve(grid.size());
        for (const pinnlab::TrainConfig& cfg : grid) labels.push_back(run_label(cfg));
        return execute_suite(doc, grid, labels, argv_tail);
    } catch (const json::exception& e) {
        throw pinnlab::ConfigError(std::string("config: ") + e.what());
    }
}

int cmd_ablate_betas(const std::string& problem, const std::string& out_dir,
                     const std::vector<std::string>& overrides,
                     const std::vector<std::string>& argv_tail) {
    static const std::vector<std::pair<double, double>> kBetaGrid = {
        {0.99, 0.99}, {0.9, 0.999}, {0.9, 0.9}, {0.9, 0.0}, {0.0, 0.9}};

    json doc = default_config_doc();
    doc["problems"] = json::array({problem});
    doc["optimizers"] = json::array({"multiadam"});
    doc["output_dir"] = out_dir;
    for (const std::string& assignment : overrides) apply_override(doc, assignment);

    try {
        const std::vector<pinnlab::TrainConfig> base_grid = build_grid(doc);
        std::vector<pinnlab::TrainConfig> grid;
        std::vector<std::string> labels;
        for (const auto& [b1, b2] : kBetaGrid) {
            pinnlab::TrainConfig cfg = base_grid.at(0);
            cfg.hyper.beta1 = b1;
            cfg.hyper.beta2 = b2;
            labels.push_back(run_label(cfg) + "_b" + fmt_short(b1) + "-" + fmt_short(b2));
            grid.push_back(std::move(cfg));
        }
        return execute_suite(doc, grid, labels, argv_tail);
    } catch (const json::exception& e) {
        throw pinnlab::ConfigError(std::string("config: ") + e.what());
    }
}

int cmd_verify_scaling(const std::string& problem_name, std::vector<double> ts, int nets,
                       std::uint64_t seed0, int n_interior, int n_boundary) {
    constexpr double kPdeTol = 1e-9;
    constexpr double kBoundaryTol = 1e-12;

    const pinnlab::PdeProblem problem = pinnlab::make_problem(problem_name);
    if (problem.residual_kind == pinnlab::ResidualKind::helmholtz) {
        std::fprintf(stderr,
                     "verify-scaling: '%s' is not homogeneous (the k^2 u term has "
                     "derivative order zero while the Laplacian has order two); the "
                     "t^{2k} identity assumes one common derivative order\n",
                     problem_name.c_str());
        return 1;
    }
    if (problem.residual_kind == pinnlab::ResidualKind::burgers) {
        std::fprintf(stderr,
                     "verify-scaling: '%s' mixes derivative orders (u_t, u u_x, u_xx), "
                     "so no single t^{2k} ratio applies\n",
                     problem_name.c_str());
        return 1;
    }
    if (const char* env = std::getenv(kSeedEnv)) seed0 = std::stoull(env);

    const int k = problem.pde_order;
    pinnlab::MlpConfig net;
    net.activation = problem.default_activation;

    double worst_pde = 0.0;
    double worst_boundary = 0.0;
    std::printf("problem=%s  order k=%d  tolerances: pde %g relative, boundary %g\n",
                problem_name.c_str(), k, kPdeTol, kBoundaryTol);
    std::printf("%4s %6s %22s %22s %22s\n", "net", "t", "measured pde ratio", "t^{2k}",
                "boundary ratio");
    for (int n = 0; n < nets; ++n) {
        const std::uint64_t seed = seed0 + static_cast<std::uint64_t>(n);
        const pinnlab::MlpParams params = pinnlab::init_glorot_normal(net, seed);
        for (double t : ts) {
            const pinnlab::ScalingRatios r = pinnlab::verify_scaling(
                problem, params, net, t, seed, n_interior, n_boundary);
            const double expected = std::pow(t, 2.0 * k);
            const double pde_err = std::abs(r.ratio_pde - expected) / expected;
            const double boundary_err = std::abs(r.ratio_boundary - 1.0);
            worst_pde = std::max(worst_pde, pde_err);
            worst_boundary = std::max(worst_boundary, boundary_err);
            std::printf("%4d %6g %22.15g %22.15g %22.15g\n", n, t, r.ratio_pde, expected,
                        r.ratio_boundary);
        }
    }
    std::printf("worst relative pde deviation %.3g, worst boundary deviation %.3g\n",
                worst_pde, worst_boundary);
    if (worst_pde > kPdeTol || worst_boundary > kBoundaryTol) {
        std::fprintf(stderr, "verify-scaling: outside tolerance\n");
        return 3;
    }
    return 0;
}

/// Splits one CSV line; our writers never quote, so a plain comma split is
/// exact for the files this reads back.
std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

int cmd_weights(std::vector<double> sides, const std::string& runs_dir,
                const std::string& out_path, const pinnlab::GreenSeriesConfig& series) {
    for (double side : sides) {
        if (side <= 0.0) {
            std::fprintf(stderr, "weights: side %g is not positive\n", side);
            return 1;
        }
    }
    json out;
    out["theory"] = json::array();
    for (double side : sides) {
        const pinnlab::C1C2 c = pinnlab::compute_c1_c2(side, series);
        const double w = (c.c1 / c.c2) * (c.c1 / c.c2);
        out["theory"].push_back(
            json{{"side", side}, {"c1", c.c1}, {"c2", c.c2}, {"weight", w}});
    }

    if (!runs_dir.empty()) {
        const fs::path metrics = fs::path(runs_dir) / "metrics.csv";
        std::ifstream in(metrics);
        if (!in) {
            out["runs"] = json::array();  // theory-only when no run data exists
        } else {
            std::map<std::string, json> by_run;
            std::string line;
            std::getline(in, line);  // header
            while (std::getline(in, line)) {
                const std::vector<std::string> f = split_csv(line);
                if (f.size() < 10 || f[9].empty()) continue;
                json& entry = by_run[f[0]];
                if (entry.is_null()) {
                    entry = json{{"run_id", f[0]},
                                 {"problem", f[1]},
                                 {"optimizer", f[2]},
                                 {"seed", std::stoull(f[3])},
                                 {"series", json::array()}};
                }
                entry["series"].push_back(
                    json{{"epoch", std::stol(f[4])}, {"weight", std::stod(f[9])}});
            }
            out["runs"] = json::array();
            for (auto& [id, entry] : by_run) out["runs"].push_back(std::move(entry));
        }
    }

    const std::string text = out.dump(2) + "\n";
    if (out_path.empty()) {
        std::fputs(text.c_str(), stdout);
    } else {
        write_text(out_path, text);
        std::printf("wrote %s\n", out_path.c_str());
    }
    return 0;
}

int cmd_oracle(const std::string& problem_name, const std::string& out_path) {
    const pinnlab::PdeProblem problem = pinnlab::make_problem(problem_name);
    std::string csv;

    if (problem.residual_kind == pinnlab::ResidualKind::burgers) {
        csv = "x,t,u\n";
        const int nx = 256;
        const int nt = 100;
        for (int j = 0; j < nt; ++j) {
            const double t = static_cast<double>(j) / (nt - 1);
            for (int i = 0; i < nx; ++i) {
                const double x = -1.0 + 2.0 * static_cast<double>(i) / (nx - 1);
                csv += fmt_full(x) + ',' + fmt_full(t) + ',' +
                       fmt_full(pinnlab::burgers_cole_hopf(x, t)) + '\n';
            }
        }
    } else if (problem.exact) {
        csv = "x,y,u\n";
        const int n = 101;
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                const pinnlab::Point p = {
                    problem.domain.lo[0] +
                        (problem.domain.hi[0] - problem.domain.lo[0]) * i / (n - 1.0),
                    problem.domain.lo[1] +
                        (problem.domain.hi[1] - problem.domain.lo[1]) * j / (n - 1.0)};
                csv += fmt_full(p[0]) + ',' + fmt_full(p[1]) + ',' +
                       fmt_full(problem.exact(p)) + '\n';
            }
        }
    } else {
        // Perforated square: relaxation solve, excluded nodes print as nan.
        const double side = problem.domain.hi[0] - problem.domain.lo[0];
        const pinnlab::FdSolution fd =
            pinnlab::poisson_fd_solve(problem.domain, side / 256.0, 1e-9);
        csv = "x,y,u\n";
        for (int j = 0; j < fd.nx; ++j) {
            for (int i = 0; i < fd.nx; ++i) {
                const double x = fd.lo[0] + fd.h * i;
                const double y = fd.lo[1] + fd.h * j;
                const bool excluded = fd.mask_at(j, i) == pinnlab::FdMask::excluded;
                csv += fmt_full(x) + ',' + fmt_full(y) + ',' +
                       (excluded ? "nan" : fmt_full(fd.at(j, i))) + '\n';
            }
        }
    }

    write_text(out_path, csv);
    std::printf("wrote %s\n", out_path.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "pinnlab: physics-informed network training lab.\n"
        "Seeds can be overridden globally with the PINNLAB_SEED environment variable."};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "Train a suite of (problem, optimizer) cells");
    std::string config_path;
    std::vector<std::string> overrides;
    std::vector<std::string> problems;
    std::vector<std::string> optimizers;
    int seed_count = 0;
    std::string out_dir;
    int epochs = 0;
    run->add_option("--config", config_path, "JSON config file (see README for the schema)");
    run->add_option("--problem", problems, "Problem name(s); repeatable");
    run->add_option("--optimizer", optimizers,
                    "Optimizer name(s) in {adam, multiadam, lra, pcgrad}; repeatable");
    run->add_option("--seeds", seed_count, "Use seeds 1..N");
    run->add_option("--epochs", epochs, "Epoch count override");
    run->add_option("--out", out_dir, "Output directory");
    run->add_option("--set", overrides,
                    "key=value override, dotted keys reach nested fields "
                    "(e.g. --set hyper.beta1=0.9, --set network.width=64)");

    // ablate-betas
    auto* ablate = app.add_subcommand(
        "ablate-betas", "Run the (beta1, beta2) grid for MultiAdam on one problem");
    std::string ablate_problem = "poisson-1";
    std::string ablate_out = "runs/ablate-betas";
    std::vector<std::string> ablate_overrides;
    ablate->add_option("--problem", ablate_problem, "Problem name");
    ablate->add_option("--out", ablate_out, "Output directory");
    ablate->add_option("--set", ablate_overrides, "key=value override, as in run");

    // verify-scaling
    auto* scaling = app.add_subcommand(
        "verify-scaling", "Check that narrowing the domain by t scales the PDE loss by "
                          "t^{2k} and leaves the boundary loss unchanged");
    std::string scaling_problem = "poisson-8";
    std::vector<double> scaling_t = {2.0, 4.0, 8.0};
    int scaling_nets = 5;
    std::uint64_t scaling_seed = 1;
    int scaling_interior = 256;
    int scaling_boundary = 128;
    scaling->add_option("--problem", scaling_problem, "Registered homogeneous problem");
    scaling->add_option("--t", scaling_t, "Narrowing factors");
    scaling->add_option("--nets", scaling_nets, "Number of random networks");
    scaling->add_option("--seed", scaling_seed, "Base seed for networks and samples");
    scaling->add_option("--n-interior", scaling_interior, "Interior points per check");
    scaling->add_option("--n-boundary", scaling_boundary, "Boundary points per check");

    // weights
    auto* weights = app.add_subcommand(
        "weights", "Theoretical loss-weight constants per domain side, with optional "
                   "weight-estimate overlay from a run directory");
    std::vector<double> weight_sides = {0.5, 1.0, 2.0, 4.0, 8.0};
    std::string weights_runs;
    std::string weights_out;
    pinnlab::GreenSeriesConfig series;
    weights->add_option("--sides", weight_sides, "Domain side lengths");
    weights->add_option("--runs", weights_runs,
                        "Run directory whose metrics.csv supplies estimate series");
    weights->add_option("--out", weights_out, "Write JSON here instead of stdout");
    weights->add_option("--modes", series.modes, "Series truncation order");
    weights->add_option("--inner", series.inner_per_axis, "Interior quadrature per axis");
    weights->add_option("--outer", series.outer_per_axis, "Outer quadrature per axis");
    weights->add_option("--edge", series.boundary_per_edge, "Boundary quadrature per edge");

    // oracle
    auto* oracle = app.add_subcommand("oracle", "Dump a problem's reference field as CSV");
    std::string oracle_problem;
    std::string oracle_out;
    oracle->add_option("problem", oracle_problem, "Problem name")->required();
    oracle->add_option("output", oracle_out, "Output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    std::vector<std::string> argv_tail(argv + 1, argv + argc);
    try {
        if (run->parsed()) {
            // Direct flags are sugar for the equivalent --set overrides.
            std::vector<std::string> all = overrides;
            for (const std::string& p : problems) all.push_back("problem=" + p);
            if (problems.size() > 1) {
                json list = json::array();
                for (const std::string& p : problems) list.push_back(p);
                all.back() = "problems=" + list.dump();
            }
            if (!optimizers.empty()) {
                json list = json::array();
                for (const std::string& o : optimizers) list.push_back(o);
                all.push_back("optimizers=" + list.dump());
            }
            if (seed_count > 0) {
                json list = json::array();
                for (int s = 1; s <= seed_count; ++s) list.push_back(s);
                all.push_back("seeds=" + list.dump());
            }
            if (epochs > 0) all.push_back("epochs=" + std::to_string(epochs));
            if (!out_dir.empty()) all.push_back("output_dir=" + out_dir);
            return cmd_run(config_path, all, argv_tail);
        }
        if (ablate->parsed())
            return cmd_ablate_betas(ablate_problem, ablate_out, ablate_overrides, argv_tail);
        if (scaling->parsed())
            return cmd_verify_scaling(scaling_problem, scaling_t, scaling_nets, scaling_seed,
                                      scaling_interior, scaling_boundary);
        if (weights->parsed())
            return cmd_weights(weight_sides, weights_runs, weights_out, series);
        if (oracle->parsed()) return cmd_oracle(oracle_problem, oracle_out);
    } catch (const pinnlab::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
