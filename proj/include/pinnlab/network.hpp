// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>
#include <vector>

#include "pinnlab/jet.hpp"
#include "pinnlab/rng.hpp"
#include "pinnlab/tape.hpp"

namespace pinnlab {

/// Feed-forward architecture: input -> hidden layers (activation) -> linear
/// output of width one.
struct MlpConfig {
    int input_dim = 2;
    std::vector<int> hidden_widths = {32, 32, 32};
    int output_dim = 1;
    Activation activation = Activation::tanh;
};

/// Offsets of one affine layer inside the flat parameter vector.
struct LayerLayout {
    int rows = 0;  // output width
    int cols = 0;  // input width
    std::size_t weight_offset = 0;
    std::size_t bias_offset = 0;
};

/// All parameters in one flat vector; `layout` indexes it per layer.
/// Weights are stored row-major, biases follow the weight block.
struct MlpParams {
    std::vector<double> flat;
    std::vector<LayerLayout> layout;
};

/// Parameters registered on a tape as leaf nodes, one per flat entry.
struct TapedMlp {
    MlpConfig config;
    std::vector<NodeRef> flat;
    std::vector<LayerLayout> layout;
};

std::size_t param_count(const MlpConfig& config);

/// Builds the per-layer layout for a config (shared by init and load).
std::vector<LayerLayout> make_layout(const MlpConfig& config);

/// Weights ~ Normal(0, 2 / (fan_in + fan_out)), biases zero. Deterministic
/// for a fixed seed across platforms.
MlpParams init_glorot_normal(const MlpConfig& config, std::uint64_t seed);

/// Pushes every parameter as a tape leaf in flat order.
TapedMlp register_params(Tape& tape, const MlpParams& params, const MlpConfig& config);

/// Plain value evaluation without any tape (for metrics grids).
double forward_value(const MlpParams& params, const MlpConfig& config, std::span<const double> x);

/// Tape forward pass: returns the node carrying the network output.
NodeRef forward(const TapedMlp& net, Tape& tape, std::span<const double> x);

/// Jet forward pass: output value plus first and second input derivatives,
/// all tape nodes differentiable with respect to the registered parameters.
Jet2 jet_forward(const TapedMlp& net, Tape& tape, std::span<const double> x);

/// Plain-double jet: value plus input derivatives without any tape. Used
/// wherever derivatives of the output are needed but parameter gradients
/// are not (scaling checks, residual field evaluation).
struct JetVal {
    double val = 0.0;
    int dim = 0;
    std::array<double, 3> grad{};
    std::array<double, 6> hess{};

    double hess_at(int i, int j) const { return hess[static_cast<std::size_t>(hess_index(i, j))]; }
};

JetVal jet_forward_value(const MlpParams& params, const MlpConfig& config,
                         std::span<const double> x);

/// Writes `<path>.bin` (flat parameters, little-endian 64-bit floats) and
/// `<path>.json` (config and layout sidecar).
void save_checkpoint(const std::string& path_prefix, const MlpParams& params,
                     const MlpConfig& config);

/// Restores a checkpoint written by save_checkpoint.
struct Checkpoint {
    MlpParams params;
    MlpConfig config;
};
Checkpoint load_checkpoint(const std::string& path_prefix);

}  // namespace pinnlab
