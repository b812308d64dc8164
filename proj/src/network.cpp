// SPDX-License-Identifier: Apache-2.0
#include "pinnlab/network.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "pinnlab/errors.hpp"

namespace pinnlab {

namespace {

std::vector<int> all_widths(const MlpConfig& config) {
    std::vector<int> w;
    w.reserve(config.hidden_widths.size() + 2);
    w.push_back(config.input_dim);
    for (int h : config.hidden_widths) w.push_back(h);
    w.push_back(config.output_dim);
    return w;
}

void validate(const MlpConfig& config) {
    if (config.input_dim < 1 || config.output_dim < 1) {
        throw ConfigError("network widths must be at least 1");
    }
    for (int h : config.hidden_widths) {
        if (h < 1) throw ConfigError("network widths must be at least 1");
    }
}

const char* activation_name(Activation a) {
    switch (a) {
        case Activation::tanh: return "tanh";
        case Activation::sin: return "sin";
        case Activation::linear: return "linear";
    }
    return "tanh";
}

Activation activation_from(const std::string& s) {
    if (s == "tanh") return Activation::tanh;
    if (s == "sin") return Activation::sin;
    if (s == "linear") return Activation::linear;
    throw ConfigError("unknown activation '" + s + "'");
}

}  // namespace

std::vector<LayerLayout> make_layout(const MlpConfig& config) {
    validate(config);
    const auto widths = all_widths(config);
    std::vector<LayerLayout> layout(widths.size() - 1);
    std::size_t offset = 0;
    for (std::size_t l = 0; l < layout.size(); ++l) {
        LayerLayout& lay = layout[l];
        lay.rows = widths[l + 1];
        lay.cols = widths[l];
        lay.weight_offset = offset;
        lay.bias_offset = offset + static_cast<std::size_t>(lay.rows) * static_cast<std::size_t>(lay.cols);
        offset = lay.bias_offset + static_cast<std::size_t>(lay.rows);
    }
    return layout;
}

std::size_t param_count(const MlpConfig& config) {
    const auto layout = make_layout(config);
    const auto& last = layout.back();
    return last.bias_offset + static_cast<std::size_t>(last.rows);
}

MlpParams init_glorot_normal(const MlpConfig& config, std::uint64_t seed) {
    MlpParams params;
    params.layout = make_layout(config);
    params.flat.assign(param_count(config), 0.0);
    Rng rng(seed);
    for (const auto& lay : params.layout) {
        const double sigma = std::sqrt(2.0 / (lay.cols + lay.rows));
        const std::size_t count = static_cast<std::size_t>(lay.rows) * static_cast<std::size_t>(lay.cols);
        for (std::size_t i = 0; i < count; ++i) {
            params.flat[lay.weight_offset + i] = sigma * rng.normal();
        }
        // biases stay zero
    }
    return params;
}

TapedMlp register_params(Tape& tape, const MlpParams& params, const MlpConfig& config) {
    if (params.flat.size() != param_count(config)) {
        throw ShapeMismatch("register_params: parameter vector does not match config");
    }
    TapedMlp net;
    net.config = config;
    net.layout = params.layout;
    net.flat.reserve(params.flat.size());
    for (double v : params.flat) net.flat.push_back(tape.leaf(v));
    return net;
}

double forward_value(const MlpParams& params, const MlpConfig& config, std::span<const double> x) {
    if (static_cast<int>(x.size()) != config.input_dim) {
        throw ShapeMismatch("forward_value: input size does not match input_dim");
    }
    std::vector<double> cur(x.begin(), x.end());
    std::vector<double> next;
    for (std::size_t l = 0; l < params.layout.size(); ++l) {
        const auto& lay = params.layout[l];
        next.assign(static_cast<std::size_t>(lay.rows), 0.0);
        for (int r = 0; r < lay.rows; ++r) {
            double acc = params.flat[lay.bias_offset + static_cast<std::size_t>(r)];
            const double* w = params.flat.data() + lay.weight_offset +
                              static_cast<std::size_t>(r) * static_cast<std::size_t>(lay.cols);
            for (int c = 0; c < lay.cols; ++c) acc += w[c] * cur[static_cast<std::size_t>(c)];
            next[static_cast<std::size_t>(r)] = acc;
        }
        const bool hidden = l + 1 < params.layout.size();
        if (hidden) {
            for (double& v : next) {
                v = config.activation == Activation::sin ? std::sin(v)
                    : config.activation == Activation::tanh ? std::tanh(v)
                                                            : v;
            }
        }
        cur.swap(next);
    }
    return cur[0];
}

NodeRef forward(const TapedMlp& net, Tape& tape, std::span<const double> x) {
    if (static_cast<int>(x.size()) != net.config.input_dim) {
        throw ShapeMismatch("forward: input size does not match input_dim");
    }
    std::vector<NodeRef> cur;
    cur.reserve(x.size());
    for (double v : x) cur.push_back(tape.constant(v));
    std::vector<NodeRef> next;
    for (std::size_t l = 0; l < net.layout.size(); ++l) {
        const auto& lay = net.layout[l];
        next.clear();
        next.reserve(static_cast<std::size_t>(lay.rows));
        for (int r = 0; r < lay.rows; ++r) {
            NodeRef acc = net.flat[lay.bias_offset + static_cast<std::size_t>(r)];
            for (int c = 0; c < lay.cols; ++c) {
                const NodeRef w = net.flat[lay.weight_offset +
                                           static_cast<std::size_t>(r) * static_cast<std::size_t>(lay.cols) +
                                           static_cast<std::size_t>(c)];
                acc = add(tape, acc, mul(tape, w, cur[static_cast<std::size_t>(c)]));
            }
            next.push_back(acc);
        }
        const bool hidden = l + 1 < net.layout.size();
        if (hidden) {
            for (NodeRef& v : next) {
                v = net.config.activation == Activation::sin ? sin(tape, v)
                    : net.config.activation == Activation::tanh ? tanh(tape, v)
                                                                : v;
            }
        }
        cur.swap(next);
    }
    return cur[0];
}

Jet2 jet_forward(const TapedMlp& net, Tape& tape, std::span<const double> x) {
    if (static_cast<int>(x.size()) != net.config.input_dim) {
        throw ShapeMismatch("jet_forward: input size does not match input_dim");
    }
    std::vector<Jet2> cur = jet_seed(tape, x, net.config.input_dim);
    for (std::size_t l = 0; l < net.layout.size(); ++l) {
        const auto& lay = net.layout[l];
        const std::span<const NodeRef> weights(net.flat.data() + lay.weight_offset,
                                               static_cast<std::size_t>(lay.rows) *
                                                   static_cast<std::size_t>(lay.cols));
        const std::span<const NodeRef> bias(net.flat.data() + lay.bias_offset,
                                            static_cast<std::size_t>(lay.rows));
        cur = jet_affine(tape, cur, weights, bias);
        const bool hidden = l + 1 < net.layout.size();
        if (hidden) {
            for (Jet2& j : cur) j = jet_activation(tape, j, net.config.activation);
        }
    }
    return cur[0];
}

JetVal jet_forward_value(const MlpParams& params, const MlpConfig& config,
                         std::span<const double> x) {
    const int dim = config.input_dim;
    if (static_cast<int>(x.size()) != dim) {
        throw ShapeMismatch("jet_forward_value: input size does not match input_dim");
    }
    if (dim < 1 || dim > 3) throw DimensionOutOfRange("jet dimension must be 1, 2 or 3");
    const int hs = hess_size(dim);

    // One JetVal per neuron, mirroring the tape route's operation order so
    // values agree bit-for-bit with jet_forward.
    std::vector<JetVal> cur(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) {
        cur[static_cast<std::size_t>(i)].val = x[static_cast<std::size_t>(i)];
        cur[static_cast<std::size_t>(i)].dim = dim;
        cur[static_cast<std::size_t>(i)].grad[static_cast<std::size_t>(i)] = 1.0;
    }
    std::vector<JetVal> next;
    for (std::size_t l = 0; l < params.layout.size(); ++l) {
        const auto& lay = params.layout[l];
        next.assign(static_cast<std::size_t>(lay.rows), JetVal{});
        for (int r = 0; r < lay.rows; ++r) {
            JetVal& o = next[static_cast<std::size_t>(r)];
            o.dim = dim;
            o.val = params.flat[lay.bias_offset + static_cast<std::size_t>(r)];
            const double* w = params.flat.data() + lay.weight_offset +
                              static_cast<std::size_t>(r) * static_cast<std::size_t>(lay.cols);
            for (int c = 0; c < lay.cols; ++c) {
                const JetVal& in = cur[static_cast<std::size_t>(c)];
                o.val += w[c] * in.val;
                for (int g = 0; g < dim; ++g) {
                    o.grad[static_cast<std::size_t>(g)] += w[c] * in.grad[static_cast<std::size_t>(g)];
                }
                for (int h = 0; h < hs; ++h) {
                    o.hess[static_cast<std::size_t>(h)] += w[c] * in.hess[static_cast<std::size_t>(h)];
                }
            }
        }
        const bool hidden = l + 1 < params.layout.size();
        if (hidden) {
            for (JetVal& j : next) {
                double y, d1, d2;
                if (config.activation == Activation::sin) {
                    y = std::sin(j.val);
                    d1 = std::cos(j.val);
                    d2 = -y;
                } else if (config.activation == Activation::tanh) {
                    y = std::tanh(j.val);
                    d1 = 1.0 - y * y;
                    d2 = -2.0 * y * d1;
                } else {
                    continue;
                }
                JetVal out;
                out.dim = dim;
                out.val = y;
                for (int g = 0; g < dim; ++g) {
                    out.grad[static_cast<std::size_t>(g)] = d1 * j.grad[static_cast<std::size_t>(g)];
                }
                for (int jj = 0; jj < dim; ++jj) {
                    for (int ii = 0; ii <= jj; ++ii) {
                        const double gi = j.grad[static_cast<std::size_t>(ii)];
                        const double gj = j.grad[static_cast<std::size_t>(jj)];
                        const double hij = j.hess[static_cast<std::size_t>(hess_index(ii, jj))];
                        out.hess[static_cast<std::size_t>(hess_index(ii, jj))] =
                            d2 * (gi * gj) + d1 * hij;
                    }
                }
                j = out;
            }
        }
        cur.swap(next);
    }
    return cur[0];
}

void save_checkpoint(const std::string& path_prefix, const MlpParams& params,
                     const MlpConfig& config) {
    static_assert(std::endian::native == std::endian::little,
                  "checkpoint writer assumes a little-endian host");
    {
        std::ofstream bin(path_prefix + ".bin", std::ios::binary | std::ios::trunc);
        if (!bin) throw ConfigError("cannot open checkpoint file " + path_prefix + ".bin");
        bin.write(reinterpret_cast<const char*>(params.flat.data()),
                  static_cast<std::streamsize>(params.flat.size() * sizeof(double)));
        if (!bin) throw ConfigError("short write to " + path_prefix + ".bin");
    }
    nlohmann::json side;
    side["format"] = "pinnlab-checkpoint-v1";
    side["count"] = params.flat.size();
    side["config"] = {{"input_dim", config.input_dim},
                      {"hidden_widths", config.hidden_widths},
                      {"output_dim", config.output_dim},
                      {"activation", activation_name(config.activation)}};
    nlohmann::json layers = nlohmann::json::array();
    for (const auto& lay : params.layout) {
        layers.push_back({{"rows", lay.rows},
                          {"cols", lay.cols},
                          {"weight_offset", lay.weight_offset},
                          {"bias_offset", lay.bias_offset}});
    }
    side["layout"] = layers;
    std::ofstream js(path_prefix + ".json", std::ios::trunc);
    if (!js) throw ConfigError("cannot open checkpoint sidecar " + path_prefix + ".json");
    js << side.dump(2) << '\n';
}

Checkpoint load_checkpoint(const std::string& path_prefix) {
    std::ifstream js(path_prefix + ".json");
    if (!js) throw ConfigError("cannot open checkpoint sidecar " + path_prefix + ".json");
    nlohmann::json side;
    js >> side;
    if (side.value("format", "") != std::string("pinnlab-checkpoint-v1")) {
        throw ConfigError("unrecognized checkpoint format in " + path_prefix + ".json");
    }
    Checkpoint ck;
    const auto& cfg = side.at("config");
    ck.config.input_dim = cfg.at("input_dim").get<int>();
    ck.config.hidden_widths = cfg.at("hidden_widths").get<std::vector<int>>();
    ck.config.output_dim = cfg.at("output_dim").get<int>();
    ck.config.activation = activation_from(cfg.at("activation").get<std::string>());
    ck.params.layout = make_layout(ck.config);

    const std::size_t count = side.at("count").get<std::size_t>();
    if (count != param_count(ck.config)) {
        throw ConfigError("checkpoint count does not match its config");
    }
    ck.params.flat.assign(count, 0.0);
    std::ifstream bin(path_prefix + ".bin", std::ios::binary);
    if (!bin) throw ConfigError("cannot open checkpoint file " + path_prefix + ".bin");
    bin.read(reinterpret_cast<char*>(ck.params.flat.data()),
             static_cast<std::streamsize>(count * sizeof(double)));
    if (bin.gcount() != static_cast<std::streamsize>(count * sizeof(double))) {
        throw ConfigError("checkpoint file " + path_prefix + ".bin is truncated");
    }
    return ck;
}

}  // namespace pinnlab
