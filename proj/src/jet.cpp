// SPDX-License-Identifier: Apache-2.0
#include "pinnlab/jet.hpp"

#include "pinnlab/errors.hpp"

namespace pinnlab {

std::vector<Jet2> jet_seed(Tape& tape, std::span<const double> x, int dim) {
    if (dim < 1 || dim > 3) {
        throw DimensionOutOfRange("jet dimension must be 1, 2 or 3, got " + std::to_string(dim));
    }
    if (static_cast<int>(x.size()) != dim) {
        throw ShapeMismatch("jet_seed: point has " + std::to_string(x.size()) +
                            " coordinates for dimension " + std::to_string(dim));
    }
    const NodeRef zero = tape.constant(0.0);
    const NodeRef one = tape.constant(1.0);
    std::vector<Jet2> jets(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) {
        Jet2& j = jets[static_cast<std::size_t>(i)];
        j.val = tape.constant(x[static_cast<std::size_t>(i)]);
        j.dim = dim;
        for (int k = 0; k < dim; ++k) j.grad[static_cast<std::size_t>(k)] = (k == i) ? one : zero;
        for (int k = 0; k < hess_size(dim); ++k) j.hess[static_cast<std::size_t>(k)] = zero;
    }
    return jets;
}

std::vector<Jet2> jet_affine(Tape& tape, std::span<const Jet2> jets,
                             std::span<const NodeRef> weights, std::span<const NodeRef> bias) {
    if (jets.empty()) throw ShapeMismatch("jet_affine: empty input");
    const std::size_t in_dim = jets.size();
    const std::size_t out_dim = bias.size();
    if (weights.size() != in_dim * out_dim) {
        throw ShapeMismatch("jet_affine: weight count " + std::to_string(weights.size()) +
                            " does not match " + std::to_string(out_dim) + "x" +
                            std::to_string(in_dim));
    }
    const int dim = jets[0].dim;
    std::vector<Jet2> out(out_dim);
    for (std::size_t k = 0; k < out_dim; ++k) {
        Jet2& o = out[k];
        o.dim = dim;
        // value: b_k + sum_j w_kj * x_j
        NodeRef acc = bias[k];
        for (std::size_t j = 0; j < in_dim; ++j) {
            acc = add(tape, acc, mul(tape, weights[k * in_dim + j], jets[j].val));
        }
        o.val = acc;
        // derivatives: linear maps drop the bias
        for (int g = 0; g < dim; ++g) {
            NodeRef gacc = mul(tape, weights[k * in_dim], jets[0].grad[static_cast<std::size_t>(g)]);
            for (std::size_t j = 1; j < in_dim; ++j) {
                gacc = add(tape, gacc,
                           mul(tape, weights[k * in_dim + j], jets[j].grad[static_cast<std::size_t>(g)]));
            }
            o.grad[static_cast<std::size_t>(g)] = gacc;
        }
        for (int h = 0; h < hess_size(dim); ++h) {
            NodeRef hacc = mul(tape, weights[k * in_dim], jets[0].hess[static_cast<std::size_t>(h)]);
            for (std::size_t j = 1; j < in_dim; ++j) {
                hacc = add(tape, hacc,
                           mul(tape, weights[k * in_dim + j], jets[j].hess[static_cast<std::size_t>(h)]));
            }
            o.hess[static_cast<std::size_t>(h)] = hacc;
        }
    }
    return out;
}

Jet2 jet_activation(Tape& tape, const Jet2& jet, Activation act) {
    if (act == Activation::linear) return jet;

    NodeRef y{}, d1{}, d2{};
    switch (act) {
        case Activation::tanh: {
            // y = tanh(v), y' = 1 - y^2, y'' = -2 y (1 - y^2)
            y = tanh(tape, jet.val);
            d1 = sub(tape, tape.constant(1.0), square(tape, y));
            d2 = mul(tape, mul(tape, tape.constant(-2.0), y), d1);
            break;
        }
        case Activation::sin: {
            y = sin(tape, jet.val);
            d1 = cos(tape, jet.val);
            d2 = neg(tape, y);
            break;
        }
        case Activation::linear:
            break;
    }

    Jet2 out;
    out.dim = jet.dim;
    out.val = y;
    for (int g = 0; g < jet.dim; ++g) {
        out.grad[static_cast<std::size_t>(g)] = mul(tape, d1, jet.grad[static_cast<std::size_t>(g)]);
    }
    for (int j = 0; j < jet.dim; ++j) {
        for (int i = 0; i <= j; ++i) {
            const NodeRef gi = jet.grad[static_cast<std::size_t>(i)];
            const NodeRef gj = jet.grad[static_cast<std::size_t>(j)];
            const NodeRef hij = jet.hess[static_cast<std::size_t>(hess_index(i, j))];
            const NodeRef term = add(tape, mul(tape, d2, mul(tape, gi, gj)), mul(tape, d1, hij));
            out.hess[static_cast<std::size_t>(hess_index(i, j))] = term;
        }
    }
    return out;
}

}  // namespace pinnlab
