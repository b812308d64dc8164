// SPDX-License-Identifier: Apache-2.0
#include "pinnlab/tape.hpp"

#include <cmath>

namespace pinnlab {

using detail::Op;

NodeRef node_unary(Tape& tape, UnaryOp op, NodeRef a) {
    const double x = tape.value(a);
    switch (op) {
        case UnaryOp::neg:
            return tape.push(-x, -1.0, a.index, Op::neg);
        case UnaryOp::tanh: {
            const double y = std::tanh(x);
            return tape.push(y, 1.0 - y * y, a.index, Op::tanh);
        }
        case UnaryOp::sin:
            return tape.push(std::sin(x), std::cos(x), a.index, Op::sin);
        case UnaryOp::cos:
            return tape.push(std::cos(x), -std::sin(x), a.index, Op::cos);
        case UnaryOp::exp: {
            const double y = std::exp(x);
            return tape.push(y, y, a.index, Op::exp);
        }
        case UnaryOp::square:
            return tape.push(x * x, 2.0 * x, a.index, Op::square);
    }
    throw Error("node_unary: unknown op");
}

NodeRef node_binary(Tape& tape, BinaryOp op, NodeRef a, NodeRef b) {
    const double x = tape.value(a);
    const double y = tape.value(b);
    switch (op) {
        case BinaryOp::add:
            return tape.push(x + y, 1.0, 1.0, a.index, b.index, Op::add);
        case BinaryOp::sub:
            return tape.push(x - y, 1.0, -1.0, a.index, b.index, Op::sub);
        case BinaryOp::mul:
            return tape.push(x * y, y, x, a.index, b.index, Op::mul);
        case BinaryOp::div: {
            if (std::abs(y) < 1e-300) {
                throw DivisionByZero("node_binary: divisor magnitude below 1e-300");
            }
            const double q = x / y;
            return tape.push(q, 1.0 / y, -q / y, a.index, b.index, Op::div);
        }
    }
    throw Error("node_binary: unknown op");
}

void backward_into(const Tape& tape, NodeRef loss, std::span<const NodeRef> wrt,
                   std::vector<double>& adj, std::span<double> out) {
    const auto nodes = tape.nodes();
    adj.assign(nodes.size(), 0.0);
    adj[loss.index] = 1.0;
    for (std::uint32_t i = loss.index + 1; i-- > 0;) {
        const double g = adj[i];
        if (g == 0.0) continue;
        const TapeNode& n = nodes[i];
        if (n.op == Op::leaf) continue;
        // Unary nodes carry pb == 0, so accumulating both terms is safe even
        // when a binary op has identical parents (e.g. mul(x, x)).
        adj[n.a] += g * n.pa;
        adj[n.b] += g * n.pb;
    }
    for (std::size_t k = 0; k < wrt.size(); ++k) out[k] = adj[wrt[k].index];
}

std::vector<double> backward(const Tape& tape, NodeRef loss, std::span<const NodeRef> wrt) {
    std::vector<double> adj;
    std::vector<double> out(wrt.size());
    backward_into(tape, loss, wrt, adj, out);
    return out;
}

}  // namespace pinnlab
