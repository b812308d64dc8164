// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "pinnlab/errors.hpp"

namespace pinnlab {

/// Handle into a Tape. Only valid for the tape that produced it.
struct NodeRef {
    std::uint32_t index = 0;
};

enum class UnaryOp : std::uint8_t { neg, tanh, sin, cos, exp, square };
enum class BinaryOp : std::uint8_t { add, sub, mul, div };

namespace detail {
enum class Op : std::uint8_t {
    leaf,
    neg,
    tanh,
    sin,
    cos,
    exp,
    square,
    add,
    sub,
    mul,
    div,
};
}  // namespace detail

/// One recorded operation. Parents always precede the node itself, and the
/// cached partials are the analytic derivatives of the op at the parent
/// values seen during the forward pass.
struct TapeNode {
    double value = 0.0;
    double pa = 0.0;  // d value / d parent_a
    double pb = 0.0;  // d value / d parent_b
    std::uint32_t a = 0;
    std::uint32_t b = 0;
    detail::Op op = detail::Op::leaf;
};

/// Append-only record of a scalar computation. Rebuilt from scratch for
/// every evaluation; never mutated concurrently.
class Tape {
public:
    Tape() = default;

    void clear() { nodes_.clear(); }
    void reserve(std::size_t n) { nodes_.reserve(n); }
    std::size_t size() const { return nodes_.size(); }

    double value(NodeRef r) const { return nodes_[r.index].value; }
    const TapeNode& node(NodeRef r) const { return nodes_[r.index]; }

    /// Records an input node. Leaves are both variables (differentiated
    /// against) and plain constants; the distinction is only in how the
    /// caller uses the handle.
    NodeRef leaf(double value) {
        nodes_.push_back(TapeNode{value, 0.0, 0.0, 0, 0, detail::Op::leaf});
        return NodeRef{static_cast<std::uint32_t>(nodes_.size() - 1)};
    }
    NodeRef constant(double value) { return leaf(value); }

    NodeRef push(double value, double pa, std::uint32_t a, detail::Op op) {
        nodes_.push_back(TapeNode{value, pa, 0.0, a, a, op});
        return NodeRef{static_cast<std::uint32_t>(nodes_.size() - 1)};
    }
    NodeRef push(double value, double pa, double pb, std::uint32_t a, std::uint32_t b,
                 detail::Op op) {
        nodes_.push_back(TapeNode{value, pa, pb, a, b, op});
        return NodeRef{static_cast<std::uint32_t>(nodes_.size() - 1)};
    }

    std::span<const TapeNode> nodes() const { return nodes_; }

private:
    std::vector<TapeNode> nodes_;
};

/// Appends op(a) and caches its local partial.
NodeRef node_unary(Tape& tape, UnaryOp op, NodeRef a);

/// Appends op(a, b) and caches both local partials.
/// Throws DivisionByZero when op == div and |b| < 1e-300.
NodeRef node_binary(Tape& tape, BinaryOp op, NodeRef a, NodeRef b);

/// Reverse sweep: returns d loss / d wrt[i] for every requested leaf.
/// Single pass over the tape; the loss adjoint is seeded to 1.
std::vector<double> backward(const Tape& tape, NodeRef loss, std::span<const NodeRef> wrt);

inline std::vector<double> backward(const Tape& tape, NodeRef loss,
                                    std::initializer_list<NodeRef> wrt) {
    return backward(tape, loss, std::span<const NodeRef>(wrt.begin(), wrt.size()));
}

/// Reverse sweep reusing a caller-owned adjoint buffer (resized as needed).
/// Nodes with zero adjoint are skipped, which makes sweeping a loss that
/// touches only part of a shared tape cheap.
void backward_into(const Tape& tape, NodeRef loss, std::span<const NodeRef> wrt,
                   std::vector<double>& adjoint_scratch, std::span<double> out);

// Convenience wrappers; these are the spelling used throughout the library.
inline NodeRef neg(Tape& t, NodeRef a) { return node_unary(t, UnaryOp::neg, a); }
inline NodeRef tanh(Tape& t, NodeRef a) { return node_unary(t, UnaryOp::tanh, a); }
inline NodeRef sin(Tape& t, NodeRef a) { return node_unary(t, UnaryOp::sin, a); }
inline NodeRef cos(Tape& t, NodeRef a) { return node_unary(t, UnaryOp::cos, a); }
inline NodeRef exp(Tape& t, NodeRef a) { return node_unary(t, UnaryOp::exp, a); }
inline NodeRef square(Tape& t, NodeRef a) { return node_unary(t, UnaryOp::square, a); }
inline NodeRef add(Tape& t, NodeRef a, NodeRef b) { return node_binary(t, BinaryOp::add, a, b); }
inline NodeRef sub(Tape& t, NodeRef a, NodeRef b) { return node_binary(t, BinaryOp::sub, a, b); }
inline NodeRef mul(Tape& t, NodeRef a, NodeRef b) { return node_binary(t, BinaryOp::mul, a, b); }
inline NodeRef div(Tape& t, NodeRef a, NodeRef b) { return node_binary(t, BinaryOp::div, a, b); }

}  // namespace pinnlab
