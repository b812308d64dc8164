// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <span>
#include <vector>

#include "pinnlab/tape.hpp"

namespace pinnlab {

enum class Activation : std::uint8_t { tanh, sin, linear };

/// Number of independent entries of a symmetric d x d matrix.
constexpr int hess_size(int dim) { return dim * (dim + 1) / 2; }

/// Packed index of the (i, j) Hessian entry, i <= j after swapping.
constexpr int hess_index(int i, int j) {
    if (i > j) { const int t = i; i = j; j = t; }
    return j * (j + 1) / 2 + i;
}

/// A value on the tape together with its first and second derivatives with
/// respect to the original inputs. Every component is itself a tape node, so
/// the whole jet stays differentiable with respect to any upstream leaves.
/// The Hessian is stored packed (upper triangle); (i,j) and (j,i) are the
/// same node by construction.
struct Jet2 {
    NodeRef val{};
    int dim = 0;
    std::array<NodeRef, 3> grad{};
    std::array<NodeRef, 6> hess{};

    NodeRef hess_at(int i, int j) const { return hess[hess_index(i, j)]; }
};

/// Seeds jets for an input point: val = x_i, grad = e_i, hess = 0, all as
/// constant nodes. Throws DimensionOutOfRange unless 1 <= dim <= 3.
std::vector<Jet2> jet_seed(Tape& tape, std::span<const double> x, int dim);

/// Applies out_k = sum_j W[k*in+j] * in_j + b_k to every jet component
/// (the bias enters the value only; derivatives of a constant vanish).
/// `weights` is row-major [out_dim x jets.size()]. Throws ShapeMismatch.
std::vector<Jet2> jet_affine(Tape& tape, std::span<const Jet2> jets,
                             std::span<const NodeRef> weights, std::span<const NodeRef> bias);

/// Chain rule through a scalar activation:
///   val    = phi(v)
///   grad_i = phi'(v) g_i
///   hess_ij = phi''(v) g_i g_j + phi'(v) h_ij
Jet2 jet_activation(Tape& tape, const Jet2& jet, Activation act);

}  // namespace pinnlab
