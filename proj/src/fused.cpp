// SPDX-License-Identifier: Apache-2.0
#include "pinnlab/fused.hpp"

#include <cmath>
#include <numbers>

#include "pinnlab/errors.hpp"

namespace pinnlab {

namespace {
constexpr double kPi = std::numbers::pi;
}

FusedEngine::FusedEngine(const MlpConfig& config) : config_(config) {
    if (config.input_dim != kDim) {
        throw ShapeMismatch("fused engine expects two-dimensional problems");
    }
    layout_ = make_layout(config);
    depth_ = static_cast<int>(layout_.size());
    maxw_ = config.input_dim;
    for (const auto& lay : layout_) maxw_ = std::max(maxw_, lay.rows);

    const std::size_t span = static_cast<std::size_t>(kComps) * static_cast<std::size_t>(maxw_);
    input_.assign(static_cast<std::size_t>(depth_), std::vector<double>(span, 0.0));
    pre_.assign(static_cast<std::size_t>(depth_), std::vector<double>(span, 0.0));
    dphi_.assign(static_cast<std::size_t>(depth_), std::vector<double>(static_cast<std::size_t>(maxw_), 0.0));
    out_.assign(span, 0.0);
    adj_a_.assign(span, 0.0);
    adj_b_.assign(span, 0.0);
    adj_out_.assign(span, 0.0);

    wt_.resize(static_cast<std::size_t>(depth_));
    for (int l = 0; l < depth_; ++l) {
        const LayerLayout& lay = layout_[static_cast<std::size_t>(l)];
        wt_[static_cast<std::size_t>(l)].assign(
            static_cast<std::size_t>(lay.rows) * static_cast<std::size_t>(lay.cols), 0.0);
    }
}

void FusedEngine::configure_comps(ResidualKind kind) {
    switch (kind) {
        case ResidualKind::poisson:
        case ResidualKind::helmholtz:
            // Laplacian residuals: both pure second derivatives, no mixed term.
            nhess_ = 2;
            hess_i_[0] = 0;
            hess_j_[0] = 0;
            hess_i_[1] = 1;
            hess_j_[1] = 1;
            break;
        case ResidualKind::burgers:
            // Advection-diffusion residual: only u_xx appears.
            nhess_ = 1;
            hess_i_[0] = 0;
            hess_j_[0] = 0;
            break;
    }
    ncomp_ = 1 + kDim + nhess_;
}

void FusedEngine::refresh_weight_transposes(const MlpParams& params) {
    for (int l = 0; l < depth_; ++l) {
        const LayerLayout& lay = layout_[static_cast<std::size_t>(l)];
        const double* W = params.flat.data() + lay.weight_offset;
        double* T = wt_[static_cast<std::size_t>(l)].data();
        for (int r = 0; r < lay.rows; ++r) {
            for (int col = 0; col < lay.cols; ++col) {
                T[static_cast<std::size_t>(col) * static_cast<std::size_t>(lay.rows) + r] =
                    W[static_cast<std::size_t>(r) * static_cast<std::size_t>(lay.cols) + col];
            }
        }
    }
}

void FusedEngine::forward_jets(const MlpParams& params, const Point& x) {
    const int mw = maxw_;
    // Seed the input jets: val = x_i, grad = e_i, hess = 0.
    auto& in0 = input_[0];
    std::fill(in0.begin(), in0.end(), 0.0);
    in0[0] = x[0];
    in0[1] = x[1];
    in0[static_cast<std::size_t>(1 * mw) + 0] = 1.0;
    in0[static_cast<std::size_t>(2 * mw) + 1] = 1.0;

    for (int l = 0; l < depth_; ++l) {
        const LayerLayout& lay = layout_[static_cast<std::size_t>(l)];
        const double* b = params.flat.data() + lay.bias_offset;
        const double* Wt = wt_[static_cast<std::size_t>(l)].data();
        const bool last = l + 1 == depth_;
        std::vector<double>& dest = last ? out_ : pre_[static_cast<std::size_t>(l)];
        const std::vector<double>& src = input_[static_cast<std::size_t>(l)];
        // Accumulate column by column against the transposed weights. Each
        // inner pass is a plain axpy over the rows, which vectorizes, and the
        // per-output addition order (bias, then ascending column) matches the
        // scalar dot product exactly.
        double* d = dest.data();
        for (int r = 0; r < lay.rows; ++r) d[r] = b[r];
        for (int c = 1; c < ncomp_; ++c) {
            std::fill(d + static_cast<std::size_t>(c) * static_cast<std::size_t>(mw),
                      d + static_cast<std::size_t>(c) * static_cast<std::size_t>(mw) + lay.rows, 0.0);
        }
        for (int c = 0; c < ncomp_; ++c) {
            const double* s = src.data() + static_cast<std::size_t>(c) * static_cast<std::size_t>(mw);
            double* __restrict dc = d + static_cast<std::size_t>(c) * static_cast<std::size_t>(mw);
            for (int col = 0; col < lay.cols; ++col) {
                const double a = s[col];
                if (a == 0.0) continue;  // input-layer jets are mostly zeros
                const double* __restrict wcol =
                    Wt + static_cast<std::size_t>(col) * static_cast<std::size_t>(lay.rows);
                for (int r = 0; r < lay.rows; ++r) dc[r] += a * wcol[r];
            }
        }
        if (last) break;

        // Activation: input_[l+1] = phi(pre_[l]) propagated through the jet.
        std::vector<double>& nxt = input_[static_cast<std::size_t>(l + 1)];
        const std::vector<double>& pre = pre_[static_cast<std::size_t>(l)];
        double* dphi = dphi_[static_cast<std::size_t>(l)].data();
        for (int i = 0; i < lay.rows; ++i) {
            const double v = pre[static_cast<std::size_t>(i)];
            double y, d1, d2;
            if (config_.activation == Activation::tanh) {
                y = std::tanh(v);
                d1 = 1.0 - y * y;
                d2 = -2.0 * y * d1;
            } else if (config_.activation == Activation::sin) {
                y = std::sin(v);
                d1 = std::cos(v);
                d2 = -y;
            } else {
                y = v;
                d1 = 1.0;
                d2 = 0.0;
            }
            dphi[i] = d1;
            nxt[static_cast<std::size_t>(i)] = y;
            const double a0 = pre[static_cast<std::size_t>(1 * mw + i)];
            const double a1 = pre[static_cast<std::size_t>(2 * mw + i)];
            nxt[static_cast<std::size_t>(1 * mw + i)] = d1 * a0;
            nxt[static_cast<std::size_t>(2 * mw + i)] = d1 * a1;
            for (int h = 0; h < nhess_; ++h) {
                const double ai = (hess_i_[h] == 0) ? a0 : a1;
                const double aj = (hess_j_[h] == 0) ? a0 : a1;
                nxt[static_cast<std::size_t>((3 + h) * mw + i)] =
                    d2 * (ai * aj) + d1 * pre[static_cast<std::size_t>((3 + h) * mw + i)];
            }
        }
    }
}

void FusedEngine::forward_value_only(const MlpParams& params, const Point& x) {
    auto& in0 = input_[0];
    in0[0] = x[0];
    in0[1] = x[1];
    for (int l = 0; l < depth_; ++l) {
        const LayerLayout& lay = layout_[static_cast<std::size_t>(l)];
        const double* W = params.flat.data() + lay.weight_offset;
        const double* b = params.flat.data() + lay.bias_offset;
        const bool last = l + 1 == depth_;
        std::vector<double>& dest = last ? out_ : pre_[static_cast<std::size_t>(l)];
        const double* s = input_[static_cast<std::size_t>(l)].data();
        for (int r = 0; r < lay.rows; ++r) {
            const double* wrow = W + static_cast<std::size_t>(r) * static_cast<std::size_t>(lay.cols);
            double acc = b[r];
            for (int col = 0; col < lay.cols; ++col) acc += wrow[col] * s[col];
            dest[static_cast<std::size_t>(r)] = acc;
        }
        if (last) break;
        std::vector<double>& nxt = input_[static_cast<std::size_t>(l + 1)];
        const std::vector<double>& pre = pre_[static_cast<std::size_t>(l)];
        double* dphi = dphi_[static_cast<std::size_t>(l)].data();
        for (int i = 0; i < lay.rows; ++i) {
            const double v = pre[static_cast<std::size_t>(i)];
            if (config_.activation == Activation::tanh) {
                const double y = std::tanh(v);
                nxt[static_cast<std::size_t>(i)] = y;
                dphi[i] = 1.0 - y * y;
            } else if (config_.activation == Activation::sin) {
                nxt[static_cast<std::size_t>(i)] = std::sin(v);
                dphi[i] = std::cos(v);
            } else {
                nxt[static_cast<std::size_t>(i)] = v;
                dphi[i] = 1.0;
            }
        }
    }
}

void FusedEngine::backward(const MlpParams& params, int ncomp, std::vector<double>& grad) {
    switch (ncomp) {
        case 1: backward_impl<1>(params, grad); return;
        case 4: backward_impl<4>(params, grad); return;
        case 5: backward_impl<5>(params, grad); return;
        case 6: backward_impl<6>(params, grad); return;
        default: throw ShapeMismatch("fused backward: unsupported component count");
    }
}

template <int NC>
void FusedEngine::backward_impl(const MlpParams& params, std::vector<double>& grad) {
    constexpr int NH = (NC > 1) ? NC - 1 - kDim : 0;  // active second-derivative comps
    const int mw = maxw_;
    double* cur = adj_out_.data();
    double* spare = adj_a_.data();
    for (int l = depth_ - 1; l >= 0; --l) {
        const LayerLayout& lay = layout_[static_cast<std::size_t>(l)];
        const double* W = params.flat.data() + lay.weight_offset;
        const double* __restrict in0 = input_[static_cast<std::size_t>(l)].data();

        // Parameter gradients of this affine layer: fold the component
        // contributions into one store per weight (the c-loop unrolls).
        for (int r = 0; r < lay.rows; ++r) {
            grad[lay.bias_offset + static_cast<std::size_t>(r)] += cur[r];
            double* __restrict wg = grad.data() + lay.weight_offset +
                                    static_cast<std::size_t>(r) * static_cast<std::size_t>(lay.cols);
            double a[NC];
            for (int c = 0; c < NC; ++c) a[c] = cur[static_cast<std::size_t>(c * mw + r)];
            for (int col = 0; col < lay.cols; ++col) {
                double t = 0.0;
                for (int c = 0; c < NC; ++c) t += a[c] * in0[static_cast<std::size_t>(c * mw + col)];
                wg[col] += t;
            }
        }
        if (l == 0) break;

        // Adjoint of this layer's input (the previous activation output).
        // One axpy per (row, component): a single store stream keeps the
        // alias analysis simple enough to vectorize.
        double* nxt = spare;
        std::fill(nxt, nxt + static_cast<std::size_t>(NC) * static_cast<std::size_t>(mw), 0.0);
        for (int r = 0; r < lay.rows; ++r) {
            const double* __restrict wrow =
                W + static_cast<std::size_t>(r) * static_cast<std::size_t>(lay.cols);
            for (int c = 0; c < NC; ++c) {
                const double a = cur[static_cast<std::size_t>(c * mw + r)];
                if (a == 0.0) continue;
                double* __restrict n = nxt + static_cast<std::size_t>(c) * static_cast<std::size_t>(mw);
                for (int col = 0; col < lay.cols; ++col) n[col] += a * wrow[col];
            }
        }

        // Reverse through the activation of layer l-1, in place.
        const std::vector<double>& pre = pre_[static_cast<std::size_t>(l - 1)];
        const std::vector<double>& post = input_[static_cast<std::size_t>(l)];
        const double* dphi = dphi_[static_cast<std::size_t>(l - 1)].data();
        const int width = lay.cols;
        for (int i = 0; i < width; ++i) {
            const double d1 = dphi[i];
            const double ybar = nxt[i];
            if constexpr (NC == 1) {
                nxt[i] = ybar * d1;
            } else {
                const double y = post[static_cast<std::size_t>(i)];
                double d2, d3;
                if (config_.activation == Activation::tanh) {
                    d2 = -2.0 * y * d1;
                    d3 = 2.0 * d1 * (3.0 * y * y - 1.0);
                } else if (config_.activation == Activation::sin) {
                    d2 = -y;
                    d3 = -d1;
                } else {
                    d2 = 0.0;
                    d3 = 0.0;
                }
                const double a0 = pre[static_cast<std::size_t>(1 * mw + i)];
                const double a1 = pre[static_cast<std::size_t>(2 * mw + i)];
                const double g0bar = nxt[static_cast<std::size_t>(1 * mw + i)];
                const double g1bar = nxt[static_cast<std::size_t>(2 * mw + i)];

                // val adjoint collects the phi-derivative chain of every
                // output; grad adjoints pick up the Hessian quadratic terms
                // (a diagonal entry contributes twice, d/dA of A^2).
                double vbar = ybar * d1 + d2 * (g0bar * a0 + g1bar * a1);
                double abar0 = d1 * g0bar;
                double abar1 = d1 * g1bar;
                for (int h = 0; h < NH; ++h) {
                    const double hb = nxt[static_cast<std::size_t>((3 + h) * mw + i)];
                    const double ah = pre[static_cast<std::size_t>((3 + h) * mw + i)];
                    const double ai = (hess_i_[h] == 0) ? a0 : a1;
                    const double aj = (hess_j_[h] == 0) ? a0 : a1;
                    vbar += hb * (d3 * ai * aj + d2 * ah);
                    const double c = d2 * hb;
                    if (hess_i_[h] == 0) abar0 += c * aj; else abar1 += c * aj;
                    if (hess_j_[h] == 0) abar0 += c * ai; else abar1 += c * ai;
                    nxt[static_cast<std::size_t>((3 + h) * mw + i)] = d1 * hb;
                }
                nxt[i] = vbar;
                nxt[static_cast<std::size_t>(1 * mw + i)] = abar0;
                nxt[static_cast<std::size_t>(2 * mw + i)] = abar1;
            }
        }
        // Ping-pong: nxt becomes the current adjoint.
        double* old = cur;
        cur = nxt;
        spare = (old == adj_out_.data()) ? adj_b_.data() : old;
    }
}
double FusedEngine::interior_point(const MlpParams& params, const PdeProblem& problem,
                                   const Point& x, double inv_n, std::vector<double>& grad) {
    forward_jets(params, x);
    const int mw = maxw_;
    const double u = out_[0];
    const double g0 = out_[static_cast<std::size_t>(1 * mw)];
    const double g1 = out_[static_cast<std::size_t>(2 * mw)];
    const double h00 = out_[static_cast<std::size_t>(3 * mw)];

    double r = 0.0;
    std::fill(adj_out_.begin(), adj_out_.end(), 0.0);
    switch (problem.residual_kind) {
        case ResidualKind::poisson: {
            const double h11 = out_[static_cast<std::size_t>(4 * mw)];
            r = h00 + h11;
            const double s = 2.0 * r * inv_n;
            adj_out_[static_cast<std::size_t>(3 * mw)] = s;
            adj_out_[static_cast<std::size_t>(4 * mw)] = s;
            break;
        }
        case ResidualKind::helmholtz: {
            const double h11 = out_[static_cast<std::size_t>(4 * mw)];
            const double k = problem.pde_params.at(0);
            const double a1 = problem.pde_params.at(1);
            const double a2 = problem.pde_params.at(2);
            const double f = (k * k - a1 * a1 * kPi * kPi - a2 * a2 * kPi * kPi) *
                             std::sin(a1 * kPi * x[0]) * std::sin(a2 * kPi * x[1]);
            r = (h00 + h11) + k * k * u - f;
            const double s = 2.0 * r * inv_n;
            adj_out_[static_cast<std::size_t>(3 * mw)] = s;
            adj_out_[static_cast<std::size_t>(4 * mw)] = s;
            adj_out_[0] = k * k * s;
            break;
        }
        case ResidualKind::burgers: {
            const double nu = problem.pde_params.at(0);
            r = (g1 + u * g0) - nu * h00;
            const double s = 2.0 * r * inv_n;
            adj_out_[static_cast<std::size_t>(2 * mw)] = s;  // u_t
            adj_out_[0] = g0 * s;                            // via u * u_x
            adj_out_[static_cast<std::size_t>(1 * mw)] = u * s;
            adj_out_[static_cast<std::size_t>(3 * mw)] = -nu * s;
            break;
        }
    }
    backward(params, ncomp_, grad);
    return r * r;
}

double FusedEngine::boundary_point(const MlpParams& params, const BoundaryPoint& bp, double inv_n,
                                   std::vector<double>& grad) {
    forward_value_only(params, bp.x);
    const double err = out_[0] - bp.target;
    std::fill(adj_out_.begin(), adj_out_.end(), 0.0);
    adj_out_[0] = 2.0 * err * inv_n;
    backward(params, 1, grad);
    return err * err;
}

GroupEval FusedEngine::evaluate(const MlpParams& params, const PdeProblem& problem,
                                std::span<const LossGroup> groups) {
    if (groups.empty()) throw EmptyGroup("fused evaluate: no groups");
    if (params.flat.size() != param_count(config_)) {
        throw ShapeMismatch("fused evaluate: parameter vector does not match config");
    }
    refresh_weight_transposes(params);
    configure_comps(problem.residual_kind);
    GroupEval eval;
    eval.losses.assign(groups.size(), 0.0);
    eval.gradients.assign(groups.size(), {});
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        const LossGroup& g = groups[gi];
        if (g.samples == nullptr) throw EmptyGroup("group '" + g.id + "' has no sample set");
        std::vector<double>& grad = eval.gradients[gi];
        grad.assign(params.flat.size(), 0.0);
        double acc = 0.0;
        if (g.kind == GroupKind::pde) {
            const auto& pts = g.samples->interior;
            if (pts.empty()) throw EmptyGroup("group '" + g.id + "' has no interior points");
            const double inv_n = 1.0 / static_cast<double>(pts.size());
            for (const Point& x : pts) acc += interior_point(params, problem, x, inv_n, grad);
            eval.losses[gi] = acc / static_cast<double>(pts.size());
        } else {
            const auto& pts = g.samples->boundary;
            if (pts.empty()) throw EmptyGroup("group '" + g.id + "' has no boundary points");
            const double inv_n = 1.0 / static_cast<double>(pts.size());
            for (const BoundaryPoint& bp : pts) acc += boundary_point(params, bp, inv_n, grad);
            eval.losses[gi] = acc / static_cast<double>(pts.size());
        }
    }
    return eval;
}

GroupEval fused_group_gradients(const MlpParams& params, const MlpConfig& config,
                                const PdeProblem& problem, std::span<const LossGroup> groups) {
    FusedEngine engine(config);
    return engine.evaluate(params, problem, groups);
}

}  // namespace pinnlab
