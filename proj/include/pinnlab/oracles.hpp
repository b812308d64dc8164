// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pinnlab/problems.hpp"

namespace pinnlab {

/// Cell classification for the masked-grid Poisson solver.
enum class FdMask : std::uint8_t {
    inside,          // unknown, updated by relaxation
    outer_boundary,  // Dirichlet data u = 1 (outer square)
    disk_boundary,   // Dirichlet data u = 0 (staircase ring around each disk)
    excluded,        // deep inside a disk; carries no value
};

/// Finite-difference solution of the Laplace problem on a square with
/// circular holes, on a uniform node grid (including the outer boundary).
struct FdSolution {
    double h = 0.0;             // grid spacing
    int nx = 0;                 // nodes per axis (grid is nx × nx)
    Point lo{0.0, 0.0};         // coordinates of node (0, 0)
    std::vector<double> values; // row-major [j * nx + i]; 0 where excluded
    std::vector<FdMask> mask;   // same layout
    double residual_norm = 0.0; // max |u_E + u_W + u_N + u_S - 4u| at the end

    double at(int i, int j) const { return values[static_cast<std::size_t>(j) * nx + i]; }
    FdMask mask_at(int i, int j) const { return mask[static_cast<std::size_t>(j) * nx + i]; }

    /// Bilinear interpolation for off-grid queries. The query must lie in a
    /// cell whose four corners all carry values (true for any point of the
    /// continuous domain, where excluded nodes sit strictly inside disks).
    double interpolate(const Point& p) const;
};

/// Solves the 5-point Laplace equation with u = 1 on the outer square and
/// u = 0 on the disk boundaries, by successive over-relaxation swept in row
/// order until max |u_E + u_W + u_N + u_S - 4u| < tol. Disk values are
/// imposed on the in-disk nodes adjacent to the exterior (staircase rings).
/// Requires h to divide the side length evenly.
FdSolution poisson_fd_solve(const Domain& domain, double h, double tol,
                            int max_sweeps = 200000);

/// Exact solution of u_t + u u_x = nu u_xx on x in [-1, 1] with
/// u(0, x) = -sin(pi x) and nu = 0.01/pi, evaluated via the integral form of
/// the heat-equation substitution using Gauss-Hermite quadrature of the
/// given order. t = 0 returns -sin(pi x) directly.
double burgers_cole_hopf(double x, double t, int quad_order = 64);

/// Gauss-Hermite rule for weight exp(-z^2): nodes (ascending) and weights.
/// Computed by bisection on the orthonormal recurrence; weights by the
/// Christoffel sum. Deterministic; weights sum to sqrt(pi).
void gauss_hermite(int order, std::vector<double>& nodes, std::vector<double>& weights);

/// Independent cross-check for the integral evaluator: conservative
/// finite-difference solve (central flux, trapezoidal implicit diffusion,
/// Heun corrector for the convective term) on nx nodes, sampled at the
/// requested times (ascending, within [0, inf)).
struct BurgersFd {
    std::vector<double> x;                    // nx nodes including endpoints
    std::vector<double> times;                // copy of the requested times
    std::vector<std::vector<double>> frames;  // frames[k][i] = u(times[k], x[i])
};
BurgersFd burgers_fd_solve(int nx, std::span<const double> times);

/// Truncation and quadrature resolution for the rectangle Green's-function
/// series. Inner nodes resolve the integrals over the domain and its
/// boundary inside the square roots; outer nodes resolve the final integral.
struct GreenSeriesConfig {
    int modes = 80;              // series truncation per axis (M)
    int inner_per_axis = 64;     // inner-domain quadrature nodes per axis
    int outer_per_axis = 128;    // outer-domain quadrature nodes per axis
    int boundary_per_edge = 256; // boundary quadrature nodes per edge
};

/// Dirichlet Green's function of the Laplacian on the square of the given
/// side centered at the origin, by the orthonormal sine eigenfunction series
/// truncated at M modes per axis. Throws CoincidentPoints for |x - xi| < 1e-9
/// (logarithmic singularity).
double green_rectangle(const Point& x, const Point& xi, double side, int M);

/// The two loss-weight constants of the error bound:
///   C1 = integral over the domain of sqrt(|domain| * integral of G^2 d xi),
///   C2 = same with the boundary integral of the squared normal derivative.
struct C1C2 {
    double c1 = 0.0;
    double c2 = 0.0;
};

/// Tensor-product midpoint quadrature of both constants on the square of the
/// given side. Inner nodes that coincide with the outer evaluation point are
/// skipped and their cell replaced by a local log-singularity estimate.
C1C2 compute_c1_c2(double side, const GreenSeriesConfig& cfg = {});

/// Theory-suggested PDE-group weight with the boundary group normalized to
/// one: (C1/C2)^2.
double theoretical_weight(double side, const GreenSeriesConfig& cfg = {});

}  // namespace pinnlab
