// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pinnlab/jet.hpp"
#include "pinnlab/network.hpp"
#include "pinnlab/tape.hpp"

namespace pinnlab {

using Point = std::array<double, 2>;

struct Disk {
    Point center{};
    double radius = 0.0;
};

enum class DomainKind : std::uint8_t { rect2d, rect2d_minus_disks, spacetime1d };

/// Structural tag for the residual operator, used by gradient kernels that
/// need the residual's derivative with respect to the output jet.
enum class ResidualKind : std::uint8_t { poisson, helmholtz, burgers };

/// Axis-aligned 2-D region. For spacetime1d the axes are (x, t). Disks are
/// holes cut out of the rectangle (rect2d_minus_disks only).
struct Domain {
    DomainKind kind = DomainKind::rect2d;
    Point lo{-1.0, -1.0};
    Point hi{1.0, 1.0};
    std::vector<Disk> disks;
};

/// One connected piece of the boundary with its own Dirichlet data.
/// `point_at` maps a parameter in [0, 1) onto the component; `measure` is
/// the 1-D length used for proportional sample allocation.
struct BoundaryComponent {
    std::string tag;
    double measure = 0.0;
    std::function<Point(double)> point_at;
    std::function<double(const Point&)> target;
};

struct BoundaryPoint {
    int component = 0;
    Point x{};
    double target = 0.0;
};

/// A benchmark PDE: geometry, residual operator, boundary data, and (when a
/// closed form exists) the exact solution.
struct PdeProblem {
    std::string name;
    Domain domain;
    int pde_order = 2;
    ResidualKind residual_kind = ResidualKind::poisson;
    std::vector<double> pde_params;  // helmholtz: {k, a1, a2}; burgers: {nu}
    Activation default_activation = Activation::tanh;
    std::function<NodeRef(Tape&, const Jet2&, const Point&)> residual;
    std::function<double(const JetVal&, const Point&)> residual_value;
    std::vector<BoundaryComponent> boundary_sets;
    std::function<double(const Point&)> exact;  // empty when no closed form
};

/// Fixed training set: interior collocation points plus labeled boundary
/// points, all drawn once per seed.
struct SampleSet {
    std::vector<Point> interior;
    std::vector<BoundaryPoint> boundary;
    std::uint64_t seed = 0;
};

/// Uniform points on the domain; disk interiors are rejected. Throws
/// RejectionBudgetExceeded when fewer than ~1% of draws are accepted.
std::vector<Point> sample_interior(const Domain& domain, int n, std::uint64_t seed);

/// Boundary points allocated to components proportionally to their measure
/// (largest-remainder rounding, at least one point per component), each
/// labeled with its component index and Dirichlet target.
std::vector<BoundaryPoint> sample_boundary(const PdeProblem& problem, int n, std::uint64_t seed);

SampleSet make_samples(const PdeProblem& problem, int n_interior, int n_boundary,
                       std::uint64_t seed);

/// Largest-remainder allocation of n points over the given measures with a
/// floor of one per component. Exposed for direct testing.
std::vector<int> allocate_boundary_counts(const std::vector<double>& measures, int n);

/// u_xx + u_yy
NodeRef poisson_residual(Tape& tape, const Jet2& jet);

/// u_xx + u_yy + k^2 u - f(x),  f = (k^2 - a1^2 pi^2 - a2^2 pi^2) sin(a1 pi x) sin(a2 pi y)
NodeRef helmholtz_residual(Tape& tape, const Jet2& jet, const Point& x, double k, double a1,
                           double a2);

/// u_t + u u_x - nu u_xx, axes (x, t)
NodeRef burgers_residual(Tape& tape, const Jet2& jet, double nu);

/// Poses the same problem on coordinates x' = x / t: bounds, disk centers
/// and radii shrink by t, boundary targets compose with x |-> t x', and the
/// residual operator keeps its form.
PdeProblem scale_domain(const PdeProblem& problem, double t);

/// Registry: poisson-8, poisson-1, helmholtz-1, helmholtz-0.2, burgers-1.
PdeProblem make_problem(const std::string& name);
std::vector<std::string> problem_names();

}  // namespace pinnlab
