// SPDX-License-Identifier: Apache-2.0
#include "pinnlab/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "pinnlab/errors.hpp"
#include "pinnlab/rng.hpp"

namespace pinnlab {

namespace {

constexpr double kPi = std::numbers::pi;

// Stream tags so interior/boundary draws never overlap for one seed.
constexpr std::uint64_t kInteriorStream = 0x1001;
constexpr std::uint64_t kBoundaryStream = 0x2002;

bool inside_disks(const Domain& domain, const Point& p) {
    for (const Disk& d : domain.disks) {
        const double dx = p[0] - d.center[0];
        const double dy = p[1] - d.center[1];
        if (dx * dx + dy * dy < d.radius * d.radius) return true;
    }
    return false;
}

BoundaryComponent rect_perimeter(const Point& lo, const Point& hi,
                                 std::function<double(const Point&)> target) {
    const double w = hi[0] - lo[0];
    const double h = hi[1] - lo[1];
    const double perim = 2.0 * (w + h);
    BoundaryComponent c;
    c.tag = "outer";
    c.measure = perim;
    c.target = std::move(target);
    c.point_at = [lo, hi, w, h, perim](double u) -> Point {
        double s = u * perim;
        if (s < w) return {lo[0] + s, lo[1]};          // bottom, left to right
        s -= w;
        if (s < h) return {hi[0], lo[1] + s};          // right, upwards
        s -= h;
        if (s < w) return {hi[0] - s, hi[1]};          // top, right to left
        s -= w;
        return {lo[0], hi[1] - s};                     // left, downwards
    };
    return c;
}

BoundaryComponent circle(const Disk& disk, std::string tag,
                         std::function<double(const Point&)> target) {
    BoundaryComponent c;
    c.tag = std::move(tag);
    c.measure = 2.0 * kPi * disk.radius;
    c.target = std::move(target);
    c.point_at = [disk](double u) -> Point {
        const double th = 2.0 * kPi * u;
        return {disk.center[0] + disk.radius * std::cos(th),
                disk.center[1] + disk.radius * std::sin(th)};
    };
    return c;
}

BoundaryComponent segment(std::string tag, const Point& a, const Point& b,
                          std::function<double(const Point&)> target) {
    BoundaryComponent c;
    c.tag = std::move(tag);
    c.measure = std::hypot(b[0] - a[0], b[1] - a[1]);
    c.target = std::move(target);
    c.point_at = [a, b](double u) -> Point {
        return {a[0] + u * (b[0] - a[0]), a[1] + u * (b[1] - a[1])};
    };
    return c;
}

}  // namespace

std::vector<Point> sample_interior(const Domain& domain, int n, std::uint64_t seed) {
    if (n < 1) throw ConfigError("sample_interior: n must be at least 1");
    Rng rng = Rng::derive(seed, kInteriorStream);
    std::vector<Point> points;
    points.reserve(static_cast<std::size_t>(n));
    // Rejection bails out once acceptance drops below about 1%.
    const long long budget = 100LL * n + 1000;
    long long attempts = 0;
    while (static_cast<int>(points.size()) < n) {
        if (attempts++ >= budget) {
            throw RejectionBudgetExceeded("interior sampler acceptance below 1%: check geometry");
        }
        Point p = {rng.uniform(domain.lo[0], domain.hi[0]),
                   rng.uniform(domain.lo[1], domain.hi[1])};
        if (domain.kind == DomainKind::rect2d_minus_disks && inside_disks(domain, p)) continue;
        points.push_back(p);
    }
    return points;
}

std::vector<int> allocate_boundary_counts(const std::vector<double>& measures, int n) {
    const int m = static_cast<int>(measures.size());
    if (m == 0) throw EmptyGroup("no boundary components");
    if (n < m) throw ConfigError("boundary sample count below component count");
    const double total = std::accumulate(measures.begin(), measures.end(), 0.0);
    std::vector<int> counts(measures.size(), 0);
    std::vector<std::pair<double, int>> fractions;  // (fractional part, index)
    int assigned = 0;
    for (int i = 0; i < m; ++i) {
        const double quota = n * measures[static_cast<std::size_t>(i)] / total;
        counts[static_cast<std::size_t>(i)] = static_cast<int>(std::floor(quota));
        assigned += counts[static_cast<std::size_t>(i)];
        fractions.emplace_back(quota - std::floor(quota), i);
    }
    std::sort(fractions.begin(), fractions.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;  // deterministic tie-break
    });
    for (int k = 0; k < n - assigned; ++k) {
        counts[static_cast<std::size_t>(fractions[static_cast<std::size_t>(k)].second)] += 1;
    }
    // Floor of one point per component: steal from the largest counts.
    for (std::size_t i = 0; i < counts.size(); ++i) {
        while (counts[i] == 0) {
            auto big = std::max_element(counts.begin(), counts.end());
            if (*big <= 1) throw ConfigError("cannot give every boundary component a point");
            *big -= 1;
            counts[i] += 1;
        }
    }
    return counts;
}

std::vector<BoundaryPoint> sample_boundary(const PdeProblem& problem, int n, std::uint64_t seed) {
    const auto& sets = problem.boundary_sets;
    std::vector<double> measures;
    measures.reserve(sets.size());
    for (const auto& c : sets) measures.push_back(c.measure);
    const auto counts = allocate_boundary_counts(measures, n);

    Rng rng = Rng::derive(seed, kBoundaryStream);
    std::vector<BoundaryPoint> points;
    points.reserve(static_cast<std::size_t>(n));
    for (std::size_t ci = 0; ci < sets.size(); ++ci) {
        const auto& comp = sets[ci];
        for (int k = 0; k < counts[ci]; ++k) {
            BoundaryPoint bp;
            bp.component = static_cast<int>(ci);
            bp.x = comp.point_at(rng.uniform());
            bp.target = comp.target(bp.x);
            points.push_back(bp);
        }
    }
    return points;
}

SampleSet make_samples(const PdeProblem& problem, int n_interior, int n_boundary,
                       std::uint64_t seed) {
    SampleSet s;
    s.seed = seed;
    s.interior = sample_interior(problem.domain, n_interior, seed);
    s.boundary = sample_boundary(problem, n_boundary, seed);
    return s;
}

NodeRef poisson_residual(Tape& tape, const Jet2& jet) {
    return add(tape, jet.hess_at(0, 0), jet.hess_at(1, 1));
}

NodeRef helmholtz_residual(Tape& tape, const Jet2& jet, const Point& x, double k, double a1,
                           double a2) {
    const double f = (k * k - a1 * a1 * kPi * kPi - a2 * a2 * kPi * kPi) *
                     std::sin(a1 * kPi * x[0]) * std::sin(a2 * kPi * x[1]);
    const NodeRef lap = add(tape, jet.hess_at(0, 0), jet.hess_at(1, 1));
    const NodeRef ku = mul(tape, tape.constant(k * k), jet.val);
    return sub(tape, add(tape, lap, ku), tape.constant(f));
}

NodeRef burgers_residual(Tape& tape, const Jet2& jet, double nu) {
    // axes (x, t): grad[0] = u_x, grad[1] = u_t, hess(0,0) = u_xx
    const NodeRef convect = mul(tape, jet.val, jet.grad[0]);
    const NodeRef diffuse = mul(tape, tape.constant(nu), jet.hess_at(0, 0));
    return sub(tape, add(tape, jet.grad[1], convect), diffuse);
}

PdeProblem scale_domain(const PdeProblem& problem, double t) {
    if (!(t > 0.0)) throw ConfigError("scale_domain: t must be positive");
    PdeProblem scaled = problem;
    for (int a = 0; a < 2; ++a) {
        scaled.domain.lo[static_cast<std::size_t>(a)] /= t;
        scaled.domain.hi[static_cast<std::size_t>(a)] /= t;
    }
    for (Disk& d : scaled.domain.disks) {
        d.center[0] /= t;
        d.center[1] /= t;
        d.radius /= t;
    }
    scaled.boundary_sets.clear();
    for (const BoundaryComponent& c : problem.boundary_sets) {
        BoundaryComponent sc;
        sc.tag = c.tag;
        sc.measure = c.measure / t;
        sc.point_at = [inner = c.point_at, t](double u) -> Point {
            const Point p = inner(u);
            return {p[0] / t, p[1] / t};
        };
        sc.target = [inner = c.target, t](const Point& p) {
            return inner(Point{t * p[0], t * p[1]});
        };
        scaled.boundary_sets.push_back(std::move(sc));
    }
    if (problem.exact) {
        scaled.exact = [inner = problem.exact, t](const Point& p) {
            return inner(Point{t * p[0], t * p[1]});
        };
    }
    return scaled;
}

namespace {

PdeProblem make_poisson8() {
    PdeProblem p;
    p.name = "poisson-8";
    p.domain.kind = DomainKind::rect2d_minus_disks;
    p.domain.lo = {-4.0, -4.0};
    p.domain.hi = {4.0, 4.0};
    for (double sx : {-2.0, 2.0}) {
        for (double sy : {-2.0, 2.0}) {
            p.domain.disks.push_back(Disk{{sx, sy}, 1.0});
        }
    }
    p.residual = [](Tape& tape, const Jet2& jet, const Point&) {
        return poisson_residual(tape, jet);
    };
    p.residual_value = [](const JetVal& jet, const Point&) {
        return jet.hess_at(0, 0) + jet.hess_at(1, 1);
    };
    auto one = [](const Point&) { return 1.0; };
    auto zero = [](const Point&) { return 0.0; };
    p.boundary_sets.push_back(rect_perimeter(p.domain.lo, p.domain.hi, one));
    int i = 0;
    for (const Disk& d : p.domain.disks) {
        p.boundary_sets.push_back(circle(d, "disk" + std::to_string(i++), zero));
    }
    return p;
}

PdeProblem make_helmholtz(double k, double a1, double a2, double b, std::string name) {
    PdeProblem p;
    p.name = std::move(name);
    p.domain.kind = DomainKind::rect2d;
    p.domain.lo = {-b / 2.0, -b / 2.0};
    p.domain.hi = {b / 2.0, b / 2.0};
    p.residual_kind = ResidualKind::helmholtz;
    p.pde_params = {k, a1, a2};
    p.default_activation = Activation::sin;
    p.residual = [k, a1, a2](Tape& tape, const Jet2& jet, const Point& x) {
        return helmholtz_residual(tape, jet, x, k, a1, a2);
    };
    p.residual_value = [k, a1, a2](const JetVal& jet, const Point& x) {
        const double f = (k * k - a1 * a1 * kPi * kPi - a2 * a2 * kPi * kPi) *
                         std::sin(a1 * kPi * x[0]) * std::sin(a2 * kPi * x[1]);
        return jet.hess_at(0, 0) + jet.hess_at(1, 1) + k * k * jet.val - f;
    };
    p.exact = [a1, a2](const Point& x) {
        return std::sin(a1 * kPi * x[0]) * std::sin(a2 * kPi * x[1]);
    };
    // Dirichlet data is the exact trace; it reduces to zero whenever the
    // sine happens to vanish on the boundary.
    p.boundary_sets.push_back(rect_perimeter(p.domain.lo, p.domain.hi, p.exact));
    return p;
}

PdeProblem make_burgers() {
    PdeProblem p;
    p.name = "burgers-1";
    p.domain.kind = DomainKind::spacetime1d;
    p.domain.lo = {-1.0, 0.0};  // (x, t)
    p.domain.hi = {1.0, 1.0};
    const double nu = 0.01 / kPi;
    p.residual_kind = ResidualKind::burgers;
    p.pde_params = {nu};
    p.residual = [nu](Tape& tape, const Jet2& jet, const Point&) {
        return burgers_residual(tape, jet, nu);
    };
    p.residual_value = [nu](const JetVal& jet, const Point&) {
        return jet.grad[1] + jet.val * jet.grad[0] - nu * jet.hess_at(0, 0);
    };
    auto initial = [](const Point& x) { return -std::sin(kPi * x[0]); };
    auto zero = [](const Point&) { return 0.0; };
    p.boundary_sets.push_back(segment("t0", {-1.0, 0.0}, {1.0, 0.0}, initial));
    p.boundary_sets.push_back(segment("xlo", {-1.0, 0.0}, {-1.0, 1.0}, zero));
    p.boundary_sets.push_back(segment("xhi", {1.0, 0.0}, {1.0, 1.0}, zero));
    return p;
}

}  // namespace

PdeProblem make_problem(const std::string& name) {
    if (name == "poisson-8") return make_poisson8();
    if (name == "poisson-1") {
        PdeProblem p = scale_domain(make_poisson8(), 8.0);
        p.name = "poisson-1";
        return p;
    }
    if (name == "helmholtz-1") return make_helmholtz(1.0, 1.0, 1.0, 1.0, "helmholtz-1");
    if (name == "helmholtz-0.2") return make_helmholtz(1.0, 10.0, 10.0, 0.2, "helmholtz-0.2");
    if (name == "burgers-1") return make_burgers();
    std::string known;
    for (const std::string& p : problem_names()) {
        if (!known.empty()) known += ", ";
        known += p;
    }
    throw ConfigError("unknown problem '" + name + "' (registered: " + known + ")");
}

std::vector<std::string> problem_names() {
    return {"poisson-8", "poisson-1", "helmholtz-1", "helmholtz-0.2", "burgers-1"};
}

}  // namespace pinnlab
