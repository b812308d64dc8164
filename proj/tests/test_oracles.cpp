// SPDX-License-Identifier: Apache-2.0
//
// Reference solvers: the Gauss-Hermite rule, the Burgers integral solution
// and its finite-difference cross-check, the relaxation solver for the
// perforated square, and the series Green's-function weight constants.
#include <cmath>
#include <numbers>
#include <vector>

#include <doctest.h>

#include "pinnlab/errors.hpp"
#include "pinnlab/oracles.hpp"
#include "pinnlab/problems.hpp"

using namespace pinnlab;

namespace {

constexpr double kPi = std::numbers::pi;

// Small quadrature configuration that keeps unit tests fast. The inner and
// outer lattices share no nodes (3(2i+1) = 2(2q+1) has no integer solutions),
// so the log-singular fallback stays off unless a test opts in.
GreenSeriesConfig small_cfg() {
    GreenSeriesConfig cfg;
    cfg.modes = 12;
    cfg.inner_per_axis = 24;
    cfg.outer_per_axis = 16;
    cfg.boundary_per_edge = 32;
    return cfg;
}

double mode_sin(int m, double u, double side) {
    return std::sin(m * kPi * (u / side + 0.5));
}

}  // namespace

TEST_CASE("Hermite rule integrates Gaussian moments exactly") {
    for (int order : {32, 33, 64}) {
        CAPTURE(order);
        std::vector<double> z, w;
        gauss_hermite(order, z, w);
        REQUIRE(z.size() == static_cast<std::size_t>(order));
        REQUIRE(w.size() == z.size());
        double m0 = 0.0, m1 = 0.0, m2 = 0.0, m4 = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i) {
            m0 += w[i];
            m1 += w[i] * z[i];
            m2 += w[i] * z[i] * z[i];
            m4 += w[i] * z[i] * z[i] * z[i] * z[i];
        }
        const double root_pi = std::sqrt(kPi);
        CHECK(m0 == doctest::Approx(root_pi).epsilon(1e-14));
        CHECK(std::fabs(m1) < 1e-13);
        CHECK(m2 == doctest::Approx(0.5 * root_pi).epsilon(1e-13));
        CHECK(m4 == doctest::Approx(0.75 * root_pi).epsilon(1e-13));
        // Nodes come out sorted and symmetric about zero.
        for (std::size_t i = 0; i < z.size() / 2; ++i) {
            CHECK(z[i] == doctest::Approx(-z[z.size() - 1 - i]).epsilon(1e-13));
        }
    }
    std::vector<double> z, w;
    CHECK_THROWS_AS(gauss_hermite(0, z, w), ConfigError);
}

TEST_CASE("Burgers integral solution matches the initial data and symmetries") {
    for (double x : {-0.9, -0.3, 0.0, 0.5, 1.0}) {
        CHECK(burgers_cole_hopf(x, 0.0) == -std::sin(kPi * x));
    }
    // Odd symmetry pins u = 0 at the center and at both walls for all times.
    for (double t : {0.1, 0.5, 1.0}) {
        CAPTURE(t);
        CHECK(std::fabs(burgers_cole_hopf(0.0, t)) < 1e-12);
        CHECK(std::fabs(burgers_cole_hopf(1.0, t)) < 1e-3);
        CHECK(std::fabs(burgers_cole_hopf(-1.0, t)) < 1e-3);
        for (double x : {0.2, 0.55, 0.9}) {
            CHECK(burgers_cole_hopf(-x, t) ==
                  doctest::Approx(-burgers_cole_hopf(x, t)).epsilon(1e-12));
        }
    }
    // The default order is converged: doubling it moves nothing.
    for (double x : {-0.75, 0.1, 0.6}) {
        CHECK(burgers_cole_hopf(x, 1.0, 64) ==
              doctest::Approx(burgers_cole_hopf(x, 1.0, 128)).epsilon(1e-9));
    }
    CHECK_THROWS_AS(burgers_cole_hopf(0.1, -0.1), ConfigError);
    CHECK_THROWS_AS(burgers_cole_hopf(0.1, 0.5, 16), ConfigError);
}

TEST_CASE("Burgers finite-difference solve tracks the integral solution") {
    const std::vector<double> times{0.0, 0.25, 1.0};
    const BurgersFd fd = burgers_fd_solve(1025, times);
    REQUIRE(fd.frames.size() == times.size());
    REQUIRE(fd.x.size() == 1025);
    for (std::size_t i = 0; i < fd.x.size(); i += 7) {
        CHECK(fd.frames[0][i] == -std::sin(kPi * fd.x[i]));
    }
    for (std::size_t f = 1; f < times.size(); ++f) {
        CAPTURE(times[f]);
        double worst = 0.0;
        for (std::size_t i = 0; i < fd.x.size(); i += 8) {
            worst = std::max(worst,
                             std::fabs(fd.frames[f][i] - burgers_cole_hopf(fd.x[i], times[f])));
        }
        CHECK(worst < 1e-3);
    }
    CHECK_THROWS_AS(burgers_fd_solve(8, times), ConfigError);
    const std::vector<double> descending{0.5, 0.25};
    CHECK_THROWS_AS(burgers_fd_solve(64, descending), ConfigError);
}

TEST_CASE("relaxation solver reproduces the perforated-square equilibrium") {
    const PdeProblem p1 = make_problem("poisson-1");
    const FdSolution coarse = poisson_fd_solve(p1.domain, 1.0 / 32, 1e-10);
    REQUIRE(coarse.nx == 33);
    CHECK(coarse.residual_norm < 1e-10);

    int ring_nodes = 0;
    for (int j = 0; j < coarse.nx; ++j) {
        for (int i = 0; i < coarse.nx; ++i) {
            const double v = coarse.at(i, j);
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
            switch (coarse.mask_at(i, j)) {
                case FdMask::outer_boundary: CHECK(v == 1.0); break;
                case FdMask::disk_boundary:
                    CHECK(v == 0.0);
                    ++ring_nodes;
                    break;
                case FdMask::excluded: CHECK(v == 0.0); break;
                case FdMask::inside: break;
            }
            // The four disks and the data are symmetric under axis swap and
            // point reflection, and the converged iterate inherits that.
            CHECK(std::fabs(v - coarse.at(j, i)) < 1e-6);
            CHECK(std::fabs(v - coarse.at(coarse.nx - 1 - i, coarse.nx - 1 - j)) < 1e-6);
        }
    }
    CHECK(ring_nodes > 0);

    // Interpolation is exact at nodes and refuses cells without values.
    CHECK(coarse.interpolate({-0.5 + 5 * coarse.h, -0.5 + 16 * coarse.h}) == coarse.at(5, 16));
    CHECK_THROWS_AS(coarse.interpolate({0.25, 0.25}), ConfigError);

    // Grid refinement self-consistency at the domain center.
    const FdSolution mid = poisson_fd_solve(p1.domain, 1.0 / 64, 1e-10);
    const FdSolution fine = poisson_fd_solve(p1.domain, 1.0 / 128, 1e-10);
    CHECK(std::fabs(mid.interpolate({0.0, 0.0}) - fine.interpolate({0.0, 0.0})) < 5e-3);

    // The scaled problem on the same relative lattice is the same computation.
    const PdeProblem p8 = make_problem("poisson-8");
    const FdSolution scaled = poisson_fd_solve(p8.domain, 8.0 / 64, 1e-10);
    CHECK(scaled.interpolate({0.0, 0.0}) == mid.interpolate({0.0, 0.0}));

    CHECK_THROWS_AS(poisson_fd_solve(p1.domain, 0.3, 1e-10), ConfigError);
    CHECK_THROWS_AS(poisson_fd_solve(p1.domain, 1.0 / 32, -1.0), ConfigError);
    CHECK_THROWS_AS(poisson_fd_solve(p1.domain, 1.0 / 64, 1e-10, 1), NonConvergence);
    CHECK_THROWS_AS(poisson_fd_solve(make_problem("burgers").domain, 1.0 / 32, 1e-10),
                    ConfigError);
}

TEST_CASE("series Green's function is symmetric and respects the walls") {
    const Point a{0.1, -0.2};
    const Point b{-0.3, 0.25};
    const double g = green_rectangle(a, b, 1.0, 80);
    CHECK(g > 0.0);
    CHECK(green_rectangle(b, a, 1.0, 80) == doctest::Approx(g).epsilon(1e-12));
    // Pushing one argument toward a wall kills the kernel.
    CHECK(std::fabs(green_rectangle(a, {-0.3, 0.499999}, 1.0, 80)) < 1e-5);
    // The kernel depends only on the points relative to the side.
    CHECK(green_rectangle({0.2, -0.4}, {-0.6, 0.5}, 2.0, 40) ==
          green_rectangle({0.1, -0.2}, {-0.3, 0.25}, 1.0, 40));

    CHECK_THROWS_AS(green_rectangle(a, a, 1.0, 80), CoincidentPoints);
    CHECK_THROWS_AS(green_rectangle({0.5, 0.0}, b, 1.0, 80), ConfigError);
    CHECK_THROWS_AS(green_rectangle(a, b, -1.0, 80), ConfigError);
    CHECK_THROWS_AS(green_rectangle(a, b, 1.0, 0), ConfigError);
}

TEST_CASE("series Green's function inverts the Laplacian mode by mode") {
    // Apply the kernel to f = lambda_11 phi_11 by midpoint quadrature; the
    // result must reproduce phi_11 at the evaluation point.
    const double s = 1.0;
    const int nq = 64, M = 12;
    const double lam = kPi * kPi * 2.0 / (s * s);
    const Point x{0.17, -0.29};
    double acc = 0.0;
    for (int i = 0; i < nq; ++i) {
        for (int j = 0; j < nq; ++j) {
            const Point xi{s * ((i + 0.5) / nq - 0.5), s * ((j + 0.5) / nq - 0.5)};
            const double phi = 2.0 / s * mode_sin(1, xi[0], s) * mode_sin(1, xi[1], s);
            acc += green_rectangle(x, xi, s, M) * lam * phi * (s / nq) * (s / nq);
        }
    }
    const double expect = 2.0 / s * mode_sin(1, x[0], s) * mode_sin(1, x[1], s);
    CHECK(acc == doctest::Approx(expect).epsilon(1e-6));
}

TEST_CASE("weight constants match the orthonormal closed form") {
    const GreenSeriesConfig cfg = small_cfg();
    const double s = 1.0;
    const C1C2 got = compute_c1_c2(s, cfg);
    CHECK(got.c1 > 0.0);
    CHECK(got.c2 > 0.0);

    // With the modes below the quadrature bandwidth, the midpoint rule
    // integrates the truncated series exactly, so both constants reduce to
    // sums over mode coefficients: orthonormality collapses the interior
    // integral of G^2 and sine orthogonality collapses each edge integral.
    double c1 = 0.0, c2 = 0.0;
    const int no = cfg.outer_per_axis, M = cfg.modes;
    for (int i = 0; i < no; ++i) {
        for (int j = 0; j < no; ++j) {
            const double x1 = s * ((i + 0.5) / no - 0.5);
            const double x2 = s * ((j + 0.5) / no - 0.5);
            double i_sq = 0.0;
            std::vector<double> bb(M, 0.0), bt(M, 0.0), bl(M, 0.0), br(M, 0.0);
            for (int m = 1; m <= M; ++m) {
                for (int n = 1; n <= M; ++n) {
                    const double lam = kPi * kPi * (m * m + n * n) / (s * s);
                    const double coef =
                        2.0 / s * mode_sin(m, x1, s) * mode_sin(n, x2, s) / lam;
                    i_sq += coef * coef;
                    const double dn = n * kPi / s * (2.0 / s);
                    const double dm = m * kPi / s * (2.0 / s);
                    bb[m - 1] += coef * dn;
                    bt[m - 1] += coef * dn * ((n % 2 == 0) ? 1.0 : -1.0);
                    bl[n - 1] += coef * dm;
                    br[n - 1] += coef * dm * ((m % 2 == 0) ? 1.0 : -1.0);
                }
            }
            double edges = 0.0;
            for (int m = 0; m < M; ++m) {
                edges += bb[m] * bb[m] + bt[m] * bt[m] + bl[m] * bl[m] + br[m] * br[m];
            }
            const double w_out = (s / no) * (s / no);
            c1 += std::sqrt(s * s * i_sq) * w_out;
            c2 += std::sqrt(4.0 * s * (s / 2.0) * edges) * w_out;
        }
    }
    CHECK(got.c1 == doctest::Approx(c1).epsilon(1e-12));
    CHECK(got.c2 == doctest::Approx(c2).epsilon(1e-12));
    const double ratio = got.c1 / got.c2;
    CHECK(theoretical_weight(s, cfg) == ratio * ratio);
}

TEST_CASE("edge flux series matches a difference quotient of the kernel") {
    // The closed form above leans on the normal-derivative series; check that
    // series against (G(x, edge + delta) - 0) / delta computed from the
    // kernel itself.
    const double s = 1.0, delta = 1e-7;
    const int M = 12;
    const Point x{0.17, -0.29};
    const double xi1 = 0.05;
    double series = 0.0;
    for (int m = 1; m <= M; ++m) {
        for (int n = 1; n <= M; ++n) {
            const double lam = kPi * kPi * (m * m + n * n) / (s * s);
            series += 2.0 / s * mode_sin(m, x[0], s) * mode_sin(n, x[1], s) / lam *
                      (2.0 / s) * (n * kPi / s) * mode_sin(m, xi1, s);
        }
    }
    const double fd = green_rectangle(x, {xi1, -s / 2 + delta}, s, M) / delta;
    CHECK(series == doctest::Approx(fd).epsilon(1e-5));
}

TEST_CASE("weight constants scale with the fourth power of the side") {
    const GreenSeriesConfig cfg = small_cfg();
    const C1C2 unit = compute_c1_c2(1.0, cfg);
    const C1C2 twice = compute_c1_c2(2.0, cfg);
    // Doubling the side multiplies every factor by an exact power of two, so
    // the scaling laws hold bitwise, not just to roundoff.
    CHECK(twice.c1 == 16.0 * unit.c1);
    CHECK(twice.c2 == 4.0 * unit.c2);
    CHECK(theoretical_weight(2.0, cfg) == 16.0 * theoretical_weight(1.0, cfg));

    double prev = 0.0;
    for (double side : {0.5, 1.0, 2.0, 4.0}) {
        const double w = theoretical_weight(side, cfg);
        CHECK(w > prev);
        prev = w;
    }
}

TEST_CASE("weight constants stay finite when the lattices collide") {
    // Equal inner and outer counts put a quadrature node on top of every
    // evaluation point, forcing the log-singular cell model on each one.
    GreenSeriesConfig cfg = small_cfg();
    cfg.inner_per_axis = cfg.outer_per_axis;
    const C1C2 sing = compute_c1_c2(1.0, cfg);
    CHECK(std::isfinite(sing.c1));
    CHECK(std::isfinite(sing.c2));
    CHECK(sing.c1 > 0.0);
    // The modeled cell keeps the result near the collision-free estimate.
    const C1C2 clean = compute_c1_c2(1.0, small_cfg());
    CHECK(sing.c1 == doctest::Approx(clean.c1).epsilon(0.15));
    CHECK(sing.c2 == doctest::Approx(clean.c2).epsilon(1e-12));
}

TEST_CASE("interior integral grows monotonically with the mode count") {
    GreenSeriesConfig lo = small_cfg();
    lo.modes = 6;
    GreenSeriesConfig hi = small_cfg();
    hi.modes = 12;
    const C1C2 a = compute_c1_c2(1.0, lo);
    const C1C2 b = compute_c1_c2(1.0, hi);
    CHECK(b.c1 > a.c1);
    // And the tail is already small at these counts.
    CHECK(b.c1 == doctest::Approx(a.c1).epsilon(5e-2));

    CHECK_THROWS_AS(compute_c1_c2(0.0, small_cfg()), ConfigError);
    GreenSeriesConfig bad = small_cfg();
    bad.modes = 0;
    CHECK_THROWS_AS(compute_c1_c2(1.0, bad), ConfigError);
}
