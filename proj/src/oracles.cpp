// SPDX-License-Identifier: Apache-2.0
#include "pinnlab/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <utility>

#include "pinnlab/errors.hpp"

namespace pinnlab {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kBurgersNu = 0.01 / kPi;
}  // namespace

// ---------------------------------------------------------------------------
// Masked-grid Poisson solver
// ---------------------------------------------------------------------------

double FdSolution::interpolate(const Point& p) const {
    const double fx = (p[0] - lo[0]) / h;
    const double fy = (p[1] - lo[1]) / h;
    int i = std::clamp(static_cast<int>(std::floor(fx)), 0, nx - 2);
    int j = std::clamp(static_cast<int>(std::floor(fy)), 0, nx - 2);
    const double tx = fx - i;
    const double ty = fy - j;
    if (mask_at(i, j) == FdMask::excluded || mask_at(i + 1, j) == FdMask::excluded ||
        mask_at(i, j + 1) == FdMask::excluded || mask_at(i + 1, j + 1) == FdMask::excluded) {
        throw ConfigError("interpolation query lies in a cell without values (inside a disk)");
    }
    const double v0 = at(i, j) * (1.0 - tx) + at(i + 1, j) * tx;
    const double v1 = at(i, j + 1) * (1.0 - tx) + at(i + 1, j + 1) * tx;
    return v0 * (1.0 - ty) + v1 * ty;
}

FdSolution poisson_fd_solve(const Domain& domain, double h, double tol, int max_sweeps) {
    if (domain.kind == DomainKind::spacetime1d) {
        throw ConfigError("the relaxation solver handles spatial domains only");
    }
    if (h <= 0.0 || tol <= 0.0 || max_sweeps < 1) {
        throw ConfigError("poisson_fd_solve requires h > 0, tol > 0, max_sweeps >= 1");
    }
    const double sx = domain.hi[0] - domain.lo[0];
    const double sy = domain.hi[1] - domain.lo[1];
    if (std::fabs(sx - sy) > 1e-12 * sx) {
        throw ConfigError("the relaxation solver expects a square domain");
    }
    const double cells = sx / h;
    const long long n_cells = std::llround(cells);
    if (n_cells < 2 || std::fabs(cells - static_cast<double>(n_cells)) > 1e-9) {
        throw ConfigError("h must divide the side length evenly");
    }

    FdSolution sol;
    sol.h = h;
    sol.nx = static_cast<int>(n_cells) + 1;
    sol.lo = domain.lo;
    const int n = sol.nx;
    sol.values.assign(static_cast<std::size_t>(n) * n, 0.0);
    sol.mask.assign(static_cast<std::size_t>(n) * n, FdMask::inside);

    auto idx = [n](int i, int j) { return static_cast<std::size_t>(j) * n + i; };
    auto in_disk = [&domain](double px, double py) {
        for (const Disk& d : domain.disks) {
            const double dx = px - d.center[0];
            const double dy = py - d.center[1];
            if (dx * dx + dy * dy < d.radius * d.radius) return true;
        }
        return false;
    };

    // Mask grid cells by their centers, then classify nodes: a node cornered
    // only by masked cells is excluded; one cornering both masked and open
    // cells carries the staircase u = 0 data; all others are unknowns. The
    // cell-centered staircase straddles the true circle, which halves the
    // boundary-placement bias of masking nodes directly.
    const int nc = n - 1;
    std::vector<char> cell_masked(static_cast<std::size_t>(nc) * nc, 0);
    for (int j = 0; j < nc; ++j) {
        for (int i = 0; i < nc; ++i) {
            cell_masked[static_cast<std::size_t>(j) * nc + i] =
                in_disk(domain.lo[0] + (i + 0.5) * h, domain.lo[1] + (j + 0.5) * h) ? 1 : 0;
        }
    }
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            if (i == 0 || j == 0 || i == n - 1 || j == n - 1) {
                sol.mask[idx(i, j)] = FdMask::outer_boundary;
                sol.values[idx(i, j)] = 1.0;
                continue;
            }
            int masked = 0;
            for (int dj = -1; dj <= 0; ++dj) {
                for (int di = -1; di <= 0; ++di) {
                    masked += cell_masked[static_cast<std::size_t>(j + dj) * nc + (i + di)];
                }
            }
            if (masked == 0) continue;
            sol.mask[idx(i, j)] = (masked == 4) ? FdMask::excluded : FdMask::disk_boundary;
            sol.values[idx(i, j)] = 0.0;
        }
    }

    const double omega = 2.0 / (1.0 + std::sin(kPi * h / sx));
    double* u = sol.values.data();
    const FdMask* m = sol.mask.data();

    auto residual = [&]() {
        double worst = 0.0;
        for (int j = 1; j < n - 1; ++j) {
            for (int i = 1; i < n - 1; ++i) {
                if (m[idx(i, j)] != FdMask::inside) continue;
                const double r = u[idx(i - 1, j)] + u[idx(i + 1, j)] + u[idx(i, j - 1)] +
                                 u[idx(i, j + 1)] - 4.0 * u[idx(i, j)];
                worst = std::max(worst, std::fabs(r));
            }
        }
        return worst;
    };

    for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
        for (int j = 1; j < n - 1; ++j) {
            for (int i = 1; i < n - 1; ++i) {
                const std::size_t k = idx(i, j);
                if (m[k] != FdMask::inside) continue;
                const double avg =
                    0.25 * (u[k - 1] + u[k + 1] + u[k - n] + u[k + n]);
                u[k] += omega * (avg - u[k]);
            }
        }
        if (sweep % 16 == 0 || sweep == max_sweeps) {
            sol.residual_norm = residual();
            if (sol.residual_norm < tol) return sol;
        }
    }
    throw NonConvergence("relaxation did not reach tolerance within the sweep budget");
}

// ---------------------------------------------------------------------------
// Gauss-Hermite rule and the Burgers integral solution
// ---------------------------------------------------------------------------

namespace {

// Orthonormal Hermite polynomials for weight exp(-z^2):
//   p_{k+1} = z sqrt(2/(k+1)) p_k - sqrt(k/(k+1)) p_{k-1},  p_0 = pi^{-1/4}.
double hermite_pn(int order, double z) {
    double pkm1 = 0.0;
    double pk = std::pow(kPi, -0.25);
    for (int k = 0; k < order; ++k) {
        const double pkp1 =
            z * std::sqrt(2.0 / (k + 1)) * pk - std::sqrt(static_cast<double>(k) / (k + 1)) * pkm1;
        pkm1 = pk;
        pk = pkp1;
    }
    return pk;
}

double hermite_christoffel(int order, double z) {
    double pkm1 = 0.0;
    double pk = std::pow(kPi, -0.25);
    double sum = pk * pk;
    for (int k = 0; k + 1 < order; ++k) {
        const double pkp1 =
            z * std::sqrt(2.0 / (k + 1)) * pk - std::sqrt(static_cast<double>(k) / (k + 1)) * pkm1;
        pkm1 = pk;
        pk = pkp1;
        sum += pk * pk;
    }
    return sum;
}

}  // namespace

void gauss_hermite(int order, std::vector<double>& nodes, std::vector<double>& weights) {
    if (order < 1) throw ConfigError("quadrature order must be positive");
    nodes.clear();
    weights.clear();
    nodes.reserve(static_cast<std::size_t>(order));

    // All roots lie inside |z| < sqrt(2 order + 2); scan for sign changes and
    // bisect. Roots come in symmetric pairs (plus 0 for odd orders).
    const double zmax = std::sqrt(2.0 * order + 2.0);
    const int scan = 64 * order;
    double prev_z = 0.0;
    double prev_p = hermite_pn(order, 0.0);
    if (order % 2 == 1) nodes.push_back(0.0);
    for (int k = 1; k <= scan; ++k) {
        const double z = zmax * static_cast<double>(k) / scan;
        const double p = hermite_pn(order, z);
        if ((prev_p < 0.0) != (p < 0.0)) {
            double a = prev_z, b = z;
            double fa = prev_p;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (a + b);
                if (mid == a || mid == b) break;
                const double fm = hermite_pn(order, mid);
                if ((fa < 0.0) == (fm < 0.0)) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            nodes.push_back(0.5 * (a + b));
        }
        prev_z = z;
        prev_p = p;
    }
    // Mirror the positive roots.
    const std::size_t positive = nodes.size();
    for (std::size_t k = (order % 2 == 1) ? 1 : 0; k < positive; ++k) nodes.push_back(-nodes[k]);
    std::sort(nodes.begin(), nodes.end());
    if (static_cast<int>(nodes.size()) != order) {
        throw NonConvergence("root search lost Hermite nodes");
    }
    weights.resize(nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        weights[k] = 1.0 / hermite_christoffel(order, nodes[k]);
    }
}

namespace {

const std::pair<const std::vector<double>&, const std::vector<double>&> hermite_rule(int order) {
    static std::mutex mu;
    static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
    std::scoped_lock lock(mu);
    auto it = cache.find(order);
    if (it == cache.end()) {
        std::pair<std::vector<double>, std::vector<double>> rule;
        gauss_hermite(order, rule.first, rule.second);
        it = cache.emplace(order, std::move(rule)).first;
    }
    return {it->second.first, it->second.second};
}

}  // namespace

double burgers_cole_hopf(double x, double t, int quad_order) {
    if (t < 0.0) throw ConfigError("time must be nonnegative");
    if (quad_order < 32) throw ConfigError("quadrature order must be at least 32");
    if (t == 0.0) return -std::sin(kPi * x);

    const auto [nodes, weights] = hermite_rule(quad_order);
    const double spread = std::sqrt(4.0 * kBurgersNu * t);
    const double amp = 1.0 / (2.0 * kPi * kBurgersNu);

    // u = -[sum w sin(pi y) f(y)] / [sum w f(y)], y = x - spread z, with
    // f(y) = exp(-amp cos(pi y)); the largest exponent is factored out so the
    // ratio never overflows.
    double emax = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        emax = std::max(emax, -amp * std::cos(kPi * (x - spread * nodes[k])));
    }
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        const double y = x - spread * nodes[k];
        const double f = std::exp(-amp * std::cos(kPi * y) - emax);
        num += weights[k] * std::sin(kPi * y) * f;
        den += weights[k] * f;
    }
    if (den == 0.0) throw QuadratureUnderflow("all quadrature contributions vanished");
    return -num / den;
}

BurgersFd burgers_fd_solve(int nx, std::span<const double> times) {
    if (nx < 16) throw ConfigError("need at least 16 nodes");
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (times[k] < 0.0 || (k > 0 && times[k] < times[k - 1])) {
            throw ConfigError("times must be ascending and nonnegative");
        }
    }
    BurgersFd out;
    out.x.resize(static_cast<std::size_t>(nx));
    out.times.assign(times.begin(), times.end());
    const double dx = 2.0 / (nx - 1);
    for (int i = 0; i < nx; ++i) out.x[static_cast<std::size_t>(i)] = -1.0 + i * dx;

    std::vector<double> u(static_cast<std::size_t>(nx));
    for (int i = 0; i < nx; ++i) u[static_cast<std::size_t>(i)] = -std::sin(kPi * out.x[i]);

    // Central conservative flux difference of u^2/2 (zero at the walls).
    std::vector<double> flux(static_cast<std::size_t>(nx), 0.0);
    auto convective = [&](const std::vector<double>& v, std::vector<double>& f) {
        for (int i = 1; i < nx - 1; ++i) {
            f[static_cast<std::size_t>(i)] =
                (v[static_cast<std::size_t>(i + 1)] * v[static_cast<std::size_t>(i + 1)] -
                 v[static_cast<std::size_t>(i - 1)] * v[static_cast<std::size_t>(i - 1)]) /
                (4.0 * dx);
        }
    };

    // Thomas solve of (1 + 2a) on the diagonal, -a off-diagonal, for the
    // interior unknowns (walls pinned to zero).
    std::vector<double> cp(static_cast<std::size_t>(nx), 0.0);
    std::vector<double> dp(static_cast<std::size_t>(nx), 0.0);
    auto solve_tridiag = [&](double a, std::vector<double>& rhs) {
        const double diag = 1.0 + 2.0 * a;
        cp[1] = -a / diag;
        dp[1] = rhs[1] / diag;
        for (int i = 2; i < nx - 1; ++i) {
            const double denom = diag + a * cp[static_cast<std::size_t>(i - 1)];
            cp[static_cast<std::size_t>(i)] = -a / denom;
            dp[static_cast<std::size_t>(i)] =
                (rhs[static_cast<std::size_t>(i)] + a * dp[static_cast<std::size_t>(i - 1)]) / denom;
        }
        rhs[static_cast<std::size_t>(nx - 2)] = dp[static_cast<std::size_t>(nx - 2)];
        for (int i = nx - 3; i >= 1; --i) {
            rhs[static_cast<std::size_t>(i)] = dp[static_cast<std::size_t>(i)] -
                                               cp[static_cast<std::size_t>(i)] *
                                                   rhs[static_cast<std::size_t>(i + 1)];
        }
        rhs[0] = rhs[static_cast<std::size_t>(nx - 1)] = 0.0;
    };

    std::vector<double> rhs(static_cast<std::size_t>(nx), 0.0);
    std::vector<double> ustar(static_cast<std::size_t>(nx), 0.0);
    std::vector<double> flux2(static_cast<std::size_t>(nx), 0.0);
    auto step = [&](double dt) {
        const double a = kBurgersNu * dt / (2.0 * dx * dx);
        convective(u, flux);
        auto build_rhs = [&](const std::vector<double>& f, std::vector<double>& r) {
            for (int i = 1; i < nx - 1; ++i) {
                const std::size_t k = static_cast<std::size_t>(i);
                r[k] = u[k] - dt * f[k] + a * (u[k + 1] - 2.0 * u[k] + u[k - 1]);
            }
        };
        build_rhs(flux, rhs);
        solve_tridiag(a, rhs);
        ustar = rhs;
        convective(ustar, flux2);
        for (int i = 1; i < nx - 1; ++i) {
            const std::size_t k = static_cast<std::size_t>(i);
            flux2[k] = 0.5 * (flux[k] + flux2[k]);
        }
        build_rhs(flux2, rhs);
        solve_tridiag(a, rhs);
        u = rhs;
    };

    const double dt_target = 0.25 * dx;
    double t_now = 0.0;
    for (double t_goal : out.times) {
        const double span = t_goal - t_now;
        if (span > 0.0) {
            const int nsteps = std::max(1, static_cast<int>(std::ceil(span / dt_target)));
            const double dt = span / nsteps;
            for (int s = 0; s < nsteps; ++s) step(dt);
            t_now = t_goal;
        }
        out.frames.push_back(u);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Rectangle Green's function and the loss-weight constants
// ---------------------------------------------------------------------------

double green_rectangle(const Point& x, const Point& xi, double side, int M) {
    if (side <= 0.0 || M < 1) throw ConfigError("green_rectangle requires side > 0, M >= 1");
    const double half = side / 2.0;
    for (int c = 0; c < 2; ++c) {
        if (std::fabs(x[c]) >= half || std::fabs(xi[c]) >= half) {
            throw ConfigError("points must lie strictly inside the square");
        }
    }
    const double dx = x[0] - xi[0];
    const double dy = x[1] - xi[1];
    if (std::sqrt(dx * dx + dy * dy) < 1e-9) {
        throw CoincidentPoints("the kernel is logarithmically singular on the diagonal");
    }
    // G = (4 / pi^2) sum_{m,n} S_m(x1)S_n(x2)S_m(xi1)S_n(xi2) / (m^2 + n^2),
    // S_k(u) = sin(k pi (u + side/2) / side); the side cancels identically.
    const double u1 = (x[0] + half) / side;
    const double u2 = (x[1] + half) / side;
    const double v1 = (xi[0] + half) / side;
    const double v2 = (xi[1] + half) / side;
    double total = 0.0;
    for (int m = 1; m <= M; ++m) {
        const double sm = std::sin(m * kPi * u1) * std::sin(m * kPi * v1);
        double inner = 0.0;
        for (int n = 1; n <= M; ++n) {
            inner += std::sin(n * kPi * u2) * std::sin(n * kPi * v2) /
                     static_cast<double>(m * m + n * n);
        }
        total += sm * inner;
    }
    return 4.0 / (kPi * kPi) * total;
}

namespace {

// sin(m pi (k + 1/2) / n) table for m = 1..M, k = 0..n-1 (midpoint nodes).
std::vector<double> sine_table(int M, int n) {
    std::vector<double> t(static_cast<std::size_t>(M) * n);
    for (int m = 1; m <= M; ++m) {
        for (int k = 0; k < n; ++k) {
            t[static_cast<std::size_t>(m - 1) * n + k] =
                std::sin(m * kPi * (k + 0.5) / static_cast<double>(n));
        }
    }
    return t;
}

}  // namespace

C1C2 compute_c1_c2(double side, const GreenSeriesConfig& cfg) {
    if (side <= 0.0) throw ConfigError("side must be positive");
    if (cfg.modes < 1 || cfg.inner_per_axis < 2 || cfg.outer_per_axis < 2 ||
        cfg.boundary_per_edge < 2) {
        throw ConfigError("series config must have M >= 1 and at least 2 nodes per axis/edge");
    }
    const double s = side;
    const int M = cfg.modes;
    const int ni = cfg.inner_per_axis;
    const int no = cfg.outer_per_axis;
    const int ne = cfg.boundary_per_edge;

    const std::vector<double> so = sine_table(M, no);  // outer evaluation points
    const std::vector<double> si = sine_table(M, ni);  // inner quadrature nodes
    const std::vector<double> se = sine_table(M, ne);  // edge quadrature nodes

    // 1/lambda_mn = s^2 / (pi^2 (m^2 + n^2)).
    std::vector<double> lam_inv(static_cast<std::size_t>(M) * M);
    for (int m = 1; m <= M; ++m) {
        for (int n = 1; n <= M; ++n) {
            lam_inv[static_cast<std::size_t>(m - 1) * M + (n - 1)] =
                s * s / (kPi * kPi * (m * m + n * n));
        }
    }

    const double h_in = s / ni;
    const double w_in = h_in * h_in;
    const double w_out = (s / no) * (s / no);
    const double w_edge = s / ne;
    const double area = s * s;
    const double perim = 4.0 * s;
    // Scale factors deferred from the mode sums: G carries (2/s)^2, the
    // normal-derivative series (2/s)^2 * pi/s.
    const double g_scale = 4.0 / (s * s);
    const double d_scale = g_scale * kPi / s;

    std::vector<double> coef(static_cast<std::size_t>(M) * M);   // phi_mn(x)/lambda (mode part)
    std::vector<double> vt(static_cast<std::size_t>(ni) * M);    // vt[q2][m]
    std::vector<double> sit(static_cast<std::size_t>(ni) * M);   // si transposed: [q][m]
    for (int q = 0; q < ni; ++q) {
        for (int m = 0; m < M; ++m) {
            sit[static_cast<std::size_t>(q) * M + m] = si[static_cast<std::size_t>(m) * ni + q];
        }
    }
    std::vector<double> edge_b(static_cast<std::size_t>(4) * M);

    double c1 = 0.0;
    double c2 = 0.0;
    for (int i = 0; i < no; ++i) {
        const double x1 = s * ((i + 0.5) / no - 0.5);
        for (int j = 0; j < no; ++j) {
            const double x2 = s * ((j + 0.5) / no - 0.5);

            // coef[m][n] = S_m(x1) S_n(x2) / lambda_mn.
            for (int m = 0; m < M; ++m) {
                const double sm = so[static_cast<std::size_t>(m) * no + i];
                const double* li = lam_inv.data() + static_cast<std::size_t>(m) * M;
                double* row = coef.data() + static_cast<std::size_t>(m) * M;
                for (int n = 0; n < M; ++n) {
                    row[n] = sm * so[static_cast<std::size_t>(n) * no + j] * li[n];
                }
            }

            // --- inner integral of G^2 over the square ---
            // vt[q2][m] = sum_n coef[m][n] S_n(xi2_q2)
            for (int q2 = 0; q2 < ni; ++q2) {
                const double* srow = sit.data() + static_cast<std::size_t>(q2) * M;
                double* vrow = vt.data() + static_cast<std::size_t>(q2) * M;
                for (int m = 0; m < M; ++m) {
                    const double* crow = coef.data() + static_cast<std::size_t>(m) * M;
                    double acc = 0.0;
                    for (int n = 0; n < M; ++n) acc += crow[n] * srow[n];
                    vrow[m] = acc;
                }
            }
            // Which inner node (if any) coincides with x.
            int sing_q1 = -1, sing_q2 = -1;
            {
                const int q1 = static_cast<int>(std::floor((x1 / s + 0.5) * ni));
                const int q2 = static_cast<int>(std::floor((x2 / s + 0.5) * ni));
                if (q1 >= 0 && q1 < ni && q2 >= 0 && q2 < ni) {
                    const double n1 = s * ((q1 + 0.5) / ni - 0.5);
                    const double n2 = s * ((q2 + 0.5) / ni - 0.5);
                    if (std::fabs(n1 - x1) < 1e-12 * s && std::fabs(n2 - x2) < 1e-12 * s) {
                        sing_q1 = q1;
                        sing_q2 = q2;
                    }
                }
            }
            double sumsq = 0.0;
            for (int q1 = 0; q1 < ni; ++q1) {
                const double* srow = sit.data() + static_cast<std::size_t>(q1) * M;
                for (int q2 = 0; q2 < ni; ++q2) {
                    if (q1 == sing_q1 && q2 == sing_q2) continue;
                    const double* vrow = vt.data() + static_cast<std::size_t>(q2) * M;
                    double g = 0.0;
                    for (int m = 0; m < M; ++m) g += srow[m] * vrow[m];
                    sumsq += g * g;
                }
            }
            double inner = g_scale * g_scale * sumsq * w_in;
            if (sing_q1 >= 0) {
                // Replace the skipped cell by the integral of the local
                // log-singular model (-(1/2pi) ln r + g0)^2 over a disk of
                // equal area, with g0 probed one inner spacing away.
                const double probe =
                    green_rectangle({x1, x2}, {x1 + (x1 < 0.0 ? h_in : -h_in), x2}, s, M);
                const double g0 = probe + std::log(h_in) / (2.0 * kPi);
                const double rho = h_in / std::sqrt(kPi);
                const double lr = std::log(rho);
                const double cell =
                    kPi * rho * rho *
                    ((lr * lr - lr + 0.5) / (4.0 * kPi * kPi) - g0 / kPi * (lr - 0.5) + g0 * g0);
                inner += cell;
            }
            c1 += std::sqrt(area * inner) * w_out;

            // --- inner integral of the squared normal derivative over the
            //     four edges (coefficients per edge, then edge quadrature) ---
            std::fill(edge_b.begin(), edge_b.end(), 0.0);
            double* bb = edge_b.data();           // bottom: sum_n coef * n
            double* bt = bb + M;                  // top:    sum_n coef * n (-1)^n
            double* bl = bt + M;                  // left:   sum_m coef * m
            double* br = bl + M;                  // right:  sum_m coef * m (-1)^m
            for (int m = 0; m < M; ++m) {
                const double* crow = coef.data() + static_cast<std::size_t>(m) * M;
                double accb = 0.0, acct = 0.0;
                for (int n = 0; n < M; ++n) {
                    const double cn = crow[n] * (n + 1);
                    accb += cn;
                    acct += (n % 2 == 0) ? -cn : cn;  // (-1)^(n+1) for mode n+1
                }
                bb[m] = accb;
                bt[m] = acct;
                const double cm = static_cast<double>(m + 1);
                const double sgn = (m % 2 == 0) ? -1.0 : 1.0;
                for (int n = 0; n < M; ++n) {
                    bl[n] += crow[n] * cm;
                    br[n] += crow[n] * cm * sgn;
                }
            }
            double edge_sum = 0.0;
            for (int e = 0; e < 4; ++e) {
                const double* b = edge_b.data() + static_cast<std::size_t>(e) * M;
                for (int q = 0; q < ne; ++q) {
                    double d = 0.0;
                    for (int m = 0; m < M; ++m) {
                        d += b[m] * se[static_cast<std::size_t>(m) * ne + q];
                    }
                    edge_sum += d * d;
                }
            }
            const double boundary = d_scale * d_scale * edge_sum * w_edge;
            c2 += std::sqrt(perim * boundary) * w_out;
        }
    }
    return {c1, c2};
}

double theoretical_weight(double side, const GreenSeriesConfig& cfg) {
    const C1C2 c = compute_c1_c2(side, cfg);
    const double ratio = c.c1 / c.c2;
    return ratio * ratio;
}

}  // namespace pinnlab
