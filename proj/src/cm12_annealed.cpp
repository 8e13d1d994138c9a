#include "anneal/cm12_annealed.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "anneal/cm2_annealed.hpp"
#include "anneal/numerics.hpp"
#include "anneal/parallel.hpp"

namespace anneal {

namespace {

// |a| below this: treat the lines GF as 1 (H* vanishes like a log a there,
// and cancellation noise in A_- sits near 1e-13 for beta -> 0)
constexpr double kZeroA = 1e-10;

double xlogx(double x) {
    if (x < 0.0) throw std::domain_error("surface_H: negative argument to x log x");
    return x > 0.0 ? x * std::log(x) : 0.0;
}

void check_interior(double s, double t, double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("surface: p must be in (0,1)");
    if (!(s > 0.0 && s < 0.5 * (1.0 - p) && t > 0.0 && t < p))
        throw std::domain_error("surface: (s,t) outside the open rectangle");
}

}  // namespace

Cm12Params Cm12Params::from(double p, int n) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("Cm12Params: p must be in (0,1)");
    if (n < 2) throw std::invalid_argument("Cm12Params: n must be >= 2");
    Cm12Params out;
    out.p = p;
    out.n2 = static_cast<int>(std::floor(p * n));
    out.n1 = n - out.n2;
    out.n = n;
    if (out.n1 % 2 != 0) {  // lines come in pairs of degree-1 endpoints
        ++out.n;
        ++out.n1;
    }
    out.ell = out.n1 + 2ll * out.n2;
    return out;
}

LineIngredients line_ingredients(double beta, double B) {
    if (beta < 0.0) throw std::invalid_argument("line_ingredients: beta must be >= 0");
    const auto eig = transfer_eigen(beta, B);
    const auto amp = line_amplitudes(beta, B);
    LineIngredients out;
    out.beta = beta;
    out.B = B;
    out.lambda_plus = eig.lambda_plus;
    out.lambda_minus = eig.lambda_minus;
    out.a_plus = amp.a_plus;
    out.a_minus = amp.a_minus;
    out.r = eig.r;
    out.a = amp.a;
    return out;
}

std::vector<double> mn_pmf(int n1, int n2) {
    if (n1 < 2 || n1 % 2 != 0)
        throw std::invalid_argument("mn_pmf: n1 must be even and >= 2");
    if (n2 < 0) throw std::invalid_argument("mn_pmf: n2 must be >= 0");
    const LogFactTable lf(n1 / 2 + n2 + 2 * n2 + 4);
    const double log2 = std::log(2.0);
    const double common = n2 * log2 + log_double_factorial_odd(n1 - 1) + lf(n2) -
                          log_double_factorial_odd(n1 + 2ll * n2 - 1);
    std::vector<double> pmf(static_cast<size_t>(n2) + 1);
    for (int m = 0; m <= n2; ++m) {
        const double lg = common - 2.0 * m * log2 + log_binomial(lf, 2ll * m, m) +
                          log_binomial(lf, n1 / 2 + n2 - m - 1, n2 - m);
        pmf[static_cast<size_t>(m)] = std::exp(lg);
    }
    return pmf;
}

ToriLaw tori_limit_law(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("tori_limit_law: p must be in (0,1)");
    return ToriLaw{p};
}

double ToriLaw::rate(int l) const {
    return 0.5 / l * std::pow(2.0 * p / (1.0 + p), l);
}

double ToriLaw::mgf(double b) const {
    // sum_l (b^l - 1) lambda_l = -(1/2)[log(1 - qb) - log(1 - q)], q = 2p/(1+p)
    const double q = 2.0 * p / (1.0 + p);
    if (!(b < mgf_radius()))
        throw std::domain_error("ToriLaw::mgf: finite only for b < (1+p)/(2p)");
    return std::sqrt((1.0 - q) / (1.0 - q * b));
}

std::vector<double> ToriLaw::pmf(int m_max) const {
    const double q = 2.0 * p / (1.0 + p);
    std::vector<double> pm(static_cast<size_t>(m_max) + 1, 0.0);
    pm[0] = std::sqrt(1.0 - q);  // exp(-sum lambda_l) = exp(log(1-q)/2)
    // compound-Poisson recursion: P(m) = (1/m) sum_{l<=m} l lambda_l P(m-l)
    for (int m = 1; m <= m_max; ++m) {
        double acc = 0.0;
        double ql = q;
        for (int l = 1; l <= m; ++l) {
            acc += 0.5 * ql * pm[static_cast<size_t>(m - l)];
            ql *= q;
        }
        pm[static_cast<size_t>(m)] = acc / m;
    }
    return pm;
}

namespace {

// one B_{l,k} term in the log domain; lf must cover n1/2 + n2
double b_coeff_log(const LogFactTable& lf, int l, int k, int half_n1, int jj, double log_abs_ar2,
                   double log_r, double log_denom) {
    const double t1 = log_binomial(lf, half_n1, l);
    if (t1 == kNegInf) return kNegInf;
    const double t2 = log_binomial(lf, l + k - 1, k);
    if (t2 == kNegInf) return kNegInf;
    const double t3 = log_binomial(lf, half_n1 - l + jj - k - 1, jj - k);
    if (t3 == kNegInf) return kNegInf;
    return t1 + l * log_abs_ar2 + k * log_r + t2 + t3 - log_denom;
}

SignedLogValue lines_gf_log_range(const LogFactTable& lf, int n1, int n2, int m, double a,
                                  double r, int l_min, int l_max, bool parallel) {
    if (n1 < 2 || n1 % 2 != 0)
        throw std::invalid_argument("lines_gf: n1 must be even and >= 2");
    if (m < 0 || m > n2) throw std::invalid_argument("lines_gf: m out of range");
    if (!(r >= 0.0 && r < 1.0)) throw std::invalid_argument("lines_gf: r must be in [0,1)");
    const int half_n1 = n1 / 2;
    const int jj = n2 - m;
    if (a == 0.0 || r == 0.0) {
        // only the l = 0, k = 0 term survives and B_{0,0} = 1
        return SignedLogValue{0.0, 1};
    }
    const double log_abs_ar2 = std::log(std::abs(a)) + 2.0 * std::log(r);
    const int a_sign = a > 0.0 ? 1 : -1;
    const double log_r = std::log(r);
    const double log_denom = log_binomial(lf, half_n1 + jj - 1, jj);

    l_min = std::max(l_min, 0);
    l_max = std::min(l_max, half_n1);
    const int rows = l_max - l_min + 1;
    if (rows <= 0) return SignedLogValue{kNegInf, 0};

    std::vector<SignedLogAccumulator> row_acc(static_cast<size_t>(rows));
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(max_threads()) if (parallel && rows > 8)
#endif
    for (int li = 0; li < rows; ++li) {
        const int l = l_min + li;
        const int sign = (a_sign < 0 && l % 2 != 0) ? -1 : 1;
        SignedLogAccumulator acc;
        for (int k = 0; k <= jj; ++k) {
            const double lg = b_coeff_log(lf, l, k, half_n1, jj, log_abs_ar2, log_r, log_denom);
            if (lg != kNegInf) acc.add(lg, sign);
        }
        row_acc[static_cast<size_t>(li)] = acc;
    }
    SignedLogAccumulator total;
    for (const auto& rowa : row_acc) total.merge(rowa);  // fixed row order
    return SignedLogValue{total.log_abs(), total.sign()};
}

}  // namespace

double b_coeff(int l, int k, int n1, int n2, int m, double a, double r) {
    if (n1 < 2 || n1 % 2 != 0) throw std::invalid_argument("b_coeff: n1 must be even and >= 2");
    const int jj = n2 - m;
    if (l < 0 || l > n1 / 2 || k < 0 || k > jj) throw std::invalid_argument("b_coeff: l,k out of range");
    if (l == 0 && k == 0) return 1.0;
    if (a == 0.0 || r == 0.0) return 0.0;  // every surviving l >= 1 term carries (a r^2)^l, k >= 1 carries r^k
    const LogFactTable lf(n1 / 2 + n2 + 4);
    const double lg = b_coeff_log(lf, l, k, n1 / 2, jj, std::log(std::abs(a)) + 2.0 * std::log(r),
                                  std::log(r), log_binomial(lf, n1 / 2 + jj - 1, jj));
    if (lg == kNegInf) return 0.0;
    const int sign = (a < 0.0 && l % 2 != 0) ? -1 : 1;
    return sign * std::exp(lg);
}

SignedLogValue lines_gf_log(int n1, int n2, int m, double a, double r) {
    const LogFactTable lf(n1 / 2 + n2 + 4);
    return lines_gf_log_range(lf, n1, n2, m, a, r, 0, n1 / 2, true);
}

SignedLogValue lines_gf_log_serial(int n1, int n2, int m, double a, double r) {
    const LogFactTable lf(n1 / 2 + n2 + 4);
    return lines_gf_log_range(lf, n1, n2, m, a, r, 0, n1 / 2, false);
}

double lines_gf(int n1, int n2, int m, double a, double r) {
    return lines_gf_log(n1, n2, m, a, r).value();
}

double surface_H(double s, double t, double p, double a, double r) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("surface_H: p must be in (0,1)");
    if (!(a > 0.0 && r > 0.0 && r < 1.0))
        throw std::invalid_argument("surface_H: requires a > 0 and r in (0,1)");
    const double half1mp = 0.5 * (1.0 - p);
    const double half1pp = 0.5 * (1.0 + p);
    if (s < 0.0 || s > half1mp || t < 0.0 || t > p)
        throw std::domain_error("surface_H: (s,t) outside the closed rectangle");
    return (1.0 - p) * std::log(half1mp) - 2.0 * xlogx(s) - 2.0 * xlogx(half1mp - s) +
           s * std::log(a * r * r) + t * std::log(r) + xlogx(s + t) - xlogx(t) +
           xlogx(half1pp - s - t) - xlogx(p - t) - half1pp * std::log(half1pp) +
           p * std::log(p);
}

std::array<double, 2> surface_grad(double s, double t, double p, double a, double r) {
    check_interior(s, t, p);
    const double half1mp = 0.5 * (1.0 - p);
    const double half1pp = 0.5 * (1.0 + p);
    const double ds = 2.0 * std::log(half1mp - s) - std::log(half1pp - s - t) +
                      std::log(s + t) - 2.0 * std::log(s) + std::log(a * r * r);
    const double dt = std::log(s + t) - std::log(t) - std::log(half1pp - s - t) +
                      std::log(p - t) + std::log(r);
    return {ds, dt};
}

std::array<std::array<double, 2>, 2> surface_hessian(double s, double t, double p) {
    check_interior(s, t, p);
    const double half1mp = 0.5 * (1.0 - p);
    const double half1pp = 0.5 * (1.0 + p);
    const double shared = 1.0 / (half1pp - s - t) + 1.0 / (s + t);
    const double h11 = shared - 2.0 / (half1mp - s) - 2.0 / s;
    const double h22 = shared - 1.0 / (p - t) - 1.0 / t;
    return {{{h11, shared}, {shared, h22}}};
}

// Stirling prefactor of B_{sN,tN} = (C/N) e^{NH} (1+o(1)). Assembled from
// sqrt(b)/(sqrt(2 pi n) sqrt(a) sqrt(b-a)) per binomial plus the exact
// C(m-1,k) = C(m,k)(m-k)/m shifts; the boundary-heavy form printed in the
// source material disagrees with its own derivation and with the measured
// double sums, this one matches both.
double surface_C(double s, double t, double p) {
    check_interior(s, t, p);
    const double half1pp = 0.5 * (1.0 + p);
    const double d = half1pp - s - t;
    return (1.0 / (2.0 * M_PI)) * std::sqrt(p * half1pp) /
           std::sqrt(t * (s + t) * (p - t) * d);
}

SaddleSolution solve_saddle(double p, double a, double r, double tol) {
    if (!(a > 0.0)) throw std::invalid_argument("solve_saddle: requires a > 0 (use the B = 0 branch otherwise)");
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("solve_saddle: requires r in (0,1)");
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("solve_saddle: p must be in (0,1)");

    const double half1mp = 0.5 * (1.0 - p);
    const double half1pp = 0.5 * (1.0 + p);
    // strict concavity makes nested bisection globally convergent:
    // t(s) zeroes dH/dt (decreasing in t), then the reduced derivative
    // s -> dH/ds(s, t(s)) is nonincreasing (partial maximization of a
    // concave function), so a sign change pins the unique saddle point.
    const double log_r = std::log(r);
    const double log_ar2 = std::log(a) + 2.0 * log_r;
    auto dh_dt = [&](double s, double t) {
        return std::log(s + t) - std::log(t) - std::log(half1pp - s - t) +
               std::log(p - t) + log_r;
    };
    auto t_of_s = [&](double s) {
        double lo = 0.0, hi = p;  // dH/dt -> +inf at t -> 0+, -inf at t -> p-
        for (int i = 0; i < 200 && hi - lo > 1e-17 * p; ++i) {
            const double mid = 0.5 * (lo + hi);
            (dh_dt(s, mid) > 0.0 ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    };
    auto reduced_ds = [&](double s) {
        const double t = t_of_s(s);
        return 2.0 * std::log(half1mp - s) - std::log(half1pp - s - t) + std::log(s + t) -
               2.0 * std::log(s) + log_ar2;
    };
    // bisect in log s: the root can sit arbitrarily close to 0 for small a
    double ulo = std::log(half1mp) - 700.0, uhi = std::log(half1mp * (1.0 - 1e-12));
    if (reduced_ds(std::exp(uhi)) > 0.0) {
        ulo = uhi;  // saddle pinned against the right edge (not expected for r < 1)
    } else {
        for (int i = 0; i < 200 && uhi - ulo > 1e-14; ++i) {
            const double mid = 0.5 * (ulo + uhi);
            (reduced_ds(std::exp(mid)) > 0.0 ? ulo : uhi) = mid;
        }
    }
    double s = std::exp(0.5 * (ulo + uhi));
    double t = t_of_s(s);

    // Newton polish to machine-precision gradients
    long long it = 0;
    double gn = 0.0;
    for (; it < 40; ++it) {
        const auto g = surface_grad(s, t, p, a, r);
        gn = std::max(std::abs(g[0]), std::abs(g[1]));
        if (gn <= tol) break;
        const auto q = surface_hessian(s, t, p);
        const double det = q[0][0] * q[1][1] - q[0][1] * q[1][0];
        const double ds = -(q[1][1] * g[0] - q[0][1] * g[1]) / det;
        const double dt = -(q[0][0] * g[1] - q[1][0] * g[0]) / det;
        double step = 1.0;
        while (step > 1e-8 && !(s + step * ds > 0.0 && s + step * ds < half1mp &&
                                t + step * dt > 0.0 && t + step * dt < p))
            step *= 0.5;
        const double ns = s + step * ds, nt = t + step * dt;
        if (!(ns > 0.0 && ns < half1mp && nt > 0.0 && nt < p)) break;
        s = ns;
        t = nt;
    }
    const double h = surface_H(s, t, p, a, r);

    SaddleSolution sol;
    sol.s_star = s;
    sol.t_star = t;
    sol.h_star = h;
    const auto g = surface_grad(s, t, p, a, r);
    sol.grad_norm = std::hypot(g[0], g[1]);
    sol.hessian = surface_hessian(s, t, p);
    const double tr = sol.hessian[0][0] + sol.hessian[1][1];
    const double det = sol.hessian[0][0] * sol.hessian[1][1] - sol.hessian[0][1] * sol.hessian[1][0];
    sol.hessian_negative_definite = tr < 0.0 && det > 0.0;
    sol.c_star = surface_C(s, t, p);
    sol.b_star = (1.0 + p) / (2.0 * p) * (p - t) / (0.5 * (1.0 + p) - s - t);
    sol.iterations = it;
    if (sol.grad_norm > std::max(tol * 100.0, 1e-9))
        throw std::runtime_error("solve_saddle: did not converge; |grad| = " +
                                 std::to_string(sol.grad_norm));
    return sol;
}

double laplace_prefactor(const SaddleSolution& sol, int m) {
    const double det =
        sol.hessian[0][0] * sol.hessian[1][1] - sol.hessian[0][1] * sol.hessian[1][0];
    return 2.0 * M_PI * sol.c_star / std::sqrt(det) * std::pow(sol.b_star, m);
}

double pressure_cm12(double beta, double B, double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("pressure_cm12: p must be in (0,1)");
    if (beta < 0.0) throw std::invalid_argument("pressure_cm12: beta must be >= 0");
    const auto ing = line_ingredients(beta, B);
    const double base = std::log(ing.lambda_plus) + 0.5 * (1.0 - p) * std::log(ing.a_plus);
    if (std::abs(ing.a) < kZeroA || ing.r == 0.0) return base;  // lines GF tends to a constant
    if (ing.a < 0.0)
        throw std::domain_error("pressure_cm12: negative a outside the saddle branch");
    const auto sol = solve_saddle(p, ing.a, ing.r);
    return base + sol.h_star;
}

double pressure_cm12_finite(int n, double beta, double B, double p) {
    const auto par = Cm12Params::from(p, n);
    const auto ing = line_ingredients(beta, B);
    const double nn = static_cast<double>(par.n);
    const double base = std::log(ing.lambda_plus) +
                        (par.n1 / (2.0 * nn)) * std::log(ing.a_plus);

    // sum over the number of torus vertices; terms decay geometrically, so
    // stop once they fall 46 nats below the running maximum
    const std::vector<double> qm = mn_pmf(par.n1, par.n2);
    const std::vector<double> em = torus_product_recursion_table(par.n2, 1.0, ing.r);
    const LogFactTable lf(par.n1 / 2 + par.n2 + 4);
    SignedLogAccumulator acc;
    double peak = kNegInf;
    int low_count = 0;
    for (int m = 0; m <= par.n2; ++m) {
        const auto gf = lines_gf_log_range(lf, par.n1, par.n2, m, ing.a, ing.r, 0, par.n1 / 2, true);
        if (qm[static_cast<size_t>(m)] <= 0.0 || gf.sign == 0) continue;
        const double term = std::log(em[static_cast<size_t>(m)]) + gf.log_abs +
                            std::log(qm[static_cast<size_t>(m)]);
        acc.add(term, gf.sign);
        peak = std::max(peak, term);
        low_count = (term < peak - 46.0) ? low_count + 1 : 0;
        if (low_count >= 3 && m >= 10) break;
    }
    if (acc.sign() <= 0)
        throw std::runtime_error("pressure_cm12_finite: non-positive partition sum");
    return base + acc.log_abs() / nn;
}

double magnetization_cm12(double beta, double B, double p) {
    if (!(beta > 0.0)) throw std::invalid_argument("magnetization_cm12: beta must be > 0");
    if (std::abs(B) < 1e-3) {
        // log(a) is singular as a -> 0; differentiate the pressure directly
        return first_derivative([&](double b) { return pressure_cm12(beta, b, p); }, B, 1e-2);
    }
    const auto ing = line_ingredients(beta, B);
    const auto sol = solve_saddle(p, ing.a, ing.r);
    const double q = std::exp(-4.0 * beta);
    const double sh = std::sinh(B);
    const double dlog_lambda = sh / std::sqrt(sh * sh + q);
    const double h = 1e-4;  // spec step for the interior first differences
    auto fd = [&](auto f) { return (f(B + h) - f(B - h)) / (2.0 * h); };
    const double dlog_aplus = fd([&](double b) { return std::log(line_amplitudes(beta, b).a_plus); });
    const double dlog_ar2 = fd([&](double b) {
        const auto li = line_ingredients(beta, b);
        return std::log(li.a * li.r * li.r);
    });
    const double dlog_r = fd([&](double b) { return std::log(transfer_eigen(beta, b).r); });
    return dlog_lambda + 0.5 * (1.0 - p) * dlog_aplus + sol.s_star * dlog_ar2 +
           sol.t_star * dlog_r;
}

Sigma2Result sigma2_variance(double beta, double B, double p) {
    if (!(beta > 0.0)) throw std::invalid_argument("sigma2_variance: beta must be > 0");
    Sigma2Result out;
    out.near_zero_field = std::abs(B) < 0.1;  // stencil crosses the a -> 0 region
    out.value =
        second_derivative([&](double b) { return pressure_cm12(beta, b, p); }, B, 4e-2);
    return out;
}

double boundary_contribution_check(int n, double p, double a, double r, double eps) {
    if (!(eps > 0.0 && eps < 0.5))
        throw std::invalid_argument("boundary_contribution_check: eps must be in (0, 1/2)");
    const auto par = Cm12Params::from(p, n);
    if (a == 0.0) return 0.0;
    const std::vector<double> qm = mn_pmf(par.n1, par.n2);
    const std::vector<double> em = torus_product_recursion_table(par.n2, 1.0, r);
    const LogFactTable lf(par.n1 / 2 + par.n2 + 4);
    const int l_cut = static_cast<int>((1.0 - eps) * (par.n1 / 2));
    SignedLogAccumulator total, tail;
    double peak = kNegInf;
    int low_count = 0;
    for (int m = 0; m <= par.n2; ++m) {
        if (qm[static_cast<size_t>(m)] <= 0.0) continue;
        const double wgt = std::log(em[static_cast<size_t>(m)]) + std::log(qm[static_cast<size_t>(m)]);
        const auto full = lines_gf_log_range(lf, par.n1, par.n2, m, a, r, 0, par.n1 / 2, true);
        const auto part = lines_gf_log_range(lf, par.n1, par.n2, m, a, r, l_cut + 1, par.n1 / 2, true);
        if (full.sign != 0) total.add(wgt + full.log_abs, full.sign);
        if (part.sign != 0) tail.add(wgt + part.log_abs, part.sign);
        const double term = full.sign != 0 ? wgt + full.log_abs : kNegInf;
        peak = std::max(peak, term);
        low_count = (term < peak - 46.0) ? low_count + 1 : 0;
        if (low_count >= 3 && m >= 10) break;
    }
    if (tail.sign() == 0) return 0.0;
    return std::exp(tail.log_abs() - total.log_abs());
}

}  // namespace anneal
