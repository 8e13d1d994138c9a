#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "anneal/cm12_annealed.hpp"
#include "anneal/cm2_annealed.hpp"
#include "anneal/exact_oracles.hpp"
#include "anneal/numerics.hpp"
#include "anneal/rng.hpp"
#include "anneal/stats_clt.hpp"

using namespace anneal;

TEST_CASE("cm12 parameters keep n1 even") {
    const auto a = Cm12Params::from(0.5, 100);
    CHECK(a.n1 == 50);
    CHECK(a.n2 == 50);
    CHECK(a.n == 100);
    const auto b = Cm12Params::from(0.5, 101);  // n1 = 51 -> bumped
    CHECK(b.n1 == 52);
    CHECK(b.n2 == 50);
    CHECK(b.n == 102);
    CHECK(b.ell % 2 == 0);
    CHECK_THROWS(Cm12Params::from(0.0, 100));
}

TEST_CASE("line ingredients") {
    // B = 0: A_- vanishes, so every c_l is 1
    const auto z = line_ingredients(0.8, 0.0);
    CHECK(z.a == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(z.c(5) == doctest::Approx(1.0));

    // a(beta, B) = O(B^2): quartering B quarters a (up to higher order)
    const double a1 = line_ingredients(0.5, 2e-2).a;
    const double a2 = line_ingredients(0.5, 1e-2).a;
    CHECK(a1 / a2 == doctest::Approx(4.0).epsilon(2e-3));
    CHECK(a2 > 0.0);

    // large beta: r approaches its sinh-dominated limit e^{-2B} < 1
    CHECK(line_ingredients(3.0, 0.3).r < 1.0);
    CHECK(std::abs(line_ingredients(3.0, 0.3).r - std::exp(-0.6)) < 1e-4);

    // A_+ lambda_+^3 + A_- lambda_-^3 reproduces the 3-path enumeration
    const auto ing = line_ingredients(0.5, 0.2);
    const double z3 = std::log(ing.a_plus * std::pow(ing.lambda_plus, 3) +
                               ing.a_minus * std::pow(ing.lambda_minus, 3));
    MultiGraph path{3, {{0, 1}, {1, 2}}};
    CHECK(z3 == doctest::Approx(exact_quenched_Z(path, 0.5, 0.2).log()).epsilon(1e-13));
}

TEST_CASE("M_N pairing law") {
    const auto small = mn_pmf(2, 1);
    CHECK(small[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(small[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(mn_pmf(2, 0) == std::vector<double>{1.0});
    CHECK_THROWS(mn_pmf(3, 2));
    CHECK_THROWS(mn_pmf(0, 2));

    for (auto [n1, n2] : std::vector<std::pair<int, int>>{{2, 7}, {40, 13}, {100, 400}, {400, 400}}) {
        const auto pmf = mn_pmf(n1, n2);
        double total = 0.0;
        for (double q : pmf) {
            CHECK(q >= 0.0);
            total += q;
        }
        CHECK(std::abs(total - 1.0) < 1e-10);
    }
}

TEST_CASE("limiting tori law") {
    const auto law = tori_limit_law(0.5);
    CHECK(law.rate(1) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(law.mgf(1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(law.mgf_radius() == doctest::Approx(1.5));
    CHECK_THROWS(law.mgf(1.5));
    CHECK(tori_limit_law(1e-6).rate(1) < 1e-5);  // p -> 0: no tori

    const auto pmf = law.pmf(200);
    double total = 0.0;
    for (double q : pmf) total += q;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-8));

    // finite-N law converges to the compound-Poisson limit in TV
    auto tv_at = [&](int n) {
        const auto fin = mn_pmf(n / 2, n / 2);
        const auto lim = law.pmf(n / 2);
        double acc = 0.0;
        for (size_t m = 0; m < fin.size(); ++m) acc += std::abs(fin[m] - lim[m]);
        return 0.5 * acc;
    };
    const double tv200 = tv_at(200), tv2000 = tv_at(2000);
    CHECK(tv2000 < tv200);
    CHECK(tv2000 < 1e-3);
}

TEST_CASE("B coefficients") {
    CHECK(b_coeff(0, 0, 8, 5, 2, 0.4, 0.3) == doctest::Approx(1.0));
    CHECK(b_coeff(2, 1, 8, 5, 2, 0.0, 0.3) == 0.0);
    CHECK(b_coeff(0, 3, 8, 5, 0, 0.4, 0.3) == 0.0);  // C(k-1,k) = 0
    // l=1, k=0, n1=4, n2=2, m=0: C(2,1)(a r^2) C(0,0) C(2,2) / C(3,2)
    const double a = 0.7, r = 0.45;
    CHECK(b_coeff(1, 0, 4, 2, 0, a, r) ==
          doctest::Approx(2.0 * a * r * r / 3.0).epsilon(1e-13));
    // negative a flips the sign of odd-l terms only
    CHECK(b_coeff(1, 0, 4, 2, 0, -a, r) ==
          doctest::Approx(-2.0 * a * r * r / 3.0).epsilon(1e-13));
    CHECK(b_coeff(2, 0, 8, 4, 0, -a, r) == doctest::Approx(b_coeff(2, 0, 8, 4, 0, a, r)));
}

namespace {

// uniform-composition expectation of prod_j (1 + a r^{i_j + 2}) over all
// ways to split `total` degree-2 vertices across `parts` lines
double composition_expectation(int parts, int total, double a, double r) {
    double acc = 0.0;
    long long count = 0;
    std::function<void(int, int, double)> rec = [&](int part, int left, double prod) {
        if (part == parts - 1) {
            acc += prod * (1.0 + a * std::pow(r, left + 2));
            ++count;
            return;
        }
        for (int i = 0; i <= left; ++i)
            rec(part + 1, left - i, prod * (1.0 + a * std::pow(r, i + 2)));
    };
    rec(0, total, 1.0);
    return acc / static_cast<double>(count);
}

}  // namespace

TEST_CASE("lines generating function vs composition enumeration") {
    CHECK(lines_gf(8, 5, 3, 0.0, 0.7) == doctest::Approx(1.0));

    // single line holds every degree-2 vertex: GF = 1 + a r^{j+2}
    for (int j : {0, 1, 4})
        CHECK(lines_gf(2, 5, 5 - j, 0.35, 0.6) ==
              doctest::Approx(1.0 + 0.35 * std::pow(0.6, j + 2)).epsilon(1e-13));

    for (double a : {0.1, 0.5})
        for (double r : {0.2, 0.8})
            for (int n1 : {2, 4, 6, 8})
                for (int n2 : {0, 3, 8})
                    for (int m = 0; m <= n2; m += 2) {
                        const double brute = composition_expectation(n1 / 2, n2 - m, a, r);
                        const double got = lines_gf(n1, n2, m, a, r);
                        CHECK(std::abs(got - brute) <= 1e-10 * brute);
                    }

    // negative a also matches the enumeration (signs tracked in log domain)
    CHECK(lines_gf(6, 5, 1, -0.4, 0.5) ==
          doctest::Approx(composition_expectation(3, 4, -0.4, 0.5)).epsilon(1e-12));
}

TEST_CASE("surface H: gradient, Hessian, concavity, domain") {
    const double p = 0.5, a = 0.3, r = 0.4;
    const double s = 0.11, t = 0.21;
    const auto g = surface_grad(s, t, p, a, r);
    const double h = 1e-6;
    CHECK(std::abs(g[0] - (surface_H(s + h, t, p, a, r) - surface_H(s - h, t, p, a, r)) /
                              (2.0 * h)) < 1e-6);
    CHECK(std::abs(g[1] - (surface_H(s, t + h, p, a, r) - surface_H(s, t - h, p, a, r)) /
                              (2.0 * h)) < 1e-6);

    const auto q = surface_hessian(s, t, p);
    CHECK(std::abs(q[0][0] - (surface_grad(s + h, t, p, a, r)[0] -
                              surface_grad(s - h, t, p, a, r)[0]) /
                                 (2.0 * h)) < 1e-4);
    CHECK(std::abs(q[0][1] - (surface_grad(s, t + h, p, a, r)[0] -
                              surface_grad(s, t - h, p, a, r)[0]) /
                                 (2.0 * h)) < 1e-4);
    CHECK(q[0][1] == q[1][0]);

    // negative definite across the interior, several (p,a,r)
    Rng rng = seeded_rng(9);
    for (int trip = 0; trip < 5; ++trip) {
        const double pp = 0.15 + 0.7 * uniform01(rng);
        for (int rep = 0; rep < 100; ++rep) {
            const double ss = (0.02 + 0.96 * uniform01(rng)) * 0.5 * (1.0 - pp);
            const double tt = (0.02 + 0.96 * uniform01(rng)) * pp;
            const auto qq = surface_hessian(ss, tt, pp);
            const double tr = qq[0][0] + qq[1][1];
            const double det = qq[0][0] * qq[1][1] - qq[0][1] * qq[1][0];
            CHECK(tr < 0.0);
            CHECK(det > 0.0);
        }
    }

    // finite and real on an interior grid
    for (int i = 1; i < 50; ++i)
        for (int j = 1; j < 50; ++j) {
            const double v =
                surface_H(i / 50.0 * 0.5 * (1.0 - p), j / 50.0 * p, p, a, r);
            CHECK(std::isfinite(v));
        }
    CHECK(std::isfinite(surface_H(0.0, 0.0, p, a, r)));  // x log x extension
    CHECK_THROWS(surface_H(0.3, 0.2, p, a, r));          // s > (1-p)/2
    CHECK_THROWS(surface_grad(0.0, 0.2, p, a, r));       // boundary excluded
}

TEST_CASE("saddle point: dense grid argmax oracle and small-a limit") {
    const double p = 0.5, a = 0.3, r = 0.4;
    const auto sol = solve_saddle(p, a, r);
    double best_s = 0, best_t = 0, best_v = -1e300;
    const double ds = 0.5 * (1.0 - p) / 400.0, dt = p / 400.0;
    for (int i = 1; i < 400; ++i)
        for (int j = 1; j < 400; ++j) {
            const double v = surface_H(i * ds, j * dt, p, a, r);
            if (v > best_v) {
                best_v = v;
                best_s = i * ds;
                best_t = j * dt;
            }
        }
    CHECK(std::abs(sol.s_star - best_s) <= ds);
    CHECK(std::abs(sol.t_star - best_t) <= dt);
    CHECK(sol.h_star >= best_v - 1e-12);
    CHECK(sol.hessian_negative_definite);
    CHECK(sol.b_star < 1.5);

    double prev = 1.0;
    for (double aa : {1e-2, 1e-4, 1e-6}) {
        const auto s2 = solve_saddle(p, aa, r);
        CHECK(s2.s_star < prev);
        prev = s2.s_star;
    }
    CHECK(prev < 1e-6);
    CHECK_THROWS(solve_saddle(p, -0.1, r));
    CHECK_THROWS(solve_saddle(p, 0.0, r));
}

TEST_CASE("Laplace prefactor") {
    const auto sol = solve_saddle(0.5, 0.3, 0.4);
    CHECK(laplace_prefactor(sol, 1) / laplace_prefactor(sol, 0) ==
          doctest::Approx(sol.b_star).epsilon(1e-14));
    CHECK(laplace_prefactor(sol, 0) > 0.0);

    // the full double sum approaches prefactor(0) e^{N H*}
    double prev_gap = 1e300;
    for (int n : {200, 400, 800}) {
        const auto gf = lines_gf_log(n / 2, n / 2, 0, 0.3, 0.4);
        const double gap =
            std::abs(std::exp(gf.log_abs - n * sol.h_star) - laplace_prefactor(sol, 0));
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }
}

TEST_CASE("pressure: limits, finite-N convergence, exact small instance") {
    // p -> 1 approaches the 2-regular pressure monotonically
    const double cm2 = pressure_cm2(0.5, 0.3);
    double prev_gap = 1e300;
    for (double p : {0.9, 0.99, 0.999}) {
        const double gap = std::abs(pressure_cm12(0.5, 0.3, p) - cm2);
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }

    // beta -> 0+ approaches independent spins
    const double free = std::log(2.0 * std::cosh(0.3));
    CHECK(std::abs(pressure_cm12(0.1, 0.3, 0.5) - free) >
          std::abs(pressure_cm12(0.01, 0.3, 0.5) - free));
    CHECK(std::abs(pressure_cm12(0.01, 0.3, 0.5) - free) < 1e-2);
    CHECK(pressure_cm12(0.0, 0.3, 0.5) == doctest::Approx(free).epsilon(1e-12));

    // n1 = 2, n2 = 1 equals the 3-pairing enumeration
    const DegreeSequence d(std::vector<int>{1, 1, 2});
    const double exact = exact_annealed_Z_cm(d, 0.6, 0.25).log() / 3.0;
    CHECK(std::abs(pressure_cm12_finite(3, 0.6, 0.25, 1.0 / 3.0) - exact) < 1e-10);

    // increasing N shrinks the gap to the limit
    const double lim = pressure_cm12(0.5, 0.3, 0.5);
    double prev = 1e300;
    for (int n : {500, 1000, 2000}) {
        const double gap = std::abs(pressure_cm12_finite(n, 0.5, 0.3, 0.5) - lim);
        CHECK(gap < prev);
        prev = gap;
    }
    CHECK(prev < 5e-3);
}

TEST_CASE("magnetization: odd, vanishing at B -> 0, route agreement") {
    const double m1 = magnetization_cm12(0.5, 0.2, 0.5);
    CHECK(magnetization_cm12(0.5, -0.2, 0.5) == doctest::Approx(-m1).epsilon(1e-9));

    double prev = 1.0;
    for (double b : {0.1, 0.01, 0.001}) {
        const double m = std::abs(magnetization_cm12(0.4, b, 0.5));
        CHECK(m < prev);
        prev = m;
    }
    CHECK(prev < 0.01);

    // envelope route vs direct differences of the pressure
    const double env = magnetization_cm12(0.4, 0.2, 0.5);
    const double fd =
        first_derivative([](double b) { return pressure_cm12(0.4, b, 0.5); }, 0.2);
    CHECK(std::abs(env - fd) < 1e-5);
}

TEST_CASE("sigma2: independent-spin limit and finite-N second differences") {
    // the gap to sech^2 B closes linearly in beta
    const auto s0 = sigma2_variance(1e-6, 0.2, 0.5);
    const double sech2 = 1.0 / std::pow(std::cosh(0.2), 2);
    CHECK(std::abs(s0.value - sech2) < 1e-5);
    CHECK(std::abs(sigma2_variance(1e-3, 0.2, 0.5).value - sech2) > std::abs(s0.value - sech2));
    CHECK(s0.near_zero_field == false);
    CHECK(sigma2_variance(0.4, 0.01, 0.5).near_zero_field);

    const auto s2 = sigma2_variance(0.4, 0.2, 0.5);
    CHECK(s2.value > 0.0);
    // finite-N oracle at N = 4000 (plain central stencil; tolerance 1e-2)
    const double h = 2e-2;
    const double fd = (pressure_cm12_finite(4000, 0.4, 0.2 + h, 0.5) -
                       2.0 * pressure_cm12_finite(4000, 0.4, 0.2, 0.5) +
                       pressure_cm12_finite(4000, 0.4, 0.2 - h, 0.5)) /
                      (h * h);
    CHECK(std::abs(s2.value - fd) < 1e-2);

    // numerical continuity of sigma2 across B = 0 (asserted by continuity only)
    CHECK(std::abs(sigma2_variance(0.4, 0.02, 0.5).value -
                   sigma2_variance(0.4, 0.0, 0.5).value) < 5e-2);
}

TEST_CASE("boundary contribution vanishes with N and grows toward eps -> 0") {
    CHECK(boundary_contribution_check(200, 0.5, 0.0, 0.4, 0.2) == 0.0);
    double prev = 1.0;
    for (int n : {200, 400, 800}) {
        const double ratio = boundary_contribution_check(n, 0.5, 0.3, 0.4, 0.2);
        CHECK(ratio < prev);
        prev = ratio;
    }
    CHECK(prev < 1e-6);
    // larger eps widens the tail block l > (1-eps) n1/2, so its mass grows
    CHECK(boundary_contribution_check(200, 0.5, 0.3, 0.4, 0.45) >
          boundary_contribution_check(200, 0.5, 0.3, 0.4, 0.05));
    CHECK_THROWS(boundary_contribution_check(200, 0.5, 0.3, 0.4, 0.6));
}

TEST_CASE("mgf-weighted tail stabilizes well before m = 200") {
    const auto sol = solve_saddle(0.5, 0.3, 0.4);
    const auto em = torus_product_recursion_table(260, 1.0, 0.4);
    const auto pm = tori_limit_law(0.5).pmf(260);
    double partial = 0.0, at150 = 0.0, at200 = 0.0;
    for (int m = 0; m <= 260; ++m) {
        partial += em[static_cast<size_t>(m)] * std::pow(sol.b_star, m) *
                   pm[static_cast<size_t>(m)];
        if (m == 150) at150 = partial;
        if (m == 200) at200 = partial;
    }
    CHECK(std::abs(at200 - at150) <= 1e-10 * partial);
    CHECK(std::abs(partial - at200) <= 1e-10 * partial);
}
