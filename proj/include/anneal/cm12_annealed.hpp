// Annealed machinery for the configuration model with degrees 1 and 2:
// pairing combinatorics (law of the number of torus vertices M_N), the line
// generating function and its exponential-rate surface H(s,t), the saddle
// point and Laplace prefactor, pressure, magnetization and the CLT variance.
#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "anneal/transfer.hpp"

namespace anneal {

struct Cm12Params {
    int n;          // total vertices (adjusted so n1 is even)
    double p;
    int n1;         // degree-1 count, even
    int n2;         // degree-2 count = floor(p * n_requested)
    long long ell;  // n1 + 2 n2

    // n1 = N - floor(pN); if odd, N is incremented by one so n1 becomes even
    static Cm12Params from(double p, int n);
};

struct LineIngredients {
    double beta;
    double B;
    double lambda_plus;
    double lambda_minus;
    double a_plus;
    double a_minus;
    double r;  // lambda_- / lambda_+
    double a;  // A_- / A_+; O(B^2) as B -> 0, defined 0 at beta = 0

    double c(int l) const { return 1.0 + a * std::pow(r, l); }
};

LineIngredients line_ingredients(double beta, double B);

// law of M_N (vertices in tori) for n1 degree-1 and n2 degree-2 vertices:
// Q(M_N = m) = 2^{n2} (n1-1)!! n2! / (n1+2n2-1)!!
//              * 2^{-2m} C(2m, m) C(n1/2 + n2 - m - 1, n2 - m),  m = 0..n2
std::vector<double> mn_pmf(int n1, int n2);

// limiting law of M: sum over l of l * Poisson(lambda_l),
// lambda_l = (1/2l) (2p/(1+p))^l
struct ToriLaw {
    double p;
    double rate(int l) const;
    double mgf_radius() const { return (1.0 + p) / (2.0 * p); }
    double mgf(double b) const;                // finite only for b < (1+p)/(2p)
    std::vector<double> pmf(int m_max) const;  // compound-Poisson recursion
};
ToriLaw tori_limit_law(double p);

struct SignedLogValue {
    double log_abs;
    int sign;
    double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }
};

// B_{l,k}(n2-m) = C(n1/2, l) (a r^2)^l r^k
//                 * C(l+k-1, k) C(n1/2-l+n2-m-k-1, n2-m-k) / C(n1/2+n2-m-1, n2-m),
// with the convention C(-1,0) = 1 so that B_{0,0} = 1
double b_coeff(int l, int k, int n1, int n2, int m, double a, double r);

// sum of B_{l,k}(n2-m) over 0 <= l <= n1/2, 0 <= k <= n2-m:
// the generating function E[prod_l c_l^{N_l} | M_N = m]
SignedLogValue lines_gf_log(int n1, int n2, int m, double a, double r);
SignedLogValue lines_gf_log_serial(int n1, int n2, int m, double a, double r);
double lines_gf(int n1, int n2, int m, double a, double r);

// concave rate surface of the generating function on
// (0,(1-p)/2) x (0,p); x log x extended by 0 at the boundary
double surface_H(double s, double t, double p, double a, double r);
std::array<double, 2> surface_grad(double s, double t, double p, double a, double r);
std::array<std::array<double, 2>, 2> surface_hessian(double s, double t, double p);
double surface_C(double s, double t, double p);

struct SaddleSolution {
    double s_star;
    double t_star;
    double h_star;
    double grad_norm;
    std::array<std::array<double, 2>, 2> hessian;
    bool hessian_negative_definite;
    double c_star;
    double b_star;  // always < (1+p)/(2p)
    long long iterations;
};

// damped Newton ascent on H from ((1-p)/4, p/2); requires a > 0, 0 < r < 1
SaddleSolution solve_saddle(double p, double a, double r, double tol = 1e-12);

// 2 pi C(s*,t*) det(-ish Hessian)^{-1/2} (b*)^m
double laplace_prefactor(const SaddleSolution& sol, int m);

// psi = log lambda_+ + ((1-p)/2) log A_+ + H(s*,t*); the H term drops out
// when a vanishes (B = 0 or beta = 0), where the lines GF tends to a constant
double pressure_cm12(double beta, double B, double p);

// psi_N = log lambda_+ + (n1/2N) log A_+ + (1/N) log sum_m E_m G_m Q(M_N = m)
// with E_m the torus-product expectation and G_m the lines GF at m
double pressure_cm12_finite(int n, double beta, double B, double p);

// dpsi/dB: envelope form (no s*,t* derivatives) away from B = 0, direct
// Richardson differences of the pressure near B = 0; both routes agree
double magnetization_cm12(double beta, double B, double p);

struct Sigma2Result {
    double value;
    bool near_zero_field;  // a -> 0 conditioning warning
};

// CLT variance: d^2 psi / dB^2 by Richardson-extrapolated central differences
Sigma2Result sigma2_variance(double beta, double B, double p);

// mass fraction of the l > (1-eps) n1/2 block of the full double sum
double boundary_contribution_check(int n, double p, double a, double r, double eps);

}  // namespace anneal
