#include "anneal/cm2_annealed.hpp"

#include <cmath>
#include <stdexcept>

namespace anneal {

Cm2Thermo cm2_thermo(double beta, double B) {
    const auto eig = transfer_eigen(beta, B);
    return Cm2Thermo{beta, B, eig.lambda_plus, eig.lambda_minus, eig.r};
}

double pressure_cm2(double beta, double B) {
    return std::log(transfer_eigen(beta, B).lambda_plus);
}

double magnetization_cm2(double beta, double B) {
    if (beta < 0.0) throw std::invalid_argument("magnetization_cm2: beta must be >= 0");
    const double sh = std::sinh(B);
    return sh / std::sqrt(sh * sh + std::exp(-4.0 * beta));
}

double susceptibility_cm2(double beta, double B) {
    if (beta < 0.0) throw std::invalid_argument("susceptibility_cm2: beta must be >= 0");
    const double sh = std::sinh(B);
    const double q = std::exp(-4.0 * beta);
    const double den = sh * sh + q;
    return std::cosh(B) * q / (den * std::sqrt(den));
}

std::vector<double> torus_product_recursion_table(int n, double alpha, double gamma) {
    if (n < 0) throw std::invalid_argument("torus_product_recursion: n must be >= 0");
    if (!(gamma >= 0.0 && gamma < 1.0))
        throw std::invalid_argument("torus_product_recursion: gamma must be in [0,1)");
    if (!(alpha > -1.0)) throw std::invalid_argument("torus_product_recursion: alpha must be > -1");
    std::vector<double> z(static_cast<size_t>(n) + 1);
    z[0] = 1.0;
    for (int m = 1; m <= n; ++m) {
        // q_m(l) built incrementally along the l loop
        double open_prob = 1.0;
        double gamma_l = gamma;
        double acc = 0.0;
        for (int l = 1; l <= m; ++l) {
            const double odd = 2.0 * m - 2.0 * l + 1.0;
            const double q_l = open_prob / odd;
            acc += q_l * (1.0 + alpha * gamma_l) * z[static_cast<size_t>(m - l)];
            open_prob *= (odd - 1.0) / odd;
            gamma_l *= gamma;
        }
        z[static_cast<size_t>(m)] = acc;
    }
    return z;
}

double torus_product_recursion(int n, double alpha, double gamma) {
    return torus_product_recursion_table(n, alpha, gamma).back();
}

double pressure_cm2_finite(int n, double beta, double B) {
    if (n < 1) throw std::invalid_argument("pressure_cm2_finite: n must be >= 1");
    const auto eig = transfer_eigen(beta, B);
    const double z = torus_product_recursion(n, 1.0, eig.r);
    return std::log(eig.lambda_plus) + std::log(z) / n;
}

double two_to_K_expectation(int n) {
    if (n < 1) throw std::invalid_argument("two_to_K_expectation: n must be >= 1");
    double prod = 1.0;
    for (int i = 1; i <= n; ++i) prod *= 1.0 + 1.0 / (2.0 * n - 2.0 * i + 1.0);
    return prod;
}

}  // namespace anneal
