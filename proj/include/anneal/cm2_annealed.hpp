// Annealed thermodynamics of the 2-regular configuration model: the periodic
// 1-D transfer matrix gives the limit, the torus-product recursion the exact
// finite-N correction.
#pragma once

#include <vector>

#include "anneal/transfer.hpp"

namespace anneal {

struct Cm2Thermo {
    double beta;
    double B;
    double lambda_plus;
    double lambda_minus;
    double r;  // lambda_minus / lambda_plus in [0,1)
};

Cm2Thermo cm2_thermo(double beta, double B);

// lambda_pm = e^beta [cosh B +- sqrt(sinh^2 B + e^{-4 beta})]
inline TransferEigen lambda_pm(double beta, double B) { return transfer_eigen(beta, B); }

// psi = log lambda_+
double pressure_cm2(double beta, double B);

// M = sinh B / sqrt(sinh^2 B + e^{-4 beta})
double magnetization_cm2(double beta, double B);

// chi = dM/dB = cosh(B) e^{-4 beta} / (sinh^2 B + e^{-4 beta})^{3/2}
double susceptibility_cm2(double beta, double B);

// Z_n = sum_l q_n(l) (1 + alpha gamma^l) Z_{n-l}, Z_0 = 1, with q_n the
// first-cycle law; equals E[prod_cycles (1 + alpha gamma^{L_i})] exactly.
// O(N^2). Returns the whole table Z_0..Z_N.
std::vector<double> torus_product_recursion_table(int n, double alpha, double gamma);
double torus_product_recursion(int n, double alpha, double gamma);

// psi_N = log lambda_+ + (1/N) log E[prod (1 + r^{L_i})]
double pressure_cm2_finite(int n, double beta, double B);

// E[2^{K_N}] = prod_{i=1}^{N} (1 + 1/(2N - 2i + 1))
double two_to_K_expectation(int n);

}  // namespace anneal
