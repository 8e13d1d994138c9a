// 2x2 transfer-matrix ingredients of the one-dimensional Ising model.
// lambda_pm are the eigenvalues; A_pm the free-boundary amplitudes, so that
// Z_cycle(n) = lambda_+^n + lambda_-^n and Z_line(n) = A_+ lambda_+^n + A_- lambda_-^n.
#pragma once

#include <cmath>

namespace anneal {

struct TransferEigen {
    double lambda_plus;
    double lambda_minus;
    double r;  // lambda_minus / lambda_plus, in [0,1); 0 iff beta == 0
};

// lambda_pm = e^beta [cosh B +- sqrt(sinh^2 B + e^{-4 beta})]
TransferEigen transfer_eigen(double beta, double B);

struct LineAmplitudes {
    double a_plus;
    double a_minus;  // 0 at beta = 0 or B = 0 (defined by continuity)
    double a;        // a_minus / a_plus
};

LineAmplitudes line_amplitudes(double beta, double B);

}  // namespace anneal
