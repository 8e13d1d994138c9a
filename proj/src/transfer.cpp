#include "anneal/transfer.hpp"

#include <stdexcept>

namespace anneal {

TransferEigen transfer_eigen(double beta, double B) {
    if (beta < 0.0) throw std::invalid_argument("transfer_eigen: beta must be >= 0");
    const double q = std::exp(-4.0 * beta);
    const double sh = std::sinh(B);
    const double ch = std::cosh(B);
    const double s = std::sqrt(sh * sh + q);
    const double eb = std::exp(beta);
    TransferEigen out;
    out.lambda_plus = eb * (ch + s);
    // cosh B - s = (1 - q) / (cosh B + s), stable against cancellation at small beta
    out.lambda_minus = eb * (1.0 - q) / (ch + s);
    out.r = out.lambda_minus / out.lambda_plus;
    return out;
}

LineAmplitudes line_amplitudes(double beta, double B) {
    if (beta < 0.0) throw std::invalid_argument("line_amplitudes: beta must be >= 0");
    const auto eig = transfer_eigen(beta, B);
    const double q = std::exp(-4.0 * beta);
    const double sh = std::sinh(B);
    const double s = std::sqrt(sh * sh + q);
    const double eb = std::exp(beta);
    // lambda_+ - e^{beta+B} = e^beta (s - sinh B); avoid cancellation for B > 0
    const double s_minus_sh = (sh > 0.0) ? q / (s + sh) : (s - sh);
    const double d = eb * s_minus_sh;

    const double e2mb = std::exp(-2.0 * beta);
    const double denom_core = e2mb + d * d;
    LineAmplitudes out;
    out.a_plus = (e2mb * std::exp(B) + d * d * std::exp(-B) + 2.0 * std::exp(-beta) * d) /
                 (denom_core * eig.lambda_plus);
    if (eig.lambda_minus == 0.0) {
        // beta = 0: lambda_- vanishes and the A_- amplitude is moot
        out.a_minus = 0.0;
    } else {
        out.a_minus = (e2mb * std::exp(-B) + d * d * std::exp(B) - 2.0 * std::exp(-beta) * d) /
                      (denom_core * eig.lambda_minus);
    }
    out.a = out.a_minus / out.a_plus;
    return out;
}

}  // namespace anneal
