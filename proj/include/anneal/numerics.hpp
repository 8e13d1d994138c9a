// Shared numerical utilities: log-domain combinatorics, streaming signed
// log-sum-exp, Richardson-extrapolated finite differences, incomplete gamma.
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace anneal {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log n! table, filled with lgamma so entries are individually accurate
class LogFactTable {
public:
    explicit LogFactTable(int max_n);
    double operator()(int n) const { return lf_[static_cast<size_t>(n)]; }
    int max_n() const { return static_cast<int>(lf_.size()) - 1; }

private:
    std::vector<double> lf_;
};

// log C(n, k). Convention: k = 0 gives 0 (so C(-1,0) = 1); k < 0, k > n or
// n < -1 count as zero terms and return -inf.
double log_binomial(const LogFactTable& lf, long long n, long long k);

// log of the odd double factorial (2m-1)!! for odd arguments; (-1)!! = 1.
double log_double_factorial_odd(long long odd);

// number of perfect matchings of `stubs` half-edges, as LogValue-compatible log
double log_num_pairings(long long stubs);

// Streaming signed log-sum-exp accumulator with a deterministic order:
// terms are folded in the order supplied, so shard-and-merge reductions are
// bit-stable for a fixed shard layout.
class SignedLogAccumulator {
public:
    void add(double log_abs, int sign);
    void add_log(double log_abs) { add(log_abs, 1); }
    void merge(const SignedLogAccumulator& other);
    // (log_abs, sign) of the accumulated total
    double log_abs() const;
    int sign() const;
    bool is_zero() const { return sign() == 0; }

private:
    double max_log_ = kNegInf;
    double scaled_sum_ = 0.0;  // sum of sign * exp(log - max_log_)
};

// plain log-sum-exp over nonnegative-weight logs
double log_sum_exp(std::span<const double> logs);

// Central-difference derivatives with Richardson extrapolation (3 levels,
// O(h^6) truncation). h0 defaults keep the rounding floor near 1e-11 even
// for O(1) functions, which plain h=1e-3 stencils cannot reach in doubles.
template <typename F>
double first_derivative(F&& f, double x, double h0 = 1e-2) {
    double d[3];
    double h = h0;
    for (int k = 0; k < 3; ++k, h *= 0.5)
        d[k] = (f(x + h) - f(x - h)) / (2.0 * h);
    double r0 = (4.0 * d[1] - d[0]) / 3.0;
    double r1 = (4.0 * d[2] - d[1]) / 3.0;
    return (16.0 * r1 - r0) / 15.0;
}

template <typename F>
double second_derivative(F&& f, double x, double h0 = 4e-2) {
    const double f0 = f(x);
    double d[3];
    double h = h0;
    for (int k = 0; k < 3; ++k, h *= 0.5)
        d[k] = (f(x + h) - 2.0 * f0 + f(x - h)) / (h * h);
    double r0 = (4.0 * d[1] - d[0]) / 3.0;
    double r1 = (4.0 * d[2] - d[1]) / 3.0;
    return (16.0 * r1 - r0) / 15.0;
}

// regularized incomplete gamma P(a,x) and Q(a,x) = 1 - P(a,x)
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// upper tail of the chi-square law with df degrees of freedom
double chi_square_sf(double stat, double df);

double normal_cdf(double x);

}  // namespace anneal
