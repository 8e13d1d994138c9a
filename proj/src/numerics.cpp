#include "anneal/numerics.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace anneal {

LogFactTable::LogFactTable(int max_n) {
    lf_.resize(static_cast<size_t>(std::max(max_n, 0)) + 1);
    for (size_t n = 0; n < lf_.size(); ++n)
        lf_[n] = std::lgamma(static_cast<double>(n) + 1.0);
}

double log_binomial(const LogFactTable& lf, long long n, long long k) {
    if (k == 0 && n >= -1) return 0.0;
    if (k < 0 || n < 0 || k > n) return kNegInf;
    return lf(static_cast<int>(n)) - lf(static_cast<int>(k)) - lf(static_cast<int>(n - k));
}

double log_double_factorial_odd(long long odd) {
    if (odd == -1) return 0.0;
    if (odd < -1 || odd % 2 == 0)
        throw std::invalid_argument("log_double_factorial_odd: argument must be odd and >= -1");
    // (2m-1)!! = (2m)! / (2^m m!)
    const double m = static_cast<double>((odd + 1) / 2);
    return std::lgamma(2.0 * m + 1.0) - m * std::log(2.0) - std::lgamma(m + 1.0);
}

double log_num_pairings(long long stubs) {
    if (stubs < 0 || stubs % 2 != 0)
        throw std::invalid_argument("log_num_pairings: stub count must be even");
    return log_double_factorial_odd(stubs - 1);
}

void SignedLogAccumulator::add(double log_abs, int sign) {
    if (sign == 0 || log_abs == kNegInf) return;
    if (log_abs <= max_log_) {
        scaled_sum_ += sign * std::exp(log_abs - max_log_);
    } else {
        scaled_sum_ = scaled_sum_ * std::exp(max_log_ - log_abs) + sign;
        max_log_ = log_abs;
    }
}

void SignedLogAccumulator::merge(const SignedLogAccumulator& other) {
    if (other.max_log_ == kNegInf) return;
    if (max_log_ == kNegInf) {
        *this = other;
        return;
    }
    if (other.max_log_ <= max_log_) {
        scaled_sum_ += other.scaled_sum_ * std::exp(other.max_log_ - max_log_);
    } else {
        scaled_sum_ = scaled_sum_ * std::exp(max_log_ - other.max_log_) + other.scaled_sum_;
        max_log_ = other.max_log_;
    }
}

double SignedLogAccumulator::log_abs() const {
    if (max_log_ == kNegInf || scaled_sum_ == 0.0) return kNegInf;
    return max_log_ + std::log(std::abs(scaled_sum_));
}

int SignedLogAccumulator::sign() const {
    if (max_log_ == kNegInf || scaled_sum_ == 0.0) return 0;
    return scaled_sum_ > 0.0 ? 1 : -1;
}

double log_sum_exp(std::span<const double> logs) {
    SignedLogAccumulator acc;
    for (double x : logs) acc.add_log(x);
    return acc.log_abs();
}

namespace {

// series expansion of P(a,x), valid for x < a+1
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < 500; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// continued fraction for Q(a,x), valid for x >= a+1 (modified Lentz)
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_p(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_p: bad arguments");
    if (x == 0.0) return 0.0;
    return (x < a + 1.0) ? gamma_p_series(a, x) : 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_q: bad arguments");
    if (x == 0.0) return 1.0;
    return (x < a + 1.0) ? 1.0 - gamma_p_series(a, x) : gamma_q_cf(a, x);
}

double chi_square_sf(double stat, double df) {
    if (stat <= 0.0) return 1.0;
    return gamma_q(df / 2.0, stat / 2.0);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace anneal
