// Signed log-domain scalar: sign and log-magnitude of a real number.
// Partition functions grow like lambda_+^N, which overflows doubles past
// N ~ 700 at moderate beta, so all Z-like quantities are carried here.
#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace anneal {

class LogValue {
public:
    // zero by default
    LogValue() : log_abs_(-std::numeric_limits<double>::infinity()), sign_(0) {}

    static LogValue from_value(double x) {
        LogValue v;
        if (x == 0.0) return v;
        v.sign_ = x > 0.0 ? 1 : -1;
        v.log_abs_ = std::log(std::abs(x));
        return v;
    }

    static LogValue from_log(double log_abs, int sign = 1) {
        LogValue v;
        if (sign == 0 || log_abs == -std::numeric_limits<double>::infinity()) return v;
        v.sign_ = sign > 0 ? 1 : -1;
        v.log_abs_ = log_abs;
        return v;
    }

    static LogValue zero() { return LogValue(); }
    static LogValue one() { return from_log(0.0, 1); }

    bool is_zero() const { return sign_ == 0; }
    int sign() const { return sign_; }
    double log_abs() const { return log_abs_; }

    // log of a positive value; throws if the value is not > 0
    double log() const {
        if (sign_ <= 0) throw std::domain_error("LogValue::log: value is not positive");
        return log_abs_;
    }

    double to_double() const {
        if (sign_ == 0) return 0.0;
        return sign_ * std::exp(log_abs_);
    }

    LogValue operator*(const LogValue& o) const {
        if (sign_ == 0 || o.sign_ == 0) return LogValue();
        return from_log(log_abs_ + o.log_abs_, sign_ * o.sign_);
    }

    LogValue operator/(const LogValue& o) const {
        if (o.sign_ == 0) throw std::domain_error("LogValue: division by zero");
        if (sign_ == 0) return LogValue();
        return from_log(log_abs_ - o.log_abs_, sign_ * o.sign_);
    }

    // signed log-sum-exp; monotone-safe (no overflow for any operand sizes)
    LogValue operator+(const LogValue& o) const {
        if (sign_ == 0) return o;
        if (o.sign_ == 0) return *this;
        const LogValue& big = (log_abs_ >= o.log_abs_) ? *this : o;
        const LogValue& small = (log_abs_ >= o.log_abs_) ? o : *this;
        const double d = small.log_abs_ - big.log_abs_;  // <= 0
        const double t = static_cast<double>(big.sign_) + small.sign_ * std::exp(d);
        if (t == 0.0) return LogValue();
        LogValue v;
        v.sign_ = t > 0.0 ? 1 : -1;
        v.log_abs_ = big.log_abs_ + std::log(std::abs(t));
        return v;
    }

    LogValue operator-(const LogValue& o) const { return *this + o.negate(); }

    LogValue negate() const {
        LogValue v = *this;
        v.sign_ = -v.sign_;
        return v;
    }

    LogValue pow_int(long long n) const {
        if (n == 0) return one();
        if (sign_ == 0) return LogValue();
        int s = (sign_ < 0 && (n % 2 != 0)) ? -1 : 1;
        return from_log(log_abs_ * static_cast<double>(n), s);
    }

    LogValue& operator+=(const LogValue& o) { return *this = *this + o; }
    LogValue& operator*=(const LogValue& o) { return *this = *this * o; }

private:
    double log_abs_;
    int sign_;  // -1, 0, +1
};

}  // namespace anneal
