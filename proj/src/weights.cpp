#include "anneal/weights.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace anneal {

WeightSequence::WeightSequence(std::vector<double> weights) : w_(std::move(weights)) {
    if (w_.empty()) throw std::invalid_argument("WeightSequence: empty weight list");
    for (double w : w_) {
        if (!(w > 0.0) || !std::isfinite(w))
            throw std::invalid_argument("WeightSequence: weights must be strictly positive and finite");
        ell_ += w;
        m2_ += w * w;
    }
    mean_ = ell_ / static_cast<double>(w_.size());
    m2_ /= static_cast<double>(w_.size());
}

WeightSequence WeightSequence::constant(int n, double w) {
    if (n < 1) throw std::invalid_argument("WeightSequence::constant: n must be >= 1");
    return WeightSequence(std::vector<double>(static_cast<size_t>(n), w));
}

WeightSequence WeightSequence::powerlaw(int n, double tau, double w_min) {
    if (n < 1) throw std::invalid_argument("WeightSequence::powerlaw: n must be >= 1");
    if (!(tau > 1.0)) throw std::invalid_argument("WeightSequence::powerlaw: tau must be > 1");
    if (!(w_min > 0.0)) throw std::invalid_argument("WeightSequence::powerlaw: w_min must be > 0");
    std::vector<double> w(static_cast<size_t>(n));
    const double expo = 1.0 / (tau - 1.0);
    for (int i = 1; i <= n; ++i)
        w[static_cast<size_t>(i - 1)] = w_min * std::pow(static_cast<double>(n) / i, expo);
    WeightSequence seq(std::move(w));
    seq.tail_warning_ = tau <= 3.0;
    return seq;
}

WeightSequence WeightSequence::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("WeightSequence::from_file: cannot open " + path);
    std::vector<double> w;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        double x;
        if (!(ss >> x)) throw std::runtime_error("WeightSequence::from_file: bad line: " + line);
        w.push_back(x);
    }
    return WeightSequence(std::move(w));
}

DegreeSequence::DegreeSequence(std::vector<int> degrees) : d_(std::move(degrees)) {
    if (d_.empty()) throw std::invalid_argument("DegreeSequence: empty degree list");
    for (int d : d_) {
        if (d < 1) throw std::invalid_argument("DegreeSequence: degrees must be >= 1");
        ell_ += d;
        if (d == 1) ++n1_;
        if (d == 2) ++n2_;
    }
    if (ell_ % 2 != 0) throw std::invalid_argument("DegreeSequence: total degree must be even");
}

DegreeSequence DegreeSequence::constant(int n, int d) {
    if (n < 1) throw std::invalid_argument("DegreeSequence::constant: n must be >= 1");
    return DegreeSequence(std::vector<int>(static_cast<size_t>(n), d));
}

DegreeSequence DegreeSequence::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("DegreeSequence::from_file: cannot open " + path);
    std::vector<int> d;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        int x;
        if (!(ss >> x)) throw std::runtime_error("DegreeSequence::from_file: bad line: " + line);
        d.push_back(x);
    }
    return DegreeSequence(std::move(d));
}

}  // namespace anneal
