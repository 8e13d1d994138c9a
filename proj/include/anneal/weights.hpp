// Vertex weight and degree sequences with cached moments.
#pragma once

#include <string>
#include <vector>

namespace anneal {

class WeightSequence {
public:
    // all weights must be strictly positive
    explicit WeightSequence(std::vector<double> weights);

    static WeightSequence constant(int n, double w);
    // deterministic quantile sequence w_i = w_min * (N/i)^{1/(tau-1)}.
    // tau <= 3 is allowed (finite N stays valid) but the limiting second
    // moment diverges; callers can check tail_warning().
    static WeightSequence powerlaw(int n, double tau, double w_min);
    static WeightSequence from_file(const std::string& path);

    int size() const { return static_cast<int>(w_.size()); }
    const std::vector<double>& weights() const { return w_; }
    double weight(int i) const { return w_[static_cast<size_t>(i)]; }

    double ell() const { return ell_; }            // sum of weights
    double mean() const { return mean_; }          // E[W_N]
    double second_moment() const { return m2_; }   // E[W_N^2]
    double nu() const { return m2_ / mean_; }      // E[W_N^2]/E[W_N]

    bool tail_warning() const { return tail_warning_; }

private:
    std::vector<double> w_;
    double ell_ = 0.0;
    double mean_ = 0.0;
    double m2_ = 0.0;
    bool tail_warning_ = false;
};

class DegreeSequence {
public:
    // degrees must be >= 1; total degree must be even for pairing
    explicit DegreeSequence(std::vector<int> degrees);

    static DegreeSequence constant(int n, int d);
    static DegreeSequence from_file(const std::string& path);

    int size() const { return static_cast<int>(d_.size()); }
    const std::vector<int>& degrees() const { return d_; }
    int degree(int i) const { return d_[static_cast<size_t>(i)]; }

    long long ell() const { return ell_; }  // total degree = stub count
    int n1() const { return n1_; }          // count of degree-1 vertices
    int n2() const { return n2_; }          // count of degree-2 vertices

private:
    std::vector<int> d_;
    long long ell_ = 0;
    int n1_ = 0;
    int n2_ = 0;
};

}  // namespace anneal
