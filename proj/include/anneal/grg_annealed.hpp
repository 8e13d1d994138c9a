// Inhomogeneous Curie-Weiss reduction of the annealed GRG Ising model:
// effective couplings beta_ij, the fixed point z*, pressure, magnetization,
// susceptibility, and the critical temperatures.
#pragma once

#include <utility>
#include <vector>

#include "anneal/weights.hpp"

namespace anneal {

// beta_ij = (1/2) log[(e^beta p + 1-p) / (e^{-beta} p + 1-p)],
// C_ij cosh(beta_ij) = p cosh(beta) + 1-p. Returns {beta_ij, log C_ij}.
std::pair<double, double> pair_coupling(double p, double beta);

// Dense coupling matrix for the exact annealed sampler plus the aggregate
// log G2(beta) = sum_{i<j} log C_ij - sum_i beta_ii / 2  (p_ii = w_i^2/(ell+w_i^2)).
class EffectiveCouplings {
public:
    EffectiveCouplings(const WeightSequence& w, double beta);

    int size() const { return n_; }
    double coupling(int i, int j) const { return m_[static_cast<size_t>(i) * n_ + j]; }
    const std::vector<double>& matrix() const { return m_; }  // n x n, zero diagonal
    double diag_coupling(int i) const { return diag_[static_cast<size_t>(i)]; }
    double log_g2() const { return log_g2_; }

private:
    int n_;
    std::vector<double> m_;
    std::vector<double> diag_;
    double log_g2_;
};

// log G2 without materializing the matrix (for pressure at large N)
double log_g2(const WeightSequence& w, double beta);

struct AnnealedGrgModel {
    WeightSequence weights;
    double beta;
    double B;
};

// F(z) - z^2/2 with F(z) = E[log cosh(sqrt(sinh(beta)/E[W]) W z + B)],
// expectations taken over the empirical weight law (exact finite sums)
double cw_objective(const AnnealedGrgModel& model, double z);

enum class FixedPointBranch { symmetric_zero, positive, negative };

struct FixedPointResult {
    double z_star = 0.0;
    long long iterations = 0;
    double residual = 0.0;  // |z - H_B(z)|
    FixedPointBranch branch = FixedPointBranch::symmetric_zero;
    bool converged = true;
};

// z = E[tanh(sqrt(sinh(beta)/E[W]) W z + B) sqrt(sinh(beta)/E[W]) W].
// B = 0 with sinh(beta) nu <= 1 returns z* = 0; B = 0 supercritical returns
// the positive root (the B -> 0+ branch) by bracketed bisection; B != 0 uses
// damped iteration with a bisection fallback.
FixedPointResult solve_fixed_point(const AnnealedGrgModel& model, double tol = 1e-12,
                                   long long max_iter = 100000);

// H_B(z), the fixed-point map itself (exposed for map-shape property checks)
double fixed_point_map(const AnnealedGrgModel& model, double z);

// finite-N surrogate of alpha(beta) = lim (1/N) log G2(beta)
double alpha_n(const WeightSequence& w, double beta);

// psi = log 2 + alpha_N(beta) + F(z*) - z*^2/2
double annealed_pressure(const AnnealedGrgModel& model);
double annealed_pressure_given_alpha(const AnnealedGrgModel& model, double alpha);

struct MagnetizationResult {
    double value;
    bool unique;  // false at (beta > beta_c^an, B = 0): value is the B->0+ branch
};

// M = E[tanh(sqrt(sinh(beta)/E[W]) W z* + B)]
MagnetizationResult annealed_magnetization(const AnnealedGrgModel& model);

struct SusceptibilityResult {
    double value;
    bool ill_conditioned;  // |sinh(beta) nu - 1| < 1e-3 at B = 0
};

// chi = d^2 psi / dB^2, evaluated as a Richardson-extrapolated central
// difference of the analytic magnetization (M = d psi / dB)
SusceptibilityResult annealed_susceptibility(const AnnealedGrgModel& model);

struct CriticalBetas {
    double annealed;  // asinh(1/nu)
    double quenched;  // atanh(1/nu), +inf for nu <= 1
};
CriticalBetas critical_betas(double nu);

// true iff B != 0 (with beta >= 0) or B = 0 with 0 < beta < asinh(1/nu)
bool uniqueness_check(double beta, double B, double nu);

}  // namespace anneal
