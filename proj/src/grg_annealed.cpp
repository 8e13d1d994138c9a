#include "anneal/grg_annealed.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "anneal/numerics.hpp"
#include "anneal/parallel.hpp"

namespace anneal {

double grg_edge_prob_raw(const WeightSequence& w, int i, int j);  // graph_models.cpp

std::pair<double, double> pair_coupling(double p, double beta) {
    const double up = std::exp(beta) * p + 1.0 - p;
    const double dn = std::exp(-beta) * p + 1.0 - p;
    return {0.5 * (std::log(up) - std::log(dn)), 0.5 * (std::log(up) + std::log(dn))};
}

EffectiveCouplings::EffectiveCouplings(const WeightSequence& w, double beta) : n_(w.size()) {
    if (beta < 0.0) throw std::invalid_argument("EffectiveCouplings: beta must be >= 0");
    m_.assign(static_cast<size_t>(n_) * n_, 0.0);
    diag_.resize(static_cast<size_t>(n_));
    std::vector<double> row_logc(static_cast<size_t>(n_), 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16) num_threads(max_threads())
#endif
    for (int i = 0; i < n_; ++i) {
        double acc = 0.0;
        for (int j = i + 1; j < n_; ++j) {
            const auto [bij, logc] = pair_coupling(grg_edge_prob_raw(w, i, j), beta);
            m_[static_cast<size_t>(i) * n_ + j] = bij;
            m_[static_cast<size_t>(j) * n_ + i] = bij;
            acc += logc;
        }
        row_logc[static_cast<size_t>(i)] = acc;
        const double wii = w.weight(i) * w.weight(i);
        diag_[static_cast<size_t>(i)] = pair_coupling(wii / (w.ell() + wii), beta).first;
    }
    double g2 = 0.0;
    for (int i = 0; i < n_; ++i) g2 += row_logc[static_cast<size_t>(i)] - 0.5 * diag_[static_cast<size_t>(i)];
    log_g2_ = g2;
}

double log_g2(const WeightSequence& w, double beta) {
    const int n = w.size();
    std::vector<double> row(static_cast<size_t>(n), 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16) num_threads(max_threads())
#endif
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = i + 1; j < n; ++j)
            acc += pair_coupling(grg_edge_prob_raw(w, i, j), beta).second;
        const double wii = w.weight(i) * w.weight(i);
        acc -= 0.5 * pair_coupling(wii / (w.ell() + wii), beta).first;
        row[static_cast<size_t>(i)] = acc;
    }
    double g2 = 0.0;
    for (double v : row) g2 += v;  // fixed order
    return g2;
}

namespace {

// scale c = sqrt(sinh(beta)/E[W]); the map is z -> E[tanh(c W z + B) c W]
double coupling_scale(const AnnealedGrgModel& m) {
    return std::sqrt(std::sinh(m.beta) / m.weights.mean());
}

double map_H(const AnnealedGrgModel& m, double c, double z) {
    const auto& w = m.weights.weights();
    double acc = 0.0;
    for (double wi : w) acc += std::tanh(c * wi * z + m.B) * c * wi;
    return acc / static_cast<double>(w.size());
}

double big_F(const AnnealedGrgModel& m, double c, double z) {
    const auto& w = m.weights.weights();
    double acc = 0.0;
    for (double wi : w) acc += std::log(std::cosh(c * wi * z + m.B));
    return acc / static_cast<double>(w.size());
}

// bisection for the root of z - H(z) in [lo, hi], assuming a sign change;
// runs to near machine precision so the residual beats any sensible tol
double bisect_root(const AnnealedGrgModel& m, double c, double lo, double hi) {
    for (int it = 0; it < 200 && hi - lo > 1e-16 * (1.0 + std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid - map_H(m, c, mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double cw_objective(const AnnealedGrgModel& model, double z) {
    return big_F(model, coupling_scale(model), z) - 0.5 * z * z;
}

double fixed_point_map(const AnnealedGrgModel& model, double z) {
    return map_H(model, coupling_scale(model), z);
}

FixedPointResult solve_fixed_point(const AnnealedGrgModel& model, double tol, long long max_iter) {
    if (model.beta < 0.0) throw std::invalid_argument("solve_fixed_point: beta must be >= 0");
    FixedPointResult out;
    const double c = coupling_scale(model);
    if (std::sinh(model.beta) == 0.0) return out;  // map is identically zero

    const double upper = c * model.weights.mean() + 1.0;  // H is bounded by c E[W]

    if (model.B == 0.0) {
        if (std::sinh(model.beta) * model.weights.nu() <= 1.0) return out;  // z* = 0
        // supercritical: positive root; find lo with H(lo) > lo
        double lo = upper;
        while (lo > 1e-300 && map_H(model, c, lo) <= lo) lo *= 0.5;
        out.z_star = bisect_root(model, c, lo, upper);
        out.residual = std::abs(out.z_star - map_H(model, c, out.z_star));
        out.branch = FixedPointBranch::positive;
        return out;
    }

    // B != 0: damped iteration from H(0), monotone for the concave branch
    double z = map_H(model, c, 0.0);
    long long it = 0;
    for (; it < max_iter; ++it) {
        const double hz = map_H(model, c, z);
        const double next = 0.5 * z + 0.5 * hz;
        if (std::abs(z - hz) <= tol) break;
        z = next;
    }
    out.iterations = it;
    out.residual = std::abs(z - map_H(model, c, z));
    if (out.residual > tol) {
        // bisection fallback on the bracket containing the stable root
        if (model.B > 0.0)
            z = bisect_root(model, c, 0.0, upper);
        else
            z = -bisect_root(AnnealedGrgModel{model.weights, model.beta, -model.B}, c, 0.0, upper);
        out.residual = std::abs(z - map_H(model, c, z));
        out.converged = out.residual <= tol;
    }
    out.z_star = z;
    out.branch = z == 0.0 ? FixedPointBranch::symmetric_zero
                          : (z > 0.0 ? FixedPointBranch::positive : FixedPointBranch::negative);
    return out;
}

double alpha_n(const WeightSequence& w, double beta) {
    return log_g2(w, beta) / static_cast<double>(w.size());
}

double annealed_pressure_given_alpha(const AnnealedGrgModel& model, double alpha) {
    const auto fp = solve_fixed_point(model);
    if (!fp.converged)
        throw std::runtime_error("annealed_pressure: fixed point did not converge");
    const double c = coupling_scale(model);
    return std::log(2.0) + alpha + big_F(model, c, fp.z_star) - 0.5 * fp.z_star * fp.z_star;
}

double annealed_pressure(const AnnealedGrgModel& model) {
    return annealed_pressure_given_alpha(model, alpha_n(model.weights, model.beta));
}

MagnetizationResult annealed_magnetization(const AnnealedGrgModel& model) {
    const auto fp = solve_fixed_point(model);
    const double c = coupling_scale(model);
    const auto& w = model.weights.weights();
    double acc = 0.0;
    for (double wi : w) acc += std::tanh(c * wi * fp.z_star + model.B);
    const bool unique = uniqueness_check(model.beta, model.B, model.weights.nu());
    return {acc / static_cast<double>(w.size()), unique};
}

SusceptibilityResult annealed_susceptibility(const AnnealedGrgModel& model) {
    SusceptibilityResult out;
    out.ill_conditioned = model.B == 0.0 &&
                          std::abs(std::sinh(model.beta) * model.weights.nu() - 1.0) < 1e-3;
    out.value = first_derivative(
        [&](double b) {
            return annealed_magnetization(AnnealedGrgModel{model.weights, model.beta, b}).value;
        },
        model.B, 1e-2);
    return out;
}

CriticalBetas critical_betas(double nu) {
    if (!(nu > 0.0)) throw std::invalid_argument("critical_betas: nu must be > 0");
    CriticalBetas out;
    out.annealed = std::asinh(1.0 / nu);
    out.quenched = nu <= 1.0 ? std::numeric_limits<double>::infinity() : std::atanh(1.0 / nu);
    return out;
}

bool uniqueness_check(double beta, double B, double nu) {
    if (B != 0.0) return beta >= 0.0;
    return beta > 0.0 && beta < std::asinh(1.0 / nu);
}

}  // namespace anneal
