#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "stacy/asymptotics.hpp"
#include "stacy/model.hpp"
#include "stacy/priors.hpp"
#include "stacy/propriety.hpp"
#include "stacy/quadrature.hpp"
#include "stacy/rng.hpp"

// Independent numerical verification of the decision engine: truncated
// quadrature of the posterior normalizing constant over a ladder of growing
// domains, a convergence/divergence diagnosis, and random-walk Metropolis
// sampling for posteriors the engine certifies as Proper.
//
// All parameter integrals run in log coordinates (u = e^t): the integrands
// concentrate on multiplicative scales, and a doubling-T ladder then shows
// divergence as near-linear growth of the log-domain tail.
//
// When pi(mu) = mu^k exactly (every catalog prior has k = -1) the inner mu
// integral reduces analytically to
//     int_0^inf mu^{n a f + k} exp(-mu^a S_a) dmu
//         = (1/a) Gamma(n f + (k+1)/a) S_a^{-(n f + (k+1)/a)},
// removing one dimension. The full 3D path is kept for cross-checks and
// custom priors.

namespace stacy::oracle {

using priors::PriorSpec;
using priors::Scope;

struct ScopeSpec {
    Scope scope = Scope::General;
    double fixed_value = 0.0;  // alpha for AlphaKnown, phi for PhiKnown

    static ScopeSpec general() { return {Scope::General, 0.0}; }
    static ScopeSpec alpha_known(double alpha) { return {Scope::AlphaKnown, alpha}; }
    static ScopeSpec phi_known(double phi) { return {Scope::PhiKnown, phi}; }
};

struct LadderConfig {
    std::vector<double> domains;    // T values; integration over [1/T, T]^dim
    double rel_tol = 1e-6;          // per-level quadrature tolerance
    double error_budget = 0.10;     // quadrature-failure threshold (rel err of value)

    // The ladder tops out at 2^22: proper posteriors with the slowest
    // observed tail (~T^-1/2) drop below the convergence increment there,
    // while log-divergent cases (value ~ ln T) still show tail slope
    // 1/ln T ~ 0.065, above the divergence threshold.
    static LadderConfig defaults() {
        LadderConfig c;
        for (int e = 4; e <= 22; ++e) c.domains.push_back(std::pow(2.0, e));
        return c;
    }
};

struct TruncationLadder {
    std::vector<double> domains;    // T per level
    std::vector<double> log_value;  // log-domain integral estimate per level
    std::vector<double> rel_err;    // quadrature error estimate per level
};

enum class DiagnosisStatus { Converging, Diverging, Inconclusive };

inline const char* to_string(DiagnosisStatus s) {
    switch (s) {
        case DiagnosisStatus::Converging: return "Converging";
        case DiagnosisStatus::Diverging: return "Diverging";
        case DiagnosisStatus::Inconclusive: return "Inconclusive";
    }
    return "?";
}

struct Diagnosis {
    DiagnosisStatus status = DiagnosisStatus::Inconclusive;
    double tail_slope = 0.0;  // d(log value)/d(log T) over the last levels
};

struct DiagnosisConfig {
    double converge_increment = 1e-3;    // last relative increment below this
    double diverge_slope = 0.05;         // tail slope at or above this
    double increment_slack = 1.25;       // "decreasing increments" tolerance factor
    int tail_levels = 4;
};

namespace detail {

inline void require_scope_value(const ScopeSpec& s) {
    if (s.scope != Scope::General && !(std::isfinite(s.fixed_value) && s.fixed_value > 0.0))
        throw std::domain_error("ScopeSpec: fixed parameter value must be a finite positive real");
}

inline double log_phi_factor(const PriorSpec& spec, double phi) {
    const double f = spec.phi_factor(phi);
    if (!(f > 0.0) || !std::isfinite(f))
        throw std::domain_error("oracle: phi_factor must be finite positive on the domain");
    return std::log(f);
}

// Reduced integrand pieces; q(alpha) handles n = 1 and degenerate data
// (where it is constant) without special cases.
struct ReducedProblem {
    const Dataset& data;
    const PriorSpec& spec;
    double n;

    // log of the analytically reduced mu integral at (phi, alpha), k = -1:
    //   -log(alpha) + lgamma(n phi) - n phi q(alpha), dropping x-only factors
    // and folding S_alpha^{-n phi} into q(alpha).
    double log_mu_reduced(double phi, double alpha) const {
        return -std::log(alpha) + specfun::log_gamma(n * phi) -
               n * phi * asymptotics::detail::q_kernel(data, alpha);
    }
};

}  // namespace detail

// Pointwise check target: the analytic mu reduction at (phi, alpha) for a
// pure-power mu prior mu^k. Exposed for the oracle's own validation tests.
inline double log_mu_integral_reduced(const Dataset& data, double phi, double alpha, double k) {
    const double n = static_cast<double>(data.n());
    const double c = (k + 1.0) / alpha;
    if (!(n * phi + c > 0.0))
        throw std::domain_error("log_mu_integral_reduced: Gamma argument must be positive");
    double log_s_alpha = -std::numeric_limits<double>::infinity();
    {
        double m = -std::numeric_limits<double>::infinity();
        for (double x : data.values()) m = std::max(m, alpha * std::log(x));
        double s = 0.0;
        for (double x : data.values()) s += std::exp(alpha * std::log(x) - m);
        log_s_alpha = m + std::log(s);
    }
    return -std::log(alpha) + specfun::log_gamma(n * phi + c) - (n * phi + c) * log_s_alpha;
}

// Per-level log-integral of the posterior normalizing constant (up to
// factors depending only on the data), reduced over mu.
inline TruncationLadder integrate_norm_const(const Dataset& data, const PriorSpec& spec,
                                             const ScopeSpec& scope,
                                             const LadderConfig& config = LadderConfig::defaults()) {
    detail::require_scope_value(scope);
    if (spec.mu_exponent != -1.0)
        throw std::invalid_argument(
            "integrate_norm_const: reduced path requires mu exponent -1; use the 3D path");
    if (data.n() >= 2 && data.degenerate() && scope.scope != Scope::AlphaKnown)
        throw std::domain_error("integrate_norm_const: degenerate data (n >= 2, all equal)");
    const double n = static_cast<double>(data.n());
    const double q_exp = spec.alpha_exponent.value_or(0.0);
    detail::ReducedProblem prob{data, spec, n};

    TruncationLadder ladder;
    for (double T : config.domains) {
        const double L = std::log(T);
        quadrature::LogResult level{};
        if (scope.scope == Scope::AlphaKnown) {
            const double alpha = scope.fixed_value;
            level = quadrature::integrate_log(
                [&](double t_phi) {
                    const double phi = std::exp(t_phi);
                    return detail::log_phi_factor(spec, phi) + t_phi -
                           n * specfun::log_gamma(phi) + prob.log_mu_reduced(phi, alpha) +
                           std::log(alpha);  // drop the 1/alpha constant
                },
                -L, L, config.rel_tol);
        } else if (scope.scope == Scope::PhiKnown) {
            const double phi = scope.fixed_value;
            level = quadrature::integrate_log(
                [&](double t_alpha) {
                    const double alpha = std::exp(t_alpha);
                    return q_exp * t_alpha + n * t_alpha + t_alpha +
                           prob.log_mu_reduced(phi, alpha);
                },
                -L, L, config.rel_tol);
        } else {
            double inner_err = 0.0;
            level = quadrature::integrate_log(
                [&](double t_alpha) {
                    const double alpha = std::exp(t_alpha);
                    const auto inner = quadrature::integrate_log(
                        [&](double t_phi) {
                            const double phi = std::exp(t_phi);
                            return detail::log_phi_factor(spec, phi) + t_phi -
                                   n * specfun::log_gamma(phi) +
                                   prob.log_mu_reduced(phi, alpha);
                        },
                        -L, L, config.rel_tol);
                    inner_err = std::max(inner_err, inner.rel_error);
                    return q_exp * t_alpha + n * t_alpha + t_alpha + inner.log_value;
                },
                -L, L, config.rel_tol);
            level.rel_error += inner_err;
        }
        if (level.rel_error > config.error_budget)
            throw std::runtime_error("integrate_norm_const: quadrature error exceeds 10% of value");
        ladder.domains.push_back(T);
        ladder.log_value.push_back(level.log_value);
        ladder.rel_err.push_back(level.rel_error);
    }
    return ladder;
}

// Full 3D quadrature of d(x) with phi and alpha truncated to [1/T, T], no
// analytic mu reduction. The mu integral runs over its full effective support
// (an adaptive window around its peak), matching the reduced path, where mu is
// integrated exactly over (0, inf). Used to cross-check the reduced path.
inline double integrate_norm_const_3d(const Dataset& data, const PriorSpec& spec, double T,
                                      double rel_tol = 1e-8) {
    const double n = static_cast<double>(data.n());
    const double q_exp = spec.alpha_exponent.value_or(0.0);
    const double L = std::log(T);
    const double P = data.sum_log();
    const auto res = quadrature::integrate_log(
        [&](double t_alpha) {
            const double alpha = std::exp(t_alpha);
            double log_s_alpha;
            {
                double m = -std::numeric_limits<double>::infinity();
                for (double x : data.values()) m = std::max(m, alpha * std::log(x));
                double s = 0.0;
                for (double x : data.values()) s += std::exp(alpha * std::log(x) - m);
                log_s_alpha = m + std::log(s);
            }
            const auto mid = quadrature::integrate_log(
                [&](double t_phi) {
                    const double phi = std::exp(t_phi);
                    // In u = alpha*(t_mu - t_star), the exponent relative to its
                    // peak is n*phi*(u - e^u + 1); the window below keeps the
                    // discarded tails under e^-745 of the peak.
                    const double t_star = (std::log(n * phi) - log_s_alpha) / alpha;
                    const double c = 760.0;
                    const double u_lo = -1.0 - c / (n * phi);
                    const double u_hi =
                        std::log1p(c / (n * phi)) + std::sqrt(2.0 * c / (n * phi)) + 1.0;
                    const auto inner = quadrature::integrate_log(
                        [&](double t_mu) {
                            return (n * alpha * phi - 1.0) * t_mu + t_mu -
                                   std::exp(alpha * t_mu + log_s_alpha);
                        },
                        t_star + u_lo / alpha - 1.0, t_star + u_hi / alpha + 1.0, rel_tol);
                    return detail::log_phi_factor(spec, phi) + t_phi -
                           n * specfun::log_gamma(phi) + alpha * phi * P + inner.log_value;
                },
                -L, L, rel_tol);
            return (q_exp + n + 1.0) * t_alpha + mid.log_value;
        },
        -L, L, rel_tol);
    return res.log_value;
}

inline Diagnosis diagnose(const TruncationLadder& ladder,
                          const DiagnosisConfig& config = DiagnosisConfig{}) {
    const std::size_t m = ladder.log_value.size();
    if (m < 5) throw std::invalid_argument("diagnose: needs at least 5 ladder levels");

    // Relative increments 1 - V_{i-1}/V_i, computed in the log domain;
    // tiny negative values are quadrature noise.
    std::vector<double> inc(m, 0.0);
    for (std::size_t i = 1; i < m; ++i)
        inc[i] = std::max(0.0, 1.0 - std::exp(ladder.log_value[i - 1] - ladder.log_value[i]));

    const int tail = config.tail_levels;
    double sx = 0.0, sy = 0.0, sxy = 0.0, sxx = 0.0;
    for (std::size_t i = m - tail; i < m; ++i) {
        const double x = std::log(ladder.domains[i]);
        const double y = ladder.log_value[i];
        sx += x;
        sy += y;
        sxy += x * y;
        sxx += x * x;
    }
    const double slope = (tail * sxy - sx * sy) / (tail * sxx - sx * sx);

    Diagnosis d;
    d.tail_slope = slope;
    // Saturated ladders can show non-monotone quadrature noise; increments
    // below the convergence tolerance count as decreasing.
    auto dec = [&](std::size_t i) {
        return inc[i] <= inc[i - 1] * config.increment_slack + 1e-12 ||
               inc[i] < config.converge_increment;
    };
    const bool decreasing = dec(m - 1) && dec(m - 2);
    if (inc[m - 1] < config.converge_increment && decreasing)
        d.status = DiagnosisStatus::Converging;
    else if (slope >= config.diverge_slope)
        d.status = DiagnosisStatus::Diverging;
    else
        d.status = DiagnosisStatus::Inconclusive;
    return d;
}

// ---- Random-walk Metropolis on log-parameters ------------------------------

struct ChainConfig {
    long steps = 20000;
    long burn_in = 5000;
    std::uint64_t seed = 1;
    double initial_step = 0.5;
    long thin = 1;
    // Restricts the chain to a lower-dimensional slice by also fixing alpha
    // (useful to validate the sampler against closed-form conditionals).
    std::optional<double> pin_alpha;
};

struct ChainSample {
    double phi, mu, alpha, log_post;
};

struct ChainResult {
    std::vector<ChainSample> samples;
    double acceptance = 0.0;
    std::array<double, 3> step_sizes{};  // adapted (phi, mu, alpha) log-step sizes
};

// Unnormalized log-posterior; parameters fixed by the scope are held in theta.
inline double log_posterior(const Dataset& data, const PriorSpec& spec, const ParamVector& theta) {
    return priors::log_eval_prior(spec, theta) + log_likelihood(data, theta);
}

// The propriety gate is mandatory: chains only run for posteriors the
// decision engine certifies as Proper.
inline ChainResult mcmc_sample(const Dataset& data, const PriorSpec& spec, const ScopeSpec& scope,
                               const ChainConfig& config = ChainConfig{}) {
    detail::require_scope_value(scope);
    if (!spec.declared)
        throw std::domain_error("mcmc_sample: spec carries no exponents for the propriety gate");
    const auto verdict =
        propriety::decide(scope.scope, *spec.declared, static_cast<int>(data.n()));
    if (verdict.status != propriety::Status::Proper)
        throw std::domain_error(std::string("mcmc_sample: propriety gate: verdict is ") +
                                propriety::to_string(verdict.status) + " (" + verdict.theorem + ")");

    // Active coordinates in (phi, mu, alpha) order.
    std::array<bool, 3> active = {true, true, true};
    ParamVector theta{1.0, 1.0, 1.0};
    if (scope.scope == Scope::AlphaKnown) {
        active[2] = false;
        theta.alpha = scope.fixed_value;
    } else if (scope.scope == Scope::PhiKnown) {
        active[0] = false;
        theta.phi = scope.fixed_value;
    }
    if (config.pin_alpha) {
        if (!(*config.pin_alpha > 0.0))
            throw std::domain_error("mcmc_sample: pin_alpha must be positive");
        active[2] = false;
        theta.alpha = *config.pin_alpha;
    }
    // Moment-match a starting scale from the data.
    theta.mu = 1.0 / data.geometric_mean();

    std::array<double, 3> logt = {std::log(theta.phi), std::log(theta.mu), std::log(theta.alpha)};
    std::array<double, 3> step = {config.initial_step, config.initial_step, config.initial_step};
    auto to_theta = [&](const std::array<double, 3>& lt) {
        return ParamVector{std::exp(lt[0]), std::exp(lt[1]), std::exp(lt[2])};
    };
    // Target in log coordinates: posterior density times the Jacobian of the
    // active coordinates.
    auto log_target = [&](const std::array<double, 3>& lt) {
        const ParamVector t = to_theta(lt);
        double lp = log_posterior(data, spec, t);
        for (int i = 0; i < 3; ++i)
            if (active[i]) lp += lt[i];
        return lp;
    };

    CounterRng rng(config.seed);
    double current = log_target(logt);
    std::array<long, 3> accepted{}, proposed{};
    std::array<long, 3> window_accepted{}, window_proposed{};
    long kept_accepted = 0, kept_proposed = 0;
    ChainResult out;
    out.samples.reserve(static_cast<std::size_t>((config.steps) / config.thin + 1));

    const long total = config.burn_in + config.steps;
    for (long s = 0; s < total; ++s) {
        for (int i = 0; i < 3; ++i) {
            if (!active[i]) continue;
            const double old = logt[i];
            logt[i] = old + step[i] * rng.normal();
            const double cand = log_target(logt);
            ++proposed[i];
            ++window_proposed[i];
            const bool accept = std::log(rng.uniform()) < cand - current;
            if (accept) {
                current = cand;
                ++accepted[i];
                ++window_accepted[i];
            } else {
                logt[i] = old;
            }
            if (s >= config.burn_in) {
                ++kept_proposed;
                kept_accepted += accept ? 1 : 0;
            }
        }
        // Step-size adaptation toward 25-45% acceptance, burn-in only.
        if (s < config.burn_in && (s + 1) % 100 == 0) {
            for (int i = 0; i < 3; ++i) {
                if (!active[i] || window_proposed[i] == 0) continue;
                const double rate =
                    static_cast<double>(window_accepted[i]) / window_proposed[i];
                if (rate < 0.25) step[i] /= 1.3;
                else if (rate > 0.45) step[i] *= 1.3;
                window_accepted[i] = window_proposed[i] = 0;
            }
        }
        if (s >= config.burn_in && (s - config.burn_in) % config.thin == 0) {
            const ParamVector t = to_theta(logt);
            out.samples.push_back({t.phi, t.mu, t.alpha, current});
        }
    }
    out.acceptance = kept_proposed > 0
                         ? static_cast<double>(kept_accepted) / static_cast<double>(kept_proposed)
                         : 0.0;
    out.step_sizes = step;
    return out;
}

}  // namespace stacy::oracle
