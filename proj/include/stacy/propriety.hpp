#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "stacy/priors.hpp"

// The decision engine: a total procedure from (exponent tuple, n, scope) to
// a posterior-propriety and moment-finiteness verdict.
//
// Scope rules, for two-sided exponents:
//   alpha known : proper  iff  (k = -1 and n > -r0) or (k > -1 and n > -r0-1);
//                 when proper all (phi, mu) posterior moments are finite.
//   phi known   : proper  iff  k = -1 and n > -q0; when proper all alpha
//                 moments are finite and the posterior mean of mu is not.
//   general     : proper  iff  k = -1, q_inf < r0, 2 r_inf + 1 < q0,
//                 n > -q0 and n > -r0; the (q,r,j) moment is finite iff
//                 j = 0 and 2(r + r_inf) + 1 - q0 < q < r + r0 - q_inf.
//
// One-sided declarations cannot support both directions of the iff, so an
// otherwise-Proper verdict is downgraded to Undetermined for any one-sided
// tuple, and an Improper verdict additionally requires lower bounds.

namespace stacy::propriety {

using priors::AsymptoticExponents;
using priors::BoundKind;
using priors::Scope;

enum class Status { Proper, Improper, Undetermined };

inline const char* to_string(Status s) {
    switch (s) {
        case Status::Proper: return "Proper";
        case Status::Improper: return "Improper";
        case Status::Undetermined: return "Undetermined";
    }
    return "?";
}

struct MomentReport {
    Scope scope = Scope::General;
    // AlphaKnown scope:
    bool all_moments_finite = false;
    // PhiKnown scope:
    bool alpha_moments_finite = false;
    bool mu_mean_finite = false;
    // General scope: exponents kept so moment queries can evaluate
    // the double inequality.
    std::optional<AsymptoticExponents> exponents;
};

struct ProprietyVerdict {
    Status status = Status::Undetermined;
    std::string theorem;     // rule applied
    std::optional<int> min_n;  // smallest n giving Proper, if any n does
    MomentReport moments;
    std::string provenance;  // how the exponents were established
};

namespace detail {

// Smallest integer n with n > threshold, clamped to >= 1.
inline int min_n_strict(double threshold) {
    const int m = static_cast<int>(std::floor(threshold)) + 1;
    return m < 1 ? 1 : m;
}

inline ProprietyVerdict undetermined(Scope scope, std::string why) {
    ProprietyVerdict v;
    v.status = Status::Undetermined;
    v.theorem = std::move(why);
    v.moments.scope = scope;
    return v;
}

// Applies the one-sided downgrade policy to a tentatively decided verdict.
inline ProprietyVerdict apply_bound_policy(ProprietyVerdict v, BoundKind bound) {
    if (bound == BoundKind::TwoSided) return v;
    if (v.status == Status::Proper ||
        (v.status == Status::Improper && bound != BoundKind::LowerOnly)) {
        v.status = Status::Undetermined;
        v.theorem = "one-sided exponent declaration: " + v.theorem +
                    " would apply, but requires the opposite bound direction";
        v.min_n = std::nullopt;
        v.moments = MomentReport{v.moments.scope};
    }
    return v;
}

}  // namespace detail

inline ProprietyVerdict decide_alpha_known(const AsymptoticExponents& e, int n) {
    if (n < 1) throw std::invalid_argument("decide_alpha_known: n must be >= 1");
    if (!e.k || !e.r0)
        return detail::undetermined(Scope::AlphaKnown, "k and r0 required for the alpha-known rules");
    const double k = *e.k, r0 = *e.r0;
    ProprietyVerdict v;
    v.moments.scope = Scope::AlphaKnown;
    const bool proper = (k == -1.0 && n > -r0) || (k > -1.0 && n > -r0 - 1.0);
    if (proper) {
        v.status = Status::Proper;
        v.theorem = "alpha-known sufficiency (k = -1, n > -r0 | k > -1, n > -r0-1)";
        v.min_n = detail::min_n_strict(k == -1.0 ? -r0 : -r0 - 1.0);
        v.moments.all_moments_finite = true;
    } else {
        v.status = Status::Improper;
        if (k < -1.0) {
            v.theorem = "alpha-known impropriety, case k < -1";
        } else if (k == -1.0) {
            v.theorem = "alpha-known impropriety, case k = -1 with n <= -r0";
            v.min_n = detail::min_n_strict(-r0);
        } else {
            v.theorem = "alpha-known impropriety, case k > -1 with n <= -r0-1";
            v.min_n = detail::min_n_strict(-r0 - 1.0);
        }
    }
    return detail::apply_bound_policy(std::move(v), e.bound);
}

inline ProprietyVerdict decide_phi_known(const AsymptoticExponents& e, int n) {
    if (n < 1) throw std::invalid_argument("decide_phi_known: n must be >= 1");
    if (!e.k || !e.q0)
        return detail::undetermined(Scope::PhiKnown, "k and q0 required for the phi-known rules");
    const double k = *e.k, q0 = *e.q0;
    ProprietyVerdict v;
    v.moments.scope = Scope::PhiKnown;
    if (k == -1.0 && n > -q0) {
        v.status = Status::Proper;
        v.theorem = "phi-known sufficiency (k = -1, n > -q0)";
        v.min_n = detail::min_n_strict(-q0);
        v.moments.alpha_moments_finite = true;
        v.moments.mu_mean_finite = false;
    } else {
        v.status = Status::Improper;
        if (k < -1.0)
            v.theorem = "phi-known impropriety, case k < -1";
        else if (k > -1.0)
            v.theorem = "phi-known impropriety, case k > -1";
        else {
            v.theorem = "phi-known impropriety, case k = -1 with n <= -q0";
            v.min_n = detail::min_n_strict(-q0);
        }
    }
    return detail::apply_bound_policy(std::move(v), e.bound);
}

inline ProprietyVerdict decide_general(const AsymptoticExponents& e, int n) {
    if (n < 1) throw std::invalid_argument("decide_general: n must be >= 1");
    if (!e.k || !e.q0 || !e.q_inf || !e.r0 || !e.r_inf)
        return detail::undetermined(Scope::General, "all five exponents required for the general rules");
    const double k = *e.k, q0 = *e.q0, qi = *e.q_inf, r0 = *e.r0, ri = *e.r_inf;
    ProprietyVerdict v;
    v.moments.scope = Scope::General;
    const bool structural = (k == -1.0) && (qi < r0) && (2.0 * ri + 1.0 < q0);
    if (structural && n > -q0 && n > -r0) {
        v.status = Status::Proper;
        v.theorem = "general iff rule (k = -1, q_inf < r0, 2 r_inf + 1 < q0, n > -q0, n > -r0)";
        v.min_n = std::max(detail::min_n_strict(-q0), detail::min_n_strict(-r0));
        v.moments.exponents = e;
    } else {
        v.status = Status::Improper;
        if (k != -1.0)
            v.theorem = "general impropriety, k != -1";
        else if (qi >= r0)
            v.theorem = "general impropriety, q_inf >= r0";
        else if (2.0 * ri + 1.0 >= q0)
            v.theorem = "general impropriety, 2 r_inf + 1 >= q0";
        else {
            v.theorem = "general impropriety, n <= max(-q0, -r0)";
            v.min_n = std::max(detail::min_n_strict(-q0), detail::min_n_strict(-r0));
        }
    }
    return detail::apply_bound_policy(std::move(v), e.bound);
}

// Finiteness of the posterior moment E[alpha^q phi^r mu^j] in the general
// scope, given a Proper posterior for the base prior.
inline bool moment_finite_general(const AsymptoticExponents& e, int n, int q, int r, int j) {
    if (q < 0 || r < 0 || j < 0)
        throw std::invalid_argument("moment_finite_general: q, r, j must be non-negative integers");
    const ProprietyVerdict base = decide_general(e, n);
    if (base.status != Status::Proper)
        throw std::domain_error("moment_finite_general: posterior not Proper, moments undefined");
    if (j != 0) return false;
    const double q0 = *e.q0, qi = *e.q_inf, r0 = *e.r0, ri = *e.r_inf;
    return 2.0 * (r + ri) + 1.0 - q0 < static_cast<double>(q) &&
           static_cast<double>(q) < r + r0 - qi;
}

inline ProprietyVerdict decide(Scope scope, const AsymptoticExponents& e, int n) {
    switch (scope) {
        case Scope::General: return decide_general(e, n);
        case Scope::AlphaKnown: return decide_alpha_known(e, n);
        case Scope::PhiKnown: return decide_phi_known(e, n);
    }
    throw std::logic_error("decide: unreachable");
}

}  // namespace stacy::propriety
