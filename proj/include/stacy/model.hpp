#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "stacy/rng.hpp"
#include "stacy/special_functions.hpp"

// The Stacy (generalized gamma) family:
//   f(x | phi, mu, alpha) = alpha mu^{alpha phi} x^{alpha phi - 1}
//                           exp(-(mu x)^alpha) / Gamma(phi),  x > 0,
// with density, log-likelihood, exact sampling, Fisher information and the
// named-subfamily resolution table.

namespace stacy {

struct ParamVector {
    double phi;    // shape
    double mu;     // scale rate (inverse data units)
    double alpha;  // power shape

    void validate() const {
        auto ok = [](double v) { return std::isfinite(v) && v > 0.0; };
        if (!ok(phi) || !ok(mu) || !ok(alpha))
            throw std::domain_error("ParamVector: phi, mu, alpha must be finite positive reals");
    }
};

class Dataset {
  public:
    explicit Dataset(std::vector<double> values) : values_(std::move(values)) {
        if (values_.empty()) throw std::domain_error("Dataset: needs at least one observation");
        sum_log_ = 0.0;
        max_ = values_.front();
        for (double v : values_) {
            if (!std::isfinite(v) || v <= 0.0)
                throw std::domain_error("Dataset: observations must be finite positive reals");
            sum_log_ += std::log(v);
            max_ = std::max(max_, v);
        }
        degenerate_ = std::all_of(values_.begin(), values_.end(),
                                  [&](double v) { return v == values_.front(); });
    }

    const std::vector<double>& values() const { return values_; }
    std::size_t n() const { return values_.size(); }
    double sum_log() const { return sum_log_; }
    double geometric_mean() const { return std::exp(sum_log_ / static_cast<double>(n())); }
    double max() const { return max_; }
    bool degenerate() const { return degenerate_; }

  private:
    std::vector<double> values_;
    double sum_log_ = 0.0;
    double max_ = 0.0;
    bool degenerate_ = false;
};

inline double log_pdf(double x, const ParamVector& t) {
    t.validate();
    if (!std::isfinite(x) || x <= 0.0) throw std::domain_error("log_pdf: x must be positive");
    const double lmx = std::log(t.mu) + std::log(x);
    return std::log(t.alpha) + (t.alpha * t.phi) * std::log(t.mu) +
           (t.alpha * t.phi - 1.0) * std::log(x) - std::exp(t.alpha * lmx) -
           specfun::log_gamma(t.phi);
}

inline double pdf(double x, const ParamVector& t) { return std::exp(log_pdf(x, t)); }

inline double log_likelihood(const Dataset& data, const ParamVector& t) {
    t.validate();
    const double n = static_cast<double>(data.n());
    double sum_pow = 0.0;
    for (double x : data.values()) sum_pow += std::exp(t.alpha * std::log(x));
    return n * std::log(t.alpha) - n * specfun::log_gamma(t.phi) +
           (t.alpha * t.phi - 1.0) * data.sum_log() + n * t.alpha * t.phi * std::log(t.mu) -
           std::exp(t.alpha * std::log(t.mu)) * sum_pow;
}

// Exact draw: G ~ Gamma(phi, 1)  =>  G^{1/alpha} / mu follows the family.
inline Dataset sample(const ParamVector& t, std::size_t count, std::uint64_t seed) {
    t.validate();
    if (count < 1) throw std::domain_error("sample: count must be >= 1");
    CounterRng rng(seed);
    std::vector<double> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double g = rng.gamma(t.phi);
        out.push_back(std::exp(std::log(g) / t.alpha) / t.mu);
    }
    return Dataset(std::move(out));
}

// Per-observation Fisher information. Parameter ordering is fixed as
// (alpha, mu, phi); see FisherIndex.
enum FisherIndex { kAlpha = 0, kMu = 1, kPhi = 2 };

inline std::array<std::array<double, 3>, 3> fisher_info(const ParamVector& t) {
    t.validate();
    const double psi = specfun::digamma(t.phi);
    const double psi1 = specfun::trigamma(t.phi);
    std::array<std::array<double, 3>, 3> I{};
    I[kAlpha][kAlpha] = (1.0 + 2.0 * psi + t.phi * psi1 + t.phi * psi * psi) / (t.alpha * t.alpha);
    I[kAlpha][kMu] = I[kMu][kAlpha] = (1.0 + t.phi * psi) / t.mu;
    I[kMu][kPhi] = I[kPhi][kMu] = -t.alpha / t.mu;
    I[kAlpha][kPhi] = I[kPhi][kAlpha] = -psi / t.alpha;
    I[kMu][kMu] = t.phi * t.alpha * t.alpha / (t.mu * t.mu);
    I[kPhi][kPhi] = psi1;
    return I;
}

// ---- Table-driven subfamily resolution ------------------------------------

enum class Subfamily {
    Exponential,
    Rayleigh,
    HalfNormal,
    MaxwellBoltzmann,
    ScaledChiSquare,
    ChiSquare,
    Weibull,
    GeneralizedHalfNormal,
    Gamma,
    Erlang,
    Nakagami,
    WilsonHilferty,
    FullStacy,
};

struct SubfamilyRequest {
    Subfamily name;
    std::optional<double> phi;
    std::optional<double> mu;
    std::optional<double> alpha;
    std::optional<long> n;  // integer shape for Erlang / (scaled) chi-square
};

namespace detail {

inline void reject_pinned(const char* who, bool supplied, const char* param) {
    if (supplied)
        throw std::invalid_argument(std::string(who) + ": parameter '" + param +
                                    "' is pinned by the subfamily and may not be supplied");
}

inline double require_free(const char* who, std::optional<double> v, const char* param) {
    if (!v)
        throw std::invalid_argument(std::string(who) + ": free parameter '" + param +
                                    "' must be supplied");
    return *v;
}

inline long require_integer_n(const char* who, std::optional<long> n) {
    if (!n || *n < 1)
        throw std::invalid_argument(std::string(who) + ": integer n >= 1 must be supplied");
    return *n;
}

}  // namespace detail

inline ParamVector resolve_subfamily(const SubfamilyRequest& req) {
    using detail::reject_pinned;
    using detail::require_free;
    using detail::require_integer_n;
    ParamVector t{};
    switch (req.name) {
        case Subfamily::Exponential:
            reject_pinned("Exponential", req.phi.has_value(), "phi");
            reject_pinned("Exponential", req.alpha.has_value(), "alpha");
            t = {1.0, require_free("Exponential", req.mu, "mu"), 1.0};
            break;
        case Subfamily::Rayleigh:
            reject_pinned("Rayleigh", req.phi.has_value(), "phi");
            reject_pinned("Rayleigh", req.alpha.has_value(), "alpha");
            t = {1.0, require_free("Rayleigh", req.mu, "mu"), 2.0};
            break;
        case Subfamily::HalfNormal:
            reject_pinned("HalfNormal", req.phi.has_value(), "phi");
            reject_pinned("HalfNormal", req.alpha.has_value(), "alpha");
            t = {0.5, require_free("HalfNormal", req.mu, "mu"), 2.0};
            break;
        case Subfamily::MaxwellBoltzmann:
            reject_pinned("MaxwellBoltzmann", req.phi.has_value(), "phi");
            reject_pinned("MaxwellBoltzmann", req.alpha.has_value(), "alpha");
            t = {1.5, require_free("MaxwellBoltzmann", req.mu, "mu"), 2.0};
            break;
        case Subfamily::ScaledChiSquare: {
            reject_pinned("ScaledChiSquare", req.phi.has_value(), "phi");
            reject_pinned("ScaledChiSquare", req.alpha.has_value(), "alpha");
            const long n = require_integer_n("ScaledChiSquare", req.n);
            t = {0.5 * static_cast<double>(n), require_free("ScaledChiSquare", req.mu, "mu"), 1.0};
            break;
        }
        case Subfamily::ChiSquare: {
            reject_pinned("ChiSquare", req.phi.has_value(), "phi");
            reject_pinned("ChiSquare", req.mu.has_value(), "mu");
            reject_pinned("ChiSquare", req.alpha.has_value(), "alpha");
            const long n = require_integer_n("ChiSquare", req.n);
            t = {0.5 * static_cast<double>(n), 2.0, 1.0};
            break;
        }
        case Subfamily::Weibull:
            reject_pinned("Weibull", req.phi.has_value(), "phi");
            t = {1.0, require_free("Weibull", req.mu, "mu"), require_free("Weibull", req.alpha, "alpha")};
            break;
        case Subfamily::GeneralizedHalfNormal:
            reject_pinned("GeneralizedHalfNormal", req.phi.has_value(), "phi");
            t = {2.0, require_free("GeneralizedHalfNormal", req.mu, "mu"),
                 require_free("GeneralizedHalfNormal", req.alpha, "alpha")};
            break;
        case Subfamily::Gamma:
            reject_pinned("Gamma", req.alpha.has_value(), "alpha");
            t = {require_free("Gamma", req.phi, "phi"), require_free("Gamma", req.mu, "mu"), 1.0};
            break;
        case Subfamily::Erlang: {
            reject_pinned("Erlang", req.phi.has_value(), "phi");
            const long n = require_integer_n("Erlang", req.n);
            t = {static_cast<double>(n), require_free("Erlang", req.mu, "mu"),
                 require_free("Erlang", req.alpha, "alpha")};
            break;
        }
        case Subfamily::Nakagami:
            reject_pinned("Nakagami", req.alpha.has_value(), "alpha");
            t = {require_free("Nakagami", req.phi, "phi"), require_free("Nakagami", req.mu, "mu"), 2.0};
            break;
        case Subfamily::WilsonHilferty:
            reject_pinned("WilsonHilferty", req.alpha.has_value(), "alpha");
            t = {require_free("WilsonHilferty", req.phi, "phi"),
                 require_free("WilsonHilferty", req.mu, "mu"), 3.0};
            break;
        case Subfamily::FullStacy:
            t = {require_free("FullStacy", req.phi, "phi"), require_free("FullStacy", req.mu, "mu"),
                 require_free("FullStacy", req.alpha, "alpha")};
            break;
    }
    t.validate();
    return t;
}

}  // namespace stacy
