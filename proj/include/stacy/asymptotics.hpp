#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "stacy/model.hpp"

// Numeric power-law exponent estimation at the 0+ and infinity endpoints,
// and the sample statistics p(alpha), q(alpha), k(x) that control the decay
// of the posterior normalizing-constant integrands.

namespace stacy::asymptotics {

enum class Endpoint { ZeroPlus, Infinity };

struct ExponentGrid {
    double lo;
    double hi;
    int points = 40;
};

// Default grids: far enough into the asymptotic regime for every catalog
// prior while staying inside double-precision comfort for trigamma.
inline ExponentGrid default_grid(Endpoint ep) {
    return ep == Endpoint::ZeroPlus ? ExponentGrid{1e-7, 1e-4} : ExponentGrid{1e4, 1e7};
}

struct ExponentEstimate {
    Endpoint endpoint;
    double exponent;  // least-squares slope of ln f vs ln x
    double stderr_;   // RMS fit residual
    double decades;   // grid span in decades
};

// Fits the local power-law exponent of exp(log_f) on a geometric grid.
inline ExponentEstimate estimate_exponent_log(const std::function<double(double)>& log_f,
                                              Endpoint ep,
                                              std::optional<ExponentGrid> grid_opt = std::nullopt) {
    const ExponentGrid grid = grid_opt.value_or(default_grid(ep));
    if (!(grid.lo > 0.0 && grid.hi > grid.lo) || grid.points < 3)
        throw std::invalid_argument("estimate_exponent: bad grid");
    std::vector<double> lx(grid.points), ly(grid.points);
    const double step = std::log(grid.hi / grid.lo) / (grid.points - 1);
    for (int i = 0; i < grid.points; ++i) {
        lx[i] = std::log(grid.lo) + i * step;
        ly[i] = log_f(std::exp(lx[i]));
        if (!std::isfinite(ly[i]))
            throw std::domain_error("estimate_exponent: function non-finite on grid");
    }
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < grid.points; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= grid.points;
    my /= grid.points;
    double sxy = 0.0, sxx = 0.0;
    for (int i = 0; i < grid.points; ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    const double slope = sxy / sxx;
    double ss = 0.0;
    for (int i = 0; i < grid.points; ++i) {
        const double r = ly[i] - my - slope * (lx[i] - mx);
        ss += r * r;
    }
    return {ep, slope, std::sqrt(ss / grid.points),
            std::log10(grid.hi / grid.lo)};
}

inline ExponentEstimate estimate_exponent(const std::function<double(double)>& f, Endpoint ep,
                                          std::optional<ExponentGrid> grid_opt = std::nullopt) {
    return estimate_exponent_log(
        [&f](double x) {
            const double v = f(x);
            if (!(v > 0.0) || !std::isfinite(v))
                throw std::domain_error("estimate_exponent: function must be finite positive on grid");
            return std::log(v);
        },
        ep, grid_opt);
}

// Snaps an estimated exponent to the nearest of {0, +-1/2, +-1, +-3/2} when
// within tol; returns nullopt (unsnapped) otherwise.
inline std::optional<double> snap_exponent(double value, double tol = 0.05) {
    static constexpr double targets[] = {-1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5};
    double best = targets[0];
    for (double t : targets)
        if (std::fabs(value - t) < std::fabs(value - best)) best = t;
    if (std::fabs(value - best) <= tol) return best;
    return std::nullopt;
}

struct SampleStats {
    double p_value;  // p(alpha) = log(arith mean of x^alpha / geo mean of x^alpha)
    double q_value;  // q(alpha) = p(alpha) + log n
    double alpha;
};

namespace detail {

// q(alpha) = log(sum x_i^alpha) - (alpha/n) sum log x_i, via log-sum-exp.
// Defined for degenerate data (where it equals log n) and for n = 1 (zero);
// the oracle integrands use it in both cases.
inline double q_kernel(const Dataset& data, double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw std::domain_error("q_kernel: alpha must be a finite positive real");
    double m = -std::numeric_limits<double>::infinity();
    for (double x : data.values()) m = std::max(m, alpha * std::log(x));
    double s = 0.0;
    for (double x : data.values()) s += std::exp(alpha * std::log(x) - m);
    const double log_sum = m + std::log(s);
    return log_sum - alpha * data.sum_log() / static_cast<double>(data.n());
}

}  // namespace detail

inline SampleStats sample_stats(const Dataset& data, double alpha) {
    if (data.degenerate())
        throw std::domain_error("sample_stats: data degenerate (all values equal), p would be 0");
    const double q = detail::q_kernel(data, alpha);
    const double p = q - std::log(static_cast<double>(data.n()));
    return {p, q, alpha};
}

// k(x) = log(max / geometric mean); zero iff the data are degenerate, and
// the large-alpha slope of p(alpha).
inline double k_statistic(const Dataset& data) {
    return std::log(data.max()) - data.sum_log() / static_cast<double>(data.n());
}

}  // namespace stacy::asymptotics
