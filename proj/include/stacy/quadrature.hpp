#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

// Adaptive Gauss-Kronrod (G7, K15) quadrature on finite intervals, plus a
// scaled log-domain wrapper for integrands supplied as log-values.

namespace stacy::quadrature {

struct Result {
    double value = 0.0;
    double error = 0.0;  // absolute error estimate
    long evaluations = 0;
};

namespace detail {

// 15-point Kronrod nodes on [0,1] half-interval form: {|x|, Gauss weight, Kronrod weight}.
inline constexpr double kNodes[8][3] = {
    {0.000000000000000, 0.417959183673469, 0.209482141084728},
    {0.405845151377397, 0.381830050505119, 0.190350578064785},
    {0.741531185599394, 0.279705391489277, 0.140653259715525},
    {0.949107912342759, 0.129484966168870, 0.063092092629979},
    {0.207784955007898, 0.0, 0.204432940075298},
    {0.586087235467691, 0.0, 0.169004726639267},
    {0.864864423359769, 0.0, 0.104790010322250},
    {0.991455371120813, 0.0, 0.022935322010529},
};

struct PanelEstimate {
    double kronrod;
    double gauss;
};

template <class F>
PanelEstimate g7k15(const F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double gauss = 0.0, kron = 0.0;
    for (const auto& node : kNodes) {
        const double x = node[0];
        if (x == 0.0) {
            const double v = f(c);
            gauss += node[1] * v;
            kron += node[2] * v;
        } else {
            const double v1 = f(c - h * x);
            const double v2 = f(c + h * x);
            gauss += node[1] * (v1 + v2);
            kron += node[2] * (v1 + v2);
        }
    }
    return {kron * h, gauss * h};
}

}  // namespace detail

// Adaptive bisection on a worst-panel-first queue. `seeds` adds interior
// breakpoints for the initial panel set (out-of-range values are ignored),
// so that features much narrower than the domain are not missed.
inline Result integrate(const std::function<double(double)>& f, double a, double b,
                        double rel_tol = 1e-10, double abs_tol = 0.0, int max_panels = 4000,
                        const std::vector<double>& seeds = {}) {
    if (!(b > a)) throw std::invalid_argument("integrate: requires b > a");
    struct Panel {
        double a, b, value, error;
    };
    std::vector<Panel> panels;
    long evals = 0;
    auto make_panel = [&](double lo, double hi) {
        const auto est = detail::g7k15(f, lo, hi);
        evals += 15;
        return Panel{lo, hi, est.kronrod, std::fabs(est.kronrod - est.gauss)};
    };
    std::vector<double> cuts;
    cuts.push_back(a);
    for (double s : seeds)
        if (s > a && s < b) cuts.push_back(s);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t i = 1; i < cuts.size(); ++i)
        if (cuts[i] > cuts[i - 1]) panels.push_back(make_panel(cuts[i - 1], cuts[i]));
    for (int iter = 0; iter < max_panels; ++iter) {
        double total = 0.0, err = 0.0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < panels.size(); ++i) {
            total += panels[i].value;
            err += panels[i].error;
            if (panels[i].error > panels[worst].error) worst = i;
        }
        if (err <= std::max(abs_tol, rel_tol * std::fabs(total)) || panels[worst].error == 0.0) {
            return {total, err, evals};
        }
        const Panel p = panels[worst];
        const double mid = 0.5 * (p.a + p.b);
        panels[worst] = make_panel(p.a, mid);
        panels.push_back(make_panel(mid, p.b));
    }
    double total = 0.0, err = 0.0;
    for (const auto& p : panels) {
        total += p.value;
        err += p.error;
    }
    return {total, err, evals};
}

struct LogResult {
    double log_value;
    double rel_error;  // error estimate relative to the value
    long evaluations;
};

// log of integral of exp(log_f) over [a,b]. The integrand is rescaled by its
// maximum over a coarse scan so the adaptive pass works near unit scale.
inline LogResult integrate_log(const std::function<double(double)>& log_f, double a, double b,
                               double rel_tol = 1e-8, int scan_points = 65,
                               int max_panels = 4000) {
    if (!(b > a)) throw std::invalid_argument("integrate_log: requires b > a");
    double peak = -std::numeric_limits<double>::infinity();
    double argmax = a;
    for (int i = 0; i < scan_points; ++i) {
        const double x = a + (b - a) * i / (scan_points - 1);
        const double g = log_f(x);
        if (g > peak) {
            peak = g;
            argmax = x;
        }
    }
    if (!std::isfinite(peak))
        throw std::domain_error("integrate_log: integrand log-values non-finite on scan grid");
    // Refine the peak locally: a spiked integrand can sit between scan nodes,
    // and rescaling by an underestimate of the maximum overflows exp(). Keep a
    // bracket around the best node and subdivide it; the bracket retains the
    // maximum of a unimodal spike even on rounds where no node improves.
    {
        const double spacing = (b - a) / (scan_points - 1);
        double lo = std::max(a, argmax - spacing);
        double hi = std::min(b, argmax + spacing);
        constexpr int kRefine = 17;
        for (int round = 0; round < 60 && hi - lo > 1e-15 * (b - a); ++round) {
            double xs[kRefine];
            double gs[kRefine];
            int best = 0;
            for (int i = 0; i < kRefine; ++i) {
                xs[i] = lo + (hi - lo) * i / (kRefine - 1);
                gs[i] = log_f(xs[i]);
                if (gs[i] > gs[best]) best = i;
            }
            if (gs[best] > peak) {
                peak = gs[best];
                argmax = xs[best];
            }
            const double left = gs[best > 0 ? best - 1 : 0];
            const double right = gs[best + 1 < kRefine ? best + 1 : kRefine - 1];
            lo = xs[best > 0 ? best - 1 : 0];
            hi = xs[best + 1 < kRefine ? best + 1 : kRefine - 1];
            if (gs[best] - std::min(left, right) < 0.5) break;
        }
    }
    auto scaled = [&](double x) {
        const double g = log_f(x) - peak;
        return g < -745.0 ? 0.0 : std::exp(g);
    };
    Result r = integrate(scaled, a, b, rel_tol, 0.0, max_panels);
    if (!(r.value > 0.0) || r.error > 0.1 * r.value) {
        // The mass can sit in a spike many orders of magnitude narrower than
        // the domain, which whole-domain panels miss outright (all nodes see
        // zero, the error estimate stays zero, nothing refines). Retry with
        // geometric breakpoints around the scanned peak.
        std::vector<double> seeds;
        seeds.push_back(argmax);
        const double span = b - a;
        for (double w = span; w > 1e-13 * span; w *= 0.25) {
            seeds.push_back(argmax - w);
            seeds.push_back(argmax + w);
        }
        const Result retry = integrate(scaled, a, b, rel_tol, 0.0, max_panels, seeds);
        r = retry;
        r.evaluations += retry.evaluations;
    }
    if (!(r.value > 0.0))
        throw std::domain_error("integrate_log: integral vanished after rescaling");
    return {peak + std::log(r.value), r.error / r.value, r.evaluations + scan_points};
}

}  // namespace stacy::quadrature
