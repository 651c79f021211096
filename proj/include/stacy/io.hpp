#pragma once

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "stacy/asymptotics.hpp"
#include "stacy/model.hpp"
#include "stacy/oracle.hpp"
#include "stacy/priors.hpp"
#include "stacy/propriety.hpp"

// File ingestion and report serialization. All JSON uses insertion-ordered
// keys and floats round-tripped through %.12g, so reports are byte-stable
// across runs with fixed seeds.

namespace stacy::io {

using json = nlohmann::ordered_json;

// Round-trips a double through 12-significant-digit decimal so serialized
// values are stable independent of how they were computed.
inline double round12(double v) {
    if (!std::isfinite(v)) return v;
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return std::strtod(buf, nullptr);
}

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline double parse_positive(const std::string& token, const std::string& path, long line) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(token, &pos);
    } catch (const std::exception&) {
        throw std::runtime_error(path + ":" + std::to_string(line) + ": not a number: '" +
                                 token + "'");
    }
    if (pos != token.size())
        throw std::runtime_error(path + ":" + std::to_string(line) + ": trailing characters in '" +
                                 token + "'");
    if (!(std::isfinite(v) && v > 0.0))
        throw std::runtime_error(path + ":" + std::to_string(line) +
                                 ": values must be finite and positive, got '" + token + "'");
    return v;
}

}  // namespace detail

// CSV: one positive value per line, optional single header line "x".
// JSON: a top-level array of positive numbers. The format is chosen by
// sniffing the first non-space character ('[' means JSON).
inline Dataset load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dataset file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) throw std::runtime_error(path + ": file is empty");

    std::vector<double> values;
    if (text[first] == '[') {
        json doc;
        try {
            doc = json::parse(text);
        } catch (const json::parse_error& err) {
            throw std::runtime_error(path + ": JSON parse error: " + err.what());
        }
        if (!doc.is_array()) throw std::runtime_error(path + ": JSON dataset must be an array");
        long idx = 0;
        for (const auto& item : doc) {
            ++idx;
            if (!item.is_number())
                throw std::runtime_error(path + ": array element " + std::to_string(idx) +
                                         " is not a number");
            const double v = item.get<double>();
            if (!(std::isfinite(v) && v > 0.0))
                throw std::runtime_error(path + ": array element " + std::to_string(idx) +
                                         " must be finite and positive");
            values.push_back(v);
        }
    } else {
        std::istringstream lines(text);
        std::string line;
        long lineno = 0;
        while (std::getline(lines, line)) {
            ++lineno;
            const std::string tok = detail::trim(line);
            if (tok.empty()) continue;
            if (lineno == 1 && (tok == "x" || tok == "X" || tok == "\"x\"")) continue;
            values.push_back(detail::parse_positive(tok, path, lineno));
        }
    }
    if (values.empty()) throw std::runtime_error(path + ": no data values found");
    return Dataset(std::move(values));
}

inline json exponents_to_json(const priors::AsymptoticExponents& e) {
    auto opt = [](const std::optional<double>& v) {
        return v ? json(round12(*v)) : json(nullptr);
    };
    json j;
    j["k"] = opt(e.k);
    j["q0"] = opt(e.q0);
    j["q_inf"] = opt(e.q_inf);
    j["r0"] = opt(e.r0);
    j["r_inf"] = opt(e.r_inf);
    switch (e.bound) {
        case priors::BoundKind::TwoSided: j["bound"] = "two_sided"; break;
        case priors::BoundKind::UpperOnly: j["bound"] = "upper_only"; break;
        case priors::BoundKind::LowerOnly: j["bound"] = "lower_only"; break;
    }
    return j;
}

inline const char* scope_name(priors::Scope s) {
    switch (s) {
        case priors::Scope::General: return "general";
        case priors::Scope::AlphaKnown: return "alpha_known";
        case priors::Scope::PhiKnown: return "phi_known";
    }
    return "?";
}

inline json verdict_to_json(const propriety::ProprietyVerdict& v) {
    json j;
    j["status"] = propriety::to_string(v.status);
    j["theorem"] = v.theorem;
    j["min_n"] = v.min_n ? json(*v.min_n) : json(nullptr);
    json m;
    m["scope"] = scope_name(v.moments.scope);
    if (v.moments.scope == priors::Scope::AlphaKnown) {
        m["all_moments_finite"] = v.moments.all_moments_finite;
    } else if (v.moments.scope == priors::Scope::PhiKnown) {
        m["alpha_moments_finite"] = v.moments.alpha_moments_finite;
        m["mu_mean_finite"] = v.moments.mu_mean_finite;
    }
    j["moments"] = m;
    j["exponent_provenance"] = v.provenance;
    return j;
}

inline json dataset_summary_json(const Dataset& data) {
    double lo = data.values().front();
    for (double x : data.values()) lo = std::min(lo, x);
    json j;
    j["n"] = static_cast<long>(data.n());
    j["min"] = round12(lo);
    j["max"] = round12(data.max());
    j["geometric_mean"] = round12(data.geometric_mean());
    j["k_statistic"] = round12(asymptotics::k_statistic(data));
    return j;
}

inline json catalog_json() {
    json arr = json::array();
    for (const auto& entry : priors::catalog_entries()) {
        json j;
        j["id"] = priors::to_string(entry.id);
        j["scope"] = scope_name(entry.natural_scope);
        j["formula"] = entry.formula;
        j["source"] = entry.source;
        if (!entry.note.empty()) j["note"] = entry.note;
        const auto e = priors::analytic_exponents(entry.id);
        j["exponents"] = exponents_to_json(e);
        const auto a = priors::asserted_phi_exponents(entry.id);
        j["asserted_r0"] = a.r0 ? json(round12(*a.r0)) : json(nullptr);
        j["asserted_r_inf"] = a.r_inf ? json(round12(*a.r_inf)) : json(nullptr);
        arr.push_back(j);
    }
    json doc;
    doc["schema_version"] = 1;
    doc["priors"] = arr;
    return doc;
}

inline json diagnosis_to_json(const oracle::TruncationLadder& ladder,
                              const oracle::Diagnosis& diag) {
    json j;
    j["status"] = oracle::to_string(diag.status);
    j["tail_slope"] = round12(diag.tail_slope);
    json levels = json::array();
    for (std::size_t i = 0; i < ladder.domains.size(); ++i) {
        json lvl;
        lvl["T"] = round12(ladder.domains[i]);
        lvl["log_value"] = round12(ladder.log_value[i]);
        lvl["rel_err"] = round12(ladder.rel_err[i]);
        levels.push_back(lvl);
    }
    j["ladder"] = levels;
    return j;
}

inline json mcmc_summary_json(const oracle::ChainResult& chain) {
    const auto& s = chain.samples;
    const double m = static_cast<double>(s.size());
    double mp = 0, mm = 0, ma = 0;
    for (const auto& c : s) { mp += c.phi; mm += c.mu; ma += c.alpha; }
    mp /= m; mm /= m; ma /= m;
    double vp = 0, vm = 0, va = 0;
    for (const auto& c : s) {
        vp += (c.phi - mp) * (c.phi - mp);
        vm += (c.mu - mm) * (c.mu - mm);
        va += (c.alpha - ma) * (c.alpha - ma);
    }
    const double denom = m > 1 ? m - 1 : 1;
    json j;
    j["samples"] = static_cast<long>(s.size());
    j["acceptance"] = round12(chain.acceptance);
    j["mean"] = {{"phi", round12(mp)}, {"mu", round12(mm)}, {"alpha", round12(ma)}};
    j["stddev"] = {{"phi", round12(std::sqrt(vp / denom))},
                   {"mu", round12(std::sqrt(vm / denom))},
                   {"alpha", round12(std::sqrt(va / denom))}};
    return j;
}

namespace detail {

inline std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    return out;
}

}  // namespace detail

// (phi, pi_phi(phi)) pairs over a 200-point geometric grid on [1e-7, 1e7].
inline void write_loglog_csv(const priors::PriorSpec& spec, const std::string& path,
                             int points = 200, double lo = 1e-7, double hi = 1e7) {
    auto out = detail::open_out(path);
    out << "phi,pi_phi\n";
    const double step = std::log(hi / lo) / (points - 1);
    for (int i = 0; i < points; ++i) {
        const double phi = lo * std::exp(i * step);
        out << detail::fmt12(phi) << "," << detail::fmt12(spec.phi_factor(phi)) << "\n";
    }
}

inline void write_ladder_csv(const oracle::TruncationLadder& ladder, const std::string& path) {
    auto out = detail::open_out(path);
    out << "T,log_value,rel_err\n";
    for (std::size_t i = 0; i < ladder.domains.size(); ++i)
        out << detail::fmt12(ladder.domains[i]) << "," << detail::fmt12(ladder.log_value[i])
            << "," << detail::fmt12(ladder.rel_err[i]) << "\n";
}

inline void write_chain_csv(const oracle::ChainResult& chain, const std::string& path) {
    auto out = detail::open_out(path);
    out << "step,phi,mu,alpha,log_post\n";
    long step = 0;
    for (const auto& s : chain.samples)
        out << step++ << "," << detail::fmt12(s.phi) << "," << detail::fmt12(s.mu) << ","
            << detail::fmt12(s.alpha) << "," << detail::fmt12(s.log_post) << "\n";
}

inline void write_json(const json& doc, const std::string& path) {
    auto out = detail::open_out(path);
    out << doc.dump(2) << "\n";
}

}  // namespace stacy::io
