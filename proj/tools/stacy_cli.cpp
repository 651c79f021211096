// stacy: objective-prior propriety analysis for the generalized gamma family.
//
// Verbs:
//   stacy analyze --data FILE --prior ID [--scope S] [--alpha V] [--phi V]
//                 [--oracle] [--mcmc] [--loglog] [--seed N] [--out DIR]
//   stacy priors list [--json]
//   stacy loglog --prior ID --out DIR
//
// Exit codes: 0 verdict decided (Proper or Improper), 2 Undetermined,
// 1 on any error.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stacy/asymptotics.hpp"
#include "stacy/io.hpp"
#include "stacy/model.hpp"
#include "stacy/oracle.hpp"
#include "stacy/priors.hpp"
#include "stacy/propriety.hpp"

namespace fs = std::filesystem;
using stacy::io::json;
using stacy::io::round12;

namespace {

stacy::priors::Scope parse_scope(const std::string& s) {
    if (s == "general") return stacy::priors::Scope::General;
    if (s == "alpha-known" || s == "alpha_known") return stacy::priors::Scope::AlphaKnown;
    if (s == "phi-known" || s == "phi_known") return stacy::priors::Scope::PhiKnown;
    throw CLI::ValidationError("--scope", "must be general, alpha-known, or phi-known");
}

// Custom exponent tuple: five comma-separated entries k,q0,q_inf,r0,r_inf,
// each a number or "none".
stacy::priors::AsymptoticExponents parse_exponents(const std::string& tuple,
                                                   const std::string& bound) {
    stacy::priors::AsymptoticExponents e;
    std::vector<std::optional<double>*> slots = {&e.k, &e.q0, &e.q_inf, &e.r0, &e.r_inf};
    std::istringstream in(tuple);
    std::string tok;
    std::size_t i = 0;
    while (std::getline(in, tok, ',')) {
        if (i >= slots.size())
            throw CLI::ValidationError("--exponents", "expected exactly 5 entries");
        if (tok != "none") *slots[i] = std::stod(tok);
        ++i;
    }
    if (i != slots.size())
        throw CLI::ValidationError("--exponents", "expected exactly 5 entries");
    if (bound == "two-sided" || bound == "two_sided")
        e.bound = stacy::priors::BoundKind::TwoSided;
    else if (bound == "upper-only" || bound == "upper_only")
        e.bound = stacy::priors::BoundKind::UpperOnly;
    else if (bound == "lower-only" || bound == "lower_only")
        e.bound = stacy::priors::BoundKind::LowerOnly;
    else
        throw CLI::ValidationError("--bound", "must be two-sided, upper-only, or lower-only");
    return e;
}

json estimate_endpoints_json(const stacy::priors::PriorSpec& spec) {
    json j;
    for (auto ep : {stacy::asymptotics::Endpoint::ZeroPlus, stacy::asymptotics::Endpoint::Infinity}) {
        const auto est = stacy::asymptotics::estimate_exponent(spec.phi_factor, ep);
        const char* key = ep == stacy::asymptotics::Endpoint::ZeroPlus ? "r0" : "r_inf";
        json e;
        e["estimate"] = round12(est.exponent);
        e["fit_rms"] = round12(est.stderr_);
        const auto snapped = stacy::asymptotics::snap_exponent(est.exponent);
        e["snapped"] = snapped ? json(round12(*snapped)) : json(nullptr);
        j[key] = e;
    }
    return j;
}

int run_analyze(const std::string& data_path, const std::string& prior_name,
                const std::string& scope_name, std::optional<double> alpha,
                std::optional<double> phi, bool run_oracle, bool run_mcmc, bool emit_loglog,
                std::uint64_t seed, const std::string& out_dir, const std::string& exponents,
                const std::string& bound) {
    const auto scope = parse_scope(scope_name);
    stacy::oracle::ScopeSpec scope_spec;
    if (scope == stacy::priors::Scope::AlphaKnown) {
        if (!alpha) throw CLI::ValidationError("--alpha", "required for scope alpha-known");
        scope_spec = stacy::oracle::ScopeSpec::alpha_known(*alpha);
    } else if (scope == stacy::priors::Scope::PhiKnown) {
        if (!phi) throw CLI::ValidationError("--phi", "required for scope phi-known");
        scope_spec = stacy::oracle::ScopeSpec::phi_known(*phi);
    }

    stacy::priors::PriorSpec spec;
    std::string provenance;
    if (prior_name == "custom") {
        if (exponents.empty())
            throw CLI::ValidationError("--exponents", "required when --prior custom");
        spec.id = stacy::priors::PriorId::Custom;
        spec.scope = scope;
        spec.declared = parse_exponents(exponents, bound);
        provenance = "declared by user";
    } else {
        const auto id = stacy::priors::prior_id_from_string(prior_name);
        if (!id) throw CLI::ValidationError("--prior", "unknown prior id: " + prior_name);
        spec = stacy::priors::catalog_spec(*id, scope);
        provenance = "analytic catalog entry";
    }

    const auto data = stacy::io::load_dataset(data_path);
    auto verdict = stacy::propriety::decide(scope, *spec.declared, static_cast<int>(data.n()));
    verdict.provenance = provenance;

    json report;
    report["schema_version"] = 1;
    report["dataset"] = stacy::io::dataset_summary_json(data);
    json prior_j;
    prior_j["id"] = stacy::priors::to_string(spec.id);
    prior_j["scope"] = stacy::io::scope_name(scope);
    if (spec.id != stacy::priors::PriorId::Custom) {
        for (const auto& entry : stacy::priors::catalog_entries())
            if (entry.id == spec.id) {
                prior_j["formula"] = entry.formula;
                prior_j["source"] = entry.source;
                if (!entry.note.empty()) prior_j["note"] = entry.note;
            }
    }
    report["prior"] = prior_j;
    json exp_j;
    exp_j["declared"] = stacy::io::exponents_to_json(*spec.declared);
    exp_j["provenance"] = provenance;
    if (spec.phi_factor) exp_j["estimated"] = estimate_endpoints_json(spec);
    report["exponents"] = exp_j;
    report["verdict"] = stacy::io::verdict_to_json(verdict);

    fs::create_directories(out_dir);

    if (run_oracle) {
        json oracle_j;
        try {
            const auto ladder = stacy::oracle::integrate_norm_const(data, spec, scope_spec);
            const auto diag = stacy::oracle::diagnose(ladder);
            oracle_j = stacy::io::diagnosis_to_json(ladder, diag);
            stacy::io::write_ladder_csv(ladder, (fs::path(out_dir) / "ladder.csv").string());
            const char* v = stacy::propriety::to_string(verdict.status);
            const bool contradiction =
                (verdict.status == stacy::propriety::Status::Proper &&
                 diag.status == stacy::oracle::DiagnosisStatus::Diverging) ||
                (verdict.status == stacy::propriety::Status::Improper &&
                 diag.status == stacy::oracle::DiagnosisStatus::Converging);
            oracle_j["consistent_with_verdict"] = !contradiction;
            (void)v;
        } catch (const std::exception& err) {
            oracle_j["error"] = err.what();
        }
        report["oracle"] = oracle_j;
    }

    if (run_mcmc) {
        json mcmc_j;
        if (verdict.status == stacy::propriety::Status::Proper) {
            stacy::oracle::ChainConfig cfg;
            cfg.seed = seed;
            const auto chain = stacy::oracle::mcmc_sample(data, spec, scope_spec, cfg);
            mcmc_j = stacy::io::mcmc_summary_json(chain);
            stacy::io::write_chain_csv(chain, (fs::path(out_dir) / "chain.csv").string());
        } else {
            mcmc_j["skipped"] = std::string("propriety gate: verdict is ") +
                                stacy::propriety::to_string(verdict.status);
        }
        report["mcmc"] = mcmc_j;
    }

    if (emit_loglog && spec.phi_factor) {
        stacy::io::write_loglog_csv(spec, (fs::path(out_dir) / "loglog.csv").string());
        stacy::io::write_json(estimate_endpoints_json(spec),
                              (fs::path(out_dir) / "loglog.json").string());
    }

    stacy::io::write_json(report, (fs::path(out_dir) / "report.json").string());
    std::cout << "verdict: " << stacy::propriety::to_string(verdict.status) << " ("
              << verdict.theorem << ")\n";
    if (verdict.min_n) std::cout << "min_n: " << *verdict.min_n << "\n";
    std::cout << "report: " << (fs::path(out_dir) / "report.json").string() << "\n";
    return verdict.status == stacy::propriety::Status::Undetermined ? 2 : 0;
}

int run_loglog(const std::string& prior_name, const std::string& out_dir) {
    const auto id = stacy::priors::prior_id_from_string(prior_name);
    if (!id) throw CLI::ValidationError("--prior", "unknown prior id: " + prior_name);
    const auto spec = stacy::priors::catalog_spec(*id);
    fs::create_directories(out_dir);
    const std::string base = (fs::path(out_dir) / (prior_name + "_loglog")).string();
    stacy::io::write_loglog_csv(spec, base + ".csv");
    stacy::io::write_json(estimate_endpoints_json(spec), base + ".json");
    std::cout << "wrote " << base << ".csv and " << base << ".json\n";
    return 0;
}

int run_priors_list(bool as_json) {
    const json doc = stacy::io::catalog_json();
    if (as_json) {
        std::cout << doc.dump(2) << "\n";
        return 0;
    }
    std::cout << "id    scope    phi factor\n";
    for (const auto& p : doc["priors"]) {
        std::ostringstream row;
        row << p["id"].get<std::string>();
        while (row.str().size() < 6) row << ' ';
        row << p["scope"].get<std::string>();
        while (row.str().size() < 18) row << ' ';
        row << p["formula"].get<std::string>();
        std::cout << row.str() << "\n";
        if (p.contains("note"))
            std::cout << "      note: " << p["note"].get<std::string>() << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"objective-prior propriety analysis for the generalized gamma family"};
    app.require_subcommand(1);

    // analyze
    std::string data_path, prior_name, scope_name = "general", out_dir = ".";
    std::string exponents, bound = "two-sided";
    double alpha_v = 0.0, phi_v = 0.0;
    bool run_oracle = false, run_mcmc = false, emit_loglog = false;
    std::uint64_t seed = 1;
    auto* analyze = app.add_subcommand("analyze", "decide posterior propriety for a dataset");
    analyze->add_option("--data", data_path, "dataset file (CSV or JSON array)")->required();
    analyze->add_option("--prior", prior_name, "catalog prior id, or 'custom'")->required();
    analyze->add_option("--scope", scope_name, "general | alpha-known | phi-known");
    auto* alpha_opt = analyze->add_option("--alpha", alpha_v, "fixed alpha (scope alpha-known)");
    auto* phi_opt = analyze->add_option("--phi", phi_v, "fixed phi (scope phi-known)");
    analyze->add_flag("--oracle", run_oracle, "run the quadrature truncation-ladder check");
    analyze->add_flag("--mcmc", run_mcmc, "sample the posterior (Proper verdicts only)");
    analyze->add_flag("--loglog", emit_loglog, "emit the prior's (phi, pi(phi)) plot data");
    analyze->add_option("--seed", seed, "RNG seed for MCMC");
    analyze->add_option("--out", out_dir, "output directory");
    analyze->add_option("--exponents", exponents,
                        "custom tuple k,q0,q_inf,r0,r_inf ('none' for absent)");
    analyze->add_option("--bound", bound, "two-sided | upper-only | lower-only");

    // priors list
    auto* priors_cmd = app.add_subcommand("priors", "prior catalog operations");
    bool list_json = false;
    auto* list_cmd = priors_cmd->add_subcommand("list", "print the prior catalog");
    list_cmd->add_flag("--json", list_json, "print as JSON");
    priors_cmd->require_subcommand(1);

    // loglog
    std::string ll_prior, ll_out = ".";
    auto* loglog_cmd = app.add_subcommand("loglog", "emit (phi, pi(phi)) plot data for a prior");
    loglog_cmd->add_option("--prior", ll_prior, "catalog prior id")->required();
    loglog_cmd->add_option("--out", ll_out, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze->parsed()) {
            std::optional<double> alpha =
                alpha_opt->count() ? std::optional<double>(alpha_v) : std::nullopt;
            std::optional<double> phi =
                phi_opt->count() ? std::optional<double>(phi_v) : std::nullopt;
            return run_analyze(data_path, prior_name, scope_name, alpha, phi, run_oracle,
                               run_mcmc, emit_loglog, seed, out_dir, exponents, bound);
        }
        if (loglog_cmd->parsed()) return run_loglog(ll_prior, ll_out);
        if (priors_cmd->parsed() && list_cmd->parsed()) return run_priors_list(list_json);
    } catch (const CLI::Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 1;
}
