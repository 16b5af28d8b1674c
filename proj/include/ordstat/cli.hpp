#pragma once

// Command-line front end. Exit codes: 0 all rows pass, 1 usage or configuration
// error, 2 numerical or I/O failure, 3 at least one bound violation.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "ordstat/config.hpp"
#include "ordstat/errors.hpp"
#include "ordstat/estimators.hpp"
#include "ordstat/harness.hpp"
#include "ordstat/report.hpp"

namespace ordstat {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitNumerical = 2, kExitViolation = 3 };

struct CliInvocation {
    std::string command;
    std::string config_path;
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;
    std::string out_path;
};

/// Arguments of the `bound` command.
struct BoundRequest {
    std::string kind;
    std::uint64_t n = 0;
    std::uint64_t k = 1;
    double t = 1.0;
    double z = 1.0;
    double lambda = 0.1;
    double gamma = 0.0;
    std::string family = "exponential";
    std::size_t replicates = 100000;
    std::uint64_t seed = 42;
};

inline std::optional<Suite> suite_for_command(std::string_view command) {
    if (command == "verify-variance") return Suite::Variance;
    if (command == "verify-tails") return Suite::Tails;
    if (command == "evt-limits") return Suite::Evt;
    if (command == "gaussian-suite") return Suite::Gaussian;
    if (command == "association") return Suite::Association;
    if (command == "entropy") return Suite::Entropy;
    return std::nullopt;
}

inline int exit_code_for(const Error& e) {
    switch (e.kind()) {
        case ErrorKind::Input:
        case ErrorKind::Domain:
        case ErrorKind::Precondition:
        case ErrorKind::Unsupported: return kExitUsage;
        case ErrorKind::Range:
        case ErrorKind::Numerical:
        case ErrorKind::Io: return kExitNumerical;
    }
    return kExitNumerical;
}

/// Run every experiment of the command's suite and write one combined CSV.
inline int run_suite_command(const CliInvocation& inv, std::ostream& out, std::ostream& err) {
    const Suite suite = *suite_for_command(inv.command);
    ConfigFile file = load_config(inv.config_path);
    for (const auto& o : inv.overrides) apply_override(file, o);
    if (inv.seed) apply_override(file, "seed=" + std::to_string(*inv.seed));
    const auto experiments = experiments_for(file, suite);
    if (experiments.empty()) {
        throw InputError("config '" + inv.config_path + "' has no " + std::string(to_string(suite)) + " experiment");
    }
    std::string target = inv.out_path;
    if (target.empty()) {
        for (const auto& e : experiments) {
            if (!e.output.empty()) {
                if (!target.empty() && target != e.output) {
                    throw InputError("experiments name different outputs; pass --out");
                }
                target = e.output;
            }
        }
    }
    BoundReport report;
    for (const auto& e : experiments) report.append(run_suite(e));
    if (target.empty() || target == "-") {
        write_csv(report, out);
    } else {
        write_report(report, target);
    }
    const std::size_t failures = report.failures();
    if (failures > 0) {
        err << failures << " of " << report.rows.size() << " rows exceed their bound by more than 3 stderr\n";
        return kExitViolation;
    }
    return kExitOk;
}

/// Evaluate one bound. Monte Carlo backed kinds simulate `replicates` draws.
inline int run_bound_command(const BoundRequest& req, std::ostream& out) {
    const BoundKind kind = parse_bound_kind(req.kind);
    auto print = [&](double v) { out << format_real(v) << '\n'; };
    switch (kind) {
        case BoundKind::EsVariance:
        case BoundKind::HazardVariance:
        case BoundKind::ExpEsLogmgf: {
            const DistributionModel d = req.family == "gpd" ? DistributionModel::gpd(req.gamma) : parse_family(req.family);
            if (req.k < 1 || req.k + 1 > req.n) throw InputError("k must satisfy 1 <= k <= n-1");
            const bool low = 2 * req.k <= req.n;
            const std::size_t other = low ? req.k + 1 : req.k - 1;
            const auto draws = simulate_ranks(d, req.n, {req.k, other}, req.replicates, req.seed);
            const auto xk = draws.column_for_rank(req.k);
            const auto xo = draws.column_for_rank(other);
            std::vector<double> gaps(xk.size());
            std::vector<double> sq(xk.size());
            for (std::size_t r = 0; r < xk.size(); ++r) {
                gaps[r] = low ? xk[r] - xo[r] : xo[r] - xk[r];
                sq[r] = gaps[r] * gaps[r];
            }
            if (kind == BoundKind::EsVariance) {
                print(efron_stein_spacing_bound(req.n, req.k, mean_estimate(sq)).value);
            } else if (kind == BoundKind::HazardVariance) {
                const auto& at = low ? xo : xk;
                std::vector<double> ih(at.size());
                for (std::size_t r = 0; r < at.size(); ++r) {
                    const double v = inverse_hazard(d, at[r]);
                    ih[r] = v * v;
                }
                print(hazard_variance_bound(d, req.n, req.k, mean_estimate(ih)).value);
            } else {
                print(exp_efron_stein_logmgf_bound(req.n, req.k, req.lambda, gaps).value);
            }
            return kExitOk;
        }
        case BoundKind::EvtLimit: {
            const EvtLimits lim = evt_limits(req.gamma);
            out << format_real(lim.spacing) << ' ' << format_real(lim.variance) << ' ' << format_real(lim.ratio) << '\n';
            return kExitOk;
        }
        case BoundKind::GaussOrderVar: print(gaussian_order_variance_bound(req.n, req.k).value); return kExitOk;
        case BoundKind::ExpLowerTail: print(exponential_lower_tail_bound(req.n, req.k, req.z)); return kExitOk;
        case BoundKind::GaussMaxBernstein: print(gaussian_max_bernstein(gaussian_max_vn(req.n), req.t)); return kExitOk;
        case BoundKind::GaussMedianBernstein: print(gaussian_median_bernstein(req.n, req.t).threshold); return kExitOk;
        case BoundKind::GaussMaxShifted: print(gaussian_max_shifted_tail(req.n, req.t).threshold); return kExitOk;
        case BoundKind::GaussSignedMaxVar: print(gaussian_signed_max_variance_bound(req.n).value); return kExitOk;
    }
    return kExitUsage;
}

inline int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out = std::cout,
                              std::ostream& err = std::cerr) {
    CLI::App app{"Monte Carlo verification of order-statistic variance and tail bounds", "ordstat"};
    app.require_subcommand(1, 1);

    CliInvocation inv;
    for (const char* name : {"verify-variance", "verify-tails", "evt-limits", "gaussian-suite", "association", "entropy"}) {
        auto* sub = app.add_subcommand(name, std::string("run the ") + std::string(to_string(*suite_for_command(name))) + " suite");
        sub->add_option("--config", inv.config_path, "experiment file")->required();
        sub->add_option("--set", inv.overrides, "override key=value or table.key=value (repeatable)");
        sub->add_option("--seed", inv.seed, "master seed for every experiment");
        sub->add_option("--out", inv.out_path, "CSV output path ('-' for stdout)");
    }
    BoundRequest req;
    auto* bound = app.add_subcommand("bound", "evaluate a single bound");
    bound->add_option("--kind", req.kind, "bound kind, e.g. GAUSS_ORDER_VAR")->required();
    bound->add_option("--n", req.n, "sample size");
    bound->add_option("--k", req.k, "rank");
    bound->add_option("--t", req.t, "tail level t");
    bound->add_option("--z", req.z, "lower-tail offset z");
    bound->add_option("--lambda", req.lambda, "log-MGF argument");
    bound->add_option("--gamma", req.gamma, "tail index");
    bound->add_option("--family", req.family, "sampling family for Monte Carlo backed kinds");
    bound->add_option("--replicates", req.replicates, "Monte Carlo replicates");
    bound->add_option("--seed", req.seed, "master seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return kExitUsage;
    }

    try {
        if (bound->parsed()) return run_bound_command(req, out);
        for (auto* sub : app.get_subcommands()) inv.command = sub->get_name();
        return run_suite_command(inv, out, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
}

}  // namespace ordstat
