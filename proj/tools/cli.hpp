// Copyright 2026 The bellbound Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <fstream>
#include <iostream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bellbound/bellbound.hpp"

namespace bellbound::cli {

enum ExitCode : int {
    kOk = 0,
    kBoundViolation = 1,
    kUsage = 2,
    kFileOrParse = 3,
    kInvariant = 4,
};

namespace detail {

inline QuantumState load_state_arg(const std::string &arg, int n_parties) {
    if (arg == "ghz") {
        return ghz_state(n_parties);
    }
    return load_state_file(arg);
}

inline OperatorChoice operator_arg(const std::string &name) {
    static const std::map<std::string, OperatorChoice> table = {
        {"svetlichny+", OperatorChoice::svetlichny_plus},
        {"svetlichny-", OperatorChoice::svetlichny_minus},
        {"mk", OperatorChoice::mk},
    };
    return table.at(name);
}

inline std::string num(double v) { return format_double(v, 15); }

}  // namespace detail

/// Runs one CLI invocation. Data goes to `out`, diagnostics to `err`.
/// args[0] is the program name.
inline int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Refined Tsirelson bounds for Svetlichny and Mermin-Klyshko operators"};
    app.require_subcommand(1);
    const std::vector<std::string> operators = {"svetlichny+", "svetlichny-", "mk"};

    auto *figure = app.add_subcommand("figure", "Write a figure sweep as CSV");
    int figure_id = 0;
    int samples = 201;
    std::string out_path;
    std::string alpha_start = "-pi";
    std::string alpha_end = "pi";
    std::string figure_state;
    figure->add_option("--id", figure_id, "Figure preset")->required()->check(CLI::IsMember({1, 2, 3}));
    figure->add_option("--samples", samples, "Number of alpha samples")->check(CLI::Range(2, 1'000'000));
    figure->add_option("--out", out_path, "CSV output path (stdout if omitted)");
    figure->add_option("--alpha-start", alpha_start, "First alpha (radians, 'pi/4' syntax ok)");
    figure->add_option("--alpha-end", alpha_end, "Last alpha");
    figure->add_option("--state", figure_state, "State file (default: GHZ)");

    auto *verify = app.add_subcommand("verify", "Randomized bound verification");
    std::uint64_t seed = 42;
    int trials = 1000;
    int n_min = 2;
    int n_max = 4;
    verify->add_option("--seed", seed, "Random seed");
    verify->add_option("--trials", trials, "Number of trials")->check(CLI::NonNegativeNumber);
    verify->add_option("--n-min", n_min, "Smallest party count")->check(CLI::Range(2, 6));
    verify->add_option("--n-max", n_max, "Largest party count")->check(CLI::Range(2, 6));

    auto *bounds = app.add_subcommand("bounds", "Operator value and refined bound for one scenario");
    std::string scenario_path;
    std::string bounds_state = "ghz";
    std::string bounds_op;
    bounds->add_option("--scenario", scenario_path, "Scenario file")->required();
    bounds->add_option("--state", bounds_state, "'ghz' or a state file");
    bounds->add_option("--operator", bounds_op, "Bell operator")->required()->check(CLI::IsMember(operators));

    auto *optimize = app.add_subcommand("optimize", "Search angles for maximal violation on GHZ_N");
    OptimizerConfig opt;
    std::string objective;
    std::string family = "planar";
    optimize->add_option("--n", opt.n_parties, "Party count")->required()->check(CLI::Range(2, 8));
    optimize->add_option("--objective", objective, "Objective")
        ->required()
        ->check(CLI::IsMember({"max-svetlichny", "max-mk", "max-gap"}));
    optimize->add_option("--tol", opt.tol, "Simplex diameter tolerance")->check(CLI::PositiveNumber);
    optimize->add_option("--family", family, "Observable family")->check(CLI::IsMember({"planar", "bloch"}));
    optimize->add_option("--multistarts", opt.multistarts, "Number of random starts")->check(CLI::PositiveNumber);
    optimize->add_option("--max-evals", opt.max_evals, "Evaluation budget per start")->check(CLI::PositiveNumber);
    optimize->add_option("--seed", opt.seed, "Random seed");

    auto *polynomial = app.add_subcommand("polynomial", "Dump a Bell polynomial");
    std::string poly_op;
    int poly_n = 0;
    polynomial->add_option("--op", poly_op, "Bell operator")->required()->check(CLI::IsMember(operators));
    polynomial->add_option("--n", poly_n, "Party count")->required();

    std::vector<const char *> argv;
    argv.reserve(args.size());
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }

    try {
        if (*figure) {
            SweepConfig cfg;
            cfg.figure = figure_id == 1 ? Figure::fig1 : figure_id == 2 ? Figure::fig2 : Figure::fig3;
            cfg.samples = samples;
            cfg.alpha_start = parse_angle(alpha_start);
            cfg.alpha_end = parse_angle(alpha_end);
            if (!figure_state.empty()) {
                cfg.state = load_state_file(figure_state);
            }
            const auto rows = figure_sweep(cfg);
            if (out_path.empty()) {
                write_sweep_csv(out, rows);
            } else {
                std::ofstream file(out_path, std::ios::binary);
                if (!file) {
                    throw ParseError("cannot open '" + out_path + "' for writing");
                }
                write_sweep_csv(file, rows);
                if (!file.flush()) {
                    throw ParseError("write to '" + out_path + "' failed");
                }
            }
            return kOk;
        }
        if (*verify) {
            const auto report = verify_bounds_random(seed, trials, n_min, n_max);
            out << to_key_value(report);
            if (report.violations > 0) {
                err << "verify: " << report.violations << " bound violation(s) found\n";
                return kBoundViolation;
            }
            return kOk;
        }
        if (*bounds) {
            const MeasurementScenario sc = load_scenario_file(scenario_path);
            const QuantumState state = detail::load_state_arg(bounds_state, sc.n_parties());
            const OperatorChoice op = detail::operator_arg(bounds_op);
            const int n = sc.n_parties();
            const double value = expectation(state, realize(operator_polynomial(op, n), sc));
            const BoundReport report = (op == OperatorChoice::mk && n % 2 == 1) ? best_mk_bound(sc, state)
                                                                                : best_svetlichny_bound(sc, state);
            out << "operator=" << bounds_op << '\n' << "operator_value=" << detail::num(value) << '\n';
            out << to_key_value(report);
            if (std::abs(value) > report.value + 1e-9) {
                err << "bounds: |operator value| exceeds the refined bound\n";
                return kInvariant;
            }
            return kOk;
        }
        if (*optimize) {
            opt.objective = objective == "max-svetlichny" ? Objective::max_svetlichny
                            : objective == "max-mk"       ? Objective::max_mk
                                                          : Objective::max_gap;
            opt.family = family == "planar" ? ObservableFamily::planar : ObservableFamily::bloch;
            const auto result = maximize_violation(opt);
            out << "objective=" << objective << '\n'
                << "family=" << family << '\n'
                << "value=" << detail::num(result.value) << '\n'
                << "evals=" << result.evals << '\n'
                << "converged=" << (result.converged ? "true" : "false") << '\n'
                << "params=";
            for (std::size_t i = 0; i < result.params.size(); ++i) {
                out << (i ? " " : "") << detail::num(result.params[i]);
            }
            out << '\n';
            if (!result.converged) {
                err << "optimize: evaluation budget exhausted before reaching tol; reporting best found\n";
            }
            return kOk;
        }
        if (*polynomial) {
            dump_polynomial(out, operator_polynomial(detail::operator_arg(poly_op), poly_n));
            return kOk;
        }
    } catch (const bellbound::ParseError &e) {
        err << "error: " << e.what() << '\n';
        return kFileOrParse;
    } catch (const InvariantViolation &e) {
        err << "invariant violation: " << e.what() << '\n';
        return kInvariant;
    } catch (const std::invalid_argument &e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::out_of_range &e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception &e) {
        err << "internal error: " << e.what() << '\n';
        return kInvariant;
    }
    return kUsage;
}

}  // namespace bellbound::cli
