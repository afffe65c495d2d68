/*
 Copyright 2026 The disevo Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include <CLI/CLI.hpp>

#include <iostream>

#include "cli/commands.hpp"

namespace dc = disevo::cli;

int main(int argc, char** argv) {
    CLI::App app{"Constraint analysis and canonical evolution for quadratic discrete actions"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("disevo 0.1.0"));

    dc::Options opts;
    std::string mode, format = "json";
    std::optional<double> tol;
    std::vector<std::string> files;

    auto common = [&](CLI::App* cmd) {
        cmd->add_option("--mode", mode, "Arithmetic: exact or float (DISEVO_MODE overrides)")
            ->check(CLI::IsMember({"exact", "float"}));
        cmd->add_option("--tol", tol, "Relative rank tolerance for float mode")->check(CLI::PositiveNumber);
        cmd->add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "csv"}));
        cmd->add_option("--seed", opts.seed, "Random seed");
        cmd->add_flag("--strict", opts.strict, "Require explicit values for every free parameter");
    };

    auto* analyze = app.add_subcommand("analyze", "Derive, propagate and classify constraints");
    common(analyze);
    analyze->add_option("scenario", files, "Scenario files")->required()->check(CLI::ExistingFile);

    auto* evolve = app.add_subcommand("evolve", "Evolve initial data through the scenario");
    common(evolve);
    evolve->add_option("scenario", files, "Scenario files")->required()->check(CLI::ExistingFile);

    auto* dof = app.add_subcommand("dof", "Count propagating degrees of freedom");
    common(dof);
    dof->add_option("scenario", files, "Scenario files")->required()->check(CLI::ExistingFile);
    dof->add_option("--i", opts.i, "Initial slice");
    dof->add_option("--n", opts.n, "Intermediate slice for the reduced phase space");
    dof->add_option("--f", opts.f, "Final slice");

    auto* verify = app.add_subcommand("verify", "Run the randomized invariant suites");
    common(verify);
    verify->add_option("--suite", opts.suites, "Suite to run (repeatable; default all)");
    verify->add_option("--count", opts.count, "Cases per suite")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : dc::exit_usage;
    }

    dc::Outcome out;
    try {
        if (!mode.empty()) opts.mode = disevo::parse_mode(mode);
        opts.tolerance = tol;
        opts.format = dc::parse_format(format);
        if (*analyze)
            out = dc::analyze(files, opts);
        else if (*evolve)
            out = dc::evolve(files, opts);
        else if (*dof)
            out = dc::dof(files, opts);
        else
            out = dc::verify(opts);
    } catch (const std::exception& e) {
        std::cerr << "disevo: " << e.what() << "\n";
        return dc::exit_usage;
    }
    std::cout << out.out;
    if (!out.err.empty()) std::cerr << out.err;
    return out.code;
}
