#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "fracgreen/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"fracgreen: nonlocal Dirichlet problems with measure data on the unit ball"};
    app.require_subcommand(1);

    fracgreen::RunManifest manifest;
    std::vector<std::string> overrides;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--spec", manifest.spec_path, "problem document (JSON)")
            ->required();
        cmd->add_option("--out", manifest.out_dir, "output directory")->required();
        cmd->add_option("--seed", manifest.seed, "seed for probe sets and batteries");
        cmd->add_option("--set", overrides,
                        "override spec entries, dotted key=value (repeatable)");
    };

    auto* solve = app.add_subcommand("solve", "solve and emit solution.csv + diagnostics.json");
    auto* verify = app.add_subcommand("verify", "run the residual/invariant gates");
    auto* sweep = app.add_subcommand("sweep", "critical-exponent refinement sweep");
    auto* boundary = app.add_subcommand("boundary", "boundary-concentrated schedule");
    auto* stability = app.add_subcommand("stability", "data-perturbation convergence");
    for (auto* cmd : {solve, verify, sweep, boundary, stability}) add_common(cmd);

    CLI11_PARSE(app, argc, argv);

    if (solve->parsed()) manifest.command = fracgreen::Command::Solve;
    if (verify->parsed()) manifest.command = fracgreen::Command::Verify;
    if (sweep->parsed()) manifest.command = fracgreen::Command::Sweep;
    if (boundary->parsed()) manifest.command = fracgreen::Command::Boundary;
    if (stability->parsed()) manifest.command = fracgreen::Command::Stability;

    for (const auto& kv : overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            std::cerr << "error: --set expects key=value, got '" << kv << "'\n";
            return 2;
        }
        manifest.overrides.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
    }
    return fracgreen::run(manifest);
}
