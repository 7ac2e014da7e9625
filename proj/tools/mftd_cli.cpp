#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mftd/config.hpp"
#include "mftd/errors.hpp"
#include "mftd/experiment.hpp"

namespace {

int cmd_validate(const std::string& path) {
    std::vector<mftd::Diagnostic> diags;
    try {
        diags = mftd::validate(mftd::load_config_file(path));
    } catch (const mftd::Error& e) {
        std::cout << "error: " << e.what() << '\n';
        return 1;
    }
    bool failed = false;
    for (const auto& d : diags) {
        const bool err = d.level == mftd::Diagnostic::Level::error;
        failed |= err;
        std::cout << (err ? "error: " : "warning: ") << d.message << '\n';
    }
    if (diags.empty()) std::cout << "ok\n";
    return failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-frequency topological-derivative imaging of thin inclusions"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out";
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    bool quiet = false;

    auto* run = app.add_subcommand("run", "run an experiment and write its artifacts");
    run->add_option("--config", config_path, "experiment config file")->required()->check(CLI::ExistingFile);
    run->add_option("--seed", seed, "master seed (overrides the config)");
    run->add_option("--out", out_dir, "output directory");
    run->add_option("--workers", workers, "worker threads, 0 for all cores");
    run->add_flag("--quiet", quiet, "no progress output");

    std::string validate_path;
    auto* val = app.add_subcommand("validate", "check a config without running it");
    val->add_option("--config", validate_path, "experiment config file")->required();

    std::string preset_dir = "presets";
    auto* exp = app.add_subcommand("export-presets", "write the shipped preset configs");
    exp->add_option("--out", preset_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*val) return cmd_validate(validate_path);
        if (*exp) {
            for (const auto& p : mftd::export_presets(preset_dir)) std::cout << p << '\n';
            return 0;
        }
        mftd::RunOptions opts;
        opts.seed = seed;
        opts.workers = workers;
        if (!quiet) opts.log = &std::cerr;
        const auto bundle = mftd::run_experiment(mftd::load_config_file(config_path), out_dir, opts);
        std::cout << "wrote " << bundle.files.size() + 1 << " files to " << bundle.directory << '\n';
        return 0;
    } catch (const mftd::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
