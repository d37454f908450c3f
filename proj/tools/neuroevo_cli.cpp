// Command-line front end over the neuroevo C API.
//
//   neuroevo run --config <file> [--engine E] [--seed N] [--out DIR]
//   neuroevo aggregate --in DIR --out FILE
//   neuroevo curves --report FILE --out DIR

#include "neuroevo/neuroevo.h"

#include <CLI11.hpp>

#include <cstdio>
#include <memory>
#include <optional>
#include <string>

namespace {

// Exit codes: 0 success, otherwise 10 + ne_status so the category is visible.
int report_failure(ne_status status) {
    std::fprintf(stderr, "neuroevo: %s error: %s\n", ne_status_name(status), ne_last_error());
    return 10 + static_cast<int>(status);
}

struct ConfigDeleter {
    void operator()(ne_config* c) const { ne_config_free(c); }
};
struct ReportDeleter {
    void operator()(ne_report* r) const { ne_report_free(r); }
};

int run_command(const std::string& config_path, const std::optional<std::string>& engine,
                const std::optional<std::string>& seed, const std::optional<std::string>& threads,
                const std::string& out_dir) {
    ne_config* raw = nullptr;
    if (ne_status s = ne_config_load(config_path.c_str(), &raw); s != NE_OK) return report_failure(s);
    std::unique_ptr<ne_config, ConfigDeleter> config(raw);
    const std::pair<const char*, const std::optional<std::string>&> overrides[] = {
        {"engine", engine}, {"seed", seed}, {"threads", threads}};
    for (const auto& [key, value] : overrides) {
        if (!value) continue;
        if (ne_status s = ne_config_set(config.get(), key, value->c_str()); s != NE_OK) return report_failure(s);
    }

    ne_report* report_raw = nullptr;
    if (ne_status s = ne_run(config.get(), out_dir.c_str(), &report_raw); s != NE_OK) return report_failure(s);
    std::unique_ptr<ne_report, ReportDeleter> report(report_raw);

    double train = 0, valid = 0, test = 0, seconds = 0;
    size_t charged = 0, budget = 0;
    ne_report_accuracy(report.get(), &train, &valid, &test);
    ne_report_fes(report.get(), &charged, &budget);
    ne_report_wall_clock(report.get(), &seconds);
    std::printf("train %.4f  validation %.4f  test %.4f  FEs %zu/%zu  %.2fs\n", train, valid, test, charged, budget,
                seconds);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Neuroevolution of fixed-topology networks with DE, LEDE, CCDE and LECCDE"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(ne_version()));

    auto* run = app.add_subcommand("run", "Run one experiment and write its report");
    std::string config_path;
    std::optional<std::string> engine, seed, threads;
    std::string out_dir = "results";
    run->add_option("--config", config_path, "Experiment config file")->required()->check(CLI::ExistingFile);
    run->add_option("--engine", engine, "Override the engine (DE, LEDE, CCDE, LECCDE)");
    run->add_option("--seed", seed, "Override the evolution seed");
    run->add_option("--threads", threads, "Worker threads for candidate evaluation");
    run->add_option("--out", out_dir, "Output directory")->capture_default_str();

    auto* aggregate = app.add_subcommand("aggregate", "Median/variance table over a directory of reports");
    std::string in_dir, out_file;
    aggregate->add_option("--in", in_dir, "Directory with *.report.json files")->required();
    aggregate->add_option("--out", out_file, "Summary table to write")->required();

    auto* curves = app.add_subcommand("curves", "Accuracy-vs-FE series of one report");
    std::string report_path, curves_dir;
    curves->add_option("--report", report_path, "Report file")->required()->check(CLI::ExistingFile);
    curves->add_option("--out", curves_dir, "Output directory")->required();

    CLI11_PARSE(app, argc, argv);

    if (*run) return run_command(config_path, engine, seed, threads, out_dir);
    if (*aggregate) {
        if (ne_status s = ne_aggregate_dir(in_dir.c_str(), out_file.c_str()); s != NE_OK) return report_failure(s);
        std::printf("wrote %s\n", out_file.c_str());
        return 0;
    }
    ne_report* raw = nullptr;
    if (ne_status s = ne_report_load(report_path.c_str(), &raw); s != NE_OK) return report_failure(s);
    std::unique_ptr<ne_report, ReportDeleter> report(raw);
    if (ne_status s = ne_emit_curves(report.get(), curves_dir.c_str()); s != NE_OK) return report_failure(s);
    std::printf("wrote curves to %s\n", curves_dir.c_str());
    return 0;
}
