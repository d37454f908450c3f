#include "neuroevo/neuroevo.h"

#include "neuroevo/error.hpp"
#include "neuroevo/runner.hpp"

#include <new>
#include <string>

struct ne_config {
    neuroevo::ExperimentConfig value;
};

struct ne_report {
    neuroevo::RunReport value;
};

namespace {

thread_local std::string last_error;

ne_status to_status(neuroevo::ErrorCategory category) {
    using neuroevo::ErrorCategory;
    switch (category) {
        case ErrorCategory::InvalidArgument: return NE_ERR_INVALID_ARGUMENT;
        case ErrorCategory::Config: return NE_ERR_CONFIG;
        case ErrorCategory::Data: return NE_ERR_DATA;
        case ErrorCategory::Budget: return NE_ERR_BUDGET;
        case ErrorCategory::Io: return NE_ERR_IO;
        case ErrorCategory::Runtime: return NE_ERR_RUNTIME;
    }
    return NE_ERR_RUNTIME;
}

ne_status fail(ne_status status, std::string message) {
    last_error = std::move(message);
    return status;
}

template <typename Fn>
ne_status guarded(Fn&& fn) {
    try {
        last_error.clear();
        fn();
        return NE_OK;
    } catch (const neuroevo::Error& e) {
        return fail(to_status(e.category()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(NE_ERR_RUNTIME, "out of memory");
    } catch (const std::exception& e) {
        return fail(NE_ERR_RUNTIME, e.what());
    }
}

#define NE_REQUIRE(ptr)                                                                 \
    do {                                                                                \
        if ((ptr) == nullptr) return fail(NE_ERR_INVALID_ARGUMENT, #ptr " is NULL");    \
    } while (0)

}  // namespace

extern "C" {

const char* ne_version(void) { return "1.0.0"; }

const char* ne_status_name(ne_status status) {
    switch (status) {
        case NE_OK: return "ok";
        case NE_ERR_INVALID_ARGUMENT: return "invalid-argument";
        case NE_ERR_CONFIG: return "config";
        case NE_ERR_DATA: return "data";
        case NE_ERR_BUDGET: return "budget";
        case NE_ERR_IO: return "io";
        case NE_ERR_RUNTIME: return "runtime";
    }
    return "unknown";
}

const char* ne_last_error(void) { return last_error.c_str(); }

ne_status ne_config_load(const char* path, ne_config** out) {
    NE_REQUIRE(path);
    NE_REQUIRE(out);
    return guarded([&] { *out = new ne_config{neuroevo::load_config(path)}; });
}

ne_status ne_config_parse(const char* text, const char* base_dir, ne_config** out) {
    NE_REQUIRE(text);
    NE_REQUIRE(out);
    return guarded([&] { *out = new ne_config{neuroevo::parse_config(text, base_dir ? base_dir : "")}; });
}

ne_status ne_config_set(ne_config* config, const char* key, const char* value) {
    NE_REQUIRE(config);
    NE_REQUIRE(key);
    NE_REQUIRE(value);
    return guarded([&] { neuroevo::apply_setting(config->value, key, value); });
}

void ne_config_free(ne_config* config) { delete config; }

ne_status ne_run(const ne_config* config, const char* out_dir, ne_report** out) {
    NE_REQUIRE(config);
    return guarded([&] {
        auto output = neuroevo::run_experiment(config->value);
        if (out_dir) neuroevo::persist_run(output, config->value, out_dir);
        if (out) *out = new ne_report{std::move(output.report)};
    });
}

ne_status ne_report_load(const char* path, ne_report** out) {
    NE_REQUIRE(path);
    NE_REQUIRE(out);
    return guarded([&] { *out = new ne_report{neuroevo::load_report(path)}; });
}

ne_status ne_report_save(const ne_report* report, const char* path, int include_timing) {
    NE_REQUIRE(report);
    NE_REQUIRE(path);
    return guarded([&] { neuroevo::save_report(report->value, path, include_timing != 0); });
}

ne_status ne_report_accuracy(const ne_report* report, double* train, double* validation, double* test) {
    NE_REQUIRE(report);
    const auto& f = report->value.final;
    if (train) *train = f.train_accuracy;
    if (validation) *validation = f.validation_accuracy;
    if (test) *test = f.test_accuracy;
    return NE_OK;
}

ne_status ne_report_fes(const ne_report* report, size_t* charged, size_t* budget) {
    NE_REQUIRE(report);
    if (charged) *charged = report->value.evaluations.training;
    if (budget) *budget = report->value.fe_budget;
    return NE_OK;
}

ne_status ne_report_generations(const ne_report* report, size_t* count) {
    NE_REQUIRE(report);
    NE_REQUIRE(count);
    *count = report->value.generations.size();
    return NE_OK;
}

ne_status ne_report_wall_clock(const ne_report* report, double* seconds) {
    NE_REQUIRE(report);
    NE_REQUIRE(seconds);
    *seconds = report->value.wall_clock_seconds;
    return NE_OK;
}

void ne_report_free(ne_report* report) { delete report; }

ne_status ne_emit_curves(const ne_report* report, const char* out_dir) {
    NE_REQUIRE(report);
    NE_REQUIRE(out_dir);
    return guarded([&] { neuroevo::emit_curves(report->value, out_dir); });
}

ne_status ne_aggregate_dir(const char* in_dir, const char* out_file) {
    NE_REQUIRE(in_dir);
    NE_REQUIRE(out_file);
    return guarded([&] { neuroevo::aggregate_directory(in_dir, out_file); });
}

ne_status ne_genotype_len(size_t n_inputs, size_t n_hidden, size_t n_outputs, size_t* out) {
    NE_REQUIRE(out);
    return guarded([&] {
        const neuroevo::NetworkLayout layout{n_inputs, n_hidden, n_outputs};
        layout.validate();
        *out = neuroevo::genotype_len(layout);
    });
}

}  // extern "C"
