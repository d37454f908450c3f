#include "neuroevo/report.hpp"

#include "neuroevo/error.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace neuroevo {

using Json = nlohmann::ordered_json;

namespace {

constexpr const char* kFormat = "neuroevo-run-report/1";

Json generation_json(const GenerationRecord& g, bool include_timing) {
    Json j;
    j["generation"] = g.generation;
    j["epoch"] = g.epoch;
    j["batch"] = g.batch;
    j["fes"] = g.fes;
    j["best_fitness"] = g.best_fitness;
    j["validation"] = g.validation;
    j["best_validation"] = g.best_validation;
    if (include_timing) j["elapsed_seconds"] = g.elapsed_seconds;
    return j;
}

Json subpop_json(const SubpopUpdateRecord& s) {
    Json j;
    j["generation"] = s.generation;
    j["epoch"] = s.epoch;
    j["batch"] = s.batch;
    j["subpop"] = s.subpop;
    j["fes"] = s.fes;
    j["best_fitness"] = s.best_fitness;
    j["validation"] = s.validation;
    j["best_validation"] = s.best_validation;
    return j;
}

template <typename T>
T field(const Json& j, const char* key) {
    if (!j.contains(key)) throw Error(ErrorCategory::Data, std::string("report is missing field '") + key + "'");
    return j.at(key).get<T>();
}

}  // namespace

std::string report_to_json(const RunReport& report, bool include_timing) {
    Json doc;
    doc["format"] = kFormat;
    doc["engine"] = report.engine;
    doc["seed"] = report.seed;
    Json config = Json::object();
    for (const auto& [key, value] : report.config) config[key] = value;
    doc["config"] = std::move(config);
    doc["fe_budget"] = report.fe_budget;
    doc["evaluations"] = {{"training", report.evaluations.training},
                          {"validation", report.evaluations.validation},
                          {"final_train", report.evaluations.final_train},
                          {"test", report.evaluations.test}};

    Json generations = Json::array();
    for (const auto& g : report.generations) generations.push_back(generation_json(g, include_timing && report.has_timing));
    doc["generations"] = std::move(generations);
    Json updates = Json::array();
    for (const auto& s : report.subpop_updates) updates.push_back(subpop_json(s));
    doc["subpop_updates"] = std::move(updates);

    const auto& f = report.final;
    doc["final"] = {{"train_accuracy", f.train_accuracy},
                    {"validation_accuracy", f.validation_accuracy},
                    {"test_accuracy", f.test_accuracy},
                    {"layout", {f.layout.n_inputs, f.layout.n_hidden, f.layout.n_outputs}},
                    {"best_network", f.best_network}};
    if (include_timing && report.has_timing) {
        doc["execution"] = {{"wall_clock_seconds", report.wall_clock_seconds}, {"threads", report.threads}};
    }
    return doc.dump(1) + "\n";
}

RunReport report_from_json(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCategory::Data, std::string("malformed report: ") + e.what());
    }
    try {
        if (field<std::string>(doc, "format") != kFormat) throw Error(ErrorCategory::Data, "unsupported report format");
        RunReport report;
        report.engine = field<std::string>(doc, "engine");
        report.seed = field<std::uint64_t>(doc, "seed");
        for (const auto& [key, value] : doc.at("config").items()) report.config.emplace_back(key, value.get<std::string>());
        report.fe_budget = field<std::size_t>(doc, "fe_budget");
        const auto& ev = doc.at("evaluations");
        report.evaluations = {field<std::size_t>(ev, "training"), field<std::size_t>(ev, "validation"),
                              field<std::size_t>(ev, "final_train"), field<std::size_t>(ev, "test")};
        for (const auto& g : doc.at("generations")) {
            GenerationRecord rec;
            rec.generation = field<std::size_t>(g, "generation");
            rec.epoch = field<std::size_t>(g, "epoch");
            rec.batch = field<std::size_t>(g, "batch");
            rec.fes = field<std::size_t>(g, "fes");
            rec.best_fitness = field<double>(g, "best_fitness");
            rec.validation = field<double>(g, "validation");
            rec.best_validation = field<double>(g, "best_validation");
            if (g.contains("elapsed_seconds")) rec.elapsed_seconds = g.at("elapsed_seconds").get<double>();
            report.generations.push_back(rec);
        }
        for (const auto& s : doc.at("subpop_updates")) {
            report.subpop_updates.push_back({field<std::size_t>(s, "generation"), field<std::size_t>(s, "epoch"),
                                             field<std::size_t>(s, "batch"), field<std::size_t>(s, "subpop"),
                                             field<std::size_t>(s, "fes"), field<double>(s, "best_fitness"),
                                             field<double>(s, "validation"), field<double>(s, "best_validation")});
        }
        const auto& f = doc.at("final");
        report.final.train_accuracy = field<double>(f, "train_accuracy");
        report.final.validation_accuracy = field<double>(f, "validation_accuracy");
        report.final.test_accuracy = field<double>(f, "test_accuracy");
        const auto layout = field<std::vector<std::size_t>>(f, "layout");
        if (layout.size() != 3) throw Error(ErrorCategory::Data, "report layout must have three entries");
        report.final.layout = {layout[0], layout[1], layout[2]};
        report.final.best_network = field<Genotype>(f, "best_network");
        if (report.final.best_network.size() != genotype_len(report.final.layout)) {
            throw_dimension_mismatch("report genotype", genotype_len(report.final.layout),
                                     report.final.best_network.size());
        }
        if (doc.contains("execution")) {
            report.has_timing = true;
            report.wall_clock_seconds = field<double>(doc.at("execution"), "wall_clock_seconds");
            report.threads = field<std::size_t>(doc.at("execution"), "threads");
        }
        return report;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCategory::Data, std::string("malformed report: ") + e.what());
    }
}

void save_report(const RunReport& report, const std::string& path, bool include_timing) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCategory::Io, "cannot write report: " + path);
    out << report_to_json(report, include_timing);
    if (!out) throw Error(ErrorCategory::Io, "failed writing report: " + path);
}

RunReport load_report(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCategory::Io, "cannot read report: " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return report_from_json(text.str());
}

}  // namespace neuroevo
