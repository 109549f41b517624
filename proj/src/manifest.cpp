#include "gradsem/manifest.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "gradsem/errors.hpp"

namespace gradsem {

namespace fs = std::filesystem;
using nlohmann::json;

ExperimentManifest load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open manifest: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ValidationError("manifest parse error in " + path + ": " + e.what());
    }

    ExperimentManifest manifest;
    manifest.source_path = path;
    try {
        manifest.experiment = experiment_from_string(doc.at("experiment").get<std::string>());
        manifest.world_model_asset = doc.at("world_model_asset").get<std::string>();
        manifest.notes = doc.value("notes", std::string{});
        if (doc.contains("grid")) {
            const auto& g = doc["grid"];
            Eigen::VectorXd values(g.size());
            for (std::size_t i = 0; i < g.size(); ++i)
                values[static_cast<Eigen::Index>(i)] = g[i].get<double>();
            manifest.grid = ThetaGrid(values);
        } else {
            manifest.grid = ThetaGrid::default_grid();
        }

        const auto& stimuli = doc.at("stimuli");
        if (!stimuli.is_array() || stimuli.empty())
            throw ValidationError("manifest field 'stimuli' must be a non-empty array");
        std::set<std::string> seen;
        for (std::size_t i = 0; i < stimuli.size(); ++i) {
            const auto& s = stimuli[i];
            Stimulus stimulus;
            stimulus.id = s.at("id").get<std::string>();
            stimulus.sentence = s.at("sentence").get<std::string>();
            stimulus.form = form_from_string(s.at("form").get<std::string>());
            stimulus.experiment = manifest.experiment;
            if (s.contains("metadata")) {
                for (const auto& [key, value] : s["metadata"].items())
                    stimulus.metadata[key] = value.get<std::string>();
            }
            if (stimulus.id.empty())
                throw ValidationError("manifest stimulus " + std::to_string(i) +
                                      ": field 'id' is empty");
            if (stimulus.sentence.empty())
                throw ValidationError("manifest stimulus '" + stimulus.id +
                                      "': field 'sentence' is empty");
            if (!seen.insert(stimulus.id).second)
                throw ValidationError("manifest stimulus '" + stimulus.id +
                                      "': duplicate id");
            manifest.stimuli.push_back(std::move(stimulus));
        }
    } catch (const json::exception& e) {
        throw ValidationError("manifest field error in " + path + ": " + e.what());
    }

    // Asset paths resolve relative to the manifest's own directory.
    const fs::path asset(manifest.world_model_asset);
    if (asset.is_relative())
        manifest.world_model_asset = (fs::path(path).parent_path() / asset).string();
    return manifest;
}

namespace {

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

}  // namespace

std::map<std::string, HumanResponses> load_human_csv(const std::string& path,
                                                     const ExperimentManifest& manifest) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open human responses: " + path);

    std::set<std::string> known;
    for (const Stimulus& s : manifest.stimuli) known.insert(s.id);

    std::map<std::string, HumanResponses> out;
    std::string line;
    int row = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        const std::vector<std::string> fields = split_csv_row(line);
        if (!saw_header) {
            if (fields.size() != 3 || fields[0] != "participant_id" ||
                fields[1] != "stimulus_id" || fields[2] != "estimate")
                throw ValidationError(
                    path + " row " + std::to_string(row) +
                    ": expected header participant_id,stimulus_id,estimate");
            saw_header = true;
            continue;
        }
        if (fields.size() != 3)
            throw ValidationError(path + " row " + std::to_string(row) +
                                  ": expected 3 fields, got " + std::to_string(fields.size()));
        const std::string& participant = fields[0];
        const std::string& stimulus_id = fields[1];
        if (known.find(stimulus_id) == known.end())
            throw ValidationError(path + " row " + std::to_string(row) +
                                  ": unknown stimulus_id '" + stimulus_id + "'");
        double estimate = 0.0;
        try {
            std::size_t used = 0;
            estimate = std::stod(fields[2], &used);
            if (used != fields[2].size()) throw std::invalid_argument(fields[2]);
        } catch (const std::exception&) {
            throw ValidationError(path + " row " + std::to_string(row) +
                                  ": estimate is not a number: '" + fields[2] + "'");
        }
        if (!(estimate >= 0.0 && estimate <= 100.0))
            throw ValidationError(path + " row " + std::to_string(row) +
                                  ": estimate " + fields[2] + " outside [0,100]");
        HumanResponses& responses = out[stimulus_id];
        responses.stimulus_id = stimulus_id;
        responses.estimates.push_back(estimate);
        responses.participant_ids.push_back(participant);
    }
    if (!saw_header || out.empty()) throw ValidationError(path + ": no responses");
    return out;
}

}  // namespace gradsem
