#ifndef GRADSEM_MANIFEST_HPP
#define GRADSEM_MANIFEST_HPP

#include <map>
#include <string>
#include <vector>

#include "gradsem/distribution.hpp"
#include "gradsem/scorer.hpp"
#include "gradsem/stats.hpp"

namespace gradsem {

struct ExperimentManifest {
    Experiment experiment = Experiment::E1;
    std::string world_model_asset;  // path, resolved relative to the manifest file
    ThetaGrid grid;
    std::vector<Stimulus> stimuli;
    std::string notes;
    std::string source_path;  // where the manifest was loaded from
};

// Loads and validates a JSON manifest: unique stimulus ids, non-empty
// sentences, known enum values. Errors name the offending field.
ExperimentManifest load_manifest(const std::string& path);

// Reads a CSV with header participant_id,stimulus_id,estimate and groups
// rows per stimulus. Unknown stimulus ids and estimates outside [0,100]
// are errors carrying the row number.
std::map<std::string, HumanResponses> load_human_csv(const std::string& path,
                                                     const ExperimentManifest& manifest);

}  // namespace gradsem

#endif  // GRADSEM_MANIFEST_HPP
