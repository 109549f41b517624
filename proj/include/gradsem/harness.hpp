#ifndef GRADSEM_HARNESS_HPP
#define GRADSEM_HARNESS_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gradsem/backend.hpp"
#include "gradsem/calibrate.hpp"
#include "gradsem/manifest.hpp"
#include "gradsem/stats.hpp"

namespace gradsem {

struct RunConfig {
    BackendConfig backend;
    int n_permutations = 10000;
    std::uint64_t seed = 0;
    double significance_level = 0.05;
    std::string output_dir;
    LoocvPooling loocv_pooling = LoocvPooling::PerExperiment;
    PermutationMode permutation_mode = PermutationMode::BothShuffled;
    PValueEstimator p_value_estimator = PValueEstimator::Strict;
    int parallel_width = 2;  // concurrent stimuli during scoring
    bool offline = false;    // force fixture replay, fail on any miss
};

struct ResultRow {
    std::string stimulus_id;
    std::string sentence;
    double alpha = 1.0;
    Distribution model;
    Distribution human;
    double jsd = 0.0;
    double p_raw = 1.0;
    double p_fdr = 1.0;
    bool significant = false;
};

struct RunOutput {
    std::vector<ResultRow> rows;
    std::string run_record_json;  // full reproducibility record
};

// Scores every stimulus, fits per-stimulus temperatures by LOOCV,
// builds human distributions, computes JSD and permutation p-values,
// and applies BH-FDR across the experiment. Per-stimulus statistics
// streams are derived from the master seed and the stimulus id, so
// results are independent of processing order. On backend failure a
// partial-run record naming the completed stimuli is written to the
// output directory before the error propagates.
RunOutput run_experiment(const ExperimentManifest& manifest,
                         const std::map<std::string, HumanResponses>& human_data,
                         const RunConfig& config);

// Writes results.csv, run_record.json, and per-stimulus plot data under
// config.output_dir. Refuses rows containing NaN.
void emit_results(const RunOutput& output, const RunConfig& config);

// Serializes the results table; emit_results writes exactly these bytes.
std::string results_table_csv(const std::vector<ResultRow>& rows);

// Deterministic synthetic human responses shaped around each stimulus's
// mock target (E1: 29 participants, E2: 30). Returns CSV text.
std::string synthesize_human_csv(const ExperimentManifest& manifest, std::uint64_t seed,
                                 int participants = 0);

}  // namespace gradsem

#endif  // GRADSEM_HARNESS_HPP
