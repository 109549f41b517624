#ifndef GRADSEM_SCORER_HPP
#define GRADSEM_SCORER_HPP

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "gradsem/distribution.hpp"

namespace gradsem {

enum class Experiment { E1, E2 };
enum class StimulusForm { Exceeds, Below };

std::string to_string(Experiment e);
std::string to_string(StimulusForm f);
Experiment experiment_from_string(const std::string& s);
StimulusForm form_from_string(const std::string& s);

// A natural-language sentence to interpret. `form` selects the candidate
// template: Exceeds pairs with (condition (> ...)), Below with
// (condition (< ...)).
struct Stimulus {
    std::string id;
    std::string sentence;
    StimulusForm form = StimulusForm::Exceeds;
    Experiment experiment = Experiment::E1;
    std::map<std::string, std::string> metadata;  // free-form tags
};

// One threshold-parameterized parse candidate.
struct CandidateProgram {
    double theta = 0.0;
    std::string text;
};

// The fixed context handed to the scoring backend: world model program
// (byte-identical to the bundled asset), task instructions, and the
// frame that injects the evaluated sentence. "{sentence}" in the frame
// is replaced verbatim.
struct PromptBundle {
    std::string domain_text;
    std::string instruction_text;
    std::string sentence_frame = ";; Sentence: {sentence}\n;; Program:\n";

    static PromptBundle load(const std::string& domain_path, const std::string& instruction_path);
};

// Raw backend log-probabilities (nats) over the theta grid for one
// stimulus, in grid order.
struct ScoreVector {
    std::string stimulus_id;
    Eigen::VectorXd thetas;
    Eigen::VectorXd logprobs;
    std::string backend_id;
    std::string prompt_hash;
};

// Integer thetas print without a decimal point, so candidate programs
// read "(... 50)" rather than "(... 50.0)".
std::string format_theta(double theta);

// One candidate per grid value, template chosen by the stimulus form.
std::vector<CandidateProgram> build_candidates(const Stimulus& stimulus, const ThetaGrid& grid);

// domain + instructions + framed sentence, ending exactly where the
// candidate continuation begins. Byte-stable for fixed inputs.
std::string assemble_prompt(const PromptBundle& bundle, const Stimulus& stimulus);

class ScoringBackend;

// Sum of continuation token log-probabilities conditioned on the prompt,
// as reported by the backend. No length normalization is applied.
double score_continuation(ScoringBackend& backend, const std::string& prompt,
                          const std::string& continuation, const std::string& stimulus_id = {});

// Scores every candidate for one stimulus. Requests may be issued
// concurrently up to max_inflight; results are keyed by candidate index,
// so completion order never affects output. Any failing candidate fails
// the whole stimulus.
ScoreVector score_stimulus(ScoringBackend& backend, const PromptBundle& bundle,
                           const Stimulus& stimulus, const ThetaGrid& grid, int max_inflight = 1);

}  // namespace gradsem

#endif  // GRADSEM_SCORER_HPP
