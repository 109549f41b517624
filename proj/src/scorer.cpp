#include "gradsem/scorer.hpp"

#include <fstream>
#include <sstream>

#include "gradsem/backend.hpp"
#include "gradsem/errors.hpp"
#include "gradsem/hash.hpp"
#include "gradsem/parallel.hpp"

namespace gradsem {

std::string to_string(Experiment e) { return e == Experiment::E1 ? "E1" : "E2"; }

std::string to_string(StimulusForm f) {
    return f == StimulusForm::Exceeds ? "exceeds" : "below";
}

Experiment experiment_from_string(const std::string& s) {
    if (s == "E1" || s == "e1") return Experiment::E1;
    if (s == "E2" || s == "e2") return Experiment::E2;
    throw ValidationError("unknown experiment '" + s + "' (expected E1 or E2)");
}

StimulusForm form_from_string(const std::string& s) {
    if (s == "exceeds") return StimulusForm::Exceeds;
    if (s == "below") return StimulusForm::Below;
    throw ValidationError("unknown stimulus form '" + s + "' (expected exceeds or below)");
}

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

PromptBundle PromptBundle::load(const std::string& domain_path,
                                const std::string& instruction_path) {
    PromptBundle bundle;
    bundle.domain_text = read_file(domain_path);
    bundle.instruction_text = read_file(instruction_path);
    return bundle;
}

std::string format_theta(double theta) {
    if (theta == static_cast<double>(static_cast<long long>(theta))) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(theta));
        return buf;
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", theta);
    return buf;
}

std::vector<CandidateProgram> build_candidates(const Stimulus& stimulus, const ThetaGrid& grid) {
    const char op = stimulus.form == StimulusForm::Exceeds ? '>' : '<';
    std::vector<CandidateProgram> out;
    out.reserve(static_cast<std::size_t>(grid.size()));
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        CandidateProgram candidate;
        candidate.theta = grid.values[i];
        candidate.text = std::string("(condition (") + op + " (strength 'jack) " +
                         format_theta(candidate.theta) + "))";
        out.push_back(std::move(candidate));
    }
    return out;
}

std::string assemble_prompt(const PromptBundle& bundle, const Stimulus& stimulus) {
    if (stimulus.sentence.empty())
        throw ValidationError("stimulus '" + stimulus.id + "' has an empty sentence");
    std::string frame = bundle.sentence_frame;
    const std::string placeholder = "{sentence}";
    const std::size_t pos = frame.find(placeholder);
    if (pos == std::string::npos)
        throw ValidationError("sentence frame is missing the {sentence} placeholder");
    frame.replace(pos, placeholder.size(), stimulus.sentence);
    return bundle.domain_text + "\n" + bundle.instruction_text + "\n" + frame;
}

double score_continuation(ScoringBackend& backend, const std::string& prompt,
                          const std::string& continuation, const std::string& stimulus_id) {
    if (continuation.empty()) throw ValidationError("cannot score an empty continuation");
    ScoreRequest request;
    request.prompt = prompt;
    request.continuation = continuation;
    request.stimulus_id = stimulus_id;
    return backend.score(request);
}

ScoreVector score_stimulus(ScoringBackend& backend, const PromptBundle& bundle,
                           const Stimulus& stimulus, const ThetaGrid& grid, int max_inflight) {
    const std::string prompt = assemble_prompt(bundle, stimulus);
    const std::vector<CandidateProgram> candidates = build_candidates(stimulus, grid);

    ScoreVector out;
    out.stimulus_id = stimulus.id;
    out.backend_id = backend.id();
    out.prompt_hash = fnv1a64_hex(prompt);
    out.thetas = grid.values;
    out.logprobs.resize(grid.size());

    // Results land by candidate index, so completion order is irrelevant.
    parallel_for_indexed(candidates.size(), max_inflight, [&](std::size_t i) {
        out.logprobs[static_cast<Eigen::Index>(i)] =
            score_continuation(backend, prompt, candidates[i].text, stimulus.id);
    });

    if (!out.logprobs.allFinite())
        throw BackendError("backend returned a non-finite logprob for stimulus '" + stimulus.id +
                           "'");
    return out;
}

}  // namespace gradsem
