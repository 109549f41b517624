#include "gradsem/rsa.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "gradsem/errors.hpp"

namespace gradsem::rsa {

bool meaning_holds(Meaning meaning, double strength, double theta) {
    switch (meaning) {
        case Meaning::ThresholdAbove:
            return strength > theta;
        case Meaning::ThresholdBelow:
            return strength < theta;
        case Meaning::AlwaysTrue:
            return true;
    }
    return false;
}

Eigen::VectorXd discretized_gaussian(const Eigen::VectorXd& grid, double mean, double sd) {
    if (!(sd > 0.0)) throw ValidationError("rsa: gaussian prior requires sd > 0");
    Eigen::VectorXd density =
        (-(grid.array() - mean).square() / (2.0 * sd * sd)).exp();
    return density / density.sum();
}

RSAConfig RSAConfig::defaults() {
    RSAConfig config;
    config.strength_grid = Eigen::VectorXd::LinSpaced(51, 0.0, 100.0);
    config.theta_grid = ThetaGrid::default_grid();
    config.strength_prior = discretized_gaussian(config.strength_grid, 50.0, 20.0);
    config.theta_prior = Eigen::VectorXd::Constant(
        config.theta_grid.size(), 1.0 / static_cast<double>(config.theta_grid.size()));
    config.utterances = {{"strong", Meaning::ThresholdAbove, 0.0},
                         {"null", Meaning::AlwaysTrue, 0.0}};
    config.rationality = 1.0;
    return config;
}

void RSAConfig::validate() const {
    if (strength_grid.size() == 0) throw ValidationError("rsa: empty strength grid");
    for (Eigen::Index i = 1; i < strength_grid.size(); ++i) {
        if (!(strength_grid[i] > strength_grid[i - 1]))
            throw ValidationError("rsa: strength grid must be strictly increasing");
    }
    theta_grid.validate();
    if (strength_prior.size() != strength_grid.size())
        throw ValidationError("rsa: strength prior / grid length mismatch");
    if (theta_prior.size() != theta_grid.size())
        throw ValidationError("rsa: theta prior / grid length mismatch");
    if ((strength_prior.array() < 0.0).any() || (theta_prior.array() < 0.0).any())
        throw ValidationError("rsa: negative prior mass");
    if (std::abs(strength_prior.sum() - 1.0) > 1e-9)
        throw ValidationError("rsa: strength prior is not normalized");
    if (std::abs(theta_prior.sum() - 1.0) > 1e-9)
        throw ValidationError("rsa: theta prior is not normalized");
    if (utterances.empty()) throw ValidationError("rsa: no utterances configured");
    if (!(rationality >= 0.0)) throw ValidationError("rsa: rationality must be >= 0");
    for (const Utterance& u : utterances) {
        if (u.cost < 0.0) throw ValidationError("rsa: negative utterance cost");
    }
}

Eigen::Index RSAConfig::utterance_index(const std::string& label) const {
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(utterances.size()); ++i) {
        if (utterances[static_cast<std::size_t>(i)].label == label) return i;
    }
    throw ValidationError("rsa: unknown utterance '" + label + "'");
}

namespace {

// Truth mask of an utterance's meaning over the strength grid at theta.
Eigen::ArrayXd meaning_mask(const Utterance& utterance, const Eigen::VectorXd& strength_grid,
                            double theta) {
    Eigen::ArrayXd mask(strength_grid.size());
    for (Eigen::Index i = 0; i < strength_grid.size(); ++i)
        mask[i] = meaning_holds(utterance.meaning, strength_grid[i], theta) ? 1.0 : 0.0;
    return mask;
}

}  // namespace

Eigen::VectorXd literal_listener(const std::string& utterance, double theta,
                                 const RSAConfig& config) {
    config.validate();
    const Utterance& u = config.utterances[static_cast<std::size_t>(
        config.utterance_index(utterance))];
    const Eigen::ArrayXd restricted =
        config.strength_prior.array() * meaning_mask(u, config.strength_grid, theta);
    const double mass = restricted.sum();
    if (mass <= 0.0)
        throw StatsError("vacuous literal meaning: '" + utterance + "' at theta " +
                         std::to_string(theta));
    return restricted / mass;
}

namespace {

// Unnormalized speaker weights for every utterance at (s, theta).
// weight(u) = L0(s | u, theta)^rationality * exp(-rationality * cost(u)),
// with 0^0 == 1 so zero rationality yields a uniform speaker.
Eigen::VectorXd speaker_weights(Eigen::Index strength_index, double theta,
                                const RSAConfig& config,
                                const std::vector<Eigen::VectorXd>& literal_by_utterance) {
    const auto n_utt = static_cast<Eigen::Index>(config.utterances.size());
    Eigen::VectorXd weights(n_utt);
    for (Eigen::Index u = 0; u < n_utt; ++u) {
        const Utterance& utt = config.utterances[static_cast<std::size_t>(u)];
        const double l0 = literal_by_utterance[static_cast<std::size_t>(u)].size() == 0
                              ? 0.0
                              : literal_by_utterance[static_cast<std::size_t>(u)][strength_index];
        if (config.rationality == 0.0) {
            weights[u] = 1.0;
        } else if (l0 <= 0.0) {
            weights[u] = 0.0;
        } else {
            weights[u] = std::exp(config.rationality * (std::log(l0) - utt.cost));
        }
        (void)theta;
    }
    return weights;
}

// Literal listener per utterance at a fixed theta; vacuous utterances
// get an empty vector (unusable at this theta).
std::vector<Eigen::VectorXd> literal_listeners_at(double theta, const RSAConfig& config) {
    std::vector<Eigen::VectorXd> out;
    out.reserve(config.utterances.size());
    for (const Utterance& u : config.utterances) {
        const Eigen::ArrayXd restricted =
            config.strength_prior.array() * meaning_mask(u, config.strength_grid, theta);
        const double mass = restricted.sum();
        if (mass > 0.0) {
            out.emplace_back(restricted / mass);
        } else {
            out.emplace_back();
        }
    }
    return out;
}

}  // namespace

Eigen::VectorXd speaker(double strength, double theta, const RSAConfig& config) {
    config.validate();
    Eigen::Index strength_index = -1;
    for (Eigen::Index i = 0; i < config.strength_grid.size(); ++i) {
        if (config.strength_grid[i] == strength) {
            strength_index = i;
            break;
        }
    }
    if (strength_index < 0)
        throw ValidationError("rsa: speaker strength " + std::to_string(strength) +
                              " is not on the grid");
    const auto literal = literal_listeners_at(theta, config);
    Eigen::VectorXd weights = speaker_weights(strength_index, theta, config, literal);
    const double total = weights.sum();
    if (total <= 0.0)
        throw StatsError("rsa: no utterance is true of strength " + std::to_string(strength) +
                         " at theta " + std::to_string(theta));
    return weights / total;
}

PragmaticListenerResult pragmatic_listener(const std::string& utterance,
                                           const RSAConfig& config) {
    config.validate();
    const Eigen::Index target = config.utterance_index(utterance);
    const Eigen::Index n_s = config.strength_grid.size();
    const Eigen::Index n_t = config.theta_grid.size();

    Eigen::MatrixXd joint(n_s, n_t);
    for (Eigen::Index t = 0; t < n_t; ++t) {
        const double theta = config.theta_grid.values[t];
        const auto literal = literal_listeners_at(theta, config);
        for (Eigen::Index s = 0; s < n_s; ++s) {
            const Eigen::VectorXd weights = speaker_weights(s, theta, config, literal);
            const double total = weights.sum();
            const double s1 = total > 0.0 ? weights[target] / total : 0.0;
            joint(s, t) = config.strength_prior[s] * config.theta_prior[t] * s1;
        }
    }

    const double mass = joint.sum();
    if (mass <= 0.0)
        throw StatsError("rsa: pragmatic listener has zero total mass for '" + utterance + "'");
    joint /= mass;

    PragmaticListenerResult result;
    result.joint = joint;
    result.theta_marginal.thetas = config.theta_grid.values;
    result.theta_marginal.probs = joint.colwise().sum().transpose();
    // Normalize away the residual of the joint's own rounding.
    result.theta_marginal.probs /= result.theta_marginal.probs.sum();
    result.theta_marginal.validate();
    return result;
}

RSAConfig load_rsa_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open rsa config: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("rsa config parse error in " + path + ": " + e.what());
    }

    RSAConfig config = RSAConfig::defaults();
    try {
        if (doc.contains("strength_grid")) {
            const auto& g = doc["strength_grid"];
            if (g.is_array()) {
                Eigen::VectorXd values(g.size());
                for (std::size_t i = 0; i < g.size(); ++i)
                    values[static_cast<Eigen::Index>(i)] = g[i].get<double>();
                config.strength_grid = values;
            } else {
                const double lo = g.at("min").get<double>();
                const double hi = g.at("max").get<double>();
                const double step = g.at("step").get<double>();
                const auto n = static_cast<Eigen::Index>(std::llround((hi - lo) / step)) + 1;
                config.strength_grid = Eigen::VectorXd::LinSpaced(n, lo, hi);
            }
        }
        if (doc.contains("theta_grid")) {
            const auto& g = doc["theta_grid"];
            Eigen::VectorXd values(g.size());
            for (std::size_t i = 0; i < g.size(); ++i)
                values[static_cast<Eigen::Index>(i)] = g[i].get<double>();
            config.theta_grid = ThetaGrid(values);
        }
        if (doc.contains("strength_prior")) {
            const auto& p = doc["strength_prior"];
            config.strength_prior = discretized_gaussian(
                config.strength_grid, p.at("mean").get<double>(), p.at("sd").get<double>());
        } else if (config.strength_prior.size() != config.strength_grid.size()) {
            config.strength_prior = discretized_gaussian(config.strength_grid, 50.0, 20.0);
        }
        if (doc.contains("theta_prior")) {
            const auto& p = doc["theta_prior"];
            Eigen::VectorXd values(p.size());
            for (std::size_t i = 0; i < p.size(); ++i)
                values[static_cast<Eigen::Index>(i)] = p[i].get<double>();
            config.theta_prior = values / values.sum();
        } else if (config.theta_prior.size() != config.theta_grid.size()) {
            config.theta_prior = Eigen::VectorXd::Constant(
                config.theta_grid.size(), 1.0 / static_cast<double>(config.theta_grid.size()));
        }
        if (doc.contains("rationality")) config.rationality = doc["rationality"].get<double>();
        if (doc.contains("utterances")) {
            config.utterances.clear();
            for (const auto& u : doc["utterances"]) {
                Utterance utt;
                utt.label = u.at("label").get<std::string>();
                const std::string meaning = u.at("meaning").get<std::string>();
                if (meaning == "above")
                    utt.meaning = Meaning::ThresholdAbove;
                else if (meaning == "below")
                    utt.meaning = Meaning::ThresholdBelow;
                else if (meaning == "always")
                    utt.meaning = Meaning::AlwaysTrue;
                else
                    throw ValidationError("rsa config: unknown meaning '" + meaning + "'");
                utt.cost = u.value("cost", 0.0);
                config.utterances.push_back(utt);
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("rsa config field error in " + path + ": " + e.what());
    }
    config.validate();
    return config;
}

}  // namespace gradsem::rsa
