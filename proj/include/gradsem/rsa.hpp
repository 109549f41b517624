#ifndef GRADSEM_RSA_HPP
#define GRADSEM_RSA_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "gradsem/distribution.hpp"

namespace gradsem::rsa {

// Literal meanings available to utterances: a threshold predicate on
// strength, or the trivially true null utterance.
enum class Meaning { ThresholdAbove, ThresholdBelow, AlwaysTrue };

struct Utterance {
    std::string label;
    Meaning meaning = Meaning::AlwaysTrue;
    double cost = 0.0;
};

bool meaning_holds(Meaning meaning, double strength, double theta);

// Discrete threshold-uncertainty RSA model. Rationality and costs are
// free parameters of the recursion, not grounded quantities; defaults
// are rationality 1 and zero costs, recorded in outputs.
struct RSAConfig {
    Eigen::VectorXd strength_grid;   // default 0..100 step 2
    ThetaGrid theta_grid;            // default 11-point grid
    Eigen::VectorXd strength_prior;  // normalized over strength_grid
    Eigen::VectorXd theta_prior;     // normalized over theta_grid
    std::vector<Utterance> utterances;
    double rationality = 1.0;

    static RSAConfig defaults();
    void validate() const;
    Eigen::Index utterance_index(const std::string& label) const;
};

// Discretized N(mean, sd) density over grid points, normalized.
Eigen::VectorXd discretized_gaussian(const Eigen::VectorXd& grid, double mean, double sd);

// Prior restricted to strength values satisfying the utterance at theta,
// renormalized; aligned with config.strength_grid. Throws on vacuous
// meanings (zero prior mass on the satisfying set).
Eigen::VectorXd literal_listener(const std::string& utterance, double theta,
                                 const RSAConfig& config);

// P(u | s, theta) over config.utterances:
//   P(u) proportional to L0(s | u, theta)^rationality * exp(-rationality * cost(u)),
// where L0 is zero when s violates u's meaning. Zero rationality makes
// every power 1 (0^0 == 1), so the speaker is uniform over the whole
// utterance set, which is what lets an uninformative speaker cancel out
// of the pragmatic listener exactly.
Eigen::VectorXd speaker(double strength, double theta, const RSAConfig& config);

struct PragmaticListenerResult {
    Eigen::MatrixXd joint;        // strength x theta, sums to 1
    Distribution theta_marginal;  // over config.theta_grid
};

// L1(s, theta | u) proportional to
// strength_prior(s) * theta_prior(theta) * S1(u | s, theta).
PragmaticListenerResult pragmatic_listener(const std::string& utterance,
                                           const RSAConfig& config);

// Reads overrides from a JSON file (grids, priors, rationality,
// utterances); missing fields keep their defaults.
RSAConfig load_rsa_config(const std::string& path);

}  // namespace gradsem::rsa

#endif  // GRADSEM_RSA_HPP
