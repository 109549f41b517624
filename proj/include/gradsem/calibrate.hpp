#ifndef GRADSEM_CALIBRATE_HPP
#define GRADSEM_CALIBRATE_HPP

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "gradsem/distribution.hpp"
#include "gradsem/errors.hpp"
#include "gradsem/scorer.hpp"

namespace gradsem {

// Temperature softmax: w_i = exp(alpha * l_i - m) / sum_j exp(alpha * l_j - m)
// with m = max_j(alpha * l_j) subtracted for numerical stability.
template <typename Derived>
Eigen::Vector<typename Derived::Scalar, Eigen::Dynamic> softmax_weights(
    const Eigen::DenseBase<Derived>& logprobs, typename Derived::Scalar alpha) {
    using Scalar = typename Derived::Scalar;
    using Vec = Eigen::Vector<Scalar, Eigen::Dynamic>;
    if (logprobs.size() == 0) throw StatsError("softmax: empty score vector");
    Vec scaled = alpha * logprobs.derived().array();
    if (!scaled.allFinite()) throw StatsError("softmax: non-finite scaled scores");
    scaled.array() -= scaled.maxCoeff();
    Vec weights = scaled.array().exp();
    return weights / weights.sum();
}

Distribution softmax(const ScoreVector& scores, double alpha);

struct NelderMeadResult {
    double argmin = 0.0;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

// One-dimensional downhill simplex (two points; reflection 1,
// expansion 2, contraction 0.5, shrink 0.5). The search runs over the
// unconstrained variable a with argument exp(a), keeping the probe
// positive; `init` must therefore be positive. Stops when the simplex
// value spread drops below `tolerance` or after `max_iter` iterations.
NelderMeadResult nelder_mead_minimize(const std::function<double(double)>& objective, double init,
                                      double tolerance = 1e-6, int max_iter = 200);

struct TemperatureFit {
    std::string stimulus_id;
    double alpha = 1.0;   // dimensionless, > 0
    double loss = 0.0;    // summed JSD over held-in stimuli
    int iterations = 0;
    bool converged = false;
};

// Which stimuli form the leave-one-out complement: everything else in
// the same experiment, or only the same panel (E1: same candidate form;
// E2: same abstraction level).
enum class LoocvPooling { PerExperiment, PerPanel };

// Per-stimulus temperature by leave-one-out cross-validation: alpha_i
// minimizes the summed JSD between human and softmaxed model
// distributions over the complement of stimulus i. The held-out
// stimulus never contributes to its own fit.
std::map<std::string, TemperatureFit> fit_alpha_loocv(
    const std::vector<Stimulus>& stimuli, const std::map<std::string, ScoreVector>& scores,
    const std::map<std::string, Distribution>& human,
    LoocvPooling pooling = LoocvPooling::PerExperiment, double tolerance = 1e-6,
    int max_iter = 200);

}  // namespace gradsem

#endif  // GRADSEM_CALIBRATE_HPP
