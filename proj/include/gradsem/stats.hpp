#ifndef GRADSEM_STATS_HPP
#define GRADSEM_STATS_HPP

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "gradsem/distribution.hpp"
#include "gradsem/errors.hpp"

namespace gradsem {

// Slider point estimates for one stimulus, in strength units [0, 100].
struct HumanResponses {
    std::string stimulus_id;
    std::vector<double> estimates;
    std::vector<std::string> participant_ids;
};

// Normalized counts after assigning each estimate to the nearest grid
// value; exact midpoints round up to the larger theta.
Distribution empirical_distribution(const HumanResponses& responses, const ThetaGrid& grid);

// sum_i p_i * ln(p_i / q_i) with 0 * ln(0/q) == 0. Throws when p puts
// mass where q has none.
template <typename DP, typename DQ>
double kl_divergence_raw(const Eigen::DenseBase<DP>& p, const Eigen::DenseBase<DQ>& q) {
    if (p.size() != q.size()) throw StatsError("kl: length mismatch");
    double acc = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        const double pi = p.derived()(i);
        const double qi = q.derived()(i);
        if (pi == 0.0) continue;
        if (qi == 0.0) throw StatsError("kl: P has mass where Q is zero (bin " +
                                        std::to_string(i) + ")");
        acc += pi * std::log(pi / qi);
    }
    return acc;
}

double kl_divergence(const Distribution& p, const Distribution& q);

// sqrt((KL(P,M) + KL(Q,M)) / 2) with M the point-wise mean. Natural-log
// base throughout, so the range is [0, sqrt(ln 2)].
template <typename DP, typename DQ>
double jensen_shannon_distance_raw(const Eigen::DenseBase<DP>& p, const Eigen::DenseBase<DQ>& q) {
    const Eigen::VectorXd m = 0.5 * (p.derived() + q.derived());
    const double d2 = 0.5 * (kl_divergence_raw(p, m) + kl_divergence_raw(q, m));
    return std::sqrt(std::max(0.0, d2));
}

double jensen_shannon_distance(const Distribution& p, const Distribution& q);

inline double jsd_upper_bound() { return std::sqrt(std::log(2.0)); }

// Whether the null shuffles both distributions over theta each
// iteration, or only the model side.
enum class PermutationMode { BothShuffled, ModelOnly };

// Strict counts null samples strictly below the observed JSD and
// divides by N, so a perfect match yields p = 0; AddOne uses the
// conventional (count + 1) / (N + 1).
enum class PValueEstimator { Strict, AddOne };

double permutation_test(const Distribution& p_human, const Distribution& p_model,
                        int n_iter = 10000, std::uint64_t seed = 0,
                        PermutationMode mode = PermutationMode::BothShuffled,
                        PValueEstimator estimator = PValueEstimator::Strict);

// Exact p over every permutation pair (or single-sided permutation set),
// feasible for small grids only (<= 6 bins).
double permutation_test_exhaustive(const Distribution& p_human, const Distribution& p_model,
                                   PermutationMode mode = PermutationMode::BothShuffled,
                                   PValueEstimator estimator = PValueEstimator::Strict);

// Benjamini-Hochberg step-up adjustment, returned in input order.
std::vector<double> fdr_bh(const std::vector<double>& p_values);

struct ComparisonResult {
    std::string stimulus_id;
    double jsd = 0.0;
    double p_raw = 1.0;
    double p_fdr = 1.0;
    bool significant = false;  // p_fdr < 0.05
    int n_permutations = 0;
    std::uint64_t seed = 0;
};

}  // namespace gradsem

#endif  // GRADSEM_STATS_HPP
