#include "gradsem/stats.hpp"

#include <algorithm>
#include <numeric>

#include "gradsem/rng.hpp"

namespace gradsem {

Distribution empirical_distribution(const HumanResponses& responses, const ThetaGrid& grid) {
    if (responses.estimates.empty())
        throw StatsError("empirical distribution: no estimates for stimulus '" +
                         responses.stimulus_id + "'");
    grid.validate();
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(grid.size());
    for (double estimate : responses.estimates) {
        Eigen::Index best = 0;
        double best_dist = std::abs(estimate - grid.values[0]);
        for (Eigen::Index i = 1; i < grid.size(); ++i) {
            const double d = std::abs(estimate - grid.values[i]);
            if (d <= best_dist) {  // ties round up to the larger theta
                best_dist = d;
                best = i;
            }
        }
        counts[best] += 1.0;
    }
    Distribution out;
    out.thetas = grid.values;
    out.probs = counts / counts.sum();
    return out;
}

double kl_divergence(const Distribution& p, const Distribution& q) {
    require_same_grid(p, q);
    return kl_divergence_raw(p.probs, q.probs);
}

double jensen_shannon_distance(const Distribution& p, const Distribution& q) {
    require_same_grid(p, q);
    return jensen_shannon_distance_raw(p.probs, q.probs);
}

namespace {

void shuffle_in_place(Eigen::VectorXd& v, RandomStream& rng) {
    for (Eigen::Index i = v.size() - 1; i > 0; --i) {
        const auto j = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(i) + 1));
        std::swap(v[i], v[j]);
    }
}

double finish_p(std::uint64_t below, std::uint64_t total, PValueEstimator estimator) {
    if (estimator == PValueEstimator::AddOne)
        return static_cast<double>(below + 1) / static_cast<double>(total + 1);
    return static_cast<double>(below) / static_cast<double>(total);
}

}  // namespace

double permutation_test(const Distribution& p_human, const Distribution& p_model, int n_iter,
                        std::uint64_t seed, PermutationMode mode, PValueEstimator estimator) {
    if (n_iter < 1) throw StatsError("permutation test: n_iter must be >= 1");
    require_same_grid(p_human, p_model);
    const double observed = jensen_shannon_distance_raw(p_human.probs, p_model.probs);

    RandomStream rng(seed);
    Eigen::VectorXd h = p_human.probs;
    Eigen::VectorXd m = p_model.probs;
    std::uint64_t below = 0;
    for (int i = 0; i < n_iter; ++i) {
        if (mode == PermutationMode::BothShuffled) shuffle_in_place(h, rng);
        shuffle_in_place(m, rng);
        if (jensen_shannon_distance_raw(h, m) < observed) ++below;
    }
    return finish_p(below, static_cast<std::uint64_t>(n_iter), estimator);
}

double permutation_test_exhaustive(const Distribution& p_human, const Distribution& p_model,
                                   PermutationMode mode, PValueEstimator estimator) {
    require_same_grid(p_human, p_model);
    const auto n = static_cast<std::size_t>(p_human.probs.size());
    if (n > 6)
        throw StatsError("exhaustive permutation test is limited to 6 bins, got " +
                         std::to_string(n));
    const double observed = jensen_shannon_distance_raw(p_human.probs, p_model.probs);

    std::vector<std::size_t> perm_h(n), perm_m(n);
    std::iota(perm_h.begin(), perm_h.end(), 0);
    Eigen::VectorXd h(p_human.probs.size()), m(p_model.probs.size());
    std::uint64_t below = 0, total = 0;

    auto apply = [n](const std::vector<std::size_t>& perm, const Eigen::VectorXd& src,
                     Eigen::VectorXd& dst) {
        for (std::size_t i = 0; i < n; ++i)
            dst[static_cast<Eigen::Index>(i)] = src[static_cast<Eigen::Index>(perm[i])];
    };

    do {
        apply(perm_h, p_human.probs, h);
        std::iota(perm_m.begin(), perm_m.end(), 0);
        do {
            apply(perm_m, p_model.probs, m);
            ++total;
            if (jensen_shannon_distance_raw(h, m) < observed) ++below;
        } while (std::next_permutation(perm_m.begin(), perm_m.end()));
        if (mode == PermutationMode::ModelOnly) break;  // human side stays fixed
    } while (std::next_permutation(perm_h.begin(), perm_h.end()));

    return finish_p(below, total, estimator);
}

std::vector<double> fdr_bh(const std::vector<double>& p_values) {
    const std::size_t m = p_values.size();
    for (double p : p_values) {
        if (!(p >= 0.0 && p <= 1.0))
            throw StatsError("fdr: p-value outside [0,1]: " + std::to_string(p));
    }
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return p_values[a] < p_values[b]; });

    std::vector<double> adjusted(m, 0.0);
    double running_min = 1.0;
    for (std::size_t rank = m; rank >= 1; --rank) {
        const std::size_t idx = order[rank - 1];
        const double scaled =
            p_values[idx] * static_cast<double>(m) / static_cast<double>(rank);
        running_min = std::min(running_min, std::min(scaled, 1.0));
        adjusted[idx] = running_min;
    }
    return adjusted;
}

}  // namespace gradsem
