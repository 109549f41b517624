#include "gradsem/calibrate.hpp"

#include <algorithm>
#include <cmath>

#include "gradsem/stats.hpp"

namespace gradsem {

Distribution softmax(const ScoreVector& scores, double alpha) {
    if (!scores.logprobs.allFinite()) throw StatsError("softmax: NaN in scores");
    if (alpha < 0.0) throw StatsError("softmax: negative temperature exponent");
    Distribution out;
    out.thetas = scores.thetas;
    out.probs = softmax_weights(scores.logprobs, alpha);
    return out;
}

NelderMeadResult nelder_mead_minimize(const std::function<double(double)>& objective, double init,
                                      double tolerance, int max_iter) {
    if (!(init > 0.0)) throw StatsError("nelder-mead: initial point must be positive");

    auto probe = [&](double a) {
        const double x = std::exp(a);
        const double f = objective(x);
        if (std::isnan(f))
            throw StatsError("nelder-mead: objective returned NaN at " + std::to_string(x));
        return f;
    };

    // Two-point simplex in log space: {best, worst} by value.
    double b = std::log(init);
    double w = b + 0.5;
    double fb = probe(b), fw = probe(w);
    if (fw < fb) {
        std::swap(b, w);
        std::swap(fb, fw);
    }

    int iter = 0;
    bool converged = false;
    for (; iter < max_iter; ++iter) {
        if (std::abs(fw - fb) < tolerance) {
            converged = true;
            break;
        }
        const double xr = b + (b - w);  // reflection
        const double fr = probe(xr);
        if (fr < fb) {
            const double xe = b + 2.0 * (b - w);  // expansion
            const double fe = probe(xe);
            if (fe < fr) {
                w = xe;
                fw = fe;
            } else {
                w = xr;
                fw = fr;
            }
        } else if (fr < fw) {
            const double xc = b + 0.5 * (b - w);  // outside contraction
            const double fc = probe(xc);
            if (fc <= fr) {
                w = xc;
                fw = fc;
            } else {
                w = b + 0.5 * (w - b);  // shrink
                fw = probe(w);
            }
        } else {
            const double xc = b - 0.5 * (b - w);  // inside contraction
            const double fc = probe(xc);
            if (fc < fw) {
                w = xc;
                fw = fc;
            } else {
                w = b + 0.5 * (w - b);  // shrink
                fw = probe(w);
            }
        }
        if (fw < fb) {
            std::swap(b, w);
            std::swap(fb, fw);
        }
    }

    NelderMeadResult result;
    result.argmin = std::exp(b);
    result.value = fb;
    result.iterations = iter;
    result.converged = converged;
    return result;
}

namespace {

std::string pool_key(const Stimulus& s, LoocvPooling pooling) {
    std::string key = to_string(s.experiment);
    if (pooling == LoocvPooling::PerPanel) {
        if (s.experiment == Experiment::E2) {
            auto it = s.metadata.find("abstraction");
            key += '/' + (it != s.metadata.end() ? it->second : to_string(s.form));
        } else {
            key += '/' + to_string(s.form);
        }
    }
    return key;
}

}  // namespace

std::map<std::string, TemperatureFit> fit_alpha_loocv(
    const std::vector<Stimulus>& stimuli, const std::map<std::string, ScoreVector>& scores,
    const std::map<std::string, Distribution>& human, LoocvPooling pooling, double tolerance,
    int max_iter) {
    for (const Stimulus& s : stimuli) {
        if (scores.find(s.id) == scores.end())
            throw StatsError("loocv: no scores for stimulus '" + s.id + "'");
        if (human.find(s.id) == human.end())
            throw StatsError("loocv: no human distribution for stimulus '" + s.id + "'");
    }

    std::map<std::string, std::vector<const Stimulus*>> pools;
    for (const Stimulus& s : stimuli) pools[pool_key(s, pooling)].push_back(&s);

    std::map<std::string, TemperatureFit> fits;
    for (const auto& [key, members] : pools) {
        if (members.size() < 2)
            throw StatsError("LOOCV undefined: pool '" + key + "' has fewer than 2 stimuli");
        for (const Stimulus* held_out : members) {
            auto objective = [&, held_out](double alpha) {
                double loss = 0.0;
                for (const Stimulus* other : members) {
                    if (other == held_out) continue;
                    const ScoreVector& sv = scores.at(other->id);
                    loss += jensen_shannon_distance(human.at(other->id), softmax(sv, alpha));
                }
                return loss;
            };
            const NelderMeadResult nm = nelder_mead_minimize(objective, 1.0, tolerance, max_iter);
            TemperatureFit fit;
            fit.stimulus_id = held_out->id;
            fit.alpha = nm.argmin;
            fit.loss = nm.value;
            fit.iterations = nm.iterations;
            fit.converged = nm.converged;
            fits[held_out->id] = fit;
        }
    }
    return fits;
}

}  // namespace gradsem
