#ifndef GRADSEM_DISTRIBUTION_HPP
#define GRADSEM_DISTRIBUTION_HPP

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "gradsem/errors.hpp"

namespace gradsem {

// Ordered grid of threshold values (strength units). Default is the
// 11-point grid 0, 10, ..., 100.
struct ThetaGrid {
    Eigen::VectorXd values;

    ThetaGrid() = default;
    explicit ThetaGrid(Eigen::VectorXd v) : values(std::move(v)) { validate(); }

    static ThetaGrid default_grid() { return ThetaGrid(Eigen::VectorXd::LinSpaced(11, 0.0, 100.0)); }

    Eigen::Index size() const { return values.size(); }

    void validate() const {
        if (values.size() == 0) return;
        for (Eigen::Index i = 1; i < values.size(); ++i) {
            if (!(values[i] > values[i - 1]))
                throw ValidationError("theta grid must be strictly increasing");
        }
    }

    bool operator==(const ThetaGrid& o) const {
        return values.size() == o.values.size() && values == o.values;
    }
};

// A normalized probability vector over a theta grid. Both model and
// human estimates take this form.
struct Distribution {
    Eigen::VectorXd thetas;
    Eigen::VectorXd probs;

    void validate(double tol = 1e-9) const {
        if (thetas.size() != probs.size())
            throw StatsError("distribution: theta/prob length mismatch");
        if (probs.size() == 0) throw StatsError("distribution: empty support");
        if ((probs.array() < 0.0).any()) throw StatsError("distribution: negative probability");
        if (!probs.allFinite()) throw StatsError("distribution: non-finite probability");
        if (std::abs(probs.sum() - 1.0) > tol)
            throw StatsError("distribution: probabilities sum to " + std::to_string(probs.sum()));
    }

    static Distribution uniform(const Eigen::VectorXd& thetas) {
        Distribution d;
        d.thetas = thetas;
        d.probs = Eigen::VectorXd::Constant(thetas.size(),
                                            1.0 / static_cast<double>(thetas.size()));
        return d;
    }

    static Distribution point_mass(const Eigen::VectorXd& thetas, Eigen::Index index) {
        Distribution d;
        d.thetas = thetas;
        d.probs = Eigen::VectorXd::Zero(thetas.size());
        d.probs[index] = 1.0;
        return d;
    }
};

inline void require_same_grid(const Distribution& p, const Distribution& q) {
    if (p.thetas.size() != q.thetas.size() || p.thetas != q.thetas)
        throw StatsError("distributions are defined over different grids");
}

}  // namespace gradsem

#endif  // GRADSEM_DISTRIBUTION_HPP
