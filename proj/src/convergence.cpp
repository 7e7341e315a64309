#include "wordent/convergence.hpp"

#include "wordent/errors.hpp"

#include <cmath>

namespace wordent {

Trajectory trajectory(const TokenizedText& text, const TrajectoryOptions& opts) {
    if (opts.step < 1) throw PreconditionError("step must be >= 1");
    if (text.size() < opts.step) {
        throw PreconditionError("text has " + std::to_string(text.size()) +
                                " tokens, trajectory requires at least " +
                                std::to_string(opts.step));
    }
    Trajectory traj;
    traj.step = opts.step;
    traj.estimator = opts.estimator;

    std::uint64_t n_points = text.size() / opts.step;
    std::vector<std::uint64_t> sizes;
    sizes.reserve(n_points);
    for (std::uint64_t k = 1; k <= n_points; ++k) sizes.push_back(k * opts.step);

    if (opts.estimator == Estimator::SOURCE) {
        std::vector<double> values = source_entropy_prefix_sweep(text, sizes, opts.match);
        for (std::size_t k = 0; k < sizes.size(); ++k) {
            traj.points.push_back({sizes[k], values[k]});
        }
        return traj;
    }
    if (opts.estimator != Estimator::ML && opts.estimator != Estimator::NSB) {
        throw ConfigError("trajectory supports ml, nsb and source estimators");
    }

    // Grow one shared count vector; estimators see a snapshot per step.
    FrequencyTable table;
    table.counts.assign(text.vocab ? text.vocab->size() : 0, 0);
    std::uint64_t consumed = 0;
    for (std::uint64_t target : sizes) {
        for (; consumed < target; ++consumed) {
            TokenId id = text.tokens[consumed];
            if (id >= table.counts.size()) table.counts.resize(id + 1, 0);
            ++table.counts[id];
        }
        table.total = target;
        double bits = opts.estimator == Estimator::ML ? ml_entropy(table).bits
                                                      : nsb_entropy(table, opts.nsb).bits;
        traj.points.push_back({target, bits});
    }
    return traj;
}

ConvergenceReport convergence_point(const Trajectory& traj, double threshold, int window) {
    if (window < 2) throw PreconditionError("window must be >= 2");
    if (threshold <= 0) throw PreconditionError("threshold must be > 0");
    if (traj.points.size() < static_cast<std::size_t>(window)) {
        throw PreconditionError("trajectory has " + std::to_string(traj.points.size()) +
                                " points, convergence detection requires " +
                                std::to_string(window));
    }
    ConvergenceReport report;
    report.trajectory = traj;
    report.threshold = threshold;
    report.window = window;

    for (std::size_t k = static_cast<std::size_t>(window) - 1; k < traj.points.size(); ++k) {
        double mean = 0.0;
        for (std::size_t j = k + 1 - static_cast<std::size_t>(window); j <= k; ++j) {
            mean += traj.points[j].bits;
        }
        mean /= window;
        double ss = 0.0;
        for (std::size_t j = k + 1 - static_cast<std::size_t>(window); j <= k; ++j) {
            double d = traj.points[j].bits - mean;
            ss += d * d;
        }
        double sd = std::sqrt(ss / (window - 1)); // sample SD
        report.sd_series.push_back({traj.points[k].prefix_tokens, sd});
        if (!report.convergence_point && sd < threshold) {
            report.convergence_point = traj.points[k].prefix_tokens;
        }
    }
    return report;
}

} // namespace wordent
