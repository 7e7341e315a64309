#pragma once

#include "wordent/block_entropy.hpp"
#include "wordent/corpus.hpp"
#include "wordent/source_entropy.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace wordent {

struct TrajectoryPoint {
    std::uint64_t prefix_tokens = 0;
    double bits = 0.0;
};

struct Trajectory {
    std::uint64_t step = 10000;
    Estimator estimator = Estimator::NSB;
    std::vector<TrajectoryPoint> points; // prefix sizes step, 2*step, ...
};

struct SdPoint {
    std::uint64_t prefix_tokens = 0;
    double sd = 0.0;
};

struct ConvergenceReport {
    Trajectory trajectory;
    std::vector<SdPoint> sd_series;
    std::optional<std::uint64_t> convergence_point;
    double threshold = 0.05;
    int window = 5;
};

struct TrajectoryOptions {
    std::uint64_t step = 10000;
    Estimator estimator = Estimator::NSB;
    NsbConfig nsb;
    MatchOptions match;
};

// Entropy of every prefix of size step, 2*step, ..., floor(N/step)*step.
Trajectory trajectory(const TokenizedText& text, const TrajectoryOptions& opts);

// Sample SD over the trailing `window` estimates; the convergence point is
// the first prefix size whose trailing SD drops under the threshold.
ConvergenceReport convergence_point(const Trajectory& traj, double threshold = 0.05,
                                    int window = 5);

} // namespace wordent
