#pragma once

#include <set>
#include <string>
#include <vector>

namespace wordent {

struct PairedSeries {
    struct Pair {
        std::string label;
        double x = 0.0;
        double y = 0.0;
    };
    std::vector<Pair> pairs;
    std::set<std::string> exclusions; // labels removed before any analysis

    std::vector<Pair> effective() const; // pairs minus exclusions
};

struct RegressionFit {
    double intercept = 0.0;
    double slope = 0.0;
    double mean_abs_residual = 0.0;
};

// Product-moment correlation over the non-excluded pairs.
double pearson_r(const PairedSeries& series);

// Least-squares line y = intercept + slope * x.
RegressionFit ols_fit(const PairedSeries& series);

// The published block-to-source conversion line.
RegressionFit paper_conversion_fit();

double predict_source_from_block(double h1_bits, const RegressionFit& fit = paper_conversion_fit());

struct EntropyRatioMatrix {
    std::vector<std::string> labels;
    std::vector<double> ratios; // row-major, ratios[a*n + b] = H(a)/H(b)

    double at(std::size_t a, std::size_t b) const { return ratios[a * labels.size() + b]; }
};

EntropyRatioMatrix entropy_ratio_matrix(
    const std::vector<std::pair<std::string, double>>& labeled_entropies);

// Information content -log2(p) normalized by the text's source entropy.
double ic_normalize(double p, double h_source_bits);

} // namespace wordent
