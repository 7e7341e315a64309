#include "wordent/analysis.hpp"

#include "wordent/errors.hpp"

#include <cmath>

namespace wordent {

std::vector<PairedSeries::Pair> PairedSeries::effective() const {
    std::vector<Pair> out;
    out.reserve(pairs.size());
    for (const auto& p : pairs) {
        if (!exclusions.count(p.label)) out.push_back(p);
    }
    return out;
}

double pearson_r(const PairedSeries& series) {
    auto pairs = series.effective();
    std::size_t n = pairs.size();
    if (n < 2) throw DegenerateInputError("correlation requires at least 2 pairs");
    double mx = 0.0, my = 0.0;
    for (const auto& p : pairs) {
        mx += p.x;
        my += p.y;
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (const auto& p : pairs) {
        double dx = p.x - mx, dy = p.y - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw DegenerateInputError("correlation undefined: zero variance");
    }
    double r = sxy / std::sqrt(sxx * syy);
    return std::clamp(r, -1.0, 1.0);
}

RegressionFit ols_fit(const PairedSeries& series) {
    auto pairs = series.effective();
    std::size_t n = pairs.size();
    if (n < 2) throw DegenerateInputError("regression requires at least 2 pairs");
    double mx = 0.0, my = 0.0;
    for (const auto& p : pairs) {
        mx += p.x;
        my += p.y;
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0;
    for (const auto& p : pairs) {
        sxy += (p.x - mx) * (p.y - my);
        sxx += (p.x - mx) * (p.x - mx);
    }
    if (sxx == 0.0) throw DegenerateInputError("regression undefined: all x equal");
    RegressionFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double abs_res = 0.0;
    for (const auto& p : pairs) {
        abs_res += std::abs(p.y - (fit.intercept + fit.slope * p.x));
    }
    fit.mean_abs_residual = abs_res / static_cast<double>(n);
    return fit;
}

RegressionFit paper_conversion_fit() { return {-1.59, 0.82, 0.03}; }

double predict_source_from_block(double h1_bits, const RegressionFit& fit) {
    return fit.intercept + fit.slope * h1_bits;
}

EntropyRatioMatrix entropy_ratio_matrix(
    const std::vector<std::pair<std::string, double>>& labeled_entropies) {
    for (const auto& [label, h] : labeled_entropies) {
        if (!(h > 0.0)) {
            throw DomainError("entropy for '" + label + "' must be > 0 to form ratios");
        }
    }
    EntropyRatioMatrix m;
    std::size_t n = labeled_entropies.size();
    m.labels.reserve(n);
    for (const auto& [label, h] : labeled_entropies) m.labels.push_back(label);
    m.ratios.resize(n * n);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            m.ratios[a * n + b] = labeled_entropies[a].second / labeled_entropies[b].second;
        }
    }
    return m;
}

double ic_normalize(double p, double h_source_bits) {
    if (!(p > 0.0) || p > 1.0) throw DomainError("probability must be in (0, 1]");
    if (!(h_source_bits > 0.0)) throw DomainError("source entropy must be > 0");
    return -std::log2(p) / h_source_bits;
}

} // namespace wordent
