#include "kinmarket/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "kinmarket/errors.hpp"

namespace kinmarket {

namespace {

std::vector<double> sorted_nonnegative(std::span<const double> wealth, const char* who) {
    if (wealth.empty()) {
        throw EmptyEnsemble(std::string(who) + ": empty sample");
    }
    std::vector<double> sorted(wealth.begin(), wealth.end());
    std::stable_sort(sorted.begin(), sorted.end());
    if (sorted.front() < 0.0) {
        throw ConfigError(std::string(who) + ": negative wealth");
    }
    if (sorted.back() <= 0.0) {
        throw AllZeroWealth(std::string(who) + ": total wealth is zero");
    }
    return sorted;
}

} // namespace

SampleMoments sample_moments(std::span<const double> wealth) {
    if (wealth.empty()) {
        throw EmptyEnsemble("sample_moments: empty sample");
    }
    double sum = 0.0;
    double sum_sq = 0.0;
    for (const double w : wealth) {
        sum += w;
        sum_sq += w * w;
    }
    const auto n = static_cast<double>(wealth.size());
    return {sum / n, sum_sq / n};
}

double gini(std::span<const double> wealth) {
    const auto sorted = sorted_nonnegative(wealth, "gini");
    const auto n = static_cast<double>(sorted.size());
    double weighted = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        weighted += static_cast<double>(i + 1) * sorted[i];
        total += sorted[i];
    }
    return std::max(0.0, 2.0 * weighted / (n * total) - (n + 1.0) / n);
}

std::vector<LorenzPoint> lorenz_curve(std::span<const double> wealth, std::size_t grid_size) {
    if (grid_size < 1) {
        throw ConfigError("lorenz_curve: grid_size must be >= 1");
    }
    const auto sorted = sorted_nonnegative(wealth, "lorenz_curve");
    const std::size_t n = sorted.size();

    // empirical curve at F = i / n
    std::vector<double> cumulative(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        cumulative[i + 1] = cumulative[i] + sorted[i];
    }
    const double total = cumulative[n];

    std::vector<LorenzPoint> out;
    out.reserve(grid_size + 1);
    for (std::size_t k = 0; k <= grid_size; ++k) {
        const double F = static_cast<double>(k) / static_cast<double>(grid_size);
        const double pos = F * static_cast<double>(n);
        const auto i = std::min(static_cast<std::size_t>(pos), n - 1);
        const double frac = pos - static_cast<double>(i);
        const double L = (cumulative[i] + frac * sorted[i]) / total;
        out.push_back({F, std::clamp(L, 0.0, 1.0)});
    }
    out.front() = {0.0, 0.0};
    out.back() = {1.0, 1.0};
    return out;
}

std::vector<HistogramBin> histogram(std::span<const double> wealth, std::size_t bins, bool log_axis) {
    if (bins < 1) {
        throw ConfigError("histogram: bins must be >= 1");
    }
    if (wealth.empty()) {
        throw EmptyEnsemble("histogram: empty sample");
    }
    if (log_axis && *std::min_element(wealth.begin(), wealth.end()) <= 0.0) {
        throw NonPositiveSample("histogram: log axis needs positive samples");
    }
    const auto axis = [log_axis](double w) { return log_axis ? std::log(w) : w; };
    const auto unaxis = [log_axis](double u) { return log_axis ? std::exp(u) : u; };

    const auto [lo_it, hi_it] = std::minmax_element(wealth.begin(), wealth.end());
    double lo = axis(*lo_it);
    double hi = axis(*hi_it);
    if (hi <= lo) {
        // all samples equal: one unit-wide bin around the value (in axis units)
        lo -= 0.5;
        hi += 0.5;
    }
    const double step = (hi - lo) / static_cast<double>(bins);

    std::vector<std::size_t> counts(bins, 0);
    for (const double w : wealth) {
        auto k = static_cast<std::size_t>((axis(w) - lo) / step);
        counts[std::min(k, bins - 1)] += 1;
    }

    const auto n = static_cast<double>(wealth.size());
    std::vector<HistogramBin> out;
    out.reserve(bins);
    for (std::size_t k = 0; k < bins; ++k) {
        const double left = unaxis(lo + static_cast<double>(k) * step);
        const double right = unaxis(lo + static_cast<double>(k + 1) * step);
        const double center = unaxis(lo + (static_cast<double>(k) + 0.5) * step);
        const double width = right - left;
        out.push_back({center, width, static_cast<double>(counts[k]) / (n * width)});
    }
    return out;
}

double ks_distance(std::span<const double> wealth, const LognormalParams& p) {
    if (wealth.empty()) {
        throw EmptyEnsemble("ks_distance: empty sample");
    }
    std::vector<double> sorted(wealth.begin(), wealth.end());
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front() <= 0.0) {
        throw NonPositiveSample("ks_distance: samples must be positive");
    }
    const auto n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double F = lognormal_cdf(p, sorted[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - F, F - static_cast<double>(i) / n});
    }
    return d;
}

} // namespace kinmarket
