#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kinmarket/fokker_planck.hpp"

namespace kinmarket {

struct SampleMoments {
    double mean;
    double second; ///< mean of squares
};

/// Throws EmptyEnsemble.
SampleMoments sample_moments(std::span<const double> wealth);

/// Plug-in Gini from the sorted sample:
/// G = 2 sum_i i w_(i) / (N sum w) - (N + 1) / N, i = 1..N ascending.
double gini(std::span<const double> wealth);

struct LorenzPoint {
    double F; ///< population fraction
    double L; ///< wealth fraction held by the poorest F
};

/// Lorenz curve sampled at F = k / grid_size, k = 0..grid_size, by linear
/// interpolation of the empirical curve. Endpoints are exactly (0,0), (1,1).
std::vector<LorenzPoint> lorenz_curve(std::span<const double> wealth, std::size_t grid_size);

struct HistogramBin {
    double center; ///< geometric center on a log axis
    double width;  ///< in wealth units
    double density;
};

/// Density-normalized histogram: sum(density * width) == 1.
/// With log_axis the bins are uniform in log w (throws NonPositiveSample on w <= 0).
std::vector<HistogramBin> histogram(std::span<const double> wealth, std::size_t bins, bool log_axis);

/// Kolmogorov-Smirnov distance between the sample and a lognormal.
double ks_distance(std::span<const double> wealth, const LognormalParams& p);

} // namespace kinmarket
