#pragma once

#include <utility>
#include <vector>

namespace hitdim {

// Slope statistics of a log-quantity against the dyadic scale index k.
// The tail ratio extremes are the working surrogates for the liminf and
// limsup of v(k)/k; the least-squares slope is kept as a stability
// diagnostic (it may exit the [tail_min, tail_max] range).
struct ScalingEstimate {
    double slope_ols = 0.0;
    double slope_tail_min = 0.0;
    double slope_tail_max = 0.0;
    double tail_fraction = 0.5;
    int n_points_used = 0;
    int n_censored = 0;
};

// samples: (k, v) pairs with k >= 1 and distinct; at least 4 required.
// Tail stats range over the ceil(tail_fraction * N) largest k.
ScalingEstimate fit_scaling(std::vector<std::pair<int, double>> samples, double tail_fraction);

} // namespace hitdim
