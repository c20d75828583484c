#include "hitdim/scaling.hpp"

#include <algorithm>
#include <cmath>

#include "hitdim/errors.hpp"

namespace hitdim {

ScalingEstimate fit_scaling(std::vector<std::pair<int, double>> samples, double tail_fraction)
{
    if (!(tail_fraction > 0.0 && tail_fraction <= 1.0))
        throw DomainError("tail_fraction must be in (0,1]");
    if (samples.size() < 4)
        throw InsufficientData("fit_scaling needs at least 4 samples",
                               0);

    std::sort(samples.begin(), samples.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i + 1 < samples.size(); ++i)
        if (samples[i].first == samples[i + 1].first)
            throw DomainError("fit_scaling requires distinct k values");
    if (samples.front().first < 1)
        throw DomainError("fit_scaling requires k >= 1");

    const int n = static_cast<int>(samples.size());

    double mean_k = 0.0, mean_v = 0.0;
    for (const auto& [k, v] : samples) {
        mean_k += k;
        mean_v += v;
    }
    mean_k /= n;
    mean_v /= n;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [k, v] : samples) {
        sxx += (k - mean_k) * (k - mean_k);
        sxy += (k - mean_k) * (v - mean_v);
    }

    const int tail_count = static_cast<int>(std::ceil(tail_fraction * n));
    double tmin = 0.0, tmax = 0.0;
    bool first = true;
    for (int i = n - tail_count; i < n; ++i) {
        double ratio = samples[i].second / samples[i].first;
        if (first) {
            tmin = tmax = ratio;
            first = false;
        } else {
            tmin = std::min(tmin, ratio);
            tmax = std::max(tmax, ratio);
        }
    }

    ScalingEstimate est;
    est.slope_ols = sxy / sxx;
    est.slope_tail_min = tmin;
    est.slope_tail_max = tmax;
    est.tail_fraction = tail_fraction;
    est.n_points_used = n;
    est.n_censored = 0;
    return est;
}

} // namespace hitdim
