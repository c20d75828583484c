#pragma once

#include <vector>

namespace hitdim {

// Direct recursion a_n = a_{n-1} m + s_n with a_0 = m^2 and
// s_i = (2i+1) / (i^2 (i+1)^2), checked against the closed bound
// m^floor(n/2) / (1-m) + 4/n^2 (defined for n >= 2).
struct Lemma2Result {
    double a_n = 0.0;
    double bound = 0.0; // +inf for n < 2 (bound not applicable)
    bool holds = true;
};

Lemma2Result lemma2_sequence(double m, long long n);

// Full sweep for one m: evaluates the recursion incrementally and checks
// the bound at every n in [2, n_max]. Returns the first violating n, or -1.
long long lemma2_first_violation(double m, long long n_max);

} // namespace hitdim
