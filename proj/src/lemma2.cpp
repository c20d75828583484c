#include "hitdim/lab/lemma2.hpp"

#include <cmath>
#include <limits>

#include "hitdim/errors.hpp"

namespace hitdim {

namespace {

double s_term(long long i)
{
    double di = static_cast<double>(i);
    return (2.0 * di + 1.0) / (di * di * (di + 1.0) * (di + 1.0));
}

double bound_for(double m, long long n)
{
    if (n < 2) return std::numeric_limits<double>::infinity();
    double dn = static_cast<double>(n);
    return std::pow(m, static_cast<double>(n / 2)) / (1.0 - m) + 4.0 / (dn * dn);
}

} // namespace

Lemma2Result lemma2_sequence(double m, long long n)
{
    if (!(m > 0.0 && m < 1.0)) throw DomainError("lemma2_sequence requires 0 < m < 1");
    if (n < 0) throw DomainError("lemma2_sequence requires n >= 0");

    double a = m * m;
    for (long long i = 1; i <= n; ++i) a = a * m + s_term(i);

    Lemma2Result r;
    r.a_n = a;
    r.bound = bound_for(m, n);
    r.holds = (a <= r.bound);
    return r;
}

long long lemma2_first_violation(double m, long long n_max)
{
    if (!(m > 0.0 && m < 1.0)) throw DomainError("lemma2_first_violation requires 0 < m < 1");
    double a = m * m;
    for (long long n = 1; n <= n_max; ++n) {
        a = a * m + s_term(n);
        if (n >= 2 && !(a <= bound_for(m, n))) return n;
    }
    return -1;
}

} // namespace hitdim
