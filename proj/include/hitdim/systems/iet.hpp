#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "hitdim/errors.hpp"
#include "hitdim/fixed.hpp"
#include "hitdim/rational.hpp"
#include "hitdim/rng.hpp"

namespace hitdim {

// Interval exchange on [0,1): d subintervals with exact rational lengths,
// rearranged by a permutation. All internal arithmetic runs on integer
// numerators over one common denominator, so applications, inverses and
// discontinuity gaps are exact.
class Iet {
public:
    // perm is 1-based: interval i lands at image slot perm[i-1].
    Iet(std::vector<Rat> lengths, std::vector<int> perm)
        : lengths_(std::move(lengths)), perm_(std::move(perm))
    {
        build();
    }

    int d() const { return static_cast<int>(lengths_.size()); }
    const std::vector<Rat>& lengths() const { return lengths_; }
    const std::vector<int>& permutation() const { return perm_; }
    std::uint64_t common_den() const { return den_; }

    bool irreducible() const
    {
        const int n = d();
        int max_img = 0;
        for (int i = 0; i < n - 1; ++i) {
            max_img = std::max(max_img, perm_[i]);
            if (max_img == i + 1) return false;
        }
        return true;
    }

    // --- exact action on numerators over the common denominator ---

    std::uint64_t apply_num(std::uint64_t x) const
    {
        int i = locate(x);
        std::uint64_t y = x + off_[i];
        if (y >= den_) y -= den_;
        return y;
    }

    std::uint64_t inverse_apply_num(std::uint64_t x) const
    {
        int j = locate_image(x);
        int i = img_slot_to_interval_[j];
        std::uint64_t y = x + den_ - off_[i];
        if (y >= den_) y -= den_;
        return y;
    }

    // --- exact action on arbitrary rationals ---

    Rat apply(const Rat& x) const
    {
        Rat v = x.mod1();
        Rat c(0, 1);
        for (int i = 0; i < d(); ++i) {
            Rat next = c + lengths_[i];
            if (v < next) return (v + offset_rat(i)).mod1();
            c = next;
        }
        return (v + offset_rat(d() - 1)).mod1(); // v == 1 cannot happen after mod1
    }

    Rat inverse_apply(const Rat& x) const
    {
        Rat v = x.mod1();
        Rat c(0, 1);
        for (int slot = 0; slot < d(); ++slot) {
            int i = img_slot_to_interval_[slot];
            Rat next = c + lengths_[i];
            if (v < next) return (v - offset_rat(i)).mod1();
            c = next;
        }
        return (v - offset_rat(img_slot_to_interval_[d() - 1])).mod1();
    }

    // Interior endpoints of the domain decomposition (forward) or of the
    // image decomposition (backward, i.e. discontinuities of the inverse).
    std::vector<Rat> discontinuities(bool backward) const
    {
        std::vector<Rat> out;
        Rat c(0, 1);
        for (int slot = 0; slot < d() - 1; ++slot) {
            int i = backward ? img_slot_to_interval_[slot] : slot;
            c = c + lengths_[i];
            out.push_back(c);
        }
        return out;
    }

    std::vector<std::uint64_t> discontinuity_nums(bool backward) const
    {
        std::vector<std::uint64_t> out;
        const auto& cum = backward ? img_cum_ : cum_;
        for (int i = 1; i < d(); ++i) out.push_back(cum[i]);
        return out;
    }

    // Convenient exact fixed-point coordinates of the forward discontinuities.
    std::vector<Frac> discontinuity_points() const
    {
        std::vector<Frac> out;
        for (int i = 1; i < d(); ++i)
            out.push_back(Frac::from_ratio(cum_[i], den_));
        return out;
    }

    const std::vector<std::uint64_t>& domain_cum() const { return cum_; }
    const std::vector<std::uint64_t>& image_cum() const { return img_cum_; }

    // One-step snapshot map; agrees exactly with cursor orbits.
    Frac map_point(Frac p) const
    {
        IetCursor c = cursor_at(p);
        c.advance();
        return c.point();
    }

    // --- orbit cursor: exact numerator over Q = lcm(den, 2^64) ---

    class IetCursor {
    public:
        using point_t = Frac;

        IetCursor() = default;
        IetCursor(const Iet* spec, unsigned __int128 num) : spec_(spec), num_(num) {}

        void advance()
        {
            const Iet& s = *spec_;
            int i = 0;
            while (num_ >= s.boundQ_[i + 1]) ++i;
            num_ += s.offQ_[i];
            if (num_ >= s.Q_) num_ -= s.Q_;
        }

        Frac point() const
        {
            if (spec_->scaleQ_ == 1) return Frac{static_cast<std::uint64_t>(num_)};
            return Frac{static_cast<std::uint64_t>(num_ / spec_->scaleQ_)};
        }

    private:
        const Iet* spec_ = nullptr;
        unsigned __int128 num_ = 0;
    };

    using cursor_t = IetCursor;

    IetCursor cursor_at(Frac p) const
    {
        return IetCursor(this, (unsigned __int128)p.raw * scaleQ_);
    }

    // Lebesgue is the invariant measure.
    IetCursor sample_cursor(std::mt19937_64& rng) const { return cursor_at(Frac{rng()}); }
    Frac sample_point(std::mt19937_64& rng) const { return Frac{rng()}; }

    // --- minimum circular gap among the discontinuity set of T^-n ---
    // The set is the union over j = 0..n-1 of T^j(backward discontinuities).
    struct DeltaGap {
        Rat delta;
        bool degenerate = false; // coinciding points (gap 0)
    };

    DeltaGap delta_gap(std::uint64_t n) const
    {
        DeltaTracker t(*this);
        for (std::uint64_t j = 1; j <= n; ++j) t.step();
        return DeltaGap{Rat(static_cast<long long>(t.min_gap()), static_cast<long long>(den_)),
                        t.degenerate()};
    }

    // Incremental tracker: after k step() calls it holds the discontinuity
    // set of T^-k and its minimum gap (monotone non-increasing in k).
    class DeltaTracker {
    public:
        explicit DeltaTracker(const Iet& spec)
            : spec_(&spec), frontier_(spec.discontinuity_nums(true))
        {
        }

        void step()
        {
            if (n_ > 0) {
                for (auto& x : frontier_) x = spec_->apply_num(x);
            }
            ++n_;
            for (std::uint64_t x : frontier_) insert(x);
        }

        std::uint64_t n() const { return n_; }
        std::uint64_t min_gap() const { return degenerate_ ? 0 : gap_; }
        bool degenerate() const { return degenerate_; }

    private:
        void insert(std::uint64_t x)
        {
            auto [it, fresh] = points_.insert(x);
            if (!fresh) {
                degenerate_ = true;
                return;
            }
            if (points_.size() == 1) {
                gap_ = spec_->den_; // single point: full circle
                return;
            }
            auto nxt = std::next(it);
            std::uint64_t right = (nxt == points_.end()) ? *points_.begin() + spec_->den_ : *nxt;
            std::uint64_t left = (it == points_.begin()) ? *points_.rbegin() : *std::prev(it);
            std::uint64_t gl = x >= left ? x - left : x + spec_->den_ - left;
            std::uint64_t gr = right - x;
            gap_ = std::min(gap_, std::min(gl, gr));
        }

        const Iet* spec_;
        std::vector<std::uint64_t> frontier_;
        std::set<std::uint64_t> points_;
        std::uint64_t gap_ = 0;
        std::uint64_t n_ = 0;
        bool degenerate_ = false;
    };

    std::string name() const
    {
        std::string s = "iet(d=" + std::to_string(d()) + ",perm=";
        for (int i = 0; i < d(); ++i) s += (i ? "." : "") + std::to_string(perm_[i]);
        s += ")";
        return s;
    }

private:
    void build()
    {
        const int n = d();
        if (n < 2) throw DomainError("iet needs at least 2 intervals");
        if (static_cast<int>(perm_.size()) != n) throw DomainError("iet permutation size mismatch");
        std::vector<bool> seen(n + 1, false);
        for (int v : perm_) {
            if (v < 1 || v > n || seen[v]) throw DomainError("iet permutation is not a bijection");
            seen[v] = true;
        }

        long long den = 1;
        for (const auto& L : lengths_) {
            if (L.num <= 0) throw DomainError("iet lengths must be positive");
            long long g = std::gcd(den, L.den);
            __int128 l = (__int128)(den / g) * L.den;
            if (l > (__int128)(1ll << 62)) throw OverflowError("iet common denominator too large");
            den = static_cast<long long>(l);
        }
        den_ = static_cast<std::uint64_t>(den);

        len_num_.resize(n);
        std::uint64_t total = 0;
        for (int i = 0; i < n; ++i) {
            len_num_[i] = static_cast<std::uint64_t>(lengths_[i].num * (den / lengths_[i].den));
            total += len_num_[i];
        }
        if (total != den_) throw DomainError("iet lengths must sum to exactly 1");

        cum_.assign(n + 1, 0);
        for (int i = 0; i < n; ++i) cum_[i + 1] = cum_[i] + len_num_[i];

        img_slot_to_interval_.assign(n, 0);
        for (int i = 0; i < n; ++i) img_slot_to_interval_[perm_[i] - 1] = i;

        img_cum_.assign(n + 1, 0);
        for (int slot = 0; slot < n; ++slot)
            img_cum_[slot + 1] = img_cum_[slot] + len_num_[img_slot_to_interval_[slot]];

        img_start_.assign(n, 0);
        for (int slot = 0; slot < n; ++slot) img_start_[img_slot_to_interval_[slot]] = img_cum_[slot];

        off_.assign(n, 0);
        for (int i = 0; i < n; ++i) {
            std::uint64_t o = img_start_[i] + den_ - cum_[i];
            if (o >= den_) o -= den_;
            off_[i] = o;
        }

        // cursor scaling: Q = lcm(den, 2^64) = scaleQ * 2^64, and every
        // boundary/offset scales by Q/den = 2^64/g.
        std::uint64_t g = den_ & (~den_ + 1); // largest power of two dividing den_
        scaleQ_ = den_ / g;
        Q_ = (unsigned __int128)scaleQ_ << 64;
        unsigned __int128 per_unit = ((unsigned __int128)1 << 64) / g;
        boundQ_.assign(n + 1, 0);
        for (int i = 0; i <= n; ++i) boundQ_[i] = (unsigned __int128)cum_[i] * per_unit;
        offQ_.assign(n, 0);
        for (int i = 0; i < n; ++i) offQ_[i] = (unsigned __int128)off_[i] * per_unit;
    }

    int locate(std::uint64_t x) const
    {
        int i = 0;
        while (x >= cum_[i + 1]) ++i;
        return i;
    }

    int locate_image(std::uint64_t x) const
    {
        int j = 0;
        while (x >= img_cum_[j + 1]) ++j;
        return j;
    }

    Rat offset_rat(int i) const
    {
        return Rat(static_cast<long long>(img_start_[i]), static_cast<long long>(den_)) -
               Rat(static_cast<long long>(cum_[i]), static_cast<long long>(den_));
    }

    std::vector<Rat> lengths_;
    std::vector<int> perm_;
    std::uint64_t den_ = 1;
    std::vector<std::uint64_t> len_num_;
    std::vector<std::uint64_t> cum_;      // domain endpoints, cum_[0]=0 .. cum_[d]=den
    std::vector<std::uint64_t> img_cum_;  // image endpoints
    std::vector<std::uint64_t> img_start_; // image start per interval
    std::vector<std::uint64_t> off_;      // translation per interval, mod den
    std::vector<int> img_slot_to_interval_;

    // cursor machinery
    std::uint64_t scaleQ_ = 1; // den / gcd(den, 2^64)
    unsigned __int128 Q_ = 0;
    std::vector<unsigned __int128> boundQ_;
    std::vector<unsigned __int128> offQ_;
};

// Lengths drawn from the uniform simplex via exponential gaps, rounded to
// denominator 2^40; permutation uniform over irreducible ones. Deterministic
// in the seed.
inline Iet random_iet(int d, std::uint64_t seed)
{
    if (d < 2 || d > 6) throw DomainError("random_iet supports d in 2..6");
    std::mt19937_64 rng(derive_seed(seed, {0x1e7u, static_cast<std::uint64_t>(d)}));

    const std::uint64_t den = std::uint64_t{1} << 40;
    std::vector<double> e(d);
    double total = 0.0;
    for (int i = 0; i < d; ++i) {
        e[i] = exp_draw(rng);
        total += e[i];
    }
    std::vector<std::uint64_t> num(d, 0);
    std::uint64_t assigned = 0;
    int largest = 0;
    for (int i = 0; i < d; ++i) {
        num[i] = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(e[i] / total * den));
        assigned += num[i];
        if (num[i] > num[largest]) largest = i;
    }
    // fix the rounding remainder on the largest piece, keeping all positive
    if (assigned <= den) {
        num[largest] += den - assigned;
    } else {
        std::uint64_t excess = assigned - den;
        if (num[largest] <= excess) throw DomainError("random_iet degenerate rounding");
        num[largest] -= excess;
    }

    std::vector<int> perm(d);
    for (;;) {
        for (int i = 0; i < d; ++i) perm[i] = i + 1;
        for (int i = d - 1; i > 0; --i) {
            int j = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(i + 1)));
            std::swap(perm[i], perm[j]);
        }
        // irreducibility: no prefix {1..k}, k < d, maps onto {1..k}
        bool ok = true;
        int max_img = 0;
        for (int i = 0; i < d - 1; ++i) {
            max_img = std::max(max_img, perm[i]);
            if (max_img == i + 1) { ok = false; break; }
        }
        if (ok) break;
    }

    std::vector<Rat> lengths;
    lengths.reserve(d);
    for (int i = 0; i < d; ++i)
        lengths.emplace_back(static_cast<long long>(num[i]), static_cast<long long>(den));
    return Iet(std::move(lengths), std::move(perm));
}

} // namespace hitdim
