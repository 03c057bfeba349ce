#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include <fsid/errors.hpp>

namespace fsid {

// Spectral resolution of an observation window of length T: two frequencies
// closer than 2*pi/T cannot be told apart on that record.
inline double resolution(double duration) {
    if (!std::isfinite(duration) || duration <= 0.0)
        throw std::invalid_argument("record duration must be finite and positive");
    return 2.0 * 3.14159265358979323846 / duration;
}

// A sorted set of positive frequencies with pairwise gaps of at least the
// attached resolution delta.  This is the invariant all set operations below
// preserve, which makes "same frequency" well defined up to delta.
class FrequencySet {
public:
    FrequencySet(std::vector<double> frequencies, double delta)
        : frequencies_(std::move(frequencies)), delta_(delta) {
        if (!std::isfinite(delta_) || delta_ <= 0.0)
            throw std::invalid_argument("resolution delta must be finite and positive");
        for (std::size_t i = 0; i < frequencies_.size(); ++i) {
            if (!std::isfinite(frequencies_[i]) || frequencies_[i] <= 0.0)
                throw std::invalid_argument("frequencies must be finite and positive");
            if (i > 0 && frequencies_[i] - frequencies_[i - 1] < delta_)
                throw std::invalid_argument(
                    "frequencies must be ascending with gaps of at least delta");
        }
    }

    const std::vector<double>& frequencies() const noexcept { return frequencies_; }
    double delta() const noexcept { return delta_; }
    std::size_t size() const noexcept { return frequencies_.size(); }
    bool empty() const noexcept { return frequencies_.empty(); }

private:
    std::vector<double> frequencies_;
    double delta_;
};

namespace detail {

// Shared worker: sorts, chains clusters by consecutive gap < delta, and picks
// one representative per cluster (largest amplitude when amplitudes are
// given, otherwise the smallest frequency).
inline FrequencySet merge_close_impl(const std::vector<double>& freqs,
                                     const std::vector<double>* amps,
                                     double delta) {
    if (!std::isfinite(delta) || delta <= 0.0)
        throw std::invalid_argument("resolution delta must be finite and positive");
    if (amps && amps->size() != freqs.size())
        throw std::invalid_argument("one amplitude per frequency required");

    std::vector<std::size_t> order(freqs.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t l, std::size_t r) { return freqs[l] < freqs[r]; });

    std::vector<double> reps;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t best = order[i];
        std::size_t j = i + 1;
        while (j < order.size() && freqs[order[j]] - freqs[order[j - 1]] < delta) {
            if (amps && (*amps)[order[j]] > (*amps)[best]) best = order[j];
            ++j;
        }
        reps.push_back(freqs[best]);
        i = j;
    }
    return FrequencySet(std::move(reps), delta);
}

}  // namespace detail

// Collapses groups of frequencies that are mutually closer than delta
// (chained by consecutive gaps) into one representative each: the smallest
// frequency of the group.
inline FrequencySet merge_close(const std::vector<double>& freqs, double delta) {
    return detail::merge_close_impl(freqs, nullptr, delta);
}

// Amplitude-aware variant: the representative is the group member with the
// largest amplitude.
inline FrequencySet merge_close(const std::vector<double>& freqs,
                                const std::vector<double>& amps,
                                double delta) {
    return detail::merge_close_impl(freqs, &amps, delta);
}

// Frequencies of `a` that have a counterpart in `b` within delta (inclusive).
// The returned values are taken from `a`.  Both sets must carry the same
// resolution, otherwise "within delta" would be ill-defined.
inline FrequencySet intersect(const FrequencySet& a, const FrequencySet& b) {
    if (a.delta() != b.delta())
        throw std::invalid_argument("cannot intersect sets with different resolutions");
    const double delta = a.delta();
    std::vector<double> out;
    std::size_t j = 0;
    for (double fa : a.frequencies()) {
        while (j < b.size() && b.frequencies()[j] < fa - delta) ++j;
        if (j < b.size() && std::abs(b.frequencies()[j] - fa) <= delta) out.push_back(fa);
    }
    return FrequencySet(std::move(out), delta);
}

// Frequencies private to sets[index]: every frequency that comes strictly
// closer than delta to a frequency of any *other* set is dropped.  A gap of
// exactly delta counts as distinct.
inline FrequencySet discard_shared(const std::vector<FrequencySet>& sets, std::size_t index) {
    if (sets.empty()) throw std::invalid_argument("discard_shared needs at least one set");
    if (index >= sets.size()) throw std::invalid_argument("set index out of range");
    const double delta = sets[index].delta();
    for (const FrequencySet& s : sets)
        if (s.delta() != delta)
            throw std::invalid_argument("all sets must carry the same resolution");

    std::vector<double> out;
    for (double f : sets[index].frequencies()) {
        bool shared = false;
        for (std::size_t k = 0; k < sets.size() && !shared; ++k) {
            if (k == index) continue;
            for (double g : sets[k].frequencies()) {
                if (std::abs(g - f) < delta) {
                    shared = true;
                    break;
                }
            }
        }
        if (!shared) out.push_back(f);
    }
    return FrequencySet(std::move(out), delta);
}

}  // namespace fsid
