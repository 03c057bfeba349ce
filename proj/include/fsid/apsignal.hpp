#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <fsid/errors.hpp>

namespace fsid {

// One sinusoidal component a*cos(omega*t) + b*sin(omega*t), omega > 0.
struct Harmonic {
    double omega = 0.0;
    double a = 0.0;
    double b = 0.0;
};

// Finite trigonometric sum with a constant offset:
//   x(t) = offset + sum_l (a_l cos(omega_l t) + b_l sin(omega_l t)).
// Construction normalizes the component list: sorted by frequency, components
// whose frequencies agree to within 1e-12 (relative) merged by summing their
// cosine/sine amplitudes.
class APSignal {
public:
    APSignal() = default;

    explicit APSignal(std::vector<Harmonic> harmonics, double offset = 0.0)
        : offset_(offset) {
        if (!std::isfinite(offset_)) throw std::invalid_argument("signal offset must be finite");
        for (const Harmonic& h : harmonics) {
            if (!std::isfinite(h.omega) || h.omega <= 0.0)
                throw std::invalid_argument("harmonic frequency must be finite and positive");
            if (!std::isfinite(h.a) || !std::isfinite(h.b))
                throw std::invalid_argument("harmonic amplitudes must be finite");
        }
        std::sort(harmonics.begin(), harmonics.end(),
                  [](const Harmonic& l, const Harmonic& r) { return l.omega < r.omega; });
        for (const Harmonic& h : harmonics) {
            if (!harmonics_.empty()) {
                Harmonic& last = harmonics_.back();
                if (h.omega - last.omega <= 1e-12 * h.omega) {
                    last.a += h.a;
                    last.b += h.b;
                    continue;
                }
            }
            harmonics_.push_back(h);
        }
    }

    const std::vector<Harmonic>& harmonics() const noexcept { return harmonics_; }
    double offset() const noexcept { return offset_; }

private:
    std::vector<Harmonic> harmonics_;
    double offset_ = 0.0;
};

// Evaluates the signal at time t.
inline double eval(const APSignal& sig, double t) {
    double acc = sig.offset();
    for (const Harmonic& h : sig.harmonics())
        acc += h.a * std::cos(h.omega * t) + h.b * std::sin(h.omega * t);
    return acc;
}

// Uniformly sampled record: samples[i] taken at t = dt * i.
class TimeSeries {
public:
    TimeSeries(double dt, std::vector<double> samples)
        : dt_(dt), samples_(std::move(samples)) {
        if (!std::isfinite(dt_) || dt_ <= 0.0)
            throw std::invalid_argument("sampling step must be finite and positive");
        if (samples_.size() < 2)
            throw std::invalid_argument("a record needs at least two samples");
        for (double s : samples_)
            if (!std::isfinite(s)) throw std::invalid_argument("record samples must be finite");
    }

    double dt() const noexcept { return dt_; }
    std::size_t size() const noexcept { return samples_.size(); }
    const std::vector<double>& samples() const noexcept { return samples_; }

    // Observation window length T = dt * N.
    double duration() const noexcept { return dt_ * static_cast<double>(samples_.size()); }

private:
    double dt_;
    std::vector<double> samples_;
};

// Samples the signal at t = 0, dt, ..., (n-1)*dt.  The record must cover at
// least one full period of the slowest harmonic, otherwise the spectral
// resolution claim for the record would be vacuous.
inline TimeSeries synthesize(const APSignal& sig, double dt, std::size_t n) {
    if (!std::isfinite(dt) || dt <= 0.0)
        throw std::invalid_argument("sampling step must be finite and positive");
    if (n < 2) throw std::invalid_argument("a record needs at least two samples");
    if (!sig.harmonics().empty()) {
        const double slowest = sig.harmonics().front().omega;
        const double period = 2.0 * 3.14159265358979323846 / slowest;
        if (dt * static_cast<double>(n) < period)
            throw std::invalid_argument(
                "record duration must cover one period of the slowest harmonic");
    }
    std::vector<double> samples(n);
    for (std::size_t i = 0; i < n; ++i) samples[i] = eval(sig, dt * static_cast<double>(i));
    return TimeSeries(dt, std::move(samples));
}

// Measurement model applied to a clean record:
//   z~(t) = theta_hat * z(t) + p(t) + n(t)
// with a multiplicative gain, a reduced (structured) disturbance and an
// additive disturbance, both almost-periodic signals.
struct NoiseModel {
    double theta_hat = 1.0;
    APSignal reduced;
    APSignal additive;
};

// Applies the measurement model sample by sample.  The identity model
// (unit gain, empty disturbances) returns the input record bit for bit.
inline TimeSeries apply_noise(const TimeSeries& clean, const NoiseModel& noise) {
    if (!std::isfinite(noise.theta_hat))
        throw std::invalid_argument("measurement gain must be finite");
    const bool no_reduced =
        noise.reduced.harmonics().empty() && noise.reduced.offset() == 0.0;
    const bool no_additive =
        noise.additive.harmonics().empty() && noise.additive.offset() == 0.0;
    if (noise.theta_hat == 1.0 && no_reduced && no_additive) return clean;

    std::vector<double> out(clean.size());
    const double dt = clean.dt();
    for (std::size_t i = 0; i < clean.size(); ++i) {
        const double t = dt * static_cast<double>(i);
        double v = noise.theta_hat * clean.samples()[i];
        if (!no_reduced) v += eval(noise.reduced, t);
        if (!no_additive) v += eval(noise.additive, t);
        out[i] = v;
    }
    return TimeSeries(dt, std::move(out));
}

// A harmonic group shared verbatim by the two inputs with indices i and l.
struct Coupling {
    std::size_t i = 0;
    std::size_t l = 0;
    APSignal signal;
};

using CouplingSpec = std::vector<Coupling>;

// Builds the actual multi-input excitation from private per-input signals and
// pairwise couplings.  Every coupling harmonic must stay at least `delta`
// away from every private harmonic of every input, otherwise the shared
// content could not be told apart from private content at resolution delta.
inline std::vector<APSignal> make_coupled_inputs(const std::vector<APSignal>& privates,
                                                 const CouplingSpec& couplings,
                                                 double delta) {
    if (!std::isfinite(delta) || delta <= 0.0)
        throw std::invalid_argument("resolution delta must be finite and positive");

    for (const Coupling& c : couplings) {
        if (c.i == c.l) throw std::invalid_argument("a coupling must join two distinct inputs");
        if (c.i >= privates.size() || c.l >= privates.size())
            throw std::invalid_argument("coupling input index out of range");
        for (const Harmonic& shared : c.signal.harmonics()) {
            for (const APSignal& priv : privates) {
                for (const Harmonic& own : priv.harmonics()) {
                    if (std::abs(shared.omega - own.omega) < delta)
                        throw CouplingCollision(
                            "coupling harmonic at omega = " + std::to_string(shared.omega) +
                            " is closer than the resolution delta to a private harmonic");
                }
            }
        }
    }

    std::vector<std::vector<Harmonic>> parts(privates.size());
    std::vector<double> offsets(privates.size(), 0.0);
    for (std::size_t k = 0; k < privates.size(); ++k) {
        parts[k] = privates[k].harmonics();
        offsets[k] = privates[k].offset();
    }
    for (const Coupling& c : couplings) {
        for (std::size_t idx : {c.i, c.l}) {
            const auto& hs = c.signal.harmonics();
            parts[idx].insert(parts[idx].end(), hs.begin(), hs.end());
            offsets[idx] += c.signal.offset();
        }
    }

    std::vector<APSignal> out;
    out.reserve(privates.size());
    for (std::size_t k = 0; k < privates.size(); ++k)
        out.emplace_back(std::move(parts[k]), offsets[k]);
    return out;
}

}  // namespace fsid
