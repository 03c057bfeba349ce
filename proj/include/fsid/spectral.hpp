#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include <fsid/apsignal.hpp>
#include <fsid/errors.hpp>
#include <fsid/freqalg.hpp>

namespace fsid {

// Mean power of a record: (1/N) * sum of squared samples.
inline double mean_power(const TimeSeries& ts) {
    double acc = 0.0;
    for (double s : ts.samples()) acc += s * s;
    return acc / static_cast<double>(ts.size());
}

// Fourier exponent of a record at angular frequency omega:
//   S(j*omega) = (1/N) * sum_i samples[i] * exp(-j * omega * i * dt).
// For a harmonic a*cos + b*sin whose frequency is commensurate with the
// window (an integer number of periods fits), S at that frequency is exactly
// (a - j*b)/2 and exactly 0 at every other commensurate frequency.
inline std::complex<double> fourier_exponent(const TimeSeries& ts, double omega) {
    if (!std::isfinite(omega) || omega < 0.0)
        throw std::invalid_argument("frequency must be finite and non-negative");
    const double dt = ts.dt();
    const std::complex<double> step = std::polar(1.0, -omega * dt);
    std::complex<double> rotor(1.0, 0.0);
    std::complex<double> acc(0.0, 0.0);
    const std::vector<double>& x = ts.samples();
    for (std::size_t i = 0; i < x.size(); ++i) {
        // Re-anchor the recurrence periodically so rounding cannot accumulate.
        if ((i & 255u) == 0u)
            rotor = std::polar(1.0, -omega * dt * static_cast<double>(i));
        acc += x[i] * rotor;
        rotor *= step;
    }
    return acc / static_cast<double>(x.size());
}

// Fourier exponents of one record evaluated on a uniform frequency grid.
class Spectrum {
public:
    Spectrum(std::vector<double> grid,
             std::vector<std::complex<double>> values,
             double source_duration,
             double source_dt,
             double source_mean)
        : grid_(std::move(grid)),
          values_(std::move(values)),
          source_duration_(source_duration),
          source_dt_(source_dt),
          source_mean_(source_mean) {
        amplitudes_.reserve(values_.size());
        for (const auto& v : values_) amplitudes_.push_back(std::abs(v));
    }

    const std::vector<double>& grid() const noexcept { return grid_; }
    const std::vector<std::complex<double>>& values() const noexcept { return values_; }
    const std::vector<double>& amplitudes() const noexcept { return amplitudes_; }
    double source_duration() const noexcept { return source_duration_; }
    double source_dt() const noexcept { return source_dt_; }
    double source_mean() const noexcept { return source_mean_; }

private:
    std::vector<double> grid_;
    std::vector<std::complex<double>> values_;
    std::vector<double> amplitudes_;
    double source_duration_;
    double source_dt_;
    double source_mean_;
};

// Scans the Fourier exponent over [omega_min, omega_max] with the given step.
// The step must not exceed a quarter of the record's resolution, otherwise
// peaks could fall between grid points unseen.
inline Spectrum amplitude_spectrum(const TimeSeries& ts,
                                   double omega_min,
                                   double omega_max,
                                   double step) {
    if (!std::isfinite(omega_min) || !std::isfinite(omega_max) || !std::isfinite(step))
        throw std::invalid_argument("grid bounds and step must be finite");
    if (omega_min <= 0.0 || omega_max <= omega_min)
        throw std::invalid_argument("grid requires 0 < omega_min < omega_max");
    if (step <= 0.0) throw std::invalid_argument("grid step must be positive");

    const double delta = resolution(ts.duration());
    if (step > 0.25 * delta)
        throw GridTooCoarse("scan step exceeds a quarter of the record resolution 2*pi/T");

    const double span = (omega_max - omega_min) / step;
    if (span > 2e7) throw std::invalid_argument("frequency grid would exceed 20e6 points");
    const std::size_t count = static_cast<std::size_t>(span + 1e-9) + 1;

    std::vector<double> grid(count);
    for (std::size_t k = 0; k < count; ++k)
        grid[k] = omega_min + static_cast<double>(k) * step;

    std::vector<std::complex<double>> values(count);
    for (std::size_t k = 0; k < count; ++k) values[k] = fourier_exponent(ts, grid[k]);

    const double mean =
        std::accumulate(ts.samples().begin(), ts.samples().end(), 0.0) /
        static_cast<double>(ts.size());
    return Spectrum(std::move(grid), std::move(values), ts.duration(), ts.dt(), mean);
}

namespace detail {

// Magnitude of the normalized window kernel at frequency offset `off`:
//   |(1/N) * sum_{i<N} exp(-j*off*dt*i)| = |sin(N*off*dt/2)| / (N*|sin(off*dt/2)|).
// This is the exact leakage a unit component at distance `off` contributes,
// zero at nonzero multiples of the resolution and 1 at off = 0.
inline double window_kernel(double off, double duration, double n, double dt) {
    const double s = std::sin(0.5 * off * dt);
    if (std::abs(s) * n < 1e-12) return 1.0;
    const double v = std::abs(std::sin(0.5 * off * duration) / (n * s));
    return std::min(v, 1.0);
}

// Complex window response W(off) = (1/N) * sum_{i<N} exp(-j*off*dt*i), the
// exact value a unit complex exponential at frequency distance `off`
// contributes to the Fourier exponent of an N-sample record.
inline std::complex<double> window_response(double off, double n, double dt) {
    const double phi = off * dt;
    const double s = std::sin(0.5 * phi);
    const std::complex<double> phase = std::polar(1.0, -0.5 * phi * (n - 1.0));
    if (std::abs(s) * n < 1e-9) return phase;
    return phase * (std::sin(0.5 * phi * n) / (n * s));
}

}  // namespace detail

// Extracts harmonic frequencies from a scanned spectrum:
//   1. strict local maxima of the amplitude at or above rel_threshold times
//      the global maximum become candidates;
//   2. each candidate is refined by a parabolic fit through the logarithmic
//      amplitudes of its three surrounding grid points;
//   3. candidates explainable as window leakage of stronger candidates are
//      suppressed: processed in descending amplitude, a candidate is dropped
//      when its amplitude does not exceed 1.1 times the exact leakage bound
//      of everything accepted before it (including the record mean and the
//      negative-frequency images);
//   4. accepted positions are polished by deflation: the spectrum near each
//      peak is modeled as that peak's window lobe plus the exactly computable
//      leakage of all other accepted peaks (and the record mean), and the
//      position is re-solved against the known lobe shape with the leakage
//      subtracted.  Mutual leakage biases raw parabolic positions by a few
//      percent of the resolution, which is far too coarse for consumers that
//      evaluate Fourier exponents at the returned frequencies;
//   5. survivors closer than the record resolution merge, keeping the larger.
// The attached resolution of the result is the record resolution scaled by
// delta_mult.
inline FrequencySet find_peaks(const Spectrum& spec,
                               double rel_threshold = 0.05,
                               double delta_mult = 1.0) {
    if (!std::isfinite(rel_threshold) || rel_threshold <= 0.0 || rel_threshold >= 1.0)
        throw std::invalid_argument("relative threshold must lie in (0, 1)");
    if (!std::isfinite(delta_mult) || delta_mult <= 0.0)
        throw std::invalid_argument("resolution multiplier must be positive");

    const double delta = resolution(spec.source_duration());
    const double delta_eff = delta * delta_mult;
    const std::vector<double>& amp = spec.amplitudes();
    const std::vector<double>& grid = spec.grid();

    double amax = 0.0;
    for (double a : amp) amax = std::max(amax, a);
    if (amax <= 0.0) return FrequencySet({}, delta_eff);
    const double floor_amp = rel_threshold * amax;

    struct Candidate {
        double freq;
        double amp;
    };
    std::vector<Candidate> cands;
    for (std::size_t k = 1; k + 1 < amp.size(); ++k) {
        if (!(amp[k] > amp[k - 1] && amp[k] > amp[k + 1])) continue;
        if (amp[k] < floor_amp) continue;
        double d = 0.0;
        double peak = amp[k];
        if (amp[k - 1] > 0.0 && amp[k + 1] > 0.0) {
            const double ym = std::log(amp[k - 1]);
            const double y0 = std::log(amp[k]);
            const double yp = std::log(amp[k + 1]);
            const double denom = ym - 2.0 * y0 + yp;
            if (denom < 0.0) {
                d = 0.5 * (ym - yp) / denom;
                d = std::clamp(d, -1.0, 1.0);
                peak = std::exp(y0 - 0.25 * (ym - yp) * d);
            }
        }
        const double step = grid[k + 1] - grid[k];
        cands.push_back({grid[k] + d * step, peak});
    }

    std::sort(cands.begin(), cands.end(),
              [](const Candidate& l, const Candidate& r) { return l.amp > r.amp; });

    const double duration = spec.source_duration();
    const double dt = spec.source_dt();
    const double n = duration / dt;
    const double mean_amp = std::abs(spec.source_mean());

    std::vector<Candidate> accepted;
    for (const Candidate& c : cands) {
        double leak = mean_amp * detail::window_kernel(c.freq, duration, n, dt);
        for (const Candidate& p : accepted) {
            leak += p.amp * (detail::window_kernel(c.freq - p.freq, duration, n, dt) +
                             detail::window_kernel(c.freq + p.freq, duration, n, dt));
        }
        if (c.amp > 1.1 * leak) accepted.push_back(c);
    }

    // Deflation polish.  Model of the scanned exponent:
    //   S(w) = offset*W(w) + sum_p [X_p*W(w - w_p) + conj(X_p)*W(w + w_p)]
    // with W the complex window response.  Round-robin over the accepted
    // peaks (strongest first): re-estimate X_p from the grid sample nearest
    // the peak with everything else subtracted, then re-solve the position
    // from the two cleaned neighbour samples, whose ratio pins the lobe
    // centre exactly.  Each round shrinks every position error by the
    // mutual leakage factor, so iterating until the positions stop moving
    // reaches machine accuracy for peaks separated by the resolution.
    struct Peak {
        double freq;
        double coarse;
        std::size_t idx;
        std::complex<double> X;
    };
    std::vector<Peak> peaks;
    const std::vector<std::complex<double>>& values = spec.values();
    if (grid.size() >= 3) {
        const double step = grid[1] - grid[0];
        for (const Candidate& c : accepted) {
            const double pos = (c.freq - grid.front()) / step;
            const std::size_t idx = static_cast<std::size_t>(
                std::clamp(std::lround(pos), 1L, static_cast<long>(grid.size()) - 2));
            peaks.push_back({c.freq, c.freq, idx, values[idx]});
        }
        double offset_est = spec.source_mean();
        const auto model_at = [&](std::size_t skip, double w) {
            std::complex<double> acc = offset_est * detail::window_response(w, n, dt);
            for (std::size_t r = 0; r < peaks.size(); ++r) {
                if (r != skip)
                    acc += peaks[r].X * detail::window_response(w - peaks[r].freq, n, dt);
                acc += std::conj(peaks[r].X) * detail::window_response(w + peaks[r].freq, n, dt);
            }
            return acc;
        };
        for (int round = 0; round < 60; ++round) {
            double off_acc = spec.source_mean();
            for (const Peak& p : peaks)
                off_acc -= 2.0 * std::real(p.X * std::conj(detail::window_response(p.freq, n, dt)));
            offset_est = off_acc;
            double moved = 0.0;
            for (std::size_t pi = 0; pi < peaks.size(); ++pi) {
                Peak& p = peaks[pi];
                const std::complex<double> self =
                    detail::window_response(grid[p.idx] - p.freq, n, dt);
                if (std::abs(self) > 0.5)
                    p.X = (values[p.idx] - model_at(pi, grid[p.idx])) / self;
                const double cm = std::abs(values[p.idx - 1] - model_at(pi, grid[p.idx - 1]));
                const double cp = std::abs(values[p.idx + 1] - model_at(pi, grid[p.idx + 1]));
                if (!(cm > 0.0) || !(cp > 0.0)) continue;
                // f grows monotonically in w0 across the lobe and vanishes at
                // the true centre; bisect it between the neighbour samples.
                const auto f = [&](double w0) {
                    return detail::window_kernel(grid[p.idx + 1] - w0, duration, n, dt) * cm -
                           detail::window_kernel(grid[p.idx - 1] - w0, duration, n, dt) * cp;
                };
                double lo = grid[p.idx] - step;
                double hi = grid[p.idx] + step;
                if (!(f(lo) < 0.0) || !(f(hi) > 0.0)) continue;
                for (int it = 0; it < 64; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    if (f(mid) < 0.0) lo = mid; else hi = mid;
                }
                const double refined = 0.5 * (lo + hi);
                if (std::abs(refined - p.coarse) <= 0.75 * delta) {
                    moved = std::max(moved, std::abs(refined - p.freq));
                    p.freq = refined;
                }
            }
            if (moved < 1e-12 * delta) break;
        }
    }

    std::vector<double> freqs, amps;
    freqs.reserve(accepted.size());
    amps.reserve(accepted.size());
    if (!peaks.empty()) {
        for (const Peak& p : peaks) {
            freqs.push_back(p.freq);
            amps.push_back(2.0 * std::abs(p.X));
        }
    } else {
        for (const Candidate& c : accepted) {
            freqs.push_back(c.freq);
            amps.push_back(c.amp);
        }
    }
    return merge_close(freqs, amps, delta_eff);
}

}  // namespace fsid
