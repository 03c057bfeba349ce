#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include <fsid/apsignal.hpp>
#include <fsid/errors.hpp>

namespace fsid {

// Fourier exponents of the input and output records at one matched frequency.
struct FourierExponentPair {
    double omega = 0.0;
    std::complex<double> s_in{0.0, 0.0};
    std::complex<double> s_out{0.0, 0.0};
};

// W(j*omega) = S_out / S_in, the empirical frequency response at one matched
// frequency.  Undefined when the input exponent is (numerically) zero.
inline std::complex<double> frequency_response_point(const FourierExponentPair& pair) {
    const double nin = std::abs(pair.s_in);
    if (nin == 0.0 || nin < 1e-12 * std::abs(pair.s_out))
        throw ZeroInputExponent("input Fourier exponent vanishes at omega = " +
                                std::to_string(pair.omega));
    return pair.s_out / pair.s_in;
}

// Reads the astatism index off the quadrant of the lowest-frequency response:
// first quadrant -> 0, second -> 1, third -> 2.  The fourth quadrant has no
// assigned index, and a response within axis_tol radians of a coordinate axis
// is treated as unreadable as well.
inline int detect_astatism(std::complex<double> W, double axis_tol = 1e-6) {
    if (!std::isfinite(W.real()) || !std::isfinite(W.imag()) || (W.real() == 0.0 && W.imag() == 0.0))
        throw std::invalid_argument("response ratio must be finite and nonzero");
    const double ang = std::arg(W);
    const double half_pi = 1.57079632679489661923;
    for (double axis : {0.0, half_pi, -half_pi, 2.0 * half_pi, -2.0 * half_pi}) {
        if (std::abs(ang - axis) < axis_tol)
            throw AmbiguousQuadrant("response ratio lies on a coordinate axis at angle " +
                                        std::to_string(ang),
                                    W);
    }
    if (W.real() > 0.0 && W.imag() > 0.0) return 0;
    if (W.real() < 0.0 && W.imag() > 0.0) return 1;
    if (W.real() < 0.0 && W.imag() < 0.0) return 2;
    throw AmbiguousQuadrant("fourth-quadrant response has no astatism assignment", W);
}

// Real least-squares system for the operator coefficients at a fixed astatism
// index p_a and trial order g.  Each matched frequency contributes two rows
// (real and imaginary part) of
//   sum_k T_k * (j*omega_hat)^(k+p_a) * S_out = S_in,   omega_hat = omega/omega_scale.
struct DesignSystem {
    Eigen::MatrixXd A;
    Eigen::VectorXd rhs;
    int p_a = 0;
    int g = 0;
    double omega_scale = 1.0;
};

inline DesignSystem build_system(const std::vector<FourierExponentPair>& pairs,
                                 int p_a,
                                 int g,
                                 double omega_scale = 1.0) {
    if (p_a < 0 || p_a > 2) throw std::invalid_argument("astatism index must be 0, 1 or 2");
    if (g < 0) throw std::invalid_argument("trial order must be non-negative");
    if (!std::isfinite(omega_scale) || omega_scale <= 0.0)
        throw std::invalid_argument("frequency scale must be finite and positive");

    const std::size_t q = pairs.size();
    const std::size_t unknowns = static_cast<std::size_t>(g) + 1;
    if (2 * q < unknowns)
        throw InsufficientFrequencies("trial order " + std::to_string(g) + " needs at least " +
                                      std::to_string((unknowns + 1) / 2) +
                                      " matched frequencies, have " + std::to_string(q));

    DesignSystem sys;
    sys.p_a = p_a;
    sys.g = g;
    sys.omega_scale = omega_scale;
    sys.A.resize(static_cast<Eigen::Index>(2 * q), static_cast<Eigen::Index>(unknowns));
    sys.rhs.resize(static_cast<Eigen::Index>(2 * q));

    for (std::size_t i = 0; i < q; ++i) {
        const FourierExponentPair& p = pairs[i];
        if (!std::isfinite(p.omega) || p.omega <= 0.0)
            throw std::invalid_argument("matched frequencies must be finite and positive");
        const std::complex<double> jw(0.0, p.omega / omega_scale);
        std::complex<double> base(1.0, 0.0);
        for (int k = 0; k < p_a; ++k) base *= jw;
        for (std::size_t k = 0; k < unknowns; ++k) {
            const std::complex<double> cell = base * p.s_out;
            sys.A(static_cast<Eigen::Index>(2 * i), static_cast<Eigen::Index>(k)) = cell.real();
            sys.A(static_cast<Eigen::Index>(2 * i + 1), static_cast<Eigen::Index>(k)) = cell.imag();
            base *= jw;
        }
        sys.rhs(static_cast<Eigen::Index>(2 * i)) = p.s_in.real();
        sys.rhs(static_cast<Eigen::Index>(2 * i + 1)) = p.s_in.imag();
    }
    return sys;
}

// One solved trial order: de-normalized coefficients plus the diagnostics the
// order-selection rule needs.
struct OrderFit {
    std::vector<double> coefficients;
    double residual = 0.0;
    double condition = 0.0;
};

inline OrderFit solve_order(const DesignSystem& sys) {
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(sys.A);
    const Eigen::Index cols = sys.A.cols();
    if (cod.rank() < cols)
        throw RankDeficient("design matrix rank " + std::to_string(cod.rank()) + " below " +
                            std::to_string(cols) + " unknowns");

    const Eigen::VectorXd x = cod.solve(sys.rhs);
    const double bnorm = sys.rhs.norm();
    const double rnorm = (sys.A * x - sys.rhs).norm();

    OrderFit fit;
    fit.residual = bnorm > 0.0 ? rnorm / bnorm : rnorm;
    const Eigen::VectorXd diag =
        cod.matrixQTZ().topLeftCorner(cols, cols).diagonal().cwiseAbs();
    fit.condition = diag.maxCoeff() / diag.minCoeff();

    fit.coefficients.resize(static_cast<std::size_t>(cols));
    double denorm = 1.0;
    for (int k = 0; k < sys.p_a; ++k) denorm *= sys.omega_scale;
    for (Eigen::Index k = 0; k < cols; ++k) {
        fit.coefficients[static_cast<std::size_t>(k)] = x(k) / denorm;
        denorm *= sys.omega_scale;
    }
    return fit;
}

// Knobs of the order/astatism selection.
struct IdentifyConfig {
    int min_order = 1;
    int max_order = 10;
    double consistency_tol = 1e-3;   // relative residual a trial may leave
    double condition_cap = 1e10;     // conditioning a trial may reach
    int pa_override = -1;            // force the astatism index (0..2); -1 = detect
    bool pa_vote3 = false;           // majority vote over the three lowest frequencies
    double leading_tol = 1e-6;       // scaled leading-coefficient significance floor
};

// Identified single channel: operator coefficients T_{p_a}..T_{p_a+order}
// (stored from lowest power up) plus the full per-trial audit trail.
struct ChannelModel {
    int p_a = 0;
    int order = 0;
    std::vector<double> coefficients;
    std::complex<double> W_lowest{0.0, 0.0};
    std::vector<double> residuals;   // one relative residual per trial order
    std::vector<double> conditions;  // one condition estimate per trial order
};

// Operator polynomial D(j*omega) = sum_k T_k (j*omega)^(k+p_a).
inline std::complex<double> operator_value(const ChannelModel& model, double omega) {
    const std::complex<double> jw(0.0, omega);
    std::complex<double> power(1.0, 0.0);
    for (int k = 0; k < model.p_a; ++k) power *= jw;
    std::complex<double> acc(0.0, 0.0);
    for (double c : model.coefficients) {
        acc += c * power;
        power *= jw;
    }
    return acc;
}

namespace detail {

inline int vote_astatism(const std::vector<FourierExponentPair>& pairs,
                         std::complex<double> W_lowest) {
    std::array<int, 3> votes{0, 0, 0};
    int valid = 0;
    const std::size_t n = std::min<std::size_t>(3, pairs.size());
    for (std::size_t i = 0; i < n; ++i) {
        try {
            ++votes[static_cast<std::size_t>(
                detect_astatism(frequency_response_point(pairs[i])))];
            ++valid;
        } catch (const MethodError&) {
            // An unreadable point simply does not vote.
        }
    }
    if (valid == 0)
        throw AmbiguousQuadrant("none of the three lowest frequencies has a readable quadrant",
                                W_lowest);
    int best = 0;
    for (int k = 1; k < 3; ++k)
        if (votes[static_cast<std::size_t>(k)] > votes[static_cast<std::size_t>(best)]) best = k;
    int holders = 0;
    for (int k = 0; k < 3; ++k)
        if (votes[static_cast<std::size_t>(k)] == votes[static_cast<std::size_t>(best)]) ++holders;
    if (holders > 1)
        throw AmbiguousQuadrant("quadrant vote over the three lowest frequencies is tied",
                                W_lowest);
    return best;
}

}  // namespace detail

// Identifies one channel from matched input/output Fourier exponents, given
// in strictly ascending frequency order.  The astatism index is read from the
// lowest-frequency response (or forced, or voted); then every trial order
// from min_order up to min(max_order, 2q-1) is solved and audited, and the
// largest trial passing all of the following is returned:
//   - relative residual within consistency_tol,
//   - condition estimate within condition_cap,
//   - above min_order: the next-lower order must fail to explain the data
//     (residual clearly above the floor the overdetermined trials settle
//     to; for the exactly determined trial g+1 == 2q, above consistency_tol
//     itself), so extra orders that only refit noise are never accepted,
//   - above min_order: a leading coefficient that is significant in
//     frequency-normalized coordinates (otherwise the trial merely pads a
//     lower-order model with zeros),
//   - an operator value bounded away from zero at every matched frequency.
inline ChannelModel identify_channel(const std::vector<FourierExponentPair>& pairs,
                                     const IdentifyConfig& cfg = {}) {
    if (pairs.empty()) throw InsufficientFrequencies("no matched frequencies to identify from");
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (!std::isfinite(pairs[i].omega) || pairs[i].omega <= 0.0)
            throw std::invalid_argument("matched frequencies must be finite and positive");
        if (i > 0 && pairs[i].omega <= pairs[i - 1].omega)
            throw std::invalid_argument("matched frequencies must be strictly ascending");
    }
    if (cfg.min_order < 1 || cfg.max_order < cfg.min_order)
        throw std::invalid_argument("order range requires 1 <= min_order <= max_order");
    if (!(cfg.consistency_tol > 0.0) || !(cfg.condition_cap > 0.0) || !(cfg.leading_tol > 0.0))
        throw std::invalid_argument("tolerances must be positive");
    if (cfg.pa_override < -1 || cfg.pa_override > 2)
        throw std::invalid_argument("astatism override must be -1 (detect) or 0..2");

    ChannelModel model;
    model.W_lowest = frequency_response_point(pairs.front());
    if (cfg.pa_override >= 0)
        model.p_a = cfg.pa_override;
    else if (cfg.pa_vote3)
        model.p_a = detail::vote_astatism(pairs, model.W_lowest);
    else
        model.p_a = detect_astatism(model.W_lowest);

    const std::size_t q = pairs.size();
    const int cap = std::min<int>(cfg.max_order, static_cast<int>(2 * q) - 1);
    if (cap < cfg.min_order)
        throw InsufficientFrequencies(
            "2q-1 = " + std::to_string(2 * q - 1) +
            " is below the requested minimum order " + std::to_string(cfg.min_order));

    std::vector<double> omegas(q);
    for (std::size_t i = 0; i < q; ++i) omegas[i] = pairs[i].omega;
    const double omega_scale = omegas[(q - 1) / 2];

    const double inf = std::numeric_limits<double>::infinity();

    // First pass: solve and audit every trial order.
    std::vector<OrderFit> fits(static_cast<std::size_t>(cap - cfg.min_order) + 1);
    std::vector<bool> solved(fits.size(), false);
    for (int g = cfg.min_order; g <= cap; ++g) {
        const std::size_t slot = static_cast<std::size_t>(g - cfg.min_order);
        const DesignSystem sys = build_system(pairs, model.p_a, g, omega_scale);
        try {
            fits[slot] = solve_order(sys);
            solved[slot] = true;
        } catch (const RankDeficient&) {
        }
        model.residuals.push_back(solved[slot] ? fits[slot].residual : inf);
        model.conditions.push_back(solved[slot] ? fits[slot].condition : inf);
    }

    // Residual floor over the overdetermined trials.  Once a trial reaches
    // the true order the residual collapses to the data's noise level and
    // stays there; the smallest overdetermined residual estimates that
    // level.  The exactly determined trial (g+1 == 2q) interpolates any
    // right-hand side to rounding error, so it never enters the floor.
    double floor_resid = inf;
    for (int g = cfg.min_order; g <= cap; ++g) {
        const std::size_t slot = static_cast<std::size_t>(g - cfg.min_order);
        if (solved[slot] && static_cast<std::size_t>(g) + 1 < 2 * q)
            floor_resid = std::min(floor_resid, fits[slot].residual);
    }

    // How much worse than the floor the previous trial must be before a
    // higher order counts as necessary rather than as fitting the noise.
    constexpr double kResidualGap = 30.0;

    // Second pass: gate each trial, keep the largest accepted order.
    bool found = false;
    int best_g = 0;
    OrderFit best_fit;

    for (int g = cfg.min_order; g <= cap; ++g) {
        const std::size_t slot = static_cast<std::size_t>(g - cfg.min_order);
        if (!solved[slot]) continue;
        const OrderFit& fit = fits[slot];
        if (fit.residual > cfg.consistency_tol) continue;
        if (fit.condition > cfg.condition_cap) continue;

        if (g > cfg.min_order) {
            // Necessity: order g is justified only when order g-1 fails to
            // explain the data.  An exactly determined trial fits anything,
            // so it is accepted only when every smaller order is outside
            // consistency_tol; an overdetermined trial must improve on its
            // predecessor by a clear factor over the residual floor.
            const double prev = model.residuals[slot - 1];
            if (static_cast<std::size_t>(g) + 1 == 2 * q) {
                if (prev <= cfg.consistency_tol) continue;
            } else {
                if (prev <= kResidualGap * std::max(floor_resid, fit.residual)) continue;
            }

            // Significance of the leading coefficient in normalized coordinates.
            double lead = 0.0;
            double peak = 0.0;
            double scale = 1.0;
            for (int k = 0; k < model.p_a; ++k) scale *= omega_scale;
            for (std::size_t k = 0; k < fit.coefficients.size(); ++k) {
                const double mag = std::abs(fit.coefficients[k]) * scale;
                peak = std::max(peak, mag);
                if (k + 1 == fit.coefficients.size()) lead = mag;
                scale *= omega_scale;
            }
            if (lead < cfg.leading_tol * peak) continue;
        }

        ChannelModel trial;
        trial.p_a = model.p_a;
        trial.order = g;
        trial.coefficients = fit.coefficients;
        bool pole_free = true;
        for (double w : omegas) {
            const std::complex<double> jw(0.0, w);
            std::complex<double> power(1.0, 0.0);
            for (int k = 0; k < model.p_a; ++k) power *= jw;
            double max_term = 0.0;
            for (double c : fit.coefficients) {
                max_term = std::max(max_term, std::abs(c * power));
                power *= jw;
            }
            if (std::abs(operator_value(trial, w)) < 1e-12 * max_term) {
                pole_free = false;
                break;
            }
        }
        if (!pole_free) continue;

        found = true;
        best_g = g;
        best_fit = fit;
    }

    if (!found)
        throw NoConsistentOrder("no trial order between " + std::to_string(cfg.min_order) +
                                " and " + std::to_string(cap) +
                                " passes the consistency and conditioning gates");

    model.order = best_g;
    model.coefficients = best_fit.coefficients;
    return model;
}

// Steady-state response of one channel to an almost-periodic input.  Each
// harmonic maps through 1/D(j*omega); the offset maps through the static
// gain, which exists only for p_a = 0 with a significant constant term.
inline APSignal simulate_channel(const APSignal& input, const ChannelModel& model) {
    if (model.p_a < 0 || model.p_a > 2)
        throw std::invalid_argument("astatism index must be 0, 1 or 2");
    if (model.order < 0 ||
        model.coefficients.size() != static_cast<std::size_t>(model.order) + 1)
        throw std::invalid_argument("a channel needs order+1 coefficients");
    for (double c : model.coefficients)
        if (!std::isfinite(c)) throw std::invalid_argument("coefficients must be finite");

    std::vector<Harmonic> out;
    out.reserve(input.harmonics().size());
    for (const Harmonic& h : input.harmonics()) {
        const std::complex<double> d = operator_value(model, h.omega);
        const std::complex<double> jw(0.0, h.omega);
        std::complex<double> lead_power(1.0, 0.0);
        for (int k = 0; k < model.p_a + model.order; ++k) lead_power *= jw;
        const double lead_mag = std::abs(model.coefficients.back() * lead_power);
        if (std::abs(d) == 0.0 || std::abs(d) < 1e-12 * lead_mag)
            throw PoleOnFrequency("operator vanishes at omega = " + std::to_string(h.omega));
        const std::complex<double> phasor(h.a, -h.b);
        const std::complex<double> response = phasor * std::conj(d) / std::norm(d);
        out.push_back({h.omega, response.real(), -response.imag()});
    }

    double offset = 0.0;
    if (input.offset() != 0.0) {
        double peak = 0.0;
        for (double c : model.coefficients) peak = std::max(peak, std::abs(c));
        const double t0 = model.coefficients.front();
        if (model.p_a != 0 || std::abs(t0) < 1e-12 * peak)
            throw PoleOnFrequency("a constant offset cannot pass a channel without static gain");
        offset = input.offset() / t0;
    }
    return APSignal(std::move(out), offset);
}

// Response of output `output_index` of a channel matrix to a set of inputs:
// the superposition of the per-channel responses.  channels[p][c] drives
// output p from input c; an absent entry contributes nothing.
inline APSignal simulate_mimo(
    const std::vector<APSignal>& inputs,
    const std::vector<std::vector<std::optional<ChannelModel>>>& channels,
    std::size_t output_index) {
    if (output_index >= channels.size())
        throw std::invalid_argument("output index out of range");
    const std::vector<std::optional<ChannelModel>>& row = channels[output_index];
    if (row.size() != inputs.size())
        throw std::invalid_argument("channel row size must match the number of inputs");

    std::vector<Harmonic> all;
    double offset = 0.0;
    for (std::size_t c = 0; c < inputs.size(); ++c) {
        if (!row[c].has_value()) continue;
        const APSignal part = simulate_channel(inputs[c], *row[c]);
        all.insert(all.end(), part.harmonics().begin(), part.harmonics().end());
        offset += part.offset();
    }
    return APSignal(std::move(all), offset);
}

}  // namespace fsid
