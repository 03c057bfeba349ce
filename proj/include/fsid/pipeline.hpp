#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include <fsid/apsignal.hpp>
#include <fsid/errors.hpp>
#include <fsid/freqalg.hpp>
#include <fsid/identify.hpp>
#include <fsid/spectral.hpp>

namespace fsid {

// ---------------------------------------------------------------------------
// Dataset and CSV I/O
// ---------------------------------------------------------------------------

// A set of equally long, uniformly sampled columns sharing one time base.
struct Dataset {
    double dt = 0.0;
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;

    std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }

    const std::vector<double>& column(const std::string& name) const {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == name) return columns[i];
        throw std::invalid_argument("no column named '" + name + "' in the dataset");
    }
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    for (char ch : line) {
        if (ch == ',') {
            cells.push_back(cell);
            cell.clear();
        } else if (ch != '\r') {
            cell += ch;
        }
    }
    cells.push_back(cell);
    return cells;
}

inline double parse_cell(const std::string& cell, std::size_t row, const std::string& column) {
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
    const char* tail = end;
    while (tail > begin && (tail[-1] == ' ' || tail[-1] == '\t')) --tail;
    double value = 0.0;
    const auto res = std::from_chars(begin, tail, value);
    if (res.ec != std::errc{} || res.ptr != tail || begin == tail || !std::isfinite(value))
        throw NonNumericCell("row " + std::to_string(row) + ", column " + column +
                             ": cannot parse '" + cell + "' as a finite number");
    return value;
}

inline std::string format_sig12(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// Serialization precision of the text formats: 12 significant digits.
inline double round_sig12(double v) {
    return std::strtod(format_sig12(v).c_str(), nullptr);
}

}  // namespace detail

// Reads a CSV table with header "t,<name>,..." and a uniformly spaced first
// column.  Row numbers in error messages count data rows starting at 1.
inline Dataset load_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open '" + path + "' for reading");

    std::string line;
    if (!std::getline(in, line)) throw FormatError("'" + path + "' is empty");
    const std::vector<std::string> header = detail::split_csv_line(line);
    if (header.empty() || header.front() != "t")
        throw FormatError("header must start with a 't' column, got '" + line + "'");
    if (header.size() < 2) throw FormatError("no data columns declared in the header");

    Dataset ds;
    ds.names.assign(header.begin() + 1, header.end());
    for (std::size_t i = 0; i < ds.names.size(); ++i) {
        if (ds.names[i].empty()) throw FormatError("empty column name in the header");
        for (std::size_t j = i + 1; j < ds.names.size(); ++j)
            if (ds.names[i] == ds.names[j])
                throw FormatError("duplicate column name '" + ds.names[i] + "'");
    }
    ds.columns.assign(ds.names.size(), {});

    std::vector<double> times;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        ++row;
        const std::vector<std::string> cells = detail::split_csv_line(line);
        if (cells.size() != header.size())
            throw RaggedColumns("row " + std::to_string(row) + " has " +
                                std::to_string(cells.size()) + " cells, expected " +
                                std::to_string(header.size()));
        times.push_back(detail::parse_cell(cells[0], row, "t"));
        for (std::size_t c = 0; c < ds.names.size(); ++c)
            ds.columns[c].push_back(detail::parse_cell(cells[c + 1], row, ds.names[c]));
    }
    if (times.size() < 2) throw FormatError("'" + path + "' needs at least two data rows");

    ds.dt = times[1] - times[0];
    if (!(ds.dt > 0.0))
        throw NonUniformSampling("row 2: timestamps must be strictly increasing");
    for (std::size_t i = 2; i < times.size(); ++i) {
        const double spacing = times[i] - times[i - 1];
        if (std::abs(spacing - ds.dt) > 1e-6 * ds.dt)
            throw NonUniformSampling("row " + std::to_string(i + 1) + ": spacing " +
                                     detail::format_sig12(spacing) +
                                     " deviates from the established step " +
                                     detail::format_sig12(ds.dt));
    }
    return ds;
}

// Writes the dataset back in the same format, 12 significant digits per cell.
inline void write_csv(const Dataset& ds, const std::string& path) {
    if (!(ds.dt > 0.0) || !std::isfinite(ds.dt))
        throw FormatError("dataset sampling step must be finite and positive");
    if (ds.names.size() != ds.columns.size())
        throw FormatError("dataset declares " + std::to_string(ds.names.size()) +
                          " names for " + std::to_string(ds.columns.size()) + " columns");
    const std::size_t rows = ds.rows();
    for (const auto& col : ds.columns) {
        if (col.size() != rows) throw FormatError("dataset columns differ in length");
        for (double v : col)
            if (!std::isfinite(v)) throw FormatError("dataset contains a non-finite sample");
    }

    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot open '" + path + "' for writing");
    out << "t";
    for (const auto& name : ds.names) out << ',' << name;
    out << '\n';
    for (std::size_t i = 0; i < rows; ++i) {
        out << detail::format_sig12(ds.dt * static_cast<double>(i));
        for (const auto& col : ds.columns) out << ',' << detail::format_sig12(col[i]);
        out << '\n';
    }
    if (!out) throw FormatError("failed while writing '" + path + "'");
}

// ---------------------------------------------------------------------------
// Identification pipeline
// ---------------------------------------------------------------------------

// Frequency scan window; any field left at zero is derived from the record:
// omega_min = 2*delta, omega_max = pi/dt, step = delta/8.
struct GridSpec {
    double omega_min = 0.0;
    double omega_max = 0.0;
    double step = 0.0;
};

struct PipelineConfig {
    GridSpec grid;
    double peak_rel_threshold = 0.05;
    double delta_mult = 1.0;
    IdentifyConfig identify;
};

// Everything one identification run produces, ready for serialization.
struct Report {
    std::string channel;
    double delta = 0.0;
    std::vector<double> matched_frequencies;
    std::vector<FourierExponentPair> exponents;
    std::complex<double> W_lowest{0.0, 0.0};
    int p_a = 0;
    int order = 0;
    std::vector<double> coefficients;
    std::vector<double> residuals;
    std::vector<double> conditions;
    std::vector<std::string> warnings;
    PipelineConfig config;  // effective values after defaults were resolved
};

namespace detail {

template <typename Fn>
auto with_stage(const char* stage, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (Error& e) {
        e.set_stage(stage);
        throw;
    }
}

}  // namespace detail

// Full single-channel identification from a dataset:
//   1. scan an amplitude spectrum per declared input record and the output
//      record and extract their peak sets;
//   2. drop the channel input's peaks that other inputs share (couplings);
//   3. match the surviving input peaks against the output peaks;
//   4. evaluate the Fourier exponents of both records on the matched set;
//   5. identify astatism, order and coefficients from the exponent pairs.
inline Report run_identification(const Dataset& ds,
                                 const std::vector<std::string>& input_names,
                                 const std::string& output_name,
                                 const std::string& channel_input,
                                 const PipelineConfig& cfg = {}) {
    if (input_names.empty()) throw std::invalid_argument("at least one input column required");
    for (std::size_t i = 0; i < input_names.size(); ++i)
        for (std::size_t j = i + 1; j < input_names.size(); ++j)
            if (input_names[i] == input_names[j])
                throw std::invalid_argument("duplicate input name '" + input_names[i] + "'");
    std::size_t channel_idx = input_names.size();
    for (std::size_t i = 0; i < input_names.size(); ++i)
        if (input_names[i] == channel_input) channel_idx = i;
    if (channel_idx == input_names.size())
        throw std::invalid_argument("channel input '" + channel_input +
                                    "' is not one of the declared inputs");
    if (!(cfg.delta_mult > 0.0) || !std::isfinite(cfg.delta_mult))
        throw std::invalid_argument("resolution multiplier must be positive");

    std::vector<TimeSeries> inputs;
    inputs.reserve(input_names.size());
    for (const auto& name : input_names) inputs.emplace_back(ds.dt, ds.column(name));
    TimeSeries output(ds.dt, ds.column(output_name));

    const double duration = output.duration();
    const double delta_raw = resolution(duration);

    PipelineConfig effective = cfg;
    const bool user_window = cfg.grid.omega_min > 0.0 && cfg.grid.omega_max > 0.0;
    if (!(effective.grid.omega_min > 0.0)) effective.grid.omega_min = 2.0 * delta_raw;
    if (!(effective.grid.omega_max > 0.0))
        effective.grid.omega_max = 3.14159265358979323846 / ds.dt;
    if (!(effective.grid.step > 0.0)) effective.grid.step = delta_raw / 8.0;
    // A degenerate window from the defaults means the record itself cannot
    // be scanned (2*delta is not below pi/dt); that is a method limit, not a
    // usage error.  A fully user-specified window keeps strict validation.
    if (!user_window && !(effective.grid.omega_min < effective.grid.omega_max))
        throw GridTooCoarse("record supports no scan window: 2*delta = " +
                            detail::format_sig12(2.0 * delta_raw) + " is not below pi/dt = " +
                            detail::format_sig12(effective.grid.omega_max));

    Report report;
    report.channel = channel_input + ":" + output_name;
    report.config = effective;

    const auto peaks_of = [&](const TimeSeries& ts) {
        return detail::with_stage("spectrum", [&] {
            const Spectrum spec = amplitude_spectrum(ts, effective.grid.omega_min,
                                                     effective.grid.omega_max,
                                                     effective.grid.step);
            return find_peaks(spec, effective.peak_rel_threshold, effective.delta_mult);
        });
    };

    std::vector<FrequencySet> input_peaks;
    input_peaks.reserve(inputs.size());
    for (const TimeSeries& ts : inputs) input_peaks.push_back(peaks_of(ts));
    const FrequencySet output_peaks = peaks_of(output);

    const FrequencySet own = detail::with_stage(
        "separate", [&] { return discard_shared(input_peaks, channel_idx); });
    const std::size_t removed = input_peaks[channel_idx].size() - own.size();
    if (removed > 0)
        report.warnings.push_back("discarded " + std::to_string(removed) +
                                  " input frequencies shared with other inputs");

    const FrequencySet matched =
        detail::with_stage("match", [&] { return intersect(own, output_peaks); });
    if (matched.empty())
        throw EmptyMatchedSet("input '" + channel_input + "' and output '" + output_name +
                              "' share no spectral peaks");
    report.delta = matched.delta();
    report.matched_frequencies = matched.frequencies();

    const std::size_t q = matched.size();
    const int cap = static_cast<int>(2 * q) - 1;
    if (cap < effective.identify.max_order)
        report.warnings.push_back("order trials capped at 2q-1 = " + std::to_string(cap) +
                                  " by the " + std::to_string(q) + " matched frequencies");

    report.exponents = detail::with_stage("exponents", [&] {
        std::vector<FourierExponentPair> pairs;
        pairs.reserve(q);
        for (double w : matched.frequencies())
            pairs.push_back({w, fourier_exponent(inputs[channel_idx], w),
                             fourier_exponent(output, w)});
        return pairs;
    });

    const ChannelModel model = detail::with_stage(
        "identify", [&] { return identify_channel(report.exponents, effective.identify); });
    report.W_lowest = model.W_lowest;
    report.p_a = model.p_a;
    report.order = model.order;
    report.coefficients = model.coefficients;
    report.residuals = model.residuals;
    report.conditions = model.conditions;

    if (effective.identify.pa_override >= 0) {
        try {
            const int detected = detect_astatism(model.W_lowest);
            if (detected != model.p_a)
                report.warnings.push_back(
                    "lowest-frequency quadrant suggests astatism " + std::to_string(detected) +
                    " but " + std::to_string(model.p_a) + " was forced");
        } catch (const MethodError&) {
            report.warnings.push_back("lowest-frequency quadrant is unreadable; astatism " +
                                      std::to_string(model.p_a) + " was forced");
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Report serialization
// ---------------------------------------------------------------------------

namespace detail {

inline double json_number(double v, const char* what) {
    if (!std::isfinite(v))
        throw FormatError(std::string("report field '") + what + "' is not finite");
    return round_sig12(v);
}

// Audit arrays may legitimately hold infinities (rejected trials); clamp them
// to the largest finite double so the report stays valid JSON.
inline double json_audit_number(double v, const char* what) {
    if (std::isnan(v))
        throw FormatError(std::string("report field '") + what + "' is not a number");
    const double huge = 1.7976931348623157e308;
    if (v > huge) return huge;
    if (v < -huge) return -huge;
    return round_sig12(v);
}

}  // namespace detail

inline std::string report_to_json(const Report& r) {
    nlohmann::ordered_json j;
    j["channel"] = r.channel;
    j["delta"] = detail::json_number(r.delta, "delta");
    {
        auto arr = nlohmann::ordered_json::array();
        for (double w : r.matched_frequencies)
            arr.push_back(detail::json_number(w, "matched_frequencies"));
        j["matched_frequencies"] = std::move(arr);
    }
    {
        auto arr = nlohmann::ordered_json::array();
        for (const FourierExponentPair& p : r.exponents) {
            nlohmann::ordered_json e;
            e["omega"] = detail::json_number(p.omega, "exponents.omega");
            e["s_in"] = {detail::json_number(p.s_in.real(), "exponents.s_in"),
                         detail::json_number(p.s_in.imag(), "exponents.s_in")};
            e["s_out"] = {detail::json_number(p.s_out.real(), "exponents.s_out"),
                          detail::json_number(p.s_out.imag(), "exponents.s_out")};
            arr.push_back(std::move(e));
        }
        j["exponents"] = std::move(arr);
    }
    j["W_lowest"] = {detail::json_number(r.W_lowest.real(), "W_lowest"),
                     detail::json_number(r.W_lowest.imag(), "W_lowest")};
    j["p_a"] = r.p_a;
    j["order"] = r.order;
    {
        auto arr = nlohmann::ordered_json::array();
        for (double c : r.coefficients) arr.push_back(detail::json_number(c, "coefficients"));
        j["coefficients"] = std::move(arr);
    }
    {
        auto arr = nlohmann::ordered_json::array();
        for (double v : r.residuals) arr.push_back(detail::json_audit_number(v, "residuals"));
        j["residuals"] = std::move(arr);
    }
    {
        auto arr = nlohmann::ordered_json::array();
        for (double v : r.conditions) arr.push_back(detail::json_audit_number(v, "conditions"));
        j["conditions"] = std::move(arr);
    }
    j["warnings"] = r.warnings;

    nlohmann::ordered_json grid;
    grid["omega_min"] = detail::json_number(r.config.grid.omega_min, "config.grid");
    grid["omega_max"] = detail::json_number(r.config.grid.omega_max, "config.grid");
    grid["step"] = detail::json_number(r.config.grid.step, "config.grid");
    nlohmann::ordered_json cfg;
    cfg["grid"] = std::move(grid);
    cfg["peak_rel_threshold"] =
        detail::json_number(r.config.peak_rel_threshold, "config.peak_rel_threshold");
    cfg["delta_mult"] = detail::json_number(r.config.delta_mult, "config.delta_mult");
    cfg["min_order"] = r.config.identify.min_order;
    cfg["max_order"] = r.config.identify.max_order;
    cfg["consistency_tol"] =
        detail::json_number(r.config.identify.consistency_tol, "config.consistency_tol");
    cfg["condition_cap"] =
        detail::json_number(r.config.identify.condition_cap, "config.condition_cap");
    cfg["pa_override"] = r.config.identify.pa_override;
    cfg["pa_vote3"] = r.config.identify.pa_vote3;
    j["config"] = std::move(cfg);

    return j.dump(2);
}

inline void write_report(const Report& r, const std::string& path) {
    const std::string text = report_to_json(r) + "\n";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw FormatError("failed while writing '" + path + "'");
}

// ---------------------------------------------------------------------------
// Dataset synthesis from a declarative JSON config
// ---------------------------------------------------------------------------

struct SynthResult {
    Dataset dataset;
    std::string manifest_json;
};

namespace detail {

inline std::vector<Harmonic> parse_harmonics(const nlohmann::json& arr) {
    std::vector<Harmonic> out;
    for (const auto& h : arr)
        out.push_back({h.at("omega").get<double>(), h.value("a", 0.0), h.value("b", 0.0)});
    return out;
}

inline APSignal parse_signal(const nlohmann::json& obj) {
    std::vector<Harmonic> hs;
    if (obj.contains("harmonics")) hs = parse_harmonics(obj.at("harmonics"));
    return APSignal(std::move(hs), obj.value("offset", 0.0));
}

inline NoiseModel parse_noise(const nlohmann::json& obj) {
    NoiseModel noise;
    noise.theta_hat = obj.value("theta_hat", 1.0);
    if (obj.contains("reduced")) noise.reduced = parse_signal(obj.at("reduced"));
    if (obj.contains("additive")) noise.additive = parse_signal(obj.at("additive"));
    return noise;
}

// Draws `count` frequencies from [omega_min, omega_max], each at least
// 3*delta away from everything already in `occupied`; appends the draws to
// `occupied`.  With snapping, frequencies sit on exact multiples of delta.
inline std::vector<double> draw_frequencies(std::mt19937_64& rng,
                                            const nlohmann::json& spec,
                                            double delta,
                                            std::vector<double>& occupied) {
    const int count = spec.at("count").get<int>();
    const double lo = spec.at("omega_min").get<double>();
    const double hi = spec.at("omega_max").get<double>();
    const bool snap = spec.value("snap_to_bins", false);
    if (count < 0) throw FormatError("random_harmonics.count must be non-negative");
    if (!(lo > 0.0) || !(hi > lo))
        throw FormatError("random_harmonics requires 0 < omega_min < omega_max");

    std::vector<double> out;
    int attempts = 0;
    while (static_cast<int>(out.size()) < count) {
        if (++attempts > 200000)
            throw MethodError("cannot place " + std::to_string(count) +
                              " random harmonics with 3*delta spacing in [" +
                              format_sig12(lo) + ", " + format_sig12(hi) + "]");
        double w;
        if (snap) {
            const int bin_lo = static_cast<int>(std::ceil(lo / delta));
            const int bin_hi = static_cast<int>(std::floor(hi / delta));
            if (bin_hi < bin_lo)
                throw FormatError("no resolution bins inside [omega_min, omega_max]");
            w = static_cast<double>(std::uniform_int_distribution<int>(bin_lo, bin_hi)(rng)) *
                delta;
        } else {
            w = std::uniform_real_distribution<double>(lo, hi)(rng);
        }
        bool clash = false;
        for (double o : occupied) {
            if (std::abs(w - o) < 3.0 * delta) {
                clash = true;
                break;
            }
        }
        if (clash) continue;
        occupied.push_back(w);
        out.push_back(w);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace detail

// Builds a dataset from a declarative config (see README for the schema):
// per-input private harmonics (explicit and/or seeded random draws with a
// minimum pairwise spectral gap of 3*delta), optional pairwise couplings,
// optional per-record measurement noise, and per-input channels feeding one
// output.  Returns the dataset plus a manifest describing what was drawn.
inline SynthResult synth_run(const nlohmann::json& config, std::uint64_t seed) {
    try {
        const double dt = config.at("dt").get<double>();
        const std::int64_t samples = config.at("samples").get<std::int64_t>();
        const std::string output_name = config.value("output_name", "y");
        if (!(dt > 0.0) || !std::isfinite(dt)) throw FormatError("dt must be finite and positive");
        if (samples < 2) throw FormatError("samples must be at least 2");
        const std::size_t n = static_cast<std::size_t>(samples);
        const double delta = resolution(dt * static_cast<double>(n));

        const nlohmann::json& inputs_cfg = config.at("inputs");
        if (!inputs_cfg.is_array() || inputs_cfg.empty())
            throw FormatError("config needs a non-empty 'inputs' array");

        std::vector<std::string> names;
        std::vector<std::vector<Harmonic>> explicit_harmonics;
        std::vector<double> offsets;
        std::vector<NoiseModel> noises;
        std::vector<std::optional<ChannelModel>> channels;
        for (const auto& in : inputs_cfg) {
            const std::string name = in.at("name").get<std::string>();
            if (name.empty() || name == output_name ||
                std::find(names.begin(), names.end(), name) != names.end())
                throw FormatError("input names must be unique, non-empty and differ from '" +
                                  output_name + "'");
            names.push_back(name);
            explicit_harmonics.push_back(
                in.contains("harmonics") ? detail::parse_harmonics(in.at("harmonics"))
                                         : std::vector<Harmonic>{});
            offsets.push_back(in.value("offset", 0.0));
            noises.push_back(in.contains("noise") ? detail::parse_noise(in.at("noise"))
                                                  : NoiseModel{});
            if (in.contains("channel")) {
                const auto& ch = in.at("channel");
                ChannelModel model;
                model.p_a = ch.at("p_a").get<int>();
                model.coefficients = ch.at("coefficients").get<std::vector<double>>();
                if (model.coefficients.empty())
                    throw FormatError("channel of '" + name + "' needs coefficients");
                model.order = static_cast<int>(model.coefficients.size()) - 1;
                channels.push_back(std::move(model));
            } else {
                channels.push_back(std::nullopt);
            }
        }

        // Every explicitly declared frequency is an obstacle for the draws.
        std::vector<double> occupied;
        for (const auto& hs : explicit_harmonics)
            for (const Harmonic& h : hs) occupied.push_back(h.omega);
        CouplingSpec couplings;
        if (config.contains("couplings")) {
            for (const auto& c : config.at("couplings")) {
                const auto pair = c.at("inputs").get<std::vector<std::string>>();
                if (pair.size() != 2) throw FormatError("a coupling joins exactly two inputs");
                const auto idx_of = [&](const std::string& nm) {
                    const auto it = std::find(names.begin(), names.end(), nm);
                    if (it == names.end())
                        throw FormatError("coupling references unknown input '" + nm + "'");
                    return static_cast<std::size_t>(it - names.begin());
                };
                couplings.push_back({idx_of(pair[0]), idx_of(pair[1]), detail::parse_signal(c)});
                for (const Harmonic& h : couplings.back().signal.harmonics())
                    occupied.push_back(h.omega);
            }
        }

        std::mt19937_64 rng(seed);
        std::vector<std::vector<double>> drawn(names.size());
        std::vector<APSignal> privates;
        for (std::size_t i = 0; i < names.size(); ++i) {
            std::vector<Harmonic> hs = explicit_harmonics[i];
            if (inputs_cfg[i].contains("random_harmonics")) {
                const auto& spec = inputs_cfg[i].at("random_harmonics");
                drawn[i] = detail::draw_frequencies(rng, spec, delta, occupied);
                const double amp_lo = spec.at("amp_min").get<double>();
                const double amp_hi = spec.at("amp_max").get<double>();
                if (!(amp_lo > 0.0) || !(amp_hi >= amp_lo))
                    throw FormatError("random_harmonics requires 0 < amp_min <= amp_max");
                for (double w : drawn[i]) {
                    const double amp = std::uniform_real_distribution<double>(amp_lo, amp_hi)(rng);
                    const double phase =
                        std::uniform_real_distribution<double>(0.0, 6.283185307179586)(rng);
                    hs.push_back({w, amp * std::cos(phase), amp * std::sin(phase)});
                }
            }
            privates.emplace_back(std::move(hs), offsets[i]);
        }

        const std::vector<APSignal> coupled = make_coupled_inputs(privates, couplings, delta);
        const APSignal output_signal = simulate_mimo(coupled, {channels}, 0);
        const NoiseModel output_noise = config.contains("output_noise")
                                            ? detail::parse_noise(config.at("output_noise"))
                                            : NoiseModel{};

        SynthResult result;
        result.dataset.dt = dt;
        for (std::size_t i = 0; i < names.size(); ++i) {
            result.dataset.names.push_back(names[i]);
            result.dataset.columns.push_back(
                apply_noise(synthesize(coupled[i], dt, n), noises[i]).samples());
        }
        result.dataset.names.push_back(output_name);
        result.dataset.columns.push_back(
            apply_noise(synthesize(output_signal, dt, n), output_noise).samples());

        nlohmann::ordered_json manifest;
        manifest["delta"] = detail::round_sig12(delta);
        manifest["dt"] = detail::round_sig12(dt);
        manifest["samples"] = samples;
        manifest["seed"] = seed;
        manifest["output_name"] = output_name;
        auto inputs_doc = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < names.size(); ++i) {
            nlohmann::ordered_json doc;
            doc["name"] = names[i];
            auto freqs = nlohmann::ordered_json::array();
            for (const Harmonic& h : privates[i].harmonics())
                freqs.push_back(detail::round_sig12(h.omega));
            doc["frequencies"] = std::move(freqs);
            if (channels[i].has_value()) {
                nlohmann::ordered_json ch;
                ch["p_a"] = channels[i]->p_a;
                auto coeffs = nlohmann::ordered_json::array();
                for (double c : channels[i]->coefficients)
                    coeffs.push_back(detail::round_sig12(c));
                ch["coefficients"] = std::move(coeffs);
                doc["channel"] = std::move(ch);
            } else {
                doc["channel"] = nullptr;
            }
            inputs_doc.push_back(std::move(doc));
        }
        manifest["inputs"] = std::move(inputs_doc);
        auto couplings_doc = nlohmann::ordered_json::array();
        for (const Coupling& c : couplings) {
            nlohmann::ordered_json doc;
            doc["inputs"] = {names[c.i], names[c.l]};
            auto freqs = nlohmann::ordered_json::array();
            for (const Harmonic& h : c.signal.harmonics())
                freqs.push_back(detail::round_sig12(h.omega));
            doc["frequencies"] = std::move(freqs);
            couplings_doc.push_back(std::move(doc));
        }
        manifest["couplings"] = std::move(couplings_doc);
        result.manifest_json = manifest.dump(2);
        return result;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("invalid synthesis config: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw FormatError(std::string("invalid synthesis config: ") + e.what());
    }
}

// File-level wrapper: reads the config, synthesizes, writes the dataset CSV
// and the manifest JSON.
inline void synth_command(const std::string& config_path,
                          std::uint64_t seed,
                          const std::string& csv_path,
                          const std::string& manifest_path) {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) throw FormatError("cannot open '" + config_path + "' for reading");
    nlohmann::json config;
    try {
        in >> config;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("cannot parse '" + config_path + "': " + e.what());
    }

    const SynthResult result = synth_run(config, seed);
    write_csv(result.dataset, csv_path);
    std::ofstream man(manifest_path, std::ios::binary);
    if (!man) throw FormatError("cannot open '" + manifest_path + "' for writing");
    man << result.manifest_json << '\n';
    if (!man) throw FormatError("failed while writing '" + manifest_path + "'");
}

}  // namespace fsid
