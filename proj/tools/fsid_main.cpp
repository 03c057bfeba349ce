// Command-line front end: `fsid identify` runs the frequency-set
// identification pipeline on a CSV dataset, `fsid synth` generates datasets
// from a declarative JSON config.  Exit codes: 0 success, 1 I/O or format
// problems, 2 method failures (the procedure cannot produce a result).

#include <cstdint>
#include <exception>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <fsid/fsid.hpp>

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep)) out.push_back(item);
    return out;
}

fsid::GridSpec parse_grid(const std::string& text) {
    const std::vector<std::string> parts = split(text, ':');
    if (parts.size() != 3)
        throw std::invalid_argument("--grid expects omega_min:omega_max:step, got '" + text + "'");
    fsid::GridSpec grid;
    try {
        grid.omega_min = std::stod(parts[0]);
        grid.omega_max = std::stod(parts[1]);
        grid.step = std::stod(parts[2]);
    } catch (const std::exception&) {
        throw std::invalid_argument("--grid values must be numbers, got '" + text + "'");
    }
    return grid;
}

int run_identify(const std::string& input_path,
                 const std::string& inputs_csv,
                 const std::string& output_name,
                 const std::string& channel,
                 const std::string& grid_spec,
                 const std::string& report_path,
                 const fsid::PipelineConfig& base_cfg) {
    fsid::PipelineConfig cfg = base_cfg;
    if (!grid_spec.empty()) cfg.grid = parse_grid(grid_spec);

    const std::vector<std::string> input_names = split(inputs_csv, ',');
    const std::size_t colon = channel.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == channel.size())
        throw std::invalid_argument("--channel expects <input>:<output>, got '" + channel + "'");
    const std::string channel_input = channel.substr(0, colon);
    const std::string channel_output = channel.substr(colon + 1);
    if (channel_output != output_name)
        throw std::invalid_argument("channel output '" + channel_output +
                                    "' does not match --output '" + output_name + "'");

    const fsid::Dataset ds = fsid::load_csv(input_path);
    const fsid::Report report =
        fsid::run_identification(ds, input_names, output_name, channel_input, cfg);

    if (report_path.empty())
        std::cout << fsid::report_to_json(report) << "\n";
    else
        fsid::write_report(report, report_path);

    std::cerr << report.channel << ": p_a=" << report.p_a << " order=" << report.order
              << " matched=" << report.matched_frequencies.size()
              << " warnings=" << report.warnings.size() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Frequency-set identification of linear control channels"};
    app.require_subcommand(1);

    auto* ident = app.add_subcommand("identify", "Identify one channel from a CSV dataset");
    std::string input_path, inputs_csv, output_name, channel, grid_spec, report_path;
    fsid::PipelineConfig cfg;
    ident->add_option("--input", input_path, "CSV dataset (header t,<col>,...)")->required();
    ident->add_option("--inputs", inputs_csv, "comma-separated input column names")->required();
    ident->add_option("--output", output_name, "output column name")->required();
    ident->add_option("--channel", channel, "channel to identify as <input>:<output>")->required();
    ident->add_option("--grid", grid_spec, "frequency scan window omega_min:omega_max:step "
                                           "(default 2*delta : pi/dt : delta/8)");
    ident->add_option("--peak-rel-threshold", cfg.peak_rel_threshold,
                      "peak detection floor relative to the strongest peak")
        ->capture_default_str();
    ident->add_option("--delta-mult", cfg.delta_mult, "scale on the resolution tolerance delta")
        ->capture_default_str();
    ident->add_option("--min-order", cfg.identify.min_order, "smallest trial order")
        ->capture_default_str();
    ident->add_option("--max-order", cfg.identify.max_order, "largest trial order")
        ->capture_default_str();
    ident->add_option("--consistency-tol", cfg.identify.consistency_tol,
                      "largest relative residual an accepted order may leave")
        ->capture_default_str();
    ident->add_option("--condition-cap", cfg.identify.condition_cap,
                      "largest acceptable condition estimate")
        ->capture_default_str();
    ident->add_option("--pa-override", cfg.identify.pa_override,
                      "force the astatism index (0..2); -1 detects it")
        ->capture_default_str();
    ident->add_flag("--pa-vote", cfg.identify.pa_vote3,
                    "majority quadrant vote over the three lowest matched frequencies");
    ident->add_option("--report", report_path, "write the report JSON here instead of stdout");

    auto* synth = app.add_subcommand("synth", "Synthesize a dataset from a JSON config");
    std::string config_path, csv_path, manifest_path;
    std::uint64_t seed = 0;
    synth->add_option("--config", config_path, "synthesis config JSON")->required();
    synth->add_option("--seed", seed, "random seed for the harmonic draws")->required();
    synth->add_option("--out", csv_path, "dataset CSV to write")->required();
    synth->add_option("--manifest", manifest_path, "manifest JSON to write")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (ident->parsed())
            return run_identify(input_path, inputs_csv, output_name, channel, grid_spec,
                                report_path, cfg);
        fsid::synth_command(config_path, seed, csv_path, manifest_path);
        std::cerr << "wrote " << csv_path << " and " << manifest_path << "\n";
        return 0;
    } catch (const fsid::MethodError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const fsid::FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
