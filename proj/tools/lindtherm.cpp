// lindtherm: thermalization times of noninteracting ensembles from the command line

#include <fstream>
#include <iostream>
#include <memory>

#include <CLI11.hpp>

#include "lindtherm/cli.hpp"

using namespace lindtherm;

namespace {

int exit_code(ErrorKind k) {
    switch (k) {
    case ErrorKind::ConfigError: return 2;
    case ErrorKind::CapExceeded:
    case ErrorKind::DimensionCap: return 3;
    default: return 1;
    }
}

std::ostream* open_output(const std::string& path, std::unique_ptr<std::ofstream>& file) {
    if (path.empty() || path == "-")
        return &std::cout;
    file = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file)
        throw Error(ErrorKind::ConfigError, "cannot write '" + path + "'");
    return file.get();
}

void emit(const cli::RunConfig& cfg, const std::string& command,
          const std::vector<cli::Record>& records, const std::string& out) {
    std::unique_ptr<std::ofstream> file;
    std::ostream& os = *open_output(out, file);
    const std::string key = cfg.sweep ? cfg.sweep->parameter : "";
    if (cfg.format == cli::Format::json)
        cli::write_records_json(os, command, records, key);
    else
        cli::write_records_csv(os, records, cfg.sweep.has_value(), key);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Thermalization, dissipation and decoherence times of dipole-coupled ensembles"};
    app.require_subcommand(1);

    std::string config_path, out_path;
    auto* analyze = app.add_subcommand("analyze", "Run the methods of a JSON config");
    analyze->add_option("--config", config_path, "JSON run configuration")->required();
    analyze->add_option("--out", out_path, "Output file (default stdout)");

    auto* sweep = app.add_subcommand("sweep", "Scan beta or Gamma over the grid of a JSON config");
    sweep->add_option("--config", config_path, "JSON run configuration")->required();
    sweep->add_option("--out", out_path, "Output file (default stdout)");

    cli::Table1Options t1;
    bool no_timing = false;
    auto* table1 = app.add_subcommand("table1", "Modulated free-spin table, CSV");
    table1->add_option("--max-qome-n", t1.max_qome_n, "Largest N solved with the Liouvillian");
    table1->add_option("--max-numeric-n", t1.max_numeric_n, "Largest N for the numeric rate matrix");
    table1->add_option("--energy-tol-rel", t1.energy_rel, "Level equality tolerance, relative to the span");
    table1->add_option("--qome-cap", t1.qome_cap, "Largest Liouvillian dimension");
    table1->add_flag("--no-timing", no_timing, "Leave the timing columns empty");
    table1->add_option("--out", out_path, "Output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*analyze) {
            const auto cfg = cli::load_config(config_path);
            emit(cfg, "analyze", cli::cmd_analyze(cfg), out_path);
        } else if (*sweep) {
            const auto cfg = cli::load_config(config_path);
            if (!cfg.sweep)
                throw Error(ErrorKind::ConfigError, "config has no 'sweep' grid");
            emit(cfg, "sweep", cli::cmd_sweep(cfg), out_path);
        } else if (*table1) {
            t1.timing = !no_timing;
            const auto rows = cli::cmd_table1(t1);
            std::unique_ptr<std::ofstream> file;
            cli::write_table1_csv(*open_output(out_path, file), rows);
        }
    } catch (const Error& e) {
        std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
