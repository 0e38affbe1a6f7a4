// cli.hpp: run configuration, analysis drivers and report emission for the command line

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lindtherm/model.hpp"

namespace lindtherm::cli {

enum class Family { free_spins_uniform, free_spins_modulated, custom_hamiltonian };
enum class Method { lba_analytic, lba_numeric, qome };
enum class Format { csv, json };

std::string to_string(Family f);
std::string to_string(Method m);

struct Tolerances {
    double degeneracy_rel{1e-9}; // level equality, relative to E_max - E_min
    double energy_rel{1e-9};     // Kronecker deltas of the QOME, same scale
    double tol_zero{1e-10};
    double tol_imag{1e-8};
};

struct FieldLaw {
    double offset{1.0};
    double amplitude{0.5};
    double phase_step{-1.0}; // negative: pi / sqrt(2)
};

struct SweepGrid {
    std::string parameter; // "beta" or "Gamma"
    std::vector<double> values;
};

struct RunConfig {
    Family family{Family::free_spins_uniform};
    double field{1.0};
    FieldLaw law;
    std::optional<QubitSystem> custom;
    std::vector<std::size_t> sizes{1};
    double beta{1.0};
    double gamma{1.0};
    std::vector<Method> methods{Method::lba_analytic};
    Tolerances tol;
    Format format{Format::csv};
    std::uint64_t seed{20240611};
    std::size_t qome_cap{4096};
    std::size_t numeric_cap{std::size_t{1} << 20};
    bool timing{true};
    std::optional<SweepGrid> sweep;
};

// Throws Error(ConfigError) on unknown keys, wrong types or out-of-range values.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

// {"dim": n, "re": [[...]], "im": [[...]]} with n a power of two.
QubitSystem parse_hamiltonian(const nlohmann::json& j, double gamma);

struct Record {
    std::optional<double> grid_value;
    std::size_t n{1};
    Method method{Method::lba_analytic};
    std::optional<double> tau_P;
    std::optional<double> tau_Q;
    std::optional<double> tau;
    std::optional<std::size_t> zero_multiplicity;
    std::optional<double> wall_s;
    std::string warnings;
};

// One record per (N, method), in config order.
std::vector<Record> cmd_analyze(const RunConfig& config);

// One record per (grid value, N, method), sorted by grid value; points run concurrently.
std::vector<Record> cmd_sweep(const RunConfig& config);

struct Table1Options {
    std::size_t max_qome_n{6};
    std::size_t max_numeric_n{13};
    double energy_rel{1e-9};
    std::size_t qome_cap{4096};
    bool timing{true};
};

struct Table1Row {
    std::size_t n{1};
    double lba_tauP{0.0};
    double lba_tauQ{0.0};
    std::optional<double> lba_num_tauP;
    std::optional<double> lba_num_tauQ;
    std::optional<double> lba_cpu_s;
    std::optional<double> qome_tauP;
    std::optional<double> qome_tauQ;
    std::optional<double> qome_cpu_s;
    std::string warnings;
};

// Modulated free spins at beta = gamma = 1: N = 1..13 (QOME up to max_qome_n) and the
// analytic large-N rows 100, 1000, 10000, 100000.
std::vector<Table1Row> cmd_table1(const Table1Options& options = {});

void write_records_csv(std::ostream& os, const std::vector<Record>& records, bool with_grid,
                       const std::string& grid_key = "");
void write_records_json(std::ostream& os, const std::string& command,
                        const std::vector<Record>& records, const std::string& grid_key = "");
void write_table1_csv(std::ostream& os, const std::vector<Table1Row>& rows);

// RFC 4180 field quoting.
std::string csv_field(const std::string& s);
// Five significant figures, or the empty string for an absent value.
std::string format_sig(std::optional<double> v, int digits = 5);

} // namespace lindtherm::cli
