// output.cpp: CSV and JSON report writers

#include <cmath>
#include <cstdio>
#include <ostream>

#include "lindtherm/cli.hpp"

namespace lindtherm::cli {

using nlohmann::json;

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

std::string format_sig(std::optional<double> v, int digits) {
    if (!v)
        return "";
    if (std::isinf(*v))
        return *v > 0 ? "inf" : "-inf";
    if (std::isnan(*v))
        return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, *v);
    return buf;
}

namespace {

std::string count_field(std::optional<std::size_t> v) { return v ? std::to_string(*v) : ""; }

std::string wall_field(std::optional<double> v) { return format_sig(v, 6); }

json number_or_null(std::optional<double> v) {
    if (!v)
        return nullptr;
    if (std::isinf(*v))
        return "inf";
    return *v;
}

} // namespace

void write_records_csv(std::ostream& os, const std::vector<Record>& records, bool with_grid,
                       const std::string& grid_key) {
    if (with_grid)
        os << csv_field(grid_key) << ',';
    os << "N,method,tau_P,tau_Q,tau,zero_multiplicity,wall_s,warnings\n";
    for (const auto& r : records) {
        if (with_grid)
            os << format_sig(r.grid_value, 17) << ',';
        os << r.n << ',' << to_string(r.method) << ',' << format_sig(r.tau_P) << ','
           << format_sig(r.tau_Q) << ',' << format_sig(r.tau) << ','
           << count_field(r.zero_multiplicity) << ',' << wall_field(r.wall_s) << ','
           << csv_field(r.warnings) << '\n';
    }
}

void write_records_json(std::ostream& os, const std::string& command,
                        const std::vector<Record>& records, const std::string& grid_key) {
    json out;
    out["command"] = command;
    if (!grid_key.empty())
        out["grid_key"] = grid_key;
    out["records"] = json::array();
    for (const auto& r : records) {
        json j;
        if (r.grid_value)
            j["grid_value"] = *r.grid_value;
        j["N"] = r.n;
        j["method"] = to_string(r.method);
        j["tau_P"] = number_or_null(r.tau_P);
        j["tau_Q"] = number_or_null(r.tau_Q);
        j["tau"] = number_or_null(r.tau);
        j["zero_multiplicity"] = r.zero_multiplicity ? json(*r.zero_multiplicity) : json(nullptr);
        j["wall_s"] = number_or_null(r.wall_s);
        j["warnings"] = json::array();
        std::size_t at = 0;
        while (at < r.warnings.size()) {
            const auto end = r.warnings.find(';', at);
            j["warnings"].push_back(r.warnings.substr(at, end - at));
            if (end == std::string::npos)
                break;
            at = end + 1;
        }
        out["records"].push_back(std::move(j));
    }
    os << out.dump(2) << '\n';
}

void write_table1_csv(std::ostream& os, const std::vector<Table1Row>& rows) {
    os << "N,lba_tauP,lba_tauQ,lba_num_tauP,lba_num_tauQ,lba_cpu_s,qome_tauP,qome_tauQ,"
          "qome_cpu_s,warnings\n";
    for (const auto& r : rows)
        os << r.n << ',' << format_sig(r.lba_tauP) << ',' << format_sig(r.lba_tauQ) << ','
           << format_sig(r.lba_num_tauP) << ',' << format_sig(r.lba_num_tauQ) << ','
           << wall_field(r.lba_cpu_s) << ',' << format_sig(r.qome_tauP) << ','
           << format_sig(r.qome_tauQ) << ',' << wall_field(r.qome_cpu_s) << ','
           << csv_field(r.warnings) << '\n';
}

} // namespace lindtherm::cli
