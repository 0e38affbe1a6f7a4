// config.cpp: JSON run configuration

#include <cmath>
#include <fstream>
#include <set>
#include <string>

#include "lindtherm/cli.hpp"

namespace lindtherm::cli {

using nlohmann::json;

std::string to_string(Family f) {
    switch (f) {
    case Family::free_spins_uniform: return "free_spins_uniform";
    case Family::free_spins_modulated: return "free_spins_modulated";
    case Family::custom_hamiltonian: return "custom_hamiltonian";
    }
    return "";
}

std::string to_string(Method m) {
    switch (m) {
    case Method::lba_analytic: return "lba_analytic";
    case Method::lba_numeric: return "lba_numeric";
    case Method::qome: return "qome";
    }
    return "";
}

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorKind::ConfigError, msg); }

void only_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            fail("unknown key '" + it.key() + "' in " + where);
}

double number(const json& j, const std::string& key) {
    if (!j.is_number())
        fail("'" + key + "' must be a number");
    const double v = j.get<double>();
    if (!std::isfinite(v))
        fail("'" + key + "' must be finite");
    return v;
}

double positive(const json& j, const std::string& key) {
    const double v = number(j, key);
    if (!(v > 0.0))
        fail("'" + key + "' must be positive");
    return v;
}

std::size_t count(const json& j, const std::string& key) {
    if (!j.is_number_integer() || j.get<long long>() < 1)
        fail("'" + key + "' must be a positive integer");
    return static_cast<std::size_t>(j.get<long long>());
}

std::vector<std::vector<double>> real_matrix(const json& j, const std::string& key,
                                             std::size_t dim) {
    if (!j.is_array() || j.size() != dim)
        fail("'" + key + "' must be a " + std::to_string(dim) + "x" + std::to_string(dim) + " array");
    std::vector<std::vector<double>> out;
    for (const auto& row : j) {
        if (!row.is_array() || row.size() != dim)
            fail("'" + key + "' rows must have " + std::to_string(dim) + " entries");
        auto& r = out.emplace_back();
        for (const auto& v : row)
            r.push_back(number(v, key));
    }
    return out;
}

} // namespace

QubitSystem parse_hamiltonian(const json& j, double gamma) {
    if (!j.is_object())
        fail("'hamiltonian' must be an object");
    only_keys(j, {"dim", "re", "im"}, "hamiltonian");
    if (!j.contains("dim") || !j.contains("re"))
        fail("'hamiltonian' needs 'dim' and 're'");
    const std::size_t dim = count(j.at("dim"), "dim");
    std::size_t qubits = 0;
    while ((std::size_t{1} << qubits) < dim)
        ++qubits;
    if ((std::size_t{1} << qubits) != dim || qubits == 0)
        fail("'dim' must be a power of two >= 2");

    const auto re = real_matrix(j.at("re"), "re", dim);
    const auto im = j.contains("im") ? real_matrix(j.at("im"), "im", dim)
                                     : std::vector<std::vector<double>>(dim, std::vector<double>(dim, 0.0));
    QubitSystem sys;
    sys.num_qubits = qubits;
    sys.gamma = gamma;
    sys.hamiltonian = MatrixXcd(dim, dim);
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c)
            sys.hamiltonian(r, c) = cplx(re[r][c], im[r][c]);
    try {
        sys.validate();
    } catch (const Error& e) {
        fail(std::string("invalid hamiltonian: ") + e.what());
    }
    return sys;
}

RunConfig parse_config(const json& j) {
    if (!j.is_object())
        fail("config must be a JSON object");
    only_keys(j,
              {"family", "Gamma", "field_law", "hamiltonian", "N", "beta", "gamma", "methods",
               "tolerances", "format", "seed", "qome_cap", "numeric_cap", "timing", "sweep"},
              "config");
    RunConfig cfg;

    if (!j.contains("family") || !j.at("family").is_string())
        fail("'family' is required");
    const auto family = j.at("family").get<std::string>();
    if (family == "free_spins_uniform")
        cfg.family = Family::free_spins_uniform;
    else if (family == "free_spins_modulated")
        cfg.family = Family::free_spins_modulated;
    else if (family == "custom_hamiltonian")
        cfg.family = Family::custom_hamiltonian;
    else
        fail("unknown family '" + family + "'");

    if (j.contains("gamma"))
        cfg.gamma = positive(j.at("gamma"), "gamma");
    if (j.contains("beta"))
        cfg.beta = positive(j.at("beta"), "beta");
    if (j.contains("Gamma"))
        cfg.field = positive(j.at("Gamma"), "Gamma");
    if (j.contains("field_law")) {
        const auto& law = j.at("field_law");
        if (!law.is_object())
            fail("'field_law' must be an object");
        only_keys(law, {"offset", "amplitude", "phase_step"}, "field_law");
        if (law.contains("offset"))
            cfg.law.offset = number(law.at("offset"), "offset");
        if (law.contains("amplitude"))
            cfg.law.amplitude = number(law.at("amplitude"), "amplitude");
        if (law.contains("phase_step"))
            cfg.law.phase_step = number(law.at("phase_step"), "phase_step");
    }
    if (cfg.family == Family::custom_hamiltonian) {
        if (!j.contains("hamiltonian"))
            fail("custom_hamiltonian needs 'hamiltonian'");
        cfg.custom = parse_hamiltonian(j.at("hamiltonian"), cfg.gamma);
    } else if (j.contains("hamiltonian")) {
        fail("'hamiltonian' only applies to custom_hamiltonian");
    }

    if (j.contains("N")) {
        const auto& n = j.at("N");
        cfg.sizes.clear();
        if (n.is_array()) {
            for (const auto& v : n)
                cfg.sizes.push_back(count(v, "N"));
            if (cfg.sizes.empty())
                fail("'N' list is empty");
        } else {
            cfg.sizes.push_back(count(n, "N"));
        }
    }

    if (j.contains("methods")) {
        const auto& m = j.at("methods");
        if (!m.is_array() || m.empty())
            fail("'methods' must be a nonempty array");
        cfg.methods.clear();
        for (const auto& v : m) {
            if (!v.is_string())
                fail("'methods' entries must be strings");
            const auto s = v.get<std::string>();
            if (s == "lba_analytic")
                cfg.methods.push_back(Method::lba_analytic);
            else if (s == "lba_numeric")
                cfg.methods.push_back(Method::lba_numeric);
            else if (s == "qome")
                cfg.methods.push_back(Method::qome);
            else
                fail("unknown method '" + s + "'");
        }
    }

    if (j.contains("tolerances")) {
        const auto& t = j.at("tolerances");
        if (!t.is_object())
            fail("'tolerances' must be an object");
        only_keys(t, {"degeneracy_rel", "energy_rel", "tol_zero", "tol_imag"}, "tolerances");
        if (t.contains("degeneracy_rel"))
            cfg.tol.degeneracy_rel = positive(t.at("degeneracy_rel"), "degeneracy_rel");
        if (t.contains("energy_rel"))
            cfg.tol.energy_rel = positive(t.at("energy_rel"), "energy_rel");
        if (t.contains("tol_zero"))
            cfg.tol.tol_zero = positive(t.at("tol_zero"), "tol_zero");
        if (t.contains("tol_imag"))
            cfg.tol.tol_imag = positive(t.at("tol_imag"), "tol_imag");
    }

    if (j.contains("format")) {
        const auto& f = j.at("format");
        if (f == "csv")
            cfg.format = Format::csv;
        else if (f == "json")
            cfg.format = Format::json;
        else
            fail("'format' must be \"csv\" or \"json\"");
    }
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned())
            fail("'seed' must be a nonnegative integer");
        cfg.seed = j.at("seed").get<std::uint64_t>();
    }
    if (j.contains("qome_cap"))
        cfg.qome_cap = count(j.at("qome_cap"), "qome_cap");
    if (j.contains("numeric_cap"))
        cfg.numeric_cap = count(j.at("numeric_cap"), "numeric_cap");
    if (j.contains("timing")) {
        if (!j.at("timing").is_boolean())
            fail("'timing' must be a boolean");
        cfg.timing = j.at("timing").get<bool>();
    }

    if (j.contains("sweep")) {
        const auto& s = j.at("sweep");
        if (!s.is_object())
            fail("'sweep' must be an object");
        only_keys(s, {"parameter", "values"}, "sweep");
        SweepGrid grid;
        if (!s.contains("parameter") || !s.at("parameter").is_string())
            fail("'sweep.parameter' is required");
        grid.parameter = s.at("parameter").get<std::string>();
        if (grid.parameter != "beta" && grid.parameter != "Gamma")
            fail("'sweep.parameter' must be \"beta\" or \"Gamma\"");
        if (grid.parameter == "Gamma" && cfg.family != Family::free_spins_uniform)
            fail("a Gamma grid needs the free_spins_uniform family");
        if (!s.contains("values") || !s.at("values").is_array())
            fail("'sweep.values' must be an array");
        for (const auto& v : s.at("values"))
            grid.values.push_back(positive(v, "sweep.values"));
        cfg.sweep = std::move(grid);
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        fail("cannot open config '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        fail(std::string("malformed JSON: ") + e.what());
    }
    return parse_config(j);
}

} // namespace lindtherm::cli
