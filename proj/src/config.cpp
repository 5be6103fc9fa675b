#include "biostab/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <vector>

#include "biostab/errors.hpp"

namespace biostab {

namespace {

std::string trim(const std::string& s) {
    auto b = s.begin(), e = s.end();
    while (b != e && std::isspace(static_cast<unsigned char>(*b))) ++b;
    while (e != b && std::isspace(static_cast<unsigned char>(*(e - 1)))) --e;
    return {b, e};
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ValidationError("config: key \"" + key + "\" has non-numeric value \"" + value + "\"");
    }
}

int parse_int(const std::string& key, const std::string& value) {
    const double v = parse_double(key, value);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v)
        throw ValidationError("config: key \"" + key + "\" must be an integer, got \"" + value + "\"");
    return i;
}

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

std::map<std::string, std::string> CaseConfig::snapshot() const {
    std::map<std::string, std::string> m;
    m["schmidt"] = format_double(params.schmidt);
    m["vc"] = format_double(params.swim_speed);
    m["tau_h"] = format_double(params.extinction);
    m["omega"] = format_double(params.albedo);
    m["a_coeff"] = format_double(params.aniso_coeff);
    m["b_flux"] = format_double(params.diffuse_flux);
    m["g_c"] = format_double(params.critical_intensity);
    m["top_boundary"] = to_string(params.top_boundary);
    m["n_z"] = std::to_string(numerics.n_z);
    m["n_mu"] = std::to_string(numerics.n_mu);
    m["n_phi"] = std::to_string(numerics.n_phi);
    m["tol_fredholm"] = format_double(numerics.tol_fredholm);
    m["tol_eigen"] = format_double(numerics.tol_eigen);
    m["k_min"] = format_double(numerics.k_min);
    m["k_max"] = format_double(numerics.k_max);
    m["k_step"] = format_double(numerics.k_step);
    return m;
}

CaseConfig parse_config_text(const std::string& text) {
    CaseConfig cfg;
    std::vector<std::string> unknown;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError("config: line " + std::to_string(lineno) +
                                  " is not of the form key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ValidationError("config: line " + std::to_string(lineno) +
                                  " has an empty key or value");

        if (key == "schmidt") cfg.params.schmidt = parse_double(key, value);
        else if (key == "vc") cfg.params.swim_speed = parse_double(key, value);
        else if (key == "tau_h") cfg.params.extinction = parse_double(key, value);
        else if (key == "omega") cfg.params.albedo = parse_double(key, value);
        else if (key == "a_coeff") cfg.params.aniso_coeff = parse_double(key, value);
        else if (key == "b_flux") cfg.params.diffuse_flux = parse_double(key, value);
        else if (key == "g_c") cfg.params.critical_intensity = parse_double(key, value);
        else if (key == "top_boundary") cfg.params.top_boundary = top_boundary_from_string(value);
        else if (key == "n_z") cfg.numerics.n_z = parse_int(key, value);
        else if (key == "n_mu") cfg.numerics.n_mu = parse_int(key, value);
        else if (key == "n_phi") cfg.numerics.n_phi = parse_int(key, value);
        else if (key == "tol_fredholm") cfg.numerics.tol_fredholm = parse_double(key, value);
        else if (key == "tol_eigen") cfg.numerics.tol_eigen = parse_double(key, value);
        else if (key == "k_min") cfg.numerics.k_min = parse_double(key, value);
        else if (key == "k_max") cfg.numerics.k_max = parse_double(key, value);
        else if (key == "k_step") cfg.numerics.k_step = parse_double(key, value);
        else unknown.push_back(key);
    }
    if (!unknown.empty()) {
        std::string msg = "config: unknown keys:";
        for (const auto& k : unknown) msg += " " + k;
        throw ValidationError(msg);
    }
    cfg.params.validate();
    if (cfg.numerics.n_z < 64) throw ValidationError("config: n_z must be >= 64");
    if (cfg.numerics.n_mu < 4 || cfg.numerics.n_mu % 2 != 0)
        throw ValidationError("config: n_mu must be an even number >= 4");
    if (cfg.numerics.n_phi < 4) throw ValidationError("config: n_phi must be >= 4");
    if (!(cfg.numerics.tol_fredholm > 0.0)) throw ValidationError("config: tol_fredholm must be > 0");
    if (!(cfg.numerics.tol_eigen > 0.0)) throw ValidationError("config: tol_eigen must be > 0");
    if (!(cfg.numerics.k_min > 0.0 && cfg.numerics.k_max > cfg.numerics.k_min))
        throw ValidationError("config: require 0 < k_min < k_max");
    if (!(cfg.numerics.k_step > 0.0)) throw ValidationError("config: k_step must be > 0");
    return cfg;
}

CaseConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ValidationError("config: cannot open \"" + path + "\"");
    std::stringstream buf;
    buf << f.rdbuf();
    return parse_config_text(buf.str());
}

}  // namespace biostab
