#include "hyperwave/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace hyperwave {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

}  // namespace

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string fnv1a64_hex(const std::string& data) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(data)));
    return buf;
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_text(ss.str());
}

RunConfig RunConfig::from_text(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t cut = line.find_first_of("#;");
        if (cut != std::string::npos) line = line.substr(0, cut);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::runtime_error("config line " + std::to_string(lineno) +
                                         ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            cfg.sections_[section];
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::runtime_error("config line " + std::to_string(lineno) + ": empty key");
        cfg.sections_[section][key] = value;
    }
    return cfg;
}

bool RunConfig::has(const std::string& section, const std::string& key) const {
    auto it = sections_.find(section);
    return it != sections_.end() && it->second.count(key) != 0;
}

std::string RunConfig::get(const std::string& section, const std::string& key) const {
    auto it = sections_.find(section);
    if (it == sections_.end() || !it->second.count(key))
        throw std::runtime_error("config: missing [" + section + "] " + key);
    return it->second.at(key);
}

std::string RunConfig::get_or(const std::string& section, const std::string& key,
                              const std::string& fallback) const {
    return has(section, key) ? get(section, key) : fallback;
}

int RunConfig::get_int(const std::string& section, const std::string& key, int fallback) const {
    if (!has(section, key)) return fallback;
    try {
        return std::stoi(get(section, key));
    } catch (const std::exception&) {
        throw std::runtime_error("config: [" + section + "] " + key + " must be an integer");
    }
}

double RunConfig::get_double(const std::string& section, const std::string& key,
                             double fallback) const {
    if (!has(section, key)) return fallback;
    try {
        return std::stod(get(section, key));
    } catch (const std::exception&) {
        throw std::runtime_error("config: [" + section + "] " + key + " must be a number");
    }
}

void RunConfig::set(const std::string& section, const std::string& key, const std::string& value) {
    sections_[section][key] = value;
}

std::string RunConfig::canonical_text() const {
    std::ostringstream os;
    for (const auto& [section, kv] : sections_) {
        os << "[" << section << "]\n";
        for (const auto& [k, v] : kv) os << k << " = " << v << "\n";
    }
    return os.str();
}

std::string RunConfig::hash_hex() const { return fnv1a64_hex(canonical_text()); }

LinearSeed RunConfig::seed() const {
    int b = get_int("problem", "b", 1);
    int d = get_int("problem", "d", 1);
    int p = get_int("problem", "p", 2);
    if (!has("problem", "sites")) throw std::runtime_error("config: missing [problem] sites");

    std::vector<std::vector<int>> sites;
    {
        std::string raw = get("problem", "sites");
        std::string segment;
        std::istringstream is(raw);
        while (std::getline(is, segment, ';')) {
            auto toks = split_ws(segment);
            if (toks.empty()) continue;
            if (static_cast<int>(toks.size()) != d)
                throw std::runtime_error("config: [problem] sites: each site needs d components");
            std::vector<int> site;
            for (const auto& t : toks) site.push_back(std::stoi(t));
            sites.push_back(std::move(site));
        }
        if (static_cast<int>(sites.size()) != b)
            throw std::runtime_error("config: [problem] sites: expected b = " + std::to_string(b) +
                                     " sites separated by ';'");
    }

    std::vector<double> amplitudes;
    if (has("problem", "amplitudes")) {
        for (const auto& t : split_ws(get("problem", "amplitudes"))) amplitudes.push_back(std::stod(t));
        if (static_cast<int>(amplitudes.size()) != b)
            throw std::runtime_error("config: [problem] amplitudes: expected b values");
    } else {
        double delta = get_double("problem", "delta", 0.01);
        amplitudes.assign(b, delta);
    }
    try {
        return LinearSeed(d, std::move(sites), std::move(amplitudes), p);
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(std::string("config: [problem] invalid seed: ") + e.what());
    }
}

HTerms RunConfig::h_terms(const std::string& base_dir) const {
    HTerms out;
    auto it = sections_.find("h_terms");
    if (it == sections_.end()) return out;
    for (const auto& [key, path] : it->second) {
        int m;
        try {
            m = std::stoi(key);
        } catch (const std::exception&) {
            throw std::runtime_error("config: [h_terms] keys must be integer power offsets");
        }
        std::string full = base_dir.empty() ? path : base_dir + "/" + path;
        std::ifstream in(full);
        if (!in) throw std::runtime_error("config: [h_terms] cannot read " + full);
        nlohmann::json j = nlohmann::json::parse(in);
        out.push_back({m, SpectralCoeffs::from_json(j)});
    }
    return out;
}

SolverBox RunConfig::solver_box() const {
    SolverBox box;
    box.n_radius = get_int("boxes", "lambda_n", 8);
    box.j_radius = get_int("boxes", "lambda_j", 8);
    return box;
}

std::uint64_t RunConfig::rng_seed() const {
    if (!has("rng", "seed")) return 12345;
    return static_cast<std::uint64_t>(std::stoull(get("rng", "seed")));
}

CauchyParams RunConfig::cauchy_params() const {
    CauchyParams cp;
    cp.d = get_int("problem", "d", 1);
    cp.p = get_int("problem", "p", 2);
    cp.grid = get_int("cauchy", "grid", cp.d == 1 ? 64 : 32);
    cp.delta = get_double("cauchy", "delta", get_double("problem", "delta", 0.01));
    cp.dt = get_double("cauchy", "dt", default_dt(cp.delta));
    cp.rho = rho();
    return cp;
}

}  // namespace hyperwave
