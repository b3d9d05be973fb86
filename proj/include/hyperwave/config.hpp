#ifndef HYPERWAVE_CONFIG_HPP
#define HYPERWAVE_CONFIG_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hyperwave/cauchy.hpp"
#include "hyperwave/seed.hpp"
#include "hyperwave/solver.hpp"

namespace hyperwave {

/// Flat sectioned key = value configuration.
class RunConfig {
  public:
    static RunConfig from_file(const std::string& path);
    static RunConfig from_text(const std::string& text);

    bool has(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key) const;
    std::string get_or(const std::string& section, const std::string& key,
                       const std::string& fallback) const;
    int get_int(const std::string& section, const std::string& key, int fallback) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    void set(const std::string& section, const std::string& key, const std::string& value);

    /// Canonical serialization (sorted sections and keys); the config hash is
    /// FNV-1a 64 over this text, so flag overrides participate in the hash.
    std::string canonical_text() const;
    std::string hash_hex() const;

    /// Builds and validates the seed from [problem]; throws with field-level
    /// messages on invalid input.
    LinearSeed seed() const;
    HTerms h_terms(const std::string& base_dir = "") const;

    SolverBox solver_box() const;
    double newton_tol() const { return get_double("tolerances", "newton_tol", 1e-11); }
    int max_iter() const { return get_int("tolerances", "max_iter", 30); }
    double rho() const { return get_double("tolerances", "rho", 0.5); }
    std::uint64_t rng_seed() const;
    CauchyParams cauchy_params() const;

  private:
    std::map<std::string, std::map<std::string, std::string>> sections_;
};

std::uint64_t fnv1a64(const std::string& data);
std::string fnv1a64_hex(const std::string& data);

}  // namespace hyperwave

#endif
