#ifndef HYPERWAVE_ARTIFACTS_HPP
#define HYPERWAVE_ARTIFACTS_HPP

#include <string>
#include <vector>

#include "hyperwave/config.hpp"
#include "json.hpp"

namespace hyperwave {

inline constexpr const char* kVersion = "hyperwave 0.1.0";

/// Writes the artifact byte-stably and a run manifest (config hash, version,
/// rng seed, wall time) next to it.  Wall time lives only in the manifest so
/// reruns stay byte-identical.
void write_artifact(const std::string& path, const nlohmann::ordered_json& artifact,
                    const RunConfig& cfg, double wall_time_ms);
void write_text_artifact(const std::string& path, const std::string& text, const RunConfig& cfg,
                         double wall_time_ms);

nlohmann::ordered_json load_artifact(const std::string& path);

struct ReportInputs {
    std::string certificate;
    std::string charset;
    std::string gap;
    std::vector<std::string> solutions;  // one or a delta grid
    std::string lifetime_csv;
    std::string lifetime_json;
    std::string transversality;
};

/// Cross-linked human-readable summary plus plot-ready CSVs.  Inputs with
/// mismatched config hashes are refused.
void emit_report(const ReportInputs& inputs, const std::string& out_dir);

}  // namespace hyperwave

#endif
