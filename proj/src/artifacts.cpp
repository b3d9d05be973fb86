#include "hyperwave/artifacts.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace hyperwave {

namespace {

void write_file(const std::string& path, const std::string& data) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << data;
}

void write_manifest(const std::string& artifact_path, const RunConfig& cfg, double wall_time_ms) {
    nlohmann::ordered_json m;
    m["artifact"] = std::filesystem::path(artifact_path).filename().string();
    m["version"] = kVersion;
    m["config_hash"] = cfg.hash_hex();
    m["rng_seed"] = cfg.rng_seed();
    m["wall_time_ms"] = wall_time_ms;
    write_file(artifact_path + ".manifest.json", m.dump(2) + "\n");
}

}  // namespace

void write_artifact(const std::string& path, const nlohmann::ordered_json& artifact,
                    const RunConfig& cfg, double wall_time_ms) {
    write_file(path, artifact.dump(2) + "\n");
    write_manifest(path, cfg, wall_time_ms);
}

void write_text_artifact(const std::string& path, const std::string& text, const RunConfig& cfg,
                         double wall_time_ms) {
    write_file(path, text);
    write_manifest(path, cfg, wall_time_ms);
}

nlohmann::ordered_json load_artifact(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read artifact " + path);
    return nlohmann::ordered_json::parse(in);
}

void emit_report(const ReportInputs& inputs, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    std::ostringstream summary;
    summary << "hyperwave run summary\n=====================\n\n";

    std::string expected_hash;
    auto check_hash = [&](const nlohmann::ordered_json& j, const std::string& what) {
        if (!j.contains("config_hash")) return;
        std::string h = j["config_hash"].get<std::string>();
        if (expected_hash.empty())
            expected_hash = h;
        else if (h != expected_hash)
            throw std::runtime_error("emit_report: config hash mismatch in " + what +
                                     " (refusing to cross-link artifacts from different runs)");
    };

    // Certificate section.
    if (!inputs.certificate.empty() && std::filesystem::exists(inputs.certificate)) {
        auto j = load_artifact(inputs.certificate);
        check_hash(j, "certificate");
        summary << "[genericity certificate]\n";
        summary << "  generic: " << j.value("generic", "?") << "\n";
        for (const char* cond : {"condition_i", "condition_ii", "condition_iii"}) {
            if (!j.contains(cond)) continue;
            summary << "  " << cond << ": " << j[cond].value("status", "?") << " (tested "
                    << j[cond].value("tested", 0L) << ")\n";
        }
        summary << "\n";
    } else {
        summary << "[genericity certificate] absent\n\n";
    }

    // Characteristic set / components section.
    if (!inputs.charset.empty() && std::filesystem::exists(inputs.charset)) {
        auto j = load_artifact(inputs.charset);
        check_hash(j, "charset");
        summary << "[characteristics]\n";
        summary << "  points: " << j["plus"].size() << " plus, " << j["minus"].size()
                << " minus\n";
        for (const auto& rep : j["component_reports"]) {
            summary << "  " << rep.value("adjacency", "?") << ": max component "
                    << rep.value("max_size", 0) << " vs bound " << rep.value("bound_B", 0) << " -> "
                    << (rep.value("bound_holds", false) ? "ok" : "VIOLATED") << "\n";
        }
        if (j.contains("diophantine")) {
            summary << "  small-divisor fit: c' = " << j["diophantine"].value("cprime", 0.0)
                    << ", q = " << j["diophantine"].value("q", 0.0) << "\n";
            std::ostringstream csv;
            csv << "N,m\n";
            for (const auto& row : j["diophantine"]["table"]) {
                char line[64];
                std::snprintf(line, sizeof line, "%d,%.17g\n", row.value("N", 0),
                              row.value("m", 0.0));
                csv << line;
            }
            write_file(out_dir + "/diophantine_profile.csv", csv.str());
        }
        summary << "\n";
    } else {
        summary << "[characteristics] absent\n\n";
    }

    // Gap section.
    if (!inputs.gap.empty() && std::filesystem::exists(inputs.gap)) {
        auto j = load_artifact(inputs.gap);
        check_hash(j, "gap");
        summary << "[spectral gap]\n";
        summary << "  inverse norm: " << j["inverse_norm"].dump() << " vs bound "
                << j.value("bound", 0.0) << " -> " << (j.value("pass", false) ? "pass" : "fail")
                << "\n";
        summary << "  complement inverse norm: " << j["pc_inverse_norm"].dump()
                << ", coupling: " << j["coupling_norm"].dump() << "\n\n";
    } else {
        summary << "[spectral gap] absent\n\n";
    }

    // Solutions section (+ residual history and delta scaling CSVs).
    if (!inputs.solutions.empty()) {
        summary << "[quasi-periodic solutions]\n";
        std::ostringstream scaling;
        scaling << "delta,frequency_shift,remainder_norm,residual\n";
        bool first = true;
        for (const auto& path : inputs.solutions) {
            if (!std::filesystem::exists(path)) continue;
            auto j = load_artifact(path);
            check_hash(j, path);
            double delta = j.value("delta", 0.0);
            double shift = j["frequency_shift"].empty() ? 0.0 : std::abs(j["frequency_shift"][0].get<double>());
            summary << "  delta=" << delta << ": converged=" << j.value("converged", false)
                    << " residual=" << j.value("residual_norm", 0.0)
                    << " iterations=" << j.value("iterations", 0) << "\n";
            char line[128];
            std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", delta, shift,
                          j.value("remainder_norm", 0.0), j.value("residual_norm", 0.0));
            scaling << line;
            if (first) {
                std::ostringstream hist;
                hist << "iteration,residual\n";
                int it = 0;
                for (const auto& r : j["history"]) {
                    std::snprintf(line, sizeof line, "%d,%.17g\n", it++, r.get<double>());
                    hist << line;
                }
                write_file(out_dir + "/residual_history.csv", hist.str());
                first = false;
            }
        }
        write_file(out_dir + "/delta_scaling.csv", scaling.str());
        summary << "\n";
    } else {
        summary << "[quasi-periodic solutions] absent\n\n";
    }

    // Lifetime section.
    if (!inputs.lifetime_json.empty() && std::filesystem::exists(inputs.lifetime_json)) {
        auto j = load_artifact(inputs.lifetime_json);
        check_hash(j, "lifetime");
        summary << "[lifetime]\n";
        summary << "  T=" << j.value("T", 0.0) << " delta=" << j.value("delta", 0.0)
                << " max excess=" << j.value("max_excess", 0.0) << " (threshold "
                << j.value("pass_threshold", 0.0) << ") -> "
                << (j.value("pass", false) ? "pass" : "fail") << "\n";
        summary << "  energy drift=" << j.value("max_energy_drift", 0.0)
                << " blow-up=" << (j.value("blew_up", false) ? "yes" : "no") << "\n\n";
    } else {
        summary << "[lifetime] absent\n\n";
    }
    if (!inputs.lifetime_csv.empty() && std::filesystem::exists(inputs.lifetime_csv)) {
        std::ifstream in(inputs.lifetime_csv);
        std::ostringstream csv;
        csv << in.rdbuf();
        write_file(out_dir + "/lifetime_excess.csv", csv.str());
    }

    // Transversality section.
    if (!inputs.transversality.empty() && std::filesystem::exists(inputs.transversality)) {
        auto j = load_artifact(inputs.transversality);
        check_hash(j, "transversality");
        summary << "[transversality]\n";
        summary << "  rescaled log-det slope: " << j.value("slope_rescaled", 0.0)
                << ", raw slope: " << j.value("slope_unrescaled", 0.0) << "\n";
        summary << "  note: " << j.value("note", "") << "\n\n";
    }

    write_file(out_dir + "/summary.txt", summary.str());
}

}  // namespace hyperwave
