#pragma once

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "oseenlab/config.hpp"
#include "oseenlab/state.hpp"

namespace oseenlab {

static_assert(std::endian::native == std::endian::little,
              "checkpoint payloads are little-endian 64-bit IEEE");

namespace detail {

inline std::uint64_t fnv1a64_bytes(const char* data, std::size_t size) {
    std::uint64_t h = 1469598103934665603ull;
    for (std::size_t i = 0; i < size; ++i) {
        h ^= static_cast<unsigned char>(data[i]);
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

inline void write_field_payload(const std::filesystem::path& path, const ScalarField& f,
                                nlohmann::ordered_json& catalog_entry) {
    const char* bytes = reinterpret_cast<const char*>(f.values().data());
    const std::size_t size = f.values().size() * sizeof(double);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw validation_error("checkpoint: cannot write '" + path.string() + "'");
    out.write(bytes, static_cast<std::streamsize>(size));
    catalog_entry["offset"] = 0;
    catalog_entry["bytes"] = size;
    catalog_entry["fnv1a64"] = hex64(fnv1a64_bytes(bytes, size));
}

inline std::vector<double> read_field_payload(const std::filesystem::path& path,
                                              const nlohmann::json& entry, std::size_t expected) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw validation_error("checkpoint: cannot open payload '" + path.string() + "'");
    std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const std::size_t declared = entry.at("bytes").get<std::size_t>();
    if (bytes.size() != declared || declared != expected * sizeof(double))
        throw validation_error("checkpoint corrupted: payload size mismatch in '" + path.string() +
                               "'");
    if (hex64(fnv1a64_bytes(bytes.data(), bytes.size())) != entry.at("fnv1a64").get<std::string>())
        throw validation_error("checkpoint corrupted: hash mismatch in '" + path.string() + "'");
    std::vector<double> values(expected);
    std::memcpy(values.data(), bytes.data(), bytes.size());
    return values;
}

}  // namespace detail

constexpr int kCheckpointFormatVersion = 1;

/// Write the state as a text manifest plus one little-endian binary sidecar
/// per field. Round trips are bit-identical.
inline std::filesystem::path save_checkpoint(const PerturbationState& state, double alpha,
                                             const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    nlohmann::ordered_json manifest;
    manifest["format_version"] = kCheckpointFormatVersion;
    manifest["grid"] = {{"n", state.grid()->n}, {"half_length", state.grid()->half_length}};
    manifest["alpha"] = alpha;
    manifest["tau"] = state.tau;

    nlohmann::ordered_json catalog = nlohmann::ordered_json::array();
    const std::pair<const char*, const ScalarField*> fields[] = {{"b", &state.b},
                                                                 {"w_tilde", &state.w_tilde}};
    for (const auto& [name, field] : fields) {
        nlohmann::ordered_json entry;
        entry["name"] = name;
        entry["file"] = std::string(name) + ".bin";
        detail::write_field_payload(dir / (std::string(name) + ".bin"), *field, entry);
        catalog.push_back(entry);
    }
    manifest["fields"] = catalog;

    const std::filesystem::path manifest_path = dir / "manifest.json";
    std::ofstream out(manifest_path);
    if (!out) throw validation_error("checkpoint: cannot write manifest");
    out << manifest.dump(2) << "\n";
    return manifest_path;
}

struct LoadedCheckpoint {
    PerturbationState state;
    double alpha = 0.0;
};

inline LoadedCheckpoint load_checkpoint(const std::filesystem::path& path) {
    std::filesystem::path manifest_path = path;
    if (std::filesystem::is_directory(manifest_path)) manifest_path /= "manifest.json";
    std::ifstream in(manifest_path);
    if (!in) throw validation_error("checkpoint: cannot open '" + manifest_path.string() + "'");
    nlohmann::json manifest;
    try {
        in >> manifest;
    } catch (const nlohmann::json::exception& e) {
        throw validation_error(std::string("checkpoint: invalid manifest: ") + e.what());
    }
    const int version = manifest.at("format_version").get<int>();
    if (version != kCheckpointFormatVersion)
        throw validation_error("checkpoint: unsupported format version " +
                               std::to_string(version) + " (supported: " +
                               std::to_string(kCheckpointFormatVersion) + ")");

    auto grid = make_grid(manifest.at("grid").at("n").get<int>(),
                          manifest.at("grid").at("half_length").get<double>());
    const std::size_t expected = static_cast<std::size_t>(grid->n) * grid->n;

    const std::filesystem::path dir = manifest_path.parent_path();
    ScalarField b(grid), w(grid);
    for (const auto& entry : manifest.at("fields")) {
        const std::string name = entry.at("name").get<std::string>();
        std::vector<double> values =
            detail::read_field_payload(dir / entry.at("file").get<std::string>(), entry, expected);
        if (name == "b")
            b = ScalarField(grid, std::move(values));
        else if (name == "w_tilde")
            w = ScalarField(grid, std::move(values));
        else
            throw validation_error("checkpoint: unknown field '" + name + "' in manifest");
    }
    LoadedCheckpoint out{{std::move(b), std::move(w), manifest.at("tau").get<double>()},
                         manifest.at("alpha").get<double>()};
    return out;
}

}  // namespace oseenlab
