#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "oseenlab/errors.hpp"

namespace oseenlab {

enum class PerturbationShape { gaussian_dipole, hermite_mode, random_bandlimited };

inline std::string to_string(PerturbationShape s) {
    switch (s) {
        case PerturbationShape::gaussian_dipole: return "gaussian-dipole";
        case PerturbationShape::hermite_mode: return "hermite-mode";
        case PerturbationShape::random_bandlimited: return "random-bandlimited";
    }
    return "?";
}

/// Full run configuration. Every knob of the simulator lives here; parsing is
/// strict (unknown keys rejected) and all randomness flows from `seed`.
struct RunConfig {
    double alpha = 0.0;
    double epsilon = 0.0;
    double epsilon_b = 0.0;  // independent amplitude for b0 (defaults to epsilon)
    int n = 256;
    double half_length = 16.0;
    double dt = 0.0;  // 0 = auto-CFL
    double t_end = 6.0;
    std::uint64_t seed = 1;
    PerturbationShape shape = PerturbationShape::gaussian_dipole;
    int hermite_n1 = 1;
    int hermite_n2 = 0;
    double band_kappa = 2.0;
    double pressure_tol = 1e-10;
    double eigensolver_tol = 1e-8;
    double sobolev_s = 0.5;
    double weighted_q = 8.0;
    double cfl = 0.5;
    double hyperviscosity = 0.0;
    bool drop_transport = false;
    int output_every = 16;
    int checkpoint_every = 0;
    int sample_every = 1;
    bool emit_svg = true;

    bool operator==(const RunConfig&) const = default;
};

namespace detail {

inline double require_number(const nlohmann::json& j, const std::string& key) {
    if (!j.at(key).is_number())
        throw validation_error("config." + key + ": must be a number");
    return j.at(key).get<double>();
}

inline std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace detail

inline RunConfig parse_config_json(const nlohmann::json& j) {
    if (!j.is_object()) throw validation_error("config: top level must be an object");

    static const char* known[] = {
        "alpha",          "epsilon",       "epsilon_b",   "n",
        "half_length",    "dt",            "t_end",       "seed",
        "shape",          "hermite_n1",    "hermite_n2",  "band_kappa",
        "pressure_tol",   "eigensolver_tol", "sobolev_s", "weighted_q",
        "cfl",            "hyperviscosity", "drop_transport", "output_every",
        "checkpoint_every", "sample_every", "emit_svg"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : known) ok = ok || it.key() == k;
        if (!ok) throw validation_error("config: unknown key '" + it.key() + "'");
    }

    RunConfig c;
    if (!j.contains("alpha")) throw validation_error("config.alpha: missing required key");
    if (!j.contains("epsilon")) throw validation_error("config.epsilon: missing required key");
    c.alpha = detail::require_number(j, "alpha");
    c.epsilon = detail::require_number(j, "epsilon");
    if (c.epsilon < 0.0) throw validation_error("config.epsilon: must be >= 0");
    c.epsilon_b = j.contains("epsilon_b") ? detail::require_number(j, "epsilon_b") : c.epsilon;
    if (c.epsilon_b < 0.0) throw validation_error("config.epsilon_b: must be >= 0");

    if (j.contains("n")) {
        if (!j.at("n").is_number_integer()) throw validation_error("config.n: must be an integer");
        c.n = j.at("n").get<int>();
    }
    if (c.n < 8 || c.n % 2 != 0) throw validation_error("config.n: must be even and >= 8");

    if (j.contains("half_length")) c.half_length = detail::require_number(j, "half_length");
    if (!(c.half_length > 0.0)) throw validation_error("config.half_length: must be positive");

    if (j.contains("dt")) {
        c.dt = detail::require_number(j, "dt");
        if (!(c.dt > 0.0)) throw validation_error("config.dt: must be positive when given");
    }
    if (j.contains("t_end")) c.t_end = detail::require_number(j, "t_end");
    if (c.t_end < 0.0) throw validation_error("config.t_end: must be >= 0");

    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned() && !j.at("seed").is_number_integer())
            throw validation_error("config.seed: must be a non-negative integer");
        const auto s = j.at("seed").get<std::int64_t>();
        if (s < 0) throw validation_error("config.seed: must be a non-negative integer");
        c.seed = static_cast<std::uint64_t>(s);
    }

    if (j.contains("shape")) {
        if (!j.at("shape").is_string()) throw validation_error("config.shape: must be a string");
        const std::string s = j.at("shape").get<std::string>();
        if (s == "gaussian-dipole") c.shape = PerturbationShape::gaussian_dipole;
        else if (s == "hermite-mode") c.shape = PerturbationShape::hermite_mode;
        else if (s == "random-bandlimited") c.shape = PerturbationShape::random_bandlimited;
        else
            throw validation_error("config.shape: must be one of gaussian-dipole, hermite-mode, "
                                   "random-bandlimited");
    }
    auto get_int = [&](const char* key, int def, int lo) {
        if (!j.contains(key)) return def;
        if (!j.at(key).is_number_integer())
            throw validation_error(std::string("config.") + key + ": must be an integer");
        const int v = j.at(key).get<int>();
        if (v < lo)
            throw validation_error(std::string("config.") + key + ": must be >= " +
                                   std::to_string(lo));
        return v;
    };
    c.hermite_n1 = get_int("hermite_n1", c.hermite_n1, 0);
    c.hermite_n2 = get_int("hermite_n2", c.hermite_n2, 0);

    if (j.contains("band_kappa")) c.band_kappa = detail::require_number(j, "band_kappa");
    if (!(c.band_kappa > 0.0)) throw validation_error("config.band_kappa: must be positive");

    if (j.contains("pressure_tol")) c.pressure_tol = detail::require_number(j, "pressure_tol");
    if (!(c.pressure_tol > 0.0) || c.pressure_tol > 1e-6)
        throw validation_error("config.pressure_tol: must be in (0, 1e-6]");

    if (j.contains("eigensolver_tol")) c.eigensolver_tol = detail::require_number(j, "eigensolver_tol");
    if (!(c.eigensolver_tol > 0.0)) throw validation_error("config.eigensolver_tol: must be positive");

    if (j.contains("sobolev_s")) c.sobolev_s = detail::require_number(j, "sobolev_s");
    if (j.contains("weighted_q")) c.weighted_q = detail::require_number(j, "weighted_q");
    if (!(c.weighted_q >= 1.0)) throw validation_error("config.weighted_q: must be >= 1");

    if (j.contains("cfl")) c.cfl = detail::require_number(j, "cfl");
    if (!(c.cfl > 0.0 && c.cfl <= 1.0)) throw validation_error("config.cfl: must be in (0, 1]");

    if (j.contains("hyperviscosity")) c.hyperviscosity = detail::require_number(j, "hyperviscosity");
    if (c.hyperviscosity < 0.0) throw validation_error("config.hyperviscosity: must be >= 0");

    if (j.contains("drop_transport")) {
        if (!j.at("drop_transport").is_boolean())
            throw validation_error("config.drop_transport: must be a boolean");
        c.drop_transport = j.at("drop_transport").get<bool>();
    }
    c.output_every = get_int("output_every", c.output_every, 1);
    c.checkpoint_every = get_int("checkpoint_every", c.checkpoint_every, 0);
    c.sample_every = get_int("sample_every", c.sample_every, 1);
    if (j.contains("emit_svg")) {
        if (!j.at("emit_svg").is_boolean())
            throw validation_error("config.emit_svg: must be a boolean");
        c.emit_svg = j.at("emit_svg").get<bool>();
    }
    return c;
}

inline RunConfig parse_config_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw validation_error(std::string("config: invalid JSON: ") + e.what());
    }
    return parse_config_json(j);
}

inline RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

/// Canonical serialization of the effective (fully defaulted) config.
inline nlohmann::ordered_json effective_config_json(const RunConfig& c) {
    nlohmann::ordered_json j;
    j["alpha"] = c.alpha;
    j["epsilon"] = c.epsilon;
    j["epsilon_b"] = c.epsilon_b;
    j["n"] = c.n;
    j["half_length"] = c.half_length;
    j["dt"] = c.dt == 0.0 ? nlohmann::ordered_json() : nlohmann::ordered_json(c.dt);
    j["t_end"] = c.t_end;
    j["seed"] = c.seed;
    j["shape"] = to_string(c.shape);
    j["hermite_n1"] = c.hermite_n1;
    j["hermite_n2"] = c.hermite_n2;
    j["band_kappa"] = c.band_kappa;
    j["pressure_tol"] = c.pressure_tol;
    j["eigensolver_tol"] = c.eigensolver_tol;
    j["sobolev_s"] = c.sobolev_s;
    j["weighted_q"] = c.weighted_q;
    j["cfl"] = c.cfl;
    j["hyperviscosity"] = c.hyperviscosity;
    j["drop_transport"] = c.drop_transport;
    j["output_every"] = c.output_every;
    j["checkpoint_every"] = c.checkpoint_every;
    j["sample_every"] = c.sample_every;
    j["emit_svg"] = c.emit_svg;
    return j;
}

inline std::string effective_config_text(const RunConfig& c) {
    nlohmann::ordered_json j = effective_config_json(c);
    if (j["dt"].is_null()) j.erase("dt");
    return j.dump(2) + "\n";
}

inline std::uint64_t config_hash(const RunConfig& c) {
    return detail::fnv1a64(effective_config_text(c));
}

}  // namespace oseenlab
