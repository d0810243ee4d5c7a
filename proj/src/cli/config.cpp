#include <cmath>
#include <functional>
#include <numbers>
#include <set>

#include "osw/cli.hpp"
#include "osw/motion.hpp"
#include "osw/protocols.hpp"

namespace osw::cli {
namespace {

const std::set<std::string> kCommands{"protocol-dump", "sweep-phase",  "sweep-noise", "sweep-imbalance",
                                      "sweep-motion",  "magnus",       "optimize"};

// Pulls typed entries out of one JSON object, remembering which keys were
// consumed so leftovers can be rejected.
class Reader {
  public:
    Reader(const json& object, std::string prefix) : obj_(object), prefix_(std::move(prefix)) {
        if (!obj_.is_object()) throw ConfigError(prefix_.empty() ? "<root>" : prefix_, "expected a JSON object");
    }

    std::string path(const std::string& key) const { return prefix_.empty() ? key : prefix_ + "." + key; }

    bool has(const std::string& key) const { return obj_.contains(key); }

    const json& raw(const std::string& key) {
        used_.insert(key);
        return obj_.at(key);
    }

    double number(const std::string& key, std::optional<double> fallback,
                  const std::function<bool(double)>& ok = nullptr, const char* requirement = "invalid value") {
        if (!has(key)) {
            if (!fallback) throw ConfigError(path(key), "required key missing");
            return *fallback;
        }
        const json& v = raw(key);
        if (!v.is_number()) throw ConfigError(path(key), "expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) throw ConfigError(path(key), "must be finite");
        if (ok && !ok(d)) throw ConfigError(path(key), requirement);
        return d;
    }

    long long integer(const std::string& key, std::optional<long long> fallback, long long min_value) {
        if (!has(key)) {
            if (!fallback) throw ConfigError(path(key), "required key missing");
            return *fallback;
        }
        const json& v = raw(key);
        if (!v.is_number_integer()) throw ConfigError(path(key), "expected an integer");
        const long long i = v.get<long long>();
        if (i < min_value) throw ConfigError(path(key), "must be >= " + std::to_string(min_value));
        return i;
    }

    std::string text(const std::string& key, std::optional<std::string> fallback,
                     const std::set<std::string>& allowed = {}) {
        if (!has(key)) {
            if (!fallback) throw ConfigError(path(key), "required key missing");
            return *fallback;
        }
        const json& v = raw(key);
        if (!v.is_string()) throw ConfigError(path(key), "expected a string");
        auto s = v.get<std::string>();
        if (!allowed.empty() && !allowed.contains(s)) {
            std::string options;
            for (const auto& a : allowed) options += (options.empty() ? "" : ", ") + a;
            throw ConfigError(path(key), "must be one of: " + options);
        }
        return s;
    }

    std::vector<double> numbers(const std::string& key, const std::function<bool(double)>& ok = nullptr,
                                const char* requirement = "invalid value") {
        const json& v = raw(key);
        if (!v.is_array() || v.empty()) throw ConfigError(path(key), "expected a non-empty array of numbers");
        std::vector<double> out;
        for (const auto& e : v) {
            if (!e.is_number() || !std::isfinite(e.get<double>())) throw ConfigError(path(key), "expected finite numbers");
            if (ok && !ok(e.get<double>())) throw ConfigError(path(key), requirement);
            out.push_back(e.get<double>());
        }
        return out;
    }

    std::vector<int> harmonics(const std::string& key, std::vector<int> fallback) {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_array()) throw ConfigError(path(key), "expected an array of integers");
        std::vector<int> out;
        for (const auto& e : v) {
            if (!e.is_number_integer() || e.get<int>() < 1) throw ConfigError(path(key), "harmonics must be integers >= 1");
            out.push_back(e.get<int>());
        }
        return out;
    }

    void reject_unknown() const {
        for (const auto& [key, value] : obj_.items()) {
            if (!used_.contains(key)) throw ConfigError(path(key), "unknown key");
        }
    }

  private:
    const json& obj_;
    std::string prefix_;
    std::set<std::string> used_;
};

const auto positive = [](double v) { return v > 0.0; };
const auto non_negative = [](double v) { return v >= 0.0; };

// Explicit list or {start, stop, step} grid; resolved to an explicit list.
std::vector<double> read_grid(Reader& r, const std::string& list_key, const std::string& grid_key) {
    if (r.has(list_key) && r.has(grid_key)) throw ConfigError(r.path(grid_key), "give either " + list_key + " or " + grid_key);
    if (r.has(list_key)) return r.numbers(list_key);
    if (!r.has(grid_key)) throw ConfigError(r.path(list_key), "required key missing");
    Reader g(r.raw(grid_key), r.path(grid_key));
    const double start = g.number("start", std::nullopt);
    const double stop = g.number("stop", std::nullopt);
    const double step = g.number("step", std::nullopt, positive, "must be positive");
    g.reject_unknown();
    if (stop < start) throw ConfigError(r.path(grid_key) + ".stop", "must be >= start");
    const auto count = static_cast<long long>(std::floor((stop - start) / step + 1e-9)) + 1;
    if (count > 1000000) throw ConfigError(r.path(grid_key), "grid too large");
    std::vector<double> out;
    for (long long i = 0; i < count; ++i) {
        double v = start + static_cast<double>(i) * step;
        // Snap values that are zero up to rounding.
        if (std::abs(v) < 1e-12 * step) v = 0.0;
        out.push_back(v);
    }
    return out;
}

json read_trap(Reader& r) {
    if (!r.has("trap")) throw ConfigError("trap", "required key missing");
    const json& t = r.raw("trap");
    TrapSpec spec;
    if (t.is_string()) {
        if (t.get<std::string>() != "yb171_clock") throw ConfigError("trap", "unknown preset (available: yb171_clock)");
        spec = yb171_preset();
    } else {
        Reader tr(t, "trap");
        spec.mass = tr.number("mass_kg", std::nullopt, positive, "must be positive");
        spec.omega_trap = tr.number("trap_frequency_rad_per_s", std::nullopt, positive, "must be positive");
        spec.temperature = tr.number("temperature_K", std::nullopt, non_negative, "must be >= 0");
        const double wavelength = tr.number("wavelength_m", std::nullopt, positive, "must be positive");
        spec.wavevector = 2.0 * std::numbers::pi / wavelength;
        tr.reject_unknown();
    }
    return {{"mass_kg", spec.mass},
            {"trap_frequency_rad_per_s", spec.omega_trap},
            {"temperature_K", spec.temperature},
            {"wavelength_m", 2.0 * std::numbers::pi / spec.wavevector}};
}

std::set<std::string> protocol_names() {
    std::set<std::string> names;
    for (auto id : {ProtocolId::OTW1, ProtocolId::OSW1, ProtocolId::OSW_BB1, ProtocolId::OSW_LS1, ProtocolId::OSW_LS2}) {
        names.emplace(to_string(id));
    }
    return names;
}

void read_protocol_block(Reader& r, json& out) {
    out["protocol"] = r.text("protocol", std::nullopt, protocol_names());
    out["theta_rad"] = r.number("theta_rad", std::numbers::pi / 2, [](double v) { return v >= 0.0 && v < 2 * std::numbers::pi; },
                                "must lie in [0, 2 pi)");
    out["phi_rad"] = r.number("phi_rad", 0.0, [](double v) { return std::abs(v) <= std::numbers::pi; },
                              "must lie in [-pi, pi]");
    if (is_light_shift_protocol(*protocol_from_string(out["protocol"].get<std::string>())) &&
        std::abs(out["theta_rad"].get<double>() - std::numbers::pi / 2) > 1e-12) {
        throw ConfigError(r.path("theta_rad"), "light-shift protocols realize theta = pi/2 only");
    }
}

}  // namespace

json resolve_config(const json& raw) {
    Reader r(raw, "");
    json out;
    const std::string command = r.text("command", std::nullopt, kCommands);
    out["command"] = command;
    out["output"] = r.text("output", command + ".csv");
    out["seed"] = r.integer("seed", 1, 0);
    out["n_segments"] = r.integer("n_segments", 400, 2);

    if (command == "protocol-dump" || command == "sweep-phase" || command == "sweep-imbalance" ||
        command == "sweep-noise") {
        read_protocol_block(r, out);
        out["duration_s"] = r.number("duration_s", 1.0, positive, "must be positive");
    }
    if (command == "sweep-phase" || command == "sweep-imbalance") {
        out["kx_values_rad"] = read_grid(r, "kx_values_rad", "kx_grid_rad");
    }
    if (command == "sweep-imbalance") {
        out["imbalance"] = r.number("imbalance", std::nullopt, [](double v) { return v >= 0.0 && v < 1.0; },
                                    "must lie in [0, 1)");
    }
    if (command == "sweep-noise") {
        out["noise_kind"] = r.text("noise_kind", std::nullopt, {"rabi_per_beam", "qubit_frequency"});
        out["role"] = r.text("role", "target", {"target", "non_target"});
        out["sigmas"] = read_grid(r, "sigmas", "sigma_grid");
        for (double s : out["sigmas"]) {
            if (s < 0.0) throw ConfigError("sigmas", "must be >= 0");
        }
        out["averaging"] = r.text("averaging", "monte_carlo", {"monte_carlo", "gauss_hermite"});
        out["n_samples"] = r.integer("n_samples", 2000, 1);
        out["gh_nodes"] = r.integer("gh_nodes", 21, 1);
    }
    if (command == "sweep-motion") {
        read_protocol_block(r, out);
        if (is_light_shift_protocol(*protocol_from_string(out["protocol"].get<std::string>()))) {
            throw ConfigError("protocol", "motional ensembles support OTW1, OSW1 and OSW_BB1");
        }
        out["trap"] = read_trap(r);
        const double period = 2.0 * std::numbers::pi / out["trap"]["trap_frequency_rad_per_s"].get<double>();
        if (r.has("gate_times_s") && r.has("gate_times_trap_periods")) {
            throw ConfigError("gate_times_trap_periods", "give either gate_times_s or gate_times_trap_periods");
        }
        std::vector<double> times;
        if (r.has("gate_times_trap_periods")) {
            for (double p : r.numbers("gate_times_trap_periods", positive, "must be positive")) times.push_back(p * period);
        } else if (r.has("gate_times_s")) {
            times = r.numbers("gate_times_s", positive, "must be positive");
        } else {
            throw ConfigError("gate_times_s", "required key missing");
        }
        out["gate_times_s"] = times;
        out["n_trajectories"] = r.integer("n_trajectories", 2000, 1);
        out["rabi_rescale"] = r.number("rabi_rescale",
                                       default_rabi_rescale(*protocol_from_string(out["protocol"].get<std::string>())),
                                       positive, "must be positive");
    }
    if (command == "magnus") {
        if (r.has("protocol") == r.has("basis")) throw ConfigError("protocol", "give exactly one of protocol or basis");
        if (r.has("protocol")) {
            read_protocol_block(r, out);
        } else {
            Reader b(r.raw("basis"), "basis");
            json basis;
            basis["drive_coeffs"] = b.has("drive_coeffs") ? b.numbers("drive_coeffs") : std::vector<double>{};
            basis["shift_coeffs"] = b.has("shift_coeffs") ? b.numbers("shift_coeffs") : std::vector<double>{};
            basis["drive_phase_rad"] = b.number("drive_phase_rad", 0.0);
            b.reject_unknown();
            out["basis"] = basis;
        }
        out["duration_s"] = r.number("duration_s", 1.0, positive, "must be positive");
        out["perturbation_gamma_T"] =
            r.has("perturbation_gamma_T") ? r.numbers("perturbation_gamma_T", positive, "must be positive") : std::vector<double>{};
    }
    if (command == "optimize") {
        out["theta_rad"] = r.number("theta_rad", std::numbers::pi / 2, [](double v) { return v >= 0.0 && v < 2 * std::numbers::pi; },
                                    "must lie in [0, 2 pi)");
        out["phi_rad"] = r.number("phi_rad", 0.0, [](double v) { return std::abs(v) <= std::numbers::pi; },
                                  "must lie in [-pi, pi]");
        out["duration_s"] = r.number("duration_s", 1.0, positive, "must be positive");
        out["drive_harmonics"] = r.harmonics("drive_harmonics", {1});
        out["shift_harmonics"] = r.harmonics("shift_harmonics", {2, 4});
        if (out["drive_harmonics"].empty() && out["shift_harmonics"].empty()) {
            throw ConfigError("drive_harmonics", "no free parameters");
        }
        out["max_iterations"] = r.integer("max_iterations", 4000, 1);
        out["cost_tolerance"] = r.number("cost_tolerance", 1e-4, positive, "must be positive");
        out["restarts"] = r.integer("restarts", 20, 1);
        out["drive_init_max"] = r.number("drive_init_max", 15.0, positive, "must be positive");
        out["shift_init_max"] = r.number("shift_init_max", 3.0, positive, "must be positive");
    }
    r.reject_unknown();
    return out;
}

}  // namespace osw::cli
