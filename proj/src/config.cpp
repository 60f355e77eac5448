#include "cgrape/config.hpp"

#include <fstream>

namespace cgrape {

namespace {

using nlohmann::json;

void require_keys(const json& obj, const char* scope,
                  std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) known = true;
        if (!known)
            throw config_error(std::string("config: unknown key '") + scope + "." + it.key() + "'");
    }
}

double get_number(const json& obj, const char* scope, const char* key, double fallback,
                  double lo, double hi) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number())
        throw config_error(std::string("config: '") + scope + "." + key + "' must be a number");
    const double x = v.get<double>();
    if (!(x >= lo && x <= hi))
        throw config_error(std::string("config: '") + scope + "." + key + "' out of range");
    return x;
}

int get_int(const json& obj, const char* scope, const char* key, int fallback, int lo, int hi) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number_integer())
        throw config_error(std::string("config: '") + scope + "." + key + "' must be an integer");
    const int x = v.get<int>();
    if (x < lo || x > hi)
        throw config_error(std::string("config: '") + scope + "." + key + "' out of range");
    return x;
}

}  // namespace

RunConfig parse_config(const nlohmann::json& doc) {
    if (!doc.is_object()) throw config_error("config: top level must be an object");
    require_keys(doc, "", {"qubit", "model", "pulse", "optimizer", "output_dir", "seed"});

    RunConfig c;

    if (doc.contains("qubit")) {
        const auto& q = doc.at("qubit");
        require_keys(q, "qubit",
                     {"critical_current_uA", "junction_capacitance_pF", "beta", "t1_ns"});
        c.qubit.critical_current_uA =
            get_number(q, "qubit", "critical_current_uA", 2.0, 1e-6, 1e3);
        c.qubit.junction_capacitance_pF =
            get_number(q, "qubit", "junction_capacitance_pF", 1.0, 1e-6, 1e3);
        c.qubit.beta = get_number(q, "qubit", "beta", 4.375, 1e-6, 1e3);
        c.qubit.t1_ns = get_number(q, "qubit", "t1_ns", 500.0, 1e-9, 1e9);
    }

    if (doc.contains("model")) {
        const auto& m = doc.at("model");
        require_keys(m, "model",
                     {"fit_bias_lo_over_2pi", "fit_bias_hi_over_2pi", "fit_points", "dvr_points",
                      "dvr_margin", "dvr_wall_factor", "gamma1_ref_threshold_per_ns",
                      "eta_fit_tolerance", "alpha_fit_tolerance", "omega_fit_tolerance"});
        c.model.bias_lo = get_number(m, "model", "fit_bias_lo_over_2pi", 0.925, 0.5, 1.0) * kTwoPi;
        c.model.bias_hi = get_number(m, "model", "fit_bias_hi_over_2pi", 0.945, 0.5, 1.0) * kTwoPi;
        c.model.n_bias = get_int(m, "model", "fit_points", 40, 4, 10000);
        c.model.dvr.n_points = get_int(m, "model", "dvr_points", 500, 16, 20000);
        c.model.dvr.margin = get_number(m, "model", "dvr_margin", 0.02, 0.0, 2.0);
        c.model.dvr.wall_factor = get_number(m, "model", "dvr_wall_factor", 2.0, 0.1, 100.0);
        c.model.gamma1_ref_threshold =
            get_number(m, "model", "gamma1_ref_threshold_per_ns", 1e-6, 1e-15, 1.0);
        c.model.thresholds.eta = get_number(m, "model", "eta_fit_tolerance", 1e-3, 0.0, 1.0);
        c.model.thresholds.alpha = get_number(m, "model", "alpha_fit_tolerance", 1e-3, 0.0, 1.0);
        c.model.thresholds.omega = get_number(m, "model", "omega_fit_tolerance", 1e-2, 0.0, 1.0);
        if (!(c.model.bias_lo < c.model.bias_hi))
            throw config_error("config: model fit range is empty");
    }

    if (doc.contains("pulse")) {
        const auto& p = doc.at("pulse");
        require_keys(p, "pulse",
                     {"duration_ns", "dt_ns", "sigma_ns", "head_ns", "tail_ns",
                      "initial_amplitude_over_2pi", "lo_over_2pi", "hi_over_2pi"});
        c.pulse.duration_ns = get_number(p, "pulse", "duration_ns", 10.0, 1e-3, 1e6);
        c.pulse.dt_ns = get_number(p, "pulse", "dt_ns", 0.1, 1e-6, 1e3);
        c.pulse.sigma_ns = get_number(p, "pulse", "sigma_ns", 0.5, 0.0, 1e3);
        c.pulse.head_ns = get_number(p, "pulse", "head_ns", 2.0, 0.0, 1e6);
        c.pulse.tail_ns = get_number(p, "pulse", "tail_ns", 2.0, 0.0, 1e6);
        c.pulse.initial_amplitude_over_2pi =
            get_number(p, "pulse", "initial_amplitude_over_2pi", 0.9385, 0.5, 1.0);
        if (p.contains("lo_over_2pi"))
            c.pulse.lo_over_2pi = get_number(p, "pulse", "lo_over_2pi", 0.0, 0.5, 1.0);
        if (p.contains("hi_over_2pi"))
            c.pulse.hi_over_2pi = get_number(p, "pulse", "hi_over_2pi", 0.0, 0.5, 1.0);
    }

    if (doc.contains("optimizer")) {
        const auto& o = doc.at("optimizer");
        require_keys(o, "optimizer",
                     {"max_iterations", "gradient_tolerance", "wolfe_c1", "wolfe_c2"});
        c.optimizer.max_iterations = get_int(o, "optimizer", "max_iterations", 500, 0, 1000000);
        c.optimizer.gradient_tolerance =
            get_number(o, "optimizer", "gradient_tolerance", 1e-7, 0.0, 1.0);
        c.optimizer.wolfe_c1 = get_number(o, "optimizer", "wolfe_c1", 1e-4, 1e-10, 0.5);
        c.optimizer.wolfe_c2 = get_number(o, "optimizer", "wolfe_c2", 0.9, 0.5, 1.0);
    }

    if (doc.contains("output_dir")) {
        if (!doc.at("output_dir").is_string())
            throw config_error("config: 'output_dir' must be a string");
        c.output_dir = doc.at("output_dir").get<std::string>();
    }
    if (doc.contains("seed")) {
        if (!doc.at("seed").is_number_unsigned() && !doc.at("seed").is_number_integer())
            throw config_error("config: 'seed' must be an integer");
        c.seed = doc.at("seed").get<std::uint64_t>();
    }

    try {
        c.qubit.validate();
    } catch (const std::exception& e) {
        throw config_error(std::string("config: ") + e.what());
    }
    const int n_pixels = static_cast<int>(std::llround(c.pulse.duration_ns / c.pulse.dt_ns));
    const int n_hold = static_cast<int>(std::llround(c.pulse.head_ns / c.pulse.dt_ns)) +
                       static_cast<int>(std::llround(c.pulse.tail_ns / c.pulse.dt_ns));
    if (n_pixels < 1 || n_hold >= n_pixels)
        throw config_error("config: pulse head/tail leave no free pixels");
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("config: cannot open '" + path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        throw config_error(std::string("config: parse failure: ") + e.what());
    }
    return parse_config(doc);
}

nlohmann::json config_to_json(const RunConfig& c) {
    nlohmann::json j;
    j["qubit"] = {{"critical_current_uA", c.qubit.critical_current_uA},
                  {"junction_capacitance_pF", c.qubit.junction_capacitance_pF},
                  {"beta", c.qubit.beta},
                  {"t1_ns", c.qubit.t1_ns}};
    j["model"] = {{"fit_bias_lo_over_2pi", c.model.bias_lo / kTwoPi},
                  {"fit_bias_hi_over_2pi", c.model.bias_hi / kTwoPi},
                  {"fit_points", c.model.n_bias},
                  {"dvr_points", c.model.dvr.n_points},
                  {"dvr_margin", c.model.dvr.margin},
                  {"dvr_wall_factor", c.model.dvr.wall_factor},
                  {"gamma1_ref_threshold_per_ns", c.model.gamma1_ref_threshold},
                  {"eta_fit_tolerance", c.model.thresholds.eta},
                  {"alpha_fit_tolerance", c.model.thresholds.alpha},
                  {"omega_fit_tolerance", c.model.thresholds.omega}};
    j["pulse"] = {{"duration_ns", c.pulse.duration_ns},
                  {"dt_ns", c.pulse.dt_ns},
                  {"sigma_ns", c.pulse.sigma_ns},
                  {"head_ns", c.pulse.head_ns},
                  {"tail_ns", c.pulse.tail_ns},
                  {"initial_amplitude_over_2pi", c.pulse.initial_amplitude_over_2pi}};
    if (c.pulse.lo_over_2pi) j["pulse"]["lo_over_2pi"] = *c.pulse.lo_over_2pi;
    if (c.pulse.hi_over_2pi) j["pulse"]["hi_over_2pi"] = *c.pulse.hi_over_2pi;
    j["optimizer"] = {{"max_iterations", c.optimizer.max_iterations},
                      {"gradient_tolerance", c.optimizer.gradient_tolerance},
                      {"wolfe_c1", c.optimizer.wolfe_c1},
                      {"wolfe_c2", c.optimizer.wolfe_c2}};
    j["output_dir"] = c.output_dir;
    j["seed"] = c.seed;
    return j;
}

namespace {

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a 64
    for (unsigned char ch : data) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[19];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace

std::string config_hash(const RunConfig& config) {
    return fnv1a_hex(config_to_json(config).dump());
}

std::string fit_hash(const RunConfig& config) {
    const nlohmann::json full = config_to_json(config);
    nlohmann::json sub;
    sub["qubit"] = full.at("qubit");
    sub["model"] = full.at("model");
    return fnv1a_hex(sub.dump());
}

}  // namespace cgrape
