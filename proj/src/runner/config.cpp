#include "runner/config.hpp"

#include <fstream>
#include <sstream>

namespace runner {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& msg) { throw gp::DomainError("config: " + msg); }

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* k : allowed)
            if (item.key() == k) known = true;
        if (!known) bad("unknown key \"" + item.key() + "\" in " + where);
    }
}

double require_number(const json& obj, const std::string& where, const char* key) {
    if (!obj.contains(key)) bad("missing key \"" + std::string(key) + "\" in " + where);
    if (!obj[key].is_number()) bad("key \"" + std::string(key) + "\" in " + where + " must be a number");
    return obj[key].get<double>();
}

double number_or(const json& obj, const std::string& where, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) bad("key \"" + std::string(key) + "\" in " + where + " must be a number");
    return obj[key].get<double>();
}

int integer_or(const json& obj, const std::string& where, const char* key, int fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number_integer()) bad("key \"" + std::string(key) + "\" in " + where + " must be an integer");
    return obj[key].get<int>();
}

gp::MemoryKernel parse_kernel(const json& spec) {
    if (!spec.is_object()) bad("\"kernel\" must be an object");
    check_keys(spec, "kernel", {"type", "terms", "value", "samples", "step"});
    if (!spec.contains("type") || !spec["type"].is_string()) bad("kernel needs a string \"type\"");
    const std::string type = spec["type"].get<std::string>();

    if (type == "expsum") {
        if (!spec.contains("terms") || !spec["terms"].is_array() || spec["terms"].empty())
            bad("expsum kernel needs a non-empty \"terms\" array");
        const auto& terms = spec["terms"];
        Eigen::VectorXd c(terms.size()), g(terms.size());
        for (size_t i = 0; i < terms.size(); ++i) {
            const auto& t = terms[i];
            if (!t.is_array() || t.size() != 2 || !t[0].is_number() || !t[1].is_number())
                bad("each kernel term must be a [c, gamma] number pair");
            c[Eigen::Index(i)] = t[0].get<double>();
            g[Eigen::Index(i)] = t[1].get<double>();
        }
        return gp::make_exp_sum(c, g);
    }
    if (type == "constant") {
        return gp::make_constant(require_number(spec, "kernel", "value"));
    }
    if (type == "tabulated") {
        if (!spec.contains("samples") || !spec["samples"].is_array())
            bad("tabulated kernel needs a \"samples\" array");
        const auto& samples = spec["samples"];
        Eigen::VectorXd values(samples.size());
        for (size_t i = 0; i < samples.size(); ++i) {
            if (!samples[i].is_number()) bad("tabulated samples must be numbers");
            values[Eigen::Index(i)] = samples[i].get<double>();
        }
        return gp::make_tabulated(values, require_number(spec, "kernel", "step"));
    }
    bad("unknown kernel type \"" + type + "\"");
}

json kernel_echo(const json& spec) {
    // construction already validated the fields; echo them as given
    return spec;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(e.what());
    }
    if (!doc.is_object()) throw ParseError("config root must be a JSON object");

    RunConfig cfg;
    check_keys(doc, "the config root",
               {"command", "kernel", "geometry", "modes", "roots", "time", "grid", "xi",
                "snapshots", "certify", "stability", "out", "threads"});

    if (!doc.contains("command") || !doc["command"].is_string())
        bad("a string \"command\" is required");
    cfg.command = doc["command"].get<std::string>();
    const bool known_command = cfg.command == "spectrum" || cfg.command == "kernel" ||
                               cfg.command == "roots" || cfg.command == "simulate" ||
                               cfg.command == "certify" || cfg.command == "stability";
    if (!known_command) bad("unknown command \"" + cfg.command + "\"");

    if (doc.contains("kernel")) {
        cfg.kernel = parse_kernel(doc["kernel"]);
        cfg.kernel_given = true;
    }
    const bool needs_kernel = cfg.command == "kernel" || cfg.command == "roots" ||
                              cfg.command == "simulate" || cfg.command == "certify";
    if (needs_kernel && !cfg.kernel_given)
        bad("command \"" + cfg.command + "\" requires a \"kernel\" block");

    if (doc.contains("geometry")) {
        const auto& g = doc["geometry"];
        if (!g.is_object()) bad("\"geometry\" must be an object");
        check_keys(g, "geometry", {"R"});
        cfg.R = number_or(g, "geometry", "R", cfg.R);
    }
    if (!(cfg.R > 0.0)) bad("geometry.R must be positive");

    if (doc.contains("modes")) {
        const auto& m = doc["modes"];
        if (!m.is_object()) bad("\"modes\" must be an object");
        check_keys(m, "modes", {"m_max", "n_max"});
        cfg.m_max = integer_or(m, "modes", "m_max", cfg.m_max);
        cfg.n_max = integer_or(m, "modes", "n_max", cfg.n_max);
    }
    if (cfg.m_max < 0 || cfg.n_max < 1) bad("modes.m_max must be >= 0 and modes.n_max >= 1");

    if (doc.contains("roots")) {
        const auto& r = doc["roots"];
        if (!r.is_object()) bad("\"roots\" must be an object");
        check_keys(r, "roots", {"m", "n_lo", "n_hi", "target"});
        cfg.roots_m = integer_or(r, "roots", "m", cfg.roots_m);
        cfg.roots_n_lo = integer_or(r, "roots", "n_lo", cfg.roots_n_lo);
        cfg.roots_n_hi = integer_or(r, "roots", "n_hi", cfg.roots_n_hi);
        if (r.contains("target")) {
            const auto& t = r["target"];
            if (!t.is_array() || t.size() != 2 || !t[0].is_number() || !t[1].is_number())
                bad("roots.target must be a [re, im] number pair");
            cfg.target = gp::Complex(t[0].get<double>(), t[1].get<double>());
            cfg.target_auto = false;
        }
    }
    if (cfg.roots_m < 0) bad("roots.m must be >= 0");
    if (cfg.roots_n_lo < 1 || cfg.roots_n_hi < cfg.roots_n_lo)
        bad("roots.n_lo / roots.n_hi must satisfy 1 <= n_lo <= n_hi");

    if (doc.contains("time")) {
        const auto& t = doc["time"];
        if (!t.is_object()) bad("\"time\" must be an object");
        check_keys(t, "time", {"T", "h"});
        cfg.T = number_or(t, "time", "T", cfg.T);
        cfg.h = number_or(t, "time", "h", cfg.h);
    }
    if (!(cfg.T > 0.0)) bad("time.T must be positive");
    if (cfg.h < 0.0) bad("time.h must be positive (or omitted for the default)");

    if (doc.contains("grid")) {
        const auto& g = doc["grid"];
        if (!g.is_object()) bad("\"grid\" must be an object");
        check_keys(g, "grid", {"n_alpha", "radial_points", "radial_panels"});
        cfg.n_alpha = integer_or(g, "grid", "n_alpha", cfg.n_alpha);
        cfg.radial_points = integer_or(g, "grid", "radial_points", cfg.radial_points);
        cfg.radial_panels = integer_or(g, "grid", "radial_panels", cfg.radial_panels);
    }
    if (cfg.n_alpha < 4 || cfg.radial_points < 2 || cfg.radial_panels < 1)
        bad("grid sizes out of range");

    if (doc.contains("xi")) {
        const auto& x = doc["xi"];
        if (!x.is_object()) bad("\"xi\" must be an object");
        check_keys(x, "xi", {"modes"});
        if (!x.contains("modes") || !x["modes"].is_array() || x["modes"].empty())
            bad("xi.modes must be a non-empty array");
        for (const auto& entry : x["modes"]) {
            if (!entry.is_array() || entry.size() != 4 || !entry[0].is_number_integer() ||
                !entry[1].is_number_integer() || !entry[2].is_number() || !entry[3].is_number())
                bad("each xi.modes entry must be [m, n, re, im]");
            ModeCoefficient mc;
            mc.m = entry[0].get<int>();
            mc.n = entry[1].get<int>();
            mc.value = gp::Complex(entry[2].get<double>(), entry[3].get<double>());
            if (mc.m < 0 || mc.n < 1) bad("xi.modes indices out of range");
            cfg.xi.push_back(mc);
        }
    } else {
        cfg.xi.push_back(ModeCoefficient{});
    }

    if (doc.contains("snapshots")) {
        const auto& s = doc["snapshots"];
        if (!s.is_array()) bad("\"snapshots\" must be an array of times");
        for (const auto& v : s) {
            if (!v.is_number()) bad("snapshot times must be numbers");
            cfg.snapshots.push_back(v.get<double>());
        }
        cfg.snapshots_given = true;
    } else {
        cfg.snapshots = {0.0, cfg.T};
    }

    if (doc.contains("certify")) {
        const auto& c = doc["certify"];
        if (!c.is_object()) bad("\"certify\" must be an object");
        check_keys(c, "certify", {"T", "schedule", "thresholds"});
        cfg.certify_T = number_or(c, "certify", "T", cfg.certify_T);
        if (c.contains("schedule")) {
            if (!c["schedule"].is_array() || c["schedule"].empty())
                bad("certify.schedule must be a non-empty array");
            cfg.schedule.clear();
            for (const auto& v : c["schedule"]) {
                if (!v.is_number_integer()) bad("certify.schedule entries must be integers");
                cfg.schedule.push_back(v.get<int>());
            }
        }
        if (c.contains("thresholds")) {
            const auto& t = c["thresholds"];
            if (!t.is_object()) bad("certify.thresholds must be an object");
            check_keys(t, "certify.thresholds",
                       {"cluster_eps", "obstruction_growth", "unobstructed_bound", "cutoff_rel"});
            cfg.thresholds.cluster_eps =
                number_or(t, "certify.thresholds", "cluster_eps", cfg.thresholds.cluster_eps);
            cfg.thresholds.obstruction_growth = number_or(
                t, "certify.thresholds", "obstruction_growth", cfg.thresholds.obstruction_growth);
            cfg.thresholds.unobstructed_bound = number_or(
                t, "certify.thresholds", "unobstructed_bound", cfg.thresholds.unobstructed_bound);
            cfg.thresholds.cutoff_rel =
                number_or(t, "certify.thresholds", "cutoff_rel", cfg.thresholds.cutoff_rel);
        }
    }
    if (!(cfg.certify_T > 0.0)) bad("certify.T must be positive");

    if (doc.contains("stability")) {
        const auto& s = doc["stability"];
        if (!s.is_object()) bad("\"stability\" must be an object");
        check_keys(s, "stability",
                   {"alpha", "gamma", "q_min", "q_max", "q_steps", "omega_sq", "convention"});
        cfg.alpha = number_or(s, "stability", "alpha", cfg.alpha);
        cfg.gamma = number_or(s, "stability", "gamma", cfg.gamma);
        cfg.q_min = number_or(s, "stability", "q_min", cfg.q_min);
        cfg.q_max = number_or(s, "stability", "q_max", cfg.q_max);
        cfg.q_steps = integer_or(s, "stability", "q_steps", cfg.q_steps);
        if (s.contains("omega_sq")) {
            if (!s["omega_sq"].is_array() || s["omega_sq"].empty())
                bad("stability.omega_sq must be a non-empty array");
            cfg.omega_sq.clear();
            for (const auto& v : s["omega_sq"]) {
                if (!v.is_number()) bad("stability.omega_sq entries must be numbers");
                cfg.omega_sq.push_back(v.get<double>());
            }
        }
        if (s.contains("convention")) {
            if (!s["convention"].is_string()) bad("stability.convention must be a string");
            const std::string conv = s["convention"].get<std::string>();
            if (conv == "relaxing")
                cfg.convention = gp::CouplingSign::relaxing;
            else if (conv == "reinforcing")
                cfg.convention = gp::CouplingSign::reinforcing;
            else
                bad("stability.convention must be \"relaxing\" or \"reinforcing\"");
        }
    }
    if (!(cfg.alpha > 0.0) || !(cfg.gamma > 0.0)) bad("stability.alpha and stability.gamma must be positive");
    if (cfg.q_steps < 2) bad("stability.q_steps must be >= 2");
    if (!(cfg.q_max > cfg.q_min)) bad("stability.q_max must exceed stability.q_min");
    for (double w : cfg.omega_sq)
        if (!(w > 0.0)) bad("stability.omega_sq entries must be positive");

    if (doc.contains("out")) {
        if (!doc["out"].is_string()) bad("\"out\" must be a string");
        cfg.out = doc["out"].get<std::string>();
        if (cfg.out.empty()) bad("\"out\" must not be empty");
    }
    cfg.threads = integer_or(doc, "the config root", "threads", cfg.threads);
    if (cfg.threads < 0) bad("threads must be >= 0 (0 means all cores)");

    // Echo with every default made explicit, so the manifest round-trips.
    json echo;
    echo["command"] = cfg.command;
    if (cfg.kernel_given) echo["kernel"] = kernel_echo(doc["kernel"]);
    echo["geometry"] = {{"R", cfg.R}};
    echo["modes"] = {{"m_max", cfg.m_max}, {"n_max", cfg.n_max}};
    echo["roots"] = {{"m", cfg.roots_m}, {"n_lo", cfg.roots_n_lo}, {"n_hi", cfg.roots_n_hi}};
    if (!cfg.target_auto) echo["roots"]["target"] = {cfg.target.real(), cfg.target.imag()};
    echo["time"] = {{"T", cfg.T}, {"h", cfg.h}};
    echo["grid"] = {{"n_alpha", cfg.n_alpha},
                    {"radial_points", cfg.radial_points},
                    {"radial_panels", cfg.radial_panels}};
    {
        json xi_modes = json::array();
        for (const auto& mc : cfg.xi)
            xi_modes.push_back({mc.m, mc.n, mc.value.real(), mc.value.imag()});
        echo["xi"] = {{"modes", xi_modes}};
    }
    echo["snapshots"] = cfg.snapshots;
    echo["certify"] = {{"T", cfg.certify_T},
                       {"schedule", cfg.schedule},
                       {"thresholds",
                        {{"cluster_eps", cfg.thresholds.cluster_eps},
                         {"obstruction_growth", cfg.thresholds.obstruction_growth},
                         {"unobstructed_bound", cfg.thresholds.unobstructed_bound},
                         {"cutoff_rel", cfg.thresholds.cutoff_rel}}}};
    echo["stability"] = {
        {"alpha", cfg.alpha},
        {"gamma", cfg.gamma},
        {"q_min", cfg.q_min},
        {"q_max", cfg.q_max},
        {"q_steps", cfg.q_steps},
        {"omega_sq", cfg.omega_sq},
        {"convention",
         cfg.convention == gp::CouplingSign::relaxing ? "relaxing" : "reinforcing"}};
    echo["out"] = cfg.out;
    echo["threads"] = cfg.threads;
    cfg.echo = std::move(echo);
    return cfg;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

}  // namespace runner
