#pragma once

// Config-driven batch front end: parse a JSON run specification, execute
// scenarios across a worker pool, and emit CSV/JSON series for external
// plotting.  The thin CLI binary in tools/ only does argument parsing; every
// command is a testable function here.
//
// Config schema (versioned top-level key "telewm_config": 1):
//
//   { "telewm_config": 1,
//     "scenarios": [ {
//         "name":   "adc_markovian",          (unique, filename-safe)
//         "family": "ADC",                    (ADC|NM_ADC|RTN|OUN|PLN|CADC)
//         "params": { "gamma": 0.2 },         (per family, see load_model)
//         "theta":  0.1,                      (optional, default pi/4)
//         "w": 0.1, "wr": 0.99,               (optional, default 0)
//         "mode": "one_sided",                (optional; CADC defaults to two_sided)
//         "t_grid": {"start":0,"stop":10,"points":501},  (evolve/grid/blp)
//         "theta_grid": {...},                (grid only)
//         "bracket": [0.0, 20.0],             (find-zero-dev only)
//         "dt": 1e-3,                         (blp only, optional)
//         "seed": 42,                         (oracle; mandatory there)
//         "n_samples": 200000,                (oracle, optional)
//         "t_oracle": 0.0                     (oracle: evolve resource to this
//                                              time first; optional, default
//                                              pure resource state)
//     } ] }

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "telewm/experiments.hpp"

namespace telewm {

// ---------------------------------------------------------------------------
// Logging (stderr, level from TELEWM_LOG: debug|info|warn|error; default warn)
// ---------------------------------------------------------------------------

enum class LogLevel { Debug = 0, Info = 1, Warn = 2, Error = 3 };

inline LogLevel log_threshold() {
    static const LogLevel level = [] {
        const char* env = std::getenv("TELEWM_LOG");
        if (env == nullptr) return LogLevel::Warn;
        std::string v(env);
        for (char& c : v) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (v == "debug") return LogLevel::Debug;
        if (v == "info") return LogLevel::Info;
        if (v == "warn" || v == "warning") return LogLevel::Warn;
        if (v == "error") return LogLevel::Error;
        std::cerr << "[telewm][warn] unknown TELEWM_LOG value '" << v << "', using warn\n";
        return LogLevel::Warn;
    }();
    return level;
}

inline void log(LogLevel level, const std::string& msg) {
    if (level < log_threshold()) return;
    static const char* names[] = {"debug", "info", "warn", "error"};
    std::cerr << "[telewm][" << names[static_cast<int>(level)] << "] " << msg << "\n";
}

// ---------------------------------------------------------------------------
// Run configuration
// ---------------------------------------------------------------------------

enum class OutputFormat { CSV, JSON };

struct ScenarioSpec {
    Scenario scenario;
    std::optional<std::pair<double, double>> bracket;
    std::optional<std::vector<double>> theta_grid;
    double dt = 1e-3;
    int n_samples = 200000;
    std::optional<double> t_oracle;
};

struct RunConfig {
    int version = 1;
    std::vector<ScenarioSpec> scenarios;
};

namespace detail {

inline double require_number(const nlohmann::json& obj, const std::string& key,
                             const std::string& where) {
    if (!obj.contains(key) || !obj[key].is_number())
        throw ConfigError(where + ": missing or non-numeric field '" + key + "'");
    return obj[key].get<double>();
}

inline std::vector<double> load_grid(const nlohmann::json& spec, const std::string& where) {
    if (!spec.is_object()) throw ConfigError(where + ": grid must be an object");
    const double start = require_number(spec, "start", where);
    const double stop = require_number(spec, "stop", where);
    if (!spec.contains("points") || !spec["points"].is_number_integer())
        throw ConfigError(where + ": missing integer field 'points'");
    const int points = spec["points"].get<int>();
    if (points < 1) throw ConfigError(where + ": points must be >= 1");
    if (!(stop >= start)) throw ConfigError(where + ": stop must be >= start");
    return linspace(start, stop, points);
}

inline NoiseModel load_model(const nlohmann::json& sc, const std::string& where) {
    if (!sc.contains("family") || !sc["family"].is_string())
        throw ConfigError(where + ": missing string field 'family'");
    const std::string family = sc["family"].get<std::string>();
    const nlohmann::json params = sc.value("params", nlohmann::json::object());
    if (!params.is_object()) throw ConfigError(where + ": 'params' must be an object");
    try {
        if (family == "ADC") return NoiseModel::adc(require_number(params, "gamma", where));
        if (family == "NM_ADC")
            return NoiseModel::nm_adc(require_number(params, "gamma0", where),
                                      require_number(params, "k", where));
        if (family == "RTN")
            return NoiseModel::rtn(require_number(params, "a", where),
                                   require_number(params, "gamma", where));
        if (family == "OUN")
            return NoiseModel::oun(require_number(params, "a", where),
                                   require_number(params, "gamma", where));
        if (family == "PLN")
            return NoiseModel::pln(require_number(params, "a", where),
                                   require_number(params, "gamma", where));
        if (family == "CADC")
            return NoiseModel::cadc(require_number(params, "gamma", where),
                                    require_number(params, "q", where));
    } catch (const InvalidParams& e) {
        throw ConfigError(where + ": " + e.what());
    }
    throw ConfigError(where + ": unknown family '" + family +
                      "' (expected ADC, NM_ADC, RTN, OUN, PLN or CADC)");
}

inline bool filename_safe(const std::string& name) {
    if (name.empty() || name.size() > 128) return false;
    for (char c : name)
        if (std::isalnum(static_cast<unsigned char>(c)) == 0 && c != '_' && c != '-' && c != '.')
            return false;
    return name != "." && name != "..";
}

}  // namespace detail

// Parse and validate a config document.  Field errors raise ConfigError with
// the scenario index and field name in the message.
inline RunConfig parse_config(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ConfigError("config: top level must be an object");
    if (!doc.contains("telewm_config") || !doc["telewm_config"].is_number_integer())
        throw ConfigError("config: missing integer version key 'telewm_config'");
    RunConfig cfg;
    cfg.version = doc["telewm_config"].get<int>();
    if (cfg.version != 1)
        throw ConfigError("config: unsupported version " + std::to_string(cfg.version));
    if (!doc.contains("scenarios") || !doc["scenarios"].is_array() || doc["scenarios"].empty())
        throw ConfigError("config: 'scenarios' must be a non-empty array");

    std::set<std::string> names;
    int index = 0;
    for (const nlohmann::json& sc : doc["scenarios"]) {
        const std::string where = "scenario[" + std::to_string(index) + "]";
        if (!sc.is_object()) throw ConfigError(where + ": must be an object");
        ScenarioSpec spec;

        if (!sc.contains("name") || !sc["name"].is_string())
            throw ConfigError(where + ": missing string field 'name'");
        spec.scenario.name = sc["name"].get<std::string>();
        if (!detail::filename_safe(spec.scenario.name))
            throw ConfigError(where + ": name must use only [A-Za-z0-9_.-]");
        if (!names.insert(spec.scenario.name).second)
            throw ConfigError(where + ": duplicate name '" + spec.scenario.name + "'");

        spec.scenario.model = detail::load_model(sc, where);

        spec.scenario.theta = sc.value("theta", M_PI / 4.0);
        spec.scenario.cfg.w = sc.value("w", 0.0);
        spec.scenario.cfg.wr = sc.value("wr", 0.0);
        const bool correlated = spec.scenario.model.family == Family::CADC;
        std::string mode = sc.value("mode", correlated ? "two_sided" : "one_sided");
        if (mode == "one_sided")
            spec.scenario.cfg.mode = Side::ONE_SIDED;
        else if (mode == "two_sided")
            spec.scenario.cfg.mode = Side::TWO_SIDED;
        else
            throw ConfigError(where + ": mode must be 'one_sided' or 'two_sided'");
        if (correlated != (spec.scenario.cfg.mode == Side::TWO_SIDED))
            throw ConfigError(where + (correlated
                                           ? ": CADC requires mode 'two_sided'"
                                           : ": single-qubit families require mode 'one_sided'"));

        if (!(spec.scenario.theta > 0.0 && spec.scenario.theta < M_PI / 2.0))
            throw ConfigError(where + ": theta must lie in (0, pi/2)");
        if (!(spec.scenario.cfg.w >= 0.0 && spec.scenario.cfg.w < 1.0))
            throw ConfigError(where + ": w must lie in [0,1)");
        if (!(spec.scenario.cfg.wr >= 0.0 && spec.scenario.cfg.wr < 1.0))
            throw ConfigError(where + ": wr must lie in [0,1)");

        if (sc.contains("t_grid"))
            spec.scenario.t_grid = detail::load_grid(sc["t_grid"], where + ".t_grid");
        if (sc.contains("theta_grid"))
            spec.theta_grid = detail::load_grid(sc["theta_grid"], where + ".theta_grid");
        if (sc.contains("bracket")) {
            const nlohmann::json& br = sc["bracket"];
            if (!br.is_array() || br.size() != 2 || !br[0].is_number() || !br[1].is_number())
                throw ConfigError(where + ": bracket must be [t_lo, t_hi]");
            spec.bracket = std::make_pair(br[0].get<double>(), br[1].get<double>());
            if (!(spec.bracket->first >= 0.0) || !(spec.bracket->second > spec.bracket->first))
                throw ConfigError(where + ": bracket requires 0 <= t_lo < t_hi");
        }
        if (sc.contains("seed")) {
            if (!sc["seed"].is_number_unsigned() && !sc["seed"].is_number_integer())
                throw ConfigError(where + ": seed must be a non-negative integer");
            const auto seed = sc["seed"].get<long long>();
            if (seed < 0) throw ConfigError(where + ": seed must be a non-negative integer");
            spec.scenario.seed = static_cast<std::uint64_t>(seed);
        }
        spec.dt = sc.value("dt", 1e-3);
        if (!(spec.dt > 0.0)) throw ConfigError(where + ": dt must be > 0");
        spec.n_samples = sc.value("n_samples", 200000);
        if (spec.n_samples < 1000) throw ConfigError(where + ": n_samples must be >= 1000");
        if (sc.contains("t_oracle")) {
            spec.t_oracle = sc["t_oracle"].get<double>();
            if (!(*spec.t_oracle >= 0.0)) throw ConfigError(where + ": t_oracle must be >= 0");
        }

        cfg.scenarios.push_back(std::move(spec));
        ++index;
    }
    return cfg;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
    return parse_config(doc);
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

// 17 significant digits: lossless double round-trip, bit-exact across
// platforms so golden files are portable.
inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file: " + path.string());
    out << content;
    if (!out) throw IoError("failed writing output file: " + path.string());
}

// Minimal CSV reader (no quoting: the emitters never produce quoted fields).
inline std::vector<std::vector<std::string>> read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open CSV file: " + path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::vector<std::string> fields;
        std::string field;
        std::istringstream ls(line);
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (!line.empty() && line.back() == ',') fields.emplace_back();
        rows.push_back(std::move(fields));
    }
    return rows;
}

inline std::string series_to_csv(const MetricSeries& series) {
    std::ostringstream out;
    out << "t,concurrence,coherence_l1,fidelity,fidelity_deviation,success_prob\n";
    for (const MetricRecord& r : series.records)
        out << fmt_double(r.t) << ',' << fmt_double(r.concurrence) << ','
            << fmt_double(r.coherence_l1) << ',' << fmt_double(r.fidelity) << ','
            << fmt_double(r.fidelity_deviation) << ',' << fmt_double(r.success_prob) << '\n';
    return out.str();
}

inline nlohmann::json scenario_to_json(const Scenario& s) {
    nlohmann::json j{{"name", s.name},
                     {"family", family_name(s.model.family)},
                     {"theta", s.theta},
                     {"w", s.cfg.w},
                     {"wr", s.cfg.wr},
                     {"mode", s.cfg.mode == Side::TWO_SIDED ? "two_sided" : "one_sided"}};
    switch (s.model.family) {
        case Family::ADC: j["params"] = {{"gamma", s.model.gamma}}; break;
        case Family::CADC: j["params"] = {{"gamma", s.model.gamma}, {"q", s.model.q}}; break;
        case Family::NM_ADC: j["params"] = {{"gamma0", s.model.gamma0}, {"k", s.model.k}}; break;
        default: j["params"] = {{"a", s.model.a}, {"gamma", s.model.gamma}}; break;
    }
    if (s.seed) j["seed"] = *s.seed;
    return j;
}

inline std::string series_to_json(const MetricSeries& series) {
    nlohmann::json j{{"scenario", scenario_to_json(series.scenario)},
                     {"records", nlohmann::json::array()}};
    for (const MetricRecord& r : series.records)
        j["records"].push_back({{"t", r.t},
                                {"concurrence", r.concurrence},
                                {"coherence_l1", r.coherence_l1},
                                {"fidelity", r.fidelity},
                                {"fidelity_deviation", r.fidelity_deviation},
                                {"success_prob", r.success_prob}});
    return j.dump(2) + "\n";
}

// Parse an emitted CSV series back into records (round-trip support).
inline std::vector<MetricRecord> parse_series_csv(const std::string& path) {
    const auto rows = read_csv(path);
    if (rows.empty() || rows[0] != std::vector<std::string>{"t", "concurrence", "coherence_l1",
                                                            "fidelity", "fidelity_deviation",
                                                            "success_prob"})
        throw IoError("parse_series_csv: unexpected header in " + path);
    std::vector<MetricRecord> records;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].size() != 6) throw IoError("parse_series_csv: bad row in " + path);
        MetricRecord r;
        r.t = std::strtod(rows[i][0].c_str(), nullptr);
        r.concurrence = std::strtod(rows[i][1].c_str(), nullptr);
        r.coherence_l1 = std::strtod(rows[i][2].c_str(), nullptr);
        r.fidelity = std::strtod(rows[i][3].c_str(), nullptr);
        r.fidelity_deviation = std::strtod(rows[i][4].c_str(), nullptr);
        r.success_prob = std::strtod(rows[i][5].c_str(), nullptr);
        records.push_back(r);
    }
    return records;
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

struct CommandOptions {
    std::filesystem::path out_dir = ".";
    OutputFormat format = OutputFormat::CSV;
    int workers = 1;
};

namespace detail {

inline const char* format_ext(OutputFormat f) { return f == OutputFormat::CSV ? ".csv" : ".json"; }

// Render every scenario (possibly in parallel), then write all outputs from
// this single thread in config order so runs are byte-identical regardless of
// worker count.
inline void render_and_write(const RunConfig& cfg, const CommandOptions& opt,
                             const std::function<std::string(const ScenarioSpec&)>& render) {
    std::filesystem::create_directories(opt.out_dir);
    std::vector<std::string> outputs(cfg.scenarios.size());
    parallel_for(static_cast<int>(cfg.scenarios.size()), opt.workers, [&](int i) {
        const ScenarioSpec& spec = cfg.scenarios[static_cast<std::size_t>(i)];
        log(LogLevel::Debug, "rendering scenario '" + spec.scenario.name + "'");
        outputs[static_cast<std::size_t>(i)] = render(spec);
    });
    for (std::size_t i = 0; i < cfg.scenarios.size(); ++i) {
        const std::filesystem::path path =
            opt.out_dir / (cfg.scenarios[i].scenario.name + format_ext(opt.format));
        write_file(path, outputs[i]);
        log(LogLevel::Info, "wrote " + path.string());
    }
}

// Single-report commands (find-zero-dev, oracle): one row per scenario,
// written to <out>/<report_name>.<ext>.
struct ReportRow {
    std::vector<std::pair<std::string, std::string>> csv_fields;  // (column, value)
    nlohmann::json json_value;
};

inline void write_report(const RunConfig& cfg, const CommandOptions& opt,
                         const std::string& report_name,
                         const std::function<ReportRow(const ScenarioSpec&)>& compute) {
    std::filesystem::create_directories(opt.out_dir);
    std::vector<ReportRow> rows(cfg.scenarios.size());
    parallel_for(static_cast<int>(cfg.scenarios.size()), opt.workers, [&](int i) {
        rows[static_cast<std::size_t>(i)] = compute(cfg.scenarios[static_cast<std::size_t>(i)]);
    });
    const std::filesystem::path path = opt.out_dir / (report_name + format_ext(opt.format));
    if (opt.format == OutputFormat::CSV) {
        std::ostringstream out;
        for (std::size_t c = 0; c < rows[0].csv_fields.size(); ++c)
            out << (c ? "," : "") << rows[0].csv_fields[c].first;
        out << '\n';
        for (const ReportRow& row : rows) {
            for (std::size_t c = 0; c < row.csv_fields.size(); ++c)
                out << (c ? "," : "") << row.csv_fields[c].second;
            out << '\n';
        }
        write_file(path, out.str());
    } else {
        nlohmann::json j = nlohmann::json::array();
        for (const ReportRow& row : rows) j.push_back(row.json_value);
        write_file(path, j.dump(2) + "\n");
    }
    log(LogLevel::Info, "wrote " + path.string());
}

}  // namespace detail

// evolve: one metric series file per scenario.
inline void cmd_evolve(const RunConfig& cfg, const CommandOptions& opt) {
    for (const ScenarioSpec& spec : cfg.scenarios)
        if (spec.scenario.t_grid.empty())
            throw ConfigError("evolve: scenario '" + spec.scenario.name + "' needs a t_grid");
    detail::render_and_write(cfg, opt, [&](const ScenarioSpec& spec) {
        const MetricSeries series = time_sweep(spec.scenario);
        return opt.format == OutputFormat::CSV ? series_to_csv(series) : series_to_json(series);
    });
}

// grid: (theta, t) fidelity/deviation table per scenario.
inline void cmd_grid(const RunConfig& cfg, const CommandOptions& opt) {
    for (const ScenarioSpec& spec : cfg.scenarios) {
        if (!spec.theta_grid)
            throw ConfigError("grid: scenario '" + spec.scenario.name + "' needs a theta_grid");
        if (spec.scenario.t_grid.empty())
            throw ConfigError("grid: scenario '" + spec.scenario.name + "' needs a t_grid");
    }
    detail::render_and_write(cfg, opt, [&](const ScenarioSpec& spec) {
        const std::vector<GridRow> rows =
            grid_sweep(*spec.theta_grid, spec.scenario.t_grid, spec.scenario.cfg,
                       spec.scenario.model);
        if (opt.format == OutputFormat::CSV) {
            std::ostringstream out;
            out << "theta,t,fidelity,fidelity_deviation\n";
            for (const GridRow& r : rows)
                out << fmt_double(r.theta) << ',' << fmt_double(r.t) << ','
                    << fmt_double(r.fidelity) << ',' << fmt_double(r.fidelity_deviation) << '\n';
            return out.str();
        }
        nlohmann::json j{{"scenario", scenario_to_json(spec.scenario)},
                         {"rows", nlohmann::json::array()}};
        for (const GridRow& r : rows)
            j["rows"].push_back({{"theta", r.theta},
                                 {"t", r.t},
                                 {"fidelity", r.fidelity},
                                 {"fidelity_deviation", r.fidelity_deviation}});
        return j.dump(2) + "\n";
    });
}

// find-zero-dev: one report with the zero-deviation search verdict per
// scenario.
inline void cmd_find_zero_dev(const RunConfig& cfg, const CommandOptions& opt) {
    for (const ScenarioSpec& spec : cfg.scenarios)
        if (!spec.bracket)
            throw ConfigError("find-zero-dev: scenario '" + spec.scenario.name +
                              "' needs a bracket");
    detail::write_report(cfg, opt, "find_zero_dev", [&](const ScenarioSpec& spec) {
        const ZeroDevResult res = find_zero_deviation(spec.scenario.theta, spec.scenario.cfg,
                                                      spec.scenario.model, *spec.bracket);
        detail::ReportRow row;
        const bool found = res.t_star.has_value();
        row.csv_fields = {
            {"scenario", spec.scenario.name},
            {"family", family_name(spec.scenario.model.family)},
            {"found", found ? "true" : "false"},
            {"t_star", found ? fmt_double(*res.t_star) : ""},
            {"dev_at_star", found ? fmt_double(res.dev_at_star) : ""},
            {"min_dev", fmt_double(res.min_dev)},
            {"min_dev_t", fmt_double(res.min_dev_t)},
        };
        row.json_value = {{"scenario", spec.scenario.name},
                          {"family", family_name(spec.scenario.model.family)},
                          {"found", found},
                          {"min_dev", res.min_dev},
                          {"min_dev_t", res.min_dev_t}};
        if (found) {
            row.json_value["t_star"] = *res.t_star;
            row.json_value["dev_at_star"] = res.dev_at_star;
        }
        return row;
    });
}

// blp: trace-distance / sigma series per scenario.
inline void cmd_blp(const RunConfig& cfg, const CommandOptions& opt) {
    for (const ScenarioSpec& spec : cfg.scenarios)
        if (spec.scenario.t_grid.empty())
            throw ConfigError("blp: scenario '" + spec.scenario.name + "' needs a t_grid");
    detail::render_and_write(cfg, opt, [&](const ScenarioSpec& spec) {
        const std::vector<BlpRow> rows =
            blp_series(spec.scenario.model, spec.scenario.cfg, spec.scenario.t_grid, spec.dt);
        if (opt.format == OutputFormat::CSV) {
            std::ostringstream out;
            out << "t,distance,sigma,sigma_plus\n";
            for (const BlpRow& r : rows)
                out << fmt_double(r.t) << ',' << fmt_double(r.distance) << ','
                    << fmt_double(r.sigma) << ',' << fmt_double(r.sigma_plus) << '\n';
            return out.str();
        }
        nlohmann::json j{{"scenario", scenario_to_json(spec.scenario)},
                         {"nonmarkovianity", blp_nonmarkovianity(rows)},
                         {"rows", nlohmann::json::array()}};
        for (const BlpRow& r : rows)
            j["rows"].push_back({{"t", r.t},
                                 {"distance", r.distance},
                                 {"sigma", r.sigma},
                                 {"sigma_plus", r.sigma_plus}});
        return j.dump(2) + "\n";
    });
}

// oracle: Monte-Carlo teleportation fidelity vs the correlation-matrix
// formula, one report row per scenario.
inline void cmd_oracle(const RunConfig& cfg, const CommandOptions& opt) {
    for (const ScenarioSpec& spec : cfg.scenarios)
        if (!spec.scenario.seed)
            throw ConfigError("oracle: scenario '" + spec.scenario.name +
                              "' needs an explicit seed");
    detail::write_report(cfg, opt, "oracle", [&](const ScenarioSpec& spec) {
        TwoQubitState resource = bell_type({spec.scenario.theta});
        if (spec.t_oracle)
            resource = run_protocol(resource, spec.scenario.cfg, spec.scenario.model, *spec.t_oracle)
                           .state;
        const McResult mc =
            mc_teleportation_fidelity(resource, spec.n_samples, *spec.scenario.seed);
        const double formula = fidelity(resource);
        const double diff = std::abs(mc.mean - formula);
        const bool pass = diff <= 3.0 * mc.std_error + 1e-12;
        detail::ReportRow row;
        row.csv_fields = {
            {"scenario", spec.scenario.name},
            {"mc_mean", fmt_double(mc.mean)},
            {"mc_std_error", fmt_double(mc.std_error)},
            {"fidelity_formula", fmt_double(formula)},
            {"abs_diff", fmt_double(diff)},
            {"pass", pass ? "true" : "false"},
        };
        row.json_value = {{"scenario", spec.scenario.name}, {"mc_mean", mc.mean},
                          {"mc_std_error", mc.std_error},  {"fidelity_formula", formula},
                          {"abs_diff", diff},              {"pass", pass}};
        return row;
    });
}

// Dispatch helper used by the binary and by tests.  Returns the process exit
// code: 0 success, 1 config/setup error, 2 numeric failure.
inline int run_command(const std::string& command, const std::string& config_path,
                       const CommandOptions& opt) {
    try {
        if (opt.workers < 1) throw ConfigError("workers must be >= 1");
        const RunConfig cfg = load_config(config_path);
        if (command == "evolve")
            cmd_evolve(cfg, opt);
        else if (command == "grid")
            cmd_grid(cfg, opt);
        else if (command == "find-zero-dev")
            cmd_find_zero_dev(cfg, opt);
        else if (command == "blp")
            cmd_blp(cfg, opt);
        else if (command == "oracle")
            cmd_oracle(cfg, opt);
        else
            throw ConfigError("unknown command '" + command + "'");
        return 0;
    } catch (const ConfigError& e) {
        log(LogLevel::Error, e.what());
        return 1;
    } catch (const IoError& e) {
        log(LogLevel::Error, e.what());
        return 1;
    } catch (const Error& e) {
        log(LogLevel::Error, e.what());
        return 2;
    }
}

}  // namespace telewm
