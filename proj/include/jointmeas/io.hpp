// Result persistence and experiment config files.
//
// CSV schema (one header row, fixed column order, 12 significant digits,
// byte-stable for identical inputs):
//   theta_deg, alpha_theory, beta_theory,
//   alpha_exp, alpha_exp_err, beta_exp, beta_exp_err,
//   delta_product, delta_product_err, delta_product_run_err,
//   sin_sq_2theta,
//   var_product_sharp, var_product_sharp_err,
//   var_product_joint, var_product_joint_err,
//   A_j_bar, A_j_bar_err, B_j_bar, B_j_bar_err,
//   sharp_a, sharp_a_err, sharp_b, sharp_b_err,
//   sharp_c, sharp_c_err, sharp_d, sharp_d_err,
//   status
// JSON output mirrors the same fields per row. Fields of rows flagged
// degenerate/infeasible that were not simulated render as "nan" (CSV) or
// null (JSON).

#pragma once

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "jointmeas/errors.hpp"
#include "jointmeas/experiment.hpp"

namespace jointmeas {

enum class OutputFormat { Csv, Json };

inline OutputFormat parse_format(const std::string& s) {
    if (s == "csv") return OutputFormat::Csv;
    if (s == "json") return OutputFormat::Json;
    throw DomainError("unknown output format: " + s);
}

namespace detail {

inline std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace detail

inline constexpr const char* kCsvHeader =
    "theta_deg,alpha_theory,beta_theory,"
    "alpha_exp,alpha_exp_err,beta_exp,beta_exp_err,"
    "delta_product,delta_product_err,delta_product_run_err,"
    "sin_sq_2theta,"
    "var_product_sharp,var_product_sharp_err,"
    "var_product_joint,var_product_joint_err,"
    "A_j_bar,A_j_bar_err,B_j_bar,B_j_bar_err,"
    "sharp_a,sharp_a_err,sharp_b,sharp_b_err,"
    "sharp_c,sharp_c_err,sharp_d,sharp_d_err,"
    "status";

inline void write_csv(const std::vector<ResultRow>& rows, std::ostream& out) {
    if (rows.empty()) throw DomainError("no result rows to write");
    out << kCsvHeader << '\n';
    for (const ResultRow& r : rows) {
        const double cells[] = {
            r.theta_deg,           r.alpha_theory,
            r.beta_theory,         r.alpha_exp.value,
            r.alpha_exp.std_err,   r.beta_exp.value,
            r.beta_exp.std_err,    r.delta_product.value,
            r.delta_product.std_err, r.delta_product_run_err,
            r.sin_sq_2theta,       r.var_product_sharp.value,
            r.var_product_sharp.std_err, r.var_product_joint.value,
            r.var_product_joint.std_err, r.a_j_bar.value,
            r.a_j_bar.std_err,     r.b_j_bar.value,
            r.b_j_bar.std_err,     r.sharp_a.value,
            r.sharp_a.std_err,     r.sharp_b.value,
            r.sharp_b.std_err,     r.sharp_c.value,
            r.sharp_c.std_err,     r.sharp_d.value,
            r.sharp_d.std_err};
        bool first = true;
        for (double v : cells) {
            if (!first) out << ',';
            out << detail::format_value(v);
            first = false;
        }
        out << ',' << to_string(r.status) << '\n';
    }
}

namespace detail {

inline nlohmann::ordered_json estimate_json(const EstimateResult& e) {
    nlohmann::ordered_json j;
    j["value"] = e.value;
    j["std_err"] = e.std_err;
    return j;
}

}  // namespace detail

inline nlohmann::ordered_json rows_to_json(const std::vector<ResultRow>& rows) {
    if (rows.empty()) throw DomainError("no result rows to write");
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const ResultRow& r : rows) {
        nlohmann::ordered_json j;
        j["theta_deg"] = r.theta_deg;
        j["alpha_theory"] = r.alpha_theory;
        j["beta_theory"] = r.beta_theory;
        j["alpha_exp"] = detail::estimate_json(r.alpha_exp);
        j["beta_exp"] = detail::estimate_json(r.beta_exp);
        j["delta_product"] = detail::estimate_json(r.delta_product);
        j["delta_product_run_err"] = r.delta_product_run_err;
        j["sin_sq_2theta"] = r.sin_sq_2theta;
        j["var_product_sharp"] = detail::estimate_json(r.var_product_sharp);
        j["var_product_joint"] = detail::estimate_json(r.var_product_joint);
        j["A_j_bar"] = detail::estimate_json(r.a_j_bar);
        j["B_j_bar"] = detail::estimate_json(r.b_j_bar);
        j["sharp_a"] = detail::estimate_json(r.sharp_a);
        j["sharp_b"] = detail::estimate_json(r.sharp_b);
        j["sharp_c"] = detail::estimate_json(r.sharp_c);
        j["sharp_d"] = detail::estimate_json(r.sharp_d);
        j["status"] = to_string(r.status);
        arr.push_back(std::move(j));
    }
    return arr;
}

inline void write_json(const std::vector<ResultRow>& rows, std::ostream& out) {
    out << rows_to_json(rows).dump(2) << '\n';
}

inline void emit(const std::vector<ResultRow>& rows, OutputFormat format,
                 std::ostream& out) {
    if (format == OutputFormat::Csv) {
        write_csv(rows, out);
    } else {
        write_json(rows, out);
    }
}

// Write rows to a file; the file is replaced atomically enough for replay
// comparisons (truncate + write + close).
inline void emit(const std::vector<ResultRow>& rows, OutputFormat format,
                 const std::string& destination) {
    if (rows.empty()) throw DomainError("no result rows to write");
    std::ofstream out(destination, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + destination);
    emit(rows, format, out);
    out.flush();
    if (!out) throw IoError("write failed: " + destination);
}

// ---------------------------------------------------------------------------
// Experiment config files (JSON)
// ---------------------------------------------------------------------------

inline nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg) {
    nlohmann::ordered_json j;
    j["name"] = cfg.name;
    j["a_axis"] = {cfg.a_axis.x, cfg.a_axis.y, cfg.a_axis.z};
    j["input_state"] = {cfg.input_state.x, cfg.input_state.y,
                        cfg.input_state.z};
    j["azimuth_phi_deg"] = cfg.azimuth_phi_deg;
    j["theta_deg_list"] = cfg.theta_deg_list;
    j["p"] = cfg.p;
    j["shots_per_run"] = cfg.shots_per_run;
    j["runs"] = cfg.runs;
    j["master_seed"] = cfg.master_seed.master;
    j["seed_stream"] = cfg.master_seed.stream;
    return j;
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig cfg;
    cfg.name = j.value("name", cfg.name);
    if (j.contains("a_axis")) {
        cfg.a_axis = {j["a_axis"].at(0), j["a_axis"].at(1), j["a_axis"].at(2)};
    }
    if (j.contains("input_state")) {
        cfg.input_state = {j["input_state"].at(0), j["input_state"].at(1),
                           j["input_state"].at(2)};
    }
    cfg.azimuth_phi_deg = j.value("azimuth_phi_deg", cfg.azimuth_phi_deg);
    if (j.contains("theta_deg_list")) {
        cfg.theta_deg_list = j["theta_deg_list"].get<std::vector<double>>();
    }
    cfg.p = j.value("p", cfg.p);
    cfg.shots_per_run = j.value("shots_per_run", cfg.shots_per_run);
    cfg.runs = j.value("runs", cfg.runs);
    cfg.master_seed.master = j.value("master_seed", cfg.master_seed.master);
    cfg.master_seed.stream = j.value("seed_stream", cfg.master_seed.stream);
    cfg.validate();
    return cfg;
}

inline void save_config(const ExperimentConfig& cfg, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << config_to_json(cfg).dump(2) << '\n';
    if (!out) throw IoError("write failed: " + path);
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("malformed config " + path + ": " + e.what());
    }
    return config_from_json(j);
}

}  // namespace jointmeas
