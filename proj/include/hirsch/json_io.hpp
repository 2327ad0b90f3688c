#pragma once

#include <string>

#include <json.hpp>

#include "hirsch/circle_dynamics.hpp"
#include "hirsch/foliation.hpp"

namespace hirsch {

nlohmann::json measure_to_json(const CircleMeasure& mu);
CircleMeasure measure_from_json(const nlohmann::json& j);

void save_measure(const CircleMeasure& mu, const std::string& path);
CircleMeasure load_measure(const std::string& path);

// Table files hold node values of g: {"level": k, "values": [...]} with an
// optional "interpolation" field that must read "reciprocal-linear", the
// only scheme the tables implement.
GFunction table_from_json(const nlohmann::json& j);
GFunction load_g_table(const std::string& path);

// Branch weight specifications: "const2", "sine:a=<amplitude>" or
// "table:<path>".
GFunction parse_g_spec(const std::string& spec);

// Family specifications: a branch weight spec optionally followed by
// ",eps=<slit depth>".
MetricFamily parse_family_spec(const std::string& spec,
                               double default_slit_depth = 0.05);

// Wraps a report body as {"meta": {"generated_at": ...}, "report": body}.
// Everything run-dependent stays under meta so report subtrees compare
// bytewise across runs with equal inputs.
nlohmann::json report_envelope(nlohmann::json report);

void write_json(const nlohmann::json& j, const std::string& path);
nlohmann::json load_json(const std::string& path);

}  // namespace hirsch
