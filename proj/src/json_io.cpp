#include "hirsch/json_io.hpp"

#include <ctime>
#include <fstream>

namespace hirsch {

namespace {

void require(bool ok, Errc code, const std::string& msg) {
  if (!ok) throw Error(code, msg);
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

std::vector<double> number_array(const nlohmann::json& j,
                                 const std::string& key) {
  require(j.contains(key) && j[key].is_array(), Errc::io_error,
          "missing array field '" + key + "'");
  std::vector<double> out;
  out.reserve(j[key].size());
  for (const auto& x : j[key]) {
    require(x.is_number(), Errc::io_error,
            "field '" + key + "' holds a non-numeric entry");
    out.push_back(x.get<double>());
  }
  return out;
}

int int_field(const nlohmann::json& j, const std::string& key) {
  require(j.contains(key) && j[key].is_number_integer(), Errc::io_error,
          "missing integer field '" + key + "'");
  return j[key].get<int>();
}

}  // namespace

nlohmann::json measure_to_json(const CircleMeasure& mu) {
  return nlohmann::json{{"level", mu.level()}, {"weights", mu.weights()}};
}

CircleMeasure measure_from_json(const nlohmann::json& j) {
  return CircleMeasure::from_weights(int_field(j, "level"),
                                     number_array(j, "weights"));
}

void save_measure(const CircleMeasure& mu, const std::string& path) {
  write_json(measure_to_json(mu), path);
}

CircleMeasure load_measure(const std::string& path) {
  return measure_from_json(load_json(path));
}

GFunction table_from_json(const nlohmann::json& j) {
  if (j.contains("interpolation")) {
    require(j["interpolation"].is_string() &&
                j["interpolation"].get<std::string>() == "reciprocal-linear",
            Errc::io_error,
            "unsupported interpolation; only reciprocal-linear tables load");
  }
  return GFunction::tabulated(int_field(j, "level"),
                              number_array(j, "values"));
}

GFunction load_g_table(const std::string& path) {
  return table_from_json(load_json(path));
}

GFunction parse_g_spec(const std::string& spec) {
  if (spec == "const2") return GFunction::constant2();
  if (spec.rfind("sine:", 0) == 0) {
    const std::string rest = spec.substr(5);
    require(rest.rfind("a=", 0) == 0, Errc::invalid_argument,
            "sine spec must read sine:a=<amplitude>");
    std::size_t used = 0;
    double amp = 0.0;
    try {
      amp = std::stod(rest.substr(2), &used);
    } catch (const std::exception&) {
      throw Error(Errc::invalid_argument, "unreadable sine amplitude");
    }
    require(used == rest.size() - 2, Errc::invalid_argument,
            "trailing junk after sine amplitude");
    return GFunction::sine(amp);
  }
  if (spec.rfind("table:", 0) == 0) return load_g_table(spec.substr(6));
  throw Error(Errc::invalid_argument,
              "branch weight spec must be const2, sine:a=<amplitude> or "
              "table:<path>");
}

MetricFamily parse_family_spec(const std::string& spec,
                               double default_slit_depth) {
  std::string g_part = spec;
  double eps = default_slit_depth;
  const std::size_t at = spec.rfind(",eps=");
  if (at != std::string::npos) {
    g_part = spec.substr(0, at);
    const std::string rest = spec.substr(at + 5);
    std::size_t used = 0;
    try {
      eps = std::stod(rest, &used);
    } catch (const std::exception&) {
      throw Error(Errc::invalid_argument, "unreadable slit depth");
    }
    require(used == rest.size(), Errc::invalid_argument,
            "trailing junk after slit depth");
  }
  return MetricFamily::create(parse_g_spec(g_part), eps);
}

nlohmann::json report_envelope(nlohmann::json report) {
  return nlohmann::json{{"meta", {{"generated_at", utc_timestamp()}}},
                        {"report", std::move(report)}};
}

void write_json(const nlohmann::json& j, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), Errc::io_error, "cannot open " + path + " for writing");
  out << j.dump(2) << "\n";
  require(out.good(), Errc::io_error, "write to " + path + " failed");
}

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), Errc::io_error, "cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::io_error, std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace hirsch
