#include "bagstab/report.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "bagstab/error.hpp"
#include "bagstab/svg.hpp"

namespace bagstab {

namespace {

template <class T>
nlohmann::json optional_json(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

template <class T>
std::optional<T> optional_from(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << contents;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json to_json(const StabilityReport& r, bool include_timing) {
  nlohmann::json j;
  j["experiment"] = r.experiment;
  j["n"] = r.n;
  j["d"] = r.d;
  j["m"] = r.m;
  j["B"] = optional_json(r.bags);
  j["scheme"] = r.scheme;
  j["space"] = r.space;
  j["seed"] = r.seed;
  j["inclusion_probability"] = r.inclusion_probability;
  j["beta_sq_base"] = r.beta_sq_base;
  j["beta_sq_bagged"] = r.beta_sq_bagged;
  j["theorem"] = r.theorem;
  j["bound_inputs"] = r.bound_inputs;
  j["bound"] = optional_json(r.bound);
  j["bound_satisfied"] = optional_json(r.bound_satisfied);
  j["tail_dominated"] = optional_json(r.tail_dominated);
  j["dist_base"] = r.dist_base;
  j["dist_bagged"] = r.dist_bagged;
  j["tail_curve"] = {{"epsilon", r.epsilons},
                     {"delta_base", r.delta_base},
                     {"delta_bagged", r.delta_bagged},
                     {"delta_bound", r.delta_bound}};
  j["notes"] = r.notes;
  if (include_timing) j["runtime_seconds"] = r.runtime_seconds;
  return j;
}

StabilityReport report_from_json(const nlohmann::json& j) {
  StabilityReport r;
  r.experiment = j.at("experiment").get<std::string>();
  r.n = j.at("n").get<std::size_t>();
  r.d = j.at("d").get<std::size_t>();
  r.m = j.at("m").get<std::size_t>();
  r.bags = optional_from<std::size_t>(j, "B");
  r.scheme = j.at("scheme").get<std::string>();
  r.space = j.at("space").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.inclusion_probability = j.at("inclusion_probability").get<double>();
  r.beta_sq_base = j.at("beta_sq_base").get<double>();
  r.beta_sq_bagged = j.at("beta_sq_bagged").get<double>();
  r.theorem = j.at("theorem").get<std::string>();
  r.bound_inputs = j.at("bound_inputs");
  r.bound = optional_from<double>(j, "bound");
  r.bound_satisfied = optional_from<bool>(j, "bound_satisfied");
  r.tail_dominated = optional_from<bool>(j, "tail_dominated");
  r.dist_base = j.at("dist_base").get<std::vector<double>>();
  r.dist_bagged = j.at("dist_bagged").get<std::vector<double>>();
  const auto& t = j.at("tail_curve");
  r.epsilons = t.at("epsilon").get<std::vector<double>>();
  r.delta_base = t.at("delta_base").get<std::vector<double>>();
  r.delta_bagged = t.at("delta_bagged").get<std::vector<double>>();
  r.delta_bound = t.at("delta_bound").get<std::vector<double>>();
  r.notes = j.at("notes").get<std::vector<std::string>>();
  if (j.contains("runtime_seconds")) r.runtime_seconds = j.at("runtime_seconds").get<double>();
  return r;
}

void emit_report(const StabilityReport& r, const std::filesystem::path& dir) {
  if (r.dist_base.size() != r.dist_bagged.size()) throw ShapeError("emit_report: distance lists differ in length");
  std::filesystem::create_directories(dir);
  write_file(dir / "report.json", to_json(r).dump(2) + "\n");

  std::string loo = "i,dist_base,dist_bagged\n";
  for (std::size_t i = 0; i < r.dist_base.size(); ++i) {
    loo += std::to_string(i) + "," + format_real(r.dist_base[i]) + "," + format_real(r.dist_bagged[i]) + "\n";
  }
  write_file(dir / "loo_distances.csv", loo);

  std::string tail = "epsilon,delta_base,delta_bagged,delta_bound\n";
  for (std::size_t k = 0; k < r.epsilons.size(); ++k) {
    tail += format_real(r.epsilons[k]) + "," + format_real(r.delta_base[k]) + "," + format_real(r.delta_bagged[k]) +
            "," + (r.delta_bound.empty() ? std::string() : format_real(r.delta_bound[k])) + "\n";
  }
  write_file(dir / "tail_curve.csv", tail);

  const std::string title = "Experiment " + r.experiment;
  write_file(dir / "histogram.svg", histogram_svg(r.dist_base, r.dist_bagged, title + ": leave-one-out distances"));
  write_file(dir / "tail.svg",
             tail_svg(r.epsilons, r.delta_base, r.delta_bagged, r.delta_bound, title + ": tail stability"));
}

}  // namespace bagstab
