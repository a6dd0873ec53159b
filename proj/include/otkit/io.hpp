#pragma once

#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "otkit/construct.hpp"
#include "otkit/errors.hpp"
#include "otkit/point.hpp"
#include "otkit/search.hpp"

namespace otkit {

inline constexpr const char* kVersion = "0.1.0";

using json = nlohmann::json;

// Point file schema: {"dim": d, "count": m, "points": [["num/den", ...]],
// "manifest": {...}}. Coordinates are exact lowest-terms fraction
// strings, so serialize -> parse -> serialize is the identity.
inline json points_to_json(const PointSequence& seq, json manifest = json::object()) {
  json pts = json::array();
  for (const Point& p : seq.pts) {
    json row = json::array();
    for (const Rational& c : p.x) row.push_back(c.to_fraction_string());
    pts.push_back(std::move(row));
  }
  json out;
  out["dim"] = seq.dim;
  out["count"] = seq.size();
  out["points"] = std::move(pts);
  out["manifest"] = std::move(manifest);
  return out;
}

inline PointSequence points_from_json(const json& j) {
  if (!j.contains("dim") || !j.contains("points"))
    throw argument_error("point file: missing dim/points");
  int dim = j.at("dim").get<int>();
  PointSequence seq(dim);
  for (const json& row : j.at("points")) {
    Point p;
    p.x.reserve(row.size());
    for (const json& c : row) p.x.push_back(Rational::from_string(c.get<std::string>()));
    seq.push_back(std::move(p));
  }
  if (j.contains("count") && j.at("count").get<uint64_t>() != seq.size())
    throw argument_error("point file: count does not match points");
  return seq;
}

inline std::string serialize_points(const PointSequence& seq, const json& manifest = json::object()) {
  return points_to_json(seq, manifest).dump(2) + "\n";
}

inline void write_point_file(const std::string& path, const PointSequence& seq,
                             const json& manifest = json::object()) {
  std::ofstream out(path);
  if (!out) throw argument_error("cannot open for writing: " + path);
  out << serialize_points(seq, manifest);
}

struct LoadedPoints {
  PointSequence points;
  json manifest;
};

inline LoadedPoints read_point_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw argument_error("cannot open: " + path);
  json j;
  in >> j;
  LoadedPoints lp{points_from_json(j), j.value("manifest", json::object())};
  return lp;
}

// Decimal CSV export; approximate by design and labeled as such.
inline void export_csv(std::ostream& out, const PointSequence& seq) {
  out << "# lossy decimal approximation; the JSON point file holds the exact rationals\n";
  for (const Point& p : seq.pts) {
    for (int j = 0; j < seq.dim; ++j) {
      if (j) out << ",";
      std::ostringstream cell;
      cell.precision(17);
      cell << p[static_cast<size_t>(j)].to_double();
      out << cell.str();
    }
    out << "\n";
  }
}

inline json check_record_to_json(const CheckRecord& r) {
  return json{{"status", r.status()}, {"checked", r.checked}, {"pass", r.pass}};
}

inline json certificate_to_json(const EpsilonCertificate& c) {
  return json{{"epsilon", c.epsilon.to_fraction_string()},
              {"order_agreement", check_record_to_json(c.order_agreement)},
              {"limit_identification", check_record_to_json(c.limit_identification)},
              {"coloring_fidelity", check_record_to_json(c.coloring_fidelity)}};
}

inline json level_record_to_json(const LevelRecord& r) {
  json j{{"dim", r.dim},
         {"base_size", r.base_size},
         {"size", r.size},
         {"general_position", r.general_position}};
  if (r.dim > 1) {
    j["epsilon"] = r.epsilon.to_fraction_string();
    j["identification_radius"] = r.identification_radius.to_fraction_string();
    j["certificate"] = certificate_to_json(r.cert);
    j["perturbed"] = r.perturbed;
    if (r.perturbed) j["eta"] = r.eta.to_fraction_string();
  }
  return j;
}

// Run manifests embed the command, its exact parameters and the
// per-level certificates, enough to reproduce the run byte for byte.
// Timing is deliberately kept out of the manifest (it would break
// reproducibility) and goes to the run summary on stderr instead.
inline json make_manifest(const std::string& command, json parameters) {
  json m;
  m["version"] = kVersion;
  m["command"] = command;
  m["parameters"] = std::move(parameters);
  return m;
}

inline json search_result_to_json(const SearchResult& r) {
  json j{{"found", r.found},
         {"nodes_explored", r.nodes},
         {"exhaustive", r.exhaustive}};
  if (r.found) j["witness"] = r.witness;
  return j;
}

}  // namespace otkit
