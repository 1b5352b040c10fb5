#include "alpha_patch/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace alpha_patch::io {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

namespace {

void append_vec(std::string& out, Vec2 v) {
  out += '[';
  out += format_double(v.x);
  out += ',';
  out += format_double(v.y);
  out += ']';
}

void require_finite(double v, const char* field) {
  if (!std::isfinite(v)) throw std::invalid_argument(std::string("snapshot field '") + field + "' is not finite");
}

double number_field(const nlohmann::json& j, const char* field) {
  if (!j.is_number()) throw std::invalid_argument(std::string("snapshot field '") + field + "' must be a number");
  const double v = j.get<double>();
  require_finite(v, field);
  return v;
}

Vec2 pair_field(const nlohmann::json& j, const char* field) {
  if (!j.is_array() || j.size() != 2)
    throw std::invalid_argument(std::string("snapshot field '") + field + "' must hold [x, y] pairs");
  return {number_field(j[0], field), number_field(j[1], field)};
}

std::string csv_number(double v) { return format_double(v); }

}  // namespace

std::string snapshot_json(const FlowState& state, double alpha) {
  const std::size_t n = state.curve.size();
  std::string out = "{\"n\":" + std::to_string(n) + ",\"alpha\":" + format_double(alpha) +
                    ",\"time\":" + format_double(state.time) + ",\n\"nodes\":[";
  for (std::size_t j = 0; j < n; ++j) {
    if (j) out += ',';
    append_vec(out, state.curve[j]);
  }
  out += "],\n\"g\":[";
  for (std::size_t j = 0; j < n; ++j) {
    if (j) out += ',';
    out += format_double(state.g_evolved[j]);
  }
  out += "],\n\"tangent\":[";
  for (std::size_t j = 0; j < n; ++j) {
    if (j) out += ',';
    append_vec(out, state.T_evolved[j]);
  }
  out += "],\n\"scheme\":\"";
  out += to_string(state.curve.scheme());
  out += "\"}\n";
  return out;
}

Snapshot parse_snapshot(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("snapshot is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw std::invalid_argument("snapshot must be a JSON object");
  if (!doc.contains("nodes")) throw std::invalid_argument("snapshot field 'nodes' is missing");
  const auto& jn = doc["nodes"];
  if (!jn.is_array()) throw std::invalid_argument("snapshot field 'nodes' must be an array");
  VectorField nodes;
  nodes.reserve(jn.size());
  for (const auto& p : jn) nodes.push_back(pair_field(p, "nodes"));
  if (doc.contains("n")) {
    if (!doc["n"].is_number_unsigned() || doc["n"].get<std::size_t>() != nodes.size())
      throw std::invalid_argument("snapshot field 'n' does not match the number of nodes");
  }

  DiffScheme scheme = DiffScheme::spectral;
  if (doc.contains("scheme")) {
    if (!doc["scheme"].is_string()) throw std::invalid_argument("snapshot field 'scheme' must be a string");
    try {
      scheme = diff_scheme_from_string(doc["scheme"].get<std::string>());
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument("snapshot field 'scheme' must be \"spectral\" or \"fd4\"");
    }
  }

  Snapshot snap{make_flow_state(ClosedCurve::create(std::move(nodes), scheme), 0.0), 0.0};
  if (doc.contains("time")) snap.state.time = number_field(doc["time"], "time");
  if (doc.contains("alpha")) snap.alpha = number_field(doc["alpha"], "alpha");
  const std::size_t n = snap.state.curve.size();
  if (doc.contains("g")) {
    const auto& jg = doc["g"];
    if (!jg.is_array() || jg.size() != n) throw std::invalid_argument("snapshot field 'g' must hold n numbers");
    for (std::size_t j = 0; j < n; ++j) snap.state.g_evolved[j] = number_field(jg[j], "g");
  }
  if (doc.contains("tangent")) {
    const auto& jt = doc["tangent"];
    if (!jt.is_array() || jt.size() != n) throw std::invalid_argument("snapshot field 'tangent' must hold n pairs");
    for (std::size_t j = 0; j < n; ++j) snap.state.T_evolved[j] = pair_field(jt[j], "tangent");
  }
  return snap;
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw std::runtime_error("failed writing '" + path.string() + "'");
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_snapshot(const std::filesystem::path& path, const FlowState& state, double alpha) {
  write_text_file(path, snapshot_json(state, alpha));
}

Snapshot read_snapshot(const std::filesystem::path& path) { return parse_snapshot(read_text_file(path)); }

std::string snapshot_filename(std::size_t index) {
  std::string digits = std::to_string(index);
  if (digits.size() < 6) digits.insert(0, 6 - digits.size(), '0');
  return "snapshot_" + digits + ".json";
}

void write_diagnostics_csv(std::ostream& out, std::span<const Diagnostics> rows) {
  out << "time,area,length,min_spacing,consistency_residual,tangent_norm_dev,holder_beta_hat\n";
  for (const auto& d : rows)
    out << csv_number(d.time) << ',' << csv_number(d.area) << ',' << csv_number(d.length) << ','
        << csv_number(d.min_spacing) << ',' << csv_number(d.consistency_residual) << ','
        << csv_number(d.tangent_norm_dev) << ',' << csv_number(d.holder_beta_hat) << '\n';
}

void write_stability_csv(std::ostream& out, const StabilityReport& r) {
  out << "time,delta,delta_gamma,delta_g,delta_T\n";
  for (std::size_t k = 0; k < r.times.size(); ++k)
    out << csv_number(r.times[k]) << ',' << csv_number(r.delta[k]) << ',' << csv_number(r.delta_gamma[k]) << ','
        << csv_number(r.delta_g[k]) << ',' << csv_number(r.delta_T[k]) << '\n';
}

std::string fit_summary_json(const StabilityReport& r) {
  nlohmann::ordered_json j;
  j["C"] = r.fitted ? nlohmann::ordered_json(r.fitted_C) : nlohmann::ordered_json(nullptr);
  j["residual"] = r.fitted ? nlohmann::ordered_json(r.fit_residual) : nlohmann::ordered_json(nullptr);
  j["holds_pointwise"] = r.holds_pointwise;
  j["fitted"] = r.fitted;
  j["truncated"] = r.truncated;
  j["in_hypothesis"] = r.in_hypothesis;
  j["note"] = r.note;
  return j.dump(2) + "\n";
}

void write_estimates_csv(std::ostream& out, std::span<const EstimateReport> rows) {
  out << "estimate_id,alpha,beta_or_p,fitted_exponent,predicted_exponent,empirical_constant,refinement_stability\n";
  for (const auto& r : rows)
    out << r.estimate_id << ',' << csv_number(r.alpha) << ',' << csv_number(r.beta_or_p) << ','
        << csv_number(r.fitted_exponent) << ',' << csv_number(r.predicted_exponent) << ','
        << csv_number(r.empirical_constant) << ',' << csv_number(r.refinement_stability) << '\n';
}

void write_convergence_csv(std::ostream& out, const ConvergenceStudy& study) {
  auto order = [](const std::optional<double>& o) { return o ? csv_number(*o) : std::string(); };
  out << "n,dt,velocity_error,area_drift,consistency_residual,velocity_order,area_order,consistency_order,aborted\n";
  for (const auto& l : study.levels)
    out << l.n << ',' << csv_number(l.dt) << ',' << csv_number(l.velocity_error) << ',' << csv_number(l.area_drift)
        << ',' << csv_number(l.consistency_residual) << ',' << order(l.velocity_order) << ','
        << order(l.area_order) << ',' << order(l.consistency_order) << ',' << (l.aborted ? 1 : 0) << '\n';
}

}  // namespace alpha_patch::io
