#include "eyam/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace eyam {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "+inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json number(double x) {
  if (!std::isfinite(x)) return format_double(x);
  return x;
}

namespace {

void quote(std::string& out, const std::string& s) {
  out += Json(s).dump();
}

void walk(std::string& out, const Json& j, int depth) {
  const std::string pad(2 * (depth + 1), ' ');
  const std::string close(2 * depth, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        quote(out, k);
        out += ": ";
        walk(out, v, depth + 1);
      }
      out += "\n" + close + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        walk(out, j[i], depth + 1);
      }
      out += "\n" + close + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double x = j.get<double>();
      if (std::isfinite(x)) out += format_double(x);
      else quote(out, format_double(x));
      return;
    }
    default:
      out += j.dump();
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

Json vec(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

std::vector<double> read_vec(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) throw std::invalid_argument(std::string("metric: missing array '") + key + "'");
  std::vector<double> v;
  for (const auto& x : j.at(key)) {
    if (!x.is_number()) throw std::invalid_argument(std::string("metric: non-numeric entry in '") + key + "'");
    v.push_back(x.get<double>());
  }
  return v;
}

}  // namespace

std::string dump_json(const Json& j) {
  std::string out;
  walk(out, j, 0);
  out += "\n";
  return out;
}

std::string CsvTable::str() const {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + csv_field(header[i]);
  out += "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_field(row[i]);
    out += "\n";
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

Json metric_to_json(const Metric& m) {
  Json j;
  j["n"] = m.dims().n;
  j["nodes"] = vec(m.grid->nodes);
  j["phi"] = vec(m.phi);
  j["R"] = vec(m.R);
  j["H"] = number(m.H);
  return j;
}

Metric metric_from_json(const Json& j, const GridPtr& grid) {
  if (!j.is_object()) throw std::invalid_argument("metric: expected an object");
  for (const auto& [k, v] : j.items()) {
    (void)v;
    if (k != "n" && k != "nodes" && k != "phi" && k != "R" && k != "H")
      throw std::invalid_argument("metric: unknown key '" + k + "'");
  }
  if (!j.contains("n") || !j.at("n").is_number_integer()) throw std::invalid_argument("metric: missing 'n'");
  if (j.at("n").get<int>() != grid->dims.n) throw std::invalid_argument("metric: n differs from grid");
  const auto nodes = read_vec(j, "nodes");
  if (nodes.size() != grid->size()) throw std::invalid_argument("metric: node count differs from grid");
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (std::abs(nodes[i] - grid->nodes[i]) > 1e-12 * grid->nodes[i])
      throw std::invalid_argument("metric: nodes differ from grid");
  Metric m;
  m.grid = grid;
  m.phi = read_vec(j, "phi");
  m.R = read_vec(j, "R");
  if (m.phi.size() != nodes.size() || m.R.size() != nodes.size())
    throw std::invalid_argument("metric: field length differs from grid");
  if (!j.contains("H") || !j.at("H").is_number()) throw std::invalid_argument("metric: missing 'H'");
  m.H = j.at("H").get<double>();
  validate_metric(m);
  return m;
}

Json to_json(const InvariantReport& r, bool with_minimizer) {
  Json j;
  j["value"] = number(r.value);
  j["sign"] = to_string(r.sign);
  j["iterations"] = r.iterations;
  j["residual"] = number(r.residual);
  j["scale"] = number(r.scale);
  if (with_minimizer && r.minimizer) j["minimizer"] = vec(r.minimizer->values);
  return j;
}

Json to_json(const SolveReport& r) {
  Json j;
  j["converged"] = r.converged;
  j["gate"] = to_string(r.gate);
  if (!r.gate_reason.empty()) j["gate_reason"] = r.gate_reason;
  if (r.gate_sign) j["gate_sign"] = to_string(*r.gate_sign);
  j["ordering_ok"] = r.ordering_ok;
  j["iterations"] = r.iterations;
  j["residual_interior"] = number(r.residual_interior);
  j["residual_boundary"] = number(r.residual_boundary);
  j["tolerance"] = number(r.tolerance);
  j["failed_stage"] = r.failed_stage;
  j["message"] = r.message;
  if (r.cutoff_index) j["cutoff_index"] = *r.cutoff_index;
  Json st = Json::array();
  for (const auto& s : r.stages) {
    Json e;
    e["name"] = s.name;
    e["q"] = number(s.q);
    e["r"] = number(s.r);
    e["converged"] = s.converged;
    e["iterations"] = s.iterations;
    e["residual_interior"] = number(s.residual_interior);
    e["residual_boundary"] = number(s.residual_boundary);
    e["norm_w12"] = number(s.norm_w12);
    e["message"] = s.message;
    st.push_back(e);
  }
  j["stages"] = st;
  j["f_history"] = vec(r.f_history);
  if (r.readback) {
    Json rb;
    rb["H"] = number(r.readback->H);
    rb["error_R"] = number(r.readback->error_R);
    rb["error_H"] = number(r.readback->error_H);
    rb["tol_R"] = number(r.readback->tol_R);
    rb["tol_H"] = number(r.readback->tol_H);
    rb["ok"] = r.readback->ok;
    j["readback"] = rb;
  }
  return j;
}

}  // namespace eyam
