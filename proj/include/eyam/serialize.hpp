#pragma once

// JSON and CSV output with a fixed 17-significant-digit number format, so
// repeated runs give byte-identical files.

#include <string>
#include <vector>

#include "json.hpp"

#include "eyam/domain.hpp"
#include "eyam/prescribe.hpp"
#include "eyam/spectral.hpp"

namespace eyam {

using Json = nlohmann::ordered_json;

// "%.17g"; infinities as "+inf"/"-inf", NaN as "nan".
std::string format_double(double x);

// Pretty printer over Json using format_double for floats; +-inf and NaN
// become strings.
std::string dump_json(const Json& j);

Json number(double x);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
  std::string str() const;
};

void write_text(const std::string& path, const std::string& text);

// {"n", "nodes", "phi", "R", "H"}
Json metric_to_json(const Metric& m);
// Builds the metric on `grid`; nodes and n must match it.
Metric metric_from_json(const Json& j, const GridPtr& grid);

Json to_json(const InvariantReport& r, bool with_minimizer = false);
Json to_json(const SolveReport& r);

}  // namespace eyam
