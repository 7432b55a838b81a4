#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "w2bayes/signal.hpp"

namespace w2b {

/// Shortest decimal form that round-trips a double ("%.17g"), locale-free.
std::string format_double(double x);

/// Header plus rows of numbers; NaN cells are written empty and read back as NaN.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const;
};

void write_csv(std::ostream& os, const CsvTable& table);
void write_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv(std::istream& is);
CsvTable read_csv(const std::filesystem::path& path);

/// Trace label as a CSV header token, e.g. "s0:r3:c0".
std::string label_token(const TraceLabel& label);
TraceLabel parse_label_token(const std::string& token);

/// First column "time", then one column per trace.
CsvTable gather_to_csv(const Gather& g);
Gather gather_from_csv(const CsvTable& table);

/// {"grid": {"t0", "dt", "n"}, "traces": [{"source", "receiver", "component", "values"}]}
nlohmann::json gather_to_json(const Gather& g);
Gather gather_from_json(const nlohmann::json& j);

}  // namespace w2b
