#include "w2bayes/signal_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "w2bayes/errors.hpp"

namespace w2b {

std::string format_double(double x) {
  if (std::isnan(x)) return "";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw ValidationError("csv: no column named '" + name + "'");
}

void write_csv(std::ostream& os, const CsvTable& table) {
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i) os << ',';
    os << table.header[i];
  }
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      os << format_double(row[i]);
    }
    os << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ValidationError("cannot open " + path.string() + " for writing");
  write_csv(os, table);
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_cell(const std::string& cell, std::size_t line_no) {
  if (cell.empty()) return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
    throw ValidationError("csv line " + std::to_string(line_no) + ": bad number '" + cell + "'");
  }
  return v;
}

}  // namespace

CsvTable read_csv(std::istream& is) {
  CsvTable t;
  std::string line;
  if (!std::getline(is, line)) throw ValidationError("csv: missing header row");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  t.header = split_line(line);
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split_line(line);
    if (cells.size() != t.header.size()) {
      throw ValidationError("csv line " + std::to_string(line_no) + ": expected " +
                            std::to_string(t.header.size()) + " cells");
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(parse_cell(c, line_no));
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ValidationError("cannot open " + path.string());
  return read_csv(is);
}

std::string label_token(const TraceLabel& label) {
  return "s" + std::to_string(label.source) + ":r" + std::to_string(label.receiver) + ":c" +
         std::to_string(label.component);
}

TraceLabel parse_label_token(const std::string& token) {
  TraceLabel l;
  char s = 0, r = 0, c = 0, colon1 = 0, colon2 = 0;
  std::istringstream ss(token);
  ss >> s >> l.source >> colon1 >> r >> l.receiver >> colon2 >> c >> l.component;
  if (!ss || s != 's' || r != 'r' || c != 'c' || colon1 != ':' || colon2 != ':') {
    throw ValidationError("bad trace label token '" + token + "'");
  }
  return l;
}

CsvTable gather_to_csv(const Gather& g) {
  CsvTable t;
  t.header.push_back("time");
  for (const auto& l : g.labels()) t.header.push_back(label_token(l));
  const auto& grid = g.grid();
  t.rows.resize(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    auto& row = t.rows[k];
    row.reserve(g.size() + 1);
    row.push_back(grid.time(k));
    for (const auto& tr : g.traces()) row.push_back(tr[k]);
  }
  return t;
}

Gather gather_from_csv(const CsvTable& table) {
  if (table.header.size() < 2 || table.header[0] != "time") {
    throw ValidationError("gather csv: first column must be 'time'");
  }
  const std::size_t n = table.rows.size();
  if (n < 2) throw ValidationError("gather csv: at least two time samples required");
  const double t0 = table.rows.front()[0];
  const TimeGrid grid = make_grid(t0, table.rows.back()[0], n);
  std::vector<Trace> traces;
  std::vector<TraceLabel> labels;
  for (std::size_t c = 1; c < table.header.size(); ++c) {
    std::vector<double> v(n);
    for (std::size_t k = 0; k < n; ++k) v[k] = table.rows[k][c];
    traces.emplace_back(grid, std::move(v));
    labels.push_back(parse_label_token(table.header[c]));
  }
  return Gather(std::move(traces), std::move(labels));
}

nlohmann::json gather_to_json(const Gather& g) {
  nlohmann::json j;
  j["grid"] = {{"t0", g.grid().t0()}, {"dt", g.grid().dt()}, {"n", g.grid().size()}};
  auto& arr = j["traces"] = nlohmann::json::array();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto& l = g.label(i);
    const auto v = g.trace(i).values();
    arr.push_back({{"source", l.source},
                   {"receiver", l.receiver},
                   {"component", l.component},
                   {"values", std::vector<double>(v.begin(), v.end())}});
  }
  return j;
}

Gather gather_from_json(const nlohmann::json& j) {
  try {
    const auto& jg = j.at("grid");
    TimeGrid grid(jg.at("t0").get<double>(), jg.at("dt").get<double>(),
                  jg.at("n").get<std::size_t>());
    std::vector<Trace> traces;
    std::vector<TraceLabel> labels;
    for (const auto& jt : j.at("traces")) {
      traces.emplace_back(grid, jt.at("values").get<std::vector<double>>());
      labels.push_back({jt.at("source").get<int>(), jt.at("receiver").get<int>(),
                        jt.at("component").get<int>()});
    }
    return Gather(std::move(traces), std::move(labels));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("gather json: ") + e.what());
  }
}

}  // namespace w2b
