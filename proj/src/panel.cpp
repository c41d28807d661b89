#include "mscale/panel.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "mscale/error.hpp"

namespace mscale {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t pos = 0;
  while (true) {
    auto next = line.find(',', pos);
    if (next == std::string_view::npos) {
      cells.push_back(trim(line.substr(pos)));
      break;
    }
    cells.push_back(trim(line.substr(pos, next - pos)));
    pos = next + 1;
  }
  return cells;
}

template <typename Int>
bool parse_int(std::string_view s, Int& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

double parse_price(std::string_view cell, std::size_t line_no) {
  double v = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (cell.empty() || ec != std::errc{} || ptr != last)
    throw MalformedFile("line " + std::to_string(line_no) + ": cannot parse value '" +
                        std::string(cell) + "'");
  if (!std::isfinite(v))
    throw MalformedFile("line " + std::to_string(line_no) + ": non-finite value '" +
                        std::string(cell) + "'");
  return v;
}

NodeId parse_node_header(std::string_view cell) {
  NodeId node;
  auto at = cell.rfind('@');
  if (at != std::string_view::npos) {
    auto role = parse_role(cell.substr(at + 1));
    if (!role) throw MalformedFile("unknown component role in header '" + std::string(cell) + "'");
    node.role = *role;
    cell = cell.substr(0, at);
  }
  node.name = std::string(trim(cell));
  if (node.name.empty()) throw MalformedFile("empty node name in header");
  return node;
}

std::string node_header(const NodeId& node) {
  if (node.role == ComponentRole::OTHER) return node.name;
  return node.name + "@" + std::string(to_string(node.role));
}

void check_unique(const std::vector<NodeId>& nodes) {
  std::set<std::string> seen;
  for (const auto& n : nodes)
    if (!seen.insert(n.name).second) throw MalformedFile("duplicate node name '" + n.name + "'");
}

}  // namespace

std::string_view to_string(ComponentRole role) {
  switch (role) {
    case ComponentRole::MCC: return "MCC";
    case ComponentRole::MEC: return "MEC";
    case ComponentRole::MLC: return "MLC";
    case ComponentRole::LMP: return "LMP";
    case ComponentRole::OTHER: return "OTHER";
  }
  return "OTHER";
}

std::optional<ComponentRole> parse_role(std::string_view text) {
  for (auto r : {ComponentRole::MCC, ComponentRole::MEC, ComponentRole::MLC, ComponentRole::LMP,
                 ComponentRole::OTHER})
    if (text == to_string(r)) return r;
  return std::nullopt;
}

HourStamp parse_timestamp(std::string_view iso) {
  using namespace std::chrono;
  iso = trim(iso);
  auto bad = [&](const char* why) {
    return MalformedFile("bad timestamp '" + std::string(iso) + "': " + why);
  };
  // YYYY-MM-DD[T| ]HH[:MM[:SS]][Z|+HH:MM|-HH:MM]
  if (iso.size() < 13 || iso[4] != '-' || iso[7] != '-' || (iso[10] != 'T' && iso[10] != ' '))
    throw bad("expected YYYY-MM-DDTHH:MM:SS");
  int y = 0;
  unsigned mo = 0, d = 0, h = 0, mi = 0, sec = 0;
  if (!parse_int(iso.substr(0, 4), y) || !parse_int(iso.substr(5, 2), mo) ||
      !parse_int(iso.substr(8, 2), d) || !parse_int(iso.substr(11, 2), h))
    throw bad("non-numeric field");
  std::string_view rest = iso.substr(13);
  if (rest.size() >= 3 && rest[0] == ':') {
    if (!parse_int(rest.substr(1, 2), mi)) throw bad("minutes");
    rest.remove_prefix(3);
    if (rest.size() >= 3 && rest[0] == ':') {
      if (!parse_int(rest.substr(1, 2), sec)) throw bad("seconds");
      rest.remove_prefix(3);
    }
  }
  int offset_minutes = 0;
  if (rest == "Z" || rest.empty()) {
  } else if (rest.size() == 6 && (rest[0] == '+' || rest[0] == '-') && rest[3] == ':') {
    unsigned oh = 0, om = 0;
    if (!parse_int(rest.substr(1, 2), oh) || !parse_int(rest.substr(4, 2), om))
      throw bad("offset");
    offset_minutes = static_cast<int>(oh * 60 + om) * (rest[0] == '-' ? -1 : 1);
  } else {
    throw bad("trailing characters");
  }
  if (mi != 0 || sec != 0 || offset_minutes % 60 != 0) throw bad("not aligned to the hour");
  year_month_day ymd{year{y}, month{mo}, day{d}};
  if (!ymd.ok() || h > 23) throw bad("invalid date");
  auto days = sys_days{ymd}.time_since_epoch().count();
  return static_cast<HourStamp>(days) * 24 + h - offset_minutes / 60;
}

std::string format_timestamp(HourStamp hours) {
  using namespace std::chrono;
  auto days = hours >= 0 ? hours / 24 : -((-hours + 23) / 24);
  auto hour = hours - days * 24;
  year_month_day ymd{sys_days{std::chrono::days{days}}};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:00:00Z", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<long long>(hour));
  return buf;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

Panel::Panel(std::vector<NodeId> nodes, HourStamp start, std::size_t length,
             std::vector<double> values)
    : nodes_(std::move(nodes)), start_(start), length_(length), values_(std::move(values)) {
  if (nodes_.empty()) throw EmptyPanel("panel has no nodes");
  if (length_ < 2) throw EmptyPanel("panel needs at least 2 hourly samples");
  if (values_.size() != nodes_.size() * length_)
    throw MalformedFile("value count does not match nodes x length");
  for (const auto& n : nodes_)
    if (n.name.empty()) throw MalformedFile("node name must be nonempty");
  check_unique(nodes_);
}

Panel Panel::from_rows(std::vector<NodeId> nodes, HourStamp start,
                       const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw EmptyPanel("panel has no nodes");
  const std::size_t t = rows.front().size();
  std::vector<double> values;
  values.reserve(rows.size() * t);
  for (const auto& r : rows) {
    if (r.size() != t) throw MalformedFile("rows have unequal length");
    values.insert(values.end(), r.begin(), r.end());
  }
  return Panel(std::move(nodes), start, t, std::move(values));
}

SeriesView Panel::series(std::size_t i) const { return SeriesView{&nodes_.at(i), row(i)}; }

std::span<const double> Panel::row(std::size_t i) const {
  if (i >= nodes_.size()) throw OutOfRange("node index out of range");
  return std::span<const double>(values_).subspan(i * length_, length_);
}

std::optional<PanelFormat> parse_panel_format(std::string_view text) {
  if (text == "csv") return PanelFormat::csv;
  if (text == "json") return PanelFormat::json;
  return std::nullopt;
}

Panel load_panel(const std::filesystem::path& path, PanelFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MalformedFile("cannot open '" + path.string() + "'");
  return format == PanelFormat::csv ? read_panel_csv(in) : read_panel_json(in);
}

Panel read_panel_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  // Header, skipping leading blank lines.
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) break;
  }
  if (trim(line).empty()) throw EmptyPanel("empty file");
  auto header = split_commas(line);
  if (header.front() != "timestamp")
    throw MalformedFile("first header column must be 'timestamp'");
  if (header.size() < 2) throw EmptyPanel("no node columns in header");

  std::vector<NodeId> nodes;
  for (std::size_t c = 1; c < header.size(); ++c) nodes.push_back(parse_node_header(header[c]));
  check_unique(nodes);
  const std::size_t n = nodes.size();

  std::vector<std::vector<double>> columns(n);
  std::optional<HourStamp> start;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split_commas(line);
    if (cells.size() != n + 1)
      throw MalformedFile("line " + std::to_string(line_no) + ": expected " +
                          std::to_string(n + 1) + " cells, got " + std::to_string(cells.size()));
    HourStamp ts = parse_timestamp(cells[0]);
    if (!start) start = ts;
    if (ts != *start + static_cast<HourStamp>(rows))
      throw GapDetected("line " + std::to_string(line_no) + ": timestamp " +
                        std::string(cells[0]) + " is not the next contiguous hour");
    for (std::size_t c = 0; c < n; ++c) columns[c].push_back(parse_price(cells[c + 1], line_no));
    ++rows;
  }
  if (rows == 0) throw EmptyPanel("no data rows");
  return Panel::from_rows(std::move(nodes), *start, columns);
}

Panel read_panel_json(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw MalformedFile(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("start") || !doc.contains("nodes") ||
      !doc.contains("values"))
    throw MalformedFile("JSON panel needs 'start', 'nodes' and 'values'");
  if (!doc["start"].is_string()) throw MalformedFile("'start' must be a string");
  HourStamp start = parse_timestamp(doc["start"].get<std::string>());

  std::vector<NodeId> nodes;
  for (const auto& item : doc["nodes"]) {
    if (item.is_string()) {
      nodes.push_back(NodeId{item.get<std::string>(), ComponentRole::OTHER});
    } else if (item.is_object() && item.contains("name") && item["name"].is_string()) {
      NodeId node{item["name"].get<std::string>(), ComponentRole::OTHER};
      if (item.contains("role")) {
        auto role = item["role"].is_string() ? parse_role(item["role"].get<std::string>())
                                             : std::nullopt;
        if (!role) throw MalformedFile("unknown component role for node '" + node.name + "'");
        node.role = *role;
      }
      nodes.push_back(std::move(node));
    } else {
      throw MalformedFile("node entries must be strings or {name, role} objects");
    }
  }
  if (nodes.empty()) throw EmptyPanel("panel has no nodes");
  check_unique(nodes);

  const auto& rows = doc["values"];
  if (!rows.is_array()) throw MalformedFile("'values' must be an array of rows");
  std::vector<std::vector<double>> columns(nodes.size());
  std::size_t r = 0;
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != nodes.size())
      throw MalformedFile("row " + std::to_string(r) + " has wrong length");
    for (std::size_t c = 0; c < nodes.size(); ++c) {
      if (!row[c].is_number()) throw MalformedFile("row " + std::to_string(r) + ": non-numeric");
      double v = row[c].get<double>();
      if (!std::isfinite(v)) throw MalformedFile("non-finite value");
      columns[c].push_back(v);
    }
    ++r;
  }
  if (r == 0) throw EmptyPanel("no data rows");
  return Panel::from_rows(std::move(nodes), start, columns);
}

void write_panel_csv(std::ostream& out, const Panel& panel) {
  out << "timestamp";
  for (const auto& n : panel.nodes()) out << ',' << node_header(n);
  out << '\n';
  for (std::size_t t = 0; t < panel.length(); ++t) {
    out << format_timestamp(panel.start() + static_cast<HourStamp>(t));
    for (std::size_t i = 0; i < panel.node_count(); ++i) out << ',' << format_double(panel.row(i)[t]);
    out << '\n';
  }
}

void write_panel_json(std::ostream& out, const Panel& panel) {
  nlohmann::json doc;
  doc["start"] = format_timestamp(panel.start());
  doc["nodes"] = nlohmann::json::array();
  for (const auto& n : panel.nodes()) {
    if (n.role == ComponentRole::OTHER)
      doc["nodes"].push_back(n.name);
    else
      doc["nodes"].push_back({{"name", n.name}, {"role", std::string(to_string(n.role))}});
  }
  auto& rows = doc["values"] = nlohmann::json::array();
  for (std::size_t t = 0; t < panel.length(); ++t) {
    auto row = nlohmann::json::array();
    for (std::size_t i = 0; i < panel.node_count(); ++i) row.push_back(panel.row(i)[t]);
    rows.push_back(std::move(row));
  }
  out << doc.dump() << '\n';
}

std::vector<double> cumulative_sum(std::span<const double> values) {
  std::vector<double> out(values.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    acc += values[k];
    out[k] = acc;
  }
  return out;
}

}  // namespace mscale
