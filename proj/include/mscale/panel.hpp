#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mscale {

/// Which price component a series carries (LMP = MEC + MLC + MCC).
enum class ComponentRole { MCC, MEC, MLC, LMP, OTHER };

std::string_view to_string(ComponentRole role);
std::optional<ComponentRole> parse_role(std::string_view text);

struct NodeId {
  std::string name;
  ComponentRole role = ComponentRole::OTHER;

  friend bool operator==(const NodeId&, const NodeId&) = default;
};

/// Read-only view of one node's series inside a Panel.
struct SeriesView {
  const NodeId* node = nullptr;
  std::span<const double> values;

  std::size_t size() const { return values.size(); }
};

/// Hours since 1970-01-01T00:00:00Z.
using HourStamp = std::int64_t;

HourStamp parse_timestamp(std::string_view iso);
std::string format_timestamp(HourStamp hours);

/// N nodes x T hourly samples. Immutable once constructed.
class Panel {
public:
  /// `values` is node-major: values[i * T + t].
  Panel(std::vector<NodeId> nodes, HourStamp start, std::size_t length,
        std::vector<double> values);

  /// Convenience constructor from one vector per node.
  static Panel from_rows(std::vector<NodeId> nodes, HourStamp start,
                         const std::vector<std::vector<double>>& rows);

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t length() const { return length_; }
  HourStamp start() const { return start_; }
  const std::vector<NodeId>& nodes() const { return nodes_; }

  SeriesView series(std::size_t i) const;
  std::span<const double> row(std::size_t i) const;

  /// Apply `fn` to every row, producing a new panel with the same nodes.
  template <typename Fn>
  Panel map_rows(Fn&& fn) const {
    std::vector<double> out;
    out.reserve(values_.size());
    for (std::size_t i = 0; i < node_count(); ++i) {
      auto r = fn(row(i));
      out.insert(out.end(), r.begin(), r.end());
    }
    return Panel(nodes_, start_, length_, std::move(out));
  }

private:
  std::vector<NodeId> nodes_;
  HourStamp start_ = 0;
  std::size_t length_ = 0;
  std::vector<double> values_;
};

enum class PanelFormat { csv, json };

std::optional<PanelFormat> parse_panel_format(std::string_view text);

Panel load_panel(const std::filesystem::path& path, PanelFormat format);
Panel read_panel_csv(std::istream& in);
Panel read_panel_json(std::istream& in);

void write_panel_csv(std::ostream& out, const Panel& panel);
void write_panel_json(std::ostream& out, const Panel& panel);

/// Running sum: out[k] = sum_{j<=k} values[j].
std::vector<double> cumulative_sum(std::span<const double> values);
inline std::vector<double> cumulative_sum(const SeriesView& s) {
  return cumulative_sum(s.values);
}

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

}  // namespace mscale
