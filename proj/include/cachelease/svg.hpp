#pragma once

#include <string>
#include <vector>

namespace cachelease {

/// Minimal SVG chart writer for the report command: polyline charts with
/// axes and a legend, grouped column charts, and min/max band charts.
class SvgChart {
 public:
  SvgChart(std::string title, std::string x_label, std::string y_label);

  void add_series(const std::string& name, std::vector<double> xs,
                  std::vector<double> ys);
  /// Dashed variant, used for the lower lines of band charts.
  void add_dashed_series(const std::string& name, std::vector<double> xs,
                         std::vector<double> ys);
  /// Grouped columns: one group per x tick, one column per series.
  void add_columns(const std::string& name, std::vector<double> heights);
  void set_x_ticks(std::vector<std::string> labels);
  void set_log_x(bool on) { log_x_ = on; }

  std::string render() const;
  void save(const std::string& path) const;

 private:
  struct Series {
    std::string name;
    std::vector<double> xs, ys;
    bool dashed = false;
  };
  std::string title_, x_label_, y_label_;
  std::vector<Series> lines_;
  std::vector<Series> columns_;
  std::vector<std::string> x_ticks_;
  bool log_x_ = false;
};

}  // namespace cachelease
