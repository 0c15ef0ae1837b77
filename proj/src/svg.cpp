#include "cachelease/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cachelease/errors.hpp"

namespace cachelease {

namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 440;
constexpr int kLeft = 70, kRight = 20, kTop = 40, kBottom = 55;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
                          "#bcbd22", "#e377c2"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

SvgChart::SvgChart(std::string title, std::string x_label, std::string y_label)
    : title_(std::move(title)),
      x_label_(std::move(x_label)),
      y_label_(std::move(y_label)) {}

void SvgChart::add_series(const std::string& name, std::vector<double> xs,
                          std::vector<double> ys) {
  lines_.push_back({name, std::move(xs), std::move(ys), false});
}

void SvgChart::add_dashed_series(const std::string& name,
                                 std::vector<double> xs,
                                 std::vector<double> ys) {
  lines_.push_back({name, std::move(xs), std::move(ys), true});
}

void SvgChart::add_columns(const std::string& name,
                           std::vector<double> heights) {
  columns_.push_back({name, {}, std::move(heights), false});
}

void SvgChart::set_x_ticks(std::vector<std::string> labels) {
  x_ticks_ = std::move(labels);
}

std::string SvgChart::render() const {
  double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
  bool first = true;
  for (const Series& s : lines_)
    for (std::size_t i = 0; i < s.xs.size(); ++i) {
      const double x = log_x_ ? std::log10(s.xs[i]) : s.xs[i];
      if (first) {
        xmin = xmax = x;
        ymin = ymax = s.ys[i];
        first = false;
      }
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, s.ys[i]);
      ymax = std::max(ymax, s.ys[i]);
    }
  std::size_t n_groups = 0;
  for (const Series& s : columns_) {
    n_groups = std::max(n_groups, s.ys.size());
    for (double v : s.ys) ymax = std::max(ymax, v);
    first = false;
  }
  if (ymax == ymin) ymax = ymin + 1.0;
  if (xmax == xmin) xmax = xmin + 1.0;
  ymin = std::min(0.0, ymin);

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double x) {
    const double v = log_x_ ? std::log10(x) : x;
    return kLeft + (v - xmin) / (xmax - xmin) * plot_w;
  };
  auto py = [&](double y) {
    return kTop + (1.0 - (y - ymin) / (ymax - ymin)) * plot_h;
  };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" "
         "font-size=\"15\" font-family=\"sans-serif\">"
      << title_ << "</text>\n";

  // axes
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\""
      << kLeft + plot_w << "\" y2=\"" << kTop + plot_h
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft
      << "\" y2=\"" << kTop + plot_h << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\" font-size=\"12\" "
         "font-family=\"sans-serif\">"
      << x_label_ << "</text>\n";
  out << "<text x=\"16\" y=\"" << kTop + plot_h / 2
      << "\" text-anchor=\"middle\" font-size=\"12\" "
         "font-family=\"sans-serif\" transform=\"rotate(-90 16 "
      << kTop + plot_h / 2 << ")\">" << y_label_ << "</text>\n";

  // y ticks
  for (int i = 0; i <= 4; ++i) {
    const double y = ymin + (ymax - ymin) * i / 4.0;
    out << "<line x1=\"" << kLeft - 4 << "\" y1=\"" << py(y) << "\" x2=\""
        << kLeft << "\" y2=\"" << py(y) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << kLeft - 8 << "\" y=\"" << py(y) + 4
        << "\" text-anchor=\"end\" font-size=\"11\" "
           "font-family=\"sans-serif\">"
        << num(y) << "</text>\n";
  }

  if (!columns_.empty()) {
    const double group_w = plot_w / std::max<std::size_t>(1, n_groups);
    const double bar_w = group_w * 0.8 / std::max<std::size_t>(1,
                                                               columns_.size());
    for (std::size_t c = 0; c < columns_.size(); ++c) {
      const Series& s = columns_[c];
      for (std::size_t g = 0; g < s.ys.size(); ++g) {
        const double x0 = kLeft + g * group_w + group_w * 0.1 + c * bar_w;
        const double y0 = py(s.ys[g]);
        out << "<rect x=\"" << x0 << "\" y=\"" << y0 << "\" width=\"" << bar_w
            << "\" height=\"" << (kTop + plot_h - y0) << "\" fill=\""
            << kPalette[c % 10] << "\"/>\n";
      }
    }
    for (std::size_t g = 0; g < x_ticks_.size() && g < n_groups; ++g)
      out << "<text x=\"" << kLeft + g * group_w + group_w / 2 << "\" y=\""
          << kTop + plot_h + 16
          << "\" text-anchor=\"middle\" font-size=\"10\" "
             "font-family=\"sans-serif\">"
          << x_ticks_[g] << "</text>\n";
  } else {
    // x ticks from the data range
    for (int i = 0; i <= 4; ++i) {
      const double xv = xmin + (xmax - xmin) * i / 4.0;
      const double label = log_x_ ? std::pow(10.0, xv) : xv;
      const double xp = kLeft + (xv - xmin) / (xmax - xmin) * plot_w;
      out << "<line x1=\"" << xp << "\" y1=\"" << kTop + plot_h << "\" x2=\""
          << xp << "\" y2=\"" << kTop + plot_h + 4 << "\" stroke=\"black\"/>\n";
      out << "<text x=\"" << xp << "\" y=\"" << kTop + plot_h + 17
          << "\" text-anchor=\"middle\" font-size=\"11\" "
             "font-family=\"sans-serif\">"
          << num(label) << "</text>\n";
    }
  }

  for (std::size_t li = 0; li < lines_.size(); ++li) {
    const Series& s = lines_[li];
    out << "<polyline fill=\"none\" stroke=\"" << kPalette[li % 10]
        << "\" stroke-width=\"1.6\"";
    if (s.dashed) out << " stroke-dasharray=\"6 4\"";
    out << " points=\"";
    for (std::size_t i = 0; i < s.xs.size(); ++i)
      out << px(s.xs[i]) << ',' << py(s.ys[i]) << ' ';
    out << "\"/>\n";
    for (std::size_t i = 0; i < s.xs.size(); ++i)
      out << "<circle cx=\"" << px(s.xs[i]) << "\" cy=\"" << py(s.ys[i])
          << "\" r=\"2.4\" fill=\"" << kPalette[li % 10] << "\"/>\n";
  }

  // legend
  double ly = kTop + 6;
  auto legend_entry = [&](const std::string& name, const char* color,
                          bool dashed, bool box) {
    out << (box ? "<rect x=\"" : "<line x1=\"");
    if (box)
      out << kLeft + plot_w - 150 << "\" y=\"" << ly - 8
          << "\" width=\"18\" height=\"8\" fill=\"" << color << "\"/>";
    else
      out << kLeft + plot_w - 150 << "\" y1=\"" << ly - 4 << "\" x2=\""
          << kLeft + plot_w - 132 << "\" y2=\"" << ly - 4 << "\" stroke=\""
          << color << "\" stroke-width=\"2\""
          << (dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>";
    out << "<text x=\"" << kLeft + plot_w - 128 << "\" y=\"" << ly
        << "\" font-size=\"11\" font-family=\"sans-serif\">" << name
        << "</text>\n";
    ly += 15;
  };
  for (std::size_t li = 0; li < lines_.size(); ++li)
    legend_entry(lines_[li].name, kPalette[li % 10], lines_[li].dashed, false);
  for (std::size_t c = 0; c < columns_.size(); ++c)
    legend_entry(columns_[c].name, kPalette[c % 10], false, true);

  out << "</svg>\n";
  return out.str();
}

void SvgChart::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << render();
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace cachelease
