#include "lineup/render.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <fmt/format.h>

#include "lineup/error.hpp"
#include "lineup/quantile.hpp"

namespace lineup {
namespace {

constexpr double kInsetLeft = 4.0;
constexpr double kInsetRight = 4.0;
constexpr double kInsetTop = 18.0;
constexpr double kInsetBottom = 4.0;
constexpr double kPadFraction = 0.04;

constexpr std::array<std::string_view, 8> kPalette = {
    "#1b9e77", "#d95f02", "#7570b3", "#e7298a",
    "#66a61e", "#e6ab02", "#a6761d", "#666666"};

std::string num(double v) {
  auto s = fmt::format("{:.2f}", v);
  if (s == "-0.00") s = "0.00";
  return s;
}

std::string escape_xml(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

Interval padded(Interval r) {
  const double w = r.width();
  if (w <= 0.0) return {r.lo - 0.5, r.hi + 0.5};
  return {r.lo - kPadFraction * w, r.hi + kPadFraction * w};
}

struct PlotColumns {
  const Variable* x = nullptr;
  const Variable* y = nullptr;
  const Variable* group = nullptr;
};

const Variable* nth(const Dataset& d, VariableKind kind, std::size_t n) {
  for (const auto& v : d.variables()) {
    if (v.kind() == kind && n-- == 0) return &v;
  }
  return nullptr;
}

PlotColumns plot_columns(const Dataset& d, PlotType type) {
  PlotColumns c;
  switch (type) {
    case PlotType::scatter:
    case PlotType::scatter_with_regression:
      c.x = nth(d, VariableKind::continuous, 0);
      c.y = nth(d, VariableKind::continuous, 1);
      if (!c.x || !c.y) {
        throw SchemaError("scatter plots need two continuous variables");
      }
      break;
    case PlotType::boxplot_pair:
      c.group = nth(d, VariableKind::categorical, 0);
      c.y = nth(d, VariableKind::continuous, 0);
      if (!c.group || !c.y) {
        throw SchemaError(
            "boxplots need one categorical and one continuous variable");
      }
      break;
    case PlotType::projection_1d:
      c.x = nth(d, VariableKind::continuous, 0);
      c.group = nth(d, VariableKind::categorical, 0);
      if (!c.x || !c.group) {
        throw SchemaError(
            "1-D projections need a continuous coordinate and a group");
      }
      break;
    case PlotType::projection_2d:
      c.x = nth(d, VariableKind::continuous, 0);
      c.y = nth(d, VariableKind::continuous, 1);
      c.group = nth(d, VariableKind::categorical, 0);
      if (!c.x || !c.y || !c.group) {
        throw SchemaError(
            "2-D projections need two continuous coordinates and a group");
      }
      break;
  }
  return c;
}

// Group labels across all panels in order of first appearance.
std::vector<std::string> group_labels(const Lineup& lineup) {
  std::vector<std::string> labels;
  for (const auto& panel : lineup.panels()) {
    const auto cols = plot_columns(panel, lineup.plot_type());
    if (!cols.group) return labels;
    for (const auto& level : cols.group->levels()) {
      if (std::find(labels.begin(), labels.end(), level) == labels.end()) {
        labels.push_back(level);
      }
    }
  }
  return labels;
}

std::size_t label_index(const std::vector<std::string>& labels,
                        const std::string& label) {
  return static_cast<std::size_t>(
      std::find(labels.begin(), labels.end(), label) - labels.begin());
}

class PanelFrame {
 public:
  PanelFrame(const PanelLayout& layout)
      : layout_(layout),
        plot_w_(layout.panel_width - kInsetLeft - kInsetRight),
        plot_h_(layout.panel_height - kInsetTop - kInsetBottom) {}

  double sx(double v) const {
    const auto& r = layout_.x_range;
    return kInsetLeft + (v - r.lo) / r.width() * plot_w_;
  }
  double sy(double v) const {
    const auto& r = layout_.y_range;
    return kInsetTop + plot_h_ - (v - r.lo) / r.width() * plot_h_;
  }
  double plot_width() const { return plot_w_; }
  double plot_height() const { return plot_h_; }

 private:
  const PanelLayout& layout_;
  double plot_w_;
  double plot_h_;
};

void draw_points(std::string& out, const PanelFrame& f, std::span<const double> xs,
                 std::span<const double> ys, const Variable* group,
                 const std::vector<std::string>& labels) {
  for (std::size_t r = 0; r < xs.size(); ++r) {
    std::string_view colour = "#333333";
    if (group) colour = kPalette[label_index(labels, group->label(r)) % kPalette.size()];
    out += fmt::format(
        "<circle class=\"pt\" cx=\"{}\" cy=\"{}\" r=\"2\" fill=\"{}\"/>\n",
        num(f.sx(xs[r])), num(f.sy(ys[r])), colour);
  }
}

void draw_panel_body(std::string& out, const Dataset& panel, PlotType type,
                     const PanelFrame& f, const PanelLayout& layout,
                     const std::vector<std::string>& labels) {
  const auto cols = plot_columns(panel, type);
  switch (type) {
    case PlotType::scatter:
    case PlotType::projection_2d:
      draw_points(out, f, cols.x->values(), cols.y->values(), cols.group, labels);
      break;
    case PlotType::scatter_with_regression: {
      draw_points(out, f, cols.x->values(), cols.y->values(), nullptr, labels);
      LineFit fit;
      try {
        fit = fit_line(cols.x->values(), cols.y->values());
      } catch (const PreconditionError&) {
        break;
      }
      const double x0 = layout.x_range.lo;
      const double x1 = layout.x_range.hi;
      out += fmt::format(
          "<line class=\"fit\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" "
          "stroke=\"#3366cc\" stroke-width=\"1.5\" clip-path=\"url(#plot-area)\"/>\n",
          num(f.sx(x0)), num(f.sy(fit.intercept + fit.slope * x0)),
          num(f.sx(x1)), num(f.sy(fit.intercept + fit.slope * x1)));
      break;
    }
    case PlotType::projection_1d: {
      std::vector<double> ys(panel.rows());
      for (std::size_t r = 0; r < panel.rows(); ++r) {
        ys[r] = static_cast<double>(label_index(labels, cols.group->label(r)));
      }
      draw_points(out, f, cols.x->values(), ys, cols.group, labels);
      break;
    }
    case PlotType::boxplot_pair: {
      const auto values = cols.y->values();
      const double half = 0.3;
      for (std::size_t level = 0; level < cols.group->levels().size(); ++level) {
        std::vector<double> vs;
        for (std::size_t r = 0; r < panel.rows(); ++r) {
          if (cols.group->codes()[r] == level) vs.push_back(values[r]);
        }
        if (vs.empty()) continue;
        const auto box = box_summary(vs);
        const double centre = static_cast<double>(
            label_index(labels, cols.group->levels()[level]) + 1);
        const double left = f.sx(centre - half);
        const double right = f.sx(centre + half);
        const double mid = f.sx(centre);
        const auto colour = kPalette[(static_cast<std::size_t>(centre) - 1) % kPalette.size()];
        out += fmt::format(
            "<line class=\"whisker\" x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"#333333\"/>\n"
            "<line class=\"whisker\" x1=\"{0}\" y1=\"{3}\" x2=\"{0}\" y2=\"{4}\" stroke=\"#333333\"/>\n",
            num(mid), num(f.sy(box.lower_whisker)), num(f.sy(box.box.q1)),
            num(f.sy(box.box.q3)), num(f.sy(box.upper_whisker)));
        out += fmt::format(
            "<rect class=\"box\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" "
            "fill=\"{}\" fill-opacity=\"0.4\" stroke=\"#333333\" "
            "data-q1=\"{}\" data-median=\"{}\" data-q3=\"{}\"/>\n",
            num(left), num(f.sy(box.box.q3)), num(right - left),
            num(f.sy(box.box.q1) - f.sy(box.box.q3)), colour,
            format_real(box.box.q1), format_real(box.box.median),
            format_real(box.box.q3));
        out += fmt::format(
            "<line class=\"median\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" "
            "stroke=\"#000000\" stroke-width=\"2\"/>\n",
            num(left), num(f.sy(box.box.median)), num(right),
            num(f.sy(box.box.median)));
        for (double o : box.outliers) {
          out += fmt::format(
              "<circle class=\"outlier\" cx=\"{}\" cy=\"{}\" r=\"2\" fill=\"#333333\"/>\n",
              num(mid), num(f.sy(o)));
        }
      }
      break;
    }
  }
}

std::string svg_open(double width, double height) {
  return fmt::format(
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
      "width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n"
      "<rect x=\"0\" y=\"0\" width=\"{0}\" height=\"{1}\" fill=\"#ffffff\"/>\n",
      num(width), num(height));
}

}  // namespace

PanelLayout default_layout(const Lineup& lineup, double panel_size) {
  PanelLayout layout;
  const std::size_t m = lineup.m();
  layout.cols = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(m))));
  layout.rows = (m + layout.cols - 1) / layout.cols;
  layout.panel_width = panel_size;
  layout.panel_height = panel_size;

  const auto type = lineup.plot_type();
  const auto labels = group_labels(lineup);
  std::vector<std::span<const double>> xs;
  std::vector<std::span<const double>> ys;
  for (const auto& panel : lineup.panels()) {
    const auto cols = plot_columns(panel, type);
    if (cols.x) xs.push_back(cols.x->values());
    if (cols.y) ys.push_back(cols.y->values());
  }
  auto cover = [](const std::vector<std::span<const double>>& samples) {
    double lo = samples.front().front();
    double hi = lo;
    for (const auto& s : samples) {
      for (double v : s) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
    return Interval{lo, hi};
  };
  if (type == PlotType::boxplot_pair) {
    layout.x_range = {0.5, static_cast<double>(labels.size()) + 0.5};
  } else {
    layout.x_range = padded(cover(xs));
  }
  if (type == PlotType::projection_1d) {
    layout.y_range = {-0.5, static_cast<double>(labels.size()) - 0.5};
  } else {
    layout.y_range = padded(cover(ys));
  }
  return layout;
}

std::string render_lineup(const Lineup& lineup, const PanelLayout& layout,
                          bool reveal) {
  if (layout.rows * layout.cols < lineup.m()) {
    throw PreconditionError(fmt::format("a {}x{} layout cannot hold {} panels",
                                        layout.rows, layout.cols, lineup.m()));
  }
  if (!(layout.x_range.width() > 0.0) || !(layout.y_range.width() > 0.0)) {
    throw PreconditionError("layout axis ranges must have positive width");
  }
  const auto labels = group_labels(lineup);
  const PanelFrame frame(layout);
  const double width = static_cast<double>(layout.cols) * (layout.panel_width + layout.gap) + layout.gap;
  const double height = static_cast<double>(layout.rows) * (layout.panel_height + layout.gap) + layout.gap;

  std::string out = svg_open(width, height);
  out += fmt::format(
      "<defs><clipPath id=\"plot-area\"><rect x=\"{}\" y=\"{}\" width=\"{}\" "
      "height=\"{}\"/></clipPath></defs>\n",
      num(kInsetLeft), num(kInsetTop), num(frame.plot_width()),
      num(frame.plot_height()));
  const std::string domain =
      fmt::format("{} {} {} {}", num(layout.x_range.lo), num(layout.x_range.hi),
                  num(layout.y_range.lo), num(layout.y_range.hi));

  for (std::size_t pos = 1; pos <= lineup.m(); ++pos) {
    const std::size_t row = (pos - 1) / layout.cols;
    const std::size_t col = (pos - 1) % layout.cols;
    const double px = layout.gap + static_cast<double>(col) * (layout.panel_width + layout.gap);
    const double py = layout.gap + static_cast<double>(row) * (layout.panel_height + layout.gap);
    out += fmt::format(
        "<g class=\"panel\" id=\"panel-{0}\" data-panel=\"{0}\" "
        "data-bbox=\"{1} {2} {3} {4}\" data-domain=\"{5}\" "
        "transform=\"translate({1},{2})\">\n",
        pos, num(px), num(py), num(layout.panel_width),
        num(layout.panel_height), domain);
    out += fmt::format(
        "<rect class=\"frame\" x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" "
        "fill=\"#f2f2f2\" stroke=\"#bbbbbb\"/>\n",
        num(layout.panel_width), num(layout.panel_height));
    if (reveal && pos == lineup.true_position()) {
      out += fmt::format(
          "<rect class=\"reveal\" x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" "
          "fill=\"none\" stroke=\"#e6550d\" stroke-width=\"4\"/>\n",
          num(layout.panel_width), num(layout.panel_height));
    }
    out += fmt::format(
        "<text class=\"label\" x=\"{}\" y=\"13\" font-family=\"sans-serif\" "
        "font-size=\"12\">{}</text>\n",
        num(kInsetLeft), pos);
    draw_panel_body(out, lineup.panel(pos), lineup.plot_type(), frame, layout,
                    labels);
    out += "</g>\n";
  }
  out += "</svg>\n";
  return out;
}

std::string render_lineup(const Lineup& lineup, bool reveal) {
  return render_lineup(lineup, default_layout(lineup), reveal);
}

std::string render_distribution(const EmpiricalDistribution& dist,
                                const std::optional<MeanDistances>& marks) {
  if (dist.samples.empty()) {
    throw PreconditionError("cannot plot an empty distribution");
  }
  constexpr double width = 640.0;
  constexpr double height = 360.0;
  constexpr double left = 48.0;
  constexpr double right = 16.0;
  constexpr double top = 28.0;
  constexpr double bottom = 48.0;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;

  std::vector<double> sorted = dist.samples;
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  const double mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / n;
  double var = 0.0;
  for (double v : sorted) var += (v - mean) * (v - mean);
  const double sd = sorted.size() > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
  const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
  // Silverman's rule of thumb.
  double spread = sd;
  if (iqr > 0.0) spread = std::min(sd, iqr / 1.34);
  double bandwidth = 0.9 * spread * std::pow(n, -0.2);
  if (!(bandwidth > 0.0)) {
    bandwidth = std::max(1e-3, 0.05 * std::abs(mean));
  }

  double lo = sorted.front() - 3.0 * bandwidth;
  double hi = sorted.back() + 3.0 * bandwidth;
  if (marks) {
    lo = std::min(lo, marks->d_true);
    hi = std::max(hi, marks->d_true);
    for (double d : marks->d_null) {
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
  }
  const Interval xr = padded({lo, hi});

  constexpr std::size_t kGrid = 200;
  std::vector<double> density(kGrid);
  const double norm = 1.0 / (n * bandwidth * std::sqrt(2.0 * std::numbers::pi));
  for (std::size_t i = 0; i < kGrid; ++i) {
    const double x = xr.lo + xr.width() * static_cast<double>(i) / (kGrid - 1);
    double s = 0.0;
    for (double v : sorted) {
      const double z = (x - v) / bandwidth;
      s += std::exp(-0.5 * z * z);
    }
    density[i] = s * norm;
  }
  const double dmax = *std::max_element(density.begin(), density.end()) * 1.05;

  auto sx = [&](double v) { return left + (v - xr.lo) / xr.width() * plot_w; };
  auto sy = [&](double v) { return top + plot_h - v / dmax * plot_h; };

  std::string out = svg_open(width, height);
  out += fmt::format(
      "<text x=\"{}\" y=\"18\" font-family=\"sans-serif\" font-size=\"13\">"
      "{} distance, N = {}, m = {}</text>\n",
      num(left), escape_xml(describe(dist.metric)), dist.samples.size(), dist.m);
  out += fmt::format(
      "<line class=\"axis\" x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"#333333\"/>\n",
      num(left), num(top + plot_h), num(left + plot_w));
  for (int t = 0; t <= 4; ++t) {
    const double v = xr.lo + xr.width() * t / 4.0;
    out += fmt::format(
        "<text class=\"tick\" x=\"{}\" y=\"{}\" font-family=\"sans-serif\" "
        "font-size=\"10\" text-anchor=\"middle\">{}</text>\n",
        num(sx(v)), num(top + plot_h + 30.0), num(v));
  }
  std::string path;
  for (std::size_t i = 0; i < kGrid; ++i) {
    const double x = xr.lo + xr.width() * static_cast<double>(i) / (kGrid - 1);
    path += fmt::format("{}{} {}", i == 0 ? "M" : " L", num(sx(x)), num(sy(density[i])));
  }
  out += fmt::format(
      "<path class=\"density\" d=\"{}\" fill=\"none\" stroke=\"#555555\" "
      "stroke-width=\"1.5\"/>\n",
      path);
  if (marks) {
    const double y0 = top + plot_h + 2.0;
    const double y1 = top + plot_h + 16.0;
    for (double d : marks->d_null) {
      out += fmt::format(
          "<line class=\"rug rug-null\" x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" "
          "y2=\"{2}\" stroke=\"#000000\" stroke-width=\"1\"/>\n",
          num(sx(d)), num(y0), num(y1));
    }
    out += fmt::format(
        "<line class=\"rug rug-true\" x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" "
        "y2=\"{2}\" stroke=\"#ff7f00\" stroke-width=\"2.5\"/>\n",
        num(sx(marks->d_true)), num(y0 - 4.0), num(y1 + 2.0));
  }
  out += "</svg>\n";
  return out;
}

std::string render_sweep(const SweepResult& sweep) {
  constexpr double cell = 40.0;
  constexpr double left = 48.0;
  constexpr double top = 32.0;
  constexpr double bottom = 40.0;
  const double cols = static_cast<double>(sweep.p_range.size());
  const double rows = static_cast<double>(sweep.q_range.size());
  const double width = left + cols * cell + 16.0;
  const double height = top + rows * cell + bottom;
  const double lo = sweep.worst.delta;
  const double hi = sweep.best.delta;

  std::string out = svg_open(width, height);
  out += fmt::format(
      "<text x=\"{}\" y=\"20\" font-family=\"sans-serif\" font-size=\"13\">"
      "delta by (x bins, y bins)</text>\n",
      num(left));
  for (std::size_t p = sweep.p_range.first; p <= sweep.p_range.last; ++p) {
    for (std::size_t q = sweep.q_range.first; q <= sweep.q_range.last; ++q) {
      const double x = left + static_cast<double>(p - sweep.p_range.first) * cell;
      const double y = top + static_cast<double>(sweep.q_range.last - q) * cell;
      auto it = sweep.grid.find({p, q});
      if (it == sweep.grid.end()) {
        out += fmt::format(
            "<rect class=\"tile tile-skipped\" x=\"{}\" y=\"{}\" width=\"{}\" "
            "height=\"{}\" fill=\"#cccccc\" data-p=\"{}\" data-q=\"{}\"/>\n",
            num(x), num(y), num(cell), num(cell), p, q);
        continue;
      }
      const double t = hi > lo ? (it->second - lo) / (hi - lo) : 0.0;
      const auto channel = [t](double dark) {
        return static_cast<int>(std::lround(255.0 + t * (dark - 255.0)));
      };
      out += fmt::format(
          "<rect class=\"tile\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" "
          "fill=\"#{:02x}{:02x}{:02x}\" data-p=\"{}\" data-q=\"{}\" "
          "data-delta=\"{}\"/>\n",
          num(x), num(y), num(cell), num(cell), channel(8.0), channel(48.0),
          channel(107.0), p, q, format_real(it->second));
      out += fmt::format(
          "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"9\" "
          "text-anchor=\"middle\" fill=\"{}\">{:.1f}</text>\n",
          num(x + cell / 2.0), num(y + cell / 2.0 + 3.0),
          t > 0.5 ? "#ffffff" : "#000000", it->second);
    }
  }
  for (std::size_t p = sweep.p_range.first; p <= sweep.p_range.last; ++p) {
    out += fmt::format(
        "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"10\" "
        "text-anchor=\"middle\">{}</text>\n",
        num(left + (static_cast<double>(p - sweep.p_range.first) + 0.5) * cell),
        num(top + rows * cell + 14.0), p);
  }
  for (std::size_t q = sweep.q_range.first; q <= sweep.q_range.last; ++q) {
    out += fmt::format(
        "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"10\" "
        "text-anchor=\"end\">{}</text>\n",
        num(left - 6.0),
        num(top + (static_cast<double>(sweep.q_range.last - q) + 0.5) * cell + 3.0), q);
  }
  out += "</svg>\n";
  return out;
}

}  // namespace lineup
