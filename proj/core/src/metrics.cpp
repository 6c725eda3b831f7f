#include "lineup/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include <fmt/format.h>

#include "json_util.hpp"
#include "lineup/error.hpp"
#include "lineup/quantile.hpp"

namespace lineup {

using detail::json;

// ---- grids -----------------------------------------------------------------

Interval combined_range(std::initializer_list<std::span<const double>> samples) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& s : samples) {
    for (double v : s) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (lo > hi) {
    throw PreconditionError("range of empty samples");
  }
  return {lo, hi};
}

std::size_t bin_index(double value, const Interval& range, std::size_t bins) {
  if (bins == 0) {
    throw PreconditionError("bin count must be positive");
  }
  if (!range.contains(value)) {
    throw PreconditionError(fmt::format("value {} outside bin range [{}, {}]",
                                        value, range.lo, range.hi));
  }
  const double width = range.width();
  if (width <= 0.0) return 0;
  const double scaled =
      (value - range.lo) / width * static_cast<double>(bins);
  const auto idx = static_cast<std::size_t>(std::floor(scaled));
  return std::min(idx, bins - 1);
}

long CountMatrix::total() const {
  long sum = 0;
  for (long c : counts_) sum += c;
  return sum;
}

MetricKind MetricKind::binned(std::size_t p, std::size_t q) {
  MetricKind m;
  m.kind = Kind::binned;
  m.p = p;
  m.q = q;
  return m;
}

MetricKind MetricKind::boxplot() {
  MetricKind m;
  m.kind = Kind::boxplot;
  return m;
}

MetricKind MetricKind::regression(std::size_t b) {
  MetricKind m;
  m.kind = Kind::regression;
  m.b = b;
  return m;
}

MetricKind MetricKind::min_separation() {
  MetricKind m;
  m.kind = Kind::min_separation;
  return m;
}

MetricKind MetricKind::avg_separation() {
  MetricKind m;
  m.kind = Kind::avg_separation;
  return m;
}

MetricKind MetricKind::cluster_mean_separation() {
  MetricKind m;
  m.kind = Kind::cluster_mean_separation;
  return m;
}

std::string_view code(MetricKind::Kind kind) {
  switch (kind) {
    case MetricKind::Kind::binned: return "BN";
    case MetricKind::Kind::boxplot: return "BX";
    case MetricKind::Kind::regression: return "RG";
    case MetricKind::Kind::min_separation: return "MS";
    case MetricKind::Kind::avg_separation: return "AS";
    case MetricKind::Kind::cluster_mean_separation: return "CMS";
  }
  return "BN";
}

std::string describe(const MetricKind& metric) {
  switch (metric.kind) {
    case MetricKind::Kind::binned:
      return fmt::format("BN({},{})", metric.p, metric.q);
    case MetricKind::Kind::regression:
      return fmt::format("RG({})", metric.b);
    default:
      return std::string(code(metric.kind));
  }
}

MetricKind parse_metric(std::string_view json_text) {
  constexpr std::string_view what = "metric";
  const json doc = detail::parse_json(json_text, what);
  const auto kind = detail::field<std::string>(doc, "kind", what);
  MetricKind m;
  if (kind == "BN") {
    m = MetricKind::binned(detail::field<std::size_t>(doc, "p", what),
                           detail::field<std::size_t>(doc, "q", what));
    if (m.p == 0 || m.q == 0) {
      throw PreconditionError("metric: BN needs p >= 1 and q >= 1");
    }
  } else if (kind == "RG") {
    m = MetricKind::regression(detail::field<std::size_t>(doc, "b", what));
    if (m.b == 0) throw PreconditionError("metric: RG needs b >= 1");
  } else if (kind == "BX") {
    m = MetricKind::boxplot();
  } else if (kind == "MS") {
    m = MetricKind::min_separation();
  } else if (kind == "AS") {
    m = MetricKind::avg_separation();
  } else if (kind == "CMS") {
    m = MetricKind::cluster_mean_separation();
  } else {
    throw SchemaError(fmt::format("metric: unknown kind '{}'", kind));
  }
  if (doc.contains("x")) m.vars.x = detail::field<std::string>(doc, "x", what);
  if (doc.contains("y")) m.vars.y = detail::field<std::string>(doc, "y", what);
  if (doc.contains("group")) {
    m.vars.group = detail::field<std::string>(doc, "group", what);
  }
  return m;
}

std::string metric_to_json(const MetricKind& metric) {
  json doc{{"kind", std::string(code(metric.kind))}};
  if (metric.kind == MetricKind::Kind::binned) {
    doc["p"] = metric.p;
    doc["q"] = metric.q;
  }
  if (metric.kind == MetricKind::Kind::regression) doc["b"] = metric.b;
  if (!metric.vars.x.empty()) doc["x"] = metric.vars.x;
  if (!metric.vars.y.empty()) doc["y"] = metric.vars.y;
  if (!metric.vars.group.empty()) doc["group"] = metric.vars.group;
  return doc.dump();
}

namespace {

const Variable* nth_of_kind(const Dataset& data, VariableKind kind,
                            std::size_t n) {
  for (const auto& v : data.variables()) {
    if (v.kind() == kind && n-- == 0) return &v;
  }
  return nullptr;
}

const Variable& require_kind(const Dataset& data, std::string_view name,
                             VariableKind kind, std::string_view role) {
  const Variable& v = data.at(name);
  if (v.kind() != kind) {
    throw SchemaError(fmt::format("{} variable '{}' must be {}", role, name,
                                  to_string(kind)));
  }
  return v;
}

const Variable& pick(const Dataset& data, const std::string& name,
                     VariableKind kind, std::size_t nth, std::string_view role) {
  if (!name.empty()) return require_kind(data, name, kind, role);
  if (const auto* v = nth_of_kind(data, kind, nth)) return *v;
  throw SchemaError(
      fmt::format("no {} variable available for the {} role", to_string(kind), role));
}

double squared_gap(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

void require_structure(const Dataset& a, const Dataset& b) {
  if (!same_structure(a, b)) {
    throw SchemaError("datasets differ in structure");
  }
}

// One binned axis shared by two datasets: either numeric strips over the
// combined range or one bin per level of the union of both level sets.
class SharedAxis {
 public:
  SharedAxis(const Variable& a, const Variable& b, std::size_t bins)
      : categorical_(a.is_categorical()) {
    if (a.kind() != b.kind()) {
      throw SchemaError(fmt::format("variable '{}' differs in kind", a.name()));
    }
    if (categorical_) {
      std::set<std::string> all(a.levels().begin(), a.levels().end());
      all.insert(b.levels().begin(), b.levels().end());
      std::size_t i = 0;
      for (const auto& label : all) index_.emplace(label, i++);
      bins_ = all.size();
    } else {
      range_ = combined_range({a.values(), b.values()});
      bins_ = bins;
    }
  }

  SharedAxis(const Interval& range, std::size_t bins)
      : categorical_(false), bins_(bins), range_(range) {}

  std::size_t bins() const { return bins_; }

  std::size_t index(const Variable& v, std::size_t row) const {
    if (categorical_) return index_.at(v.label(row));
    return bin_index(v.values()[row], range_, bins_);
  }

 private:
  bool categorical_;
  std::size_t bins_ = 1;
  Interval range_;
  std::map<std::string, std::size_t> index_;
};

CountMatrix count_cells(const Dataset& data, const Variable& x,
                        const Variable* y, const SharedAxis& ax,
                        const SharedAxis* ay) {
  CountMatrix counts(ax.bins(), ay ? ay->bins() : 1);
  for (std::size_t r = 0; r < data.rows(); ++r) {
    const std::size_t i = ax.index(x, r);
    const std::size_t j = (ay && y) ? ay->index(*y, r) : 0;
    ++counts.at(i, j);
  }
  return counts;
}

double count_distance(const CountMatrix& a, const CountMatrix& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const double d = static_cast<double>(a.at(i, j) - b.at(i, j));
      sum += d * d;
    }
  }
  return std::sqrt(sum);
}

struct BinnedColumns {
  const Variable* x;
  const Variable* y;  // null for one-column data
};

BinnedColumns binned_columns(const Dataset& data, const VariableSelection& vars) {
  BinnedColumns cols{nullptr, nullptr};
  if (!vars.x.empty()) {
    cols.x = &data.at(vars.x);
  } else {
    cols.x = &data.variables()[0];
  }
  if (!vars.y.empty()) {
    cols.y = &data.at(vars.y);
  } else if (vars.x.empty() && data.columns() >= 2) {
    cols.y = &data.variables()[1];
  }
  return cols;
}

struct GroupedValues {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> values;
};

GroupedValues split_by_group(const Variable& group, const Variable& value) {
  GroupedValues out;
  out.labels.assign(group.levels().begin(), group.levels().end());
  out.values.resize(out.labels.size());
  for (std::size_t r = 0; r < group.size(); ++r) {
    out.values[group.codes()[r]].push_back(value.values()[r]);
  }
  return out;
}

}  // namespace

// ---- BN ----------------------------------------------------------------------

CountMatrix bin_counts(const Dataset& data, const BinGrid& grid,
                       std::string_view x, std::string_view y) {
  const auto xs = require_kind(data, x, VariableKind::continuous, "x").values();
  const auto ys = require_kind(data, y, VariableKind::continuous, "y").values();
  CountMatrix counts(grid.p, grid.q);
  for (std::size_t r = 0; r < data.rows(); ++r) {
    ++counts.at(bin_index(xs[r], grid.range_x, grid.p),
                bin_index(ys[r], grid.range_y, grid.q));
  }
  return counts;
}

BinGrid shared_grid(const Dataset& a, const Dataset& b, std::size_t p,
                    std::size_t q, std::string_view x, std::string_view y) {
  if (p == 0 || q == 0) {
    throw PreconditionError("bin counts must be positive");
  }
  const auto ax = require_kind(a, x, VariableKind::continuous, "x").values();
  const auto bx = require_kind(b, x, VariableKind::continuous, "x").values();
  const auto ay = require_kind(a, y, VariableKind::continuous, "y").values();
  const auto by = require_kind(b, y, VariableKind::continuous, "y").values();
  return {p, q, combined_range({ax, bx}), combined_range({ay, by})};
}

double dist_binned(const Dataset& a, const Dataset& b, const BinGrid& grid,
                   std::string_view x, std::string_view y) {
  require_structure(a, b);
  return count_distance(bin_counts(a, grid, x, y), bin_counts(b, grid, x, y));
}

double dist_binned(const Dataset& a, const Dataset& b, std::size_t p,
                   std::size_t q, const VariableSelection& vars) {
  require_structure(a, b);
  if (p == 0 || q == 0) {
    throw PreconditionError("bin counts must be positive");
  }
  const auto ca = binned_columns(a, vars);
  const auto cb = binned_columns(b, vars);
  const SharedAxis ax(*ca.x, *cb.x, p);
  if (ca.y) {
    const SharedAxis ay(*ca.y, *cb.y, q);
    return count_distance(count_cells(a, *ca.x, ca.y, ax, &ay),
                          count_cells(b, *cb.x, cb.y, ax, &ay));
  }
  return count_distance(count_cells(a, *ca.x, nullptr, ax, nullptr),
                        count_cells(b, *cb.x, nullptr, ax, nullptr));
}

// ---- BX ----------------------------------------------------------------------

std::array<double, 3> quartile_gaps(const Dataset& data,
                                    const VariableSelection& vars) {
  const Variable& group =
      pick(data, vars.group, VariableKind::categorical, 0, "group");
  const Variable& value =
      pick(data, vars.y, VariableKind::continuous, 0, "value");
  if (group.levels().size() != 2) {
    throw SchemaError(fmt::format(
        "boxplot distance needs exactly 2 groups, '{}' has {}", group.name(),
        group.levels().size()));
  }
  const auto split = split_by_group(group, value);
  for (std::size_t g = 0; g < 2; ++g) {
    if (split.values[g].empty()) {
      throw PreconditionError(
          fmt::format("group '{}' has no observations", split.labels[g]));
    }
  }
  const Quartiles qa = quartiles(split.values[0]);
  const Quartiles qb = quartiles(split.values[1]);
  return {std::abs(qa.q1 - qb.q1), std::abs(qa.median - qb.median),
          std::abs(qa.q3 - qb.q3)};
}

double dist_boxplot(const Dataset& a, const Dataset& b,
                    const VariableSelection& vars) {
  require_structure(a, b);
  const auto ga = quartile_gaps(a, vars);
  const auto gb = quartile_gaps(b, vars);
  return std::sqrt(squared_gap(ga, gb));
}

// ---- RG ----------------------------------------------------------------------

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2) {
    throw PreconditionError("a line fit needs at least 2 points");
  }
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) {
    throw PreconditionError("a line fit needs spread in x");
  }
  const double slope = sxy / sxx;
  return {my - slope * mx, slope};
}

std::vector<LineFit> binned_regression(const Dataset& data, std::string_view x,
                                       std::string_view y, std::size_t bins,
                                       const Interval& range) {
  const auto xs = require_kind(data, x, VariableKind::continuous, "x").values();
  const auto ys = require_kind(data, y, VariableKind::continuous, "y").values();
  std::vector<std::vector<double>> bx(bins);
  std::vector<std::vector<double>> by(bins);
  for (std::size_t r = 0; r < data.rows(); ++r) {
    const std::size_t i = bin_index(xs[r], range, bins);
    bx[i].push_back(xs[r]);
    by[i].push_back(ys[r]);
  }
  std::vector<LineFit> fits;
  fits.reserve(bins);
  for (std::size_t i = 0; i < bins; ++i) {
    if (bx[i].size() < 2) {
      throw PreconditionError(fmt::format(
          "regression bin {} of {} holds {} point(s)", i + 1, bins, bx[i].size()));
    }
    try {
      fits.push_back(fit_line(bx[i], by[i]));
    } catch (const PreconditionError&) {
      throw PreconditionError(fmt::format(
          "regression bin {} of {} has no spread in x", i + 1, bins));
    }
  }
  return fits;
}

double dist_regression(const Dataset& a, const Dataset& b, std::size_t bins,
                       const VariableSelection& vars) {
  require_structure(a, b);
  if (bins == 0) {
    throw PreconditionError("regression bin count must be positive");
  }
  const Variable& xa = pick(a, vars.x, VariableKind::continuous, 0, "x");
  const Variable& ya = pick(a, vars.y, VariableKind::continuous,
                            vars.x.empty() ? 1 : 0, "y");
  if (&xa == &ya) {
    throw SchemaError("regression distance needs two distinct variables");
  }
  const Variable& xb = b.at(xa.name());
  const Interval range = combined_range({xa.values(), xb.values()});
  const auto fa = binned_regression(a, xa.name(), ya.name(), bins, range);
  const auto fb = binned_regression(b, xa.name(), ya.name(), bins, range);
  double sum = 0.0;
  for (std::size_t i = 0; i < bins; ++i) {
    const double d = fa[i].intercept - fb[i].intercept;
    sum += d * d;
  }
  for (std::size_t i = 0; i < bins; ++i) {
    const double d = fa[i].slope - fb[i].slope;
    sum += d * d;
  }
  return std::sqrt(sum);
}

// ---- MS / AS / CMS -------------------------------------------------------------

namespace {

struct ClusterPoints {
  const Variable* group;
  std::vector<std::span<const double>> coords;
};

ClusterPoints cluster_points(const Dataset& data, const VariableSelection& vars) {
  ClusterPoints out;
  out.group = &pick(data, vars.group, VariableKind::categorical, 0, "group");
  if (!vars.x.empty()) {
    out.coords.push_back(
        require_kind(data, vars.x, VariableKind::continuous, "x").values());
    if (!vars.y.empty()) {
      out.coords.push_back(
          require_kind(data, vars.y, VariableKind::continuous, "y").values());
    }
  } else {
    for (const auto& v : data.variables()) {
      if (v.is_continuous()) out.coords.push_back(v.values());
    }
    if (out.coords.empty() || out.coords.size() > 2) {
      throw SchemaError(fmt::format(
          "separation needs 1 or 2 continuous coordinates, found {}; name x/y",
          out.coords.size()));
    }
  }
  if (out.group->levels().size() < 2) {
    throw SchemaError(fmt::format("group '{}' needs at least 2 levels",
                                  out.group->name()));
  }
  return out;
}

double point_distance(const ClusterPoints& pts, std::size_t u, std::size_t v) {
  double sum = 0.0;
  for (const auto& c : pts.coords) {
    const double d = c[u] - c[v];
    sum += d * d;
  }
  return std::sqrt(sum);
}

}  // namespace

SeparationVector separation_vector(const Dataset& data, SeparationMode mode,
                                   const VariableSelection& vars) {
  const ClusterPoints pts = cluster_points(data, vars);
  const auto codes = pts.group->codes();
  const std::size_t g = pts.group->levels().size();
  const std::size_t n = data.rows();

  std::vector<std::size_t> sizes(g, 0);
  for (auto c : codes) ++sizes[c];
  for (std::size_t i = 0; i < g; ++i) {
    if (sizes[i] == 0) {
      throw PreconditionError(fmt::format("cluster '{}' is empty",
                                          pts.group->levels()[i]));
    }
  }

  SeparationVector out;
  out.labels.assign(pts.group->levels().begin(), pts.group->levels().end());
  out.values.assign(g, 0.0);

  if (mode == SeparationMode::cluster_mean) {
    const std::size_t dims = pts.coords.size();
    std::vector<std::vector<double>> centroid(g, std::vector<double>(dims, 0.0));
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t d = 0; d < dims; ++d) centroid[codes[r]][d] += pts.coords[d][r];
    }
    for (std::size_t i = 0; i < g; ++i) {
      for (auto& c : centroid[i]) c /= static_cast<double>(sizes[i]);
    }
    for (std::size_t i = 0; i < g; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < g; ++j) {
        if (j == i) continue;
        double sum = 0.0;
        for (std::size_t d = 0; d < dims; ++d) {
          const double diff = centroid[i][d] - centroid[j][d];
          sum += diff * diff;
        }
        best = std::min(best, std::sqrt(sum));
      }
      out.values[i] = best;
    }
    return out;
  }

  std::vector<double> best(g, std::numeric_limits<double>::infinity());
  std::vector<double> total(g, 0.0);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      if (codes[u] == codes[v]) continue;
      const double d = point_distance(pts, u, v);
      best[codes[u]] = std::min(best[codes[u]], d);
      best[codes[v]] = std::min(best[codes[v]], d);
      total[codes[u]] += d;
      total[codes[v]] += d;
    }
  }
  for (std::size_t i = 0; i < g; ++i) {
    if (mode == SeparationMode::min) {
      out.values[i] = best[i];
    } else {
      const double pairs =
          static_cast<double>(sizes[i]) * static_cast<double>(n - sizes[i]);
      out.values[i] = total[i] / pairs;
    }
  }
  return out;
}

double dist_separation(const Dataset& a, const Dataset& b, SeparationMode mode,
                       const VariableSelection& vars) {
  require_structure(a, b);
  const auto sa = separation_vector(a, mode, vars);
  const auto sb = separation_vector(b, mode, vars);
  std::map<std::string_view, double> by_label_a;
  std::map<std::string_view, double> by_label_b;
  for (std::size_t i = 0; i < sa.labels.size(); ++i) by_label_a[sa.labels[i]] = sa.values[i];
  for (std::size_t i = 0; i < sb.labels.size(); ++i) by_label_b[sb.labels[i]] = sb.values[i];
  if (by_label_a.size() != by_label_b.size()) {
    throw SchemaError("group level sets differ");
  }
  // Sorted label order so that d(a, b) and d(b, a) sum identically.
  double sum = 0.0;
  auto ib = by_label_b.begin();
  for (const auto& [label, va] : by_label_a) {
    if (ib->first != label) {
      throw SchemaError("group level sets differ");
    }
    const double d = va - ib->second;
    sum += d * d;
    ++ib;
  }
  return std::sqrt(sum);
}

// ---- dispatch ------------------------------------------------------------------

void validate_metric(const MetricKind& metric, const Dataset& data) {
  switch (metric.kind) {
    case MetricKind::Kind::binned: {
      if (metric.p == 0 || metric.q == 0) {
        throw PreconditionError("BN needs p >= 1 and q >= 1");
      }
      binned_columns(data, metric.vars);
      break;
    }
    case MetricKind::Kind::boxplot: {
      const Variable& group =
          pick(data, metric.vars.group, VariableKind::categorical, 0, "group");
      pick(data, metric.vars.y, VariableKind::continuous, 0, "value");
      if (group.levels().size() != 2) {
        throw SchemaError(fmt::format(
            "BX needs a 2-level group, '{}' has {}", group.name(),
            group.levels().size()));
      }
      break;
    }
    case MetricKind::Kind::regression: {
      if (metric.b == 0) throw PreconditionError("RG needs b >= 1");
      const Variable& x = pick(data, metric.vars.x, VariableKind::continuous, 0, "x");
      const Variable& y = pick(data, metric.vars.y, VariableKind::continuous,
                               metric.vars.x.empty() ? 1 : 0, "y");
      if (&x == &y) throw SchemaError("RG needs two distinct variables");
      break;
    }
    case MetricKind::Kind::min_separation:
    case MetricKind::Kind::avg_separation:
    case MetricKind::Kind::cluster_mean_separation:
      cluster_points(data, metric.vars);
      break;
  }
}

double distance(const Dataset& a, const Dataset& b, const MetricKind& metric) {
  switch (metric.kind) {
    case MetricKind::Kind::binned:
      return dist_binned(a, b, metric.p, metric.q, metric.vars);
    case MetricKind::Kind::boxplot:
      return dist_boxplot(a, b, metric.vars);
    case MetricKind::Kind::regression:
      return dist_regression(a, b, metric.b, metric.vars);
    case MetricKind::Kind::min_separation:
      return dist_separation(a, b, SeparationMode::min, metric.vars);
    case MetricKind::Kind::avg_separation:
      return dist_separation(a, b, SeparationMode::avg, metric.vars);
    case MetricKind::Kind::cluster_mean_separation:
      return dist_separation(a, b, SeparationMode::cluster_mean, metric.vars);
  }
  throw SchemaError("unknown metric kind");
}

}  // namespace lineup
