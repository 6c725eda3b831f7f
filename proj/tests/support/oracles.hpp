#pragma once

// Straightforward reference implementations used to cross-check the library.
// They favour obviousness over speed and share no code with it.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace lineup::oracle {

// Interpolated quantile at 1-based position 1 + (n - 1) * prob, found with
// nth_element on copies so no full sort is shared with the library.
inline double quantile(std::vector<double> v, double prob) {
  const double h = static_cast<double>(v.size() - 1) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  std::nth_element(v.begin(), v.begin() + static_cast<long>(lo), v.end());
  const double at_lo = v[lo];
  if (lo + 1 >= v.size()) return at_lo;
  const double at_hi = *std::min_element(v.begin() + static_cast<long>(lo) + 1, v.end());
  return at_lo + (h - static_cast<double>(lo)) * (at_hi - at_lo);
}

// Cell of `v` among `bins` equal strips of [lo, hi]: strip k covers
// [lo + k w, lo + (k + 1) w), the last strip also takes hi. Found by
// scanning the edges.
inline std::size_t cell(double v, double lo, double hi, std::size_t bins) {
  if (hi == lo) return 0;
  const double w = (hi - lo) / static_cast<double>(bins);
  for (std::size_t k = 0; k + 1 < bins; ++k) {
    if (v < lo + static_cast<double>(k + 1) * w) return k;
  }
  return bins - 1;
}

using Points = std::vector<std::pair<double, double>>;

// Euclidean distance between p x q count tables over the joint bounding box.
inline double binned(const Points& a, const Points& b, std::size_t p, std::size_t q) {
  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo;
  double ylo = xlo, yhi = -xlo;
  for (const Points* s : {&a, &b}) {
    for (auto [x, y] : *s) {
      xlo = std::min(xlo, x);
      xhi = std::max(xhi, x);
      ylo = std::min(ylo, y);
      yhi = std::max(yhi, y);
    }
  }
  std::map<std::pair<std::size_t, std::size_t>, long> diff;
  for (auto [x, y] : a) ++diff[{cell(x, xlo, xhi, p), cell(y, ylo, yhi, q)}];
  for (auto [x, y] : b) --diff[{cell(x, xlo, xhi, p), cell(y, ylo, yhi, q)}];
  double sum = 0.0;
  for (const auto& [key, d] : diff) sum += static_cast<double>(d) * static_cast<double>(d);
  return std::sqrt(sum);
}

struct Line {
  double intercept;
  double slope;
};

// Closed-form least squares from raw sums.
inline Line ols(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return {(sy - slope * sx) / n, slope};
}

// Stacked per-strip (intercept, slope) distance with strips over the joint
// x range.
inline double regression(const std::vector<double>& ax, const std::vector<double>& ay,
                         const std::vector<double>& bx, const std::vector<double>& by,
                         std::size_t bins) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double v : ax) lo = std::min(lo, v), hi = std::max(hi, v);
  for (double v : bx) lo = std::min(lo, v), hi = std::max(hi, v);
  auto fits = [&](const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<std::vector<double>> sx(bins), sy(bins);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const std::size_t k = cell(x[i], lo, hi, bins);
      sx[k].push_back(x[i]);
      sy[k].push_back(y[i]);
    }
    std::vector<Line> out;
    for (std::size_t k = 0; k < bins; ++k) out.push_back(ols(sx[k], sy[k]));
    return out;
  };
  const auto fa = fits(ax, ay);
  const auto fb = fits(bx, by);
  double sum = 0.0;
  for (std::size_t k = 0; k < bins; ++k) {
    sum += (fa[k].intercept - fb[k].intercept) * (fa[k].intercept - fb[k].intercept);
    sum += (fa[k].slope - fb[k].slope) * (fa[k].slope - fb[k].slope);
  }
  return std::sqrt(sum);
}

struct LabelledPoint {
  std::string label;
  double x;
  double y;
};

enum class Separation { min, avg, centroid };

// Per-label separation by enumerating every ordered pair of points.
inline std::map<std::string, double> separation(const std::vector<LabelledPoint>& pts,
                                                Separation mode) {
  std::map<std::string, double> out;
  std::map<std::string, std::vector<const LabelledPoint*>> members;
  for (const auto& p : pts) members[p.label].push_back(&p);
  if (mode == Separation::centroid) {
    std::map<std::string, std::pair<double, double>> centre;
    for (const auto& [label, ms] : members) {
      double sx = 0, sy = 0;
      for (const auto* m : ms) sx += m->x, sy += m->y;
      centre[label] = {sx / static_cast<double>(ms.size()),
                       sy / static_cast<double>(ms.size())};
    }
    for (const auto& [li, ci] : centre) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& [lj, cj] : centre) {
        if (li != lj) best = std::min(best, std::hypot(ci.first - cj.first, ci.second - cj.second));
      }
      out[li] = best;
    }
    return out;
  }
  for (const auto& [label, ms] : members) {
    double best = std::numeric_limits<double>::infinity();
    double total = 0.0;
    long count = 0;
    for (const auto* u : ms) {
      for (const auto& v : pts) {
        if (v.label == label) continue;
        const double d = std::hypot(u->x - v.x, u->y - v.y);
        best = std::min(best, d);
        total += d;
        ++count;
      }
    }
    out[label] = mode == Separation::min ? best : total / static_cast<double>(count);
  }
  return out;
}

inline double separation_distance(const std::vector<LabelledPoint>& a,
                                  const std::vector<LabelledPoint>& b, Separation mode) {
  const auto sa = separation(a, mode);
  const auto sb = separation(b, mode);
  double sum = 0.0;
  for (const auto& [label, v] : sa) sum += (v - sb.at(label)) * (v - sb.at(label));
  return std::sqrt(sum);
}

// Two-sample Kolmogorov-Smirnov statistic sup |F1 - F2|.
inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::vector<double> all = a;
  all.insert(all.end(), b.begin(), b.end());
  double d = 0.0;
  for (double t : all) {
    const double fa = static_cast<double>(std::upper_bound(a.begin(), a.end(), t) - a.begin()) /
                      static_cast<double>(a.size());
    const double fb = static_cast<double>(std::upper_bound(b.begin(), b.end(), t) - b.begin()) /
                      static_cast<double>(b.size());
    d = std::max(d, std::abs(fa - fb));
  }
  return d;
}

}  // namespace lineup::oracle
