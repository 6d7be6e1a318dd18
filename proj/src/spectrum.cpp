#include "rabi/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <tuple>

#include "rabi/analytic.hpp"

namespace rabi {

namespace {

constexpr int kMaxCoverLevels = 512;
constexpr double kMarkerHalfWindow = 0.25;
constexpr double kWindowMargin = 0.5;

std::vector<double> converged_levels(const OracleResult& r) {
  return {r.eigenvalues.begin(), r.eigenvalues.begin() + r.converged_count};
}

double nearest_distance(const std::vector<double>& values, double x) {
  double best = std::numeric_limits<double>::infinity();
  for (const double v : values) best = std::min(best, std::abs(v - x));
  return best;
}

int count_within(const std::vector<double>& values, double x, double tol) {
  return static_cast<int>(
      std::count_if(values.begin(), values.end(), [&](double v) { return std::abs(v - x) <= tol; }));
}

void sort_by_energy(std::vector<SpectrumPoint>& pts) {
  std::stable_sort(pts.begin(), pts.end(), [](const SpectrumPoint& a, const SpectrumPoint& b) {
    return a.energy < b.energy;
  });
}

// Collapses points closer than tol; exceptional entries win the label.
std::vector<SpectrumPoint> collapse(std::vector<SpectrumPoint> pts, double tol) {
  sort_by_energy(pts);
  std::vector<SpectrumPoint> out;
  for (const auto& pt : pts) {
    if (!out.empty() && pt.energy.value - out.back().energy.value <= tol) {
      SpectrumPoint& keep = out.back();
      const int deg = keep.degeneracy + pt.degeneracy;
      if (keep.kind == LevelKind::Regular && pt.kind == LevelKind::Exceptional) keep = pt;
      keep.degeneracy = deg;
      keep.residual = std::max(keep.residual, pt.residual);
      continue;
    }
    out.push_back(pt);
  }
  return out;
}

std::vector<SpectrumPoint> oracle_only(const std::vector<double>& levels, double e_min,
                                       double e_max, double tol) {
  std::vector<SpectrumPoint> pts;
  for (const double e : levels) {
    if (e < e_min || e > e_max) continue;
    SpectrumPoint pt;
    pt.energy = Energy{e};
    pt.provenance = Provenance::OracleOnly;
    pt.oracle_delta = 0.0;
    pts.push_back(pt);
  }
  return collapse(std::move(pts), tol);
}

}  // namespace

OracleResult oracle_covering(const RabiParams& p, double e_max, double tol) {
  const double reach = e_max + p.g * p.g + std::abs(p.epsilon) + std::abs(p.delta) + 2.0;
  int k = std::max(4, static_cast<int>(std::ceil(2.0 * reach)));
  for (;;) {
    OracleResult r = eigen(p, k, tol);
    const bool covered = r.converged_count == k && r.eigenvalues[k - 1] > e_max;
    if (covered || r.converged_count < k || 2 * k > kMaxCoverLevels) return r;
    k *= 2;
  }
}

int level_count(const std::vector<SpectrumPoint>& points) {
  int n = 0;
  for (const auto& pt : points) n += pt.degeneracy;
  return n;
}

std::vector<SpectrumPoint> assemble(const RabiParams& p, double e_min, double e_max, int n_max,
                                    const AssembleOptions& opts, const OracleResult* oracle) {
  if (!(e_min < e_max)) throw std::invalid_argument("assemble: empty energy window");

  OracleResult own;
  if (oracle == nullptr || oracle->converged_count < 1 ||
      oracle->eigenvalues[oracle->converged_count - 1] <= e_max) {
    own = oracle_covering(p, e_max, opts.oracle_tol);
    oracle = &own;
  }
  const std::vector<double> levels = converged_levels(*oracle);

  if (p.g == 0.0) return oracle_only(levels, e_min, e_max, opts.dedup_tol);

  RegularSearchOptions search;
  search.exclusion_half_width = opts.exclusion_half_width;
  std::vector<SpectrumPoint> pts =
      find_regular_spectrum(p, e_min, e_max, opts.grid_n, opts.root_tol, search);
  std::vector<SpectrumPoint> hidden;
  if (opts.exclusion_half_width > 0.0) {
    hidden = find_window_roots(p, e_min, e_max, opts.exclusion_half_width,
                               std::max(100, opts.window_samples), opts.root_tol);
  }
  std::vector<SpectrumPoint> exceptional;

  for (int n = 1; n <= n_max; ++n) {
    for (const Branch b : {Branch::Plus, Branch::Minus}) {
      const Energy e = candidate_energy(n, b, p);
      if (e.value < e_min || e.value > e_max) continue;
      const double res = constraint_residual(n, b, p);
      if (!(res <= opts.truncation_tol)) continue;
      SpectrumPoint pt;
      pt.energy = e;
      pt.kind = LevelKind::Exceptional;
      pt.n = n;
      pt.branch = b;
      pt.residual = res;
      pt.provenance = Provenance::Truncation;
      exceptional.push_back(pt);
    }
  }
  for (const auto& h : hidden) {
    const bool is_exceptional =
        std::any_of(exceptional.begin(), exceptional.end(), [&](const SpectrumPoint& x) {
          return std::abs(x.energy.value - h.energy.value) <= opts.match_tol;
        });
    if (!is_exceptional) pts.push_back(h);
  }
  pts.insert(pts.end(), exceptional.begin(), exceptional.end());

  pts = collapse(std::move(pts), opts.dedup_tol);
  for (auto& pt : pts) {
    pt.oracle_delta = nearest_distance(levels, pt.energy.value);
    pt.degeneracy = std::max(pt.degeneracy, count_within(levels, pt.energy.value, opts.dedup_tol));
    pt.flagged = !(pt.oracle_delta <= opts.match_tol);
  }

  // Greedy one-to-one assignment of oracle levels to point slots.
  std::vector<int> free_slots;
  for (const auto& pt : pts) free_slots.push_back(pt.degeneracy);
  std::vector<SpectrumPoint> gaps;
  for (const double e : levels) {
    if (e < e_min || e > e_max) continue;
    std::size_t best = pts.size();
    double best_d = opts.gap_tol;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double d = std::abs(pts[i].energy.value - e);
      if (free_slots[i] > 0 && d <= best_d) {
        best = i;
        best_d = d;
      }
    }
    if (best < pts.size()) {
      --free_slots[best];
      continue;
    }
    SpectrumPoint gap;
    gap.energy = Energy{e};
    gap.provenance = Provenance::OracleAssisted;
    gap.oracle_delta = 0.0;
    gap.flagged = true;
    gaps.push_back(gap);
  }
  pts.insert(pts.end(), gaps.begin(), gaps.end());
  sort_by_energy(pts);
  return pts;
}

SweepResult sweep(const RabiParams& templ, SweepAxis axis, const AxisRange& range,
                  const SweepOptions& opts) {
  if (range.steps < 2) throw std::invalid_argument("sweep: need at least 2 steps");
  if (opts.levels < 1) throw std::invalid_argument("sweep: levels must be >= 1");

  SweepResult out;
  out.axis = axis;
  out.templ = templ;
  out.range = range;
  out.options = opts;

  for (int i = 0; i < range.steps; ++i) {
    const double x = range.at(i);
    const RabiParams p = with_axis(templ, axis, x);
    out.axis_values.push_back(x);
    try {
      const OracleResult r = eigen(p, opts.levels + 1, opts.assemble.oracle_tol);
      double lo = 0.0, hi = 0.0;
      if (opts.window) {
        std::tie(lo, hi) = *opts.window;
      } else {
        lo = r.eigenvalues.front() - kWindowMargin;
        hi = 0.5 * (r.eigenvalues[opts.levels - 1] + r.eigenvalues[opts.levels]);
      }
      out.windows.emplace_back(lo, hi);
      out.levels.push_back(assemble(p, lo, hi, opts.n_max, opts.assemble, &r));
    } catch (const std::exception& ex) {
      if (out.windows.size() < out.axis_values.size()) out.windows.emplace_back(0.0, 0.0);
      out.levels.emplace_back();
      out.failures.push_back({x, ex.what()});
    }
  }

  try {
    const AxisRange marker_range{range.lo, range.hi, std::max(opts.marker_steps, range.steps)};
    for (const auto& ep : scan_exceptional(templ, axis, marker_range, opts.n_max,
                                           opts.assemble.truncation_tol, true)) {
      SweepMarker m;
      m.point = ep;
      const double e = ep.energy.value;
      const auto pts =
          assemble(ep.params, e - kMarkerHalfWindow, e + kMarkerHalfWindow, opts.n_max, opts.assemble);
      for (const auto& pt : pts) {
        if (std::abs(pt.energy.value - e) <= opts.assemble.dedup_tol) {
          m.degeneracy = std::max(m.degeneracy, pt.degeneracy);
        }
      }
      out.markers.push_back(m);
    }
  } catch (const std::exception& ex) {
    out.failures.push_back({std::numeric_limits<double>::quiet_NaN(),
                            std::string("exceptional scan: ") + ex.what()});
  }
  return out;
}

std::string_view to_string(Branch b) { return b == Branch::Plus ? "plus" : "minus"; }

std::string_view to_string(LevelKind k) {
  return k == LevelKind::Regular ? "regular" : "exceptional";
}

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::Wronskian:
      return "wronskian";
    case Provenance::Truncation:
      return "truncation";
    case Provenance::OracleAssisted:
      return "oracle-assisted";
    case Provenance::OracleOnly:
      return "oracle-only";
  }
  return "?";
}

std::string_view to_string(SweepAxis a) { return a == SweepAxis::G ? "g" : "epsilon"; }

}  // namespace rabi
