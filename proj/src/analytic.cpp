#include "rabi/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "rabi/errors.hpp"

namespace rabi {

namespace {

constexpr double kScalePoleTol = 1e-12;

void require_coupling(const RabiParams& p) {
  if (p.g == 0.0) {
    throw UnsupportedParameter("analytic solutions need g != 0; use the diagonalization oracle");
  }
}

double coordinate_for(Family f, double g, double z) {
  return f == Family::First ? (g - z) / (2.0 * g) : (g + z) / (2.0 * g);
}

double slope_for(Family f, double g) {
  return f == Family::First ? -1.0 / (2.0 * g) : 1.0 / (2.0 * g);
}

double sign_for(Family f) { return f == Family::First ? -1.0 : 1.0; }

ComponentValue component_value(const HeunSeries& series, double scale, Family f, double g,
                               double z) {
  const HeunEval h = evaluate(series, coordinate_for(f, g, z));
  const double s = sign_for(f);
  const double ex = std::exp(s * g * z);
  ComponentValue out;
  out.value = scale * ex * h.value;
  out.derivative = scale * ex * (s * g * h.value + h.derivative * slope_for(f, g));
  out.status = h.status;
  return out;
}

bool usable(const HeunSeries& s) {
  return s.status() == SeriesStatus::Converged ||
         s.status() == SeriesStatus::TruncatedPolynomial;
}

bool usable(const ComponentValue& v) {
  return v.status == SeriesStatus::Converged ||
         v.status == SeriesStatus::TruncatedPolynomial;
}

// psi^2 d(psi^1)/dz - psi^1 d(psi^2)/dz for one component, given both series.
std::optional<double> component_wronskian(const HeunSeries& first, double first_scale,
                                          const HeunSeries& second, double second_scale,
                                          double g, double z) {
  if (!usable(first) || !usable(second)) return std::nullopt;
  try {
    const auto a = component_value(first, first_scale, Family::First, g, z);
    const auto b = component_value(second, second_scale, Family::Second, g, z);
    if (!usable(a) || !usable(b)) return std::nullopt;
    return b.value * a.derivative - a.value * b.derivative;
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

double SolutionPair::coordinate(double z) const { return coordinate_for(family, params.g, z); }

double SolutionPair::coordinate_slope() const { return slope_for(family, params.g); }

double SolutionPair::exponent_sign() const { return sign_for(family); }

SolutionPair build_pair(Family family, Energy e, const RabiParams& p) {
  require_coupling(p);
  const double g2 = p.g * p.g;
  const HeunParams hp_plus = heun_params_plus(e, p);
  const HeunParams hp_minus = heun_params_minus(e, p);

  SolutionPair pair;
  pair.family = family;
  pair.energy = e;
  pair.params = p;
  if (family == Family::First) {
    const double denom = e.value + g2 + p.epsilon;
    if (std::abs(denom) < kScalePoleTol) throw PoleError("E + g^2 + epsilon = 0");
    pair.scale_plus = 1.0;
    pair.scale_minus = p.delta / denom;
    pair.plus_series = build_series(hp_plus);
    pair.minus_series = build_series(hp_minus);
  } else {
    const double denom = e.value + g2 - p.epsilon;
    if (std::abs(denom) < kScalePoleTol) throw PoleError("E + g^2 - epsilon = 0");
    pair.scale_plus = p.delta / denom;
    pair.scale_minus = 1.0;
    pair.plus_series = build_series(swap_family(hp_plus));
    pair.minus_series = build_series(swap_family(hp_minus));
  }
  return pair;
}

ComponentValue eval_component(const SolutionPair& pair, Component which, double z) {
  return component_value(pair.series(which), pair.scale(which), pair.family, pair.params.g, z);
}

std::optional<double> wronskian_plus(Energy e, const RabiParams& p, double z) {
  require_coupling(p);
  const double denom = e.value + p.g * p.g - p.epsilon;
  if (std::abs(denom) < kScalePoleTol) return std::nullopt;
  const HeunParams hp = heun_params_plus(e, p);
  return component_wronskian(build_series(hp), 1.0, build_series(swap_family(hp)),
                             p.delta / denom, p.g, z);
}

WronskianSample wronskian(Energy e, const RabiParams& p, double z) {
  require_coupling(p);
  WronskianSample out;
  out.energy = e;
  const auto wp = wronskian_plus(e, p, z);

  std::optional<double> wm;
  const double denom = e.value + p.g * p.g + p.epsilon;
  if (std::abs(denom) >= kScalePoleTol) {
    const HeunParams hp = heun_params_minus(e, p);
    wm = component_wronskian(build_series(hp), p.delta / denom, build_series(swap_family(hp)),
                             1.0, p.g, z);
  }

  const double nan = std::numeric_limits<double>::quiet_NaN();
  out.w_plus = wp.value_or(nan);
  out.w_minus = wm.value_or(nan);
  out.reliable = wp.has_value() && wm.has_value();
  return out;
}

std::vector<double> exceptional_candidates(const RabiParams& p, double lo, double hi) {
  std::vector<double> out;
  if (!(lo <= hi)) return out;
  const double g2 = p.g * p.g;
  const double eps = std::abs(p.epsilon);
  const int n_lo = std::max(0, static_cast<int>(std::floor(lo + g2 - eps)));
  const int n_hi = static_cast<int>(std::ceil(hi + g2 + eps));
  for (int n = n_lo; n <= n_hi; ++n) {
    for (const double e : {n - g2 + p.epsilon, n - g2 - p.epsilon}) {
      if (e >= lo && e <= hi) out.push_back(e);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

SpectrumPoint regular_point(double e, double residual) {
  SpectrumPoint pt;
  pt.energy = Energy{e};
  pt.kind = LevelKind::Regular;
  pt.residual = residual;
  pt.provenance = Provenance::Wronskian;
  return pt;
}

// Bisected sign changes of f between consecutive samples. A bracket is kept
// only if |f| at the refined point is below both endpoint values; across a
// pole it grows instead.
template <class F>
void bracket_roots(F&& f, const std::vector<double>& grid, double tol, int max_bisections,
                   std::vector<SpectrumPoint>& roots) {
  std::vector<std::pair<double, double>> samples;  // reliable (E, f) only
  for (const double e : grid) {
    if (auto v = f(e)) samples.emplace_back(e, *v);
  }
  for (std::size_t j = 0; j < samples.size(); ++j) {
    const auto [ej, wj] = samples[j];
    if (wj == 0.0) {
      if (roots.empty() || roots.back().energy.value != ej) roots.push_back(regular_point(ej, 0.0));
      continue;
    }
    if (j + 1 >= samples.size()) continue;
    const auto [ek, wk] = samples[j + 1];
    if (wk == 0.0 || (wj < 0.0) == (wk < 0.0)) continue;

    double lo = ej, hi = ek, wlo = wj;
    bool ok = true;
    for (int it = 0; it < max_bisections && (hi - lo) > tol; ++it) {
      const double mid = 0.5 * (lo + hi);
      const auto wm = f(mid);
      if (!wm) {
        ok = false;
        break;
      }
      if (*wm == 0.0) {
        lo = hi = mid;
        break;
      }
      if ((*wm < 0.0) == (wlo < 0.0)) {
        lo = mid;
        wlo = *wm;
      } else {
        hi = mid;
      }
    }
    if (!ok) continue;
    const double root = 0.5 * (lo + hi);
    const auto wr = f(root);
    if (!wr) continue;
    if (std::abs(*wr) > std::min(std::abs(wj), std::abs(wk))) continue;
    roots.push_back(regular_point(root, std::abs(*wr) / std::max(std::abs(wj), std::abs(wk))));
  }
}

void sort_points(std::vector<SpectrumPoint>& pts) {
  std::sort(pts.begin(), pts.end(),
            [](const SpectrumPoint& x, const SpectrumPoint& y) { return x.energy < y.energy; });
}

void check_search_args(double e_min, double e_max, int grid_n, double tol) {
  if (!(e_min < e_max)) throw std::invalid_argument("root search: empty energy range");
  if (grid_n < 100) throw std::invalid_argument("root search: grid_n must be >= 100");
  if (!(tol > 0.0)) throw std::invalid_argument("root search: tol must be positive");
}

// Merged windows [c - w, c + w] with the candidates each one contains.
struct Window {
  double lo;
  double hi;
  std::vector<double> centers;
};

std::vector<Window> exclusion_windows(const RabiParams& p, double e_min, double e_max, double w) {
  std::vector<Window> out;
  for (const double c : exceptional_candidates(p, e_min - w, e_max + w)) {
    if (!out.empty() && c - w <= out.back().hi) {
      out.back().hi = c + w;
      out.back().centers.push_back(c);
    } else {
      out.push_back({c - w, c + w, {c}});
    }
  }
  return out;
}

}  // namespace

std::vector<SpectrumPoint> find_regular_spectrum(const RabiParams& p, double e_min,
                                                 double e_max, int grid_n, double tol,
                                                 const RegularSearchOptions& opts) {
  check_search_args(e_min, e_max, grid_n, tol);
  require_coupling(p);

  // Segments of [e_min, e_max] outside the exclusion windows.
  std::vector<std::pair<double, double>> segments;
  double start = e_min;
  if (!opts.suppress_exclusion && opts.exclusion_half_width > 0.0) {
    for (const auto& win : exclusion_windows(p, e_min, e_max, opts.exclusion_half_width)) {
      if (win.hi <= start) continue;
      if (win.lo > start) segments.emplace_back(start, std::min(win.lo, e_max));
      start = std::max(start, win.hi);
      if (start >= e_max) break;
    }
  }
  if (start < e_max) segments.emplace_back(start, e_max);

  const auto w_plus = [&p](double e) { return wronskian_plus(Energy{e}, p, 0.0); };
  const double step = (e_max - e_min) / (grid_n - 1);

  std::vector<SpectrumPoint> roots;
  for (const auto& [a, b] : segments) {
    if (!(b > a)) continue;
    std::vector<double> grid{a};
    const int i0 = std::max(0, static_cast<int>(std::floor((a - e_min) / step)));
    for (int i = i0; i < grid_n; ++i) {
      const double e = e_min + i * step;
      if (e <= a) continue;
      if (e >= b) break;
      grid.push_back(e);
    }
    grid.push_back(b);
    bracket_roots(w_plus, grid, tol, opts.max_bisections, roots);
  }
  sort_points(roots);
  return roots;
}

std::vector<SpectrumPoint> find_window_roots(const RabiParams& p, double e_min, double e_max,
                                             double half_width, int samples, double tol) {
  check_search_args(e_min, e_max, samples, tol);
  if (!(half_width > 0.0)) throw std::invalid_argument("window search: half_width must be > 0");
  require_coupling(p);

  std::vector<SpectrumPoint> roots;
  for (const auto& win : exclusion_windows(p, e_min, e_max, half_width)) {
    const double lo = std::max(win.lo, e_min), hi = std::min(win.hi, e_max);
    if (!(hi > lo)) continue;
    const auto f = [&](double e) -> std::optional<double> {
      auto w = wronskian_plus(Energy{e}, p, 0.0);
      if (!w) return std::nullopt;
      double v = *w;
      for (const double c : win.centers) v *= e - c;
      return v;
    };
    const int n = std::max(samples, static_cast<int>(samples * (hi - lo) / (2.0 * half_width)));
    std::vector<double> grid;
    for (int i = 0; i < n; ++i) grid.push_back(lo + (hi - lo) * i / (n - 1));
    std::vector<SpectrumPoint> found;
    bracket_roots(f, grid, tol, 200, found);
    // Roots on the window edge belong to the outer search.
    for (const auto& r : found) {
      if (r.energy.value > win.lo && r.energy.value < win.hi) roots.push_back(r);
    }
  }
  sort_points(roots);
  return roots;
}

}  // namespace rabi
