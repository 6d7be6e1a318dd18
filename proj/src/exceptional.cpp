#include "rabi/exceptional.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

#include "rabi/heun.hpp"
#include "rabi/oracle.hpp"

namespace rabi {

namespace {

constexpr int kMinScanSteps = 200;
constexpr int kMaxScanN = 10;
constexpr int kBisectionCap = 200;
constexpr double kOracleMatchTol = 1e-6;
constexpr double kOracleTol = 1e-10;
constexpr double kBoundaryProbe = 1e-6;
constexpr int kCrossingGrid = 800;

void require_index(int n) {
  if (n < 1) throw std::invalid_argument("exceptional index N must be >= 1");
}

// The two component parameter sets and their truncation degrees.
struct Components {
  HeunParams plus;
  int plus_degree;
  HeunParams minus;
  int minus_degree;
};

Components components(int n, Branch branch, const RabiParams& p) {
  const Energy e = candidate_energy(n, branch, p);
  if (branch == Branch::Plus) {
    return {heun_params_plus(e, p), n, heun_params_minus(e, p), n - 1};
  }
  return {swap_family(heun_params_plus(e, p)), n - 1, swap_family(heun_params_minus(e, p)), n};
}

template <class F>
double bisect(F&& f, double lo, double hi, double flo) {
  for (int it = 0; it < kBisectionCap; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Roots of f on a grid: exact zeros at grid points and bisected sign changes.
template <class F>
std::vector<double> sign_change_roots(F&& f, const std::vector<double>& xs) {
  std::vector<double> roots;
  std::vector<double> fs(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) fs[i] = f(xs[i]);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(fs[i])) continue;
    if (fs[i] == 0.0) {
      roots.push_back(xs[i]);
      continue;
    }
    if (i + 1 >= xs.size() || !std::isfinite(fs[i + 1]) || fs[i + 1] == 0.0) continue;
    if ((fs[i] < 0.0) != (fs[i + 1] < 0.0)) roots.push_back(bisect(f, xs[i], xs[i + 1], fs[i]));
  }
  return roots;
}

double nearest_distance(const std::vector<double>& values, double x) {
  double best = std::numeric_limits<double>::infinity();
  for (const double v : values) best = std::min(best, std::abs(v - x));
  return best;
}

}  // namespace

Energy candidate_energy(int n, Branch branch, const RabiParams& p) {
  if (n < 0) throw std::invalid_argument("exceptional index N must be >= 0");
  const double shift = branch == Branch::Plus ? p.epsilon : -p.epsilon;
  return Energy{n - p.g * p.g + shift};
}

Family family_for(Branch branch) {
  return branch == Branch::Plus ? Family::First : Family::Second;
}

double constraint_residual(int n, Branch branch, const RabiParams& p) {
  require_index(n);
  const Components c = components(n, branch, p);
  return std::max(truncation_residual(c.plus, c.plus_degree),
                  truncation_residual(c.minus, c.minus_degree));
}

double constraint_value(int n, Branch branch, const RabiParams& p) {
  require_index(n);
  const Components c = components(n, branch, p);
  return branch == Branch::Plus ? signed_truncation_residual(c.plus, c.plus_degree)
                                : signed_truncation_residual(c.minus, c.minus_degree);
}

double closed_form_relation(int n, Branch branch, const RabiParams& p) {
  const double g2 = p.g * p.g, d2 = p.delta * p.delta;
  const double s = branch == Branch::Plus ? 1.0 : -1.0;
  if (n == 1) return d2 + 4.0 * g2 - (1.0 + 2.0 * s * p.epsilon);
  if (n == 2) {
    const double inner = 16.0 * g2 + 3.0 * d2 - 8.0 * s * p.epsilon - 6.0;
    return 64.0 * g2 + d2 * d2 + 4.0 * d2 + 4.0 - inner * inner;
  }
  throw std::invalid_argument("closed-form relation known only for N = 1, 2");
}

double closed_form_scale(int n, Branch branch, const RabiParams& p) {
  const double g2 = p.g * p.g, d2 = p.delta * p.delta;
  const double s = branch == Branch::Plus ? 1.0 : -1.0;
  if (n == 1) return std::max(1.0, d2 + 4.0 * g2 + std::abs(1.0 + 2.0 * s * p.epsilon));
  if (n == 2) {
    const double inner = 16.0 * g2 + 3.0 * d2 - 8.0 * s * p.epsilon - 6.0;
    return std::max(1.0, 64.0 * g2 + d2 * d2 + 4.0 * d2 + 4.0 + inner * inner);
  }
  throw std::invalid_argument("closed-form relation known only for N = 1, 2");
}

RabiParams with_axis(const RabiParams& p, SweepAxis axis, double value) {
  RabiParams out = p;
  (axis == SweepAxis::G ? out.g : out.epsilon) = value;
  return out;
}

std::vector<ExceptionalPoint> scan_exceptional(const RabiParams& templ, SweepAxis axis,
                                               const AxisRange& range, int n_max, double tol,
                                               bool verify_with_oracle) {
  if (n_max < 1 || n_max > kMaxScanN) {
    throw std::invalid_argument("scan_exceptional: n_max must be in [1, 10]");
  }
  if (range.steps < kMinScanSteps) {
    throw std::invalid_argument("scan_exceptional: sweep grid needs at least 200 points");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("scan_exceptional: tol must be positive");

  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(range.steps));
  for (int i = 0; i < range.steps; ++i) {
    const double x = range.at(i);
    if (axis == SweepAxis::G && x == 0.0) continue;
    xs.push_back(x);
  }

  std::vector<ExceptionalPoint> out;
  for (int n = 1; n <= n_max; ++n) {
    for (const Branch b : {Branch::Plus, Branch::Minus}) {
      const auto f = [&](double x) { return constraint_value(n, b, with_axis(templ, axis, x)); };
      for (const double x : sign_change_roots(f, xs)) {
        const RabiParams p = with_axis(templ, axis, x);
        const double res = constraint_residual(n, b, p);
        if (!(res <= tol)) continue;
        ExceptionalPoint pt;
        pt.n = n;
        pt.branch = b;
        pt.energy = candidate_energy(n, b, p);
        pt.constraint_residual = res;
        pt.family = family_for(b);
        pt.axis_value = x;
        pt.params = p;
        out.push_back(pt);
      }
    }
  }

  std::sort(out.begin(), out.end(), [](const ExceptionalPoint& a, const ExceptionalPoint& b) {
    return std::tie(a.axis_value, a.n, a.branch) < std::tie(b.axis_value, b.n, b.branch);
  });

  if (verify_with_oracle) {
    for (auto& pt : out) {
      const OracleResult r = eigen(pt.params, 2 * pt.n + 6, kOracleTol);
      pt.oracle_delta = nearest_distance(r.eigenvalues, pt.energy.value);
      pt.verified = pt.oracle_delta <= kOracleMatchTol;
    }
  }
  return out;
}

double pair_separation(const ExceptionalPoint& plus, const ExceptionalPoint& minus) {
  if (plus.n != minus.n) throw std::invalid_argument("pair_separation: N differs");
  if (plus.branch == minus.branch) {
    throw std::invalid_argument("pair_separation: points must be on opposite branches");
  }
  const auto& hi = plus.branch == Branch::Plus ? plus : minus;
  const auto& lo = plus.branch == Branch::Plus ? minus : plus;
  return hi.energy.value - lo.energy.value;
}

CrossingPoint find_crossings(double delta, int n1, int n2, double tol, double g_max) {
  if (!(n1 >= 1 && n2 > n1)) throw std::invalid_argument("find_crossings: need N2 > N1 >= 1");
  if (!(g_max > 0.0)) throw std::invalid_argument("find_crossings: g_max must be positive");

  CrossingPoint cp;
  cp.n1 = n1;
  cp.n2 = n2;
  cp.delta = delta;
  cp.epsilon_star = 0.5 * (n2 - n1);

  RabiParams p;
  p.delta = delta;
  p.epsilon = cp.epsilon_star;
  const auto at = [&p](double g) {
    RabiParams q = p;
    q.g = g;
    return q;
  };
  const auto fill = [&](double g, CrossingStatus status) {
    const RabiParams q = at(g);
    cp.g_star = g;
    cp.delta_relation = delta * delta + 4.0 * g * g;
    cp.energy = candidate_energy(n1, Branch::Plus, q);
    cp.plus_residual = constraint_residual(n1, Branch::Plus, q);
    cp.minus_residual = constraint_residual(n2, Branch::Minus, q);
    cp.status = status;
  };

  std::vector<double> gs;
  for (int i = 1; i <= kCrossingGrid; ++i) gs.push_back(g_max * i / kCrossingGrid);
  const auto f = [&](double g) { return constraint_value(n1, Branch::Plus, at(g)); };
  for (const double g : sign_change_roots(f, gs)) {
    const RabiParams q = at(g);
    if (constraint_residual(n1, Branch::Plus, q) <= tol &&
        constraint_residual(n2, Branch::Minus, q) <= tol) {
      fill(g, CrossingStatus::Found);
      return cp;
    }
  }

  const RabiParams probe = at(kBoundaryProbe);
  if (constraint_residual(n1, Branch::Plus, probe) <= tol &&
      constraint_residual(n2, Branch::Minus, probe) <= tol) {
    fill(0.0, CrossingStatus::Boundary);
    cp.plus_residual = constraint_residual(n1, Branch::Plus, probe);
    cp.minus_residual = constraint_residual(n2, Branch::Minus, probe);
  }
  return cp;
}

IdentityCheck factorization_identity_check(double g, double delta) {
  const double g2 = g * g, d2 = delta * delta;
  const double eps = 0.5 * (d2 + 4.0 * g2 - 1.0);
  const double inner = 16.0 * g2 + 3.0 * d2 + 8.0 * eps - 6.0;
  const double lhs = 64.0 * g2 + d2 * d2 + 4.0 * d2 + 4.0 - inner * inner;
  const double rhs = -16.0 * (d2 + 4.0 * g2 - 2.0) * (3.0 * d2 + 16.0 * g2 - 3.0);
  return {std::abs(lhs - rhs), std::abs(rhs)};
}

std::string_view to_string(CrossingStatus s) {
  switch (s) {
    case CrossingStatus::Found:
      return "found";
    case CrossingStatus::Boundary:
      return "boundary";
    case CrossingStatus::NotFound:
      return "not-found";
  }
  return "?";
}

}  // namespace rabi
