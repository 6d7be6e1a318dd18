#include "rabi/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <random>
#include <sstream>

#include "rabi/analytic.hpp"
#include "rabi/errors.hpp"
#include "rabi/exceptional.hpp"
#include "rabi/heun.hpp"
#include "rabi/oracle.hpp"
#include "rabi/spectrum.hpp"
#include "rabi/states.hpp"

namespace rabi {

namespace {

struct Outcome {
  bool passed = true;
  std::ostringstream detail;
  std::vector<std::string> failed;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      failed.push_back(what);
      passed = false;
    }
  }

  [[nodiscard]] std::string text() const {
    std::string out = detail.str();
    while (!out.empty() && out.back() == ' ') out.pop_back();
    if (!failed.empty()) {
      out += out.empty() ? "failed: " : " | failed: ";
      for (std::size_t i = 0; i < failed.size(); ++i) out += (i ? ", " : "") + failed[i];
    }
    return out;
  }
};

class Suite {
 public:
  explicit Suite(const AcceptanceOptions& o) : opts_(o) {}

  double tol(double nominal) const { return opts_.tol_override.value_or(nominal); }
  std::uint64_t seed() const { return opts_.seed; }

 private:
  AcceptanceOptions opts_;
};

std::string sci(double x) {
  std::ostringstream s;
  s << std::scientific << std::setprecision(2) << x;
  return s.str();
}

std::string fixed(double x, int digits = 12) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << x;
  return s.str();
}

double nearest(const std::vector<double>& values, double x) {
  double best = std::numeric_limits<double>::infinity();
  for (const double v : values) best = std::min(best, std::abs(v - x));
  return best;
}

RabiParams params(double g, double delta, double eps) {
  RabiParams p;
  p.g = g;
  p.delta = delta;
  p.epsilon = eps;
  return p;
}

// 1. Exceptional point at (0.2, 0.8, 0.1).
void exceptional_reference(const Suite& s, Outcome& o) {
  const RabiParams p = params(0.2, 0.8, 0.1);
  const auto pts = assemble(p, -1.5, 1.5, 4);
  const auto it = std::find_if(pts.begin(), pts.end(), [](const SpectrumPoint& q) {
    return q.kind == LevelKind::Exceptional && q.n == 1 && q.branch == Branch::Minus;
  });
  o.require(it != pts.end(), "Exceptional(N=1, minus) reported");
  if (it == pts.end()) return;
  const double e = it->energy.value;
  o.require(std::abs(e - 0.86) <= s.tol(1e-12), "E = 0.86");

  const OracleResult r = eigen(p, 4, 1e-12);
  const double od = nearest(r.eigenvalues, e);
  o.require(od <= s.tol(1e-8), "oracle match within 1e-8");
  o.require(r.cutoff_used <= 160, "oracle cutoff <= 160");

  RegularSearchOptions wide;
  wide.suppress_exclusion = true;
  const auto roots = find_regular_spectrum(p, -1.5, 1.5, 2000, 1e-12, wide);
  double closest = std::numeric_limits<double>::infinity();
  for (const auto& q : roots) closest = std::min(closest, std::abs(q.energy.value - e));
  o.require(closest > 1e-3, "no Wronskian zero within 1e-3");
  o.detail << "E=" << fixed(e) << " oracle_delta=" << sci(od) << " cutoff=" << r.cutoff_used
           << " nearest_root_distance=" << fixed(closest, 6);
}

// 2. Regular spectrum vs oracle.
void regular_vs_oracle(const Suite& s, Outcome& o) {
  for (const double g : {0.1, 0.4}) {
    const RabiParams p = params(g, 0.8, 0.1);
    const auto roots = find_regular_spectrum(p, -1.5, 1.5, 2000, 1e-12);
    const OracleResult r = eigen(p, 4, 1e-12);
    o.require(roots.size() == 4, "four roots at g=" + fixed(g, 1));
    double worst = 0.0;
    for (std::size_t i = 0; i < std::min<std::size_t>(roots.size(), 4); ++i) {
      worst = std::max(worst, std::abs(roots[i].energy.value - r.eigenvalues[i]));
    }
    o.require(worst <= s.tol(1e-6), "roots within 1e-6 of oracle at g=" + fixed(g, 1));
    o.detail << "g=" << fixed(g, 1) << ": roots=" << roots.size() << " max_dev=" << sci(worst)
             << "  ";
  }
}

// 3. Crossing at epsilon = 1/2.
void crossing(const Suite& s, Outcome& o) {
  const CrossingPoint cp = find_crossings(0.8, 1, 2);
  const double g_ref = 0.5 * std::sqrt(2.0 - 0.64);
  o.require(cp.status == CrossingStatus::Found, "crossing found");
  o.require(cp.epsilon_star == 0.5, "epsilon* = 0.5");
  o.require(std::abs(cp.g_star - g_ref) <= s.tol(1e-9), "g* within 1e-9");

  const OracleResult r = eigen(params(cp.g_star, 0.8, cp.epsilon_star), 8, 1e-12);
  const double e_ref = 1.5 - cp.g_star * cp.g_star;
  double split = std::numeric_limits<double>::infinity();
  double at = 0.0;
  for (std::size_t i = 0; i + 1 < r.eigenvalues.size(); ++i) {
    const double mid = 0.5 * (r.eigenvalues[i] + r.eigenvalues[i + 1]);
    if (std::abs(mid - e_ref) <= 1e-3 && r.eigenvalues[i + 1] - r.eigenvalues[i] < split) {
      split = r.eigenvalues[i + 1] - r.eigenvalues[i];
      at = mid;
    }
  }
  o.require(split <= s.tol(1e-6), "oracle pair within 1e-6");
  o.require(std::abs(at - e_ref) <= s.tol(1e-6) && std::abs(e_ref - 1.16) <= s.tol(1e-6),
            "pair at E = 1.16");
  o.detail << "g*=" << fixed(cp.g_star, 14) << " |g*-ref|=" << sci(std::abs(cp.g_star - g_ref))
           << " E=" << fixed(at, 10) << " splitting=" << sci(split);
}

// 4. Unified energy form along g sweeps.
void unified_form(const Suite& s, Outcome& o) {
  double worst = 0.0;
  std::size_t count = 0;
  bool verified = true;
  for (const double eps : {0.0, 0.1, 0.5}) {
    const RabiParams t = params(0.0, 0.8, eps);
    for (const auto& pt : scan_exceptional(t, SweepAxis::G, {0.05, 1.2, 400}, 4)) {
      const double sign = pt.branch == Branch::Plus ? 1.0 : -1.0;
      const double g2 = pt.params.g * pt.params.g;
      worst = std::max(worst, std::abs(pt.energy.value + g2 - sign * eps - pt.n));
      verified = verified && pt.verified;
      ++count;
    }
  }
  o.require(count > 0, "exceptional points found");
  o.require(worst <= s.tol(1e-12), "|E + g^2 -+ eps - N| <= 1e-12");
  o.require(verified, "every point matched by the oracle within 1e-6");
  o.detail << "points=" << count << " max_dev=" << sci(worst);
}

// 5. Pair separation.
void separation(const Suite& s, Outcome& o) {
  double worst = 0.0;
  std::size_t pairs = 0;
  for (const double eps : {0.05, 0.1, 0.2}) {
    const RabiParams t = params(0.0, 0.8, eps);
    for (const auto& pt : scan_exceptional(t, SweepAxis::G, {0.05, 1.2, 400}, 4, kExceptionalTol,
                                           false)) {
      ExceptionalPoint partner = pt;
      partner.branch = pt.branch == Branch::Plus ? Branch::Minus : Branch::Plus;
      partner.energy = candidate_energy(pt.n, partner.branch, pt.params);
      const double sep = pt.branch == Branch::Plus ? pair_separation(pt, partner)
                                                   : pair_separation(partner, pt);
      worst = std::max(worst, std::abs(sep - 2.0 * eps));
      ++pairs;
    }
  }
  o.require(pairs > 0, "pairs formed");
  o.require(worst <= s.tol(1e-12), "E+ - E- = 2 eps to 1e-12");
  o.detail << "pairs=" << pairs << " max_dev=" << sci(worst);
}

// 6. Closed-form relations vs recurrence.
void closed_forms(const Suite& s, Outcome& o) {
  constexpr int kGrid = 50;
  int checks = 0, on_locus = 0, disagreements = 0;
  for (int i = 0; i < kGrid; ++i) {
    const double g = 0.05 + (1.2 - 0.05) * i / (kGrid - 1);
    for (int j = 0; j < kGrid; ++j) {
      const double d = 0.1 + (1.5 - 0.1) * j / (kGrid - 1);
      const double g2 = g * g, d2 = d * d;
      const double n1 = 0.5 * (d2 + 4.0 * g2 - 1.0);
      const double root = std::sqrt(64.0 * g2 + d2 * d2 + 4.0 * d2 + 4.0);
      const double n2a = (16.0 * g2 + 3.0 * d2 - 6.0 - root) / 8.0;
      const double n2b = (16.0 * g2 + 3.0 * d2 - 6.0 + root) / 8.0;
      // A generic bias plus every bias that puts (g, delta) on one of the loci.
      for (const double eps : {0.1, n1, -n1, n2a, -n2a, n2b, -n2b}) {
        const RabiParams p = params(g, d, eps);
        for (const int n : {1, 2}) {
          for (const Branch b : {Branch::Plus, Branch::Minus}) {
            const bool by_recurrence = constraint_residual(n, b, p) <= s.tol(1e-10);
            const bool by_formula =
                std::abs(closed_form_relation(n, b, p)) <= s.tol(1e-8) * closed_form_scale(n, b, p);
            ++checks;
            if (by_formula) ++on_locus;
            if (by_recurrence != by_formula) ++disagreements;
          }
        }
      }
    }
  }
  o.require(disagreements == 0, "zero disagreements");
  o.detail << "checks=" << checks << " on_locus=" << on_locus
           << " disagreements=" << disagreements;
}

// 7. Factorization identity.
void factorization(const Suite& s, Outcome& o) {
  std::mt19937_64 rng(s.seed());
  std::uniform_real_distribution<double> u(0.0, 1.5);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double g = u(rng);
    const double d = u(rng);
    const IdentityCheck c = factorization_identity_check(g, d);
    worst = std::max(worst, c.deviation / (1.0 + c.rhs_magnitude));
  }
  o.require(worst <= s.tol(1e-9), "relative deviation <= 1e-9");
  o.detail << "samples=1000 seed=" << s.seed() << " max_rel_dev=" << sci(worst);
}

// 8. Eigenstate reconstruction.
void eigenstates(const Suite& s, Outcome& o) {
  struct Case {
    RabiParams p;
    Branch b;
  };
  const Case cases[] = {{params(0.2, 0.8, 0.1), Branch::Minus},
                        {params(0.3, 0.8, 0.0), Branch::Plus},
                        {params(0.3, 0.8, 0.0), Branch::Minus}};
  for (const auto& c : cases) {
    const Energy e = candidate_energy(1, c.b, c.p);
    const OracleResult r = eigen(c.p, 6, 1e-12, true);
    const SpinFockState v = exceptional_state(1, c.b, c.p, r.cutoff_used);
    const double overlap = subspace_overlap(v, r, e.value);
    const double res = hamiltonian_residual(v, e.value, c.p);
    const std::string tag = "(" + fixed(c.p.g, 1) + "," + fixed(c.p.epsilon, 1) + "," +
                            std::string(to_string(c.b)) + ")";
    o.require(overlap >= 1.0 - s.tol(1e-8), "overlap " + tag);
    o.require(res <= s.tol(1e-8), "residual " + tag);
    o.detail << tag << " 1-overlap=" << sci(1.0 - overlap) << " residual=" << sci(res) << "  ";
  }
}

// 9. Degeneracy structure of g sweeps.
void degeneracy(const Suite& s, Outcome& o) {
  const AxisRange range{0.0, 1.2, 120};
  double crossing_g = -1.0;
  for (const double eps : {0.0, 0.15, 0.5}) {
    const SweepResult r = sweep(params(0.0, 0.8, eps), SweepAxis::G, range);
    const std::string tag = " at eps=" + fixed(eps, 2);
    o.require(r.failures.empty(), "no sweep failures" + tag);

    int flagged = 0, bad_count = 0, degenerate_levels = 0;
    double max_step = 0.0;
    std::vector<double> prev;
    for (const auto& lv : r.levels) {
      std::vector<double> flat;
      for (const auto& pt : lv) {
        if (pt.flagged) ++flagged;
        if (pt.degeneracy > 1) ++degenerate_levels;
        for (int k = 0; k < pt.degeneracy; ++k) flat.push_back(pt.energy.value);
      }
      if (flat.size() != 10) ++bad_count;
      if (!prev.empty()) {
        for (std::size_t k = 0; k < std::min(prev.size(), flat.size()); ++k) {
          max_step = std::max(max_step, std::abs(flat[k] - prev[k]));
        }
      }
      prev = flat;
    }
    o.require(flagged == 0, "no flagged gaps" + tag);
    o.require(bad_count == 0, "10 levels at every g" + tag);
    o.require(max_step < 0.5, "level continuity" + tag);

    int marker_deg2 = 0;
    for (const auto& m : r.markers) marker_deg2 += m.degeneracy == 2;
    if (eps == 0.0) {
      o.require(!r.markers.empty() && marker_deg2 == static_cast<int>(r.markers.size()),
                "every exceptional point two-fold" + tag);
    } else if (eps == 0.15) {
      o.require(marker_deg2 == 0 && degenerate_levels == 0, "no degeneracies" + tag);
    } else {
      // Distinct degenerate locations on the loci (N=1, plus) and (N=2, minus).
      std::vector<std::pair<double, double>> spots;
      for (const auto& m : r.markers) {
        const bool lowest = (m.point.n == 1 && m.point.branch == Branch::Plus) ||
                            (m.point.n == 2 && m.point.branch == Branch::Minus);
        if (!lowest || m.degeneracy != 2) continue;
        const bool seen = std::any_of(spots.begin(), spots.end(), [&](const auto& sp) {
          return std::abs(sp.first - m.point.axis_value) <= 1e-9 &&
                 std::abs(sp.second - m.point.energy.value) <= s.tol(kDegeneracyTol);
        });
        if (!seen) spots.emplace_back(m.point.axis_value, m.point.energy.value);
      }
      o.require(spots.size() == 1 && std::abs(spots.front().first - 0.583) <= 1e-3,
                "single two-fold point near g=0.583" + tag);
      crossing_g = spots.empty() ? -1.0 : spots.front().first;
    }
    o.detail << "eps=" << fixed(eps, 2) << ": markers=" << r.markers.size()
             << " two_fold_markers=" << marker_deg2 << " max_step=" << fixed(max_step, 4);
    if (crossing_g >= 0.0) o.detail << " crossing_g=" << fixed(crossing_g, 9);
    o.detail << "  ";
  }
}

// 10. Property suites.
void properties(const Suite& s, Outcome& o) {
  const double ed = 0.8;
  const std::vector<double> gs = {0.1, 0.4, 0.8, 1.2};
  const std::vector<double> epss = {0.0, 0.1, 0.5};
  std::vector<double> es;
  for (int i = 0; i <= 40; ++i) es.push_back(-2.0 + 8.0 * i / 40.0);

  // Heun recurrence residuals and Heun equation residuals.
  double rec_worst = 0.0, ode_worst = 0.0;
  for (const double g : gs) {
    for (const double eps : epss) {
      const RabiParams p = params(g, ed, eps);
      for (const double e : es) {
        const HeunParams p1 = heun_params_plus(Energy{e}, p);
        const HeunParams p2 = heun_params_minus(Energy{e}, p);
        for (const HeunParams& hp : {p1, p2, swap_family(p1), swap_family(p2)}) {
          const HeunSeries ser = build_series(hp);
          if (ser.status() == SeriesStatus::DivergentBeta) continue;
          for (std::size_t n = 1; n < ser.stored_terms(); ++n) {
            if (std::abs(static_cast<double>(n) + hp.beta) <= kPoleTol) continue;
            const auto rt = recurrence_terms(hp, static_cast<int>(n));
            const int ex = ser.exponent(n);
            const auto h = [&](std::size_t k) {
              return std::ldexp(ser.mantissa(k), ser.exponent(k) - ex);
            };
            const double hm1 = h(n - 1), hm2 = n >= 2 ? h(n - 2) : 0.0;
            const double lhs = rt.a * h(n);
            const double scale =
                std::abs(lhs) + std::abs(rt.b * hm1) + std::abs(rt.c * hm2) + 1e-300;
            rec_worst = std::max(rec_worst, std::abs(lhs - rt.b * hm1 - rt.c * hm2) / scale);
          }
          if (ser.status() != SeriesStatus::Converged &&
              ser.status() != SeriesStatus::TruncatedPolynomial) {
            continue;
          }
          for (const double x : {0.1, 0.3, 0.5}) {
            const HeunEval v = evaluate(ser, x);
            const double t1 = v.second_derivative;
            const double t2 = (hp.alpha + (hp.beta + 1.0) / x + (hp.gamma + 1.0) / (x - 1.0)) *
                              v.derivative;
            const double t3 = (hp.mu() * x + hp.nu()) / (x * (x - 1.0)) * v.value;
            const double scale = std::abs(t1) + std::abs(t2) + std::abs(t3) + 1e-300;
            ode_worst = std::max(ode_worst, std::abs(t1 + t2 + t3) / scale);
          }
        }
      }
    }
  }
  o.require(rec_worst <= s.tol(1e-10), "recurrence residual <= 1e-10");
  o.require(ode_worst <= s.tol(1e-8), "Heun equation residual <= 1e-8");
  o.detail << "recurrence=" << sci(rec_worst) << " heun_ode=" << sci(ode_worst);

  // Truncation closure: raw recurrence past N stays at zero.
  double closure_worst = 0.0;
  int closure_points = 0;
  bool closure_status = true;
  for (const double eps : {0.0, 0.1, 0.15, 0.5}) {
    for (const auto& pt : scan_exceptional(params(0.0, ed, eps), SweepAxis::G, {0.05, 1.2, 400}, 4,
                                           kExceptionalTol, false)) {
      const Energy e = pt.energy;
      const HeunParams hp = pt.branch == Branch::Plus
                                ? heun_params_plus(e, pt.params)
                                : swap_family(heun_params_minus(e, pt.params));
      const HeunSeries ser = build_series(hp, pt.n + 20);
      closure_status = closure_status && truncation_check(hp, pt.n) &&
                       ser.truncation_degree() == pt.n;
      for (int n = pt.n + 1; n <= pt.n + 20; ++n) {
        closure_worst = std::max(closure_worst, std::abs(ser.coefficient(n)));
      }
      double h2 = 0.0, h1 = 1.0, peak = 1.0;
      for (int n = 1; n <= pt.n + 20; ++n) {
        const auto rt = recurrence_terms(hp, n);
        if (std::abs(rt.a) <= kPoleTol) break;  // free coefficient; covered by build_series
        const double hn = (rt.b * h1 + rt.c * h2) / rt.a;
        if (n <= pt.n) {
          peak = std::max(peak, std::abs(hn));
        } else {
          closure_worst = std::max(closure_worst, std::abs(hn) / peak);
        }
        h2 = h1;
        h1 = hn;
      }
      ++closure_points;
    }
  }
  o.require(closure_points > 0 && closure_status, "truncation check and status at every point");
  o.require(closure_worst <= s.tol(1e-10), "coefficients past N vanish");
  o.detail << " closure=" << sci(closure_worst) << " (" << closure_points << " points)";

  // First-order system residuals for both families.
  double fo_worst = 0.0;
  int fo_samples = 0;
  for (const double g : gs) {
    for (const double eps : epss) {
      const RabiParams p = params(g, ed, eps);
      for (const double e : es) {
        for (const Family f : {Family::First, Family::Second}) {
          SolutionPair pair;
          try {
            pair = build_pair(f, Energy{e}, p);
          } catch (const PoleError&) {
            continue;
          }
          if (pair.plus_series.status() != SeriesStatus::Converged ||
              pair.minus_series.status() != SeriesStatus::Converged) {
            continue;
          }
          for (const double z : {0.0, g / 2.0}) {
            const auto vp = eval_component(pair, Component::Plus, z);
            const auto vm = eval_component(pair, Component::Minus, z);
            const double a1 = (e - eps - g * z) * vp.value / (z + g);
            const double a2 = ed * vm.value / (z + g);
            const double b1 = (e + eps + g * z) * vm.value / (z - g);
            const double b2 = ed * vp.value / (z - g);
            const double rp = std::abs(vp.derivative - a1 + a2) /
                              (std::abs(vp.derivative) + std::abs(a1) + std::abs(a2) + 1e-300);
            const double rm = std::abs(vm.derivative - b1 + b2) /
                              (std::abs(vm.derivative) + std::abs(b1) + std::abs(b2) + 1e-300);
            fo_worst = std::max({fo_worst, rp, rm});
            ++fo_samples;
          }
        }
      }
    }
  }
  o.require(fo_samples > 0 && fo_worst <= s.tol(1e-8), "first-order system residual <= 1e-8");
  o.detail << " first_order=" << sci(fo_worst);

  // Linear dependence of the two families at regular eigenvalues.
  double ld_worst = 0.0;
  int ld_roots = 0;
  for (const double g : {0.1, 0.2, 0.4, 0.8}) {
    const RabiParams p = params(g, ed, 0.1);
    for (const auto& root : find_regular_spectrum(p, -1.5, 3.0, 2000, 1e-13)) {
      const auto a = build_pair(Family::First, root.energy, p);
      const auto b = build_pair(Family::Second, root.energy, p);
      if (a.plus_series.status() != SeriesStatus::Converged ||
          b.plus_series.status() != SeriesStatus::Converged) {
        continue;
      }
      const auto ratio = [&](double z) {
        return eval_component(a, Component::Plus, z).value /
               eval_component(b, Component::Plus, z).value;
      };
      const double r0 = ratio(0.0), r1 = ratio(g / 2.0);
      ld_worst = std::max(ld_worst, std::abs(r0 - r1) / std::abs(r0));
      ++ld_roots;
    }
  }
  o.require(ld_roots > 0 && ld_worst <= s.tol(1e-6), "linear-dependence ratio within 1e-6");
  o.detail << " linear_dependence=" << sci(ld_worst) << " (" << ld_roots << " roots)";

  // Reflection epsilon -> -epsilon.
  double w_worst = 0.0, spec_worst = 0.0;
  for (const double g : gs) {
    for (const double eps : {0.1, 0.15, 0.3}) {
      for (const double e : es) {
        const WronskianSample a = wronskian(Energy{e}, params(g, ed, eps));
        const WronskianSample b = wronskian(Energy{e}, params(g, ed, -eps));
        if (!a.reliable || !b.reliable) continue;
        w_worst = std::max(w_worst, std::abs(a.w_plus - b.w_minus) /
                                        std::max(std::abs(a.w_plus), 1e-300));
      }
      const auto sa = diagonalize(params(g, ed, eps), 80).eigenvalues;
      const auto sb = diagonalize(params(g, ed, -eps), 80).eigenvalues;
      for (std::size_t i = 0; i < 20; ++i) spec_worst = std::max(spec_worst, std::abs(sa[i] - sb[i]));
    }
  }
  bool mirrored = true;
  const auto fwd = scan_exceptional(params(0.0, ed, 0.1), SweepAxis::G, {0.05, 1.2, 400}, 3,
                                    kExceptionalTol, false);
  const auto bwd = scan_exceptional(params(0.0, ed, -0.1), SweepAxis::G, {0.05, 1.2, 400}, 3,
                                    kExceptionalTol, false);
  mirrored = fwd.size() == bwd.size() && !fwd.empty();
  for (const auto& a : fwd) {
    mirrored = mirrored && std::any_of(bwd.begin(), bwd.end(), [&](const ExceptionalPoint& b) {
                 return b.n == a.n && b.branch != a.branch &&
                        std::abs(b.axis_value - a.axis_value) <= 1e-9 &&
                        std::abs(b.energy.value - a.energy.value) <= 1e-9;
               });
  }
  o.require(w_worst <= s.tol(1e-10), "W+(eps) = W-(-eps)");
  o.require(spec_worst <= s.tol(1e-10), "oracle spectrum invariant under eps -> -eps");
  o.require(mirrored, "exceptional points mirror between branches");
  o.detail << " reflection_w=" << sci(w_worst) << " reflection_spectrum=" << sci(spec_worst);

  // Oracle: symmetry, eigenpair residuals, variational monotonicity.
  double mono_worst = 0.0, eig_res = 0.0;
  bool symmetric = true;
  for (const double g : {0.2, 0.6, 1.2}) {
    const RabiParams p = params(g, ed, 0.1);
    std::vector<double> prev;
    for (const int nc : {20, 40, 80, 160}) {
      const Eigen::MatrixXd h = build_hamiltonian(p, nc);
      symmetric = symmetric && (h.array() == h.transpose().array()).all();
      const OracleResult r = diagonalize(p, nc, nc == 40);
      if (nc == 40) {
        const double hn = spectral_norm(h);
        for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
          const Eigen::VectorXd v = r.eigenvectors[i].to_vector();
          eig_res = std::max(eig_res, (h * v - r.eigenvalues[i] * v).norm() / hn);
        }
      }
      if (!prev.empty()) {
        for (std::size_t i = 0; i < 10; ++i) {
          mono_worst = std::max(mono_worst, r.eigenvalues[i] - prev[i]);
        }
      }
      prev = r.eigenvalues;
    }
  }
  o.require(symmetric, "Hamiltonian exactly symmetric");
  o.require(eig_res <= s.tol(1e-9), "eigenpair residual <= 1e-9 ||H||");
  o.require(mono_worst <= s.tol(1e-12), "eigenvalues non-increasing with cutoff");
  o.detail << " eigen_residual=" << sci(eig_res) << " monotonicity=" << sci(mono_worst);
}

struct Criterion {
  int id;
  const char* name;
  double time_limit;  // seconds, 0 for none
  std::function<void(const Suite&, Outcome&)> run;
};

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts) {
  const Suite suite(opts);
  const Criterion criteria[] = {
      {1, "exceptional-point", 5.0, exceptional_reference},
      {2, "regular-spectrum-vs-oracle", 30.0, regular_vs_oracle},
      {3, "crossing-at-half-bias", 10.0, crossing},
      {4, "unified-exceptional-energy", 0.0, unified_form},
      {5, "pair-separation", 0.0, separation},
      {6, "closed-form-relations", 0.0, closed_forms},
      {7, "factorization-identity", 0.0, factorization},
      {8, "eigenstate-reconstruction", 0.0, eigenstates},
      {9, "degeneracy-structure", 180.0, degeneracy},
      {10, "property-suites", 0.0, properties},
  };

  std::vector<CriterionResult> out;
  for (const auto& c : criteria) {
    if (!opts.only.empty() && std::find(opts.only.begin(), opts.only.end(), c.id) == opts.only.end()) {
      continue;
    }
    CriterionResult r;
    r.id = c.id;
    r.name = c.name;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(suite, o);
    } catch (const std::exception& ex) {
      o.require(false, std::string("exception: ") + ex.what());
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit > 0.0) o.require(r.seconds < c.time_limit, "runtime limit");
    r.passed = o.passed;
    r.detail = o.text();
    out.push_back(std::move(r));
  }
  return out;
}

void write_report(const std::vector<CriterionResult>& results, std::ostream& out) {
  for (const auto& r : results) {
    out << (r.passed ? "PASS" : "FAIL") << ' ' << r.id << ' ' << r.name << ": " << r.detail
        << '\n';
  }
}

bool all_passed(const std::vector<CriterionResult>& results) {
  return std::all_of(results.begin(), results.end(),
                     [](const CriterionResult& r) { return r.passed; });
}

}  // namespace rabi
