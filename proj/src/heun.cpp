#include "rabi/heun.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "rabi/errors.hpp"

namespace rabi {

namespace {

constexpr double kRescaleAbove = 1e150;

bool is_pole(const HeunParams& hp, int n) { return std::abs(n + hp.beta) <= kPoleTol; }

// Degree N with C(N+2) = 0, when that is a non-negative integer.
std::optional<int> closure_degree(const HeunParams& hp) {
  if (hp.alpha == 0.0) return std::nullopt;
  const double n = -(hp.delta + hp.alpha * (hp.beta + hp.gamma) / 2.0) / hp.alpha - 1.0;
  const double r = std::round(n);
  if (r < 0.0 || std::abs(n - r) > 1e-9 * std::max(1.0, std::abs(n))) return std::nullopt;
  return static_cast<int>(r);
}

// At a removable pole k the solution space analytic at x = 0 is two
// dimensional: u (h_k = 0) plus t * w (w starts at x^k). Returns the t that
// cancels h_{nt+1}.
double free_coefficient(const HeunParams& hp, int k, int nt, double h_km1) {
  double u_prev = h_km1, u_cur = 0.0;
  double w_prev = 0.0, w_cur = 1.0;
  for (int n = k + 1; n <= nt + 1; ++n) {
    const auto rt = recurrence_terms(hp, n);
    const double u_next = (rt.b * u_cur + rt.c * u_prev) / rt.a;
    const double w_next = (rt.b * w_cur + rt.c * w_prev) / rt.a;
    u_prev = u_cur;
    u_cur = u_next;
    w_prev = w_cur;
    w_cur = w_next;
  }
  if (w_cur == 0.0 || !std::isfinite(w_cur) || !std::isfinite(u_cur)) return 0.0;
  return -u_cur / w_cur;
}

}  // namespace

std::string_view to_string(SeriesStatus s) {
  switch (s) {
    case SeriesStatus::Converged:
      return "Converged";
    case SeriesStatus::TruncatedPolynomial:
      return "TruncatedPolynomial";
    case SeriesStatus::DivergentBeta:
      return "DivergentBeta";
    case SeriesStatus::MaxTermsReached:
      return "MaxTermsReached";
  }
  return "?";
}

RecurrenceTerms recurrence_terms(const HeunParams& hp, int n) {
  const double a = hp.alpha, b = hp.beta, c = hp.gamma;
  const double nn = static_cast<double>(n);
  RecurrenceTerms rt;
  rt.a = (nn + b) * nn;
  rt.b = nn * nn + (b + c - a - 1.0) * nn + hp.eta - b / 2.0 + (c - a) * (b - 1.0) / 2.0;
  rt.c = hp.delta + a * (b + c) / 2.0 + a * (nn - 1.0);
  return rt;
}

double HeunSeries::coefficient(std::size_t n) const {
  if (n >= mantissa_.size()) return 0.0;
  return std::ldexp(mantissa_[n], exponent_[n]);
}

HeunSeries build_series(const HeunParams& hp, int n_max, double tol) {
  if (n_max < 2) throw std::invalid_argument("build_series: n_max must be >= 2");
  if (!(tol > 0.0) || !std::isfinite(tol)) {
    throw std::invalid_argument("build_series: tol must be positive");
  }

  HeunSeries s;
  s.params_ = hp;
  s.mantissa_.reserve(static_cast<std::size_t>(n_max) + 1);
  s.exponent_.reserve(static_cast<std::size_t>(n_max) + 1);
  s.mantissa_.push_back(1.0);
  s.exponent_.push_back(0);

  const auto nt = closure_degree(hp);

  // Rolling pair (h_{n-2}, h_{n-1}) in the current binary scale.
  double prev2 = 0.0;
  double prev1 = 1.0;
  int scale = 0;
  double max_before = 0.0;  // max_{k <= n-2} |h_k|

  for (int n = 1; n <= n_max; ++n) {
    if (n >= 2) max_before = std::max(max_before, std::abs(prev2));
    const auto rt = recurrence_terms(hp, n);
    const double num = rt.b * prev1 + rt.c * prev2;

    double hn = 0.0;
    if (is_pole(hp, n)) {
      const double ref = std::max({1.0, std::abs(rt.b), std::abs(rt.c)}) *
                         std::max(max_before, std::abs(prev1));
      // A vanishing numerator only rescues the series when it can still
      // terminate: past the pole through the free coefficient, or just
      // before it, where the truncation test needs h_n = 0.
      if (std::abs(num) > tol * ref || !nt || *nt < n - 2) {
        s.status_ = SeriesStatus::DivergentBeta;
        s.index_ = n;
        return s;
      }
      hn = *nt >= n ? free_coefficient(hp, n, *nt, prev1) : 0.0;
    } else {
      hn = num / rt.a;
    }
    if (!std::isfinite(hn)) {
      s.status_ = SeriesStatus::DivergentBeta;
      s.index_ = n;
      return s;
    }

    s.mantissa_.push_back(hn);
    s.exponent_.push_back(scale);

    if (n >= 2 && max_before > 0.0 && std::abs(prev1) <= tol * max_before &&
        std::abs(hn) <= tol * max_before && closure_residual(hp, n - 2) <= tol) {
      const int degree = n - 2;
      s.mantissa_.resize(static_cast<std::size_t>(degree) + 1);
      s.exponent_.resize(static_cast<std::size_t>(degree) + 1);
      s.status_ = SeriesStatus::TruncatedPolynomial;
      s.index_ = degree;
      return s;
    }

    if (std::abs(hn) > kRescaleAbove) {
      const int k = std::ilogb(hn);
      hn = std::ldexp(hn, -k);
      prev1 = std::ldexp(prev1, -k);
      max_before = std::ldexp(max_before, -k);
      scale += k;
    }
    prev2 = prev1;
    prev1 = hn;
  }

  s.status_ = SeriesStatus::Converged;
  if (evaluate(s, kStandardPoint).status == SeriesStatus::MaxTermsReached) {
    s.status_ = SeriesStatus::MaxTermsReached;
  }
  return s;
}

HeunEval evaluate(const HeunSeries& series, double x) {
  if (series.status() == SeriesStatus::DivergentBeta) {
    throw DivergentSolution("divergent solution: A(n) = 0 at n = " +
                            std::to_string(series.divergence_index()));
  }
  const bool polynomial = series.status() == SeriesStatus::TruncatedPolynomial;
  if (!polynomial && !(std::abs(x) < 1.0)) {
    throw DomainError("confluent Heun series evaluated outside |x| < 1");
  }

  HeunEval out;
  double value = 0.0, deriv = 0.0, deriv2 = 0.0;
  double max_tv = 0.0, max_td = 0.0;
  double xn = 1.0, xn1 = 0.0, xn2 = 0.0;  // x^n, x^(n-1), x^(n-2)
  int quiet = 0;
  bool tail_met = false;
  const std::size_t terms = series.stored_terms();
  std::size_t used = terms;

  for (std::size_t i = 0; i < terms; ++i) {
    const double n = static_cast<double>(i);
    const double h = series.mantissa(i);
    const int e = series.exponent(i);
    const double tv = std::ldexp(h * xn, e);
    const double td = i >= 1 ? std::ldexp(h * n * xn1, e) : 0.0;
    const double tdd = i >= 2 ? std::ldexp(h * n * (n - 1.0) * xn2, e) : 0.0;
    value += tv;
    deriv += td;
    deriv2 += tdd;
    xn2 = xn1;
    xn1 = xn;
    xn *= x;

    if (polynomial) continue;
    max_tv = std::max(max_tv, std::abs(tv));
    max_td = std::max(max_td, std::abs(td));
    const double ref_v = std::max(std::abs(value), 1e-3 * max_tv);
    const double ref_d = std::max(std::abs(deriv), 1e-3 * max_td);
    const bool small = std::abs(tv) <= kTailTol * ref_v && std::abs(td) <= kTailTol * ref_d;
    quiet = small ? quiet + 1 : 0;
    if (quiet >= kTailRun) {
      tail_met = true;
      used = i + 1;
      break;
    }
  }

  out.value = value;
  out.derivative = deriv;
  out.second_derivative = deriv2;
  out.terms_used = static_cast<int>(used);
  if (polynomial) {
    out.status = SeriesStatus::TruncatedPolynomial;
  } else {
    out.status = tail_met ? SeriesStatus::Converged : SeriesStatus::MaxTermsReached;
  }
  return out;
}

double signed_truncation_residual(const HeunParams& hp, int n) {
  if (n < 0) throw std::invalid_argument("truncation degree must be >= 0");
  double prev2 = 0.0, prev1 = 1.0;
  double max_h = 1.0;
  for (int k = 1; k <= n + 1; ++k) {
    const auto rt = recurrence_terms(hp, k);
    const double num = rt.b * prev1 + rt.c * prev2;
    if (is_pole(hp, k)) return num / max_h;
    if (k == n + 1) return num / (max_h * std::max(1.0, std::abs(rt.a)));
    const double hk = num / rt.a;
    max_h = std::max(max_h, std::abs(hk));
    prev2 = prev1;
    prev1 = hk;
  }
  return 0.0;  // unreachable
}

double truncation_residual(const HeunParams& hp, int n) {
  return std::abs(signed_truncation_residual(hp, n));
}

double closure_residual(const HeunParams& hp, int n) {
  const double lhs = hp.delta + (n + (hp.gamma + hp.beta + 2.0) / 2.0) * hp.alpha;
  return std::abs(lhs) / std::max(1.0, std::abs(hp.delta));
}

bool truncation_check(const HeunParams& hp, int n, double tol) {
  if (n < 0) throw std::invalid_argument("truncation degree must be >= 0");
  return closure_residual(hp, n) <= tol && truncation_residual(hp, n) <= tol;
}

}  // namespace rabi
