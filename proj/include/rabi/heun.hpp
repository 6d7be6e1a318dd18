#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "rabi/model.hpp"

namespace rabi {

inline constexpr int kDefaultMaxTerms = 500;
// Relative size below which a coefficient counts as zero for truncation.
inline constexpr double kTruncationTol = 1e-10;
// Tail criterion for summing a non-terminating series.
inline constexpr double kTailTol = 1e-13;
inline constexpr int kTailRun = 5;
// |n + beta| at or below this is treated as A(n) = 0.
inline constexpr double kPoleTol = 1e-9;
// Standard evaluation point (z = 0 maps to x = 1/2 for both families).
inline constexpr double kStandardPoint = 0.5;

enum class SeriesStatus { Converged, TruncatedPolynomial, DivergentBeta, MaxTermsReached };

std::string_view to_string(SeriesStatus s);

// A(n) h_n = B(n) h_{n-1} + C(n) h_{n-2}
struct RecurrenceTerms {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

RecurrenceTerms recurrence_terms(const HeunParams& hp, int n);

/// Coefficients h_n of HC(alpha, beta, gamma, delta, eta, x) = sum h_n x^n.
///
/// Coefficients are stored as mantissa * 2^exponent so that long recurrences
/// at large |E| cannot overflow. Immutable once built.
class HeunSeries {
 public:
  [[nodiscard]] const HeunParams& params() const { return params_; }
  [[nodiscard]] SeriesStatus status() const { return status_; }

  /// Degree N when status() == TruncatedPolynomial, otherwise -1.
  [[nodiscard]] int truncation_degree() const {
    return status_ == SeriesStatus::TruncatedPolynomial ? index_ : -1;
  }
  /// Index n0 with A(n0) = 0 when status() == DivergentBeta, otherwise -1.
  [[nodiscard]] int divergence_index() const {
    return status_ == SeriesStatus::DivergentBeta ? index_ : -1;
  }

  [[nodiscard]] std::size_t stored_terms() const { return mantissa_.size(); }

  /// h_n; zero past the end of a terminated polynomial.
  [[nodiscard]] double coefficient(std::size_t n) const;

  // Raw storage, h_n = mantissa(n) * 2^exponent(n).
  [[nodiscard]] double mantissa(std::size_t n) const { return mantissa_[n]; }
  [[nodiscard]] int exponent(std::size_t n) const { return exponent_[n]; }

 private:
  friend HeunSeries build_series(const HeunParams& hp, int n_max, double tol);

  HeunParams params_{};
  std::vector<double> mantissa_;
  std::vector<int> exponent_;
  SeriesStatus status_ = SeriesStatus::Converged;
  int index_ = -1;
};

/// Builds h_0..h_{n_max} from the three-term recurrence with h_0 = 1, h_{-1} = 0.
///
/// The series is TruncatedPolynomial(N) when h_{N+1}, h_{N+2} both fall below
/// tol * max_{k<=N} |h_k| and C(N+2) vanishes, and DivergentBeta(n0) when
/// A(n0) = 0 is met with a nonzero numerator. At A(n0) = 0 with a vanishing
/// numerator, h_{n0} is a free constant: it is chosen so the series terminates
/// when the parameters admit a polynomial of degree >= n0 - 2, and otherwise
/// the series is still DivergentBeta(n0). Remaining series
/// are Converged or MaxTermsReached according to the tail rule at x = 1/2.
///
/// Throws std::invalid_argument if n_max < 2 or tol <= 0.
HeunSeries build_series(const HeunParams& hp, int n_max = kDefaultMaxTerms,
                        double tol = kTruncationTol);

struct HeunEval {
  double value = 0.0;
  double derivative = 0.0;
  double second_derivative = 0.0;
  int terms_used = 0;
  SeriesStatus status = SeriesStatus::Converged;
};

/// Sums the series and its first two term-wise derivatives at x.
///
/// Stops once kTailRun consecutive terms of both the value and derivative
/// sums are below kTailTol relative to the partial sums; running out of
/// stored terms first yields MaxTermsReached.
///
/// Throws DivergentSolution for a DivergentBeta series and DomainError for
/// |x| >= 1 unless the series is a polynomial.
HeunEval evaluate(const HeunSeries& series, double x);

/// Normalized residual of the condition h_{N+1} = 0, namely
/// |A(N+1) h_{N+1}| / (max_{k<=N} |h_k| * max(1, |A(N+1)|)).
///
/// If A(k) = 0 for some k <= N the free coefficient h_k can always be used to
/// cancel h_{N+1}, so the residual is instead the normalized numerator
/// B(k) h_{k-1} + C(k) h_{k-2} that must vanish at the pole.
/// The signed variant keeps the sign of that numerator.
double truncation_residual(const HeunParams& hp, int n);
double signed_truncation_residual(const HeunParams& hp, int n);

/// Residual of delta = -(N + (gamma + beta + 2)/2) alpha, i.e. C(N+2) = 0,
/// relative to max(1, |delta|).
double closure_residual(const HeunParams& hp, int n);

/// True iff both h_{N+1} = 0 and C(N+2) = 0 hold to tol; together they force
/// h_n = 0 for every n > N.
bool truncation_check(const HeunParams& hp, int n, double tol = kTruncationTol);

}  // namespace rabi
