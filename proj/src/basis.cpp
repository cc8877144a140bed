#include "sdeproj/basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sdeproj/errors.hpp"

namespace sdeproj {

int BasisSpec::dimension() const {
  return kind == Kind::spline ? K + degree : 2 * D + 1;
}

BasisSpec BasisSpec::spline(int K, int degree, double A, double B) {
  require(K >= 1, ErrorCode::degenerate_knots, "spline needs K >= 1 intervals");
  require(degree >= 1, ErrorCode::degenerate_knots, "spline needs degree >= 1");
  require(B > A, ErrorCode::degenerate_knots, "spline needs B > A");
  BasisSpec s;
  s.kind = Kind::spline;
  s.K = K;
  s.degree = degree;
  s.A = A;
  s.B = B;
  return s;
}

BasisSpec BasisSpec::fourier(int D, double A, double B, bool normalized) {
  require(D >= 0, ErrorCode::degenerate_knots, "fourier needs D >= 0");
  require(B > A, ErrorCode::degenerate_knots, "fourier needs B > A");
  BasisSpec s;
  s.kind = Kind::fourier;
  s.D = D;
  s.A = A;
  s.B = B;
  s.normalized_fourier = normalized;
  return s;
}

std::vector<double> BasisSpec::knots() const {
  require(kind == Kind::spline, ErrorCode::precondition,
          "knots are defined for spline bases only");
  // degree+1 copies of A, the K-1 interior break points, degree+1 copies of B
  const int M = degree;
  std::vector<double> t;
  t.reserve(static_cast<std::size_t>(K + 2 * M + 1));
  for (int i = 0; i <= M; ++i) t.push_back(A);
  const double width = (B - A) / static_cast<double>(K);
  for (int i = 1; i < K; ++i) t.push_back(A + width * static_cast<double>(i));
  for (int i = 0; i <= M; ++i) t.push_back(B);
  return t;
}

namespace {

// Nonzero B-spline values at x for the clamped uniform knot vector, via the
// triangular recurrence; fills values[0..deg] for basis indices
// span-deg..span. `span` indexes the knot interval [t[span], t[span+1]).
void bspline_nonzero(const std::vector<double>& t, int deg, double x, int span,
                     double* values) {
  values[0] = 1.0;
  std::vector<double> left(static_cast<std::size_t>(deg) + 1);
  std::vector<double> right(static_cast<std::size_t>(deg) + 1);
  for (int j = 1; j <= deg; ++j) {
    left[j] = x - t[span + 1 - j];
    right[j] = t[span + j] - x;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      const double den = right[r + 1] + left[j - r];
      const double temp = den != 0.0 ? values[r] / den : 0.0;
      values[r] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    values[j] = saved;
  }
}

int find_span(const BasisSpec& spec, const std::vector<double>& t, double x) {
  const int M = spec.degree;
  const int last = spec.K + M - 1;  // last knot interval index
  if (x >= spec.B) return last;
  if (x <= spec.A) return M;
  const double width = (spec.B - spec.A) / static_cast<double>(spec.K);
  int cell = static_cast<int>((x - spec.A) / width);
  cell = std::clamp(cell, 0, spec.K - 1);
  int span = cell + M;
  // guard against floating-point edges of the cell computation
  while (span > M && x < t[span]) --span;
  while (span < last && x >= t[span + 1]) ++span;
  return span;
}

void spline_values(const BasisSpec& spec, double x, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  if (x < spec.A || x > spec.B) return;
  const std::vector<double> t = spec.knots();
  const int M = spec.degree;
  const int span = find_span(spec, t, x);
  std::vector<double> vals(static_cast<std::size_t>(M) + 1);
  bspline_nonzero(t, M, x, span, vals.data());
  for (int r = 0; r <= M; ++r) {
    const int idx = span - M + r;
    out[static_cast<std::size_t>(idx)] = vals[static_cast<std::size_t>(r)];
  }
}

void spline_derivatives(const BasisSpec& spec, double x, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  if (x < spec.A || x > spec.B) return;
  const std::vector<double> t = spec.knots();
  const int M = spec.degree;
  const int span = find_span(spec, t, x);
  // degree-(M-1) values on the same span: nonzero for indices span-M+1..span
  std::vector<double> lower(static_cast<std::size_t>(M), 0.0);
  bspline_nonzero(t, M - 1, x, span, lower.data());
  auto low = [&](int idx) -> double {
    const int r = idx - (span - M + 1);
    return r >= 0 && r < M ? lower[static_cast<std::size_t>(r)] : 0.0;
  };
  for (int idx = span - M; idx <= span; ++idx) {
    const double den1 = t[idx + M] - t[idx];
    const double den2 = t[idx + M + 1] - t[idx + 1];
    double d = 0.0;
    if (den1 != 0.0) d += low(idx) / den1;
    if (den2 != 0.0) d -= low(idx + 1) / den2;
    out[static_cast<std::size_t>(idx)] = static_cast<double>(M) * d;
  }
}

}  // namespace

void eval_basis(const BasisSpec& spec, double x, std::span<double> out) {
  const std::size_t m = static_cast<std::size_t>(spec.dimension());
  require(out.size() == m, ErrorCode::precondition, "output span has wrong size");
  if (spec.kind == BasisSpec::Kind::spline) {
    spline_values(spec, x, out);
    return;
  }
  const double width = spec.B - spec.A;
  const double c0 = spec.normalized_fourier ? 1.0 / std::sqrt(width) : 1.0;
  const double amp = spec.normalized_fourier ? std::sqrt(2.0 / width)
                                             : std::numbers::sqrt2 / width;
  out[0] = c0;
  const double base = 2.0 * std::numbers::pi * (x - spec.A) / width;
  for (int l = 1; l <= spec.D; ++l) {
    const double angle = base * static_cast<double>(l);
    out[static_cast<std::size_t>(l)] = amp * std::cos(angle);
    out[static_cast<std::size_t>(spec.D + l)] = amp * std::sin(angle);
  }
}

void eval_basis_derivative(const BasisSpec& spec, double x, std::span<double> out) {
  const std::size_t m = static_cast<std::size_t>(spec.dimension());
  require(out.size() == m, ErrorCode::precondition, "output span has wrong size");
  if (spec.kind == BasisSpec::Kind::spline) {
    spline_derivatives(spec, x, out);
    return;
  }
  const double width = spec.B - spec.A;
  const double amp = spec.normalized_fourier ? std::sqrt(2.0 / width)
                                             : std::numbers::sqrt2 / width;
  out[0] = 0.0;
  const double freq = 2.0 * std::numbers::pi / width;
  const double base = freq * (x - spec.A);
  for (int l = 1; l <= spec.D; ++l) {
    const double angle = base * static_cast<double>(l);
    const double rate = amp * freq * static_cast<double>(l);
    out[static_cast<std::size_t>(l)] = -rate * std::sin(angle);
    out[static_cast<std::size_t>(spec.D + l)] = rate * std::cos(angle);
  }
}

std::vector<double> eval_basis(const BasisSpec& spec, double x) {
  std::vector<double> out(static_cast<std::size_t>(spec.dimension()));
  eval_basis(spec, x, out);
  return out;
}

std::vector<double> eval_basis_derivative(const BasisSpec& spec, double x) {
  std::vector<double> out(static_cast<std::size_t>(spec.dimension()));
  eval_basis_derivative(spec, x, out);
  return out;
}

BasisNorms basis_norms(const BasisSpec& spec, std::size_t per_interval) {
  require(per_interval >= 2, ErrorCode::precondition,
          "need >= 2 probe points per interval");
  const std::size_t cells = spec.kind == BasisSpec::Kind::spline
                                ? static_cast<std::size_t>(spec.K)
                                : static_cast<std::size_t>(std::max(spec.D, 1));
  const std::size_t total = cells * per_interval + 1;
  const double step = (spec.B - spec.A) / static_cast<double>(total - 1);
  std::vector<double> vals(static_cast<std::size_t>(spec.dimension()));
  std::vector<double> ders(vals.size());
  BasisNorms norms;
  for (std::size_t i = 0; i < total; ++i) {
    const double x = i + 1 == total ? spec.B : spec.A + step * static_cast<double>(i);
    eval_basis(spec, x, vals);
    eval_basis_derivative(spec, x, ders);
    double sq = 0.0, dq = 0.0;
    for (std::size_t l = 0; l < vals.size(); ++l) {
      sq += vals[l] * vals[l];
      dq += ders[l] * ders[l];
    }
    norms.l_m = std::max(norms.l_m, sq);
    norms.r_m = std::max(norms.r_m, dq);
  }
  return norms;
}

ConstraintBall ConstraintBall::scaled(int m, double A, double B, std::size_t N,
                                      std::size_t n) {
  require(m >= 1, ErrorCode::precondition, "dimension must be >= 1");
  require(B > A, ErrorCode::precondition, "needs B > A");
  require(N * n >= 2, ErrorCode::precondition,
          "ball scaling needs N*n >= 2 so log(Nn) > 0");
  ConstraintBall ball;
  const double width = B - A;
  ball.radius_sq = static_cast<double>(m) * width * width *
                   std::log(static_cast<double>(N) * static_cast<double>(n));
  return ball;
}

ConstraintBall ConstraintBall::fixed(double radius_sq) {
  require(radius_sq > 0.0, ErrorCode::precondition, "radius must be positive");
  ConstraintBall ball;
  ball.radius_sq = radius_sq;
  return ball;
}

}  // namespace sdeproj
