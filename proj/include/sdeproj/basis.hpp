#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sdeproj/model.hpp"

namespace sdeproj {

// Finite-dimensional function system on [A, B]:
//  - spline: the K+degree B-splines of the given degree on K equal
//    subintervals of [A, B] (clamped uniform knots); they vanish outside
//    [A, B] and sum to one inside.
//  - fourier: 1, sqrt(2)/(B-A) cos(2*pi*l*(x-A)/(B-A)),
//    sqrt(2)/(B-A) sin(...), l = 1..D, dimension 2D+1. The normalized
//    variant rescales to an orthonormal system in L2([A,B]).
struct BasisSpec {
  enum class Kind { spline, fourier };
  Kind kind = Kind::spline;
  int K = 0;       // spline: number of interior subintervals
  int degree = 3;  // spline degree
  int D = 0;       // fourier: number of frequencies
  double A = -1.0;
  double B = 1.0;
  bool normalized_fourier = false;

  int dimension() const;
  std::vector<double> knots() const;  // padded knot vector (spline only)

  static BasisSpec spline(int K, int degree, double A, double B);
  static BasisSpec fourier(int D, double A, double B, bool normalized = false);
};

// Writes the m basis values at x into out (m = spec.dimension()).
void eval_basis(const BasisSpec& spec, double x, std::span<double> out);
void eval_basis_derivative(const BasisSpec& spec, double x, std::span<double> out);

std::vector<double> eval_basis(const BasisSpec& spec, double x);
std::vector<double> eval_basis_derivative(const BasisSpec& spec, double x);

// Probed sup over [A, B] of sum phi_l(x)^2 (l_m) and of sum phi_l'(x)^2
// (r_m); the default probe places `per_interval` points on each knot
// interval (or a uniform grid of D*per_interval points for fourier).
struct BasisNorms {
  double l_m = 0.0;
  double r_m = 0.0;
};
BasisNorms basis_norms(const BasisSpec& spec, std::size_t per_interval = 64);

// Euclidean ball for the coefficient vector.
struct ConstraintBall {
  double radius_sq = 0.0;

  // m (B-A)^2 log(Nn), the dimension-scaled ball used by the projection
  // estimator
  static ConstraintBall scaled(int m, double A, double B, std::size_t N,
                               std::size_t n);
  static ConstraintBall fixed(double radius_sq);
};

}  // namespace sdeproj
