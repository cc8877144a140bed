#include "sdeproj/estimator.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <json.hpp>

#include "sdeproj/errors.hpp"
#include "sdeproj/io.hpp"

namespace sdeproj {

namespace {

using json = nlohmann::ordered_json;

json spec_to_json(const BasisSpec& spec) {
  json j;
  j["kind"] = spec.kind == BasisSpec::Kind::spline ? "spline" : "fourier";
  if (spec.kind == BasisSpec::Kind::spline) {
    j["K"] = spec.K;
    j["degree"] = spec.degree;
  } else {
    j["D"] = spec.D;
    j["normalized"] = spec.normalized_fourier;
  }
  j["A"] = spec.A;
  j["B"] = spec.B;
  return j;
}

BasisSpec spec_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "spline") {
    return BasisSpec::spline(j.at("K").get<int>(), j.at("degree").get<int>(),
                             j.at("A").get<double>(), j.at("B").get<double>());
  }
  require(kind == "fourier", ErrorCode::config, "unknown basis kind: " + kind);
  return BasisSpec::fourier(j.at("D").get<int>(), j.at("A").get<double>(),
                            j.at("B").get<double>(),
                            j.value("normalized", false));
}

}  // namespace

std::string Estimate::to_json() const {
  json j;
  j["basis"] = spec_to_json(spec);
  j["coeffs"] = coeffs;
  j["radius_sq"] = constraint.radius_sq;
  j["active"] = active;
  j["lambda"] = lambda;
  if (truncation_level) {
    j["truncation_level"] = *truncation_level;
  } else {
    j["truncation_level"] = nullptr;
  }
  return j.dump(2);
}

Estimate Estimate::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& err) {
    fail(ErrorCode::config, std::string("bad estimate JSON: ") + err.what());
  }
  Estimate est;
  est.spec = spec_from_json(j.at("basis"));
  est.coeffs = j.at("coeffs").get<std::vector<double>>();
  require(est.coeffs.size() == static_cast<std::size_t>(est.spec.dimension()),
          ErrorCode::config, "coefficient count does not match basis dimension");
  est.constraint = ConstraintBall::fixed(j.at("radius_sq").get<double>());
  est.active = j.at("active").get<bool>();
  est.lambda = j.at("lambda").get<double>();
  if (!j.at("truncation_level").is_null()) {
    est.truncation_level = j.at("truncation_level").get<double>();
  }
  return est;
}

void Estimate::save_json(const std::string& path) const {
  auto os = open_output(path);
  os << to_json() << '\n';
  require(bool(os), ErrorCode::config, "write failed: " + path);
}

Estimate Estimate::load_json_file(const std::string& path) {
  auto is = open_input(path);
  std::string text((std::istreambuf_iterator<char>(is)),
                   std::istreambuf_iterator<char>());
  return from_json(text);
}

Estimate fit(const RegressionData& data, const BasisSpec& spec,
             const ConstraintBall& ball) {
  const std::size_t count = data.x.size();
  require(count >= 1, ErrorCode::precondition, "empty regression data");
  require(ball.radius_sq > 0.0, ErrorCode::precondition,
          "constraint ball must have positive radius");
  const int m = spec.dimension();

  // normal equations G a = r with G = Phi' Phi / (Nn), r = Phi' u / (Nn)
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(m, m);
  Eigen::VectorXd r = Eigen::VectorXd::Zero(m);
  std::vector<double> phi(static_cast<std::size_t>(m));
  std::vector<bool> touched(static_cast<std::size_t>(m), false);
  for (std::size_t i = 0; i < count; ++i) {
    eval_basis(spec, data.x[i], phi);
    for (int a = 0; a < m; ++a) {
      if (phi[a] == 0.0) continue;
      touched[a] = true;
      r[a] += phi[a] * data.u[i];
      for (int b = a; b < m; ++b) G(a, b) += phi[a] * phi[b];
    }
  }
  const double inv_count = 1.0 / static_cast<double>(count);
  G *= inv_count;
  r *= inv_count;
  G = G.selfadjointView<Eigen::Upper>();

  // columns with empty support are fixed at zero and left out of the solve
  std::vector<int> keep;
  for (int a = 0; a < m; ++a) {
    if (touched[a]) keep.push_back(a);
  }
  Estimate est;
  est.spec = spec;
  est.constraint = ball;
  est.coeffs.assign(static_cast<std::size_t>(m), 0.0);
  if (keep.empty()) return est;  // no data inside the basis support

  const int mk = static_cast<int>(keep.size());
  Eigen::MatrixXd Gk(mk, mk);
  Eigen::VectorXd rk(mk);
  for (int a = 0; a < mk; ++a) {
    rk[a] = r[keep[a]];
    for (int b = 0; b < mk; ++b) Gk(a, b) = G(keep[a], keep[b]);
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Gk);
  require(eig.info() == Eigen::Success, ErrorCode::singular_design,
          "eigendecomposition of the normal matrix failed");
  const Eigen::VectorXd evals = eig.eigenvalues();
  const Eigen::VectorXd q = eig.eigenvectors().transpose() * rk;
  const double max_eig = evals.maxCoeff();
  const double min_eig = evals.minCoeff();
  const bool singular = !(min_eig > 1e-14 * std::max(max_eig, 0.0));

  const auto norm_sq_at = [&](double lambda) {
    double s = 0.0;
    for (int i = 0; i < mk; ++i) {
      const double den = evals[i] + lambda;
      if (den <= 0.0) return std::numeric_limits<double>::infinity();
      const double c = q[i] / den;
      s += c * c;
    }
    return s;
  };
  const auto coeffs_at = [&](double lambda) {
    Eigen::VectorXd c(mk);
    for (int i = 0; i < mk; ++i) c[i] = q[i] / (evals[i] + lambda);
    return (eig.eigenvectors() * c).eval();
  };

  double norm0;
  if (singular) {
    // minimum-norm solution: drop the near-null directions
    double s = 0.0;
    bool inconsistent = false;
    for (int i = 0; i < mk; ++i) {
      if (evals[i] > 1e-14 * std::max(max_eig, 0.0)) {
        const double c = q[i] / evals[i];
        s += c * c;
      } else if (std::abs(q[i]) > 1e-12 * std::max(1.0, rk.norm())) {
        inconsistent = true;
      }
    }
    norm0 = inconsistent ? std::numeric_limits<double>::infinity() : s;
  } else {
    norm0 = norm_sq_at(0.0);
  }

  if (norm0 <= ball.radius_sq) {
    require(!singular, ErrorCode::singular_design,
            "normal matrix numerically singular (min eigenvalue below 1e-14 of "
            "max) while the coefficient ball constraint is slack");
    const Eigen::VectorXd a = coeffs_at(0.0);
    for (int i = 0; i < mk; ++i) est.coeffs[keep[i]] = a[i];
    est.active = false;
    est.lambda = 0.0;
    return est;
  }

  // ball binds: ||a(lambda)||^2 is strictly decreasing in lambda, bisect
  double lo = 0.0;
  double hi = 1.0;
  while (norm_sq_at(hi) > ball.radius_sq) {
    lo = hi;
    hi *= 2.0;
    require(hi < 1e300, ErrorCode::singular_design,
            "ridge search failed to bracket the ball constraint");
  }
  const double tol = 1e-10 * ball.radius_sq;
  double lambda = hi;
  for (int iter = 0; iter < 200; ++iter) {
    lambda = 0.5 * (lo + hi);
    const double nrm = norm_sq_at(lambda);
    if (std::abs(nrm - ball.radius_sq) <= tol) break;
    if (nrm > ball.radius_sq) {
      lo = lambda;
    } else {
      hi = lambda;
    }
  }
  const Eigen::VectorXd a = coeffs_at(lambda);
  for (int i = 0; i < mk; ++i) est.coeffs[keep[i]] = a[i];
  est.active = true;
  est.lambda = lambda;
  return est;
}

double evaluate(const Estimate& estimate, double x) {
  std::vector<double> phi(estimate.coeffs.size());
  eval_basis(estimate.spec, x, phi);
  double v = 0.0;
  for (std::size_t l = 0; l < phi.size(); ++l) v += estimate.coeffs[l] * phi[l];
  if (estimate.truncation_level && v > *estimate.truncation_level) {
    v = *estimate.truncation_level;
  }
  return v;
}

Estimate truncate(const Estimate& estimate, std::size_t N) {
  require(N >= 2, ErrorCode::precondition, "truncation level log(N) needs N >= 2");
  Estimate out = estimate;
  out.truncation_level = std::log(static_cast<double>(N));
  return out;
}

double contrast(const RegressionData& data, const ScalarFn& fn) {
  double s = 0.0;
  for (std::size_t i = 0; i < data.x.size(); ++i) {
    const double d = data.u[i] - fn(data.x[i]);
    s += d * d;
  }
  return s / static_cast<double>(data.x.size());
}

double contrast(const RegressionData& data, const Estimate& estimate) {
  return contrast(data, [&](double x) { return evaluate(estimate, x); });
}

std::size_t dimension_rule(DimensionRegime regime, std::size_t N, std::size_t n,
                           double beta, double c) {
  require(beta >= 1.0, ErrorCode::precondition, "smoothness index must be >= 1");
  require(c > 0.0, ErrorCode::precondition, "rule constant must be positive");
  require(N >= 1 && n >= 1, ErrorCode::precondition, "sizes must be >= 1");
  const double exponent = 1.0 / (2.0 * beta + 1.0);
  double raw = 0.0;
  switch (regime) {
    case DimensionRegime::compact_single_path:
      raw = c * std::pow(static_cast<double>(n), exponent);
      break;
    case DimensionRegime::compact_repeated:
      raw = c * std::pow(static_cast<double>(N) * static_cast<double>(n),
                         exponent);
      break;
    case DimensionRegime::growing_interval: {
      require(N >= 2, ErrorCode::precondition,
              "growing-interval rule needs N >= 2");
      const double logN = std::log(static_cast<double>(N));
      raw = c * std::pow(static_cast<double>(N), 2.0 * exponent) /
            std::pow(logN, 2.5);
      break;
    }
  }
  const double rounded = std::ceil(raw);
  return static_cast<std::size_t>(std::max(2.0, rounded));
}

}  // namespace sdeproj
