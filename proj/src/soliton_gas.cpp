#include "cnoidal/soliton_gas.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

#include "cnoidal/dynamics.hpp"
#include "cnoidal/soliton_tau.hpp"

namespace cnoidal {

double interaction_kernel(const JacobianPoint& eta, const JacobianPoint& beta, const CurveParams& c) {
  if (std::abs(eta.beta - beta.beta) < 1e-14)
    throw Error(ErrorCode::DiagonalSingularity, "kernel evaluated on the diagonal");
  return std::log(std::abs(theta1(eta.beta - beta.beta, c) / theta1(eta.beta - beta.star(c), c)));
}

double free_speed_s0(const JacobianPoint& eta, const CurveParams& c) {
  return group_velocity(eta, c);
}

std::pair<double, double> ndr_rhs(const JacobianPoint& eta, const CurveParams& c) {
  if (eta.rho() < 1e-9 || eta.rho() > 0.5 - 1e-9)
    throw Error(ErrorCode::BranchPointLimit, "node at a branch point");
  auto w = weierstrass(2.0 * c.varpi3 * eta.beta, c);
  Complex P = w.zeta - 2.0 * c.zeta3 * eta.beta + chi(eta.kind) * kI * kPi / (2.0 * c.varpi3);
  Complex r1 = -0.5 * kI * P;
  Complex r2 = 0.25 * kI * w.wp_prime;
  if (std::abs(r1.imag()) > 1e-10 * std::max(1.0, std::abs(r1)) ||
      std::abs(r2.imag()) > 1e-10 * std::max(1.0, std::abs(r2)))
    throw Error(ErrorCode::NonConvergence, "dispersion relation right-hand side is not real");
  return {r1.real(), r2.real()};
}

namespace {

struct Panel {
  int first;     // index of the first of three nodes
  bool partial;  // integrate only between the last two nodes
};

std::vector<Panel> make_panels(int n) {
  std::vector<Panel> out;
  int p = 0;
  for (; p + 2 <= n - 1; p += 2) out.push_back({p, false});
  if (p < n - 1) out.push_back({n - 3, true});
  return out;
}

double mono_integral(int m, double sa, double sb) {
  return (std::pow(sb, m + 1) - std::pow(sa, m + 1)) / (m + 1);
}

double log_antideriv(int r, double t) {
  if (t == 0.0) return 0.0;
  double k = r + 1;
  return std::pow(t, r + 1) * (std::log(std::abs(t)) / k - 1.0 / (k * k));
}

// integral over [sa, sb] of ln|e - s| s^m, m = 0..2
std::array<double, 3> log_moments(double e, double sa, double sb) {
  std::array<double, 3> M{};
  if (std::abs(e - 0.5 * (sa + sb)) > 6.0) {
    for (int m = 0; m < 3; ++m)
      M[m] = boost::math::quadrature::gauss<double, 10>::integrate(
          [&](double s) { return std::log(std::abs(e - s)) * std::pow(s, m); }, sa, sb);
    return M;
  }
  const double ta = sa - e, tb = sb - e;
  double F[3];
  for (int r = 0; r < 3; ++r) F[r] = log_antideriv(r, tb) - log_antideriv(r, ta);
  M[0] = F[0];
  M[1] = F[1] + e * F[0];
  M[2] = F[2] + 2.0 * e * F[1] + e * e * F[0];
  return M;
}

struct Rule {
  std::vector<JacobianPoint> nodes;
  std::vector<double> x;      // Re beta of the nodes
  std::vector<double> plain;
};

// Panel in local coordinate t = (x - x0)/H on [0, 2], middle node at t1, with
// the quadratic Lagrange basis in monomial coefficients.
struct LocalPanel {
  double x0, H, t1, ta;
  double basis[3][3];
};

LocalPanel local_panel(const Rule& r, const Panel& p) {
  LocalPanel q;
  q.x0 = r.x[p.first];
  q.H = 0.5 * (r.x[p.first + 2] - q.x0);
  const double t1 = (r.x[p.first + 1] - q.x0) / q.H;
  q.t1 = t1;
  q.ta = p.partial ? t1 : 0.0;
  const double d0 = 2.0 * t1, d1 = t1 * (t1 - 2.0), d2 = 2.0 * (2.0 - t1);
  const double b[3][3] = {{2.0 * t1 / d0, -(t1 + 2.0) / d0, 1.0 / d0},
                          {0.0, -2.0 / d1, 1.0 / d1},
                          {0.0, -t1 / d2, 1.0 / d2}};
  for (int k = 0; k < 3; ++k)
    for (int m = 0; m < 3; ++m) q.basis[k][m] = b[k][m];
  return q;
}

// Uniform s in [0, 1] mapped through 3s^2 - 2s^3, which clusters nodes at both
// ends where u behaves like (beta - a) ln(beta - a).
Rule graded_rule(double lo, double hi, int n, SpectralKind kind, const CurveParams& c) {
  Rule r;
  for (int i = 0; i < n; ++i) {
    double s = double(i) / (n - 1);
    double x = i == n - 1 ? hi : lo + (hi - lo) * s * s * (3.0 - 2.0 * s);
    r.x.push_back(x);
    r.nodes.push_back({Complex(x, 0.0) + 0.5 * chi(kind) * c.tau, kind});
  }
  r.plain.assign(n, 0.0);
  for (const auto& p : make_panels(n)) {
    auto q = local_panel(r, p);
    for (int k = 0; k < 3; ++k) {
      double w = 0.0;
      for (int m = 0; m < 3; ++m) w += q.basis[k][m] * mono_integral(m, q.ta, 2.0);
      r.plain[p.first + k] += q.H * w;
    }
  }
  return r;
}

// ln|theta1(z)/z| for real z, with the limit at z = 0.
double smooth_log_theta1(double z, const CurveParams& c) {
  if (std::abs(z) < 1e-12) return std::log(std::abs(theta_eval(ThetaKind::one, 1, 0.0, c)));
  return std::log(std::abs(theta1(z, c) / z));
}

// Weights w_j with sum w_j f(beta_j) ~ integral of kernel(eta, beta) f(beta) over the rule.
std::vector<double> kernel_row(const JacobianPoint& eta, const Rule& r, const CurveParams& c) {
  const int n = static_cast<int>(r.nodes.size());
  std::vector<double> w(n, 0.0);
  const SpectralKind kind = r.nodes.front().kind;
  if (eta.kind != kind) {
    for (int j = 0; j < n; ++j) w[j] = r.plain[j] * interaction_kernel(eta, r.nodes[j], c);
    return w;
  }
  for (const auto& p : make_panels(n)) {
    auto q = local_panel(r, p);
    const double e = (eta.rho() - q.x0) / q.H, lh = std::log(q.H);
    auto M = log_moments(e, q.ta, 2.0);
    for (int k = 0; k < 3; ++k) {
      double acc = 0.0;
      for (int m = 0; m < 3; ++m) acc += q.basis[k][m] * (lh * mono_integral(m, q.ta, 2.0) + M[m]);
      w[p.first + k] += q.H * acc;
    }
  }
  for (int j = 0; j < n; ++j) {
    const auto& b = r.nodes[j];
    double z = eta.rho() - b.rho();
    double smooth = smooth_log_theta1(z, c) - std::log(std::abs(theta1(eta.beta - b.star(c), c)));
    w[j] += r.plain[j] * smooth;
  }
  return w;
}

void check_support(const std::vector<GasInterval>& support) {
  if (support.empty()) throw Error(ErrorCode::InvalidSupport, "empty support");
  for (std::size_t i = 0; i < support.size(); ++i) {
    const auto& s = support[i];
    if (!(s.a > 0.0 && s.b < 0.5 && s.a < s.b))
      throw Error(ErrorCode::InvalidSupport, "support interval must satisfy 0 < a < b < 1/2");
    for (std::size_t j = 0; j < i; ++j) {
      const auto& t = support[j];
      if (t.kind == s.kind && s.a < t.b && t.a < s.b)
        throw Error(ErrorCode::InvalidSupport, "overlapping support intervals");
    }
  }
}

}  // namespace

void ndr_solve(GasModel& model, const CurveParams& c) {
  check_support(model.support);
  if (model.nodes_per_interval < 8)
    throw Error(ErrorCode::InvalidArgument, "need at least 8 nodes per interval");
  if (!model.sigma) throw Error(ErrorCode::InvalidArgument, "sigma not set");
  std::vector<Rule> rules;
  model.nodes.clear();
  model.weights.clear();
  model.warnings.clear();
  for (const auto& s : model.support) {
    rules.push_back(graded_rule(s.a, s.b, model.nodes_per_interval, s.kind, c));
    model.nodes.insert(model.nodes.end(), rules.back().nodes.begin(), rules.back().nodes.end());
    model.weights.insert(model.weights.end(), rules.back().plain.begin(), rules.back().plain.end());
  }
  const int n = static_cast<int>(model.nodes.size());
  Eigen::MatrixXd W(n, n);
  Eigen::VectorXd r1(n), r2(n);
  for (int i = 0; i < n; ++i) {
    const auto& eta = model.nodes[i];
    int col = 0;
    for (std::size_t q = 0; q < rules.size(); ++q) {
      auto row = kernel_row(eta, rules[q], c);
      for (double v : row) W(i, col++) = v;
    }
    auto rhs = ndr_rhs(eta, c);
    r1[i] = rhs.first;
    r2[i] = rhs.second;
  }
  Eigen::MatrixXd A = W;
  for (int i = 0; i < n; ++i) {
    double sg = model.sigma(model.nodes[i]);
    if (!(sg >= 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma must be non-negative");
    A(i, i) += sg;
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  if (!(lu.rcond() >= 1e-12))
    throw Error(ErrorCode::SingularSystem, "dispersion system is singular (rcond " +
                                               std::to_string(lu.rcond()) + ")");
  Eigen::VectorXd u = lu.solve(r1), v = lu.solve(r2);
  model.kernel_weights = W;
  model.solved_u.assign(u.data(), u.data() + n);
  model.solved_v.assign(v.data(), v.data() + n);
  for (int i = 0; i < n; ++i)
    if (u[i] < -1e-8) {
      model.warnings.push_back("NegativeDensity at Re eta = " + std::to_string(model.nodes[i].rho()));
      break;
    }
  model.solved = true;
  auto kw = carrier_quantities(model, c);
  model.carrier_k = kw.first;
  model.carrier_w = kw.second;
}

std::pair<double, double> carrier_quantities(const GasModel& model, const CurveParams& c) {
  double ku = 0.0, kv = 0.0;
  for (std::size_t j = 0; j < model.nodes.size(); ++j) {
    double d = model.nodes[j].delta(c);
    ku += model.weights[j] * d * (model.solved ? model.solved_u[j] : 0.0);
    kv += model.weights[j] * d * (model.solved ? model.solved_v[j] : 0.0);
  }
  double base = (-kI / (2.0 * c.varpi3)).real();
  return {2.0 * kPi * (ku + base), 2.0 * kPi * kv};
}

std::vector<double> gas_speed(const GasModel& model) {
  if (!model.solved) throw Error(ErrorCode::InvalidArgument, "model not solved");
  std::vector<double> s(model.solved_u.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (model.solved_u[i] < 1e-14)
      throw Error(ErrorCode::ZeroDensityNode, "density vanishes at a node");
    s[i] = -model.solved_v[i] / model.solved_u[i];
  }
  return s;
}

double equation_of_state_residual(const GasModel& model, const CurveParams& c) {
  auto s = gas_speed(model);
  const int n = static_cast<int>(s.size());
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    double p = quasi_momentum(model.nodes[i], c).imag();
    double acc = 0.0;
    for (int j = 0; j < n; ++j)
      acc += 2.0 / p * model.kernel_weights(i, j) * (s[i] - s[j]) * model.solved_u[j];
    worst = std::max(worst, std::abs(s[i] - free_speed_s0(model.nodes[i], c) - acc));
  }
  return worst;
}

double tracer_shift(const GasModel& model, const JacobianPoint& eta, const CurveParams& c,
                    int panels) {
  check_support(model.support);
  if (!model.tracer) throw Error(ErrorCode::InvalidArgument, "tracer density not set");
  const double b_eta = wp_of(eta, c);
  const int m = 2 * panels + 1;
  double acc = 0.0;
  auto piece = [&](double lo, double hi, SpectralKind kind) {
    if (hi - lo <= 0.0) return;
    Rule r = graded_rule(lo, hi, m, kind, c);
    auto w = kernel_row(eta, r, c);
    JacobianPoint mid{Complex(0.5 * (lo + hi), 0.0) + 0.5 * chi(kind) * c.tau, kind};
    double sgn = b_eta > wp_of(mid, c) ? 1.0 : -1.0;
    for (int j = 0; j < m; ++j) acc += sgn * w[j] * model.tracer(r.nodes[j]);
  };
  for (const auto& s : model.support) {
    if (s.kind == eta.kind && eta.rho() > s.a && eta.rho() < s.b) {
      piece(s.a, eta.rho(), s.kind);
      piece(eta.rho(), s.b, s.kind);
    } else {
      piece(s.a, s.b, s.kind);
    }
  }
  return 2.0 / quasi_momentum(eta, c).imag() * acc;
}

double background_shift_rate(const GasModel& model, const CurveParams& c, int panels) {
  check_support(model.support);
  if (!model.tracer) throw Error(ErrorCode::InvalidArgument, "tracer density not set");
  double acc = 0.0;
  for (const auto& s : model.support) {
    Rule r = graded_rule(s.a, s.b, 2 * panels + 1, s.kind, c);
    for (std::size_t j = 0; j < r.nodes.size(); ++j)
      acc += r.plain[j] * 0.5 * r.nodes[j].delta(c) * model.tracer(r.nodes[j]);
  }
  return acc;
}

SpectralFunction density_in_beta(std::function<double(double)> phi_of_b, const CurveParams& c) {
  return [phi_of_b, c](const JacobianPoint& p) {
    auto w = weierstrass(2.0 * c.varpi3 * p.beta, c);
    return std::abs(2.0 * c.varpi3 * w.wp_prime) * phi_of_b(w.wp.real());
  };
}

SpectralFunction sigma_from_density(std::function<double(double)> nu_of_b,
                                    std::function<double(double)> phi_of_b, const CurveParams& c) {
  auto phi_hat = density_in_beta(phi_of_b, c);
  return [nu_of_b, phi_hat, c](const JacobianPoint& p) {
    double ph = phi_hat(p);
    if (!(ph > 0.0)) throw Error(ErrorCode::ZeroDensityNode, "density vanishes where sigma is needed");
    return nu_of_b(wp_of(p, c)) / ph;
  };
}

}  // namespace cnoidal
