#include "cnoidal/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace cnoidal {

double group_velocity(const JacobianPoint& p, const CurveParams& c) {
  if (p.rho() < 1e-9 || p.rho() > 0.5 - 1e-9)
    throw Error(ErrorCode::BranchPointLimit, "beta at a branch point of the segment");
  auto w = weierstrass(2.0 * c.varpi3 * p.beta, c);
  Complex den = w.zeta - 2.0 * p.beta * c.zeta3 + chi(p.kind) * kI * kPi / (2.0 * c.varpi3);
  return (w.wp_prime / (2.0 * den)).real();
}

namespace {

double theta_ratio_log(double w, double d, const CurveParams& c) {
  return std::log((theta3(w - 0.5 * d, c) / theta3(w + 0.5 * d, c)).real());
}

double oscillation_bound(const CurveParams& c) {
  return std::log((theta3(0.0, c) / theta3(0.5, c)).real());
}

}  // namespace

PhaseTrack track_phase(const JacobianPoint& p, const CurveParams& c, double norming, double t,
                       double phase_offset) {
  if (!(norming > 0))
    throw Error(ErrorCode::InvalidArgument, "norming constant must be positive");
  const double P = quasi_momentum(p, c).imag();
  const double V = group_velocity(p, c);
  const double d = p.delta(c);
  const double kappa = (1.0 / (4.0 * kI * c.varpi3)).real();
  const double mean = std::log(norming) / P;
  auto F = [&](double phi) {
    double w = (V * t + phi) * kappa + phase_offset;
    return phi + theta_ratio_log(w, d, c) / P - mean;
  };
  double span = oscillation_bound(c) / P + 1.0;
  double lo = mean - span, hi = mean + span;
  if (!(F(lo) < 0 && F(hi) > 0))
    throw Error(ErrorCode::BracketFailure, "phase equation not bracketed");
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (F(mid) < 0 ? lo : hi) = mid;
  }
  double phi = 0.5 * (lo + hi);
  return {phi, V * t + phi};
}

double mean_phase(const JacobianPoint& p, const CurveParams& c, double norming, int samples,
                  double phase_offset) {
  const double V = group_velocity(p, c);
  const double T = c.period() / V;
  double acc = 0.0;
  for (int k = 0; k < samples; ++k)
    acc += track_phase(p, c, norming, (k + 0.5) * T / samples, phase_offset).phi;
  return acc / samples;
}

namespace {

double pair_log(const JacobianPoint& a, const JacobianPoint& b, const CurveParams& c) {
  return std::log(std::abs(theta1(a.beta - b.star(c), c) / theta1(a.beta - b.beta, c)));
}

}  // namespace

std::pair<double, double> pair_shifts(const JacobianPoint& p1, const JacobianPoint& p2,
                                      const CurveParams& c) {
  if (!(group_velocity(p1, c) > group_velocity(p2, c)))
    throw Error(ErrorCode::UnorderedVelocities, "pair_shifts needs V(beta1) > V(beta2)");
  double L = pair_log(p1, p2, c);
  double P1 = quasi_momentum(p1, c).imag(), P2 = quasi_momentum(p2, c).imag();
  return {2.0 * L / P1, -2.0 * L / P2};
}

std::vector<double> total_shift_schedule(const SolitonSpectrum& s, const CurveParams& c) {
  const std::size_t n = s.size();
  std::vector<double> V(n);
  for (std::size_t j = 0; j < n; ++j) V[j] = s.velocity(j);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (std::abs(V[a] - V[b]) <= 1e-12 * std::max(1.0, std::abs(V[a])))
        throw Error(ErrorCode::EqualVelocities, "two solitons share a velocity");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return V[a] > V[b]; });
  std::vector<double> out(n, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    std::size_t j = order[r];
    double acc = 0.0;
    for (std::size_t q = 0; q < n; ++q) {
      if (q == r) continue;
      double L = pair_log(s.points[j], s.points[order[q]], c);
      acc += q > r ? L : -L;
    }
    out[j] = 2.0 * acc / s.abs_p(j);
  }
  return out;
}

Reduction asymptotic_reduction(const SolitonSpectrum& s, const CurveParams& c, std::size_t j,
                               int sign, double x0) {
  if (j >= s.size()) throw Error(ErrorCode::InvalidArgument, "soliton index out of range");
  const auto& pj = s.points[j];
  double logc = std::log(s.norming[j] / std::abs(theta1(pj.delta(c), c)));
  double dl = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (k == j) continue;
    bool behind = sign < 0 ? s.velocity(k) < s.velocity(j) : s.velocity(k) > s.velocity(j);
    if (!behind) continue;
    const auto& pk = s.points[k];
    logc += 2.0 * std::log(std::abs(theta1(pk.beta - pj.beta, c) / theta1(pk.beta - pj.star(c), c)));
    dl += pk.delta(c);
  }
  const double kappa = (1.0 / (4.0 * kI * c.varpi3)).real();
  double offset = (s.x_shift[j] - x0) * kappa - background_shift(s, c) + dl + 0.5 * pj.delta(c);
  return {std::exp(logc), offset};
}

double circular_distance(double a, double b) {
  double d = std::fmod(a - b, 1.0);
  if (d < 0) d += 1.0;
  return std::min(d, 1.0 - d);
}

std::vector<WindowFit> background_shift_probe(const TauContext& ctx, double t,
                                              const std::vector<Window>& windows, int samples) {
  const auto& c = ctx.curve();
  const double kappa = (1.0 / (4.0 * kI * c.varpi3)).real();
  std::vector<WindowFit> out;
  for (const auto& win : windows) {
    if (!(win.xmax > win.xmin) || samples < 2)
      throw Error(ErrorCode::InvalidArgument, "empty probe window");
    std::vector<double> xs(samples), us(samples);
    for (int i = 0; i < samples; ++i) {
      xs[i] = win.xmin + (win.xmax - win.xmin) * i / (samples - 1);
      us[i] = ctx.u(xs[i], t);
    }
    auto misfit = [&](double ph) {
      double acc = 0.0;
      for (int i = 0; i < samples; ++i) {
        double m = 2.0 * kappa * kappa *
                       log_theta_derivs(ThetaKind::three, xs[i] * kappa + ph, c)[1].real() -
                   4.0 * ctx.quad_const();
        acc += (us[i] - m) * (us[i] - m);
      }
      return std::sqrt(acc / samples);
    };
    const int scan = 400;
    double best = 0.0, best_val = misfit(0.0);
    for (int k = 1; k < scan; ++k) {
      double v = misfit(double(k) / scan);
      if (v < best_val) {
        best_val = v;
        best = double(k) / scan;
      }
    }
    // golden section around the best scan point
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = best - 1.0 / scan, b = best + 1.0 / scan;
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = misfit(x1), f2 = misfit(x2);
    while (b - a > 1e-12) {
      if (f1 < f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - g * (b - a);
        f1 = misfit(x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + g * (b - a);
        f2 = misfit(x2);
      }
    }
    double ph = 0.5 * (a + b);
    double res = misfit(ph);
    if (res > 1e-2)
      throw Error(ErrorCode::FitDiverged, "background fit residual " + std::to_string(res));
    ph = std::fmod(ph, 1.0);
    if (ph < 0) ph += 1.0;
    out.push_back({ph, res});
  }
  return out;
}

}  // namespace cnoidal
