#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "cnoidal/dynamics.hpp"

using namespace cnoidal;

namespace {

const CurveParams& curve() {
  static const CurveParams c = half_periods(2, 1, -3);
  return c;
}

JacobianPoint hot(double r) { return jacobian_point(r, SpectralKind::hot, curve()); }
JacobianPoint cool(double r) { return jacobian_point(r, SpectralKind::cool, curve()); }

double kappa() { return (1.0 / (4.0 * kI * curve().varpi3)).real(); }

// Right-hand side of the phase equation, written out directly.
double phase_rhs(const JacobianPoint& p, double norming, double t, double phi) {
  const auto& c = curve();
  double P = quasi_momentum(p, c).imag(), V = group_velocity(p, c), d = p.delta(c);
  double w = (V * t + phi) * kappa();
  return -std::log((theta3(w - d / 2, c) / theta3(w + d / 2, c)).real()) / P + std::log(norming) / P;
}

}  // namespace

TEST_CASE("group velocities of the reference solitons") {
  const auto& c = curve();
  CHECK(std::abs(group_velocity(cool(0.24), c) + 8.99139) < 1e-3);
  CHECK(std::abs(group_velocity(hot(0.30), c) - 6.8273) < 1e-3);
  CHECK(std::abs(group_velocity(cool(0.25), c) + 8.94427) < 1e-4);
  CHECK(std::abs(group_velocity(cool(0.36), c) + 8.4810443) < 1e-4);
  try {
    group_velocity(JacobianPoint{Complex(0.5, 0.0), SpectralKind::hot}, c);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BranchPointLimit);
  }
}

TEST_CASE("velocity agrees with -E/P and has the sign of the segment") {
  const auto& c = curve();
  for (int k = 1; k < 200; ++k) {
    double r = 0.5 * k / 200;
    for (auto p : {hot(r), cool(r)}) {
      double V = group_velocity(p, c);
      double ratio = (-quasi_energy(p, c) / quasi_momentum(p, c)).real();
      CHECK(std::abs(V - ratio) <= 1e-12 * std::max(1.0, std::abs(V)));
      if (p.kind == SpectralKind::hot)
        CHECK(V > 0);
      else
        CHECK(V < 0);
    }
  }
}

TEST_CASE("energetic hot solitons move with speed |b|") {
  const auto& c = curve();
  double b = -3000;
  auto p = invert_wp(b, c);
  CHECK(std::abs(group_velocity(p, c) / std::abs(b) - 1) < 0.01);
}

TEST_CASE("velocity ordering survives rescaling") {
  const auto& c = curve();
  auto c2 = half_periods(8, 4, -12);
  std::vector<std::pair<double, SpectralKind>> pts = {
      {0.1, SpectralKind::hot}, {0.3, SpectralKind::hot}, {0.45, SpectralKind::cool},
      {0.2, SpectralKind::cool}, {0.33, SpectralKind::cool}, {0.05, SpectralKind::hot}};
  auto order = [&](const CurveParams& cv) {
    std::vector<double> V;
    for (auto [r, k] : pts) V.push_back(group_velocity(jacobian_point(r, k, cv), cv));
    std::vector<int> idx(V.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return V[a] < V[b]; });
    return idx;
  };
  CHECK(order(c) == order(c2));
}

TEST_CASE("tracked phase solves its equation and is periodic") {
  const auto& c = curve();
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-20, 20);
  for (auto [p, C] : {std::pair{hot(0.3), 0.7}, std::pair{cool(0.24), 2.0}, std::pair{cool(0.36), 1.0}}) {
    double T = c.period() / group_velocity(p, c);
    for (int k = 0; k < 100; ++k) {
      double t = u(rng);
      auto tr = track_phase(p, c, C, t);
      CHECK(std::abs(tr.phi - phase_rhs(p, C, t, tr.phi)) <= 1e-10);
      CHECK(std::abs(track_phase(p, c, C, t + T).phi - tr.phi) < 1e-9);
    }
  }
  CHECK_THROWS_AS(track_phase(hot(0.3), c, -1.0, 0.0), Error);
}

TEST_CASE("period average of the phase") {
  const auto& c = curve();
  for (double C : {0.3, 1.0, 5.0}) {
    auto p = hot(0.3);
    double P = quasi_momentum(p, c).imag();
    double m256 = mean_phase(p, c, C, 256), m512 = mean_phase(p, c, C, 512);
    CHECK(std::abs(m256 - std::log(C) / P) < 1e-8);
    CHECK(std::abs(m512 - m256) < 1e-9);
  }
  CHECK(std::abs(mean_phase(hot(0.2), c, 1.0)) < 1e-8);
}

TEST_CASE("pair shifts of the two dim solitons") {
  const auto& c = curve();
  auto b1 = cool(0.25), b2 = cool(0.36);
  CHECK_THROWS_AS(pair_shifts(b1, b2, c), Error);
  auto [d2, d1] = pair_shifts(b2, b1, c);
  CHECK(std::abs(d1 + 17.32) < 1e-2);
  CHECK(std::abs(d2 - 22.878) < 1e-2);
  auto s = build_spectrum(c, std::vector<JacobianPoint>{b1, b2});
  auto sch = total_shift_schedule(s, c);
  CHECK(sch[0] == doctest::Approx(d1).epsilon(1e-14));
  CHECK(sch[1] == doctest::Approx(d2).epsilon(1e-14));
}

TEST_CASE("pair shifts have opposite signs") {
  const auto& c = curve();
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.02, 0.48);
  for (int k = 0; k < 20; ++k) {
    auto a = jacobian_point(u(rng), k % 2 ? SpectralKind::hot : SpectralKind::cool, c);
    auto b = jacobian_point(u(rng), k % 3 ? SpectralKind::cool : SpectralKind::hot, c);
    if (std::abs(a.beta - b.beta) < 1e-3) continue;
    if (group_velocity(a, c) < group_velocity(b, c)) std::swap(a, b);
    auto [d1, d2] = pair_shifts(a, b, c);
    CHECK(d1 * d2 < 0);
  }
}

TEST_CASE("total shift schedules") {
  const auto& c = curve();
  auto one = build_spectrum(c, std::vector<JacobianPoint>{hot(0.3)});
  CHECK(total_shift_schedule(one, c)[0] == 0.0);
  std::vector<JacobianPoint> pts = {hot(0.1), hot(0.3), hot(0.22)};
  auto s = build_spectrum(c, pts);
  auto sch = total_shift_schedule(s, c);
  for (std::size_t j = 0; j < 3; ++j) {
    double acc = 0;
    for (std::size_t k = 0; k < 3; ++k) {
      if (k == j) continue;
      bool faster = s.velocity(j) > s.velocity(k);
      auto sh = faster ? pair_shifts(pts[j], pts[k], c) : pair_shifts(pts[k], pts[j], c);
      acc += faster ? sh.first : sh.second;
    }
    CHECK(std::abs(sch[j] - acc) < 1e-12);
  }
}

TEST_CASE("transport of the bright soliton") {
  const auto& c = curve();
  auto p = hot(0.3);
  auto s = build_spectrum(c, std::vector<JacobianPoint>{p});
  TauContext ctx(c, s);
  double T = 10 / s.velocity(0);
  CHECK(std::abs(ctx.core_position(0, T) - ctx.core_position(0, 0) - 10) < 0.1);
  CHECK(std::abs(ctx.core_position(0, 0) - ctx.core_position(0, -T) - 10) < 0.1);
  auto r = asymptotic_reduction(s, c, 0, -1);
  CHECK(std::abs(r.norming - 1) < 1e-14);
  CHECK(std::abs(track_phase(p, c, r.norming, T, r.phase_offset).center - ctx.core_position(0, T)) <
        1e-8);
}

TEST_CASE("hot and dim solitons travel in opposite directions") {
  const auto& c = curve();
  auto s = build_spectrum(c, std::vector<JacobianPoint>{hot(0.3), cool(0.24)});
  double t = 30 / s.velocity(0);
  double before_hot = track_phase(s.points[0], c, asymptotic_reduction(s, c, 0, -1).norming, -t,
                                  asymptotic_reduction(s, c, 0, -1).phase_offset).center;
  auto rp = asymptotic_reduction(s, c, 0, 1);
  double after_hot = track_phase(s.points[0], c, rp.norming, t, rp.phase_offset).center;
  auto dm = asymptotic_reduction(s, c, 1, -1), dp = asymptotic_reduction(s, c, 1, 1);
  double before_dim = track_phase(s.points[1], c, dm.norming, -t, dm.phase_offset).center;
  double after_dim = track_phase(s.points[1], c, dp.norming, t, dp.phase_offset).center;
  CHECK(after_hot - before_hot > 50);
  CHECK(after_dim - before_dim < -70);
}

TEST_CASE("empirical scattering of the two dim solitons") {
  const auto& c = curve();
  auto s = build_spectrum(c, std::vector<JacobianPoint>{cool(0.25), cool(0.36)});
  auto sch = total_shift_schedule(s, c);
  const double T = 182.5586;
  for (std::size_t j = 0; j < 2; ++j) {
    auto rm = asymptotic_reduction(s, c, j, -1), rp = asymptotic_reduction(s, c, j, 1);
    double xm = track_phase(s.points[j], c, rm.norming, -T, rm.phase_offset).center;
    double xp = track_phase(s.points[j], c, rp.norming, T, rp.phase_offset).center;
    CHECK(std::abs(xp - xm - 2 * T * s.velocity(j) - sch[j]) < c.period());
  }
}

TEST_CASE("background phase probe") {
  const auto& c = curve();
  SUBCASE("no solitons") {
    TauContext ctx(c, build_spectrum(c, std::vector<JacobianPoint>{}));
    auto f = background_shift_probe(ctx, 0.3, {{-30, -20}, {0, 10}, {40, 50}});
    for (const auto& w : f) CHECK(circular_distance(w.phase, f[0].phase) < 1e-6);
  }
  SUBCASE("single hot soliton") {
    auto p = hot(0.3);
    TauContext ctx(c, build_spectrum(c, std::vector<JacobianPoint>{p}));
    auto f = background_shift_probe(ctx, 0.0, {{-40, -25}, {25, 40}});
    // phase read from the wave u ~ theta3(x kappa + phase)
    double expected = std::fmod(f[1].phase - f[0].phase + 2.0, 1.0);
    CHECK(circular_distance(expected, -p.delta(c)) < 1e-4);
  }
  SUBCASE("hot plus dim") {
    auto s = build_spectrum(c, std::vector<JacobianPoint>{hot(0.3), cool(0.24)});
    TauContext ctx(c, s);
    double A = ctx.shift_a(), d1 = s.points[0].delta(c);
    auto f = background_shift_probe(ctx, 30 / s.velocity(0), {{60, 80}, {18, 25}, {-160, -140}});
    // right of everything, between the two, left of everything
    CHECK(circular_distance(f[0].phase, -A) < 1e-3);
    CHECK(circular_distance(f[1].phase, -A + d1) < 1e-3);
    CHECK(circular_distance(f[2].phase, A) < 1e-3);
  }
}
