#pragma once

/// Soliton velocities, position tracking and interaction shifts.

#include <vector>

#include "cnoidal/elliptic.hpp"
#include "cnoidal/soliton_tau.hpp"

namespace cnoidal {

/// V = wp'(2 varpi3 beta) / (2 (zeta(2 varpi3 beta) - 2 beta zeta(varpi3) + chi i pi/(2 varpi3))).
double group_velocity(const JacobianPoint& p, const CurveParams& c);

struct PhaseTrack {
  double phi;      // Phi(t)
  double center;   // V t + Phi(t), relative to x_j
};

/// Solves Phi = -(1/|P|) ln[theta3(w + o - d/2) / theta3(w + o + d/2)] + ln(norming)/|P|,
/// w = (V t + Phi)/(4 i varpi3), d = beta - beta*, o = phase_offset.
PhaseTrack track_phase(const JacobianPoint& p, const CurveParams& c, double norming, double t,
                       double phase_offset = 0.0);

/// Mean of Phi over one period 4 i varpi3 / V, composite midpoint rule.
double mean_phase(const JacobianPoint& p, const CurveParams& c, double norming, int samples = 256,
                  double phase_offset = 0.0);

/// (Delta_1, Delta_2) for V(p1) > V(p2).
std::pair<double, double> pair_shifts(const JacobianPoint& p1, const JacobianPoint& p2,
                                      const CurveParams& c);

/// Averaged total shift of each soliton, in spectrum order.
std::vector<double> total_shift_schedule(const SolitonSpectrum& s, const CurveParams& c);

/// Effective norming constant and background phase offset of soliton j in the
/// single-soliton reduction for t -> -inf (sign < 0) or t -> +inf (sign > 0).
struct Reduction {
  double norming;
  double phase_offset;
};
Reduction asymptotic_reduction(const SolitonSpectrum& s, const CurveParams& c, std::size_t j,
                               int sign, double x0 = 0.0);

struct Window {
  double xmin, xmax;
};

struct WindowFit {
  double phase;      // u ~ 2 d^2 ln theta3(x/(4 i varpi3) + phase) - zeta(varpi3)/(2 varpi3)
  double residual;   // rms misfit
};

std::vector<WindowFit> background_shift_probe(const TauContext& ctx, double t,
                                              const std::vector<Window>& windows,
                                              int samples = 200);

/// Distance between two phases on the circle R/Z.
double circular_distance(double a, double b);

}  // namespace cnoidal
