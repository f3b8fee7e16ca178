#pragma once

/// Nonlinear dispersion relations of the soliton gas on the cnoidal background,
/// discretized by Nystrom's method with product integration of the log kernel.

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cnoidal/elliptic.hpp"

namespace cnoidal {

/// Segment of the support: Re beta in [a, b] on the hot or cool segment.
struct GasInterval {
  double a = 0, b = 0;
  SpectralKind kind = SpectralKind::hot;
};

using SpectralFunction = std::function<double(const JacobianPoint&)>;

struct GasModel {
  std::vector<GasInterval> support;
  SpectralFunction sigma;
  SpectralFunction tracer;   // density in beta, for tracer_shift and background_shift_rate
  int nodes_per_interval = 33;

  // filled by ndr_solve
  std::vector<JacobianPoint> nodes;
  std::vector<double> weights;      // plain quadrature weights
  Eigen::MatrixXd kernel_weights;   // integral of kernel(eta_i, .) against node basis j
  std::vector<double> solved_u, solved_v;
  double carrier_k = 0, carrier_w = 0;
  std::vector<std::string> warnings;
  bool solved = false;
};

/// ln|theta1(eta - beta) / theta1(eta - beta*)|, beta* = 1 - beta + chi tau.
double interaction_kernel(const JacobianPoint& eta, const JacobianPoint& beta, const CurveParams& c);

double free_speed_s0(const JacobianPoint& eta, const CurveParams& c);

/// Right-hand sides -(i/2)[zeta(2 varpi3 eta) - 2 zeta(varpi3) eta + chi i pi/(2 varpi3)]
/// and (i/4) wp'(2 varpi3 eta), both real.
std::pair<double, double> ndr_rhs(const JacobianPoint& eta, const CurveParams& c);

void ndr_solve(GasModel& model, const CurveParams& c);

std::pair<double, double> carrier_quantities(const GasModel& model, const CurveParams& c);

std::vector<double> gas_speed(const GasModel& model);

double equation_of_state_residual(const GasModel& model, const CurveParams& c);

/// Averaged total shift of a tracer soliton at eta among a gas of density
/// model.tracer on model.support.
double tracer_shift(const GasModel& model, const JacobianPoint& eta, const CurveParams& c,
                    int panels = 1024);

/// Limit of A/N: integral of (beta - beta*)/2 against model.tracer.
double background_shift_rate(const GasModel& model, const CurveParams& c, int panels = 1024);

/// phi_hat(beta) = |2 varpi3 phi(wp(2 varpi3 beta)) wp'(2 varpi3 beta)| for a density phi in b.
SpectralFunction density_in_beta(std::function<double(double)> phi_of_b, const CurveParams& c);

/// sigma(eta) = nu(wp(2 varpi3 eta)) / phi_hat(eta).
SpectralFunction sigma_from_density(std::function<double(double)> nu_of_b,
                                    std::function<double(double)> phi_of_b, const CurveParams& c);

}  // namespace cnoidal
