// Conserved and dissipated quantities of the energetic estimate, reported per
// sample; the energy-balance residual doubles as a solver-correctness monitor.
#pragma once

#include "viscodiff/basis.hpp"
#include "viscodiff/energy.hpp"

#include <span>

namespace viscodiff {

struct DiagnosticsRecord {
    double mass = 0.0;
    double free_energy = 0.0;
    double dissipation_rate = 0.0;  // alpha sum lambda_k b_k^2 + beta sum adot_k^2, >= 0
    double boundary_power = 0.0;
    double energy_residual = 0.0;
    double energy_residual_rel = 0.0;  // relative to |initial free energy| + 1
    double grad_sq = 0.0;              // sum lambda_k a_k^2, spectral |grad u|^2
};

// Integral of u = a_1 sqrt(L); only the constant mode has nonzero mean.
double total_mass(const SpectralCoeffs& a, const IntervalDomain& domain);

double free_energy(const SpectralCoeffs& a, const FreeEnergyModel& model,
                   const Quadrature& quad, const IntervalDomain& domain);
double free_energy(const SpectralCoeffs& a, const FreeEnergyModel& model,
                   const BasisTable& table);

double dissipation_rate(const SpectralCoeffs& adot, const SpectralCoeffs& b, double alpha,
                        double beta, const Eigen::VectorXd& eigenvalues);

// h(0,t) mu(0,t) + h(L,t) mu(L,t), with mu reconstructed from b.
double boundary_power(double h_left, double h_right, const SpectralCoeffs& b,
                      const IntervalDomain& domain);

double grad_sq(const SpectralCoeffs& a, const Eigen::VectorXd& eigenvalues);

// Residual of the energetic identity over a trajectory prefix, with the
// cumulative time integrals taken by composite trapezoid over the samples:
//   psi-energy(t) - psi-energy(0) + int dissipation - int boundary power.
// Zero for the exact semi-discrete solution.
double energy_residual(std::span<const double> t, std::span<const double> free_energy,
                       std::span<const double> dissipation, std::span<const double> boundary);

}  // namespace viscodiff
