// Catalog of coarse-grain free energies: double-well, quadratic, the
// regular-solution (logarithmic) energy and its quadratic-below-epsilon
// regularization, plus growth metadata for the solver's assumption checks.
#pragma once

#include <span>
#include <string>
#include <vector>

namespace viscodiff {

enum class EnergyKind { double_well, quadratic, regular_solution, regularized_log };

// Constants of the growth assumptions
//   psi''(r) >= -M0
//   -M1 + M2 |r|^p <= psi(r) <= M3 + M4 |r|^p
//   |psi'(r)| <= M5 (1 + |r|^{p-1})
struct GrowthBounds {
    double M0 = 0.0;
    double M1 = 0.0;
    double M2 = 0.0;
    double M3 = 0.0;
    double M4 = 0.0;
    double M5 = 0.0;
};

struct FreeEnergyModel {
    EnergyKind kind = EnergyKind::double_well;
    double kappa = 0.0;  // double_well
    double K = 0.0;      // quadratic
    double k = 0.0;      // regular_solution, regularized_log
    double chi = 0.0;    // regular_solution, regularized_log
    double eps = 0.0;    // regularized_log
    double p = 2.0;      // declared growth exponent, in [2, 6)
    GrowthBounds bounds;

    // psi returns +inf outside (0,1) for the regular-solution model; dpsi and
    // ddpsi throw std::domain_error there instead (the derivative blows up).
    double psi(double r) const;
    double dpsi(double r) const;
    double ddpsi(double r) const;

    const char* name() const;
};

FreeEnergyModel make_double_well(double kappa);
FreeEnergyModel make_quadratic(double K);
FreeEnergyModel make_regular_solution(double k, double chi);
FreeEnergyModel make_regularized_log(double k, double chi, double eps);

// Overrides the declared growth exponent (p in [2, 6)) and refits the bounds.
FreeEnergyModel with_growth_exponent(FreeEnergyModel model, double p);

bool operator==(const FreeEnergyModel& lhs, const FreeEnergyModel& rhs);

// Entropic contribution k r log r and its epsilon-regularization, which
// continues the log branch quadratically below r = eps. Both are C1 at the
// seam and the regularized family is defined for all real r.
double psi_e(double k, double r);
double dpsi_e(double k, double r);
double ddpsi_e(double k, double r);
double psi_e_eps(double k, double eps, double r);
double dpsi_e_eps(double k, double eps, double r);
double ddpsi_e_eps(double k, double eps, double r);

// Assembled regularized energy psi_e_eps(r) + psi_e_eps(1-r) + chi r (1-r).
double regularized_psi(double k, double chi, double eps, double r);
double regularized_dpsi(double k, double chi, double eps, double r);
double regularized_ddpsi(double k, double chi, double eps, double r);

struct GrowthViolation {
    double r;
    std::string inequality;
    double lhs;
    double rhs;
};

struct GrowthReport {
    std::vector<GrowthViolation> violations;
    bool ok() const { return violations.empty(); }
};

// Verifies the two growth inequalities and the slope bound on the sample set.
// Report-only; never throws for finite samples.
GrowthReport check_growth(const FreeEnergyModel& model, std::span<const double> samples);

// Sample grid the default bounds were fitted on: [-10, 10] for models defined
// on the whole line, the open unit interval for the singular one.
std::vector<double> default_growth_samples(const FreeEnergyModel& model);

}  // namespace viscodiff
