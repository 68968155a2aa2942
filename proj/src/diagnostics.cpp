#include "viscodiff/diagnostics.hpp"

#include <cmath>

namespace viscodiff {

double total_mass(const SpectralCoeffs& a, const IntervalDomain& domain) {
    return a.size() > 0 ? a[0] * std::sqrt(domain.length) : 0.0;
}

double free_energy(const SpectralCoeffs& a, const FreeEnergyModel& model, const Quadrature& quad,
                   const IntervalDomain& domain) {
    double sum = 0.0;
    for (int m = 0; m < quad.size(); ++m) {
        double u = 0.0;
        for (int i = 0; i < a.size(); ++i) u += a[i] * eigenpair(i + 1, domain).value(quad.nodes[m]);
        sum += quad.weights[m] * model.psi(u);
    }
    return sum;
}

double free_energy(const SpectralCoeffs& a, const FreeEnergyModel& model,
                   const BasisTable& table) {
    const Eigen::VectorXd u = table.values.transpose() * a;
    double sum = 0.0;
    for (int m = 0; m < u.size(); ++m) sum += table.weights[m] * model.psi(u[m]);
    return sum;
}

double dissipation_rate(const SpectralCoeffs& adot, const SpectralCoeffs& b, double alpha,
                        double beta, const Eigen::VectorXd& eigenvalues) {
    double grad_mu = 0.0;
    for (int i = 0; i < b.size(); ++i) grad_mu += eigenvalues[i] * b[i] * b[i];
    return alpha * grad_mu + beta * adot.squaredNorm();
}

double boundary_power(double h_left, double h_right, const SpectralCoeffs& b,
                      const IntervalDomain& domain) {
    double mu_left = 0.0, mu_right = 0.0;
    for (int i = 0; i < b.size(); ++i) {
        const EigenMode mode = eigenpair(i + 1, domain);
        mu_left += b[i] * mode.amplitude;
        mu_right += b[i] * mode.value(domain.length);
    }
    return h_left * mu_left + h_right * mu_right;
}

double grad_sq(const SpectralCoeffs& a, const Eigen::VectorXd& eigenvalues) {
    double sum = 0.0;
    for (int i = 0; i < a.size(); ++i) sum += eigenvalues[i] * a[i] * a[i];
    return sum;
}

double energy_residual(std::span<const double> t, std::span<const double> free_energy,
                       std::span<const double> dissipation, std::span<const double> boundary) {
    const std::size_t count = t.size();
    if (count == 0) return 0.0;
    double cum = 0.0;
    for (std::size_t j = 0; j + 1 < count; ++j) {
        const double h = t[j + 1] - t[j];
        cum += 0.5 * h * (dissipation[j] + dissipation[j + 1]);
        cum -= 0.5 * h * (boundary[j] + boundary[j + 1]);
    }
    return free_energy.back() - free_energy.front() + cum;
}

}  // namespace viscodiff
