// Spectral Galerkin reduction of the viscously regularized diffusion system:
// the n-dimensional coefficient ODE
//   da_i/dt = (H_i(t) - alpha lambda_i G_i(a)) / (1 + alpha beta lambda_i)
// with b_i = beta da_i/dt + G_i(a), assembled by quadrature and integrated
// with fixed-step rk4 or implicit Euler.
#pragma once

#include "viscodiff/basis.hpp"
#include "viscodiff/config.hpp"
#include "viscodiff/diagnostics.hpp"
#include "viscodiff/energy.hpp"

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace viscodiff {

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Boundary flux data h(0, t), h(L, t); both must be evaluable on [0, T].
struct FluxData {
    std::function<double(double)> left;
    std::function<double(double)> right;

    static FluxData zero();
};

FluxData make_flux(const FluxSpec& left, const FluxSpec& right);

// Immutable assembled system; safe to share across threads.
class GalerkinSystem {
  public:
    GalerkinSystem(const IntervalDomain& domain, FreeEnergyModel model, FluxData flux,
                   double alpha, double beta, int quad_nodes);

    // G_i = integral of psi'(sum_j a_j v_j) v_i, by quadrature. Throws
    // SolverError if the singular model leaves [delta, 1-delta] at a node.
    SpectralCoeffs assemble_G(const SpectralCoeffs& a) const;

    // H_i = h(0,t) v_i(0) + h(L,t) v_i(L); the 1D boundary integral.
    SpectralCoeffs assemble_H(double t) const;

    SpectralCoeffs rhs(double t, const SpectralCoeffs& a) const;

    // b = beta adot + G(a), with adot as computed by rhs at the same state.
    SpectralCoeffs chemical_potential(const SpectralCoeffs& a, const SpectralCoeffs& adot) const;

    const IntervalDomain& domain() const { return domain_; }
    const FreeEnergyModel& model() const { return model_; }
    const Quadrature& quadrature() const { return quad_; }
    const BasisTable& table() const { return table_; }
    const Eigen::VectorXd& eigenvalues() const { return table_.eigenvalues; }
    const FluxData& flux() const { return flux_; }
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    int modes() const { return domain_.mode_count; }

    // Nodal values of the current state, plus the singular-model guard.
    Eigen::VectorXd nodal_values(const SpectralCoeffs& a) const;

  private:
    IntervalDomain domain_;
    FreeEnergyModel model_;
    FluxData flux_;
    double alpha_;
    double beta_;
    Quadrature quad_;
    BasisTable table_;
    Eigen::VectorXd damping_;  // 1 + alpha beta lambda_i

    SpectralCoeffs assemble_G_from_nodal(const Eigen::VectorXd& u) const;

    friend SpectralCoeffs implicit_euler_step(const GalerkinSystem&, double, const SpectralCoeffs&,
                                              double, double, int);
};

struct SolverState {
    double t = 0.0;
    SpectralCoeffs a;
    SpectralCoeffs b;
    SpectralCoeffs adot;
};

struct StepOptions {
    Scheme scheme = Scheme::rk4;
    double newton_tol = 1e-11;
    int newton_max_iter = 30;
};

// State with b and adot made consistent with a at time t.
SolverState make_state(const GalerkinSystem& sys, double t, const SpectralCoeffs& a);

// One step of the chosen scheme. Throws SolverError on Newton failure
// (with the residual in the message) or on non-finite values.
SolverState step(const GalerkinSystem& sys, const SolverState& state, double dt,
                 const StepOptions& options);

struct TrajectorySample {
    double t;
    SpectralCoeffs a;
    SpectralCoeffs b;
    DiagnosticsRecord diag;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    bool failed = false;
    std::string failure_reason;
    bool stability_advisory = false;
    double advisory_ratio = 0.0;        // max alpha lambda_n K_eff dt / (1 + alpha beta lambda_n)
    double projection_residual = 0.0;   // L2 distance between u0 and its projection
    int mode_count = 0;
};

// Integrates from t = 0 to t = T at the configured cadence. Step failures
// leave a partial trajectory with the failure flagged.
Trajectory run(const SimulationConfig& cfg);

}  // namespace viscodiff
