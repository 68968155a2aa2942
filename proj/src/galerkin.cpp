#include "viscodiff/galerkin.hpp"

#include "viscodiff/hysteresis.hpp"

#include <Eigen/LU>

#include <cmath>
#include <sstream>

namespace viscodiff {

namespace {

// Guard band for the singular (unregularized) log model: the energetic
// estimate has no control once the state reaches the ends of (0, 1).
constexpr double kSingularGuardDelta = 1e-6;

std::string format_short(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

FluxData FluxData::zero() {
    FluxData f;
    f.left = [](double) { return 0.0; };
    f.right = [](double) { return 0.0; };
    return f;
}

FluxData make_flux(const FluxSpec& left, const FluxSpec& right) {
    FluxData f;
    f.left = [left](double t) { return left(t); };
    f.right = [right](double t) { return right(t); };
    return f;
}

GalerkinSystem::GalerkinSystem(const IntervalDomain& domain, FreeEnergyModel model, FluxData flux,
                               double alpha, double beta, int quad_nodes)
    : domain_(domain),
      model_(std::move(model)),
      flux_(std::move(flux)),
      alpha_(alpha),
      beta_(beta),
      quad_(make_quadrature(quad_nodes, domain)),
      table_(domain, quad_, domain.mode_count) {
    if (!(alpha > 0.0)) throw std::invalid_argument("GalerkinSystem: alpha must be positive");
    if (beta < 0.0) throw std::invalid_argument("GalerkinSystem: beta must be nonnegative");
    if (quad_.size() < 4 * domain.mode_count)
        throw std::invalid_argument("GalerkinSystem: " + std::to_string(quad_.size()) +
                                    " quadrature nodes do not resolve " +
                                    std::to_string(domain.mode_count) + " modes");
    if (!flux_.left || !flux_.right)
        throw std::invalid_argument("GalerkinSystem: flux endpoints must be evaluable");
    damping_ = (1.0 + alpha_ * beta_ * table_.eigenvalues.array()).matrix();
}

Eigen::VectorXd GalerkinSystem::nodal_values(const SpectralCoeffs& a) const {
    Eigen::VectorXd u = table_.values.transpose() * a;
    if (model_.kind == EnergyKind::regular_solution) {
        for (int m = 0; m < u.size(); ++m) {
            if (u[m] < kSingularGuardDelta || u[m] > 1.0 - kSingularGuardDelta)
                throw SolverError(
                    "singular free energy: state left [" + format_short(kSingularGuardDelta) +
                    ", 1 - " + format_short(kSingularGuardDelta) + "] at x = " +
                    format_short(table_.nodes[m]) + " (u = " + format_short(u[m]) +
                    "); the energetic estimate breaks down here - switch the model to "
                    "regularized_log");
        }
    }
    return u;
}

SpectralCoeffs GalerkinSystem::assemble_G_from_nodal(const Eigen::VectorXd& u) const {
    Eigen::VectorXd g(u.size());
    for (int m = 0; m < u.size(); ++m) g[m] = model_.dpsi(u[m]) * table_.weights[m];
    return table_.values * g;
}

SpectralCoeffs GalerkinSystem::assemble_G(const SpectralCoeffs& a) const {
    return assemble_G_from_nodal(nodal_values(a));
}

SpectralCoeffs GalerkinSystem::assemble_H(double t) const {
    const double h_left = flux_.left(t);
    const double h_right = flux_.right(t);
    return h_left * table_.trace_left + h_right * table_.trace_right;
}

SpectralCoeffs GalerkinSystem::rhs(double t, const SpectralCoeffs& a) const {
    const SpectralCoeffs G = assemble_G(a);
    const SpectralCoeffs H = assemble_H(t);
    return ((H.array() - alpha_ * table_.eigenvalues.array() * G.array()) / damping_.array())
        .matrix();
}

SpectralCoeffs GalerkinSystem::chemical_potential(const SpectralCoeffs& a,
                                                  const SpectralCoeffs& adot) const {
    return beta_ * adot + assemble_G(a);
}

SolverState make_state(const GalerkinSystem& sys, double t, const SpectralCoeffs& a) {
    SolverState st;
    st.t = t;
    st.a = a;
    st.adot = sys.rhs(t, a);
    st.b = sys.chemical_potential(a, st.adot);
    return st;
}

SpectralCoeffs implicit_euler_step(const GalerkinSystem& sys, double t_next,
                                   const SpectralCoeffs& a_prev, double dt, double tol,
                                   int max_iter) {
    const int n = static_cast<int>(a_prev.size());
    SpectralCoeffs x = a_prev + dt * sys.rhs(t_next, a_prev);
    const double scale = 1.0 + a_prev.norm();
    double residual = 0.0;
    for (int iter = 0; iter < max_iter; ++iter) {
        const SpectralCoeffs F = x - a_prev - dt * sys.rhs(t_next, x);
        residual = F.norm();
        if (residual <= tol * scale) return x;

        const Eigen::VectorXd u = sys.nodal_values(x);
        Eigen::VectorXd curv(u.size());
        for (int m = 0; m < u.size(); ++m)
            curv[m] = sys.model_.ddpsi(u[m]) * sys.table_.weights[m];
        const Eigen::MatrixXd JG =
            sys.table_.values * curv.asDiagonal() * sys.table_.values.transpose();
        Eigen::MatrixXd J = Eigen::MatrixXd::Identity(n, n);
        const Eigen::VectorXd factor =
            (sys.alpha_ * sys.table_.eigenvalues.array() / sys.damping_.array()).matrix();
        J += dt * factor.asDiagonal() * JG;
        x -= J.partialPivLu().solve(F);
        if (!x.allFinite()) throw SolverError("implicit Euler: Newton iterate is non-finite");
    }
    throw SolverError("implicit Euler: Newton did not converge in " + std::to_string(max_iter) +
                      " iterations (residual " + format_short(residual) + ", tol " +
                      format_short(tol * scale) + ")");
}

SolverState step(const GalerkinSystem& sys, const SolverState& state, double dt,
                 const StepOptions& options) {
    if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
    const double t_next = state.t + dt;
    SpectralCoeffs a_next;
    switch (options.scheme) {
        case Scheme::rk4: {
            const SpectralCoeffs k1 = sys.rhs(state.t, state.a);
            const SpectralCoeffs k2 = sys.rhs(state.t + 0.5 * dt, state.a + 0.5 * dt * k1);
            const SpectralCoeffs k3 = sys.rhs(state.t + 0.5 * dt, state.a + 0.5 * dt * k2);
            const SpectralCoeffs k4 = sys.rhs(t_next, state.a + dt * k3);
            a_next = state.a + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            break;
        }
        case Scheme::implicit_euler:
            a_next = implicit_euler_step(sys, t_next, state.a, dt, options.newton_tol,
                                         options.newton_max_iter);
            break;
    }
    if (!a_next.allFinite())
        throw SolverError("non-finite coefficients after step to t = " + format_short(t_next));
    return make_state(sys, t_next, a_next);
}

namespace {

// Finite-difference estimate of max psi'' over the current nodal values,
// feeding the dt stability advisory.
double estimate_max_curvature(const FreeEnergyModel& model, const Eigen::VectorXd& u) {
    double worst = -std::numeric_limits<double>::infinity();
    for (int m = 0; m < u.size(); ++m) {
        const double h = 1e-5 * (1.0 + std::abs(u[m]));
        try {
            const double fd = (model.dpsi(u[m] + h) - model.dpsi(u[m] - h)) / (2.0 * h);
            worst = std::max(worst, fd);
        } catch (const std::domain_error&) {
            // node too close to the singular endpoints; skip
        }
    }
    return worst;
}

void validate_run_config(const SimulationConfig& cfg) {
    if (!(cfg.alpha > 0.0)) throw ConfigError(0, "alpha must be strictly positive");
    if (!(cfg.beta > 0.0)) throw ConfigError(0, "beta must be strictly positive");
    if (cfg.mode_count < 1) throw ConfigError(0, "n must be >= 1");
    if (!(cfg.t_final > 0.0)) throw ConfigError(0, "T must be positive");
    const double dt = cfg.resolved_dt();
    if (!(dt > 0.0 && dt <= cfg.t_final)) throw ConfigError(0, "need 0 < dt <= T");
    if (cfg.resolved_quad_nodes() < 4 * cfg.mode_count)
        throw ConfigError(0, "M must be >= 4n");
    if (cfg.output_every < 1) throw ConfigError(0, "output_every must be >= 1");
}

}  // namespace

Trajectory run(const SimulationConfig& cfg) {
    validate_run_config(cfg);
    const IntervalDomain domain(cfg.length, cfg.mode_count);
    const GalerkinSystem sys(domain, cfg.model, make_flux(cfg.flux_left, cfg.flux_right),
                             cfg.alpha, cfg.beta, cfg.resolved_quad_nodes());
    const int n = cfg.mode_count;
    const double T = cfg.t_final;
    const double dt = cfg.resolved_dt();
    const long nsteps = std::max<long>(1, static_cast<long>(std::ceil(T / dt - 1e-9)));

    Trajectory traj;
    traj.mode_count = n;

    const auto u0 = [&cfg](double x) { return cfg.initial(x, cfg.length); };
    const SpectralCoeffs a0 = project(u0, n, sys.quadrature(), domain);
    {
        // ||u0 - P_n u0||_L2 by quadrature, reported but with no rate claimed
        const double f_sq = integrate(sys.quadrature(), [&](double x) {
            const double v = u0(x);
            return v * v;
        });
        traj.projection_residual = std::sqrt(std::max(0.0, f_sq - a0.squaredNorm()));
    }

    StepOptions options;
    options.scheme = cfg.scheme;

    const double lambda_top = sys.eigenvalues()[n - 1];
    double initial_fe = 0.0;
    double cum_dissipation = 0.0;
    double cum_boundary = 0.0;
    double prev_t = 0.0, prev_diss = 0.0, prev_bpow = 0.0;
    bool have_sample = false;

    const auto record = [&](const SolverState& st) {
        TrajectorySample sample;
        sample.t = st.t;
        sample.a = st.a;
        sample.b = st.b;
        DiagnosticsRecord& d = sample.diag;
        d.mass = total_mass(st.a, domain);
        d.free_energy = free_energy(st.a, cfg.model, sys.table());
        d.dissipation_rate =
            dissipation_rate(st.adot, st.b, cfg.alpha, cfg.beta, sys.eigenvalues());
        d.boundary_power =
            boundary_power(sys.flux().left(st.t), sys.flux().right(st.t), st.b, domain);
        d.grad_sq = grad_sq(st.a, sys.eigenvalues());
        if (!have_sample) {
            initial_fe = d.free_energy;
            have_sample = true;
        } else {
            const double h = st.t - prev_t;
            cum_dissipation += 0.5 * h * (prev_diss + d.dissipation_rate);
            cum_boundary += 0.5 * h * (prev_bpow + d.boundary_power);
        }
        prev_t = st.t;
        prev_diss = d.dissipation_rate;
        prev_bpow = d.boundary_power;
        d.energy_residual = d.free_energy - initial_fe + cum_dissipation - cum_boundary;
        d.energy_residual_rel = d.energy_residual / (std::abs(initial_fe) + 1.0);
        traj.samples.push_back(std::move(sample));

        const double k_eff = estimate_max_curvature(cfg.model, sys.nodal_values(st.a));
        if (std::isfinite(k_eff)) {
            const double ratio =
                cfg.alpha * lambda_top * k_eff * dt / (1.0 + cfg.alpha * cfg.beta * lambda_top);
            traj.advisory_ratio = std::max(traj.advisory_ratio, ratio);
            if (ratio > 2.0) traj.stability_advisory = true;
        }
    };

    try {
        SolverState state = make_state(sys, 0.0, a0);
        record(state);
        for (long i = 0; i < nsteps; ++i) {
            const double t0 = i * dt;
            const double t1 = (i + 1 == nsteps) ? T : (i + 1) * dt;
            state.t = t0;
            state = step(sys, state, t1 - t0, options);
            if ((i + 1) % cfg.output_every == 0 || i + 1 == nsteps) record(state);
        }
    } catch (const SolverError& err) {
        traj.failed = true;
        traj.failure_reason = err.what();
    } catch (const std::domain_error& err) {
        traj.failed = true;
        traj.failure_reason = err.what();
    }
    return traj;
}

}  // namespace viscodiff
