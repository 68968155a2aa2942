// Threshold (rate-independent) dynamics of the non-smooth dissipation
// variant: zigzag driver, discrete scalar play operator, its closed form,
// and the finite-period viscous scalar system solved by proximal steps.
#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace viscodiff {

// 1-periodic triangular wave: 4s on [0,1/4), 2-4s on [1/4,3/4), -4+4s on [3/4,1).
double zigzag(double s);

double soft_threshold(double x, double gamma);

struct PlayState {
    double s = 0.0;          // dimensionless time
    double w = 0.0;          // driver value A z(s)
    double y = 0.0;          // output value K v(s)
    double gamma = 1.0;      // threshold
    double stiffness = 1.0;  // K
    double amplitude = 1.0;  // A

    bool feasible() const { return w - y >= -gamma && w - y <= gamma; }
};

// Minimal-move clamp update: y sticks while |w_next - y| <= gamma, otherwise
// lands on the active constraint boundary.
PlayState play_step(const PlayState& state, double w_next);

// Play output driven by w = A z(s) from y = 0, evaluated on the given grid.
std::vector<PlayState> play_trajectory(double amplitude, double gamma, double stiffness,
                                       std::span<const double> s_grid);

// Same update under an arbitrary driver; used by the rate-independence checks.
std::vector<PlayState> play_trajectory(double amplitude, double gamma, double stiffness,
                                       std::span<const double> s_grid,
                                       const std::function<double(double)>& driver);

// Exact quasi-static solution K v(s): zero until s = gamma/(4A), then the
// projection of A z(s - gamma/(4A)) onto [-A+gamma, A-gamma]. Identically
// zero when A <= gamma.
double closed_form_play(double amplitude, double gamma, double stiffness, double s);

struct ViscousScalarState {
    double s = 0.0;
    double u = 0.0;
    double stiffness = 1.0;  // K
    double gamma = 1.0;
    double amplitude = 1.0;  // A
    double beta = 1.0;
    double tau = 1.0;        // period; beta/tau is the effective viscosity
};

// One proximal step of (beta/tau) du/ds + K u + gamma sign(du/ds) = w_next.
// Sticks exactly when |w_next - K u| <= gamma.
ViscousScalarState viscous_scalar_step(const ViscousScalarState& state, double ds, double w_next);

std::vector<ViscousScalarState> viscous_scalar_trajectory(double amplitude, double gamma,
                                                          double stiffness, double beta,
                                                          double tau,
                                                          std::span<const double> s_grid);

// Uniform grid over the given number of periods with the zigzag breakpoints
// (multiples of 1/4) forced onto it.
std::vector<double> hysteresis_grid(int periods, int steps_per_period);

struct HysteresisLoop {
    std::vector<std::pair<double, double>> points;  // (w, y) over the whole trajectory
    double area = 0.0;  // shoelace over the trailing full period, counterclockwise positive
};

HysteresisLoop hysteresis_loop(std::span<const double> s, std::span<const double> w,
                               std::span<const double> y, double period = 1.0);
HysteresisLoop hysteresis_loop(std::span<const PlayState> trajectory, double period = 1.0);
HysteresisLoop hysteresis_loop(std::span<const ViscousScalarState> trajectory, double period = 1.0);

}  // namespace viscodiff
