#include "viscodiff/hysteresis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace viscodiff {

double zigzag(double s) {
    const double u = s - std::floor(s);
    if (u < 0.25) return 4.0 * u;
    if (u < 0.75) return 2.0 - 4.0 * u;
    return -4.0 + 4.0 * u;
}

double soft_threshold(double x, double gamma) {
    if (x > gamma) return x - gamma;
    if (x < -gamma) return x + gamma;
    return 0.0;
}

PlayState play_step(const PlayState& state, double w_next) {
    PlayState next = state;
    next.w = w_next;
    next.y = std::clamp(state.y, w_next - state.gamma, w_next + state.gamma);
    return next;
}

std::vector<PlayState> play_trajectory(double amplitude, double gamma, double stiffness,
                                       std::span<const double> s_grid,
                                       const std::function<double(double)>& driver) {
    std::vector<PlayState> out;
    out.reserve(s_grid.size());
    PlayState st;
    st.gamma = gamma;
    st.stiffness = stiffness;
    st.amplitude = amplitude;
    st.y = 0.0;
    for (double s : s_grid) {
        st = play_step(st, driver(s));
        st.s = s;
        out.push_back(st);
    }
    return out;
}

std::vector<PlayState> play_trajectory(double amplitude, double gamma, double stiffness,
                                       std::span<const double> s_grid) {
    return play_trajectory(amplitude, gamma, stiffness, s_grid,
                           [amplitude](double s) { return amplitude * zigzag(s); });
}

double closed_form_play(double amplitude, double gamma, double stiffness, double s) {
    (void)stiffness;  // the formula already yields K v(s)
    if (amplitude <= gamma) return 0.0;
    const double onset = gamma / (4.0 * amplitude);
    if (s < onset) return 0.0;
    const double bound = amplitude - gamma;
    return std::clamp(amplitude * zigzag(s - onset), -bound, bound);
}

ViscousScalarState viscous_scalar_step(const ViscousScalarState& state, double ds, double w_next) {
    if (!(ds > 0.0)) throw std::invalid_argument("viscous_scalar_step: ds must be positive");
    const double eta = state.beta / state.tau;
    ViscousScalarState next = state;
    next.s = state.s + ds;
    next.u = state.u + ds * soft_threshold(w_next - state.stiffness * state.u, state.gamma) /
                           (eta + state.stiffness * ds);
    return next;
}

std::vector<ViscousScalarState> viscous_scalar_trajectory(double amplitude, double gamma,
                                                          double stiffness, double beta,
                                                          double tau,
                                                          std::span<const double> s_grid) {
    std::vector<ViscousScalarState> out;
    out.reserve(s_grid.size());
    ViscousScalarState st;
    st.stiffness = stiffness;
    st.gamma = gamma;
    st.amplitude = amplitude;
    st.beta = beta;
    st.tau = tau;
    st.u = 0.0;
    bool first = true;
    for (double s : s_grid) {
        if (first) {
            st.s = s;
            first = false;
        } else {
            const double ds = s - st.s;
            st = viscous_scalar_step(st, ds, amplitude * zigzag(s));
        }
        out.push_back(st);
    }
    return out;
}

std::vector<double> hysteresis_grid(int periods, int steps_per_period) {
    if (periods < 1) throw std::invalid_argument("hysteresis_grid: periods must be >= 1");
    if (steps_per_period < 4)
        throw std::invalid_argument("hysteresis_grid: steps_per_period must be >= 4");
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(periods) * steps_per_period + 4 * periods + 2);
    for (long j = 0; j <= static_cast<long>(periods) * steps_per_period; ++j)
        grid.push_back(static_cast<double>(j) / steps_per_period);
    // force the zigzag breakpoints (multiples of 1/4) onto the grid
    for (int m = 0; m <= 4 * periods; ++m) grid.push_back(0.25 * m);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-12; }),
               grid.end());
    return grid;
}

HysteresisLoop hysteresis_loop(std::span<const double> s, std::span<const double> w,
                               std::span<const double> y, double period) {
    HysteresisLoop loop;
    const std::size_t count = s.size();
    loop.points.reserve(count);
    for (std::size_t j = 0; j < count; ++j) loop.points.emplace_back(w[j], y[j]);
    if (count < 3) return loop;

    // shoelace over the trailing full period, closing the polygon
    std::size_t begin = 0;
    const double window_start = s.back() - period - 1e-12;
    while (begin + 1 < count && s[begin] < window_start) ++begin;
    double twice_area = 0.0;
    for (std::size_t j = begin; j + 1 < count; ++j)
        twice_area += w[j] * y[j + 1] - w[j + 1] * y[j];
    twice_area += w.back() * y[begin] - w[begin] * y.back();
    loop.area = 0.5 * twice_area;
    return loop;
}

HysteresisLoop hysteresis_loop(std::span<const PlayState> trajectory, double period) {
    std::vector<double> s, w, y;
    s.reserve(trajectory.size());
    w.reserve(trajectory.size());
    y.reserve(trajectory.size());
    for (const auto& st : trajectory) {
        s.push_back(st.s);
        w.push_back(st.w);
        y.push_back(st.y);
    }
    return hysteresis_loop(s, w, y, period);
}

HysteresisLoop hysteresis_loop(std::span<const ViscousScalarState> trajectory, double period) {
    std::vector<double> s, w, y;
    s.reserve(trajectory.size());
    w.reserve(trajectory.size());
    y.reserve(trajectory.size());
    for (const auto& st : trajectory) {
        s.push_back(st.s);
        w.push_back(st.amplitude * zigzag(st.s));
        y.push_back(st.stiffness * st.u);
    }
    return hysteresis_loop(s, w, y, period);
}

}  // namespace viscodiff
