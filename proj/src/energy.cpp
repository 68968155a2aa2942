#include "viscodiff/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace viscodiff {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> linspace(double lo, double hi, int count) {
    std::vector<double> out(count);
    for (int i = 0; i < count; ++i) out[i] = lo + (hi - lo) * i / (count - 1);
    return out;
}

[[noreturn]] void singular_domain(const char* who, double r) {
    throw std::domain_error(std::string(who) +
                            ": regular-solution derivative undefined at r = " +
                            std::to_string(r) + " (needs r strictly inside (0,1))");
}

}  // namespace

double psi_e(double k, double r) { return k * r * std::log(r); }
double dpsi_e(double k, double r) { return k * (std::log(r) + 1.0); }
double ddpsi_e(double k, double r) { return k / r; }

double psi_e_eps(double k, double eps, double r) {
    if (r >= eps) return psi_e(k, r);
    return k * r * std::log(eps) + 0.5 * k * (r * r / eps - eps);
}

double dpsi_e_eps(double k, double eps, double r) {
    if (r >= eps) return dpsi_e(k, r);
    return k * std::log(eps) + k * r / eps;
}

double ddpsi_e_eps(double k, double eps, double r) {
    if (r >= eps) return ddpsi_e(k, r);
    return k / eps;
}

double regularized_psi(double k, double chi, double eps, double r) {
    return psi_e_eps(k, eps, r) + psi_e_eps(k, eps, 1.0 - r) + chi * r * (1.0 - r);
}

double regularized_dpsi(double k, double chi, double eps, double r) {
    return dpsi_e_eps(k, eps, r) - dpsi_e_eps(k, eps, 1.0 - r) + chi * (1.0 - 2.0 * r);
}

double regularized_ddpsi(double k, double chi, double eps, double r) {
    return ddpsi_e_eps(k, eps, r) + ddpsi_e_eps(k, eps, 1.0 - r) - 2.0 * chi;
}

double FreeEnergyModel::psi(double r) const {
    switch (kind) {
        case EnergyKind::double_well: {
            const double s = r - 1.0;
            return kappa * r * r * s * s;
        }
        case EnergyKind::quadratic:
            return 0.5 * K * r * r;
        case EnergyKind::regular_solution:
            if (r <= 0.0 || r >= 1.0) return kInf;
            return psi_e(k, r) + psi_e(k, 1.0 - r) + chi * r * (1.0 - r);
        case EnergyKind::regularized_log:
            return regularized_psi(k, chi, eps, r);
    }
    return 0.0;
}

double FreeEnergyModel::dpsi(double r) const {
    switch (kind) {
        case EnergyKind::double_well:
            return 2.0 * kappa * r * (r - 1.0) * (2.0 * r - 1.0);
        case EnergyKind::quadratic:
            return K * r;
        case EnergyKind::regular_solution:
            if (r <= 0.0 || r >= 1.0) singular_domain("dpsi", r);
            return dpsi_e(k, r) - dpsi_e(k, 1.0 - r) + chi * (1.0 - 2.0 * r);
        case EnergyKind::regularized_log:
            return regularized_dpsi(k, chi, eps, r);
    }
    return 0.0;
}

double FreeEnergyModel::ddpsi(double r) const {
    switch (kind) {
        case EnergyKind::double_well:
            return 2.0 * kappa * (6.0 * r * r - 6.0 * r + 1.0);
        case EnergyKind::quadratic:
            return K;
        case EnergyKind::regular_solution:
            if (r <= 0.0 || r >= 1.0) singular_domain("ddpsi", r);
            return ddpsi_e(k, r) + ddpsi_e(k, 1.0 - r) - 2.0 * chi;
        case EnergyKind::regularized_log:
            return regularized_ddpsi(k, chi, eps, r);
    }
    return 0.0;
}

const char* FreeEnergyModel::name() const {
    switch (kind) {
        case EnergyKind::double_well: return "double_well";
        case EnergyKind::quadratic: return "quadratic";
        case EnergyKind::regular_solution: return "regular_solution";
        case EnergyKind::regularized_log: return "regularized_log";
    }
    return "?";
}

bool operator==(const FreeEnergyModel& lhs, const FreeEnergyModel& rhs) {
    return lhs.kind == rhs.kind && lhs.kappa == rhs.kappa && lhs.K == rhs.K && lhs.k == rhs.k &&
           lhs.chi == rhs.chi && lhs.eps == rhs.eps && lhs.p == rhs.p;
}

std::vector<double> default_growth_samples(const FreeEnergyModel& model) {
    if (model.kind == EnergyKind::regular_solution) return linspace(1e-3, 1.0 - 1e-3, 1999);
    return linspace(-10.0, 10.0, 2001);
}

namespace {

// Bounds fitted by coarse grid maximization so the growth report comes out
// clean on the default grid; diagnostic constants, not proved ones.
GrowthBounds fit_growth_bounds(const FreeEnergyModel& model) {
    const auto samples = default_growth_samples(model);
    const double p = model.p;

    GrowthBounds b;
    double min_psi = kInf, min_dd = kInf;
    for (double r : samples) {
        min_psi = std::min(min_psi, model.psi(r));
        min_dd = std::min(min_dd, model.ddpsi(r));
    }
    b.M0 = std::max(0.0, -min_dd);

    double coercivity = kInf;
    const double offset = std::max(0.0, -min_psi) + 1.0;
    for (double r : samples) {
        if (std::abs(r) < 5.0) continue;
        coercivity = std::min(coercivity, (model.psi(r) + offset) / std::pow(std::abs(r), p));
    }
    b.M2 = std::isfinite(coercivity) ? 0.9 * coercivity : 0.5;

    double m1 = 0.0, m4 = 0.0;
    for (double r : samples) {
        const double rp = std::pow(std::abs(r), p);
        m1 = std::max(m1, b.M2 * rp - model.psi(r));
        m4 = std::max(m4, model.psi(r) / (1.0 + rp));
    }
    b.M1 = m1 + 1.0;
    b.M4 = std::max(1.1 * m4, 1e-12);

    double m3 = 0.0, m5 = 0.0;
    for (double r : samples) {
        const double rp = std::pow(std::abs(r), p);
        m3 = std::max(m3, model.psi(r) - b.M4 * rp);
        m5 = std::max(m5, std::abs(model.dpsi(r)) / (1.0 + std::pow(std::abs(r), p - 1.0)));
    }
    b.M3 = m3 + 1.0;
    b.M5 = 1.1 * m5;
    return b;
}

FreeEnergyModel finalize(FreeEnergyModel model) {
    model.bounds = fit_growth_bounds(model);
    return model;
}

}  // namespace

FreeEnergyModel make_double_well(double kappa) {
    if (!(kappa > 0.0)) throw std::invalid_argument("double_well: kappa must be positive");
    FreeEnergyModel m;
    m.kind = EnergyKind::double_well;
    m.kappa = kappa;
    m.p = 4.0;
    return finalize(m);
}

FreeEnergyModel make_quadratic(double K) {
    if (!(K > 0.0)) throw std::invalid_argument("quadratic: K must be positive");
    FreeEnergyModel m;
    m.kind = EnergyKind::quadratic;
    m.K = K;
    m.p = 2.0;
    return finalize(m);
}

FreeEnergyModel make_regular_solution(double k, double chi) {
    if (!(k > 0.0)) throw std::invalid_argument("regular_solution: k must be positive");
    if (chi < 0.0) throw std::invalid_argument("regular_solution: chi must be >= 0");
    FreeEnergyModel m;
    m.kind = EnergyKind::regular_solution;
    m.k = k;
    m.chi = chi;
    m.p = 2.0;
    return finalize(m);
}

FreeEnergyModel make_regularized_log(double k, double chi, double eps) {
    if (!(k > 0.0)) throw std::invalid_argument("regularized_log: k must be positive");
    if (chi < 0.0) throw std::invalid_argument("regularized_log: chi must be >= 0");
    if (!(eps > 0.0 && eps < 0.5))
        throw std::invalid_argument("regularized_log: epsilon must lie in (0, 1/2)");
    FreeEnergyModel m;
    m.kind = EnergyKind::regularized_log;
    m.k = k;
    m.chi = chi;
    m.eps = eps;
    m.p = 2.0;
    return finalize(m);
}

FreeEnergyModel with_growth_exponent(FreeEnergyModel model, double p) {
    if (!(p >= 2.0 && p < 6.0))
        throw std::invalid_argument("growth exponent p must lie in [2, 6)");
    model.p = p;
    return finalize(model);
}

GrowthReport check_growth(const FreeEnergyModel& model, std::span<const double> samples) {
    GrowthReport report;
    const GrowthBounds& b = model.bounds;
    for (double r : samples) {
        const double value = model.psi(r);
        if (!std::isfinite(value)) continue;  // singular sentinel, outside the model's domain
        const double rp = std::pow(std::abs(r), model.p);
        const double lower = -b.M1 + b.M2 * rp;
        const double upper = b.M3 + b.M4 * rp;
        if (value < lower)
            report.violations.push_back({r, "-M1 + M2|r|^p <= psi", lower, value});
        if (value > upper)
            report.violations.push_back({r, "psi <= M3 + M4|r|^p", value, upper});
        const double slope_cap = b.M5 * (1.0 + std::pow(std::abs(r), model.p - 1.0));
        const double slope = std::abs(model.dpsi(r));
        if (slope > slope_cap)
            report.violations.push_back({r, "|psi'| <= M5(1+|r|^{p-1})", slope, slope_cap});
    }
    return report;
}

}  // namespace viscodiff
