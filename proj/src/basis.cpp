#include "viscodiff/basis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace viscodiff {

namespace {

// Nodes and weights of the q-point Gauss-Legendre rule on [-1, 1], by Newton
// iteration on the Legendre recurrence.
void legendre_rule(int q, std::vector<double>& x, std::vector<double>& w) {
    x.assign(q, 0.0);
    w.assign(q, 0.0);
    for (int i = 0; i < (q + 1) / 2; ++i) {
        double t = std::cos(std::numbers::pi * (i + 0.75) / (q + 0.5));
        double dp = 1.0;
        for (int iter = 0; iter < 64; ++iter) {
            double p0 = 1.0;
            double p1 = t;
            for (int j = 2; j <= q; ++j) {
                const double p2 = ((2 * j - 1) * t * p1 - (j - 1) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = q * (t * p1 - p0) / (t * t - 1.0);
            const double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        x[i] = -t;
        x[q - 1 - i] = t;
        w[i] = w[q - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
}

// Panels of ~24 nodes keep composite Gauss-Legendre at spectral accuracy for
// the mode products the default 4n-node rule must resolve.
constexpr int kTargetPanelNodes = 24;

}  // namespace

IntervalDomain::IntervalDomain(double length_, int mode_count_)
    : length(length_), mode_count(mode_count_) {
    if (!(length > 0.0))
        throw std::invalid_argument("IntervalDomain: length must be positive, got " +
                                    std::to_string(length_));
    if (mode_count < 1)
        throw std::invalid_argument("IntervalDomain: mode_count must be >= 1, got " +
                                    std::to_string(mode_count_));
}

EigenMode eigenpair(int k, const IntervalDomain& domain) {
    if (k < 1) throw std::invalid_argument("eigenpair: mode index must be >= 1, got " +
                                           std::to_string(k));
    const double L = domain.length;
    EigenMode mode;
    mode.index = k;
    mode.frequency = (k - 1) * std::numbers::pi / L;
    mode.eigenvalue = mode.frequency * mode.frequency;
    mode.amplitude = (k == 1) ? 1.0 / std::sqrt(L) : std::sqrt(2.0 / L);
    return mode;
}

namespace {

void check_in_domain(double x, const IntervalDomain& domain, const char* who) {
    if (!(x >= 0.0 && x <= domain.length))
        throw std::invalid_argument(std::string(who) + ": x = " + std::to_string(x) +
                                    " outside [0, " + std::to_string(domain.length) + "]");
}

}  // namespace

double evaluate_basis(int k, double x, const IntervalDomain& domain) {
    check_in_domain(x, domain, "evaluate_basis");
    return eigenpair(k, domain).value(x);
}

double evaluate_basis_slope(int k, double x, const IntervalDomain& domain) {
    check_in_domain(x, domain, "evaluate_basis_slope");
    return eigenpair(k, domain).slope(x);
}

Quadrature make_quadrature(int total_nodes, const IntervalDomain& domain) {
    if (total_nodes < 2)
        throw std::invalid_argument("make_quadrature: need at least 2 nodes, got " +
                                    std::to_string(total_nodes));
    const double L = domain.length;
    const int panels = (total_nodes + kTargetPanelNodes - 1) / kTargetPanelNodes;
    const int base = total_nodes / panels;
    const int extra = total_nodes % panels;  // first `extra` panels get one more node

    Quadrature quad;
    quad.length = L;
    quad.exact_degree = 2 * base - 1;
    quad.nodes.reserve(total_nodes);
    quad.weights.reserve(total_nodes);

    const double h = L / panels;
    std::vector<double> ref_x, ref_w;
    for (int p = 0; p < panels; ++p) {
        const int q = base + (p < extra ? 1 : 0);
        legendre_rule(q, ref_x, ref_w);
        const double a = p * h;
        const double mid = a + 0.5 * h;
        for (int i = 0; i < q; ++i) {
            quad.nodes.push_back(mid + 0.5 * h * ref_x[i]);
            quad.weights.push_back(0.5 * h * ref_w[i]);
        }
    }
    return quad;
}

double integrate(const Quadrature& quad, const std::function<double(double)>& f) {
    double sum = 0.0;
    for (std::size_t m = 0; m < quad.nodes.size(); ++m) sum += quad.weights[m] * f(quad.nodes[m]);
    return sum;
}

SpectralCoeffs project(const std::function<double(double)>& f, int n, const Quadrature& quad,
                       const IntervalDomain& domain) {
    if (n < 1) throw std::invalid_argument("project: need n >= 1");
    if (quad.size() < 4 * n)
        throw std::invalid_argument("project: quadrature with " + std::to_string(quad.size()) +
                                    " nodes does not resolve " + std::to_string(n) +
                                    " modes (need >= " + std::to_string(4 * n) + ")");
    const int M = quad.size();
    Eigen::VectorXd fw(M);
    for (int m = 0; m < M; ++m) fw[m] = f(quad.nodes[m]) * quad.weights[m];

    SpectralCoeffs a(n);
    for (int i = 0; i < n; ++i) {
        const EigenMode mode = eigenpair(i + 1, domain);
        double sum = 0.0;
        for (int m = 0; m < M; ++m) sum += fw[m] * mode.value(quad.nodes[m]);
        a[i] = sum;
    }
    return a;
}

double reconstruct(const SpectralCoeffs& a, double x, const IntervalDomain& domain) {
    check_in_domain(x, domain, "reconstruct");
    double sum = 0.0;
    for (int i = 0; i < a.size(); ++i) sum += a[i] * eigenpair(i + 1, domain).value(x);
    return sum;
}

BasisTable::BasisTable(const IntervalDomain& domain, const Quadrature& quad, int n) {
    const int M = quad.size();
    values.resize(n, M);
    weights.resize(M);
    nodes.resize(M);
    eigenvalues.resize(n);
    trace_left.resize(n);
    trace_right.resize(n);
    for (int m = 0; m < M; ++m) {
        nodes[m] = quad.nodes[m];
        weights[m] = quad.weights[m];
    }
    for (int i = 0; i < n; ++i) {
        const EigenMode mode = eigenpair(i + 1, domain);
        eigenvalues[i] = mode.eigenvalue;
        trace_left[i] = mode.value(0.0);
        trace_right[i] = mode.value(domain.length);
        for (int m = 0; m < M; ++m) values(i, m) = mode.value(nodes[m]);
    }
}

}  // namespace viscodiff
