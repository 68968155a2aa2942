// Neumann-Laplacian eigenbasis on the interval [0, L]: closed-form cosine
// modes, composite Gauss-Legendre quadrature, and L2 projection onto the
// first n modes.
#pragma once

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace viscodiff {

// Coefficient vector (a_1, ..., a_n) of a function expanded in the eigenbasis.
using SpectralCoeffs = Eigen::VectorXd;

struct IntervalDomain {
    double length;
    int mode_count;

    IntervalDomain(double length_, int mode_count_);
};

// Descriptor of the k-th Neumann eigenmode v_k(x) = amplitude * cos(frequency * x),
// with v_1 the constant mode 1/sqrt(L). The family is L2-orthonormal on [0, L].
struct EigenMode {
    int index;          // k, 1-based
    double eigenvalue;  // ((k-1) pi / L)^2
    double amplitude;
    double frequency;   // (k-1) pi / L

    double value(double x) const { return amplitude * std::cos(frequency * x); }
    double slope(double x) const { return -amplitude * frequency * std::sin(frequency * x); }
};

EigenMode eigenpair(int k, const IntervalDomain& domain);

// Range-checked evaluation of v_k at x in [0, L].
double evaluate_basis(int k, double x, const IntervalDomain& domain);
double evaluate_basis_slope(int k, double x, const IntervalDomain& domain);

// Composite Gauss-Legendre rule on [0, L]. Weights are positive and sum to L.
struct Quadrature {
    std::vector<double> nodes;
    std::vector<double> weights;
    double length = 0.0;
    // Polynomials up to this degree are integrated exactly on each panel.
    int exact_degree = 0;

    int size() const { return static_cast<int>(nodes.size()); }
};

Quadrature make_quadrature(int total_nodes, const IntervalDomain& domain);

double integrate(const Quadrature& quad, const std::function<double(double)>& f);

// a_i = integral of f * v_i over [0, L], i = 1..n. Requires quad.size() >= 4n.
SpectralCoeffs project(const std::function<double(double)>& f, int n,
                       const Quadrature& quad, const IntervalDomain& domain);

// Sum_i a_i v_i(x), range-checked in x.
double reconstruct(const SpectralCoeffs& a, double x, const IntervalDomain& domain);

// Basis values tabulated at quadrature nodes, shared by assembly and
// diagnostics. values(i, m) = v_{i+1}(x_m). Immutable after construction.
struct BasisTable {
    Eigen::MatrixXd values;       // n x M
    Eigen::VectorXd weights;      // M
    Eigen::VectorXd nodes;        // M
    Eigen::VectorXd eigenvalues;  // n
    Eigen::VectorXd trace_left;   // v_i(0)
    Eigen::VectorXd trace_right;  // v_i(L)

    BasisTable(const IntervalDomain& domain, const Quadrature& quad, int n);

    int modes() const { return static_cast<int>(values.rows()); }
    int node_count() const { return static_cast<int>(values.cols()); }
};

}  // namespace viscodiff
