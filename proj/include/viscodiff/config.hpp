// Experiment configuration: the line-oriented key = value format, validation
// of every invariant, and the canonical serializer used for round-trips.
#pragma once

#include "viscodiff/energy.hpp"
#include "viscodiff/expression.hpp"

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace viscodiff {

struct ConfigError : std::runtime_error {
    int line;  // 1-based; 0 when not tied to a specific line
    ConfigError(int line_, const std::string& what) : std::runtime_error(what), line(line_) {}
};

enum class Scheme { rk4, implicit_euler };

struct InitialSpec {
    enum class Kind { constant, cosine, expression };
    Kind kind = Kind::constant;
    double value = 0.0;
    std::vector<double> cosine_coeffs;  // u0(x) = sum_j c_j cos(j pi x / L)
    std::string expression_text;
    std::shared_ptr<const CompiledExpression> expr;

    double operator()(double x, double length) const;
};
bool operator==(const InitialSpec& lhs, const InitialSpec& rhs);

struct FluxSpec {
    enum class Kind { zero, constant, zigzag };
    Kind kind = Kind::zero;
    double value = 0.0;   // constant value, or zigzag amplitude
    double period = 1.0;  // zigzag period

    double operator()(double t) const;
};
bool operator==(const FluxSpec& lhs, const FluxSpec& rhs);

struct SimulationConfig {
    double length = 1.0;  // L
    int mode_count = 16;  // n
    int quad_nodes = 0;   // M; 0 means auto max(4n, 32)
    double alpha = 1.0;
    double beta = 1.0;
    double t_final = 1.0;  // T
    double dt = 0.0;       // 0 means auto T/1e4
    int output_every = 1;  // sample cadence in steps
    Scheme scheme = Scheme::rk4;
    FreeEnergyModel model = make_double_well(1.0);
    InitialSpec initial;
    FluxSpec flux_left;
    FluxSpec flux_right;

    int resolved_quad_nodes() const;
    double resolved_dt() const;
};
bool operator==(const SimulationConfig& lhs, const SimulationConfig& rhs);

struct HysteresisConfig {
    enum class Variant { quasi_static, viscous };
    Variant variant = Variant::quasi_static;
    double amplitude = 2.0;  // A
    double gamma = 1.0;
    double stiffness = 1.0;  // K
    double beta = 1.0;       // viscous variant only
    double tau = 1.0;        // viscous variant only
    int periods = 2;
    int steps_per_period = 4000;
};
bool operator==(const HysteresisConfig& lhs, const HysteresisConfig& rhs);

using ParsedConfig = std::variant<SimulationConfig, HysteresisConfig>;

// Parses a [simulate] or [hysteresis] config. Rejects unknown and duplicate
// keys; every invariant violation names the key and line.
ParsedConfig parse_config(std::string_view text);

std::string serialize_config(const SimulationConfig& cfg);
std::string serialize_config(const HysteresisConfig& cfg);
std::string serialize_config(const ParsedConfig& cfg);

const char* scheme_name(Scheme scheme);

}  // namespace viscodiff
