#include "viscodiff/config.hpp"

#include "viscodiff/csv.hpp"
#include "viscodiff/hysteresis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>

namespace viscodiff {

double InitialSpec::operator()(double x, double length) const {
    switch (kind) {
        case Kind::constant:
            return value;
        case Kind::cosine: {
            double sum = 0.0;
            for (std::size_t j = 0; j < cosine_coeffs.size(); ++j)
                sum += cosine_coeffs[j] * std::cos(j * std::numbers::pi * x / length);
            return sum;
        }
        case Kind::expression:
            if (!expr) throw std::logic_error("initial-datum expression was not compiled");
            return expr->eval(x);
    }
    return 0.0;
}

bool operator==(const InitialSpec& lhs, const InitialSpec& rhs) {
    if (lhs.kind != rhs.kind) return false;
    switch (lhs.kind) {
        case InitialSpec::Kind::constant: return lhs.value == rhs.value;
        case InitialSpec::Kind::cosine: return lhs.cosine_coeffs == rhs.cosine_coeffs;
        case InitialSpec::Kind::expression: return lhs.expression_text == rhs.expression_text;
    }
    return false;
}

double FluxSpec::operator()(double t) const {
    switch (kind) {
        case Kind::zero: return 0.0;
        case Kind::constant: return value;
        case Kind::zigzag: return value * zigzag(t / period);
    }
    return 0.0;
}

bool operator==(const FluxSpec& lhs, const FluxSpec& rhs) {
    if (lhs.kind != rhs.kind) return false;
    switch (lhs.kind) {
        case FluxSpec::Kind::zero: return true;
        case FluxSpec::Kind::constant: return lhs.value == rhs.value;
        case FluxSpec::Kind::zigzag: return lhs.value == rhs.value && lhs.period == rhs.period;
    }
    return false;
}

int SimulationConfig::resolved_quad_nodes() const {
    return quad_nodes > 0 ? quad_nodes : std::max(4 * mode_count, 32);
}

double SimulationConfig::resolved_dt() const { return dt > 0.0 ? dt : t_final / 1e4; }

bool operator==(const SimulationConfig& lhs, const SimulationConfig& rhs) {
    return lhs.length == rhs.length && lhs.mode_count == rhs.mode_count &&
           lhs.quad_nodes == rhs.quad_nodes && lhs.alpha == rhs.alpha && lhs.beta == rhs.beta &&
           lhs.t_final == rhs.t_final && lhs.dt == rhs.dt &&
           lhs.output_every == rhs.output_every && lhs.scheme == rhs.scheme &&
           lhs.model == rhs.model && lhs.initial == rhs.initial &&
           lhs.flux_left == rhs.flux_left && lhs.flux_right == rhs.flux_right;
}

bool operator==(const HysteresisConfig& lhs, const HysteresisConfig& rhs) {
    if (lhs.variant != rhs.variant || lhs.amplitude != rhs.amplitude ||
        lhs.gamma != rhs.gamma || lhs.stiffness != rhs.stiffness ||
        lhs.periods != rhs.periods || lhs.steps_per_period != rhs.steps_per_period)
        return false;
    if (lhs.variant == HysteresisConfig::Variant::viscous)
        return lhs.beta == rhs.beta && lhs.tau == rhs.tau;
    return true;
}

const char* scheme_name(Scheme scheme) {
    return scheme == Scheme::rk4 ? "rk4" : "implicit_euler";
}

namespace {

struct KeyValue {
    std::string value;
    int line;
    mutable bool used = false;
};

using KeyMap = std::map<std::string, KeyValue>;

std::string trim(std::string_view sv) {
    std::size_t begin = 0, end = sv.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(sv[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(sv[end - 1]))) --end;
    return std::string(sv.substr(begin, end - begin));
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

double parse_real(const std::string& value, const std::string& key, int line) {
    const char* begin = value.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || !std::isfinite(v))
        throw ConfigError(line, "key '" + key + "' (line " + std::to_string(line) +
                                    "): expected a finite number, got '" + value + "'");
    return v;
}

long parse_int(const std::string& value, const std::string& key, int line) {
    const char* begin = value.c_str();
    char* end = nullptr;
    const long v = std::strtol(begin, &end, 10);
    if (end == begin || *end != '\0')
        throw ConfigError(line, "key '" + key + "' (line " + std::to_string(line) +
                                    "): expected an integer, got '" + value + "'");
    return v;
}

[[noreturn]] void invariant_error(const std::string& key, int line, const std::string& why) {
    throw ConfigError(line,
                      "key '" + key + "' (line " + std::to_string(line) + "): " + why);
}

class ConfigReader {
  public:
    explicit ConfigReader(KeyMap keys) : keys_(std::move(keys)) {}

    bool has(const std::string& key) const { return keys_.count(key) > 0; }

    int line_of(const std::string& key) const {
        auto it = keys_.find(key);
        return it == keys_.end() ? 0 : it->second.line;
    }

    const std::string* raw(const std::string& key) const {
        auto it = keys_.find(key);
        if (it == keys_.end()) return nullptr;
        it->second.used = true;
        return &it->second.value;
    }

    double real_or(const std::string& key, double fallback) const {
        const std::string* v = raw(key);
        return v ? parse_real(*v, key, line_of(key)) : fallback;
    }

    long int_or(const std::string& key, long fallback) const {
        const std::string* v = raw(key);
        return v ? parse_int(*v, key, line_of(key)) : fallback;
    }

    void reject_unused() const {
        for (const auto& [key, kv] : keys_)
            if (!kv.used)
                throw ConfigError(kv.line, "unknown key '" + key + "' (line " +
                                               std::to_string(kv.line) + ")");
    }

    void reject(const std::string& key, const std::string& why) const {
        if (has(key)) invariant_error(key, line_of(key), why);
    }

  private:
    KeyMap keys_;
};

InitialSpec parse_initial(const std::string& value, int line) {
    InitialSpec spec;
    const std::string text = trim(value);
    const std::size_t space = text.find_first_of(" \t");
    const std::string head = text.substr(0, space);
    const std::string rest = space == std::string::npos ? "" : trim(text.substr(space));
    if (head == "constant") {
        spec.kind = InitialSpec::Kind::constant;
        spec.value = parse_real(rest, "initial", line);
        return spec;
    }
    if (head == "cosine") {
        spec.kind = InitialSpec::Kind::cosine;
        for (const std::string& tok : split_ws(rest))
            spec.cosine_coeffs.push_back(parse_real(tok, "initial", line));
        if (spec.cosine_coeffs.empty())
            invariant_error("initial", line, "cosine spec needs at least one coefficient");
        return spec;
    }
    if (head == "expr") {
        if (rest.empty()) invariant_error("initial", line, "expr spec needs an expression");
        spec.kind = InitialSpec::Kind::expression;
        spec.expression_text = rest;
        try {
            spec.expr = std::make_shared<const CompiledExpression>(CompiledExpression::parse(rest));
        } catch (const ExpressionError& err) {
            invariant_error("initial", line, err.what());
        }
        return spec;
    }
    invariant_error("initial", line,
                    "expected 'constant <v>', 'cosine <c0> [c1 ...]' or 'expr <expression>'");
}

FluxSpec parse_flux(const std::string& value, const std::string& key, int line) {
    FluxSpec spec;
    const auto toks = split_ws(value);
    if (toks.empty()) invariant_error(key, line, "empty flux spec");
    if (toks[0] == "zero") {
        if (toks.size() != 1) invariant_error(key, line, "'zero' takes no arguments");
        spec.kind = FluxSpec::Kind::zero;
        return spec;
    }
    if (toks[0] == "constant") {
        if (toks.size() != 2) invariant_error(key, line, "'constant' takes one value");
        spec.kind = FluxSpec::Kind::constant;
        spec.value = parse_real(toks[1], key, line);
        return spec;
    }
    if (toks[0] == "zigzag") {
        if (toks.size() != 3) invariant_error(key, line, "'zigzag' takes amplitude and period");
        spec.kind = FluxSpec::Kind::zigzag;
        spec.value = parse_real(toks[1], key, line);
        spec.period = parse_real(toks[2], key, line);
        if (!(spec.period > 0.0)) invariant_error(key, line, "zigzag period must be positive");
        return spec;
    }
    invariant_error(key, line, "expected 'zero', 'constant <v>' or 'zigzag <amp> <period>'");
}

FreeEnergyModel parse_model(const ConfigReader& reader) {
    std::string kind = "double_well";
    if (const std::string* v = reader.raw("model")) kind = *v;
    const int model_line = reader.line_of("model");

    const auto require_absent = [&](const std::string& key) {
        reader.reject(key, "not a parameter of model '" + kind + "'");
    };

    FreeEnergyModel model;
    if (kind == "double_well") {
        require_absent("K");
        require_absent("k");
        require_absent("chi");
        require_absent("epsilon");
        const double kappa = reader.real_or("kappa", 1.0);
        if (!(kappa > 0.0)) invariant_error("kappa", reader.line_of("kappa"), "must be positive");
        model = make_double_well(kappa);
    } else if (kind == "quadratic") {
        require_absent("kappa");
        require_absent("k");
        require_absent("chi");
        require_absent("epsilon");
        const double K = reader.real_or("K", 1.0);
        if (!(K > 0.0)) invariant_error("K", reader.line_of("K"), "must be positive");
        model = make_quadratic(K);
    } else if (kind == "regular_solution" || kind == "regularized_log") {
        require_absent("kappa");
        require_absent("K");
        const double k = reader.real_or("k", 1.0);
        const double chi = reader.real_or("chi", 0.0);
        if (!(k > 0.0)) invariant_error("k", reader.line_of("k"), "must be positive");
        if (chi < 0.0) invariant_error("chi", reader.line_of("chi"), "must be >= 0");
        if (kind == "regular_solution") {
            require_absent("epsilon");
            model = make_regular_solution(k, chi);
        } else {
            const double eps = reader.real_or("epsilon", 0.1);
            if (!(eps > 0.0 && eps < 0.5))
                invariant_error("epsilon", reader.line_of("epsilon"), "must lie in (0, 1/2)");
            model = make_regularized_log(k, chi, eps);
        }
    } else {
        invariant_error("model", model_line,
                        "unknown model '" + kind +
                            "' (expected double_well, quadratic, regular_solution or "
                            "regularized_log)");
    }

    if (reader.has("p")) {
        const double p = reader.real_or("p", model.p);
        if (!(p >= 2.0 && p < 6.0)) invariant_error("p", reader.line_of("p"), "must lie in [2, 6)");
        model = with_growth_exponent(model, p);
    }
    return model;
}

SimulationConfig build_simulation(const ConfigReader& reader) {
    SimulationConfig cfg;
    cfg.length = reader.real_or("L", 1.0);
    if (!(cfg.length > 0.0)) invariant_error("L", reader.line_of("L"), "must be positive");
    cfg.mode_count = static_cast<int>(reader.int_or("n", 16));
    if (cfg.mode_count < 1) invariant_error("n", reader.line_of("n"), "must be >= 1");
    cfg.quad_nodes = static_cast<int>(reader.int_or("M", 0));
    if (reader.has("M") && cfg.quad_nodes < 4 * cfg.mode_count)
        invariant_error("M", reader.line_of("M"),
                        "must be >= 4n = " + std::to_string(4 * cfg.mode_count));
    cfg.alpha = reader.real_or("alpha", 1.0);
    if (!(cfg.alpha > 0.0))
        invariant_error("alpha", reader.line_of("alpha"), "must be strictly positive");
    cfg.beta = reader.real_or("beta", 1.0);
    if (!(cfg.beta > 0.0))
        invariant_error("beta", reader.line_of("beta"), "must be strictly positive");
    cfg.t_final = reader.real_or("T", 1.0);
    if (!(cfg.t_final > 0.0)) invariant_error("T", reader.line_of("T"), "must be positive");
    cfg.dt = reader.real_or("dt", 0.0);
    if (reader.has("dt") && !(cfg.dt > 0.0 && cfg.dt <= cfg.t_final))
        invariant_error("dt", reader.line_of("dt"), "needs 0 < dt <= T");
    cfg.output_every = static_cast<int>(reader.int_or("output_every", 1));
    if (cfg.output_every < 1)
        invariant_error("output_every", reader.line_of("output_every"), "must be >= 1");

    if (const std::string* v = reader.raw("scheme")) {
        if (*v == "rk4")
            cfg.scheme = Scheme::rk4;
        else if (*v == "implicit_euler")
            cfg.scheme = Scheme::implicit_euler;
        else
            invariant_error("scheme", reader.line_of("scheme"),
                            "expected 'rk4' or 'implicit_euler'");
    }

    cfg.model = parse_model(reader);

    if (const std::string* v = reader.raw("initial"))
        cfg.initial = parse_initial(*v, reader.line_of("initial"));
    if (const std::string* v = reader.raw("flux_left"))
        cfg.flux_left = parse_flux(*v, "flux_left", reader.line_of("flux_left"));
    if (const std::string* v = reader.raw("flux_right"))
        cfg.flux_right = parse_flux(*v, "flux_right", reader.line_of("flux_right"));

    reader.reject_unused();
    return cfg;
}

HysteresisConfig build_hysteresis(const ConfigReader& reader) {
    HysteresisConfig cfg;
    if (const std::string* v = reader.raw("variant")) {
        if (*v == "quasi_static")
            cfg.variant = HysteresisConfig::Variant::quasi_static;
        else if (*v == "viscous")
            cfg.variant = HysteresisConfig::Variant::viscous;
        else
            invariant_error("variant", reader.line_of("variant"),
                            "expected 'quasi_static' or 'viscous'");
    }
    cfg.amplitude = reader.real_or("A", 2.0);
    if (!(cfg.amplitude > 0.0)) invariant_error("A", reader.line_of("A"), "must be positive");
    cfg.gamma = reader.real_or("gamma", 1.0);
    if (!(cfg.gamma > 0.0)) invariant_error("gamma", reader.line_of("gamma"), "must be positive");
    cfg.stiffness = reader.real_or("K", 1.0);
    if (!(cfg.stiffness > 0.0)) invariant_error("K", reader.line_of("K"), "must be positive");

    if (cfg.variant == HysteresisConfig::Variant::viscous) {
        cfg.beta = reader.real_or("beta", 1.0);
        if (!(cfg.beta > 0.0)) invariant_error("beta", reader.line_of("beta"), "must be positive");
        cfg.tau = reader.real_or("tau", 1.0);
        if (!(cfg.tau > 0.0)) invariant_error("tau", reader.line_of("tau"), "must be positive");
    } else {
        reader.reject("beta", "only meaningful for the viscous variant");
        reader.reject("tau", "only meaningful for the viscous variant");
    }

    cfg.periods = static_cast<int>(reader.int_or("periods", 2));
    if (cfg.periods < 1) invariant_error("periods", reader.line_of("periods"), "must be >= 1");
    cfg.steps_per_period = static_cast<int>(reader.int_or("steps_per_period", 4000));
    if (cfg.steps_per_period < 16)
        invariant_error("steps_per_period", reader.line_of("steps_per_period"),
                        "must be >= 16");

    reader.reject_unused();
    return cfg;
}

}  // namespace

ParsedConfig parse_config(std::string_view text) {
    KeyMap keys;
    std::string section;
    int line_no = 0;
    std::size_t begin = 0;
    while (begin <= text.size()) {
        const std::size_t nl = text.find('\n', begin);
        std::string_view raw_line =
            text.substr(begin, nl == std::string_view::npos ? text.size() - begin : nl - begin);
        begin = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        std::string line{raw_line};
        if (const std::size_t hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(line_no, "malformed section header (line " +
                                               std::to_string(line_no) + ")");
            if (!section.empty())
                throw ConfigError(line_no, "multiple sections; one experiment per file (line " +
                                               std::to_string(line_no) + ")");
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            if (section != "simulate" && section != "hysteresis")
                throw ConfigError(line_no, "unknown section '[" + section + "]' (line " +
                                               std::to_string(line_no) + ")");
            continue;
        }

        if (section.empty())
            throw ConfigError(line_no, "expected '[simulate]' or '[hysteresis]' before keys "
                                       "(line " + std::to_string(line_no) + ")");

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(line_no,
                              "expected 'key = value' (line " + std::to_string(line_no) + ")");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (key.empty())
            throw ConfigError(line_no, "empty key (line " + std::to_string(line_no) + ")");
        if (value.empty())
            throw ConfigError(line_no, "key '" + key + "' has no value (line " +
                                           std::to_string(line_no) + ")");
        if (!keys.emplace(key, KeyValue{value, line_no}).second)
            throw ConfigError(line_no, "duplicate key '" + key + "' (line " +
                                           std::to_string(line_no) + ")");
    }

    if (section.empty()) throw ConfigError(0, "empty config: expected a section header");

    ConfigReader reader(std::move(keys));
    if (section == "simulate") return build_simulation(reader);
    return build_hysteresis(reader);
}

namespace {

std::string initial_to_string(const InitialSpec& spec) {
    switch (spec.kind) {
        case InitialSpec::Kind::constant: return "constant " + format_double(spec.value);
        case InitialSpec::Kind::cosine: {
            std::string out = "cosine";
            for (double c : spec.cosine_coeffs) out += " " + format_double(c);
            return out;
        }
        case InitialSpec::Kind::expression: return "expr " + spec.expression_text;
    }
    return "";
}

std::string flux_to_string(const FluxSpec& spec) {
    switch (spec.kind) {
        case FluxSpec::Kind::zero: return "zero";
        case FluxSpec::Kind::constant: return "constant " + format_double(spec.value);
        case FluxSpec::Kind::zigzag:
            return "zigzag " + format_double(spec.value) + " " + format_double(spec.period);
    }
    return "";
}

}  // namespace

std::string serialize_config(const SimulationConfig& cfg) {
    std::ostringstream os;
    os << "[simulate]\n";
    os << "L = " << format_double(cfg.length) << "\n";
    os << "n = " << cfg.mode_count << "\n";
    if (cfg.quad_nodes > 0) os << "M = " << cfg.quad_nodes << "\n";
    os << "alpha = " << format_double(cfg.alpha) << "\n";
    os << "beta = " << format_double(cfg.beta) << "\n";
    os << "T = " << format_double(cfg.t_final) << "\n";
    if (cfg.dt > 0.0) os << "dt = " << format_double(cfg.dt) << "\n";
    os << "output_every = " << cfg.output_every << "\n";
    os << "scheme = " << scheme_name(cfg.scheme) << "\n";
    os << "model = " << cfg.model.name() << "\n";
    switch (cfg.model.kind) {
        case EnergyKind::double_well:
            os << "kappa = " << format_double(cfg.model.kappa) << "\n";
            break;
        case EnergyKind::quadratic:
            os << "K = " << format_double(cfg.model.K) << "\n";
            break;
        case EnergyKind::regular_solution:
            os << "k = " << format_double(cfg.model.k) << "\n";
            os << "chi = " << format_double(cfg.model.chi) << "\n";
            break;
        case EnergyKind::regularized_log:
            os << "k = " << format_double(cfg.model.k) << "\n";
            os << "chi = " << format_double(cfg.model.chi) << "\n";
            os << "epsilon = " << format_double(cfg.model.eps) << "\n";
            break;
    }
    os << "p = " << format_double(cfg.model.p) << "\n";
    os << "initial = " << initial_to_string(cfg.initial) << "\n";
    os << "flux_left = " << flux_to_string(cfg.flux_left) << "\n";
    os << "flux_right = " << flux_to_string(cfg.flux_right) << "\n";
    return os.str();
}

std::string serialize_config(const HysteresisConfig& cfg) {
    std::ostringstream os;
    os << "[hysteresis]\n";
    os << "variant = "
       << (cfg.variant == HysteresisConfig::Variant::viscous ? "viscous" : "quasi_static")
       << "\n";
    os << "A = " << format_double(cfg.amplitude) << "\n";
    os << "gamma = " << format_double(cfg.gamma) << "\n";
    os << "K = " << format_double(cfg.stiffness) << "\n";
    if (cfg.variant == HysteresisConfig::Variant::viscous) {
        os << "beta = " << format_double(cfg.beta) << "\n";
        os << "tau = " << format_double(cfg.tau) << "\n";
    }
    os << "periods = " << cfg.periods << "\n";
    os << "steps_per_period = " << cfg.steps_per_period << "\n";
    return os.str();
}

std::string serialize_config(const ParsedConfig& cfg) {
    return std::visit([](const auto& c) { return serialize_config(c); }, cfg);
}

}  // namespace viscodiff
