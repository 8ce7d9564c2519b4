#pragma once

// Scenario runner: one configuration per trapping result (plus `custom`),
// the estimates pipeline that turns physical parameters into E*, K_crit, D'
// and gamma', simulation on two truncations, and the output files
// (config.json, series.csv, spectrum_t<t>.json, estimates.json, verdict.txt).

#include "galerkin/envelopes.hpp"
#include "galerkin/errors.hpp"
#include "galerkin/estimates.hpp"
#include "galerkin/forcing.hpp"
#include "galerkin/integrator.hpp"
#include "galerkin/lattice.hpp"
#include "galerkin/snapshot.hpp"
#include "galerkin/state.hpp"
#ifdef GALERKIN_HAVE_FFTW
#include "galerkin/fast_nonlinearity.hpp"
#endif

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace galerkin {

enum class ScenarioKind { Thm1, Thm2, Thm3, Thm4_3d, Thm7_3d, Thm8_3d, Custom };

inline const char* to_string(ScenarioKind s) {
    switch (s) {
    case ScenarioKind::Thm1: return "thm1";
    case ScenarioKind::Thm2: return "thm2";
    case ScenarioKind::Thm3: return "thm3";
    case ScenarioKind::Thm4_3d: return "thm4_3d";
    case ScenarioKind::Thm7_3d: return "thm7_3d";
    case ScenarioKind::Thm8_3d: return "thm8_3d";
    case ScenarioKind::Custom: return "custom";
    }
    return "custom";
}

inline ScenarioKind parse_scenario_kind(const std::string& s) {
    for (auto k : {ScenarioKind::Thm1, ScenarioKind::Thm2, ScenarioKind::Thm3, ScenarioKind::Thm4_3d, ScenarioKind::Thm7_3d,
                   ScenarioKind::Thm8_3d, ScenarioKind::Custom})
        if (s == to_string(k)) return k;
    throw Error(ErrorCode::Configuration, "scenario: unknown scenario '" + s + "'");
}

inline int scenario_dimension(ScenarioKind s) {
    switch (s) {
    case ScenarioKind::Thm4_3d:
    case ScenarioKind::Thm7_3d:
    case ScenarioKind::Thm8_3d: return 3;
    case ScenarioKind::Custom: return 0;
    default: return 2;
    }
}

inline const char* to_string(TemporalKind k) { return k == TemporalKind::Constant ? "constant" : "sinusoid"; }

inline TemporalKind parse_temporal_kind(const std::string& s) {
    if (s == "constant") return TemporalKind::Constant;
    if (s == "sinusoid") return TemporalKind::Sinusoid;
    throw Error(ErrorCode::Configuration, "forcing.temporal: unknown kind '" + s + "'");
}

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

struct TruncationConfig {
    TruncationShape shape = TruncationShape::Disk;
    double k_max = 12.0;
    double k_max_alt = 16.0; ///< second truncation for the Z-independence check; 0 disables it
};

struct InitialConfig {
    EnvelopeKind kind = EnvelopeKind::Algebraic;
    double D = 0.0;
    double r = 3.0;
    double gamma = 0.0;
    std::uint64_t seed = 1;
};

/// Scenario-specific parameters of the estimates pipeline.
struct EstimateConfig {
    std::optional<double> K0;  ///< fixed K0 instead of max(K_crit, K0_floor)
    double K0_floor = 4.0;
    bool inward_factor_4pi2 = false; ///< thm1: 4 pi^2 nu instead of 4 pi nu on the right-hand side
    double t0 = 1.0;           ///< thm3 horizon
    double gamma0 = 1.0;       ///< thm3 cap on the weight rate
    double t1 = 1.0;           ///< thm7 horizon
    std::optional<double> enstrophy_hypothesis; ///< thm7/thm8 enstrophy bound; default from data
    int max_fixed_point_iterations = 60;
};

/// Trapping envelope of the `custom` scenario.
struct CustomEnvelope {
    EnvelopeKind kind = EnvelopeKind::Algebraic;
    double D = 1.0;
    double r = 3.0;
    double gamma = 0.0;
    double K0 = 1.0;
};

struct OutputConfig {
    std::string dir = "out";
    std::vector<double> snapshot_times;
    int series_stride = 10;
};

struct ScenarioConfig {
    ScenarioKind scenario = ScenarioKind::Thm1;
    int dimension = 2;
    TruncationConfig truncation;
    PhysicalParams physical;
    ForcingSpec forcing;
    InitialConfig initial;
    StepControl step;
    EstimateConfig estimates;
    CustomEnvelope envelope;
    OutputConfig output;
    double slack = kMembershipSlack;
    bool reproducible = false;
    bool fast_nonlinearity = false;
    int spot_check_interval = 100;
};

namespace detail {

[[noreturn]] inline void config_error(const std::string& field, const std::string& reason) {
    throw Error(ErrorCode::Configuration, field + ": " + reason);
}

template <typename T>
T get_or(const nlohmann::json& j, const char* key, const T& fallback, const std::string& path) {
    if (!j.contains(key) || j.at(key).is_null()) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        config_error(path + "." + key, "wrong type");
    }
}

inline const nlohmann::json& section(const nlohmann::json& j, const char* key) {
    static const nlohmann::json empty = nlohmann::json::object();
    if (!j.contains(key) || j.at(key).is_null()) return empty;
    if (!j.at(key).is_object()) config_error(key, "must be an object");
    return j.at(key);
}

} // namespace detail

/// Scenario-specific hypotheses; the message names the field and the clause.
inline void validate(const ScenarioConfig& c) {
    using detail::config_error;
    const auto s = c.scenario;
    const int want = scenario_dimension(s);
    if (want != 0 && c.dimension != want)
        config_error("dimension", std::string(to_string(s)) + " runs in " + std::to_string(want) + "D");
    if (c.dimension != 2 && c.dimension != 3) config_error("dimension", "must be 2 or 3");
    if (!(c.truncation.k_max >= 1.0)) config_error("truncation.K_max", "must be at least 1");
    if (c.truncation.k_max_alt != 0.0 && !(c.truncation.k_max_alt >= 1.0))
        config_error("truncation.K_max_alt", "must be 0 (disabled) or at least 1");
    try {
        c.physical.validate();
    } catch (const Error& e) {
        config_error("physical", e.what());
    }
    try {
        c.step.validate();
    } catch (const Error& e) {
        config_error("step", e.what());
    }
    if (c.output.series_stride < 1) config_error("output.series_stride", "must be positive");
    for (double t : c.output.snapshot_times)
        if (!(t >= 0.0)) config_error("output.snapshot_times", "times must be nonnegative");
    if (c.spot_check_interval < 1) config_error("spot_check_interval", "must be positive");
    if (!(c.slack >= 0.0)) config_error("slack", "must be nonnegative");
    if (c.fast_nonlinearity) {
        if (c.dimension != 2) config_error("fast_nonlinearity", "only the 2D nonlinearity has a fast path");
#ifndef GALERKIN_HAVE_FFTW
        config_error("fast_nonlinearity", "this build has no FFTW support");
#endif
    }
    if (!(c.initial.D >= 0.0)) config_error("initial.D", "must be nonnegative");
    if (c.initial.kind == EnvelopeKind::Exponential && !(c.initial.gamma > 0.0))
        config_error("initial.gamma", "exponential initial data needs gamma > 0");
    if (c.dimension == 3 && c.forcing.kind != ForcingKind::Zero && c.forcing.kind != ForcingKind::TrigPoly)
        config_error("forcing.kind", "3D forcing must be zero or trig_poly (transversal by construction)");
    if (!(c.forcing.amplitude >= 0.0)) config_error("forcing.amplitude", "must be nonnegative");

    if (s == ScenarioKind::Custom) {
        if (!(c.envelope.D >= 0.0)) config_error("envelope.D", "must be nonnegative");
        if (!(c.envelope.K0 >= 0.0)) config_error("envelope.K0", "must be nonnegative");
        return;
    }

    const double r = c.initial.r;
    const bool decaying_forcing = c.forcing.kind != ForcingKind::Zero && c.forcing.kind != ForcingKind::TrigPoly;
    if (decaying_forcing) {
        if (c.forcing.r != r) config_error("forcing.r", "must equal initial.r (one envelope exponent per scenario)");
        if (c.forcing.alpha_ref != c.physical.alpha) config_error("forcing.alpha_ref", "must equal physical.alpha");
        if (!(c.forcing.epsilon > 0.0)) config_error("forcing.epsilon", "the forcing hypothesis needs epsilon > 0");
    }
    if (c.estimates.K0 && !(*c.estimates.K0 >= 1.0)) config_error("estimates.K0", "must be at least 1");
    if (!(c.estimates.K0_floor >= 1.0)) config_error("estimates.K0_floor", "must be at least 1");
    switch (s) {
    case ScenarioKind::Thm1:
        if (!(r > 1.0)) config_error("initial.r", "thm1 requires r > 1 (forcing hypothesis for some r > 1)");
        if (c.forcing.kind != ForcingKind::Zero && c.forcing.kind != ForcingKind::PowerLaw)
            config_error("forcing.kind", "thm1 uses power_law or zero forcing");
        if (c.initial.kind != EnvelopeKind::Algebraic) config_error("initial.envelope", "thm1 starts from algebraic data");
        if (c.forcing.kind == ForcingKind::Zero && !(c.forcing.epsilon > 0.0))
            config_error("forcing.epsilon", "the inward condition needs epsilon > 0");
        break;
    case ScenarioKind::Thm2:
        if (c.forcing.kind != ForcingKind::Zero && c.forcing.kind != ForcingKind::Exponential)
            config_error("forcing.kind", "thm2 uses exponential or zero forcing");
        if (c.initial.kind != EnvelopeKind::Exponential) config_error("initial.envelope", "thm2 starts from exponential data");
        if (c.forcing.kind == ForcingKind::Exponential && !(c.forcing.gamma > 0.0 && c.forcing.delta >= 0.0))
            config_error("forcing.gamma", "thm2 needs gamma > 0 and delta >= 0");
        break;
    case ScenarioKind::Thm3:
        if (!(r > 2.0)) config_error("initial.r", "thm3 requires r > 2");
        if (c.forcing.kind != ForcingKind::Zero && c.forcing.kind != ForcingKind::Exponential)
            config_error("forcing.kind", "thm3 uses exponential or zero forcing");
        if (c.initial.kind != EnvelopeKind::Algebraic) config_error("initial.envelope", "thm3 starts from algebraic data");
        if (!(c.estimates.t0 > 0.0)) config_error("estimates.t0", "must be positive");
        if (!(c.estimates.gamma0 > 0.0)) config_error("estimates.gamma0", "must be positive");
        if (c.step.t_end > c.estimates.t0) config_error("step.t_end", "the time-growing weight is certified only up to t0");
        break;
    case ScenarioKind::Thm4_3d:
        if (!(c.physical.alpha > 2.5)) config_error("physical.alpha", "thm4_3d requires alpha > 2.5");
        if (!(r > 1.5)) config_error("initial.r", "thm4_3d needs r > 3/2 for a summable envelope");
        if (c.initial.kind != EnvelopeKind::Algebraic) config_error("initial.envelope", "thm4_3d starts from algebraic data");
        break;
    case ScenarioKind::Thm7_3d:
        if (!(r > 2.0)) config_error("initial.r", "thm7_3d requires r > 2 (finite D7 and r > 2)");
        if (!(c.physical.alpha > 1.5)) config_error("physical.alpha", "thm7_3d requires alpha > 1.5");
        if (c.initial.kind != EnvelopeKind::Algebraic) config_error("initial.envelope", "thm7_3d starts from algebraic data");
        if (!(c.estimates.t1 > 0.0)) config_error("estimates.t1", "must be positive");
        if (c.step.t_end > c.estimates.t1) config_error("step.t_end", "the time-growing weight is certified only up to t1");
        break;
    case ScenarioKind::Thm8_3d:
        if (!(r > 2.0)) config_error("initial.r", "thm8_3d requires r > 2");
        if (!(c.physical.alpha > 1.5)) config_error("physical.alpha", "thm8_3d requires alpha > 1.5");
        if (c.initial.kind != EnvelopeKind::Exponential) config_error("initial.envelope", "thm8_3d starts from exponential data");
        break;
    case ScenarioKind::Custom: break;
    }
    if (c.estimates.enstrophy_hypothesis && !(*c.estimates.enstrophy_hypothesis > 0.0))
        config_error("estimates.enstrophy_hypothesis", "must be positive");
}

/// Parses a JSON document; missing fields take their defaults.
inline ScenarioConfig parse_config(const nlohmann::json& j) {
    using detail::get_or;
    using detail::section;
    if (!j.is_object()) detail::config_error("config", "must be a JSON object");
    ScenarioConfig c;
    c.scenario = parse_scenario_kind(get_or<std::string>(j, "scenario", "thm1", ""));
    const int natural = scenario_dimension(c.scenario);
    c.dimension = get_or<int>(j, "dimension", natural == 0 ? 2 : natural, "");

    const auto& tr = section(j, "truncation");
    try {
        c.truncation.shape = parse_shape(get_or<std::string>(tr, "shape", "disk", "truncation"));
    } catch (const Error& e) {
        detail::config_error("truncation.shape", e.what());
    }
    c.truncation.k_max = get_or<double>(tr, "K_max", c.truncation.k_max, "truncation");
    c.truncation.k_max_alt = get_or<double>(tr, "K_max_alt", c.truncation.k_max_alt, "truncation");

    const auto& ph = section(j, "physical");
    c.physical.nu = get_or<double>(ph, "nu", c.physical.nu, "physical");
    c.physical.alpha = get_or<double>(ph, "alpha", c.physical.alpha, "physical");

    const auto& in = section(j, "initial");
    try {
        c.initial.kind = parse_envelope_kind(get_or<std::string>(in, "envelope", "algebraic", "initial"));
    } catch (const Error& e) {
        detail::config_error("initial.envelope", e.what());
    }
    c.initial.D = get_or<double>(in, "D", c.initial.D, "initial");
    c.initial.r = get_or<double>(in, "r", c.initial.r, "initial");
    c.initial.gamma = get_or<double>(in, "gamma", c.initial.gamma, "initial");
    c.initial.seed = get_or<std::uint64_t>(in, "seed", c.initial.seed, "initial");

    const auto& fo = section(j, "forcing");
    try {
        c.forcing.kind = parse_forcing_kind(get_or<std::string>(fo, "kind", "zero", "forcing"));
        c.forcing.temporal = parse_temporal_kind(get_or<std::string>(fo, "temporal", "constant", "forcing"));
    } catch (const Error& e) {
        detail::config_error("forcing", e.what());
    }
    c.forcing.amplitude = get_or<double>(fo, "amplitude", 0.0, "forcing");
    c.forcing.r = get_or<double>(fo, "r", c.initial.r, "forcing");
    c.forcing.epsilon = get_or<double>(fo, "epsilon", 0.5, "forcing");
    c.forcing.gamma = get_or<double>(fo, "gamma", 0.0, "forcing");
    c.forcing.delta = get_or<double>(fo, "delta", 0.0, "forcing");
    c.forcing.alpha_ref = get_or<double>(fo, "alpha_ref", c.physical.alpha, "forcing");
    c.forcing.band = get_or<std::vector<std::vector<int>>>(fo, "band", {}, "forcing");
    c.forcing.frequency = get_or<double>(fo, "frequency", 0.0, "forcing");
    c.forcing.phase_seed = get_or<std::uint64_t>(fo, "phase_seed", 0, "forcing");

    const auto& es = section(j, "estimates");
    if (es.contains("K0") && !es.at("K0").is_null()) c.estimates.K0 = get_or<double>(es, "K0", 0.0, "estimates");
    c.estimates.K0_floor = get_or<double>(es, "K0_floor", c.estimates.K0_floor, "estimates");
    const auto factor = get_or<std::string>(es, "inward_factor", "4pi_nu", "estimates");
    if (factor != "4pi_nu" && factor != "4pi2_nu")
        detail::config_error("estimates.inward_factor", "must be 4pi_nu or 4pi2_nu");
    c.estimates.inward_factor_4pi2 = factor == "4pi2_nu";
    c.estimates.t0 = get_or<double>(es, "t0", c.estimates.t0, "estimates");
    c.estimates.gamma0 = get_or<double>(es, "gamma0", c.estimates.gamma0, "estimates");
    c.estimates.t1 = get_or<double>(es, "t1", c.estimates.t1, "estimates");
    if (es.contains("enstrophy_hypothesis") && !es.at("enstrophy_hypothesis").is_null())
        c.estimates.enstrophy_hypothesis = get_or<double>(es, "enstrophy_hypothesis", 0.0, "estimates");
    c.estimates.max_fixed_point_iterations =
        get_or<int>(es, "max_fixed_point_iterations", c.estimates.max_fixed_point_iterations, "estimates");

    const auto& st = section(j, "step");
    c.step.dt = get_or<double>(st, "dt", c.step.dt, "step");
    try {
        c.step.scheme = parse_scheme(get_or<std::string>(st, "scheme", "if_rk4", "step"));
    } catch (const Error& e) {
        detail::config_error("step.scheme", e.what());
    }
    const double horizon = c.scenario == ScenarioKind::Thm3      ? c.estimates.t0
                           : c.scenario == ScenarioKind::Thm7_3d ? c.estimates.t1
                                                                 : 1.0;
    c.step.t_end = get_or<double>(st, "t_end", horizon, "step");

    const auto& en = section(j, "envelope");
    try {
        c.envelope.kind = parse_envelope_kind(get_or<std::string>(en, "kind", "algebraic", "envelope"));
    } catch (const Error& e) {
        detail::config_error("envelope.kind", e.what());
    }
    c.envelope.D = get_or<double>(en, "D", c.envelope.D, "envelope");
    c.envelope.r = get_or<double>(en, "r", c.envelope.r, "envelope");
    c.envelope.gamma = get_or<double>(en, "gamma", c.envelope.gamma, "envelope");
    c.envelope.K0 = get_or<double>(en, "K0", c.envelope.K0, "envelope");

    const auto& ou = section(j, "output");
    c.output.dir = get_or<std::string>(ou, "dir", c.output.dir, "output");
    c.output.snapshot_times = get_or<std::vector<double>>(ou, "snapshot_times", {}, "output");
    c.output.series_stride = get_or<int>(ou, "series_stride", c.output.series_stride, "output");

    c.slack = get_or<double>(j, "slack", c.slack, "");
    c.reproducible = get_or<bool>(j, "reproducible", c.reproducible, "");
    c.fast_nonlinearity = get_or<bool>(j, "fast_nonlinearity", c.fast_nonlinearity, "");
    c.spot_check_interval = get_or<int>(j, "spot_check_interval", c.spot_check_interval, "");
    validate(c);
    return c;
}

inline ScenarioConfig parse_config_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Configuration, std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(j);
}

inline ScenarioConfig load_config(const std::string& path) { return parse_config_text(read_text_file(path)); }

/// Every field, defaults included.
inline nlohmann::json to_json(const ScenarioConfig& c) {
    nlohmann::json j;
    j["scenario"] = to_string(c.scenario);
    j["dimension"] = c.dimension;
    j["truncation"] = {{"shape", to_string(c.truncation.shape)},
                       {"K_max", c.truncation.k_max},
                       {"K_max_alt", c.truncation.k_max_alt}};
    j["physical"] = {{"nu", c.physical.nu}, {"alpha", c.physical.alpha}};
    j["forcing"] = {{"kind", to_string(c.forcing.kind)},
                    {"amplitude", c.forcing.amplitude},
                    {"r", c.forcing.r},
                    {"epsilon", c.forcing.epsilon},
                    {"gamma", c.forcing.gamma},
                    {"delta", c.forcing.delta},
                    {"alpha_ref", c.forcing.alpha_ref},
                    {"band", c.forcing.band},
                    {"temporal", to_string(c.forcing.temporal)},
                    {"frequency", c.forcing.frequency},
                    {"phase_seed", c.forcing.phase_seed}};
    j["initial"] = {{"envelope", to_string(c.initial.kind)},
                    {"D", c.initial.D},
                    {"r", c.initial.r},
                    {"gamma", c.initial.gamma},
                    {"seed", c.initial.seed}};
    j["step"] = {{"dt", c.step.dt}, {"scheme", to_string(c.step.scheme)}, {"t_end", c.step.t_end}};
    nlohmann::json es = {{"K0_floor", c.estimates.K0_floor},
                         {"inward_factor", c.estimates.inward_factor_4pi2 ? "4pi2_nu" : "4pi_nu"},
                         {"t0", c.estimates.t0},
                         {"gamma0", c.estimates.gamma0},
                         {"t1", c.estimates.t1},
                         {"max_fixed_point_iterations", c.estimates.max_fixed_point_iterations}};
    es["K0"] = c.estimates.K0 ? nlohmann::json(*c.estimates.K0) : nlohmann::json(nullptr);
    es["enstrophy_hypothesis"] =
        c.estimates.enstrophy_hypothesis ? nlohmann::json(*c.estimates.enstrophy_hypothesis) : nlohmann::json(nullptr);
    j["estimates"] = es;
    j["envelope"] = {{"kind", to_string(c.envelope.kind)},
                     {"D", c.envelope.D},
                     {"r", c.envelope.r},
                     {"gamma", c.envelope.gamma},
                     {"K0", c.envelope.K0}};
    j["output"] = {{"dir", c.output.dir}, {"snapshot_times", c.output.snapshot_times}, {"series_stride", c.output.series_stride}};
    j["slack"] = c.slack;
    j["reproducible"] = c.reproducible;
    j["fast_nonlinearity"] = c.fast_nonlinearity;
    j["spot_check_interval"] = c.spot_check_interval;
    return j;
}

// ---------------------------------------------------------------------------
// Estimates pipeline
// ---------------------------------------------------------------------------

struct ScenarioEstimates {
    double E0 = 0.0;      ///< bound of the initial enstrophy (2D) or energy (3D) over all of Z^d
    double g_star = 0.0;
    double E_star = 0.0;  ///< enstrophy (2D) or energy (3D) bound
    std::optional<double> enstrophy_hypothesis; ///< 3D enstrophy bound assumed by thm7/thm8
    std::optional<double> K_crit;
    double K0 = 0.0;
    double D_prime = 0.0;
    std::optional<double> gamma_prime;
    Envelope envelope;
    double fit_amplitude = 0.0; ///< modulus envelope amplitude used by fitted_gamma
    int fixed_point_iterations = 0;
    std::vector<EstimateReport> reports;
    std::optional<InwardCondition> condition; ///< the inward inequality behind K_crit

    std::string to_json() const { return galerkin::to_json(reports); }
};

/// sum over l != 0 of |w_l|^2 (weight 0) or |w_l|^2/(4 pi^2 |l|^2) (weight 2)
/// for data saturating the initial envelope on all of Z^d.
inline double initial_mass(const ScenarioConfig& c, int extra_power) {
    const auto& in = c.initial;
    if (in.D == 0.0) return 0.0;
    const double a = in.kind == EnvelopeKind::Exponential ? 2.0 * in.gamma : 0.0;
    const double q = 2.0 * in.r + extra_power;
    if (a == 0.0 && !(q > c.dimension))
        throw Error(ErrorCode::Configuration, "initial.r: the initial envelope is not square-summable");
    double s = in.D * in.D * weighted_lattice_sum(c.dimension, q, a, 1.0);
    if (extra_power == 2) s /= 4.0 * std::numbers::pi * std::numbers::pi;
    return s;
}

namespace detail {

inline EstimateReport simple_report(std::string quantity, double value, std::string id,
                                    std::vector<std::pair<std::string, double>> inputs) {
    EstimateReport r;
    r.quantity = std::move(quantity);
    r.value = value;
    r.inequality_id = std::move(id);
    r.inputs = std::move(inputs);
    return r;
}

inline double band_radius(const ForcingSpec& f) {
    double top = 0.0;
    if (f.kind != ForcingKind::TrigPoly) return 0.0;
    for (const auto& b : f.band) {
        double n2 = 0.0;
        for (int v : b) n2 += static_cast<double>(v) * v;
        top = std::max(top, std::sqrt(n2));
    }
    return top;
}

/// Iterates K0 <- max(floor, K_crit(K0)) until K_crit(K0) <= K0.
template <typename Step>
double fixed_point_K0(const ScenarioConfig& c, Step&& kcrit_at, int& iterations) {
    if (c.estimates.K0) {
        iterations = 0;
        return *c.estimates.K0;
    }
    double K0 = c.estimates.K0_floor;
    for (iterations = 1; iterations <= c.estimates.max_fixed_point_iterations; ++iterations) {
        double K = 0.0;
        try {
            K = kcrit_at(K0);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::Infeasible) throw;
            throw Error(ErrorCode::Infeasible, "K0 fixed point diverged at K0 = " + format_double(K0) +
                                                   " (reduce the data amplitudes): " + e.what());
        }
        if (K <= K0) return K0;
        K0 = K;
    }
    throw Error(ErrorCode::Infeasible, "K0 fixed point did not settle after " +
                                           std::to_string(c.estimates.max_fixed_point_iterations) +
                                           " iterations (D' grows faster than K_crit)");
}

} // namespace detail

/// Runs the scenario's estimates chain. Everything is computed from the
/// physical parameters and whole-lattice sums, so `z` only fixes the
/// dimension-dependent pieces that do not depend on its size.
template <int D>
ScenarioEstimates compute_estimates(const ScenarioConfig& c, const TruncationSet<D>& z) {
    if (c.dimension != D) throw Error(ErrorCode::DimensionMismatch, "config dimension does not match the truncation");
    ScenarioEstimates e;
    const double nu = c.physical.nu, alpha = c.physical.alpha, r = c.initial.r;
    const double G = c.forcing.kind == ForcingKind::Zero ? 0.0 : c.forcing.amplitude;
    const std::string gronwall = D == 2 ? "enstrophy_gronwall" : "energy_gronwall";

    e.E0 = initial_mass(c, D == 2 ? 0 : 2);
    e.g_star = g_star(c.forcing, z, true);
    e.E_star = D == 2 ? enstrophy_bound(e.E0, e.g_star, nu) : energy_bound_3d(e.E0, e.g_star, nu);
    e.reports.push_back(detail::simple_report(D == 2 ? "E0_enstrophy" : "E0_energy", e.E0, gronwall,
                                              {{"D", c.initial.D}, {"r", r}, {"gamma", c.initial.gamma}}));
    e.reports.push_back(detail::simple_report("g_star", e.g_star, gronwall, {{"G", G}}));
    e.reports.push_back(detail::simple_report("E_star", e.E_star, gronwall, {{"E0", e.E0}, {"g_star", e.g_star}, {"nu", nu}}));

    const double sqrt2 = std::sqrt(2.0);
    switch (c.scenario) {
    case ScenarioKind::Thm1: {
        const double factor = c.estimates.inward_factor_4pi2 ? 4.0 * kPi * kPi * nu : 4.0 * kPi * nu;
        auto kc = kcrit_2d_algebraic(e.E_star, r, alpha, c.forcing.epsilon, nu, factor);
        e.K_crit = kc.K;
        e.K0 = c.estimates.K0 ? *c.estimates.K0 : std::max(kc.K, c.estimates.K0_floor);
        e.D_prime = std::max(c.initial.D, d_prime_algebraic(e.K0, e.E_star, r, G));
        e.envelope = Envelope::algebraic(e.D_prime, r, e.K0);
        e.reports.push_back(kc.report);
        e.condition = kc.condition;
        e.reports.push_back(detail::simple_report("K0", e.K0, kc.report.inequality_id,
                                                  {{"K_crit", kc.K}, {"K0_floor", c.estimates.K0_floor}}));
        e.reports.push_back(detail::simple_report("D_prime", e.D_prime, kc.report.inequality_id,
                                                  {{"K0", e.K0}, {"E_star", e.E_star}, {"r", r}, {"G", G}, {"D1", c.initial.D}}));
        break;
    }
    case ScenarioKind::Thm2: {
        const double gam = c.forcing.gamma, del = c.forcing.delta, g2 = c.initial.gamma;
        auto chain = [&](double K0) {
            const double d_bar = std::max(std::sqrt(e.E_star) * std::pow(K0, r), c.initial.D);
            const double d2p = std::max(2.0 * d_bar, G);
            // zero forcing leaves the weight cap to the initial data
            const double cap = G > 0.0 ? gam : std::numeric_limits<double>::infinity();
            const double gp = gamma2_prime(K0, d_bar, d2p, cap, del, g2);
            return std::tuple{d_bar, d2p, gp};
        };
        auto kc_at = [&](double K0) {
            auto [d_bar, d2p, gp] = chain(K0);
            return kcrit_2d_exponential(d2p, G, gam, del, gp, r, alpha, c.forcing.epsilon, nu);
        };
        e.K0 = detail::fixed_point_K0(c, [&](double K0) { return kc_at(K0).K; }, e.fixed_point_iterations);
        auto kc = kc_at(e.K0);
        auto [d_bar, d2p, gp] = chain(e.K0);
        e.K_crit = kc.K;
        e.D_prime = d2p;
        e.gamma_prime = gp;
        e.envelope = Envelope::exponential(d2p, r, gp, e.K0);
        e.reports.push_back(kc.report);
        e.condition = kc.condition;
        e.reports.push_back(detail::simple_report("K0", e.K0, kc.report.inequality_id,
                                                  {{"K_crit", kc.K}, {"iterations", e.fixed_point_iterations}}));
        e.reports.push_back(detail::simple_report("D_bar", d_bar, kc.report.inequality_id,
                                                  {{"K0", e.K0}, {"E_star", e.E_star}, {"D2", c.initial.D}}));
        e.reports.push_back(detail::simple_report("D_prime", d2p, kc.report.inequality_id, {{"D_bar", d_bar}, {"G", G}}));
        e.reports.push_back(detail::simple_report("gamma_prime", gp, kc.report.inequality_id,
                                                  {{"K0", e.K0}, {"gamma", gam}, {"delta", del}, {"gamma_initial", g2}}));
        break;
    }
    case ScenarioKind::Thm3: {
        const double gam = c.forcing.gamma, del = c.forcing.delta, t0 = c.estimates.t0, g0 = c.estimates.gamma0;
        auto dp_at = [&](double K0) { return 2.0 * std::max(std::sqrt(e.E_star) * std::pow(K0, r), c.initial.D); };
        auto kc_at = [&](double K0) { return kcrit_2d_gevrey(dp_at(K0), G, g0, r, alpha, nu, c.forcing.epsilon); };
        e.K0 = detail::fixed_point_K0(c, [&](double K0) { return kc_at(K0).K; }, e.fixed_point_iterations);
        auto kc = kc_at(e.K0);
        const double cap = G > 0.0 ? gam : std::numeric_limits<double>::infinity();
        const double g3 = gamma3(e.K0, t0, cap, del, g0);
        e.K_crit = kc.K;
        e.D_prime = dp_at(e.K0);
        e.gamma_prime = g3;
        e.envelope = Envelope::gevrey(e.D_prime, r, g3, e.K0);
        e.reports.push_back(kc.report);
        e.condition = kc.condition;
        e.reports.push_back(detail::simple_report("K0", e.K0, kc.report.inequality_id,
                                                  {{"K_crit", kc.K}, {"iterations", e.fixed_point_iterations}}));
        e.reports.push_back(detail::simple_report("D_prime", e.D_prime, kc.report.inequality_id,
                                                  {{"K0", e.K0}, {"E_star", e.E_star}, {"D1", c.initial.D}}));
        e.reports.push_back(detail::simple_report("gamma_prime", g3, kc.report.inequality_id,
                                                  {{"K0", e.K0}, {"t0", t0}, {"gamma", gam}, {"delta", del}, {"gamma0", g0}}));
        break;
    }
    case ScenarioKind::Thm4_3d: {
        Kcrit3DOptions opt;
        opt.variant = Variant3D::Thm4;
        opt.min_k = std::max(2.0, detail::band_radius(c.forcing) + 1.0);
        auto kc = kcrit_3d(e.E_star, r, alpha, nu, opt);
        e.K_crit = kc.K;
        e.K0 = c.estimates.K0 ? *c.estimates.K0 : std::max(kc.K, c.estimates.K0_floor);
        e.D_prime = d_prime_3d_algebraic(e.K0, e.E_star, r, c.initial.D);
        e.envelope = Envelope::algebraic(e.D_prime, r, e.K0);
        e.reports.push_back(kc.report);
        e.condition = kc.condition;
        e.reports.push_back(detail::simple_report("K0", e.K0, kc.report.inequality_id, {{"K_crit", kc.K}}));
        e.reports.push_back(detail::simple_report("D_prime", e.D_prime, kc.report.inequality_id,
                                                  {{"K0", e.K0}, {"E_star", e.E_star}, {"r", r}, {"D4", c.initial.D}}));
        break;
    }
    case ScenarioKind::Thm7_3d:
    case ScenarioKind::Thm8_3d: {
        const bool gevrey = c.scenario == ScenarioKind::Thm7_3d;
        const double ens = c.estimates.enstrophy_hypothesis
                               ? *c.estimates.enstrophy_hypothesis
                               : 2.0 * std::max(initial_mass(c, 0), std::pow(e.g_star / (4.0 * kPi * kPi * nu), 2.0));
        e.enstrophy_hypothesis = ens;
        auto dp_at = [&](double K0) { return 2.0 * std::max(std::sqrt(ens) * std::pow(K0, r), c.initial.D); };
        auto rate_at = [&](double K0) {
            return gevrey ? std::log(2.0) / (c.estimates.t1 * K0) : std::min(c.initial.gamma, std::log(2.0) / K0);
        };
        auto kc_at = [&](double K0) {
            Kcrit3DOptions opt;
            opt.variant = Variant3D::Thm7;
            opt.gamma7 = gevrey ? rate_at(K0) : 0.0;
            opt.d7_prime = dp_at(K0);
            opt.min_k = std::max(2.0, detail::band_radius(c.forcing) + 1.0);
            return kcrit_3d(e.E_star, r, alpha, nu, opt);
        };
        e.K0 = detail::fixed_point_K0(c, [&](double K0) { return kc_at(K0).K; }, e.fixed_point_iterations);
        auto kc = kc_at(e.K0);
        e.K_crit = kc.K;
        e.D_prime = dp_at(e.K0);
        e.gamma_prime = rate_at(e.K0);
        e.envelope = gevrey ? Envelope::gevrey(e.D_prime, r, *e.gamma_prime, e.K0)
                            : Envelope::exponential(e.D_prime, r, *e.gamma_prime, e.K0);
        e.reports.push_back(detail::simple_report("enstrophy_hypothesis", ens, gronwall,
                                                  {{"assumed", c.estimates.enstrophy_hypothesis ? 1.0 : 0.0}}));
        e.reports.push_back(kc.report);
        e.condition = kc.condition;
        e.reports.push_back(detail::simple_report("K0", e.K0, kc.report.inequality_id,
                                                  {{"K_crit", kc.K}, {"iterations", e.fixed_point_iterations}}));
        e.reports.push_back(detail::simple_report("D_prime", e.D_prime, kc.report.inequality_id,
                                                  {{"K0", e.K0}, {"enstrophy_hypothesis", ens}, {"D", c.initial.D}}));
        e.reports.push_back(detail::simple_report("gamma_prime", *e.gamma_prime, kc.report.inequality_id,
                                                  {{"K0", e.K0},
                                                   {gevrey ? "t1" : "gamma_initial", gevrey ? c.estimates.t1 : c.initial.gamma}}));
        break;
    }
    case ScenarioKind::Custom: {
        const auto& en = c.envelope;
        e.K0 = en.K0;
        e.D_prime = en.D;
        e.envelope = Envelope{en.kind, en.D, en.r, en.gamma, en.K0};
        if (en.kind != EnvelopeKind::Algebraic) e.gamma_prime = en.gamma;
        break;
    }
    }
    e.fit_amplitude = sqrt2 * e.envelope.D;
    return e;
}

// ---------------------------------------------------------------------------
// Simulation
// ---------------------------------------------------------------------------

inline constexpr double kSpotCheckTolerance = 1e-10;
/// Slack of the instantaneous-analyticity check fitted_gamma >= factor * gamma' t.
inline constexpr double kFitFactor = 0.5;

struct TruncationSummary {
    std::string label;
    double k_max = 0.0;
    std::size_t modes = 0;
    std::size_t steps = 0;
    std::size_t rows = 0;
    double worst_ratio = 0.0;
    double worst_t = 0.0;
    std::string worst_k;
    std::string worst_part;
    double max_enstrophy = 0.0;
    double max_energy = 0.0;
    bool envelope_ok = true;
    bool bound_ok = true;       ///< enstrophy (2D) / energy (3D) <= E*
    bool hypothesis_ok = true;  ///< 3D enstrophy <= assumed bound
    bool fit_ok = true;         ///< time-growing weights only
    double worst_fit_margin = std::numeric_limits<double>::infinity();
    bool spot_ok = true;
    std::size_t spot_checks = 0;
    double worst_spot = 0.0;
};

namespace detail {

template <int D>
std::string wave_label(const WaveVector<D>& k) {
    std::string s = "(";
    for (int i = 0; i < D; ++i) s += (i ? "," : "") + std::to_string(k[i]);
    return s + ")";
}

inline std::string time_label(double t) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", t);
    return buf;
}

inline std::string csv_number(double x) { return std::isfinite(x) ? format_double(x) : (std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf")); }

template <int D>
double relative_deviation(const Spectrum<D>& a, const Spectrum<D>& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += norm2(a[i] - b[i]);
        den += norm2(b[i]);
    }
    return den == 0.0 ? std::sqrt(num) : std::sqrt(num / den);
}

} // namespace detail

/// Simulates one truncation, streaming the series CSV and snapshots to
/// `dir` with the given file-name tag ("" or "_z2").
template <int D>
TruncationSummary simulate(const ScenarioConfig& c, const ScenarioEstimates& est, double k_max, const std::string& tag,
                           const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    auto z = make_truncation<D>(c.truncation.shape, k_max);
    GalerkinSystem<D> sys(z, c.physical, c.forcing);
    std::shared_ptr<const NonlinearEvaluator2D> fast;
    if constexpr (D == 2) {
        if (c.fast_nonlinearity) {
#ifdef GALERKIN_HAVE_FFTW
            fast = std::make_shared<FastNonlinearity2D>(z);
            sys.set_fast_path(fast);
#endif
        }
    }
    const Envelope init_env{c.initial.kind, c.initial.D, c.initial.r, c.initial.gamma, 0.0};
    Spectrum<D> s0(z);
    if (c.initial.D > 0.0) s0 = saturated_state<D>(z, init_env, c.initial.seed);

    TruncationSummary sum;
    sum.label = tag.empty() ? "primary" : tag.substr(1);
    sum.k_max = k_max;
    sum.modes = z->size();
    const bool time_weight = est.envelope.kind == EnvelopeKind::Gevrey;
    const double k_fit = std::nextafter(est.envelope.K0, INFINITY);
    bool fit_defined = false;
    for (const auto& k : z->members()) fit_defined = fit_defined || k.norm() >= k_fit;

    std::string csv = "t,enstrophy,energy,envelope_ratio_re_im_max,envelope_worst_k,fitted_gamma,dt,step_rejections\n";
    std::vector<bool> snap_done(c.output.snapshot_times.size(), false);
    const double h_nominal = c.step.t_end > 0.0
                                 ? c.step.t_end / std::ceil(c.step.t_end / c.step.dt * (1.0 - 1e-12))
                                 : c.step.dt;
    Spectrum<D> n_direct(z), n_fast(z);

    auto observe = [&](double t, const Spectrum<D>& y, const StepInfo& info) {
        const auto m = membership(y, est.envelope, t, c.slack);
        if (m.worst_ratio > sum.worst_ratio || sum.worst_k.empty()) {
            if (m.worst_k) {
                sum.worst_ratio = m.worst_ratio;
                sum.worst_t = t;
                sum.worst_k = detail::wave_label(*m.worst_k);
                sum.worst_part = to_string(m.worst_part);
            }
        }
        if (!m.inside) sum.envelope_ok = false;
        const double ens = enstrophy(y), en = energy(y);
        sum.max_enstrophy = std::max(sum.max_enstrophy, ens);
        sum.max_energy = std::max(sum.max_energy, en);
        if ((D == 2 ? ens : en) > est.E_star) sum.bound_ok = false;
        if (est.enstrophy_hypothesis && ens > *est.enstrophy_hypothesis) sum.hypothesis_ok = false;

        const bool row = info.step % static_cast<std::size_t>(c.output.series_stride) == 0 ||
                         std::abs(t - c.step.t_end) <= 0.5 * h_nominal;
        double fit = std::numeric_limits<double>::quiet_NaN();
        if (fit_defined && (row || time_weight)) {
            fit = fitted_gamma(y, est.envelope.r, est.fit_amplitude, k_fit);
            if (time_weight && est.gamma_prime) {
                const double margin = fit - kFitFactor * *est.gamma_prime * t;
                sum.worst_fit_margin = std::min(sum.worst_fit_margin, margin);
                if (margin < 0.0) sum.fit_ok = false;
            }
        }
        if (row) {
            ++sum.rows;
            csv += format_double(t) + "," + format_double(ens) + "," + format_double(en) + "," +
                   detail::csv_number(m.worst_ratio) + ",\"" + (m.worst_k ? detail::wave_label(*m.worst_k) : "") + "\"," +
                   detail::csv_number(fit) + "," + format_double(info.dt) + "," + std::to_string(info.rejections) + "\n";
        }
        for (std::size_t i = 0; i < snap_done.size(); ++i) {
            if (snap_done[i] || std::abs(t - c.output.snapshot_times[i]) > 0.5 * h_nominal) continue;
            snap_done[i] = true;
            write_text_file((dir / ("spectrum" + tag + "_t" + detail::time_label(c.output.snapshot_times[i]) + ".json")).string(),
                            write_snapshot(y));
        }
        if constexpr (D == 2) {
            if (fast && info.step > 0 && info.step % static_cast<std::size_t>(c.spot_check_interval) == 0) {
                sys.nonlinear_direct(y, n_direct);
                fast->evaluate(y, n_fast);
                const double dev = detail::relative_deviation(n_fast, n_direct);
                ++sum.spot_checks;
                sum.worst_spot = std::max(sum.worst_spot, dev);
                if (dev > kSpotCheckTolerance) sum.spot_ok = false;
            }
        }
    };

    StepControl control = c.step;
    control.observer_stride = 1;
    auto on_divergence = [&](double t, const Spectrum<D>& good) {
        const std::string text = "{\"t\":" + format_double(t) + ",\"truncation\":\"" + sum.label +
                                 "\",\"state\":" + write_snapshot(good) + "}\n";
        write_text_file((dir / "checkpoint.json").string(), text);
    };
    if (c.step.t_end == 0.0) {
        observe(0.0, s0, StepInfo{0, 0.0, 0});
    } else {
        try {
            const auto res = run<D>(sys, s0, control, {observe}, on_divergence);
            sum.steps = res.steps;
        } catch (const Error& e) {
            if (e.code() == ErrorCode::Divergence)
                throw Error(ErrorCode::Divergence, std::string(e.what()) + "; checkpoint " + (dir / "checkpoint.json").string());
            throw;
        }
    }
    write_text_file((dir / ("series" + tag + ".csv")).string(), csv);
    return sum;
}

// ---------------------------------------------------------------------------
// Scenario entry points
// ---------------------------------------------------------------------------

struct ScenarioResult {
    bool pass = false;
    std::string verdict;   ///< first line of verdict.txt
    ScenarioEstimates estimates;
    std::optional<ScenarioEstimates> estimates_alt;
    std::vector<TruncationSummary> runs;
    bool constants_match = true;
};

namespace detail {

inline std::filesystem::path prepare_dir(const std::string& d) {
    std::filesystem::path p(d);
    std::error_code ec;
    std::filesystem::create_directories(p, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create output directory " + d + ": " + ec.message());
    return p;
}

template <int D>
ScenarioEstimates estimates_for(const ScenarioConfig& c, double k_max) {
    return compute_estimates<D>(c, *make_truncation<D>(c.truncation.shape, k_max));
}

} // namespace detail

/// Estimates only: writes config.json and estimates.json.
inline ScenarioEstimates certify(const ScenarioConfig& c) {
    validate(c);
    const auto dir = detail::prepare_dir(c.output.dir);
    auto est = c.dimension == 2 ? detail::estimates_for<2>(c, c.truncation.k_max) : detail::estimates_for<3>(c, c.truncation.k_max);
    write_text_file((dir / "config.json").string(), to_json(c).dump(2) + "\n");
    write_text_file((dir / "estimates.json").string(), est.to_json());
    return est;
}

template <int D>
ScenarioResult run_scenario_dim(const ScenarioConfig& c) {
    const auto dir = detail::prepare_dir(c.output.dir);
    write_text_file((dir / "config.json").string(), to_json(c).dump(2) + "\n");
    const auto wall0 = std::chrono::steady_clock::now();

    ScenarioResult res;
    res.estimates = detail::estimates_for<D>(c, c.truncation.k_max);
    write_text_file((dir / "estimates.json").string(), res.estimates.to_json());
    const bool two = c.truncation.k_max_alt > 0.0;
    if (two) {
        res.estimates_alt = detail::estimates_for<D>(c, c.truncation.k_max_alt);
        write_text_file((dir / "estimates_z2.json").string(), res.estimates_alt->to_json());
        res.constants_match = res.estimates_alt->to_json() == res.estimates.to_json();
    }

    if (two && !c.reproducible) {
        TruncationSummary alt;
        std::exception_ptr alt_error;
        std::thread worker([&] {
            try {
                alt = simulate<D>(c, *res.estimates_alt, c.truncation.k_max_alt, "_z2", dir);
            } catch (...) {
                alt_error = std::current_exception();
            }
        });
        TruncationSummary primary;
        try {
            primary = simulate<D>(c, res.estimates, c.truncation.k_max, "", dir);
        } catch (...) {
            worker.join();
            throw;
        }
        worker.join();
        if (alt_error) std::rethrow_exception(alt_error);
        res.runs = {primary, alt};
    } else {
        res.runs.push_back(simulate<D>(c, res.estimates, c.truncation.k_max, "", dir));
        if (two) res.runs.push_back(simulate<D>(c, *res.estimates_alt, c.truncation.k_max_alt, "_z2", dir));
    }

    // worst offender over both runs
    const TruncationSummary* worst = &res.runs.front();
    for (const auto& r : res.runs)
        if (r.worst_ratio > worst->worst_ratio) worst = &r;
    std::vector<std::string> reasons;
    for (const auto& r : res.runs) {
        if (!r.envelope_ok)
            reasons.push_back("envelope ratio " + format_double(r.worst_ratio) + " at k=" + r.worst_k + " (" + r.worst_part +
                              ") t=" + format_double(r.worst_t) + " on " + r.label);
        if (!r.bound_ok)
            reasons.push_back(std::string(D == 2 ? "enstrophy " : "energy ") +
                              format_double(D == 2 ? r.max_enstrophy : r.max_energy) + " exceeds E* on " + r.label);
        if (!r.hypothesis_ok) reasons.push_back("enstrophy hypothesis violated on " + r.label);
        if (!r.fit_ok) reasons.push_back("fitted gamma below " + format_double(kFitFactor) + " gamma' t on " + r.label);
        if (!r.spot_ok) reasons.push_back("fast path deviates from direct evaluation on " + r.label);
    }
    if (!res.constants_match) reasons.push_back("estimates differ between truncations");
    res.pass = reasons.empty();
    res.verdict = res.pass ? "PASS" : "FAIL: " + reasons.front();

    std::string text = res.verdict + "\n";
    text += "scenario " + std::string(to_string(c.scenario)) + "\n";
    if (res.estimates.K_crit) text += "K_crit " + format_double(*res.estimates.K_crit) + "\n";
    text += "K0 " + format_double(res.estimates.K0) + "\n";
    text += "D_prime " + format_double(res.estimates.D_prime) + "\n";
    if (res.estimates.gamma_prime) text += "gamma_prime " + format_double(*res.estimates.gamma_prime) + "\n";
    text += "E_star " + format_double(res.estimates.E_star) + "\n";
    text += std::string("constants_match ") + (res.constants_match ? "yes" : "no") + "\n";
    for (const auto& r : res.runs) {
        text += "run " + r.label + " K_max=" + format_double(r.k_max) + " modes=" + std::to_string(r.modes) +
                " steps=" + std::to_string(r.steps) + " worst_ratio=" + format_double(r.worst_ratio) + " at " +
                (r.worst_k.empty() ? "-" : r.worst_k + " " + r.worst_part) + " t=" + format_double(r.worst_t) +
                " max_enstrophy=" + format_double(r.max_enstrophy) + " max_energy=" + format_double(r.max_energy);
        if (std::isfinite(r.worst_fit_margin)) text += " worst_fit_margin=" + format_double(r.worst_fit_margin);
        if (r.spot_checks) text += " spot_checks=" + std::to_string(r.spot_checks) + " worst_spot=" + format_double(r.worst_spot);
        text += "\n";
    }
    for (std::size_t i = 1; i < reasons.size(); ++i) text += "also: " + reasons[i] + "\n";
    text += "worst_offender " + (worst->worst_k.empty() ? std::string("-") : worst->worst_k) + "\n";
    if (!c.reproducible) {
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
        text += "wall_seconds " + format_double(secs) + "\n";
    }
    write_text_file((dir / "verdict.txt").string(), text);
    return res;
}

inline ScenarioResult run_scenario(const ScenarioConfig& c) {
    validate(c);
    return c.dimension == 2 ? run_scenario_dim<2>(c) : run_scenario_dim<3>(c);
}

} // namespace galerkin
