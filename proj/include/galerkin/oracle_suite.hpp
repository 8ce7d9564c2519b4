#pragma once

// Randomized oracle suites with a CSV trial log: conservation of the
// truncated nonlinearity, convolution-lemma domination, inward audits on
// the thm1 and thm2 trapping sets, and the saturated-forcing counterexample.

#include "galerkin/oracle.hpp"
#include "galerkin/scenario.hpp"

#include <map>
#include <random>
#include <string>
#include <vector>

namespace galerkin {

inline constexpr double kConservationTolerance = 1e-12;

/// One trial. `pass` is authoritative; `bound` is the threshold it was
/// compared against (value <= bound, or value > bound for inward margins).
struct OracleRow {
    std::string suite;
    int trial = 0;
    std::uint64_t seed = 0;
    std::string quantity;
    double value = 0.0;
    double bound = 0.0;
    bool pass = false;
};

struct OracleOptions {
    std::uint64_t seed = 1;
    int conservation_states = 100;
    int lemma_trials = 1000;
    int inward_states = 200;
    ScenarioConfig thm1;
    ScenarioConfig thm2;
    double audit_k_max = 12.0;
};

/// The thm1 and thm2 configurations audited by default (the same physics
/// as configs/thm1.json and configs/thm2.json).
inline ScenarioConfig oracle_thm1_config() {
    return parse_config_text(R"({
      "scenario": "thm1",
      "physical": {"nu": 1.0, "alpha": 2.0},
      "forcing": {"kind": "power_law", "amplitude": 0.05, "r": 3.0, "epsilon": 0.5, "phase_seed": 7},
      "initial": {"envelope": "algebraic", "D": 0.01, "r": 3.0, "seed": 1},
      "step": {"dt": 0.01, "t_end": 10.0}
    })");
}

inline ScenarioConfig oracle_thm2_config() {
    return parse_config_text(R"({
      "scenario": "thm2",
      "physical": {"nu": 1.0, "alpha": 2.0},
      "forcing": {"kind": "exponential", "amplitude": 0.001, "r": 3.0, "epsilon": 0.5,
                  "gamma": 0.2, "delta": 0.5, "phase_seed": 11},
      "initial": {"envelope": "exponential", "D": 1e-05, "r": 3.0, "gamma": 0.3, "seed": 2},
      "step": {"dt": 0.01, "t_end": 5.0}
    })");
}

inline OracleOptions default_oracle_options() {
    OracleOptions o;
    o.thm1 = oracle_thm1_config();
    o.thm2 = oracle_thm2_config();
    return o;
}

template <int D>
void conservation_suite(std::vector<OracleRow>& rows, const std::string& suite, double k_max, int states,
                        std::uint64_t seed) {
    auto z = make_truncation<D>(TruncationShape::Disk, k_max);
    GalerkinSystem<D> sys(z, PhysicalParams{}, ForcingSpec{});
    for (int n = 0; n < states; ++n) {
        const std::uint64_t s = seed + static_cast<std::uint64_t>(n);
        const auto c = conservation_rates(sys, random_state<D>(z, s, 1.0, 0.5 * (n % 5)));
        if constexpr (D == 2) {
            const double b = kConservationTolerance * c.enstrophy_scale;
            rows.push_back({suite, n, s, "d_enstrophy", std::abs(c.d_enstrophy), b, std::abs(c.d_enstrophy) <= b});
            const double be = kConservationTolerance * c.energy_scale;
            rows.push_back({suite, n, s, "d_energy", std::abs(c.d_energy), be, std::abs(c.d_energy) <= be});
        } else {
            const double b = kConservationTolerance * c.energy_scale;
            rows.push_back({suite, n, s, "d_energy", std::abs(c.d_energy), b, std::abs(c.d_energy) <= b});
        }
    }
}

/// Random envelope-compliant a, b and a random k with |k| in [2, 32].
template <int D>
void lemma_suite(std::vector<OracleRow>& rows, double r, double k_max, int trials, std::uint64_t seed) {
    auto z = make_truncation<D>(TruncationShape::Disk, k_max);
    const std::string suite = "lemma_d" + std::to_string(D) + "_r" + format_double(r);
    for (int n = 0; n < trials; ++n) {
        const std::uint64_t s = seed + 3 * static_cast<std::uint64_t>(n);
        std::mt19937_64 rng(s + 2);
        std::uniform_int_distribution<int> comp(-32, 32);
        WaveVector<D> k;
        do {
            for (int i = 0; i < D; ++i) k[i] = comp(rng);
        } while (k.norm() < 2.0 || k.norm() > 32.0);
        const double C = 0.5 + n % 3;
        const auto a = random_envelope_sequence(*z, C, r, s);
        const auto b = random_envelope_sequence(*z, C, r, s + 1);
        const double total = shell_sums_lookup(a, b, k, *z).total;
        const double bound = lemma1_bound(C, r, k);
        rows.push_back({suite, n, s, "shell_total", total, bound, total <= bound});
    }
}

/// Random boundary states of the scenario's trapping set at |k_bar| >= K_crit.
inline void inward_suite(std::vector<OracleRow>& rows, const std::string& suite, const ScenarioConfig& c, double k_max,
                         int states, std::uint64_t seed) {
    auto z = make_truncation<2>(TruncationShape::Disk, k_max);
    const auto est = compute_estimates<2>(c, *z);
    const auto cands = boundary_candidates(*z, est.envelope, est.E_star, *est.K_crit);
    if (cands.empty())
        throw Error(ErrorCode::Infeasible, suite + ": no boundary mode fits the E* budget on disk(" + format_double(k_max) + ")");
    std::mt19937_64 rng(seed);
    for (int n = 0; n < states; ++n) {
        const std::uint64_t s = seed + 1000 + static_cast<std::uint64_t>(n);
        const auto& kb = cands[rng() % cands.size()];
        const Part part = rng() % 2 ? Part::Re : Part::Im;
        const int sign = rng() % 2 ? 1 : -1;
        const auto st = boundary_state(z, est.envelope, est.E_star, kb, part, sign, s);
        const auto chk = verify_inward(st, est.envelope, c.physical, c.forcing, 0.0, kb, part, sign,
                                       est.condition ? &*est.condition : nullptr);
        rows.push_back({suite, n, s, "margin", chk.margin, 0.0, chk.holds});
        if (chk.sufficient_margin) {
            const double sm = *chk.sufficient_margin;
            // the sufficient condition must be positive and no sharper than the field
            rows.push_back({suite, n, s, "sufficient_margin", sm, chk.margin, sm > 0.0 && sm <= chk.margin});
        }
    }
}

/// Forcing saturating the envelope at small nu, below any critical
/// wavenumber: the field at the boundary must point outward.
inline void counterexample_suite(std::vector<OracleRow>& rows, std::uint64_t seed) {
    const double G = 1.0;
    auto z = make_truncation<2>(TruncationShape::Disk, 4.0);
    const auto env = Envelope::algebraic(G, 3.0, 1.5);
    const PhysicalParams p{1e-3, 2.0};
    ForcingSpec f;
    f.kind = ForcingKind::PowerLaw;
    f.amplitude = G;
    f.r = 3.0;
    f.epsilon = 0.5;
    f.phase_seed = seed;
    WaveVector2 kb{};
    Part part = Part::Re;
    double best = -1.0;
    for (std::size_t i = 0; i < z->canonical_count(); ++i) {
        const auto& k = z->canonical(i);
        if (!(k.norm() > env.K0)) continue;
        const Complex g = sample_forcing<2>(f, k, 0.0);
        const double al = std::max(std::abs(g.real()), std::abs(g.imag())) / std::abs(g);
        if (al > best) {
            best = al;
            kb = k;
            part = std::abs(g.real()) >= std::abs(g.imag()) ? Part::Re : Part::Im;
        }
    }
    const Complex g = sample_forcing<2>(f, kb, 0.0);
    const double gc = part == Part::Re ? g.real() : g.imag();
    const int sign = gc > 0 ? 1 : -1;
    Spectrum2D s(z);
    s.set(kb, part == Part::Re ? Complex(sign * env.value(kb), 0.0) : Complex(0.0, sign * env.value(kb)));
    const auto chk = verify_inward(s, env, p, f, 0.0, kb, part, sign);
    rows.push_back({"counterexample", 0, seed, "margin", chk.margin, 0.0, !chk.holds});
}

struct OracleSummary {
    std::vector<OracleRow> rows;
    std::map<std::string, int> trials;
    std::map<std::string, int> failures;

    bool pass(const std::string& suite) const {
        auto t = trials.find(suite);
        return t != trials.end() && t->second > 0 && failures.at(suite) == 0;
    }
    bool all_pass() const {
        for (const auto& [s, f] : failures)
            if (f != 0) return false;
        return !trials.empty();
    }
};

inline void tally(OracleSummary& out) {
    out.trials.clear();
    out.failures.clear();
    for (const auto& r : out.rows) {
        ++out.trials[r.suite];
        out.failures[r.suite] += r.pass ? 0 : 1;
    }
}

inline OracleSummary run_oracle_suites(const OracleOptions& o) {
    OracleSummary out;
    conservation_suite<2>(out.rows, "conservation_2d", 8.0, o.conservation_states, o.seed);
    conservation_suite<3>(out.rows, "conservation_3d", 4.0, o.conservation_states, o.seed + 500);
    std::uint64_t s = o.seed + 10000;
    for (double r : {1.5, 2.0, 3.0}) {
        lemma_suite<2>(out.rows, r, 20.0, o.lemma_trials, s);
        s += 10000;
    }
    // r > d - 1 leaves r = 3 in three dimensions
    lemma_suite<3>(out.rows, 3.0, 16.0, o.lemma_trials, s);
    inward_suite(out.rows, "inward_thm1", o.thm1, o.audit_k_max, o.inward_states, o.seed + 70000);
    inward_suite(out.rows, "inward_thm2", o.thm2, o.audit_k_max, o.inward_states, o.seed + 80000);
    counterexample_suite(out.rows, o.seed + 4);
    tally(out);
    return out;
}

inline std::string oracle_csv(const std::vector<OracleRow>& rows) {
    std::string out = "suite,trial,seed,quantity,value,bound,pass\n";
    for (const auto& r : rows)
        out += r.suite + "," + std::to_string(r.trial) + "," + std::to_string(r.seed) + "," + r.quantity + "," +
               format_double(r.value) + "," + format_double(r.bound) + "," + (r.pass ? "1" : "0") + "\n";
    return out;
}

} // namespace galerkin
