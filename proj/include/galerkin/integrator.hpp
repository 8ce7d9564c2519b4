#pragma once

// Fixed-step time integration: classical RK4 on the full right-hand side, and
// integrating-factor RK4 in which the dissipation e^{-4 pi^2 nu |k|^alpha t}
// is applied exactly and RK4 handles nonlinearity plus forcing.

#include "galerkin/dynamics.hpp"
#include "galerkin/errors.hpp"
#include "galerkin/state.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

namespace galerkin {

enum class Scheme { IfRk4, Rk4 };

inline const char* to_string(Scheme s) { return s == Scheme::IfRk4 ? "if_rk4" : "rk4"; }

inline Scheme parse_scheme(const std::string& s) {
    if (s == "if_rk4") return Scheme::IfRk4;
    if (s == "rk4") return Scheme::Rk4;
    throw Error(ErrorCode::Configuration, "unknown scheme '" + s + "'");
}

struct StepControl {
    double dt = 1e-3;
    Scheme scheme = Scheme::IfRk4;
    double t_end = 0.0;
    int observer_stride = 1;

    void validate() const {
        if (!(dt > 0.0)) throw Error(ErrorCode::Configuration, "dt must be positive");
        if (!(t_end >= 0.0)) throw Error(ErrorCode::Configuration, "t_end must be nonnegative");
        if (observer_stride < 1) throw Error(ErrorCode::Configuration, "observer_stride must be positive");
    }
};

inline constexpr double kRk4StabilityFactor = 2.7;

/// Largest stable plain-RK4 step for the stiffest mode |k| = K_max.
inline double stability_bound(const PhysicalParams& p, double k_max) {
    if (!(k_max >= 1.0)) throw Error(ErrorCode::Domain, "K_max must be at least 1");
    return kRk4StabilityFactor / (4.0 * std::numbers::pi * std::numbers::pi * p.nu * std::pow(k_max, p.alpha));
}

template <int D>
bool all_finite(const Spectrum<D>& s) {
    for (std::size_t i = 0; i < s.size(); ++i) {
        if constexpr (D == 2) {
            if (!std::isfinite(s[i].real()) || !std::isfinite(s[i].imag())) return false;
        } else {
            for (const auto& c : s[i])
                if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
        }
    }
    return true;
}

/// Reusable single-step engine; keeps stage buffers and the exponential
/// factors for the last step size.
template <int D>
class Stepper {
public:
    explicit Stepper(const GalerkinSystem<D>& sys)
        : sys_(sys), k1_(sys.zero()), k2_(sys.zero()), k3_(sys.zero()), k4_(sys.zero()), tmp_(sys.zero()) {
        double top = 0.0;
        for (double r : sys.rates()) top = std::max(top, r);
        max_rate_ = top;
    }

    /// Plain RK4 bound for this truncation's stiffest mode.
    double rk4_limit() const { return max_rate_ > 0.0 ? kRk4StabilityFactor / max_rate_ : INFINITY; }

    void step(Spectrum<D>& y, double t, double h, Scheme scheme) {
        if (scheme == Scheme::Rk4) {
            if (h > rk4_limit())
                throw Error(ErrorCode::StepRejected, "rk4 step " + std::to_string(h) + " exceeds stability bound " +
                                                         std::to_string(rk4_limit()));
            rk4(y, t, h);
        } else {
            if_rk4(y, t, h);
        }
    }

private:
    void rk4(Spectrum<D>& y, double t, double h) {
        const std::size_t n = y.size();
        sys_.rhs(y, t, k1_);
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + (0.5 * h) * k1_[i];
        sys_.rhs(tmp_, t + 0.5 * h, k2_);
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + (0.5 * h) * k2_[i];
        sys_.rhs(tmp_, t + 0.5 * h, k3_);
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h * k3_[i];
        sys_.rhs(tmp_, t + h, k4_);
        for (std::size_t i = 0; i < n; ++i)
            y[i] = y[i] + (h / 6.0) * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
    }

    // F = rhs + rate * w, i.e. nonlinearity plus forcing
    void forcing_part(const Spectrum<D>& w, double t, Spectrum<D>& out) {
        sys_.nonlinear(w, out);
        const auto& f = sys_.forcing();
        if (f.active())
            for (std::size_t i = 0; i < out.size(); ++i) out[i] = out[i] + f.at(i, t);
        if constexpr (D == 3)
            for (std::size_t i = 0; i < out.size(); ++i) out[i] = project_transverse(out.wave(i), out[i]);
    }

    void if_rk4(Spectrum<D>& y, double t, double h) {
        const std::size_t n = y.size();
        if (h != cached_h_) {
            half_.resize(n);
            full_.resize(n);
            for (std::size_t i = 0; i < n; ++i) {
                half_[i] = std::exp(-sys_.rates()[i] * 0.5 * h);
                full_[i] = std::exp(-sys_.rates()[i] * h);
            }
            cached_h_ = h;
        }
        forcing_part(y, t, k1_);
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = half_[i] * (y[i] + (0.5 * h) * k1_[i]);
        forcing_part(tmp_, t + 0.5 * h, k2_);
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = half_[i] * y[i] + (0.5 * h) * k2_[i];
        forcing_part(tmp_, t + 0.5 * h, k3_);
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = full_[i] * y[i] + (h * half_[i]) * k3_[i];
        forcing_part(tmp_, t + h, k4_);
        for (std::size_t i = 0; i < n; ++i)
            y[i] = full_[i] * y[i] +
                   (h / 6.0) * (full_[i] * k1_[i] + (2.0 * half_[i]) * (k2_[i] + k3_[i]) + k4_[i]);
    }

    const GalerkinSystem<D>& sys_;
    Spectrum<D> k1_, k2_, k3_, k4_, tmp_;
    std::vector<double> half_, full_;
    double cached_h_ = -1.0;
    double max_rate_ = 0.0;
};

/// One step from (state, t); returns the state at t + dt.
template <int D>
Spectrum<D> step(const GalerkinSystem<D>& sys, const Spectrum<D>& state, double t, double dt, Scheme scheme) {
    Stepper<D> stepper(sys);
    Spectrum<D> y = state;
    stepper.step(y, t, dt, scheme);
    return y;
}

struct StepInfo {
    std::size_t step = 0;
    double dt = 0.0;
    std::size_t rejections = 0;
};

template <int D>
using Observer = std::function<void(double t, const Spectrum<D>& state, const StepInfo& info)>;

template <int D>
using DivergenceHandler = std::function<void(double t_last_good, const Spectrum<D>& last_good)>;

template <int D>
struct RunResult {
    Spectrum<D> final_state;
    double t_final = 0.0;
    std::size_t steps = 0;
};

/// Advances from t = 0 to control.t_end with n = ceil(t_end/dt) equal steps
/// of size t_end/n <= dt. Observers see t = 0, every observer_stride steps,
/// and the final time; nothing is observed when t_end = 0. A non-finite
/// amplitude hands the last good state to on_divergence and throws.
template <int D>
RunResult<D> run(const GalerkinSystem<D>& sys, const Spectrum<D>& state0, const StepControl& control,
                 const std::vector<Observer<D>>& observers = {}, const DivergenceHandler<D>& on_divergence = {}) {
    control.validate();
    RunResult<D> result{state0, 0.0, 0};
    if (control.t_end == 0.0) return result;

    const auto n = static_cast<std::size_t>(std::ceil(control.t_end / control.dt * (1.0 - 1e-12)));
    const double h = control.t_end / static_cast<double>(n);
    Stepper<D> stepper(sys);
    StepInfo info{0, h, 0};
    auto notify = [&](double t, const Spectrum<D>& s) {
        for (const auto& obs : observers) obs(t, s, info);
    };

    Spectrum<D>& y = result.final_state;
    Spectrum<D> last_good = y;
    notify(0.0, y);
    for (std::size_t j = 0; j < n; ++j) {
        const double t = static_cast<double>(j) * h;
        last_good = y;
        stepper.step(y, t, h, control.scheme);
        if (!all_finite(y)) {
            if (on_divergence) on_divergence(t, last_good);
            throw Error(ErrorCode::Divergence, "non-finite amplitude after step " + std::to_string(j + 1) +
                                                   " (t = " + std::to_string(t + h) + ")");
        }
        info.step = j + 1;
        const double t_next = static_cast<double>(j + 1) * h;
        if ((j + 1) % static_cast<std::size_t>(control.observer_stride) == 0 || j + 1 == n) notify(t_next, y);
    }
    result.t_final = control.t_end;
    result.steps = n;
    return result;
}

} // namespace galerkin
