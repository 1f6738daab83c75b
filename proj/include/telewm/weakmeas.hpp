#pragma once

// Weak measurement (WM) and reversal (RWM) operators, and the post-selected
// protocol map around a noisy channel:
//
//   rho_f  propto  R · Lambda_t( W · rho · W^dagger ) · R^dagger
//
// where W applies M_w and R applies M_wr (travel qubit only in ONE_SIDED mode,
// both qubits in TWO_SIDED mode, the latter reserved for the correlated
// channel).  The normalizing trace is the post-selection success probability.

#include <cmath>

#include "telewm/channels.hpp"

namespace telewm {

namespace tol {
// Pre-normalization traces below this floor make post-selection numerically
// vacuous; the protocol errors out instead of dividing.
inline constexpr double kSuccessFloor = 1e-12;
}  // namespace tol

enum class Side { ONE_SIDED, TWO_SIDED };

struct WeakMeasConfig {
    double w = 0.0;
    double wr = 0.0;
    Side mode = Side::ONE_SIDED;
};

struct ProtocolOutcome {
    TwoQubitState state;
    double success_prob;
};

// M_w = diag(1, sqrt(1-w))
inline Mat wm_operator(double w) {
    if (!(w >= 0.0 && w < 1.0)) throw OutOfRange("wm_operator: w must lie in [0,1)");
    Mat m(2);
    m(0, 0) = 1.0;
    m(1, 1) = std::sqrt(1.0 - w);
    return m;
}

// M_wr = diag(sqrt(1-wr), 1)
inline Mat rwm_operator(double wr) {
    if (!(wr >= 0.0 && wr < 1.0)) throw OutOfRange("rwm_operator: wr must lie in [0,1)");
    Mat m(2);
    m(0, 0) = std::sqrt(1.0 - wr);
    m(1, 1) = 1.0;
    return m;
}

inline ProtocolOutcome run_protocol(const TwoQubitState& input, const WeakMeasConfig& cfg,
                                    const NoiseModel& model, double t) {
    const bool correlated = model.family == Family::CADC;
    if (correlated && cfg.mode != Side::TWO_SIDED)
        throw InvalidParams("run_protocol: CADC requires TWO_SIDED weak measurements");
    if (!correlated && cfg.mode != Side::ONE_SIDED)
        throw InvalidParams("run_protocol: single-qubit channels require ONE_SIDED mode");

    const Mat mw = wm_operator(cfg.w);
    const Mat mr = rwm_operator(cfg.wr);
    const Mat eye = Mat::identity(2);
    const Mat pre = correlated ? tensor(mw, mw) : tensor(eye, mw);
    const Mat post = correlated ? tensor(mr, mr) : tensor(eye, mr);

    Mat rho = sandwich(pre, input.rho());
    if (correlated)
        rho = apply_cadc_raw(rho, noise_function(model, t), model.q);
    else
        rho = apply_one_sided_raw(rho, kraus_at(model, t));
    rho = sandwich(post, rho);

    const double trace = rho.trace().real();
    if (trace < tol::kSuccessFloor)
        throw SuccessProbTooSmall("run_protocol: post-selection trace below 1e-12");
    return ProtocolOutcome{TwoQubitState(rho * cx{1.0 / trace, 0.0}), trace};
}

// Closed-form success probability for the one-sided ADC-family protocol:
//   P = (1-wr) cos^2(theta) + (1-w)(1 - wr p) sin^2(theta).
inline double success_prob_adc_closed(double theta, double w, double wr, double p) {
    const double c2 = std::cos(theta) * std::cos(theta);
    const double s2 = std::sin(theta) * std::sin(theta);
    return (1.0 - wr) * c2 + (1.0 - w) * (1.0 - wr * p) * s2;
}

enum class ClosedFamily { UNITAL, ADC };

// Closed-form normalized output of the one-sided protocol on the Bell-type
// input, for the unital and amplitude-damping families.  Serves as an
// independent oracle against run_protocol.
//
// Writing r = 1-wr, u = 1-w, c = cos(theta), s = sin(theta):
//   UNITAL: diag(r c^2, 0, 0, u s^2)/N with corners p sqrt(r u) c s / N,
//           N = r c^2 + u s^2;
//   ADC:    rho_11 = r c^2 / N, rho_33 = r u p s^2 / N,
//           rho_44 = u (1-p) s^2 / N, rho_14 = sqrt(r u (1-p)) c s / N,
//           N = r c^2 + u (1 - wr p) s^2.
inline TwoQubitState closed_form_final_state(double theta, double w, double wr, double p,
                                             ClosedFamily family) {
    const double r = 1.0 - wr, u = 1.0 - w;
    const double c = std::cos(theta), s = std::sin(theta);
    Mat rho(4);
    if (family == ClosedFamily::UNITAL) {
        const double norm = r * c * c + u * s * s;
        rho(0, 0) = r * c * c / norm;
        rho(3, 3) = u * s * s / norm;
        rho(0, 3) = rho(3, 0) = p * std::sqrt(r * u) * c * s / norm;
    } else {
        const double norm = r * c * c + u * (1.0 - wr * p) * s * s;
        rho(0, 0) = r * c * c / norm;
        rho(2, 2) = r * u * p * s * s / norm;
        rho(3, 3) = u * (1.0 - p) * s * s / norm;
        rho(0, 3) = rho(3, 0) = std::sqrt(r * u * (1.0 - p)) * c * s / norm;
    }
    return TwoQubitState(rho);
}

}  // namespace telewm
