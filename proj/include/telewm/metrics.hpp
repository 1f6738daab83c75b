#pragma once

// Scalar diagnostics: concurrence, l1-coherence, teleportation fidelity and
// fidelity deviation (from the correlation matrix), trace distance, the BLP
// non-Markovianity indicator sigma, and closed-form Bell-type expressions used
// as oracles by the test-suite and experiment drivers.

#include <algorithm>
#include <cmath>

#include "telewm/weakmeas.hpp"

namespace telewm {

struct MetricRecord {
    double t = 0.0;
    double concurrence = 0.0;
    double coherence_l1 = 0.0;
    double fidelity = 0.0;
    double fidelity_deviation = 0.0;
    double success_prob = 1.0;
};

// Wootters concurrence C = max(0, l1 - l2 - l3 - l4) where l_i are the
// descending square roots of the spectrum of rho * rho_tilde,
// rho_tilde = (sigma_y x sigma_y) rho^* (sigma_y x sigma_y).  The spectrum is
// obtained from the Hermitian matrix sqrt(rho) rho_tilde sqrt(rho), which
// shares it; eigenvalues below the PSD clamp are zeroed so rank-deficient
// states do not leak square-root noise into the result.
inline double concurrence(const TwoQubitState& state) {
    const Mat& rho = state.rho();
    const Mat yy = tensor(pauli(2), pauli(2));
    const Mat rho_tilde = yy * rho.conjugate() * yy;
    const Mat root = sqrt_psd(rho);
    EigResult e = hermitian_eig(root * rho_tilde * root);
    double lam[4];
    for (int i = 0; i < 4; ++i) {
        double v = e.values[static_cast<std::size_t>(i)];
        if (std::abs(v) < tol::kPsdClamp) v = 0.0;
        lam[i] = std::sqrt(std::max(0.0, v));
    }
    std::sort(lam, lam + 4, std::greater<double>{});
    return std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
}

// Closed-form X-state concurrence 2 max(0, |rho_14| - sqrt(rho_22 rho_33)),
// used as an independent oracle (valid only when rho_23 = 0, which covers
// every state this artifact produces).
inline double concurrence_x_state(const TwoQubitState& state) {
    const Mat& rho = state.rho();
    const double inner = std::sqrt(std::max(0.0, rho(1, 1).real() * rho(2, 2).real()));
    return 2.0 * std::max(0.0, std::abs(rho(0, 3)) - inner);
}

// l1-norm of coherence: sum of |rho_ij| over off-diagonal entries.
inline double coherence_l1(const TwoQubitState& state) {
    const Mat& rho = state.rho();
    double s = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (i != j) s += std::abs(rho(i, j));
    return s;
}

// Optimal teleportation fidelity F = (1 + (|t11|+|t22|+|t33|)/3) / 2 over the
// correlation-matrix eigenvalues.
inline double fidelity(const TwoQubitState& state) {
    const CorrelationMatrix corr = correlation_matrix(state);
    double s = 0.0;
    for (double v : corr.diag_eigs) s += std::abs(v);
    return 0.5 * (1.0 + s / 3.0);
}

// Fidelity deviation Delta = (1/(3 sqrt(10))) sqrt(sum_{i<j} (|t_ii|-|t_jj|)^2).
inline double fidelity_deviation(const TwoQubitState& state) {
    const CorrelationMatrix corr = correlation_matrix(state);
    double a = std::abs(corr.diag_eigs[0]);
    double b = std::abs(corr.diag_eigs[1]);
    double c = std::abs(corr.diag_eigs[2]);
    const double sq = (a - b) * (a - b) + (a - c) * (a - c) + (b - c) * (b - c);
    return std::sqrt(sq) / (3.0 * std::sqrt(10.0));
}

// Trace distance D = (1/2) ||a - b||_1.
inline double trace_distance(const TwoQubitState& a, const TwoQubitState& b) {
    return 0.5 * trace_norm_hermitian(a.rho() - b.rho());
}

inline MetricRecord metric_record(const ProtocolOutcome& outcome, double t) {
    MetricRecord r;
    r.t = t;
    r.concurrence = concurrence(outcome.state);
    r.coherence_l1 = coherence_l1(outcome.state);
    r.fidelity = fidelity(outcome.state);
    r.fidelity_deviation = fidelity_deviation(outcome.state);
    r.success_prob = outcome.success_prob;
    return r;
}

// The fixed state pair used by the distinguishability analysis: |00> and the
// Bell state (|00>+|11>)/sqrt(2).
inline TwoQubitState blp_pair_first() { return basis_state(0, 0); }
inline TwoQubitState blp_pair_second() { return bell_type({M_PI / 4.0}); }

// Fastest rate in the model, defining the characteristic time 1/rate that
// bounds the admissible derivative step.
inline double characteristic_rate(const NoiseModel& model) {
    switch (model.family) {
        case Family::ADC:
        case Family::CADC: return std::max(model.gamma, 1e-300);
        case Family::NM_ADC: return std::max(model.gamma0, model.k);
        case Family::RTN:
        case Family::OUN:
        case Family::PLN: return model.gamma;
    }
    return 1.0;
}

// Trace distance of the evolved pair at time t (each state run through the
// same WM -> channel -> RWM pipeline).
inline double blp_distance(const NoiseModel& model, const WeakMeasConfig& cfg, double t) {
    const ProtocolOutcome a = run_protocol(blp_pair_first(), cfg, model, t);
    const ProtocolOutcome b = run_protocol(blp_pair_second(), cfg, model, t);
    return trace_distance(a.state, b.state);
}

// BLP indicator sigma(t) = dD/dt by central difference.  Positive sigma on an
// interval witnesses information backflow (non-Markovianity).
inline double blp_sigma(const NoiseModel& model, const WeakMeasConfig& cfg, double t, double dt) {
    if (!(dt > 0.0) || !(t >= dt)) throw InvalidParams("blp_sigma: requires t >= dt > 0");
    if (dt > 1e-2 / characteristic_rate(model))
        throw StepTooLarge("blp_sigma: dt exceeds 1% of the characteristic time");
    return (blp_distance(model, cfg, t + dt) - blp_distance(model, cfg, t - dt)) / (2.0 * dt);
}

// Closed-form concurrence of the one-sided ADC-family protocol output:
//   sqrt((1-w)(1-wr)(1-p)) sin(2 theta) / [(1-wr)cos^2 + (1-w)(1-wr p)sin^2].
inline double closed_form_concurrence_adc(double theta, double w, double wr, double p) {
    const double num = std::sqrt((1.0 - w) * (1.0 - wr) * (1.0 - p)) * std::sin(2.0 * theta);
    return num / success_prob_adc_closed(theta, w, wr, p);
}

// Closed-form concurrence of the one-sided unital protocol output:
//   2 sqrt((1-w)(1-wr)) sin(2 theta) p / [(1-w) + (1-wr) - (wr-w)cos(2 theta)].
// For RTN the retention factor p may be negative; the physical coherence is
// |rho_14|, so callers compare against |p| (concurrence is nonnegative).
inline double closed_form_concurrence_unital(double theta, double w, double wr, double p) {
    const double num = 2.0 * std::sqrt((1.0 - w) * (1.0 - wr)) * std::sin(2.0 * theta) * p;
    const double den = (1.0 - w) + (1.0 - wr) - (wr - w) * std::cos(2.0 * theta);
    return num / den;
}

}  // namespace telewm
