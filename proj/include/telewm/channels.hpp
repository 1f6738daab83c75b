#pragma once

// Noise-channel catalog: time-dependent noise functions p(t), Kraus sets,
// one-sided application to the travel qubit, and the correlated amplitude
// damping (CADC) composite map with memory factor q.
//
// Sign conventions: for the amplitude-damping families (ADC, NM_ADC, CADC)
// p(t) in [0,1] is a decay probability with p(0)=0; for the unital families
// (RTN, OUN, PLN) p(t) in [-1,1] is a coherence retention factor with p(0)=1
// (RTN may oscillate below zero in its non-Markovian regime).

#include <cmath>
#include <string>
#include <vector>

#include "telewm/states.hpp"

namespace telewm {

enum class Family { ADC, NM_ADC, RTN, OUN, PLN, CADC };

inline const char* family_name(Family f) {
    switch (f) {
        case Family::ADC: return "ADC";
        case Family::NM_ADC: return "NM_ADC";
        case Family::RTN: return "RTN";
        case Family::OUN: return "OUN";
        case Family::PLN: return "PLN";
        case Family::CADC: return "CADC";
    }
    return "?";
}

struct NoiseModel {
    Family family = Family::ADC;
    double gamma = 0.0;   // ADC/CADC decay rate; RTN/OUN/PLN fluctuation rate
    double gamma0 = 0.0;  // NM_ADC coupling rate
    double k = 0.0;       // NM_ADC spectral width
    double a = 0.0;       // RTN/OUN/PLN coupling strength
    double q = 0.0;       // CADC memory factor

    static NoiseModel adc(double gamma) {
        if (!(gamma >= 0.0)) throw InvalidParams("ADC: gamma must be >= 0");
        NoiseModel m;
        m.family = Family::ADC;
        m.gamma = gamma;
        return m;
    }
    static NoiseModel nm_adc(double gamma0, double k) {
        if (!(gamma0 > 0.0) || !(k > 0.0)) throw InvalidParams("NM_ADC: gamma0 and k must be > 0");
        if (2.0 * gamma0 <= k)
            throw InvalidParams("NM_ADC: requires 2*gamma0 > k so that l = sqrt(2*gamma0*k - k^2) is real");
        NoiseModel m;
        m.family = Family::NM_ADC;
        m.gamma0 = gamma0;
        m.k = k;
        return m;
    }
    static NoiseModel rtn(double a, double gamma) { return unital(Family::RTN, a, gamma); }
    static NoiseModel oun(double a, double gamma) { return unital(Family::OUN, a, gamma); }
    static NoiseModel pln(double a, double gamma) { return unital(Family::PLN, a, gamma); }
    static NoiseModel cadc(double gamma, double q) {
        if (!(gamma >= 0.0)) throw InvalidParams("CADC: gamma must be >= 0");
        if (!(q >= 0.0 && q <= 1.0)) throw InvalidParams("CADC: q must lie in [0,1]");
        NoiseModel m;
        m.family = Family::CADC;
        m.gamma = gamma;
        m.q = q;
        return m;
    }

    bool is_unital() const {
        return family == Family::RTN || family == Family::OUN || family == Family::PLN;
    }
    bool is_damping() const { return !is_unital(); }

  private:
    static NoiseModel unital(Family f, double a, double gamma) {
        if (!(a >= 0.0) || !(gamma > 0.0))
            throw InvalidParams(std::string(family_name(f)) + ": requires a >= 0 and gamma > 0");
        NoiseModel m;
        m.family = f;
        m.a = a;
        m.gamma = gamma;
        return m;
    }
};

// Noise function p(t) for each family (see the convention note above).
inline double noise_function(const NoiseModel& model, double t) {
    if (!(t >= 0.0)) throw InvalidParams("noise_function: t must be >= 0");
    switch (model.family) {
        case Family::ADC:
        case Family::CADC: {
            double p = 1.0 - std::exp(-model.gamma * t);
            if (p < 0.0 && p > -1e-12) p = 0.0;
            return p;
        }
        case Family::NM_ADC: {
            // Damped Jaynes-Cummings envelope: l = sqrt(2*gamma0*k - k^2),
            // p = 1 - e^{-kt} (cos(lt/2) + (k/l) sin(lt/2))^2.
            const double l = std::sqrt(2.0 * model.gamma0 * model.k - model.k * model.k);
            const double br = std::cos(0.5 * l * t) + (model.k / l) * std::sin(0.5 * l * t);
            double p = 1.0 - std::exp(-model.k * t) * br * br;
            if (p < 0.0 && p > -1e-12) p = 0.0;
            if (p > 1.0 && p < 1.0 + 1e-12) p = 1.0;
            return p;
        }
        case Family::OUN:
            return std::exp(-(model.a / 2.0) *
                            (t + (1.0 / model.gamma) * (std::exp(-model.gamma * t) - 1.0)));
        case Family::PLN: {
            const double g = model.gamma;
            return std::exp(-t * (t * g + 2.0) * model.a * g / (2.0 * (t * g + 1.0) * (t * g + 1.0)));
        }
        case Family::RTN: {
            const double ratio = 2.0 * model.a / model.gamma;
            const double x = model.gamma * t;
            if (std::abs(ratio - 1.0) <= 1e-12) {
                // omega -> 0 limit of both branches.
                return std::exp(-x) * (1.0 + x);
            }
            if (ratio > 1.0) {
                const double omega = std::sqrt(ratio * ratio - 1.0);
                return std::exp(-x) * (std::cos(omega * x) + std::sin(omega * x) / omega);
            }
            // Markovian regime: omega imaginary, continue analytically with
            // Omega = sqrt(1 - ratio^2) so p stays manifestly real.
            const double cap = std::sqrt(1.0 - ratio * ratio);
            return std::exp(-x) * (std::cosh(cap * x) + std::sinh(cap * x) / cap);
        }
    }
    throw InvalidParams("noise_function: unknown family");
}

struct KrausSet {
    std::vector<Mat> operators;

    // max entrywise |sum K^dagger K - I|
    double completeness_defect() const {
        if (operators.empty()) return 1.0;
        const int n = operators.front().dim();
        Mat acc(n);
        for (const Mat& kop : operators) acc = acc + kop.adjoint() * kop;
        return (acc - Mat::identity(n)).max_abs();
    }
};

// Single-qubit Kraus operators at time t.  ADC/NM_ADC share the
// amplitude-damping form with their own p(t); the unital families share
// {sqrt((1+p)/2) I, sqrt((1-p)/2) sigma_z}.  CADC has no single-qubit set
// (see apply_cadc).
inline KrausSet kraus_at(const NoiseModel& model, double t) {
    const double p = noise_function(model, t);
    KrausSet ks;
    switch (model.family) {
        case Family::ADC:
        case Family::NM_ADC: {
            Mat k0(2), k1(2);
            k0(0, 0) = 1.0;
            k0(1, 1) = std::sqrt(1.0 - p);
            k1(0, 1) = std::sqrt(p);
            ks.operators = {k0, k1};
            return ks;
        }
        case Family::RTN:
        case Family::OUN:
        case Family::PLN: {
            Mat k0 = std::sqrt((1.0 + p) / 2.0) * Mat::identity(2);
            Mat k1 = std::sqrt((1.0 - p) / 2.0) * pauli(3);
            ks.operators = {k0, k1};
            return ks;
        }
        case Family::CADC:
            throw UnsupportedFamily("kraus_at: CADC acts on both qubits; use apply_cadc");
    }
    throw InvalidParams("kraus_at: unknown family");
}

// Lambda(rho) = sum_i (I (x) K_i) rho (I (x) K_i)^dagger on a raw matrix
// (used inside the post-selection pipeline where the input is unnormalized).
inline Mat apply_one_sided_raw(const Mat& rho, const KrausSet& ks) {
    if (ks.completeness_defect() > tol::kHermitian)
        throw IncompleteKraus("apply_one_sided: Kraus set violates completeness");
    Mat out(4);
    const Mat eye = Mat::identity(2);
    for (const Mat& kop : ks.operators) {
        const Mat lifted = tensor(eye, kop);
        out = out + sandwich(lifted, rho);
    }
    return out;
}

inline TwoQubitState apply_one_sided(const TwoQubitState& state, const KrausSet& ks) {
    return TwoQubitState(apply_one_sided_raw(state.rho(), ks));
}

// CADC action on a raw matrix at damping probability p, memory factor q:
//   rho' = (1-q) sum_ij (K_i (x) K_j) rho (K_i (x) K_j)^dagger
//        + q [ E_0 rho E_0^dagger + E_1 rho E_1^dagger ]
// with E_0 = diag(1,1,1,sqrt(1-p)) and E_1 = sqrt(p) |00><11|.
inline Mat apply_cadc_raw(const Mat& rho, double p, double q) {
    Mat k0(2), k1(2);
    k0(0, 0) = 1.0;
    k0(1, 1) = std::sqrt(1.0 - p);
    k1(0, 1) = std::sqrt(p);
    Mat uncorr(4);
    const Mat kops[2] = {k0, k1};
    for (const Mat& ki : kops)
        for (const Mat& kj : kops) uncorr = uncorr + sandwich(tensor(ki, kj), rho);

    Mat e0 = Mat::identity(4);
    e0(3, 3) = std::sqrt(1.0 - p);
    Mat e1(4);
    e1(0, 3) = std::sqrt(p);
    const Mat corr = sandwich(e0, rho) + sandwich(e1, rho);

    return (1.0 - q) * uncorr + q * corr;
}

inline TwoQubitState apply_cadc(const TwoQubitState& state, const NoiseModel& model, double t) {
    if (model.family != Family::CADC) throw InvalidParams("apply_cadc: model must be CADC");
    const double p = noise_function(model, t);
    return TwoQubitState(apply_cadc_raw(state.rho(), p, model.q));
}

}  // namespace telewm
