#pragma once

// Two-qubit states and state-level diagnostics.
//
// Conventions used throughout the library:
//  * computational basis ordering |00>, |01>, |10>, |11>;
//  * qubit 1 (first tensor slot) is the qubit kept at the sender ("home"),
//    qubit 2 (second slot) is the qubit sent through the noisy channel
//    ("travel");
//  * the Bell-type resource family is cos(theta)|00> + sin(theta)|11>.

#include <array>
#include <cmath>

#include "telewm/matkernel.hpp"

namespace telewm {

namespace tol {
inline constexpr double kTraceOne = 1e-10;
inline constexpr double kMinEig = -1e-10;
}  // namespace tol

inline const Mat& pauli(int i) {
    static const std::array<Mat, 4> sigma = {
        Mat::from_rows({{1.0, 0.0}, {0.0, 1.0}}),
        Mat::from_rows({{0.0, 1.0}, {1.0, 0.0}}),
        Mat::from_rows({{0.0, cx{0.0, -1.0}}, {cx{0.0, 1.0}, 0.0}}),
        Mat::from_rows({{1.0, 0.0}, {0.0, -1.0}}),
    };
    return sigma[static_cast<std::size_t>(i)];
}

struct Diagnostics {
    double hermiticity_defect;
    double trace_defect;   // |tr(rho) - 1|
    double min_eigenvalue;
    bool ok(double herm_tol = tol::kHermitian, double trace_tol = tol::kTraceOne,
            double eig_tol = tol::kMinEig) const {
        return hermiticity_defect <= herm_tol && trace_defect <= trace_tol &&
               min_eigenvalue >= eig_tol;
    }
};

// Non-throwing physicality report for a candidate 4x4 density matrix.
inline Diagnostics diagnose(const Mat& rho) {
    Diagnostics d{};
    d.hermiticity_defect = rho.hermiticity_defect();
    d.trace_defect = std::abs(rho.trace() - cx{1.0, 0.0});
    if (d.hermiticity_defect <= tol::kHermitian) {
        EigResult e = hermitian_eig(rho);
        d.min_eigenvalue = e.values.back();
    } else {
        d.min_eigenvalue = -1.0;  // not meaningful without Hermiticity
    }
    return d;
}

// A validated two-qubit density matrix.  Construction enforces Hermiticity
// (1e-10 entrywise), unit trace (1e-10) and positivity (eigenvalues >= -1e-10);
// violations raise InvalidState.
class TwoQubitState {
  public:
    explicit TwoQubitState(Mat rho) : rho_(std::move(rho)) {
        if (rho_.dim() != 4) throw InvalidParams("TwoQubitState: dimension must be 4");
        if (!rho_.all_finite()) throw NonFinite("TwoQubitState: non-finite entry");
        Diagnostics d = diagnose(rho_);
        if (!d.ok()) throw InvalidState("TwoQubitState: matrix fails density-matrix checks");
    }

    const Mat& rho() const { return rho_; }
    Diagnostics diagnostics() const { return diagnose(rho_); }

  private:
    Mat rho_;
};

struct BellTypeParams {
    double theta = M_PI / 4.0;
};

// cos(theta)|00> + sin(theta)|11> as a density matrix.  theta must lie in
// (0, pi/2): the endpoints give product states outside the resource family.
inline TwoQubitState bell_type(const BellTypeParams& p) {
    if (!std::isfinite(p.theta)) throw NonFinite("bell_type: theta must be finite");
    if (p.theta <= 0.0 || p.theta >= M_PI / 2.0)
        throw OutOfRange("bell_type: theta must lie in (0, pi/2)");
    const double c = std::cos(p.theta), s = std::sin(p.theta);
    Mat rho(4);
    rho(0, 0) = c * c;
    rho(3, 3) = s * s;
    rho(0, 3) = rho(3, 0) = c * s;
    return TwoQubitState(rho);
}

// |b1 b2><b1 b2| computational basis projector.
inline TwoQubitState basis_state(int b1, int b2) {
    if (b1 < 0 || b1 > 1 || b2 < 0 || b2 > 1)
        throw InvalidParams("basis_state: bits must be 0 or 1");
    Mat rho(4);
    rho(2 * b1 + b2, 2 * b1 + b2) = 1.0;
    return TwoQubitState(rho);
}

inline TwoQubitState maximally_mixed() {
    Mat rho(4);
    for (int i = 0; i < 4; ++i) rho(i, i) = 0.25;
    return TwoQubitState(rho);
}

// Correlation matrix T_ij = tr(rho sigma_i (x) sigma_j), i,j in {x,y,z},
// together with its eigenvalues t_ii (descending).  Every state reachable in
// this artifact has diagonal T; for safety the eigenvalues are taken from the
// symmetrized (T+T^t)/2 after checking the asymmetry is below tolerance.
struct CorrelationMatrix {
    std::array<std::array<double, 3>, 3> t;
    std::array<double, 3> diag_eigs;
};

inline CorrelationMatrix correlation_matrix(const TwoQubitState& state) {
    CorrelationMatrix out{};
    const Mat& rho = state.rho();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const Mat op = tensor(pauli(i + 1), pauli(j + 1));
            const cx val = (rho * op).trace();
            // tr(rho H) for Hermitian H is real; imaginary residue is noise.
            out.t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = val.real();
        }
    double asym = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            asym = std::max(asym, std::abs(out.t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -
                                           out.t[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]));
    if (asym > tol::kHermitian)
        throw AsymmetricCorrelation(
            "correlation_matrix: T is not symmetric; eigenvalue convention undefined here");
    Mat sym(3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            sym(i, j) = 0.5 * (out.t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +
                               out.t[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]);
    EigResult e = hermitian_eig(sym);
    for (int k = 0; k < 3; ++k)
        out.diag_eigs[static_cast<std::size_t>(k)] = e.values[static_cast<std::size_t>(k)];
    return out;
}

// True when rho is an X-state: all entries outside the main and anti diagonal
// vanish (within tolerance).
inline bool is_x_state(const Mat& rho, double tolerance = 1e-12) {
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            if (i == j || i + j == 3) continue;
            if (std::abs(rho(i, j)) > tolerance) return false;
        }
    return true;
}

}  // namespace telewm
