#pragma once

// Scenario drivers: time sweeps over the protocol pipeline, (theta, t) grids,
// the zero-fidelity-deviation root finder, the Monte-Carlo teleportation
// oracle, and trace-distance / BLP series for the fixed |00> vs Bell pair.

#include <atomic>
#include <functional>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "telewm/metrics.hpp"
#include "telewm/rng.hpp"

namespace telewm {

namespace tol {
// A root of g(t) = |t11| - |t33| counts as a zero-deviation time only if the
// deviation there is below this.
inline constexpr double kZeroDevAccept = 1e-8;
// When no root is found, the bracket is reported "unreachable" only if the
// minimum deviation stays above this floor.
inline constexpr double kZeroDevFloor = 1e-3;
// Bisection stops when the bracket is narrower than this.
inline constexpr double kBisectWidth = 1e-10;
}  // namespace tol

// Evenly spaced grid including both endpoints.
inline std::vector<double> linspace(double start, double stop, int points) {
    if (points < 1) throw InvalidParams("linspace: points must be >= 1");
    if (points == 1) return {start};
    std::vector<double> ts(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
        ts[static_cast<std::size_t>(i)] =
            start + (stop - start) * static_cast<double>(i) / static_cast<double>(points - 1);
    return ts;
}

struct Scenario {
    std::string name;
    double theta = M_PI / 4.0;
    WeakMeasConfig cfg;
    NoiseModel model;
    std::vector<double> t_grid;
    std::optional<std::uint64_t> seed;  // Monte-Carlo commands only
};

inline void validate_scenario(const Scenario& s) {
    if (s.t_grid.empty()) throw InvalidParams("scenario '" + s.name + "': empty t_grid");
    if (s.t_grid.front() != 0.0)
        throw InvalidParams("scenario '" + s.name + "': t_grid must start at 0");
    for (std::size_t i = 1; i < s.t_grid.size(); ++i)
        if (!(s.t_grid[i] > s.t_grid[i - 1]))
            throw InvalidParams("scenario '" + s.name + "': t_grid must be strictly increasing");
}

struct MetricSeries {
    Scenario scenario;
    std::vector<MetricRecord> records;
};

// Evaluate the full metric record at every grid time.
inline MetricSeries time_sweep(const Scenario& s) {
    validate_scenario(s);
    MetricSeries out{s, {}};
    out.records.reserve(s.t_grid.size());
    const TwoQubitState input = bell_type({s.theta});
    for (double t : s.t_grid) {
        try {
            out.records.push_back(metric_record(run_protocol(input, s.cfg, s.model, t), t));
        } catch (const SuccessProbTooSmall&) {
            std::ostringstream msg;
            msg << "time_sweep '" << s.name << "': post-selection trace vanished at t=" << t;
            throw SuccessProbTooSmall(msg.str());
        }
    }
    return out;
}

struct GridRow {
    double theta;
    double t;
    double fidelity;
    double fidelity_deviation;
};

// Row-major (theta outer, t inner) fidelity / deviation table.
inline std::vector<GridRow> grid_sweep(const std::vector<double>& theta_grid,
                                       const std::vector<double>& t_grid,
                                       const WeakMeasConfig& cfg, const NoiseModel& model) {
    if (theta_grid.empty() || t_grid.empty()) throw InvalidParams("grid_sweep: empty grid");
    std::vector<GridRow> rows;
    rows.reserve(theta_grid.size() * t_grid.size());
    for (double theta : theta_grid) {
        const TwoQubitState input = bell_type({theta});
        for (double t : t_grid) {
            const ProtocolOutcome out = run_protocol(input, cfg, model, t);
            rows.push_back(GridRow{theta, t, fidelity(out.state), fidelity_deviation(out.state)});
        }
    }
    return rows;
}

struct ZeroDevResult {
    std::optional<double> t_star;  // zero-deviation time, if one was found
    double dev_at_star = 0.0;      // deviation at t_star (when found)
    double min_dev = 0.0;          // minimum deviation seen over the scan
    double min_dev_t = 0.0;        // where that minimum occurred
};

// Search the bracket for a time where the fidelity deviation vanishes.  The
// protocol output is an X-state with |t11| = |t22|, so the deviation is zero
// exactly when g(t) = |t11(t)| - |t33(t)| crosses zero; the scan looks for a
// sign change of g and polishes it by bisection.  A boundary hit (g = 0 and
// deviation already below tolerance at the left edge) is reported directly.
inline ZeroDevResult find_zero_deviation(double theta, const WeakMeasConfig& cfg,
                                         const NoiseModel& model,
                                         std::pair<double, double> t_bracket,
                                         int scan_points = 501) {
    if (!(t_bracket.first >= 0.0) || !(t_bracket.second > t_bracket.first))
        throw InvalidBracket("find_zero_deviation: need 0 <= t_lo < t_hi");
    if (scan_points < 2) throw InvalidParams("find_zero_deviation: scan_points must be >= 2");

    const TwoQubitState input = bell_type({theta});
    const auto probe = [&](double t) {
        const ProtocolOutcome out = run_protocol(input, cfg, model, t);
        const CorrelationMatrix corr = correlation_matrix(out.state);
        const double g = std::abs(corr.t[0][0]) - std::abs(corr.t[2][2]);
        return std::make_pair(g, fidelity_deviation(out.state));
    };

    const std::vector<double> ts = linspace(t_bracket.first, t_bracket.second, scan_points);
    std::vector<double> gs(ts.size()), devs(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const auto [g, dev] = probe(ts[i]);
        gs[i] = g;
        devs[i] = dev;
    }

    ZeroDevResult res;
    res.min_dev = devs[0];
    res.min_dev_t = ts[0];
    for (std::size_t i = 1; i < ts.size(); ++i)
        if (devs[i] < res.min_dev) {
            res.min_dev = devs[i];
            res.min_dev_t = ts[i];
        }

    // Degenerate case: already at zero deviation on the left edge.
    if (std::abs(gs[0]) < 1e-14 && devs[0] < tol::kZeroDevAccept) {
        res.t_star = ts[0];
        res.dev_at_star = devs[0];
        return res;
    }

    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
        double candidate;
        if (gs[i] == 0.0 && i > 0) {
            candidate = ts[i];
        } else if (gs[i] * gs[i + 1] < 0.0) {
            double lo = ts[i], hi = ts[i + 1];
            double glo = gs[i];
            while (hi - lo > tol::kBisectWidth) {
                const double mid = 0.5 * (lo + hi);
                const double gm = probe(mid).first;
                if (gm == 0.0) {
                    lo = hi = mid;
                } else if ((gm > 0.0) == (glo > 0.0)) {
                    lo = mid;
                    glo = gm;
                } else {
                    hi = mid;
                }
            }
            candidate = 0.5 * (lo + hi);
        } else {
            continue;
        }
        const double dev = probe(candidate).second;
        if (dev < tol::kZeroDevAccept) {
            res.t_star = candidate;
            res.dev_at_star = dev;
            return res;
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// Monte-Carlo teleportation oracle
// ---------------------------------------------------------------------------

// The 24-element single-qubit Clifford group, generated once from H and S
// with global phase canonicalized (first non-negligible entry made real
// positive).
inline const std::vector<Mat>& clifford_group() {
    static const std::vector<Mat> group = [] {
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        const Mat h = Mat::from_rows({{inv_sqrt2, inv_sqrt2}, {inv_sqrt2, -inv_sqrt2}});
        const Mat s = Mat::from_rows({{1.0, 0.0}, {0.0, cx{0.0, 1.0}}});
        const auto canonical = [](Mat m) {
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    if (std::abs(m(i, j)) > 1e-8) {
                        const cx phase = m(i, j) / std::abs(m(i, j));
                        return m * (cx{1.0, 0.0} / phase);
                    }
            return m;
        };
        std::vector<Mat> found{canonical(Mat::identity(2))};
        const auto known = [&](const Mat& m) {
            for (const Mat& f : found)
                if ((f - m).max_abs() < 1e-9) return true;
            return false;
        };
        for (std::size_t i = 0; i < found.size(); ++i)
            for (const Mat* gen : {&h, &s}) {
                const Mat cand = canonical(*gen * found[i]);
                if (!known(cand)) found.push_back(cand);
            }
        if (found.size() != 24)
            throw Error("clifford_group: closure produced " + std::to_string(found.size()) +
                        " elements instead of 24");
        return found;
    }();
    return group;
}

struct McResult {
    double mean = 0.0;
    double std_error = 0.0;
};

// Average teleportation fidelity of the resource state, estimated over
// Haar-random pure inputs through the standard circuit: Bell measurement on
// (input, home), conditional Pauli correction on travel, and the best fixed
// single-qubit Clifford applied by the receiver.  Returns the best Clifford's
// mean overlap and its standard error.
inline McResult mc_teleportation_fidelity(const TwoQubitState& resource, int n_samples,
                                          std::uint64_t seed) {
    if (n_samples < 1000) throw InvalidParams("mc_teleportation_fidelity: n_samples must be >= 1000");
    const Mat& rho = resource.rho();
    const std::vector<Mat>& cliffords = clifford_group();
    const std::size_t n_cliff = cliffords.size();

    // Bell basis on (input, home): Phi+, Phi-, Psi+, Psi-.
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const cx bell[4][4] = {
        {inv_sqrt2, 0.0, 0.0, inv_sqrt2},
        {inv_sqrt2, 0.0, 0.0, -inv_sqrt2},
        {0.0, inv_sqrt2, inv_sqrt2, 0.0},
        {0.0, inv_sqrt2, -inv_sqrt2, 0.0},
    };
    // Pauli correction on the travel qubit per Bell outcome.
    const Mat corrections[4] = {Mat::identity(2), pauli(3), pauli(1), pauli(1) * pauli(3)};

    // Receiver basis change y = V^dagger |chi> per Clifford, recomputed per
    // sample; the per-Clifford running sums pick the best strategy at the end.
    std::vector<double> sum(n_cliff, 0.0), sumsq(n_cliff, 0.0);

    for (int i = 0; i < n_samples; ++i) {
        CounterRng rng(seed, static_cast<std::uint64_t>(i));
        cx chi[2] = {rng.complex_normal(), rng.complex_normal()};
        const double nrm = std::sqrt(std::norm(chi[0]) + std::norm(chi[1]));
        chi[0] /= nrm;
        chi[1] /= nrm;

        // Collapse amplitudes A_k(m) = <B_k| (|chi> (x) |m>) and the four
        // corrected (unnormalized) receiver states.
        Mat outs[4] = {Mat(2), Mat(2), Mat(2), Mat(2)};
        for (int k = 0; k < 4; ++k) {
            cx amp[2];
            for (int m = 0; m < 2; ++m)
                amp[m] = std::conj(bell[k][0 * 2 + m]) * chi[0] + std::conj(bell[k][1 * 2 + m]) * chi[1];
            Mat collapsed(2);
            for (int n = 0; n < 2; ++n)
                for (int np = 0; np < 2; ++np) {
                    cx acc{0.0, 0.0};
                    for (int m = 0; m < 2; ++m)
                        for (int mp = 0; mp < 2; ++mp)
                            acc += amp[m] * std::conj(amp[mp]) * rho(2 * m + n, 2 * mp + np);
                    collapsed(n, np) = acc;
                }
            outs[k] = sandwich(corrections[k], collapsed);
        }

        for (std::size_t v = 0; v < n_cliff; ++v) {
            const Mat& cl = cliffords[v];
            // y = V^dagger chi
            const cx y0 = std::conj(cl(0, 0)) * chi[0] + std::conj(cl(1, 0)) * chi[1];
            const cx y1 = std::conj(cl(0, 1)) * chi[0] + std::conj(cl(1, 1)) * chi[1];
            double f = 0.0;
            for (const Mat& out : outs) {
                const cx val = std::conj(y0) * (out(0, 0) * y0 + out(0, 1) * y1) +
                               std::conj(y1) * (out(1, 0) * y0 + out(1, 1) * y1);
                f += val.real();
            }
            sum[v] += f;
            sumsq[v] += f * f;
        }
    }

    McResult best;
    const double n = static_cast<double>(n_samples);
    for (std::size_t v = 0; v < n_cliff; ++v) {
        const double mean = sum[v] / n;
        if (v == 0 || mean > best.mean) {
            const double var = std::max(0.0, (sumsq[v] - n * mean * mean) / std::max(1.0, n - 1.0));
            best.mean = mean;
            best.std_error = std::sqrt(var / n);
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Trace-distance / BLP series
// ---------------------------------------------------------------------------

struct BlpRow {
    double t = 0.0;
    double distance = 0.0;    // D(rho1(t), rho2(t))
    double sigma = 0.0;       // dD/dt
    double sigma_plus = 0.0;  // max(sigma, 0), the backflow part
};

// D and sigma for the fixed |00> vs Bell pair on the given grid.  sigma uses
// the central difference except on t < dt where only the forward difference
// is defined.
inline std::vector<BlpRow> blp_series(const NoiseModel& model, const WeakMeasConfig& cfg,
                                      const std::vector<double>& t_grid, double dt = 1e-3) {
    if (t_grid.empty()) throw InvalidParams("blp_series: empty t_grid");
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (!(t_grid[i] >= 0.0)) throw InvalidParams("blp_series: times must be >= 0");
        if (i > 0 && !(t_grid[i] > t_grid[i - 1]))
            throw InvalidParams("blp_series: t_grid must be strictly increasing");
    }
    if (!(dt > 0.0)) throw InvalidParams("blp_series: dt must be > 0");
    if (dt > 1e-2 / characteristic_rate(model))
        throw StepTooLarge("blp_series: dt exceeds 1% of the characteristic time");

    std::vector<BlpRow> rows;
    rows.reserve(t_grid.size());
    for (double t : t_grid) {
        BlpRow row;
        row.t = t;
        row.distance = blp_distance(model, cfg, t);
        if (t >= dt)
            row.sigma = blp_sigma(model, cfg, t, dt);
        else
            row.sigma = (blp_distance(model, cfg, t + dt) - row.distance) / dt;
        row.sigma_plus = std::max(row.sigma, 0.0);
        rows.push_back(row);
    }
    return rows;
}

// Integrated backflow over the sampled grid (trapezoid rule on sigma_plus); a
// convenience summary of the series.
inline double blp_nonmarkovianity(const std::vector<BlpRow>& rows) {
    double acc = 0.0;
    for (std::size_t i = 1; i < rows.size(); ++i)
        acc += 0.5 * (rows[i].sigma_plus + rows[i - 1].sigma_plus) * (rows[i].t - rows[i - 1].t);
    return acc;
}

// ---------------------------------------------------------------------------
// Worker pool
// ---------------------------------------------------------------------------

// Run fn(0..n-1) across up to `workers` threads.  Work items must be
// independent; the first exception (by completion order) is rethrown after
// all threads join.  Callers write into pre-sized slots so merged results are
// ordered deterministically regardless of scheduling.
inline void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
    if (n <= 0) return;
    if (workers <= 1 || n == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::mutex err_mutex;
    std::exception_ptr first_error;
    const int n_threads = std::min(workers, n);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int th = 0; th < n_threads; ++th)
        pool.emplace_back([&] {
            for (int i; (i = next.fetch_add(1)) < n;) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    for (std::thread& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace telewm
