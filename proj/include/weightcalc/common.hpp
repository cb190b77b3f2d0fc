#ifndef WEIGHTCALC_COMMON_HPP
#define WEIGHTCALC_COMMON_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace weightcalc {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Evaluation requested beyond the validated domain of a weight function or
// beyond the truncation that can witness a supremum.
class DomainExceeded : public Error {
public:
    using Error::Error;
};

// A maximization landed on the boundary of the search interval; the result
// would be truncation-biased.
class ArgmaxOnBoundary : public Error {
public:
    using Error::Error;
};

// Series evaluation requested outside the cancellation guard radius.
class ReliabilityExceeded : public Error {
public:
    using Error::Error;
};

// A tail bound needs more quotients than the truncation provides.
class TruncationInsufficient : public Error {
public:
    using Error::Error;
};

// The growth hypothesis behind the M^alpha construction failed for a row.
class GrowthGateFailed : public Error {
public:
    GrowthGateFailed(const std::string& msg, double row_param)
        : Error(msg), row(row_param) {}
    double row;
};

class OutsideSector : public Error {
public:
    using Error::Error;
};

class AdmissibilityFailed : public Error {
public:
    using Error::Error;
};

// No h on the configured grid certifies membership.
class NoFiniteH : public Error {
public:
    using Error::Error;
};

// Malformed construction input (bad parameters, bad spec).
class SpecError : public Error {
public:
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Run configuration
// ---------------------------------------------------------------------------

struct Config {
    int default_n = 64;          // default truncation length
    int max_n = 1024;            // hard cap for O(N) / O(N^2) operations
    int max_n_cubic = 512;       // cap for the O(N^3) composition DP
    int fdb_truncation = 512;    // truncation actually used by matrix FdB scans

    // Asymptotic-verdict heuristics (see ConditionReport).  Witnessed when the
    // trace is flat within tau_stab (relative, floored at 1); failed when it
    // grows by more than tau_grow per doubling of the truncation.
    double tau_stab = 0.05;
    double tau_grow = 0.25;
    // Root-almost-increasing style traces live on a much finer scale (their
    // witnessed cases are exactly flat), so they get sharper thresholds.
    double tau_rai_stab = 0.003;
    double tau_rai_grow = 0.008;
    // Limit-to-zero traces: witnessed when the tail halves fast enough.
    double tau_zero = 0.7;

    // Growth-index machinery.
    double gamma_max = 16.0;     // +infinity sentinel cap
    double gamma_bracket = 1.0 / 64;
    double tau_p_gamma = 0.01;   // slope tolerance for the P_gamma test
    double tau_margin = 0.02;    // strictness margin in P_{omega,gamma}
    std::vector<double> k_grid = {2, 4, 8, 16};

    // Growth gate for the M^alpha construction / triviality screen.
    double tau_gate = 0.01;

    // Weight-function evaluation.
    double probe_t_max = 1e8;    // window for asymptotic condition checks
    int grid_per_decade = 512;
    std::vector<double> ell_grid = {0.25, 0.5, 1.0, 2.0, 4.0};
    double lambda_max = 65536;   // (alpha_0) lambda scan bound

    // Analytic module.
    double z_reliable = 30.0;    // Mittag-Leffler series guard
    double eps_term = 1e-14;     // series term stopping ratio
    double quad_tol = 1e-10;     // adaptive Simpson tolerance (relative)
    double epsilon = 1e-10;      // default transform tail target

    // Membership certificates.
    double h_grid_min = 1.0 / 1024;
    double h_grid_max = 64.0;
    double h_grid_factor = 2.0;
    double membership_cap = 1e4;

    // Gevrey stability map.
    int map_n = 1024;
    int map_fdb_n = 64;
};

inline const Config& default_config() {
    static const Config cfg{};
    return cfg;
}

// ---------------------------------------------------------------------------
// Condition reports
// ---------------------------------------------------------------------------

enum class Verdict { WitnessedUpToN, FailsAtTruncation, Undetermined };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::WitnessedUpToN: return "WitnessedUpToN";
        case Verdict::FailsAtTruncation: return "FailsAtTruncation";
        default: return "Undetermined";
    }
}

// Verdict + witness constants + the raw constant-vs-truncation trace for any
// "exists C, for all j" style condition.  Witness constants are log-domain
// unless the key says otherwise.
struct ConditionReport {
    std::string condition;
    Verdict verdict = Verdict::Undetermined;
    std::map<std::string, double> witness;
    std::vector<std::pair<double, double>> trace;  // (truncation J, value at J)
    std::optional<std::pair<int, int>> failure_site;
};

struct TracePolicy {
    double tau_stab = 0.05;  // flat within tau_stab * max(1, |half|)
    double tau_grow = 0.25;  // fails when growth per doubling exceeds this
};

inline TracePolicy generic_policy(const Config& cfg) {
    return {cfg.tau_stab, cfg.tau_grow};
}

inline TracePolicy rai_policy(const Config& cfg) {
    return {cfg.tau_rai_stab, cfg.tau_rai_grow};
}

// Trace values are minimal witness constants over a growing index set, hence
// nondecreasing in J.  Flat tail => witnessed up to N; increments decaying
// fast across doublings => the constant saturates toward a finite bound, also
// witnessed; sustained growth per doubling => the constant cannot stabilize
// at this truncation.
inline Verdict classify_trace(const std::vector<std::pair<double, double>>& trace,
                              const TracePolicy& pol) {
    if (trace.size() < 2) return Verdict::Undetermined;
    const std::size_t half_idx = trace.size() / 2 - (trace.size() % 2 == 0 ? 1 : 0);
    const double last = trace.back().second;
    const double half = trace[half_idx].second;
    const double first = trace.front().second;
    const double delta = last - half;
    if (delta <= pol.tau_stab * std::max(1.0, std::fabs(half))) {
        return Verdict::WitnessedUpToN;
    }
    const double prev_delta = half - first;
    if (prev_delta > 0.0 && delta <= 0.7 * prev_delta) {
        return Verdict::WitnessedUpToN;
    }
    if (delta > pol.tau_grow) return Verdict::FailsAtTruncation;
    return Verdict::Undetermined;
}

// Trace of suprema that must tend to zero (o(.) conditions).
inline Verdict classify_vanishing_trace(const std::vector<std::pair<double, double>>& trace,
                                        const Config& cfg) {
    if (trace.size() < 2) return Verdict::Undetermined;
    const double last = trace.back().second;
    const double half = trace[trace.size() / 2 - (trace.size() % 2 == 0 ? 1 : 0)].second;
    if (half <= 0) return last <= 0 ? Verdict::WitnessedUpToN : Verdict::Undetermined;
    const double ratio = last / half;
    if (ratio <= cfg.tau_zero) return Verdict::WitnessedUpToN;
    if (ratio >= 1.0 - cfg.tau_stab) return Verdict::FailsAtTruncation;
    return Verdict::Undetermined;
}

// Trace of quantities that must stay bounded below (liminf > 0 conditions).
inline Verdict classify_bounded_below_trace(const std::vector<std::pair<double, double>>& trace,
                                            const Config& cfg) {
    if (trace.size() < 2) return Verdict::Undetermined;
    const double last = trace.back().second;
    const double half = trace[trace.size() / 2 - (trace.size() % 2 == 0 ? 1 : 0)].second;
    const double drop = half - last;
    if (drop <= cfg.tau_stab * std::max(1.0, std::fabs(half))) {
        return Verdict::WitnessedUpToN;
    }
    if (drop > cfg.tau_grow) return Verdict::FailsAtTruncation;
    return Verdict::Undetermined;
}

// Quarter / half / three-quarter / full truncations used by every trace.
inline std::vector<int> trace_truncations(int n) {
    std::vector<int> out = {std::max(2, n / 4), std::max(3, n / 2),
                            std::max(4, 3 * n / 4), n};
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Deterministic parallel-for (WEIGHTCALC_THREADS caps the worker count).
// Results must be written to disjoint, index-addressed slots so the output is
// identical for any thread count.
// ---------------------------------------------------------------------------

inline int configured_threads() {
    if (const char* env = std::getenv("WEIGHTCALC_THREADS")) {
        const int k = std::atoi(env);
        if (k >= 1) return k;
    }
    return 1;
}

inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    const int threads = std::min<int>(configured_threads(), static_cast<int>(count));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&]() {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                body(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace weightcalc

#endif  // WEIGHTCALC_COMMON_HPP
