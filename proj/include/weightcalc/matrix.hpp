#ifndef WEIGHTCALC_MATRIX_HPP
#define WEIGHTCALC_MATRIX_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "weightcalc/common.hpp"
#include "weightcalc/sequence.hpp"
#include "weightcalc/weight_function.hpp"

namespace weightcalc {

// ---------------------------------------------------------------------------
// WeightMatrix: an ordered finite family of weight sequences indexed by a
// strictly increasing positive parameter grid, pointwise monotone in the
// parameter.  A finite grid stands in for the continuum index set, so
// every "exists beta" search below is grid-limited.
// ---------------------------------------------------------------------------

enum class MatrixOrigin { Explicit, FromOmega, Constant, PowerFamily };

class WeightMatrix {
public:
    WeightMatrix(std::vector<double> params, std::vector<WeightSequence> rows,
                 MatrixOrigin origin = MatrixOrigin::Explicit)
        : params_(std::move(params)), rows_(std::move(rows)), origin_(origin) {
        if (params_.empty() || params_.size() != rows_.size()) {
            throw SpecError("weight matrix needs one row per grid parameter");
        }
        for (std::size_t i = 0; i + 1 < params_.size(); ++i) {
            if (!(params_[i] < params_[i + 1])) {
                throw SpecError("matrix parameter grid must strictly increase");
            }
        }
        for (const auto& p : params_) {
            if (!(p > 0.0)) throw SpecError("matrix parameters must be positive");
        }
        const int n = rows_.front().truncation();
        for (const auto& r : rows_) {
            if (r.truncation() != n) throw SpecError("matrix rows need a common truncation");
        }
        for (std::size_t i = 0; i + 1 < rows_.size(); ++i) {
            for (int j = 0; j <= n; ++j) {
                if (rows_[i].log_terms()[static_cast<std::size_t>(j)] >
                    rows_[i + 1].log_terms()[static_cast<std::size_t>(j)] + 1e-9) {
                    throw SpecError("matrix rows must be pointwise nondecreasing in the parameter");
                }
            }
        }
    }

    std::size_t size() const { return rows_.size(); }
    int truncation() const { return rows_.front().truncation(); }
    const std::vector<double>& params() const { return params_; }
    const WeightSequence& row(std::size_t i) const { return rows_[i]; }
    const std::vector<WeightSequence>& rows() const { return rows_; }
    MatrixOrigin origin() const { return origin_; }

private:
    std::vector<double> params_;
    std::vector<WeightSequence> rows_;
    MatrixOrigin origin_;
};

inline WeightMatrix make_constant_matrix(const WeightSequence& s, std::vector<double> grid) {
    std::vector<WeightSequence> rows(grid.size(), s);
    return WeightMatrix(std::move(grid), std::move(rows), MatrixOrigin::Constant);
}

// L^(beta) = { Gbar^{beta - 1/(p+1)} : p in grid }.
inline WeightMatrix make_power_family(double beta, std::vector<double> grid, int n) {
    std::vector<WeightSequence> rows;
    rows.reserve(grid.size());
    for (double p : grid) rows.push_back(WeightSequence::gevrey_bar(beta - 1.0 / (p + 1.0), n));
    return WeightMatrix(std::move(grid), std::move(rows), MatrixOrigin::PowerFamily);
}

// ---------------------------------------------------------------------------
// Matrix associated with a weight function: W^(l)_j = exp(phi*(l j) / l).
// Every produced row must be exactly log-convex (the conjugate is convex), and
// the sandwich l * omega_{W^(l)} <= omega <= 2 l * omega_{W^(l)} + D_l is
// verified on a t grid and attached to the result.
// ---------------------------------------------------------------------------

struct AssociatedMatrixResult {
    WeightMatrix matrix;
    std::map<double, ConditionReport> sandwich;  // keyed by l
};

inline AssociatedMatrixResult matrix_from_omega(const WeightFunction& w,
                                                std::vector<double> ell_grid, int n,
                                                const Config& cfg = default_config()) {
    if (ell_grid.empty()) throw SpecError("matrix_from_omega: empty ell grid");
    std::sort(ell_grid.begin(), ell_grid.end());
    std::vector<WeightSequence> rows;
    rows.reserve(ell_grid.size());
    for (double ell : ell_grid) {
        std::vector<double> lw(static_cast<std::size_t>(n) + 1, 0.0);
        for (int j = 1; j <= n; ++j) {
            lw[static_cast<std::size_t>(j)] = legendre_conjugate(w, ell * j, cfg) / ell;
        }
        WeightSequence row(std::move(lw), "W^(" + std::to_string(ell) + ")");
        const int bad = detail::lc_violation(row.log_terms(), 1e-9);
        if (bad != 0) {
            throw SpecError("matrix_from_omega: produced row is not log-convex (conjugate inaccuracy)");
        }
        rows.push_back(std::move(row));
    }
    AssociatedMatrixResult out{WeightMatrix(ell_grid, std::move(rows), MatrixOrigin::FromOmega), {}};

    for (std::size_t i = 0; i < ell_grid.size(); ++i) {
        const double ell = ell_grid[i];
        const WeightSequence& row = out.matrix.row(i);
        ConditionReport rep;
        rep.condition = "sandwich(l=" + std::to_string(ell) + ")";
        const double y_row = row.log_term(n) - row.log_term(n - 1);
        const double y_top = std::min({w.probe_y_max(cfg), y_row * 0.999});
        const int pts = 64;
        double worst_lower = 0.0;  // l*omega_row(t) - omega(t) must stay <= 0
        for (int q = 1; q <= 4; ++q) {
            double d_ell = 0.0;
            for (int k = 0; k <= pts; ++k) {
                const double y = y_top * (0.25 * q) * k / pts;
                const double om = w.phi(y);
                const double om_row = omega_of_sequence(row, std::exp(y));
                worst_lower = std::max(worst_lower, ell * om_row - om);
                d_ell = std::max(d_ell, om - 2.0 * ell * om_row);
            }
            rep.trace.emplace_back(std::exp(y_top * 0.25 * q), d_ell);
        }
        rep.witness["D_l"] = rep.trace.back().second;
        rep.witness["lower_violation"] = worst_lower;
        rep.verdict = (worst_lower <= 1e-6 &&
                       classify_trace(rep.trace, generic_policy(cfg)) == Verdict::WitnessedUpToN)
                          ? Verdict::WitnessedUpToN
                          : classify_trace(rep.trace, generic_policy(cfg));
        if (worst_lower > 1e-6) rep.verdict = Verdict::FailsAtTruncation;
        out.sandwich[ell] = rep;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Matrix-level conditions with the "exists beta in the grid" search.
// ---------------------------------------------------------------------------

enum class MatrixCondition {
    StandardLogConvex,     // (M_sc)
    LogConvex,             // (M_lc)
    RealAnalytic,          // (M_{C^omega}): some row has liminf (M̌_j)^{1/j} > 0
    ContainsHolomorphic,   // (M_H): every row does
    RootAlmostIncreasing,  // (M_{rai})
    FaaDiBruno,            // (M_{FdB})
    ModerateGrowth,        // (M_{mg})
    DerivationClosed       // (M_{dc})
};

inline const char* to_string(MatrixCondition c) {
    switch (c) {
        case MatrixCondition::StandardLogConvex: return "(M_sc)";
        case MatrixCondition::LogConvex: return "(M_lc)";
        case MatrixCondition::RealAnalytic: return "(M_{C^omega})";
        case MatrixCondition::ContainsHolomorphic: return "(M_H)";
        case MatrixCondition::RootAlmostIncreasing: return "(M_{rai})";
        case MatrixCondition::FaaDiBruno: return "(M_{FdB})";
        case MatrixCondition::ModerateGrowth: return "(M_{mg})";
        default: return "(M_{dc})";
    }
}

struct RowPairReport {
    double param = 0.0;
    std::optional<double> partner;  // the exists-beta witness, when found
    std::vector<std::pair<double, double>> trace;
    Verdict verdict = Verdict::Undetermined;
};

struct MatrixConditionReport {
    std::string condition;
    Verdict verdict = Verdict::Undetermined;
    std::map<double, double> pairing;          // p -> p'
    std::map<std::string, double> witness;     // per-pair constants, log-domain
    std::vector<RowPairReport> rows;
};

namespace detail {

// Minimal ln C at truncation J for the pairwise almost-increasing condition
// (M̌^(p)_j)^{1/j} <= C (M̌^(p')_k)^{1/k}, 1 <= j <= k <= J.
inline std::vector<std::pair<double, double>> pair_rai_trace(const std::vector<double>& roots_p,
                                                             const std::vector<double>& roots_q,
                                                             int n) {
    std::vector<std::pair<double, double>> trace;
    for (int cap : trace_truncations(n)) {
        double best = 0.0, prefix = -std::numeric_limits<double>::infinity();
        for (int k = 1; k <= cap; ++k) {
            prefix = std::max(prefix, roots_p[static_cast<std::size_t>(k)]);
            best = std::max(best, prefix - roots_q[static_cast<std::size_t>(k)]);
        }
        trace.emplace_back(cap, best);
    }
    return trace;
}

inline std::vector<std::pair<double, double>> pair_mg_trace(const std::vector<double>& lp,
                                                            const std::vector<double>& lq, int n) {
    std::vector<std::pair<double, double>> trace;
    for (int cap : trace_truncations(n)) {
        double best = 0.0;
        for (int j = 1; j < cap; ++j) {
            for (int k = j; j + k <= cap; ++k) {
                best = std::max(best, (lp[static_cast<std::size_t>(j + k)] -
                                       lq[static_cast<std::size_t>(j)] -
                                       lq[static_cast<std::size_t>(k)]) / (j + k));
            }
        }
        trace.emplace_back(cap, best);
    }
    return trace;
}

inline std::vector<std::pair<double, double>> pair_dc_trace(const std::vector<double>& lp,
                                                            const std::vector<double>& lq, int n) {
    std::vector<std::pair<double, double>> trace;
    for (int cap : trace_truncations(n)) {
        double best = 0.0;
        for (int j = 1; j < cap; ++j) {
            best = std::max(best, (lp[static_cast<std::size_t>(j + 1)] -
                                   lq[static_cast<std::size_t>(j)]) / (j + 1));
        }
        trace.emplace_back(cap, best);
    }
    return trace;
}

// Tail-window min of logM̌[j]/j: bounded below <=> liminf (M̌_j)^{1/j} > 0.
inline std::vector<std::pair<double, double>> liminf_trace(const std::vector<double>& roots, int n) {
    std::vector<std::pair<double, double>> trace;
    for (int cap : trace_truncations(n)) {
        double worst = std::numeric_limits<double>::infinity();
        for (int j = std::max(1, cap / 2); j <= cap; ++j) {
            worst = std::min(worst, roots[static_cast<std::size_t>(j)]);
        }
        trace.emplace_back(cap, worst);
    }
    return trace;
}

}  // namespace detail

inline MatrixConditionReport check_matrix_condition(const WeightMatrix& m, MatrixCondition which,
                                                    const Config& cfg = default_config()) {
    MatrixConditionReport rep;
    rep.condition = to_string(which);
    const int n = m.truncation();

    const auto exact_all_rows = [&](auto&& row_ok) {
        bool all = true;
        for (std::size_t i = 0; i < m.size(); ++i) {
            RowPairReport rr;
            rr.param = m.params()[i];
            const bool ok = row_ok(m.row(i));
            rr.verdict = ok ? Verdict::WitnessedUpToN : Verdict::FailsAtTruncation;
            rr.trace = {{static_cast<double>(n), ok ? 0.0 : 1.0}};
            all = all && ok;
            rep.rows.push_back(std::move(rr));
        }
        rep.verdict = all ? Verdict::WitnessedUpToN : Verdict::FailsAtTruncation;
    };

    switch (which) {
        case MatrixCondition::LogConvex: {
            exact_all_rows([](const WeightSequence& r) { return is_log_convex(r); });
            return rep;
        }
        case MatrixCondition::StandardLogConvex: {
            for (std::size_t i = 0; i < m.size(); ++i) {
                RowPairReport rr;
                rr.param = m.params()[i];
                const bool lc = is_log_convex(m.row(i));
                const bool norm = m.row(i).log_terms()[1] >= -1e-12;
                const auto quot =
                    check_condition(m.row(i), SequenceCondition::QuotientsToInfinity, cfg);
                rr.trace = quot.trace;
                if (!lc || !norm) {
                    rr.verdict = Verdict::FailsAtTruncation;
                } else {
                    rr.verdict = quot.verdict;
                }
                rep.rows.push_back(std::move(rr));
            }
            bool any_fail = false, any_und = false;
            for (const auto& rr : rep.rows) {
                if (rr.verdict == Verdict::FailsAtTruncation) any_fail = true;
                if (rr.verdict == Verdict::Undetermined) any_und = true;
            }
            rep.verdict = any_fail ? Verdict::FailsAtTruncation
                                   : (any_und ? Verdict::Undetermined : Verdict::WitnessedUpToN);
            return rep;
        }
        case MatrixCondition::RealAnalytic:
        case MatrixCondition::ContainsHolomorphic: {
            const bool need_all = which == MatrixCondition::ContainsHolomorphic;
            Verdict overall = need_all ? Verdict::WitnessedUpToN : Verdict::FailsAtTruncation;
            for (std::size_t i = 0; i < m.size(); ++i) {
                RowPairReport rr;
                rr.param = m.params()[i];
                rr.trace = detail::liminf_trace(detail::root_scale(m.row(i).log_check_terms()), n);
                rr.verdict = classify_bounded_below_trace(rr.trace, cfg);
                if (need_all) {
                    if (rr.verdict == Verdict::FailsAtTruncation) overall = Verdict::FailsAtTruncation;
                    else if (rr.verdict == Verdict::Undetermined && overall == Verdict::WitnessedUpToN) {
                        overall = Verdict::Undetermined;
                    }
                } else {
                    if (rr.verdict == Verdict::WitnessedUpToN) overall = Verdict::WitnessedUpToN;
                    else if (rr.verdict == Verdict::Undetermined && overall == Verdict::FailsAtTruncation) {
                        overall = Verdict::Undetermined;
                    }
                }
                rep.rows.push_back(std::move(rr));
            }
            rep.verdict = overall;
            if (!rep.rows.empty()) rep.witness["tail_min"] = rep.rows.back().trace.back().second;
            return rep;
        }
        case MatrixCondition::RootAlmostIncreasing:
        case MatrixCondition::FaaDiBruno:
        case MatrixCondition::ModerateGrowth:
        case MatrixCondition::DerivationClosed: {
            // Per row p, scan candidate partners p' >= p in grid order and
            // keep the first one whose minimal-constant trace stabilizes.
            const bool use_rai_policy = which == MatrixCondition::RootAlmostIncreasing ||
                                        which == MatrixCondition::FaaDiBruno;
            const TracePolicy pol = use_rai_policy ? rai_policy(cfg) : generic_policy(cfg);
            std::vector<std::vector<double>> data(m.size());
            const int fdb_n = std::min(n, cfg.fdb_truncation);
            for (std::size_t i = 0; i < m.size(); ++i) {
                switch (which) {
                    case MatrixCondition::RootAlmostIncreasing:
                        data[i] = detail::root_scale(m.row(i).log_check_terms());
                        break;
                    case MatrixCondition::FaaDiBruno:
                        data[i] = m.row(i).log_check_terms();
                        data[i].resize(static_cast<std::size_t>(fdb_n) + 1);
                        break;
                    default:
                        data[i] = m.row(i).log_terms();
                }
            }
            for (std::size_t i = 0; i < m.size(); ++i) {
                RowPairReport rr;
                rr.param = m.params()[i];
                std::vector<double> circ;
                if (which == MatrixCondition::FaaDiBruno) {
                    WeightSequence mi(std::vector<double>(m.row(i).log_terms().begin(),
                                                          m.row(i).log_terms().begin() + fdb_n + 1),
                                      m.row(i).label());
                    circ = faa_di_bruno_sequence(mi, cfg).log_terms();
                }
                bool any_undetermined = false;
                for (std::size_t k = i; k < m.size(); ++k) {
                    std::vector<std::pair<double, double>> trace;
                    switch (which) {
                        case MatrixCondition::RootAlmostIncreasing:
                            trace = detail::pair_rai_trace(data[i], data[k], n);
                            break;
                        case MatrixCondition::FaaDiBruno: {
                            // (M̌^(p))^circ ⪯ M̌^(p')
                            for (int cap : trace_truncations(fdb_n)) {
                                double best = -std::numeric_limits<double>::infinity();
                                for (int j = 1; j <= cap; ++j) {
                                    best = std::max(best, (circ[static_cast<std::size_t>(j)] -
                                                           data[k][static_cast<std::size_t>(j)]) / j);
                                }
                                trace.emplace_back(cap, best);
                            }
                            break;
                        }
                        case MatrixCondition::ModerateGrowth:
                            trace = detail::pair_mg_trace(data[i], data[k], n);
                            break;
                        default:
                            trace = detail::pair_dc_trace(data[i], data[k], n);
                    }
                    const Verdict v = classify_trace(trace, pol);
                    rr.trace = trace;  // last examined partner's trace stays as evidence
                    rr.verdict = v;
                    if (v == Verdict::WitnessedUpToN) {
                        rr.partner = m.params()[k];
                        rep.pairing[m.params()[i]] = m.params()[k];
                        rep.witness["lnC(p=" + std::to_string(m.params()[i]) + ")"] =
                            trace.back().second;
                        break;
                    }
                    if (v == Verdict::Undetermined) any_undetermined = true;
                }
                if (rr.verdict != Verdict::WitnessedUpToN && any_undetermined) {
                    rr.verdict = Verdict::Undetermined;
                }
                rep.rows.push_back(std::move(rr));
            }
            // The top grid row has no strictly larger partner; when it cannot
            // witness through itself while smaller rows found partners, that
            // is a grid artifact (the underlying index set is a continuum), so
            // it is excluded from the verdict and noted.
            bool any_fail = false, any_und = false;
            std::size_t counted = rep.rows.size();
            if (rep.rows.size() > 1 && rep.rows.back().verdict != Verdict::WitnessedUpToN) {
                bool others_paired = true;
                for (std::size_t i = 0; i + 1 < rep.rows.size(); ++i) {
                    others_paired = others_paired &&
                                    rep.rows[i].verdict == Verdict::WitnessedUpToN &&
                                    rep.rows[i].partner && *rep.rows[i].partner > rep.rows[i].param;
                }
                if (others_paired) {
                    counted -= 1;
                    rep.witness["grid_limited_rows"] = 1.0;
                }
            }
            for (std::size_t i = 0; i < counted; ++i) {
                if (rep.rows[i].verdict == Verdict::FailsAtTruncation) any_fail = true;
                if (rep.rows[i].verdict == Verdict::Undetermined) any_und = true;
            }
            rep.verdict = any_fail ? Verdict::FailsAtTruncation
                                   : (any_und ? Verdict::Undetermined : Verdict::WitnessedUpToN);
            return rep;
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Product bound: for tuples j_1..j_k,
//   M̌^(p)_{j_1} ... M̌^(p)_{j_k} <= H^{j_1+..+j_k} M̌^(p')_{j_1+..+j_k}.
// Enumerates tuples when cheap; otherwise the composition DP supplies the
// per-(sum, k) worst product exactly.
// ---------------------------------------------------------------------------

inline ConditionReport check_product_lemma(const WeightMatrix& m, std::size_t row_index,
                                           std::size_t partner_index, int k_max,
                                           const Config& cfg = default_config()) {
    if (row_index >= m.size() || partner_index >= m.size() || partner_index < row_index) {
        throw SpecError("check_product_lemma: bad row/partner indices");
    }
    const int n = std::min(m.truncation(), cfg.fdb_truncation);
    ConditionReport rep;
    rep.condition = "product-lemma";
    const std::vector<double> chk_p = m.row(row_index).log_check_terms();
    const std::vector<double> chk_q = m.row(partner_index).log_check_terms();

    // Worst product over compositions with at most k_max parts, per total sum.
    const auto S = composition_dp(chk_p, n);
    for (int cap : trace_truncations(n)) {
        double best = 0.0;
        for (int total = 1; total <= cap; ++total) {
            for (int k = 1; k <= std::min(k_max, total); ++k) {
                const double prod = S[static_cast<std::size_t>(k)][static_cast<std::size_t>(total)];
                best = std::max(best, (prod - chk_q[static_cast<std::size_t>(total)]) / total);
            }
        }
        rep.trace.emplace_back(cap, best);
    }
    rep.verdict = classify_trace(rep.trace, rai_policy(cfg));
    rep.witness["lnH"] = rep.trace.back().second;
    return rep;
}

// ---------------------------------------------------------------------------
// The M^alpha construction: multiply each row by Gbar^{1-alpha},
// regularize, divide again.  The growth gate stands in for
// lim (j^{(1-alpha) j} M_j)^{1/j} = infinity.
// ---------------------------------------------------------------------------

namespace detail {

// Trace of ((1-alpha) j ln j + logM[j]) / j over the tail window; the screen
// and the gate both classify its trend.
inline double gate_slope(const WeightSequence& row, double alpha) {
    const int n = row.truncation();
    const auto u = [&](int j) {
        return ((1.0 - alpha) * j * std::log(static_cast<double>(j)) +
                row.log_terms()[static_cast<std::size_t>(j)]) / j;
    };
    return u(n) - u(std::max(2, n / 2));
}

// Exact gate when the generator permits: lim (j^{(1-alpha) j} M_j)^{1/j}.
// Returns +1 (infinite), 0 (finite positive), -1 (zero) or 2 (unknown).
// The boundary exponent is snapped at 1e-9 so grid rounding noise cannot
// flip the sign of an exact-boundary cell.
inline int analytic_gate(const WeightSequence& row, double alpha) {
    const Generator& g = row.generator();
    switch (g.kind) {
        case GeneratorKind::QGevrey:
            return +1;
        case GeneratorKind::Gevrey:
        case GeneratorKind::GevreyBar: {
            const double ex = g.param + 1.0 - alpha;
            if (ex > 1e-9) return +1;
            if (ex < -1e-9) return -1;
            return 0;  // e.g. (j!/j^j)^{a/j} -> e^{-a}, finite positive
        }
        default:
            return 2;
    }
}

}  // namespace detail

inline WeightMatrix build_m_alpha(const WeightMatrix& m, double alpha,
                                  const Config& cfg = default_config(),
                                  bool enforce_gate = true) {
    if (!(alpha > 0.0)) throw SpecError("build_m_alpha: alpha > 0 required");
    const int n = m.truncation();
    std::vector<WeightSequence> rows;
    rows.reserve(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        const WeightSequence& row = m.row(i);
        if (enforce_gate) {
            const int ag = detail::analytic_gate(row, alpha);
            const bool pass = ag == +1 || (ag == 2 && detail::gate_slope(row, alpha) > cfg.tau_gate);
            if (!pass) {
                throw GrowthGateFailed("build_m_alpha: growth gate failed for row p=" +
                                           std::to_string(m.params()[i]),
                                       m.params()[i]);
            }
        }
        std::vector<double> lifted(static_cast<std::size_t>(n) + 1, 0.0);
        for (int j = 1; j <= n; ++j) {
            lifted[static_cast<std::size_t>(j)] =
                (1.0 - alpha) * j * std::log(static_cast<double>(j)) +
                row.log_terms()[static_cast<std::size_t>(j)];
        }
        const WeightSequence env = log_convex_minorant(
            WeightSequence(std::move(lifted), row.label() + "*Gbar^{1-a}"));
        std::vector<double> out(static_cast<std::size_t>(n) + 1, 0.0);
        for (int j = 1; j <= n; ++j) {
            out[static_cast<std::size_t>(j)] =
                env.log_terms()[static_cast<std::size_t>(j)] -
                (1.0 - alpha) * j * std::log(static_cast<double>(j));
        }
        rows.emplace_back(std::move(out), row.label() + "^(alpha)");
    }
    return WeightMatrix(m.params(), std::move(rows), m.origin());
}

// ---------------------------------------------------------------------------
// R-equivalence: both directions of the exists-beta search over compare.
// ---------------------------------------------------------------------------

struct REquivalenceReport {
    Verdict verdict = Verdict::Undetermined;
    MatrixConditionReport forward;   // m1 {preceq} m2
    MatrixConditionReport backward;  // m2 {preceq} m1
};

namespace detail {

inline MatrixConditionReport roumieu_preceq(const WeightMatrix& a, const WeightMatrix& b,
                                            const Config& cfg) {
    MatrixConditionReport rep;
    rep.condition = "{preceq}";
    const int n = std::min(a.truncation(), b.truncation());
    bool any_fail = false, any_und = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        RowPairReport rr;
        rr.param = a.params()[i];
        for (std::size_t k = 0; k < b.size(); ++k) {
            auto trace = preceq_report(a.row(i).log_terms(), b.row(k).log_terms(), n, cfg);
            if (trace.verdict == Verdict::WitnessedUpToN) {
                rr.partner = b.params()[k];
                rr.trace = trace.trace;
                rr.verdict = Verdict::WitnessedUpToN;
                rep.pairing[a.params()[i]] = b.params()[k];
                break;
            }
            rr.trace = trace.trace;
            rr.verdict = trace.verdict;
        }
        if (rr.verdict == Verdict::FailsAtTruncation) any_fail = true;
        if (rr.verdict == Verdict::Undetermined) any_und = true;
        rep.rows.push_back(std::move(rr));
    }
    rep.verdict = any_fail ? Verdict::FailsAtTruncation
                           : (any_und ? Verdict::Undetermined : Verdict::WitnessedUpToN);
    return rep;
}

}  // namespace detail

inline REquivalenceReport r_equivalent(const WeightMatrix& a, const WeightMatrix& b,
                                       const Config& cfg = default_config()) {
    REquivalenceReport rep;
    rep.forward = detail::roumieu_preceq(a, b, cfg);
    rep.backward = detail::roumieu_preceq(b, a, cfg);
    if (rep.forward.verdict == Verdict::WitnessedUpToN &&
        rep.backward.verdict == Verdict::WitnessedUpToN) {
        rep.verdict = Verdict::WitnessedUpToN;
    } else if (rep.forward.verdict == Verdict::FailsAtTruncation ||
               rep.backward.verdict == Verdict::FailsAtTruncation) {
        rep.verdict = Verdict::FailsAtTruncation;
    }
    return rep;
}

}  // namespace weightcalc

#endif  // WEIGHTCALC_MATRIX_HPP
