#ifndef WEIGHTCALC_SEQUENCE_HPP
#define WEIGHTCALC_SEQUENCE_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "weightcalc/common.hpp"
#include "weightcalc/special.hpp"

namespace weightcalc {

// ---------------------------------------------------------------------------
// WeightSequence: a finite log-domain truncation of (M_j), M_0 = 1.
// All arithmetic stays in natural logs; M_j itself overflows for j ~ 170.
// ---------------------------------------------------------------------------

enum class GeneratorKind { Gevrey, GevreyBar, QGevrey, Table, Derived };

struct Generator {
    GeneratorKind kind = GeneratorKind::Derived;
    double param = 0.0;  // Gevrey/GevreyBar exponent a, or q for QGevrey
};

namespace detail {

inline double generator_log_term(const Generator& g, int j) {
    switch (g.kind) {
        case GeneratorKind::Gevrey:
            return g.param * log_factorial(j);
        case GeneratorKind::GevreyBar:
            // j^{ja}; 0^0 := 1
            return j == 0 ? 0.0 : g.param * j * std::log(static_cast<double>(j));
        case GeneratorKind::QGevrey:
            return static_cast<double>(j) * j * std::log(g.param);
        default:
            return std::numeric_limits<double>::quiet_NaN();
    }
}

}  // namespace detail

class WeightSequence {
public:
    WeightSequence(std::vector<double> log_terms, std::string label,
                   Generator gen = {GeneratorKind::Derived, 0.0})
        : log_m_(std::move(log_terms)), label_(std::move(label)), gen_(gen) {
        if (log_m_.size() < 9) throw SpecError("weight sequence needs N >= 8");
        if (log_m_[0] != 0.0) throw SpecError("M_0 = 1 required (logM[0] must be 0)");
        for (double v : log_m_) {
            if (!std::isfinite(v)) throw SpecError("weight sequence entries must be finite");
        }
        if (gen_.kind != GeneratorKind::Table && gen_.kind != GeneratorKind::Derived) {
            for (int j = 0; j <= truncation(); ++j) {
                if (std::fabs(log_m_[static_cast<std::size_t>(j)] -
                              detail::generator_log_term(gen_, j)) > 1e-12) {
                    throw SpecError("tabulated entries disagree with generator formula");
                }
            }
        }
    }

    static WeightSequence gevrey(double a, int n) {
        return from_generator({GeneratorKind::Gevrey, a}, n, "G^" + trim_num(a));
    }

    static WeightSequence gevrey_bar(double a, int n) {
        return from_generator({GeneratorKind::GevreyBar, a}, n, "Gbar^" + trim_num(a));
    }

    static WeightSequence q_gevrey(double q, int n) {
        if (!(q > 1.0)) throw SpecError("q-Gevrey requires q > 1");
        return from_generator({GeneratorKind::QGevrey, q}, n, "M_q(q=" + trim_num(q) + ")");
    }

    static WeightSequence from_table(std::vector<double> log_terms, std::string label = "table") {
        return WeightSequence(std::move(log_terms), std::move(label),
                              {GeneratorKind::Table, 0.0});
    }

    int truncation() const { return static_cast<int>(log_m_.size()) - 1; }

    double log_term(int j) const {
        if (j >= 0 && j <= truncation()) return log_m_[static_cast<std::size_t>(j)];
        if (has_extension()) return detail::generator_log_term(gen_, j);
        throw TruncationInsufficient("index " + std::to_string(j) +
                                     " beyond truncation N=" + std::to_string(truncation()));
    }

    const std::vector<double>& log_terms() const { return log_m_; }

    // log m_j = logM[j+1] - logM[j]; extends past the table when a closed-form
    // generator is available.
    double log_quotient(int j) const { return log_term(j + 1) - log_term(j); }

    bool has_extension() const {
        return gen_.kind == GeneratorKind::Gevrey || gen_.kind == GeneratorKind::GevreyBar ||
               gen_.kind == GeneratorKind::QGevrey;
    }

    const Generator& generator() const { return gen_; }
    const std::string& label() const { return label_; }

    // log M̌_j = logM[j] - ln j!
    std::vector<double> log_check_terms() const {
        std::vector<double> out(log_m_.size());
        for (std::size_t j = 0; j < log_m_.size(); ++j) {
            out[j] = log_m_[j] - log_factorial(static_cast<int>(j));
        }
        return out;
    }

private:
    static WeightSequence from_generator(Generator g, int n, std::string label) {
        if (n < 8) throw SpecError("truncation N >= 8 required");
        std::vector<double> terms(static_cast<std::size_t>(n) + 1);
        for (int j = 0; j <= n; ++j)terms[static_cast<std::size_t>(j)] = detail::generator_log_term(g, j);
        return WeightSequence(std::move(terms), std::move(label), g);
    }

    static std::string trim_num(double x) {
        std::string s = std::to_string(x);
        s.erase(s.find_last_not_of('0') + 1);
        if (!s.empty() && s.back() == '.') s.pop_back();
        return s;
    }

    std::vector<double> log_m_;
    std::string label_;
    Generator gen_;
};

// log m_j for j = 0..N-1; the cumulative sum reconstructs logM exactly.
inline std::vector<double> quotients(const WeightSequence& s) {
    std::vector<double> out(static_cast<std::size_t>(s.truncation()));
    for (int j = 0; j < s.truncation(); ++j) {
        out[static_cast<std::size_t>(j)] = s.log_term(j + 1) - s.log_term(j);
    }
    return out;
}

inline WeightSequence pointwise_product(const WeightSequence& s, const WeightSequence& t) {
    if (s.truncation() != t.truncation()) throw SpecError("pointwise product needs equal N");
    std::vector<double> out(s.log_terms().size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = s.log_terms()[j] + t.log_terms()[j];
    return WeightSequence(std::move(out), s.label() + "*" + t.label());
}

inline WeightSequence pointwise_quotient(const WeightSequence& s, const WeightSequence& t) {
    if (s.truncation() != t.truncation()) throw SpecError("pointwise quotient needs equal N");
    std::vector<double> out(s.log_terms().size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = s.log_terms()[j] - t.log_terms()[j];
    return WeightSequence(std::move(out), s.label() + "/" + t.label());
}

// ---------------------------------------------------------------------------
// Sequence-level conditions
// ---------------------------------------------------------------------------

enum class SequenceCondition {
    LogConvex,             // (lc)
    StrongLogConvex,       // (slc): M̌ log-convex
    Normalized,            // 1 = M_0 <= M_1
    ModerateGrowth,        // (mg)
    DerivationClosed,      // (dc)
    RootAlmostIncreasing,  // (rai)
    FaaDiBruno,            // (FdB)
    QuotientsToInfinity    // lim m_j = +infinity
};

inline const char* to_string(SequenceCondition c) {
    switch (c) {
        case SequenceCondition::LogConvex: return "(lc)";
        case SequenceCondition::StrongLogConvex: return "(slc)";
        case SequenceCondition::Normalized: return "normalized";
        case SequenceCondition::ModerateGrowth: return "(mg)";
        case SequenceCondition::DerivationClosed: return "(dc)";
        case SequenceCondition::RootAlmostIncreasing: return "(rai)";
        case SequenceCondition::FaaDiBruno: return "(FdB)";
        default: return "limit-mj-infinity";
    }
}

namespace detail {

// Exact second-difference log-convexity scan; returns first violating center
// index, or 0 when none.
inline int lc_violation(const std::vector<double>& log_m, double slack = 1e-12) {
    for (std::size_t j = 1; j + 1 < log_m.size(); ++j) {
        if (log_m[j - 1] + log_m[j + 1] - 2.0 * log_m[j] < -slack) {
            return static_cast<int>(j);
        }
    }
    return 0;
}

// Minimal ln C at truncation J for (mg): max over j,k >= 1, j+k <= J of
// (logM[j+k] - logM[j] - logM[k]) / (j+k).
inline double mg_constant(const std::vector<double>& lm, int cap) {
    double best = 0.0;
    for (int j = 1; j < cap; ++j) {
        for (int k = j; j + k <= cap; ++k) {
            const double v = (lm[static_cast<std::size_t>(j + k)] -
                              lm[static_cast<std::size_t>(j)] -
                              lm[static_cast<std::size_t>(k)]) / (j + k);
            best = std::max(best, v);
        }
    }
    return best;
}

inline double dc_constant(const std::vector<double>& lm, int cap) {
    double best = 0.0;
    for (int j = 1; j < cap; ++j) {
        best = std::max(best, (lm[static_cast<std::size_t>(j + 1)] -
                               lm[static_cast<std::size_t>(j)]) / (j + 1));
    }
    return best;
}

// Minimal ln H for "roots almost increasing" over 1 <= j <= k <= J applied to
// x_j = logX[j]/j: max over k of (prefix max of x) - x_k.
inline double almost_increasing_constant(const std::vector<double>& roots, int cap) {
    double best = 0.0, prefix = -std::numeric_limits<double>::infinity();
    for (int j = 1; j <= cap; ++j) {
        prefix = std::max(prefix, roots[static_cast<std::size_t>(j)]);
        best = std::max(best, prefix - roots[static_cast<std::size_t>(j)]);
    }
    return best;
}

inline std::vector<double> root_scale(const std::vector<double>& lx) {
    std::vector<double> out(lx.size(), 0.0);
    for (std::size_t j = 1; j < lx.size(); ++j) out[j] = lx[j] / static_cast<double>(j);
    return out;
}

}  // namespace detail

// The Faà-di-Bruno worst-case composition sequence M̌°, as a logM̌° table.
// S[l][k] = max over compositions of k into l positive parts of sum logM̌[j_i],
// built by S[l][k] = max_j (logM̌[j] + S[l-1][k-j]); ties resolved toward the
// smaller l (the max value is tie-independent).
inline WeightSequence faa_di_bruno_sequence(const WeightSequence& s,
                                            const Config& cfg = default_config()) {
    const int n = s.truncation();
    if (n > cfg.max_n_cubic) throw SpecError("faa_di_bruno_sequence: N > cubic cap");
    const std::vector<double> chk = s.log_check_terms();
    const double neg_inf = -std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> S(static_cast<std::size_t>(n) + 1,
                                       std::vector<double>(static_cast<std::size_t>(n) + 1, neg_inf));
    for (int k = 1; k <= n; ++k) S[1][static_cast<std::size_t>(k)] = chk[static_cast<std::size_t>(k)];
    for (int l = 2; l <= n; ++l) {
        for (int k = l; k <= n; ++k) {
            double best = neg_inf;
            for (int j = 1; j <= k - l + 1; ++j) {
                const double v = chk[static_cast<std::size_t>(j)] +
                                 S[static_cast<std::size_t>(l - 1)][static_cast<std::size_t>(k - j)];
                if (v > best) best = v;
            }
            S[static_cast<std::size_t>(l)][static_cast<std::size_t>(k)] = best;
        }
    }
    std::vector<double> circ(static_cast<std::size_t>(n) + 1, 0.0);
    for (int k = 1; k <= n; ++k) {
        double best = neg_inf;
        for (int l = 1; l <= k; ++l) {
            const double v = chk[static_cast<std::size_t>(l)] +
                             S[static_cast<std::size_t>(l)][static_cast<std::size_t>(k)];
            if (v > best) best = v;
        }
        circ[static_cast<std::size_t>(k)] = best;
    }
    return WeightSequence(std::move(circ), "(" + s.label() + ")^circ");
}

// Internal: the composition DP table S (shared with the matrix product lemma).
inline std::vector<std::vector<double>> composition_dp(const std::vector<double>& chk, int n) {
    const double neg_inf = -std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> S(static_cast<std::size_t>(n) + 1,
                                       std::vector<double>(static_cast<std::size_t>(n) + 1, neg_inf));
    for (int k = 1; k <= n; ++k) S[1][static_cast<std::size_t>(k)] = chk[static_cast<std::size_t>(k)];
    for (int l = 2; l <= n; ++l) {
        for (int k = l; k <= n; ++k) {
            double best = neg_inf;
            for (int j = 1; j <= k - l + 1; ++j) {
                best = std::max(best, chk[static_cast<std::size_t>(j)] +
                                          S[static_cast<std::size_t>(l - 1)][static_cast<std::size_t>(k - j)]);
            }
            S[static_cast<std::size_t>(l)][static_cast<std::size_t>(k)] = best;
        }
    }
    return S;
}

inline ConditionReport check_condition(const WeightSequence& s, SequenceCondition which,
                                       const Config& cfg = default_config()) {
    ConditionReport rep;
    rep.condition = to_string(which);
    const int n = s.truncation();
    const std::vector<double>& lm = s.log_terms();

    switch (which) {
        case SequenceCondition::LogConvex: {
            const int bad = detail::lc_violation(lm);
            rep.trace = {{static_cast<double>(n), bad == 0 ? 0.0 : 1.0}};
            if (bad == 0) {
                rep.verdict = Verdict::WitnessedUpToN;
            } else {
                rep.verdict = Verdict::FailsAtTruncation;
                rep.failure_site = {bad - 1, bad + 1};
            }
            return rep;
        }
        case SequenceCondition::StrongLogConvex: {
            const int bad = detail::lc_violation(s.log_check_terms());
            rep.trace = {{static_cast<double>(n), bad == 0 ? 0.0 : 1.0}};
            if (bad == 0) {
                rep.verdict = Verdict::WitnessedUpToN;
            } else {
                rep.verdict = Verdict::FailsAtTruncation;
                rep.failure_site = {bad - 1, bad + 1};
            }
            return rep;
        }
        case SequenceCondition::Normalized: {
            const bool ok = lm[1] >= -1e-12;
            rep.trace = {{static_cast<double>(n), ok ? 0.0 : 1.0}};
            rep.verdict = ok ? Verdict::WitnessedUpToN : Verdict::FailsAtTruncation;
            if (!ok) rep.failure_site = {0, 1};
            return rep;
        }
        case SequenceCondition::ModerateGrowth: {
            for (int cap : trace_truncations(n)) {
                rep.trace.emplace_back(cap, detail::mg_constant(lm, cap));
            }
            rep.verdict = classify_trace(rep.trace, generic_policy(cfg));
            rep.witness["lnC"] = rep.trace.back().second;
            return rep;
        }
        case SequenceCondition::DerivationClosed: {
            for (int cap : trace_truncations(n)) {
                rep.trace.emplace_back(cap, detail::dc_constant(lm, cap));
            }
            rep.verdict = classify_trace(rep.trace, generic_policy(cfg));
            rep.witness["lnD"] = rep.trace.back().second;
            return rep;
        }
        case SequenceCondition::RootAlmostIncreasing: {
            const std::vector<double> roots = detail::root_scale(s.log_check_terms());
            for (int cap : trace_truncations(n)) {
                rep.trace.emplace_back(cap, detail::almost_increasing_constant(roots, cap));
            }
            rep.verdict = classify_trace(rep.trace, rai_policy(cfg));
            rep.witness["lnH"] = rep.trace.back().second;
            return rep;
        }
        case SequenceCondition::FaaDiBruno: {
            const WeightSequence circ = faa_di_bruno_sequence(s, cfg);
            const std::vector<double> chk = s.log_check_terms();
            for (int cap : trace_truncations(n)) {
                double best = 0.0;
                for (int j = 1; j <= cap; ++j) {
                    best = std::max(best, (circ.log_terms()[static_cast<std::size_t>(j)] -
                                           chk[static_cast<std::size_t>(j)]) / j);
                }
                rep.trace.emplace_back(cap, best);
            }
            rep.verdict = classify_trace(rep.trace, rai_policy(cfg));
            const double lnh = rep.trace.back().second;
            double lnc = 0.0;
            for (int j = 1; j <= n; ++j) {
                lnc = std::max(lnc, circ.log_terms()[static_cast<std::size_t>(j)] -
                                        chk[static_cast<std::size_t>(j)] - j * lnh);
            }
            rep.witness["lnh"] = lnh;
            rep.witness["lnC"] = lnc;
            return rep;
        }
        case SequenceCondition::QuotientsToInfinity: {
            for (int cap : trace_truncations(n)) {
                rep.trace.emplace_back(cap, s.log_term(cap) - s.log_term(cap - 1));
            }
            const double last = rep.trace.back().second;
            const double half = rep.trace[rep.trace.size() / 2 - 1].second;
            const double growth = last - half;
            if (growth > cfg.tau_stab) {
                rep.verdict = Verdict::WitnessedUpToN;
            } else if (growth <= cfg.tau_stab / 5.0) {
                rep.verdict = Verdict::FailsAtTruncation;
            } else {
                rep.verdict = Verdict::Undetermined;
            }
            rep.witness["log_m_last"] = last;
            return rep;
        }
    }
    return rep;
}

inline ConditionReport check_fdb(const WeightSequence& s, const Config& cfg = default_config()) {
    return check_condition(s, SequenceCondition::FaaDiBruno, cfg);
}

inline bool is_log_convex(const WeightSequence& s) {
    return detail::lc_violation(s.log_terms()) == 0;
}

// ---------------------------------------------------------------------------
// Comparison M ⪯ L  (sup_j (M_j/L_j)^{1/j} < +inf) and equivalence.
// ---------------------------------------------------------------------------

struct CompareReport {
    ConditionReport forward;   // s ⪯ t
    ConditionReport backward;  // t ⪯ s
    Verdict equivalent = Verdict::Undetermined;
};

namespace detail {

inline ConditionReport preceq_report(const std::vector<double>& a, const std::vector<double>& b,
                                     int n, const Config& cfg) {
    ConditionReport rep;
    rep.condition = "preceq";
    for (int cap : trace_truncations(n)) {
        double best = -std::numeric_limits<double>::infinity();
        for (int j = 1; j <= cap; ++j) {
            best = std::max(best, (a[static_cast<std::size_t>(j)] -
                                   b[static_cast<std::size_t>(j)]) / j);
        }
        rep.trace.emplace_back(cap, best);
    }
    rep.verdict = classify_trace(rep.trace, generic_policy(cfg));
    rep.witness["lnB"] = rep.trace.back().second;
    return rep;
}

}  // namespace detail

inline CompareReport compare(const WeightSequence& s, const WeightSequence& t,
                             const Config& cfg = default_config()) {
    const int n = std::min(s.truncation(), t.truncation());
    CompareReport rep;
    rep.forward = detail::preceq_report(s.log_terms(), t.log_terms(), n, cfg);
    rep.backward = detail::preceq_report(t.log_terms(), s.log_terms(), n, cfg);
    if (rep.forward.verdict == Verdict::WitnessedUpToN &&
        rep.backward.verdict == Verdict::WitnessedUpToN) {
        rep.equivalent = Verdict::WitnessedUpToN;
    } else if (rep.forward.verdict == Verdict::FailsAtTruncation ||
               rep.backward.verdict == Verdict::FailsAtTruncation) {
        rep.equivalent = Verdict::FailsAtTruncation;
    }
    return rep;
}

}  // namespace weightcalc

#endif  // WEIGHTCALC_SEQUENCE_HPP
