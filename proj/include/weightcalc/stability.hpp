#ifndef WEIGHTCALC_STABILITY_HPP
#define WEIGHTCALC_STABILITY_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "weightcalc/analytic.hpp"
#include "weightcalc/common.hpp"
#include "weightcalc/indices.hpp"
#include "weightcalc/matrix.hpp"
#include "weightcalc/sequence.hpp"
#include "weightcalc/weight_function.hpp"

namespace weightcalc {

// ---------------------------------------------------------------------------
// Stability verdicts for A_{M}(S_alpha).  "Stable" splits into the inverse /
// holomorphic closure level and the composition level, because the
// composition extension needs the extra gates.  Inconclusive is a first-class
// outcome: the theorems are conditional on hypotheses finite data may not
// witness, and we never coerce it to NotStable.
// ---------------------------------------------------------------------------

enum class Stability {
    TrivialClass,
    StableHoloInverse,
    StableComposition,
    NotStable,
    Inconclusive
};

enum class StabilityJustification {
    NarrowThm,
    WideThm,
    TrivialRemarkI,
    TrivialRemarkII,
    ReductionRemarkIII,
    OmegaThmNarrow,
    OmegaThmWide,
    MixedRows
};

inline const char* to_string(Stability s) {
    switch (s) {
        case Stability::TrivialClass: return "TrivialClass";
        case Stability::StableHoloInverse: return "StableHoloInverse";
        case Stability::StableComposition: return "StableComposition";
        case Stability::NotStable: return "NotStable";
        default: return "Inconclusive";
    }
}

inline const char* to_string(StabilityJustification j) {
    switch (j) {
        case StabilityJustification::NarrowThm: return "NarrowThm";
        case StabilityJustification::WideThm: return "WideThm";
        case StabilityJustification::TrivialRemarkI: return "TrivialRemark-i";
        case StabilityJustification::TrivialRemarkII: return "TrivialRemark-ii";
        case StabilityJustification::ReductionRemarkIII: return "ReductionRemark-iii";
        case StabilityJustification::OmegaThmNarrow: return "OmegaThmNarrow";
        case StabilityJustification::OmegaThmWide: return "OmegaThmWide";
        default: return "MixedRows";
    }
}

struct StabilityVerdict {
    Stability verdict = Stability::Inconclusive;
    StabilityJustification justification = StabilityJustification::NarrowThm;
    double alpha = 0.0;
    std::vector<MatrixConditionReport> reports;
    std::vector<std::string> notes;
    bool internal_inconsistency = false;
};

// ---------------------------------------------------------------------------
// Triviality screen.  Classifies the trend of
// ((1-alpha) j ln j + logM^(p)[j]) / j per row; the union class is governed by
// the largest rows, so mixed situations follow the top row when the row
// classes are monotone, and report MixedRows otherwise.
// Returns nullopt when the growth gate passes and the main theorems apply.
// The ReductionRemarkIII verdict is a directive: the class equals
// A_{Gbar^{alpha-1}}(S_alpha) and should be re-classified as such.
// ---------------------------------------------------------------------------

namespace detail {

enum class GateClass { Diverges, Bounded, Vanishes };

inline GateClass gate_class(const WeightSequence& row, double alpha, const Config& cfg) {
    const int ag = analytic_gate(row, alpha);
    if (ag == +1) return GateClass::Diverges;
    if (ag == 0) return GateClass::Bounded;
    if (ag == -1) return GateClass::Vanishes;
    const double slope = gate_slope(row, alpha);
    if (slope > cfg.tau_gate) return GateClass::Diverges;
    if (slope < -cfg.tau_gate) return GateClass::Vanishes;
    return GateClass::Bounded;
}

}  // namespace detail

inline std::optional<StabilityVerdict> triviality_screen(const WeightMatrix& m, double alpha,
                                                         const Config& cfg = default_config()) {
    std::vector<detail::GateClass> classes;
    classes.reserve(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        classes.push_back(detail::gate_class(m.row(i), alpha, cfg));
    }
    // Row classes must be nondecreasing toward Diverges as p grows; anything
    // else is numeric noise we refuse to interpret.
    const auto rank = [](detail::GateClass c) {
        return c == detail::GateClass::Vanishes ? 0 : (c == detail::GateClass::Bounded ? 1 : 2);
    };
    for (std::size_t i = 0; i + 1 < classes.size(); ++i) {
        if (rank(classes[i]) > rank(classes[i + 1])) {
            StabilityVerdict v;
            v.verdict = Stability::Inconclusive;
            v.justification = StabilityJustification::MixedRows;
            v.alpha = alpha;
            v.notes.push_back("rows disagree non-monotonically in the growth screen");
            return v;
        }
    }
    const detail::GateClass top = classes.back();
    if (top == detail::GateClass::Diverges) return std::nullopt;  // proceed to the theorems

    StabilityVerdict v;
    v.alpha = alpha;
    if (alpha > 1.0) {
        // liminf finite for every row: only constant functions in the class
        v.verdict = Stability::TrivialClass;
        v.justification = StabilityJustification::TrivialRemarkI;
        return v;
    }
    if (top == detail::GateClass::Vanishes) {
        v.verdict = Stability::TrivialClass;
        v.justification = StabilityJustification::TrivialRemarkII;
        return v;
    }
    v.verdict = Stability::Inconclusive;  // caller replaces the matrix and retries
    v.justification = StabilityJustification::ReductionRemarkIII;
    v.notes.push_back("class coincides with A_{Gbar^{alpha-1}}(S_alpha); re-classify that matrix");
    return v;
}

// ---------------------------------------------------------------------------
// Narrow sectors (alpha <= 1): conditions are read off the matrix M^alpha.
// ---------------------------------------------------------------------------

namespace detail {

inline StabilityVerdict bundle_from_conditions(double alpha, StabilityJustification just,
                                               MatrixConditionReport rai,
                                               MatrixConditionReport cw,
                                               MatrixConditionReport dc,
                                               MatrixConditionReport fdb) {
    StabilityVerdict v;
    v.alpha = alpha;
    v.justification = just;
    if (rai.verdict == Verdict::FailsAtTruncation) {
        v.verdict = Stability::NotStable;
    } else if (rai.verdict == Verdict::Undetermined) {
        v.verdict = Stability::Inconclusive;
    } else if (cw.verdict == Verdict::WitnessedUpToN && dc.verdict == Verdict::WitnessedUpToN &&
               fdb.verdict == Verdict::WitnessedUpToN) {
        v.verdict = Stability::StableComposition;
    } else {
        v.verdict = Stability::StableHoloInverse;
    }
    v.reports.push_back(std::move(rai));
    v.reports.push_back(std::move(cw));
    v.reports.push_back(std::move(dc));
    v.reports.push_back(std::move(fdb));
    return v;
}

}  // namespace detail

inline StabilityVerdict classify_narrow(const WeightMatrix& m, double alpha,
                                        const Config& cfg = default_config()) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw SpecError("classify_narrow: alpha in (0,1]");
    if (auto screened = triviality_screen(m, alpha, cfg)) {
        if (screened->justification != StabilityJustification::ReductionRemarkIII) {
            return *screened;
        }
        // Remark (iii): the class equals A_{Gbar^{alpha-1}}; M^alpha of that
        // constant matrix is the matrix itself (the regularization of the
        // unit sequence is trivial), so test (rai) on it directly.
        const WeightMatrix reduced = make_constant_matrix(
            WeightSequence::gevrey_bar(alpha - 1.0, m.truncation()), m.params());
        auto rai = check_matrix_condition(reduced, MatrixCondition::RootAlmostIncreasing, cfg);
        auto cw = check_matrix_condition(reduced, MatrixCondition::RealAnalytic, cfg);
        auto dc = check_matrix_condition(reduced, MatrixCondition::DerivationClosed, cfg);
        auto fdb = check_matrix_condition(reduced, MatrixCondition::FaaDiBruno, cfg);
        StabilityVerdict v = detail::bundle_from_conditions(
            alpha, StabilityJustification::ReductionRemarkIII, std::move(rai), std::move(cw),
            std::move(dc), std::move(fdb));
        v.notes.push_back("classified through the Gbar^{alpha-1} reduction");
        return v;
    }
    const WeightMatrix m_alpha = build_m_alpha(m, alpha, cfg);
    auto rai = check_matrix_condition(m_alpha, MatrixCondition::RootAlmostIncreasing, cfg);
    auto cw = check_matrix_condition(m, MatrixCondition::RealAnalytic, cfg);
    auto dc = check_matrix_condition(m_alpha, MatrixCondition::DerivationClosed, cfg);
    auto fdb = check_matrix_condition(m_alpha, MatrixCondition::FaaDiBruno, cfg);
    return detail::bundle_from_conditions(alpha, StabilityJustification::NarrowThm,
                                          std::move(rai), std::move(cw), std::move(dc),
                                          std::move(fdb));
}

// ---------------------------------------------------------------------------
// Wide sectors (alpha > 1): the theorem is conditional on each row carrying
// gamma(M^(p)) > alpha - 1; with the gate passed the conditions are read off
// the matrix itself.  A failed gate is honest Inconclusive.
// ---------------------------------------------------------------------------

inline StabilityVerdict classify_wide(const WeightMatrix& m, double alpha,
                                      const Config& cfg = default_config()) {
    if (!(alpha > 1.0)) throw SpecError("classify_wide: alpha > 1 required");
    if (auto screened = triviality_screen(m, alpha, cfg)) return *screened;

    bool gate_ok = true;
    std::string gate_note;
    for (std::size_t i = 0; i < m.size(); ++i) {
        const WeightSequence* row = &m.row(i);
        std::optional<WeightSequence> regularized;
        if (!is_log_convex(*row)) {
            regularized = log_convex_minorant(*row);
            row = &*regularized;
        }
        const IndexEstimate gamma = gamma_sequence(*row, cfg);
        if (!(gamma.lower_witnessed > alpha - 1.0)) {
            gate_ok = false;
            gate_note = "gamma(M^(p)) lower bound " + std::to_string(gamma.lower_witnessed) +
                        " does not exceed alpha-1 for p=" + std::to_string(m.params()[i]);
            break;
        }
    }
    if (!gate_ok) {
        StabilityVerdict v;
        v.alpha = alpha;
        v.justification = StabilityJustification::WideThm;
        v.verdict = Stability::Inconclusive;
        v.notes.push_back("wide-sector hypotheses unverified: " + gate_note);
        return v;
    }
    auto rai = check_matrix_condition(m, MatrixCondition::RootAlmostIncreasing, cfg);
    auto cw = check_matrix_condition(m, MatrixCondition::RealAnalytic, cfg);
    auto dc = check_matrix_condition(m, MatrixCondition::DerivationClosed, cfg);
    auto fdb = check_matrix_condition(m, MatrixCondition::FaaDiBruno, cfg);
    return detail::bundle_from_conditions(alpha, StabilityJustification::WideThm, std::move(rai),
                                          std::move(cw), std::move(dc), std::move(fdb));
}

inline StabilityVerdict classify_matrix(const WeightMatrix& m, double alpha,
                                        const Config& cfg = default_config()) {
    return alpha <= 1.0 ? classify_narrow(m, alpha, cfg) : classify_wide(m, alpha, cfg);
}

// ---------------------------------------------------------------------------
// Weight-function classifier.  alpha <= 1 rests on (alpha_0); alpha > 1 needs
// the gamma(omega) gate plus the (omega_5)/(alpha_0) checks for omega^s at an
// s inside (alpha-1, gamma(omega)).  A matrix cross-check flags internal
// inconsistencies.
// ---------------------------------------------------------------------------

inline StabilityVerdict classify_omega(const WeightFunction& w, double alpha,
                                       const Config& cfg = default_config()) {
    if (!(alpha > 0.0)) throw SpecError("classify_omega: alpha > 0 required");
    const auto conditions = check_omega_conditions(w, cfg);
    const ConditionReport& alpha0 = conditions.at("(alpha0)");
    const ConditionReport& omega2 = conditions.at("(omega2)");

    StabilityVerdict v;
    v.alpha = alpha;
    v.justification = alpha <= 1.0 ? StabilityJustification::OmegaThmNarrow
                                   : StabilityJustification::OmegaThmWide;

    bool gate_ok = alpha <= 1.0;
    if (alpha > 1.0) {
        const IndexEstimate gamma = gamma_omega(w, cfg);
        if (gamma.lower_witnessed > alpha - 1.0) {
            const double s = 0.5 * ((alpha - 1.0) + gamma.lower_witnessed);
            const WeightFunction ws = w.power_composed(s);
            const auto ws_conditions = check_omega_conditions(ws, cfg);
            const bool omega5_ok =
                ws_conditions.at("(omega5)").verdict == Verdict::WitnessedUpToN;
            const bool alpha0_ok =
                ws_conditions.at("(alpha0)").verdict == Verdict::WitnessedUpToN;
            gate_ok = omega5_ok && alpha0_ok;
            if (!gate_ok) {
                v.notes.push_back("omega^s checks failed at s=" + std::to_string(s));
            }
        } else {
            v.notes.push_back("gamma(omega) lower bound does not exceed alpha-1");
        }
    }

    if (!gate_ok) {
        v.verdict = Stability::Inconclusive;
        return v;
    }
    if (alpha0.verdict == Verdict::FailsAtTruncation) {
        v.verdict = Stability::NotStable;
    } else if (alpha0.verdict == Verdict::Undetermined) {
        v.verdict = Stability::Inconclusive;
    } else if (omega2.verdict == Verdict::WitnessedUpToN) {
        v.verdict = Stability::StableComposition;
    } else {
        v.verdict = Stability::StableHoloInverse;
    }

    // Cross-check through the associated matrix; verdict-level disagreement
    // between the two routes is an internal inconsistency, not data.
    try {
        const auto assoc = matrix_from_omega(w, cfg.ell_grid, cfg.default_n, cfg);
        const StabilityVerdict via_matrix = classify_matrix(assoc.matrix, alpha, cfg);
        const bool both_decisive = v.verdict != Stability::Inconclusive &&
                                   via_matrix.verdict != Stability::Inconclusive;
        const auto stable = [](Stability s) {
            return s == Stability::StableComposition || s == Stability::StableHoloInverse;
        };
        if (both_decisive && stable(v.verdict) != stable(via_matrix.verdict)) {
            v.internal_inconsistency = true;
            v.notes.push_back("InternalInconsistency: matrix route disagrees (" +
                              std::string(to_string(via_matrix.verdict)) + ")");
        }
    } catch (const Error& e) {
        v.notes.push_back(std::string("matrix cross-check unavailable: ") + e.what());
    }
    return v;
}

// ---------------------------------------------------------------------------
// The Gevrey stability map for A_{Gbar^beta}(S_alpha).  The closed form comes
// straight out of the case analysis; every cell also goes through the general
// pipeline and the agreement is recorded.
// ---------------------------------------------------------------------------

inline Stability gevrey_closed_form(double alpha, double beta) {
    const double snap = 1e-9;
    if (alpha <= 1.0) {
        if (beta < alpha - 1.0 - snap) return Stability::TrivialClass;
        if (std::fabs(beta - (alpha - 1.0)) <= snap) return Stability::NotStable;
        if (beta < 1.0) return Stability::NotStable;
        return Stability::StableComposition;
    }
    if (beta <= alpha - 1.0 + snap) return Stability::TrivialClass;
    if (beta < 1.0) return Stability::NotStable;
    return Stability::StableComposition;
}

struct GevreyMapCell {
    double alpha = 0.0;
    double beta = 0.0;
    Stability closed_form = Stability::Inconclusive;
    Stability pipeline = Stability::Inconclusive;
    StabilityJustification justification = StabilityJustification::NarrowThm;
    bool agree = false;
};

namespace detail {

inline bool region_equal(Stability a, Stability b) {
    const auto stable = [](Stability s) {
        return s == Stability::StableComposition || s == Stability::StableHoloInverse;
    };
    if (stable(a) && stable(b)) return true;
    return a == b;
}

}  // namespace detail

inline std::vector<GevreyMapCell> gevrey_map(const std::vector<double>& alphas,
                                             const std::vector<double>& betas,
                                             const Config& cfg = default_config()) {
    for (double a : alphas) {
        if (!(a >= 0.05 && a <= 3.5)) throw SpecError("gevrey_map: alpha grid within [0.05, 3.5]");
    }
    for (double b : betas) {
        if (!(b >= -2.0 && b <= 3.0)) throw SpecError("gevrey_map: beta grid within [-2, 3]");
    }
    Config cell_cfg = cfg;
    cell_cfg.fdb_truncation = cfg.map_fdb_n;
    std::vector<GevreyMapCell> cells(alphas.size() * betas.size());
    parallel_for(cells.size(), [&](std::size_t idx) {
        const double alpha = alphas[idx / betas.size()];
        const double beta = betas[idx % betas.size()];
        GevreyMapCell cell;
        cell.alpha = alpha;
        cell.beta = beta;
        cell.closed_form = gevrey_closed_form(alpha, beta);
        const WeightMatrix m =
            make_constant_matrix(WeightSequence::gevrey_bar(beta, cfg.map_n), {1.0});
        const StabilityVerdict v = classify_matrix(m, alpha, cell_cfg);
        cell.pipeline = v.verdict;
        cell.justification = v.justification;
        cell.agree = v.verdict == Stability::Inconclusive ||
                     detail::region_equal(cell.closed_form, cell.pipeline);
        cells[idx] = cell;
    });
    return cells;
}

// ---------------------------------------------------------------------------
// Class-equality evidence: certificates against M^alpha
// transfer to M with the Gorny-Cartan factor A q^{(1-alpha) n}; the minorant
// direction is exact.
// ---------------------------------------------------------------------------

struct ClassEqualityReport {
    struct ProbeResult {
        bool certified_m = false;
        double h_m = 0.0;
        bool certified_m_alpha = false;
        double h_m_alpha = 0.0;
        double allowed_factor = 0.0;  // q^{1-alpha}
        bool within_factor = false;
    };
    std::vector<ProbeResult> probes;
    double gorny_a = 0.0;
    double gorny_q = 0.0;
};

inline ClassEqualityReport class_equality_demo(const WeightMatrix& m, double alpha,
                                               const std::vector<Jet>& probes,
                                               const Config& cfg = default_config()) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw SpecError("class_equality_demo: alpha in (0,1]");
    const WeightMatrix m_alpha = build_m_alpha(m, alpha, cfg);
    ClassEqualityReport rep;
    if (alpha == 1.0) {
        rep.gorny_a = 4.0;
        rep.gorny_q = 1.0;
    } else {
        rep.gorny_a = 8.0 * kPi;
        rep.gorny_q = 2.0 * std::exp(1.0) * (2.0 - alpha) / (1.0 - alpha);
    }
    for (const Jet& probe : probes) {
        ClassEqualityReport::ProbeResult res;
        res.allowed_factor = std::pow(rep.gorny_q, 1.0 - alpha);
        for (std::size_t i = 0; i < m.size() && !res.certified_m; ++i) {
            try {
                const auto cert = membership_certificate(probe, m.row(i), cfg);
                res.certified_m = true;
                res.h_m = cert.h;
            } catch (const NoFiniteH&) {
            }
        }
        for (std::size_t i = 0; i < m_alpha.size() && !res.certified_m_alpha; ++i) {
            try {
                const auto cert = membership_certificate(probe, m_alpha.row(i), cfg);
                res.certified_m_alpha = true;
                res.h_m_alpha = cert.h;
            } catch (const NoFiniteH&) {
            }
        }
        if (res.certified_m && res.certified_m_alpha) {
            res.within_factor =
                res.h_m_alpha <= res.h_m * res.allowed_factor * cfg.h_grid_factor + 1e-12;
        }
        rep.probes.push_back(res);
    }
    return rep;
}

}  // namespace weightcalc

#endif  // WEIGHTCALC_STABILITY_HPP
