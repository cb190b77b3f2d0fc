#ifndef WEIGHTCALC_WEIGHT_FUNCTION_HPP
#define WEIGHTCALC_WEIGHT_FUNCTION_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "weightcalc/common.hpp"
#include "weightcalc/sequence.hpp"
#include "weightcalc/special.hpp"

namespace weightcalc {

// ---------------------------------------------------------------------------
// Log-convex minorant: lower convex envelope of (j, logM[j]) at integer
// abscissae.  Hull vertices keep their input values bit-exactly and interior
// points are linear interpolations of the bracketing vertices, which makes the
// operation exactly idempotent.
// ---------------------------------------------------------------------------

inline WeightSequence log_convex_minorant(const WeightSequence& s) {
    const std::vector<double>& y = s.log_terms();
    const int n = s.truncation();
    std::vector<int> hull;
    hull.reserve(y.size());
    for (int j = 0; j <= n; ++j) {
        while (hull.size() >= 2) {
            const int a = hull[hull.size() - 2], b = hull.back();
            // pop b when it lies above segment (a, j); points within rounding
            // noise of the segment stay, which keeps re-regularization a
            // bitwise no-op
            const double ya = y[static_cast<std::size_t>(a)];
            const double yb = y[static_cast<std::size_t>(b)];
            const double yj = y[static_cast<std::size_t>(j)];
            const double cross = (static_cast<double>(b - a)) * (yj - ya) -
                                 (static_cast<double>(j - a)) * (yb - ya);
            const double eps = 1e-10 * (1.0 + std::fabs(ya) + std::fabs(yb) + std::fabs(yj));
            if (cross < -eps) {
                hull.pop_back();
            } else {
                break;
            }
        }
        hull.push_back(j);
    }
    std::vector<double> out(y.size());
    for (std::size_t seg = 0; seg + 1 < hull.size(); ++seg) {
        const int a = hull[seg], b = hull[seg + 1];
        out[static_cast<std::size_t>(a)] = y[static_cast<std::size_t>(a)];
        const double slope = (y[static_cast<std::size_t>(b)] - y[static_cast<std::size_t>(a)]) / (b - a);
        for (int j = a + 1; j < b; ++j) {
            out[static_cast<std::size_t>(j)] = y[static_cast<std::size_t>(a)] + (j - a) * slope;
        }
    }
    out[static_cast<std::size_t>(hull.back())] = y[static_cast<std::size_t>(hull.back())];
    return WeightSequence(std::move(out), s.label() + "^lc");
}

// ---------------------------------------------------------------------------
// Associated function omega_M(t) = sup_j ln(t^j / M_j), clamped at 0.
// The truncation witnesses the sup only while the argmax stays interior.
// ---------------------------------------------------------------------------

inline double omega_of_sequence(const WeightSequence& s, double t) {
    if (t <= 0.0) return 0.0;
    const double lt = std::log(t);
    const int n = s.truncation();
    double best = 0.0;
    int arg = 0;
    for (int j = 0; j <= n; ++j) {
        const double v = j * lt - s.log_terms()[static_cast<std::size_t>(j)];
        if (v > best) {
            best = v;
            arg = j;
        }
    }
    if (arg == n) {
        throw DomainExceeded("omega_M: sup attained at the truncation boundary (t too large)");
    }
    return best;
}

// ---------------------------------------------------------------------------
// WeightFunction: an evaluable nondecreasing weight with a declared validity
// domain.  Everything is evaluated through phi(y) = omega(e^y).
// ---------------------------------------------------------------------------

enum class OmegaForm { ClosedForm, Tabulated, FromSequence };
enum class OmegaTag { LogSquare, Power, LinearLog, None };

class WeightFunction {
public:
    // omega(t) = max(0, ln t)^2 / (4 ln q); the q-Gevrey associated weight.
    static WeightFunction log_square(double q) {
        if (!(q > 1.0)) throw SpecError("log_square weight requires q > 1");
        WeightFunction w;
        w.form_ = OmegaForm::ClosedForm;
        w.tag_ = OmegaTag::LogSquare;
        w.param_ = q;
        w.y_max_ = 690.0;
        w.normalized_ = true;
        w.convex_known_ = true;
        w.label_ = "log_square(q=" + std::to_string(q) + ")";
        return w;
    }

    // omega(t) = max(0, t^s - 1); a normalized power weight.
    static WeightFunction power(double s) {
        if (!(s > 0.0)) throw SpecError("power weight requires s > 0");
        WeightFunction w;
        w.form_ = OmegaForm::ClosedForm;
        w.tag_ = OmegaTag::Power;
        w.param_ = s;
        w.y_max_ = 690.0;
        w.normalized_ = true;
        w.convex_known_ = true;
        w.label_ = "power(s=" + std::to_string(s) + ")";
        return w;
    }

    // omega(t) = max(0, t ln(e + t) - ln(e + 1)); linear-times-log growth.
    static WeightFunction linear_log() {
        WeightFunction w;
        w.form_ = OmegaForm::ClosedForm;
        w.tag_ = OmegaTag::LinearLog;
        w.param_ = 0.0;
        w.y_max_ = 690.0;
        w.normalized_ = true;
        w.convex_known_ = true;
        w.label_ = "linear_log";
        return w;
    }

    // Tabulated on an ascending ln-t grid; linear interpolation in y = ln t.
    static WeightFunction from_table(std::vector<double> log_t, std::vector<double> values,
                                     std::string label = "table") {
        if (log_t.size() != values.size() || log_t.size() < 2) {
            throw SpecError("weight table needs matching grids with >= 2 points");
        }
        for (std::size_t i = 0; i + 1 < log_t.size(); ++i) {
            if (!(log_t[i] < log_t[i + 1])) throw SpecError("weight table grid must ascend");
            if (values[i + 1] < values[i] - 1e-12) {
                throw SpecError("weight table must be nondecreasing");
            }
        }
        if (values.front() < 0.0 || values.front() > 1e-12) {
            throw SpecError("weight table must start at omega = 0");
        }
        WeightFunction w;
        w.form_ = OmegaForm::Tabulated;
        w.tag_ = OmegaTag::None;
        w.tab_y_ = std::move(log_t);
        w.tab_val_ = std::move(values);
        w.y_max_ = w.tab_y_.back();
        w.normalized_ = w.tab_y_.front() >= 0.0 || w.value_at(0.0) <= 1e-12;
        w.convex_known_ = false;
        w.label_ = std::move(label);
        return w;
    }

    // omega_M of the backing sequence; valid up to the last quotient of the
    // log-convex regularization (beyond it the truncated sup is biased, so we
    // hard-error instead of extrapolating).
    static WeightFunction from_sequence(const WeightSequence& s) {
        WeightFunction w;
        w.form_ = OmegaForm::FromSequence;
        w.tag_ = OmegaTag::None;
        w.seq_ = std::make_shared<WeightSequence>(log_convex_minorant(s));
        const int n = w.seq_->truncation();
        w.y_max_ = w.seq_->log_term(n) - w.seq_->log_term(n - 1);
        w.normalized_ = w.seq_->log_terms()[1] >= -1e-12;
        w.convex_known_ = true;  // piecewise-linear convex in y by construction
        w.label_ = "omega_{" + s.label() + "}";
        return w;
    }

    // omega^a(t) := omega(t^a).
    WeightFunction power_composed(double a) const {
        if (!(a > 0.0)) throw SpecError("omega^a requires a > 0");
        WeightFunction w = *this;
        w.power_a_ *= a;
        w.y_max_ = y_max_ / a;
        w.label_ = label_ + "^" + std::to_string(a);
        return w;
    }

    // phi(y) = omega(e^y); throws DomainExceeded above the validated domain.
    double phi(double y) const {
        if (y > y_max_ + 1e-12) {
            throw DomainExceeded(label_ + ": evaluation beyond ln t = " + std::to_string(y_max_));
        }
        return value_at(y * power_a_);
    }

    double omega(double t) const {
        if (t <= 0.0) return 0.0;
        return phi(std::log(t));
    }

    double y_max() const { return y_max_; }
    double probe_y_max(const Config& cfg) const {
        return std::min(y_max_ * 0.999, std::log(cfg.probe_t_max));
    }
    bool normalized() const { return normalized_; }
    bool convex_known() const { return convex_known_; }
    OmegaForm form() const { return form_; }
    OmegaTag tag() const { return tag_; }
    double parameter() const { return param_; }
    double power_exponent() const { return power_a_; }
    const std::string& label() const { return label_; }
    const WeightSequence* backing_sequence() const { return seq_.get(); }

private:
    WeightFunction() = default;

    double value_at(double y) const {
        switch (form_) {
            case OmegaForm::ClosedForm:
                switch (tag_) {
                    case OmegaTag::LogSquare: {
                        const double p = std::max(0.0, y);
                        return p * p / (4.0 * std::log(param_));
                    }
                    case OmegaTag::Power:
                        return std::max(0.0, std::exp(param_ * y) - 1.0);
                    case OmegaTag::LinearLog: {
                        const double t = std::exp(y);
                        static const double c0 = std::log(std::exp(1.0) + 1.0);
                        return std::max(0.0, t * std::log(std::exp(1.0) + t) - c0);
                    }
                    default:
                        return 0.0;
                }
            case OmegaForm::Tabulated: {
                if (y <= tab_y_.front()) return tab_val_.front();
                const auto it = std::lower_bound(tab_y_.begin(), tab_y_.end(), y);
                const std::size_t i = static_cast<std::size_t>(it - tab_y_.begin());
                if (i >= tab_y_.size()) return tab_val_.back();
                if (i == 0) return tab_val_.front();
                const double w = (y - tab_y_[i - 1]) / (tab_y_[i] - tab_y_[i - 1]);
                return tab_val_[i - 1] + w * (tab_val_[i] - tab_val_[i - 1]);
            }
            case OmegaForm::FromSequence: {
                const std::vector<double>& lm = seq_->log_terms();
                double best = 0.0;
                for (std::size_t j = 0; j < lm.size(); ++j) {
                    best = std::max(best, static_cast<double>(j) * y - lm[j]);
                }
                return best;
            }
        }
        return 0.0;
    }

    OmegaForm form_ = OmegaForm::ClosedForm;
    OmegaTag tag_ = OmegaTag::None;
    double param_ = 0.0;
    double power_a_ = 1.0;
    double y_max_ = 0.0;
    bool normalized_ = false;
    bool convex_known_ = false;
    std::string label_;
    std::vector<double> tab_y_, tab_val_;
    std::shared_ptr<const WeightSequence> seq_;
};

// ---------------------------------------------------------------------------
// Sequence recovery: M_j = sup_t t^j / exp(omega(t)).  For omega = omega_M
// with M log-convex this reproduces logM; in general it yields the log-convex
// minorant.
// ---------------------------------------------------------------------------

inline WeightSequence recover_sequence(const WeightFunction& w, int n,
                                       const Config& cfg = default_config()) {
    if (n < 8) throw SpecError("recover_sequence: N >= 8 required");
    const double y_hi =
        w.form() == OmegaForm::FromSequence ? w.y_max() : w.y_max() * 0.9999;
    double y_lo = -1.0;
    if (w.form() == OmegaForm::FromSequence) {
        // extend below the first quotient so non-normalized tables recover
        const WeightSequence* base = w.backing_sequence();
        y_lo = std::min(y_lo, base->log_term(1) - base->log_term(0) - 1.0);
    }
    const int coarse = std::max(512, cfg.grid_per_decade);
    std::vector<double> out(static_cast<std::size_t>(n) + 1, 0.0);
    for (int j = 0; j <= n; ++j) {
        double best = -std::numeric_limits<double>::infinity();
        int best_i = 0;
        for (int i = 0; i <= coarse; ++i) {
            const double y = y_lo + (y_hi - y_lo) * i / coarse;
            const double v = j * y - w.phi(y);
            if (v > best) {
                best = v;
                best_i = i;
            }
        }
        if (best_i == coarse && j > 0) {
            // For omega = omega_M the sup over [0, m_{N-1}] equals the
            // minorant term for every j <= N even when attained at the
            // endpoint; only j beyond the backing truncation is biased.
            // Elsewhere a boundary argmax that is still climbing is biased.
            bool biased;
            if (w.form() == OmegaForm::FromSequence) {
                biased = j > w.backing_sequence()->truncation();
            } else {
                const double delta = (y_hi - y_lo) * 1e-7;
                const double slope = ((j * y_hi - w.phi(y_hi)) -
                                      (j * (y_hi - delta) - w.phi(y_hi - delta))) / delta;
                biased = slope > 1e-6;
            }
            if (biased) {
                throw ArgmaxOnBoundary("recover_sequence: argmax for j=" + std::to_string(j) +
                                       " sits at the domain boundary");
            }
        }
        const double step = (y_hi - y_lo) / coarse;
        const double a = y_lo + step * std::max(0, best_i - 1);
        const double b = y_lo + step * std::min(coarse, best_i + 1);
        const auto refined = golden_max([&](double y) { return j * y - w.phi(y); }, a, b, 1e-11);
        out[static_cast<std::size_t>(j)] = std::max(best, refined.second);
    }
    out[0] = std::max(out[0], 0.0);
    if (out[0] > 1e-9) {
        throw SpecError("recover_sequence: omega is not normalized enough to give M_0 = 1");
    }
    out[0] = 0.0;
    return WeightSequence(std::move(out), "recovered(" + w.label() + ")");
}

// ---------------------------------------------------------------------------
// Legendre-Fenchel-Young conjugate phi*(x) = sup_{y >= 0} (x y - omega(e^y)).
// Ternary search when phi is known convex, dense scan + refinement otherwise.
// ---------------------------------------------------------------------------

inline double legendre_conjugate(const WeightFunction& w, double x,
                                 const Config& cfg = default_config(),
                                 bool convex_hint = false) {
    (void)cfg;
    if (x < 0.0) throw SpecError("legendre_conjugate: x >= 0 required");
    const double y_hi = w.y_max() * 0.9999;
    const auto objective = [&](double y) { return x * y - w.phi(y); };
    double arg = 0.0, val = 0.0;
    if (w.convex_known() || convex_hint) {
        double lo = 0.0, hi = y_hi;
        while (hi - lo > 1e-10 * std::max(1.0, hi)) {
            const double m1 = lo + (hi - lo) / 3.0;
            const double m2 = hi - (hi - lo) / 3.0;
            if (objective(m1) < objective(m2)) {
                lo = m1;
            } else {
                hi = m2;
            }
        }
        arg = 0.5 * (lo + hi);
        val = std::max({objective(arg), objective(0.0), objective(y_hi)});
        if (objective(y_hi) >= val && objective(y_hi) > objective(0.0)) arg = y_hi;
    } else {
        const int coarse = 4096;
        double best = -std::numeric_limits<double>::infinity();
        int best_i = 0;
        for (int i = 0; i <= coarse; ++i) {
            const double y = y_hi * i / coarse;
            const double v = objective(y);
            if (v > best) {
                best = v;
                best_i = i;
            }
        }
        const double step = y_hi / coarse;
        const auto refined = golden_max(objective, step * std::max(0, best_i - 1),
                                        std::min(y_hi, step * (best_i + 1)), 1e-11);
        arg = refined.first;
        val = std::max(best, refined.second);
    }
    if (x > 0.0 && arg >= y_hi - 1e-6 * std::max(1.0, y_hi)) {
        // boundary argmax is truncation-biased only if still climbing there
        const double delta = std::max(1e-9, y_hi * 1e-7);
        const double slope = (objective(y_hi) - objective(y_hi - delta)) / delta;
        if (slope > 1e-6) {
            throw ArgmaxOnBoundary("legendre_conjugate: argmax at the domain boundary for x=" +
                                   std::to_string(x));
        }
    }
    return val;
}

// ---------------------------------------------------------------------------
// Weight-function conditions (omega_0)..(omega_6) and (alpha_0).
// Asymptotic statements are decided on [1, probe_t_max] with the trace
// heuristics; the raw traces are part of every report.
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<double> omega_probe_grid(const WeightFunction& w, const Config& cfg) {
    const double y_top = w.probe_y_max(cfg);
    const double step = std::log(10.0) / cfg.grid_per_decade;
    std::vector<double> ys;
    for (double y = 0.0; y <= y_top; y += step) ys.push_back(y);
    if (ys.size() < 16) throw DomainExceeded("weight function domain too small to probe");
    return ys;
}

inline std::vector<std::size_t> quarter_prefixes(std::size_t n) {
    return {n / 4, n / 2, 3 * n / 4, n - 1};
}

}  // namespace detail

inline std::map<std::string, ConditionReport> check_omega_conditions(
    const WeightFunction& w, const Config& cfg = default_config()) {
    std::map<std::string, ConditionReport> out;
    const std::vector<double> ys = detail::omega_probe_grid(w, cfg);
    std::vector<double> vals(ys.size());
    for (std::size_t i = 0; i < ys.size(); ++i) vals[i] = w.phi(ys[i]);
    const std::size_t m = ys.size();
    const auto prefixes = detail::quarter_prefixes(m);

    {  // (omega_0): normalized nondecreasing weight, omega(1) = 0
        ConditionReport rep;
        rep.condition = "(omega0)";
        bool mono = true;
        for (std::size_t i = 0; i + 1 < m; ++i) {
            if (vals[i + 1] < vals[i] - 1e-12) mono = false;
        }
        const bool ok = mono && w.normalized() && vals[0] <= 1e-12;
        rep.trace = {{static_cast<double>(m), ok ? 0.0 : 1.0}};
        rep.verdict = ok ? Verdict::WitnessedUpToN : Verdict::FailsAtTruncation;
        out["(omega0)"] = rep;
    }

    {  // (omega_1): omega(2t) <= L (omega(t) + 1)
        ConditionReport rep;
        rep.condition = "(omega1)";
        for (std::size_t p : prefixes) {
            double best = 0.0;
            for (std::size_t i = 0; i <= p; ++i) {
                if (ys[i] + kLog2 > ys[p]) break;
                best = std::max(best, w.phi(ys[i] + kLog2) / (vals[i] + 1.0));
            }
            rep.trace.emplace_back(std::exp(ys[p]), best);
        }
        rep.verdict = classify_trace(rep.trace, generic_policy(cfg));
        rep.witness["L"] = rep.trace.back().second;
        out["(omega1)"] = rep;
    }

    {  // (omega_2): omega(t) = O(t) — prefix max of omega(t)/t
        ConditionReport rep;
        rep.condition = "(omega2)";
        for (std::size_t p : prefixes) {
            double best = 0.0;
            for (std::size_t i = 0; i <= p; ++i) {
                best = std::max(best, vals[i] * std::exp(-ys[i]));
            }
            rep.trace.emplace_back(std::exp(ys[p]), best);
        }
        rep.verdict = classify_trace(rep.trace, generic_policy(cfg));
        rep.witness["C"] = rep.trace.back().second;
        out["(omega2)"] = rep;
    }

    {  // (omega_5): omega(t) = o(t) — tail-window sup of omega(t)/t must vanish
        ConditionReport rep;
        rep.condition = "(omega5)";
        for (std::size_t p : prefixes) {
            double best = 0.0;
            for (std::size_t i = p / 2; i <= p; ++i) {
                best = std::max(best, vals[i] * std::exp(-ys[i]));
            }
            rep.trace.emplace_back(std::exp(ys[p]), best);
        }
        rep.verdict = classify_vanishing_trace(rep.trace, cfg);
        out["(omega5)"] = rep;
    }

    {  // (omega_3): ln t = o(omega(t)) — tail-window sup of ln t / omega(t)
        ConditionReport rep;
        rep.condition = "(omega3)";
        for (std::size_t p : prefixes) {
            double best = 0.0;
            for (std::size_t i = p / 2; i <= p; ++i) {
                if (vals[i] > 0.0) best = std::max(best, ys[i] / vals[i]);
            }
            rep.trace.emplace_back(std::exp(ys[p]), best);
        }
        rep.verdict = classify_vanishing_trace(rep.trace, cfg);
        out["(omega3)"] = rep;
    }

    {  // (omega_4): convexity of y -> omega(e^y), exact finite differences
        ConditionReport rep;
        rep.condition = "(omega4)";
        int bad = 0;
        double worst = 0.0;
        for (std::size_t i = 1; i + 1 < m; ++i) {
            const double d2 = vals[i - 1] + vals[i + 1] - 2.0 * vals[i];
            const double scale = std::max({1.0, std::fabs(vals[i - 1]), std::fabs(vals[i + 1])});
            if (d2 < -1e-9 * scale) {
                ++bad;
                if (d2 < worst) {
                    worst = d2;
                    rep.failure_site = {static_cast<int>(i), static_cast<int>(i)};
                }
            }
        }
        rep.trace = {{static_cast<double>(m), static_cast<double>(bad)}};
        rep.verdict = bad == 0 ? Verdict::WitnessedUpToN : Verdict::FailsAtTruncation;
        out["(omega4)"] = rep;
    }

    {  // (omega_6): 2 omega(t) <= omega(Ht) + H for some H
        ConditionReport rep;
        rep.condition = "(omega6)";
        for (std::size_t p : prefixes) {
            double best_h = std::numeric_limits<double>::infinity();
            for (double h = 2.0; h <= 4096.0; h *= 2.0) {
                const double lh = std::log(h);
                double deficit = 0.0;
                for (std::size_t i = 0; i <= p; ++i) {
                    if (ys[i] + lh > w.y_max() * 0.9999) break;
                    deficit = std::max(deficit, 2.0 * vals[i] - w.phi(ys[i] + lh));
                }
                if (deficit <= h) {
                    best_h = h;
                    break;
                }
            }
            rep.trace.emplace_back(std::exp(ys[p]),
                                   std::isfinite(best_h) ? std::log(best_h) : 20.0);
        }
        rep.verdict = classify_trace(rep.trace, generic_policy(cfg));
        rep.witness["lnH"] = rep.trace.back().second;
        out["(omega6)"] = rep;
    }

    {  // (alpha_0): omega(lambda t) <= C lambda omega(t), lambda >= 1, large t
        ConditionReport rep;
        rep.condition = "(alpha0)";
        std::vector<double> lambdas;
        for (double l = 2.0; l <= cfg.lambda_max; l *= 2.0) lambdas.push_back(l);
        const auto lam_prefix = detail::quarter_prefixes(lambdas.size());
        const double y_abs_top = w.y_max() * 0.9999;
        for (std::size_t lp : lam_prefix) {
            double best = 0.0;
            for (std::size_t li = 0; li <= lp; ++li) {
                const double ll = std::log(lambdas[li]);
                const double y_top = std::min(ys.back(), y_abs_top - ll);
                if (y_top <= 0.5) continue;
                const double y_from = 0.5 * y_top;
                for (std::size_t i = 0; i < m; ++i) {
                    if (ys[i] < y_from) continue;
                    if (ys[i] > y_top) break;
                    if (vals[i] <= 0.0) continue;
                    best = std::max(best, w.phi(ys[i] + ll) / (lambdas[li] * vals[i]));
                }
            }
            rep.trace.emplace_back(lambdas[lp], best);
        }
        rep.verdict = classify_trace(rep.trace, generic_policy(cfg));
        rep.witness["C"] = rep.trace.back().second;
        out["(alpha0)"] = rep;
    }

    return out;
}

inline ConditionReport check_alpha0(const WeightFunction& w, const Config& cfg = default_config()) {
    return check_omega_conditions(w, cfg).at("(alpha0)");
}

// ---------------------------------------------------------------------------
// Power identity omega_M(t^beta) = beta * omega_{M^{1/beta}}(t); both sides
// returned so the harness can assert agreement.
// ---------------------------------------------------------------------------

inline std::pair<double, double> power_transform(const WeightSequence& s, double beta, double t) {
    if (!(beta > 0.0) || !(t > 0.0)) throw SpecError("power_transform: beta > 0, t > 0");
    const double lhs = omega_of_sequence(s, std::pow(t, beta));
    std::vector<double> scaled(s.log_terms().size());
    for (std::size_t j = 0; j < scaled.size(); ++j) scaled[j] = s.log_terms()[j] / beta;
    const WeightSequence root(std::move(scaled), s.label() + "^{1/beta}");
    const double rhs = beta * omega_of_sequence(root, t);
    return {lhs, rhs};
}

}  // namespace weightcalc

#endif  // WEIGHTCALC_WEIGHT_FUNCTION_HPP
