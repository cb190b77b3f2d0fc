#ifndef WEIGHTCALC_ANALYTIC_HPP
#define WEIGHTCALC_ANALYTIC_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "weightcalc/common.hpp"
#include "weightcalc/sequence.hpp"
#include "weightcalc/special.hpp"

namespace weightcalc {

using Complex = std::complex<double>;

// ---------------------------------------------------------------------------
// Jets and sector points
// ---------------------------------------------------------------------------

// Derivatives f^(j)(0), j = 0..N, with the origin recorded.
struct Jet {
    std::vector<Complex> derivs;
    std::string source;

    int order() const { return static_cast<int>(derivs.size()) - 1; }
};

// Point on the Riemann surface of the logarithm; theta is unbounded.
struct SectorPoint {
    double r = 0.0;
    double theta = 0.0;

    bool in_sector(double alpha) const { return std::fabs(theta) < alpha * kPi / 2.0; }
    Complex value() const { return std::polar(r, theta); }
};

struct EvalResult {
    Complex value;
    double error_estimate = 0.0;
};

// ---------------------------------------------------------------------------
// Two-parametric Mittag-Leffler function E_{A,B}(z) = sum z^j / Gamma(Aj+B).
// The series is entire, but float cancellation makes large |z| unreliable, so
// evaluation is confined to a guard radius.
// ---------------------------------------------------------------------------

inline EvalResult mittag_leffler(Complex a, Complex b, Complex z,
                                 const Config& cfg = default_config()) {
    if (!(a.real() > 0.0)) throw SpecError("mittag_leffler: Re(A) > 0 required");
    if (std::abs(z) > cfg.z_reliable) {
        throw ReliabilityExceeded("mittag_leffler: |z| exceeds the series guard radius");
    }
    Complex sum = 0.0;
    double max_mag = 0.0;
    const Complex logz = z == 0.0 ? Complex{0.0, 0.0} : std::log(z);
    const double j_min = 2.0 * std::pow(std::abs(z), 1.0 / a.real());
    int consecutive_small = 0;
    double last_term = 0.0;
    for (int j = 0; j < 10000; ++j) {
        Complex term;
        if (j == 0) {
            term = std::exp(-log_gamma(b));
        } else if (z == 0.0) {
            break;
        } else {
            term = std::exp(static_cast<double>(j) * logz - log_gamma(a * static_cast<double>(j) + b));
        }
        sum += term;
        max_mag = std::max(max_mag, std::abs(sum));
        last_term = std::abs(term);
        if (last_term < cfg.eps_term * std::max(1e-300, std::abs(sum))) {
            if (++consecutive_small >= 3 && j > j_min) break;
        } else {
            consecutive_small = 0;
        }
    }
    return {sum, last_term + max_mag * 1e-16};
}

// ---------------------------------------------------------------------------
// The basic function E~_alpha(z) = E_{2-alpha, 4-alpha}(-z) and its jets.
// ---------------------------------------------------------------------------

inline EvalResult e_alpha(double alpha, Complex z, const Config& cfg = default_config()) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw SpecError("e_alpha: alpha in (0,1] required");
    return mittag_leffler(2.0 - alpha, 4.0 - alpha, -z, cfg);
}

// E~_alpha^{(n)}(0) = (-1)^n n! / Gamma((2-alpha)(n+1)+2), exactly via lgamma.
inline Jet e_alpha_jet(double alpha, int n) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw SpecError("e_alpha_jet: alpha in (0,1] required");
    Jet jet;
    jet.source = "MittagLeffler(alpha=" + std::to_string(alpha) + ")";
    jet.derivs.resize(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) {
        const double mag =
            std::exp(log_factorial(k) - log_gamma((2.0 - alpha) * (k + 1.0) + 2.0));
        jet.derivs[static_cast<std::size_t>(k)] = (k % 2 == 0 ? mag : -mag);
    }
    return jet;
}

// n-th derivative of E~_alpha by the term-wise differentiated series.
inline EvalResult e_alpha_derivative(double alpha, int n, Complex z,
                                     const Config& cfg = default_config()) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw SpecError("e_alpha_derivative: alpha in (0,1]");
    if (std::abs(z) > cfg.z_reliable) {
        throw ReliabilityExceeded("e_alpha_derivative: |z| exceeds the series guard radius");
    }
    Complex sum = 0.0;
    double max_mag = 0.0, last_term = 0.0;
    const Complex logz = z == 0.0 ? Complex{0.0, 0.0} : std::log(z);
    const double j_min = 2.0 * std::pow(std::abs(z), 1.0 / (2.0 - alpha));
    int consecutive_small = 0;
    for (int i = 0; i < 10000; ++i) {
        const double lcoef = log_factorial(i + n) - log_factorial(i) -
                             log_gamma((2.0 - alpha) * (i + n + 1.0) + 2.0);
        Complex term;
        if (i == 0) {
            term = std::exp(Complex{lcoef, 0.0});
        } else if (z == 0.0) {
            break;
        } else {
            term = std::exp(static_cast<double>(i) * logz + lcoef);
        }
        if ((i + n) % 2 != 0) term = -term;
        sum += term;
        max_mag = std::max(max_mag, std::abs(sum));
        last_term = std::abs(term);
        if (last_term < cfg.eps_term * std::max(1e-300, std::abs(sum))) {
            if (++consecutive_small >= 3 && i > j_min) break;
        } else {
            consecutive_small = 0;
        }
    }
    return {sum, last_term + max_mag * 1e-16};
}

// Checks |E~_alpha^{(n)}(z)| <= 2 n! e^n / n^{(2-alpha) n} on the samples.
struct BoundCheckReport {
    double max_ratio = 0.0;
    bool holds = false;
    struct Sample {
        int n;
        SectorPoint z;
        double ratio;
    };
    std::vector<Sample> samples;
};

inline BoundCheckReport e_alpha_bound_check(double alpha, int n_max,
                                            const std::vector<SectorPoint>& points,
                                            const Config& cfg = default_config()) {
    BoundCheckReport rep;
    for (int n = 0; n <= n_max; ++n) {
        // log bound; 0^0 := 1 at n = 0
        const double log_bound = std::log(2.0) + log_factorial(n) + n -
                                 (n == 0 ? 0.0 : (2.0 - alpha) * n * std::log(static_cast<double>(n)));
        for (const SectorPoint& p : points) {
            if (!p.in_sector(alpha) && p.r > 0.0) {
                throw OutsideSector("e_alpha_bound_check: sample outside S_alpha");
            }
            const EvalResult v = e_alpha_derivative(alpha, n, p.value(), cfg);
            const double ratio = std::abs(v.value) * std::exp(-log_bound);
            rep.samples.push_back({n, p, ratio});
            rep.max_ratio = std::max(rep.max_ratio, ratio);
        }
    }
    rep.holds = rep.max_ratio <= 1.0 + 1e-9;
    return rep;
}

// ---------------------------------------------------------------------------
// g_{alpha,alpha'}(z) = int_0^{inf(-phi)} exp(-z v^{alpha'-1}) exp(-v) dv for
// sectors wider than a half-plane, together with its derivative integrand
// (-v^{alpha'-1})^n.  The ray angle phi is clamped to 99% of the admissible
// cone so the integrand keeps exponential decay.
// ---------------------------------------------------------------------------

inline Jet g_alpha_jet(double alpha_prime, int n) {
    if (!(alpha_prime > 1.0)) throw SpecError("g_alpha_jet: alpha' > 1 required");
    Jet jet;
    jet.source = "LaplaceG(alpha'=" + std::to_string(alpha_prime) + ")";
    jet.derivs.resize(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) {
        const double mag = std::exp(log_gamma((alpha_prime - 1.0) * k + 1.0));
        jet.derivs[static_cast<std::size_t>(k)] = (k % 2 == 0 ? mag : -mag);
    }
    return jet;
}

inline EvalResult g_alpha_eval(double alpha, double alpha_prime, SectorPoint z, int n,
                               const Config& cfg = default_config()) {
    if (!(alpha > 1.0)) throw SpecError("g_alpha_eval: alpha > 1 required");
    if (!(alpha_prime > alpha)) throw SpecError("g_alpha_eval: alpha' > alpha required");
    if (n < 0 || n > 16) throw SpecError("g_alpha_eval: derivative order 0..16");
    if (z.r > 0.0 && !z.in_sector(alpha)) throw OutsideSector("g_alpha_eval: z outside S_alpha");

    const double ap1 = alpha_prime - 1.0;
    const double phi_cone = 0.99 * (alpha - 1.0) * kPi / (2.0 * ap1);
    const double phi = std::clamp(z.theta / ap1, -phi_cone, phi_cone);
    if (std::fabs(z.theta - ap1 * phi) >= kPi / 2.0) {
        // cannot happen for z in S_alpha with the clamped ray; bug sentinel
        throw AdmissibilityFailed("g_alpha_eval: no admissible integration ray");
    }
    const double cos_phi = std::cos(phi);
    const double m = ap1 * n;
    const Complex zc = z.r > 0.0 ? z.value() : Complex{0.0, 0.0};
    const Complex ray = std::polar(1.0, -phi);

    // analytic tail: |integrand| <= rho^m exp(-rho cos phi)
    const double log_scale = log_gamma(m + 1.0) - (m + 1.0) * std::log(cos_phi);
    double r_end = 20.0;
    for (int it = 0; it < 8; ++it) {
        r_end = (std::log(1e16) + log_scale - log_gamma(m + 1.0) +
                 m * std::log(std::max(2.0, r_end))) / cos_phi;
        r_end = std::max(r_end, 20.0);
    }

    const auto integrand = [&](double rho) -> Complex {
        if (rho <= 0.0) return n == 0 ? ray : Complex{0.0, 0.0};
        const Complex v = rho * ray;
        const Complex vp = std::pow(v, ap1);
        Complex power = 1.0;
        for (int k = 0; k < n; ++k) power *= -vp;
        return power * std::exp(-zc * vp - v) * ray;
    };

    const double peak = std::max(1.0, m / cos_phi);
    std::vector<double> cuts = {0.0, 0.5 * peak, peak, 2.0 * peak, 4.0 * peak, r_end};
    cuts.erase(std::remove_if(cuts.begin(), cuts.end(), [&](double c) { return c > r_end; }),
               cuts.end());
    cuts.push_back(r_end);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    Complex total = 0.0;
    double err = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const auto q = integrate_adaptive(integrand, cuts[i], cuts[i + 1], cfg.quad_tol);
        total += q.value;
        err += q.error_estimate;
    }
    const double tail = std::exp(m * std::log(std::max(r_end, 2.0)) - cos_phi * r_end) / cos_phi;
    return {total, err + tail};
}

// ---------------------------------------------------------------------------
// T_M transform machinery.  R_j = sum_n 2^{-n} (M_n / m_n^n) m_n^j, computed
// in log-domain with the tail certified by log-convexity: for n >= j the
// terms are bounded by M_j 2^{-n}.
// ---------------------------------------------------------------------------

inline std::vector<double> r_coefficients_log(const WeightSequence& m, int j_max, double eps,
                                              const Config& cfg = default_config()) {
    (void)cfg;
    if (!is_log_convex(m)) throw SpecError("r_coefficients: M must be (lc)");
    if (!(eps > 0.0 && eps < 1.0)) throw SpecError("r_coefficients: eps in (0,1)");
    const int tail_terms = static_cast<int>(std::ceil(std::log2(1.0 / eps))) + 1;
    std::vector<double> out(static_cast<std::size_t>(j_max) + 1);
    for (int j = 0; j <= j_max; ++j) {
        const int cap = j + tail_terms;
        if (cap > m.truncation() && !m.has_extension()) {
            throw TruncationInsufficient(
                "r_coefficients: tail bound needs quotients up to n=" + std::to_string(cap) +
                " but N=" + std::to_string(m.truncation()));
        }
        std::vector<double> terms(static_cast<std::size_t>(cap) + 1);
        for (int nn = 0; nn <= cap; ++nn) {
            const double logm_n = m.log_quotient(nn);
            terms[static_cast<std::size_t>(nn)] =
                -nn * kLog2 + m.log_term(nn) + (j - nn) * logm_n;
        }
        std::sort(terms.begin(), terms.end(), std::greater<double>());
        out[static_cast<std::size_t>(j)] = log_sum_exp(terms);
    }
    return out;
}

// T_M(f)^{(j)}(0) = R_j f^{(j)}(0).
inline Jet transform_jet(const Jet& f, const WeightSequence& m,
                         const Config& cfg = default_config()) {
    const std::vector<double> log_r = r_coefficients_log(m, f.order(), 1e-10, cfg);
    Jet out;
    out.source = "Transformed(" + f.source + ", " + m.label() + ")";
    out.derivs.resize(f.derivs.size());
    for (std::size_t j = 0; j < f.derivs.size(); ++j) {
        out.derivs[j] = f.derivs[j] * std::exp(log_r[j]);
    }
    return out;
}

// An evaluable function with a cancellation guard radius and a sup bound.
struct FunctionHandle {
    std::function<Complex(Complex)> eval;
    double sup_bound = 1.0;
    double reliability_radius = 30.0;
};

// T_M(f)(z) = sum_j 2^{-j} (M_j/m_j^j) f(m_j z), truncated with tail <= eps
// (terms are bounded by sup|f| 2^{-j} since M is (lc)).
inline EvalResult transform_eval(const FunctionHandle& f, const WeightSequence& m, Complex z,
                                 double eps, const Config& cfg = default_config()) {
    (void)cfg;
    if (!is_log_convex(m)) throw SpecError("transform_eval: M must be (lc)");
    const int cap =
        static_cast<int>(std::ceil(std::log2(std::max(2.0, f.sup_bound / eps)))) + 1;
    if (cap > m.truncation() && !m.has_extension()) {
        throw TruncationInsufficient("transform_eval: truncation " + std::to_string(cap) +
                                     " terms needed");
    }
    Complex sum = 0.0;
    for (int j = 0; j <= cap; ++j) {
        const double logm_j = m.log_quotient(j);
        const double arg_mag = std::exp(logm_j) * std::abs(z);
        if (arg_mag > f.reliability_radius) {
            throw ReliabilityExceeded("transform_eval: |m_j z| = " + std::to_string(arg_mag) +
                                      " beyond the handle's radius at j=" + std::to_string(j));
        }
        const double coef = std::exp(-j * kLog2 + m.log_term(j) - j * logm_j);
        sum += coef * f.eval(std::exp(logm_j) * z);
    }
    return {sum, 2.0 * f.sup_bound * std::exp(-cap * kLog2)};
}

// ---------------------------------------------------------------------------
// Characteristic criteria (Def. 4.1 chain): (1) jet equivalent to L implies
// (2) sup sequence equivalent to L implies (3) f characteristic.  Only the
// downward implications are ever claimed.
// ---------------------------------------------------------------------------

struct CharacteristicReport {
    ConditionReport jet_vs_target_forward;   // (|f^(j)(0)|) ⪯ L
    ConditionReport jet_vs_target_backward;  // L ⪯ (|f^(j)(0)|)
    Verdict condition1 = Verdict::Undetermined;
    std::optional<Verdict> condition2;
    bool characteristic_implied = false;
    std::vector<int> skipped_indices;  // exact zeros, ratio undefined there
};

namespace detail {

inline ConditionReport preceq_masked(const std::vector<double>& a, const std::vector<double>& b,
                                     const std::vector<bool>& ok, int n, const Config& cfg) {
    ConditionReport rep;
    rep.condition = "preceq";
    for (int cap : trace_truncations(n)) {
        double best = -std::numeric_limits<double>::infinity();
        for (int j = 1; j <= cap; ++j) {
            if (!ok[static_cast<std::size_t>(j)]) continue;
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

inline CharacteristicReport check_characteristic_criteria(
    const Jet& f, const WeightSequence& l, const std::vector<double>* sup_bounds = nullptr,
    const Config& cfg = default_config()) {
    const int n = std::min<int>(f.order(), l.truncation());
    std::vector<double> log_d(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<bool> ok(static_cast<std::size_t>(n) + 1, true);
    CharacteristicReport rep;
    for (int j = 0; j <= n; ++j) {
        const double mag = std::abs(f.derivs[static_cast<std::size_t>(j)]);
        if (mag == 0.0) {
            ok[static_cast<std::size_t>(j)] = false;
            rep.skipped_indices.push_back(j);
        } else {
            log_d[static_cast<std::size_t>(j)] = std::log(mag);
        }
    }
    rep.jet_vs_target_forward = detail::preceq_masked(log_d, l.log_terms(), ok, n, cfg);
    rep.jet_vs_target_backward = detail::preceq_masked(l.log_terms(), log_d, ok, n, cfg);
    if (rep.jet_vs_target_forward.verdict == Verdict::WitnessedUpToN &&
        rep.jet_vs_target_backward.verdict == Verdict::WitnessedUpToN) {
        rep.condition1 = Verdict::WitnessedUpToN;
    } else if (rep.jet_vs_target_forward.verdict == Verdict::FailsAtTruncation ||
               rep.jet_vs_target_backward.verdict == Verdict::FailsAtTruncation) {
        rep.condition1 = Verdict::FailsAtTruncation;
    }
    if (sup_bounds) {
        std::vector<double> log_c(static_cast<std::size_t>(n) + 1, 0.0);
        std::vector<bool> ok_c(static_cast<std::size_t>(n) + 1, true);
        for (int j = 0; j <= n; ++j) {
            const double c = (*sup_bounds)[static_cast<std::size_t>(j)];
            if (c <= 0.0) {
                ok_c[static_cast<std::size_t>(j)] = false;
            } else {
                log_c[static_cast<std::size_t>(j)] = std::log(c);
            }
        }
        const auto fwd = detail::preceq_masked(log_c, l.log_terms(), ok_c, n, cfg);
        const auto bwd = detail::preceq_masked(l.log_terms(), log_c, ok_c, n, cfg);
        if (fwd.verdict == Verdict::WitnessedUpToN && bwd.verdict == Verdict::WitnessedUpToN) {
            rep.condition2 = Verdict::WitnessedUpToN;
        } else if (fwd.verdict == Verdict::FailsAtTruncation ||
                   bwd.verdict == Verdict::FailsAtTruncation) {
            rep.condition2 = Verdict::FailsAtTruncation;
        } else {
            rep.condition2 = Verdict::Undetermined;
        }
    }
    rep.characteristic_implied = rep.condition1 == Verdict::WitnessedUpToN;
    return rep;
}

// ---------------------------------------------------------------------------
// Faà-di-Bruno composition of jets at 0.  The caller guarantees g's jet is
// taken at the point f(0).
// ---------------------------------------------------------------------------

// Enumerates multiplicity vectors (k_1..k_n) with sum i*k_i = n.
inline void enumerate_partitions(int n, const std::function<void(const std::vector<int>&)>& emit) {
    std::vector<int> counts(static_cast<std::size_t>(n) + 1, 0);
    const std::function<void(int, int)> rec = [&](int remaining, int max_part) {
        if (remaining == 0) {
            emit(counts);
            return;
        }
        for (int part = std::min(remaining, max_part); part >= 1; --part) {
            ++counts[static_cast<std::size_t>(part)];
            rec(remaining - part, part);
            --counts[static_cast<std::size_t>(part)];
        }
    };
    rec(n, n);
}

inline Jet faa_di_bruno_compose(const Jet& g, const Jet& f, int n_max) {
    if (n_max > 24) throw SpecError("faa_di_bruno_compose: n_max <= 24");
    if (f.order() < n_max || g.order() < n_max) {
        throw SpecError("faa_di_bruno_compose: jets too short for requested order");
    }
    Jet out;
    out.source = "(" + g.source + ")o(" + f.source + ")";
    out.derivs.resize(static_cast<std::size_t>(n_max) + 1);
    out.derivs[0] = g.derivs[0];
    for (int n = 1; n <= n_max; ++n) {
        Complex acc = 0.0;
        enumerate_partitions(n, [&](const std::vector<int>& counts) {
            int k = 0;
            double log_coef = log_factorial(n);
            Complex prod = 1.0;
            for (int i = 1; i <= n; ++i) {
                const int ki = counts[static_cast<std::size_t>(i)];
                if (ki == 0) continue;
                k += ki;
                log_coef -= log_factorial(ki);
                const Complex base = f.derivs[static_cast<std::size_t>(i)] /
                                     std::exp(log_factorial(i));
                for (int rep = 0; rep < ki; ++rep) prod *= base;
            }
            acc += std::exp(log_coef) * g.derivs[static_cast<std::size_t>(k)] * prod;
        });
        out.derivs[static_cast<std::size_t>(n)] = acc;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Membership certificates: the smallest h on a geometric grid with
// max_j |f^(j)(0)| / (h^j M_j) below the configured cap.  Jet-only evidence is
// necessary-condition only: |f^(j)(0)| <= C_j(f).
// ---------------------------------------------------------------------------

struct MembershipCertificate {
    double h = 0.0;
    double norm = 0.0;
    enum class Basis { JetOnly, SampledSup } basis = Basis::JetOnly;
    std::vector<std::pair<double, double>> h_trace;  // (J, ln h_min(J))
};

namespace detail {

inline MembershipCertificate certificate_from_logs(const std::vector<double>& log_d,
                                                   const std::vector<bool>& present,
                                                   const WeightSequence& m,
                                                   MembershipCertificate::Basis basis,
                                                   const Config& cfg) {
    const int n = std::min<int>(static_cast<int>(log_d.size()) - 1, m.truncation());
    const double log_cap = std::log(cfg.membership_cap);
    MembershipCertificate cert;
    cert.basis = basis;
    // cap-free scale statistic: the h any certificate must at least carry is
    // max_{1<=j<=J} ((log|d_j| - logM_j)/j); growth of this trace across
    // doublings is the evidence against membership at truncation.
    const auto raw_lnh = [&](int cap) {
        double worst = -std::numeric_limits<double>::infinity();
        for (int j = 1; j <= cap; ++j) {
            if (!present[static_cast<std::size_t>(j)]) continue;
            worst = std::max(worst, (log_d[static_cast<std::size_t>(j)] -
                                     m.log_terms()[static_cast<std::size_t>(j)]) / j);
        }
        return worst;
    };
    for (int cap : trace_truncations(n)) cert.h_trace.emplace_back(cap, raw_lnh(cap));
    const double lnh_last = cert.h_trace.back().second;
    const double lnh_half = cert.h_trace[cert.h_trace.size() / 2 - 1].second;
    if (std::isfinite(lnh_half) && lnh_last - lnh_half > cfg.tau_grow) {
        throw NoFiniteH("membership: required h keeps growing with the truncation");
    }
    const auto min_h = [&](int cap) -> double {
        for (double h = cfg.h_grid_min; h <= cfg.h_grid_max * 1.0000001; h *= cfg.h_grid_factor) {
            const double lh = std::log(h);
            double worst = -std::numeric_limits<double>::infinity();
            for (int j = 0; j <= cap; ++j) {
                if (!present[static_cast<std::size_t>(j)]) continue;
                worst = std::max(worst, log_d[static_cast<std::size_t>(j)] - j * lh -
                                            m.log_terms()[static_cast<std::size_t>(j)]);
            }
            if (worst <= log_cap) return h;
        }
        return std::numeric_limits<double>::quiet_NaN();
    };
    const double h_full = min_h(n);
    if (std::isnan(h_full)) {
        throw NoFiniteH("membership: no h on the grid certifies the norm cap");
    }
    cert.h = h_full;
    double worst = 0.0;
    for (int j = 0; j <= n; ++j) {
        if (!present[static_cast<std::size_t>(j)]) continue;
        worst = std::max(worst, std::exp(log_d[static_cast<std::size_t>(j)] -
                                         j * std::log(h_full) -
                                         m.log_terms()[static_cast<std::size_t>(j)]));
    }
    cert.norm = worst;
    return cert;
}

}  // namespace detail

inline MembershipCertificate membership_certificate(const Jet& f, const WeightSequence& m,
                                                    const Config& cfg = default_config()) {
    std::vector<double> log_d(f.derivs.size(), 0.0);
    std::vector<bool> present(f.derivs.size(), true);
    for (std::size_t j = 0; j < f.derivs.size(); ++j) {
        const double mag = std::abs(f.derivs[j]);
        if (mag == 0.0) {
            present[j] = false;
        } else {
            log_d[j] = std::log(mag);
        }
    }
    return detail::certificate_from_logs(log_d, present, m,
                                         MembershipCertificate::Basis::JetOnly, cfg);
}

inline MembershipCertificate membership_certificate(const std::vector<double>& sampled_sups,
                                                    const WeightSequence& m,
                                                    const Config& cfg = default_config()) {
    std::vector<double> log_d(sampled_sups.size(), 0.0);
    std::vector<bool> present(sampled_sups.size(), true);
    for (std::size_t j = 0; j < sampled_sups.size(); ++j) {
        if (sampled_sups[j] <= 0.0) {
            present[j] = false;
        } else {
            log_d[j] = std::log(sampled_sups[j]);
        }
    }
    return detail::certificate_from_logs(log_d, present, m,
                                         MembershipCertificate::Basis::SampledSup, cfg);
}

// ---------------------------------------------------------------------------
// Gorny-Cartan diagnostic on sampled sup estimates; heuristic by construction
// (sampled sups under-estimate true sups on both sides).
// ---------------------------------------------------------------------------

struct GornyCartanReport {
    double constant_a = 0.0;
    double constant_q = 0.0;
    struct Row {
        int n1, n, n2;
        double lhs_log;  // ln B_n
        double rhs_log;  // ln of the interpolation bound
        double margin;   // rhs - lhs, nonnegative when the inequality holds
        bool skipped;
    };
    std::vector<Row> rows;
};

inline GornyCartanReport gorny_cartan_diagnostic(const std::vector<double>& sup_estimates,
                                                 double alpha,
                                                 const std::vector<std::array<int, 3>>& triples) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw SpecError("gorny_cartan: alpha in (0,1]");
    GornyCartanReport rep;
    if (alpha == 1.0) {
        rep.constant_a = 4.0;
        rep.constant_q = 1.0;
    } else {
        rep.constant_a = 8.0 * kPi;
        rep.constant_q = 2.0 * std::exp(1.0) * (2.0 - alpha) / (1.0 - alpha);
    }
    const auto log_b = [&](int n) {
        return (1.0 - alpha) * n * (n == 0 ? 0.0 : std::log(static_cast<double>(n))) +
               std::log(sup_estimates[static_cast<std::size_t>(n)]);
    };
    for (const auto& t : triples) {
        const int n1 = t[0], n = t[1], n2 = t[2];
        GornyCartanReport::Row row{n1, n, n2, 0.0, 0.0, 0.0, false};
        if (!(n1 < n && n < n2) || n2 >= static_cast<int>(sup_estimates.size()) ||
            sup_estimates[static_cast<std::size_t>(n1)] <= 0.0 ||
            sup_estimates[static_cast<std::size_t>(n)] <= 0.0 ||
            sup_estimates[static_cast<std::size_t>(n2)] <= 0.0) {
            row.skipped = true;
            rep.rows.push_back(row);
            continue;
        }
        const double w1 = static_cast<double>(n2 - n) / (n2 - n1);
        const double w2 = static_cast<double>(n - n1) / (n2 - n1);
        row.lhs_log = log_b(n);
        row.rhs_log = std::log(rep.constant_a) + (1.0 - alpha) * n * std::log(rep.constant_q) +
                      w1 * log_b(n1) + w2 * log_b(n2);
        row.margin = row.rhs_log - row.lhs_log;
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace weightcalc

#endif  // WEIGHTCALC_ANALYTIC_HPP
