#include <catch2/catch.hpp>

#include <cmath>
#include <vector>

#include "weightcalc/stability.hpp"

using namespace weightcalc;

namespace {

WeightMatrix gbar_matrix(double beta, int n = 64) {
    return make_constant_matrix(WeightSequence::gevrey_bar(beta, n), {1.0, 2.0, 4.0});
}

}  // namespace

TEST_CASE("triviality screen", "[stability]") {
    auto wide_trivial = triviality_screen(gbar_matrix(0.3), 1.5);
    REQUIRE(wide_trivial.has_value());
    CHECK(wide_trivial->verdict == Stability::TrivialClass);
    CHECK(wide_trivial->justification == StabilityJustification::TrivialRemarkI);

    auto narrow_trivial = triviality_screen(gbar_matrix(-1.5), 0.5);
    REQUIRE(narrow_trivial.has_value());
    CHECK(narrow_trivial->verdict == Stability::TrivialClass);
    CHECK(narrow_trivial->justification == StabilityJustification::TrivialRemarkII);

    auto boundary = triviality_screen(gbar_matrix(-0.5), 0.5);
    REQUIRE(boundary.has_value());
    CHECK(boundary->justification == StabilityJustification::ReductionRemarkIII);

    CHECK_FALSE(triviality_screen(gbar_matrix(2.0), 0.5).has_value());
    CHECK_FALSE(triviality_screen(gbar_matrix(2.0), 1.5).has_value());
}

TEST_CASE("narrow-sector classification", "[stability]") {
    auto stable = classify_narrow(gbar_matrix(2.0), 0.5);
    CHECK(stable.verdict == Stability::StableComposition);
    CHECK(stable.justification == StabilityJustification::NarrowThm);

    auto unstable = classify_narrow(gbar_matrix(0.2), 0.5);
    CHECK(unstable.verdict == Stability::NotStable);

    auto assoc = matrix_from_omega(WeightFunction::log_square(1.5), {0.25, 0.5, 1.0, 2.0, 4.0}, 64);
    auto qgev = classify_narrow(assoc.matrix, 1.0);
    CHECK(qgev.verdict == Stability::StableComposition);

    // beta = alpha - 1 routes through the Remark-iii reduction and fails (rai)
    auto reduced = classify_narrow(gbar_matrix(-0.5), 0.5);
    CHECK(reduced.verdict == Stability::NotStable);
    CHECK(reduced.justification == StabilityJustification::ReductionRemarkIII);
}

TEST_CASE("wide-sector classification", "[stability]") {
    auto stable = classify_wide(gbar_matrix(2.0), 1.5);
    CHECK(stable.verdict == Stability::StableComposition);
    CHECK(stable.justification == StabilityJustification::WideThm);

    auto family = classify_wide(make_power_family(3.0, {1.0, 2.0, 4.0}, 64), 2.0);
    CHECK(family.verdict == Stability::StableComposition);

    auto qgev = classify_wide(
        make_constant_matrix(WeightSequence::q_gevrey(1.5, 64), {1.0, 2.0}), 3.0);
    CHECK(qgev.verdict == Stability::StableComposition);

    // gamma gate failure is honest Inconclusive, never coerced to NotStable:
    // quotients whose local exponent drifts from 2.8 down toward ~1.2 pass
    // the growth screen on average but carry gamma(M) < alpha - 1
    std::vector<double> drift(129, 0.0);
    for (int j = 1; j <= 128; ++j) {
        const double u = std::log(static_cast<double>(j));
        const double sag = u > 2.2 ? 0.3 * (u - 2.2) * (u - 2.2) : 0.0;
        drift[static_cast<std::size_t>(j)] = drift[static_cast<std::size_t>(j - 1)] + 2.8 * u - sag;
    }
    auto drifting = make_constant_matrix(WeightSequence::from_table(drift), {1.0});
    REQUIRE(is_log_convex(drifting.row(0)));
    auto gated = classify_wide(drifting, 2.5);
    CHECK(gated.verdict == Stability::Inconclusive);
    CHECK(gated.justification == StabilityJustification::WideThm);
}

TEST_CASE("weight-function classification", "[stability]") {
    auto w = WeightFunction::log_square(1.5);
    for (double alpha : {0.5, 1.0, 2.0, 3.0}) {
        auto v = classify_omega(w, alpha);
        INFO("alpha = " << alpha);
        CHECK(v.verdict == Stability::StableComposition);
        CHECK_FALSE(v.internal_inconsistency);
    }
    auto bad = classify_omega(WeightFunction::linear_log(), 1.0);
    CHECK(bad.verdict == Stability::NotStable);
}

TEST_CASE("omega route agrees with the matrix route for alpha <= 1", "[stability][property]") {
    std::vector<WeightFunction> registry;
    registry.push_back(WeightFunction::log_square(1.5));
    registry.push_back(WeightFunction::log_square(std::exp(1.0)));
    registry.push_back(WeightFunction::power(0.5));
    registry.push_back(WeightFunction::power(1.0));
    for (const auto& w : registry) {
        for (double alpha : {0.5, 1.0}) {
            auto via_omega = classify_omega(w, alpha);
            auto assoc = matrix_from_omega(w, default_config().ell_grid, 64);
            auto via_matrix = classify_narrow(assoc.matrix, alpha);
            INFO(w.label() << " alpha=" << alpha << ": omega "
                           << to_string(via_omega.verdict) << " matrix "
                           << to_string(via_matrix.verdict));
            const auto stable = [](Stability s) {
                return s == Stability::StableComposition || s == Stability::StableHoloInverse;
            };
            CHECK(stable(via_omega.verdict) == stable(via_matrix.verdict));
        }
    }
}

TEST_CASE("verdicts are invariant under R-equivalence", "[stability][property]") {
    auto g = make_constant_matrix(WeightSequence::gevrey(2.0, 64), {1.0, 2.0});
    auto gb = make_constant_matrix(WeightSequence::gevrey_bar(2.0, 64), {1.0, 2.0});
    REQUIRE(r_equivalent(g, gb).verdict == Verdict::WitnessedUpToN);
    for (double alpha : {0.5, 1.0, 1.5}) {
        CHECK(classify_matrix(g, alpha).verdict == classify_matrix(gb, alpha).verdict);
    }
    // constant matrices behave like their single sequence
    auto single = make_constant_matrix(WeightSequence::gevrey(2.0, 64), {1.0});
    for (double alpha : {0.5, 1.5}) {
        CHECK(classify_matrix(single, alpha).verdict == classify_matrix(g, alpha).verdict);
    }
}

TEST_CASE("the (alpha_0) <-> (M_rai) bridge on the registry", "[stability][property]") {
    struct Entry {
        WeightFunction w;
        const char* name;
    };
    std::vector<Entry> registry;
    registry.push_back({WeightFunction::log_square(1.5), "log_square(1.5)"});
    registry.push_back({WeightFunction::log_square(std::exp(1.0)), "log_square(e)"});
    registry.push_back({WeightFunction::power(0.5), "power(0.5)"});
    registry.push_back({WeightFunction::power(1.0), "power(1.0)"});
    registry.push_back({WeightFunction::power(2.0), "power(2.0)"});
    registry.push_back({WeightFunction::linear_log(), "linear_log"});
    for (const auto& [w, name] : registry) {
        const auto alpha0 = check_alpha0(w);
        const auto assoc = matrix_from_omega(w, default_config().ell_grid, 64);
        const auto rai = check_matrix_condition(assoc.matrix, MatrixCondition::RootAlmostIncreasing);
        INFO(name << ": alpha0 " << to_string(alpha0.verdict) << ", M_rai "
                  << to_string(rai.verdict));
        CHECK(alpha0.verdict == rai.verdict);
    }
}

TEST_CASE("Gevrey map closed form at the spec's cells", "[stability]") {
    CHECK(gevrey_closed_form(0.5, 2.0) == Stability::StableComposition);
    CHECK(gevrey_closed_form(0.5, 0.2) == Stability::NotStable);
    CHECK(gevrey_closed_form(1.5, 0.3) == Stability::TrivialClass);
    CHECK(gevrey_closed_form(0.5, -0.5) == Stability::NotStable);   // beta = alpha-1 snap
    CHECK(gevrey_closed_form(0.5, -0.8) == Stability::TrivialClass);
    CHECK(gevrey_closed_form(2.0, 1.0) == Stability::TrivialClass);  // boundary beta = alpha-1
    CHECK(gevrey_closed_form(1.8, 0.9) == Stability::NotStable);
}

TEST_CASE("Gevrey map pipeline agreement on a coarse grid", "[stability]") {
    std::vector<double> alphas, betas;
    for (double a = 0.25; a <= 3.26; a += 0.5) alphas.push_back(a);
    for (double b = -1.8; b <= 2.8; b += 0.4) betas.push_back(b);
    auto cells = gevrey_map(alphas, betas);
    int inconclusive = 0;
    for (const auto& cell : cells) {
        INFO("alpha=" << cell.alpha << " beta=" << cell.beta << " closed "
                      << to_string(cell.closed_form) << " pipeline "
                      << to_string(cell.pipeline));
        REQUIRE(cell.agree);
        if (cell.pipeline == Stability::Inconclusive) ++inconclusive;
    }
    CHECK(inconclusive == 0);
}

TEST_CASE("class equality evidence via Gorny-Cartan factors", "[stability]") {
    // non-(lc) perturbation of G^2
    auto g2 = WeightSequence::gevrey(2.0, 32);
    std::vector<double> bumpy = g2.log_terms();
    for (int j = 3; j <= 32; j += 5) bumpy[static_cast<std::size_t>(j)] += 0.4;
    auto m = make_constant_matrix(WeightSequence::from_table(bumpy), {1.0});
    auto ma = build_m_alpha(m, 0.5);

    std::vector<Jet> probes;
    Jet probe;
    probe.derivs.resize(33);
    for (int j = 0; j <= 32; ++j) {
        probe.derivs[static_cast<std::size_t>(j)] = std::exp(ma.row(0).log_term(j));
    }
    probes.push_back(probe);
    auto rep = class_equality_demo(m, 0.5, probes);
    REQUIRE(rep.probes.size() == 1);
    CHECK(rep.probes[0].certified_m);
    CHECK(rep.probes[0].certified_m_alpha);
    CHECK(rep.probes[0].within_factor);
    CHECK(rep.gorny_a == Approx(8.0 * kPi));

    // minorant direction: every M^alpha certificate is an M certificate verbatim
    auto cert_alpha = membership_certificate(probe, ma.row(0));
    auto cert_m = membership_certificate(probe, m.row(0));
    CHECK(cert_m.h <= cert_alpha.h + 1e-12);
}
