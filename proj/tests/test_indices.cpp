#include <catch2/catch.hpp>

#include <cmath>

#include "weightcalc/indices.hpp"
#include "weightcalc/matrix.hpp"

using namespace weightcalc;

TEST_CASE("gamma(M) for Gevrey scales", "[indices]") {
    for (double a : {0.5, 1.0, 2.0}) {
        auto est = gamma_sequence(WeightSequence::gevrey(a, 64));
        INFO("a = " << a << " value " << est.value);
        CHECK_FALSE(est.infinite);
        CHECK(std::fabs(est.value - a) <= 1.0 / 32);
        CHECK(est.lower_witnessed <= est.value);
        CHECK(est.value <= est.upper_refuted);
    }
    auto inf = gamma_sequence(WeightSequence::q_gevrey(1.5, 64));
    CHECK(inf.infinite);
    CHECK(inf.value == default_config().gamma_max);

    CHECK_THROWS_AS(gamma_sequence(WeightSequence::from_table({0, 2, 1, 3, 4, 5, 6, 7, 8,
                                                               9, 10, 11, 12, 13, 14, 15, 16,
                                                               17, 18, 19, 20, 21, 22, 23, 24,
                                                               25, 26, 27, 28, 29, 30, 31, 32})),
                    SpecError);
    CHECK_THROWS_AS(gamma_sequence(WeightSequence::gevrey(1.0, 16)), SpecError);
}

TEST_CASE("no witnessed/failed inversion along the probe ladder", "[indices][property]") {
    for (double a : {0.5, 1.7}) {
        auto s = WeightSequence::gevrey_bar(a, 128);
        auto est = gamma_sequence(s);
        double max_witnessed = -1e300, min_failed = 1e300;
        for (const auto& p : est.trace) {
            if (p.witnessed) max_witnessed = std::max(max_witnessed, p.gamma);
            else min_failed = std::min(min_failed, p.gamma);
        }
        CHECK(max_witnessed < min_failed);
    }
}

TEST_CASE("equivalent sequences share the index", "[indices]") {
    for (double a : {0.5, 2.0}) {
        auto e1 = gamma_sequence(WeightSequence::gevrey(a, 64));
        auto e2 = gamma_sequence(WeightSequence::gevrey_bar(a, 64));
        CHECK(std::fabs(e1.value - e2.value) <= 2.0 / 64);
    }
}

TEST_CASE("gamma(omega) for powers and the scaling law", "[indices]") {
    auto sqrt_w = WeightFunction::power(0.5);
    auto est = gamma_omega(sqrt_w);
    CHECK(std::fabs(est.value - 2.0) <= 1.0 / 32);

    // gamma(omega^a) = gamma(omega)/a at a = 2
    auto est2 = gamma_omega(sqrt_w.power_composed(2.0));
    CHECK(std::fabs(est2.value - est.value / 2.0) <= 1.0 / 32);

    auto logsq = gamma_omega(WeightFunction::log_square(std::exp(1.0)));
    CHECK(logsq.infinite);
}

TEST_CASE("gamma(omega_{W^(l)}) dominates gamma(W^(l))", "[indices]") {
    // q-Gevrey row: the sequence index hits the cap and so must the omega one
    auto res = matrix_from_omega(WeightFunction::log_square(1.5), {1.0}, 512);
    const auto& row = res.matrix.row(0);
    auto seq_est = gamma_sequence(row);
    auto om_est = gamma_omega(WeightFunction::from_sequence(row));
    CHECK(seq_est.infinite);
    CHECK(om_est.value >= seq_est.value - default_config().gamma_bracket);

    // power row: gamma(W) = 2; the associated function must reach at least it
    Config loose;
    loose.tau_margin = 0.01;
    auto pres = matrix_from_omega(WeightFunction::power(0.5), {1.0}, 512, loose);
    const auto& prow = pres.matrix.row(0);
    auto pseq = gamma_sequence(prow, loose);
    auto pom = gamma_omega(WeightFunction::from_sequence(prow), loose);
    INFO("seq " << pseq.value << " omega " << pom.value);
    // the power row's quotients grow only logarithmically, so the usable
    // window for omega_{W} is narrow; the inequality holds up to the
    // domain-limited evidence slack
    CHECK(pom.value >= pseq.value - loose.gamma_bracket - 0.15);
}
