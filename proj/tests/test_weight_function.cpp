#include <catch2/catch.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "weightcalc/matrix.hpp"
#include "weightcalc/weight_function.hpp"

using namespace weightcalc;

namespace {

// Brute-force lower convex envelope: the hull value at j is the min over all
// chords (a <= j <= b) of the interpolated value, capped by the point itself.
std::vector<double> envelope_brute(const std::vector<double>& y) {
    const int n = static_cast<int>(y.size()) - 1;
    std::vector<double> out(y.size());
    for (int j = 0; j <= n; ++j) {
        double best = y[static_cast<std::size_t>(j)];
        for (int a = 0; a <= j; ++a) {
            for (int b = j; b <= n; ++b) {
                if (a == b) continue;
                const double v = y[static_cast<std::size_t>(a)] +
                                 (y[static_cast<std::size_t>(b)] - y[static_cast<std::size_t>(a)]) *
                                     (j - a) / static_cast<double>(b - a);
                best = std::min(best, v);
            }
        }
        out[static_cast<std::size_t>(j)] = best;
    }
    return out;
}

std::vector<double> random_log_table(std::mt19937& rng, int n, double lo = -0.5, double hi = 1.5) {
    std::uniform_real_distribution<double> step(lo, hi);
    std::vector<double> t(static_cast<std::size_t>(n) + 1, 0.0);
    for (int j = 1; j <= n; ++j) t[static_cast<std::size_t>(j)] = t[static_cast<std::size_t>(j - 1)] + step(rng);
    return t;
}

}  // namespace

TEST_CASE("log-convex minorant equals the brute-force envelope", "[omega][property]") {
    std::mt19937 rng(123);
    for (int rep = 0; rep < 100; ++rep) {
        auto s = WeightSequence::from_table(random_log_table(rng, 64));
        auto env = log_convex_minorant(s);
        auto brute = envelope_brute(s.log_terms());
        for (int j = 0; j <= 64; ++j) {
            REQUIRE(env.log_term(j) == Approx(brute[static_cast<std::size_t>(j)]).margin(1e-12));
            REQUIRE(env.log_term(j) <= s.log_term(j) + 1e-12);
        }
        REQUIRE(check_condition(env, SequenceCondition::LogConvex).verdict ==
                Verdict::WitnessedUpToN);
        // bit-exact idempotence
        auto env2 = log_convex_minorant(env);
        for (int j = 0; j <= 64; ++j) REQUIRE(env2.log_term(j) == env.log_term(j));
    }
}

TEST_CASE("minorant fixes log-convex input and regularizes the 4-point example", "[omega]") {
    auto g2 = WeightSequence::gevrey(2.0, 32);
    auto env = log_convex_minorant(g2);
    for (int j = 0; j <= 32; ++j) REQUIRE(env.log_term(j) == g2.log_term(j));

    // points (0,0),(1,2),(2,1),(3,3): chain (0,0)-(2,1)-(3,3)
    std::vector<double> tab{0, 2, 1, 3, 5.5, 8.5, 12, 16, 20.5};
    auto e = log_convex_minorant(WeightSequence::from_table(tab));
    CHECK(e.log_term(1) == Approx(0.5).margin(1e-12));
    CHECK(e.log_term(2) == Approx(1.0).margin(1e-12));
    CHECK(e.log_term(3) == Approx(3.0).margin(1e-12));
}

TEST_CASE("associated weight function values", "[omega]") {
    auto g1 = WeightSequence::gevrey(1.0, 64);
    CHECK(omega_of_sequence(g1, 1.0) == 0.0);
    CHECK(omega_of_sequence(g1, std::exp(1.0)) == Approx(2.0 - std::log(2.0)).margin(1e-12));

    auto mq = WeightSequence::q_gevrey(std::exp(1.0), 64);
    CHECK(omega_of_sequence(mq, std::exp(4.0)) == Approx(4.0).margin(1e-12));

    // beyond the last quotient the truncation cannot witness the sup
    CHECK_THROWS_AS(omega_of_sequence(g1, 1e60), DomainExceeded);
}

TEST_CASE("omega_M equals omega of the minorant", "[omega][property]") {
    std::mt19937 rng(5);
    for (int rep = 0; rep < 25; ++rep) {
        auto s = WeightSequence::from_table(random_log_table(rng, 64, 0.0, 1.0));
        auto env = log_convex_minorant(s);
        const double y_top = env.log_term(64) - env.log_term(63) - 0.05;
        for (int i = 1; i <= 10; ++i) {
            const double t = std::exp(y_top * i / 10.0);
            REQUIRE(omega_of_sequence(s, t) == Approx(omega_of_sequence(env, t)).margin(1e-9));
        }
    }
}

TEST_CASE("Komatsu roundtrip recovers the minorant", "[omega][property]") {
    auto g1 = WeightSequence::gevrey(1.0, 64);
    auto rec = recover_sequence(WeightFunction::from_sequence(g1), 32);
    for (int j = 0; j <= 32; ++j) {
        REQUIRE(rec.log_term(j) == Approx(g1.log_term(j)).margin(1e-6));
    }

    std::mt19937 rng(17);
    for (int rep = 0; rep < 10; ++rep) {
        auto s = WeightSequence::from_table(random_log_table(rng, 64, 0.0, 1.2));
        auto env = log_convex_minorant(s);
        auto back = recover_sequence(WeightFunction::from_sequence(s), 32);
        for (int j = 0; j <= 32; ++j) {
            REQUIRE(back.log_term(j) == Approx(env.log_term(j)).margin(1e-6));
        }
    }
}

TEST_CASE("omega condition checkers on the closed-form registry", "[omega]") {
    auto wq = WeightFunction::log_square(std::exp(1.0));
    auto cq = check_omega_conditions(wq);
    CHECK(cq.at("(omega0)").verdict == Verdict::WitnessedUpToN);
    CHECK(cq.at("(omega1)").verdict == Verdict::WitnessedUpToN);
    CHECK(cq.at("(omega3)").verdict == Verdict::WitnessedUpToN);
    CHECK(cq.at("(omega4)").verdict == Verdict::WitnessedUpToN);
    CHECK(cq.at("(omega5)").verdict == Verdict::WitnessedUpToN);
    CHECK(cq.at("(omega6)").verdict == Verdict::FailsAtTruncation);
    CHECK(cq.at("(alpha0)").verdict == Verdict::WitnessedUpToN);

    auto wl = WeightFunction::linear_log();
    auto cl = check_omega_conditions(wl);
    CHECK(cl.at("(alpha0)").verdict == Verdict::FailsAtTruncation);
    CHECK(cl.at("(omega2)").verdict == Verdict::FailsAtTruncation);

    auto wp = WeightFunction::power(0.5);
    auto cp = check_omega_conditions(wp);
    CHECK(cp.at("(alpha0)").verdict == Verdict::WitnessedUpToN);
    CHECK(cp.at("(omega5)").verdict == Verdict::WitnessedUpToN);
    CHECK(cp.at("(omega6)").verdict == Verdict::WitnessedUpToN);

    auto w2 = WeightFunction::power(2.0);
    auto c2 = check_omega_conditions(w2);
    CHECK(c2.at("(alpha0)").verdict == Verdict::FailsAtTruncation);
    CHECK(c2.at("(omega2)").verdict == Verdict::FailsAtTruncation);
}

TEST_CASE("Legendre conjugate closed forms", "[omega]") {
    auto wq = WeightFunction::log_square(std::exp(1.0));
    CHECK(legendre_conjugate(wq, 2.0) == Approx(4.0).margin(1e-8));
    CHECK(legendre_conjugate(wq, 0.0) == Approx(0.0).margin(1e-12));
    for (double q : {1.5, 3.0}) {
        auto w = WeightFunction::log_square(q);
        for (double x : {0.5, 1.0, 4.0, 32.0}) {
            CHECK(legendre_conjugate(w, x) == Approx(x * x * std::log(q)).epsilon(1e-8));
        }
    }
    // omega(t) = t - 1 on the domain: phi*(x) = x ln x - x + 1 for x >= 1
    auto w1 = WeightFunction::power(1.0);
    const double e2 = std::exp(2.0);
    CHECK(legendre_conjugate(w1, e2) == Approx(e2 * 2.0 - e2 + 1.0).epsilon(1e-8));
}

TEST_CASE("associated matrix reproduces the q-Gevrey family", "[omega][matrix]") {
    for (double q : {1.5, std::exp(1.0)}) {
        auto w = WeightFunction::log_square(q);
        auto res = matrix_from_omega(w, {0.25, 0.5, 1.0, 2.0, 4.0}, 32);
        for (std::size_t i = 0; i < res.matrix.size(); ++i) {
            const double ell = res.matrix.params()[i];
            for (int j = 0; j <= 32; ++j) {
                const double expected = ell * j * j * std::log(q);
                REQUIRE(res.matrix.row(i).log_term(j) ==
                        Approx(expected).margin(1e-6 * std::max(1.0, expected)));
            }
        }
        // rows ordered in ell
        for (std::size_t i = 0; i + 1 < res.matrix.size(); ++i) {
            for (int j = 0; j <= 32; ++j) {
                REQUIRE(res.matrix.row(i).log_term(j) <= res.matrix.row(i + 1).log_term(j) + 1e-9);
            }
        }
        // sandwich reports carry a finite D_l with a flat trace
        for (const auto& [ell, rep] : res.sandwich) {
            INFO("ell = " << ell);
            CHECK(rep.verdict == Verdict::WitnessedUpToN);
            CHECK(rep.witness.at("lower_violation") <= 1e-6);
        }
    }
}

TEST_CASE("moderate growth across doubled parameters on the associated matrix", "[omega][matrix]") {
    auto res = matrix_from_omega(WeightFunction::log_square(1.5), {0.25, 0.5, 1.0, 2.0, 4.0}, 32);
    const auto& m = res.matrix;
    const std::vector<std::pair<std::size_t, std::size_t>> pairs{{0, 1}, {1, 2}, {2, 3}, {3, 4}};
    for (auto [i, i2] : pairs) {
        for (int j = 0; j <= 32; ++j) {
            for (int k = 0; j + k <= 32; ++k) {
                REQUIRE(m.row(i).log_term(j + k) <=
                        m.row(i2).log_term(j) + m.row(i2).log_term(k) + 1e-6);
            }
        }
    }
}

TEST_CASE("geometric factors absorbed by a larger parameter", "[omega][matrix]") {
    // omega has (omega_1); h^j W^(l)_j <= D W^(4l)_j with a flat deficit trace
    auto res = matrix_from_omega(WeightFunction::log_square(1.5), {0.25, 0.5, 1.0, 2.0, 4.0}, 64);
    const auto& m = res.matrix;
    const std::vector<std::pair<std::size_t, std::size_t>> quads{{0, 2}, {1, 3}, {2, 4}};
    for (double h : {2.0, 4.0}) {
        for (auto [i, i4] : quads) {
            std::vector<double> deficit;
            for (int cap : {16, 32, 48, 64}) {
                double worst = -1e300;
                for (int j = 0; j <= cap; ++j) {
                    worst = std::max(worst, j * std::log(h) + m.row(i).log_term(j) -
                                                m.row(i4).log_term(j));
                }
                deficit.push_back(worst);
            }
            CHECK(deficit.back() - deficit[1] <= 0.05 * std::max(1.0, std::fabs(deficit[1])));
        }
    }
}

TEST_CASE("constant associated matrix iff (omega_6)", "[omega][matrix]") {
    // power(1/2) has (omega_6): all rows pairwise equivalent
    auto res = matrix_from_omega(WeightFunction::power(0.5), {0.25, 0.5, 1.0, 2.0, 4.0}, 64);
    for (std::size_t i = 0; i < res.matrix.size(); ++i) {
        for (std::size_t k = i + 1; k < res.matrix.size(); ++k) {
            CHECK(compare(res.matrix.row(i), res.matrix.row(k)).equivalent ==
                  Verdict::WitnessedUpToN);
        }
    }
    // the q-Gevrey family lacks (omega_6): distinct rows are inequivalent
    auto rq = matrix_from_omega(WeightFunction::log_square(1.5), {0.25, 4.0}, 64);
    CHECK(compare(rq.matrix.row(0), rq.matrix.row(1)).equivalent == Verdict::FailsAtTruncation);
}

TEST_CASE("power identity omega_M(t^beta) = beta omega_{M^{1/beta}}(t)", "[omega]") {
    auto g2 = WeightSequence::gevrey(2.0, 64);
    auto [l1, r1] = power_transform(g2, 1.0, std::exp(1.0));
    CHECK(l1 == Approx(r1).margin(1e-9));
    CHECK(l1 == Approx(omega_of_sequence(g2, std::exp(1.0))).margin(1e-12));

    auto [l2, r2] = power_transform(g2, 2.0, std::exp(1.0));
    CHECK(l2 == Approx(r2).margin(1e-9));

    auto mq = WeightSequence::q_gevrey(std::exp(1.0), 64);
    auto [l3, r3] = power_transform(mq, 0.5, std::exp(4.0));
    CHECK(l3 == Approx(r3).margin(1e-9));
}

TEST_CASE("discrete convexity of the minorant is exact", "[omega][property]") {
    std::mt19937 rng(29);
    for (int rep = 0; rep < 50; ++rep) {
        auto env = log_convex_minorant(WeightSequence::from_table(random_log_table(rng, 48)));
        for (int j = 1; j < 48; ++j) {
            REQUIRE(env.log_term(j + 1) + env.log_term(j - 1) - 2.0 * env.log_term(j) >= -1e-12);
        }
    }
}

TEST_CASE("from_sequence weight functions refuse extrapolation", "[omega]") {
    auto w = WeightFunction::from_sequence(WeightSequence::gevrey(1.0, 16));
    CHECK_THROWS_AS(w.omega(1e9), DomainExceeded);
    CHECK(w.omega(0.0) == 0.0);
}
