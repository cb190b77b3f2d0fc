#include <catch2/catch.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "weightcalc/matrix.hpp"

using namespace weightcalc;

namespace {

// enumerate all tuples (j_1..j_k), k <= k_max, sum <= n_max, and report the
// minimal ln H for the product lemma, independently of the DP
double product_lemma_brute(const std::vector<double>& chk_p, const std::vector<double>& chk_q,
                           int k_max, int n_max) {
    double best = 0.0;
    std::vector<int> tuple;
    const std::function<void(int, int)> rec = [&](int remaining_sum, int remaining_parts) {
        if (!tuple.empty()) {
            int total = 0;
            double prod = 0.0;
            for (int j : tuple) {
                total += j;
                prod += chk_p[static_cast<std::size_t>(j)];
            }
            best = std::max(best, (prod - chk_q[static_cast<std::size_t>(total)]) / total);
        }
        if (remaining_parts == 0) return;
        const int start = tuple.empty() ? 1 : tuple.back();  // nondecreasing: order is irrelevant
        for (int j = start; j <= remaining_sum; ++j) {
            tuple.push_back(j);
            rec(remaining_sum - j, remaining_parts - 1);
            tuple.pop_back();
        }
    };
    rec(n_max, k_max);
    return best;
}

}  // namespace

TEST_CASE("matrix construction", "[matrix]") {
    auto g2 = WeightSequence::gevrey(2.0, 32);
    auto constant = make_constant_matrix(g2, {1.0, 2.0, 4.0});
    REQUIRE(constant.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        for (int j = 0; j <= 32; ++j) REQUIRE(constant.row(i).log_term(j) == g2.log_term(j));
    }

    auto family = make_power_family(3.0, {1.0, 2.0, 4.0}, 32);
    auto expect = WeightSequence::gevrey_bar(2.5, 32);
    for (int j = 0; j <= 32; ++j) {
        REQUIRE(family.row(0).log_term(j) == Approx(expect.log_term(j)).margin(1e-12));
    }

    // rows must be pointwise monotone in the parameter
    std::vector<WeightSequence> bad_rows{WeightSequence::gevrey(2.0, 16),
                                         WeightSequence::gevrey(1.0, 16)};
    CHECK_THROWS_AS(WeightMatrix({1.0, 2.0}, bad_rows), SpecError);
    CHECK_THROWS_AS(make_constant_matrix(g2, {2.0, 1.0}), SpecError);
}

TEST_CASE("matrix conditions: witnessed pairings and failures", "[matrix]") {
    // the associated q-Gevrey matrix carries (M_dc) with pairing l -> 2l
    auto assoc = matrix_from_omega(WeightFunction::log_square(1.5), {0.25, 0.5, 1.0, 2.0, 4.0}, 64);
    auto dc = check_matrix_condition(assoc.matrix, MatrixCondition::DerivationClosed);
    CHECK(dc.verdict == Verdict::WitnessedUpToN);
    auto mg = check_matrix_condition(assoc.matrix, MatrixCondition::ModerateGrowth);
    CHECK(mg.verdict == Verdict::WitnessedUpToN);
    for (const auto& row : mg.rows) {
        if (row.param < 4.0) {
            REQUIRE(row.partner.has_value());
            CHECK(*row.partner <= 2.0 * row.param + 1e-12);
        }
    }

    auto rai_bad = check_matrix_condition(make_constant_matrix(WeightSequence::gevrey(0.5, 64),
                                                               {1.0, 2.0, 4.0}),
                                          MatrixCondition::RootAlmostIncreasing);
    CHECK(rai_bad.verdict == Verdict::FailsAtTruncation);

    auto rai_good = check_matrix_condition(make_constant_matrix(WeightSequence::gevrey(2.0, 64),
                                                                {1.0, 2.0, 4.0}),
                                           MatrixCondition::RootAlmostIncreasing);
    CHECK(rai_good.verdict == Verdict::WitnessedUpToN);
    REQUIRE(rai_good.rows[0].partner.has_value());
    CHECK(*rai_good.rows[0].partner == 1.0);  // pairing p -> p
    CHECK(rai_good.witness.at("lnC(p=" + std::to_string(1.0) + ")") <= 1e-9);

    auto lc = check_matrix_condition(assoc.matrix, MatrixCondition::LogConvex);
    CHECK(lc.verdict == Verdict::WitnessedUpToN);
    auto sc = check_matrix_condition(assoc.matrix, MatrixCondition::StandardLogConvex);
    CHECK(sc.verdict == Verdict::WitnessedUpToN);
}

TEST_CASE("liminf-style conditions", "[matrix]") {
    auto good = make_constant_matrix(WeightSequence::gevrey(2.0, 64), {1.0, 2.0});
    CHECK(check_matrix_condition(good, MatrixCondition::RealAnalytic).verdict ==
          Verdict::WitnessedUpToN);
    CHECK(check_matrix_condition(good, MatrixCondition::ContainsHolomorphic).verdict ==
          Verdict::WitnessedUpToN);

    auto small = make_constant_matrix(WeightSequence::gevrey(0.5, 64), {1.0, 2.0});
    CHECK(check_matrix_condition(small, MatrixCondition::RealAnalytic).verdict ==
          Verdict::FailsAtTruncation);
}

TEST_CASE("product lemma: examples and DP-vs-enumeration", "[matrix]") {
    auto g2 = make_constant_matrix(WeightSequence::gevrey(2.0, 32), {1.0});
    auto rep = check_product_lemma(g2, 0, 0, 4);
    CHECK(rep.verdict == Verdict::WitnessedUpToN);
    // k = 2, j1 = j2 = 2: (M̌_2)^2 = 4 <= H^4 M̌_4 = 24 H^4 holds at H = 1
    CHECK(rep.witness.at("lnH") <= 1e-9);

    // k = 1 is the tautology: ln H = 0 suffices
    auto taut = check_product_lemma(g2, 0, 0, 1);
    CHECK(taut.witness.at("lnH") <= 1e-12);

    auto bad = check_product_lemma(make_constant_matrix(WeightSequence::gevrey(0.5, 64), {1.0}),
                                   0, 0, 64);
    CHECK(bad.verdict == Verdict::FailsAtTruncation);

    // DP equals exhaustive tuple enumeration
    std::mt19937 rng(55);
    std::uniform_real_distribution<double> step(-0.3, 1.0);
    for (int rep_i = 0; rep_i < 10; ++rep_i) {
        std::vector<double> tab(17, 0.0);
        for (int j = 1; j <= 16; ++j) {
            tab[static_cast<std::size_t>(j)] = tab[static_cast<std::size_t>(j - 1)] + step(rng);
        }
        auto m = make_constant_matrix(WeightSequence::from_table(tab), {1.0});
        const auto chk = m.row(0).log_check_terms();
        for (int kmax : {2, 3, 5}) {
            auto dp = check_product_lemma(m, 0, 0, kmax);
            const double brute = product_lemma_brute(chk, chk, kmax, 16);
            REQUIRE(dp.trace.back().second == Approx(brute).margin(1e-9));
        }
    }
}

TEST_CASE("M^alpha construction", "[matrix]") {
    // log-convex rows with alpha <= 1 are a fixed point
    auto assoc = matrix_from_omega(WeightFunction::log_square(1.5), {0.5, 1.0, 2.0}, 32);
    auto ma = build_m_alpha(assoc.matrix, 0.5);
    for (std::size_t i = 0; i < ma.size(); ++i) {
        for (int j = 0; j <= 32; ++j) {
            REQUIRE(ma.row(i).log_term(j) == Approx(assoc.matrix.row(i).log_term(j)).margin(1e-9));
        }
    }

    auto gb2 = make_constant_matrix(WeightSequence::gevrey_bar(2.0, 32), {1.0});
    auto ma1 = build_m_alpha(gb2, 1.0);
    for (int j = 0; j <= 32; ++j) {
        REQUIRE(ma1.row(0).log_term(j) == Approx(gb2.row(0).log_term(j)).margin(1e-12));
    }

    // alpha = 1 on a non-convex table replaces rows by their minorants
    std::vector<double> tab{0, 2, 1, 3, 5.5, 8.5, 12, 16, 20.5};
    auto bumpy = make_constant_matrix(WeightSequence::from_table(tab), {1.0});
    auto reg = build_m_alpha(bumpy, 1.0);
    auto env = log_convex_minorant(bumpy.row(0));
    for (int j = 0; j <= 8; ++j) {
        REQUIRE(reg.row(0).log_term(j) == Approx(env.log_term(j)).margin(1e-12));
    }

    // domination and idempotence
    auto dominated = build_m_alpha(bumpy, 0.5);
    for (int j = 0; j <= 8; ++j) {
        REQUIRE(dominated.row(0).log_term(j) <= bumpy.row(0).log_term(j) + 1e-12);
    }
    auto twice = build_m_alpha(dominated, 0.5);
    for (int j = 0; j <= 8; ++j) {
        REQUIRE(twice.row(0).log_term(j) == Approx(dominated.row(0).log_term(j)).margin(1e-12));
    }

    // the growth gate rejects rows with j^{(1-alpha) j} M_j -> 0
    auto thin = make_constant_matrix(WeightSequence::gevrey_bar(-0.6, 32), {1.0});
    CHECK_THROWS_AS(build_m_alpha(thin, 0.5), GrowthGateFailed);
}

TEST_CASE("R-equivalence", "[matrix]") {
    auto a = make_constant_matrix(WeightSequence::gevrey(1.5, 64), {1.0, 2.0});
    auto self = r_equivalent(a, a);
    CHECK(self.verdict == Verdict::WitnessedUpToN);
    CHECK(self.forward.pairing.at(1.0) == 1.0);

    auto b = make_constant_matrix(WeightSequence::gevrey_bar(1.5, 64), {1.0, 2.0});
    CHECK(r_equivalent(a, b).verdict == Verdict::WitnessedUpToN);

    auto c = make_constant_matrix(WeightSequence::gevrey(2.0, 64), {1.0, 2.0});
    auto oneway = r_equivalent(a, c);
    CHECK(oneway.forward.verdict == Verdict::WitnessedUpToN);
    CHECK(oneway.backward.verdict == Verdict::FailsAtTruncation);
    CHECK(oneway.verdict == Verdict::FailsAtTruncation);
}

TEST_CASE("condition implications on the corpus", "[matrix][property]") {
    std::vector<WeightMatrix> corpus;
    corpus.push_back(make_constant_matrix(WeightSequence::gevrey(2.0, 64), {1.0, 2.0}));
    corpus.push_back(make_constant_matrix(WeightSequence::q_gevrey(1.5, 64), {1.0, 2.0}));
    corpus.push_back(make_power_family(3.0, {1.0, 2.0, 4.0}, 64));
    corpus.push_back(
        matrix_from_omega(WeightFunction::log_square(1.5), {0.5, 1.0, 2.0}, 64).matrix);
    for (const auto& m : corpus) {
        auto rai = check_matrix_condition(m, MatrixCondition::RootAlmostIncreasing);
        auto mh = check_matrix_condition(m, MatrixCondition::ContainsHolomorphic);
        auto dc = check_matrix_condition(m, MatrixCondition::DerivationClosed);
        auto fdb = check_matrix_condition(m, MatrixCondition::FaaDiBruno);
        if (rai.verdict == Verdict::WitnessedUpToN) {
            CHECK(mh.verdict == Verdict::WitnessedUpToN);  // (M_rai) => (M_H)
            if (dc.verdict == Verdict::WitnessedUpToN) {
                CHECK(fdb.verdict == Verdict::WitnessedUpToN);  // + (M_dc) => (M_FdB)
            }
        }
    }
    // R-equivalent matrices agree on (M_rai) and (M_FdB)
    auto g = make_constant_matrix(WeightSequence::gevrey(2.0, 64), {1.0, 2.0});
    auto gb = make_constant_matrix(WeightSequence::gevrey_bar(2.0, 64), {1.0, 2.0});
    REQUIRE(r_equivalent(g, gb).verdict == Verdict::WitnessedUpToN);
    CHECK(check_matrix_condition(g, MatrixCondition::RootAlmostIncreasing).verdict ==
          check_matrix_condition(gb, MatrixCondition::RootAlmostIncreasing).verdict);
    CHECK(check_matrix_condition(g, MatrixCondition::FaaDiBruno).verdict ==
          check_matrix_condition(gb, MatrixCondition::FaaDiBruno).verdict);
}
