#include <catch2/catch.hpp>

#include "weightcalc/stability.hpp"
#include "weightcalc/json_io.hpp"

TEST_CASE("headers compile and a sequence builds", "[smoke]") {
    auto s = weightcalc::WeightSequence::gevrey(1.0, 16);
    REQUIRE(s.truncation() == 16);
}
