#include <doctest.h>

#include "evoscore/porter.hpp"

using evoscore::porter_stem;

TEST_SUITE("porter") {
  TEST_CASE("the adapt family maps to one stem") {
    CHECK(porter_stem("adaptation") == "adapt");
    CHECK(porter_stem("adapting") == "adapt");
    CHECK(porter_stem("adapt") == "adapt");
  }

  TEST_CASE("no rule fires on tree") { CHECK(porter_stem("tree") == "tree"); }

  TEST_CASE("classic rule-table words") {
    // Hand-traced through the published rule set.
    CHECK(porter_stem("caresses") == "caress");
    CHECK(porter_stem("ponies") == "poni");
    CHECK(porter_stem("ties") == "ti");
    CHECK(porter_stem("caress") == "caress");
    CHECK(porter_stem("cats") == "cat");
    CHECK(porter_stem("feed") == "feed");
    CHECK(porter_stem("agreed") == "agre");
    CHECK(porter_stem("plastered") == "plaster");
    CHECK(porter_stem("bled") == "bled");
    CHECK(porter_stem("motoring") == "motor");
    CHECK(porter_stem("sing") == "sing");
    CHECK(porter_stem("conflated") == "conflat");
    CHECK(porter_stem("troubled") == "troubl");
    CHECK(porter_stem("sized") == "size");
    CHECK(porter_stem("hopping") == "hop");
    CHECK(porter_stem("tanned") == "tan");
    CHECK(porter_stem("falling") == "fall");
    CHECK(porter_stem("hissing") == "hiss");
    CHECK(porter_stem("fizzed") == "fizz");
    CHECK(porter_stem("failing") == "fail");
    CHECK(porter_stem("filing") == "file");
    CHECK(porter_stem("happy") == "happi");
    CHECK(porter_stem("sky") == "sky");
    CHECK(porter_stem("relational") == "relat");
    CHECK(porter_stem("triplicate") == "triplic");
    CHECK(porter_stem("formative") == "form");
    CHECK(porter_stem("formalize") == "formal");
    CHECK(porter_stem("electricity") == "electr");
    CHECK(porter_stem("controlled") == "control");
  }

  TEST_CASE("domain vocabulary collapses as expected") {
    CHECK(porter_stem("mutation") == "mutat");
    CHECK(porter_stem("mutations") == "mutat");
    CHECK(porter_stem("mutated") == "mutat");
    CHECK(porter_stem("survive") == "surviv");
    CHECK(porter_stem("survival") == "surviv");
    CHECK(porter_stem("surviving") == "surviv");
    CHECK(porter_stem("heritable") == "herit");
    CHECK(porter_stem("generations") == "gener");
  }

  TEST_CASE("short tokens pass through") {
    CHECK(porter_stem("a") == "a");
    CHECK(porter_stem("is") == "is");
    CHECK(porter_stem("") == "");
  }

  TEST_CASE("non-alphabetic tokens pass through unchanged") {
    CHECK(porter_stem("1859") == "1859");
    CHECK(porter_stem("b12") == "b12");
    CHECK(porter_stem("x86processors") == "x86processors");
  }
}
