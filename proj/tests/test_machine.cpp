#include <doctest.h>

#include <complex>
#include <stdexcept>

#include "helpers.hpp"
#include "qtmlab/config_space.hpp"
#include "qtmlab/step_operator.hpp"

using namespace qtmlab;
using namespace qtmlab::testing;

TEST_CASE("move-halt parses into two states with a full transition table") {
  machine m = load_fixture("move-halt");
  CHECK(m.name == "move-halt");
  CHECK(m.states.size() == 2);
  CHECK(m.transition_key_count() == 9);
  CHECK(m.start == m.state_index("q0"));
  CHECK(m.final == m.state_index("qf"));
}

TEST_CASE("empty document is rejected with a parse error") {
  CHECK_THROWS_AS(parse_machine(""), parse_error);
}

TEST_CASE("malformed fixture reports the offending line") {
  bool threw = false;
  try {
    load_machine(fixture_path("invalid/malformed"));
  } catch (const parse_error& e) {
    threw = true;
    CHECK(e.line == 5);
  }
  CHECK(threw);
}

TEST_CASE("good fixtures are well-formed both in floating point and exactly") {
  for (const auto& name : good_fixtures()) {
    machine m = load_fixture(name);
    CAPTURE(name);
    CHECK(validate_machine(m, 1e-12, false).ok);
    CHECK(validate_machine(m, 0.0, true).ok);
  }
}

TEST_CASE("row norm violations are detected and classified") {
  machine m = load_fixture("invalid/bad-row-norm");
  validation_report rep = validate_machine(m, 1e-10, false);
  REQUIRE_FALSE(rep.ok);
  CHECK(rep.violations[0].which == "row-norm");
  validation_report exact = validate_machine(m, 0.0, true);
  REQUIRE_FALSE(exact.ok);
  CHECK(exact.violations[0].which == "row-norm");
}

TEST_CASE("row orthogonality violations are detected and classified") {
  machine m = load_fixture("invalid/bad-orthogonality");
  validation_report rep = validate_machine(m, 0.0, true);
  REQUIRE_FALSE(rep.ok);
  CHECK(rep.violations[0].which == "row-orthogonality");
}

TEST_CASE("a short row norm shows up under both validation modes") {
  const char* doc =
      "machine half\n"
      "states q0 qf\n"
      "start q0\n"
      "final qf\n"
      "trans q0 (0,0) -> 3/2 qf (0,0) R\n";
  machine m = parse_machine(doc);
  validation_report rep = validate_machine(m, 1e-10, false);
  REQUIRE_FALSE(rep.ok);
  bool found = false;
  for (const auto& v : rep.violations) found = found || v.which == "row-norm";
  CHECK(found);
  CHECK_FALSE(validate_machine(m, 0.0, true).ok);
}

TEST_CASE("serialize then parse is the identity on every fixture") {
  for (const auto& name : good_fixtures()) {
    machine m = load_fixture(name);
    CAPTURE(name);
    CHECK(parse_machine(serialize_machine(m)) == m);
  }
  machine bare = parse_machine("machine bare\nstates q0 qf\nstart q0\nfinal qf\n");
  CHECK(bare.transition_key_count() == 0);
  CHECK(parse_machine(serialize_machine(bare)) == bare);
}

TEST_CASE("amplitude literals parse, print, and evaluate") {
  amplitude one = amplitude::parse("1");
  CHECK(one == amplitude::one());
  CHECK(one.to_complex() == std::complex<double>(1.0, 0.0));

  amplitude root = amplitude::parse("-1r");
  CHECK(root.to_complex().real() == doctest::Approx(-0.7071067811865476).epsilon(1e-14));
  CHECK(root.to_complex().imag() == 0.0);

  amplitude mixed = amplitude::parse("1/2+-1/2i");
  CHECK(mixed.to_complex().real() == doctest::Approx(0.5));
  CHECK(mixed.to_complex().imag() == doctest::Approx(-0.5));

  for (const char* lit : {"1", "-1r", "1/2+-1/2i", "0", "1/2r"}) {
    amplitude a = amplitude::parse(lit);
    CHECK(amplitude::parse(a.str()) == a);
  }

  CHECK_THROWS_AS(amplitude::parse(""), std::invalid_argument);
  CHECK_THROWS_AS(amplitude::parse("x"), std::invalid_argument);
  CHECK_THROWS_AS(amplitude::parse("1/2i"), std::invalid_argument);
}

TEST_CASE("a non-isometric table also fails at the step operator level") {
  machine m = load_fixture("invalid/bad-row-norm");
  config_space space = build_space(m, 1, 1);
  step_operator op = build_step_operator(space);
  CHECK(op.isometry_violations_exact() > 0);
  CHECK(op.isometry_defect() > 1e-10);
}
