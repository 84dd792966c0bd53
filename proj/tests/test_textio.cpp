#include "jetcalc/textio.hpp"

#include "jetcalc/selftest.hpp"

#include <doctest.h>

using namespace jetcalc;

namespace {
DiffPoly P(const std::string& s) { return parse_expression(s); }
}  // namespace

TEST_CASE("expression parsing") {
  CHECK(P("y3 + x^2*y1") == DiffPoly::y(3) + pow(DiffPoly::x(), 2) * DiffPoly::y(1));
  CHECK(P("q*y + y2") == equation(2, EquationForm::GeneralQ).delta);
  CHECK(P("y") == DiffPoly::y(0));
  CHECK(P("q") == DiffPoly::q(0));
  CHECK(P("-1/2*y1^2") == Rational(-1, 2) * pow(DiffPoly::y(1), 2));
  CHECK(P("(x + y)^2") == P("x^2 + 2*x*y + y^2"));
  CHECK(P("7") == DiffPoly::constant(Rational(7)));
  CHECK(P("2/4") == DiffPoly::constant(Rational(1, 2)));
  CHECK(P("gamma") == DiffPoly::param("gamma"));
  CHECK(P("y1x") == DiffPoly::param("y1x"));  // not a jet, digits must end the name
}

TEST_CASE("parse errors carry the offset") {
  CHECK_THROWS_AS(P("y^^2"), ParseError);
  try {
    P("y^^2");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.offset == 2);
  }
  CHECK_THROWS_AS(P("x +"), ParseError);
  CHECK_THROWS_AS(P("(x"), ParseError);
  CHECK_THROWS_AS(P("x $ y"), ParseError);
  CHECK_THROWS_AS(P("x x"), ParseError);
  CHECK_THROWS_AS(P(""), ParseError);
  CHECK_THROWS_AS(P("x^0"), ParseError);
  CHECK_THROWS_AS(P("x/2"), ParseError);
  CHECK_THROWS_AS(P("y999"), ParseError);  // beyond the jet limit
}

TEST_CASE("vector specs") {
  CHECK(parse_vector_spec("W", 4) == VectorField(DiffPoly::zero(), DiffPoly::y(0)));
  CHECK(parse_vector_spec("F + 2*G", 3) == VectorField(P("1 + 4*x"), P("4*y")));
  CHECK(parse_vector_spec("a2*V2 + gamma*H", 4) ==
        frame(4).solution(2).scaled(P("a2")) + frame(4).sl2_h().scaled(P("gamma")));
  CHECK(parse_vector_spec("-V0", 3) == VectorField(P("0"), P("-1")));
  CHECK(parse_vector_spec("W_y", 5) == parse_vector_spec("W", 5));
  CHECK(parse_vector_spec("F4", 4) == parse_vector_spec("F", 4));
  CHECK(parse_vector_spec("2*V0 - 3*G + W", 4) ==
        VectorField(P("-6*x"), P("2 - 9*y + y")));

  CHECK_THROWS_AS(parse_vector_spec("V5", 4), ParseError);
  CHECK_THROWS_AS(parse_vector_spec("F3", 4), ParseError);
  CHECK_THROWS_AS(parse_vector_spec("x*V0", 3), ParseError);
  CHECK_THROWS_AS(parse_vector_spec("2*3", 3), ParseError);  // no generator named
  CHECK_THROWS_AS(parse_vector_spec("V0*V1", 3), ParseError);
  CHECK_THROWS_AS(parse_vector_spec("", 3), ParseError);
}

TEST_CASE("text rendering") {
  CHECK(render_text(P("x*y3 - y2")) == "x*y3 - y2");
  CHECK(render_text(DiffPoly::zero()) == "0");
  CHECK(render_text(P("y*y2 - 1/2*y1^2")) == "y*y2 - 1/2*y1^2");
  CHECK(render_text(DiffPoly::constant(Rational(-3, 4))) == "-3/4");
  CHECK(render_text(P("-x + 1")) == "-x + 1");
}

TEST_CASE("latex rendering") {
  CHECK(render_latex(P("-1/2*y1^2")) == "-\\frac{1}{2} y_{1}^{2}");
  CHECK(render_latex(P("x^2*q3")) == "x^{2} q_{3}");
  CHECK(render_latex(P("gamma*y2")) == "\\gamma y_{2}");
  CHECK(render_latex(P("a2*x")) == "a_{2} x");
  CHECK(render_latex(DiffPoly::zero()) == "0");
}

TEST_CASE("vector field rendering") {
  CHECK(render_text(frame(4).sl2_g()) == "(2*x)*d/dx + (3*y)*d/dy");
  CHECK(render_text(frame(4).solution(0)) == "d/dy");
  CHECK(render_text(VectorField()) == "0");
  CHECK(render_latex(frame(4).sl2_f()) == "\\partial_x");
}

TEST_CASE("parse inverts render on the catalog fixtures") {
  std::vector<DiffPoly> fixtures;
  for (int n : {2, 4, 6, 8}) {
    fixtures.push_back(equation(n, EquationForm::GeneralQ).delta);
    fixtures.push_back(lagrangian(n, EquationForm::GeneralQ));
    fixtures.push_back(closed_form_w2(n == 2 ? 4 : n));
  }
  for (int n = 2; n <= 12; ++n) {
    fixtures.push_back(closed_form_w1(n));
    for (int k = 0; k < n; ++k) fixtures.push_back(closed_form_vk(k, n));
  }
  for (int n = 3; n <= 11; n += 2) fixtures.push_back(closed_form_wy(n));
  for (const DiffPoly& p : fixtures) CHECK(parse_expression(render_text(p)) == p);
}

TEST_CASE("parse inverts render on random polynomials") {
  selftest::Rng rng(2025);
  selftest::PolyShape shape;
  shape.use_params = true;
  shape.max_terms = 6;
  for (int i = 0; i < 200; ++i) {
    const DiffPoly p = selftest::random_poly(rng, shape);
    CHECK(parse_expression(render_text(p)) == p);
  }
}

TEST_CASE("json round trips") {
  const DiffPoly o6 = equation(6, EquationForm::GeneralQ).delta;
  CHECK(diffpoly_from_json(to_json(o6)) == o6);
  CHECK(diffpoly_from_json(to_json(DiffPoly::zero())) == DiffPoly::zero());

  const VectorField g = frame(5).sl2_g();
  CHECK(vector_field_from_json(to_json(g)) == g);

  const SubalgebraReport rep = divergence_algebra(4);
  CHECK(to_json(subalgebra_report_from_json(to_json(rep))) == to_json(rep));

  const FirstIntegral fi = first_integral(frame(3).homogeneity(), 3, "W_y");
  CHECK(to_json(first_integral_from_json(to_json(fi))) == to_json(fi));

  const ConjectureReport report = verify_conjecture(4);
  CHECK(to_json(conjecture_report_from_json(to_json(report))) == to_json(report));
}

TEST_CASE("malformed json is rejected") {
  nlohmann::json bad = {{"schema", "other/9"}, {"type", "DiffPoly"}};
  CHECK_THROWS_AS(diffpoly_from_json(bad), Error);
  CHECK_THROWS_AS(diffpoly_from_json(nlohmann::json{{"type", "DiffPoly"}}), Error);
  CHECK_THROWS_AS(diffpoly_from_json(nlohmann::json::parse("[1,2]")), Error);

  // tampering with the integral breaks its conservation-law identity
  nlohmann::json fi = to_json(first_integral(frame(3).homogeneity(), 3, "W_y"));
  fi["expr"] = detail::poly_json(P("y"));
  CHECK_THROWS_AS(first_integral_from_json(fi), Error);
}
