#include "jetcalc/catalog.hpp"

#include "jetcalc/textio.hpp"

#include <doctest.h>

using namespace jetcalc;

namespace {
DiffPoly P(const std::string& s) { return parse_expression(s); }
}  // namespace

TEST_CASE("equation fixtures") {
  CHECK(equation(4, EquationForm::Canonical).delta == P("y4"));
  CHECK(equation(2, EquationForm::GeneralQ).delta == P("q*y + y2"));
  CHECK(equation(4, EquationForm::GeneralQ).delta ==
        P("y4 + 10*q*y2 + 10*q1*y1 + 3*y*(3*q^2 + q2)"));
  CHECK_THROWS_AS(equation(3, EquationForm::GeneralQ), UnsupportedError);
  CHECK_THROWS_AS(equation(10, EquationForm::GeneralQ), UnsupportedError);
  CHECK_THROWS_AS(equation(1, EquationForm::Canonical), UnsupportedError);
}

TEST_CASE("lagrangian fixtures") {
  CHECK(lagrangian(6, EquationForm::Canonical) == P("-1/2*y3^2"));
  CHECK(lagrangian(10, EquationForm::Canonical) == P("-1/2*y5^2"));
  CHECK(lagrangian(4, EquationForm::GeneralQ) ==
        P("1/2*(y2^2 - 10*q*y1^2 + 3*(3*q^2 + q2)*y^2)"));
  CHECK_THROWS_AS(lagrangian(5, EquationForm::Canonical), UnsupportedError);
  CHECK_THROWS_AS(lagrangian(10, EquationForm::GeneralQ), UnsupportedError);
}

TEST_CASE("Euler images of the Lagrangians reproduce the equations") {
  for (int n : {2, 4, 6, 8}) {
    CHECK(euler(lagrangian(n, EquationForm::GeneralQ)) ==
          equation(n, EquationForm::GeneralQ).delta);
    CHECK(euler(lagrangian(n, EquationForm::Canonical)) == DiffPoly::y(n));
  }
  for (int n = 10; n <= 12; n += 2)
    CHECK(euler(lagrangian(n, EquationForm::Canonical)) == DiffPoly::y(n));
}

TEST_CASE("frames") {
  const SymmetryFrame fr3 = frame(3);
  CHECK(fr3.by_name("H3") == VectorField(P("-x^2"), P("-2*x*y")));
  CHECK(fr3.generators.size() == 7);
  CHECK(characteristic(frame(5).by_name("G5")) == P("4*y - 2*x*y1"));
  CHECK(frame(4).generators.size() == 8);
  CHECK(frame(4).solution(0) == VectorField(P("0"), P("1")));
  CHECK_THROWS_AS(frame(4).solution(4), Error);
  CHECK_THROWS_AS(frame(1), UnsupportedError);
}

TEST_CASE("homogeneity symmetry defect across all fixtures") {
  for (int n = 2; n <= 12; ++n) {
    const VectorField wy = frame(n).homogeneity();
    const DiffPoly delta = equation(n, EquationForm::Canonical).delta;
    if (n % 2 == 0)
      CHECK(divergence_defect(wy, delta) == 2 * delta);
    else
      CHECK(divergence_defect(wy, delta).is_zero());
  }
  for (int n : {2, 4, 6, 8}) {
    const DiffPoly delta = equation(n, EquationForm::GeneralQ).delta;
    CHECK(divergence_defect(frame(n).homogeneity(), delta) == 2 * delta);
  }
}

TEST_CASE("solution symmetries are divergence symmetries at every order") {
  for (int n = 2; n <= 12; ++n) {
    const SymmetryFrame fr = frame(n);
    const DiffPoly delta = DiffPoly::y(n);
    for (int k = 0; k < n; ++k)
      CHECK(divergence_defect(fr.solution(k), delta).is_zero());
  }
}

TEST_CASE("adjoint parity of the equation fixtures") {
  for (int n = 2; n <= 12; ++n)
    CHECK(adjoint_parity(equation(n, EquationForm::Canonical).delta) ==
          (n % 2 == 0 ? AdjointParity::SelfAdjoint : AdjointParity::SkewAdjoint));
  for (int n : {2, 4, 6, 8})
    CHECK(adjoint_parity(equation(n, EquationForm::GeneralQ).delta) ==
          AdjointParity::SelfAdjoint);
}

TEST_CASE("divergence algebras") {
  const SubalgebraReport d3 = divergence_algebra(3);
  CHECK(d3.basis_names() == std::vector<std::string>{"V0", "V1", "V2", "W_y"});
  CHECK(d3.nullity() == 4);
  // the sl2 part of the generic defect starts at order n+1
  CHECK(d3.defect_before.coefficient_of(VarId::jet_y(4), 1) ==
        P("2*(alpha + 2*beta*x - gamma*x^2)"));

  const SubalgebraReport d4 = divergence_algebra(4);
  CHECK(d4.basis_names() ==
        std::vector<std::string>{"V0", "V1", "V2", "V3", "F4", "G4", "H4"});
  CHECK(d4.defect_before == P("2*lambda*y4"));
  CHECK(d4.constraints.unknowns.size() == 8);

  const SubalgebraReport d9 = divergence_algebra(9);
  CHECK(d9.nullity() == 10);
  CHECK(d9.basis_names().back() == "W_y");
}

TEST_CASE("variational algebras and the generic defect displays") {
  const SubalgebraReport v4 = variational_algebra(4);
  CHECK(v4.basis_names() == std::vector<std::string>{"V0", "V1", "F4", "G4"});
  CHECK(v4.defect_before == P("2*(a2 + 3*a3*x - 2*gamma*y1)*y2"));

  const SubalgebraReport v6 = variational_algebra(6);
  CHECK(v6.defect_before == P("-3*(2*a3 + 8*a4*x + 20*a5*x^2 - 3*gamma*y2)*y3"));

  const SubalgebraReport v8 = variational_algebra(8);
  CHECK(v8.basis_names() ==
        std::vector<std::string>{"V0", "V1", "V2", "V3", "F8", "G8"});
  CHECK(v8.defect_before ==
        P("8*(3*(a4 + 5*x*(a5 + 3*a6*x + 7*a7*x^2)) - 2*gamma*y3)*y4"));

  const SubalgebraReport v10 = variational_algebra(10);
  CHECK(v10.nullity() == 7);

  CHECK_THROWS_AS(variational_algebra(5), OddOrderError);
}

TEST_CASE("variational symmetries are divergence symmetries") {
  for (int n : {4, 6, 8}) {
    const DiffPoly delta = DiffPoly::y(n);
    const DiffPoly density = lagrangian(n, EquationForm::Canonical);
    for (const BasisElement& el : variational_algebra(n).basis) {
      CHECK(variational_defect(el.field, density, n).is_zero());
      CHECK(divergence_defect(el.field, delta).is_zero());
    }
  }
}

TEST_CASE("first integrals") {
  CHECK(first_integral(frame(4).solution(1), 4, "V1").expr == P("x*y3 - y2"));
  CHECK(first_integral(frame(3).homogeneity(), 3, "W_y").expr == P("y*y2 - 1/2*y1^2"));
  CHECK_THROWS_AS(first_integral(frame(4).homogeneity(), 4), NotExactError);

  const SymmetryFrame fr = frame(4);
  const VectorField w2 = fr.sl2_f().scaled(DiffPoly::param("alpha")) +
                         fr.sl2_g().scaled(DiffPoly::param("beta")) +
                         fr.sl2_h().scaled(DiffPoly::param("gamma"));
  const FirstIntegral fi = first_integral(w2, 4, "w2");
  CHECK((fi.expr - closed_form_w2(4)).is_constant());
}

TEST_CASE("closed forms") {
  CHECK(closed_form_vk(0, 7) == P("y6"));
  CHECK(closed_form_vk(1, 4) == P("x*y3 - y2"));
  CHECK(closed_form_vk(2, 4) == P("x^2*y3 - 2*x*y2 + 2*y1"));
  CHECK(closed_form_wy(3) == P("y*y2 - 1/2*y1^2"));
  CHECK(closed_form_wy(5) == P("1/2*y2^2 + y4*y - y3*y1"));
  CHECK_THROWS_AS(closed_form_wy(4), UnsupportedError);
  CHECK_THROWS_AS(closed_form_w2(10), UnsupportedError);
  CHECK_THROWS_AS(closed_form_vk(4, 4), UnsupportedError);

  for (int n = 2; n <= 8; ++n)
    for (int k = 0; k < n; ++k)
      CHECK(closed_form_vk(k, n).total_derivative() ==
            pow(DiffPoly::x(), static_cast<unsigned>(k)) * DiffPoly::y(n));

  // each sl2 fixture differentiates back to its conservation law
  for (int n : {4, 6, 8}) {
    const SymmetryFrame fr = frame(n);
    const VectorField w2 = fr.sl2_f().scaled(DiffPoly::param("alpha")) +
                           fr.sl2_g().scaled(DiffPoly::param("beta")) +
                           fr.sl2_h().scaled(DiffPoly::param("gamma"));
    CHECK(closed_form_w2(n).total_derivative() == characteristic(w2) * DiffPoly::y(n));
  }

  // the generic combination differentiates back to P(x) * y_n
  for (int n : {3, 4, 5}) {
    DiffPoly pn;
    for (int i = 0; i < n; ++i)
      pn = pn + DiffPoly::param("a" + std::to_string(i)) *
                    pow(DiffPoly::x(), static_cast<unsigned>(i));
    CHECK(closed_form_w1(n).total_derivative() == pn * DiffPoly::y(n));
  }
}

TEST_CASE("constancy on solutions") {
  const FirstIntegral fi_v1 = first_integral(frame(4).solution(1), 4, "V1");
  CHECK(constancy_check(fi_v1));
  {
    std::map<VarId, DiffPoly> bind;
    for (int j = 0; j <= fi_v1.expr.max_jet_order(); ++j)
      bind.emplace(VarId::jet_y(j), general_solution_jet(j, 4));
    CHECK(fi_v1.expr.substitute(bind) == P("-2*c2"));
  }

  const FirstIntegral fi_wy = first_integral(frame(3).homogeneity(), 3, "W_y");
  CHECK(constancy_check(fi_wy));
  {
    std::map<VarId, DiffPoly> bind;
    for (int j = 0; j <= fi_wy.expr.max_jet_order(); ++j)
      bind.emplace(VarId::jet_y(j), general_solution_jet(j, 3));
    CHECK(fi_wy.expr.substitute(bind) == P("2*c0*c2 - 1/2*c1^2"));
  }

  const FirstIntegral fake{"not-an-integral", frame(3).homogeneity(), 3, P("y")};
  CHECK_FALSE(constancy_check(fake));
}

TEST_CASE("brackets of frame generators close within the frame span") {
  for (int n : {3, 4, 5}) {
    const SymmetryFrame fr = frame(n);
    for (const auto& [an, a] : fr.generators)
      for (const auto& [bn, b] : fr.generators)
        CHECK(decompose_in_frame(lie_bracket(a, b), fr).has_value());
  }
  const SymmetryFrame fr = frame(3);
  CHECK_FALSE(decompose_in_frame(VectorField(P("0"), P("y^2")), fr).has_value());
  const auto combo = decompose_in_frame(lie_bracket(fr.sl2_g(), fr.sl2_h()), fr);
  REQUIRE(combo.has_value());
  CHECK(combo->at("H3") == Rational(2));  // [G, H] = 2H
  CHECK(combo->size() == 1);
}

TEST_CASE("order-by-order verification") {
  const ConjectureReport rep = verify_conjecture(5);
  CHECK(rep.all_pass());
  CHECK(rep.n_max == 5);
  CHECK(rep.failures() == 0);
  for (const auto& it : rep.items) CHECK_FALSE(it.extrapolation);

  const ConjectureReport rep12 = verify_conjecture(12);
  CHECK(rep12.all_pass());
  for (const auto& it : rep12.items) CHECK(it.extrapolation == (it.n > 8));

  CHECK_THROWS_AS(verify_conjecture(13), UnsupportedError);
  CHECK_THROWS_AS(verify_conjecture(2), UnsupportedError);
  CHECK_THROWS_AS(verify_conjecture(10, 9), UnsupportedError);
}
