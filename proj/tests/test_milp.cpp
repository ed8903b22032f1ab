#include <doctest.h>

#include "evsp/evsp3.hpp"
#include "evsp/milp.hpp"
#include "support.hpp"

using namespace evsp::milp;

namespace {

class NoDualsBackend : public Backend {
 public:
  std::string name() const override { return "no-duals"; }
  bool provides_reduced_costs() const override { return false; }
  SolveOutcome solve_lp_relaxation(const Model&, const SolverParams&) override { return {}; }
  SolveOutcome solve_mip(const Model&, const SolverParams&, const std::vector<double>*) override { return {}; }
};

SolverParams quick() {
  SolverParams p;
  p.time_limit_seconds = 30;
  return p;
}

}  // namespace

TEST_SUITE("milp") {
  TEST_CASE("variables and constraints are registered") {
    Model m;
    const auto b = m.add_variable(VarKind::Binary, 0, 1, 38);
    const auto c = m.add_variable(VarKind::Continuous, 0, 1800000, 0);
    CHECK(b.valid());
    CHECK(c.valid());
    CHECK(m.variable(b).objective == 38);
    m.add_linear_constraint({{b, 1}, {c, 1}}, Sense::Equal, 1);
    m.add_linear_constraint({}, Sense::Equal, 0);  // vacuous
    CHECK(m.num_constraints() == 2);
  }

  TEST_CASE("model errors") {
    Model m;
    CHECK_THROWS_AS(m.add_variable(VarKind::Continuous, 2, 1, 0), ModelError);
    CHECK_THROWS_AS(m.add_variable(VarKind::Binary, 0, 2, 0), ModelError);
    CHECK_THROWS_AS(m.add_linear_constraint({{VarRef{7}, 1}}, Sense::LessEqual, 1), ModelError);
    const auto x = m.add_variable(VarKind::Binary, 0, 1, 1);
    CHECK_THROWS_AS(m.fix_variable(x, 2), ModelError);
    m.seal();
    CHECK_THROWS_AS(m.add_variable(VarKind::Binary, 0, 1, 0), ModelError);
    CHECK_THROWS_AS(m.add_linear_constraint({{x, 1}}, Sense::LessEqual, 1), ModelError);
  }

  TEST_CASE("fix and release restore the original bounds") {
    Model m;
    const auto x = m.add_variable(VarKind::Binary, 0, 1, 1);
    m.fix_variable(x, 0);
    CHECK(m.is_fixed(x));
    CHECK(m.variable(x).upper == 0);
    m.release_variable(x);
    CHECK(m.variable(x).lower == 0);
    CHECK(m.variable(x).upper == 1);
  }

  TEST_CASE("fixed variables keep their value in solves") {
    Model m;
    const auto x = m.add_variable(VarKind::Binary, 0, 1, 3);
    const auto y = m.add_variable(VarKind::Binary, 0, 1, 2);
    m.add_linear_constraint({{x, 1}, {y, 1}}, Sense::LessEqual, 1);
    m.fix_variable(x, 0);
    const auto backend = make_backend("highs");
    const auto out = backend->solve_mip(m, quick());
    REQUIRE(out.status == SolveStatus::Optimal);
    CHECK(out.value(x) == 0.0);
    CHECK(out.value(y) == 1.0);
    CHECK(out.objective == doctest::Approx(2));
  }

  TEST_CASE("LP relaxation reports reduced costs with the improvement sign") {
    Model m;
    const auto x = m.add_variable(VarKind::Binary, 0, 1, 1);
    const auto backend = make_backend("highs");
    const auto out = backend->solve_lp_relaxation(m, quick());
    REQUIRE(out.status == SolveStatus::Optimal);
    CHECK(out.objective == doctest::Approx(1));
    CHECK(out.reduced_cost(x) == doctest::Approx(1));

    Model n;
    const auto z = n.add_variable(VarKind::Binary, 0, 1, -2);
    const auto lp = backend->solve_lp_relaxation(n, quick());
    CHECK(lp.value(z) == doctest::Approx(0));
    CHECK(lp.reduced_cost(z) == doctest::Approx(-2));
  }

  TEST_CASE("LP relaxation treats binaries as continuous") {
    Model m;
    const auto x = m.add_variable(VarKind::Binary, 0, 1, 1);
    const auto y = m.add_variable(VarKind::ImplicitBinary, 0, 1, 1);
    m.add_linear_constraint({{x, 2}, {y, 2}}, Sense::LessEqual, 1);
    const auto backend = make_backend("highs");
    const auto lp = backend->solve_lp_relaxation(m, quick());
    CHECK(lp.objective == doctest::Approx(0.5));
    // Without polishing the MIP point is the branch-and-bound one, where
    // implicit binaries are integral too.
    auto params = quick();
    params.polish = false;
    const auto mip = backend->solve_mip(m, params);
    CHECK(mip.objective == doctest::Approx(0));
  }

  TEST_CASE("infeasible models report a status") {
    Model m;
    const auto x = m.add_variable(VarKind::Binary, 0, 1, 1);
    m.add_linear_constraint({{x, 1}}, Sense::GreaterEqual, 2);
    const auto backend = make_backend("highs");
    CHECK(backend->solve_lp_relaxation(m, quick()).status == SolveStatus::Infeasible);
    CHECK(backend->solve_mip(m, quick()).status == SolveStatus::Infeasible);
  }

  TEST_CASE("warm start is accepted") {
    Model m;
    const auto x = m.add_variable(VarKind::Binary, 0, 1, 3);
    const auto y = m.add_variable(VarKind::Binary, 0, 1, 2);
    m.add_linear_constraint({{x, 1}, {y, 1}}, Sense::LessEqual, 1);
    const std::vector<double> start{0, 1};
    const auto out = make_backend("highs")->solve_mip(m, quick(), &start);
    CHECK(out.objective == doctest::Approx(3));
  }

  TEST_CASE("repeated single-thread solves agree") {
    const auto inst = testing::table1();
    const auto m = evsp::build_model(inst);
    const auto backend = make_backend("highs");
    const auto a = backend->solve_mip(m.model, quick());
    const auto b = backend->solve_mip(m.model, quick());
    CHECK(a.objective == b.objective);
    CHECK(std::abs(a.best_bound - b.best_bound) <= 1e-6 * std::max(1.0, std::abs(a.best_bound)));
  }

  TEST_CASE("backends without reduced costs are rejected") {
    CHECK_THROWS_AS(require_reduced_costs(NoDualsBackend{}), CapabilityError);
    CHECK_NOTHROW(require_reduced_costs(*make_backend("highs")));
    CHECK_THROWS(make_backend("no-such-solver"));
  }

  TEST_CASE("assignment checker names violations") {
    Model m;
    const auto x = m.add_variable(VarKind::Binary, 0, 1, 1, "x");
    m.add_linear_constraint({{x, 1}}, Sense::LessEqual, 0, "cap");
    CHECK(m.check_assignment({0}).empty());
    CHECK(!m.check_assignment({1}).empty());
    CHECK(!m.check_assignment({0.5}).empty());
  }

  TEST_CASE("LP export keeps family row names") {
    const auto inst = testing::table1();
    const auto text = evsp::build_model(inst).model.to_lp_string();
    CHECK(text.find("eq7[") != std::string::npos);
    CHECK(text.find("eq11b[") != std::string::npos);
  }
}
