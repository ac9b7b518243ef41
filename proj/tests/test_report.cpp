#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "ccsub/ccsub.hpp"

using namespace ccsub;

namespace {

RunConfig config(const std::string& example, std::vector<std::string> checks, int points = 10) {
  RunConfig c;
  c.example = example;
  c.checks = std::move(checks);
  c.points = points;
  return c;
}

template <class F>
ErrorKind error_of(F&& f) {
  try {
    f();
  } catch (const GeometryError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no GeometryError thrown";
  return ErrorKind::UnknownCheck;
}

}  // namespace

TEST(Report, SingleCheckRun) {
  const Report r = run(config("hopf_s3", {"structure_equation"}));
  ASSERT_EQ(r.checks.size(), 1u);
  EXPECT_EQ(r.checks[0].name, "structure_equation");
  EXPECT_EQ(r.checks[0].points_used, 10);
  EXPECT_EQ(r.checks[0].tolerance, 1e-7);
  EXPECT_TRUE(r.passed);
}

TEST(Report, EmptyCheckListPasses) {
  const Report r = run(config("warped_constant", {}));
  EXPECT_TRUE(r.checks.empty());
  EXPECT_TRUE(r.passed);
}

TEST(Report, FailingCheckIsData) {
  const Report r = run(config("hopf_s3", {"horizontal_integrability", "oneill_T_symmetry"}));
  ASSERT_EQ(r.checks.size(), 2u);
  EXPECT_FALSE(r.checks[0].passed);
  EXPECT_TRUE(r.checks[1].passed);
  EXPECT_FALSE(r.passed);
}

TEST(Report, ConfigurationErrors) {
  EXPECT_EQ(error_of([] { (void)run(config("hopf_s3", {"no_such_check"})); }), ErrorKind::UnknownCheck);
  EXPECT_EQ(error_of([] { (void)run(config("no_such_example", {"all"})); }), ErrorKind::UnknownExample);
  EXPECT_EQ(error_of([] { (void)run(config("hopf_s3", {"all"}, 0)); }), ErrorKind::PreconditionNotMet);
  EXPECT_EQ(error_of([] { (void)run(config("warped_quadratic", {"structure_equation"})); }),
            ErrorKind::MissingStructure);
  EXPECT_EQ(error_of([] { (void)run(config("olszak_exp", {"oneill_T_symmetry"})); }), ErrorKind::MissingStructure);
  EXPECT_EQ(error_of([] { (void)run(config("hopf_s3", {"kahler_base"})); }), ErrorKind::PreconditionNotMet);
}

TEST(Report, ApplicableChecksAreRegisteredAndSatisfied) {
  for (const auto& spec : example_specs()) {
    const Example e = spec.build();
    const auto names = applicable_checks(spec.name);
    EXPECT_FALSE(names.empty());
    for (const auto& n : names) EXPECT_TRUE(satisfies(e, find_check(n).needs)) << spec.name << " " << n;
  }
}

TEST(Report, AllChecksPassOnEveryExample) {
  for (const auto& spec : example_specs()) {
    const Report r = run(config(spec.name, {"all"}));
    EXPECT_TRUE(r.passed) << spec.name << "\n" << emit_text(r);
  }
}

TEST(Report, DuplicateNamesCollapse) {
  const auto names = resolve_checks(config("hopf_s3", {"torsion_free", "all", "torsion_free"}));
  EXPECT_EQ(std::count(names.begin(), names.end(), "torsion_free"), 1);
  EXPECT_EQ(names.front(), "torsion_free");
}

TEST(Report, JsonRoundTripAndDeterminism) {
  const Report a = run(config("hopf_s3", {"all"}));
  const Report b = run(config("hopf_s3", {"all"}));
  EXPECT_EQ(emit(a, "json"), emit(b, "json"));
  const auto j = to_json(a);
  EXPECT_EQ(to_json(report_from_json(j)).dump(2), j.dump(2));
  EXPECT_TRUE(j.contains("conventions"));
  for (const auto& [k, v] : convention_ledger()) EXPECT_EQ(j["conventions"][k], v);
  EXPECT_EQ(j["checks"].size(), a.checks.size());
}

TEST(Report, NanResidualSerializesAsNull) {
  Report r;
  r.config.example = "hopf_s3";
  IdentityCheck c;
  c.name = "x";
  c.residual_max = std::numeric_limits<double>::quiet_NaN();
  c.passed = false;
  r.checks.push_back(c);
  r.passed = false;
  const auto j = nlohmann::ordered_json::parse(to_json(r).dump());
  EXPECT_TRUE(j["checks"][0]["residual_max"].is_null());
  EXPECT_TRUE(std::isnan(report_from_json(j).checks[0].residual_max));
}

TEST(Report, TextHasOneLinePerCheck) {
  const Report r = run(config("warped_quadratic", {"warped_T", "torsion_free"}));
  const std::string t = emit(r, "text");
  EXPECT_NE(t.find("warped_T "), std::string::npos);
  EXPECT_NE(t.find("torsion_free "), std::string::npos);
  EXPECT_NE(t.find("overall: PASS"), std::string::npos);
  EXPECT_EQ(std::count(t.begin(), t.end(), '\n'),
            static_cast<long>(1 + convention_ledger().size() + 1 + r.checks.size() + 1));
}
