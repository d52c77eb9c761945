#include <gtest/gtest.h>

#include <functional>

#include "laws.hpp"
#include "minerl/checker.hpp"
#include "minerl/interp.hpp"
#include "minerl/pretty.hpp"

using namespace minerl;

namespace {

std::string first_failures(const std::vector<std::string>& fs) {
  std::string out;
  for (std::size_t i = 0; i < fs.size() && i < 5; ++i) out += fs[i] + "\n";
  return out;
}

TEST(Properties, SubtypingLaws) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto st = test::check_subtyping_laws(seed, 150);
    EXPECT_TRUE(st.failures.empty()) << first_failures(st.failures);
    EXPECT_GT(st.projection_hits, 100u);
  }
}

TEST(Properties, GroundOracle) {
  auto st = test::check_ground_oracle(77, 300);
  EXPECT_TRUE(st.failures.empty()) << first_failures(st.failures);
  EXPECT_GT(st.empty, 10u);
  EXPECT_GT(st.witnessed, 100u);
}

// Accepted generated programs never get stuck, under any oracle strategy,
// and first-order results inhabit the inferred type.
int sound_runs(const std::function<Program(TypeStore&)>& make, int n) {
  int accepted = 0;
  for (int i = 0; i < n; ++i) {
    TypeStore s;
    Program p = make(s);
    CheckResult r = check_program(s, p);
    if (!r.ok) continue;
    ++accepted;
    std::vector<OracleStrategy> strategies = {OracleStrategy::always_true(),
                                              OracleStrategy::always_false(),
                                              OracleStrategy::seeded(i)};
    for (auto& st : strategies) {
      RunResult rr = run(p, 10'000, st);
      EXPECT_NE(rr.kind, RunResult::Kind::Stuck)
          << pretty_program(s, p) << rr.reason << " under " << st.describe();
      if (rr.kind == RunResult::Kind::Final && test::first_order(*rr.expr) &&
          s.free_ty_vars(r.main_type).empty())
        EXPECT_TRUE(member(s, *rr.expr, r.main_type))
            << pretty_program(s, p) << " -> " << pretty_expr(*rr.expr) << " : "
            << type_to_string(s, r.main_type);
    }
  }
  return accepted;
}

TEST(Properties, GeneratedProgramsSound) {
  test::Gen g(2718);
  g.expr_captures = false;
  EXPECT_GT(sound_runs([&](TypeStore&) { return Program{{}, g.closed_expr(3)}; }, 1500), 500);
}

TEST(Properties, GeneratedAnnotatedProgramsSound) {
  test::Gen g(3141);
  g.expr_captures = false;
  EXPECT_GT(sound_runs([&](TypeStore& s) { return g.annotated_program(s); }, 2500), 100);
}

}  // namespace
