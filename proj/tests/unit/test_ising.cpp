#include <gtest/gtest.h>

#include <algorithm>

#include "oracles.hpp"
#include "vqcount/errors.hpp"
#include "vqcount/instances.hpp"
#include "vqcount/ising.hpp"

using namespace vqcount;

namespace {

// Energy of a full assignment straight from the clause list, with the same
// sign conventions as the model: -J s s - h s, J = -1 per triangle edge.
double direct_energy(const Formula& f, std::uint64_t x, const FieldConvention& conv) {
  auto s = [&](std::uint32_t v) { return ((x >> v) & 1) ? 1.0 : -1.0; };
  double e = 0;
  for (const auto& c : f.clauses()) {
    e += s(c[0]) * s(c[1]) + s(c[0]) * s(c[2]) + s(c[1]) * s(c[2]);
    if (f.semantics() == Semantics::ExactlyOne) {
      for (auto v : c) e -= conv.sign * conv.weight * s(v);
    }
  }
  return e;
}

}  // namespace

TEST(Ising, CalibratedOneInThreeFieldFavoursOneHot) {
  const FieldConvention& conv = field_convention(Semantics::ExactlyOne);
  EXPECT_EQ(conv.sign, -1);
  EXPECT_DOUBLE_EQ(conv.weight, 1.0);
}

TEST(Ising, SingleNaeClauseLevels) {
  const Formula f(3, {{0, 1, 2}}, Semantics::NotAllEqual);
  const EnergyVector ev = energy_vector(build_ising(f));
  EXPECT_DOUBLE_EQ(ev.solution_energy, -1.0);
  for (std::uint64_t x = 0; x < 8; ++x) {
    const bool all_equal = x == 0 || x == 7;
    EXPECT_DOUBLE_EQ(ev.values[x], all_equal ? 3.0 : -1.0);
  }
  EXPECT_EQ(solution_indices(ev).size(), 6u);
}

TEST(Ising, SingleOneInThreeClauseLevels) {
  const Formula f(3, {{0, 1, 2}}, Semantics::ExactlyOne);
  const EnergyVector ev = energy_vector(build_ising(f));
  EXPECT_DOUBLE_EQ(ev.solution_energy, -2.0);
  EXPECT_EQ(solution_indices(ev), (std::vector<std::uint32_t>{1, 2, 4}));
}

TEST(Ising, SharedPairsAccumulate) {
  const Formula f(4, {{0, 1, 2}, {0, 1, 3}}, Semantics::NotAllEqual);
  const IsingModel m = build_ising(f);
  const auto it = std::find_if(m.couplings.begin(), m.couplings.end(),
                               [](const Coupling& c) { return c.i == 0 && c.j == 1; });
  ASSERT_NE(it, m.couplings.end());
  EXPECT_DOUBLE_EQ(it->value, -2.0);
}

TEST(Ising, VectorMatchesDirectEnergy) {
  for (Problem p : {Problem::Nae3Sat, Problem::OneIn3Sat}) {
    const Formula f = generate({p, 12, p == Problem::Nae3Sat ? Ratio{1, 1} : Ratio{2, 3}, 4});
    const IsingModel m = build_ising(f);
    const EnergyVector ev = energy_vector(m);
    for (std::uint64_t x = 0; x < ev.size(); ++x) {
      const double d = direct_energy(f, x, field_convention(f.semantics()));
      ASSERT_NEAR(ev.values[x], d, 1e-12);
      ASSERT_NEAR(m.energy_of(x), d, 1e-12);
    }
  }
}

TEST(Ising, PinsFoldIntoFieldsAndOffset) {
  const Formula full = generate({Problem::OneIn3Sat, 9, {2, 3}, 2});
  const Formula pinned = full.fix_variable(0, true).fix_variable(4, false);
  const EnergyVector reduced = energy_vector(build_ising(pinned));
  EXPECT_EQ(reduced.qubits(), 7u);
  const FieldConvention& conv = field_convention(Semantics::ExactlyOne);
  for (std::uint64_t c = 0; c < reduced.size(); ++c) {
    ASSERT_NEAR(reduced.values[c], direct_energy(full, pinned.expand(c), conv), 1e-12);
  }
}

TEST(Ising, GroundSpaceEqualsSolutions) {
  for (Problem p : {Problem::Nae3Sat, Problem::OneIn3Sat}) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const Formula f = generate({p, 12, p == Problem::Nae3Sat ? Ratio{1, 1} : Ratio{2, 3}, seed});
      const auto truth = oracle::brute_solutions(f);
      const EnergyVector ev = energy_vector(build_ising(f));
      const auto sol = solution_indices(ev);
      EXPECT_EQ(std::vector<std::uint64_t>(sol.begin(), sol.end()), truth);
      const MappingReport r = validate_mapping(f);
      if (!truth.empty()) {
        EXPECT_TRUE(r.ground_equals_solutions);
        EXPECT_EQ(r.n_solutions, truth.size());
        EXPECT_DOUBLE_EQ(r.min_energy, r.solution_energy);
      }
    }
  }
}

TEST(Ising, UnsatisfiableFormulaIsReported) {
  const Formula f(4, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}}, Semantics::ExactlyOne);
  const MappingReport r = validate_mapping(f);
  EXPECT_FALSE(r.satisfiable);
  EXPECT_GT(r.min_energy, r.solution_energy);
  EXPECT_FALSE(r.note.empty());
  EXPECT_TRUE(solution_indices(energy_vector(build_ising(f))).empty());
}

TEST(Ising, OppositeSignBreaksTheMapping) {
  const Formula f(3, {{0, 1, 2}}, Semantics::ExactlyOne);
  const EnergyVector ev = energy_vector(build_ising(f, {+1, 1.0}));
  // the two-hot patterns sit lowest under the opposite sign
  const double emin = *std::min_element(ev.values.begin(), ev.values.end());
  EXPECT_DOUBLE_EQ(ev.values[3], emin);
  EXPECT_GT(ev.values[1], emin);
}

TEST(Ising, TwoLevelCollapse) {
  const Formula f(3, {{0, 1, 2}}, Semantics::NotAllEqual);
  const EnergyVector tl = two_level(energy_vector(build_ising(f)));
  EXPECT_EQ(tl.values, (std::vector<double>{1, 0, 0, 0, 0, 0, 0, 1}));
  EXPECT_EQ(solution_indices(tl).size(), 6u);
}

TEST(Ising, QubitCapIsEnforced) {
  const Formula f = generate({Problem::Nae3Sat, 12, {1, 1}, 0});
  EXPECT_THROW(energy_vector(build_ising(f), 10), ResourceError);
  EXPECT_THROW(validate_mapping(generate({Problem::Nae3Sat, 18, {1, 1}, 0})), ResourceError);
}
