/*
   Copyright 2026 The levy_bdg Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <cmath>
#include <memory>
#include <vector>

#include <doctest.h>

#include "levy_bdg/filtration.hpp"

using namespace levy_bdg;

namespace {

// Root with three children of probabilities 1/2, 1/4, 1/4.
std::shared_ptr<const FiltrationTree> three_leaf_tree() {
  TreeBuilder b;
  b.add_child(b.root(), 0.5);
  b.add_child(b.root(), 0.25);
  b.add_child(b.root(), 0.25);
  return b.build();
}

// Depth-2 tree of two fair coins, values given per node id.
AdaptedProcess two_coin_process(std::vector<double> values) {
  TreeBuilder b;
  const int l = b.add_child(b.root(), 0.5);
  const int r = b.add_child(b.root(), 0.5);
  for (int parent : {l, r}) {
    b.add_child(parent, 0.5);
    b.add_child(parent, 0.5);
  }
  return AdaptedProcess(b.build(), 1, std::move(values));
}

}  // namespace

TEST_SUITE("filtration") {

TEST_CASE("tree invariants") {
  const auto tree = three_leaf_tree();
  CHECK(tree->depth() == 1);
  CHECK(tree->leaves().size() == 3);
  double total = 0.0;
  for (int leaf : tree->leaves()) total += tree->node(leaf).prob;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

  TreeBuilder bad;
  bad.add_child(bad.root(), 0.5);
  CHECK_THROWS_AS(bad.build(), std::invalid_argument);

  TreeBuilder ragged;
  const int a = ragged.add_child(ragged.root(), 0.5);
  ragged.add_child(ragged.root(), 0.5);
  ragged.add_child(a, 1.0);
  CHECK_THROWS_AS(ragged.build(), std::invalid_argument);
}

TEST_CASE("conditional expectation by enumeration") {
  const auto tree = three_leaf_tree();
  LevelField x{1, 1, {4.0, 0.0, 8.0}};
  const LevelField root = conditional_expectation(*tree, x, 0);
  REQUIRE(root.values.size() == 1);
  CHECK(root.values[0] == doctest::Approx(4.0));  // 2 + 0 + 2

  const AdaptedProcess walk = binary_walk(1);
  const LevelField leaves = walk.level_field(1);
  CHECK(conditional_expectation(walk.tree(), leaves, 0).values[0] == doctest::Approx(0.0));

  LevelField c{1, 1, {7.0, 7.0, 7.0}};
  CHECK(conditional_expectation(*tree, c, 0).values[0] == doctest::Approx(7.0));
  CHECK_THROWS_AS(conditional_expectation(*tree, x, 2), std::out_of_range);
}

TEST_CASE("tower property on a random tree") {
  RandomTreeOptions o;
  o.depth = 4;
  o.dim = 2;
  o.seed = 5;
  const AdaptedProcess m = random_martingale(o);
  const LevelField x = m.level_field(4);
  const LevelField direct = conditional_expectation(m.tree(), x, 1);
  const LevelField via = conditional_expectation(m.tree(), conditional_expectation(m.tree(), x, 3), 1);
  REQUIRE(direct.values.size() == via.values.size());
  for (std::size_t i = 0; i < direct.values.size(); ++i) {
    CHECK(direct.values[i] == doctest::Approx(via.values[i]).epsilon(1e-12));
  }
}

TEST_CASE("martingale property") {
  CHECK(is_martingale(binary_walk(4)));
  CHECK(is_martingale(random_martingale({})));

  // M_1 = M_0 + 1 deterministically.
  std::vector<LevelSpec> drift{{{1.0}, {{1.0}}}};
  CHECK_FALSE(is_martingale(level_martingale({0.0}, drift)));

  // Multiplicative M_{k+1} = M_k U with U in {0.5, 1.5}.
  CHECK(is_martingale(two_coin_process({1.0, 0.5, 1.5, 0.25, 0.75, 0.75, 2.25})));
  CHECK_FALSE(is_martingale(two_coin_process({1.0, 0.5, 1.5, 0.25, 0.75, 0.75, 2.5})));
}

TEST_CASE("martingale statistics") {
  std::vector<LevelSpec> none;
  const AdaptedProcess c = level_martingale({-3.0}, none);
  const MartingaleStats sc = stats(c, 2.0);
  CHECK(sc.max_value[0] == doctest::Approx(3.0));
  CHECK(sc.p_variation[0] == doctest::Approx(3.0));

  const AdaptedProcess w1 = binary_walk(1);
  const MartingaleStats s1 = stats(w1, 2.0);
  for (int leaf : w1.tree().leaves()) {
    CHECK(s1.p_variation[leaf] == doctest::Approx(1.0));
    CHECK(s1.max_value[leaf] == doctest::Approx(1.0));
    CHECK(s1.cond_variation[leaf] == doctest::Approx(1.0));
  }

  const AdaptedProcess w2 = binary_walk(2);
  const MartingaleStats s2 = stats(w2, 2.0);
  for (int leaf : w2.tree().leaves()) CHECK(s2.p_variation[leaf] == doctest::Approx(std::sqrt(2.0)));

  // Running maxima and p-sums never decrease along a branch.
  RandomTreeOptions o;
  o.depth = 5;
  o.seed = 17;
  const AdaptedProcess m = random_martingale(o);
  const MartingaleStats s = stats(m, 1.5);
  for (std::size_t id = 1; id < m.tree().size(); ++id) {
    const int parent = m.tree().node(static_cast<int>(id)).parent;
    CHECK(s.max_value[id] >= s.max_value[static_cast<std::size_t>(parent)]);
    CHECK(s.p_variation[id] >= s.p_variation[static_cast<std::size_t>(parent)]);
  }
}

TEST_CASE("Davis decomposition") {
  // m*_0 = 0, so A_1 is empty and everything lands in H.
  const AdaptedProcess w = binary_walk(1);
  const DavisDecomposition dw = davis_decompose(w);
  for (std::size_t id = 0; id < w.tree().size(); ++id) {
    CHECK(dw.good.value(static_cast<int>(id))[0] == 0.0);
    CHECK(dw.bad.value(static_cast<int>(id))[0] == w.value(static_cast<int>(id))[0]);
  }

  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    RandomTreeOptions o;
    o.depth = 3;
    o.dim = 1 + static_cast<int>(seed % 3);
    o.norm_s = seed % 2 == 0 ? 2.0 : kInfNorm;
    o.seed = seed;
    const AdaptedProcess m = random_martingale(o);
    const DavisCheck chk = check_davis(m, davis_decompose(m));
    CHECK(chk.worst() <= 1e-10);
  }

  std::vector<LevelSpec> drift{{{1.0}, {{1.0}}}};
  CHECK_THROWS_AS(davis_decompose(level_martingale({0.0}, drift)), std::invalid_argument);
}

TEST_CASE("type 2 identity in Hilbert space") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    RandomTreeOptions o;
    o.depth = 4;
    o.dim = 3;
    o.norm_s = 2.0;
    o.seed = seed;
    CHECK(std::fabs(type2_identity_gap(random_martingale(o))) <= 1e-10);
  }
}

TEST_CASE("norm process") {
  const AdaptedProcess x = norm_process(binary_walk(3, 2.0));
  CHECK(x.value(0)[0] == 0.0);
  for (int leaf : x.tree().leaves()) CHECK(x.value(leaf)[0] >= 0.0);
}

}  // TEST_SUITE
