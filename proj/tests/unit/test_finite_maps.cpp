#include "estimability/errors.hpp"
#include "estimability/finite_maps.hpp"

#include <doctest.h>

#include <chrono>

using namespace estimability;

namespace {

FiniteMap fm(std::size_t codomain, std::vector<std::size_t> table) {
  const auto n = table.size();
  return FiniteMap(n, codomain, std::move(table));
}

// Oracle: does any T: codomain -> domain satisfy T∘P = identity? Enumerates
// every candidate table instead of using the library's construction.
bool left_inverse_exists_by_search(const FiniteMap &p) {
  const auto identity = FiniteMap::identity(p.domain_size());
  for (const auto &t : all_maps(p.codomain_size(), p.domain_size())) {
    if (compose(t, p) == identity)
      return true;
  }
  return false;
}

// Oracle for injectivity: compare every pair directly.
bool injective_by_pairs(const FiniteMap &p) {
  for (std::size_t a = 0; a < p.domain_size(); ++a)
    for (std::size_t b = 0; b < p.domain_size(); ++b)
      if (a != b && p(a) == p(b))
        return false;
  return true;
}

std::size_t product_of_fibre_sizes(const FiniteMap &q) {
  std::vector<std::size_t> sizes(q.codomain_size(), 0);
  for (auto v : q.table())
    ++sizes[v];
  std::size_t product = 1;
  for (auto s : sizes)
    product *= s;
  return product;
}

} // namespace

TEST_SUITE("finite_maps") {

TEST_CASE("construction validates the table") {
  CHECK_THROWS_AS(FiniteMap(2, 2, {0, 2}), InvalidInput);
  CHECK_THROWS_AS(FiniteMap(3, 2, {0, 1}), InvalidInput);
  CHECK_THROWS_AS(FiniteMap(0, 2, {}), InvalidInput);
  CHECK(FiniteMap::identity(3).table() == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("text format") {
  const auto p = parse_finite_map("4 3 : 0,1,1,2");
  CHECK(p == fm(3, {0, 1, 1, 2}));
  CHECK(format_finite_map(p) == "4 3 : 0,1,1,2");
  CHECK(parse_finite_map("  2 3:0, 1 ") == fm(3, {0, 1}));
  CHECK_THROWS_AS(parse_finite_map("2 3 0,1"), ParseError);
  CHECK_THROWS_AS(parse_finite_map("2 3 : 0,x"), ParseError);
  CHECK_THROWS_AS(parse_finite_map("2 3 : 0,3"), ParseError);
}

TEST_CASE("is_injective") {
  CHECK(is_injective(fm(3, {0, 1})));
  CHECK_FALSE(is_injective(fm(2, {0, 0, 1})));
  // P(x, y) = x + y on {0,1}², indices (0,0),(0,1),(1,0),(1,1).
  const auto sum = fm(3, {0, 1, 1, 2});
  CHECK_FALSE(is_injective(sum));
  CHECK(injective_by_pairs(sum) == is_injective(sum));
}

TEST_CASE("compose rejects mismatched shapes") {
  CHECK_THROWS_AS(compose(fm(2, {0, 1}), fm(3, {0, 2})), CompositionError);
  CHECK_THROWS_AS(verify_inner_inverse(fm(3, {0, 1}), fm(2, {0, 1})), CompositionError);
  CHECK_THROWS_AS(verify_outer_inverse(fm(3, {0, 1}), fm(2, {0, 1})), CompositionError);
}

TEST_CASE("construct_inner_inverse examples") {
  const auto p1 = fm(3, {0, 1});
  const auto g1 = construct_inner_inverse(p1);
  CHECK(g1 == fm(2, {0, 1, 0}));
  CHECK(verify_inner_inverse(p1, g1));

  const auto p2 = fm(2, {1, 1});
  const auto g2 = construct_inner_inverse(p2);
  CHECK(g2 == fm(2, {0, 0}));
  CHECK(compose(p2, compose(g2, p2)) == p2);

  CHECK(construct_inner_inverse(FiniteMap::identity(3)) == FiniteMap::identity(3));
}

TEST_CASE("verify inner and outer inverse examples") {
  CHECK(verify_inner_inverse(fm(3, {0, 1}), fm(2, {0, 1, 0})));
  // P∘G∘P = [P(G(0)), P(G(0)), P(G(1))] = [1,1,1] != [0,0,1].
  CHECK_FALSE(verify_inner_inverse(fm(2, {0, 0, 1}), fm(3, {2, 2})));
  CHECK(verify_inner_inverse(FiniteMap::identity(2), FiniteMap::identity(2)));

  CHECK(verify_outer_inverse(fm(3, {0, 1}), fm(2, {0, 1, 0})));
  CHECK(verify_outer_inverse(FiniteMap::identity(3), FiniteMap::identity(3)));
}

TEST_CASE("some inner inverse is not an outer inverse") {
  std::optional<std::pair<FiniteMap, FiniteMap>> witness;
  for (std::size_t d = 1; d <= 3 && !witness; ++d)
    for (std::size_t c = 1; c <= 3 && !witness; ++c)
      for (const auto &p : all_maps(d, c))
        for (const auto &g : all_maps(c, d))
          if (!witness && verify_inner_inverse(p, g) && !verify_outer_inverse(p, g))
            witness.emplace(p, g);
  REQUIRE(witness.has_value());
  CHECK_FALSE(verify_outer_inverse(witness->first, witness->second));

  // The smallest such pair: constant P on two points, G swapping them.
  CHECK(verify_inner_inverse(fm(2, {0, 0}), fm(2, {1, 0})));
  CHECK_FALSE(verify_outer_inverse(fm(2, {0, 0}), fm(2, {1, 0})));

  const auto promoted = promote_to_generalized(fm(2, {0, 0}), fm(2, {1, 0}));
  CHECK(verify_inner_inverse(fm(2, {0, 0}), promoted));
  CHECK(verify_outer_inverse(fm(2, {0, 0}), promoted));
}

TEST_CASE("promote_to_generalized") {
  const auto p = fm(3, {0, 1});
  const auto g = fm(2, {0, 1, 0});
  CHECK(promote_to_generalized(p, g) == g);
  CHECK_THROWS_AS(promote_to_generalized(fm(2, {0, 0, 1}), fm(3, {2, 2})), InvalidInput);

  // Every inner inverse of every P: 3 -> 3, found by exhaustive search.
  std::size_t inner_count = 0;
  for (const auto &pp : all_maps(3, 3)) {
    for (const auto &gg : all_maps(3, 3)) {
      if (!verify_inner_inverse(pp, gg))
        continue;
      ++inner_count;
      const auto gen = promote_to_generalized(pp, gg);
      CHECK(verify_inner_inverse(pp, gen));
      CHECK(verify_outer_inverse(pp, gen));
      if (verify_outer_inverse(pp, gg))
        CHECK(gen == gg);
    }
  }
  CHECK(inner_count > 27);
}

TEST_CASE("fisher_consistent_estimator examples") {
  const auto t = fisher_consistent_estimator(fm(3, {0, 1}));
  REQUIRE(t.has_value());
  CHECK(*t == fm(2, {0, 1, 0}));
  CHECK(compose(*t, fm(3, {0, 1})) == FiniteMap::identity(2));
  CHECK_FALSE(fisher_consistent_estimator(fm(2, {1, 1})).has_value());
}

TEST_CASE("Fisher consistency exists iff injective, against a search oracle") {
  for (const auto &p : all_maps(3, 4)) {
    const bool oracle = left_inverse_exists_by_search(p);
    CHECK(oracle == injective_by_pairs(p));
    CHECK(fisher_consistent_estimator(p).has_value() == oracle);
  }
  for (std::size_t d = 1; d <= 4; ++d) {
    for (std::size_t c = 1; c <= 4; ++c) {
      for (const auto &p : all_maps(d, c)) {
        const auto t = fisher_consistent_estimator(p);
        CHECK(t.has_value() == is_injective(p));
        if (t)
          CHECK(compose(*t, p) == FiniteMap::identity(d));
      }
    }
  }
}

TEST_CASE("inner inverses and idempotent composites") {
  for (std::size_t d = 1; d <= 4; ++d) {
    for (std::size_t c = 1; c <= 4; ++c) {
      for (const auto &p : all_maps(d, c)) {
        const auto g = construct_inner_inverse(p);
        CHECK(g == construct_inner_inverse(p));
        REQUIRE(verify_inner_inverse(p, g));
        CHECK(is_idempotent(compose(p, g)));
        CHECK(is_idempotent(compose(g, p)));
        const auto gen = promote_to_generalized(p, g);
        CHECK(verify_outer_inverse(p, gen));
      }
    }
  }
}

TEST_CASE("parameter_identifiable_standard") {
  const auto p = fm(3, {0, 1, 1, 2});
  const auto q = fm(2, {0, 0, 1, 1});
  CHECK_FALSE(parameter_identifiable_standard(p, q));
  CHECK(parameter_identifiable_standard(p, p));
  CHECK(parameter_identifiable_standard(p, fm(1, {0, 0, 0, 0})));
  CHECK_THROWS_AS(parameter_identifiable_standard(p, fm(2, {0, 1})), InvalidInput);
}

TEST_CASE("enumerate_sections") {
  const auto q = fm(2, {0, 0, 1, 1});
  const auto sections = enumerate_sections(q);
  CHECK(sections.size() == 4);
  for (const auto &s : sections)
    CHECK(compose(q, s) == FiniteMap::identity(2));
  CHECK(sections.front() == fm(4, {0, 2}));

  const auto bijection = fm(3, {2, 0, 1});
  const auto inverse = enumerate_sections(bijection);
  REQUIRE(inverse.size() == 1);
  CHECK(compose(inverse[0], bijection) == FiniteMap::identity(3));

  CHECK(enumerate_sections(fm(1, {0, 0, 0})).size() == 3);
  CHECK_THROWS_AS(enumerate_sections(fm(3, {0, 0, 1})), InvalidInput);
}

TEST_CASE("section counts equal the product of fibre sizes") {
  for (std::size_t d = 1; d <= 4; ++d) {
    for (std::size_t c = 1; c <= 3; ++c) {
      for (const auto &q : all_maps(d, c)) {
        const auto restricted = restrict_to_range(q);
        CHECK(is_surjective(restricted));
        const auto sections = enumerate_sections(restricted);
        CHECK(sections.size() == product_of_fibre_sizes(restricted));
        for (const auto &s : sections)
          CHECK(is_idempotent(compose(s, restricted)));
      }
    }
  }
}

TEST_CASE("parameter_identifiable_sections") {
  CHECK_FALSE(parameter_identifiable_sections(fm(3, {0, 1, 1, 2}), fm(2, {0, 0, 1, 1})));
  const auto injective = fm(3, {2, 0, 1});
  CHECK(parameter_identifiable_sections(injective, injective));
}

TEST_CASE("standard and section definitions agree exhaustively") {
  std::size_t pairs = 0;
  for (std::size_t cp = 1; cp <= 3; ++cp) {
    for (std::size_t cq = 1; cq <= 3; ++cq) {
      for (const auto &p : all_maps(4, cp)) {
        for (const auto &q : all_maps(4, cq)) {
          const auto restricted = restrict_to_range(q);
          CHECK(parameter_identifiable_standard(p, q) ==
                parameter_identifiable_sections(p, restricted));
          ++pairs;
        }
      }
    }
  }
  CHECK(pairs == 98 * 98);
}

TEST_CASE("run_equivalence_checks finds no counterexamples") {
  const auto start = std::chrono::steady_clock::now();
  const auto report = run_equivalence_checks(4, 4);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(report.fisher_maps_checked == (1 + 2 + 3 + 4) + (1 + 4 + 9 + 16) + (1 + 8 + 27 + 64) +
                                            (1 + 16 + 81 + 256));
  CHECK(report.counterexamples() == 0);
  CHECK(report.parameter_pairs_checked > 0);
  CHECK(seconds < 5.0);

  const auto tiny = run_equivalence_checks(1, 4);
  CHECK(tiny.counterexamples() == 0);
  CHECK(tiny.fisher_maps_checked == 1 + 2 + 3 + 4);
}

} // TEST_SUITE
