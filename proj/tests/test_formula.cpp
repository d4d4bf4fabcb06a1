#include <doctest.h>
#include <algorithm>

#include "auditcount/errors.hpp"
#include "auditcount/formula.hpp"
#include "auditcount/rng.hpp"
#include "support/corpus.hpp"

using namespace auditcount;
using testsupport::make_formula;

namespace {

// Independent truth-table counter: nested loops, no bit tricks shared with
// the library path.
std::uint64_t naive_count(const CnfFormula& f) {
  std::uint64_t total = 0;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << f.num_vars); ++bits) {
    bool ok = !f.has_empty_clause;
    for (const Clause& cl : f.clauses) {
      bool sat = false;
      for (int lit : cl) {
        bool value = (bits >> (std::abs(lit) - 1)) & 1;
        if ((lit > 0) == value) sat = true;
      }
      if (!sat) {
        ok = false;
        break;
      }
    }
    if (ok) ++total;
  }
  return total;
}

CnfFormula random_3cnf(int n, int clauses, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Clause> cls;
  for (int i = 0; i < clauses; ++i) {
    Clause cl;
    while (cl.size() < 3) {
      int v = 1 + static_cast<int>(rng.next() % n);
      bool dup = false;
      for (int lit : cl)
        if (std::abs(lit) == v) dup = true;
      if (!dup) cl.push_back(rng.next() & 1 ? v : -v);
    }
    cls.push_back(cl);
  }
  return make_formula(n, cls);
}

}  // namespace

TEST_CASE("dimacs parsing of the basic shapes") {
  CnfFormula f = parse_dimacs("p cnf 2 1\n1 2 0\n");
  CHECK(f.num_vars == 2);
  REQUIRE(f.clauses.size() == 1);
  CHECK(f.clauses[0] == Clause{1, 2});

  CnfFormula taut = parse_dimacs("p cnf 3 0\n");
  CHECK(taut.num_vars == 3);
  CHECK(taut.clauses.empty());
  CHECK(exact_count(taut) == 8);

  CnfFormula units = parse_dimacs("p cnf 2 2\n1 0\n-1 0\n");
  CHECK(exact_count(units) == 0);
  CHECK(naive_count(units) == 0);
}

TEST_CASE("dimacs parsing reports located errors") {
  CHECK_THROWS_AS(parse_dimacs("p dnf 2 1\n1 0\n"), ParseError);
  CHECK_THROWS_AS(parse_dimacs("p cnf 0 0\n"), ParseError);
  CHECK_THROWS_AS(parse_dimacs("p cnf -3 0\n"), ParseError);
  CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 3 0\n"), ParseError);
  CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 2\n"), ParseError);
  CHECK_THROWS_AS(parse_dimacs("c only a comment\n"), ParseError);

  try {
    parse_dimacs("p cnf 2 1\nc mid comment\n1 3 0\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.col() == 3);
  }
}

TEST_CASE("comments, warnings, and the empty-clause marker") {
  std::vector<ParseWarning> warnings;
  CnfFormula f =
      parse_dimacs("c header comment\np cnf 2 1\n1 2 0\n-1 -2 0\n", &warnings);
  CHECK(f.clauses.size() == 2);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].message.find("declares 1") != std::string::npos);

  CnfFormula empty_clause = parse_dimacs("p cnf 2 1\n0\n");
  CHECK(empty_clause.has_empty_clause);
  CHECK(empty_clause.clauses.empty());
  CHECK(exact_count(empty_clause) == 0);
}

TEST_CASE("literals are deduplicated and sorted within clauses") {
  CnfFormula f = parse_dimacs("p cnf 3 1\n3 1 3 -2 0\n");
  CHECK(f.clauses[0] == Clause{1, -2, 3});
}

TEST_CASE("evaluation") {
  CnfFormula f = make_formula(2, {{1, 2}});
  CHECK(!evaluate(f, Assignment::from_u64(0b00, 2)));
  CHECK(evaluate(f, Assignment::from_u64(0b01, 2)));  // x1 = 1
  CnfFormula taut = make_formula(2, {});
  CHECK(evaluate(taut, Assignment::from_u64(0b00, 2)));
  CHECK_THROWS_AS(evaluate(f, Assignment::from_u64(0, 3)),
                  std::invalid_argument);
}

TEST_CASE("enumeration matches the independent sweep") {
  CnfFormula f = make_formula(2, {{1, 2}});
  SolutionSet s = enumerate_solutions(f);
  CHECK(s.exhaustive);
  REQUIRE(s.count() == 3);
  CHECK(s.solutions[0].low64() == 0b01);
  CHECK(s.solutions[1].low64() == 0b10);
  CHECK(s.solutions[2].low64() == 0b11);

  CnfFormula contradiction = make_formula(1, {{1}, {-1}});
  CHECK(enumerate_solutions(contradiction).count() == 0);

  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    CnfFormula g = random_3cnf(10, 24, seed);
    CHECK(exact_count(g) == naive_count(g));
  }
}

TEST_CASE("enumeration budget and caps") {
  CnfFormula wide = make_formula(30, {});
  CHECK_THROWS_AS(enumerate_solutions(wide), BudgetExceeded);

  CnfFormula f = make_formula(4, {});
  SolutionSet capped =
      enumerate_solutions(f, EnumerationOptions{std::uint64_t{5}, 24});
  CHECK(capped.count() == 5);
  CHECK(!capped.exhaustive);
}

TEST_CASE("make_copies relabels and multiplies counts") {
  CnfFormula f = make_formula(2, {{1, 2}});
  CnfFormula same = make_copies(f, 1);
  CHECK(same.structurally_equal(f));

  CnfFormula doubled = make_copies(f, 2);
  CHECK(doubled.num_vars == 4);
  CHECK(doubled.clauses.size() == 2);
  CHECK(doubled.clauses[1] == Clause{3, 4});
  CHECK(exact_count(doubled) == 9);

  CnfFormula unsat = make_copies(make_formula(1, {{1}, {-1}}), 3);
  CHECK(exact_count(unsat) == 0);

  CHECK_THROWS_AS(make_copies(f, 0), std::invalid_argument);
}

TEST_CASE("copy products agree with the direct sweep on the corpus") {
  for (const auto& entry : testsupport::load_corpus()) {
    if (entry.n > 6) continue;
    for (int c = 2; c <= 3; ++c) {
      CnfFormula fp = make_copies(entry.formula, c);
      SolutionSet product = enumerate_solutions(fp);
      // Direct path: strip the provenance so the sweep runs over 2^(cn).
      CnfFormula plain = fp;
      plain.copy_base.reset();
      plain.copy_count = 1;
      SolutionSet direct = enumerate_solutions(plain);
      CHECK(product.count() == direct.count());
      CHECK(product.solutions == direct.solutions);
      std::uint64_t expect = 1;
      for (int j = 0; j < c; ++j) expect *= entry.expected_count;
      CHECK(product.count() == expect);
    }
  }
}

TEST_CASE("canonical serialization round-trips") {
  CnfFormula f = parse_dimacs("c comment\np cnf 3 2\n3 -1 0\n2 1 0\n");
  CnfFormula g = parse_dimacs(write_dimacs(f));
  CHECK(f.structurally_equal(g));
  CHECK(write_dimacs(f) == write_dimacs(g));

  CnfFormula empty_clause = parse_dimacs("p cnf 2 1\n0\n");
  CnfFormula h = parse_dimacs(write_dimacs(empty_clause));
  CHECK(h.has_empty_clause);
}

TEST_CASE("solution sets only grow when clauses are removed") {
  for (std::uint64_t seed = 20; seed < 26; ++seed) {
    CnfFormula f = random_3cnf(8, 16, seed);
    SolutionSet full = enumerate_solutions(f);
    for (std::size_t drop = 0; drop < f.clauses.size(); drop += 5) {
      CnfFormula g = f;
      g.clauses.erase(g.clauses.begin() + drop);
      SolutionSet relaxed = enumerate_solutions(g);
      CHECK(relaxed.count() >= full.count());
      CHECK(std::includes(relaxed.solutions.begin(), relaxed.solutions.end(),
                          full.solutions.begin(), full.solutions.end()));
    }
  }
}

TEST_CASE("digest pins the canonical content") {
  CnfFormula f = make_formula(3, {{1, 2}, {-2, 3}});
  CnfFormula same = make_formula(3, {{-2, 3}, {2, 1}});
  CHECK(formula_digest(f) == formula_digest(same));
  CnfFormula flipped = make_formula(3, {{1, 2}, {2, 3}});
  CHECK(formula_digest(f) != formula_digest(flipped));
  CHECK(formula_digest(f).rfind("sha256:", 0) == 0);
  CHECK(formula_digest(f).size() == 7 + 64);
}

TEST_CASE("corpus manifest counts match enumeration") {
  auto corpus = testsupport::load_corpus();
  CHECK(corpus.size() == 40);
  for (const auto& entry : corpus) {
    CAPTURE(entry.file);
    CHECK(exact_count(entry.formula) == entry.expected_count);
  }
}
