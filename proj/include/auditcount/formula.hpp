#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace auditcount {

/// Assignments are packed bit vectors, variable i <-> bit i-1 (little-endian).
/// Capacity is fixed at 256 variables; everything the brute-force machinery
/// touches is far below that, and the enumeration budget trips first anyway.
struct Assignment {
  static constexpr int kMaxVars = 256;

  std::array<std::uint64_t, 4> words{};
  std::uint32_t width = 0;

  bool bit(int i) const { return (words[i >> 6] >> (i & 63)) & 1; }
  void set_bit(int i, bool v) {
    std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (v) words[i >> 6] |= mask;
    else words[i >> 6] &= ~mask;
  }
  std::uint64_t low64() const { return words[0]; }

  static Assignment from_u64(std::uint64_t bits, int width) {
    Assignment a;
    a.width = width;
    a.words[0] = width >= 64 ? bits : (bits & ((std::uint64_t{1} << width) - 1));
    return a;
  }

  bool operator==(const Assignment&) const = default;
  /// Numeric order of the packed value.
  bool operator<(const Assignment& o) const {
    for (int i = 3; i >= 0; --i)
      if (words[i] != o.words[i]) return words[i] < o.words[i];
    return false;
  }
};

using Clause = std::vector<int>;

/// CNF over variables 1..num_vars. Clauses hold nonzero literals, deduplicated
/// and sorted on construction. An empty clause in the input is recorded as
/// `has_empty_clause` instead of an empty literal list.
struct CnfFormula {
  int num_vars = 0;
  std::vector<Clause> clauses;
  std::string name;
  bool has_empty_clause = false;

  // Set by make_copies: F is copy_count disjoint relabelings of *copy_base.
  // Lets enumeration build the solution set as a cartesian power instead of
  // sweeping 2^(num_vars).
  std::shared_ptr<const CnfFormula> copy_base;
  int copy_count = 1;

  bool structurally_equal(const CnfFormula& o) const {
    return num_vars == o.num_vars && clauses == o.clauses &&
           has_empty_clause == o.has_empty_clause;
  }
};

struct SolutionSet {
  int width = 0;
  bool exhaustive = false;
  std::optional<std::uint64_t> cap;
  std::vector<Assignment> solutions;  // sorted, duplicate-free

  std::uint64_t count() const { return solutions.size(); }
};

struct ParseWarning {
  int line = 0;
  std::string message;
};

struct EnumerationOptions {
  std::optional<std::uint64_t> cap;
  int budget_bits = 24;  // full sweeps allowed up to 2^budget_bits assignments
};

CnfFormula parse_dimacs(std::string_view text,
                        std::vector<ParseWarning>* warnings = nullptr);

/// Canonical serialization: "p cnf" header, clauses with literals sorted by
/// (variable, sign), clauses sorted lexicographically, comments dropped.
std::string write_dimacs(const CnfFormula& f);

bool evaluate(const CnfFormula& f, const Assignment& a);

SolutionSet enumerate_solutions(const CnfFormula& f,
                                const EnumerationOptions& opts = {});

std::uint64_t exact_count(const CnfFormula& f,
                          const EnumerationOptions& opts = {});

/// c disjoint-variable copies of f conjoined: copy j lives on variables
/// (j*n+1 .. j*n+n). Solution counts multiply: |sol(F')| = |sol(F)|^c.
CnfFormula make_copies(const CnfFormula& f, int c);

/// "sha256:<hex>" over the canonical serialization.
std::string formula_digest(const CnfFormula& f);

}  // namespace auditcount
