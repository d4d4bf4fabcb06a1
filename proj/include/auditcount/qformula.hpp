#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "auditcount/circuit.hpp"
#include "auditcount/formula.hpp"
#include "auditcount/hash_family.hpp"

namespace auditcount {

enum class Quantifier { exists, forall };
enum class VarRole { hash_coeff, cell, assignment, tseitin };

enum class Family { stock, holes, not_many, at_least_few, cells, stock_audit };

std::string family_name(Family f);

/// Contiguous run of prefix variables under one quantifier, one role.
struct Block {
  Quantifier q;
  VarRole role;
  int first_var = 0;  // 1-based
  int num_vars = 0;
  std::string label;
};

/// Non-tseitin prefix variable counts by role; `total` is the
/// audit-complexity measure for audit-family formulas.
struct VarBudget {
  long hash_vars = 0;
  long cell_vars = 0;
  long assign_vars = 0;

  long total() const { return hash_vars + cell_vars + assign_vars; }
  bool operator==(const VarBudget&) const = default;
};

/// A prenex quantified formula: prefix blocks over a circuit matrix.
/// The matrix is rebuilt from the parameters on demand (builders are pure);
/// the brute-force oracle only ever reads the metadata.
struct QuantifiedFormula {
  Family family = Family::stock;
  int m = 0;
  long long ell = 0, u = 0;  // cells family
  int v = 0;                 // stock_audit family
  bool guarded = true;       // stock family: exclude the z1 = z2 pair
  std::shared_ptr<const CnfFormula> source;
  std::optional<HashTuple> witness;  // set when hash coefficients are substituted

  std::vector<Block> prefix;
  VarBudget budget;

  int num_prefix_vars() const {
    int n = 0;
    for (const Block& b : prefix) n += b.num_vars;
    return n;
  }

  Circuit matrix() const;  // defined with the encoder
};

}  // namespace auditcount
