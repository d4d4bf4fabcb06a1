#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "auditcount/qformula.hpp"

namespace auditcount {

struct BuildOptions {
  /// Substitute these hash functions for the existential hash block.
  std::optional<HashTuple> witness;
  /// stock only: include the z1 != z2 exclusion in each implication.
  bool guarded = true;
};

/// Exists-m-hashes / forall-pair formula deciding per-solution isolation;
/// the quantified object carries m hashes from H(n, m, 2).
QuantifiedFormula build_stock(std::shared_ptr<const CnfFormula> f, int m,
                              const BuildOptions& opts = {});

/// Exists-(m+1)-hashes / forall-cell / exists-witness cover formula.
QuantifiedFormula build_holes(std::shared_ptr<const CnfFormula> f, int m,
                              const BuildOptions& opts = {});

/// Exists-one-n-wise-hash formula asserting every cell holds between ell and
/// u solutions.
QuantifiedFormula build_cells(std::shared_ptr<const CnfFormula> f, int m,
                              long long ell, long long u,
                              const BuildOptions& opts = {});

/// Universal closures of the two cell-side fragments, exposed for direct
/// testing against brute force.
QuantifiedFormula build_not_many(std::shared_ptr<const CnfFormula> f, int m,
                                 long long u, const BuildOptions& opts = {});
QuantifiedFormula build_at_least_few(std::shared_ptr<const CnfFormula> f,
                                     int m, long long ell,
                                     const BuildOptions& opts = {});

/// The combined audit query for a stock run that exited at v with `witness`:
/// a single forall/exists formula that holds iff the substituted check at v
/// passes and no (v-1)-tuple of hashes isolates every solution. The
/// substituted check reads its assignment pair from the first 2n universal
/// coefficient bits (every bit pattern is a valid coefficient block, so the
/// conjunct quantifies over all pairs), which keeps the prefix at exactly
/// (v-1)*2*max(n, v-1) + 2n variables.
QuantifiedFormula build_stock_audit(std::shared_ptr<const CnfFormula> f, int v,
                                    const HashTuple& witness);

std::string to_qdimacs(const QuantifiedFormula& q);

struct QdimacsFile {
  int num_vars = 0;
  std::vector<std::pair<Quantifier, std::vector<int>>> prefix;
  std::vector<Clause> clauses;
};
QdimacsFile parse_qdimacs(std::string_view text);

/// "family,m,n,hash_vars,cell_vars,assign_vars,total"
std::string var_budget_csv_row(const QuantifiedFormula& q);

}  // namespace auditcount
