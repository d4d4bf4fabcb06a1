#pragma once

// Test-only reference oracles. Everything here decides formulas by raw
// exponential loops over the definitions, independent of the bucket-counting
// shortcuts in the oracle module, so the two paths can be compared.

#include <memory>

#include "auditcount/encoder.hpp"
#include "auditcount/qformula.hpp"

namespace auditcount::testsupport {

/// Literal quantifier sweep of a prenex formula over its matrix circuit.
/// Exponential in the prefix width; callers keep it under ~20 bits.
bool sweep_qformula(const QuantifiedFormula& q);

/// Per-solution isolation, straight from the definition: every satisfying y
/// has some tuple member under which no other satisfying z shares its cell.
bool sweep_isolation(const CnfFormula& f, const HashTuple& t);

/// Every cell is hit by some (hash, solution) pair.
bool sweep_cover(const CnfFormula& f, const HashTuple& t, int m);

/// Every cell's solution count lies in [ell, u] (pass ell=0 or u=-1 to skip
/// a side).
bool sweep_cell_range(const CnfFormula& f, const HashFunction& h, int m,
                      long long ell, long long u);

}  // namespace auditcount::testsupport
