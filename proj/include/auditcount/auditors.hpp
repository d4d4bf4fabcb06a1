#pragma once

#include <optional>
#include <string>
#include <vector>

#include "auditcount/counters.hpp"

namespace auditcount {

/// Outcome of one audit. `query_vars` counts the quantified variables of the
/// decisive oracle query after witness substitution; `implied_lower/upper`
/// bracket the amplified formula's solution count from the certified facts,
/// as decimal strings. `elapsed_s` is informational and never serialized, so
/// reports stay byte-identical across runs.
struct AuditReport {
  std::string algorithm;
  int n = 0;
  int n_prime = 0;
  bool verified = false;
  std::string reason;  // empty when verified

  bool poscheck = false;
  bool negcheck = false;
  bool gap_ok = true;
  std::string negcheck_mode = "exact";

  VarBudget query_vars;
  std::string implied_lower = "0";
  std::string implied_upper = "0";
  CallLedger calls;
  double elapsed_s = 0.0;
};

std::string write_audit_report(const AuditReport& report);

AuditReport stock_audit(const CnfFormula& f, const Certificate& cert,
                        const OracleConfig& cfg);
AuditReport equal_cells_audit(const CnfFormula& f, const Certificate& cert,
                              const OracleConfig& cfg);
AuditReport count_audit(const CnfFormula& f, const Certificate& cert,
                        const OracleConfig& cfg);

/// Dispatch on cert.algorithm.
AuditReport audit_certificate(const CnfFormula& f, const Certificate& cert,
                              const OracleConfig& cfg);

struct BenchRow {
  std::string algorithm;
  int n = 0;
  int n_prime = 0;
  int exit_param = 0;  // v / m / c_low
  long query_vars_total = 0;
};

struct BenchResult {
  std::vector<BenchRow> rows;
  std::vector<std::string> violations;
  std::string csv;  // "algorithm,n,n_prime,exit_param,query_vars_total"
};

/// Run every requested counter+audit pair over the corpus and tabulate the
/// measured audit query sizes. Violations cover: a measured size departing
/// from its closed form, a failed audit, and (for n >= 8) an ordering or
/// ratio breach between the three algorithms.
BenchResult measure_audit_complexity(const std::vector<CnfFormula>& corpus,
                                     const std::vector<std::string>& algorithms,
                                     const OracleConfig& cfg,
                                     long long ell_base = 2);

}  // namespace auditcount
