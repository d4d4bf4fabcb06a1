#pragma once

#include <optional>
#include <string>
#include <vector>

#include "auditcount/oracle.hpp"

namespace auditcount {

/// The count estimate. Dyadic results are exact as 2^(num/den) with
/// den = the copy count; direct paths carry an exact integer instead.
struct Estimate {
  bool dyadic = true;
  long long num = 0;
  int den = 1;
  std::uint64_t exact = 0;  // when !dyadic
  double decimal = 0.0;
  int copies = 1;

  static Estimate power_of_two(long long num, int den);
  static Estimate exact_value(std::uint64_t v);

  bool operator==(const Estimate&) const = default;
};

/// Loop-exit parameters plus the witnessing hash coefficients, everything an
/// auditor needs for a single-query check. Serialized as JSON; the flat
/// `hashes` array holds, for the af variant, the c_high stock hashes followed
/// by the c_low+1 cover hashes (none when c_low = 0).
struct Certificate {
  std::string algorithm;  // "stock" | "cells" | "af"
  int n = 0;
  int copies = 1;
  std::string formula_digest;
  Estimate estimate;

  int v = 0;                       // stock
  int m = 0;                       // cells
  long long ell = 0, u = 0;        // cells
  int c_low = 0, c_high = 0;       // af

  std::vector<HashFunction> hashes;

  std::string oracle_mode = "semantic";
  std::uint64_t seed = 0;
  int trials = 64;
  std::string version;

  int expected_hash_count() const;
};

enum class CountPath { certified, direct, unsat };

struct CountResult {
  Estimate estimate;
  std::optional<Certificate> certificate;
  CountPath path = CountPath::certified;
  bool retried = false;
  CallLedger calls;
};

int copies_for(int n);

/// Level-2 loop over the isolation formula on the amplified input;
/// exits at the first true and certifies with the witnessing tuple.
CountResult stock_count(const CnfFormula& f, const OracleConfig& cfg);

/// Level-3 loop over the balanced-cells formula on the raw input. When the
/// cell bounds leave no feasible level (which the default paper-scale
/// constants guarantee on small inputs), falls back to a bounded direct
/// enumeration; that path is exact, flagged, and carries no certificate.
CountResult equal_cells_count(const CnfFormula& f, const OracleConfig& cfg,
                              std::optional<long long> ell_base = {});

/// Two loops on the amplified input: cover checks fix c_low, isolation
/// checks fix c_high. If the exit gap exceeds 7, both phases retry once with
/// quadrupled trials before giving up.
CountResult af_count(const CnfFormula& f, const OracleConfig& cfg);

std::string write_certificate(const Certificate& cert);
Certificate read_certificate(std::string_view json_text);

}  // namespace auditcount
