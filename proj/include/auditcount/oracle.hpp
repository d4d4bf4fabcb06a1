#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "auditcount/qformula.hpp"

namespace auditcount {

enum class AnswerMode { exact, randomized_sound, external };

std::string answer_mode_name(AnswerMode m);

struct OracleAnswer {
  bool ret = false;
  std::optional<HashTuple> witness;
  AnswerMode mode = AnswerMode::exact;
  int trials_used = 0;
};

enum class Backend { semantic, external };

/// A randomized-search "false" is not a proof; complete_required turns it
/// into an error instead of an answer.
enum class FalsePolicy { complete_required, randomized_accepted };

struct OracleConfig {
  Backend backend = Backend::semantic;
  std::string solver_path;  // external backend
  double timeout_s = 60.0;
  std::uint64_t seed = 0;
  int trials = 64;
  FalsePolicy false_policy = FalsePolicy::randomized_accepted;
  int enum_budget_bits = 24;
  /// Existential coefficient blocks up to this many bits are swept
  /// exhaustively instead of sampled, making "false" exact.
  int exhaust_bits = 16;
};

struct CallLedger {
  long conp = 0;
  long sigma2 = 0;
  long sigma3 = 0;
  long external = 0;

  long total() const { return conp + sigma2 + sigma3 + external; }
};

std::uint64_t family_stream_tag(Family f);

/// Brute-force backend. Decides each family through a per-family shortcut
/// over the exact solution set (bucket counting), never by sweeping the
/// emitted matrix. Existential hash blocks are searched with seeded random
/// tuples; every "true" is certified by the exact substituted check before
/// it is returned.
class SemanticOracle {
 public:
  explicit SemanticOracle(OracleConfig cfg) : cfg_(std::move(cfg)) {}

  /// Seed the solution cache (counters do this for amplified formulas, whose
  /// product structure enumerates far faster than a 2^n sweep).
  void provide_solutions(const CnfFormula& f, SolutionSet solutions);

  bool conp_check(const QuantifiedFormula& q);
  OracleAnswer two_qbf_check(const QuantifiedFormula& q);
  OracleAnswer three_qbf_check(const QuantifiedFormula& q);

  /// The refutation side of a stock audit: "no (v-1)-tuple isolates every
  /// solution". Exact where the solution count settles it either way;
  /// otherwise a seed-replayed search whose empty outcome is only
  /// randomized-sound.
  OracleAnswer stock_negcheck(std::shared_ptr<const CnfFormula> f, int v);

  const SolutionSet& solutions_for(const CnfFormula& f);

  const CallLedger& ledger() const { return ledger_; }
  void reset_ledger() { ledger_ = {}; }
  const OracleConfig& config() const { return cfg_; }

 private:
  OracleAnswer exists_hash_search(const QuantifiedFormula& q, int hash_count,
                                  int k);
  bool substituted_true(const QuantifiedFormula& q, const HashTuple& tuple);
  OracleAnswer stock_negcheck_impl(std::shared_ptr<const CnfFormula> f, int v);

  OracleConfig cfg_;
  CallLedger ledger_;
  std::map<std::string, SolutionSet> cache_;
};

/// Run an external QBF solver on the emitted QDIMACS. The solver gets the
/// file path as its single argument and must print a verdict line
/// ("s cnf 1|0", "SAT"/"UNSAT", or "s SATISFIABLE|UNSATISFIABLE");
/// "V <lits> 0" lines, when present, are decoded into a hash tuple if the
/// outermost block quantifies hash coefficients.
OracleAnswer external_solve(const QuantifiedFormula& q,
                            const std::string& solver_path, double timeout_s);

/// Backend dispatch used by counters and auditors.
class Oracle {
 public:
  explicit Oracle(OracleConfig cfg) : cfg_(cfg), semantic_(std::move(cfg)) {}

  bool conp(const QuantifiedFormula& q);
  OracleAnswer two_qbf(const QuantifiedFormula& q);
  OracleAnswer three_qbf(const QuantifiedFormula& q);

  SemanticOracle& semantic() { return semantic_; }
  CallLedger ledger() const;
  void reset_ledger();
  const OracleConfig& config() const { return cfg_; }

 private:
  OracleConfig cfg_;
  SemanticOracle semantic_;
  CallLedger external_ledger_;
};

}  // namespace auditcount
