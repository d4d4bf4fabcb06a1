#include "auditcount/oracle.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstring>
#include <stdexcept>

#include "auditcount/encoder.hpp"
#include "auditcount/errors.hpp"

namespace auditcount {

using u128 = unsigned __int128;

std::string answer_mode_name(AnswerMode m) {
  switch (m) {
    case AnswerMode::exact: return "exact";
    case AnswerMode::randomized_sound: return "randomized-sound";
    case AnswerMode::external: return "external";
  }
  return "?";
}

std::uint64_t family_stream_tag(Family f) {
  switch (f) {
    case Family::stock: return 1;
    case Family::holes: return 2;
    case Family::cells: return 3;
    case Family::not_many: return 4;
    case Family::at_least_few: return 5;
    case Family::stock_audit: return 1;  // replays the stock streams
  }
  return 0;
}

namespace {

/// Open-addressing count map keyed by the m-bit cell. Memory stays
/// proportional to the solution set, never to 2^m.
class FlatCounter {
 public:
  explicit FlatCounter(std::size_t expected) {
    cap_ = std::bit_ceil(std::max<std::size_t>(16, expected * 2));
    mask_ = cap_ - 1;
    slots_.assign(cap_, Slot{});
  }

  std::uint32_t increment(std::uint64_t key) {
    std::size_t i = mix(key) & mask_;
    for (;;) {
      Slot& s = slots_[i];
      if (s.count == 0) {
        s.key = key;
        s.count = 1;
        ++distinct_;
        return 1;
      }
      if (s.key == key) return ++s.count;
      i = (i + 1) & mask_;
    }
  }

  std::uint32_t get(std::uint64_t key) const {
    std::size_t i = mix(key) & mask_;
    for (;;) {
      const Slot& s = slots_[i];
      if (s.count == 0) return 0;
      if (s.key == key) return s.count;
      i = (i + 1) & mask_;
    }
  }

  std::size_t distinct() const { return distinct_; }

  template <typename Fn>
  void for_each(Fn fn) const {
    for (const Slot& s : slots_)
      if (s.count) fn(s.key, s.count);
  }

 private:
  struct Slot {
    std::uint64_t key = 0;
    std::uint32_t count = 0;
  };

  static std::uint64_t mix(std::uint64_t x) {
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  std::size_t cap_ = 0, mask_ = 0, distinct_ = 0;
  std::vector<Slot> slots_;
};

/// Cell keys for a pairwise hash: h(y) = a1 + a2*embed(y) is affine over
/// GF(2), so the low-m output is a base value xor a per-input-bit table.
struct LinearCellEval {
  std::uint64_t base = 0;
  std::vector<std::uint64_t> tab;

  LinearCellEval(const HashFunction& h) {
    base = gf2_truncate(h.coeffs[0], h.m).low64();
    tab.resize(h.n);
    FieldElem cur = h.coeffs[1];
    FieldElem x = FieldElem::from_u64(2);
    for (int j = 0; j < h.n; ++j) {
      tab[j] = gf2_truncate(cur, h.m).low64();
      cur = gf2_mul(h.spec, cur, x);
    }
  }

  std::uint64_t cell(const Assignment& y) const {
    std::uint64_t acc = base;
    for (int wi = 0; wi < 4; ++wi) {
      std::uint64_t bits = y.words[wi];
      while (bits) {
        int b = std::countr_zero(bits);
        bits &= bits - 1;
        acc ^= tab[wi * 64 + b];
      }
    }
    return acc;
  }
};

void cell_keys(const std::vector<Assignment>& sols, const HashFunction& h,
               std::vector<std::uint64_t>& keys) {
  keys.resize(sols.size());
  if (h.m > 64) throw std::invalid_argument("cell index wider than 64 bits");
  if (h.k == 2) {
    LinearCellEval ev(h);
    for (std::size_t i = 0; i < sols.size(); ++i) keys[i] = ev.cell(sols[i]);
  } else {
    for (std::size_t i = 0; i < sols.size(); ++i)
      keys[i] = eval_hash_cell(h, sols[i]);
  }
}

/// Every solution lands alone in its cell under at least one of the hashes.
bool isolation_check(const std::vector<Assignment>& sols, const HashTuple& t) {
  if (sols.empty()) return true;
  std::vector<std::uint8_t> isolated(sols.size(), 0);
  std::size_t remaining = sols.size();
  std::vector<std::uint64_t> keys;
  for (const HashFunction& h : t.members) {
    cell_keys(sols, h, keys);
    FlatCounter counts(sols.size());
    for (std::uint64_t k : keys) counts.increment(k);
    for (std::size_t i = 0; i < sols.size(); ++i) {
      if (!isolated[i] && counts.get(keys[i]) == 1) {
        isolated[i] = 1;
        --remaining;
      }
    }
    if (remaining == 0) return true;
  }
  return false;
}

/// The union of the hash images of the solution set covers all 2^m cells.
bool cover_check(const std::vector<Assignment>& sols, const HashTuple& t,
                 int m) {
  if (m >= 63) return false;  // cannot cover more cells than solutions exist
  std::uint64_t cells = std::uint64_t{1} << m;
  if ((u128)t.members.size() * sols.size() < cells) return false;
  FlatCounter seen(std::min<std::size_t>(cells, t.members.size() * sols.size()));
  std::vector<std::uint64_t> keys;
  for (const HashFunction& h : t.members) {
    cell_keys(sols, h, keys);
    for (std::uint64_t k : keys) seen.increment(k);
    if (seen.distinct() == cells) return true;
  }
  return false;
}

enum class CellBound { both, upper_only, lower_only };

/// Per-cell counts against [ell, u]; empty cells fail the lower bound.
bool cell_range_check(const std::vector<Assignment>& sols,
                      const HashFunction& h, int m, long long ell, long long u,
                      CellBound kind) {
  bool need_lower = kind != CellBound::upper_only;
  bool need_upper = kind != CellBound::lower_only;
  if (m >= 63) return !need_lower;
  std::uint64_t cells = std::uint64_t{1} << m;
  if (need_lower && (u128)sols.size() < (u128)ell * cells) return false;
  FlatCounter counts(sols.size());
  std::vector<std::uint64_t> keys;
  cell_keys(sols, h, keys);
  for (std::uint64_t k : keys) counts.increment(k);
  if (need_lower && counts.distinct() != cells) return false;
  bool ok = true;
  counts.for_each([&](std::uint64_t, std::uint32_t c) {
    if (need_lower && c < ell) ok = false;
    if (need_upper && static_cast<long long>(c) > u) ok = false;
  });
  return ok;
}

}  // namespace

void SemanticOracle::provide_solutions(const CnfFormula& f,
                                       SolutionSet solutions) {
  cache_[formula_digest(f)] = std::move(solutions);
}

const SolutionSet& SemanticOracle::solutions_for(const CnfFormula& f) {
  std::string key = formula_digest(f);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  SolutionSet s = enumerate_solutions(
      f, EnumerationOptions{std::nullopt, cfg_.enum_budget_bits});
  return cache_.emplace(key, std::move(s)).first->second;
}

bool SemanticOracle::substituted_true(const QuantifiedFormula& q,
                                      const HashTuple& tuple) {
  const SolutionSet& sols = solutions_for(*q.source);
  switch (q.family) {
    case Family::stock:
      // The unguarded variant is falsified by any solution paired with
      // itself; with the guard it is the per-solution isolation property.
      if (!q.guarded) return sols.solutions.empty();
      return isolation_check(sols.solutions, tuple);
    case Family::holes:
      return cover_check(sols.solutions, tuple, q.m);
    case Family::cells:
      return cell_range_check(sols.solutions, tuple.members.at(0), q.m, q.ell,
                              q.u, CellBound::both);
    case Family::not_many:
      return cell_range_check(sols.solutions, tuple.members.at(0), q.m, 0, q.u,
                              CellBound::upper_only);
    case Family::at_least_few:
      return cell_range_check(sols.solutions, tuple.members.at(0), q.m, q.ell,
                              0, CellBound::lower_only);
    case Family::stock_audit:
      break;
  }
  throw std::invalid_argument("no substituted check for this family");
}

OracleAnswer SemanticOracle::exists_hash_search(const QuantifiedFormula& q,
                                                int hash_count, int k) {
  int n = q.source->num_vars;
  int w = FieldSpec::for_width(std::max(n, q.m)).w;
  long coeff_bits = static_cast<long>(hash_count) * k * w;

  if (coeff_bits <= cfg_.exhaust_bits) {
    std::uint64_t space = std::uint64_t{1} << coeff_bits;
    std::vector<bool> bits(coeff_bits);
    for (std::uint64_t pattern = 0; pattern < space; ++pattern) {
      for (long b = 0; b < coeff_bits; ++b) bits[b] = (pattern >> b) & 1;
      HashTuple tuple;
      for (int i = 0; i < hash_count; ++i)
        tuple.members.push_back(
            hash_from_bits(n, q.m, k, bits, static_cast<std::size_t>(i) * k * w));
      if (substituted_true(q, tuple))
        return {true, std::move(tuple), AnswerMode::exact,
                static_cast<int>(pattern + 1)};
    }
    return {false, std::nullopt, AnswerMode::exact, static_cast<int>(space)};
  }

  std::uint64_t tag = family_stream_tag(q.family);
  for (int j = 0; j < cfg_.trials; ++j) {
    Rng rng(stream_seed(cfg_.seed, tag, q.m, j));
    HashTuple tuple = sample_tuple(hash_count, n, q.m, k, rng);
    if (substituted_true(q, tuple))
      return {true, std::move(tuple), AnswerMode::exact, j + 1};
  }
  if (cfg_.false_policy == FalsePolicy::complete_required)
    throw OracleIncomplete("randomized search failed to decide " +
                           family_name(q.family) + " at m=" +
                           std::to_string(q.m) + " within " +
                           std::to_string(cfg_.trials) + " trials");
  return {false, std::nullopt, AnswerMode::randomized_sound, cfg_.trials};
}

bool SemanticOracle::conp_check(const QuantifiedFormula& q) {
  ++ledger_.conp;
  if (q.witness) {
    switch (q.family) {
      case Family::stock:
      case Family::not_many:
        return substituted_true(q, *q.witness);
      default:
        break;
    }
  }
  // Literal sweep fallback for small universally quantified formulas.
  for (const Block& b : q.prefix)
    if (b.q != Quantifier::forall)
      throw std::invalid_argument("conp_check needs a universal prefix");
  int bits = q.num_prefix_vars();
  if (bits > cfg_.enum_budget_bits)
    throw BudgetExceeded("universal sweep over 2^" + std::to_string(bits) +
                         " exceeds the enumeration budget");
  Circuit matrix = q.matrix();
  std::vector<bool> values(bits + 1, false);
  std::uint64_t space = std::uint64_t{1} << bits;
  for (std::uint64_t a = 0; a < space; ++a) {
    for (int v = 1; v <= bits; ++v) values[v] = (a >> (v - 1)) & 1;
    if (!matrix.eval(values)) return false;
  }
  return true;
}

OracleAnswer SemanticOracle::two_qbf_check(const QuantifiedFormula& q) {
  ++ledger_.sigma2;
  const SolutionSet& sols = solutions_for(*q.source);
  u128 count = sols.count();

  switch (q.family) {
    case Family::stock: {
      if (q.witness)
        return {substituted_true(q, *q.witness), std::nullopt,
                AnswerMode::exact, 0};
      if (!q.guarded)
        return {sols.solutions.empty(), std::nullopt, AnswerMode::exact, 0};
      // A hash can isolate at most 2^m solutions, so m of them at most m*2^m.
      if (q.m < 63 && count > (static_cast<u128>(q.m) << q.m))
        return {false, std::nullopt, AnswerMode::exact, 0};
      return exists_hash_search(q, q.m, 2);
    }
    case Family::holes: {
      if (q.witness)
        return {substituted_true(q, *q.witness), std::nullopt,
                AnswerMode::exact, 0};
      throw std::invalid_argument(
          "quantified cover formulas take a level-3 check");
    }
    case Family::cells:
    case Family::not_many:
    case Family::at_least_few: {
      if (q.witness)
        return {substituted_true(q, *q.witness), std::nullopt,
                AnswerMode::exact, 0};
      throw std::invalid_argument(
          "quantified cell formulas take a level-3 check");
    }
    case Family::stock_audit: {
      if (!q.witness) throw std::invalid_argument("audit query needs a witness");
      QuantifiedFormula pos = q;
      pos.family = Family::stock;
      pos.m = q.v;
      pos.guarded = true;
      bool poscheck = substituted_true(pos, *q.witness);
      OracleAnswer neg = stock_negcheck_impl(q.source, q.v);
      return {poscheck && neg.ret, std::nullopt, neg.mode, neg.trials_used};
    }
  }
  throw std::logic_error("unhandled family");
}

OracleAnswer SemanticOracle::stock_negcheck_impl(
    std::shared_ptr<const CnfFormula> f, int v) {
  u128 count = solutions_for(*f).count();
  int pm = v - 1;
  if (pm < 1) return {true, std::nullopt, AnswerMode::exact, 0};
  if (pm < 63 && count > (static_cast<u128>(pm) << pm))
    return {true, std::nullopt, AnswerMode::exact, 0};  // isolation impossible
  if (v < 120 && count * 8 <= (u128{1} << v))
    return {false, std::nullopt, AnswerMode::exact, 0};  // a tuple must exist
  // Replay the counter's search streams at v-1; finding a tuple is an exact
  // refutation, finding none is only randomized-sound.
  QuantifiedFormula probe = build_stock(f, pm);
  OracleAnswer found = exists_hash_search(probe, pm, 2);
  if (found.ret)
    return {false, std::nullopt, AnswerMode::exact, found.trials_used};
  return {true, std::nullopt, AnswerMode::randomized_sound, found.trials_used};
}

OracleAnswer SemanticOracle::stock_negcheck(std::shared_ptr<const CnfFormula> f,
                                            int v) {
  ++ledger_.sigma2;
  return stock_negcheck_impl(std::move(f), v);
}

OracleAnswer SemanticOracle::three_qbf_check(const QuantifiedFormula& q) {
  ++ledger_.sigma3;
  const SolutionSet& sols = solutions_for(*q.source);
  u128 count = sols.count();

  switch (q.family) {
    case Family::holes: {
      if (q.witness)
        return {substituted_true(q, *q.witness), std::nullopt,
                AnswerMode::exact, 0};
      // m+1 hashes map the solutions onto at most (m+1)*|sol| cells.
      bool coverable = q.m < 63 && (static_cast<u128>(q.m) + 1) * count >= (u128{1} << q.m);
      if (!coverable) return {false, std::nullopt, AnswerMode::exact, 0};
      return exists_hash_search(q, q.m + 1, 2);
    }
    case Family::cells:
    case Family::not_many:
    case Family::at_least_few: {
      if (q.witness)
        return {substituted_true(q, *q.witness), std::nullopt,
                AnswerMode::exact, 0};
      bool need_lower = q.family != Family::not_many;
      bool need_upper = q.family != Family::at_least_few;
      if (need_lower &&
          (q.m >= 63 || count < (u128)q.ell * (u128{1} << q.m)))
        return {false, std::nullopt, AnswerMode::exact, 0};
      if (need_upper && q.m < 63 && count > (u128)q.u * (u128{1} << q.m))
        return {false, std::nullopt, AnswerMode::exact, 0};
      return exists_hash_search(q, 1, q.source->num_vars);
    }
    case Family::stock:
    case Family::stock_audit:
      return two_qbf_check(q);
  }
  throw std::logic_error("unhandled family");
}

// ---------------------------------------------------------------------------
// External backend
// ---------------------------------------------------------------------------

namespace {

struct ParsedOutput {
  std::optional<bool> verdict;
  std::vector<long> assignment;  // literals from V lines
};

ParsedOutput parse_solver_output(const std::string& text) {
  ParsedOutput out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(pos, end - pos);
    pos = end + 1;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
      line.pop_back();
    if (line == "SAT" || line == "s cnf 1" || line == "s SATISFIABLE" ||
        line.rfind("s cnf 1 ", 0) == 0) {
      out.verdict = true;
    } else if (line == "UNSAT" || line == "s cnf 0" ||
               line == "s UNSATISFIABLE" || line.rfind("s cnf 0 ", 0) == 0) {
      out.verdict = false;
    } else if (!line.empty() && (line[0] == 'V' || line[0] == 'v')) {
      const char* s = line.c_str() + 1;
      char* endp = nullptr;
      for (;;) {
        long v = strtol(s, &endp, 10);
        if (endp == s) break;
        s = endp;
        if (v == 0) break;
        out.assignment.push_back(v);
      }
    }
  }
  return out;
}

}  // namespace

OracleAnswer external_solve(const QuantifiedFormula& q,
                            const std::string& solver_path, double timeout_s) {
  if (access(solver_path.c_str(), X_OK) != 0)
    throw ExternalSolverError(ExternalSolverError::Kind::missing,
                              "solver not found or not executable: " +
                                  solver_path);

  std::string qdimacs = to_qdimacs(q);
  char path[] = "/tmp/auditcount_qbf_XXXXXX";
  int fd = mkstemp(path);
  if (fd < 0)
    throw ExternalSolverError(ExternalSolverError::Kind::spawn,
                              "cannot create temp file");
  if (write(fd, qdimacs.data(), qdimacs.size()) !=
      static_cast<ssize_t>(qdimacs.size())) {
    close(fd);
    unlink(path);
    throw ExternalSolverError(ExternalSolverError::Kind::spawn,
                              "cannot write temp file");
  }
  close(fd);

  int pipefd[2];
  if (pipe(pipefd) != 0) {
    unlink(path);
    throw ExternalSolverError(ExternalSolverError::Kind::spawn, "pipe failed");
  }
  pid_t pid = fork();
  if (pid < 0) {
    close(pipefd[0]);
    close(pipefd[1]);
    unlink(path);
    throw ExternalSolverError(ExternalSolverError::Kind::spawn, "fork failed");
  }
  if (pid == 0) {
    dup2(pipefd[1], STDOUT_FILENO);
    close(pipefd[0]);
    close(pipefd[1]);
    execl(solver_path.c_str(), solver_path.c_str(), path, (char*)nullptr);
    _exit(127);
  }
  close(pipefd[1]);

  std::string output;
  auto deadline = std::chrono::steady_clock::now() +
                  std::chrono::duration<double>(timeout_s);
  bool timed_out = false;
  char buf[4096];
  for (;;) {
    auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
                         deadline - std::chrono::steady_clock::now())
                         .count();
    if (remaining < 0) remaining = 0;
    struct pollfd pfd{pipefd[0], POLLIN, 0};
    int pr = poll(&pfd, 1, static_cast<int>(std::min<long long>(remaining, 60000)));
    if (pr > 0) {
      ssize_t got = read(pipefd[0], buf, sizeof buf);
      if (got > 0) {
        output.append(buf, got);
        continue;
      }
      break;  // EOF
    }
    if (std::chrono::steady_clock::now() >= deadline) {
      timed_out = true;
      break;
    }
  }
  close(pipefd[0]);
  if (timed_out) {
    kill(pid, SIGKILL);
    waitpid(pid, nullptr, 0);
    unlink(path);
    throw ExternalSolverError(ExternalSolverError::Kind::timeout,
                              "solver timed out after " +
                                  std::to_string(timeout_s) + "s");
  }
  int status = 0;
  waitpid(pid, &status, 0);
  unlink(path);
  if (WIFEXITED(status) && WEXITSTATUS(status) == 127)
    throw ExternalSolverError(ExternalSolverError::Kind::missing,
                              "solver failed to start: " + solver_path);

  ParsedOutput parsed = parse_solver_output(output);
  if (!parsed.verdict)
    throw ExternalSolverError(ExternalSolverError::Kind::unparseable,
                              "no verdict line in solver output");

  OracleAnswer ans{*parsed.verdict, std::nullopt, AnswerMode::external, 0};
  if (ans.ret && !parsed.assignment.empty() && !q.witness &&
      !q.prefix.empty() && q.prefix[0].q == Quantifier::exists &&
      q.prefix[0].role == VarRole::hash_coeff) {
    const Block& hb = q.prefix[0];
    std::vector<bool> bits(hb.num_vars, false);
    for (long lit : parsed.assignment) {
      long v = std::labs(lit);
      if (v >= hb.first_var && v < hb.first_var + hb.num_vars)
        bits[v - hb.first_var] = lit > 0;
    }
    int n = q.source->num_vars;
    int k = (q.family == Family::cells || q.family == Family::not_many ||
             q.family == Family::at_least_few)
                ? n
                : 2;
    int hash_count = q.family == Family::holes ? q.m + 1
                     : q.family == Family::stock ? q.m
                                                 : 1;
    int w = FieldSpec::for_width(std::max(n, q.m)).w;
    HashTuple tuple;
    for (int i = 0; i < hash_count; ++i)
      tuple.members.push_back(
          hash_from_bits(n, q.m, k, bits, static_cast<std::size_t>(i) * k * w));
    // Only hand back assignments that survive the exact substituted check.
    try {
      SemanticOracle verifier{OracleConfig{}};
      QuantifiedFormula sub = q;
      sub.witness = tuple;
      if (verifier.two_qbf_check(sub).ret) ans.witness = std::move(tuple);
    } catch (const BudgetExceeded&) {
      // Verification out of reach; report the verdict without a witness.
    }
  }
  return ans;
}

// ---------------------------------------------------------------------------
// Backend dispatch
// ---------------------------------------------------------------------------

bool Oracle::conp(const QuantifiedFormula& q) {
  if (cfg_.backend == Backend::semantic) return semantic_.conp_check(q);
  ++external_ledger_.conp;
  ++external_ledger_.external;
  return external_solve(q, cfg_.solver_path, cfg_.timeout_s).ret;
}

OracleAnswer Oracle::two_qbf(const QuantifiedFormula& q) {
  if (cfg_.backend == Backend::semantic) return semantic_.two_qbf_check(q);
  ++external_ledger_.sigma2;
  ++external_ledger_.external;
  return external_solve(q, cfg_.solver_path, cfg_.timeout_s);
}

OracleAnswer Oracle::three_qbf(const QuantifiedFormula& q) {
  if (cfg_.backend == Backend::semantic) return semantic_.three_qbf_check(q);
  ++external_ledger_.sigma3;
  ++external_ledger_.external;
  return external_solve(q, cfg_.solver_path, cfg_.timeout_s);
}

CallLedger Oracle::ledger() const {
  CallLedger total = semantic_.ledger();
  total.conp += external_ledger_.conp;
  total.sigma2 += external_ledger_.sigma2;
  total.sigma3 += external_ledger_.sigma3;
  total.external += external_ledger_.external;
  return total;
}

void Oracle::reset_ledger() {
  semantic_.reset_ledger();
  external_ledger_ = {};
}

}  // namespace auditcount
