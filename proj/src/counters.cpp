#include "auditcount/counters.hpp"

#include <bit>
#include <cmath>
#include <memory>

#include "auditcount/encoder.hpp"
#include "auditcount/errors.hpp"
#include "auditcount/version.hpp"

namespace auditcount {

Estimate Estimate::power_of_two(long long num, int den) {
  Estimate e;
  e.dyadic = true;
  e.num = num;
  e.den = den;
  e.decimal = std::exp2(static_cast<double>(num) / den);
  return e;
}

Estimate Estimate::exact_value(std::uint64_t v) {
  Estimate e;
  e.dyadic = false;
  e.exact = v;
  e.decimal = static_cast<double>(v);
  return e;
}

int Certificate::expected_hash_count() const {
  if (algorithm == "stock") return v;
  if (algorithm == "cells") return 1;
  if (algorithm == "af") return c_high + (c_low > 0 ? c_low + 1 : 0);
  return -1;
}

int copies_for(int n) {
  if (n < 2) throw std::invalid_argument("copy-amplified counting needs n >= 2");
  if (n <= 3) return 1;
  return std::bit_width(static_cast<unsigned>(n - 1));  // ceil(log2 n)
}

namespace {

struct Amplified {
  std::shared_ptr<const CnfFormula> fp;
  int copies = 0;
  int n_prime = 0;
  std::uint64_t base_count = 0;
};

/// Build F' = copies(F), enumerate its solutions through the product
/// structure, and seed the oracle cache so loop levels never re-enumerate.
Amplified amplify(const CnfFormula& f, Oracle& oracle,
                  const OracleConfig& cfg) {
  Amplified a;
  a.copies = copies_for(f.num_vars);
  a.n_prime = f.num_vars * a.copies;
  auto fp = std::make_shared<CnfFormula>(make_copies(f, a.copies));
  SolutionSet sols = enumerate_solutions(
      *fp, EnumerationOptions{std::nullopt, cfg.enum_budget_bits});
  a.base_count = sols.count();
  oracle.semantic().provide_solutions(*fp, std::move(sols));
  a.fp = std::move(fp);
  return a;
}

bool is_unsat(const CnfFormula& f, const OracleConfig& cfg) {
  SolutionSet probe = enumerate_solutions(
      f, EnumerationOptions{std::uint64_t{1}, cfg.enum_budget_bits});
  return probe.count() == 0;
}

void fill_common(Certificate& cert, const CnfFormula& f,
                 const OracleConfig& cfg, int copies) {
  cert.n = f.num_vars;
  cert.copies = copies;
  cert.formula_digest = formula_digest(f);
  cert.oracle_mode = cfg.backend == Backend::semantic ? "semantic" : "external";
  cert.seed = cfg.seed;
  cert.trials = cfg.trials;
  cert.version = kVersion;
}

struct StockExit {
  int v = 0;
  HashTuple witness;
};

StockExit stock_loop(Oracle& oracle, const std::shared_ptr<const CnfFormula>& fp,
                     int n_prime) {
  for (int m = 1; m <= n_prime; ++m) {
    OracleAnswer ans = oracle.two_qbf(build_stock(fp, m));
    if (ans.ret) {
      if (!ans.witness)
        throw OracleIncomplete("level-2 oracle returned true without a witness");
      return {m, std::move(*ans.witness)};
    }
  }
  throw OracleIncomplete("no isolation level found up to m = " +
                         std::to_string(n_prime));
}

}  // namespace

CountResult stock_count(const CnfFormula& f, const OracleConfig& cfg) {
  if (f.num_vars < 2) throw std::invalid_argument("stock_count needs n >= 2");
  CountResult result;
  if (is_unsat(f, cfg)) {
    result.estimate = Estimate::exact_value(0);
    result.path = CountPath::unsat;
    return result;
  }
  Oracle oracle(cfg);
  Amplified a = amplify(f, oracle, cfg);

  StockExit exit = stock_loop(oracle, a.fp, a.n_prime);

  result.estimate = Estimate::power_of_two(exit.v, a.copies);
  result.estimate.copies = a.copies;
  Certificate cert;
  cert.algorithm = "stock";
  cert.v = exit.v;
  cert.hashes = exit.witness.members;
  fill_common(cert, f, cfg, a.copies);
  cert.estimate = result.estimate;
  result.certificate = std::move(cert);
  result.calls = oracle.ledger();
  return result;
}

CountResult equal_cells_count(const CnfFormula& f, const OracleConfig& cfg,
                              std::optional<long long> ell_base) {
  if (f.num_vars < 1) throw std::invalid_argument("needs n >= 1");
  long long ell = ell_base ? *ell_base : 1024LL * f.num_vars;
  long long u = 16 * ell;
  if (ell < 1) throw std::invalid_argument("ell must be >= 1");

  Oracle oracle(cfg);
  auto fp = std::make_shared<CnfFormula>(f);
  CountResult result;

  for (int m = 1; m <= f.num_vars; ++m) {
    OracleAnswer ans = oracle.three_qbf(build_cells(fp, m, ell, u));
    if (ans.ret) {
      if (!ans.witness)
        throw OracleIncomplete("level-3 oracle returned true without a witness");
      // ell * 2^m, exactly dyadic whenever ell is a power of two.
      if (std::has_single_bit(static_cast<unsigned long long>(ell))) {
        result.estimate = Estimate::power_of_two(
            m + std::countr_zero(static_cast<unsigned long long>(ell)), 1);
      } else {
        result.estimate =
            Estimate::exact_value(static_cast<std::uint64_t>(ell) << m);
      }
      Certificate cert;
      cert.algorithm = "cells";
      cert.m = m;
      cert.ell = ell;
      cert.u = u;
      cert.hashes = ans.witness->members;
      fill_common(cert, f, cfg, 1);
      cert.estimate = result.estimate;
      result.certificate = std::move(cert);
      result.calls = oracle.ledger();
      return result;
    }
  }

  // No feasible level: bounded direct enumeration, exact up to u solutions.
  SolutionSet direct = enumerate_solutions(
      f, EnumerationOptions{static_cast<std::uint64_t>(u) + 1,
                            cfg.enum_budget_bits});
  if (direct.count() > static_cast<std::uint64_t>(u))
    throw OracleIncomplete(
        "no balanced level exists and the direct bound of " +
        std::to_string(u) + " solutions was exceeded");
  result.estimate = Estimate::exact_value(direct.count());
  result.path = direct.count() == 0 ? CountPath::unsat : CountPath::direct;
  result.calls = oracle.ledger();
  return result;
}

CountResult af_count(const CnfFormula& f, const OracleConfig& cfg) {
  if (f.num_vars < 2) throw std::invalid_argument("af_count needs n >= 2");
  CountResult result;
  if (is_unsat(f, cfg)) {
    result.estimate = Estimate::exact_value(0);
    result.path = CountPath::unsat;
    return result;
  }

  auto run_phases = [&](const OracleConfig& phase_cfg, CallLedger* calls,
                        int* c_low, int* c_high, HashTuple* holes_witness,
                        HashTuple* stock_witness) {
    Oracle oracle(phase_cfg);
    Amplified a = amplify(f, oracle, phase_cfg);

    *c_low = a.n_prime;
    holes_witness->members.clear();
    for (int m = 1; m <= a.n_prime; ++m) {
      OracleAnswer ans = oracle.three_qbf(build_holes(a.fp, m));
      if (!ans.ret) {
        *c_low = m - 1;
        break;
      }
      if (!ans.witness)
        throw OracleIncomplete("cover oracle returned true without a witness");
      *holes_witness = std::move(*ans.witness);
    }
    if (*c_low == 0) holes_witness->members.clear();

    StockExit exit = stock_loop(oracle, a.fp, a.n_prime);
    *c_high = exit.v;
    *stock_witness = std::move(exit.witness);
    *calls = oracle.ledger();
    return a;
  };

  int c_low = 0, c_high = 0;
  HashTuple holes_witness, stock_witness;
  CallLedger calls;
  Amplified a =
      run_phases(cfg, &calls, &c_low, &c_high, &holes_witness, &stock_witness);

  OracleConfig used_cfg = cfg;
  if (c_high - c_low > 7) {
    // With exact answers the gap never exceeds 7; a larger gap means the
    // randomized search under-shot one of the exits. Retry harder once.
    used_cfg.trials = cfg.trials * 4;
    result.retried = true;
    CallLedger retry_calls;
    a = run_phases(used_cfg, &retry_calls, &c_low, &c_high, &holes_witness,
                   &stock_witness);
    calls.conp += retry_calls.conp;
    calls.sigma2 += retry_calls.sigma2;
    calls.sigma3 += retry_calls.sigma3;
    calls.external += retry_calls.external;
    if (c_high - c_low > 7)
      throw OracleIncomplete(
          "exit gap " + std::to_string(c_high - c_low) +
          " still exceeds 7 after retrying with quadrupled trials");
  }

  result.estimate = Estimate::power_of_two(c_high, a.copies);
  result.estimate.copies = a.copies;
  Certificate cert;
  cert.algorithm = "af";
  cert.c_low = c_low;
  cert.c_high = c_high;
  cert.hashes = stock_witness.members;
  cert.hashes.insert(cert.hashes.end(), holes_witness.members.begin(),
                     holes_witness.members.end());
  fill_common(cert, f, used_cfg, a.copies);
  cert.estimate = result.estimate;
  result.certificate = std::move(cert);
  result.calls = calls;
  return result;
}

}  // namespace auditcount
