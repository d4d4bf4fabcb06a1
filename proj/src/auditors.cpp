#include "auditcount/auditors.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <memory>
#include <tuple>

#include <json.hpp>

#include "auditcount/encoder.hpp"
#include "auditcount/errors.hpp"

namespace auditcount {

using u128 = unsigned __int128;
using Json = nlohmann::ordered_json;

namespace {

std::string u128_str(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s += static_cast<char>('0' + static_cast<int>(v % 10));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

/// Audits replay the counter's randomized searches, so the oracle runs with
/// the certificate's seed and trial count; backend and budgets come from the
/// caller.
OracleConfig audit_oracle_config(const OracleConfig& cfg,
                                 const Certificate& cert) {
  OracleConfig out = cfg;
  out.seed = cert.seed;
  out.trials = cert.trials;
  return out;
}

bool reject(AuditReport& report, const std::string& reason) {
  report.verified = false;
  report.reason = reason;
  return false;
}

bool check_common(AuditReport& report, const CnfFormula& f,
                  const Certificate& cert, const std::string& algorithm,
                  int expected_copies) {
  if (cert.algorithm != algorithm)
    return reject(report, "variant-mismatch: certificate is for \"" +
                              cert.algorithm + "\"");
  if (cert.n != f.num_vars)
    return reject(report, "formula-mismatch: certificate n=" +
                              std::to_string(cert.n) + ", formula n=" +
                              std::to_string(f.num_vars));
  if (cert.formula_digest != formula_digest(f))
    return reject(report, "digest-mismatch");
  if (cert.copies != expected_copies)
    return reject(report, "copies-mismatch: expected " +
                              std::to_string(expected_copies));
  return true;
}

bool check_hash_arity(AuditReport& report, const Certificate& cert,
                      int n_prime) {
  if (static_cast<int>(cert.hashes.size()) != cert.expected_hash_count())
    return reject(report,
                  "arity-violation: " + std::to_string(cert.hashes.size()) +
                      " hashes, expected " +
                      std::to_string(cert.expected_hash_count()));
  for (const HashFunction& h : cert.hashes) {
    if (h.n != n_prime || h.k < 1 ||
        h.spec.w != FieldSpec::for_width(std::max(h.n, h.m)).w ||
        static_cast<int>(h.coeffs.size()) != h.k)
      return reject(report, "arity-violation: hash header mismatch");
  }
  return true;
}

}  // namespace

AuditReport stock_audit(const CnfFormula& f, const Certificate& cert,
                        const OracleConfig& cfg) {
  Timer timer;
  AuditReport report;
  report.algorithm = "stock";
  report.n = f.num_vars;

  int copies = copies_for(f.num_vars);
  report.n_prime = f.num_vars * copies;
  do {
    if (!check_common(report, f, cert, "stock", copies)) break;
    if (cert.v < 1) {
      reject(report, "arity-violation: v must be >= 1");
      break;
    }
    if (!check_hash_arity(report, cert, report.n_prime)) break;
    for (const HashFunction& h : cert.hashes) {
      if (h.m != cert.v || h.k != 2) {
        reject(report, "arity-violation: hash parameters do not match v");
        break;
      }
    }
    if (!report.reason.empty()) break;
    if (!(cert.estimate.dyadic && cert.estimate.num == cert.v &&
          cert.estimate.den == copies)) {
      reject(report, "inconsistent-estimate");
      break;
    }

    auto fp = std::make_shared<CnfFormula>(make_copies(f, copies));
    HashTuple witness{cert.hashes};
    QuantifiedFormula combined = build_stock_audit(fp, cert.v, witness);
    report.query_vars = combined.budget;

    Oracle oracle(audit_oracle_config(cfg, cert));
    if (oracle.config().backend == Backend::external) {
      // The two checks travel as one query; the substituted side reads its
      // assignment pair out of the universal coefficient block.
      OracleAnswer ans = oracle.two_qbf(combined);
      report.poscheck = report.negcheck = ans.ret;
      report.negcheck_mode = answer_mode_name(ans.mode);
      if (!ans.ret) {
        reject(report, "combined audit query is false");
        break;
      }
    } else {
      BuildOptions sub;
      sub.witness = witness;
      report.poscheck = oracle.semantic().conp_check(
          build_stock(fp, cert.v, sub));
      OracleAnswer neg = oracle.semantic().stock_negcheck(fp, cert.v);
      report.negcheck = neg.ret;
      report.negcheck_mode =
          cert.v <= 1 ? "vacuous" : answer_mode_name(neg.mode);
      if (!report.poscheck) {
        reject(report, "poscheck failed: witness does not isolate at v");
        break;
      }
      if (!report.negcheck) {
        reject(report, "negcheck failed: isolation already holds below v");
        break;
      }
    }
    report.calls = oracle.ledger();

    report.verified = true;
    // Certified bracket on the amplified count: at most v*2^v from the
    // isolation witness; more than 2^(v-3) because no smaller level passed.
    report.implied_upper = u128_str(u128{static_cast<unsigned>(cert.v)}
                                    << cert.v);
    if (cert.v >= 3)
      report.implied_lower = u128_str((u128{1} << (cert.v - 3)) + 1);
    else
      report.implied_lower = cert.v == 2 ? "1" : "0";
  } while (false);

  report.elapsed_s = timer.seconds();
  return report;
}

AuditReport equal_cells_audit(const CnfFormula& f, const Certificate& cert,
                              const OracleConfig& cfg) {
  Timer timer;
  AuditReport report;
  report.algorithm = "cells";
  report.n = f.num_vars;
  report.n_prime = f.num_vars;

  do {
    if (!check_common(report, f, cert, "cells", 1)) break;
    if (cert.m < 1 || cert.m > f.num_vars || cert.ell < 1 ||
        cert.u <= cert.ell) {
      reject(report, "arity-violation: bad cell parameters");
      break;
    }
    if (!check_hash_arity(report, cert, f.num_vars)) break;
    const HashFunction& h = cert.hashes[0];
    if (h.m != cert.m || h.k != f.num_vars) {
      reject(report, "arity-violation: hash parameters do not match m");
      break;
    }

    // Invert the estimate back to the loop level and demand consistency.
    long long m_inv = -1;
    if (cert.ell == 1024LL * f.num_vars) {
      double cest = cert.estimate.decimal;
      m_inv = static_cast<long long>(
                  std::floor(std::log2(cest / f.num_vars))) -
              10;
    } else if (cert.estimate.dyadic && cert.estimate.den == 1 &&
               std::has_single_bit(static_cast<unsigned long long>(cert.ell))) {
      m_inv = cert.estimate.num -
              std::countr_zero(static_cast<unsigned long long>(cert.ell));
    } else if (!cert.estimate.dyadic && cert.estimate.exact % cert.ell == 0 &&
               std::has_single_bit(cert.estimate.exact / cert.ell)) {
      m_inv = std::countr_zero(cert.estimate.exact / cert.ell);
    }
    if (m_inv != cert.m) {
      reject(report, "inconsistent-estimate: level recomputed from the "
                     "estimate is " +
                         std::to_string(m_inv));
      break;
    }

    auto fp = std::make_shared<CnfFormula>(f);
    BuildOptions sub;
    sub.witness = HashTuple{{cert.hashes[0]}};
    QuantifiedFormula substituted =
        build_cells(fp, cert.m, cert.ell, cert.u, sub);
    report.query_vars = substituted.budget;

    Oracle oracle(audit_oracle_config(cfg, cert));
    OracleAnswer ans = oracle.config().backend == Backend::external
                           ? oracle.two_qbf(substituted)
                           : oracle.semantic().two_qbf_check(substituted);
    report.poscheck = report.negcheck = ans.ret;
    report.negcheck_mode = answer_mode_name(ans.mode);
    report.calls = oracle.ledger();
    if (!ans.ret) {
      reject(report, "cell-balance check failed");
      break;
    }

    report.verified = true;
    report.implied_lower =
        u128_str(u128{static_cast<unsigned long long>(cert.ell)} << cert.m);
    report.implied_upper =
        u128_str(u128{static_cast<unsigned long long>(cert.u)} << cert.m);
  } while (false);

  report.elapsed_s = timer.seconds();
  return report;
}

AuditReport count_audit(const CnfFormula& f, const Certificate& cert,
                        const OracleConfig& cfg) {
  Timer timer;
  AuditReport report;
  report.algorithm = "af";
  report.n = f.num_vars;

  int copies = copies_for(f.num_vars);
  report.n_prime = f.num_vars * copies;
  do {
    if (!check_common(report, f, cert, "af", copies)) break;
    if (cert.c_high < 1 || cert.c_low < 0) {
      reject(report, "arity-violation: bad loop exits");
      break;
    }
    if (!check_hash_arity(report, cert, report.n_prime)) break;
    for (int i = 0; i < static_cast<int>(cert.hashes.size()); ++i) {
      const HashFunction& h = cert.hashes[i];
      int want_m = i < cert.c_high ? cert.c_high : cert.c_low;
      if (h.m != want_m || h.k != 2) {
        reject(report, "arity-violation: hash parameters do not match exits");
        break;
      }
    }
    if (!report.reason.empty()) break;
    if (!(cert.estimate.dyadic && cert.estimate.num == cert.c_high &&
          cert.estimate.den == copies)) {
      reject(report, "inconsistent-estimate");
      break;
    }

    report.gap_ok = cert.c_high - cert.c_low <= 7;

    auto fp = std::make_shared<CnfFormula>(make_copies(f, copies));
    HashTuple stock_tuple, holes_tuple;
    stock_tuple.members.assign(cert.hashes.begin(),
                               cert.hashes.begin() + cert.c_high);
    holes_tuple.members.assign(cert.hashes.begin() + cert.c_high,
                               cert.hashes.end());

    report.query_vars.cell_vars = cert.c_low;
    report.query_vars.assign_vars = report.n_prime;

    Oracle oracle(audit_oracle_config(cfg, cert));
    BuildOptions pos_sub;
    pos_sub.witness = stock_tuple;
    report.poscheck = oracle.semantic().conp_check(
        build_stock(fp, cert.c_high, pos_sub));

    if (cert.c_low == 0) {
      report.negcheck = true;
      report.negcheck_mode = "vacuous";
    } else {
      BuildOptions neg_sub;
      neg_sub.witness = holes_tuple;
      QuantifiedFormula neg = build_holes(fp, cert.c_low, neg_sub);
      OracleAnswer ans = oracle.config().backend == Backend::external
                             ? oracle.two_qbf(neg)
                             : oracle.semantic().two_qbf_check(neg);
      report.negcheck = ans.ret;
      report.negcheck_mode = answer_mode_name(ans.mode);
    }
    report.calls = oracle.ledger();

    if (!report.poscheck) {
      reject(report, "poscheck failed: witness does not isolate at c_high");
      break;
    }
    if (!report.negcheck) {
      reject(report, "negcheck failed: cover witness leaves a cell empty");
      break;
    }
    if (!report.gap_ok) {
      reject(report, "gap check failed: c_high - c_low = " +
                         std::to_string(cert.c_high - cert.c_low) + " > 7");
      break;
    }

    report.verified = true;
    report.implied_upper =
        u128_str(u128{static_cast<unsigned>(cert.c_high)} << cert.c_high);
    if (cert.c_low >= 1) {
      // ceil(2^c_low / (c_low + 1)), the cover bound on the count.
      u128 num = u128{1} << cert.c_low;
      u128 den = static_cast<u128>(cert.c_low) + 1;
      report.implied_lower = u128_str((num + den - 1) / den);
    } else {
      report.implied_lower = "0";
    }
  } while (false);

  report.elapsed_s = timer.seconds();
  return report;
}

AuditReport audit_certificate(const CnfFormula& f, const Certificate& cert,
                              const OracleConfig& cfg) {
  if (cert.algorithm == "stock") return stock_audit(f, cert, cfg);
  if (cert.algorithm == "cells") return equal_cells_audit(f, cert, cfg);
  if (cert.algorithm == "af") return count_audit(f, cert, cfg);
  AuditReport report;
  report.algorithm = cert.algorithm;
  report.n = f.num_vars;
  report.reason = "variant-mismatch: unknown algorithm";
  return report;
}

std::string write_audit_report(const AuditReport& report) {
  Json j;
  j["algorithm"] = report.algorithm;
  j["n"] = report.n;
  j["n_prime"] = report.n_prime;
  j["verdict"] = report.verified ? "verified" : "rejected";
  j["reason"] = report.reason;
  j["checks"] = Json{{"poscheck", report.poscheck},
                     {"negcheck", report.negcheck},
                     {"gap_ok", report.gap_ok},
                     {"negcheck_mode", report.negcheck_mode}};
  j["query_vars"] = Json{{"hash_vars", report.query_vars.hash_vars},
                         {"cell_vars", report.query_vars.cell_vars},
                         {"assign_vars", report.query_vars.assign_vars},
                         {"total", report.query_vars.total()}};
  j["implied_bounds"] =
      Json{{"lower", report.implied_lower}, {"upper", report.implied_upper}};
  j["oracle_calls"] = Json{{"conp", report.calls.conp},
                           {"sigma2", report.calls.sigma2},
                           {"sigma3", report.calls.sigma3},
                           {"external", report.calls.external}};
  return j.dump(1) + "\n";
}

BenchResult measure_audit_complexity(const std::vector<CnfFormula>& corpus,
                                     const std::vector<std::string>& algorithms,
                                     const OracleConfig& cfg,
                                     long long ell_base) {
  BenchResult result;
  auto note = [&](const std::string& v) { result.violations.push_back(v); };

  for (const CnfFormula& f : corpus) {
    int n = f.num_vars;
    long stock_total = -1, cells_total = -1, af_total = -1;
    for (const std::string& alg : algorithms) {
      try {
        if (alg == "stock") {
          CountResult r = stock_count(f, cfg);
          if (!r.certificate) {
            note("stock produced no certificate at n=" + std::to_string(n));
            continue;
          }
          AuditReport rep = stock_audit(f, *r.certificate, cfg);
          if (!rep.verified)
            note("stock audit rejected at n=" + std::to_string(n) + ": " +
                 rep.reason);
          int v = r.certificate->v;
          long expect = static_cast<long>(v - 1) * 2 *
                            std::max(rep.n_prime, v - 1) +
                        2L * rep.n_prime;
          if (rep.query_vars.total() != expect)
            note("stock query size " + std::to_string(rep.query_vars.total()) +
                 " != closed form " + std::to_string(expect));
          stock_total = rep.query_vars.total();
          result.rows.push_back(
              {"stock", n, rep.n_prime, v, rep.query_vars.total()});
        } else if (alg == "cells") {
          CountResult r = equal_cells_count(f, cfg, ell_base);
          if (!r.certificate) {
            note("cells took the direct path at n=" + std::to_string(n) +
                 "; no certificate to audit");
            continue;
          }
          AuditReport rep = equal_cells_audit(f, *r.certificate, cfg);
          if (!rep.verified)
            note("cells audit rejected at n=" + std::to_string(n) + ": " +
                 rep.reason);
          const Certificate& c = *r.certificate;
          long expect = c.m + (c.u + 1 + c.ell) * n;
          if (rep.query_vars.total() != expect)
            note("cells query size " + std::to_string(rep.query_vars.total()) +
                 " != closed form " + std::to_string(expect));
          cells_total = rep.query_vars.total();
          result.rows.push_back(
              {"cells", n, n, c.m, rep.query_vars.total()});
        } else if (alg == "af") {
          CountResult r = af_count(f, cfg);
          if (!r.certificate) {
            note("af produced no certificate at n=" + std::to_string(n));
            continue;
          }
          AuditReport rep = count_audit(f, *r.certificate, cfg);
          if (!rep.verified)
            note("af audit rejected at n=" + std::to_string(n) + ": " +
                 rep.reason);
          long expect = r.certificate->c_low + rep.n_prime;
          if (rep.query_vars.total() != expect)
            note("af query size " + std::to_string(rep.query_vars.total()) +
                 " != closed form " + std::to_string(expect));
          af_total = rep.query_vars.total();
          result.rows.push_back({"af", n, rep.n_prime, r.certificate->c_low,
                                 rep.query_vars.total()});
        } else {
          note("unknown algorithm \"" + alg + "\"");
        }
      } catch (const std::exception& e) {
        note(alg + " failed at n=" + std::to_string(n) + ": " + e.what());
      }
    }
    if (n >= 8 && stock_total > 0 && cells_total > 0 && af_total > 0) {
      if (!(af_total < cells_total && cells_total < stock_total))
        note("ordering af < cells < stock violated at n=" + std::to_string(n));
      if (stock_total * 4 < static_cast<long>(n) * af_total)
        note("stock/af ratio below n/4 at n=" + std::to_string(n));
    }
  }

  std::sort(result.rows.begin(), result.rows.end(),
            [](const BenchRow& a, const BenchRow& b) {
              return std::tie(a.algorithm, a.n) < std::tie(b.algorithm, b.n);
            });
  std::string csv = "algorithm,n,n_prime,exit_param,query_vars_total\n";
  for (const BenchRow& r : result.rows) {
    csv += r.algorithm + "," + std::to_string(r.n) + "," +
           std::to_string(r.n_prime) + "," + std::to_string(r.exit_param) +
           "," + std::to_string(r.query_vars_total) + "\n";
  }
  result.csv = std::move(csv);
  return result;
}

}  // namespace auditcount
