#include "auditcount/formula.hpp"

#include <algorithm>
#include <charconv>
#include <cstring>
#include <limits>

#include <openssl/evp.h>

#include "auditcount/errors.hpp"

namespace auditcount {

namespace {

struct Cursor {
  std::string_view text;
  std::size_t pos = 0;
  int line = 1;
  int col = 1;

  bool eof() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }
  void advance() {
    if (text[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }
  void skip_space() {
    while (!eof() && (peek() == ' ' || peek() == '\t' || peek() == '\r' ||
                      peek() == '\n'))
      advance();
  }
};

long read_int(Cursor& c, const char* what) {
  c.skip_space();
  int line = c.line, col = c.col;
  if (c.eof())
    throw ParseError(std::string("expected ") + what + ", got end of input",
                     line, col);
  std::size_t start = c.pos;
  if (c.peek() == '-') c.advance();
  while (!c.eof() && c.peek() >= '0' && c.peek() <= '9') c.advance();
  if (c.pos == start || (c.pos == start + 1 && c.text[start] == '-'))
    throw ParseError(std::string("expected ") + what, line, col);
  long value = 0;
  auto res = std::from_chars(c.text.data() + start, c.text.data() + c.pos, value);
  if (res.ec != std::errc{})
    throw ParseError(std::string("integer out of range for ") + what, line, col);
  return value;
}

void sort_clause(Clause& cl) {
  std::sort(cl.begin(), cl.end(), [](int a, int b) {
    int va = std::abs(a), vb = std::abs(b);
    return va != vb ? va < vb : a < b;
  });
  cl.erase(std::unique(cl.begin(), cl.end()), cl.end());
}

}  // namespace

CnfFormula parse_dimacs(std::string_view text,
                        std::vector<ParseWarning>* warnings) {
  Cursor c{text};
  CnfFormula f;
  long declared_clauses = -1;

  // Header, preceded by any number of comment lines.
  for (;;) {
    c.skip_space();
    if (c.eof()) throw ParseError("missing \"p cnf\" header", c.line, c.col);
    if (c.peek() == 'c') {
      while (!c.eof() && c.peek() != '\n') c.advance();
      continue;
    }
    break;
  }
  int hline = c.line, hcol = c.col;
  if (c.peek() != 'p')
    throw ParseError("expected \"p cnf\" header", hline, hcol);
  c.advance();
  c.skip_space();
  static constexpr std::string_view kCnf = "cnf";
  for (char ch : kCnf) {
    if (c.eof() || c.peek() != ch)
      throw ParseError("malformed header: expected \"cnf\"", c.line, c.col);
    c.advance();
  }
  long nv = read_int(c, "variable count");
  if (nv <= 0)
    throw ParseError("variable count must be positive", hline, hcol);
  declared_clauses = read_int(c, "clause count");
  if (declared_clauses < 0)
    throw ParseError("clause count must be nonnegative", hline, hcol);
  f.num_vars = static_cast<int>(nv);

  Clause current;
  bool in_clause = false;
  int clause_line = 0, clause_col = 0;
  for (;;) {
    c.skip_space();
    if (c.eof()) break;
    if (c.peek() == 'c' && !in_clause) {
      while (!c.eof() && c.peek() != '\n') c.advance();
      continue;
    }
    int line = c.line, col = c.col;
    long lit = read_int(c, "literal");
    if (lit == 0) {
      if (current.empty()) {
        f.has_empty_clause = true;
      } else {
        sort_clause(current);
        f.clauses.push_back(std::move(current));
        current.clear();
      }
      in_clause = false;
      continue;
    }
    if (std::labs(lit) > f.num_vars)
      throw ParseError("literal " + std::to_string(lit) +
                           " out of range for " + std::to_string(f.num_vars) +
                           " variables",
                       line, col);
    if (!in_clause) {
      clause_line = line;
      clause_col = col;
      in_clause = true;
    }
    current.push_back(static_cast<int>(lit));
  }
  if (in_clause)
    throw ParseError("clause missing terminating 0", clause_line, clause_col);

  long got = static_cast<long>(f.clauses.size()) + (f.has_empty_clause ? 1 : 0);
  if (warnings && got != declared_clauses) {
    warnings->push_back(
        {c.line, "clause count mismatch: header declares " +
                     std::to_string(declared_clauses) + ", found " +
                     std::to_string(got)});
  }
  return f;
}

std::string write_dimacs(const CnfFormula& f) {
  std::vector<Clause> sorted = f.clauses;
  std::sort(sorted.begin(), sorted.end());
  std::string out = "p cnf " + std::to_string(f.num_vars) + " " +
                    std::to_string(sorted.size() + (f.has_empty_clause ? 1 : 0)) +
                    "\n";
  if (f.has_empty_clause) out += "0\n";
  for (const Clause& cl : sorted) {
    for (int lit : cl) {
      out += std::to_string(lit);
      out += ' ';
    }
    out += "0\n";
  }
  return out;
}

bool evaluate(const CnfFormula& f, const Assignment& a) {
  if (static_cast<int>(a.width) != f.num_vars)
    throw std::invalid_argument("assignment width " + std::to_string(a.width) +
                                " != formula variables " +
                                std::to_string(f.num_vars));
  if (f.has_empty_clause) return false;
  for (const Clause& cl : f.clauses) {
    bool sat = false;
    for (int lit : cl) {
      if (a.bit(std::abs(lit) - 1) == (lit > 0)) {
        sat = true;
        break;
      }
    }
    if (!sat) return false;
  }
  return true;
}

namespace {

// Clause masks for the word-at-a-time sweep (formulas up to 64 variables).
struct MaskedClauses {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> pos_neg;

  explicit MaskedClauses(const CnfFormula& f) {
    pos_neg.reserve(f.clauses.size());
    for (const Clause& cl : f.clauses) {
      std::uint64_t pos = 0, neg = 0;
      for (int lit : cl) {
        std::uint64_t bit = std::uint64_t{1} << (std::abs(lit) - 1);
        (lit > 0 ? pos : neg) |= bit;
      }
      pos_neg.emplace_back(pos, neg);
    }
  }

  bool satisfied(std::uint64_t bits) const {
    for (auto [pos, neg] : pos_neg)
      if (!((bits & pos) | (~bits & neg))) return false;
    return true;
  }
};

SolutionSet product_enumerate(const CnfFormula& f,
                              const EnumerationOptions& opts) {
  SolutionSet base = enumerate_solutions(
      *f.copy_base, EnumerationOptions{std::nullopt, opts.budget_bits});
  int n = f.copy_base->num_vars;
  int c = f.copy_count;

  SolutionSet out;
  out.width = f.num_vars;
  out.cap = opts.cap;
  double total = 1;
  for (int j = 0; j < c; ++j) total *= static_cast<double>(base.count());
  std::uint64_t limit =
      opts.cap ? *opts.cap : std::numeric_limits<std::uint64_t>::max();
  if (total > static_cast<double>(std::uint64_t{1} << 40) && !opts.cap)
    throw BudgetExceeded("copy product has " + std::to_string(total) +
                         " solutions; pass a cap");

  std::vector<std::size_t> idx(c, 0);
  bool truncated = false;
  if (base.count() > 0) {
    for (;;) {
      Assignment a;
      a.width = f.num_vars;
      for (int j = 0; j < c; ++j) {
        const Assignment& part = base.solutions[idx[j]];
        for (int b = 0; b < n; ++b)
          if (part.bit(b)) a.set_bit(j * n + b, true);
      }
      out.solutions.push_back(a);
      // Odometer over copies; copy j is the more significant the higher j is,
      // which matches numeric order of the packed assignment.
      int j = 0;
      while (j < c && ++idx[j] == base.solutions.size()) idx[j++] = 0;
      if (j == c) break;
      if (out.solutions.size() >= limit) {
        truncated = true;
        break;
      }
    }
  }
  out.exhaustive = !truncated;
  std::sort(out.solutions.begin(), out.solutions.end());
  return out;
}

}  // namespace

SolutionSet enumerate_solutions(const CnfFormula& f,
                                const EnumerationOptions& opts) {
  if (f.copy_base && f.copy_count > 1) return product_enumerate(f, opts);

  SolutionSet out;
  out.width = f.num_vars;
  out.cap = opts.cap;
  if (f.has_empty_clause) {
    out.exhaustive = true;
    return out;
  }
  if (f.num_vars > opts.budget_bits && !opts.cap)
    throw BudgetExceeded("enumeration over 2^" + std::to_string(f.num_vars) +
                         " assignments exceeds budget 2^" +
                         std::to_string(opts.budget_bits) +
                         " and no cap was given");
  if (f.num_vars > 64)
    throw BudgetExceeded("exhaustive sweep limited to 64 variables");

  std::uint64_t limit =
      opts.cap ? *opts.cap : std::numeric_limits<std::uint64_t>::max();
  MaskedClauses masks(f);
  std::uint64_t space = std::uint64_t{1} << f.num_vars;
  std::uint64_t bits = 0;
  bool complete = true;
  for (bits = 0; bits < space; ++bits) {
    if (masks.satisfied(bits)) {
      out.solutions.push_back(Assignment::from_u64(bits, f.num_vars));
      if (out.solutions.size() >= limit && bits + 1 < space) {
        complete = false;
        break;
      }
    }
  }
  out.exhaustive = complete;
  return out;
}

std::uint64_t exact_count(const CnfFormula& f, const EnumerationOptions& opts) {
  return enumerate_solutions(f, opts).count();
}

CnfFormula make_copies(const CnfFormula& f, int c) {
  if (c < 1) throw std::invalid_argument("copy count must be >= 1");
  if (c == 1) return f;
  CnfFormula out;
  out.num_vars = f.num_vars * c;
  out.name = f.name.empty() ? "" : f.name + "^" + std::to_string(c);
  out.has_empty_clause = f.has_empty_clause;
  out.clauses.reserve(f.clauses.size() * c);
  for (int j = 0; j < c; ++j) {
    int off = j * f.num_vars;
    for (const Clause& cl : f.clauses) {
      Clause shifted;
      shifted.reserve(cl.size());
      for (int lit : cl) shifted.push_back(lit > 0 ? lit + off : lit - off);
      out.clauses.push_back(std::move(shifted));
    }
  }
  out.copy_base = std::make_shared<CnfFormula>(f);
  out.copy_count = c;
  return out;
}

std::string formula_digest(const CnfFormula& f) {
  std::string canon = write_dimacs(f);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(canon.data(), canon.size(), md, &len, EVP_sha256(), nullptr);
  std::string hex = "sha256:";
  for (unsigned int i = 0; i < len; ++i) {
    hex += "0123456789abcdef"[md[i] >> 4];
    hex += "0123456789abcdef"[md[i] & 0xf];
  }
  return hex;
}

}  // namespace auditcount
