#include <algorithm>
#include <stdexcept>

#include "auditcount/encoder.hpp"
#include "auditcount/errors.hpp"

namespace auditcount {

namespace {

/// Tseitin transform: one definition variable per and/or gate, xor gates
/// decomposed into binary xor definitions. Negations fold into literals.
class Tseitin {
 public:
  Tseitin(const Circuit& c, int first_fresh_var)
      : circuit_(c), next_var_(first_fresh_var) {}

  int run(std::vector<Clause>* clauses) {
    clauses_ = clauses;
    const auto& nodes = circuit_.nodes();
    lits_.assign(nodes.size(), 0);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const Circuit::Node& n = nodes[i];
      switch (n.kind) {
        case Circuit::Kind::konst:
          lits_[i] = 0;  // only legal at the output; handled by caller
          break;
        case Circuit::Kind::var:
          lits_[i] = n.var;
          break;
        case Circuit::Kind::g_not:
          lits_[i] = -lits_[n.operands[0]];
          break;
        case Circuit::Kind::g_and:
          lits_[i] = define_and(n.operands, /*conjunction=*/true);
          break;
        case Circuit::Kind::g_or:
          lits_[i] = define_and(n.operands, /*conjunction=*/false);
          break;
        case Circuit::Kind::g_xor:
          lits_[i] = define_xor(n.operands);
          break;
      }
    }
    return lits_[circuit_.output()];
  }

  int next_var() const { return next_var_; }

 private:
  int fresh() { return next_var_++; }

  int define_and(const std::vector<Circuit::NodeId>& ops, bool conjunction) {
    int t = fresh();
    Clause big;  // t <- all ops (AND) / t -> some op (OR)
    big.push_back(conjunction ? t : -t);
    for (Circuit::NodeId o : ops) {
      int l = lits_[o];
      big.push_back(conjunction ? -l : l);
      clauses_->push_back(conjunction ? Clause{-t, l} : Clause{t, -l});
    }
    clauses_->push_back(std::move(big));
    return t;
  }

  int xor2(int a, int b) {
    int t = fresh();
    clauses_->push_back({-t, a, b});
    clauses_->push_back({-t, -a, -b});
    clauses_->push_back({t, -a, b});
    clauses_->push_back({t, a, -b});
    return t;
  }

  int define_xor(const std::vector<Circuit::NodeId>& ops) {
    int acc = lits_[ops[0]];
    for (std::size_t i = 1; i < ops.size(); ++i) acc = xor2(acc, lits_[ops[i]]);
    return acc;
  }

  const Circuit& circuit_;
  int next_var_;
  std::vector<int> lits_;
  std::vector<Clause>* clauses_ = nullptr;
};

}  // namespace

std::string to_qdimacs(const QuantifiedFormula& q) {
  Circuit matrix = q.matrix();
  int prefix_vars = q.num_prefix_vars();

  std::vector<Clause> clauses;
  bool trivially_true = false, trivially_false = false;
  int tseitin_first = prefix_vars + 1;
  int total_vars = prefix_vars;
  if (matrix.output() == Circuit::kTrue) {
    trivially_true = true;
  } else if (matrix.output() == Circuit::kFalse) {
    trivially_false = true;
  } else {
    Tseitin ts(matrix, tseitin_first);
    int out = ts.run(&clauses);
    clauses.push_back({out});
    total_vars = ts.next_var() - 1;
  }
  if (trivially_false) clauses.push_back({});  // the empty clause

  std::string text = "p cnf " + std::to_string(total_vars) + " " +
                     std::to_string(clauses.size()) + "\n";

  // Quantifier lines: adjacent same-quantifier blocks merge; the tseitin
  // variables extend the innermost existential block, appending one if the
  // prefix ends universally.
  std::vector<std::pair<Quantifier, std::pair<int, int>>> runs;  // [first,last]
  for (const Block& b : q.prefix) {
    if (b.num_vars == 0) continue;
    if (!runs.empty() && runs.back().first == b.q &&
        runs.back().second.second + 1 == b.first_var) {
      runs.back().second.second = b.first_var + b.num_vars - 1;
    } else {
      runs.push_back({b.q, {b.first_var, b.first_var + b.num_vars - 1}});
    }
  }
  if (total_vars > prefix_vars) {
    if (!runs.empty() && runs.back().first == Quantifier::exists)
      runs.back().second.second = total_vars;
    else
      runs.push_back({Quantifier::exists, {prefix_vars + 1, total_vars}});
  }
  for (const auto& [quant, range] : runs) {
    text += quant == Quantifier::exists ? "e" : "a";
    for (int v = range.first; v <= range.second; ++v)
      text += " " + std::to_string(v);
    text += " 0\n";
  }
  for (const Clause& cl : clauses) {
    for (int lit : cl) {
      text += std::to_string(lit);
      text += ' ';
    }
    text += "0\n";
  }
  (void)trivially_true;
  return text;
}

QdimacsFile parse_qdimacs(std::string_view text) {
  QdimacsFile out;
  std::size_t pos = 0;
  int line_no = 0;
  auto next_line = [&](std::string& line) {
    if (pos >= text.size()) return false;
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    line.assign(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    return true;
  };

  std::string line;
  bool saw_header = false;
  while (next_line(line)) {
    if (line.empty() || line[0] == 'c') continue;
    if (line[0] == 'p') {
      int nv = 0, nc = 0;
      if (sscanf(line.c_str(), "p cnf %d %d", &nv, &nc) != 2)
        throw ParseError("bad p line", line_no, 1);
      out.num_vars = nv;
      saw_header = true;
      continue;
    }
    if (!saw_header) throw ParseError("clause before header", line_no, 1);
    if (line[0] == 'a' || line[0] == 'e') {
      std::vector<int> vars;
      const char* s = line.c_str() + 1;
      char* end = nullptr;
      for (;;) {
        long v = strtol(s, &end, 10);
        if (end == s) break;
        s = end;
        if (v == 0) break;
        vars.push_back(static_cast<int>(v));
      }
      out.prefix.emplace_back(
          line[0] == 'a' ? Quantifier::forall : Quantifier::exists,
          std::move(vars));
      continue;
    }
    Clause cl;
    const char* s = line.c_str();
    char* end = nullptr;
    for (;;) {
      long v = strtol(s, &end, 10);
      if (end == s) break;
      s = end;
      if (v == 0) break;
      cl.push_back(static_cast<int>(v));
    }
    out.clauses.push_back(std::move(cl));
  }
  return out;
}

}  // namespace auditcount
