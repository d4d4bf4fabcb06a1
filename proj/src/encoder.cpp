#include "auditcount/encoder.hpp"

#include <stdexcept>

namespace auditcount {

std::string family_name(Family f) {
  switch (f) {
    case Family::stock: return "stock";
    case Family::holes: return "holes";
    case Family::not_many: return "not_many";
    case Family::at_least_few: return "at_least_few";
    case Family::cells: return "cells";
    case Family::stock_audit: return "stock_audit";
  }
  return "?";
}

namespace {

using NodeId = Circuit::NodeId;
using BitNodes = std::vector<NodeId>;

/// Coefficient bits of one hash, either prefix variables or constants.
struct HashBits {
  int m = 0, k = 0;
  FieldSpec spec;
  std::vector<BitNodes> coeffs;  // k vectors of w nodes each

  static HashBits vars(Circuit& c, int n, int m, int k, int first_var) {
    HashBits h;
    h.m = m;
    h.k = k;
    h.spec = FieldSpec::for_width(std::max(n, m));
    int v = first_var;
    for (int i = 0; i < k; ++i) {
      BitNodes bits;
      for (int b = 0; b < h.spec.w; ++b) bits.push_back(c.var(v++));
      h.coeffs.push_back(std::move(bits));
    }
    return h;
  }

  static HashBits constants(Circuit& c, const HashFunction& hf) {
    HashBits h;
    h.m = hf.m;
    h.k = hf.k;
    h.spec = hf.spec;
    for (const FieldElem& coeff : hf.coeffs) {
      BitNodes bits;
      for (int b = 0; b < h.spec.w; ++b) bits.push_back(c.konst(coeff.bit(b)));
      h.coeffs.push_back(std::move(bits));
    }
    return h;
  }
};

class MatrixBuilder {
 public:
  MatrixBuilder(Circuit& c, const CnfFormula& f) : c_(c), f_(f) {}

  /// Nodes for an n-bit assignment vector rooted at prefix variable `first`.
  BitNodes assignment_vars(int first) {
    BitNodes bits;
    for (int i = 0; i < f_.num_vars; ++i) bits.push_back(c_.var(first + i));
    return bits;
  }

  BitNodes block_vars(int first, int count) {
    BitNodes bits;
    for (int i = 0; i < count; ++i) bits.push_back(c_.var(first + i));
    return bits;
  }

  NodeId cnf_eval(const BitNodes& y) {
    if (f_.has_empty_clause) return Circuit::kFalse;
    std::vector<NodeId> clauses;
    clauses.reserve(f_.clauses.size());
    for (const Clause& cl : f_.clauses) {
      std::vector<NodeId> lits;
      lits.reserve(cl.size());
      for (int lit : cl) {
        NodeId v = y[std::abs(lit) - 1];
        lits.push_back(lit > 0 ? v : c_.negate(v));
      }
      clauses.push_back(c_.lor(std::move(lits)));
    }
    return c_.land(std::move(clauses));
  }

  /// Product a*b in GF(2^w) as a circuit: the AND of each bit pair feeds the
  /// output bits selected by the reduction masks x^(i+j) mod p.
  BitNodes gf2_mul_nodes(const FieldSpec& spec, const BitNodes& a,
                         const BitNodes& b) {
    int w = spec.w;
    std::vector<FieldElem> masks = power_masks(spec);
    std::vector<std::vector<NodeId>> terms(w);
    for (int i = 0; i < w; ++i) {
      if (a[i] == Circuit::kFalse) continue;
      for (int j = 0; j < w; ++j) {
        if (b[j] == Circuit::kFalse) continue;
        NodeId prod = c_.land2(a[i], b[j]);
        const FieldElem& mask = masks[i + j];
        for (int t = 0; t < w; ++t)
          if (mask.bit(t)) terms[t].push_back(prod);
      }
    }
    BitNodes out(w);
    for (int t = 0; t < w; ++t) out[t] = c_.lxor(std::move(terms[t]));
    return out;
  }

  /// Low-m output bits of the hash polynomial at the embedded assignment.
  BitNodes hash_output(const HashBits& h, const BitNodes& y) {
    BitNodes x(h.spec.w, Circuit::kFalse);
    for (std::size_t i = 0; i < y.size() && i < x.size(); ++i) x[i] = y[i];
    BitNodes acc = h.coeffs[h.k - 1];
    for (int i = h.k - 2; i >= 0; --i) {
      acc = gf2_mul_nodes(h.spec, acc, x);
      for (int t = 0; t < h.spec.w; ++t)
        acc[t] = c_.lxor({acc[t], h.coeffs[i][t]});
    }
    acc.resize(h.m);
    return acc;
  }

  NodeId eq_bits(const BitNodes& a, const BitNodes& b) {
    std::vector<NodeId> eqs;
    for (std::size_t i = 0; i < a.size(); ++i)
      eqs.push_back(c_.negate(c_.lxor({a[i], b[i]})));
    return c_.land(std::move(eqs));
  }

  NodeId neq_bits(const BitNodes& a, const BitNodes& b) {
    return c_.negate(eq_bits(a, b));
  }

  Circuit& c_;
  const CnfFormula& f_;

 private:
  std::vector<FieldElem> power_masks(const FieldSpec& spec) {
    // x^s mod p for s = 0 .. 2w-2.
    std::vector<FieldElem> masks;
    FieldElem cur = FieldElem::from_u64(1);
    FieldElem x = FieldElem::from_u64(2);
    for (int s = 0; s <= 2 * spec.w - 2; ++s) {
      masks.push_back(cur);
      cur = gf2_mul(spec, cur, x);
    }
    return masks;
  }
};

std::vector<HashBits> hash_block(Circuit& c, const QuantifiedFormula& q,
                                 int count, int k, int first_var) {
  std::vector<HashBits> hashes;
  if (q.witness) {
    if (q.witness->size() != count)
      throw std::invalid_argument("witness arity mismatch");
    for (const HashFunction& hf : q.witness->members)
      hashes.push_back(HashBits::constants(c, hf));
  } else {
    int n = q.source->num_vars;
    int w = FieldSpec::for_width(std::max(n, q.m)).w;
    for (int i = 0; i < count; ++i)
      hashes.push_back(HashBits::vars(c, n, q.m, k, first_var + i * k * w));
  }
  return hashes;
}

Circuit stock_matrix(const QuantifiedFormula& q) {
  Circuit c;
  MatrixBuilder mb(c, *q.source);
  int n = q.source->num_vars;
  int z_first = q.witness ? 1 : q.prefix[0].num_vars + 1;
  std::vector<HashBits> hashes = hash_block(c, q, q.m, 2, 1);

  BitNodes z1 = mb.assignment_vars(z_first);
  BitNodes z2 = mb.assignment_vars(z_first + n);
  NodeId f1 = mb.cnf_eval(z1);
  NodeId f2 = mb.cnf_eval(z2);
  NodeId same = mb.eq_bits(z1, z2);

  std::vector<NodeId> disjuncts;
  for (const HashBits& h : hashes) {
    NodeId collide = mb.eq_bits(mb.hash_output(h, z1), mb.hash_output(h, z2));
    std::vector<NodeId> impl = {c.negate(f1), c.negate(collide), c.negate(f2)};
    if (q.guarded) impl.push_back(same);
    disjuncts.push_back(c.lor(std::move(impl)));
  }
  c.set_output(c.lor(std::move(disjuncts)));
  return c;
}

Circuit holes_matrix(const QuantifiedFormula& q) {
  Circuit c;
  MatrixBuilder mb(c, *q.source);
  int count = q.m + 1;
  int alpha_first = q.witness ? 1 : q.prefix[0].num_vars + 1;
  std::vector<HashBits> hashes = hash_block(c, q, count, 2, 1);

  BitNodes alpha = mb.block_vars(alpha_first, q.m);
  BitNodes z = mb.assignment_vars(alpha_first + q.m);
  NodeId fz = mb.cnf_eval(z);

  std::vector<NodeId> disjuncts;
  for (const HashBits& h : hashes)
    disjuncts.push_back(c.land2(fz, mb.eq_bits(mb.hash_output(h, z), alpha)));
  c.set_output(c.lor(std::move(disjuncts)));
  return c;
}

NodeId not_many_fragment(Circuit& c, MatrixBuilder& mb, const HashBits& h,
                         const BitNodes& alpha,
                         const std::vector<BitNodes>& ys) {
  std::vector<NodeId> all_in_cell;
  for (const BitNodes& y : ys) {
    all_in_cell.push_back(mb.cnf_eval(y));
    all_in_cell.push_back(mb.eq_bits(mb.hash_output(h, y), alpha));
  }
  std::vector<NodeId> repeats;
  for (std::size_t i = 0; i < ys.size(); ++i)
    for (std::size_t j = i + 1; j < ys.size(); ++j)
      repeats.push_back(mb.eq_bits(ys[i], ys[j]));
  return c.implies(c.land(std::move(all_in_cell)), c.lor(std::move(repeats)));
}

NodeId at_least_few_fragment(Circuit& c, MatrixBuilder& mb, const HashBits& h,
                             const BitNodes& alpha,
                             const std::vector<BitNodes>& zs) {
  std::vector<NodeId> conj;
  for (const BitNodes& z : zs) {
    conj.push_back(mb.cnf_eval(z));
    conj.push_back(mb.eq_bits(mb.hash_output(h, z), alpha));
  }
  for (std::size_t i = 0; i < zs.size(); ++i)
    for (std::size_t j = i + 1; j < zs.size(); ++j)
      conj.push_back(mb.neq_bits(zs[i], zs[j]));
  return c.land(std::move(conj));
}

std::vector<BitNodes> assignment_vectors(MatrixBuilder& mb, int first,
                                         long long count, int n) {
  std::vector<BitNodes> vecs;
  for (long long i = 0; i < count; ++i)
    vecs.push_back(mb.assignment_vars(first + static_cast<int>(i) * n));
  return vecs;
}

Circuit cells_matrix(const QuantifiedFormula& q) {
  Circuit c;
  MatrixBuilder mb(c, *q.source);
  int n = q.source->num_vars;
  int alpha_first = q.witness ? 1 : q.prefix[0].num_vars + 1;
  HashBits h = hash_block(c, q, 1, n, 1)[0];

  BitNodes alpha = mb.block_vars(alpha_first, q.m);
  int y_first = alpha_first + q.m;
  NodeId out = Circuit::kTrue;
  if (q.family == Family::cells) {
    auto ys = assignment_vectors(mb, y_first, q.u + 1, n);
    auto zs = assignment_vectors(
        mb, y_first + static_cast<int>(q.u + 1) * n, q.ell, n);
    out = c.land2(not_many_fragment(c, mb, h, alpha, ys),
                  at_least_few_fragment(c, mb, h, alpha, zs));
  } else if (q.family == Family::not_many) {
    auto ys = assignment_vectors(mb, y_first, q.u + 1, n);
    out = not_many_fragment(c, mb, h, alpha, ys);
  } else {
    auto zs = assignment_vectors(mb, y_first, q.ell, n);
    out = at_least_few_fragment(c, mb, h, alpha, zs);
  }
  c.set_output(out);
  return c;
}

Circuit stock_audit_matrix(const QuantifiedFormula& q) {
  Circuit c;
  MatrixBuilder mb(c, *q.source);
  int n = q.source->num_vars;
  int v = q.v;

  // Substituted check at v over a pair of assignment vectors.
  auto poscheck = [&](const BitNodes& z1, const BitNodes& z2) {
    NodeId f1 = mb.cnf_eval(z1);
    NodeId f2 = mb.cnf_eval(z2);
    NodeId same = mb.eq_bits(z1, z2);
    std::vector<NodeId> disjuncts;
    for (const HashFunction& hf : q.witness->members) {
      HashBits h = HashBits::constants(c, hf);
      NodeId collide = mb.eq_bits(mb.hash_output(h, z1), mb.hash_output(h, z2));
      disjuncts.push_back(
          c.lor({c.negate(f1), c.negate(collide), same, c.negate(f2)}));
    }
    return c.lor(std::move(disjuncts));
  };

  if (v <= 1) {
    BitNodes z1 = mb.assignment_vars(1);
    BitNodes z2 = mb.assignment_vars(1 + n);
    c.set_output(poscheck(z1, z2));
    return c;
  }

  int w = FieldSpec::for_width(std::max(n, v - 1)).w;
  int hash_bits = (v - 1) * 2 * w;
  int e_first = hash_bits + 1;

  // Collision-pair matrix over the universal (v-1)-tuple.
  BitNodes z1 = mb.assignment_vars(e_first);
  BitNodes z2 = mb.assignment_vars(e_first + n);
  std::vector<NodeId> neg = {mb.cnf_eval(z1), mb.cnf_eval(z2),
                             mb.neq_bits(z1, z2)};
  for (int i = 0; i < v - 1; ++i) {
    HashBits h = HashBits::vars(c, n, v - 1, 2, 1 + i * 2 * w);
    neg.push_back(mb.eq_bits(mb.hash_output(h, z1), mb.hash_output(h, z2)));
  }
  NodeId negcheck = c.land(std::move(neg));

  // The substituted check rides on the first 2n universal coefficient bits.
  BitNodes p1 = mb.block_vars(1, n);
  BitNodes p2 = mb.block_vars(1 + n, n);
  c.set_output(c.land2(poscheck(p1, p2), negcheck));
  return c;
}

void check_m_range(int m, int n) {
  if (m < 1 || m > n)
    throw std::invalid_argument("m must be in [1, n]; got m=" +
                                std::to_string(m) + " n=" + std::to_string(n));
}

}  // namespace

Circuit QuantifiedFormula::matrix() const {
  switch (family) {
    case Family::stock: return stock_matrix(*this);
    case Family::holes: return holes_matrix(*this);
    case Family::cells:
    case Family::not_many:
    case Family::at_least_few: return cells_matrix(*this);
    case Family::stock_audit: return stock_audit_matrix(*this);
  }
  throw std::logic_error("unknown family");
}

QuantifiedFormula build_stock(std::shared_ptr<const CnfFormula> f, int m,
                              const BuildOptions& opts) {
  int n = f->num_vars;
  check_m_range(m, n);
  QuantifiedFormula q;
  q.family = Family::stock;
  q.m = m;
  q.guarded = opts.guarded;
  q.source = std::move(f);
  q.witness = opts.witness;
  int w = FieldSpec::for_width(std::max(n, m)).w;
  int next = 1;
  if (!q.witness) {
    q.prefix.push_back(
        {Quantifier::exists, VarRole::hash_coeff, next, m * 2 * w, "h1..hm"});
    next += m * 2 * w;
    q.budget.hash_vars = m * 2 * w;
  }
  q.prefix.push_back(
      {Quantifier::forall, VarRole::assignment, next, 2 * n, "z1 z2"});
  q.budget.assign_vars = 2 * n;
  return q;
}

QuantifiedFormula build_holes(std::shared_ptr<const CnfFormula> f, int m,
                              const BuildOptions& opts) {
  int n = f->num_vars;
  check_m_range(m, n);
  QuantifiedFormula q;
  q.family = Family::holes;
  q.m = m;
  q.source = std::move(f);
  q.witness = opts.witness;
  int w = FieldSpec::for_width(std::max(n, m)).w;
  int next = 1;
  if (!q.witness) {
    q.prefix.push_back({Quantifier::exists, VarRole::hash_coeff, next,
                        (m + 1) * 2 * w, "h1..h(m+1)"});
    next += (m + 1) * 2 * w;
    q.budget.hash_vars = (m + 1) * 2 * w;
  }
  q.prefix.push_back({Quantifier::forall, VarRole::cell, next, m, "alpha"});
  next += m;
  q.prefix.push_back({Quantifier::exists, VarRole::assignment, next, n, "z"});
  q.budget.cell_vars = m;
  q.budget.assign_vars = n;
  return q;
}

namespace {

QuantifiedFormula build_cells_like(Family family,
                                   std::shared_ptr<const CnfFormula> f, int m,
                                   long long ell, long long u,
                                   const BuildOptions& opts) {
  int n = f->num_vars;
  check_m_range(m, n);
  if (family != Family::not_many && ell < 1)
    throw std::invalid_argument("ell must be >= 1");
  if (family != Family::at_least_few && u < 1)
    throw std::invalid_argument("u must be >= 1");
  if (family == Family::cells && ell >= u)
    throw std::invalid_argument("need ell < u");
  QuantifiedFormula q;
  q.family = family;
  q.m = m;
  q.ell = ell;
  q.u = u;
  q.source = std::move(f);
  q.witness = opts.witness;
  int w = FieldSpec::for_width(std::max(n, m)).w;
  int next = 1;
  if (!q.witness) {
    q.prefix.push_back(
        {Quantifier::exists, VarRole::hash_coeff, next, n * w, "h"});
    next += n * w;
    q.budget.hash_vars = n * w;
  }
  q.prefix.push_back({Quantifier::forall, VarRole::cell, next, m, "alpha"});
  next += m;
  if (family != Family::at_least_few) {
    int y_bits = static_cast<int>(u + 1) * n;
    q.prefix.push_back(
        {Quantifier::forall, VarRole::assignment, next, y_bits, "y1..y(u+1)"});
    next += y_bits;
    q.budget.assign_vars += y_bits;
  }
  if (family != Family::not_many) {
    int z_bits = static_cast<int>(ell) * n;
    q.prefix.push_back(
        {Quantifier::exists, VarRole::assignment, next, z_bits, "z1..zl"});
    next += z_bits;
    q.budget.assign_vars += z_bits;
  }
  q.budget.cell_vars = m;
  return q;
}

}  // namespace

QuantifiedFormula build_cells(std::shared_ptr<const CnfFormula> f, int m,
                              long long ell, long long u,
                              const BuildOptions& opts) {
  return build_cells_like(Family::cells, std::move(f), m, ell, u, opts);
}

QuantifiedFormula build_not_many(std::shared_ptr<const CnfFormula> f, int m,
                                 long long u, const BuildOptions& opts) {
  return build_cells_like(Family::not_many, std::move(f), m, 1, u, opts);
}

QuantifiedFormula build_at_least_few(std::shared_ptr<const CnfFormula> f,
                                     int m, long long ell,
                                     const BuildOptions& opts) {
  return build_cells_like(Family::at_least_few, std::move(f), m, ell,
                          ell + 1, opts);
}

QuantifiedFormula build_stock_audit(std::shared_ptr<const CnfFormula> f, int v,
                                    const HashTuple& witness) {
  if (v < 1) throw std::invalid_argument("v must be >= 1");
  if (witness.size() != v)
    throw std::invalid_argument("stock audit witness must hold v hashes");
  int n = f->num_vars;
  QuantifiedFormula q;
  q.family = Family::stock_audit;
  q.m = v;
  q.v = v;
  q.source = std::move(f);
  q.witness = witness;
  if (v == 1) {
    q.prefix.push_back(
        {Quantifier::forall, VarRole::assignment, 1, 2 * n, "z1 z2"});
    q.budget.assign_vars = 2 * n;
    return q;
  }
  int w = FieldSpec::for_width(std::max(n, v - 1)).w;
  int hash_bits = (v - 1) * 2 * w;
  q.prefix.push_back(
      {Quantifier::forall, VarRole::hash_coeff, 1, hash_bits, "h1..h(v-1)"});
  q.prefix.push_back({Quantifier::exists, VarRole::assignment, hash_bits + 1,
                      2 * n, "z1 z2"});
  q.budget.hash_vars = hash_bits;
  q.budget.assign_vars = 2 * n;
  return q;
}

std::string var_budget_csv_row(const QuantifiedFormula& q) {
  return family_name(q.family) + "," + std::to_string(q.m) + "," +
         std::to_string(q.source->num_vars) + "," +
         std::to_string(q.budget.hash_vars) + "," +
         std::to_string(q.budget.cell_vars) + "," +
         std::to_string(q.budget.assign_vars) + "," +
         std::to_string(q.budget.total());
}

}  // namespace auditcount
