#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace auditcount {

/// Boolean circuit DAG. Node 0 is the constant false, node 1 the constant
/// true; operands always precede their gate, so evaluation is a single
/// forward pass. Builders constant-fold, drop neutral operands, and collapse
/// trivial gates, which keeps substituted formulas small.
class Circuit {
 public:
  using NodeId = std::int32_t;
  static constexpr NodeId kFalse = 0;
  static constexpr NodeId kTrue = 1;

  enum class Kind : std::uint8_t { konst, var, g_not, g_and, g_or, g_xor };

  struct Node {
    Kind kind;
    int var = 0;  // for Kind::var: 1-based prefix variable
    std::vector<NodeId> operands;
  };

  Circuit() {
    nodes_.push_back({Kind::konst, 0, {}});
    nodes_.push_back({Kind::konst, 1, {}});
  }

  NodeId konst(bool v) const { return v ? kTrue : kFalse; }
  NodeId var(int v);
  NodeId negate(NodeId a);
  NodeId land(std::vector<NodeId> ops);
  NodeId lor(std::vector<NodeId> ops);
  NodeId lxor(std::vector<NodeId> ops);
  NodeId land2(NodeId a, NodeId b) { return land({a, b}); }
  NodeId lor2(NodeId a, NodeId b) { return lor({a, b}); }
  NodeId implies(NodeId a, NodeId b) { return lor({negate(a), b}); }

  void set_output(NodeId id) { output_ = id; }
  NodeId output() const { return output_; }

  const std::vector<Node>& nodes() const { return nodes_; }
  /// Gate tally with xor gates counted by their binary decomposition; the
  /// CNF transform introduces at most this many definition variables.
  std::size_t gate_count() const;

  /// Evaluate with values[v] giving variable v (1-based; values[0] unused).
  bool eval(const std::vector<bool>& values) const;

  /// Debug dump, e.g. "(and (or v1 (not v2)) v3)".
  std::string to_sexpr() const;

 private:
  NodeId push(Node n) {
    nodes_.push_back(std::move(n));
    return static_cast<NodeId>(nodes_.size() - 1);
  }

  std::vector<Node> nodes_;
  NodeId output_ = kTrue;
};

}  // namespace auditcount
