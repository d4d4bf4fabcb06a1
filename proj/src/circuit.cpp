#include "auditcount/circuit.hpp"

#include <algorithm>
#include <stdexcept>

namespace auditcount {

Circuit::NodeId Circuit::var(int v) {
  if (v < 1) throw std::invalid_argument("variables are 1-based");
  return push({Kind::var, v, {}});
}

Circuit::NodeId Circuit::negate(NodeId a) {
  if (a == kFalse) return kTrue;
  if (a == kTrue) return kFalse;
  if (nodes_[a].kind == Kind::g_not) return nodes_[a].operands[0];
  return push({Kind::g_not, 0, {a}});
}

Circuit::NodeId Circuit::land(std::vector<NodeId> ops) {
  std::vector<NodeId> kept;
  for (NodeId id : ops) {
    if (id == kFalse) return kFalse;
    if (id == kTrue) continue;
    kept.push_back(id);
  }
  if (kept.empty()) return kTrue;
  if (kept.size() == 1) return kept[0];
  return push({Kind::g_and, 0, std::move(kept)});
}

Circuit::NodeId Circuit::lor(std::vector<NodeId> ops) {
  std::vector<NodeId> kept;
  for (NodeId id : ops) {
    if (id == kTrue) return kTrue;
    if (id == kFalse) continue;
    kept.push_back(id);
  }
  if (kept.empty()) return kFalse;
  if (kept.size() == 1) return kept[0];
  return push({Kind::g_or, 0, std::move(kept)});
}

Circuit::NodeId Circuit::lxor(std::vector<NodeId> ops) {
  bool parity = false;
  std::vector<NodeId> kept;
  for (NodeId id : ops) {
    if (id == kTrue) {
      parity = !parity;
    } else if (id != kFalse) {
      kept.push_back(id);
    }
  }
  if (kept.empty()) return konst(parity);
  NodeId x = kept.size() == 1 ? kept[0] : push({Kind::g_xor, 0, std::move(kept)});
  return parity ? negate(x) : x;
}

std::size_t Circuit::gate_count() const {
  std::size_t n = 0;
  for (const Node& node : nodes_) {
    switch (node.kind) {
      case Kind::konst:
      case Kind::var:
        break;
      case Kind::g_xor:
        n += node.operands.size() - 1;
        break;
      default:
        ++n;
    }
  }
  return n;
}

bool Circuit::eval(const std::vector<bool>& values) const {
  std::vector<bool> val(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    switch (n.kind) {
      case Kind::konst:
        val[i] = n.var != 0;
        break;
      case Kind::var:
        val[i] = values.at(n.var);
        break;
      case Kind::g_not:
        val[i] = !val[n.operands[0]];
        break;
      case Kind::g_and: {
        bool v = true;
        for (NodeId o : n.operands) v = v && val[o];
        val[i] = v;
        break;
      }
      case Kind::g_or: {
        bool v = false;
        for (NodeId o : n.operands) v = v || val[o];
        val[i] = v;
        break;
      }
      case Kind::g_xor: {
        bool v = false;
        for (NodeId o : n.operands) v = v != val[o];
        val[i] = v;
        break;
      }
    }
  }
  return val[output_];
}

namespace {

void sexpr_rec(const Circuit& c, Circuit::NodeId id, std::string& out) {
  const auto& n = c.nodes()[id];
  switch (n.kind) {
    case Circuit::Kind::konst:
      out += n.var ? "true" : "false";
      return;
    case Circuit::Kind::var:
      out += "v" + std::to_string(n.var);
      return;
    case Circuit::Kind::g_not:
      out += "(not ";
      sexpr_rec(c, n.operands[0], out);
      out += ")";
      return;
    default: {
      const char* name = n.kind == Circuit::Kind::g_and   ? "and"
                         : n.kind == Circuit::Kind::g_or  ? "or"
                                                          : "xor";
      out += "(";
      out += name;
      for (auto o : n.operands) {
        out += " ";
        sexpr_rec(c, o, out);
      }
      out += ")";
    }
  }
}

}  // namespace

std::string Circuit::to_sexpr() const {
  std::string out;
  sexpr_rec(*this, output_, out);
  return out;
}

}  // namespace auditcount
