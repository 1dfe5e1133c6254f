#pragma once

// Syntax of the modal mu-calculus.
//
// A Formula is an immutable syntax tree stored as a preorder node array; node
// 0 is the root. Every node is an occurrence, identified canonically by its
// path of child indices from the root, so equal subformulas at different
// places stay distinct.
//
// Surface syntax:
//   or    := and ("|" and)*
//   and   := unary ("&" unary)*
//   unary := "~" prop | "<>" unary | "[]" unary
//          | ("mu" | "nu") Label "." or      (scope extends maximally right)
//          | prop | Label | "(" or ")"
// Propositions start lowercase, labels start uppercase; "mu" and "nu" are
// reserved.

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mucalc/error.hpp"

namespace mucalc {

enum class NodeKind : std::uint8_t { prop, neg_prop, label, disj, conj, diamond, box, mu, nu };

using NodeId = std::uint32_t;
using OccurrencePath = std::vector<std::uint32_t>;
using OccurrenceSet = std::vector<OccurrencePath>;

inline constexpr NodeId no_node = static_cast<NodeId>(-1);

constexpr bool is_fixpoint(NodeKind k) noexcept { return k == NodeKind::mu || k == NodeKind::nu; }
constexpr bool is_atom(NodeKind k) noexcept {
  return k == NodeKind::prop || k == NodeKind::neg_prop || k == NodeKind::label;
}
constexpr bool is_binary(NodeKind k) noexcept { return k == NodeKind::disj || k == NodeKind::conj; }

constexpr std::size_t arity(NodeKind k) noexcept {
  if (is_atom(k)) return 0;
  return is_binary(k) ? 2 : 1;
}

inline bool is_prop_name(std::string_view s) {
  if (s.empty() || !std::islower(static_cast<unsigned char>(s[0]))) return false;
  if (s == "mu" || s == "nu") return false;
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

inline bool is_label_name(std::string_view s) {
  if (s.empty() || !std::isupper(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

class Formula {
 public:
  struct Node {
    NodeKind kind;
    std::string symbol;  // proposition or label; empty for connectives
    std::array<NodeId, 2> children{no_node, no_node};
    NodeId parent = no_node;
    std::uint32_t height = 0;  // 0 for atoms

    friend bool operator==(const Node&, const Node&) = default;
  };

  static Formula prop(std::string p) {
    if (!is_prop_name(p)) throw InvalidArgument("'" + p + "' is not a proposition symbol");
    return leaf(NodeKind::prop, std::move(p));
  }
  static Formula neg_prop(std::string p) {
    if (!is_prop_name(p)) throw InvalidArgument("negation applies only to propositions, got '" + p + "'");
    return leaf(NodeKind::neg_prop, std::move(p));
  }
  static Formula label(std::string x) {
    if (!is_label_name(x)) throw InvalidArgument("'" + x + "' is not a label symbol");
    return leaf(NodeKind::label, std::move(x));
  }
  static Formula disj(const Formula& l, const Formula& r) { return combine(NodeKind::disj, {}, {&l, &r}); }
  static Formula conj(const Formula& l, const Formula& r) { return combine(NodeKind::conj, {}, {&l, &r}); }
  static Formula diamond(const Formula& f) { return combine(NodeKind::diamond, {}, {&f}); }
  static Formula box(const Formula& f) { return combine(NodeKind::box, {}, {&f}); }
  static Formula mu(std::string x, const Formula& body) { return binder(NodeKind::mu, std::move(x), body); }
  static Formula nu(std::string x, const Formula& body) { return binder(NodeKind::nu, std::move(x), body); }

  NodeId root() const noexcept { return 0; }
  std::size_t size() const noexcept { return nodes_.size(); }

  const Node& node(NodeId id) const { return nodes_.at(id); }
  NodeKind kind(NodeId id) const { return node(id).kind; }
  const std::string& symbol(NodeId id) const { return node(id).symbol; }
  NodeId child(NodeId id, std::size_t i = 0) const { return node(id).children.at(i); }
  NodeId parent(NodeId id) const { return node(id).parent; }
  std::uint32_t height(NodeId id) const { return node(id).height; }

  std::span<const NodeId> children(NodeId id) const {
    const Node& n = node(id);
    return {n.children.data(), arity(n.kind)};
  }

  const OccurrencePath& path(NodeId id) const { return paths_.at(id); }

  std::optional<NodeId> find(const OccurrencePath& p) const {
    NodeId cur = root();
    for (std::uint32_t step : p) {
      if (step >= arity(kind(cur))) return std::nullopt;
      cur = child(cur, step);
    }
    return cur;
  }

  NodeId at(const OccurrencePath& p) const {
    auto id = find(p);
    if (!id) throw InvalidArgument("occurrence path does not address a node");
    return *id;
  }

  // True iff `anc` lies on the path from the root to `id` (inclusive).
  bool is_ancestor(NodeId anc, NodeId id) const {
    // Preorder layout: the subtree of anc is the contiguous range anc..anc+size-1.
    return id >= anc && id < anc + subtree_size(anc);
  }

  std::size_t subtree_size(NodeId id) const {
    std::size_t n = 1;
    for (NodeId c : children(id)) n += subtree_size(c);
    return n;
  }

  // The subtree rooted at `id` as a standalone formula.
  Formula subformula(NodeId id) const {
    Formula out;
    out.copy_subtree(*this, id, no_node);
    out.finish();
    return out;
  }

  // Copy of this formula with the symbol of the given nodes replaced.
  Formula with_symbols(const std::map<NodeId, std::string>& renames) const {
    Formula out = *this;
    for (const auto& [id, sym] : renames) out.nodes_.at(id).symbol = sym;
    return out;
  }

  // Copy with the subtree at `id` replaced by `replacement`.
  Formula replace(NodeId id, const Formula& replacement) const {
    Formula out;
    out.copy_replacing(*this, root(), no_node, id, replacement);
    out.finish();
    return out;
  }

  friend bool operator==(const Formula& a, const Formula& b) { return a.nodes_ == b.nodes_; }

 private:
  Formula() = default;

  static Formula leaf(NodeKind k, std::string sym) {
    Formula f;
    f.nodes_.push_back(Node{k, std::move(sym)});
    f.finish();
    return f;
  }

  static Formula binder(NodeKind k, std::string x, const Formula& body) {
    if (!is_label_name(x)) throw InvalidArgument("'" + x + "' is not a label symbol");
    return combine(k, std::move(x), {&body});
  }

  static Formula combine(NodeKind k, std::string sym, std::initializer_list<const Formula*> parts) {
    Formula f;
    f.nodes_.push_back(Node{k, std::move(sym)});
    std::size_t i = 0;
    for (const Formula* part : parts) {
      const NodeId c = f.copy_subtree(*part, part->root(), 0);
      f.nodes_[0].children[i++] = c;
    }
    f.finish();
    return f;
  }

  NodeId copy_subtree(const Formula& src, NodeId id, NodeId parent) {
    const NodeId me = static_cast<NodeId>(nodes_.size());
    nodes_.push_back(Node{src.kind(id), src.symbol(id)});
    nodes_[me].parent = parent;
    std::size_t i = 0;
    for (NodeId c : src.children(id)) {
      const NodeId copied = copy_subtree(src, c, me);
      nodes_[me].children[i++] = copied;
    }
    return me;
  }

  NodeId copy_replacing(const Formula& src, NodeId id, NodeId parent, NodeId target,
                        const Formula& replacement) {
    if (id == target) {
      const NodeId me = copy_subtree(replacement, replacement.root(), parent);
      return me;
    }
    const NodeId me = static_cast<NodeId>(nodes_.size());
    nodes_.push_back(Node{src.kind(id), src.symbol(id)});
    nodes_[me].parent = parent;
    std::size_t i = 0;
    for (NodeId c : src.children(id)) {
      const NodeId copied = copy_replacing(src, c, me, target, replacement);
      nodes_[me].children[i++] = copied;
    }
    return me;
  }

  // Recomputes parents, heights and paths. Nodes are in preorder, so children
  // always have larger ids than their parent.
  void finish() {
    nodes_[0].parent = no_node;
    paths_.assign(nodes_.size(), {});
    for (NodeId id = 0; id < nodes_.size(); ++id) {
      const std::size_t n = arity(nodes_[id].kind);
      for (std::size_t i = 0; i < n; ++i) {
        const NodeId c = nodes_[id].children[i];
        nodes_[c].parent = id;
        paths_[c] = paths_[id];
        paths_[c].push_back(static_cast<std::uint32_t>(i));
      }
    }
    for (NodeId id = static_cast<NodeId>(nodes_.size()); id-- > 0;) {
      std::uint32_t h = 0;
      const std::size_t n = arity(nodes_[id].kind);
      for (std::size_t i = 0; i < n; ++i) h = std::max(h, nodes_[nodes_[id].children[i]].height + 1);
      nodes_[id].height = h;
    }
  }

  std::vector<Node> nodes_;
  std::vector<OccurrencePath> paths_;
};

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

class FormulaParser {
 public:
  explicit FormulaParser(std::string_view text) : text_(text) {}

  Formula parse() {
    Formula f = parse_or();
    skip_space();
    if (pos_ != text_.size()) throw ParseError("unexpected '" + std::string(1, text_[pos_]) + "'", pos_);
    return f;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(std::string_view tok) {
    skip_space();
    if (text_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

  // Peeks an identifier without consuming it.
  std::string_view peek_ident() {
    skip_space();
    std::size_t end = pos_;
    if (end < text_.size() && std::isalpha(static_cast<unsigned char>(text_[end])))
      while (end < text_.size() && ident_char(text_[end])) ++end;
    return text_.substr(pos_, end - pos_);
  }

  std::string take_label(const char* context) {
    const std::size_t at = pos_;
    std::string_view id = peek_ident();
    if (id.empty()) throw ParseError(std::string("expected a label ") + context, at);
    if (!is_label_name(id))
      throw ParseError("'" + std::string(id) + "' is not a label symbol (labels start uppercase)", pos_);
    pos_ += id.size();
    return std::string(id);
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (accept("|")) f = Formula::disj(f, parse_and());
    return f;
  }

  Formula parse_and() {
    Formula f = parse_unary();
    while (accept("&")) f = Formula::conj(f, parse_unary());
    return f;
  }

  Formula parse_unary() {
    skip_space();
    const std::size_t at = pos_;
    if (accept("~")) {
      skip_space();
      const std::size_t arg = pos_;
      std::string_view id = peek_ident();
      if (!is_prop_name(id)) throw ParseError("negation applies only to proposition symbols", arg);
      pos_ += id.size();
      return Formula::neg_prop(std::string(id));
    }
    if (accept("<>")) return Formula::diamond(parse_unary());
    if (accept("[]")) return Formula::box(parse_unary());
    if (accept("(")) {
      Formula f = parse_or();
      if (!accept(")")) throw ParseError("expected ')'", pos_);
      return f;
    }
    std::string_view id = peek_ident();
    if (id == "mu" || id == "nu") {
      pos_ += id.size();
      const bool least = id == "mu";
      std::string x = take_label(least ? "after 'mu'" : "after 'nu'");
      if (!accept(".")) throw ParseError("expected '.' after fixpoint label", pos_);
      Formula body = parse_or();
      return least ? Formula::mu(std::move(x), body) : Formula::nu(std::move(x), body);
    }
    if (id.empty()) {
      if (at >= text_.size()) throw ParseError("unexpected end of formula", at);
      throw ParseError("unexpected '" + std::string(1, text_[at]) + "'", at);
    }
    pos_ += id.size();
    if (is_prop_name(id)) return Formula::prop(std::string(id));
    if (is_label_name(id)) return Formula::label(std::string(id));
    throw ParseError("'" + std::string(id) + "' is neither a proposition nor a label", at);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Formula parse_formula(std::string_view text) { return detail::FormulaParser(text).parse(); }

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline void print_node(const Formula& f, NodeId id, int min_prec, bool tail, std::string& out) {
  // Precedence: 0 = "|", 1 = "&", 2 = prefix operators and atoms.
  const NodeKind k = f.kind(id);
  switch (k) {
    case NodeKind::prop:
    case NodeKind::label:
      out += f.symbol(id);
      return;
    case NodeKind::neg_prop:
      out += '~';
      out += f.symbol(id);
      return;
    case NodeKind::diamond:
    case NodeKind::box:
      out += k == NodeKind::diamond ? "<>" : "[]";
      print_node(f, f.child(id), 2, tail, out);
      return;
    case NodeKind::mu:
    case NodeKind::nu: {
      // The body extends maximally to the right, so a binder that is not the
      // last thing in its group must be parenthesized.
      if (!tail) out += '(';
      out += k == NodeKind::mu ? "mu " : "nu ";
      out += f.symbol(id);
      out += ". ";
      const NodeId body = f.child(id);
      if (is_binary(f.kind(body))) {
        out += '(';
        print_node(f, body, 0, true, out);
        out += ')';
      } else {
        print_node(f, body, 0, true, out);
      }
      if (!tail) out += ')';
      return;
    }
    case NodeKind::disj:
    case NodeKind::conj: {
      const int prec = k == NodeKind::disj ? 0 : 1;
      const bool wrap = prec < min_prec;
      if (wrap) {
        out += '(';
        tail = true;
      }
      print_node(f, f.child(id, 0), prec, false, out);
      out += k == NodeKind::disj ? " | " : " & ";
      // Left associative: a right operand at the same level needs parentheses.
      print_node(f, f.child(id, 1), prec + 1, tail, out);
      if (wrap) out += ')';
      return;
    }
  }
}

}  // namespace detail

inline std::string to_string(const Formula& f) {
  std::string out;
  detail::print_node(f, f.root(), 0, true, out);
  return out;
}

inline std::string print_formula(const Formula& f) { return to_string(f); }

inline std::string to_string(const OccurrencePath& p) {
  std::string out = "[";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(p[i]);
  }
  return out + "]";
}

// ---------------------------------------------------------------------------
// Occurrences, binding, normal form

// subf: every node of the syntax tree in preorder.
inline OccurrenceSet occurrences(const Formula& f) {
  OccurrenceSet out;
  for (NodeId id = 0; id < f.size(); ++id) out.push_back(f.path(id));
  return out;
}

inline std::vector<NodeId> fixpoint_nodes(const Formula& f) {
  std::vector<NodeId> out;
  for (NodeId id = 0; id < f.size(); ++id)
    if (is_fixpoint(f.kind(id))) out.push_back(id);
  return out;
}

// subf_mu_nu: the mu/nu occurrences in preorder.
inline OccurrenceSet fixpoint_occurrences(const Formula& f) {
  OccurrenceSet out;
  for (NodeId id : fixpoint_nodes(f)) out.push_back(f.path(id));
  return out;
}

// Nearest enclosing mu/nu binding the label at `id`, or no_node if free.
inline NodeId binder_of(const Formula& f, NodeId id) {
  if (f.kind(id) != NodeKind::label) throw InvalidArgument("occurrence is not a label");
  const std::string& x = f.symbol(id);
  for (NodeId cur = f.parent(id); cur != no_node; cur = f.parent(cur))
    if (is_fixpoint(f.kind(cur)) && f.symbol(cur) == x) return cur;
  return no_node;
}

inline std::set<std::string> free_labels(const Formula& f) {
  std::set<std::string> out;
  for (NodeId id = 0; id < f.size(); ++id)
    if (f.kind(id) == NodeKind::label && binder_of(f, id) == no_node) out.insert(f.symbol(id));
  return out;
}

inline bool is_sentence(const Formula& f) { return free_labels(f).empty(); }

// rf(X) for the label occurrence at `label_occ`.
inline OccurrencePath reference_formula(const Formula& f, const OccurrencePath& label_occ) {
  const NodeId id = f.at(label_occ);
  if (f.kind(id) != NodeKind::label) throw InvalidArgument("occurrence " + to_string(label_occ) + " is not a label");
  const NodeId b = binder_of(f, id);
  if (b == no_node) throw InvalidArgument("label '" + f.symbol(id) + "' occurs free");
  return f.path(b);
}

inline bool is_normal_form(const Formula& f) {
  std::set<std::string> bound;
  for (NodeId id : fixpoint_nodes(f))
    if (!bound.insert(f.symbol(id)).second) return false;
  return true;
}

// Renames binders (and the atoms they bind) so that each label is bound by at
// most one mu/nu occurrence. The first binder of a label in preorder keeps
// its name; later ones become <label><k> for the smallest k >= 1 not used
// anywhere in the formula.
inline Formula to_normal_form(const Formula& f) {
  std::set<std::string> used;
  for (NodeId id = 0; id < f.size(); ++id)
    if (f.kind(id) == NodeKind::label || is_fixpoint(f.kind(id))) used.insert(f.symbol(id));

  std::set<std::string> seen;
  std::map<NodeId, std::string> new_name;  // binder -> fresh label
  for (NodeId id : fixpoint_nodes(f)) {
    const std::string& x = f.symbol(id);
    if (seen.insert(x).second) continue;
    std::string fresh;
    for (std::size_t k = 1;; ++k) {
      fresh = x + std::to_string(k);
      if (!used.contains(fresh)) break;
    }
    used.insert(fresh);
    new_name.emplace(id, fresh);
  }
  if (new_name.empty()) return f;

  std::map<NodeId, std::string> renames = new_name;
  for (NodeId id = 0; id < f.size(); ++id) {
    if (f.kind(id) != NodeKind::label) continue;
    auto it = new_name.find(binder_of(f, id));
    if (it != new_name.end()) renames.emplace(id, it->second);
  }
  return f.with_symbols(renames);
}

}  // namespace mucalc
