/* Copyright 2026 The delk Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef DELK_FORMULA_HPP
#define DELK_FORMULA_HPP

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace delk {

inline std::size_t hash_combine(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

/// An agent is identified by a natural number. In the muddy-children
/// theory agents are the children 1..c+1.
struct Agent {
  std::uint32_t id = 0;

  friend bool operator==(const Agent&, const Agent&) = default;
  friend bool operator<(const Agent& a, const Agent& b) { return a.id < b.id; }
};

/// A nonempty set of agents kept strictly increasing by id, so that
/// structurally equal groups produce structurally equal expansions.
class Group {
 public:
  explicit Group(std::vector<Agent> members) : members_(std::move(members)) {
    if (members_.empty()) throw std::invalid_argument("group: empty");
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end(),
                               [](Agent a, Agent b) { return a.id == b.id; }),
                   members_.end());
  }
  Group(std::initializer_list<std::uint32_t> ids)
      : Group([&] {
          std::vector<Agent> ms;
          for (auto id : ids) ms.push_back(Agent{id});
          return ms;
        }()) {}

  /// The group {1, ..., n}.
  static Group range(std::uint32_t n) {
    std::vector<Agent> ms;
    for (std::uint32_t i = 1; i <= n; ++i) ms.push_back(Agent{i});
    return Group(std::move(ms));
  }

  const std::vector<Agent>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool contains(Agent a) const {
    return std::binary_search(members_.begin(), members_.end(), a);
  }

  std::size_t hash() const {
    std::size_t h = 0x517cc1b7;
    for (auto a : members_) h = hash_combine(h, a.id);
    return h;
  }

  friend bool operator==(const Group&, const Group&) = default;

 private:
  std::vector<Agent> members_;
};

/// Events are epistemic when they change only what agents know, never
/// the physical world. Ontic exists so the kernel's event-kind gate has
/// something to reject; every event the muddy theory declares is
/// epistemic.
enum class EventKind { Epistemic, Ontic };

struct EventSym {
  std::string name;
  EventKind kind = EventKind::Epistemic;

  std::size_t hash() const {
    return hash_combine(std::hash<std::string>{}(name),
                        static_cast<std::size_t>(kind));
  }
  friend bool operator==(const EventSym&, const EventSym&) = default;
};

/// The progress event [*] (Father's repeated injunction).
inline EventSym star_event() { return EventSym{"star", EventKind::Epistemic}; }
/// The initial event [.] (Father's opening announcement).
inline EventSym point_event() { return EventSym{"point", EventKind::Epistemic}; }

/// Atomic propositions. Mu(i), Lambda(j) and Eps(j) describe the
/// physical state (who is muddy, at-least-j muddy, exactly-j muddy);
/// Named atoms are free atoms carrying an explicit physicality flag.
struct AtomKind {
  enum class Tag { Mu, Lambda, Eps, Named };

  Tag tag = Tag::Named;
  std::uint32_t index = 0;  // Mu: agent id; Lambda/Eps: threshold j
  std::string name;         // Named only
  bool physical = false;    // Named only; Mu/Lambda/Eps are physical

  bool is_physical() const { return tag != Tag::Named || physical; }

  std::size_t hash() const {
    std::size_t h = hash_combine(static_cast<std::size_t>(tag), index);
    h = hash_combine(h, std::hash<std::string>{}(name));
    return hash_combine(h, physical ? 1 : 2);
  }
  friend bool operator==(const AtomKind&, const AtomKind&) = default;
};

enum class Conn {
  True,
  False,
  Atom,
  Not,
  And,
  Or,
  Imp,
  K,    // K_i
  E,    // E_G
  C,    // C_G
  Box,  // [event]
};

/// Immutable formula handle with structural equality. Nodes are shared
/// and carry a precomputed hash, so equality is cheap on the heavily
/// shared trees proof generation produces. There is no Iff node: a
/// biconditional is expanded to the conjunction of both implications at
/// construction time.
class Formula {
 public:
  struct Node;
  using Ptr = std::shared_ptr<const Node>;

  struct Node {
    Conn tag;
    AtomKind atom{};
    Agent agent{};
    std::shared_ptr<const Group> group{};
    EventSym event{};
    Ptr left{};
    Ptr right{};
    std::size_t hash = 0;
  };

  Formula() = default;  // empty handle; only valid after assignment

  static Formula truth() { return leaf(Conn::True); }
  static Formula falsity() { return leaf(Conn::False); }

  static Formula atom(AtomKind k) {
    Node n{Conn::Atom};
    n.atom = std::move(k);
    return finish(std::move(n));
  }
  static Formula mu(Agent i) {
    return atom(AtomKind{AtomKind::Tag::Mu, i.id, "", false});
  }
  static Formula lambda(std::uint32_t j) {
    return atom(AtomKind{AtomKind::Tag::Lambda, j, "", false});
  }
  static Formula eps(std::uint32_t j) {
    return atom(AtomKind{AtomKind::Tag::Eps, j, "", false});
  }
  static Formula named(std::string name, bool physical = false) {
    return atom(AtomKind{AtomKind::Tag::Named, 0, std::move(name), physical});
  }

  static Formula neg(Formula f) {
    Node n{Conn::Not};
    n.left = f.node_;
    return finish(std::move(n));
  }
  static Formula conj(Formula a, Formula b) { return binary(Conn::And, a, b); }
  static Formula disj(Formula a, Formula b) { return binary(Conn::Or, a, b); }
  static Formula imp(Formula a, Formula b) { return binary(Conn::Imp, a, b); }
  /// a <-> b, eagerly expanded to (a -> b) & (b -> a).
  static Formula iff(Formula a, Formula b) {
    return conj(imp(a, b), imp(b, a));
  }

  static Formula knows(Agent i, Formula f) {
    Node n{Conn::K};
    n.agent = i;
    n.left = f.node_;
    return finish(std::move(n));
  }
  static Formula everyone(const Group& g, Formula f) {
    Node n{Conn::E};
    n.group = std::make_shared<Group>(g);
    n.left = f.node_;
    return finish(std::move(n));
  }
  static Formula common(const Group& g, Formula f) {
    Node n{Conn::C};
    n.group = std::make_shared<Group>(g);
    n.left = f.node_;
    return finish(std::move(n));
  }
  static Formula box(EventSym e, Formula f) {
    Node n{Conn::Box};
    n.event = std::move(e);
    n.left = f.node_;
    return finish(std::move(n));
  }

  bool valid() const { return node_ != nullptr; }
  Conn tag() const { return node_->tag; }
  const AtomKind& atom_kind() const { return node_->atom; }
  Agent agent() const { return node_->agent; }
  const Group& group() const { return *node_->group; }
  const EventSym& event() const { return node_->event; }
  Formula child() const { return Formula(node_->left); }  // unary/modal
  Formula lhs() const { return Formula(node_->left); }
  Formula rhs() const { return Formula(node_->right); }
  std::size_t hash() const { return node_->hash; }
  const Node* raw() const { return node_.get(); }

  bool is_imp() const { return node_->tag == Conn::Imp; }
  bool is_and() const { return node_->tag == Conn::And; }

  friend bool operator==(const Formula& a, const Formula& b) {
    return equal_nodes(a.node_.get(), b.node_.get());
  }
  friend bool operator!=(const Formula& a, const Formula& b) {
    return !(a == b);
  }

 private:
  explicit Formula(Ptr p) : node_(std::move(p)) {}

  static Formula leaf(Conn c) { return finish(Node{c}); }

  static Formula binary(Conn c, const Formula& a, const Formula& b) {
    Node n{c};
    n.left = a.node_;
    n.right = b.node_;
    return finish(std::move(n));
  }

  static Formula finish(Node n) {
    std::size_t h = static_cast<std::size_t>(n.tag) * 0x9e3779b9;
    switch (n.tag) {
      case Conn::Atom:
        h = hash_combine(h, n.atom.hash());
        break;
      case Conn::K:
        h = hash_combine(h, n.agent.id);
        break;
      case Conn::E:
      case Conn::C:
        h = hash_combine(h, n.group->hash());
        break;
      case Conn::Box:
        h = hash_combine(h, n.event.hash());
        break;
      default:
        break;
    }
    if (n.left) h = hash_combine(h, n.left->hash);
    if (n.right) h = hash_combine(h, n.right->hash);
    n.hash = h;
    return Formula(std::make_shared<const Node>(std::move(n)));
  }

  static bool equal_nodes(const Node* a, const Node* b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->hash != b->hash || a->tag != b->tag) return false;
    switch (a->tag) {
      case Conn::Atom:
        if (!(a->atom == b->atom)) return false;
        break;
      case Conn::K:
        if (!(a->agent == b->agent)) return false;
        break;
      case Conn::E:
      case Conn::C:
        if (!(*a->group == *b->group)) return false;
        break;
      case Conn::Box:
        if (!(a->event == b->event)) return false;
        break;
      default:
        break;
    }
    return equal_nodes(a->left.get(), b->left.get()) &&
           equal_nodes(a->right.get(), b->right.get());
  }

  Ptr node_;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};
struct FormulaEq {
  bool operator()(const Formula& a, const Formula& b) const { return a == b; }
};

/// k nested [event] applications around body; [e]^0 f is f itself.
inline Formula iter_box(const EventSym& e, std::uint32_t k, Formula body) {
  for (std::uint32_t n = 0; n < k; ++n) body = Formula::box(e, body);
  return body;
}

/// n nested E_G applications around body.
inline Formula iter_e(const Group& g, std::uint32_t n, Formula body) {
  for (std::uint32_t k = 0; k < n; ++k) body = Formula::everyone(g, body);
  return body;
}

/// The conjunction of K_i body over the group's members, right-nested in
/// canonical member order: K_{i1} f & (K_{i2} f & ... K_{in} f). A
/// singleton group yields a bare K with no And node.
inline Formula def_e_expansion(const Group& g, const Formula& body) {
  const auto& ms = g.members();
  Formula acc = Formula::knows(ms.back(), body);
  for (auto it = ms.rbegin() + 1; it != ms.rend(); ++it)
    acc = Formula::conj(Formula::knows(*it, body), acc);
  return acc;
}

/// True iff the formula speaks only about the physical world: physical
/// atoms, the constants, and boolean connectives. Any modality makes a
/// formula non-physical.
inline bool is_physical(const Formula& f) {
  switch (f.tag()) {
    case Conn::True:
    case Conn::False:
      return true;
    case Conn::Atom:
      return f.atom_kind().is_physical();
    case Conn::Not:
      return is_physical(f.child());
    case Conn::And:
    case Conn::Or:
    case Conn::Imp:
      return is_physical(f.lhs()) && is_physical(f.rhs());
    default:
      return false;
  }
}

/// The boolean shape of a formula: every maximal atom- or modality-headed
/// subformula becomes a placeholder (structurally equal subtrees share
/// one), leaving only placeholders, constants and boolean connectives.
/// Stored as a postorder program so valuations evaluate with a small
/// stack machine.
class Skeleton {
 public:
  enum class Op : std::uint8_t { True, False, Var, Not, And, Or, Imp };
  struct Instr {
    Op op;
    std::uint32_t var = 0;
  };

  static Skeleton of(const Formula& f) {
    Skeleton s;
    std::unordered_map<Formula, std::uint32_t, FormulaHash, FormulaEq> seen;
    s.build(f, seen);
    std::size_t depth = 0, high = 0;
    for (const auto& in : s.program_) {
      if (in.op == Op::Not)
        ;
      else if (in.op == Op::And || in.op == Op::Or || in.op == Op::Imp)
        --depth;
      else
        high = std::max(high, ++depth);
    }
    if (high >= 256) throw std::length_error("skeleton: formula too deep");
    return s;
  }

  std::size_t var_count() const { return binding_.size(); }
  const std::vector<Formula>& binding() const { return binding_; }
  const std::vector<Instr>& program() const { return program_; }

  /// Evaluates under the valuation where placeholder v is bit v of mask.
  bool eval(std::uint64_t mask) const {
    bool stack[256];
    std::size_t top = 0;
    for (const auto& in : program_) {
      switch (in.op) {
        case Op::True:
          stack[top++] = true;
          break;
        case Op::False:
          stack[top++] = false;
          break;
        case Op::Var:
          stack[top++] = (mask >> in.var) & 1;
          break;
        case Op::Not:
          stack[top - 1] = !stack[top - 1];
          break;
        case Op::And:
          stack[top - 2] = stack[top - 2] && stack[top - 1];
          --top;
          break;
        case Op::Or:
          stack[top - 2] = stack[top - 2] || stack[top - 1];
          --top;
          break;
        case Op::Imp:
          stack[top - 2] = !stack[top - 2] || stack[top - 1];
          --top;
          break;
      }
    }
    return stack[0];
  }

  /// True on every valuation of the placeholders.
  bool tautology() const {
    const std::uint64_t lim = std::uint64_t{1} << var_count();
    for (std::uint64_t mask = 0; mask < lim; ++mask)
      if (!eval(mask)) return false;
    return true;
  }

  /// Substitutes the binding back into the shape, reproducing the
  /// original formula.
  Formula substitute() const {
    std::vector<Formula> stack;
    for (const auto& in : program_) {
      switch (in.op) {
        case Op::True:
          stack.push_back(Formula::truth());
          break;
        case Op::False:
          stack.push_back(Formula::falsity());
          break;
        case Op::Var:
          stack.push_back(binding_[in.var]);
          break;
        case Op::Not:
          stack.back() = Formula::neg(stack.back());
          break;
        default: {
          Formula b = stack.back();
          stack.pop_back();
          Formula a = stack.back();
          stack.back() = in.op == Op::And   ? Formula::conj(a, b)
                         : in.op == Op::Or  ? Formula::disj(a, b)
                                            : Formula::imp(a, b);
        }
      }
    }
    return stack.back();
  }

 private:
  void build(const Formula& f,
             std::unordered_map<Formula, std::uint32_t, FormulaHash,
                                FormulaEq>& seen) {
    switch (f.tag()) {
      case Conn::True:
        program_.push_back({Op::True});
        return;
      case Conn::False:
        program_.push_back({Op::False});
        return;
      case Conn::Not:
        build(f.child(), seen);
        program_.push_back({Op::Not});
        return;
      case Conn::And:
      case Conn::Or:
      case Conn::Imp:
        build(f.lhs(), seen);
        build(f.rhs(), seen);
        program_.push_back({f.tag() == Conn::And  ? Op::And
                            : f.tag() == Conn::Or ? Op::Or
                                                  : Op::Imp});
        return;
      default: {
        auto [it, fresh] =
            seen.emplace(f, static_cast<std::uint32_t>(binding_.size()));
        if (fresh) binding_.push_back(f);
        program_.push_back({Op::Var, it->second});
        return;
      }
    }
  }

  std::vector<Instr> program_;
  std::vector<Formula> binding_;
};

}  // namespace delk

#endif  // DELK_FORMULA_HPP
