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

#ifndef DELK_KERNEL_HPP
#define DELK_KERNEL_HPP

#include <functional>
#include <map>
#include <unordered_set>
#include <variant>

#include "delk/formula.hpp"

namespace delk {

// ---------------------------------------------------------------------------
// Rules

enum class RuleTag {
  Classical,
  MP,
  K_K,
  T_K,
  Gen_K,
  DefE_Fwd,
  DefE_Bwd,
  FixPoint_C,
  GFP_C,
  K_Box,
  T_Box,
  Gen_Box,
  KT1,
  TheoryAxiom,
};

inline const char* rule_tag_name(RuleTag t) {
  switch (t) {
    case RuleTag::Classical: return "classical";
    case RuleTag::MP: return "mp";
    case RuleTag::K_K: return "k_k";
    case RuleTag::T_K: return "t_k";
    case RuleTag::Gen_K: return "gen_k";
    case RuleTag::DefE_Fwd: return "def_e_fwd";
    case RuleTag::DefE_Bwd: return "def_e_bwd";
    case RuleTag::FixPoint_C: return "fixpoint_c";
    case RuleTag::GFP_C: return "gfp_c";
    case RuleTag::K_Box: return "k_box";
    case RuleTag::T_Box: return "t_box";
    case RuleTag::Gen_Box: return "gen_box";
    case RuleTag::KT1: return "kt1";
    case RuleTag::TheoryAxiom: return "axiom";
  }
  return "?";
}

/// Argument of a theory-axiom schema instance: a natural number (also
/// used for agent ids), an event, or a formula.
using AxiomArg = std::variant<std::uint64_t, EventSym, Formula>;
using AxiomArgs = std::vector<AxiomArg>;

/// A rule application with its schema parameters. Inert data: building a
/// Rule asserts nothing, only the kernel turns one into a Judgment.
struct Rule {
  RuleTag tag = RuleTag::Classical;
  Agent agent{};
  EventSym event{};
  std::shared_ptr<const Group> group{};
  Formula phi{}, psi{}, rho{};
  std::string schema;
  AxiomArgs args;

  std::size_t arity() const {
    switch (tag) {
      case RuleTag::MP: return 2;
      case RuleTag::Gen_K:
      case RuleTag::Gen_Box:
      case RuleTag::GFP_C: return 1;
      default: return 0;
    }
  }

  static Rule classical(Formula f) {
    Rule r{RuleTag::Classical};
    r.phi = std::move(f);
    return r;
  }
  static Rule mp() { return Rule{RuleTag::MP}; }
  static Rule k_k(Agent i, Formula phi, Formula psi) {
    Rule r{RuleTag::K_K};
    r.agent = i;
    r.phi = std::move(phi);
    r.psi = std::move(psi);
    return r;
  }
  static Rule t_k(Agent i, Formula phi) {
    Rule r{RuleTag::T_K};
    r.agent = i;
    r.phi = std::move(phi);
    return r;
  }
  static Rule gen_k(Agent i) {
    Rule r{RuleTag::Gen_K};
    r.agent = i;
    return r;
  }
  static Rule def_e_fwd(const Group& g, Formula phi) {
    Rule r{RuleTag::DefE_Fwd};
    r.group = std::make_shared<Group>(g);
    r.phi = std::move(phi);
    return r;
  }
  static Rule def_e_bwd(const Group& g, Formula phi) {
    Rule r{RuleTag::DefE_Bwd};
    r.group = std::make_shared<Group>(g);
    r.phi = std::move(phi);
    return r;
  }
  static Rule fixpoint_c(const Group& g, Formula phi) {
    Rule r{RuleTag::FixPoint_C};
    r.group = std::make_shared<Group>(g);
    r.phi = std::move(phi);
    return r;
  }
  static Rule gfp_c(const Group& g, Formula phi, Formula rho) {
    Rule r{RuleTag::GFP_C};
    r.group = std::make_shared<Group>(g);
    r.phi = std::move(phi);
    r.rho = std::move(rho);
    return r;
  }
  static Rule k_box(EventSym e, Formula phi, Formula psi) {
    Rule r{RuleTag::K_Box};
    r.event = std::move(e);
    r.phi = std::move(phi);
    r.psi = std::move(psi);
    return r;
  }
  static Rule t_box(EventSym e, Formula phi) {
    Rule r{RuleTag::T_Box};
    r.event = std::move(e);
    r.phi = std::move(phi);
    return r;
  }
  static Rule gen_box(EventSym e) {
    Rule r{RuleTag::Gen_Box};
    r.event = std::move(e);
    return r;
  }
  static Rule kt1(Agent i, EventSym e, Formula phi) {
    Rule r{RuleTag::KT1};
    r.agent = i;
    r.event = std::move(e);
    r.phi = std::move(phi);
    return r;
  }
  static Rule theory_axiom(std::string schema, AxiomArgs args) {
    Rule r{RuleTag::TheoryAxiom};
    r.schema = std::move(schema);
    r.args = std::move(args);
    return r;
  }
};

// ---------------------------------------------------------------------------
// Errors

enum class CheckErrorKind {
  NotTautology,
  BudgetExceeded,
  RuleMismatch,
  EventKind,
  Admission,
  UnknownSchema,
  Arity,
  BadArgument,
};

inline const char* check_error_kind_name(CheckErrorKind k) {
  switch (k) {
    case CheckErrorKind::NotTautology: return "NotTautology";
    case CheckErrorKind::BudgetExceeded: return "BudgetExceeded";
    case CheckErrorKind::RuleMismatch: return "RuleMismatch";
    case CheckErrorKind::EventKind: return "EventKind";
    case CheckErrorKind::Admission: return "Admission";
    case CheckErrorKind::UnknownSchema: return "UnknownSchema";
    case CheckErrorKind::Arity: return "Arity";
    case CheckErrorKind::BadArgument: return "BadArgument";
  }
  return "?";
}

class CheckError : public std::runtime_error {
 public:
  CheckError(CheckErrorKind kind, std::string message)
      : std::runtime_error(std::string(check_error_kind_name(kind)) + ": " +
                           message),
        kind(kind) {}

  CheckErrorKind kind;
  /// Child indices from the root of the tree under check; empty when the
  /// failure happened at the root or outside check_tree.
  std::vector<std::size_t> path;
  std::string rule;      // name of the offending rule, when known
  Formula expected{};    // recomputed conclusion (RuleMismatch in trees)
  Formula found{};       // stored conclusion
};

// ---------------------------------------------------------------------------
// Theories

/// A named bundle of axiom schemas plus the events it declares. Each
/// schema maps instance arguments to a formula and acts as its own
/// admission predicate by throwing CheckError(Admission) on arguments it
/// rejects. Every admitted instance stays recorded in the proof tree
/// node that used it, so proofs are auditable for the instances they
/// relied on.
class Theory {
 public:
  using Schema = std::function<Formula(const AxiomArgs&)>;

  explicit Theory(std::string name) : name_(std::move(name)) {}

  const std::string& name() const { return name_; }

  void declare_event(EventSym e) { events_.push_back(std::move(e)); }
  void define_schema(std::string name, Schema fn) {
    schemas_.emplace(std::move(name), std::move(fn));
  }

  const std::vector<EventSym>& events() const { return events_; }
  const EventSym* find_event(const std::string& name) const {
    for (const auto& e : events_)
      if (e.name == name) return &e;
    return nullptr;
  }

  bool has_schema(const std::string& name) const {
    return schemas_.count(name) != 0;
  }

  Formula instantiate(const std::string& schema, const AxiomArgs& args) const {
    auto it = schemas_.find(schema);
    if (it == schemas_.end())
      throw CheckError(CheckErrorKind::UnknownSchema,
                       "theory '" + name_ + "' has no schema '" + schema + "'");
    return it->second(args);
  }

 private:
  std::string name_;
  std::vector<EventSym> events_;
  std::map<std::string, Schema> schemas_;
};

/// A theory with no events and no axiom schemas.
inline const Theory& bare_theory() {
  static const Theory t("bare");
  return t;
}

// ---------------------------------------------------------------------------
// Proof trees and judgments

struct ProofTree;
using ProofTreePtr = std::shared_ptr<const ProofTree>;

/// One rule application. Plain data: anyone may build these (the script
/// loader does), and nothing about them is trusted until check_tree has
/// re-derived every node. Premises are shared, so a "tree" is really a
/// DAG and sizes stay polynomial where naive trees would explode.
struct ProofTree {
  Rule rule;
  std::vector<ProofTreePtr> premises;
  Formula conclusion;
};

/// A formula certified provable. Only the kernel can construct one; the
/// provenance tree is the accepted derivation.
class Judgment {
 public:
  const Formula& formula() const { return formula_; }
  const ProofTreePtr& provenance() const { return tree_; }

 private:
  friend class Kernel;
  Judgment(Formula f, ProofTreePtr t)
      : formula_(std::move(f)), tree_(std::move(t)) {}

  Formula formula_;
  ProofTreePtr tree_;
};

// ---------------------------------------------------------------------------
// Kernel

/// The trusted core. Everything else in this library is convenience code
/// whose output flows through these entry points.
class Kernel {
 public:
  static constexpr std::size_t kDefaultClassicalBudget = 24;

  /// Mints a zero-premise rule instance. Classical goes through
  /// classical() instead because of its tautology budget.
  static Judgment axiom(const Rule& rule, const Theory& theory) {
    if (rule.arity() != 0 || rule.tag == RuleTag::Classical)
      throw CheckError(CheckErrorKind::BadArgument,
                       std::string("axiom: rule '") + rule_tag_name(rule.tag) +
                           "' is not a zero-premise schema");
    Formula f = axiom_formula(rule, theory);
    return mint(rule, {}, std::move(f));
  }

  /// Accepts a formula whose boolean skeleton is a propositional
  /// tautology, decided by exhaustive valuation of the placeholders.
  static Judgment classical(const Formula& f,
                            std::size_t budget = kDefaultClassicalBudget) {
    check_classical(f, budget);
    return mint(Rule::classical(f), {}, f);
  }

  static Judgment mp(const Judgment& major, const Judgment& minor) {
    Formula f = mp_conclusion(major.formula(), minor.formula());
    return mint(Rule::mp(), {major.provenance(), minor.provenance()},
                std::move(f));
  }

  /// Generalization: Gen_K or Gen_Box applied to a minted judgment.
  static Judgment gen(const Rule& rule, const Judgment& premise) {
    Formula f = gen_conclusion(rule, premise.formula());
    return mint(rule, {premise.provenance()}, std::move(f));
  }

  /// The greatest-fixpoint rule: from rho -> phi & E_G rho conclude
  /// rho -> C_G phi.
  static Judgment gfp_c(const Group& g, const Formula& phi, const Formula& rho,
                        const Judgment& premise) {
    Rule rule = Rule::gfp_c(g, phi, rho);
    Formula f = gfp_conclusion(rule, premise.formula());
    return mint(std::move(rule), {premise.provenance()}, std::move(f));
  }

  /// Re-derives every node of an untrusted tree bottom-up and compares
  /// the recomputed conclusion with the stored one. The first failing
  /// node (leftmost-innermost) is reported with its path from the root.
  static Judgment check_tree(const ProofTreePtr& tree, const Theory& theory,
                             std::size_t budget = kDefaultClassicalBudget) {
    if (!tree)
      throw CheckError(CheckErrorKind::BadArgument, "check_tree: empty tree");
    std::unordered_set<const ProofTree*> verified;
    std::vector<std::size_t> path;
    check_node(*tree, theory, budget, verified, path);
    return Judgment(tree->conclusion, tree);
  }

 private:
  static Judgment mint(Rule rule, std::vector<ProofTreePtr> premises,
                       Formula conclusion) {
    auto node = std::make_shared<const ProofTree>(
        ProofTree{std::move(rule), std::move(premises), conclusion});
    return Judgment(std::move(conclusion), std::move(node));
  }

  static void check_classical(const Formula& f, std::size_t budget) {
    Skeleton sk = Skeleton::of(f);
    if (sk.var_count() > budget) {
      CheckError e(CheckErrorKind::BudgetExceeded,
                   "classical: " + std::to_string(sk.var_count()) +
                       " placeholders exceed budget of " +
                       std::to_string(budget));
      e.found = f;
      throw e;
    }
    if (!sk.tautology()) {
      CheckError e(CheckErrorKind::NotTautology,
                   "classical: skeleton is not a propositional tautology");
      e.found = f;
      throw e;
    }
  }

  static Formula mp_conclusion(const Formula& major, const Formula& minor) {
    if (!major.is_imp() || major.lhs() != minor) {
      CheckError e(CheckErrorKind::RuleMismatch,
                   "mp: major premise is not an implication whose antecedent "
                   "matches the minor premise");
      e.rule = "mp";
      throw e;
    }
    return major.rhs();
  }

  static Formula gen_conclusion(const Rule& rule, const Formula& premise) {
    if (rule.tag == RuleTag::Gen_K) return Formula::knows(rule.agent, premise);
    if (rule.tag == RuleTag::Gen_Box) return Formula::box(rule.event, premise);
    throw CheckError(CheckErrorKind::BadArgument,
                     std::string("gen: rule '") + rule_tag_name(rule.tag) +
                         "' is not a generalization rule");
  }

  static Formula gfp_conclusion(const Rule& rule, const Formula& premise) {
    const Group& g = *rule.group;
    Formula want = Formula::imp(
        rule.rho,
        Formula::conj(rule.phi, Formula::everyone(g, rule.rho)));
    if (premise != want) {
      CheckError e(CheckErrorKind::RuleMismatch,
                   "gfp_c: premise is not rho -> phi & E_G rho for the stated "
                   "parameters");
      e.rule = "gfp_c";
      e.expected = want;
      e.found = premise;
      throw e;
    }
    return Formula::imp(rule.rho, Formula::common(g, rule.phi));
  }

  static Formula axiom_formula(const Rule& r, const Theory& theory) {
    switch (r.tag) {
      case RuleTag::K_K:
        return Formula::imp(
            Formula::knows(r.agent, r.phi),
            Formula::imp(
                Formula::knows(r.agent, Formula::imp(r.phi, r.psi)),
                Formula::knows(r.agent, r.psi)));
      case RuleTag::T_K:
        return Formula::imp(Formula::knows(r.agent, r.phi), r.phi);
      case RuleTag::DefE_Fwd:
        return Formula::imp(Formula::everyone(*r.group, r.phi),
                            def_e_expansion(*r.group, r.phi));
      case RuleTag::DefE_Bwd:
        return Formula::imp(def_e_expansion(*r.group, r.phi),
                            Formula::everyone(*r.group, r.phi));
      case RuleTag::FixPoint_C:
        return Formula::imp(
            Formula::common(*r.group, r.phi),
            Formula::conj(r.phi,
                          Formula::everyone(
                              *r.group, Formula::common(*r.group, r.phi))));
      case RuleTag::K_Box:
        return Formula::imp(
            Formula::box(r.event, r.phi),
            Formula::imp(Formula::box(r.event, Formula::imp(r.phi, r.psi)),
                         Formula::box(r.event, r.psi)));
      case RuleTag::T_Box:
        return Formula::imp(Formula::box(r.event, r.phi), r.phi);
      case RuleTag::KT1: {
        if (r.event.kind != EventKind::Epistemic) {
          CheckError e(CheckErrorKind::EventKind,
                       "kt1: event '" + r.event.name +
                           "' is not purely epistemic");
          e.rule = "kt1";
          throw e;
        }
        return Formula::imp(
            Formula::knows(r.agent, Formula::box(r.event, r.phi)),
            Formula::box(r.event, Formula::knows(r.agent, r.phi)));
      }
      case RuleTag::TheoryAxiom:
        return theory.instantiate(r.schema, r.args);
      default:
        throw CheckError(CheckErrorKind::BadArgument,
                         std::string("axiom: unexpected rule '") +
                             rule_tag_name(r.tag) + "'");
    }
  }

  static void check_node(const ProofTree& node, const Theory& theory,
                         std::size_t budget,
                         std::unordered_set<const ProofTree*>& verified,
                         std::vector<std::size_t>& path) {
    if (verified.count(&node)) return;
    if (node.premises.size() != node.rule.arity()) {
      CheckError e(CheckErrorKind::Arity,
                   std::string(rule_tag_name(node.rule.tag)) + " expects " +
                       std::to_string(node.rule.arity()) + " premises, found " +
                       std::to_string(node.premises.size()));
      e.rule = rule_tag_name(node.rule.tag);
      e.path = path;
      throw e;
    }
    for (std::size_t i = 0; i < node.premises.size(); ++i) {
      if (!node.premises[i]) {
        CheckError e(CheckErrorKind::BadArgument, "missing premise");
        e.path = path;
        throw e;
      }
      path.push_back(i);
      check_node(*node.premises[i], theory, budget, verified, path);
      path.pop_back();
    }
    try {
      Formula expected = recompute(node, theory, budget);
      if (expected != node.conclusion) {
        CheckError e(CheckErrorKind::RuleMismatch,
                     std::string(rule_tag_name(node.rule.tag)) +
                         ": stored conclusion differs from the recomputed one");
        e.rule = rule_tag_name(node.rule.tag);
        e.expected = expected;
        e.found = node.conclusion;
        throw e;
      }
    } catch (CheckError& e) {
      if (e.path.empty()) e.path = path;
      if (e.rule.empty()) e.rule = rule_tag_name(node.rule.tag);
      throw;
    }
    verified.insert(&node);
  }

  static Formula recompute(const ProofTree& node, const Theory& theory,
                           std::size_t budget) {
    switch (node.rule.tag) {
      case RuleTag::Classical:
        if (node.rule.phi != node.conclusion) {
          CheckError e(CheckErrorKind::RuleMismatch,
                       "classical: rule parameter differs from conclusion");
          e.expected = node.rule.phi;
          e.found = node.conclusion;
          throw e;
        }
        check_classical(node.rule.phi, budget);
        return node.rule.phi;
      case RuleTag::MP:
        return mp_conclusion(node.premises[0]->conclusion,
                             node.premises[1]->conclusion);
      case RuleTag::Gen_K:
      case RuleTag::Gen_Box:
        return gen_conclusion(node.rule, node.premises[0]->conclusion);
      case RuleTag::GFP_C:
        return gfp_conclusion(node.rule, node.premises[0]->conclusion);
      default:
        return axiom_formula(node.rule, theory);
    }
  }
};

// ---------------------------------------------------------------------------
// DAG utilities

/// Visits each distinct node of a proof DAG once, premises first.
template <typename Fn>
void visit_proof(const ProofTreePtr& root, Fn&& fn) {
  std::unordered_set<const ProofTree*> seen;
  // Explicit stack: generated proofs can be deep in scenario size.
  std::vector<std::pair<const ProofTree*, std::size_t>> stack{{root.get(), 0}};
  if (!root) return;
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (seen.count(node)) {
      stack.pop_back();
      continue;
    }
    if (next < node->premises.size()) {
      const ProofTree* child = node->premises[next].get();
      ++next;
      if (child && !seen.count(child)) stack.push_back({child, 0});
      continue;
    }
    seen.insert(node);
    fn(*node);
    stack.pop_back();
  }
}

/// Number of distinct nodes in a proof DAG.
inline std::size_t proof_size(const ProofTreePtr& root) {
  std::size_t n = 0;
  visit_proof(root, [&](const ProofTree&) { ++n; });
  return n;
}
inline std::size_t proof_size(const Judgment& j) {
  return proof_size(j.provenance());
}

}  // namespace delk

#endif  // DELK_KERNEL_HPP
