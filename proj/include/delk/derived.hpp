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

// Proof-constructing combinators. Untrusted convenience code: every
// function here returns a judgment minted by the kernel, never a
// hand-built one. Each combinator realizes one step label of the lemma
// derivations in muddy.hpp.

#ifndef DELK_DERIVED_HPP
#define DELK_DERIVED_HPP

#include <span>

#include "delk/kernel.hpp"

namespace delk {

namespace detail {

inline void require(bool ok, const char* where, const char* what) {
  if (!ok)
    throw CheckError(CheckErrorKind::RuleMismatch,
                     std::string(where) + ": " + what);
}

inline std::pair<Formula, Formula> split_imp(const Judgment& j,
                                             const char* where) {
  require(j.formula().is_imp(), where, "premise is not an implication");
  return {j.formula().lhs(), j.formula().rhs()};
}

}  // namespace detail

/// From a -> b and b -> c, a -> c.
inline Judgment cut(const Judgment& ab, const Judgment& bc) {
  auto [a, b] = detail::split_imp(ab, "cut");
  auto [b2, c] = detail::split_imp(bc, "cut");
  detail::require(b == b2, "cut", "middle formulas differ");
  Judgment glue = Kernel::classical(
      Formula::imp(ab.formula(),
                   Formula::imp(bc.formula(), Formula::imp(a, c))));
  return Kernel::mp(Kernel::mp(glue, ab), bc);
}

/// From a -> b and a -> c, a -> b & c.
inline Judgment and_intro_imp(const Judgment& ab, const Judgment& ac) {
  auto [a, b] = detail::split_imp(ab, "and_intro_imp");
  auto [a2, c] = detail::split_imp(ac, "and_intro_imp");
  detail::require(a == a2, "and_intro_imp", "antecedents differ");
  Judgment glue = Kernel::classical(Formula::imp(
      ab.formula(),
      Formula::imp(ac.formula(), Formula::imp(a, Formula::conj(b, c)))));
  return Kernel::mp(Kernel::mp(glue, ab), ac);
}

inline Judgment and_elim_left(const Judgment& j) {
  auto [a, bc] = detail::split_imp(j, "and_elim_left");
  detail::require(bc.is_and(), "and_elim_left", "consequent is not And");
  Judgment glue = Kernel::classical(
      Formula::imp(j.formula(), Formula::imp(a, bc.lhs())));
  return Kernel::mp(glue, j);
}

inline Judgment and_elim_right(const Judgment& j) {
  auto [a, bc] = detail::split_imp(j, "and_elim_right");
  detail::require(bc.is_and(), "and_elim_right", "consequent is not And");
  Judgment glue = Kernel::classical(
      Formula::imp(j.formula(), Formula::imp(a, bc.rhs())));
  return Kernel::mp(glue, j);
}

/// From a -> b, (x -> a) -> (x -> b).
inline Judgment consequent_mono(const Formula& x, const Judgment& ab) {
  Judgment glue = Kernel::classical(Formula::imp(
      ab.formula(), Formula::imp(Formula::imp(x, ab.formula().lhs()),
                                 Formula::imp(x, ab.formula().rhs()))));
  return Kernel::mp(glue, ab);
}

/// From a -> b, K_i a -> K_i b (generalization plus the K axiom).
inline Judgment k_mono(Agent i, const Judgment& ab) {
  auto [a, b] = detail::split_imp(ab, "k_mono");
  Judgment boxed = Kernel::gen(Rule::gen_k(i), ab);
  Judgment kk = Kernel::axiom(Rule::k_k(i, a, b), bare_theory());
  // kk : K_i a -> (K_i(a->b) -> K_i b); swap to apply the boxed premise.
  Formula ka = Formula::knows(i, a);
  Formula kab = boxed.formula();
  Formula kb = Formula::knows(i, b);
  Judgment swap = Kernel::classical(Formula::imp(
      kk.formula(), Formula::imp(kab, Formula::imp(ka, kb))));
  return Kernel::mp(Kernel::mp(swap, kk), boxed);
}

/// From a -> b, [e] a -> [e] b.
inline Judgment box_mono(const EventSym& e, const Judgment& ab) {
  auto [a, b] = detail::split_imp(ab, "box_mono");
  Judgment boxed = Kernel::gen(Rule::gen_box(e), ab);
  Judgment kb = Kernel::axiom(Rule::k_box(e, a, b), bare_theory());
  Formula ba = Formula::box(e, a);
  Formula bab = boxed.formula();
  Formula bb = Formula::box(e, b);
  Judgment swap = Kernel::classical(Formula::imp(
      kb.formula(), Formula::imp(bab, Formula::imp(ba, bb))));
  return Kernel::mp(Kernel::mp(swap, kb), boxed);
}

/// From a -> b, [e]^k a -> [e]^k b; k = 0 returns the premise unchanged.
inline Judgment iter_box_mono(const EventSym& e, std::uint32_t k,
                              Judgment ab) {
  for (std::uint32_t n = 0; n < k; ++n) ab = box_mono(e, ab);
  return ab;
}

/// From a_i -> b_i for each member of a list, the implication between
/// the right-nested conjunctions of sources and targets.
inline Judgment conj_mono(std::span<const Judgment> parts) {
  detail::require(!parts.empty(), "conj_mono", "no premises");
  if (parts.size() == 1) return parts[0];
  std::vector<Formula> srcs, dsts;
  for (const auto& p : parts) {
    auto [a, b] = detail::split_imp(p, "conj_mono");
    srcs.push_back(a);
    dsts.push_back(b);
  }
  Formula src = srcs.back();
  for (std::size_t i = srcs.size() - 1; i-- > 0;)
    src = Formula::conj(srcs[i], src);
  std::function<Judgment(std::size_t, Formula)> step =
      [&](std::size_t idx, Formula rest_src) -> Judgment {
    if (idx + 1 == parts.size()) return parts[idx];
    Judgment head =
        cut(Kernel::classical(Formula::imp(rest_src, srcs[idx])), parts[idx]);
    Formula tail_src = rest_src.rhs();
    Judgment tail = cut(Kernel::classical(Formula::imp(rest_src, tail_src)),
                        step(idx + 1, tail_src));
    return and_intro_imp(head, tail);
  };
  (void)dsts;
  return step(0, src);
}

/// From a -> b and c -> d, a & c -> b & d.
inline Judgment conj_pair_mono(const Judgment& ab, const Judgment& cd) {
  Formula a = ab.formula().lhs(), c = cd.formula().lhs();
  Formula ac = Formula::conj(a, c);
  Judgment left = cut(Kernel::classical(Formula::imp(ac, a)), ab);
  Judgment right = cut(Kernel::classical(Formula::imp(ac, c)), cd);
  return and_intro_imp(left, right);
}

/// From a -> b, E_G a -> E_G b, through both directions of Def_E.
inline Judgment e_mono(const Group& g, const Judgment& ab) {
  auto [a, b] = detail::split_imp(ab, "e_mono");
  Judgment fwd = Kernel::axiom(Rule::def_e_fwd(g, a), bare_theory());
  std::vector<Judgment> parts;
  for (Agent i : g.members()) parts.push_back(k_mono(i, ab));
  Judgment zipped = conj_mono(parts);
  Judgment bwd = Kernel::axiom(Rule::def_e_bwd(g, b), bare_theory());
  return cut(cut(fwd, zipped), bwd);
}

/// K_i a & K_i b -> K_i (a & b).
inline Judgment k_and_dist(Agent i, const Formula& a, const Formula& b) {
  Formula ab = Formula::conj(a, b);
  Judgment pair =
      k_mono(i, Kernel::classical(Formula::imp(a, Formula::imp(b, ab))));
  Judgment kk = Kernel::axiom(Rule::k_k(i, b, ab), bare_theory());
  Formula ka = Formula::knows(i, a), kb = Formula::knows(i, b);
  Formula kab = Formula::knows(i, ab);
  Judgment glue = Kernel::classical(Formula::imp(
      pair.formula(),
      Formula::imp(kk.formula(),
                   Formula::imp(Formula::conj(ka, kb), kab))));
  return Kernel::mp(Kernel::mp(glue, pair), kk);
}

/// [e] a & [e] b -> [e] (a & b).
inline Judgment box_and_dist(const EventSym& e, const Formula& a,
                             const Formula& b) {
  Formula ab = Formula::conj(a, b);
  Judgment pair =
      box_mono(e, Kernel::classical(Formula::imp(a, Formula::imp(b, ab))));
  Judgment kb = Kernel::axiom(Rule::k_box(e, b, ab), bare_theory());
  Formula ba = Formula::box(e, a), bb = Formula::box(e, b);
  Formula bab = Formula::box(e, ab);
  Judgment glue = Kernel::classical(Formula::imp(
      pair.formula(),
      Formula::imp(kb.formula(),
                   Formula::imp(Formula::conj(ba, bb), bab))));
  return Kernel::mp(Kernel::mp(glue, pair), kb);
}

namespace detail {

/// Conjunction of boxes into box of conjunction, over a right-nested
/// list: [e]x_1 & ... & [e]x_n -> [e](x_1 & ... & x_n).
inline Judgment box_conj_collect(const EventSym& e,
                                 std::span<const Formula> xs) {
  if (xs.size() == 1) {
    Formula bx = Formula::box(e, xs[0]);
    return Kernel::classical(Formula::imp(bx, bx));
  }
  Formula rest = xs.back();
  for (std::size_t i = xs.size() - 1; i-- > 1;)
    rest = Formula::conj(xs[i], rest);
  Judgment rec = box_conj_collect(e, xs.subspan(1));
  Judgment head = Kernel::classical(
      Formula::imp(rec.formula().lhs(), rec.formula().lhs()));
  // ([e]x1 & (rest of boxes)) -> ([e]x1 & [e](rest)) -> [e](x1 & rest)
  Formula bx1 = Formula::box(e, xs[0]);
  Formula boxes = Formula::conj(bx1, rec.formula().lhs());
  Judgment split = and_intro_imp(
      cut(Kernel::classical(Formula::imp(boxes, bx1)),
          Kernel::classical(Formula::imp(bx1, bx1))),
      cut(Kernel::classical(Formula::imp(boxes, rec.formula().lhs())), rec));
  (void)head;
  return cut(split, box_and_dist(e, xs[0], rest));
}

}  // namespace detail

/// E_G a & E_G b -> E_G (a & b).
inline Judgment e_and_dist(const Group& g, const Formula& a,
                           const Formula& b) {
  Judgment fa = Kernel::axiom(Rule::def_e_fwd(g, a), bare_theory());
  Judgment fb = Kernel::axiom(Rule::def_e_fwd(g, b), bare_theory());
  Judgment open = conj_pair_mono(fa, fb);
  // Zip K_i a & K_i b pointwise across the two conjunctions.
  std::function<Judgment(std::span<const Agent>)> zip =
      [&](std::span<const Agent> ms) -> Judgment {
    if (ms.size() == 1) return k_and_dist(ms[0], a, b);
    Judgment rec = zip(ms.subspan(1));
    Judgment headd = k_and_dist(ms[0], a, b);
    Formula la = def_e_expansion(Group(std::vector<Agent>(ms.begin(), ms.end())), a);
    // la = K_m0 a & rest_a ; similarly for b.
    Formula lb = def_e_expansion(Group(std::vector<Agent>(ms.begin(), ms.end())), b);
    Formula grouped = Formula::conj(
        Formula::conj(la.lhs(), lb.lhs()),
        Formula::conj(la.rhs(), lb.rhs()));
    Judgment regroup = Kernel::classical(
        Formula::imp(Formula::conj(la, lb), grouped));
    return cut(regroup, conj_pair_mono(headd, rec));
  };
  Judgment zipped = zip(g.members());
  Judgment bwd = Kernel::axiom(Rule::def_e_bwd(g, Formula::conj(a, b)),
                               bare_theory());
  return cut(cut(open, zipped), bwd);
}

/// E_G a -> a, via the first member's knowledge.
inline Judgment t_e(const Group& g, const Formula& a) {
  Judgment fwd = Kernel::axiom(Rule::def_e_fwd(g, a), bare_theory());
  Agent first = g.members().front();
  Judgment proj = Kernel::classical(Formula::imp(
      def_e_expansion(g, a), Formula::knows(first, a)));
  Judgment tk = Kernel::axiom(Rule::t_k(first, a), bare_theory());
  return cut(cut(fwd, proj), tk);
}

/// E_G a -> K_i a for a member i of G.
inline Judgment e_to_k(const Group& g, Agent i, const Formula& a) {
  detail::require(g.contains(i), "e_to_k", "agent is not a group member");
  Judgment fwd = Kernel::axiom(Rule::def_e_fwd(g, a), bare_theory());
  Judgment proj = Kernel::classical(
      Formula::imp(def_e_expansion(g, a), Formula::knows(i, a)));
  return cut(fwd, proj);
}

/// E_G [e] a -> [e] E_G a: the commuting lemma KT1 gives per member,
/// lifted to the whole group.
inline Judgment e_box_commute(const Group& g, const EventSym& e,
                              const Formula& a) {
  Formula boxed = Formula::box(e, a);
  Judgment fwd = Kernel::axiom(Rule::def_e_fwd(g, boxed), bare_theory());
  std::vector<Judgment> kts;
  std::vector<Formula> kas;
  for (Agent i : g.members()) {
    kts.push_back(Kernel::axiom(Rule::kt1(i, e, a), bare_theory()));
    kas.push_back(Formula::knows(i, a));
  }
  Judgment zipped = conj_mono(kts);
  Judgment collect = detail::box_conj_collect(e, kas);
  Judgment bwd = box_mono(e, Kernel::axiom(Rule::def_e_bwd(g, a),
                                           bare_theory()));
  return cut(cut(cut(fwd, zipped), collect), bwd);
}

/// From a -> [e] a, E_G a -> [e] E_G a.
inline Judgment e_pers(const Group& g, const EventSym& e, const Judgment& pa) {
  auto [a, boxed] = detail::split_imp(pa, "e_pers");
  detail::require(boxed == Formula::box(e, a), "e_pers",
                  "premise is not a -> [e] a");
  return cut(e_mono(g, pa), e_box_commute(g, e, a));
}

/// C_G p -> E_G^n p, unfolding the fixpoint n times.
inline Judgment c_unfold(const Group& g, std::uint32_t n, const Formula& p) {
  Judgment fix = Kernel::axiom(Rule::fixpoint_c(g, p), bare_theory());
  if (n == 0) return and_elim_left(fix);
  Judgment step = and_elim_right(fix);  // C_G p -> E_G C_G p
  Judgment rec = c_unfold(g, n - 1, p);
  return cut(step, e_mono(g, rec));
}

/// From b -> a, C_G b -> C_G a, through the greatest-fixpoint rule.
inline Judgment c_mono(const Group& g, const Judgment& ba) {
  auto [b, a] = detail::split_imp(ba, "c_mono");
  Judgment fix = Kernel::axiom(Rule::fixpoint_c(g, b), bare_theory());
  Judgment to_a = cut(and_elim_left(fix), ba);
  Judgment step = and_elim_right(fix);
  Judgment both = and_intro_imp(to_a, step);
  return Kernel::gfp_c(g, a, Formula::common(g, b), both);
}

}  // namespace delk

#endif  // DELK_DERIVED_HPP
