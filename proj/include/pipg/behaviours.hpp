#pragma once

#include <compare>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pipg/pi_syntax.hpp"
#include "pipg/presheaf.hpp"
#include "pipg/traces.hpp"

namespace pipg::behaviours {

using pi::Chan;
using presheaf::ElemId;
using presheaf::Presheaf;

enum class LabelKind : std::uint8_t { PiL, PiR, Tau, Tick, Nu, Iota, Out };

// A basic action on an agent of arity n. Iota uses a, Out uses a (channel)
// and b (payload); positions are 1-based.
struct BasicLabel {
  LabelKind kind = LabelKind::Tau;
  std::uint16_t n = 0, a = 0, b = 0;

  static BasicLabel pil(unsigned n) { return {LabelKind::PiL, u(n)}; }
  static BasicLabel pir(unsigned n) { return {LabelKind::PiR, u(n)}; }
  static BasicLabel tau(unsigned n) { return {LabelKind::Tau, u(n)}; }
  static BasicLabel tick(unsigned n) { return {LabelKind::Tick, u(n)}; }
  static BasicLabel nu(unsigned n) { return {LabelKind::Nu, u(n)}; }
  static BasicLabel iota(unsigned n, unsigned a) { return {LabelKind::Iota, u(n), u(a)}; }
  static BasicLabel out(unsigned n, unsigned a, unsigned b) { return {LabelKind::Out, u(n), u(a), u(b)}; }

  auto operator<=>(const BasicLabel&) const = default;

  bool valid() const;
  unsigned target_arity() const;
  presheaf::Object to_object() const;
  static std::optional<BasicLabel> from_object(const presheaf::Object& o);
  std::string str() const { return to_object().tag(); }
  static std::optional<BasicLabel> parse(const std::string& s);

 private:
  static std::uint16_t u(unsigned v) { return static_cast<std::uint16_t>(v); }
};

using StateId = std::uint32_t;
using FormalSum = std::vector<StateId>;

// A definite behaviour on [arity]: each basic label maps to a formal sum of
// states of the label's target arity. Absent rows are empty.
struct State {
  std::string name;
  unsigned arity = 0;
  std::map<BasicLabel, FormalSum> rows;
};

class BehaviourError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The translation hit its state cap (e.g. recursion under an input).
class TranslationBudget : public BehaviourError {
 public:
  using BehaviourError::BehaviourError;
};

class BehaviourSystem {
 public:
  StateId add(State s);
  State& at_mut(StateId id) { return states_.at(id); }
  const State& at(StateId id) const { return states_.at(id); }
  std::size_t size() const { return states_.size(); }
  std::optional<StateId> find(const std::string& name) const;

  const FormalSum& residual(StateId s, const BasicLabel& b) const;
  std::size_t card(StateId s, const BasicLabel& b) const { return residual(s, b).size(); }
  // The k-th summand (construction order); throws when out of range.
  StateId restrict(StateId s, const BasicLabel& b, std::size_t k) const;
  // New state whose rows are the concatenated rows of the operands.
  StateId definite_sum(const std::vector<StateId>& parts, std::string name = {});

  // Arity and reference checks; throws BehaviourError.
  void validate() const;
  std::vector<StateId> reachable(const std::vector<StateId>& roots) const;

 private:
  std::vector<State> states_;
  std::map<std::string, StateId> by_name_;
};

// ---- translation ----

struct TranslateOptions {
  std::size_t max_states = 20000;
};

// Translates processes into one shared system; constants are memoised on
// (definition, arity, positions of their arguments).
class Translator {
 public:
  Translator(const pi::DefinitionEnv& defs, BehaviourSystem& sys, TranslateOptions opts = {})
      : defs_(defs), sys_(sys), opts_(opts) {}
  // h lists the channels of gamma; channel h[i] has position i+1.
  StateId translate(const pi::TermPtr& p, const std::vector<Chan>& h);

 private:
  StateId term(const pi::TermPtr& p, const std::vector<Chan>& h);
  StateId constant(const pi::TermPtr& p, const std::vector<Chan>& h);
  void fill(StateId id, const pi::TermPtr& p, const std::vector<Chan>& h);
  StateId fresh_state(unsigned arity, std::string name = {});

  // States are allocated first and filled breadth-first.
  struct Pending {
    StateId id;
    pi::TermPtr term;
    std::vector<Chan> h;
  };

  const pi::DefinitionEnv& defs_;
  BehaviourSystem& sys_;
  TranslateOptions opts_;
  std::map<std::vector<std::uint32_t>, StateId> memo_;
  std::deque<Pending> pending_;
};

StateId translate_process(const pi::TermPtr& p, const std::vector<Chan>& h, const pi::DefinitionEnv& defs,
                          BehaviourSystem& sys);

// ---- equality ----

// Depth-k bisimilarity over basic labels, matching summands up to bijection.
// Exact once k reaches the number of reachable states.
bool behaviour_eq(const BehaviourSystem& s1, StateId a, const BehaviourSystem& s2, StateId b, std::size_t k);
bool behaviour_eq(const BehaviourSystem& sys, StateId a, StateId b, std::size_t k);
// Class ids of the coarsest depth-k partition over `roots`' reachable states.
std::map<StateId, std::size_t> behaviour_classes(const BehaviourSystem& sys, const std::vector<StateId>& roots,
                                                 std::size_t k);

// ---- positioned and mixed behaviours ----

struct PositionedBehaviour {
  Presheaf position;
  std::map<ElemId, StateId> state;  // one per agent
};

void check_positioned(const BehaviourSystem& sys, const PositionedBehaviour& pb);

struct MixedItem {
  StateId state = 0;
  std::vector<Chan> sigma;  // position i+1 -> channel
  auto operator<=>(const MixedItem&) const = default;
};

struct MixedBehaviour {
  std::vector<Chan> gamma;  // sorted, distinct
  std::vector<MixedItem> items;
  bool operator==(const MixedBehaviour&) const = default;
};

void check_mixed(const BehaviourSystem& sys, const MixedBehaviour& m);

struct CanonicalMixed {
  MixedBehaviour mixed;
  std::map<Chan, Chan> renaming;
  std::string key;
};
CanonicalMixed canonicalize(const MixedBehaviour& m);
std::string print_mixed(const BehaviourSystem& sys, const MixedBehaviour& m);

MixedBehaviour m_map(const PositionedBehaviour& pb);
// Channels keep their gamma values as ids; agent k gets id max(gamma)+1+k.
PositionedBehaviour a_section(const BehaviourSystem& sys, const MixedBehaviour& m);
MixedBehaviour translate_config(const pi::Configuration& c, const pi::DefinitionEnv& defs, BehaviourSystem& sys);

// Final agents of the action that do something, each with its basic label
// and originating agent.
struct ActiveAgent {
  ElemId final_agent = 0;
  ElemId origin = 0;
  BasicLabel label;
};
std::vector<ActiveAgent> active_agents(const traces::Action& a);

// choices: a summand index for each active final agent.
PositionedBehaviour residual_along_action(const BehaviourSystem& sys, const PositionedBehaviour& pb,
                                          const traces::Action& a, const std::map<ElemId, std::size_t>& choices);

// ---- back-translation ----

struct ZetaResult {
  pi::DefinitionEnv defs;
  pi::TermPtr term;  // over free channels 0..arity-1
};
// Constants are introduced for states on cycles; everything else is inlined.
ZetaResult zeta(const BehaviourSystem& sys, StateId s);
// Z on mixed behaviours: one process per item, substituted by sigma.
pi::PiFile zeta_config(const BehaviourSystem& sys, const MixedBehaviour& m);

// ---- text format ----

std::string print_system(const BehaviourSystem& sys, const std::vector<StateId>& roots = {});
struct SystemFile {
  BehaviourSystem sys;
  std::vector<StateId> roots;
};
SystemFile parse_system(const std::string& text);

}  // namespace pipg::behaviours
