#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "pipg/canon.hpp"

namespace pipg::pi {

// Channels are naturals. Inside terms, a reference is either a free channel
// or a de Bruijn index into the enclosing binders (0 = innermost), so
// alpha-equivalent terms are structurally equal and substitution never
// captures. Binders keep a display hint for printing.
using Chan = std::uint32_t;

struct Ref {
  std::uint32_t index = 0;
  bool bound = false;

  static Ref free_chan(Chan c) { return Ref{c, false}; }
  static Ref bvar(std::uint32_t k) { return Ref{k, true}; }
  auto operator<=>(const Ref&) const = default;
};

enum class GuardKind : std::uint8_t { Tau, Tick, New, In, Out };

struct Guard {
  GuardKind kind = GuardKind::Tau;
  Ref channel;        // In, Out
  Ref payload;        // Out
  std::string hint;   // New, In: display name of the bound channel

  bool binds() const { return kind == GuardKind::New || kind == GuardKind::In; }
};

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Branch {
  Guard guard;
  TermPtr body;
};

enum class TermKind : std::uint8_t { Sum, Par, Constant };

struct Term {
  TermKind kind = TermKind::Sum;
  std::vector<Branch> branches;  // Sum; empty sum is 0
  TermPtr left, right;           // Par
  std::uint32_t constant = 0;    // Constant: index into the DefinitionEnv
  std::vector<Ref> args;         // Constant: one per parameter
};

TermPtr nil();
TermPtr sum(std::vector<Branch> branches);
TermPtr par(TermPtr l, TermPtr r);
TermPtr constant(std::uint32_t id, std::vector<Ref> args);
Guard tau_guard();
Guard tick_guard();
Guard new_guard(std::string hint = "x");
Guard in_guard(Ref channel, std::string hint = "x");
Guard out_guard(Ref channel, Ref payload);
TermPtr prefix(Guard g, TermPtr body);

// Structural order and equality; binder hints are ignored.
int compare(const TermPtr& a, const TermPtr& b);
inline bool equal(const TermPtr& a, const TermPtr& b) { return compare(a, b) == 0; }

// A constant's body refers to its parameters as free channels 0..p-1.
struct Definition {
  std::string name;
  std::vector<std::string> params;
  TermPtr body;
};

class DefinitionEnv {
 public:
  std::uint32_t add(Definition d);
  void set_body(std::uint32_t id, TermPtr body) { defs_.at(id).body = std::move(body); }
  const Definition& at(std::uint32_t id) const { return defs_.at(id); }
  std::size_t size() const { return defs_.size(); }
  const std::uint32_t* find(const std::string& name) const;
  // The body with parameters instantiated by `args`.
  TermPtr unfold(std::uint32_t id, const std::vector<Ref>& args) const;
  // Unfolds constants at the top of `t` until it is a Sum or Par.
  TermPtr unfold_top(TermPtr t) const;

 private:
  std::vector<Definition> defs_;
  std::map<std::string, std::uint32_t> index_;
};

// Free channel set of a term (ignores bound references).
std::vector<Chan> free_channels(const TermPtr& t);

// Capture-avoiding substitution of free channels. Channels absent from
// `sigma` are left unchanged.
TermPtr substitute(const TermPtr& t, const std::map<Chan, Chan>& sigma);
// Replaces the outermost bound variable of a binder body by channel `c`.
TermPtr open(const TermPtr& body, Chan c);
// Inverse of open: abstracts free channel `c` as the outermost bound variable.
TermPtr close(const TermPtr& body, Chan c);

enum class SigmaLabel : std::uint8_t { Silent, Tick };
const char* label_name(SigmaLabel l);

struct Configuration {
  std::vector<Chan> gamma;             // sorted, distinct
  std::vector<TermPtr> processes;      // multiset
  std::map<Chan, std::string> names;   // display names, not part of identity

  bool has(Chan c) const;
  Chan fresh() const;                  // smallest natural not in gamma
  std::string name_of(Chan c) const;
};

bool same(const Configuration& a, const Configuration& b);  // ignores names and order

enum class Rule : std::uint8_t { Heat, Tau, Tick, New, Sync };
const char* rule_name(Rule r);

struct ConfTransition {
  SigmaLabel label = SigmaLabel::Silent;
  Rule rule = Rule::Heat;
  std::size_t proc = 0;          // redex process
  std::size_t branch = 0;        // branch of the redex sum
  std::size_t partner = 0;       // Sync: the output process
  std::size_t partner_branch = 0;
  Configuration target;
};

// One-step successors under the reduction rules (the frame rule is implicit in
// choosing redexes inside the multiset). Identity edges are excluded.
std::vector<ConfTransition> conf_transitions(const Configuration& c, const DefinitionEnv& defs);
// Re-derives the target of a tagged transition; throws if the tag does not apply.
Configuration apply_rule(const Configuration& c, const ConfTransition& tr, const DefinitionEnv& defs);

struct Canonical {
  Configuration config;
  std::map<Chan, Chan> renaming;     // old -> new
  std::vector<std::size_t> order;    // position k holds the old index of the k-th process
  std::string key;                   // hashable identity of the canonical form
};

Canonical canonicalize(const Configuration& c);
// The serialisation canonicalize works on; free channels are channel tokens.
Item process_tokens(const TermPtr& t);

// Multiset union of configurations over the same gamma (the @ operation).
Configuration join(const Configuration& a, const Configuration& b);

// ---- concrete syntax ----

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class ScopeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parses "NAME := process" lines (blank lines and comments allowed) into `env`.
void parse_definitions(const std::string& text, DefinitionEnv& env);
// Parses a process over the named channels gamma[i] = channel i.
TermPtr parse_process(const std::string& text, const std::vector<std::string>& gamma, const DefinitionEnv& defs);
Configuration parse_configuration(const std::string& text, const DefinitionEnv& defs);

struct PiFile {
  DefinitionEnv defs;
  Configuration config;
};
// A file of definitions plus exactly one configuration line.
PiFile parse_pi_file(const std::string& text);

// Printing resolves names through `names` (free channels) and freshens
// binder hints against every name in scope.
std::string print_process(const TermPtr& t, const std::map<Chan, std::string>& names, const DefinitionEnv& defs);
std::string print_configuration(const Configuration& c, const DefinitionEnv& defs);
std::string print_definitions(const DefinitionEnv& defs);

}  // namespace pipg::pi
