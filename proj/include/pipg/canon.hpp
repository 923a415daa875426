#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace pipg {

// A token of a serialised multiset item. Channel tokens are renamed by the
// canonicaliser; literal tokens are compared as-is.
struct Token {
  bool chan = false;
  std::uint64_t value = 0;
  auto operator<=>(const Token&) const = default;
};

using Item = std::vector<Token>;

inline Token lit(std::uint64_t v) { return Token{false, v}; }
inline Token chan_tok(std::uint64_t c) { return Token{true, c}; }

struct CanonResult {
  std::vector<std::size_t> order;                 // position k holds the index of the k-th item
  std::map<std::uint64_t, std::uint64_t> renaming;  // old channel -> new channel
  std::vector<Token> key;                         // full canonical serialisation
  bool exact = true;                              // false if the branch cap was hit
};

// Orders the items and renames channels by first use so that the
// concatenated serialisation is lexicographically least. Channels in
// `all_channels` never mentioned by an item are numbered last, in increasing
// order. Equal keys iff the inputs are related by an item permutation and a
// channel bijection (when `exact`).
CanonResult canonical_order(const std::vector<Item>& items,
                            const std::vector<std::uint64_t>& all_channels);

std::string key_string(const std::vector<Token>& key);

}  // namespace pipg
