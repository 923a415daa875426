#include "pipg/canon.hpp"

#include <algorithm>
#include <optional>
#include <set>

namespace pipg {
namespace {

constexpr std::uint64_t kTerminator = ~std::uint64_t{0};
constexpr std::size_t kBranchCap = 20000;

struct Search {
  const std::vector<Item>& items;
  std::vector<Token> best;
  std::vector<std::size_t> best_order;
  std::map<std::uint64_t, std::uint64_t> best_renaming;
  bool have_best = false;
  std::size_t leaves = 0;
  bool exact = true;

  // Serialises `item` under `ren`; unassigned channels get provisional
  // numbers starting at `next` in order of appearance.
  static std::vector<Token> render(const Item& item, const std::map<std::uint64_t, std::uint64_t>& ren,
                                   std::uint64_t next) {
    std::vector<Token> out;
    out.reserve(item.size() + 1);
    std::map<std::uint64_t, std::uint64_t> local;
    for (const Token& t : item) {
      if (!t.chan) {
        out.push_back(t);
        continue;
      }
      auto it = ren.find(t.value);
      if (it != ren.end()) {
        out.push_back(chan_tok(it->second));
        continue;
      }
      auto lt = local.find(t.value);
      if (lt == local.end()) lt = local.emplace(t.value, next++).first;
      out.push_back(chan_tok(lt->second));
    }
    out.push_back(lit(kTerminator));
    return out;
  }

  // -1: prefix < best, 0: equal so far, 1: prefix > best
  int compare_prefix(const std::vector<Token>& prefix) const {
    if (!have_best) return -1;
    std::size_t n = std::min(prefix.size(), best.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (prefix[i] < best[i]) return -1;
      if (best[i] < prefix[i]) return 1;
    }
    return 0;
  }

  void run(std::vector<std::size_t>& remaining, std::vector<std::size_t>& order,
           std::map<std::uint64_t, std::uint64_t>& ren, std::uint64_t next, std::vector<Token>& prefix) {
    if (remaining.empty()) {
      ++leaves;
      if (compare_prefix(prefix) < 0 || !have_best) {
        best = prefix;
        best_order = order;
        best_renaming = ren;
        have_best = true;
      }
      return;
    }
    std::vector<std::vector<Token>> rendered(remaining.size());
    std::size_t min_k = 0;
    for (std::size_t k = 0; k < remaining.size(); ++k) {
      rendered[k] = render(items[remaining[k]], ren, next);
      if (rendered[k] < rendered[min_k]) min_k = k;
    }
    std::vector<std::size_t> cands;
    std::set<Item> seen;
    for (std::size_t k = 0; k < remaining.size(); ++k) {
      if (rendered[k] != rendered[min_k]) continue;
      if (!seen.insert(items[remaining[k]]).second) continue;  // identical item, symmetric
      cands.push_back(k);
    }
    std::size_t old_size = prefix.size();
    prefix.insert(prefix.end(), rendered[min_k].begin(), rendered[min_k].end());
    if (compare_prefix(prefix) > 0) {
      prefix.resize(old_size);
      return;
    }
    if (leaves > kBranchCap && cands.size() > 1) {
      exact = false;
      cands.resize(1);
    }
    for (std::size_t k : cands) {
      std::size_t idx = remaining[k];
      auto ren2 = ren;
      std::uint64_t next2 = next;
      for (const Token& t : items[idx])
        if (t.chan && !ren2.count(t.value)) ren2.emplace(t.value, next2++);
      std::vector<std::size_t> rem2 = remaining;
      rem2.erase(rem2.begin() + static_cast<std::ptrdiff_t>(k));
      order.push_back(idx);
      run(rem2, order, ren2, next2, prefix);
      order.pop_back();
    }
    prefix.resize(old_size);
  }
};

}  // namespace

CanonResult canonical_order(const std::vector<Item>& items, const std::vector<std::uint64_t>& all_channels) {
  Search s{items, {}, {}, {}, false, 0, true};
  std::vector<std::size_t> remaining(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) remaining[i] = i;
  std::vector<std::size_t> order;
  std::map<std::uint64_t, std::uint64_t> ren;
  std::vector<Token> prefix;
  s.run(remaining, order, ren, 0, prefix);

  CanonResult r;
  r.order = s.best_order;
  r.renaming = s.best_renaming;
  r.key = s.best;
  r.exact = s.exact;
  std::uint64_t next = r.renaming.size();
  std::vector<std::uint64_t> rest(all_channels.begin(), all_channels.end());
  std::sort(rest.begin(), rest.end());
  for (std::uint64_t c : rest)
    if (!r.renaming.count(c)) r.renaming.emplace(c, next++);
  r.key.push_back(lit(next));
  return r;
}

std::string key_string(const std::vector<Token>& key) {
  std::string out;
  out.reserve(key.size() * 9);
  for (const Token& t : key) {
    out.push_back(t.chan ? 'c' : 'l');
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((t.value >> (8 * i)) & 0xff));
  }
  return out;
}

}  // namespace pipg
