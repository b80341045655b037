#include "tte/perm.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "tte/errors.hpp"

namespace tte {

// --- PartialPermutation ----------------------------------------------------

PartialPermutation::PartialPermutation(int m) : map_(static_cast<std::size_t>(m), kUndefined) {
  if (m < 0) throw InputError("permutation size must be nonnegative");
}

PartialPermutation PartialPermutation::from_images(std::vector<int> images) {
  const int m = static_cast<int>(images.size());
  std::vector<char> hit(images.size(), 0);
  for (int i = 0; i < m; ++i) {
    int v = images[i];
    if (v == kUndefined) continue;
    if (v < 0 || v >= m) {
      throw InputError("image " + std::to_string(v + 1) + " out of range 1.." + std::to_string(m));
    }
    if (hit[v]) throw InputError("map is not injective at image " + std::to_string(v + 1));
    hit[v] = 1;
  }
  PartialPermutation p;
  p.map_ = std::move(images);
  return p;
}

int PartialPermutation::domain_size() const {
  return static_cast<int>(std::count_if(map_.begin(), map_.end(), [](int v) { return v != kUndefined; }));
}

bool PartialPermutation::in_image(int j) const {
  return std::find(map_.begin(), map_.end(), j) != map_.end();
}

// --- Permutation -------------------------------------------------------------

Permutation::Permutation(const PartialPermutation& p) {
  if (!p.is_full()) throw InputError("partial permutation is not total");
  map_.assign(p.images().begin(), p.images().end());
}

Permutation Permutation::identity(int m) {
  Permutation p;
  p.map_.resize(static_cast<std::size_t>(m));
  std::iota(p.map_.begin(), p.map_.end(), 0);
  return p;
}

Permutation Permutation::from_images(std::vector<int> images) {
  return Permutation(PartialPermutation::from_images(std::move(images)));
}

Permutation Permutation::from_cycles(int m, const std::vector<std::vector<int>>& cycs) {
  std::vector<int> map(static_cast<std::size_t>(m), kUndefined);
  std::vector<char> seen(static_cast<std::size_t>(m), 0);
  for (const auto& c : cycs) {
    for (std::size_t t = 0; t < c.size(); ++t) {
      int a = c[t];
      if (a < 0 || a >= m) throw InputError("element " + std::to_string(a + 1) + " exceeds size " + std::to_string(m));
      if (seen[a]) throw InputError("repeated element " + std::to_string(a + 1));
      seen[a] = 1;
      map[a] = c[(t + 1) % c.size()];
    }
  }
  for (int i = 0; i < m; ++i) {
    if (map[i] == kUndefined) map[i] = i;
  }
  return from_images(std::move(map));
}

Permutation Permutation::increasing_cycle(int m) {
  std::vector<int> map(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) map[i] = (i + 1) % m;
  return from_images(std::move(map));
}

// --- text --------------------------------------------------------------------

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

// Reads a positive integer at s[pos]; advances pos.
int read_point(const std::string& s, std::size_t& pos) {
  std::size_t start = pos;
  long long v = 0;
  while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
    v = v * 10 + (s[pos] - '0');
    if (v > std::numeric_limits<int>::max() / 2) throw InputError("point too large in '" + s + "'");
    ++pos;
  }
  if (pos == start) throw InputError("expected a point at offset " + std::to_string(start) + " in '" + s + "'");
  if (v < 1) throw InputError("points are 1-based, got 0 in '" + s + "'");
  return static_cast<int>(v);
}

void skip_separators(const std::string& s, std::size_t& pos) {
  while (pos < s.size() && (std::isspace(static_cast<unsigned char>(s[pos])) || s[pos] == ',')) ++pos;
}

PartialPermutation parse_cycles(const std::string& s, int m) {
  std::vector<std::vector<int>> cycs;
  std::size_t pos = 0;
  while (true) {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == s.size()) break;
    if (s[pos] != '(') throw InputError("expected '(' in '" + s + "'");
    ++pos;
    std::vector<int> cyc;
    while (true) {
      skip_separators(s, pos);
      if (pos >= s.size()) throw InputError("unterminated cycle in '" + s + "'");
      if (s[pos] == ')') {
        ++pos;
        break;
      }
      int v = read_point(s, pos);
      if (v > m) throw InputError("element " + std::to_string(v) + " exceeds size " + std::to_string(m));
      cyc.push_back(v - 1);
    }
    cycs.push_back(std::move(cyc));
  }
  return Permutation::from_cycles(m, cycs);
}

PartialPermutation parse_arcs(const std::string& s, int m) {
  std::vector<int> map(static_cast<std::size_t>(m), kUndefined);
  std::size_t pos = 0;
  while (true) {
    skip_separators(s, pos);
    if (pos == s.size()) break;
    int a = read_point(s, pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos >= s.size() || s[pos] != '>') throw InputError("expected '>' in '" + s + "'");
    ++pos;
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    int b = read_point(s, pos);
    if (a > m || b > m) {
      throw InputError("element " + std::to_string(std::max(a, b)) + " exceeds size " + std::to_string(m));
    }
    if (map[a - 1] != kUndefined) throw InputError("repeated element " + std::to_string(a) + " in arc list");
    map[a - 1] = b - 1;
  }
  return PartialPermutation::from_images(std::move(map));
}

}  // namespace

PartialPermutation parse_permutation(std::string_view text, int m) {
  if (m < 1) throw InputError("permutation size must be positive");
  std::string s = trim(text);
  if (!s.empty() && s.front() == '(') return parse_cycles(s, m);
  return parse_arcs(s, m);
}

int max_point(std::string_view text) {
  int best = 0;
  long long cur = -1;
  for (char ch : text) {
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      cur = (cur < 0 ? 0 : cur) * 10 + (ch - '0');
      if (cur > std::numeric_limits<int>::max() / 2) cur = std::numeric_limits<int>::max() / 2;
    } else {
      if (cur > best) best = static_cast<int>(cur);
      cur = -1;
    }
  }
  if (cur > best) best = static_cast<int>(cur);
  return best;
}

std::string to_cycle_string(const Permutation& p) {
  std::ostringstream out;
  for (const auto& c : cycles(p)) {
    out << '(';
    for (std::size_t t = 0; t < c.size(); ++t) out << (t ? " " : "") << c[t] + 1;
    out << ')';
  }
  return out.str();
}

std::string to_arc_string(const PartialPermutation& p) {
  std::ostringstream out;
  bool first = true;
  for (int i = 0; i < p.size(); ++i) {
    if (!p.defined(i)) continue;
    out << (first ? "" : ",") << i + 1 << '>' << p(i) + 1;
    first = false;
  }
  return out.str();
}

// --- algebra -----------------------------------------------------------------

std::vector<std::vector<int>> cycles(const Permutation& p) {
  std::vector<std::vector<int>> out;
  std::vector<char> seen(static_cast<std::size_t>(p.size()), 0);
  for (int i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    std::vector<int> c;
    for (int j = i; !seen[j]; j = p(j)) {
      seen[j] = 1;
      c.push_back(j);
    }
    out.push_back(std::move(c));
  }
  return out;
}

int cycle_count(const Permutation& p) { return static_cast<int>(cycles(p).size()); }

PartialPermutation invert(const PartialPermutation& p) {
  std::vector<int> map(static_cast<std::size_t>(p.size()), kUndefined);
  for (int i = 0; i < p.size(); ++i) {
    if (p.defined(i)) map[p(i)] = i;
  }
  return PartialPermutation::from_images(std::move(map));
}

Permutation invert(const Permutation& p) { return Permutation(invert(PartialPermutation(p))); }

Permutation compose(const Permutation& a, const Permutation& b) {
  if (a.size() != b.size()) throw InputError("compose: size mismatch");
  std::vector<int> map(static_cast<std::size_t>(a.size()));
  for (int i = 0; i < a.size(); ++i) map[i] = a(b(i));
  return Permutation::from_images(std::move(map));
}

int backward_count(const PartialPermutation& p) {
  int r = 0;
  for (int i = 0; i < p.size(); ++i) {
    if (p.defined(i) && p(i) <= i) ++r;
  }
  return r;
}

Permutation conjugate(const Permutation& p, const Permutation& theta) {
  if (p.size() != theta.size()) throw InputError("conjugate: size mismatch");
  // (theta p theta^-1)(theta(i)) = theta(p(i))
  std::vector<int> map(static_cast<std::size_t>(p.size()));
  for (int i = 0; i < p.size(); ++i) map[theta(i)] = theta(p(i));
  return Permutation::from_images(std::move(map));
}

ConjugationResult min_conjugate_backward(std::span<const Permutation> ps, int max_m) {
  if (ps.empty()) throw InputError("min_conjugate_backward: empty list");
  const int m = ps.front().size();
  for (const auto& p : ps) {
    if (p.size() != m) throw InputError("min_conjugate_backward: size mismatch");
  }
  if (m > max_m) {
    throw CapExceeded("conjugator search over " + std::to_string(m) + "! exceeds limit m <= " + std::to_string(max_m));
  }
  std::vector<int> theta(static_cast<std::size_t>(m));
  std::iota(theta.begin(), theta.end(), 0);
  ConjugationResult best{Permutation::identity(m), std::numeric_limits<int>::max()};
  do {
    int total = 0;
    for (const auto& p : ps) {
      for (int i = 0; i < m; ++i) {
        // conjugate maps theta(i) -> theta(p(i))
        if (theta[p(i)] <= theta[i]) ++total;
      }
      if (total >= best.total) break;
    }
    if (total < best.total) best = {Permutation::from_images(theta), total};
  } while (std::next_permutation(theta.begin(), theta.end()));
  return best;
}

namespace {

std::vector<std::uint64_t> descent_intervals(const Permutation& p) {
  if (p.size() > 64) throw CapExceeded("interval_K supports m <= 64");
  std::vector<std::uint64_t> sets;
  for (int i = 0; i + 1 < p.size(); ++i) {
    if (p(i) >= i) continue;
    std::uint64_t mask = 0;
    for (int u = p(i) + 1; u <= i; ++u) mask |= std::uint64_t{1} << u;
    sets.push_back(mask);
  }
  return sets;
}

void sort_by_left(std::vector<std::uint64_t>& sets) {
  std::sort(sets.begin(), sets.end(),
            [](std::uint64_t a, std::uint64_t b) { return std::countr_zero(a) < std::countr_zero(b); });
}

int min_merge(std::vector<std::uint64_t> sets, std::map<std::vector<std::uint64_t>, int>& memo) {
  std::sort(sets.begin(), sets.end());
  if (auto it = memo.find(sets); it != memo.end()) return it->second;
  int best = static_cast<int>(sets.size());
  bool any = false;
  for (std::size_t a = 0; a < sets.size(); ++a) {
    for (std::size_t b = a + 1; b < sets.size(); ++b) {
      if (sets[a] & sets[b]) continue;
      any = true;
      std::vector<std::uint64_t> next;
      for (std::size_t c = 0; c < sets.size(); ++c) {
        if (c != a && c != b) next.push_back(sets[c]);
      }
      next.push_back(sets[a] | sets[b]);
      best = std::min(best, min_merge(std::move(next), memo));
    }
  }
  if (!any) best = static_cast<int>(sets.size());
  memo.emplace(std::move(sets), best);
  return best;
}

}  // namespace

int interval_K(const Permutation& p) {
  auto sets = descent_intervals(p);
  sort_by_left(sets);
  bool merged = true;
  while (merged) {
    merged = false;
    for (std::size_t a = 0; a < sets.size() && !merged; ++a) {
      for (std::size_t b = a + 1; b < sets.size(); ++b) {
        if (sets[a] & sets[b]) continue;
        sets[a] |= sets[b];
        sets.erase(sets.begin() + static_cast<std::ptrdiff_t>(b));
        merged = true;
        break;
      }
    }
  }
  return static_cast<int>(sets.size());
}

int interval_K_min(const Permutation& p) {
  if (p.size() > 8) throw CapExceeded("interval_K_min enumerates merge orders only for m <= 8");
  std::map<std::vector<std::uint64_t>, int> memo;
  return min_merge(descent_intervals(p), memo);
}

// --- ranks -----------------------------------------------------------------

std::uint64_t factorial(int k) {
  std::uint64_t f = 1;
  for (int i = 2; i <= k; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

std::uint32_t perm_rank(std::span<const int> images) {
  const int k = static_cast<int>(images.size());
  std::uint32_t rank = 0;
  for (int i = 0; i < k; ++i) {
    int smaller = 0;
    for (int j = i + 1; j < k; ++j) {
      if (images[j] < images[i]) ++smaller;
    }
    rank += static_cast<std::uint32_t>(smaller * factorial(k - 1 - i));
  }
  return rank;
}

std::vector<int> perm_unrank(int k, std::uint32_t rank) {
  std::vector<int> pool(static_cast<std::size_t>(k));
  std::iota(pool.begin(), pool.end(), 0);
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    std::uint64_t f = factorial(k - 1 - i);
    auto idx = static_cast<std::size_t>(rank / f);
    rank = static_cast<std::uint32_t>(rank % f);
    out.push_back(pool[idx]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(idx));
  }
  return out;
}

}  // namespace tte
