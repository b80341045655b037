#include "tte/extremal.hpp"

#include <algorithm>
#include <random>
#include <tuple>

#include "tte/errors.hpp"

namespace tte {

std::string to_string(Method m) {
  switch (m) {
    case Method::exhaustive: return "exhaustive";
    case Method::local_search: return "local_search";
    case Method::closed_form: return "closed_form";
  }
  return "unknown";
}

namespace {

// Branch and bound over blue pairings. Chains of fixed edges and already
// chosen blue edges are kept as segments; `other_end_` links the two
// endpoints of each open segment, so adding a blue edge either closes a
// cycle or splices two segments in O(1).
class Search {
 public:
  Search(const TensorGraph& g, const SearchOptions& opt)
      : g_(g), opt_(opt), k_(g.k()), n_(g.num_rects()), other_end_(static_cast<std::size_t>(g.num_vertices())) {
    for (int r = 0; r < n_; ++r) {
      for (int c = 0; c < k_; ++c) {
        const int out = out_vertex(k_, r, c);
        const int e = g.out_edge(r, c);
        if (e >= 0) {
          const int in = in_vertex(k_, g.edges()[e].dst, c);
          other_end_[out] = in;
          other_end_[in] = out;
        } else {
          other_end_[out] = out;
        }
        if (g.in_edge(r, c) < 0) other_end_[in_vertex(k_, r, c)] = in_vertex(k_, r, c);
      }
    }
    current_ = BluePairing(k_, n_);
    if (opt.incumbent != nullptr) {
      best_ = cycle_count(g, *opt.incumbent);
      witness_ = *opt.incumbent;
    }
  }

  ExtremalResult run() {
    if (n_ == 0) {
      best_ = 0;
      witness_ = current_;
    } else {
      descend(0);
    }
    ExtremalResult res;
    res.M = best_;
    res.witness = witness_;
    res.method = Method::exhaustive;
    res.nodes = nodes_;
    return res;
  }

 private:
  struct Step {
    int s1, e2;
    bool closed;
  };

  void link(int r, int c, int d) {
    const int in = in_vertex(k_, r, c);
    const int out = out_vertex(k_, r, d);
    const int s1 = other_end_[in];
    if (s1 == out) {
      ++closed_;
      steps_.push_back({s1, -1, true});
      return;
    }
    const int e2 = other_end_[out];
    other_end_[s1] = e2;
    other_end_[e2] = s1;
    steps_.push_back({s1, e2, false});
  }

  void unlink(int r, int c, int d) {
    Step st = steps_.back();
    steps_.pop_back();
    if (st.closed) {
      --closed_;
      return;
    }
    other_end_[st.s1] = in_vertex(k_, r, c);
    other_end_[st.e2] = out_vertex(k_, r, d);
  }

  // Optimistic count of cycles still closable once rectangles < depth are fixed.
  int bound(int depth) const {
    int residual = 0, loops = 0;
    for (int u = depth; u < n_; ++u) {
      for (int d = 0; d < k_; ++d) {
        const int e = other_end_[out_vertex(k_, u, d)];
        if (e % 2 != 0) continue;
        const int v = e / (2 * k_);
        if (v < depth) continue;
        ++residual;
        if (v == u) ++loops;
      }
    }
    return closed_ + loops + (residual - loops) / 2;
  }

  void descend(int depth) {
    std::vector<int> perm(static_cast<std::size_t>(k_));
    for (int c = 0; c < k_; ++c) perm[c] = c;
    do {
      if (++nodes_ > opt_.node_limit) {
        throw CapExceeded("exhaustive search exceeded " + std::to_string(opt_.node_limit) + " nodes");
      }
      for (int c = 0; c < k_; ++c) {
        current_.set(depth, c, perm[c]);
        link(depth, c, perm[c]);
      }
      if (depth + 1 == n_) {
        if (closed_ > best_ || (closed_ == best_ && !found_)) {
          best_ = closed_;
          witness_ = current_;
          found_ = true;
        }
      } else if (!opt_.prune) {
        descend(depth + 1);
      } else {
        const int b = bound(depth + 1);
        if (b > best_ || (b == best_ && !found_)) descend(depth + 1);
      }
      for (int c = k_ - 1; c >= 0; --c) unlink(depth, c, perm[c]);
    } while (std::next_permutation(perm.begin(), perm.end()));
    for (int c = 0; c < k_; ++c) current_.set(depth, c, c);
  }

  const TensorGraph& g_;
  const SearchOptions& opt_;
  int k_;
  int n_;
  std::vector<int> other_end_;
  std::vector<Step> steps_;
  BluePairing current_;
  BluePairing witness_;
  int closed_ = 0;
  int best_ = -1;
  bool found_ = false;
  std::uint64_t nodes_ = 0;
};

}  // namespace

ExtremalResult m_exhaustive(const TensorGraph& g, const SearchOptions& opt) {
  Search s(g, opt);
  ExtremalResult res = s.run();
  res.upper_bound_backward = g.backward_bound();
  return res;
}

ExtremalResult m_enumerate(const TensorGraph& g, std::uint64_t limit) {
  if (pairing_count(g.k(), g.num_rects()) > limit) {
    throw CapExceeded("enumeration of " + std::to_string(g.num_rects()) + " rectangles exceeds " + std::to_string(limit) +
                      " pairings");
  }
  ExtremalResult res;
  BluePairing b(g.k(), g.num_rects());
  res.M = -1;
  do {
    ++res.nodes;
    const int c = cycle_count(g, b);
    if (c > res.M) {
      res.M = c;
      res.witness = b;
    }
  } while (b.next());
  res.upper_bound_backward = g.backward_bound();
  return res;
}

namespace {

// First (rectangle, c1, c2) whose in-vertices share a component, if any.
bool find_swap(const TensorGraph& g, const CycleReport& rep, int& r_out, int& c1_out, int& c2_out) {
  const int k = g.k();
  for (int r = 0; r < g.num_rects(); ++r) {
    for (int c1 = 0; c1 < k; ++c1) {
      for (int c2 = c1 + 1; c2 < k; ++c2) {
        if (rep.component[in_vertex(k, r, c1)] == rep.component[in_vertex(k, r, c2)]) {
          r_out = r;
          c1_out = c1;
          c2_out = c2;
          return true;
        }
      }
    }
  }
  return false;
}

}  // namespace

ExtremalResult m_local_search(const TensorGraph& g, int restarts, std::uint64_t seed) {
  if (restarts < 1) throw InputError("restarts must be positive");
  const int k = g.k();
  ExtremalResult best;
  best.M = -1;
  best.method = Method::local_search;
  for (int t = 0; t < restarts; ++t) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(t)};
    std::mt19937_64 rng(seq);
    BluePairing b(k, g.num_rects());
    std::vector<int> perm(static_cast<std::size_t>(k));
    for (int r = 0; r < g.num_rects(); ++r) {
      for (int c = 0; c < k; ++c) perm[c] = c;
      // Fisher-Yates with an explicit draw keeps runs identical across standard libraries.
      for (int c = k - 1; c > 0; --c) std::swap(perm[c], perm[rng() % static_cast<std::uint64_t>(c + 1)]);
      for (int c = 0; c < k; ++c) b.set(r, c, perm[c]);
    }
    CycleReport rep = count_cycles(g, b);
    int r, c1, c2;
    while (find_swap(g, rep, r, c1, c2)) {
      const int before = rep.num_cycles();
      b.swap_targets(r, c1, c2);
      rep = count_cycles(g, b);
      ++best.nodes;
      if (rep.num_cycles() != before + 1) {
        throw VerificationFailure("blue-edge swap changed the cycle count by " + std::to_string(rep.num_cycles() - before));
      }
    }
    if (rep.num_cycles() > best.M || (rep.num_cycles() == best.M && b < best.witness)) {
      best.M = rep.num_cycles();
      best.witness = b;
    }
  }
  best.upper_bound_backward = g.backward_bound();
  return best;
}

int backward_upper_bound(std::span<const PartialPermutation> sigmas) {
  int total = 0;
  for (const auto& s : sigmas) total += backward_count(s);
  return total;
}

Certificate simple_certificate(const TensorGraph& g, const BluePairing& witness, std::uint64_t limit) {
  const CycleReport rep = count_cycles(g, witness);
  int r, c1, c2;
  if (find_swap(g, rep, r, c1, c2)) {
    throw WitnessNotOptimal("rectangle " + g.rects()[r].name() + " has blue edges " + std::to_string(c1 + 1) + " and " +
                            std::to_string(c2 + 1) + " on one walk");
  }
  auto key = [&](int e) {
    const Edge& ed = g.edges()[e];
    return std::make_tuple(ed.kind == EdgeKind::yellow, ed.src, ed.dst, ed.color);
  };
  // Candidate edges per cycle, best first.
  std::vector<std::vector<int>> options;
  for (const auto& cyc : rep.cycles) {
    std::vector<int> opts = cyc.edges;
    std::sort(opts.begin(), opts.end(), [&](int a, int b) { return key(a) < key(b); });
    options.push_back(std::move(opts));
  }
  Certificate cert{Selection::full(g), {}, true, 0};
  std::vector<std::size_t> choice(options.size(), 0);
  while (true) {
    ++cert.tried;
    Selection kept = Selection::full(g);
    for (std::size_t i = 0; i < options.size(); ++i) kept.edges[options[i][choice[i]]] = 0;
    if (is_simple(g, kept)) {
      cert.kept = std::move(kept);
      for (std::size_t i = 0; i < options.size(); ++i) cert.removed_edges.push_back(options[i][choice[i]]);
      cert.smallest_rule = cert.tried == 1;
      return cert;
    }
    if (cert.tried >= limit) break;
    std::size_t i = options.size();
    while (i > 0 && ++choice[i - 1] == options[i - 1].size()) choice[--i] = 0;
    if (i == 0) break;
  }
  throw VerificationFailure("no one-edge-per-cycle removal of the witness leaves a simple graph (" +
                            std::to_string(cert.tried) + " choices tried)");
}

int moment_exponent(std::span<const PartialPermutation> sigmas, int p, int M) {
  int open = 0;
  for (const auto& s : sigmas) open += s.size() - s.domain_size();
  return 2 * p * M + open;
}

BackwardFormula multi_backward_formula(const Permutation& sigma, int k) {
  if (k < 2) throw InputError("the closed form needs k >= 2 legs");
  BackwardFormula f;
  f.value = backward_count(sigma) + k - 1;
  f.K = interval_K(sigma);
  f.applicable = k >= f.K + 1;
  return f;
}

std::vector<PartialPermutation> expand_legs(std::span<const PartialPermutation> sigmas,
                                            std::span<const int> multiplicities) {
  if (!multiplicities.empty() && multiplicities.size() != sigmas.size()) {
    throw InputError("expected one multiplicity per leg");
  }
  std::vector<PartialPermutation> out;
  for (std::size_t j = 0; j < sigmas.size(); ++j) {
    const int a = multiplicities.empty() ? 1 : multiplicities[j];
    if (a < 1) throw InputError("leg multiplicities must be positive");
    for (int t = 0; t < a; ++t) out.push_back(sigmas[j]);
  }
  return out;
}

ExtremalResult exponent_report(std::span<const PartialPermutation> sigmas, std::span<const int> multiplicities,
                               const ReportOptions& opt) {
  const auto legs = expand_legs(sigmas, multiplicities);
  if (legs.empty()) throw InputError("at least one leg is required");
  const TensorGraph g = build(legs, legs.front().size());
  ExtremalResult local = m_local_search(g, opt.restarts, opt.seed);
  ExtremalResult res;
  if (opt.mode == SearchMode::local) {
    res = local;
  } else {
    SearchOptions so;
    so.node_limit = opt.caps.pairings;
    so.incumbent = &local.witness;
    try {
      res = m_exhaustive(g, so);
    } catch (const CapExceeded&) {
      if (opt.mode == SearchMode::exhaustive) throw;
      res = local;
    }
  }
  res.upper_bound_backward = backward_upper_bound(legs);
  if (opt.certificate) {
    if (res.method == Method::exhaustive) {
      try {
        res.certificate = simple_certificate(g, res.witness);
      } catch (const WitnessNotOptimal&) {
        throw VerificationFailure("exhaustive witness admits an improving swap");
      }
    } else {
      // A local optimum below M has no certificate; give up quickly.
      try {
        res.certificate = simple_certificate(g, res.witness, 10'000);
      } catch (const std::exception&) {
      }
    }
  }
  return res;
}

nlohmann::json to_json(const ExtremalResult& r, const TensorGraph& g) {
  using nlohmann::json;
  json witness = json::array();
  for (int i = 0; i < r.witness.num_rects(); ++i) {
    json p = json::array();
    for (int v : r.witness.perm(i)) p.push_back(v + 1);
    witness.push_back(p);
  }
  json out = {{"M", r.M},
              {"method", to_string(r.method)},
              {"upper_backward", r.upper_bound_backward},
              {"witness", witness},
              {"witness_ranks", r.witness.ranks()},
              {"search_nodes", r.nodes}};
  if (r.certificate) {
    json removed = json::array();
    for (int e : r.certificate->removed_edges) {
      const Edge& ed = g.edges()[e];
      removed.push_back({ed.src + 1, ed.dst + 1, ed.color + 1});
    }
    out["certificate_edges_removed"] = removed;
  } else {
    out["certificate_edges_removed"] = nullptr;
  }
  return out;
}

}  // namespace tte
