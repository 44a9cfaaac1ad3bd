#include "vqcount/instances.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <utility>

#include "vqcount/errors.hpp"
#include "vqcount/random.hpp"

namespace vqcount {

std::string to_string(Problem p) { return p == Problem::Nae3Sat ? "nae3sat" : "one3sat"; }

Problem problem_from_string(const std::string& text) {
  if (text == "nae3sat" || text == "nae") return Problem::Nae3Sat;
  if (text == "one3sat" || text == "1in3sat" || text == "one3") return Problem::OneIn3Sat;
  throw InputError("unknown problem '" + text + "' (expected nae3sat or one3sat)");
}

std::string Ratio::str() const {
  return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

Ratio Ratio::parse(const std::string& text) {
  const auto slash = text.find('/');
  auto parse_uint = [&](const std::string& s) -> std::uint32_t {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      throw InputError("malformed ratio '" + text + "'");
    }
    return static_cast<std::uint32_t>(std::stoul(s));
  };
  Ratio r;
  if (slash == std::string::npos) {
    r = {parse_uint(text), 1};
  } else {
    r = {parse_uint(text.substr(0, slash)), parse_uint(text.substr(slash + 1))};
  }
  if (r.den == 0 || r.num == 0) throw InputError("ratio must be positive: '" + text + "'");
  const auto g = std::gcd(r.num, r.den);
  return {r.num / g, r.den / g};
}

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

 private:
  std::vector<std::size_t> parent_;
};

bool cubic_graph_connected(std::size_t n_vertices,
                           const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges) {
  DisjointSets sets(n_vertices);
  for (const auto& [a, b] : edges) sets.unite(a, b);
  const auto root = sets.find(0);
  for (std::size_t v = 1; v < n_vertices; ++v) {
    if (sets.find(v) != root) return false;
  }
  return true;
}

}  // namespace

void validate_spec(const EnsembleSpec& spec) {
  if (spec.n_vars == 0) throw InputError("n_vars must be positive");
  if (spec.n_vars > kMaxVariables) throw InputError("n_vars exceeds 64");
  if (spec.problem == Problem::Nae3Sat) {
    if ((spec.n_vars * spec.alpha.num) % spec.alpha.den != 0) {
      throw InputError("alpha * n must be an integer clause count");
    }
    if ((3 * spec.alpha.num) % spec.alpha.den != 0) {
      throw InputError("variable degree 3 * alpha must be an integer");
    }
    if (spec.n_vars < 3) throw InputError("NAE3SAT needs at least 3 variables");
  } else {
    if (!(spec.alpha == Ratio{2, 3})) throw InputError("1-in-3SAT ensemble is fixed at alpha = 2/3");
    if (spec.n_vars % 3 != 0) throw InputError("1-in-3SAT needs n divisible by 3 (n = 3m/2)");
    if (spec.n_vars < 6) throw InputError("1-in-3SAT needs n >= 6 (smallest cubic graph is K4)");
  }
}

Formula gen_nae3sat(const EnsembleSpec& spec) {
  if (spec.problem != Problem::Nae3Sat) throw InputError("gen_nae3sat called with a non-NAE spec");
  validate_spec(spec);
  const std::size_t n = spec.n_vars;
  const std::size_t m = n * spec.alpha.num / spec.alpha.den;
  const std::size_t degree = 3 * spec.alpha.num / spec.alpha.den;

  std::vector<std::uint32_t> stubs;
  stubs.reserve(3 * m);
  for (std::uint32_t v = 0; v < n; ++v) stubs.insert(stubs.end(), degree, v);

  Rng rng(spec.seed);
  for (std::size_t attempt = 0; attempt < kRejectionBudget; ++attempt) {
    rng.shuffle(std::span<std::uint32_t>(stubs));
    std::vector<Clause> clauses(m);
    bool simple = true;
    for (std::size_t c = 0; c < m && simple; ++c) {
      clauses[c] = {stubs[3 * c], stubs[3 * c + 1], stubs[3 * c + 2]};
      const Clause& cl = clauses[c];
      simple = cl[0] != cl[1] && cl[0] != cl[2] && cl[1] != cl[2];
    }
    if (!simple) continue;
    Formula f(n, std::move(clauses), Semantics::NotAllEqual);
    if (!factor_graph_connected(f)) continue;
    return f;
  }
  throw GenerationError("no connected biregular NAE3SAT instance within the rejection budget");
}

Formula gen_1in3sat(const EnsembleSpec& spec) {
  if (spec.problem != Problem::OneIn3Sat) throw InputError("gen_1in3sat called with a non-1-in-3 spec");
  validate_spec(spec);
  const std::size_t n = spec.n_vars;  // edges
  const std::size_t m = 2 * n / 3;    // vertices

  std::vector<std::uint32_t> stubs;
  stubs.reserve(3 * m);
  for (std::uint32_t v = 0; v < m; ++v) stubs.insert(stubs.end(), 3, v);

  Rng rng(spec.seed);
  for (std::size_t attempt = 0; attempt < kRejectionBudget; ++attempt) {
    rng.shuffle(std::span<std::uint32_t>(stubs));
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges(n);
    std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
    bool simple = true;
    for (std::size_t e = 0; e < n && simple; ++e) {
      auto a = stubs[2 * e];
      auto b = stubs[2 * e + 1];
      if (a == b) {
        simple = false;
        break;
      }
      if (a > b) std::swap(a, b);
      edges[e] = {a, b};
      simple = seen.insert(edges[e]).second;
    }
    if (!simple || !cubic_graph_connected(m, edges)) continue;

    std::vector<std::vector<std::uint32_t>> incident(m);
    for (std::uint32_t e = 0; e < n; ++e) {
      incident[edges[e].first].push_back(e);
      incident[edges[e].second].push_back(e);
    }
    std::vector<Clause> clauses;
    clauses.reserve(m);
    for (const auto& inc : incident) clauses.push_back({inc[0], inc[1], inc[2]});
    return Formula(n, std::move(clauses), Semantics::ExactlyOne);
  }
  throw GenerationError("no simple connected cubic graph within the rejection budget");
}

Formula generate(const EnsembleSpec& spec) {
  return spec.problem == Problem::Nae3Sat ? gen_nae3sat(spec) : gen_1in3sat(spec);
}

bool factor_graph_connected(const Formula& f) {
  DisjointSets sets(f.n_vars());
  for (const Clause& c : f.clauses()) {
    sets.unite(c[0], c[1]);
    sets.unite(c[0], c[2]);
  }
  const auto root = sets.find(0);
  for (std::size_t v = 1; v < f.n_vars(); ++v) {
    if (sets.find(v) != root) return false;
  }
  return true;
}

std::vector<std::size_t> variable_degrees(const Formula& f) {
  std::vector<std::size_t> deg(f.n_vars(), 0);
  for (const Clause& c : f.clauses()) {
    for (auto v : c) ++deg[v];
  }
  return deg;
}

}  // namespace vqcount
