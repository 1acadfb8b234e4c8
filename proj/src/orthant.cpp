#include "conelab/orthant.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <sstream>

#include "conelab/exterior.hpp"

namespace conelab {

SignPattern SignPattern::normalized(std::vector<int> signs) {
  for (int s : signs) {
    if (s != 1 && s != -1) throw ArgumentError("SignPattern: entries must be +1 or -1");
  }
  if (!signs.empty() && signs.front() == -1) {
    for (int& s : signs) s = -s;
  }
  return SignPattern{std::move(signs)};
}

std::string SignPattern::to_string() const {
  std::string s = "(";
  for (int v : signs) s += v > 0 ? '+' : '-';
  return s + ")";
}

bool pattern_less(const SignPattern& a, const SignPattern& b) {
  return std::lexicographical_compare(a.signs.begin(), a.signs.end(), b.signs.begin(),
                                      b.signs.end(), [](int x, int y) { return x > y; });
}

CrossCheck cross_positive(const Matrix& X, const SignPattern& sigma, double tol) {
  if (X.rows() != X.cols()) throw ArgumentError("cross_positive: matrix must be square");
  if (sigma.size() != X.rows()) throw ArgumentError("cross_positive: pattern size mismatch");
  CrossCheck out;
  out.slack = std::numeric_limits<double>::infinity();
  const int n = sigma.size();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double v = sigma.signs[i] * sigma.signs[j] * X(i, j);
      if (v < out.slack) {
        out.slack = v;
        out.worst_i = i + 1;
        out.worst_j = j + 1;
      }
    }
  }
  if (n < 2) out.slack = 0.0;
  out.ok = out.slack >= -tol;
  return out;
}

std::string SignConflict::to_string() const {
  std::ostringstream os;
  os << "sigma_" << i << " sigma_" << j << " must be " << (direct_sign > 0 ? "+1" : "-1")
     << " (entry) and " << (path_sign > 0 ? "+1" : "-1") << " (cycle";
  for (int v : cycle) os << ' ' << v;
  os << ")";
  return os.str();
}

namespace {

struct Edge {
  int to;
  int sign;
};

}  // namespace

OrthantSearch find_invariant_orthants(const std::vector<Matrix>& generators, double tol,
                                      std::size_t max_patterns) {
  if (generators.empty()) throw ArgumentError("find_invariant_orthants: no generators");
  const int n = static_cast<int>(generators.front().rows());
  if (n > kMaxOrthantDimension) {
    throw ArgumentError("find_invariant_orthants: dimension exceeds " +
                        std::to_string(kMaxOrthantDimension));
  }
  std::vector<std::vector<Edge>> adj(n);
  // Forced product per unordered pair; 0 = unconstrained, 2 = contradictory.
  std::vector<std::vector<int>> forced(n, std::vector<int>(n, 0));
  OrthantSearch out;
  for (const Matrix& M : generators) {
    if (M.rows() != n || M.cols() != n) throw ArgumentError("find_invariant_orthants: shape mismatch");
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j || std::abs(M(i, j)) <= tol) continue;
        const int s = M(i, j) > 0 ? 1 : -1;
        const int a = std::min(i, j), b = std::max(i, j);
        if (forced[a][b] == 0) {
          forced[a][b] = s;
          adj[a].push_back({b, s});
          adj[b].push_back({a, s});
        } else if (forced[a][b] != s && forced[a][b] != 2) {
          forced[a][b] = 2;
          if (!out.conflict) {
            out.conflict = SignConflict{{a + 1, b + 1}, a + 1, b + 1, -1, 1};
          }
        }
      }
    }
  }
  if (out.conflict) return out;

  // Two-colouring with parities; the first inconsistent edge closes an odd
  // cycle through the BFS tree.
  std::vector<int> color(n, 0), parent(n, -1), roots;
  for (int r = 0; r < n && !out.conflict; ++r) {
    if (color[r] != 0) continue;
    roots.push_back(r);
    color[r] = 1;
    std::deque<int> queue{r};
    while (!queue.empty() && !out.conflict) {
      const int a = queue.front();
      queue.pop_front();
      for (const Edge& e : adj[a]) {
        if (color[e.to] == 0) {
          color[e.to] = color[a] * e.sign;
          parent[e.to] = a;
          queue.push_back(e.to);
        } else if (color[e.to] != color[a] * e.sign) {
          // Cycle: a -> ... -> lca <- ... <- e.to, closed by edge (e.to, a).
          std::vector<int> pa, pb;
          for (int v = a; v != -1; v = parent[v]) pa.push_back(v);
          for (int v = e.to; v != -1; v = parent[v]) pb.push_back(v);
          while (pa.size() > 1 && pb.size() > 1 && pa[pa.size() - 2] == pb[pb.size() - 2]) {
            pa.pop_back();
            pb.pop_back();
          }
          std::vector<int> cycle(pa.begin(), pa.end());
          for (auto it = pb.rbegin() + 1; it != pb.rend(); ++it) cycle.push_back(*it);
          // Report a negatively forced pair of the cycle if there is one.
          const int m = static_cast<int>(cycle.size());
          int pick = m - 1;
          for (int q = 0; q < m; ++q) {
            const int u = cycle[q], v = cycle[(q + 1) % m];
            if (forced[std::min(u, v)][std::max(u, v)] == -1) {
              pick = q;
              break;
            }
          }
          const int u = cycle[pick], v = cycle[(pick + 1) % m];
          const int direct = forced[std::min(u, v)][std::max(u, v)];
          SignConflict c;
          for (int q = 0; q < m; ++q) c.cycle.push_back(cycle[(pick + 1 + q) % m] + 1);
          c.i = std::min(u, v) + 1;
          c.j = std::max(u, v) + 1;
          c.direct_sign = direct;
          c.path_sign = -direct;
          out.conflict = c;
          break;
        }
      }
    }
  }
  if (out.conflict) return out;

  const std::size_t free_components = roots.size() - 1;
  if (free_components >= 63 || (std::size_t{1} << free_components) > max_patterns) {
    throw CapacityError("find_invariant_orthants: 2^" + std::to_string(free_components) +
                        " invariant orthants exceed the enumeration limit");
  }
  // Component index per vertex.
  std::vector<int> component(n, -1);
  for (std::size_t c = 0; c < roots.size(); ++c) {
    std::deque<int> queue{roots[c]};
    component[roots[c]] = static_cast<int>(c);
    while (!queue.empty()) {
      const int a = queue.front();
      queue.pop_front();
      for (const Edge& e : adj[a]) {
        if (component[e.to] < 0) {
          component[e.to] = static_cast<int>(c);
          queue.push_back(e.to);
        }
      }
    }
  }
  for (std::size_t mask = 0; mask < (std::size_t{1} << free_components); ++mask) {
    std::vector<int> signs(n);
    for (int v = 0; v < n; ++v) {
      const int c = component[v];
      const int flip = c == 0 ? 1 : (((mask >> (c - 1)) & 1U) ? -1 : 1);
      signs[v] = color[v] * flip;
    }
    out.patterns.push_back(SignPattern::normalized(std::move(signs)));
  }
  std::sort(out.patterns.begin(), out.patterns.end(), pattern_less);
  for (const SignPattern& p : out.patterns) {
    for (const Matrix& M : generators) {
      if (!cross_positive(M, p, tol).ok) {
        throw ConsistencyError("find_invariant_orthants: propagated pattern fails the direct check");
      }
    }
  }
  return out;
}

std::vector<SignPattern> invariant_orthants(const Matrix& X, double tol) {
  return find_invariant_orthants({X}, tol).patterns;
}

OrthantConstraints orthant_constraints(const SystemSpec& spec, int k) {
  OrthantConstraints out;
  if (std::holds_alternative<UnboundedControl>(spec.u_model)) {
    out.generators.push_back(additive_compound(spec.A, k).entries);
    out.must_be_diagonal = additive_compound(spec.B, k).entries;
  } else if (const auto* set = std::get_if<ControlSet>(&spec.u_model)) {
    for (double u : set->values) out.generators.push_back(additive_compound(spec.generator(u), k).entries);
  } else {
    const auto& iv = std::get<ControlInterval>(spec.u_model);
    out.generators.push_back(additive_compound(spec.generator(iv.lo), k).entries);
    if (iv.hi != iv.lo) out.generators.push_back(additive_compound(spec.generator(iv.hi), k).entries);
  }
  return out;
}

namespace {

bool off_diagonal_vanishes(const Matrix& M, double tol) {
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j)
      if (i != j && std::abs(M(i, j)) > tol) return false;
  return true;
}

double pattern_slack(const OrthantConstraints& c, const SignPattern& p, double tol) {
  double slack = std::numeric_limits<double>::infinity();
  for (const Matrix& M : c.generators) slack = std::min(slack, cross_positive(M, p, tol).slack);
  return slack;
}

}  // namespace

std::vector<OrthantCertificate> family_invariant_orthants(const SystemSpec& spec, int k,
                                                          double tol) {
  const OrthantConstraints c = orthant_constraints(spec, k);
  if (c.must_be_diagonal && !off_diagonal_vanishes(*c.must_be_diagonal, tol)) return {};
  std::vector<OrthantCertificate> out;
  for (SignPattern& p : find_invariant_orthants(c.generators, tol).patterns) {
    const double slack = pattern_slack(c, p, tol);
    out.push_back({k, std::move(p), slack});
  }
  return out;
}

bool verify_orthant_certificate(const SystemSpec& spec, const OrthantCertificate& cert,
                                double tol) {
  if (cert.k < 1 || cert.k >= spec.d) return false;
  const OrthantConstraints c = orthant_constraints(spec, cert.k);
  if (cert.pattern.size() != c.generators.front().rows()) return false;
  if (!cert.pattern.signs.empty() && cert.pattern.signs.front() != 1) return false;
  if (c.must_be_diagonal && !off_diagonal_vanishes(*c.must_be_diagonal, tol)) return false;
  for (const Matrix& M : c.generators) {
    if (!cross_positive(M, cert.pattern, tol).ok) return false;
  }
  return std::abs(pattern_slack(c, cert.pattern, tol) - cert.slack) <=
         1e-12 * std::max(1.0, std::abs(cert.slack));
}

}  // namespace conelab
