#ifndef SELFSIM_GRAPH_HPP
#define SELFSIM_GRAPH_HPP

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace selfsim {

/// A finite directed graph E = (E^0, E^1, r, d).  Vertices and edges keep
/// the opaque string names they were declared with; all algorithms work on
/// the dense integer ids assigned in declaration order.
struct Graph {
  std::vector<std::string> vertex_names;
  std::vector<std::string> edge_names;
  std::vector<int> edge_range;   // r : E^1 -> E^0
  std::vector<int> edge_source;  // d : E^1 -> E^0

  int vertex_count() const { return static_cast<int>(vertex_names.size()); }
  int edge_count() const { return static_cast<int>(edge_names.size()); }

  int vertex_id(const std::string& name) const {
    for (int v = 0; v < vertex_count(); ++v)
      if (vertex_names[v] == name) return v;
    throw std::invalid_argument("unknown vertex: " + name);
  }
  int edge_id(const std::string& name) const {
    for (int e = 0; e < edge_count(); ++e)
      if (edge_names[e] == name) return e;
    throw std::invalid_argument("unknown edge: " + name);
  }

  // Edges f that can extend a path ending at vertex v, i.e. r(f) = v.
  std::vector<int> extensions_at(int v) const {
    std::vector<int> out;
    for (int e = 0; e < edge_count(); ++e)
      if (edge_range[e] == v) out.push_back(e);
    return out;
  }

  static Graph make(const std::vector<std::string>& vertices,
                    const std::vector<std::tuple<std::string, std::string, std::string>>& edges) {
    Graph g;
    g.vertex_names = vertices;
    for (const auto& [name, r, d] : edges) {
      g.edge_names.push_back(name);
      g.edge_range.push_back(g.vertex_id(r));
      g.edge_source.push_back(g.vertex_id(d));
    }
    return g;
  }
};

/// A finite path: a composable edge word anchored at its range vertex.
/// Length-0 paths are the vertices themselves; two empty paths at different
/// vertices are different paths.
struct Path {
  int anchor = 0;          // r(path); equals the path itself when empty
  std::vector<int> edges;  // d(edges[i]) = r(edges[i+1])

  int length() const { return static_cast<int>(edges.size()); }
  bool empty() const { return edges.empty(); }

  friend bool operator==(const Path& a, const Path& b) {
    return a.anchor == b.anchor && a.edges == b.edges;
  }
  friend bool operator!=(const Path& a, const Path& b) { return !(a == b); }
  friend bool operator<(const Path& a, const Path& b) {
    if (a.edges.size() != b.edges.size()) return a.edges.size() < b.edges.size();
    if (a.anchor != b.anchor) return a.anchor < b.anchor;
    return a.edges < b.edges;
  }

  static Path at_vertex(int v) { return Path{v, {}}; }
};

inline int range_of(const Graph&, const Path& p) { return p.anchor; }

inline int source_of(const Graph& g, const Path& p) {
  return p.empty() ? p.anchor : g.edge_source[p.edges.back()];
}

inline bool is_composable(const Graph& g, const Path& p) {
  if (!p.empty() && g.edge_range[p.edges.front()] != p.anchor) return false;
  for (size_t i = 0; i + 1 < p.edges.size(); ++i)
    if (g.edge_source[p.edges[i]] != g.edge_range[p.edges[i + 1]]) return false;
  return true;
}

inline Path path_from_edges(const Graph& g, const std::vector<int>& edges, int anchor_if_empty = -1) {
  Path p;
  if (edges.empty()) {
    if (anchor_if_empty < 0) throw std::invalid_argument("empty path needs an anchor vertex");
    p.anchor = anchor_if_empty;
    return p;
  }
  p.anchor = g.edge_range[edges.front()];
  p.edges = edges;
  if (!is_composable(g, p)) throw std::invalid_argument("edge word is not composable");
  return p;
}

/// Concatenation a·b, defined when r(b) = d(a); the undefined marker is
/// distinct from the zero of the inverse semigroup built on top of paths.
inline std::optional<Path> concat(const Graph& g, const Path& a, const Path& b) {
  if (range_of(g, b) != source_of(g, a)) return std::nullopt;
  Path out = a;
  out.edges.insert(out.edges.end(), b.edges.begin(), b.edges.end());
  if (a.empty()) out.anchor = b.anchor;
  return out;
}

// a is an initial segment of b (for empty a this means a sits at r(b)).
inline bool is_prefix(const Graph& g, const Path& a, const Path& b) {
  if (a.length() > b.length()) return false;
  if (a.empty()) return a.anchor == range_of(g, b);
  return std::equal(a.edges.begin(), a.edges.end(), b.edges.begin());
}

inline Path prefix(const Graph& g, const Path& p, int k) {
  if (k < 0 || k > p.length()) throw std::invalid_argument("prefix length out of range");
  if (k == 0) return Path::at_vertex(range_of(g, p));
  return path_from_edges(g, std::vector<int>(p.edges.begin(), p.edges.begin() + k));
}

// The tail τ with p = prefix(p,k)·τ.
inline Path suffix_after(const Graph& g, const Path& p, int k) {
  if (k < 0 || k > p.length()) throw std::invalid_argument("suffix start out of range");
  if (k == p.length()) return Path::at_vertex(source_of(g, p));
  return path_from_edges(g, std::vector<int>(p.edges.begin() + k, p.edges.end()));
}

inline std::string render_path(const Graph& g, const Path& p) {
  if (p.empty()) return "@" + g.vertex_names[p.anchor];
  std::string out;
  for (size_t i = 0; i < p.edges.size(); ++i) {
    if (i) out += " ";
    out += g.edge_names[p.edges[i]];
  }
  return out;
}

/// validate: totality of r and d plus, when `boundary_ready`, the
/// no-source/no-sink condition required by the path-space modules.
/// Returns the (possibly empty) defect list instead of aborting.
inline std::vector<std::string> validate(const Graph& g, bool boundary_ready) {
  std::vector<std::string> defects;
  for (int e = 0; e < g.edge_count(); ++e) {
    if (g.edge_range[e] < 0 || g.edge_range[e] >= g.vertex_count())
      defects.push_back("edge " + g.edge_names[e] + ": r is not a vertex");
    if (g.edge_source[e] < 0 || g.edge_source[e] >= g.vertex_count())
      defects.push_back("edge " + g.edge_names[e] + ": d is not a vertex");
  }
  if (boundary_ready) {
    for (int v = 0; v < g.vertex_count(); ++v) {
      bool in_range = false, in_source = false;
      for (int e = 0; e < g.edge_count(); ++e) {
        in_range |= g.edge_range[e] == v;
        in_source |= g.edge_source[e] == v;
      }
      if (!in_range && !in_source)
        defects.push_back("vertex " + g.vertex_names[v] + " is source and sink");
      else if (!in_range)
        defects.push_back("vertex " + g.vertex_names[v] + " is a source");
      else if (!in_source)
        defects.push_back("vertex " + g.vertex_names[v] + " is a sink");
    }
  }
  return defects;
}

/// The single-vertex collapse Ẽ: same edges, one vertex, path monoid free
/// on E^1.  Idempotent: collapsing twice changes nothing.
inline Graph collapse(const Graph& g) {
  Graph out;
  out.vertex_names = {"*"};
  out.edge_names = g.edge_names;
  out.edge_range.assign(g.edge_count(), 0);
  out.edge_source.assign(g.edge_count(), 0);
  return out;
}

/// Q : E^* -> Ẽ^*; keeps edge words, sends every vertex to the empty word.
inline Path q_map(const Path& p) {
  Path out;
  out.anchor = 0;
  out.edges = p.edges;
  return out;
}

inline std::vector<Path> enumerate_paths(const Graph& g, int length) {
  std::vector<Path> cur;
  for (int v = 0; v < g.vertex_count(); ++v) cur.push_back(Path::at_vertex(v));
  for (int l = 0; l < length; ++l) {
    std::vector<Path> next;
    for (const auto& p : cur) {
      for (int e = 0; e < g.edge_count(); ++e) {
        if (g.edge_range[e] == source_of(g, p)) {
          Path q = p;
          q.edges.push_back(e);
          if (q.edges.size() == 1) q.anchor = g.edge_range[e];
          next.push_back(q);
        }
      }
    }
    cur = std::move(next);
  }
  return cur;
}

inline std::vector<Path> enumerate_paths_upto(const Graph& g, int max_length) {
  std::vector<Path> out;
  for (int l = 0; l <= max_length; ++l) {
    auto level = enumerate_paths(g, l);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

/// An eventually periodic infinite path head·cycle^∞, normalized so that
/// structural equality is exact point equality.
struct BoundaryPoint {
  std::vector<int> head;
  std::vector<int> cycle;  // nonempty

  int letter(int i) const {  // 0-based
    if (i < static_cast<int>(head.size())) return head[i];
    return cycle[(i - head.size()) % cycle.size()];
  }
  std::vector<int> prefix_letters(int k) const {
    std::vector<int> out;
    out.reserve(k);
    for (int i = 0; i < k; ++i) out.push_back(letter(i));
    return out;
  }
  friend bool operator==(const BoundaryPoint& a, const BoundaryPoint& b) {
    return a.head == b.head && a.cycle == b.cycle;
  }
  friend bool operator!=(const BoundaryPoint& a, const BoundaryPoint& b) { return !(a == b); }
};

inline bool is_valid_point(const Graph& g, const BoundaryPoint& x) {
  if (x.cycle.empty()) return false;
  std::vector<int> window = x.head;
  window.insert(window.end(), x.cycle.begin(), x.cycle.end());
  window.push_back(x.cycle.front());  // cycle must close up
  for (size_t i = 0; i + 1 < window.size(); ++i)
    if (g.edge_source[window[i]] != g.edge_range[window[i + 1]]) return false;
  return true;
}

inline int range_of(const Graph& g, const BoundaryPoint& x) {
  return x.head.empty() ? g.edge_range[x.cycle.front()] : g.edge_range[x.head.front()];
}

// Canonical form: primitive cycle, head as short as possible.
inline BoundaryPoint normalize(BoundaryPoint x) {
  const int n = static_cast<int>(x.cycle.size());
  for (int p = 1; p <= n; ++p) {
    if (n % p != 0) continue;
    bool periodic = true;
    for (int i = 0; i + p < n && periodic; ++i) periodic = x.cycle[i] == x.cycle[i + p];
    if (periodic) {
      x.cycle.resize(p);
      break;
    }
  }
  while (!x.head.empty() && x.head.back() == x.cycle.back()) {
    x.head.pop_back();
    std::rotate(x.cycle.begin(), x.cycle.end() - 1, x.cycle.end());
  }
  return x;
}

inline BoundaryPoint make_point(const Graph& g, std::vector<int> head, std::vector<int> cycle) {
  BoundaryPoint x{std::move(head), std::move(cycle)};
  if (!is_valid_point(g, x)) throw std::invalid_argument("not a composable infinite path");
  return normalize(std::move(x));
}

// Some eventually periodic point extending the given finite path; walks
// first extensions until a vertex repeats.  Needs a boundary-ready graph.
inline BoundaryPoint periodic_completion(const Graph& g, const Path& p) {
  std::vector<int> walk = p.edges;
  std::vector<int> seen_at(g.vertex_count(), -1);
  int v = source_of(g, p);
  seen_at[v] = static_cast<int>(walk.size());
  while (true) {
    auto ext = g.extensions_at(v);
    if (ext.empty()) throw std::invalid_argument("graph has a sink; no infinite path");
    walk.push_back(ext.front());
    v = g.edge_source[ext.front()];
    if (seen_at[v] >= 0) {
      std::vector<int> head(walk.begin(), walk.begin() + seen_at[v]);
      std::vector<int> cycle(walk.begin() + seen_at[v], walk.end());
      return make_point(g, std::move(head), std::move(cycle));
    }
    seen_at[v] = static_cast<int>(walk.size());
  }
}

inline bool has_prefix(const Graph& g, const BoundaryPoint& x, const Path& p) {
  if (p.empty()) return p.anchor == range_of(g, x);
  for (int i = 0; i < p.length(); ++i)
    if (x.letter(i) != p.edges[i]) return false;
  return true;
}

// x = p·tail: strip the prefix p.
inline BoundaryPoint strip_prefix(const Graph& g, const BoundaryPoint& x, const Path& p) {
  if (!has_prefix(g, x, p)) throw std::invalid_argument("point does not extend the prefix");
  const int k = p.length();
  BoundaryPoint out;
  if (k < static_cast<int>(x.head.size())) {
    out.head.assign(x.head.begin() + k, x.head.end());
    out.cycle = x.cycle;
  } else {
    const int r = (k - static_cast<int>(x.head.size())) % static_cast<int>(x.cycle.size());
    out.cycle = x.cycle;
    std::rotate(out.cycle.begin(), out.cycle.begin() + r, out.cycle.end());
  }
  return normalize(std::move(out));
}

inline BoundaryPoint prepend(const Graph& g, const Path& p, const BoundaryPoint& x) {
  if (range_of(g, x) != source_of(g, p))
    throw std::invalid_argument("prefix does not compose with the point");
  BoundaryPoint out = x;
  out.head.insert(out.head.begin(), p.edges.begin(), p.edges.end());
  return normalize(std::move(out));
}

inline std::string render_point(const Graph& g, const BoundaryPoint& x, int show = 8) {
  std::string out;
  for (int i = 0; i < show; ++i) {
    if (i) out += " ";
    out += g.edge_names[x.letter(i)];
  }
  out += " ...";
  return out;
}

}  // namespace selfsim

#endif
