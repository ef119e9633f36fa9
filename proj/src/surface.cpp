#include "modlab/surface.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace modlab {

int MarkedSurface::euler() const {
  return graph.nv - graph.ne() - n_internal() + static_cast<int>(relations.size());
}

void validate(const MarkedSurface& s) {
  const auto& g = s.graph;
  if (static_cast<int>(g.tgt.size()) != g.ne()) throw std::invalid_argument("src/tgt size mismatch");
  std::vector<int> edge_seen(g.ne(), 0), vertex_seen(g.nv, 0);
  for (size_t c = 0; c < g.cycles.size(); ++c) {
    const auto& cyc = g.cycles[c];
    if (cyc.empty()) throw std::invalid_argument("empty boundary cycle");
    for (size_t i = 0; i < cyc.size(); ++i) {
      int e = cyc[i], nxt = cyc[(i + 1) % cyc.size()];
      if (e < 0 || e >= g.ne()) throw std::invalid_argument("cycle refers to unknown edge");
      if (g.tgt[e] != g.src[nxt]) throw std::invalid_argument("cycle " + std::to_string(c) + " is not closed");
      ++edge_seen[e];
      ++vertex_seen[g.src[e]];
    }
  }
  for (int e = 0; e < g.ne(); ++e)
    if (edge_seen[e] != 1) throw std::invalid_argument("edge not on exactly one cycle");
  for (int v = 0; v < g.nv; ++v)
    if (vertex_seen[v] != 1) throw std::invalid_argument("vertex not on exactly one cycle");
  std::vector<int> in_rel(g.ne(), 0);
  for (const auto& w : s.relations)
    for (const auto& l : w) {
      if (l.internal) {
        if (l.gen < 0 || l.gen >= s.n_internal()) throw std::invalid_argument("unknown internal generator");
        continue;
      }
      if (l.gen < 0 || l.gen >= g.ne()) throw std::invalid_argument("relation refers to unknown edge");
      if (l.exp != 1) throw std::invalid_argument("edge with non-positive exponent in a relation");
      ++in_rel[l.gen];
    }
  for (int e = 0; e < g.ne(); ++e)
    if (in_rel[e] != 1) throw std::invalid_argument("edge does not appear exactly once in the relations");
}

namespace {

Word boundary_word(const std::vector<int>& cyc) {
  Word w;
  for (auto it = cyc.rbegin(); it != cyc.rend(); ++it) w.push_back({*it, false, 1});
  return w;
}

}  // namespace

MarkedSurface new_polygon(int n) {
  if (n <= 0) throw std::invalid_argument("polygon needs n >= 1");
  MarkedSurface s;
  s.graph.nv = n;
  std::vector<int> cyc;
  for (int k = 0; k < n; ++k) {
    s.graph.src.push_back((k + n - 1) % n);
    s.graph.tgt.push_back(k);
    cyc.push_back(k);
    s.edge_names.push_back("e" + std::to_string(k + 1));
  }
  s.graph.cycles.push_back(cyc);
  s.relations.push_back(boundary_word(cyc));
  return s;
}

namespace {

std::vector<bool> edge_set(const BoundaryGraph& g, const std::vector<int>& S) {
  std::vector<bool> in(g.ne(), false);
  for (int e : S) {
    if (e < 0 || e >= g.ne()) throw std::invalid_argument("unknown edge index " + std::to_string(e));
    in[e] = true;
  }
  return in;
}

std::vector<bool> surviving_vertices(const BoundaryGraph& g, const std::vector<bool>& inS) {
  std::vector<bool> keep(g.nv, true);
  for (int e = 0; e < g.ne(); ++e)
    if (inS[e]) keep[g.src[e]] = keep[g.tgt[e]] = false;
  return keep;
}

}  // namespace

NondegeneracyReport check_gluing_nondegenerate(const BoundaryGraph& g, const std::vector<int>& S) {
  auto inS = edge_set(g, S);
  auto keep = surviving_vertices(g, inS);
  NondegeneracyReport r;
  std::ostringstream diag;
  for (size_t c = 0; c < g.cycles.size(); ++c) {
    const auto& cyc = g.cycles[c];
    std::vector<int> pos;
    for (size_t i = 0; i < cyc.size(); ++i)
      if (inS[cyc[i]]) pos.push_back(static_cast<int>(i));
    if (pos.empty()) continue;
    if (cyc.size() == 1) continue;  // a loop in S
    bool has_vertex = false;
    for (int e : cyc) has_vertex = has_vertex || keep[g.src[e]];
    if (!has_vertex) {
      r.pass = false;
      diag << "cycle " << c << ": no vertex survives the gluing; ";
    }
    const int len = static_cast<int>(cyc.size()), k = static_cast<int>(pos.size());
    for (int i = 0; i < k; ++i) {
      int a = pos[i], b = pos[(i + 1) % k];
      int gap = (k == 1) ? len - 1 : ((b - a + len) % len) - 1;
      if (gap < 2) {
        r.pass = false;
        diag << "cycle " << c << ": " << gap << " non-glued edge(s) between edges " << cyc[a] << " and " << cyc[b]
             << "; ";
      }
    }
  }
  r.diagnostics = diag.str();
  return r;
}

GluingMap glue_double(const MarkedSurface& s, const std::vector<int>& S) {
  validate(s);
  if (s.n_internal() > 0) throw std::invalid_argument("regluing presentations with internal generators is not supported");
  const auto& g = s.graph;
  auto rep = check_gluing_nondegenerate(g, S);
  if (!rep.pass) throw std::invalid_argument("degenerate gluing: " + rep.diagnostics);
  auto inS = edge_set(g, S);
  GluingMap gm;
  gm.base = s;
  gm.S = S;
  gm.in_vprime = surviving_vertices(g, inS);
  gm.i1.assign(g.nv, -1);
  gm.i2.assign(g.nv, -1);
  gm.j1.assign(g.ne(), -1);
  gm.j2.assign(g.ne(), -1);
  gm.merged.assign(g.ne(), false);
  int nv = 0;
  for (int v = 0; v < g.nv; ++v)
    if (gm.in_vprime[v]) gm.i1[v] = nv++;
  for (int v = 0; v < g.nv; ++v)
    if (gm.in_vprime[v]) gm.i2[v] = nv++;
  MarkedSurface& h = gm.hat;
  h.graph.nv = nv;
  auto name = [&](int e) { return s.edge_names.empty() ? "e" + std::to_string(e + 1) : s.edge_names[e]; };
  auto add_edge = [&](int src, int tgt, std::vector<Piece> pieces, std::string nm, bool copy1, int origin) {
    h.graph.src.push_back(src);
    h.graph.tgt.push_back(tgt);
    h.edge_names.push_back(std::move(nm));
    gm.pieces.push_back(std::move(pieces));
    gm.hat_from_copy1.push_back(copy1);
    gm.hat_origin.push_back(origin);
    return h.graph.ne() - 1;
  };
  auto copy2 = [&](int f) {
    return gm.j2[f] = add_edge(gm.i2[g.src[f]], gm.i2[g.tgt[f]], {{2, f, 1}}, "j2(" + name(f) + ")", false, f);
  };
  auto copy1 = [&](int f) {
    return gm.j1[f] = add_edge(gm.i1[g.tgt[f]], gm.i1[g.src[f]], {{1, f, -1}}, "j1(" + name(f) + ")", true, f);
  };
  for (const auto& cyc : g.cycles) {
    std::vector<int> pos;
    for (size_t i = 0; i < cyc.size(); ++i)
      if (inS[cyc[i]]) pos.push_back(static_cast<int>(i));
    if (pos.empty()) {
      std::vector<int> c2, c1;
      for (int f : cyc) c2.push_back(copy2(f));
      for (auto it = cyc.rbegin(); it != cyc.rend(); ++it) c1.push_back(copy1(*it));
      h.graph.cycles.push_back(c2);
      h.graph.cycles.push_back(c1);
      h.relations.push_back(boundary_word(c2));
      h.relations.push_back(boundary_word(c1));
      continue;
    }
    if (cyc.size() == 1) continue;
    const int len = static_cast<int>(cyc.size());
    std::vector<std::vector<int>> hat_cycles;
    for (size_t k = 0; k < pos.size(); ++k) {
      std::vector<int> arc;
      for (int i = (pos[k] + 1) % len; !inS[cyc[i]]; i = (i + 1) % len) arc.push_back(cyc[i]);
      const int m = static_cast<int>(arc.size());
      const int f1 = arc.front(), fm = arc.back();
      std::vector<int> hc;
      int e1 = add_edge(gm.i1[g.tgt[f1]], gm.i2[g.tgt[f1]], {{1, f1, -1}, {2, f1, 1}}, "m(" + name(f1) + ")", false, f1);
      gm.j1[f1] = gm.j2[f1] = e1;
      gm.merged[f1] = true;
      hc.push_back(e1);
      for (int i = 1; i + 1 < m; ++i) hc.push_back(copy2(arc[i]));
      int em = add_edge(gm.i2[g.src[fm]], gm.i1[g.src[fm]], {{2, fm, 1}, {1, fm, -1}}, "m(" + name(fm) + ")", false, fm);
      gm.j1[fm] = gm.j2[fm] = em;
      gm.merged[fm] = true;
      hc.push_back(em);
      for (int i = m - 2; i >= 1; --i) hc.push_back(copy1(arc[i]));
      hat_cycles.push_back(hc);
      h.graph.cycles.push_back(hc);
    }
    if (hat_cycles.size() == 1) {
      h.relations.push_back(boundary_word(hat_cycles[0]));
    } else {
      // sphere with k holes: one relation, k - 1 connecting generators from the first cycle's base vertex
      const int w1 = h.graph.src[hat_cycles[0][0]];
      Word w = boundary_word(hat_cycles[0]);
      for (size_t k = 1; k < hat_cycles.size(); ++k) {
        const int t = h.n_internal();
        h.int_src.push_back(w1);
        h.int_tgt.push_back(h.graph.src[hat_cycles[k][0]]);
        w.push_back({t, true, -1});
        for (const auto& l : boundary_word(hat_cycles[k])) w.push_back(l);
        w.push_back({t, true, 1});
      }
      h.relations.push_back(w);
    }
  }
  validate(h);
  return gm;
}

std::string decoration_problem(const Decoration& d) {
  for (size_t v = 0; v < d.vertices.size(); ++v) {
    auto r = is_lagrangian_subalgebra(d.vertices[v]);
    if (!r.pass) return "vertex " + std::to_string(v) + ": " + r.reason;
  }
  return {};
}

Decoration symmetric_decoration(const Decoration& d, const GluingMap& gm) {
  const auto& g = gm.base.graph;
  if (static_cast<int>(d.edges.size()) != g.ne() || static_cast<int>(d.vertices.size()) != g.nv)
    throw std::invalid_argument("decoration does not match the surface");
  Decoration out;
  out.vertices.resize(gm.hat.graph.nv);
  out.edges.resize(gm.hat.graph.ne());
  for (int v = 0; v < g.nv; ++v) {
    if (!gm.in_vprime[v]) continue;
    out.vertices[gm.i1[v]] = bar(d.vertices[v]);
    out.vertices[gm.i2[v]] = d.vertices[v];
  }
  for (int e = 0; e < g.ne(); ++e) {
    if (gm.j1[e] < 0) continue;
    if (gm.merged[e]) {
      if (!is_subgroup(d.edges[e]))
        throw std::invalid_argument("edge " + std::to_string(e) + " is adjacent to a glued edge but its set is not a subgroup");
      out.edges[gm.j1[e]] = d.edges[e];
    } else {
      out.edges[gm.j1[e]] = hs_inverse(d.edges[e]);
      out.edges[gm.j2[e]] = d.edges[e];
    }
  }
  return out;
}

Decoration base_decoration(const Decoration& d, const GluingMap& gm) {
  const auto& g = gm.base.graph;
  if (static_cast<int>(d.edges.size()) != g.ne() || static_cast<int>(d.vertices.size()) != g.nv)
    throw std::invalid_argument("decoration does not match the surface");
  Decoration out = d;
  std::vector<bool> inS(g.ne(), false);
  for (int e : gm.S) inS[e] = true;
  for (int e = 0; e < g.ne(); ++e)
    if (inS[e] || gm.merged[e]) out.edges[e] = hs_full();
  for (int v = 0; v < g.nv; ++v)
    if (!gm.in_vprime[v]) out.vertices[v] = diagonal(d.vertices[v].amb);
  return out;
}

std::vector<int> lift_edges(const GluingMap& gm, const std::vector<int>& T) {
  std::set<int> sset(gm.S.begin(), gm.S.end());
  std::vector<int> out;
  for (int t : T) {
    if (t < 0 || t >= gm.base.graph.ne()) throw std::invalid_argument("unknown edge index");
    if (sset.count(t)) throw std::invalid_argument("S and T must be disjoint");
    out.push_back(gm.j1[t]);
    if (!gm.merged[t]) out.push_back(gm.j2[t]);
  }
  return out;
}

namespace {

template <class Key>
std::vector<std::vector<Key>> canonical(std::vector<std::vector<Key>> cycles) {
  for (auto& c : cycles) {
    std::vector<Key> best = c;
    for (size_t r = 1; r < c.size(); ++r) {
      std::vector<Key> rot(c.begin() + r, c.end());
      rot.insert(rot.end(), c.begin(), c.begin() + r);
      if (rot < best) best = rot;
    }
    c = best;
  }
  std::sort(cycles.begin(), cycles.end());
  return cycles;
}

// outer gluing of an inner gluing; swap = true when the inner copies index T
std::vector<std::vector<std::vector<QuadPiece>>> quad_cycles(const GluingMap& inner, const GluingMap& outer, bool swap) {
  std::vector<std::vector<std::vector<QuadPiece>>> cycles;
  for (const auto& cyc : outer.hat.graph.cycles) {
    std::vector<std::vector<QuadPiece>> keys;
    for (int e : cyc) {
      std::vector<QuadPiece> key;
      for (const auto& op : outer.pieces[e]) {
        auto ip = inner.pieces[op.edge];
        if (op.dir < 0) std::reverse(ip.begin(), ip.end());
        for (const auto& p : ip) {
          int cs = swap ? op.copy : p.copy, ct = swap ? p.copy : op.copy;
          key.emplace_back(cs, ct, p.edge, p.dir * op.dir);
        }
      }
      keys.push_back(key);
    }
    cycles.push_back(keys);
  }
  return canonical(cycles);
}

}  // namespace

std::vector<std::vector<std::vector<Piece>>> canonical_cycles(const GluingMap& gm) {
  std::vector<std::vector<std::vector<Piece>>> cycles;
  for (const auto& cyc : gm.hat.graph.cycles) {
    std::vector<std::vector<Piece>> keys;
    for (int e : cyc) keys.push_back(gm.pieces[e]);
    cycles.push_back(keys);
  }
  return canonical(cycles);
}

DoubleGlue double_glue(const MarkedSurface& s, const std::vector<int>& S, const std::vector<int>& T) {
  DoubleGlue dg;
  dg.s_hat = glue_double(s, S);
  dg.lift_T = lift_edges(dg.s_hat, T);
  dg.st = glue_double(dg.s_hat.hat, dg.lift_T);
  dg.t_hat = glue_double(s, T);
  dg.lift_S = lift_edges(dg.t_hat, S);
  dg.ts = glue_double(dg.t_hat.hat, dg.lift_S);
  dg.cycles_st = quad_cycles(dg.s_hat, dg.st, false);
  dg.cycles_ts = quad_cycles(dg.t_hat, dg.ts, true);
  dg.isomorphic = dg.cycles_st == dg.cycles_ts && dg.st.hat.graph.nv == dg.ts.hat.graph.nv;
  return dg;
}

std::string surface_to_json(const MarkedSurface& s) {
  using nlohmann::json;
  auto ename = [&](int e) { return s.edge_names.empty() ? "e" + std::to_string(e + 1) : s.edge_names[e]; };
  json j;
  j["cycles"] = json::array();
  for (const auto& c : s.graph.cycles) {
    json cj = json::array();
    for (int e : c) cj.push_back(ename(e));
    j["cycles"].push_back(cj);
  }
  j["src"] = json::object();
  j["tgt"] = json::object();
  for (int e = 0; e < s.graph.ne(); ++e) {
    j["src"][ename(e)] = "v" + std::to_string(s.graph.src[e] + 1);
    j["tgt"][ename(e)] = "v" + std::to_string(s.graph.tgt[e] + 1);
  }
  return j.dump();
}

MarkedSurface surface_from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  MarkedSurface s;
  std::map<std::string, int> eidx, vidx;
  auto vertex = [&](const std::string& v) {
    auto it = vidx.find(v);
    if (it != vidx.end()) return it->second;
    int k = static_cast<int>(vidx.size());
    vidx[v] = k;
    return k;
  };
  for (const auto& cj : j.at("cycles")) {
    std::vector<int> cyc;
    for (const auto& ej : cj) {
      std::string e = ej.get<std::string>();
      if (eidx.count(e)) throw std::invalid_argument("edge listed twice: " + e);
      int k = static_cast<int>(eidx.size());
      eidx[e] = k;
      s.edge_names.push_back(e);
      s.graph.src.push_back(vertex(j.at("src").at(e).get<std::string>()));
      s.graph.tgt.push_back(vertex(j.at("tgt").at(e).get<std::string>()));
      cyc.push_back(k);
    }
    s.graph.cycles.push_back(cyc);
    s.relations.push_back(boundary_word(cyc));
  }
  s.graph.nv = static_cast<int>(vidx.size());
  validate(s);
  return s;
}

}  // namespace modlab
