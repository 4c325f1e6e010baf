#include "pellabel/moves.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "face_walk.hpp"

namespace pellabel {

namespace {

using walkdetail::rot_successor;
using walkdetail::rot_predecessor;
using walkdetail::first_alive_edge;
using walkdetail::Step;
using walkdetail::Walk;
using walkdetail::face_walk;

// A tracked point of the facial walk, stable across surgery. Either the
// corner gap that follows arrival end `after`, or the interior point at
// distance `off` into the dart (edge, side).
struct Tok {
    bool gap = false;
    int vertex = -1, after = -1;
    int edge = -1, side = -1;
    Rat off;
};

Tok locate(const MetricGraph& g, const Walk& w, const Rat& pos_in) {
    Rat pos = rat_mod(pos_in, w.total);
    size_t n = w.steps.size();
    for (size_t i = 0; i < n; ++i) {
        const Step& s = w.steps[i];
        if (pos == s.start) {
            const Step& p = w.steps[(i + n - 1) % n];
            Tok t;
            t.gap = true;
            t.after = 2 * p.edge + (1 - p.from);
            t.vertex = g.vertex_at_end(t.after);
            return t;
        }
        if (pos > s.start && pos < s.start + g.edges[s.edge].height) {
            Tok t;
            t.edge = s.edge;
            t.side = s.from;
            t.off = pos - s.start;
            return t;
        }
    }
    throw std::logic_error("moves: position not on the walk");
}

Rat tok_position(const MetricGraph& g, const Walk& w, const Tok& t) {
    for (const Step& s : w.steps) {
        if (t.gap) {
            if (2 * s.edge + (1 - s.from) == t.after)
                return rat_mod(s.start + g.edges[s.edge].height, w.total);
        } else if (s.edge == t.edge && s.from == t.side) {
            return s.start + t.off;
        }
    }
    throw std::logic_error("moves: token not on the walk");
}

// Splits edge e at distance `cut` from its side-0 endpoint. e keeps the
// lower part, a new edge takes the upper; returns the new vertex. Interior
// tokens sitting exactly at the cut become the corner gap on their own side.
int subdivide(MetricGraph& g, std::vector<Tok>& toks, int e, const Rat& cut) {
    Rat h = g.edges[e].height;
    if (!(cut > 0) || !(cut < h)) throw std::logic_error("moves: subdivision point not interior");
    int t = g.add_vertex();
    int v1 = g.edges[e].ends[1];
    Edge up;
    up.ends = {t, v1};
    up.height = h - cut;
    int f = static_cast<int>(g.edges.size());
    g.edges.push_back(up);
    g.edges[e].ends[1] = t;
    g.edges[e].height = cut;
    for (int& end : g.vertices[v1].rotation)
        if (end == 2 * e + 1) end = 2 * f + 1;
    g.vertices[t].rotation = {2 * e + 1, 2 * f + 0};
    for (Tok& k : toks) {
        if (k.gap) {
            if (k.after == 2 * e + 1) {
                k.after = 2 * f + 1;
                k.vertex = v1;
            }
            continue;
        }
        if (k.edge != e) continue;
        if (k.side == 0) {
            if (k.off == cut) {
                k = Tok{true, t, 2 * e + 1, -1, -1, Rat(0)};
            } else if (k.off > cut) {
                k.edge = f;
                k.off -= cut;
            }
        } else {
            Rat geo = h - k.off;  // distance from side 0
            if (geo == cut) {
                k = Tok{true, t, 2 * f + 0, -1, -1, Rat(0)};
            } else if (geo > cut) {
                k.edge = f;
            } else {
                k.off -= h - cut;
            }
        }
    }
    return t;
}

// Erases an order-0 degree-2 vertex between two vertical edges, splicing
// them into the lower edge's slot. Corner tokens at v become interior.
void merge2(MetricGraph& g, std::vector<Tok>& toks, int v) {
    int p = g.vertices[v].rotation[0];
    int q = g.vertices[v].rotation[1];
    int ep = p / 2, eq = q / 2;
    if (ep == eq) throw std::logic_error("moves: cannot merge a loop");
    Rat hp = g.edges[ep].height, hq = g.edges[eq].height;
    int endA = 2 * ep + (1 - p % 2);
    int endB = 2 * eq + (1 - q % 2);
    int A = g.vertex_at_end(endA), B = g.vertex_at_end(endB);
    for (Tok& k : toks) {
        if (k.gap) {
            if (k.vertex == v) {
                if (k.after == p)
                    k = Tok{false, -1, -1, ep, 0, hp};
                else if (k.after == q)
                    k = Tok{false, -1, -1, ep, 1, hq};
                else
                    throw std::logic_error("moves: stray token at merged vertex");
            } else if (k.after == endA) {
                k.after = 2 * ep + 0;
            } else if (k.after == endB) {
                k.after = 2 * ep + 1;
            }
            continue;
        }
        if (k.edge == ep) {
            if (k.side == 1 - p % 2) {
                k.side = 0;
            } else {
                k.side = 1;
                k.off += hq;
            }
            k.edge = ep;
        } else if (k.edge == eq) {
            if (k.side == 1 - q % 2) {
                k.side = 1;
            } else {
                k.side = 0;
                k.off += hp;
            }
            k.edge = ep;
        }
    }
    g.edges[ep].ends = {A, B};
    g.edges[ep].height = hp + hq;
    for (int& end : g.vertices[A].rotation)
        if (end == endA) end = 2 * ep + 0;
    for (int& end : g.vertices[B].rotation)
        if (end == endB) end = 2 * ep + 1;
    g.edges[eq].alive = false;
    g.vertices[v].alive = false;
    g.vertices[v].rotation.clear();
}

bool purely_vertical_deg2(const MetricGraph& g, int v) {
    if (!g.vertices[v].alive || g.vertices[v].rotation.size() != 2) return false;
    for (int end : g.vertices[v].rotation)
        if (g.edges[end / 2].horizontal) return false;
    return true;
}

void normalize(MetricGraph& g, std::vector<Tok>& toks) {
    for (size_t v = 0; v < g.vertices.size(); ++v)
        if (purely_vertical_deg2(g, static_cast<int>(v))) merge2(g, toks, static_cast<int>(v));
}

// Compacts away dead slots, preserving relative order of ids.
void rebuild(MetricGraph& g, std::vector<Tok>& toks) {
    std::vector<int> vmap(g.vertices.size(), -1), emap(g.edges.size(), -1);
    MetricGraph out;
    out.scale = g.scale;
    for (size_t v = 0; v < g.vertices.size(); ++v)
        if (g.vertices[v].alive) {
            vmap[v] = out.add_vertex();
        }
    for (size_t e = 0; e < g.edges.size(); ++e)
        if (g.edges[e].alive) {
            emap[e] = static_cast<int>(out.edges.size());
            Edge ne = g.edges[e];
            ne.ends = {vmap[ne.ends[0]], vmap[ne.ends[1]]};
            out.edges.push_back(ne);
        }
    for (size_t v = 0; v < g.vertices.size(); ++v)
        if (g.vertices[v].alive) {
            Vertex& nv = out.vertices[vmap[v]];
            for (int end : g.vertices[v].rotation) nv.rotation.push_back(2 * emap[end / 2] + end % 2);
        }
    for (Tok& k : toks) {
        if (k.gap) {
            k.vertex = vmap[k.vertex];
            k.after = 2 * emap[k.after / 2] + k.after % 2;
        } else {
            k.edge = emap[k.edge];
        }
    }
    g = std::move(out);
}

// Appends src into dst; returns the end-id offset applied to src tokens.
int concat(MetricGraph& dst, const MetricGraph& src, std::vector<Tok>& src_toks) {
    int voff = static_cast<int>(dst.vertices.size());
    int eoff = static_cast<int>(dst.edges.size());
    for (const Vertex& v : src.vertices) {
        Vertex nv = v;
        for (int& end : nv.rotation) end += 2 * eoff;
        dst.vertices.push_back(nv);
    }
    for (const Edge& e : src.edges) {
        Edge ne = e;
        ne.ends = {ne.ends[0] + voff, ne.ends[1] + voff};
        dst.edges.push_back(ne);
    }
    dst.scale += src.scale;
    for (Tok& k : src_toks) {
        if (k.gap) {
            k.vertex += voff;
            k.after += 2 * eoff;
        } else {
            k.edge += eoff;
        }
    }
    return eoff;
}

// Splices vb's rotation into va's, opening the gap after `after_a` with the
// material that follows `after_b`. vb dies; its ends re-home to va.
void fuse(MetricGraph& g, std::vector<Tok>& toks, int va, int after_a, int vb, int after_b) {
    std::vector<int>& ra = g.vertices[va].rotation;
    std::vector<int>& rb = g.vertices[vb].rotation;
    size_t ia = std::find(ra.begin(), ra.end(), after_a) - ra.begin();
    size_t ib = std::find(rb.begin(), rb.end(), after_b) - rb.begin();
    if (ia == ra.size() || ib == rb.size()) throw std::logic_error("moves: fuse gap not found");
    std::vector<int> merged;
    for (size_t i = 0; i <= ia; ++i) merged.push_back(ra[i]);
    for (size_t j = 1; j <= rb.size(); ++j) merged.push_back(rb[(ib + j) % rb.size()]);
    for (size_t i = ia + 1; i < ra.size(); ++i) merged.push_back(ra[i]);
    for (int end : rb) g.edges[end / 2].ends[end % 2] = va;
    ra = std::move(merged);
    rb.clear();
    g.vertices[vb].alive = false;
    for (Tok& k : toks)
        if (k.gap && k.vertex == vb) k.vertex = va;
}

// Extracts the connected component containing `root` into a fresh graph.
// Tokens belonging to it are rewritten in place and flagged in `taken`.
MetricGraph extract_component(const MetricGraph& g, int root, std::vector<Tok>& toks,
                              std::vector<bool>& taken) {
    std::set<int> vs;
    std::vector<int> stack{root};
    vs.insert(root);
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int end : g.vertices[v].rotation) {
            int w = g.vertex_at_end(2 * (end / 2) + (1 - end % 2));
            if (vs.insert(w).second) stack.push_back(w);
        }
    }
    std::vector<int> vmap(g.vertices.size(), -1), emap(g.edges.size(), -1);
    MetricGraph out;
    out.scale = 0;
    for (size_t v = 0; v < g.vertices.size(); ++v)
        if (g.vertices[v].alive && vs.count(static_cast<int>(v)))
            vmap[v] = out.add_vertex();
    for (size_t e = 0; e < g.edges.size(); ++e) {
        if (!g.edges[e].alive || !vs.count(g.edges[e].ends[0])) continue;
        emap[e] = static_cast<int>(out.edges.size());
        Edge ne = g.edges[e];
        ne.ends = {vmap[ne.ends[0]], vmap[ne.ends[1]]};
        out.edges.push_back(ne);
        if (!ne.horizontal) out.scale += ne.height;
    }
    for (size_t v = 0; v < g.vertices.size(); ++v)
        if (vmap[v] >= 0)
            for (int end : g.vertices[v].rotation)
                out.vertices[vmap[v]].rotation.push_back(2 * emap[end / 2] + end % 2);
    for (size_t i = 0; i < toks.size(); ++i) {
        Tok& k = toks[i];
        bool mine = k.gap ? vmap[k.vertex] >= 0 : emap[k.edge] >= 0;
        if (!mine) continue;
        taken[i] = true;
        if (k.gap) {
            k.vertex = vmap[k.vertex];
            k.after = 2 * emap[k.after / 2] + k.after % 2;
        } else {
            k.edge = emap[k.edge];
        }
    }
    return out;
}

bool tok_is_branch(const MetricGraph& g, const Tok& t) {
    return t.gap && vertex_order(g, t.vertex) % 2 != 0;
}

// Endpoint bookkeeping: which cord endpoints live on one component.
struct Anchor {
    int cord;
    int side;  // 0 = a, 1 = b
};

BoundaryPoint& point_of(CordGraph& cg, const Anchor& a) {
    return a.side == 0 ? cg.cords[a.cord].a : cg.cords[a.cord].b;
}

const BoundaryPoint& point_of(const CordGraph& cg, const Anchor& a) {
    return a.side == 0 ? cg.cords[a.cord].a : cg.cords[a.cord].b;
}

std::vector<Anchor> anchors_on(const CordGraph& cg, int comp) {
    std::vector<Anchor> out;
    for (size_t k = 0; k < cg.cords.size(); ++k) {
        if (cg.cords[k].a.component == comp) out.push_back({static_cast<int>(k), 0});
        if (cg.cords[k].b.component == comp) out.push_back({static_cast<int>(k), 1});
    }
    return out;
}

void check_cord_tree(const CordGraph& cg, const char* move) {
    size_t nc = cg.components.size();
    if (cg.cords.size() + 1 != nc)
        throw std::logic_error(std::string(move) + ": cords do not form a tree");
    std::vector<int> parent(nc);
    for (size_t i = 0; i < nc; ++i) parent[i] = static_cast<int>(i);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const Cord& c : cg.cords) {
        if (c.a.component == c.b.component)
            throw std::logic_error(std::string(move) + ": cord joins a component to itself");
        int ra = find(c.a.component), rb = find(c.b.component);
        if (ra == rb) throw std::logic_error(std::string(move) + ": cords close a cycle");
        parent[ra] = rb;
    }
    for (size_t i = 0; i < nc; ++i) {
        std::set<Rat> seen;
        for (const Anchor& an : anchors_on(cg, static_cast<int>(i))) {
            const BoundaryPoint& p =
                an.side == 0 ? cg.cords[an.cord].a : cg.cords[an.cord].b;
            if (!seen.insert(p.position).second)
                throw std::logic_error(std::string(move) + ": two cords share an attachment point");
        }
    }
}

void append(MoveLog* log, MoveRecord rec) {
    if (log) log->push_back(std::move(rec));
}

}  // namespace

Rat CordGraph::total_height() const {
    Rat t = 0;
    for (const MetricGraph& c : components) t += c.scale;
    return t;
}

bool at_branch_point(const MetricGraph& g, const Rat& position) {
    Walk w = face_walk(g);
    return tok_is_branch(g, locate(g, w, position));
}

CordGraph cordify(const MetricGraph& g, MoveLog* log) {
    std::vector<std::string> viol = validate(g);
    if (!viol.empty())
        throw std::invalid_argument("cordify: graph is not admissible: " + viol.front());

    // Horizontal components via union-find over shared vertices.
    std::map<int, int> hparent;
    for (size_t e = 0; e < g.edges.size(); ++e)
        if (g.edges[e].alive && g.edges[e].horizontal) hparent[static_cast<int>(e)] = static_cast<int>(e);
    std::function<int(int)> hfind = [&](int x) {
        while (hparent[x] != x) x = hparent[x] = hparent[hparent[x]];
        return x;
    };
    for (size_t v = 0; v < g.vertices.size(); ++v) {
        int prev = -1;
        for (int end : g.vertices[v].rotation) {
            if (!g.edges[end / 2].horizontal) continue;
            if (prev >= 0) hparent[hfind(prev)] = hfind(end / 2);
            prev = end / 2;
        }
    }
    std::map<int, std::vector<int>> bridges;  // representative -> edges
    for (auto& [e, _] : hparent) bridges[hfind(e)].push_back(e);

    struct BridgeMark {
        int hedge;    // lower horizontal edge id, for ordering
        int vertex;   // attachment tail (original id)
        int after;    // vertical predecessor end of the out-end
    };
    std::vector<std::pair<BridgeMark, BridgeMark>> marks;
    for (auto& [rep, es] : bridges) {
        if (es.size() != 2)
            throw std::invalid_argument("cordify: horizontal component is not a two-edge cord");
        std::sort(es.begin(), es.end());
        BridgeMark m[2];
        for (int i = 0; i < 2; ++i) {
            int e = es[i];
            int tail = g.edges[e].ends[0];
            bool has_vertical = false;
            for (int end : g.vertices[tail].rotation)
                if (!g.edges[end / 2].horizontal) has_vertical = true;
            if (!has_vertical)
                throw std::invalid_argument("cordify: horizontal component is not a two-edge cord");
            int pred = rot_predecessor(g.vertices[tail], 2 * e + 0);
            if (g.edges[pred / 2].horizontal)
                throw std::invalid_argument("cordify: horizontal component is not a two-edge cord");
            m[i] = {e, tail, pred};
        }
        marks.push_back({m[0], m[1]});
    }
    std::sort(marks.begin(), marks.end(),
              [](const auto& x, const auto& y) { return x.first.hedge < y.first.hedge; });

    // Vertical skeleton: drop horizontal edges and pure-horizontal vertices.
    MetricGraph skel = g;
    for (size_t e = 0; e < skel.edges.size(); ++e)
        if (skel.edges[e].alive && skel.edges[e].horizontal) skel.edges[e].alive = false;
    for (size_t v = 0; v < skel.vertices.size(); ++v) {
        std::vector<int>& rot = skel.vertices[v].rotation;
        rot.erase(std::remove_if(rot.begin(), rot.end(),
                                 [&](int end) { return g.edges[end / 2].horizontal; }),
                  rot.end());
        if (rot.empty()) skel.vertices[v].alive = false;
    }

    // Components ordered by smallest vertical edge id.
    std::vector<int> comp_of_vertex(skel.vertices.size(), -1);
    std::vector<MetricGraph> comps;
    std::vector<std::vector<Tok>> comp_toks;
    std::vector<std::vector<int>> comp_anchor;  // parallel: index into flat marks
    std::vector<std::pair<int, int>> flat;      // (bridge idx, side)
    for (size_t e = 0; e < skel.edges.size(); ++e) {
        if (!skel.edges[e].alive || comp_of_vertex[skel.edges[e].ends[0]] >= 0) continue;
        int ci = static_cast<int>(comps.size());
        std::vector<Tok> dummy;
        std::vector<bool> taken;
        MetricGraph part = extract_component(skel, skel.edges[e].ends[0], dummy, taken);
        // record membership before ids were remapped
        std::vector<int> stack{skel.edges[e].ends[0]};
        comp_of_vertex[skel.edges[e].ends[0]] = ci;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int end : skel.vertices[v].rotation) {
                int w = skel.vertex_at_end(2 * (end / 2) + (1 - end % 2));
                if (comp_of_vertex[w] < 0) {
                    comp_of_vertex[w] = ci;
                    stack.push_back(w);
                }
            }
        }
        comps.push_back(std::move(part));
        comp_toks.emplace_back();
        comp_anchor.emplace_back();
    }
    // extract_component remaps ids; rebuild the per-component vertex maps the
    // same way it does (ascending original id).
    std::vector<int> new_vid(skel.vertices.size(), -1), new_eid(skel.edges.size(), -1);
    {
        std::vector<int> vcount(comps.size(), 0), ecount(comps.size(), 0);
        for (size_t v = 0; v < skel.vertices.size(); ++v)
            if (skel.vertices[v].alive && comp_of_vertex[v] >= 0)
                new_vid[v] = vcount[comp_of_vertex[v]]++;
        for (size_t e = 0; e < skel.edges.size(); ++e)
            if (skel.edges[e].alive) new_eid[e] = ecount[comp_of_vertex[skel.edges[e].ends[0]]]++;
    }

    CordGraph cg;
    cg.cords.resize(marks.size());
    for (size_t j = 0; j < marks.size(); ++j) {
        const auto& [ma, mb] = marks[j];
        for (int side = 0; side < 2; ++side) {
            const BridgeMark& m = side == 0 ? ma : mb;
            int ci = comp_of_vertex[m.vertex];
            Tok t;
            t.gap = true;
            t.vertex = new_vid[m.vertex];
            t.after = 2 * new_eid[m.after / 2] + m.after % 2;
            comp_toks[ci].push_back(t);
            comp_anchor[ci].push_back(static_cast<int>(2 * j + side));
            (side == 0 ? cg.cords[j].a : cg.cords[j].b).component = ci;
        }
    }
    for (size_t ci = 0; ci < comps.size(); ++ci) {
        normalize(comps[ci], comp_toks[ci]);
        rebuild(comps[ci], comp_toks[ci]);
        Walk w = face_walk(comps[ci]);
        for (size_t i = 0; i < comp_toks[ci].size(); ++i) {
            int flat_id = comp_anchor[ci][i];
            BoundaryPoint& p = flat_id % 2 == 0 ? cg.cords[flat_id / 2].a : cg.cords[flat_id / 2].b;
            p.position = tok_position(comps[ci], w, comp_toks[ci][i]);
        }
    }
    cg.components = std::move(comps);
    check_cord_tree(cg, "cordify");
    MoveRecord rec;
    rec.kind = MoveRecord::Kind::Cordify;
    append(log, rec);
    return cg;
}

MetricGraph collapse_horizontal(const MetricGraph& g, MoveLog* log) {
    std::vector<std::string> viol = validate(g);
    if (!viol.empty())
        throw std::invalid_argument("collapse_horizontal: graph is not admissible: " + viol.front());
    MetricGraph out = g;
    bool any_horizontal = false;
    for (const Edge& e : out.edges)
        if (e.alive && e.horizontal) any_horizontal = true;
    if (any_horizontal) {
        // Horizontal components and their attachment points.
        std::map<int, int> hparent;
        for (size_t e = 0; e < out.edges.size(); ++e)
            if (out.edges[e].alive && out.edges[e].horizontal)
                hparent[static_cast<int>(e)] = static_cast<int>(e);
        std::function<int(int)> hfind = [&](int x) {
            while (hparent[x] != x) x = hparent[x] = hparent[hparent[x]];
            return x;
        };
        for (size_t v = 0; v < out.vertices.size(); ++v) {
            int prev = -1;
            for (int end : out.vertices[v].rotation) {
                if (!out.edges[end / 2].horizontal) continue;
                if (prev >= 0) hparent[hfind(prev)] = hfind(end / 2);
                prev = end / 2;
            }
        }
        std::map<int, std::vector<int>> attach;  // representative -> out-ends at vertical vertices
        for (size_t v = 0; v < out.vertices.size(); ++v) {
            bool has_vertical = false;
            for (int end : out.vertices[v].rotation)
                if (!out.edges[end / 2].horizontal) has_vertical = true;
            if (!has_vertical) continue;
            for (int end : out.vertices[v].rotation)
                if (out.edges[end / 2].horizontal) {
                    if (end % 2 != 0)
                        throw std::logic_error(
                            "collapse_horizontal: incoming end at a vertical vertex");
                    attach[hfind(end / 2)].push_back(end);
                }
        }
        bool shift_needed = false;
        for (auto& [rep, ends] : attach) {
            std::set<int> branch_vertices;
            for (int end : ends) {
                int v = out.vertex_at_end(end);
                if (vertex_order(out, v) % 2 != 0) branch_vertices.insert(v);
            }
            if (branch_vertices.size() >= 2) shift_needed = true;
        }
        if (shift_needed) {
            Rat hmin;
            bool first = true;
            for (const Edge& e : out.edges)
                if (e.alive && !e.horizontal && (first || e.height < hmin)) {
                    hmin = e.height;
                    first = false;
                }
            Rat delta = hmin / 2;
            // Plan: every attachment end slides by delta along the dart that
            // departs its gap in the vertical walk.
            struct Plan {
                Rat cut;  // from side 0, descending per edge
                int end;  // the out-end to relocate
                int side;
            };
            std::map<int, std::vector<Plan>> per_edge;
            for (auto& [rep, ends] : attach)
                for (int end : ends) {
                    int v = out.vertex_at_end(end);
                    int nxt = rot_successor(out.vertices[v], end);
                    if (out.edges[nxt / 2].horizontal)
                        throw std::logic_error("collapse_horizontal: adjacent outgoing ends");
                    int de = nxt / 2, ds = nxt % 2;
                    Rat cut = ds == 0 ? delta : out.edges[de].height - delta;
                    per_edge[de].push_back({cut, end, ds});
                }
            std::vector<Tok> no_toks;
            for (auto& [de, plans] : per_edge) {
                std::sort(plans.begin(), plans.end(),
                          [](const Plan& a, const Plan& b) { return a.cut > b.cut; });
                size_t i = 0;
                while (i < plans.size()) {
                    size_t j = i;
                    while (j < plans.size() && plans[j].cut == plans[i].cut) ++j;
                    int t = subdivide(out, no_toks, de, plans[i].cut);
                    int lower_arr = 2 * de + 1;
                    int upper_arr = out.vertices[t].rotation[1];  // 2f+0
                    for (size_t p = i; p < j; ++p) {
                        int end = plans[p].end;
                        int v = out.vertex_at_end(end);
                        std::vector<int>& rot = out.vertices[v].rotation;
                        rot.erase(std::find(rot.begin(), rot.end(), end));
                        std::vector<int>& rt = out.vertices[t].rotation;
                        int anchor = plans[p].side == 0 ? lower_arr : upper_arr;
                        rt.insert(std::next(std::find(rt.begin(), rt.end(), anchor)), end);
                        out.edges[end / 2].ends[end % 2] = t;
                    }
                    i = j;
                }
            }
        }
        for (size_t e = 0; e < out.edges.size(); ++e) {
            if (!out.edges[e].alive || !out.edges[e].horizontal) continue;
            int u = out.edges[e].ends[0], w = out.edges[e].ends[1];
            std::vector<int>& ru = out.vertices[u].rotation;
            std::vector<int>& rw = out.vertices[w].rotation;
            size_t iu = std::find(ru.begin(), ru.end(), static_cast<int>(2 * e + 0)) - ru.begin();
            size_t iw = std::find(rw.begin(), rw.end(), static_cast<int>(2 * e + 1)) - rw.begin();
            std::vector<int> merged;
            for (size_t i = 0; i < iu; ++i) merged.push_back(ru[i]);
            for (size_t j = 1; j < rw.size(); ++j) merged.push_back(rw[(iw + j) % rw.size()]);
            for (size_t i = iu + 1; i < ru.size(); ++i) merged.push_back(ru[i]);
            for (int end : rw)
                if (end != static_cast<int>(2 * e + 1)) out.edges[end / 2].ends[end % 2] = u;
            ru = std::move(merged);
            rw.clear();
            out.vertices[w].alive = false;
            out.edges[e].alive = false;
        }
        std::vector<Tok> no_toks;
        normalize(out, no_toks);
        rebuild(out, no_toks);
    }
    std::vector<std::string> after = validate(out);
    if (!after.empty())
        throw std::logic_error("collapse_horizontal: produced inadmissible graph: " + after.front());
    MoveRecord rec;
    rec.kind = MoveRecord::Kind::CollapseHorizontal;
    append(log, rec);
    return out;
}

CordGraph detach(const CordGraph& cg_in, int component, int vertex, int arc_first, int arc_len,
                 MoveLog* log) {
    CordGraph cg = cg_in;
    if (component < 0 || component >= static_cast<int>(cg.components.size()))
        throw std::invalid_argument("detach: no such component");
    MetricGraph G = cg.components[component];
    if (vertex < 0 || vertex >= static_cast<int>(G.vertices.size()) || !G.vertices[vertex].alive)
        throw std::invalid_argument("detach: no such vertex");
    int d = static_cast<int>(G.vertices[vertex].rotation.size());
    if (arc_len < 1 || arc_len > d - 1)
        throw std::invalid_argument("detach: arc must leave both sides nonempty");
    if (arc_first < 0 || arc_first >= d) throw std::invalid_argument("detach: arc start out of range");
    // Both scars pick up the zero-width bridge; an odd arc off an even
    // vertex would turn one zero of even order into two of odd order.
    if (arc_len % 2 != 0 && vertex_order(G, vertex) % 2 == 0)
        throw std::invalid_argument("detach: splitting there would create a new pair of branch points");

    std::vector<Anchor> anchors = anchors_on(cg, component);
    std::vector<Tok> toks;
    Walk w0 = face_walk(G);
    for (const Anchor& a : anchors) toks.push_back(locate(G, w0, point_of(cg, a).position));

    std::vector<int> rot = G.vertices[vertex].rotation;
    std::vector<int> arc, rest;
    for (int i = 0; i < arc_len; ++i) arc.push_back(rot[(arc_first + i) % d]);
    for (int i = arc_len; i < d; ++i) rest.push_back(rot[(arc_first + i) % d]);

    // Reject a foreign cord parked exactly at either seam gap.
    Rat seam_core = tok_position(G, w0, Tok{true, vertex, rest.back(), -1, -1, Rat(0)});
    Rat seam_pend = tok_position(G, w0, Tok{true, vertex, arc.back(), -1, -1, Rat(0)});
    for (const Anchor& a : anchors) {
        const Rat& p = point_of(cg, a).position;
        if (p == seam_core || p == seam_pend)
            throw std::invalid_argument("detach: another cord is attached at the split point");
    }

    int nv = G.add_vertex();
    G.vertices[nv].rotation = arc;
    G.vertices[vertex].rotation = rest;
    for (int end : arc) G.edges[end / 2].ends[end % 2] = nv;
    // Foreign cords parked in gaps interior to the arc leave with it.
    for (Tok& t : toks)
        if (t.gap && t.vertex == vertex)
            for (int j = 0; j + 1 < arc_len; ++j)
                if (t.after == arc[j]) t.vertex = nv;

    Tok core_scar{true, vertex, rest.back(), -1, -1, Rat(0)};
    Tok pend_scar{true, nv, arc.back(), -1, -1, Rat(0)};
    toks.push_back(core_scar);
    toks.push_back(pend_scar);

    std::vector<bool> taken(toks.size(), false);
    MetricGraph pend = extract_component(G, nv, toks, taken);
    std::vector<Tok> core_toks, pend_toks;
    std::vector<int> core_idx, pend_idx;
    for (size_t i = 0; i < toks.size(); ++i) {
        if (taken[i]) {
            pend_toks.push_back(toks[i]);
            pend_idx.push_back(static_cast<int>(i));
        } else {
            core_toks.push_back(toks[i]);
            core_idx.push_back(static_cast<int>(i));
        }
    }
    std::vector<bool> taken2(core_toks.size(), false);
    MetricGraph core = extract_component(G, vertex, core_toks, taken2);
    for (bool t : taken2)
        if (!t) throw std::logic_error("detach: split did not separate the tree");

    normalize(core, core_toks);
    rebuild(core, core_toks);
    normalize(pend, pend_toks);
    rebuild(pend, pend_toks);

    int pci = static_cast<int>(cg.components.size());
    Walk wc = face_walk(core), wp = face_walk(pend);
    auto assign = [&](int flat, const Rat& pos, int comp) {
        if (flat < static_cast<int>(anchors.size())) {
            BoundaryPoint& p = point_of(cg, anchors[flat]);
            p.component = comp;
            p.position = pos;
        }
    };
    Cord nc;
    for (size_t i = 0; i < core_toks.size(); ++i) {
        Rat pos = tok_position(core, wc, core_toks[i]);
        if (core_idx[i] == static_cast<int>(anchors.size()))
            nc.a = {component, pos};
        else
            assign(core_idx[i], pos, component);
    }
    for (size_t i = 0; i < pend_toks.size(); ++i) {
        Rat pos = tok_position(pend, wp, pend_toks[i]);
        if (pend_idx[i] == static_cast<int>(anchors.size()) + 1)
            nc.b = {pci, pos};
        else
            assign(pend_idx[i], pos, pci);
    }
    if (nc.a.component < 0 || nc.b.component < 0)
        throw std::logic_error("detach: scar tokens lost");
    cg.components[component] = std::move(core);
    cg.components.push_back(std::move(pend));
    cg.cords.push_back(nc);
    check_cord_tree(cg, "detach");
    MoveRecord rec;
    rec.kind = MoveRecord::Kind::Detach;
    rec.component = component;
    rec.vertex = vertex;
    rec.arc_first = arc_first;
    rec.arc_len = arc_len;
    append(log, rec);
    return cg;
}

CordGraph roll(const CordGraph& cg_in, int k, const Rat& delta, MoveLog* log) {
    CordGraph cg = cg_in;
    if (k < 0 || k >= static_cast<int>(cg.cords.size()))
        throw std::invalid_argument("roll: no such cord");
    for (int side = 0; side < 2; ++side) {
        BoundaryPoint& p = side == 0 ? cg.cords[k].a : cg.cords[k].b;
        Rat L = 2 * cg.components[p.component].scale;
        std::vector<Rat> others;
        for (const Anchor& a : anchors_on(cg_in, p.component))
            if (!(a.cord == k)) others.push_back(point_of(cg, a).position);
        if (!others.empty() && (delta >= L || -delta >= L))
            throw std::invalid_argument("roll: attachment point would cross another cord");
        for (const Rat& m : others) {
            Rat r = delta > 0 ? rat_mod(m - p.position, L) : rat_mod(p.position - m, L);
            if (r > 0 && r <= abs(delta))
                throw std::invalid_argument("roll: attachment point would cross another cord");
        }
        p.position = rat_mod(p.position + delta, L);
    }
    MoveRecord rec;
    rec.kind = MoveRecord::Kind::Roll;
    rec.cord = k;
    rec.delta = delta;
    append(log, rec);
    return cg;
}

namespace {

// Shared by attach and pump: fuses cord k's endpoints inside one merged
// graph. Returns the merged graph, the fused vertex, the two scar-adjacent
// pendant ends (lower, upper) of the materialized free point (-1 when that
// side was already a corner), and the translated anchor tokens.
struct Fusion {
    MetricGraph merged;
    std::vector<Tok> toks;           // parallel to the flat anchor list
    std::vector<Anchor> anchors_a, anchors_b;
    int fused = -1;
    int low_end = -1, high_end = -1;  // pendant-side halves, when subdivided
};

Fusion fuse_cord(const CordGraph& cg, int k, bool check_nodal, const char* move) {
    const Cord& c = cg.cords[k];
    int ca = c.a.component, cb = c.b.component;
    MetricGraph A = cg.components[ca], B = cg.components[cb];
    Walk wa = face_walk(A), wb = face_walk(B);
    Tok ta = locate(A, wa, c.a.position), tb = locate(B, wb, c.b.position);
    if (check_nodal && tok_is_branch(A, ta) && tok_is_branch(B, tb))
        throw std::invalid_argument(std::string(move) + ": both cord endpoints are branch points");

    Fusion f;
    f.anchors_a = anchors_on(cg, ca);
    f.anchors_b = anchors_on(cg, cb);
    std::vector<Tok> ta_all, tb_all;
    for (const Anchor& an : f.anchors_a) {
        const Rat& p = point_of(cg, an).position;
        if (an.cord != k && p == c.a.position)
            throw std::invalid_argument(std::string(move) +
                                        ": another cord is attached at the contact point");
        ta_all.push_back(locate(A, wa, p));
    }
    for (const Anchor& an : f.anchors_b) {
        const Rat& p = point_of(cg, an).position;
        if (an.cord != k && p == c.b.position)
            throw std::invalid_argument(std::string(move) +
                                        ": another cord is attached at the contact point");
        tb_all.push_back(locate(B, wb, p));
    }

    auto materialize = [](MetricGraph& g, std::vector<Tok>& toks, size_t self, int* lo, int* hi) {
        Tok& t = toks[self];
        if (t.gap) return;
        int e = t.edge, s = t.side;
        Rat cut = s == 0 ? t.off : g.edges[e].height - t.off;
        subdivide(g, toks, e, cut);  // converts toks[self] into the gap on its side
        if (!toks[self].gap) throw std::logic_error("moves: materialization failed");
        if (lo) {
            int tv = toks[self].vertex;
            *lo = g.vertices[tv].rotation[0];
            *hi = g.vertices[tv].rotation[1];
        }
    };

    // Each of the two components carries exactly one endpoint of cord k.
    size_t self_a = ta_all.size(), self_b = tb_all.size();
    for (size_t i = 0; i < f.anchors_a.size(); ++i)
        if (f.anchors_a[i].cord == k) self_a = i;
    for (size_t i = 0; i < f.anchors_b.size(); ++i)
        if (f.anchors_b[i].cord == k) self_b = i;
    if (self_a == ta_all.size() || self_b == tb_all.size())
        throw std::logic_error("moves: cord endpoints not found among anchors");

    materialize(A, ta_all, self_a, nullptr, nullptr);
    materialize(B, tb_all, self_b, &f.low_end, &f.high_end);

    int eoff = concat(A, B, tb_all);
    if (f.low_end >= 0) {
        f.low_end += 2 * eoff;
        f.high_end += 2 * eoff;
    }
    // Splice a's material into b's rotation; b's vertex survives. The merged
    // cyclic rotation is the same either way round.
    int va = tb_all[self_b].vertex, after_a = tb_all[self_b].after;
    int vb = ta_all[self_a].vertex, after_b = ta_all[self_a].after;
    f.toks = std::move(ta_all);
    for (Tok& t : tb_all) f.toks.push_back(t);
    fuse(A, f.toks, va, after_a, vb, after_b);
    f.fused = va;
    f.merged = std::move(A);
    for (const Anchor& an : f.anchors_b) f.anchors_a.push_back(an);
    return f;
}

}  // namespace

CordGraph attach(const CordGraph& cg_in, int k, MoveLog* log) {
    CordGraph cg = cg_in;
    if (k < 0 || k >= static_cast<int>(cg.cords.size()))
        throw std::invalid_argument("attach: no such cord");
    int ca = cg.cords[k].a.component, cb = cg.cords[k].b.component;
    Fusion f = fuse_cord(cg, k, true, "attach");
    normalize(f.merged, f.toks);
    rebuild(f.merged, f.toks);
    Walk w = face_walk(f.merged);
    // Write back positions, skipping cord k's own two anchors.
    for (size_t i = 0; i < f.anchors_a.size(); ++i) {
        if (f.anchors_a[i].cord == k) continue;
        BoundaryPoint& p = point_of(cg, f.anchors_a[i]);
        p.component = ca;
        p.position = tok_position(f.merged, w, f.toks[i]);
    }
    cg.components[ca] = std::move(f.merged);
    cg.components.erase(cg.components.begin() + cb);
    cg.cords.erase(cg.cords.begin() + k);
    for (Cord& c : cg.cords)
        for (BoundaryPoint* p : {&c.a, &c.b}) {
            if (p->component == cb) p->component = ca;
            if (p->component > cb) --p->component;
        }
    check_cord_tree(cg, "attach");
    MoveRecord rec;
    rec.kind = MoveRecord::Kind::Attach;
    rec.cord = k;
    append(log, rec);
    return cg;
}

CordGraph pump(const CordGraph& cg_in, int k, const Rat& amount, MoveLog* log) {
    CordGraph cg = cg_in;
    if (k < 0 || k >= static_cast<int>(cg.cords.size()))
        throw std::invalid_argument("pump: no such cord");
    Cord c = cg.cords[k];
    bool br_a = at_branch_point(cg.components[c.a.component], c.a.position);
    bool br_b = at_branch_point(cg.components[c.b.component], c.b.position);
    if (br_a && br_b) throw std::invalid_argument("pump: both cord endpoints are branch points");
    if (!br_a && !br_b)
        throw std::invalid_argument("pump: no cord endpoint rests at a branch point of the core");
    bool a_is_core = br_a;
    const BoundaryPoint& pend_pt = a_is_core ? c.b : c.a;
    const MetricGraph& P = cg.components[pend_pt.component];
    if (P.alive_edge_count() != 1)
        throw std::invalid_argument("pump: the free endpoint must lie on a pendant vertical segment");
    Walk wp = face_walk(P);
    Tok contact = locate(P, wp, pend_pt.position);
    if (contact.gap)
        throw std::invalid_argument("pump: the free endpoint must lie on a pendant vertical segment");
    Rat h = P.edges[contact.edge].height;
    Rat x = contact.side == 0 ? contact.off : h - contact.off;
    Rat hi = x < h - x ? h - x : x;
    if (amount <= 0) throw std::invalid_argument("pump: amount must be positive");
    if (amount > hi) throw std::invalid_argument("pump: amount exceeds the available height");
    if (amount != x && amount != h - x)
        throw std::invalid_argument("pump: amount must equal one of the two pendant arms");

    // Orient the fusion so the pendant is the b side.
    CordGraph work = cg;
    if (!a_is_core) std::swap(work.cords[k].a, work.cords[k].b);
    int core_ci = work.cords[k].a.component, pend_ci = work.cords[k].b.component;
    Fusion f = fuse_cord(work, k, false, "pump");
    // The pumped cord is rebuilt from the scars; its own anchors would go
    // stale once the arm end moves to the new pendant vertex.
    for (size_t i = f.anchors_a.size(); i-- > 0;)
        if (f.anchors_a[i].cord == k) {
            f.toks.erase(f.toks.begin() + static_cast<long>(i));
            f.anchors_a.erase(f.anchors_a.begin() + static_cast<long>(i));
        }

    // The materialized pendant halves at the fused saddle: low = toward the
    // pendant's side-0 tip (arm of length x), high = the other arm.
    int detach_end = amount == x ? f.high_end : f.low_end;
    if (detach_end < 0) throw std::logic_error("pump: pendant contact failed to materialize");
    int X = f.fused;
    std::vector<int>& rot = f.merged.vertices[X].rotation;
    size_t slot = std::find(rot.begin(), rot.end(), detach_end) - rot.begin();
    if (slot == rot.size()) throw std::logic_error("pump: arm end lost");
    int pred = rot[(slot + rot.size() - 1) % rot.size()];
    rot.erase(rot.begin() + slot);
    int nv = f.merged.add_vertex();
    f.merged.vertices[nv].rotation = {detach_end};
    f.merged.edges[detach_end / 2].ends[detach_end % 2] = nv;

    Tok core_scar{true, X, pred, -1, -1, Rat(0)};
    Tok pend_scar{true, nv, detach_end, -1, -1, Rat(0)};
    size_t scar_core_i = f.toks.size(), scar_pend_i = f.toks.size() + 1;
    f.toks.push_back(core_scar);
    f.toks.push_back(pend_scar);

    std::vector<bool> taken(f.toks.size(), false);
    MetricGraph pend = extract_component(f.merged, nv, f.toks, taken);
    std::vector<Tok> core_toks, pend_toks;
    std::vector<int> core_idx, pend_idx;
    for (size_t i = 0; i < f.toks.size(); ++i)
        if (taken[i]) {
            pend_toks.push_back(f.toks[i]);
            pend_idx.push_back(static_cast<int>(i));
        } else {
            core_toks.push_back(f.toks[i]);
            core_idx.push_back(static_cast<int>(i));
        }
    std::vector<bool> taken2(core_toks.size(), false);
    MetricGraph core = extract_component(f.merged, X, core_toks, taken2);
    for (bool t : taken2)
        if (!t) throw std::logic_error("pump: split did not separate the tree");
    normalize(core, core_toks);
    rebuild(core, core_toks);
    normalize(pend, pend_toks);
    rebuild(pend, pend_toks);

    Walk wc = face_walk(core), wpe = face_walk(pend);
    BoundaryPoint new_core{core_ci, Rat(0)}, new_pend{pend_ci, Rat(0)};
    for (size_t i = 0; i < core_toks.size(); ++i) {
        Rat pos = tok_position(core, wc, core_toks[i]);
        size_t fi = core_idx[i];
        if (fi == scar_core_i) {
            new_core.position = pos;
        } else if (fi < f.anchors_a.size() && f.anchors_a[fi].cord != k) {
            BoundaryPoint& p = point_of(cg, f.anchors_a[fi]);
            p.component = core_ci;
            p.position = pos;
        }
    }
    for (size_t i = 0; i < pend_toks.size(); ++i) {
        Rat pos = tok_position(pend, wpe, pend_toks[i]);
        size_t fi = pend_idx[i];
        if (fi == scar_pend_i) {
            new_pend.position = pos;
        } else if (fi < f.anchors_a.size() && f.anchors_a[fi].cord != k) {
            BoundaryPoint& p = point_of(cg, f.anchors_a[fi]);
            p.component = pend_ci;
            p.position = pos;
        }
    }
    cg.components[core_ci] = std::move(core);
    cg.components[pend_ci] = std::move(pend);
    cg.cords[k] = a_is_core ? Cord{new_core, new_pend} : Cord{new_pend, new_core};
    check_cord_tree(cg, "pump");
    MoveRecord rec;
    rec.kind = MoveRecord::Kind::Pump;
    rec.cord = k;
    rec.amount = amount;
    append(log, rec);
    return cg;
}

MetricGraph local_deform(const MetricGraph& g, int v, const Rat& dw, const Rat& dh, MoveLog* log) {
    if (v < 0 || v >= static_cast<int>(g.vertices.size()) || !g.vertices[v].alive)
        throw std::invalid_argument("local_deform: no such vertex");
    const std::vector<int>& rot = g.vertices[v].rotation;
    auto not_saddle = [] {
        return std::invalid_argument("local_deform: vertex is not a generic saddle");
    };
    if (rot.size() != 2) throw not_saddle();
    for (int end : rot)
        if (!g.edges[end / 2].horizontal || end % 2 != 1) throw not_saddle();
    int ex = rot[0] / 2, ey = rot[1] / 2;
    if (ex == ey) throw not_saddle();
    std::vector<int> quadrants;
    for (int e : {ex, ey}) {
        int tail = g.edges[e].ends[0];
        const std::vector<int>& tr = g.vertices[tail].rotation;
        if (tr.size() != 3) throw not_saddle();
        for (int end : tr)
            if (end / 2 != e) {
                if (g.edges[end / 2].horizontal) throw not_saddle();
                quadrants.push_back(end / 2);
            }
    }
    std::sort(quadrants.begin(), quadrants.end());
    if (std::unique(quadrants.begin(), quadrants.end()) != quadrants.end())
        throw std::invalid_argument("local_deform: quadrant edges are not distinct");

    // Heights alternate in first-traversal order along the facial walk.
    Walk w = face_walk(g);
    std::vector<int> order;
    for (const Step& s : w.steps)
        if (std::find(quadrants.begin(), quadrants.end(), s.edge) != quadrants.end() &&
            std::find(order.begin(), order.end(), s.edge) == order.end())
            order.push_back(s.edge);
    if (order.size() != 4) throw std::logic_error("local_deform: quadrant edges not on the walk");
    MetricGraph out = g;
    for (size_t i = 0; i < 4; ++i) {
        Rat nh = out.edges[order[i]].height + (i % 2 == 0 ? dh : -dh);
        if (!(nh > 0))
            throw std::invalid_argument("local_deform: height increment drives a height nonpositive");
        out.edges[order[i]].height = nh;
    }
    for (int e : {ex, ey}) {
        Rat nw = out.edges[e].width_head + dw;
        if (!(nw > out.edges[e].width_tail))
            throw std::invalid_argument("local_deform: width increment drives a width nonpositive");
        out.edges[e].width_head = nw;
    }
    std::vector<std::string> viol = validate(out);
    if (!viol.empty())
        throw std::logic_error("local_deform: produced inadmissible graph: " + viol.front());
    MoveRecord rec;
    rec.kind = MoveRecord::Kind::LocalDeform;
    rec.vertex = v;
    rec.dw = dw;
    rec.dh = dh;
    append(log, rec);
    return out;
}

BoundaryProfile cord_profile(const CordGraph& cg) {
    check_cord_tree(cg, "cord_profile");
    struct Ev {
        Rat off;
        bool corner;
        int vertex = -1;          // corner: component-local vertex id
        int cord = -1, side = -1;  // mark: which endpoint
    };
    size_t nc = cg.components.size();
    std::vector<Walk> walks;
    std::vector<std::vector<Ev>> events(nc);
    for (size_t c = 0; c < nc; ++c) {
        walks.push_back(face_walk(cg.components[c]));
        const Walk& w = walks.back();
        for (const Step& s : w.steps) {
            Ev ev;
            ev.off = rat_mod(s.start + cg.components[c].edges[s.edge].height, w.total);
            ev.corner = true;
            ev.vertex = cg.components[c].vertex_at_end(2 * s.edge + (1 - s.from));
            events[c].push_back(ev);
        }
    }
    for (size_t k = 0; k < cg.cords.size(); ++k)
        for (int side = 0; side < 2; ++side) {
            const BoundaryPoint& p = side == 0 ? cg.cords[k].a : cg.cords[k].b;
            Ev ev;
            ev.off = p.position;
            ev.corner = false;
            ev.cord = static_cast<int>(k);
            ev.side = side;
            events[p.component].push_back(ev);
        }
    for (std::vector<Ev>& evs : events)
        std::sort(evs.begin(), evs.end(), [](const Ev& a, const Ev& b) {
            if (a.off != b.off) return a.off < b.off;
            return a.corner && !b.corner;
        });
    size_t total_events = 0;
    for (const std::vector<Ev>& evs : events) total_events += evs.size();

    // Joint traversal: each component's circle is covered exactly once, cut
    // into arcs at the cord endpoints. A mark jumps to its partner point; a
    // corner coinciding with the landing belongs to the arc that starts
    // there, so it is recorded at the jump (these give the zero distances of
    // a nodal contact).
    int c = 0;
    Rat cur = 0;
    Rat cum = 0;
    std::vector<std::vector<char>> used(nc);
    for (size_t j = 0; j < nc; ++j) used[j].assign(events[j].size(), 0);
    std::set<std::pair<int, int>> seen;
    BoundaryProfile prof;
    std::vector<Rat> positions;
    auto record = [&](int comp, int vertex) {
        if (vertex_order(cg.components[comp], vertex) % 2 != 0 &&
            seen.insert({comp, vertex}).second) {
            prof.branch_points.push_back(vertex);
            positions.push_back(cum);
        }
    };
    // Index of the last event at or before `pos`, the cyclic scan resumes
    // after it.
    auto last_at_or_before = [&](int comp, const Rat& pos) {
        size_t n = events[comp].size();
        size_t r = n - 1;
        for (size_t m = 0; m < n; ++m) {
            if (!(events[comp][m].off <= pos)) break;
            r = m;
        }
        return r;
    };
    size_t origin = 0;
    while (origin < events[0].size() &&
           !(events[0][origin].off == 0 && events[0][origin].corner))
        ++origin;
    if (origin == events[0].size())
        throw std::logic_error("cord_profile: no corner at the origin");
    used[0][origin] = 1;
    record(0, events[0][origin].vertex);
    size_t done = 1;
    size_t idx = origin;
    while (done < total_events) {
        size_t n = events[c].size();
        size_t guard = 0;
        do {
            idx = (idx + 1) % n;
            ++guard;
        } while (used[c][idx] && guard <= n);
        if (guard > n) throw std::logic_error("cord_profile: joint walk is stuck");
        const Ev ev = events[c][idx];
        used[c][idx] = 1;
        ++done;
        cum += rat_mod(ev.off - cur, walks[c].total);
        cur = ev.off;
        if (ev.corner) {
            record(c, ev.vertex);
        } else {
            const BoundaryPoint& other = ev.side == 0 ? cg.cords[ev.cord].b : cg.cords[ev.cord].a;
            c = other.component;
            cur = other.position;
            for (size_t m = 0; m < events[c].size(); ++m)
                if (!used[c][m] && events[c][m].corner && events[c][m].off == cur) {
                    used[c][m] = 1;
                    ++done;
                    record(c, events[c][m].vertex);
                }
            idx = last_at_or_before(c, cur);
        }
    }
    if (c != 0) throw std::logic_error("cord_profile: joint face did not close");
    Rat total = cum + rat_mod(Rat(0) - cur, walks[0].total);
    if (total != 2 * cg.total_height())
        throw std::logic_error("cord_profile: joint face length mismatch");
    for (size_t j = 0; j + 1 < positions.size(); ++j)
        prof.distances.push_back(positions[j + 1] - positions[j]);
    if (!positions.empty()) prof.distances.push_back(total - positions.back() + positions.front());
    return prof;
}

namespace {

const char* kind_name(MoveRecord::Kind k) {
    switch (k) {
        case MoveRecord::Kind::CollapseHorizontal: return "collapse_horizontal";
        case MoveRecord::Kind::Cordify: return "cordify";
        case MoveRecord::Kind::Detach: return "detach";
        case MoveRecord::Kind::Roll: return "roll";
        case MoveRecord::Kind::Attach: return "attach";
        case MoveRecord::Kind::Pump: return "pump";
        case MoveRecord::Kind::LocalDeform: return "local_deform";
    }
    throw std::logic_error("movelog: unknown kind");
}

}  // namespace

std::string movelog_json(const MoveLog& log) {
    nlohmann::json arr = nlohmann::json::array();
    for (const MoveRecord& r : log) {
        nlohmann::json j;
        j["move"] = kind_name(r.kind);
        switch (r.kind) {
            case MoveRecord::Kind::Detach:
                j["component"] = r.component;
                j["vertex"] = r.vertex;
                j["arc_first"] = r.arc_first;
                j["arc_len"] = r.arc_len;
                break;
            case MoveRecord::Kind::Roll:
                j["cord"] = r.cord;
                j["delta"] = rat_str(r.delta);
                break;
            case MoveRecord::Kind::Attach:
                j["cord"] = r.cord;
                break;
            case MoveRecord::Kind::Pump:
                j["cord"] = r.cord;
                j["amount"] = rat_str(r.amount);
                break;
            case MoveRecord::Kind::LocalDeform:
                j["vertex"] = r.vertex;
                j["dw"] = rat_str(r.dw);
                j["dh"] = rat_str(r.dh);
                break;
            default:
                break;
        }
        arr.push_back(j);
    }
    return arr.dump();
}

MoveLog movelog_from_json(const std::string& text) {
    nlohmann::json arr = nlohmann::json::parse(text);
    if (!arr.is_array()) throw std::invalid_argument("movelog: expected a JSON array");
    MoveLog log;
    for (const nlohmann::json& j : arr) {
        MoveRecord r;
        std::string m = j.at("move").get<std::string>();
        if (m == "collapse_horizontal") {
            r.kind = MoveRecord::Kind::CollapseHorizontal;
        } else if (m == "cordify") {
            r.kind = MoveRecord::Kind::Cordify;
        } else if (m == "detach") {
            r.kind = MoveRecord::Kind::Detach;
            r.component = j.at("component").get<int>();
            r.vertex = j.at("vertex").get<int>();
            r.arc_first = j.at("arc_first").get<int>();
            r.arc_len = j.at("arc_len").get<int>();
        } else if (m == "roll") {
            r.kind = MoveRecord::Kind::Roll;
            r.cord = j.at("cord").get<int>();
            r.delta = rat_from_string(j.at("delta").get<std::string>());
        } else if (m == "attach") {
            r.kind = MoveRecord::Kind::Attach;
            r.cord = j.at("cord").get<int>();
        } else if (m == "pump") {
            r.kind = MoveRecord::Kind::Pump;
            r.cord = j.at("cord").get<int>();
            r.amount = rat_from_string(j.at("amount").get<std::string>());
        } else if (m == "local_deform") {
            r.kind = MoveRecord::Kind::LocalDeform;
            r.vertex = j.at("vertex").get<int>();
            r.dw = rat_from_string(j.at("dw").get<std::string>());
            r.dh = rat_from_string(j.at("dh").get<std::string>());
        } else {
            throw std::invalid_argument("movelog: unknown move tag: " + m);
        }
        log.push_back(r);
    }
    return log;
}

MetricGraph replay(const MetricGraph& start, const MoveLog& log) {
    MetricGraph g = start;
    CordGraph cg;
    bool corded = false;
    auto promote = [&] {
        if (!corded) {
            MetricGraph gg = g;
            std::vector<Tok> none;
            rebuild(gg, none);
            cg = CordGraph{{std::move(gg)}, {}};
            corded = true;
        }
    };
    for (const MoveRecord& r : log) {
        switch (r.kind) {
            case MoveRecord::Kind::CollapseHorizontal:
                if (corded) throw std::logic_error("replay: collapse after cordify");
                g = collapse_horizontal(g);
                break;
            case MoveRecord::Kind::Cordify:
                if (corded) throw std::logic_error("replay: cordify twice");
                cg = cordify(g);
                corded = true;
                break;
            case MoveRecord::Kind::LocalDeform:
                if (corded) throw std::logic_error("replay: local_deform on cord state");
                g = local_deform(g, r.vertex, r.dw, r.dh);
                break;
            case MoveRecord::Kind::Detach:
                promote();
                cg = detach(cg, r.component, r.vertex, r.arc_first, r.arc_len);
                break;
            case MoveRecord::Kind::Roll:
                promote();
                cg = roll(cg, r.cord, r.delta);
                break;
            case MoveRecord::Kind::Attach:
                promote();
                cg = attach(cg, r.cord);
                break;
            case MoveRecord::Kind::Pump:
                promote();
                cg = pump(cg, r.cord, r.amount);
                break;
        }
    }
    if (corded) {
        if (cg.components.size() != 1 || !cg.cords.empty())
            throw std::logic_error("replay: log ends with cords still open");
        return cg.components[0];
    }
    return g;
}

}  // namespace pellabel
