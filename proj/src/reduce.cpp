#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "face_walk.hpp"
#include "pellabel/moves.hpp"

// Reduction to the two-bush standard form. Every deformation goes through
// the public moves so the returned log replays to the final graph. The
// reduction peels off a height-one pendant (the catalyst), recurses on the
// rest, and grafts the catalyst back onto the standard form; a core whose
// distance gcd exceeds the working unit is reduced on the coarser grid
// first and re-entered through a two-unit pendant.

namespace pellabel {

namespace {

using walkdetail::Step;
using walkdetail::Walk;
using walkdetail::face_walk;

bool trace_on() {
    static const bool on = std::getenv("REDUCE_TRACE") != nullptr;
    return on;
}

#define RTRACE(...) \
    do { \
        if (trace_on()) std::fprintf(stderr, __VA_ARGS__); \
    } while (0)

Rat rabs(const Rat& x) { return x < 0 ? Rat(-x) : x; }

// Largest rational dividing both arguments; rgcd(x, 0) = |x|.
Rat rgcd(const Rat& a_in, const Rat& b_in) {
    Rat a = rabs(a_in), b = rabs(b_in);
    if (a == 0) return b;
    if (b == 0) return a;
    mpz_class num = gcd(a.get_num() * b.get_den(), b.get_num() * a.get_den());
    Rat out(num, a.get_den() * b.get_den());
    out.canonicalize();
    return out;
}

long to_long(const Rat& r) {
    if (!is_integer(r)) throw std::logic_error("reduce: expected an integer quantity");
    return r.get_num().get_si();
}

// Solves x = r1 (mod L1), x = r2 (mod L2) over the rationals; the solution
// is stored in [0, lcm(L1, L2)). Returns false when the classes conflict.
bool crt2(const Rat& r1, const Rat& L1, const Rat& r2, const Rat& L2, Rat& out) {
    mpz_class d = lcm(lcm(r1.get_den(), L1.get_den()), lcm(r2.get_den(), L2.get_den()));
    mpz_class R1 = r1.get_num() * (d / r1.get_den());
    mpz_class R2 = r2.get_num() * (d / r2.get_den());
    mpz_class M1 = L1.get_num() * (d / L1.get_den());
    mpz_class M2 = L2.get_num() * (d / L2.get_den());
    mpz_class g, s, t;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), M1.get_mpz_t(), M2.get_mpz_t());
    mpz_class diff = R2 - R1;
    if (diff % g != 0) return false;
    mpz_class M = M1 / g * M2;
    mpz_class k = (diff / g * s) % (M2 / g);
    mpz_class x = (R1 + M1 * k) % M;
    if (x < 0) x += M;
    out = Rat(x, d);
    out.canonicalize();
    return true;
}

// ---- component geometry ----

struct Corner {
    int vertex;
    int after;  // arrival end the corner follows
    Rat pos;
};

std::vector<Corner> corners_of(const MetricGraph& G) {
    Walk w = face_walk(G);
    std::vector<Corner> out;
    for (const Step& st : w.steps) {
        int arrive = 2 * st.edge + (1 - st.from);
        Rat pos = rat_mod(st.start + G.edges[st.edge].height, w.total);
        out.push_back({G.vertex_at_end(arrive), arrive, pos});
    }
    return out;
}

// True when `end` sits at v and its edge hangs down to a leaf.
bool hangs(const MetricGraph& G, int end, int v) {
    const Edge& E = G.edges[end / 2];
    if (!E.alive || E.horizontal) return false;
    int far = G.vertex_at_end(end ^ 1);
    return far != v && G.vertices[far].rotation.size() == 1;
}

Rat profile_gcd(const MetricGraph& G) {
    BoundaryProfile bp = boundary_profile(G);
    Rat gg = 0;
    for (const Rat& d : bp.distances) gg = rgcd(gg, d);
    return gg;
}

int genus_of(const MetricGraph& G) {
    BoundaryProfile bp = boundary_profile(G);
    int br = static_cast<int>(bp.branch_points.size());
    if (br < 2 || br % 2 != 0) throw std::logic_error("reduce: malformed branch locus");
    return (br - 2) / 2;
}

MetricGraph scaled_two_bush(int s, int g, long n, const Rat& unit) {
    MetricGraph b = two_bush(s, g, static_cast<int>(n));
    b.scale *= unit;
    for (Edge& e : b.edges) e.height *= unit;
    return b;
}

// ---- parked-cord bookkeeping ----

struct Bead {
    int cord;
    Rat pos;
};

std::vector<Bead> beads_on(const CordGraph& cg, int ci, int exclude) {
    std::vector<Bead> out;
    for (size_t j = 0; j < cg.cords.size(); ++j) {
        if (static_cast<int>(j) == exclude) continue;
        if (cg.cords[j].a.component == ci) out.push_back({static_cast<int>(j), cg.cords[j].a.position});
        if (cg.cords[j].b.component == ci) out.push_back({static_cast<int>(j), cg.cords[j].b.position});
    }
    return out;
}

// Rolls cord k by delta after clearing every foreign endpoint out of the
// swept arcs on both touched components. Blockers hop past the landing
// point, farthest first, each into its own slot of the free arc beyond;
// a hop is steered recursively, so chains of parked cords leapfrog around
// the face without ever crossing.
void steer(CordGraph& cg, int k, const Rat& delta, MoveLog& log, int depth) {
    if (delta == 0) return;
    if (depth > 32) throw std::logic_error("reduce: cord steering recursed too deep");
    for (int round = 0;; ++round) {
        if (round > 64) throw std::logic_error("reduce: could not clear a rolling path");
        bool pushed = false;
        for (int side = 0; side < 2 && !pushed; ++side) {
            const BoundaryPoint p = side == 0 ? cg.cords[k].a : cg.cords[k].b;
            Rat L = 2 * cg.components[p.component].scale;
            Rat len = rabs(delta);
            std::vector<Bead> bs = beads_on(cg, p.component, k);
            if (bs.empty()) continue;
            if (len >= L)
                throw std::logic_error("reduce: roll exceeds the face with cords parked on it");
            auto ahead = [&](const Rat& q) {
                return delta > 0 ? rat_mod(q - p.position, L) : rat_mod(p.position - q, L);
            };
            std::vector<std::pair<Rat, int>> in;
            Rat beyond = L - len;
            for (size_t i = 0; i < bs.size(); ++i) {
                Rat d = ahead(bs[i].pos);
                if (d > 0 && d <= len) {
                    in.push_back({d, static_cast<int>(i)});
                } else if (d > len) {
                    Rat ex = d - len;
                    if (ex < beyond) beyond = ex;
                }
            }
            if (in.empty()) continue;
            std::sort(in.begin(), in.end(),
                      [](const auto& x, const auto& y) { return y.first < x.first; });
            int B = static_cast<int>(in.size());
            for (int r = 0; r < B; ++r) {
                Rat slot = beyond * (B - r) / (B + 1);
                Rat hop = len - in[r].first + slot;
                steer(cg, bs[in[r].second].cord, delta > 0 ? hop : Rat(-hop), log, depth + 1);
            }
            pushed = true;
        }
        if (!pushed) break;
    }
    cg = roll(cg, k, delta, &log);
}

struct Span {
    Rat start, len;
};

// Moves every foreign endpoint off the given closed spans and exact points,
// parking each offender at the midpoint of the nearest free arc ahead of it.
void clear_marks(CordGraph& cg, int ci, const std::vector<Span>& spans,
                 const std::vector<Rat>& pts, int exclude, MoveLog& log) {
    for (int guard = 0;; ++guard) {
        if (guard > 128) throw std::logic_error("reduce: could not clear the surgery site");
        Rat L = 2 * cg.components[ci].scale;
        auto blocked = [&](const Rat& q) {
            for (const Span& s : spans)
                if (rat_mod(q - s.start, L) <= s.len) return true;
            for (const Rat& p : pts)
                if (rat_mod(q - p, L) == 0) return true;
            return false;
        };
        std::vector<Bead> bs = beads_on(cg, ci, exclude);
        int off = -1;
        for (size_t i = 0; i < bs.size() && off < 0; ++i)
            if (blocked(bs[i].pos)) off = static_cast<int>(i);
        if (off < 0) return;
        std::vector<Rat> stops;
        for (const Span& s : spans) {
            stops.push_back(rat_mod(s.start, L));
            stops.push_back(rat_mod(s.start + s.len, L));
        }
        for (const Rat& p : pts) stops.push_back(rat_mod(p, L));
        for (size_t i = 0; i < bs.size(); ++i)
            if (static_cast<int>(i) != off) stops.push_back(bs[i].pos);
        Rat origin = bs[off].pos;
        std::sort(stops.begin(), stops.end(), [&](const Rat& x, const Rat& y) {
            return rat_mod(x - origin, L) < rat_mod(y - origin, L);
        });
        stops.erase(std::unique(stops.begin(), stops.end()), stops.end());
        bool moved = false;
        for (size_t j = 0; j < stops.size() && !moved; ++j) {
            const Rat& q1 = stops[j];
            const Rat& q2 = stops[(j + 1) % stops.size()];
            Rat gap = rat_mod(q2 - q1, L);
            if (gap == 0) gap = L;
            Rat mid = rat_mod(q1 + gap / 2, L);
            if (blocked(mid)) continue;
            steer(cg, bs[off].cord, rat_mod(mid - origin, L), log, 0);
            moved = true;
        }
        if (!moved) throw std::logic_error("reduce: no free arc to park a cord in");
    }
}

// Rolls cord k so its endpoints land on one of the target pairs; smallest
// ride wins. Returns false when no pair is congruence-reachable.
bool try_steer_to(CordGraph& cg, int k, const std::vector<Rat>& ta, const std::vector<Rat>& tb,
                  MoveLog& log) {
    const Cord c = cg.cords[k];
    Rat La = 2 * cg.components[c.a.component].scale;
    Rat Lb = 2 * cg.components[c.b.component].scale;
    bool occ_a = !beads_on(cg, c.a.component, k).empty();
    bool occ_b = !beads_on(cg, c.b.component, k).empty();
    bool have = false;
    Rat best;
    for (const Rat& A : ta)
        for (const Rat& B : tb) {
            Rat x;
            if (!crt2(rat_mod(A - c.a.position, La), La, rat_mod(B - c.b.position, Lb), Lb, x))
                continue;
            Rat M = La / rgcd(La, Lb) * Lb;
            for (const Rat& cand : {x, Rat(x - M)}) {
                Rat mag = rabs(cand);
                if (occ_a && mag >= La) continue;
                if (occ_b && mag >= Lb) continue;
                if (!have || mag < rabs(best)) {
                    best = cand;
                    have = true;
                }
            }
        }
    if (!have) return false;
    steer(cg, k, best, log, 0);
    return true;
}

void steer_to(CordGraph& cg, int k, const std::vector<Rat>& ta, const std::vector<Rat>& tb,
              MoveLog& log, const char* what) {
    if (!try_steer_to(cg, k, ta, tb, log))
        throw std::logic_error(std::string("reduce: ") + what + " is out of rolling reach");
}

// Attach with pre-cleared contact points.
void plant(CordGraph& cg, int k, const std::vector<Rat>& ta, const std::vector<Rat>& tb,
           MoveLog& log, const char* what) {
    steer_to(cg, k, ta, tb, log, what);
    const Cord c = cg.cords[k];
    clear_marks(cg, c.a.component, {}, {c.a.position}, k, log);
    clear_marks(cg, c.b.component, {}, {c.b.position}, k, log);
    cg = attach(cg, k, &log);
}

// Detach with the seam corners and the arc's darts cleared of parked cords,
// so nothing foreign rides away on the new pendant. Returns the cord index.
int do_detach(CordGraph& cg, int ci, int v, int arc_first, int arc_len, MoveLog& log) {
    const MetricGraph& C = cg.components[ci];
    Walk w = face_walk(C);
    std::vector<Span> spans;
    std::vector<Rat> pts;
    for (const Corner& cr : corners_of(C))
        if (cr.vertex == v) pts.push_back(cr.pos);
    const std::vector<int>& rot = C.vertices[v].rotation;
    std::set<int> arce;
    for (int j = 0; j < arc_len; ++j) arce.insert(rot[(arc_first + j) % rot.size()] / 2);
    for (const Step& st : w.steps)
        if (arce.count(st.edge)) spans.push_back({st.start, C.edges[st.edge].height});
    clear_marks(cg, ci, spans, pts, -1, log);
    cg = detach(cg, ci, v, arc_first, arc_len, &log);
    return static_cast<int>(cg.cords.size()) - 1;
}

// ---- catalyst extraction ----

// Shrinks the pendant of cord k to `unit` by integral pumps into branch
// corners of the core, steering the cord to a reachable contact each time.
void pump_down(CordGraph& cg, int k, const Rat& unit, MoveLog& log) {
    for (int guard = 0;; ++guard) {
        if (guard > 200) throw std::logic_error("reduce: catalyst extraction did not terminate");
        const Cord c = cg.cords[k];
        const MetricGraph& C = cg.components[c.a.component];
        const MetricGraph& P = cg.components[c.b.component];
        Rat h = P.scale;
        if (h == unit) return;
        if (h < unit || !is_integer(Rat(h / unit)))
            throw std::logic_error("reduce: pendant height left the unit grid");
        Rat Lb = 2 * h;
        std::vector<Rat> bt;
        for (const Corner& cr : corners_of(C))
            if (vertex_order(C, cr.vertex) % 2 != 0) bt.push_back(cr.pos);
        RTRACE("pump_down: h=%s unit=%s corners=%zu pos_a=%s pos_b=%s La=%s\n",
               rat_str(h).c_str(), rat_str(unit).c_str(), bt.size(),
               rat_str(c.a.position).c_str(), rat_str(c.b.position).c_str(),
               rat_str(Rat(2 * C.scale)).c_str());
        bool done = false;
        for (Rat a = h - unit; !done && a >= unit; a -= unit) {
            std::vector<Rat> pt;
            for (const Rat& q : {a, Rat(2 * h - a), Rat(h - a), Rat(h + a)}) {
                Rat qq = rat_mod(q, Lb);
                if (std::find(pt.begin(), pt.end(), qq) == pt.end()) pt.push_back(qq);
            }
            if (!try_steer_to(cg, k, bt, pt, log)) continue;
            const Cord cc = cg.cords[k];
            clear_marks(cg, cc.a.component, {}, {cc.a.position}, k, log);
            cg = pump(cg, k, a, &log);
            done = true;
        }
        if (!done) {
            if (trace_on()) {
                std::fprintf(stderr, "pump_down STALL: h=%s unit=%s\n", rat_str(h).c_str(),
                             rat_str(unit).c_str());
                std::fprintf(stderr, "  core render:\n%s\n", render_ascii(C).c_str());
            }
            throw std::logic_error(
                "reduce: the pendant height stabilized above one unit; the profile cannot be primitive");
        }
    }
}

// Detaches a rotation-consecutive pair of hanging edges (one always exists
// on a tree with a vertex of degree three or more) and shrinks it to the
// catalyst. Returns the catalyst's cord index.
int make_catalyst(CordGraph& cg, int ci, const Rat& unit, MoveLog& log) {
    const MetricGraph& C = cg.components[ci];
    int v = -1, slot = -1;
    for (size_t u = 0; u < C.vertices.size() && v < 0; ++u) {
        if (!C.vertices[u].alive) continue;
        const std::vector<int>& rot = C.vertices[u].rotation;
        size_t d = rot.size();
        if (d < 3) continue;
        for (size_t i = 0; i < d && v < 0; ++i)
            if (hangs(C, rot[i], static_cast<int>(u)) &&
                hangs(C, rot[(i + 1) % d], static_cast<int>(u))) {
                v = static_cast<int>(u);
                slot = static_cast<int>(i);
            }
    }
    if (v < 0) throw std::logic_error("reduce: no hanging pair of edges");
    RTRACE("make_catalyst: detach v=%d slot=%d\n", v, slot);
    int k = do_detach(cg, ci, v, slot, 2, log);
    pump_down(cg, k, unit, log);
    return k;
}

// ---- standard-form assembly ----

// Root of the small bush: the unique vertex carrying at least three hanging
// half-unit twigs.
int bush_root(const MetricGraph& C, const Rat& half) {
    int found = -1;
    for (size_t v = 0; v < C.vertices.size(); ++v) {
        if (!C.vertices[v].alive) continue;
        int cnt = 0;
        for (int end : C.vertices[v].rotation)
            if (hangs(C, end, static_cast<int>(v)) && C.edges[end / 2].height == half) ++cnt;
        if (cnt >= 3) {
            if (found >= 0) throw std::logic_error("reduce: ambiguous small-bush root");
            found = static_cast<int>(v);
        }
    }
    if (found < 0) throw std::logic_error("reduce: small-bush root not found");
    return found;
}

// Attaches a unit pendant by its midpoint at the small-bush root, turning it
// into a fresh pair of half-unit twigs.
void attach_halves_at_root(CordGraph& cg, int k, const Rat& unit, MoveLog& log) {
    const Cord c = cg.cords[k];
    const MetricGraph& C = cg.components[c.a.component];
    int R = bush_root(C, Rat(unit / 2));
    std::vector<Rat> ta;
    for (const Corner& cr : corners_of(C))
        if (cr.vertex == R) ta.push_back(cr.pos);
    std::vector<Rat> tb = {Rat(unit / 2), Rat(3 * unit / 2)};
    plant(cg, k, ta, tb, log, "the half-twig graft at the small-bush root");
}

// Genus-one base: the core is a bare segment; the catalyst lands by its
// midpoint half a unit from a tip, making the root and three half twigs.
void base_attach(CordGraph& cg, int k, const Rat& unit, MoveLog& log) {
    const Cord c = cg.cords[k];
    const MetricGraph& C = cg.components[c.a.component];
    Rat La = 2 * C.scale;
    std::vector<Rat> ta;
    for (const Corner& cr : corners_of(C)) {
        if (C.vertices[cr.vertex].rotation.size() != 1) continue;
        ta.push_back(rat_mod(cr.pos + Rat(unit / 2), La));
        ta.push_back(rat_mod(cr.pos - Rat(unit / 2), La));
    }
    std::vector<Rat> tb = {Rat(unit / 2), Rat(3 * unit / 2)};
    plant(cg, k, ta, tb, log, "the base-case graft");
}

// Coarse-grid re-entry, first leg: hang the unit catalyst one unit below a
// small-bush twig tip of the coarse standard form.
void catalyst_onto_twig(CordGraph& cg, int k, const Rat& unit, long l, MoveLog& log) {
    const Cord c = cg.cords[k];
    const MetricGraph& C = cg.components[c.a.component];
    Rat half = Rat(unit * l / 2);
    int R = bush_root(C, half);
    Rat La = 2 * C.scale;
    std::vector<Rat> ta;
    for (const Corner& cr : corners_of(C)) {
        if (C.vertices[cr.vertex].rotation.size() != 1) continue;
        int end = C.vertices[cr.vertex].rotation[0];
        const Edge& E = C.edges[end / 2];
        if (E.horizontal || E.height != half) continue;
        if (C.vertex_at_end(end ^ 1) != R) continue;
        ta.push_back(rat_mod(cr.pos + unit, La));
        ta.push_back(rat_mod(cr.pos - unit, La));
    }
    std::vector<Rat> tb = {Rat(0), unit};
    plant(cg, k, ta, tb, log, "the catalyst graft on a small-bush twig");
}

// Coarse-grid re-entry, second leg: take the catalyst back off together
// with one unit of the twig it sits on.
int detach_unit_pair(CordGraph& cg, int ci, const Rat& unit, MoveLog& log) {
    const MetricGraph& C = cg.components[ci];
    for (size_t v = 0; v < C.vertices.size(); ++v) {
        if (!C.vertices[v].alive) continue;
        const std::vector<int>& rot = C.vertices[v].rotation;
        size_t d = rot.size();
        if (d < 3) continue;
        for (size_t i = 0; i < d; ++i) {
            int ea = rot[i], eb = rot[(i + 1) % d];
            if (hangs(C, ea, static_cast<int>(v)) && hangs(C, eb, static_cast<int>(v)) &&
                C.edges[ea / 2].height == unit && C.edges[eb / 2].height == unit)
                return do_detach(cg, ci, static_cast<int>(v), static_cast<int>(i), 2, log);
        }
    }
    throw std::logic_error("reduce: unit pair not found after the catalyst graft");
}

// Places the two-unit pendant of cord k2 onto the standard core of one lower
// genus, producing the standard form of the full level. Closers, tried in
// order: pump one unit into the tail (or its seat) and land the rest at the
// root; for tailless bushes grow the leg off a half twig the same way; for
// root-only cores attach the whole pendant by its midpoint half a unit down
// the leg, which creates the lower branch vertex directly. The closers live
// in complementary congruence classes, so one of them is always reachable.
// Returns the bush parameter of the assembled level.
int close_level(CordGraph& cg, int k2, const Rat& unit, int s2, MoveLog& log) {
    const Cord c = cg.cords[k2];
    int ci = c.a.component;
    const MetricGraph& C = cg.components[ci];
    int gp = genus_of(C);
    long nq = to_long(Rat(C.scale / unit));
    long tail = nq - gp - s2 - 1;
    int R = bush_root(C, Rat(unit / 2));
    std::vector<Corner> cs = corners_of(C);
    RTRACE("close_level: s2=%d gp=%d nq=%ld tail=%ld pos_a=%s pos_b=%s\n", s2, gp, nq, tail,
           rat_str(c.a.position).c_str(), rat_str(c.b.position).c_str());

    std::vector<Rat> ta;
    auto tip_corners = [&](int end) {
        int tipv = C.vertex_at_end(end ^ 1);
        for (const Corner& cr : cs)
            if (cr.vertex == tipv) ta.push_back(cr.pos);
    };
    int leg = -1;
    if (s2 == 0) {
        for (int end : C.vertices[R].rotation)
            if (hangs(C, end, R) && C.edges[end / 2].height != Rat(unit / 2)) leg = end;
        if (tail > 0) {
            if (leg < 0) throw std::logic_error("reduce: leg missing from the small bush");
            tip_corners(leg);
        } else {
            for (int end : C.vertices[R].rotation) tip_corners(end);  // all twigs alike
        }
    } else {
        int stem = -1;
        for (int end : C.vertices[R].rotation)
            if (!hangs(C, end, R)) stem = end;
        if (stem < 0) throw std::logic_error("reduce: missing stem under the small bush");
        int T = C.vertex_at_end(stem ^ 1);
        const std::vector<int>& rot = C.vertices[T].rotation;
        int dT = static_cast<int>(rot.size());
        int is = -1;
        for (int j = 0; j < dT; ++j)
            if (rot[j] == (stem ^ 1)) is = j;
        if (is < 0) throw std::logic_error("reduce: stem arrival missing from the rotation");
        if (tail > 0) {
            int cand = rot[(is + s2 + 1) % dT];
            if (!hangs(C, cand, T) || C.edges[cand / 2].height != Rat(tail * unit))
                throw std::logic_error("reduce: tail edge not where the standard form puts it");
            tip_corners(cand);
        } else {
            int after = rot[(is + s2) % dT];
            for (const Corner& cr : cs)
                if (cr.vertex == T && cr.after == after) ta.push_back(cr.pos);
        }
    }
    std::vector<Rat> tb = {unit, Rat(3 * unit)};
    if (try_steer_to(cg, k2, ta, tb, log)) {
        const Cord cc = cg.cords[k2];
        clear_marks(cg, cc.a.component, {}, {cc.a.position}, k2, log);
        cg = pump(cg, k2, unit, &log);
        attach_halves_at_root(cg, k2, unit, log);
        return s2;
    }
    RTRACE("close_level: tail pump blocked, trying the leg split\n");
    if (s2 == 0 && tail > 0) {
        // Whole-pendant attach by midpoint, half a unit down the leg.
        Walk w = face_walk(C);
        Rat H = C.edges[leg / 2].height;
        std::vector<Rat> ta2;
        for (const Step& st : w.steps) {
            if (st.edge != leg / 2) continue;
            Rat off = C.vertex_at_end(st.from) == R ? Rat(unit / 2) : Rat(H - unit / 2);
            ta2.push_back(rat_mod(st.start + off, w.total));
        }
        if (try_steer_to(cg, k2, ta2, tb, log)) {
            const Cord cc = cg.cords[k2];
            clear_marks(cg, cc.a.component, {}, {cc.a.position}, k2, log);
            clear_marks(cg, cc.b.component, {}, {cc.b.position}, k2, log);
            cg = attach(cg, k2, &log);
            return 1;
        }
    }
    throw std::logic_error("reduce: no reachable closure for the assembled level");
}

// ---- the recursion ----

// Reduces component ci, all of whose boundary distances are multiples of
// `unit` with gcd exactly `unit`, to a two-bush form with twig heights
// unit/2 and unit. Returns the bush parameter.
int reduce_vertical(CordGraph& cg, int ci, const Rat& unit, MoveLog& log, int depth) {
    if (depth > 64) throw std::logic_error("reduce: recursion ran too deep");
    int gamma;
    long nloc;
    {
        const MetricGraph& C = cg.components[ci];
        gamma = genus_of(C);
        if (gamma < 1) throw std::logic_error("reduce: positive genus expected");
        if (profile_gcd(C) != unit) throw std::logic_error("reduce: component left its unit grid");
        nloc = to_long(Rat(C.scale / unit));
        if (nloc < gamma + 1) throw std::logic_error("reduce: degree too small for the genus");
        RTRACE("reduce_vertical: ci=%d unit=%s gamma=%d nloc=%ld depth=%d\n", ci,
               rat_str(unit).c_str(), gamma, nloc, depth);
        int smax = std::min(gamma - 1, static_cast<int>(nloc) - gamma - 1);
        for (int s = 0; s <= smax; ++s)
            if (same_embedded_graph(C, scaled_two_bush(s, gamma, nloc, unit))) {
                RTRACE("reduce_vertical: short-circuit s=%d\n", s);
                return s;
            }
    }
    int k = make_catalyst(cg, ci, unit, log);
    int s;
    if (gamma == 1) {
        base_attach(cg, k, unit, log);
        s = 0;
    } else {
        Rat gg = profile_gcd(cg.components[ci]);
        long l = to_long(Rat(gg / unit));
        if (l == 1) {
            s = reduce_vertical(cg, ci, unit, log, depth + 1);
            attach_halves_at_root(cg, k, unit, log);
        } else {
            // Reduce on the coarse grid the core actually lives on, then break
            // that grid: graft the catalyst one unit below a twig tip and take
            // it back off together with one unit of the twig. The fine-grid
            // reduction then sees a primitive core of one lower genus, and the
            // two-unit pendant closes the level.
            reduce_vertical(cg, ci, gg, log, depth + 1);
            catalyst_onto_twig(cg, k, unit, l, log);
            int k2 = detach_unit_pair(cg, ci, unit, log);
            int s2 = reduce_vertical(cg, ci, unit, log, depth + 1);
            s = close_level(cg, k2, unit, s2, log);
        }
    }
    if (!same_embedded_graph(cg.components[ci], scaled_two_bush(s, gamma, nloc, unit)))
        throw std::logic_error("reduce: stage did not land on its standard form");
    return s;
}

}  // namespace

std::pair<int, MoveLog> reduce_to_standard(const MetricGraph& g_in) {
    std::vector<std::string> bad = validate(g_in);
    if (!bad.empty()) throw std::invalid_argument("reduce_to_standard: " + bad.front());
    PellData pd = pell_data(g_in);
    if (pd.g < 1) throw std::invalid_argument("reduce_to_standard: genus must be at least one");
    if (!pd.primitive)
        throw std::invalid_argument("reduce_to_standard: the boundary profile is not primitive");
    DegreePartition part0 = degree_partition_graph(g_in);

    MoveLog log;
    MetricGraph start = g_in;
    for (const Edge& e : g_in.edges)
        if (e.alive && e.horizontal) {
            start = collapse_horizontal(g_in, &log);
            break;
        }
    CordGraph cg{{start}, {}};
    int s = reduce_vertical(cg, 0, rat(1), log, 0);

    if (cg.components.size() != 1 || !cg.cords.empty())
        throw std::logic_error("reduce: surgery left open cords");
    const MetricGraph& out = cg.components[0];
    if (!same_embedded_graph(out, two_bush(s, pd.g, static_cast<int>(pd.n))))
        throw std::logic_error("reduce: result is not the standard form");
    DegreePartition part1 = degree_partition_graph(out);
    if (part1.minus != part0.minus || part1.plus != part0.plus)
        throw std::logic_error("reduce: the degree partition drifted");
    return {s, log};
}

}  // namespace pellabel
