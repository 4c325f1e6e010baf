#include "doctest.h"

#include <random>
#include <stdexcept>

#include "pellabel/moves.hpp"

using namespace pellabel;

namespace {

MetricGraph seg(const Rat& h) {
    MetricGraph g;
    int a = g.add_vertex(), b = g.add_vertex();
    g.add_vertical(a, b, h);
    g.scale = h;
    return g;
}

// Two vertical segments joined through a saddle at interior points: the
// smallest graph with a generic saddle.
MetricGraph xgraph() {
    MetricGraph g;
    int A = g.add_vertex(), P = g.add_vertex(), B = g.add_vertex();
    int C = g.add_vertex(), Q = g.add_vertex(), D = g.add_vertex();
    int M = g.add_vertex();
    g.add_vertical(A, P, 1);
    g.add_horizontal(P, M, 0, 1);
    g.add_vertical(P, B, 2);
    g.add_vertical(C, Q, 3);
    g.add_horizontal(Q, M, 0, 1);
    g.add_vertical(Q, D, 4);
    g.scale = 10;
    return g;
}

// Saddle whose two legs hang on the same vertical edge.
MetricGraph shared_quadrant() {
    MetricGraph g;
    int A = g.add_vertex(), P = g.add_vertex(), Q = g.add_vertex(), D = g.add_vertex();
    int M = g.add_vertex();
    g.add_vertical(A, P, 1);
    g.add_horizontal(P, M, 0, 1);
    g.add_vertical(P, Q, 2);
    g.add_horizontal(Q, M, 0, 1);
    g.add_vertical(Q, D, 3);
    g.scale = 6;
    return g;
}

// Three segments feeding one saddle: a horizontal component that is not a
// two-edge cord.
MetricGraph three_bridge() {
    MetricGraph g;
    int M = g.add_vertex();
    Rat lower[3] = {1, 3, 5}, upper[3] = {2, 4, 6};
    for (int i = 0; i < 3; ++i) {
        int a = g.add_vertex(), t = g.add_vertex(), b = g.add_vertex();
        g.add_vertical(a, t, lower[i]);
        g.add_horizontal(t, M, 0, 1);
        g.add_vertical(t, b, upper[i]);
    }
    g.scale = 21;
    return g;
}

std::vector<Rat> rats(std::initializer_list<long> xs) {
    std::vector<Rat> out;
    for (long x : xs) out.push_back(Rat(x));
    return out;
}

bool cyclic_eq(const std::vector<Rat>& a, const std::vector<Rat>& b) {
    if (a.size() != b.size()) return false;
    if (a.empty()) return true;
    for (size_t r = 0; r < a.size(); ++r) {
        bool ok = true;
        for (size_t i = 0; i < a.size(); ++i)
            if (a[i] != b[(i + r) % a.size()]) {
                ok = false;
                break;
            }
        if (ok) return true;
    }
    return false;
}

DegreePartition partition_of(const std::vector<Rat>& d) {
    int cur = 0, zeros = 0, ones = 0;
    for (const Rat& x : d) {
        REQUIRE(is_integer(x));
        (cur == 0 ? zeros : ones)++;
        if (x.get_num() % 2 != 0) cur ^= 1;
    }
    REQUIRE(cur == 0);  // parity flips close up
    DegreePartition p;
    p.minus = std::min(zeros, ones);
    p.plus = std::max(zeros, ones);
    return p;
}

Rat profile_sum(const std::vector<Rat>& d) {
    Rat s = 0;
    for (const Rat& x : d) s += x;
    return s;
}

}  // namespace

TEST_CASE("collapse removes horizontals and keeps the curve data") {
    for (const MetricGraph& g :
         {linear_graph(0, 2, 9), linear_graph(1, 2, 9), linear_graph(0, 1, 2),
          linear_graph(1, 3, 9), xgraph(), three_bridge()}) {
        MetricGraph c = collapse_horizontal(g);
        for (const Edge& e : c.edges) CHECK_FALSE((e.alive && e.horizontal));
        CHECK(validate(c).empty());
        PellData before = pell_data(g), after = pell_data(c);
        CHECK(after.g == before.g);
        CHECK(after.n == before.n);
        CHECK(after.primitive == before.primitive);
        CHECK(degree_partition_graph(c) == degree_partition_graph(g));
        CHECK(c.scale == g.scale);
    }
}

TEST_CASE("collapse separates colliding branch points deterministically") {
    MetricGraph c0 = collapse_horizontal(linear_graph(0, 2, 9));
    CHECK(cyclic_eq(boundary_profile(c0).distances, rats({1, 1, 7, 7, 1, 1})));
    MetricGraph c1 = collapse_horizontal(linear_graph(1, 2, 9));
    CHECK(cyclic_eq(boundary_profile(c1).distances, rats({1, 2, 6, 6, 2, 1})));
}

TEST_CASE("collapse is the identity without horizontals, and idempotent") {
    MetricGraph b = two_bush(1, 3, 7);
    CHECK(same_embedded_graph(collapse_horizontal(b), b));
    MetricGraph c = collapse_horizontal(linear_graph(0, 2, 9));
    CHECK(same_embedded_graph(collapse_horizontal(c), c));
}

TEST_CASE("cordify splits two-edge bridges into cords") {
    CordGraph cg = cordify(linear_graph(0, 2, 9));
    REQUIRE(cg.components.size() == 3);
    REQUIRE(cg.cords.size() == 2);
    CHECK(cg.total_height() == 9);
    CHECK(cg.components[0].scale == 1);
    CHECK(cg.components[1].scale == 1);
    CHECK(cg.components[2].scale == 7);
    for (const Cord& c : cg.cords) {
        CHECK(at_branch_point(cg.components[c.a.component], c.a.position));
        CHECK(at_branch_point(cg.components[c.b.component], c.b.position));
    }

    CordGraph cx = cordify(xgraph());
    REQUIRE(cx.components.size() == 2);
    REQUIRE(cx.cords.size() == 1);
    CHECK(cx.components[0].scale == 3);
    CHECK(cx.components[1].scale == 7);
    CHECK_FALSE(at_branch_point(cx.components[cx.cords[0].a.component], cx.cords[0].a.position));
    CHECK_FALSE(at_branch_point(cx.components[cx.cords[0].b.component], cx.cords[0].b.position));

    CHECK_THROWS_AS(cordify(three_bridge()), std::invalid_argument);
    MetricGraph bad = seg(1);
    bad.scale = -1;  // wrong bookkeeping makes it inadmissible
    CHECK_THROWS_AS(cordify(bad), std::invalid_argument);
}

TEST_CASE("the cord face reproduces the full boundary walk") {
    for (const MetricGraph& g :
         {linear_graph(0, 2, 9), linear_graph(1, 2, 9), linear_graph(1, 3, 9), xgraph(),
          two_bush(2, 4, 9)}) {
        CordGraph cg = cordify(g);
        BoundaryProfile joint = cord_profile(cg);
        BoundaryProfile whole = boundary_walk(g);
        CHECK(cyclic_eq(joint.distances, whole.distances));
    }
}

TEST_CASE("rolling: revolutions, inverses, and the crossing guard") {
    CordGraph cg = cordify(linear_graph(0, 1, 2));
    REQUIRE(cg.cords.size() == 1);
    CordGraph full = roll(cg, 0, 2);
    CHECK(full.cords[0].a.position == cg.cords[0].a.position);
    CHECK(full.cords[0].b.position == cg.cords[0].b.position);
    CordGraph there = roll(cg, 0, rat(1, 3));
    CHECK(there.cords[0].a.position != cg.cords[0].a.position);
    CordGraph back = roll(there, 0, rat(-1, 3));
    CHECK(back.cords[0].a.position == cg.cords[0].a.position);
    CHECK(back.cords[0].b.position == cg.cords[0].b.position);

    CordGraph wide = cordify(linear_graph(0, 1, 8));
    CordGraph spin = roll(wide, 0, 14);  // lcm of the two walk lengths
    CHECK(spin.cords[0].a.position == wide.cords[0].a.position);
    CHECK(spin.cords[0].b.position == wide.cords[0].b.position);

    CordGraph chain = cordify(linear_graph(0, 2, 9));
    CHECK_THROWS_WITH_AS(chain = roll(chain, 0, 2),
                         "roll: attachment point would cross another cord", std::invalid_argument);
    // Rolling off a branch corner resolves the contact and may reorder the
    // face, but the partition survives.
    BoundaryProfile ref = cord_profile(chain);
    CordGraph nudged = roll(chain, 0, rat(1, 4));
    BoundaryProfile moved = cord_profile(nudged);
    CHECK(profile_sum(moved.distances) == profile_sum(ref.distances));
    CHECK(moved.distances.size() == ref.distances.size());
    CHECK(partition_of(moved.distances) == partition_of(ref.distances));
    CordGraph undone = roll(nudged, 0, rat(-1, 4));
    CHECK(undone.cords[0].a.position == chain.cords[0].a.position);
    CHECK(undone.cords[0].b.position == chain.cords[0].b.position);

    // With both endpoints interior, a small roll keeps every distance.
    CordGraph cx = cordify(xgraph());
    BoundaryProfile xref = cord_profile(cx);
    CordGraph xr = roll(cx, 0, rat(1, 4));
    CHECK(cyclic_eq(cord_profile(xr).distances, xref.distances));
}

TEST_CASE("branch-point test distinguishes corners from interior points") {
    MetricGraph s = seg(2);
    CHECK(at_branch_point(s, 0));
    CHECK(at_branch_point(s, 2));
    CHECK_FALSE(at_branch_point(s, 1));
    CHECK_FALSE(at_branch_point(s, rat(1, 2)));
    CHECK_FALSE(at_branch_point(s, rat(7, 2)));
}

TEST_CASE("detach and attach are inverse surgeries") {
    int round_trips = 0;
    for (const MetricGraph& start :
         {two_bush(2, 4, 9), collapse_horizontal(linear_graph(1, 3, 9))}) {
        BoundaryProfile ref = boundary_walk(start);
        DegreePartition refpart = partition_of(ref.distances);
        CordGraph cg0{{start}, {}};
        for (size_t v = 0; v < start.vertices.size(); ++v) {
            if (!start.vertices[v].alive) continue;
            int d = static_cast<int>(start.vertices[v].rotation.size());
            if (d < 2) continue;
            for (int first = 0; first < d; ++first)
                for (int len = 1; len < d; ++len) {
                    CordGraph cut;
                    try {
                        cut = detach(cg0, 0, static_cast<int>(v), first, len);
                    } catch (const std::invalid_argument&) {
                        continue;  // parity-protected arcs
                    }
                    BoundaryProfile p = cord_profile(cut);
                    CHECK(profile_sum(p.distances) == 2 * start.scale);
                    CHECK(p.distances.size() == ref.distances.size());
                    CHECK(partition_of(p.distances) == refpart);
                    MoveLog log;
                    CordGraph cut2 = detach(cg0, 0, static_cast<int>(v), first, len, &log);
                    CordGraph glued;
                    try {
                        glued = attach(cut2, 0, &log);
                    } catch (const std::invalid_argument&) {
                        continue;  // nodal prohibition
                    }
                    REQUIRE(glued.components.size() == 1);
                    REQUIRE(glued.cords.empty());
                    CHECK(same_embedded_graph(glued.components[0], start));
                    CHECK(same_embedded_graph(replay(start, log), start));
                    ++round_trips;
                }
        }
    }
    CHECK(round_trips >= 5);
}

TEST_CASE("detach rejections name the obstruction") {
    MetricGraph b = two_bush(2, 4, 9);
    CordGraph cg{{b}, {}};
    int root = -1;
    for (size_t v = 0; v < b.vertices.size(); ++v)
        if (b.vertices[v].rotation.size() == 6) root = static_cast<int>(v);
    REQUIRE(root >= 0);  // small bush root: 2(g-s)+1 twigs and a stem
    CHECK_THROWS_WITH_AS(cg = detach(cg, 0, root, 0, 1),
                         "detach: splitting there would create a new pair of branch points",
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(cg = detach(cg, 0, root, 0, 6),
                         "detach: arc must leave both sides nonempty", std::invalid_argument);
    CHECK_THROWS_AS(cg = detach(cg, 0, 999, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(cg = detach(cg, 7, root, 0, 1), std::invalid_argument);

    CordGraph once = detach(cg, 0, root, 0, 2);
    int stub = -1;  // the split vertex, renumbered by the rebuild
    for (size_t v = 0; v < once.components[0].vertices.size(); ++v)
        if (once.components[0].vertices[v].alive &&
            once.components[0].vertices[v].rotation.size() == 4)
            stub = static_cast<int>(v);
    REQUIRE(stub >= 0);
    // The new cord parks at the seam; splitting the same gap again is blocked.
    CHECK_THROWS_WITH_AS(once = detach(once, 0, stub, 0, 2),
                         "detach: another cord is attached at the split point",
                         std::invalid_argument);
}

TEST_CASE("attach refuses the nodal configuration") {
    CordGraph cg = cordify(linear_graph(0, 2, 9));  // both cords join branch points
    CHECK_THROWS_WITH_AS(cg = attach(cg, 0), "attach: both cord endpoints are branch points",
                         std::invalid_argument);
    CHECK_THROWS_AS(cg = attach(cg, 5), std::invalid_argument);
}

TEST_CASE("pump transfers height through a cord") {
    CordGraph cg{{seg(1), seg(2)}, {Cord{{0, Rat(1)}, {1, Rat(1)}}}};
    REQUIRE(at_branch_point(cg.components[0], 1));
    REQUIRE_FALSE(at_branch_point(cg.components[1], 1));
    BoundaryProfile before = cord_profile(cg);

    CordGraph out = pump(cg, 0, 1);
    CHECK(out.components[0].scale == 2);
    CHECK(out.components[1].scale == 1);
    CHECK(boundary_profile(out.components[0]).distances == rats({2, 2}));
    CHECK(boundary_profile(out.components[1]).distances == rats({1, 1}));
    CHECK_FALSE(at_branch_point(out.components[0], out.cords[0].a.position));
    CHECK(at_branch_point(out.components[1], out.cords[0].b.position));
    BoundaryProfile after = cord_profile(out);
    CHECK(profile_sum(after.distances) == profile_sum(before.distances));
    CHECK(after.distances.size() == before.distances.size());
    CHECK(partition_of(after.distances) == partition_of(before.distances));

    // The shrunk pendant hangs by its tip one unit from the new saddle, so
    // pumping one unit back is again legal and mirrors the state.
    CordGraph again = pump(out, 0, 1);
    CHECK(again.components[0].scale == 1);
    CHECK(again.components[1].scale == 2);
    CHECK(at_branch_point(again.components[0], again.cords[0].a.position));
    CHECK_FALSE(at_branch_point(again.components[1], again.cords[0].b.position));

    CHECK_THROWS_WITH_AS(out = pump(cg, 0, 3), "pump: amount exceeds the available height",
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(out = pump(cg, 0, rat(1, 2)),
                         "pump: amount must equal one of the two pendant arms",
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(out = pump(cg, 0, -1), "pump: amount must be positive",
                         std::invalid_argument);

    CordGraph nodal{{seg(1), seg(2)}, {Cord{{0, Rat(1)}, {1, Rat(0)}}}};
    CHECK_THROWS_WITH_AS(out = pump(nodal, 0, 1), "pump: both cord endpoints are branch points",
                         std::invalid_argument);
    CordGraph loose{{seg(1), seg(2)}, {Cord{{0, rat(1, 2)}, {1, Rat(1)}}}};
    CHECK_THROWS_WITH_AS(out = pump(loose, 0, 1),
                         "pump: no cord endpoint rests at a branch point of the core",
                         std::invalid_argument);

    MetricGraph tripod;
    {
        int c = tripod.add_vertex();
        for (int i = 0; i < 3; ++i) {
            int t = tripod.add_vertex();
            tripod.add_vertical(c, t, 1);
        }
        tripod.scale = 3;
    }
    CordGraph multi{{seg(1), tripod}, {Cord{{0, Rat(1)}, {1, rat(1, 2)}}}};
    CHECK_THROWS_WITH_AS(out = pump(multi, 0, rat(1, 2)),
                         "pump: the free endpoint must lie on a pendant vertical segment",
                         std::invalid_argument);
}

TEST_CASE("local deformation trades width for height and keeps the face") {
    MetricGraph g = xgraph();
    BoundaryProfile ref = boundary_walk(g);
    MetricGraph d = local_deform(g, 6, rat(1, 2), rat(1, 4));
    BoundaryProfile after = boundary_walk(d);
    CHECK(after.distances == ref.distances);
    CHECK(after.branch_points == ref.branch_points);
    // First-traversal order of the quadrants from the walk origin, signs
    // alternating from +dh.
    CHECK(d.edges[0].height == rat(5, 4));
    CHECK(d.edges[5].height == rat(15, 4));
    CHECK(d.edges[3].height == rat(13, 4));
    CHECK(d.edges[2].height == rat(7, 4));
    CHECK(d.edges[1].width_head == rat(3, 2));
    CHECK(d.edges[4].width_head == rat(3, 2));

    MetricGraph restored = local_deform(d, 6, rat(-1, 2), rat(-1, 4));
    for (size_t e = 0; e < g.edges.size(); ++e) {
        CHECK(restored.edges[e].height == g.edges[e].height);
        CHECK(restored.edges[e].width_head == g.edges[e].width_head);
    }

    CHECK_THROWS_WITH_AS(d = local_deform(g, 6, 0, 2),
                         "local_deform: height increment drives a height nonpositive",
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(d = local_deform(g, 6, -1, 0),
                         "local_deform: width increment drives a width nonpositive",
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(d = local_deform(g, 1, 0, rat(1, 8)),
                         "local_deform: vertex is not a generic saddle", std::invalid_argument);
    MetricGraph shared = shared_quadrant();
    CHECK_THROWS_WITH_AS(d = local_deform(shared, 4, 0, rat(1, 8)),
                         "local_deform: quadrant edges are not distinct", std::invalid_argument);
}

TEST_CASE("random moves preserve the face invariants") {
    std::mt19937 rng(987654321u);
    auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
    std::vector<MetricGraph> starts = {two_bush(0, 1, 2), two_bush(1, 3, 7), two_bush(2, 4, 9),
                                       collapse_horizontal(linear_graph(0, 2, 9)),
                                       collapse_horizontal(linear_graph(1, 2, 9))};
    int total_ok = 0;
    for (const MetricGraph& start : starts) {
        BoundaryProfile ref = boundary_walk(start);
        DegreePartition refpart = partition_of(ref.distances);
        Rat two_n = 2 * start.scale;
        size_t marks = ref.distances.size();
        CordGraph cg{{start}, {}};
        int ok = 0, attempts = 0;
        while (ok < 210 && attempts < 60000) {
            ++attempts;
            try {
                int kind;
                if (cg.cords.empty())
                    kind = 1;
                else if (cg.components.size() > 6)
                    kind = 2;
                else
                    kind = pick(4);
                if (kind == 0) {
                    int k = pick(static_cast<int>(cg.cords.size()));
                    Rat delta = rat(pick(25) - 12, pick(4) + 1);
                    cg = roll(cg, k, delta);
                } else if (kind == 1) {
                    int ci = pick(static_cast<int>(cg.components.size()));
                    const MetricGraph& comp = cg.components[ci];
                    std::vector<int> fat;
                    for (size_t v = 0; v < comp.vertices.size(); ++v)
                        if (comp.vertices[v].alive && comp.vertices[v].rotation.size() >= 2)
                            fat.push_back(static_cast<int>(v));
                    if (fat.empty()) continue;
                    int v = fat[pick(static_cast<int>(fat.size()))];
                    int d = static_cast<int>(comp.vertices[v].rotation.size());
                    cg = detach(cg, ci, v, pick(d), 1 + pick(d - 1));
                } else if (kind == 2) {
                    cg = attach(cg, pick(static_cast<int>(cg.cords.size())));
                } else {
                    struct Cand {
                        int cord;
                        Rat amount;
                    };
                    std::vector<Cand> cands;
                    for (size_t k = 0; k < cg.cords.size(); ++k) {
                        const Cord& c = cg.cords[k];
                        bool ba = at_branch_point(cg.components[c.a.component], c.a.position);
                        bool bb = at_branch_point(cg.components[c.b.component], c.b.position);
                        if (ba == bb) continue;
                        const BoundaryPoint& pp = ba ? c.b : c.a;
                        const MetricGraph& P = cg.components[pp.component];
                        if (P.alive_edge_count() != 1) continue;
                        Rat h = P.scale;
                        Rat x = pp.position <= h ? pp.position : Rat(2 * h - pp.position);
                        Rat arms[2] = {x, Rat(h - x)};
                        for (const Rat& amount : arms)
                            if (amount > 0 && is_integer(2 * amount))
                                cands.push_back({static_cast<int>(k), amount});
                    }
                    if (cands.empty()) continue;
                    const Cand& c = cands[pick(static_cast<int>(cands.size()))];
                    cg = pump(cg, c.cord, c.amount);
                }
                ++ok;
                BoundaryProfile p = cord_profile(cg);
                CHECK(profile_sum(p.distances) == two_n);
                CHECK(p.distances.size() == marks);
                CHECK(partition_of(p.distances) == refpart);
            } catch (const std::invalid_argument&) {
            }
        }
        CHECK(ok == 210);
        total_ok += ok;
    }
    CHECK(total_ok >= 1000);
}

TEST_CASE("move records survive the JSON round trip") {
    MoveLog log;
    MoveRecord r;
    r.kind = MoveRecord::Kind::CollapseHorizontal;
    log.push_back(r);
    r = MoveRecord{};
    r.kind = MoveRecord::Kind::Cordify;
    log.push_back(r);
    r = MoveRecord{};
    r.kind = MoveRecord::Kind::Detach;
    r.component = 2;
    r.vertex = 5;
    r.arc_first = 1;
    r.arc_len = 2;
    log.push_back(r);
    r = MoveRecord{};
    r.kind = MoveRecord::Kind::Roll;
    r.cord = 3;
    r.delta = rat(-7, 3);
    log.push_back(r);
    r = MoveRecord{};
    r.kind = MoveRecord::Kind::Attach;
    r.cord = 1;
    log.push_back(r);
    r = MoveRecord{};
    r.kind = MoveRecord::Kind::Pump;
    r.cord = 0;
    r.amount = rat(3, 2);
    log.push_back(r);
    r = MoveRecord{};
    r.kind = MoveRecord::Kind::LocalDeform;
    r.vertex = 4;
    r.dw = rat(1, 2);
    r.dh = rat(-1, 4);
    log.push_back(r);

    MoveLog parsed = movelog_from_json(movelog_json(log));
    REQUIRE(parsed.size() == log.size());
    for (size_t i = 0; i < log.size(); ++i) {
        CHECK(parsed[i].kind == log[i].kind);
        CHECK(parsed[i].component == log[i].component);
        CHECK(parsed[i].vertex == log[i].vertex);
        CHECK(parsed[i].arc_first == log[i].arc_first);
        CHECK(parsed[i].arc_len == log[i].arc_len);
        CHECK(parsed[i].cord == log[i].cord);
        CHECK(parsed[i].delta == log[i].delta);
        CHECK(parsed[i].amount == log[i].amount);
        CHECK(parsed[i].dw == log[i].dw);
        CHECK(parsed[i].dh == log[i].dh);
    }

    CHECK_THROWS_AS(movelog_from_json("{\"move\":\"roll\"}"), std::invalid_argument);
    CHECK_THROWS_AS(movelog_from_json("[{\"move\":\"teleport\"}]"), std::invalid_argument);
}

TEST_CASE("replay rejects ill-formed logs") {
    MetricGraph b = two_bush(2, 4, 9);
    int root = -1;
    for (size_t v = 0; v < b.vertices.size(); ++v)
        if (b.vertices[v].rotation.size() == 6) root = static_cast<int>(v);
    REQUIRE(root >= 0);
    MoveLog open_log;
    CordGraph cg{{b}, {}};
    cg = detach(cg, 0, root, 0, 2, &open_log);
    CHECK_THROWS_AS(replay(b, open_log), std::logic_error);

    MoveLog twice;
    MoveRecord r;
    r.kind = MoveRecord::Kind::Cordify;
    twice.push_back(r);
    twice.push_back(r);
    CHECK_THROWS_AS(replay(linear_graph(0, 2, 9), twice), std::logic_error);
}
