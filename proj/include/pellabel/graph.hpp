#pragma once

#include <array>
#include <string>
#include <vector>

#include "pellabel/pell.hpp"
#include "pellabel/rat.hpp"

namespace pellabel {

// Weighted plane trees encoding hyperelliptic curves with a real-normalized
// differential. Vertical edges carry a positive height; horizontal edges are
// oriented tail -> head with the width growing strictly along the edge and
// vanishing wherever a vertical edge meets the vertex.
//
// Edge ends are numbered 2*edge + side; side 0 is ends[0] (the tail for a
// horizontal edge). Each vertex stores the counterclockwise cyclic order of
// its incident ends. Vertices and edges are never erased, only marked dead,
// so ids stay stable across moves.

struct Edge {
    bool alive = true;
    bool horizontal = false;
    std::array<int, 2> ends{-1, -1};  // vertex id per side
    Rat height;                       // vertical only
    Rat width_tail, width_head;       // horizontal only
};

struct Vertex {
    bool alive = true;
    std::vector<int> rotation;  // CCW cyclic sequence of end ids
};

struct MetricGraph {
    Rat scale;  // total vertical height n
    std::vector<Vertex> vertices;
    std::vector<Edge> edges;

    int add_vertex();
    // Appends the new ends to the endpoint rotations in argument order.
    int add_vertical(int a, int b, const Rat& height);
    int add_horizontal(int tail, int head, const Rat& width_tail, const Rat& width_head);

    int vertex_at_end(int end) const { return edges[end / 2].ends[end % 2]; }
    int alive_vertex_count() const;
    int alive_edge_count() const;
};

// Axiom check; empty result means admissible. Violations name the axiom
// (T1 tree, T2 separated outgoing ends, T3 order-zero incidences, W1 width
// monotonicity, W2 heights) and the offending vertex or edge. Throws on a
// structurally broken rotation system.
std::vector<std::string> validate(const MetricGraph& g);

// ord(V) = #vertical ends + 2 #incoming horizontal ends - 2. Odd order
// marks a branch point; there are always 2g+2 of them when admissible.
int vertex_order(const MetricGraph& g, int v);

struct BoundaryProfile {
    std::vector<int> branch_points;  // vertex ids in first-encounter order
    std::vector<Rat> distances;      // cyclic: distances[j] leads to point j+1
};

// Counterclockwise facial walk of the tree. The walk starts at side 0 of the
// lowest live edge id; a branch point is recorded at its first encounter.
// Horizontal edges contribute no length. Sum of distances = 2n.
BoundaryProfile boundary_walk(const MetricGraph& g);

// boundary_walk restricted to graphs with no horizontal edges (the collapsed
// form); rejects input with live horizontal edges.
BoundaryProfile boundary_profile(const MetricGraph& g);

// First 2g+1 entries of the cyclic distance vector: the lattice generators.
// The omitted last one is determined by the total 2n.
std::vector<Rat> periods(const MetricGraph& g);

struct PellData {
    int g = 0;
    long n = 0;
    bool primitive = false;
};

// Genus, degree, and primitivity (gcd of the distance vector equals 1).
// Requires every distance and the scale to be integral.
PellData pell_data(const MetricGraph& g);

// Branch points split into two classes: same class iff the boundary distance
// between them is even. Class sizes, smaller first.
DegreePartition degree_partition_graph(const MetricGraph& g);

// Distance vector mod 2, truncated to the first 2g+1 entries.
std::vector<int> profile_mod2(const MetricGraph& g);

// g+1 vertical segments in a row with heights (1 x (g-s), 2 x s, n-g-s),
// consecutive segments joined through a saddle by a pair of horizontal
// edges. Requires g >= 1, n >= g+1, 0 <= s <= min(g-1, n-g-1).
MetricGraph linear_graph(int s, int g, int n);

// Star-of-stars standard form: a root with 2(g-s)+1 pendant twigs of height
// 1/2 plus a stem of height 1/2 whose tip carries 2s unit twigs and a tail
// of height n-g-s-1. Absent tail leaves the tip as a branch point; for s=0
// the stem and tail merge into a single pendant leg. Same parameter range
// as linear_graph.
MetricGraph two_bush(int s, int g, int n);

// Equality of embedded metric trees: same up to relabeling, rotation of the
// starting dart, and reflection of the plane.
bool same_embedded_graph(const MetricGraph& a, const MetricGraph& b);

// True iff the two graphs carry solutions in one deformation family:
// equal (g, n) and equal degree partition. Both inputs must be primitive.
bool same_component(const MetricGraph& a, const MetricGraph& b);

// JSON round-trip. Heights and widths are rational strings; rotations list
// end ids. Dead slots are dropped and ids are preserved.
std::string graph_json(const MetricGraph& g);
MetricGraph graph_from_json(const std::string& text);

// Debug rendering, one line per vertex and edge: double bars for vertical
// edges, arrows for horizontal ones.
std::string render_ascii(const MetricGraph& g);

}  // namespace pellabel
