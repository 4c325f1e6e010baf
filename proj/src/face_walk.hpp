#pragma once

// Shared facial-walk table for the move and reduction engines. Internal to
// src; the public surface stays in the pellabel headers.

#include <stdexcept>
#include <vector>

#include "pellabel/graph.hpp"

namespace pellabel {
namespace walkdetail {

inline int rot_successor(const Vertex& v, int end) {
    const std::vector<int>& r = v.rotation;
    for (size_t i = 0; i < r.size(); ++i)
        if (r[i] == end) return r[(i + 1) % r.size()];
    throw std::logic_error("moves: end not present in rotation");
}

inline int rot_predecessor(const Vertex& v, int end) {
    const std::vector<int>& r = v.rotation;
    for (size_t i = 0; i < r.size(); ++i)
        if (r[i] == end) return r[(i + r.size() - 1) % r.size()];
    throw std::logic_error("moves: end not present in rotation");
}

inline int first_alive_edge(const MetricGraph& g) {
    for (size_t e = 0; e < g.edges.size(); ++e)
        if (g.edges[e].alive) return static_cast<int>(e);
    return -1;
}

// One departure of the facial walk: the dart (edge, from) leaves at offset
// `start`; the arrival corner sits at start + height.
struct Step {
    int edge = -1, from = -1;
    Rat start;
};

struct Walk {
    std::vector<Step> steps;
    Rat total;
};

inline Walk face_walk(const MetricGraph& g) {
    int e0 = first_alive_edge(g);
    if (e0 < 0) throw std::logic_error("moves: component has no edges");
    Walk w;
    Rat off = 0;
    int edge = e0, from = 0;
    int guard = 2 * g.alive_edge_count();
    for (int i = 0; i < guard; ++i) {
        w.steps.push_back({edge, from, off});
        if (!g.edges[edge].horizontal) off += g.edges[edge].height;
        int arrive = 2 * edge + (1 - from);
        int next = rot_successor(g.vertices[g.vertex_at_end(arrive)], arrive);
        edge = next / 2;
        from = next % 2;
        if (edge == e0 && from == 0) {
            if (i + 1 != guard) throw std::logic_error("moves: face closed early");
            break;
        }
    }
    if (edge != e0 || from != 0) throw std::logic_error("moves: face did not close");
    w.total = off;
    return w;
}

}  // namespace walkdetail
}  // namespace pellabel
