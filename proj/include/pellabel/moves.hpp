#pragma once

#include <string>
#include <vector>

#include "pellabel/graph.hpp"
#include "pellabel/rat.hpp"

namespace pellabel {

struct BoundaryPoint {
    int component = -1;
    Rat position;  // arc length along the component's facial walk, in [0, 2H)
};

struct Cord {
    BoundaryPoint a, b;  // always on two distinct components
};

// Vertical pieces of a graph joined by width-zero cords. The components plus
// cords always form a tree. Positions are walk coordinates, not edge ids, so
// rolling is plain arithmetic; edges are re-subdivided on demand when a cord
// materializes.
struct CordGraph {
    std::vector<MetricGraph> components;
    std::vector<Cord> cords;

    Rat total_height() const;
};

struct MoveRecord {
    enum class Kind {
        CollapseHorizontal,
        Cordify,
        Detach,
        Roll,
        Attach,
        Pump,
        LocalDeform,
    };
    Kind kind = Kind::Roll;
    int component = -1;  // detach
    int vertex = -1;     // detach, local_deform
    int arc_first = -1;  // detach: slot in the rotation where the arc starts
    int arc_len = -1;    // detach: number of consecutive ends that leave
    int cord = -1;       // roll, attach, pump
    Rat delta;           // roll
    Rat amount;          // pump
    Rat dw, dh;          // local_deform
};

using MoveLog = std::vector<MoveRecord>;

// Split off the horizontal bridges as cords. Requires every horizontal
// component to be a two-edge bridge (tail - saddle - tail). Components are
// ordered by their smallest original edge id, cords by bridge edge id.
CordGraph cordify(const MetricGraph& g, MoveLog* log = nullptr);

// Contract all horizontal edges. When a contraction would fuse two branch
// points, every attachment point is first shifted by delta = (smallest
// positive gap between significant walk positions)/2 along its vertical
// walk. Shifted points landing on the same geometric spot share one saddle
// vertex; the result stays admissible.
MetricGraph collapse_horizontal(const MetricGraph& g, MoveLog* log = nullptr);

// Split the tree at `vertex` of `component`: the `arc_len` consecutive ends
// of its rotation starting at slot `arc_first` leave with a new pendant
// component; a cord joins the two scars. Both parts must be nonempty.
CordGraph detach(const CordGraph& cg, int component, int vertex, int arc_first, int arc_len,
                 MoveLog* log = nullptr);

// Slide both endpoints of cord `k` forward by delta in their own walk
// coordinates (the isoperiodic rolling). Rejected when a swept interval
// contains another cord's endpoint.
CordGraph roll(const CordGraph& cg, int k, const Rat& delta, MoveLog* log = nullptr);

// Fuse the two endpoints of cord `k` (width-zero limit of the bridge). The
// cord disappears and its two components merge; prohibited when both
// endpoints sit at branch points (nodal curve).
CordGraph attach(const CordGraph& cg, int k, MoveLog* log = nullptr);

// Transfer `amount` of height through cord `k` into the core. The endpoint
// on the core must rest at a branch point, the free endpoint must lie in the
// interior of a pendant vertical segment, and `amount` must equal one of the
// two arms the contact point cuts the pendant into. Afterwards the cord is
// parked at the grown saddle with the shrunk pendant hanging by its tip.
CordGraph pump(const CordGraph& cg, int k, const Rat& amount, MoveLog* log = nullptr);

// Trade width against height around a generic saddle `v` (an order-2 vertex
// with two incoming horizontal ends attached at interior points). The four
// adjacent vertical edges change height by +dh/-dh alternating in walk
// order, which keeps every boundary distance fixed; both widths grow by dw.
MetricGraph local_deform(const MetricGraph& g, int v, const Rat& dw, const Rat& dh,
                         MoveLog* log = nullptr);

// Facial walk of the whole cord graph: components stitched together at the
// cord endpoints. Branch points keep first-encounter order as in
// boundary_walk; total length is twice the summed height.
BoundaryProfile cord_profile(const CordGraph& cg);

// Branch test used by the move preconditions: true iff the position falls
// on a corner of an odd-order vertex.
bool at_branch_point(const MetricGraph& g, const Rat& position);

std::string movelog_json(const MoveLog& log);
MoveLog movelog_from_json(const std::string& text);

// Re-apply a recorded move sequence. The state starts as the bare graph and
// is promoted to a cord graph at the first cordify/detach record; it must
// end fully attached (single component, no cords).
MetricGraph replay(const MetricGraph& start, const MoveLog& log);

// Drive an admissible graph to the standard two-bush form with the same
// invariants: collapse horizontals, extract a unit catalyst by
// roll-and-pump, recurse on the core, and land on two_bush(s, g, n).
// Returns s and the full move log. Throws std::invalid_argument for
// non-primitive or genus-zero input and std::logic_error when an
// intermediate state breaks an invariant.
std::pair<int, MoveLog> reduce_to_standard(const MetricGraph& g);

}  // namespace pellabel
