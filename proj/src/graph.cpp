#include "pellabel/graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "json.hpp"

namespace pellabel {

int MetricGraph::add_vertex() {
    vertices.push_back(Vertex{});
    return static_cast<int>(vertices.size()) - 1;
}

int MetricGraph::add_vertical(int a, int b, const Rat& height) {
    int e = static_cast<int>(edges.size());
    Edge edge;
    edge.ends = {a, b};
    edge.height = height;
    edges.push_back(edge);
    vertices.at(a).rotation.push_back(2 * e);
    vertices.at(b).rotation.push_back(2 * e + 1);
    return e;
}

int MetricGraph::add_horizontal(int tail, int head, const Rat& width_tail, const Rat& width_head) {
    int e = static_cast<int>(edges.size());
    Edge edge;
    edge.horizontal = true;
    edge.ends = {tail, head};
    edge.width_tail = width_tail;
    edge.width_head = width_head;
    edges.push_back(edge);
    vertices.at(tail).rotation.push_back(2 * e);
    vertices.at(head).rotation.push_back(2 * e + 1);
    return e;
}

int MetricGraph::alive_vertex_count() const {
    int c = 0;
    for (const Vertex& v : vertices) c += v.alive ? 1 : 0;
    return c;
}

int MetricGraph::alive_edge_count() const {
    int c = 0;
    for (const Edge& e : edges) c += e.alive ? 1 : 0;
    return c;
}

namespace {

bool end_alive(const MetricGraph& g, int end) {
    return end >= 0 && end < 2 * static_cast<int>(g.edges.size()) && g.edges[end / 2].alive;
}

// Outgoing = tail side of a horizontal edge.
bool is_outgoing(const MetricGraph& g, int end) {
    return g.edges[end / 2].horizontal && end % 2 == 0;
}

bool is_incoming(const MetricGraph& g, int end) {
    return g.edges[end / 2].horizontal && end % 2 == 1;
}

bool is_vertical_end(const MetricGraph& g, int end) { return !g.edges[end / 2].horizontal; }

void check_structure(const MetricGraph& g) {
    std::vector<int> seen(2 * g.edges.size(), 0);
    for (size_t v = 0; v < g.vertices.size(); ++v) {
        if (!g.vertices[v].alive) continue;
        for (int end : g.vertices[v].rotation) {
            if (!end_alive(g, end))
                throw std::invalid_argument("malformed rotation system: dead or out-of-range end at vertex " +
                                            std::to_string(v));
            if (g.vertex_at_end(end) != static_cast<int>(v))
                throw std::invalid_argument("malformed rotation system: end " + std::to_string(end) +
                                            " listed at the wrong vertex " + std::to_string(v));
            if (seen[end]++)
                throw std::invalid_argument("malformed rotation system: end " + std::to_string(end) +
                                            " listed twice");
        }
    }
    for (size_t e = 0; e < g.edges.size(); ++e) {
        if (!g.edges[e].alive) continue;
        for (int side = 0; side < 2; ++side) {
            int v = g.edges[e].ends[side];
            if (v < 0 || v >= static_cast<int>(g.vertices.size()) || !g.vertices[v].alive)
                throw std::invalid_argument("malformed rotation system: edge " + std::to_string(e) +
                                            " has a dead endpoint");
            if (!seen[2 * e + side])
                throw std::invalid_argument("malformed rotation system: end " + std::to_string(2 * e + side) +
                                            " missing from its vertex rotation");
        }
    }
}

bool is_tree(const MetricGraph& g) {
    int nv = g.alive_vertex_count();
    int ne = g.alive_edge_count();
    if (nv == 0 || ne != nv - 1) return false;
    int root = -1;
    for (size_t v = 0; v < g.vertices.size() && root < 0; ++v)
        if (g.vertices[v].alive) root = static_cast<int>(v);
    std::vector<char> reached(g.vertices.size(), 0);
    std::vector<int> stack{root};
    reached[root] = 1;
    int count = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int end : g.vertices[v].rotation) {
            int w = g.vertex_at_end(end ^ 1);
            if (!reached[w]) {
                reached[w] = 1;
                ++count;
                stack.push_back(w);
            }
        }
    }
    return count == nv;
}

int rotation_successor(const Vertex& v, int end, bool mirrored) {
    const std::vector<int>& rot = v.rotation;
    for (size_t i = 0; i < rot.size(); ++i)
        if (rot[i] == end) {
            size_t k = rot.size();
            return mirrored ? rot[(i + k - 1) % k] : rot[(i + 1) % k];
        }
    throw std::logic_error("rotation_successor: end not present");
}

int first_alive_edge(const MetricGraph& g) {
    for (size_t e = 0; e < g.edges.size(); ++e)
        if (g.edges[e].alive) return static_cast<int>(e);
    return -1;
}

}  // namespace

int vertex_order(const MetricGraph& g, int v) {
    if (v < 0 || v >= static_cast<int>(g.vertices.size()) || !g.vertices[v].alive)
        throw std::invalid_argument("vertex_order: unknown vertex " + std::to_string(v));
    int d_vert = 0, d_in = 0;
    for (int end : g.vertices[v].rotation) {
        if (is_vertical_end(g, end)) ++d_vert;
        if (is_incoming(g, end)) ++d_in;
    }
    return d_vert + 2 * d_in - 2;
}

std::vector<std::string> validate(const MetricGraph& g) {
    check_structure(g);
    std::vector<std::string> bad;
    if (!is_tree(g)) bad.push_back("T1: underlying graph is not a tree");
    for (size_t v = 0; v < g.vertices.size(); ++v) {
        if (!g.vertices[v].alive) continue;
        const std::vector<int>& rot = g.vertices[v].rotation;
        size_t k = rot.size();
        for (size_t i = 0; i < k; ++i)
            if (is_outgoing(g, rot[i]) && is_outgoing(g, rot[(i + 1) % k])) {
                bad.push_back("T2: adjacent outgoing horizontal ends at vertex " + std::to_string(v));
                break;
            }
        if (vertex_order(g, static_cast<int>(v)) == 0) {
            bool has_vert = false, has_horiz = false;
            for (int end : rot) {
                has_vert = has_vert || is_vertical_end(g, end);
                has_horiz = has_horiz || g.edges[end / 2].horizontal;
            }
            if (!has_vert || !has_horiz)
                bad.push_back("T3: order-zero vertex " + std::to_string(v) +
                              " lacks a vertical or horizontal edge");
        }
    }
    Rat total = 0;
    for (size_t e = 0; e < g.edges.size(); ++e) {
        const Edge& edge = g.edges[e];
        if (!edge.alive) continue;
        if (edge.horizontal) {
            if (!(edge.width_tail < edge.width_head) || edge.width_tail < 0)
                bad.push_back("W1: widths not strictly increasing on edge " + std::to_string(e));
            for (int side = 0; side < 2; ++side) {
                bool touches_vertical = false;
                for (int end : g.vertices[edge.ends[side]].rotation)
                    touches_vertical = touches_vertical || is_vertical_end(g, end);
                const Rat& w = side == 0 ? edge.width_tail : edge.width_head;
                if (touches_vertical && w != 0)
                    bad.push_back("W1: nonzero width at vertical-incident endpoint of edge " +
                                  std::to_string(e));
            }
        } else {
            if (edge.height <= 0)
                bad.push_back("W2: nonpositive height on edge " + std::to_string(e));
            total += edge.height;
        }
    }
    if (total != g.scale)
        bad.push_back("W2: heights sum to " + rat_str(total) + ", scale is " + rat_str(g.scale));
    return bad;
}

BoundaryProfile boundary_walk(const MetricGraph& g) {
    check_structure(g);
    if (!is_tree(g)) throw std::invalid_argument("boundary_walk: not a tree");
    int e0 = first_alive_edge(g);
    if (e0 < 0) throw std::invalid_argument("boundary_walk: no edges");

    BoundaryProfile out;
    std::vector<Rat> positions;
    std::set<int> marked;
    Rat offset = 0;
    auto mark = [&](int v) {
        if (vertex_order(g, v) % 2 != 0 && marked.insert(v).second) {
            out.branch_points.push_back(v);
            positions.push_back(offset);
        }
    };

    int edge = e0, from = 0;
    mark(g.edges[e0].ends[0]);
    int guard = 2 * g.alive_edge_count();
    for (int step = 0; step < guard; ++step) {
        if (!g.edges[edge].horizontal) offset += g.edges[edge].height;
        int arrive = 2 * edge + (1 - from);
        mark(g.vertex_at_end(arrive));
        int next = rotation_successor(g.vertices[g.vertex_at_end(arrive)], arrive, false);
        edge = next / 2;
        from = next % 2;
        if (edge == e0 && from == 0) {
            if (step + 1 != guard) throw std::logic_error("boundary_walk: face closed early");
            break;
        }
    }
    if (edge != e0 || from != 0) throw std::logic_error("boundary_walk: face did not close");

    size_t k = positions.size();
    if (k == 0) throw std::logic_error("boundary_walk: no branch points");
    for (size_t j = 0; j + 1 < k; ++j) out.distances.push_back(positions[j + 1] - positions[j]);
    out.distances.push_back(offset - positions[k - 1] + positions[0]);
    return out;
}

BoundaryProfile boundary_profile(const MetricGraph& g) {
    for (const Edge& e : g.edges)
        if (e.alive && e.horizontal)
            throw std::invalid_argument("boundary_profile: graph has horizontal edges");
    return boundary_walk(g);
}

std::vector<Rat> periods(const MetricGraph& g) {
    std::vector<Rat> d = boundary_walk(g).distances;
    d.pop_back();
    return d;
}

PellData pell_data(const MetricGraph& g) {
    BoundaryProfile p = boundary_walk(g);
    size_t k = p.distances.size();
    if (k < 2 || k % 2 != 0) throw std::logic_error("pell_data: odd number of branch points");
    if (!is_integer(g.scale)) throw std::invalid_argument("pell_data: non-integral scale");
    long acc = 0;
    for (const Rat& d : p.distances) {
        if (!is_integer(d)) throw std::invalid_argument("pell_data: non-integral distance " + rat_str(d));
        acc = std::gcd(acc, d.get_num().get_si());
    }
    PellData out;
    out.g = static_cast<int>(k) / 2 - 1;
    out.n = g.scale.get_num().get_si();
    out.primitive = acc == 1;
    return out;
}

DegreePartition degree_partition_graph(const MetricGraph& g) {
    PellData data = pell_data(g);
    if (!data.primitive)
        throw std::invalid_argument("degree_partition_graph: non-primitive distance vector");
    BoundaryProfile p = boundary_walk(g);
    int color = 0, ones = 0, total = 0;
    for (const Rat& d : p.distances) {
        ones += color;
        ++total;
        color ^= static_cast<int>(d.get_num().get_si() & 1);
    }
    if (color != 0) throw std::logic_error("degree_partition_graph: inconsistent parity coloring");
    int a = ones, b = total - ones;
    return DegreePartition{std::min(a, b), std::max(a, b)};
}

std::vector<int> profile_mod2(const MetricGraph& g) {
    pell_data(g);  // enforces integrality of the distance vector
    BoundaryProfile p = boundary_walk(g);
    std::vector<int> out;
    for (size_t j = 0; j + 1 < p.distances.size(); ++j)
        out.push_back(static_cast<int>(p.distances[j].get_num().get_si() & 1));
    return out;
}

MetricGraph linear_graph(int s, int g, int n) {
    if (g < 1 || n < g + 1)
        throw std::invalid_argument("linear_graph: need g >= 1 and n >= g+1");
    if (s < 0 || s > std::min(g - 1, n - g - 1))
        throw std::invalid_argument("linear_graph: s out of range");
    MetricGraph out;
    out.scale = rat(n);
    std::vector<int> left(g + 1), right(g + 1);
    for (int i = 0; i <= g; ++i) {
        Rat h = i < g - s ? rat(1) : (i < g ? rat(2) : rat(n - g - s));
        left[i] = out.add_vertex();
        right[i] = out.add_vertex();
        out.add_vertical(left[i], right[i], h);
    }
    for (int i = 0; i < g; ++i) {
        int saddle = out.add_vertex();
        out.add_horizontal(right[i], saddle, 0, 1);
        out.add_horizontal(left[i + 1], saddle, 0, 1);
    }
    return out;
}

MetricGraph two_bush(int s, int g, int n) {
    if (g < 1 || n < g + 1)
        throw std::invalid_argument("two_bush: need g >= 1 and n >= g+1");
    if (s < 0 || s > std::min(g - 1, n - g - 1))
        throw std::invalid_argument("two_bush: s out of range");
    MetricGraph out;
    out.scale = rat(n);
    int root = out.add_vertex();
    int tail = n - g - s - 1;
    if (s == 0) {
        out.add_vertical(root, out.add_vertex(), rat(1, 2) + rat(tail));
    } else {
        int tip = out.add_vertex();
        out.add_vertical(root, tip, rat(1, 2));
        // Tip rotation: stem, s unit twigs, tail, s unit twigs (mirror pairs).
        for (int i = 0; i < s; ++i) out.add_vertical(tip, out.add_vertex(), rat(1));
        if (tail > 0) out.add_vertical(tip, out.add_vertex(), rat(tail));
        for (int i = 0; i < s; ++i) out.add_vertical(tip, out.add_vertex(), rat(1));
    }
    for (int i = 0; i < 2 * (g - s) + 1; ++i)
        out.add_vertical(root, out.add_vertex(), rat(1, 2));
    return out;
}

bool same_component(const MetricGraph& a, const MetricGraph& b) {
    PellData pa = pell_data(a);
    PellData pb = pell_data(b);
    if (!pa.primitive || !pb.primitive)
        throw std::invalid_argument("same_component: both graphs must be primitive");
    return pa.g == pb.g && pa.n == pb.n &&
           degree_partition_graph(a) == degree_partition_graph(b);
}

namespace {

// Face-walk encoding rooted at a dart: '(' on an edge's first traversal,
// ')' on its second, with the oriented metric data. Two embedded metric
// trees coincide up to relabeling iff some rooting gives equal strings;
// the mirrored walks fold reflection into the same quotient.
std::string walk_code(const MetricGraph& g, int e0, int from0, bool mirrored) {
    std::string code;
    std::vector<char> visited(g.edges.size(), 0);
    int edge = e0, from = from0;
    int guard = 2 * g.alive_edge_count();
    for (int step = 0; step < guard; ++step) {
        code += visited[edge] ? ')' : '(';
        visited[edge] = 1;
        const Edge& e = g.edges[edge];
        if (e.horizontal) {
            const Rat& wf = from == 0 ? e.width_tail : e.width_head;
            const Rat& wt = from == 0 ? e.width_head : e.width_tail;
            code += "H" + rat_str(wf) + ":" + rat_str(wt);
        } else {
            code += "V" + rat_str(e.height);
        }
        code += ';';
        int arrive = 2 * edge + (1 - from);
        int next = rotation_successor(g.vertices[g.vertex_at_end(arrive)], arrive, mirrored);
        edge = next / 2;
        from = next % 2;
    }
    return code;
}

std::string canonical_code(const MetricGraph& g) {
    check_structure(g);
    if (!is_tree(g)) throw std::invalid_argument("canonical_code: not a tree");
    std::string best;
    for (size_t e = 0; e < g.edges.size(); ++e) {
        if (!g.edges[e].alive) continue;
        for (int from = 0; from < 2; ++from)
            for (int mirrored = 0; mirrored < 2; ++mirrored) {
                std::string code = walk_code(g, static_cast<int>(e), from, mirrored != 0);
                if (best.empty() || code < best) best = std::move(code);
            }
    }
    return rat_str(g.scale) + "|" + best;
}

}  // namespace

bool same_embedded_graph(const MetricGraph& a, const MetricGraph& b) {
    if (a.alive_edge_count() != b.alive_edge_count()) return false;
    return canonical_code(a) == canonical_code(b);
}

std::string graph_json(const MetricGraph& g) {
    nlohmann::ordered_json j;
    j["scale"] = rat_str(g.scale);
    j["vertices"] = nlohmann::ordered_json::array();
    for (size_t v = 0; v < g.vertices.size(); ++v) {
        if (!g.vertices[v].alive) continue;
        nlohmann::ordered_json jv;
        jv["id"] = v;
        jv["rotation"] = g.vertices[v].rotation;
        j["vertices"].push_back(jv);
    }
    j["edges"] = nlohmann::ordered_json::array();
    for (size_t e = 0; e < g.edges.size(); ++e) {
        const Edge& edge = g.edges[e];
        if (!edge.alive) continue;
        nlohmann::ordered_json je;
        je["id"] = e;
        je["kind"] = edge.horizontal ? "horizontal" : "vertical";
        if (edge.horizontal)
            je["widths"] = {rat_str(edge.width_tail), rat_str(edge.width_head)};
        else
            je["height"] = rat_str(edge.height);
        je["endpoints"] = {edge.ends[0], edge.ends[1]};
        j["edges"].push_back(je);
    }
    return j.dump();
}

MetricGraph graph_from_json(const std::string& text) {
    try {
        nlohmann::json j = nlohmann::json::parse(text);
        MetricGraph g;
        g.scale = rat_from_string(j.at("scale").get<std::string>());
        int max_vertex = -1, max_edge = -1;
        for (const auto& jv : j.at("vertices")) max_vertex = std::max(max_vertex, jv.at("id").get<int>());
        for (const auto& je : j.at("edges")) max_edge = std::max(max_edge, je.at("id").get<int>());
        g.vertices.resize(max_vertex + 1);
        for (Vertex& v : g.vertices) v.alive = false;
        g.edges.resize(max_edge + 1);
        for (Edge& e : g.edges) e.alive = false;
        for (const auto& jv : j.at("vertices")) {
            Vertex& v = g.vertices[jv.at("id").get<int>()];
            v.alive = true;
            v.rotation = jv.at("rotation").get<std::vector<int>>();
        }
        for (const auto& je : j.at("edges")) {
            Edge& e = g.edges[je.at("id").get<int>()];
            e.alive = true;
            std::vector<int> ends = je.at("endpoints").get<std::vector<int>>();
            if (ends.size() != 2) throw std::invalid_argument("graph_from_json: bad endpoints");
            e.ends = {ends[0], ends[1]};
            std::string kind = je.at("kind").get<std::string>();
            if (kind == "horizontal") {
                e.horizontal = true;
                std::vector<std::string> w = je.at("widths").get<std::vector<std::string>>();
                if (w.size() != 2) throw std::invalid_argument("graph_from_json: bad widths");
                e.width_tail = rat_from_string(w[0]);
                e.width_head = rat_from_string(w[1]);
            } else if (kind == "vertical") {
                e.height = rat_from_string(je.at("height").get<std::string>());
            } else {
                throw std::invalid_argument("graph_from_json: unknown edge kind " + kind);
            }
        }
        check_structure(g);
        return g;
    } catch (const nlohmann::json::exception& err) {
        throw std::invalid_argument(std::string("graph_from_json: ") + err.what());
    }
}

std::string render_ascii(const MetricGraph& g) {
    std::string out = "scale " + rat_str(g.scale) + "\n";
    for (size_t v = 0; v < g.vertices.size(); ++v) {
        if (!g.vertices[v].alive) continue;
        out += "v" + std::to_string(v) + " [";
        bool first = true;
        for (int end : g.vertices[v].rotation) {
            if (!first) out += ' ';
            first = false;
            out += "e" + std::to_string(end / 2) + "." + std::to_string(end % 2);
        }
        out += "]\n";
    }
    for (size_t e = 0; e < g.edges.size(); ++e) {
        const Edge& edge = g.edges[e];
        if (!edge.alive) continue;
        out += "e" + std::to_string(e) + " v" + std::to_string(edge.ends[0]);
        if (edge.horizontal)
            out += " --" + rat_str(edge.width_tail) + ".." + rat_str(edge.width_head) + "--> v";
        else
            out += " ==" + rat_str(edge.height) + "== v";
        out += std::to_string(edge.ends[1]) + "\n";
    }
    return out;
}

}  // namespace pellabel
