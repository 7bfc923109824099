#pragma once

#include <crystal_forge/tensor.hh>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace crystal_forge
{
    using Edge = std::pair<int, int>;

    // Vertices are 1..vertex_count; edges are kept sorted and unique.
    class Digraph
    {
    private:
        int _vertex_count = 0;
        std::vector<Edge> _edges;
        std::vector<char> _adjacent;

    public:
        Digraph() = default;
        Digraph(int vertex_count, std::vector<Edge> edges);

        auto vertex_count() const -> int { return _vertex_count; }
        auto edges() const -> const std::vector<Edge> & { return _edges; }
        auto has_edge(int u, int v) const -> bool { return _adjacent[std::size_t(u - 1) * _vertex_count + (v - 1)]; }

        // 1-based position of an edge in the sorted edge list, or 0.
        auto edge_number(int u, int v) const -> int;

        auto out_degree(int v) const -> int;
        auto in_degree(int v) const -> int;
        auto is_loopless() const -> bool;

        auto operator==(const Digraph & other) const -> bool
        {
            return _vertex_count == other._vertex_count && _edges == other._edges;
        }
    };

    struct LineDigraph
    {
        Digraph graph;
        // labels[v - 1] is the parent edge of vertex v.
        std::vector<Edge> labels;
    };

    auto clique(int n) -> Digraph;
    auto line_digraph(const Digraph & x) -> LineDigraph;
    auto shift_digraph(int q, int i) -> Digraph;

    auto is_homomorphism(const Digraph & x, const Digraph & a, const std::vector<int> & map) -> bool;

    // map[v - 1] is the image of vertex v.
    auto homomorphism_exists(const Digraph & x, const Digraph & a) -> std::optional<std::vector<int>>;

    auto iterate_a(const Integer & p, int i) -> Integer;
    auto iterate_b(const Integer & p, int i) -> Integer;

    struct ChromaticParams
    {
        int i = 0;
        // b^{(1)}(c), ..., b^{(i)}(c) and the matching thresholds k^2 4^t.
        std::vector<Integer> b_iterates;
        std::vector<Integer> thresholds;
        // Bit length of a^{(i)}(d) + 1, and the number itself when it is small
        // enough to write down.
        Integer q_bits;
        std::optional<Integer> q;
    };

    auto fooling_parameters(int c, int d, int k) -> ChromaticParams;

    auto digraph_to_json(const Digraph & g) -> std::string;
    auto digraph_from_json(const std::string & text) -> Digraph;
}
