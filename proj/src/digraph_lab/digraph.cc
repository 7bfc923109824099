#include <crystal_forge/digraph.hh>

#include <json.hpp>

#include <algorithm>
#include <numeric>

namespace crystal_forge
{
    Digraph::Digraph(int vertex_count, std::vector<Edge> edges) :
        _vertex_count(vertex_count),
        _edges(std::move(edges))
    {
        if (vertex_count < 1)
            throw Error(ErrorKind::InvalidParams, "a digraph needs at least one vertex");
        std::sort(_edges.begin(), _edges.end());
        _edges.erase(std::unique(_edges.begin(), _edges.end()), _edges.end());
        _adjacent.assign(std::size_t(vertex_count) * vertex_count, 0);
        for (auto & [u, v] : _edges) {
            if (u < 1 || u > vertex_count || v < 1 || v > vertex_count)
                throw Error(ErrorKind::InvalidIndex, "edge (" + std::to_string(u) + "," + std::to_string(v) + ") outside [" + std::to_string(vertex_count) + "]");
            _adjacent[std::size_t(u - 1) * vertex_count + (v - 1)] = 1;
        }
    }

    auto Digraph::edge_number(int u, int v) const -> int
    {
        auto it = std::lower_bound(_edges.begin(), _edges.end(), Edge{u, v});
        if (it == _edges.end() || *it != Edge{u, v})
            return 0;
        return int(it - _edges.begin()) + 1;
    }

    auto Digraph::out_degree(int v) const -> int
    {
        return int(std::count_if(_edges.begin(), _edges.end(), [&](const Edge & e) { return e.first == v; }));
    }

    auto Digraph::in_degree(int v) const -> int
    {
        return int(std::count_if(_edges.begin(), _edges.end(), [&](const Edge & e) { return e.second == v; }));
    }

    auto Digraph::is_loopless() const -> bool
    {
        return std::none_of(_edges.begin(), _edges.end(), [](const Edge & e) { return e.first == e.second; });
    }

    auto clique(int n) -> Digraph
    {
        std::vector<Edge> edges;
        for (int u = 1; u <= n; ++u)
            for (int v = 1; v <= n; ++v)
                if (u != v)
                    edges.emplace_back(u, v);
        return Digraph(n, std::move(edges));
    }

    auto line_digraph(const Digraph & x) -> LineDigraph
    {
        auto & parents = x.edges();
        if (parents.empty())
            throw Error(ErrorKind::InvalidParams, "the line digraph of an edgeless digraph has no vertices");
        std::vector<std::vector<int>> leaving(std::size_t(x.vertex_count()) + 1);
        for (std::size_t e = 0; e < parents.size(); ++e)
            leaving[parents[e].first].push_back(int(e) + 1);

        std::vector<Edge> edges;
        for (std::size_t e = 0; e < parents.size(); ++e)
            for (int f : leaving[parents[e].second])
                edges.emplace_back(int(e) + 1, f);
        return LineDigraph{Digraph(int(parents.size()), std::move(edges)), parents};
    }

    auto shift_digraph(int q, int i) -> Digraph
    {
        if (q < 1 || i < 0)
            throw Error(ErrorKind::InvalidParams, "shift digraph needs q >= 1 and i >= 0");
        Digraph result = clique(q);
        for (int step = 0; step < i; ++step)
            result = line_digraph(result).graph;
        return result;
    }

    auto is_homomorphism(const Digraph & x, const Digraph & a, const std::vector<int> & map) -> bool
    {
        if (int(map.size()) != x.vertex_count())
            return false;
        for (int image : map)
            if (image < 1 || image > a.vertex_count())
                return false;
        return std::all_of(x.edges().begin(), x.edges().end(), [&](const Edge & e) {
            return a.has_edge(map[e.first - 1], map[e.second - 1]);
        });
    }

    namespace
    {
        struct Search
        {
            const Digraph & x;
            const Digraph & a;
            std::vector<int> order;
            std::vector<std::vector<int>> out, in;
            std::vector<int> map;

            auto run(std::size_t depth, std::vector<std::vector<char>> & domains) -> bool
            {
                if (depth == order.size())
                    return true;
                int v = order[depth];
                for (int c = 1; c <= a.vertex_count(); ++c) {
                    if (! domains[v - 1][c - 1])
                        continue;
                    map[v - 1] = c;
                    auto narrowed = domains;
                    bool wiped = false;
                    for (int w : out[v - 1]) {
                        if (map[w - 1] != 0)
                            continue;
                        bool any = false;
                        for (int d = 1; d <= a.vertex_count(); ++d) {
                            auto & slot = narrowed[w - 1][d - 1];
                            slot = slot && a.has_edge(c, d);
                            any = any || slot;
                        }
                        wiped = wiped || ! any;
                    }
                    for (int w : in[v - 1]) {
                        if (map[w - 1] != 0)
                            continue;
                        bool any = false;
                        for (int d = 1; d <= a.vertex_count(); ++d) {
                            auto & slot = narrowed[w - 1][d - 1];
                            slot = slot && a.has_edge(d, c);
                            any = any || slot;
                        }
                        wiped = wiped || ! any;
                    }
                    if (! wiped && run(depth + 1, narrowed))
                        return true;
                    map[v - 1] = 0;
                }
                return false;
            }
        };
    }

    auto homomorphism_exists(const Digraph & x, const Digraph & a) -> std::optional<std::vector<int>>
    {
        int n = x.vertex_count(), m = a.vertex_count();
        Search search{x, a, {}, std::vector<std::vector<int>>(n), std::vector<std::vector<int>>(n), std::vector<int>(n, 0)};
        std::vector<std::vector<char>> domains(n, std::vector<char>(m, 1));
        std::vector<int> out_degree(n, 0);
        for (auto & [u, v] : x.edges()) {
            ++out_degree[u - 1];
            if (u == v) {
                for (int c = 1; c <= m; ++c)
                    domains[u - 1][c - 1] = domains[u - 1][c - 1] && a.has_edge(c, c);
                continue;
            }
            search.out[u - 1].push_back(v);
            search.in[v - 1].push_back(u);
        }

        search.order.resize(n);
        std::iota(search.order.begin(), search.order.end(), 1);
        std::stable_sort(search.order.begin(), search.order.end(), [&](int u, int v) { return out_degree[u - 1] > out_degree[v - 1]; });

        if (! search.run(0, domains))
            return std::nullopt;
        return search.map;
    }

    auto iterate_a(const Integer & p, int i) -> Integer
    {
        Integer value = p;
        for (int step = 0; step < i; ++step) {
            if (value > 1 << 26)
                throw Error(ErrorKind::InvalidParams, "a-iterate 2^" + value.get_str() + " is too large to write down");
            Integer next;
            mpz_ui_pow_ui(next.get_mpz_t(), 2, value.get_ui());
            value = next;
        }
        return value;
    }

    auto iterate_b(const Integer & p, int i) -> Integer
    {
        Integer value = p;
        for (int step = 0; step < i; ++step) {
            if (value > 1 << 24)
                throw Error(ErrorKind::InvalidParams, "b-iterate binom(" + value.get_str() + ", .) is too large to write down");
            Integer next;
            unsigned long top = value.get_ui();
            mpz_bin_uiui(next.get_mpz_t(), top, top / 2);
            value = next;
        }
        return value;
    }

    auto fooling_parameters(int c, int d, int k) -> ChromaticParams
    {
        if (c < 4)
            throw Error(ErrorKind::InvalidParams, "c must be at least 4, got " + std::to_string(c));
        if (d < c)
            throw Error(ErrorKind::InvalidParams, "d must be at least c");
        if (k < 2)
            throw Error(ErrorKind::InvalidParams, "k must be at least 2");

        ChromaticParams params;
        Integer b = c;
        Integer threshold = Integer(k) * k;
        do {
            ++params.i;
            b = iterate_b(b, 1);
            threshold *= 4;
            params.b_iterates.push_back(b);
            params.thresholds.push_back(threshold);
        } while (b < threshold);

        // a^{(i)}(d) = 2^{a^{(i-1)}(d)}, so its bit length is a^{(i-1)}(d) + 1,
        // and adding one keeps the bit length.
        Integer below = iterate_a(d, params.i - 1);
        params.q_bits = below + 1;
        if (below <= 1 << 20)
            params.q = iterate_a(below, 1) + 1;
        return params;
    }

    auto digraph_to_json(const Digraph & g) -> std::string
    {
        nlohmann::json doc;
        doc["vertices"] = g.vertex_count();
        doc["edges"] = nlohmann::json::array();
        for (auto & [u, v] : g.edges())
            doc["edges"].push_back({u, v});
        return doc.dump() + "\n";
    }

    auto digraph_from_json(const std::string & text) -> Digraph
    {
        try {
            auto doc = nlohmann::json::parse(text);
            std::vector<Edge> edges;
            for (auto & e : doc.at("edges")) {
                if (! e.is_array() || e.size() != 2)
                    throw Error(ErrorKind::FormatError, "edges must be pairs");
                edges.emplace_back(e[0].get<int>(), e[1].get<int>());
            }
            return Digraph(doc.at("vertices").get<int>(), std::move(edges));
        }
        catch (const nlohmann::json::exception & e) {
            throw Error(ErrorKind::FormatError, std::string("digraph JSON: ") + e.what());
        }
    }
}
