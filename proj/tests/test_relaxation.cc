#include "oracle.hh"

#include <crystal_forge/relaxation.hh>

#include <doctest.h>

using namespace crystal_forge;

namespace
{
    auto random_digraph(std::mt19937 & rng, int n, int one_in) -> Digraph
    {
        std::vector<Edge> edges;
        for (int u = 1; u <= n; ++u)
            for (int v = 1; v <= n; ++v)
                if (u != v && rng() % one_in == 0)
                    edges.emplace_back(u, v);
        return Digraph(n, edges);
    }

    // A digraph with a homomorphism to a: edges are sampled among pairs whose
    // images under a random map form an edge of a.
    auto planted(std::mt19937 & rng, int n, const Digraph & a) -> Digraph
    {
        std::vector<int> f(n);
        for (auto & v : f)
            v = 1 + int(rng() % a.vertex_count());
        std::vector<Edge> edges;
        for (int u = 1; u <= n; ++u)
            for (int v = 1; v <= n; ++v)
                if (a.has_edge(f[u - 1], f[v - 1]) && rng() % 2)
                    edges.emplace_back(u, v);
        return Digraph(n, edges);
    }

    auto index_of(const LinearSystem & sys, const VarKey & key) -> int
    {
        auto & vars = sys.variables();
        auto it = std::find(vars.begin(), vars.end(), key);
        return it == vars.end() ? -1 : int(it - vars.begin());
    }
}

TEST_CASE("system shape")
{
    IpStats stats;
    auto sys = build_ip_system(clique(2), clique(2), 2, {}, &stats);
    CHECK(stats.lambda_variables == 16);
    CHECK(stats.mu_variables == 4);
    CHECK(sys.variable_count() == 20);
    CHECK(sys.variables().front() == VarKey{VarKey::Kind::Lambda, {1, 1}, {1, 1}});
    CHECK(sys.variables().back() == VarKey{VarKey::Kind::Mu, {2, 1}, {2, 1}});

    // A repeated vertex in x forces the same repetition in a.
    auto pinned = index_of(sys, VarKey{VarKey::Kind::Lambda, {1, 1}, {1, 2}});
    CHECK(sys.forced_zero()[pinned]);
    CHECK_FALSE(sys.forced_zero()[index_of(sys, VarKey{VarKey::Kind::Lambda, {1, 2}, {1, 1}})]);

    auto looped = build_ip_system(Digraph(1, {{1, 1}}), clique(2), 2);
    CHECK(looped.forced_zero()[index_of(looped, VarKey{VarKey::Kind::Mu, {1, 1}, {1, 2}})]);
    auto looped_level1 = build_ip_system(Digraph(1, {{1, 1}}), clique(2), 1);
    CHECK_FALSE(looped_level1.forced_zero()[index_of(looped_level1, VarKey{VarKey::Kind::Mu, {1, 1}, {1, 2}})]);

    IpStats edgeless;
    build_ip_system(Digraph(3, {}), clique(2), 2, {}, &edgeless);
    CHECK(edgeless.mu_variables == 0);
    CHECK(edgeless.mu_marginals == 0);

    for (int k = 1; k <= 3; ++k) {
        IpStats full;
        build_ip_system(clique(3), clique(2), k, {}, &full);
        std::uint64_t tuples = 1, selectors = 1;
        for (int j = 0; j < k; ++j) {
            tuples *= 3;
            selectors *= k;
        }
        std::uint64_t a_tuples = 1;
        for (int j = 0; j < k; ++j)
            a_tuples *= 2;
        CHECK(full.lambda_marginals == tuples * selectors * a_tuples);
        CHECK(full.normalisation == tuples);
    }
}

TEST_CASE("the generator family spans the full family")
{
    std::mt19937 rng(41);
    for (int trial = 0; trial < 12; ++trial) {
        int k = 2 + trial % 2;
        auto x = random_digraph(rng, 2 + int(rng() % 2), 2);
        auto a = trial % 3 == 0 ? clique(2) : clique(3);
        auto full = build_ip_system(x, a, k, {MarginalFamily::Full});
        auto gens = build_ip_system(x, a, k, {MarginalFamily::Generators});
        REQUIRE(full.variables() == gens.variables());
        CHECK(full.forced_zero() == gens.forced_zero());

        RationalEchelon from_gens(gens.variable_count()), from_full(full.variable_count());
        for (auto & eq : gens.equations())
            from_gens.insert(eq);
        for (auto & eq : full.equations())
            from_full.insert(eq);
        CHECK(from_gens.rank() == from_full.rank());
        for (auto & eq : full.equations())
            CHECK(from_gens.in_span(eq));
        for (auto & eq : gens.equations())
            CHECK(from_full.in_span(eq));
    }
}

TEST_CASE("deciders on cliques")
{
    CHECK(decide_blp(clique(3), clique(3), 2));
    CHECK(decide_aip(clique(3), clique(3), 2));
    CHECK(decide_ba(clique(3), clique(3), 2));
    CHECK(decide_ba(clique(4), clique(3), 2));
    CHECK_FALSE(decide_ba(clique(3), clique(2), 3));
    CHECK_FALSE(decide_ba(clique(4), clique(3), 4));
    CHECK(decide_aip(clique(4), clique(3), 3));
}

TEST_CASE("relative interior support on K4 -> K3 at level 2")
{
    auto sys = build_ip_system(clique(4), clique(3), 2, {MarginalFamily::Generators});
    auto support = relative_interior_support(sys);
    for (int v = 0; v < sys.variable_count(); ++v) {
        auto & key = sys.variables()[v];
        if (key.kind == VarKey::Kind::Lambda)
            CHECK(bool(support[v]) == equivalent(key.x, key.a));
    }
}

TEST_CASE("solver witnesses re-substitute")
{
    std::mt19937 rng(6);
    for (int trial = 0; trial < 10; ++trial) {
        auto x = random_digraph(rng, 3, 2);
        auto sys = build_ip_system(x, clique(3), 2, {MarginalFamily::Generators});
        if (auto rational = lp_feasible(sys))
            CHECK(satisfies(sys, rational->values));
        if (auto integer = diophantine_feasible(sys))
            CHECK(satisfies(sys, integer->values));
    }
}

TEST_CASE("soundness at the instance size for three-vertex digraphs")
{
    std::vector<Edge> pairs = {{1, 2}, {1, 3}, {2, 1}, {2, 3}, {3, 1}, {3, 2}};
    for (int mask = 0; mask < 64; mask += 5) {
        std::vector<Edge> edges;
        for (int b = 0; b < 6; ++b)
            if (mask >> b & 1)
                edges.push_back(pairs[b]);
        Digraph x(3, edges);
        CHECK(decide_ba(x, clique(2), 3) == oracle::hom_exists(x, clique(2)));
    }
}

TEST_CASE("dominance, monotonicity and completeness")
{
    std::mt19937 rng(19);
    for (int trial = 0; trial < 12; ++trial) {
        auto x = random_digraph(rng, 3 + int(rng() % 2), 2);
        auto a = trial % 2 ? clique(2) : clique(3);
        bool ba2 = decide_ba(x, a, 2), ba3 = decide_ba(x, a, 3);
        if (ba2) {
            CHECK(decide_blp(x, a, 2));
            CHECK(decide_aip(x, a, 2));
        }
        if (ba3)
            CHECK(ba2);
        if (decide_blp(x, a, 3))
            CHECK(decide_blp(x, a, 2));
        if (oracle::hom_exists(x, a))
            CHECK(ba3);
    }
    for (int trial = 0; trial < 8; ++trial) {
        auto a = trial % 2 ? clique(2) : clique(3);
        auto x = planted(rng, 4, a);
        CHECK(decide_blp(x, a, 2));
        CHECK(decide_aip(x, a, 2));
        CHECK(decide_ba(x, a, 2));
    }
}
