#pragma once

#include <crystal_forge/digraph.hh>
#include <crystal_forge/linear_system.hh>

#include <cstdint>

namespace crystal_forge
{
    enum class MarginalFamily
    {
        // One IP_2 equation per (x, i, a) with i in [k]^k, one IP_3 equation per
        // (y, i, a) with i in [2]^k.
        Full,
        // IP_2 only for the adjacent transpositions and the idempotent
        // (1, ..., k-1, k-1), which generate [k]^k under composition; IP_3 only
        // for i = (1, 2, 1, ..., 1). Same solution set as Full.
        Generators
    };

    struct IpOptions
    {
        MarginalFamily family = MarginalFamily::Full;
    };

    // Equations emitted per family before deduplication.
    struct IpStats
    {
        std::uint64_t normalisation = 0;
        std::uint64_t lambda_marginals = 0;
        std::uint64_t mu_marginals = 0;
        int lambda_variables = 0;
        int mu_variables = 0;
        int forced_zero = 0;
    };

    // Variables are every lambda_{x,a} (x, a in lexicographic order) followed
    // by every mu_{y,b}; those pinned by IP_4/IP_5 are marked forced zero.
    // IP_5 is dropped when k = 1.
    auto build_ip_system(const Digraph & x, const Digraph & a, int k, IpOptions options = {}, IpStats * stats = nullptr) -> LinearSystem;

    auto decide_blp(const Digraph & x, const Digraph & a, int k) -> bool;
    auto decide_aip(const Digraph & x, const Digraph & a, int k) -> bool;
    auto decide_ba(const Digraph & x, const Digraph & a, int k) -> bool;
}
