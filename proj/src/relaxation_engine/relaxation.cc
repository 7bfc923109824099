#include <crystal_forge/relaxation.hh>

namespace crystal_forge
{
    namespace
    {
        auto tuple_rank(const std::vector<int> & t, int base) -> std::size_t
        {
            std::size_t rank = 0;
            for (int c : t)
                rank = rank * std::size_t(base) + std::size_t(c - 1);
            return rank;
        }

        auto lambda_selectors(int k, MarginalFamily family) -> std::vector<ModeSelector>
        {
            if (family == MarginalFamily::Full || k == 1)
                return all_tuples(k, k);
            std::vector<ModeSelector> result;
            for (int s = 1; s < k; ++s) {
                ModeSelector swap = identity_selector(k);
                std::swap(swap[s - 1], swap[s]);
                result.push_back(swap);
            }
            ModeSelector merge = identity_selector(k);
            merge[k - 1] = k - 1;
            result.push_back(merge);
            return result;
        }

        auto mu_selectors(int k, MarginalFamily family) -> std::vector<ModeSelector>
        {
            if (family == MarginalFamily::Full || k == 1)
                return all_tuples(2, k);
            ModeSelector spread(k, 1);
            spread[1] = 2;
            return {spread};
        }
    }

    auto build_ip_system(const Digraph & x, const Digraph & a, int k, IpOptions options, IpStats * stats) -> LinearSystem
    {
        if (k < 1)
            throw Error(ErrorKind::BadDimension, "level must be at least 1");
        int nx = x.vertex_count(), na = a.vertex_count();
        auto x_tuples = all_tuples(nx, k);
        auto a_tuples = all_tuples(na, k);
        std::size_t a_count = a_tuples.size();

        LinearSystem sys;
        IpStats local;
        for (auto & xt : x_tuples)
            for (auto & at : a_tuples) {
                int v = sys.add_variable(VarKey{VarKey::Kind::Lambda, xt, at});
                if (! precedes(xt, at)) {
                    sys.force_zero(v);
                    ++local.forced_zero;
                }
            }
        local.lambda_variables = sys.variable_count();
        auto lambda = [&](const std::vector<int> & xt, const std::vector<int> & at) {
            return int(tuple_rank(xt, nx) * a_count + tuple_rank(at, na));
        };

        int mu_base = sys.variable_count();
        auto & x_edges = x.edges();
        auto & a_edges = a.edges();
        for (auto & y : x_edges)
            for (auto & b : a_edges) {
                int v = sys.add_variable(VarKey{VarKey::Kind::Mu, {y.first, y.second}, {b.first, b.second}});
                if (k >= 2 && y.first == y.second && b.first != b.second) {
                    sys.force_zero(v);
                    ++local.forced_zero;
                }
            }
        local.mu_variables = sys.variable_count() - mu_base;

        for (auto & xt : x_tuples) {
            std::vector<Term> terms;
            for (auto & at : a_tuples)
                terms.push_back(Term{lambda(xt, at), 1});
            sys.add_equation(std::move(terms), 1);
            ++local.normalisation;
        }

        std::vector<std::vector<Term>> buckets(a_count);
        for (auto & sel : lambda_selectors(k, options.family))
            for (auto & xt : x_tuples) {
                for (auto & bucket : buckets)
                    bucket.clear();
                for (auto & at : a_tuples) {
                    int v = lambda(xt, at);
                    if (! sys.forced_zero()[v])
                        buckets[tuple_rank(select(at, sel), na)].push_back(Term{v, 1});
                }
                auto lower = select(xt, sel);
                for (std::size_t r = 0; r < a_count; ++r) {
                    auto terms = buckets[r];
                    terms.push_back(Term{lambda(lower, a_tuples[r]), -1});
                    sys.add_equation(std::move(terms), 0);
                    ++local.lambda_marginals;
                }
            }

        for (auto & sel : mu_selectors(k, options.family))
            for (std::size_t e = 0; e < x_edges.size(); ++e) {
                for (auto & bucket : buckets)
                    bucket.clear();
                for (std::size_t f = 0; f < a_edges.size(); ++f) {
                    std::vector<int> b{a_edges[f].first, a_edges[f].second};
                    int v = mu_base + int(e * a_edges.size() + f);
                    if (! sys.forced_zero()[v])
                        buckets[tuple_rank(select(b, sel), na)].push_back(Term{v, 1});
                }
                auto lower = select(std::vector<int>{x_edges[e].first, x_edges[e].second}, sel);
                for (std::size_t r = 0; r < a_count; ++r) {
                    auto terms = buckets[r];
                    terms.push_back(Term{lambda(lower, a_tuples[r]), -1});
                    sys.add_equation(std::move(terms), 0);
                    ++local.mu_marginals;
                }
            }

        if (stats)
            *stats = local;
        return sys;
    }

    namespace
    {
        auto decision_system(const Digraph & x, const Digraph & a, int k) -> LinearSystem
        {
            return build_ip_system(x, a, k, IpOptions{MarginalFamily::Generators});
        }
    }

    auto decide_blp(const Digraph & x, const Digraph & a, int k) -> bool
    {
        return lp_feasible(decision_system(x, a, k)).has_value();
    }

    auto decide_aip(const Digraph & x, const Digraph & a, int k) -> bool
    {
        return diophantine_feasible(decision_system(x, a, k)).has_value();
    }

    auto decide_ba(const Digraph & x, const Digraph & a, int k) -> bool
    {
        auto sys = decision_system(x, a, k);
        if (! lp_feasible(sys))
            return false;
        auto support = relative_interior_support(sys);
        std::vector<char> outside(support.size());
        for (std::size_t v = 0; v < support.size(); ++v)
            outside[v] = ! support[v];
        return diophantine_feasible(sys, outside).has_value();
    }
}
