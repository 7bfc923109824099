#include <crystal_forge/linear_system.hh>

#include <doctest.h>

#include <numeric>
#include <random>

using namespace crystal_forge;

namespace
{
    auto make_system(int vars) -> LinearSystem
    {
        LinearSystem sys;
        for (int v = 0; v < vars; ++v)
            sys.add_variable(VarKey{VarKey::Kind::Lambda, {v + 1}, {1}});
        return sys;
    }

    struct Row
    {
        std::vector<Rational> coeffs;
        Rational rhs;
    };

    // Fourier-Motzkin on Ax = b, x >= 0.
    auto fm_feasible(const std::vector<std::vector<int>> & a, const std::vector<int> & b) -> bool
    {
        int n = int(a.empty() ? 0 : a[0].size());
        std::vector<Row> rows;
        for (std::size_t r = 0; r < a.size(); ++r) {
            Row up{{}, b[r]}, down{{}, -b[r]};
            for (int v = 0; v < n; ++v) {
                up.coeffs.push_back(a[r][v]);
                down.coeffs.push_back(-a[r][v]);
            }
            rows.push_back(up);
            rows.push_back(down);
        }
        for (int v = 0; v < n; ++v) {
            Row nonneg{std::vector<Rational>(n), 0};
            nonneg.coeffs[v] = -1;
            rows.push_back(nonneg);
        }
        for (int v = 0; v < n; ++v) {
            std::vector<Row> pos, neg, keep;
            for (auto & row : rows) {
                int s = sgn(row.coeffs[v]);
                (s > 0 ? pos : s < 0 ? neg : keep).push_back(row);
            }
            for (auto & p : pos)
                for (auto & q : neg) {
                    Rational fp = -q.coeffs[v], fq = p.coeffs[v];
                    Row combined{std::vector<Rational>(n), fp * p.rhs + fq * q.rhs};
                    for (int w = 0; w < n; ++w)
                        combined.coeffs[w] = fp * p.coeffs[w] + fq * q.coeffs[w];
                    keep.push_back(combined);
                }
            rows = std::move(keep);
        }
        for (auto & row : rows)
            if (row.rhs < 0)
                return false;
        return true;
    }

    auto gcd_of(const std::vector<int> & coeffs) -> int
    {
        int g = 0;
        for (int c : coeffs)
            g = std::gcd(g, std::abs(c));
        return g;
    }
}

TEST_CASE("equation normalisation")
{
    auto sys = make_system(3);
    CHECK(sys.add_equation({{1, 2}, {0, 1}, {1, -2}}, 1));
    CHECK(sys.equations().size() == 1);
    CHECK(sys.equations()[0].terms.size() == 1);
    CHECK_FALSE(sys.add_equation({{0, -1}}, -1));
    CHECK_FALSE(sys.add_equation({{2, 3}, {2, -3}}, 0));
    CHECK_FALSE(sys.has_contradiction());
    sys.add_equation({{2, 1}, {2, -1}}, 4);
    CHECK(sys.has_contradiction());
    CHECK_FALSE(lp_feasible(sys));
    CHECK_FALSE(diophantine_feasible(sys));
}

TEST_CASE("small systems")
{
    auto empty = make_system(0);
    CHECK(lp_feasible(empty));
    CHECK(diophantine_feasible(empty));

    auto sum = make_system(2);
    sum.add_equation({{0, 1}, {1, 1}}, 1);
    auto integer = diophantine_feasible(sum);
    REQUIRE(integer);
    CHECK(satisfies(sum, integer->values));
    CHECK(relative_interior_support(sum) == std::vector<char>{1, 1});

    auto doubled = make_system(1);
    doubled.add_equation({{0, 2}}, 1);
    CHECK(lp_feasible(doubled));
    CHECK_FALSE(diophantine_feasible(doubled));

    auto pinned = make_system(2);
    pinned.add_equation({{0, 1}}, 0);
    pinned.add_equation({{0, 1}, {1, 1}}, 1);
    CHECK(relative_interior_support(pinned) == std::vector<char>{0, 1});

    auto negative = make_system(2);
    negative.add_equation({{0, 1}, {1, 1}}, -1);
    CHECK_FALSE(lp_feasible(negative));
    CHECK(diophantine_feasible(negative));
    CHECK_THROWS_AS(relative_interior_support(negative), Error);

    auto masked = make_system(2);
    masked.add_equation({{0, 1}, {1, 2}}, 1);
    CHECK(diophantine_feasible(masked));
    CHECK_FALSE(diophantine_feasible(masked, {1, 0}));
    CHECK(diophantine_feasible(masked, {0, 1}));
    auto only_even = make_system(2);
    only_even.add_equation({{0, 4}, {1, 2}}, 2);
    CHECK_FALSE(diophantine_feasible(only_even, {0, 1}));

    auto unbounded = make_system(3);
    unbounded.add_equation({{0, 1}, {1, -1}}, 0);
    unbounded.add_equation({{2, 1}}, 1);
    CHECK(relative_interior_support(unbounded) == std::vector<char>{1, 1, 1});
}

TEST_CASE("random systems against Fourier-Motzkin and gcd oracles")
{
    std::mt19937 rng(31);
    std::uniform_int_distribution<int> coeff(-3, 3);
    for (int trial = 0; trial < 300; ++trial) {
        int vars = 1 + int(rng() % 4);
        int eqs = 1 + int(rng() % 3);
        std::vector<std::vector<int>> a(eqs, std::vector<int>(vars));
        std::vector<int> b(eqs);
        for (auto & row : a)
            for (auto & c : row)
                c = coeff(rng);
        for (auto & r : b)
            r = coeff(rng);

        auto sys = make_system(vars);
        for (int r = 0; r < eqs; ++r) {
            std::vector<Term> terms;
            for (int v = 0; v < vars; ++v)
                if (a[r][v] != 0)
                    terms.push_back({v, a[r][v]});
            sys.add_equation(terms, b[r]);
        }

        auto rational = lp_feasible(sys);
        CHECK(bool(rational) == fm_feasible(a, b));
        if (rational) {
            CHECK(satisfies(sys, rational->values));
            auto support = relative_interior_support(sys);
            for (int v = 0; v < vars; ++v)
                if (rational->values[v] > 0)
                    CHECK(support[v]);
            // Pinning a variable outside the support keeps the system feasible.
            for (int v = 0; v < vars; ++v) {
                auto with_pin = sys;
                with_pin.add_equation({{v, 1}}, 0);
                if (! support[v])
                    CHECK(lp_feasible(with_pin));
            }
        }

        auto integer = diophantine_feasible(sys);
        if (integer)
            CHECK(satisfies(sys, integer->values));
        if (eqs == 1) {
            int g = gcd_of(a[0]);
            bool expected = g == 0 ? b[0] == 0 : b[0] % g == 0;
            CHECK(bool(integer) == expected);
        }
        if (rational)
            for (auto & value : rational->values)
                CHECK(value >= 0);
    }
}

TEST_CASE("planted integer solutions are found")
{
    std::mt19937 rng(77);
    std::uniform_int_distribution<int> coeff(-6, 6);
    for (int trial = 0; trial < 100; ++trial) {
        int vars = 2 + int(rng() % 5);
        int eqs = 1 + int(rng() % 4);
        std::vector<int> planted(vars);
        for (auto & x : planted)
            x = coeff(rng);
        auto sys = make_system(vars);
        for (int r = 0; r < eqs; ++r) {
            std::vector<Term> terms;
            int rhs = 0;
            for (int v = 0; v < vars; ++v) {
                int c = coeff(rng);
                if (c != 0)
                    terms.push_back({v, c});
                rhs += c * planted[v];
            }
            sys.add_equation(terms, rhs);
        }
        auto integer = diophantine_feasible(sys);
        REQUIRE(integer);
        CHECK(satisfies(sys, integer->values));
    }
}

TEST_CASE("rational echelon")
{
    RationalEchelon echelon(3);
    CHECK(echelon.insert({{{0, 1}, {1, 1}}, 1}));
    CHECK(echelon.insert({{{1, 1}, {2, 1}}, 2}));
    CHECK(echelon.in_span({{{0, 2}, {1, 3}, {2, 1}}, 4}));
    CHECK_FALSE(echelon.in_span({{{0, 1}}, 0}));
    CHECK_FALSE(echelon.insert({{{0, 1}, {2, -1}}, -1}));
    CHECK(echelon.rank() == 2);
    CHECK_FALSE(echelon.inconsistent());
    echelon.insert({{{0, 1}, {2, -1}}, 0});
    CHECK(echelon.inconsistent());
}

TEST_CASE("solution json")
{
    auto sys = make_system(2);
    sys.add_equation({{0, 1}, {1, 1}}, 1);
    auto text = solution_to_json(sys, std::vector<Rational>{Rational(1, 3), Rational(2, 3)});
    CHECK(text.find("\"l:1:1\"") != std::string::npos);
    CHECK(text.find("1/3") != std::string::npos);
    CHECK(var_key_string(VarKey{VarKey::Kind::Mu, {1, 2}, {3, 1}}) == "m:1,2:3,1");
}
