#include "fixtures.hh"
#include "oracle.hh"

#include <crystal_forge/st_format.hh>

#include <doctest.h>

using namespace crystal_forge;

namespace
{
    auto random_shape(std::mt19937 & rng, int dims, int max_width) -> Shape
    {
        std::uniform_int_distribution<int> w(1, max_width);
        Shape shape(dims);
        for (auto & x : shape)
            x = w(rng);
        return shape;
    }

    auto random_selector(std::mt19937 & rng, int q, int length) -> ModeSelector
    {
        std::uniform_int_distribution<int> m(1, q);
        ModeSelector sel(length);
        for (auto & x : sel)
            x = m(rng);
        return sel;
    }

    auto concat(Shape a, const Shape & b) -> Shape
    {
        a.insert(a.end(), b.begin(), b.end());
        return a;
    }
}

TEST_CASE("unit tensors")
{
    auto scalar = unit_tensor({}, {});
    CHECK(scalar.dims() == 0);
    CHECK(scalar.at({}) == 1);

    auto e = unit_tensor({3, 3}, {1, 2});
    CHECK(e.nnz() == 1);
    CHECK(e.at({1, 2}) == 1);
    CHECK(support(e) == std::vector<IndexTuple>{{1, 2}});
    CHECK_THROWS_AS(unit_tensor({3, 3}, {4, 1}), Error);
}

TEST_CASE("contraction")
{
    auto m = IntTensor::from_entries({2, 2}, {{{1, 1}, 1}, {{1, 2}, 2}, {{2, 1}, 3}, {{2, 2}, 4}});
    auto n = IntTensor::from_entries({2, 2}, {{{1, 1}, 5}, {{1, 2}, 6}, {{2, 1}, 7}, {{2, 2}, 8}});
    auto product = contract(m, n, 1);
    CHECK(product.at({1, 1}) == 19);
    CHECK(product.at({1, 2}) == 22);
    CHECK(product.at({2, 1}) == 43);
    CHECK(product.at({2, 2}) == 50);

    auto u = fixtures::paper_u();
    CHECK(contract(u, u, 2).at({}) == 3);

    auto e = unit_tensor({3, 3}, {2, 3});
    CHECK(contract(e, u, 2).at({}) == -1);

    CHECK_THROWS_AS(contract(m, u, 1), Error);
}

TEST_CASE("contraction is associative over disjoint modes")
{
    std::mt19937 rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        auto a = random_shape(rng, 1, 3), b = random_shape(rng, 2, 3), c = random_shape(rng, 1, 3), d = random_shape(rng, 1, 3);
        auto t = oracle::random_tensor(rng, concat(a, b), -3, 3, 0.6);
        auto u = oracle::random_tensor(rng, concat(b, c), -3, 3, 0.6);
        auto v = oracle::random_tensor(rng, concat(c, d), -3, 3, 0.6);
        CHECK(contract(contract(t, u, 2), v, 1) == contract(t, contract(u, v, 1), 2));
    }
}

TEST_CASE("projection")
{
    auto u = fixtures::paper_u();
    CHECK(project(u, {1}) == IntTensor::from_entries({3}, {{{1}, 1}}));
    CHECK(project(u, {2}) == IntTensor::from_entries({3}, {{{1}, 1}}));
    CHECK(project(u, {}).at({}) == 1);
    CHECK(project(u, {2, 1}).at({3, 1}) == 1);
    CHECK(project(u, {2, 1}).at({3, 2}) == -1);
    CHECK_THROWS_AS(project(u, {3}), Error);
    CHECK_THROWS_AS(project(u, {0}), Error);

    auto ones = materialize_projection_tensor({2, 2}, {});
    CHECK(ones.shape() == Shape{2, 2});
    CHECK(ones.nnz() == 4);
    auto identity = materialize_projection_tensor({2}, {1});
    CHECK(identity == IntTensor::from_entries({2, 2}, {{{1, 1}, 1}, {{2, 2}, 1}}));
}

TEST_CASE("projection agrees with brute force, the materialised tensor and composition")
{
    std::mt19937 rng(7);
    for (int trial = 0; trial < 60; ++trial) {
        int q = 1 + trial % 4;
        auto shape = random_shape(rng, q, 3);
        auto t = oracle::random_tensor(rng, shape, -4, 4, 0.5);
        auto sel = random_selector(rng, q, int(rng() % 4));
        auto direct = project(t, sel);
        CHECK(oracle::equal(oracle::project(t, sel), direct));
        CHECK(contract(materialize_projection_tensor(shape, sel), t, q) == direct);

        if (! sel.empty()) {
            auto inner = random_selector(rng, int(sel.size()), int(rng() % 3));
            CHECK(project(direct, inner) == project(t, select(sel, inner)));
        }

        CHECK(project(t, identity_selector(q)) == t);

        std::vector<int> perm = identity_selector(q);
        std::shuffle(perm.begin(), perm.end(), rng);
        CHECK(total(project(t, perm)) == total(t));
    }
}

TEST_CASE("totals, support and ties")
{
    auto u = fixtures::paper_u();
    CHECK(total(u) == 1);
    CHECK(is_affine(u));
    CHECK(is_hollow(u));
    CHECK_FALSE(is_affine(IntTensor({3, 3})));
    CHECK(total(IntTensor({3, 3})) == 0);

    auto tie = unit_tensor({3, 3}, {1, 1});
    CHECK(ties(tie) == std::vector<IndexTuple>{{1, 1}});
    CHECK_FALSE(is_hollow(tie));
    CHECK(is_hollow(unit_tensor({}, {})));
}

TEST_CASE("tuple relations")
{
    CHECK(precedes({1, 1, 2}, {3, 3, 1}));
    CHECK_FALSE(precedes({1, 1, 2}, {3, 2, 1}));
    CHECK(precedes({1, 2, 3}, {2, 2, 2}));
    CHECK(equivalent({1, 2, 1}, {5, 3, 5}));
    CHECK_FALSE(equivalent({1, 2, 1}, {5, 5, 5}));
    CHECK(increasing_tuples(4, 2).size() == 6);
    CHECK(increasing_tuples(4, 0).size() == 1);
}

TEST_CASE("st format round trip")
{
    std::mt19937 rng(3);
    for (int trial = 0; trial < 30; ++trial) {
        auto shape = random_shape(rng, trial % 4, 4);
        auto t = oracle::random_tensor(rng, shape, -9, 9, 0.4);
        CHECK(parse_st(to_st(t)) == t);
    }
    auto big = IntTensor::from_entries({2}, {{{2}, Integer("-123456789012345678901234567890")}});
    CHECK(parse_st(to_st(big)) == big);

    CHECK_THROWS_AS(parse_st("not a tensor"), Error);
    CHECK(parse_st("st 1\ndims 1\nwidths 2\nentries 1\n2 -5\n").at({2}) == -5);
    CHECK_THROWS_AS(parse_st("st 1\ndims 1\nwidths 2\nentries 1\n3 1\n"), Error);
    CHECK_THROWS_AS(parse_st("st 1\ndims 1\nwidths 2\nentries 1\n1 0\n"), Error);
    CHECK_THROWS_AS(parse_st("st 1\ndims 2\nwidths 2\nentries 0\n"), Error);
    CHECK_THROWS_AS(parse_st("st 1\ndims 1\nwidths 2\nentries 2\n1 1\n"), Error);
}
