#include "oracle.hh"

#include <crystal_forge/certificate.hh>
#include <crystal_forge/crystal.hh>
#include <crystal_forge/relaxation.hh>

#include <doctest.h>

using namespace crystal_forge;

namespace
{
    auto cycle(int n) -> Digraph
    {
        std::vector<Edge> edges;
        for (int v = 1; v <= n; ++v)
            edges.emplace_back(v, v % n + 1);
        return Digraph(n, edges);
    }

    auto clique_cert(int vertices) -> ZaffCertificate
    {
        return certificate_from_crystal(mine_hollow_shadowed_crystal(2, std::max(3, vertices)), clique(vertices), 2);
    }

    // (top)! / (bottom)!
    auto factorial_ratio(int top, int bottom) -> Integer
    {
        Integer result = 1;
        for (int j = bottom + 1; j <= top; ++j)
            result *= j;
        return result;
    }
}

TEST_CASE("certificates from crystals")
{
    auto c = mine_hollow_shadowed_crystal(2, 5);
    auto x = clique(5);
    auto cert = certificate_from_crystal(c, x, 2);
    CHECK(cert.k == 2);
    CHECK(cert.clique == 3);
    CHECK(cert.zeta.size() == 25);
    for (auto & [xt, image] : cert.zeta) {
        CHECK(oracle::equal(oracle::project(c, xt), image));
        CHECK(total(image) == 1);
        oracle::odometer({3, 3}, [&](const IndexTuple & at) {
            if (! precedes(xt, at))
                CHECK(image.at(at) == 0);
        });
    }
    CHECK(verify_clique_certificate(cert, x, 3).ok);
    CHECK(verify_zaff_certificate_general(cert, x, clique(3)).ok);
    CHECK(verify_clique_certificate(cert, x, 3, 3).ok);
    CHECK(verify_clique_certificate(clique_cert(4), clique(4), 3).ok);

    CHECK_THROWS_AS(certificate_from_crystal(mine_hollow_shadowed_crystal(2, 4), clique(5), 2), Error);
    CHECK_THROWS_AS(certificate_from_crystal(c, Digraph(2, {{1, 1}}), 2), Error);
    CHECK_THROWS_AS(certificate_from_crystal(Integer(2) * c, x, 2), Error);
    CHECK_THROWS_AS(certificate_from_crystal(crystalise(unit_tensor({3, 3}, {1, 1}), 5), x, 2), Error);
    CHECK_THROWS_AS(certificate_from_crystal(mine_hollow_crystal(3), clique(2), 3), Error);
}

TEST_CASE("clique certificate checks reject tampering")
{
    auto x = clique(4);
    auto cert = clique_cert(4);

    auto zero_total = cert;
    zero_total.zeta[{1, 2}] = IntTensor({3, 3});
    auto report = verify_clique_certificate(zero_total, x, 3);
    CHECK_FALSE(report.ok);
    CHECK(report.check == 'a');

    auto tie = cert;
    auto & tied = tie.zeta[{1, 2}];
    tied = tied + unit_tensor({3, 3}, {1, 1}) - unit_tensor({3, 3}, {1, 2});
    report = verify_clique_certificate(tie, x, 3);
    CHECK_FALSE(report.ok);
    CHECK(report.check == 'd');

    auto moved = cert;
    auto & shifted = moved.zeta[{1, 2}];
    shifted = shifted + unit_tensor({3, 3}, {1, 2}) - unit_tensor({3, 3}, {2, 1});
    report = verify_clique_certificate(moved, x, 3);
    CHECK_FALSE(report.ok);
    CHECK(report.check == 'b');
    report = verify_zaff_certificate_general(moved, x, clique(3));
    CHECK_FALSE(report.ok);
    CHECK(report.check == 'b');

    auto missing = cert;
    missing.zeta.erase({2, 3});
    CHECK(verify_clique_certificate(missing, x, 3).check == 's');
    CHECK(verify_clique_certificate(cert, x, 4).check == 's');
}

TEST_CASE("hyperedge check")
{
    // Tensorial and affine, but the edge image sits on the diagonal, which no
    // combination of template edges can produce.
    ZaffCertificate cert;
    cert.k = 2;
    cert.instance = Digraph(2, {{1, 2}});
    cert.clique = 3;
    for (auto & xt : all_tuples(2, 2))
        cert.zeta[xt] = unit_tensor({3, 3}, {1, 1});
    auto report = verify_zaff_certificate_general(cert, cert.instance, clique(3));
    CHECK_FALSE(report.ok);
    CHECK(report.check == 'c');
    CHECK(verify_clique_certificate(cert, cert.instance, 3).check == 'd');
}

TEST_CASE("uniform rational maps and refinement")
{
    auto xi = uniform_qconv_map(clique(3), 3, 2);
    auto & diagonal = xi.xi.at({2, 2});
    for (int a = 1; a <= 3; ++a)
        for (int b = 1; b <= 3; ++b)
            CHECK(diagonal.at({a, b}) == (a == b ? Rational(1, 3) : Rational(0)));
    auto & off = xi.xi.at({1, 3});
    for (int a = 1; a <= 3; ++a)
        for (int b = 1; b <= 3; ++b)
            CHECK(off.at({a, b}) == (a != b ? Rational(1, 6) : Rational(0)));
    for (auto & [xt, image] : xi.xi)
        CHECK(total(image) == 1);
    CHECK_THROWS_AS(uniform_qconv_map(clique(3), 2, 3), Error);

    auto cert = clique_cert(4);
    CHECK(check_refinement(cert, uniform_qconv_map(clique(4), 3, 2)));
    auto tie = cert;
    tie.zeta[{1, 2}] = tie.zeta[{1, 2}] + unit_tensor({3, 3}, {1, 1}) - unit_tensor({3, 3}, {1, 2});
    CHECK_FALSE(check_refinement(tie, uniform_qconv_map(clique(4), 3, 2)));
    CHECK_THROWS_AS(check_refinement(cert, uniform_qconv_map(clique(4), 4, 2)), Error);

    CHECK(falling_factorial(5, 2) == 20);
    CHECK(falling_factorial(4, 0) == 1);
}

TEST_CASE("counting lemma")
{
    for (int k = 1; k <= 3; ++k)
        for (auto & x : all_tuples(k, k)) {
            int size = distinct_count(x);
            for (int n = size; n <= 4; ++n)
                for (auto & sel : all_tuples(k, k)) {
                    auto xi = select(x, sel);
                    int sub = distinct_count(xi);
                    oracle::odometer(Shape(k, n), [&](const IndexTuple & a) {
                        long count = 0;
                        oracle::odometer(Shape(k, n), [&](const IndexTuple & b) {
                            count += select(b, sel) == a && equivalent(b, x);
                        });
                        Integer expected = equivalent(a, xi) ? factorial_ratio(n - sub, n - size) : Integer(0);
                        CHECK(count == expected);
                        if (equivalent(a, xi))
                            CHECK(falling_factorial(n - sub, size - sub) == expected);
                    });
                }
        }
}

TEST_CASE("scatter")
{
    std::mt19937 rng(1);
    auto t = oracle::random_tensor(rng, {3, 3}, -3, 3, 0.7);
    CoordinateMap identity{{3, 3}, {3, 3}, [](const IndexTuple & i) { return i; }};
    CHECK(scatter(identity, t) == t);
    CoordinateMap constant{{3, 3}, {2}, [](const IndexTuple &) { return IndexTuple{2}; }};
    CHECK(scatter(constant, t).at({2}) == total(t));
    CHECK(scatter(constant, t).at({1}) == 0);

    for (int trial = 0; trial < 20; ++trial) {
        std::vector<int> f(3), g(4);
        for (auto & v : f)
            v = 1 + int(rng() % 4);
        for (auto & v : g)
            v = 1 + int(rng() % 2);
        std::vector<int> gf(3);
        for (int v = 0; v < 3; ++v)
            gf[v] = g[f[v] - 1];
        auto pi = coordinatewise_map(f, 3, 4, 2);
        auto sigma = coordinatewise_map(g, 4, 2, 2);
        auto composed = coordinatewise_map(gf, 3, 2, 2);
        auto u = oracle::random_tensor(rng, {3, 3}, -3, 3, 0.6);
        CHECK(scatter(composed, u) == scatter(sigma, scatter(pi, u)));
        CHECK(total(scatter(pi, u)) == total(u));
    }
    CHECK_THROWS_AS(scatter(identity, IntTensor({2, 2})), Error);
}

TEST_CASE("pushing certificates along template homomorphisms")
{
    auto x = clique(4);
    auto cert = clique_cert(4);
    auto same = transform_certificate_homomorphism(cert, {1, 2, 3}, clique(3));
    CHECK(same.zeta == cert.zeta);

    auto pushed = transform_certificate_homomorphism(cert, {1, 2, 3}, clique(4));
    CHECK(verify_zaff_certificate_general(pushed, x, clique(4)).ok);
    CHECK(verify_clique_certificate(pushed, x, 4).ok);
    for (auto & [xt, image] : pushed.zeta)
        CHECK(total(image) == total(cert.zeta.at(xt)));

    CHECK_THROWS_AS(transform_certificate_homomorphism(cert, {1, 1, 2}, clique(3)), Error);
    CHECK_THROWS_AS(transform_certificate_homomorphism(cert, {1, 2}, clique(3)), Error);
}

TEST_CASE("line digraph transport")
{
    auto x = cycle(3);
    auto cert = certificate_from_crystal(mine_hollow_shadowed_crystal(4, 5), x, 4);
    REQUIRE(verify_clique_certificate(cert, x, 10).ok);
    auto line = transform_certificate_line_digraph(cert);
    auto line_a = line_digraph(clique(10)).graph;
    CHECK(line.k == 2);
    CHECK(line.instance == line_digraph(x).graph);
    CHECK(verify_zaff_certificate_general(line, line.instance, line_a).ok);

    auto other_anchor = line_a.edges().back();
    auto again = transform_certificate_line_digraph(cert, other_anchor);
    CHECK(again.zeta == line.zeta);
    CHECK_THROWS_AS(transform_certificate_line_digraph(cert, Edge{1, 1}), Error);

    auto level2 = clique_cert(4);
    auto down = transform_certificate_line_digraph(level2);
    CHECK(down.k == 1);
    auto tie = level2;
    tie.zeta[{1, 2}] = tie.zeta[{1, 2}] + unit_tensor({3, 3}, {1, 1}) - unit_tensor({3, 3}, {1, 2});
    try {
        transform_certificate_line_digraph(tie);
        FAIL("expected a support violation");
    }
    catch (const Error & e) {
        CHECK(e.kind() == ErrorKind::SupportConditionViolated);
    }

    auto odd = certificate_from_crystal(mine_hollow_shadowed_crystal(3, 4), x, 3);
    CHECK_THROWS_AS(transform_certificate_line_digraph(odd), Error);

    ZaffCertificate lonely;
    lonely.k = 2;
    lonely.instance = x;
    lonely.clique = 1;
    CHECK_THROWS_AS(transform_certificate_line_digraph(lonely), Error);
}

TEST_CASE("certificates agree with the relaxation")
{
    for (int n : {4, 5}) {
        CHECK(verify_clique_certificate(clique_cert(n), clique(n), 3).ok);
        CHECK(decide_ba(clique(n), clique(3), 2));
    }
}

TEST_CASE("certificate json round trip")
{
    auto cert = clique_cert(4);
    auto back = certificate_from_json(certificate_to_json(cert));
    CHECK(back.k == cert.k);
    CHECK(back.clique == cert.clique);
    CHECK(back.instance == cert.instance);
    CHECK(back.zeta == cert.zeta);

    auto pushed = transform_certificate_homomorphism(cert, {1, 2, 3}, clique(4));
    auto pushed_back = certificate_from_json(certificate_to_json(pushed));
    CHECK(pushed_back.template_graph == pushed.template_graph);
    CHECK(pushed_back.zeta == pushed.zeta);
    CHECK_THROWS_AS(certificate_from_json("{}"), Error);
}
