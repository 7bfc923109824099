#include <crystal_forge/certificate.hh>
#include <crystal_forge/crystal.hh>
#include <crystal_forge/linear_system.hh>
#include <crystal_forge/st_format.hh>

#include <json.hpp>

#include <future>
#include <unordered_map>

namespace crystal_forge
{
    auto ZaffCertificate::template_vertices() const -> int
    {
        return clique ? *clique : template_graph->vertex_count();
    }

    auto ZaffCertificate::template_digraph() const -> Digraph
    {
        return clique ? crystal_forge::clique(*clique) : *template_graph;
    }

    auto coordinatewise_map(const std::vector<int> & vertex_map, int from, int to, int k) -> CoordinateMap
    {
        return CoordinateMap{Shape(k, from), Shape(k, to), [vertex_map](const IndexTuple & a) {
                                 IndexTuple image(a.size());
                                 for (std::size_t j = 0; j < a.size(); ++j)
                                     image[j] = vertex_map[a[j] - 1];
                                 return image;
                             }};
    }

    auto falling_factorial(int n, int m) -> Integer
    {
        Integer result = 1;
        for (int t = 0; t < m; ++t)
            result *= n - t;
        return result;
    }

    auto certificate_from_crystal(const IntTensor & c, const Digraph & x, int k) -> ZaffCertificate
    {
        if (! x.is_loopless())
            throw Error(ErrorKind::InvalidParams, "the instance has a loop");
        if (k < 1)
            throw Error(ErrorKind::BadDimension, "level must be positive");
        int q = c.dims();
        if (q < std::max(k + 1, x.vertex_count()))
            throw Error(ErrorKind::TooFewDimensions, "a " + std::to_string(q) + "-dimensional crystal cannot certify level " + std::to_string(k) + " on " + std::to_string(x.vertex_count()) + " vertices");
        if (! is_affine(c))
            throw Error(ErrorKind::NotAffine, "the crystal sums to " + total(c).get_str());
        auto report = is_crystal(c, k);
        if (! report.is_crystal)
            throw Error(ErrorKind::NotACrystal, "not a " + std::to_string(k) + "-crystal");
        if (! is_hollow(*report.shadow))
            throw Error(ErrorKind::NotHollowShadow, "the " + std::to_string(k) + "-shadow has ties");

        ZaffCertificate cert;
        cert.k = k;
        cert.instance = x;
        cert.clique = c.width(0);
        for (auto & xt : all_tuples(x.vertex_count(), k))
            cert.zeta.emplace(xt, project(c, xt));
        return cert;
    }

    namespace
    {
        auto fail(char check, std::string reason) -> CheckReport
        {
            return CheckReport{false, check, std::move(reason)};
        }

        auto check_images(const ZaffCertificate & cert, const Digraph & x, int width) -> CheckReport
        {
            if (cert.k < 1)
                return fail('s', "level must be positive");
            if (! (cert.instance == x))
                return fail('s', "certificate was issued for a different instance");
            Shape shape(cert.k, width);
            for (auto & xt : all_tuples(x.vertex_count(), cert.k)) {
                auto it = cert.zeta.find(xt);
                if (it == cert.zeta.end())
                    return fail('s', "no image for x = (" + tuple_to_string(xt) + ")");
                if (it->second.shape() != shape)
                    return fail('s', "image of x = (" + tuple_to_string(xt) + ") has shape " + tuple_to_string(it->second.shape()));
                if (! is_affine(it->second))
                    return fail('a', "image of x = (" + tuple_to_string(xt) + ") sums to " + total(it->second).get_str());
            }
            if (cert.zeta.size() != all_tuples(x.vertex_count(), cert.k).size())
                return fail('s', "images indexed outside V(X)^k");
            return {};
        }

        auto check_tensorial(const ZaffCertificate & cert) -> CheckReport
        {
            auto selectors = all_tuples(cert.k, cert.k);
            for (auto & [xt, image] : cert.zeta)
                for (auto & sel : selectors)
                    if (cert.zeta.at(select(xt, sel)) != project(image, sel))
                        return fail('b', "zeta(x_i) differs from the projection of zeta(x) for x = (" + tuple_to_string(xt) + "), i = (" + tuple_to_string(sel) + ")");
            return {};
        }

        auto check_hollow(const ZaffCertificate & cert) -> CheckReport
        {
            for (auto & [xt, image] : cert.zeta) {
                CheckReport report;
                image.for_each([&](const IndexTuple & at, const Integer &) {
                    if (report.ok && ! precedes(at, xt))
                        report = fail('d', "zeta(" + tuple_to_string(xt) + ") is nonzero at (" + tuple_to_string(at) + ")");
                });
                if (! report.ok)
                    return report;
            }
            return {};
        }

        // Is there Q in Z^{E(A)} summing to 1 whose scatter along every
        // coordinate choice i in [2]^k is zeta((u, v)_i)?
        auto hyperedge_holds(const ZaffCertificate & cert, const Digraph & a, const Edge & edge) -> bool
        {
            int k = cert.k, n = a.vertex_count();
            LinearSystem sys;
            for (auto & b : a.edges())
                sys.add_variable(VarKey{VarKey::Kind::Mu, {edge.first, edge.second}, {b.first, b.second}});

            std::vector<Term> all;
            for (int v = 0; v < sys.variable_count(); ++v)
                all.push_back(Term{v, 1});
            sys.add_equation(std::move(all), 1);

            Layout layout(Shape(k, n));
            std::vector<int> ends{edge.first, edge.second};
            for (auto & sel : all_tuples(2, k)) {
                const IntTensor & target = cert.zeta.at(select(ends, sel));
                std::map<std::uint64_t, std::vector<Term>> buckets;
                for (std::size_t f = 0; f < a.edges().size(); ++f) {
                    std::vector<int> b{a.edges()[f].first, a.edges()[f].second};
                    buckets[layout.offset(select(b, sel))].push_back(Term{int(f), 1});
                }
                for (auto & [offset, value] : target.entries())
                    buckets[offset];
                for (auto & [offset, terms] : buckets)
                    sys.add_equation(terms, target.at_offset(offset));
            }
            return diophantine_feasible(sys).has_value();
        }

        auto check_hyperedges(const ZaffCertificate & cert, const Digraph & x, const Digraph & a, int jobs) -> CheckReport
        {
            auto & edges = x.edges();
            std::vector<char> holds(edges.size(), 0);
            if (jobs <= 1) {
                for (std::size_t e = 0; e < edges.size(); ++e) {
                    holds[e] = hyperedge_holds(cert, a, edges[e]);
                    if (! holds[e])
                        break;
                }
            }
            else {
                std::vector<std::future<void>> workers;
                for (int w = 0; w < jobs; ++w)
                    workers.push_back(std::async(std::launch::async, [&, w] {
                        for (std::size_t e = w; e < edges.size(); e += jobs)
                            holds[e] = hyperedge_holds(cert, a, edges[e]);
                    }));
                for (auto & worker : workers)
                    worker.get();
            }
            for (std::size_t e = 0; e < edges.size(); ++e)
                if (! holds[e])
                    return fail('c', "no integer witness for the edge (" + std::to_string(edges[e].first) + "," + std::to_string(edges[e].second) + ")");
            return {};
        }
    }

    auto verify_clique_certificate(const ZaffCertificate & cert, const Digraph & x, int n, int jobs) -> CheckReport
    {
        if (! x.is_loopless())
            return fail('s', "the instance has a loop");
        if (cert.template_vertices() != n || (cert.template_graph && ! (*cert.template_graph == clique(n))))
            return fail('s', "certificate template is not K_" + std::to_string(n));
        if (auto report = check_images(cert, x, n); ! report.ok)
            return report;
        if (auto report = check_hollow(cert); ! report.ok)
            return report;
        if (auto report = check_tensorial(cert); ! report.ok)
            return report;
        return check_hyperedges(cert, x, clique(n), jobs);
    }

    auto verify_zaff_certificate_general(const ZaffCertificate & cert, const Digraph & x, const Digraph & a, int jobs) -> CheckReport
    {
        if (a.edges().empty())
            return fail('s', "the template has no edges");
        if (cert.template_vertices() != a.vertex_count() || (cert.template_graph && ! (*cert.template_graph == a)) || (cert.clique && ! (clique(*cert.clique) == a)))
            return fail('s', "certificate was issued for a different template");
        if (auto report = check_images(cert, x, a.vertex_count()); ! report.ok)
            return report;
        if (auto report = check_tensorial(cert); ! report.ok)
            return report;
        return check_hyperedges(cert, x, a, jobs);
    }

    auto uniform_qconv_map(const Digraph & x, int n, int k) -> QconvMap
    {
        if (k > n)
            throw Error(ErrorKind::BadDimension, "level " + std::to_string(k) + " exceeds the clique size " + std::to_string(n));
        if (! x.is_loopless())
            throw Error(ErrorKind::InvalidParams, "the instance has a loop");
        QconvMap map{k, n, {}};
        auto cells = all_tuples(n, k);
        for (auto & xt : all_tuples(x.vertex_count(), k)) {
            Rational weight(1, falling_factorial(n, distinct_count(xt)));
            TensorBuilder<Rational> builder(Shape(k, n));
            for (auto & at : cells)
                if (equivalent(at, xt))
                    builder.add(at, weight);
            map.xi.emplace(xt, builder.build());
        }
        return map;
    }

    auto check_refinement(const ZaffCertificate & cert, const QconvMap & xi) -> bool
    {
        if (cert.k != xi.k || cert.template_vertices() != xi.n || cert.zeta.size() != xi.xi.size())
            throw Error(ErrorKind::DimensionMismatch, "certificate and rational map disagree on level, width or domain");
        for (auto & [xt, image] : cert.zeta) {
            auto it = xi.xi.find(xt);
            if (it == xi.xi.end())
                throw Error(ErrorKind::DimensionMismatch, "no rational image for x = (" + tuple_to_string(xt) + ")");
            for (auto & [offset, value] : image.entries())
                if (sgn(it->second.at_offset(offset)) == 0)
                    return false;
        }
        return true;
    }

    auto transform_certificate_homomorphism(const ZaffCertificate & cert, const std::vector<int> & f, const Digraph & target) -> ZaffCertificate
    {
        Digraph source = cert.template_digraph();
        if (! is_homomorphism(source, target, f))
            throw Error(ErrorKind::NotAHomomorphism, "the vertex map does not preserve template edges");
        CoordinateMap g = coordinatewise_map(f, source.vertex_count(), target.vertex_count(), cert.k);
        ZaffCertificate result;
        result.k = cert.k;
        result.instance = cert.instance;
        result.template_graph = target;
        for (auto & [xt, image] : cert.zeta)
            result.zeta.emplace(xt, scatter(g, image));
        return result;
    }

    auto transform_certificate_line_digraph(const ZaffCertificate & cert, std::optional<Edge> anchor) -> ZaffCertificate
    {
        if (cert.k < 2 || cert.k % 2 != 0)
            throw Error(ErrorKind::BadDimension, "the line-digraph transform needs an even level, got " + std::to_string(cert.k));
        int k = cert.k / 2;
        Digraph a = cert.template_digraph();
        if (a.edges().empty())
            throw Error(ErrorKind::EmptyLineTemplate, "the template has no edges");
        LineDigraph line_a = line_digraph(a);
        if (line_a.graph.edges().empty())
            throw Error(ErrorKind::EmptyLineTemplate, "the line digraph of the template has no edges");
        Edge t = anchor.value_or(line_a.graph.edges().front());
        if (! line_a.graph.has_edge(t.first, t.second))
            throw Error(ErrorKind::InvalidParams, "the anchor is not an edge of the line digraph");
        int fallback = t.first;

        if (cert.instance.edges().empty())
            throw Error(ErrorKind::EmptyLineTemplate, "the instance has no edges, so its line digraph is empty");
        LineDigraph line_x = line_digraph(cert.instance);
        int m = line_a.graph.vertex_count();

        // Consecutive coordinate pairs become edges of A, non-edges fall back
        // to the anchor's tail.
        CoordinateMap beta{Shape(2 * k, a.vertex_count()), Shape(k, m), [&](const IndexTuple & pairs) {
                               IndexTuple edges(k);
                               for (int l = 0; l < k; ++l) {
                                   int number = a.edge_number(pairs[2 * l], pairs[2 * l + 1]);
                                   edges[l] = number ? number : fallback;
                               }
                               return edges;
                           }};

        ZaffCertificate result;
        result.k = k;
        result.instance = line_x.graph;
        result.template_graph = line_a.graph;
        for (auto & xbar : all_tuples(line_x.graph.vertex_count(), k)) {
            IndexTuple flat;
            for (int e : xbar) {
                flat.push_back(line_x.labels[e - 1].first);
                flat.push_back(line_x.labels[e - 1].second);
            }
            const IntTensor & image = cert.zeta.at(flat);
            image.for_each([&](const IndexTuple & at, const Integer &) {
                for (int l = 0; l < k; ++l)
                    if (! a.has_edge(at[2 * l], at[2 * l + 1]))
                        throw Error(ErrorKind::SupportConditionViolated, "zeta(" + tuple_to_string(flat) + ") is nonzero at (" + tuple_to_string(at) + "), whose pair " + std::to_string(l + 1) + " is not an edge of the template");
            });
            result.zeta.emplace(xbar, scatter(beta, image));
        }
        return result;
    }

    namespace
    {
        auto digraph_json(const Digraph & g) -> nlohmann::json
        {
            return nlohmann::json::parse(digraph_to_json(g));
        }
    }

    auto certificate_to_json(const ZaffCertificate & cert) -> std::string
    {
        nlohmann::ordered_json doc;
        doc["k"] = cert.k;
        doc["instance"] = digraph_json(cert.instance);
        if (cert.clique)
            doc["template"] = {{"clique", *cert.clique}};
        else
            doc["template"] = digraph_json(*cert.template_graph);
        doc["zeta"] = nlohmann::ordered_json::array();
        for (auto & [xt, image] : cert.zeta)
            doc["zeta"].push_back({{"x", xt}, {"tensor", to_st(image)}});
        return doc.dump(1) + "\n";
    }

    auto certificate_from_json(const std::string & text) -> ZaffCertificate
    {
        try {
            auto doc = nlohmann::json::parse(text);
            ZaffCertificate cert;
            cert.k = doc.at("k").get<int>();
            cert.instance = digraph_from_json(doc.at("instance").dump());
            auto & tmpl = doc.at("template");
            if (tmpl.contains("clique"))
                cert.clique = tmpl.at("clique").get<int>();
            else
                cert.template_graph = digraph_from_json(tmpl.dump());
            for (auto & entry : doc.at("zeta"))
                if (! cert.zeta.emplace(entry.at("x").get<IndexTuple>(), load_st_payload(entry.at("tensor").get<std::string>())).second)
                    throw Error(ErrorKind::FormatError, "duplicate image for x = (" + tuple_to_string(entry.at("x").get<IndexTuple>()) + ")");
            return cert;
        }
        catch (const nlohmann::json::exception & e) {
            throw Error(ErrorKind::FormatError, std::string("certificate JSON: ") + e.what());
        }
    }
}
