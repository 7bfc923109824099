#pragma once

#include <crystal_forge/digraph.hh>
#include <crystal_forge/tensor.hh>

#include <functional>
#include <map>
#include <optional>
#include <string>

namespace crystal_forge
{
    // A k-tensorial family of affine integer tensors indexed by V(X)^k. The
    // template is either the clique K_n or an explicit digraph A; images have
    // shape (|V(A)|, ..., |V(A)|) with k modes.
    struct ZaffCertificate
    {
        int k = 0;
        Digraph instance;
        std::optional<int> clique;
        std::optional<Digraph> template_graph;
        std::map<IndexTuple, IntTensor> zeta;

        auto template_vertices() const -> int;
        auto template_digraph() const -> Digraph;
    };

    struct QconvMap
    {
        int k = 0;
        int n = 0;
        std::map<IndexTuple, RatTensor> xi;
    };

    struct CoordinateMap
    {
        Shape domain;
        Shape codomain;
        std::function<IndexTuple(const IndexTuple &)> apply;
    };

    // Entry i of the result is the sum of T(j) over the preimage of i.
    template <typename Scalar>
    auto scatter(const CoordinateMap & map, const BasicTensor<Scalar> & t) -> BasicTensor<Scalar>
    {
        if (t.shape() != map.domain)
            throw Error(ErrorKind::ShapeMismatch, "tensor shape " + tuple_to_string(t.shape()) + " is not the map's domain " + tuple_to_string(map.domain));
        TensorBuilder<Scalar> builder(map.codomain);
        t.for_each([&](const IndexTuple & index, const Scalar & value) { builder.add(map.apply(index), value); });
        return builder.build();
    }

    // Applies a vertex map coordinatewise to k-tuples.
    auto coordinatewise_map(const std::vector<int> & vertex_map, int from, int to, int k) -> CoordinateMap;

    struct CheckReport
    {
        bool ok = true;
        // 'a' affine images, 'b' k-tensoriality, 'c' hyperedges, 'd' hollowness,
        // 's' structural mismatch.
        char check = 0;
        std::string reason;
    };

    // zeta(x) = project(C, x) for x in V(X)^k, where C is an affine k-crystal
    // of dimension q >= max(k+1, |V(X)|) with hollow k-shadow.
    auto certificate_from_crystal(const IntTensor & c, const Digraph & x, int k) -> ZaffCertificate;

    auto verify_clique_certificate(const ZaffCertificate & cert, const Digraph & x, int n, int jobs = 1) -> CheckReport;
    auto verify_zaff_certificate_general(const ZaffCertificate & cert, const Digraph & x, const Digraph & a, int jobs = 1) -> CheckReport;

    // n! / (n - m)!
    auto falling_factorial(int n, int m) -> Integer;

    // xi(x) uniform on {a : a ~ x}.
    auto uniform_qconv_map(const Digraph & x, int n, int k) -> QconvMap;

    auto check_refinement(const ZaffCertificate & cert, const QconvMap & xi) -> bool;

    // Pushes every image forward along f applied coordinatewise; f[v - 1] is
    // the image of template vertex v.
    auto transform_certificate_homomorphism(const ZaffCertificate & cert, const std::vector<int> & f, const Digraph & target) -> ZaffCertificate;

    // Level 2k certificate for (X, A) to a level k certificate for the line
    // digraphs. The anchor is an edge of the line digraph of A; the default is
    // its smallest edge.
    auto transform_certificate_line_digraph(const ZaffCertificate & cert, std::optional<Edge> anchor = std::nullopt) -> ZaffCertificate;

    auto certificate_to_json(const ZaffCertificate & cert) -> std::string;
    auto certificate_from_json(const std::string & text) -> ZaffCertificate;
}
