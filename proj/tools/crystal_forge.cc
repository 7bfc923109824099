#include <crystal_forge/certificate.hh>
#include <crystal_forge/crystal.hh>
#include <crystal_forge/digraph.hh>
#include <crystal_forge/relaxation.hh>
#include <crystal_forge/shadows.hh>
#include <crystal_forge/st_format.hh>

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>

using namespace crystal_forge;

namespace
{
    constexpr int exit_yes = 0;
    constexpr int exit_no = 1;
    constexpr int exit_usage = 2;

    struct Options
    {
        int k = 0, q = 0, i = 0, c = 0, d = 0, jobs = 1;
        std::string output;
        std::vector<std::string> inputs;
    };

    auto emit(const Options & opts, const std::string & text) -> void
    {
        if (opts.output.empty())
            std::cout << text;
        else
            write_text_file(opts.output, text);
    }

    auto decision(bool yes) -> int
    {
        std::cout << (yes ? "YES" : "NO") << "\n";
        return yes ? exit_yes : exit_no;
    }

    auto load_digraph(const std::string & path) -> Digraph
    {
        return digraph_from_json(read_text_file(path));
    }

    auto crystal_mine(const Options & opts) -> int
    {
        emit(opts, to_st(mine_hollow_crystal(opts.k)));
        return exit_yes;
    }

    // The miner's contract: dimension k, hollow, affine, (k-1)-crystal.
    auto crystal_verify(const Options & opts) -> int
    {
        auto c = read_st_file(opts.inputs.at(0));
        if (c.dims() != opts.k) {
            std::cerr << "dimension is " << c.dims() << ", expected " << opts.k << "\n";
            return decision(false);
        }
        if (! is_cubical(c.shape())) {
            std::cerr << "shape is not cubical\n";
            return decision(false);
        }
        auto report = is_crystal(c, opts.k - 1);
        bool hollow = is_hollow(c), affine = is_affine(c);
        if (! report.is_crystal)
            std::cerr << "not a " << opts.k - 1 << "-crystal: (" << tuple_to_string(report.failing_pair->first) << ") vs (" << tuple_to_string(report.failing_pair->second) << ")\n";
        if (! hollow)
            std::cerr << "ties at " << ties(c).size() << " indices\n";
        if (! affine)
            std::cerr << "entries sum to " << total(c) << "\n";
        return decision(report.is_crystal && hollow && affine);
    }

    auto crystal_shadow(const Options & opts) -> int
    {
        auto c = read_st_file(opts.inputs.at(0));
        auto report = is_crystal(c, opts.k);
        if (! report.is_crystal) {
            std::cerr << "not a " << opts.k << "-crystal\n";
            return exit_no;
        }
        emit(opts, to_st(*report.shadow));
        return exit_yes;
    }

    auto crystal_crystalise(const Options & opts) -> int
    {
        emit(opts, to_st(crystalise(read_st_file(opts.inputs.at(0)), opts.q)));
        return exit_yes;
    }

    auto shadows_check(const Options & opts) -> int
    {
        auto report = check_realistic(shadow_system_from_json(read_text_file(opts.inputs.at(0))));
        if (report.violation) {
            auto & v = *report.violation;
            std::cerr << "violated at i=(" << tuple_to_string(v.i) << ") j=(" << tuple_to_string(v.j) << ") r=(" << tuple_to_string(v.r) << ") s=(" << tuple_to_string(v.s) << ")\n";
        }
        return decision(report.realistic);
    }

    auto shadows_realise(const Options & opts) -> int
    {
        emit(opts, to_st(realise(shadow_system_from_json(read_text_file(opts.inputs.at(0))))));
        return exit_yes;
    }

    auto digraph_clique(const Options & opts) -> int
    {
        emit(opts, digraph_to_json(clique(opts.q)));
        return exit_yes;
    }

    auto digraph_linegraph(const Options & opts) -> int
    {
        emit(opts, digraph_to_json(line_digraph(load_digraph(opts.inputs.at(0))).graph));
        return exit_yes;
    }

    auto digraph_shift(const Options & opts) -> int
    {
        emit(opts, digraph_to_json(shift_digraph(opts.q, opts.i)));
        return exit_yes;
    }

    auto hom(const Options & opts) -> int
    {
        auto map = homomorphism_exists(load_digraph(opts.inputs.at(0)), load_digraph(opts.inputs.at(1)));
        if (! map)
            return decision(false);
        emit(opts, nlohmann::json(*map).dump() + "\n");
        return exit_yes;
    }

    auto relax(const Options & opts, const std::string & which) -> int
    {
        auto x = load_digraph(opts.inputs.at(0));
        auto a = load_digraph(opts.inputs.at(1));
        auto sys = build_ip_system(x, a, opts.k, IpOptions{MarginalFamily::Generators});
        if (which == "blp") {
            auto solution = lp_feasible(sys);
            int code = decision(solution.has_value());
            if (solution && ! opts.output.empty())
                write_text_file(opts.output, solution_to_json(sys, solution->values));
            return code;
        }
        if (which == "aip") {
            auto solution = diophantine_feasible(sys);
            int code = decision(solution.has_value());
            if (solution && ! opts.output.empty())
                write_text_file(opts.output, solution_to_json(sys, solution->values));
            return code;
        }
        if (! lp_feasible(sys))
            return decision(false);
        auto support = relative_interior_support(sys);
        std::vector<char> outside(support.size());
        for (std::size_t v = 0; v < support.size(); ++v)
            outside[v] = ! support[v];
        auto solution = diophantine_feasible(sys, outside);
        int code = decision(solution.has_value());
        if (solution && ! opts.output.empty())
            write_text_file(opts.output, solution_to_json(sys, solution->values));
        return code;
    }

    auto cert_from_crystal(const Options & opts) -> int
    {
        auto cert = certificate_from_crystal(read_st_file(opts.inputs.at(0)), load_digraph(opts.inputs.at(1)), opts.k);
        emit(opts, certificate_to_json(cert));
        return exit_yes;
    }

    auto cert_verify(const Options & opts) -> int
    {
        auto cert = certificate_from_json(read_text_file(opts.inputs.at(0)));
        auto report = cert.clique
            ? verify_clique_certificate(cert, cert.instance, *cert.clique, opts.jobs)
            : verify_zaff_certificate_general(cert, cert.instance, *cert.template_graph, opts.jobs);
        if (! report.ok)
            std::cerr << "check " << report.check << ": " << report.reason << "\n";
        return decision(report.ok);
    }

    auto cert_push_hom(const Options & opts) -> int
    {
        auto cert = certificate_from_json(read_text_file(opts.inputs.at(0)));
        std::vector<int> f;
        try {
            f = nlohmann::json::parse(read_text_file(opts.inputs.at(1))).get<std::vector<int>>();
        }
        catch (const nlohmann::json::exception & e) {
            throw Error(ErrorKind::FormatError, std::string("vertex map JSON: ") + e.what());
        }
        emit(opts, certificate_to_json(transform_certificate_homomorphism(cert, f, load_digraph(opts.inputs.at(2)))));
        return exit_yes;
    }

    auto cert_linegraph(const Options & opts) -> int
    {
        emit(opts, certificate_to_json(transform_certificate_line_digraph(certificate_from_json(read_text_file(opts.inputs.at(0))))));
        return exit_yes;
    }

    auto fool_params(const Options & opts) -> int
    {
        auto params = fooling_parameters(opts.c, opts.d, opts.k);
        nlohmann::ordered_json doc;
        doc["i"] = params.i;
        doc["b_iterates"] = nlohmann::json::array();
        for (auto & b : params.b_iterates)
            doc["b_iterates"].push_back(b.get_str());
        doc["thresholds"] = nlohmann::json::array();
        for (auto & t : params.thresholds)
            doc["thresholds"].push_back(t.get_str());
        doc["q_bits"] = params.q_bits.get_str();
        if (params.q && params.q_bits <= 64)
            doc["q"] = params.q->get_str();
        emit(opts, doc.dump(2) + "\n");
        return exit_yes;
    }

    auto usage_error(ErrorKind kind) -> bool
    {
        switch (kind) {
        case ErrorKind::FormatError:
        case ErrorKind::InvalidIndex:
        case ErrorKind::InvalidSelector:
        case ErrorKind::InvalidParams:
        case ErrorKind::BadDimension:
        case ErrorKind::ShapeMismatch:
        case ErrorKind::DimensionMismatch:
        case ErrorKind::TooFewDimensions:
            return true;
        default:
            return false;
        }
    }
}

auto main(int argc, char * argv[]) -> int
{
    CLI::App app{"Exact crystals, shadows, relaxation hierarchies and certificates"};
    app.require_subcommand(1);
    Options opts;
    std::function<int()> action;

    auto add = [&](CLI::App * parent, const std::string & name, const std::string & help, std::function<int()> run, int inputs) {
        auto sub = parent->add_subcommand(name, help);
        sub->add_option("--k", opts.k, "level or dimension");
        sub->add_option("--q", opts.q, "dimension or clique size");
        sub->add_option("--i", opts.i, "iteration count");
        sub->add_option("--c", opts.c, "promise colour count");
        sub->add_option("--d", opts.d, "target colour count");
        sub->add_option("-o,--output", opts.output, "output path (default stdout)");
        sub->add_option("--jobs", opts.jobs, "worker threads for independent verifications")->check(CLI::PositiveNumber);
        if (inputs > 0)
            sub->add_option("inputs", opts.inputs, "input files")->expected(inputs)->required();
        sub->callback([&action, run] { action = run; });
        return sub;
    };

    auto crystal = app.add_subcommand("crystal", "hollow crystals");
    crystal->require_subcommand(1);
    add(crystal, "mine", "mine a hollow affine (k-1)-crystal", [&] { return crystal_mine(opts); }, 0);
    add(crystal, "verify", "check dimension k, hollowness, affinity and the (k-1)-crystal property", [&] { return crystal_verify(opts); }, 1);
    add(crystal, "shadow", "write the k-shadow of a k-crystal", [&] { return crystal_shadow(opts); }, 1);
    add(crystal, "crystalise", "lift a shadow to a q-dimensional crystal", [&] { return crystal_crystalise(opts); }, 1);

    auto shadows = app.add_subcommand("shadows", "systems of shadows");
    shadows->require_subcommand(1);
    add(shadows, "check", "decide whether a system is realistic", [&] { return shadows_check(opts); }, 1);
    add(shadows, "realise", "build a tensor realising a system", [&] { return shadows_realise(opts); }, 1);

    auto digraph = app.add_subcommand("digraph", "digraph constructions");
    digraph->require_subcommand(1);
    add(digraph, "clique", "the clique on q vertices", [&] { return digraph_clique(opts); }, 0);
    add(digraph, "linegraph", "the line digraph", [&] { return digraph_linegraph(opts); }, 1);
    add(digraph, "shift", "the shift digraph S_{q,i}", [&] { return digraph_shift(opts); }, 0);

    add(&app, "hom", "print a homomorphism X -> A as a vertex map, or NO", [&] { return hom(opts); }, 2);

    auto relax_cmd = app.add_subcommand("relax", "relaxation hierarchies");
    relax_cmd->require_subcommand(1);
    for (std::string which : {"blp", "aip", "ba"})
        add(relax_cmd, which, "decide level k of the hierarchy on X A", [&, which] { return relax(opts, which); }, 2);

    auto cert = app.add_subcommand("cert", "acceptance certificates");
    cert->require_subcommand(1);
    add(cert, "from-crystal", "certificate from a crystal and an instance", [&] { return cert_from_crystal(opts); }, 2);
    add(cert, "verify", "verify a certificate against its template", [&] { return cert_verify(opts); }, 1);
    add(cert, "push-hom", "push a certificate along a template homomorphism (cert, map, target)", [&] { return cert_push_hom(opts); }, 3);
    add(cert, "linegraph", "transport a level-2k certificate to the line digraphs", [&] { return cert_linegraph(opts); }, 1);

    auto fool = app.add_subcommand("fool", "fooling instances");
    fool->require_subcommand(1);
    add(fool, "params", "iteration count and clique size for the fooling construction", [&] { return fool_params(opts); }, 0);

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError & e) {
        int code = app.exit(e);
        return code == 0 ? exit_yes : exit_usage;
    }

    try {
        return action();
    }
    catch (const Error & e) {
        std::cerr << e.what() << "\n";
        return usage_error(e.kind()) ? exit_usage : exit_no;
    }
    catch (const std::out_of_range & e) {
        std::cerr << "missing input: " << e.what() << "\n";
        return exit_usage;
    }
}
