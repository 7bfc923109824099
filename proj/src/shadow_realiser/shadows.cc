#include <crystal_forge/shadows.hh>
#include <crystal_forge/st_format.hh>

#include <json.hpp>

#include <algorithm>

namespace crystal_forge
{
    namespace
    {
        using Tuples = std::vector<IndexTuple>;

        auto position(const Tuples & tuples, const IndexTuple & t) -> std::size_t
        {
            return std::size_t(std::lower_bound(tuples.begin(), tuples.end(), t) - tuples.begin());
        }

        // Entries whose last coordinate equals `value`, with the last mode dropped.
        auto slice_last(const IntTensor & t, int value) -> IntTensor
        {
            Shape shape(t.shape().begin(), t.shape().end() - 1);
            std::uint64_t w = std::uint64_t(t.shape().back());
            std::vector<IntTensor::Entry> entries;
            for (auto & [offset, v] : t.entries())
                if (offset % w == std::uint64_t(value - 1))
                    entries.emplace_back(offset / w, v);
            return IntTensor::from_sorted(std::move(shape), std::move(entries));
        }

        // Reads t through a shape that differs only in its last width; cells
        // beyond the new width are dropped.
        auto rewidth_last(const IntTensor & t, int width) -> IntTensor
        {
            Shape shape = t.shape();
            std::uint64_t from = std::uint64_t(shape.back()), to = std::uint64_t(width);
            shape.back() = width;
            std::vector<IntTensor::Entry> entries;
            entries.reserve(t.nnz());
            for (auto & [offset, v] : t.entries())
                if (offset % from < to)
                    entries.emplace_back(offset / from * to + offset % from, v);
            return IntTensor::from_sorted(std::move(shape), std::move(entries));
        }

        // C(b) = top(b_{<q}) when b_q = n_q, else rest(b), where rest has last
        // width n_q - 1.
        auto glue(const Shape & n, const IntTensor & rest, const IntTensor & top) -> IntTensor
        {
            std::uint64_t w = std::uint64_t(n.back());
            std::vector<IntTensor::Entry> entries;
            entries.reserve(rest.nnz() + top.nnz());
            for (auto & [offset, v] : rest.entries())
                entries.emplace_back(offset / (w - 1) * w + offset % (w - 1), v);
            for (auto & [offset, v] : top.entries())
                entries.emplace_back(offset * w + (w - 1), v);
            std::sort(entries.begin(), entries.end(), [](const auto & a, const auto & b) { return a.first < b.first; });
            return IntTensor::from_sorted(n, std::move(entries));
        }

        auto realise_rec(int p, const Shape & n, const std::vector<IntTensor> & shadows) -> IntTensor;

        // Swap the last mode with the highest-index mode of width at least 2,
        // realise, then swap back.
        auto realise_rotated(int p, const Shape & n, const std::vector<IntTensor> & shadows) -> IntTensor
        {
            int q = int(n.size());
            int t = q - 1;
            while (t >= 0 && n[t] < 2)
                --t;
            auto swapped = [&](int mode) { return mode == t + 1 ? q : mode == q ? t + 1 : mode; };

            Shape rotated = n;
            std::swap(rotated[t], rotated[q - 1]);
            Tuples tuples = increasing_tuples(q, p);
            std::vector<IntTensor> moved;
            moved.reserve(tuples.size());
            for (auto & i : tuples) {
                IndexTuple original;
                for (int m : i)
                    original.push_back(swapped(m));
                IndexTuple sorted = original;
                std::sort(sorted.begin(), sorted.end());
                ModeSelector sel;
                for (int m : original)
                    sel.push_back(int(std::find(sorted.begin(), sorted.end(), m) - sorted.begin()) + 1);
                moved.push_back(project(shadows[position(tuples, sorted)], sel));
            }

            IntTensor c = realise_rec(p, rotated, moved);
            ModeSelector back = identity_selector(q);
            std::swap(back[t], back[q - 1]);
            return project(c, back);
        }

        auto realise_rec(int p, const Shape & n, const std::vector<IntTensor> & shadows) -> IntTensor
        {
            int q = int(n.size());

            if (std::all_of(n.begin(), n.end(), [](int w) { return w == 1; })) {
                Integer value = shadows.front().at_offset(0);
                std::vector<IntTensor::Entry> entries;
                if (sgn(value) != 0)
                    entries.emplace_back(0, value);
                return IntTensor::from_sorted(n, std::move(entries));
            }

            if (p == q)
                return shadows.front();

            if (n.back() < 2)
                return realise_rotated(p, n, shadows);

            int last = n.back();
            Shape shrunk = n;
            --shrunk.back();

            if (p == 1) {
                Integer corner = shadows.back().at_offset(std::uint64_t(last - 1));
                std::vector<IntTensor> reduced;
                reduced.reserve(q);
                for (int j = 0; j < q - 1; ++j) {
                    TensorBuilder<Integer> b(shadows[j].shape());
                    b.add_scaled(shadows[j], Integer(1));
                    b.add(std::uint64_t(n[j] - 1), Integer(-corner));
                    reduced.push_back(b.build());
                }
                reduced.push_back(rewidth_last(shadows.back(), last - 1));
                IntTensor rest = realise_rec(1, shrunk, reduced);

                std::vector<IntTensor::Entry> corner_entry;
                if (sgn(corner) != 0)
                    corner_entry.emplace_back(Layout(Shape(n.begin(), n.end() - 1)).cells() - 1, corner);
                IntTensor top = IntTensor::from_sorted(Shape(n.begin(), n.end() - 1), std::move(corner_entry));
                return glue(n, rest, top);
            }

            Tuples tuples = increasing_tuples(q, p);

            Shape hat_shape(n.begin(), n.end() - 1);
            std::vector<IntTensor> hat;
            for (auto & i : increasing_tuples(q - 1, p - 1)) {
                IndexTuple full = i;
                full.push_back(q);
                hat.push_back(slice_last(shadows[position(tuples, full)], last));
            }
            IntTensor top = realise_rec(p - 1, hat_shape, hat);

            std::vector<IntTensor> tilde;
            tilde.reserve(tuples.size());
            for (std::size_t pos = 0; pos < tuples.size(); ++pos) {
                if (tuples[pos].back() == q)
                    tilde.push_back(rewidth_last(shadows[pos], last - 1));
                else
                    tilde.push_back(shadows[pos] - project(top, tuples[pos]));
            }
            IntTensor rest = realise_rec(p, shrunk, tilde);

            return glue(n, rest, top);
        }
    }

    auto ShadowSystem::shadow(const IndexTuple & axes) const -> IntTensor
    {
        check_selector(q(), axes);
        IndexTuple modes = axes;
        std::sort(modes.begin(), modes.end());
        modes.erase(std::unique(modes.begin(), modes.end()), modes.end());
        if (int(modes.size()) > p)
            throw Error(ErrorKind::InvalidSelector, "axes " + tuple_to_string(axes) + " span more than " + std::to_string(p) + " modes");

        // Extend to the lexicographically first increasing p-tuple containing them.
        IndexTuple host;
        for (int m = 1, taken = 0; m <= q() && int(host.size()) < p; ++m) {
            bool wanted = std::binary_search(modes.begin(), modes.end(), m);
            int free_slots = p - int(modes.size()) - taken;
            if (wanted)
                host.push_back(m);
            else if (free_slots > 0) {
                host.push_back(m);
                ++taken;
            }
        }

        auto it = shadows.find(host);
        if (it == shadows.end())
            throw Error(ErrorKind::ShapeMismatch, "no shadow stored for axes " + tuple_to_string(host));
        ModeSelector sel;
        for (int m : axes)
            sel.push_back(int(std::find(host.begin(), host.end(), m) - host.begin()) + 1);
        return project(it->second, sel);
    }

    auto check_well_formed(const ShadowSystem & sys) -> void
    {
        if (sys.p < 1 || sys.p > sys.q())
            throw Error(ErrorKind::BadDimension, "shadow dimension " + std::to_string(sys.p) + " with " + std::to_string(sys.q()) + " modes");
        cell_count(sys.widths);
        auto tuples = increasing_tuples(sys.q(), sys.p);
        if (sys.shadows.size() != tuples.size())
            throw Error(ErrorKind::ShapeMismatch, "expected " + std::to_string(tuples.size()) + " shadows, got " + std::to_string(sys.shadows.size()));
        for (auto & i : tuples) {
            auto it = sys.shadows.find(i);
            if (it == sys.shadows.end())
                throw Error(ErrorKind::ShapeMismatch, "missing shadow for axes " + tuple_to_string(i));
            if (it->second.shape() != select(sys.widths, i))
                throw Error(ErrorKind::ShapeMismatch, "shadow for axes " + tuple_to_string(i) + " has shape " + tuple_to_string(it->second.shape()));
        }
    }

    auto check_realistic(const ShadowSystem & sys) -> RealismReport
    {
        check_well_formed(sys);
        auto tuples = increasing_tuples(sys.q(), sys.p);
        auto faces = increasing_tuples(sys.p, sys.p - 1);

        std::vector<std::vector<IntTensor>> projections(tuples.size());
        for (std::size_t a = 0; a < tuples.size(); ++a)
            for (auto & r : faces)
                projections[a].push_back(project(sys.shadows.at(tuples[a]), r));

        for (std::size_t a = 0; a < tuples.size(); ++a)
            for (std::size_t b = 0; b < tuples.size(); ++b)
                for (std::size_t r = 0; r < faces.size(); ++r)
                    for (std::size_t s = 0; s < faces.size(); ++s)
                        if (select(tuples[a], faces[r]) == select(tuples[b], faces[s]) && projections[a][r] != projections[b][s])
                            return RealismReport{false, Violation{tuples[a], tuples[b], faces[r], faces[s]}};
        return RealismReport{};
    }

    auto is_realistic(const ShadowSystem & sys) -> bool
    {
        return check_realistic(sys).realistic;
    }

    auto realise(const ShadowSystem & sys) -> IntTensor
    {
        auto report = check_realistic(sys);
        if (! report.realistic) {
            auto & v = *report.violation;
            throw Error(ErrorKind::NotRealistic, "projections disagree for i=(" + tuple_to_string(v.i) + ") j=(" + tuple_to_string(v.j) + ") r=(" + tuple_to_string(v.r) + ") s=(" + tuple_to_string(v.s) + ")");
        }
        std::vector<IntTensor> shadows;
        for (auto & i : increasing_tuples(sys.q(), sys.p))
            shadows.push_back(sys.shadows.at(i));
        return realise_rec(sys.p, sys.widths, shadows);
    }

    auto verify_realisation(const IntTensor & c, const ShadowSystem & sys) -> bool
    {
        if (c.shape() != sys.widths)
            return false;
        for (auto & [axes, s] : sys.shadows)
            if (project(c, axes) != s)
                return false;
        return true;
    }

    auto shadows_of(const IntTensor & c, int p) -> ShadowSystem
    {
        if (p < 1 || p > c.dims())
            throw Error(ErrorKind::BadDimension, "cannot take " + std::to_string(p) + "-shadows of a " + std::to_string(c.dims()) + "-dimensional tensor");
        ShadowSystem sys{p, c.shape(), {}};
        for (auto & i : increasing_tuples(c.dims(), p))
            sys.shadows.emplace(i, project(c, i));
        return sys;
    }

    auto constant_system(const IntTensor & s, int q) -> ShadowSystem
    {
        int p = s.dims();
        if (p < 1 || p > q)
            throw Error(ErrorKind::BadDimension, "a " + std::to_string(p) + "-dimensional shadow cannot span " + std::to_string(q) + " modes");
        if (! is_cubical(s.shape()))
            throw Error(ErrorKind::NotCubical, "shadow shape " + tuple_to_string(s.shape()) + " is not cubical");
        ShadowSystem sys{p, Shape(q, s.width(0)), {}};
        for (auto & i : increasing_tuples(q, p))
            sys.shadows.emplace(i, s);
        return sys;
    }

    auto shadow_system_to_json(const ShadowSystem & sys) -> std::string
    {
        nlohmann::json doc;
        doc["p"] = sys.p;
        doc["widths"] = sys.widths;
        doc["shadows"] = nlohmann::json::array();
        for (auto & [axes, s] : sys.shadows)
            doc["shadows"].push_back({{"axes", axes}, {"tensor", to_st(s)}});
        return doc.dump(2) + "\n";
    }

    auto shadow_system_from_json(const std::string & text) -> ShadowSystem
    {
        try {
            auto doc = nlohmann::json::parse(text);
            ShadowSystem sys;
            sys.p = doc.at("p").get<int>();
            sys.widths = doc.at("widths").get<Shape>();
            for (auto & entry : doc.at("shadows")) {
                auto axes = entry.at("axes").get<IndexTuple>();
                if (! std::is_sorted(axes.begin(), axes.end()) || std::adjacent_find(axes.begin(), axes.end()) != axes.end())
                    throw Error(ErrorKind::FormatError, "axes " + tuple_to_string(axes) + " are not strictly increasing");
                if (! sys.shadows.emplace(axes, load_st_payload(entry.at("tensor").get<std::string>())).second)
                    throw Error(ErrorKind::FormatError, "duplicate axes " + tuple_to_string(axes));
            }
            check_well_formed(sys);
            return sys;
        }
        catch (const nlohmann::json::exception & e) {
            throw Error(ErrorKind::FormatError, std::string("shadow system JSON: ") + e.what());
        }
    }
}
