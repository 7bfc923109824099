#include <crystal_forge/crystal.hh>
#include <crystal_forge/shadows.hh>

namespace crystal_forge
{
    namespace
    {
        auto add_quartz(TensorBuilder<Integer> & builder, const IndexTuple & a, const IndexTuple & b, const Integer & factor) -> void
        {
            int k = int(a.size());
            const Layout & layout = builder.layout();
            Integer negated = -factor;
            for (std::uint32_t z = 0; z < (1u << k); ++z) {
                std::uint64_t offset = 0;
                int flips = 0;
                for (int i = 0; i < k; ++i) {
                    bool from_b = (z >> i) & 1u;
                    offset += std::uint64_t((from_b ? b[i] : a[i]) - 1) * layout.stride(i);
                    flips += from_b;
                }
                builder.add(offset, flips % 2 == 0 ? factor : negated);
            }
        }
    }

    auto is_crystal(const IntTensor & c, int k) -> CrystalReport
    {
        if (! is_cubical(c.shape()))
            throw Error(ErrorKind::NotCubical, "shape " + tuple_to_string(c.shape()) + " is not cubical");
        if (k < 0 || k > c.dims())
            throw Error(ErrorKind::BadDimension, "k = " + std::to_string(k) + " for a " + std::to_string(c.dims()) + "-dimensional tensor");

        CrystalReport report;
        report.k = k;
        IndexTuple base = identity_selector(k);
        IntTensor reference = project(c, base);
        for (auto & i : increasing_tuples(c.dims(), k)) {
            if (i == base)
                continue;
            if (project(c, i) != reference) {
                report.failing_pair = std::make_pair(base, i);
                return report;
            }
        }
        report.is_crystal = true;
        report.shadow = std::move(reference);
        return report;
    }

    auto shadow(const IntTensor & c, int k) -> IntTensor
    {
        auto report = is_crystal(c, k);
        if (! report.is_crystal)
            throw Error(ErrorKind::NotACrystal, "projections onto (" + tuple_to_string(report.failing_pair->first) + ") and (" + tuple_to_string(report.failing_pair->second) + ") differ");
        return *report.shadow;
    }

    auto crystalise(const IntTensor & s, int q) -> IntTensor
    {
        int k = s.dims();
        if (k < 1 || k > q)
            throw Error(ErrorKind::BadDimension, "cannot crystalise a " + std::to_string(k) + "-dimensional shadow into " + std::to_string(q) + " dimensions");
        auto report = is_crystal(s, k - 1);
        if (! report.is_crystal)
            throw Error(ErrorKind::NotACrystal, "the shadow is not a " + std::to_string(k - 1) + "-crystal");
        return realise(constant_system(s, q));
    }

    auto quartz(int width, const IndexTuple & a, const IndexTuple & b) -> IntTensor
    {
        if (a.size() != b.size())
            throw Error(ErrorKind::ShapeMismatch, "quartz corners of different lengths");
        int k = int(a.size());
        Shape shape(k, width);
        if (! is_valid_index(shape, a) || ! is_valid_index(shape, b))
            throw Error(ErrorKind::InvalidIndex, "quartz corners outside [" + std::to_string(width) + "]");
        for (int i = 0; i < k; ++i)
            if (a[i] == b[i])
                throw Error(ErrorKind::CoordinateClash, "coordinate " + std::to_string(i + 1) + " of both corners is " + std::to_string(a[i]));

        TensorBuilder<Integer> builder(shape);
        add_quartz(builder, a, b, Integer(1));
        return builder.build();
    }

    auto pad(const IntTensor & c, int layers) -> IntTensor
    {
        if (! is_cubical(c.shape()))
            throw Error(ErrorKind::NotCubical, "shape " + tuple_to_string(c.shape()) + " is not cubical");
        if (layers < 0)
            throw Error(ErrorKind::BadDimension, "negative padding");
        if (layers == 0 || c.dims() == 0)
            return c;
        Shape shape(c.dims(), c.width(0) + layers);
        Layout layout(shape);
        std::vector<IntTensor::Entry> entries;
        entries.reserve(c.nnz());
        c.for_each([&](const IndexTuple & index, const Integer & value) { entries.emplace_back(layout.offset(index), value); });
        return IntTensor::from_sorted(shape, std::move(entries));
    }

    auto hollow_crystal_width(int k) -> int
    {
        return (k * k + k) / 2;
    }

    auto mine_hollow_crystal(int k) -> IntTensor
    {
        if (k < 1)
            throw Error(ErrorKind::BadDimension, "k must be positive");
        if (k == 1)
            return unit_tensor(Shape{1}, IndexTuple{1});

        IntTensor lower = mine_hollow_crystal(k - 1);
        IntTensor crystal = crystalise(lower, k);
        IntTensor padded = pad(crystal, k);

        int inner = lower.width(0);
        IndexTuple anchor(k);
        for (int i = 0; i < k; ++i)
            anchor[i] = inner + 1 + i;

        // Cancel every entry of the padded crystal with a quartz reaching into
        // the fresh layers, which keeps the shadow and kills all ties.
        TensorBuilder<Integer> builder(padded.shape());
        builder.add_scaled(padded, Integer(1));
        padded.for_each([&](const IndexTuple & d, const Integer & value) {
            add_quartz(builder, d, anchor, Integer(-value));
        });
        return builder.build();
    }

    auto mine_hollow_shadowed_crystal(int k, int q) -> IntTensor
    {
        if (k < 1 || k > q)
            throw Error(ErrorKind::BadDimension, "need 1 <= k <= q, got k = " + std::to_string(k) + ", q = " + std::to_string(q));
        return crystalise(mine_hollow_crystal(k), q);
    }
}
