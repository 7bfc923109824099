#pragma once

#include <crystal_forge/error.hh>

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace crystal_forge
{
    using Integer = mpz_class;
    using Rational = mpq_class;

    // Mode widths. An empty shape is the scalar shape.
    using Shape = std::vector<int>;

    // 1-based coordinates, one per mode.
    using IndexTuple = std::vector<int>;

    // 1-based mode numbers, possibly repeating, possibly empty.
    using ModeSelector = std::vector<int>;

    auto cell_count(const Shape & shape) -> std::uint64_t;
    auto is_valid_index(const Shape & shape, const IndexTuple & index) -> bool;
    auto is_cubical(const Shape & shape) -> bool;
    auto check_selector(int dims, const ModeSelector & sel) -> void;

    // a_sel: the tuple (a_{sel_1}, ..., a_{sel_m}).
    auto select(const std::vector<int> & a, const ModeSelector & sel) -> std::vector<int>;

    // The identity selector (1, 2, ..., q).
    auto identity_selector(int q) -> ModeSelector;

    // Number of distinct entries of a tuple.
    auto distinct_count(const std::vector<int> & a) -> int;

    // s precedes t when equal coordinates of s force equal coordinates of t.
    auto precedes(const std::vector<int> & s, const std::vector<int> & t) -> bool;
    auto equivalent(const std::vector<int> & s, const std::vector<int> & t) -> bool;

    // Strictly increasing p-tuples over [q], lexicographic.
    auto increasing_tuples(int q, int p) -> std::vector<IndexTuple>;

    // Every tuple in [n]^k, lexicographic.
    auto all_tuples(int n, int k) -> std::vector<IndexTuple>;

    // Every index of a shape, lexicographic.
    auto all_indices(const Shape & shape) -> std::vector<IndexTuple>;

    auto tuple_to_string(const std::vector<int> & a, char sep = ',') -> std::string;

    auto is_zero(const Integer & v) -> bool;
    auto is_zero(const Rational & v) -> bool;

    class Layout
    {
    private:
        Shape _shape;
        std::vector<std::uint64_t> _strides;
        std::uint64_t _cells = 1;

    public:
        Layout() = default;
        explicit Layout(Shape shape);

        auto shape() const -> const Shape & { return _shape; }
        auto dims() const -> int { return int(_shape.size()); }
        auto cells() const -> std::uint64_t { return _cells; }
        auto stride(int mode) const -> std::uint64_t { return _strides[mode]; }

        auto offset(const IndexTuple & index) const -> std::uint64_t
        {
            std::uint64_t result = 0;
            for (std::size_t j = 0; j < _shape.size(); ++j)
                result += std::uint64_t(index[j] - 1) * _strides[j];
            return result;
        }

        auto decode(std::uint64_t offset, IndexTuple & index) const -> void
        {
            index.resize(_shape.size());
            for (std::size_t j = 0; j < _shape.size(); ++j) {
                index[j] = int(offset / _strides[j]) + 1;
                offset %= _strides[j];
            }
        }

        auto decode(std::uint64_t offset) const -> IndexTuple
        {
            IndexTuple index;
            decode(offset, index);
            return index;
        }
    };

    // Sparse tensor with exact entries. Entries are kept sorted by row-major
    // offset (first mode most significant), which is lexicographic order of
    // the index tuples, and zero values are never stored.
    template <typename Scalar_>
    class BasicTensor
    {
    public:
        using Scalar = Scalar_;
        using Entry = std::pair<std::uint64_t, Scalar>;

    private:
        Layout _layout;
        std::vector<Entry> _entries;

    public:
        BasicTensor() = default;

        explicit BasicTensor(Shape shape) :
            _layout(std::move(shape))
        {
        }

        // Entries must be sorted by offset, unique and nonzero.
        static auto from_sorted(Shape shape, std::vector<Entry> entries) -> BasicTensor
        {
            BasicTensor result(std::move(shape));
            result._entries = std::move(entries);
            return result;
        }

        static auto from_entries(Shape shape, const std::vector<std::pair<IndexTuple, Scalar>> & entries) -> BasicTensor;

        auto layout() const -> const Layout & { return _layout; }
        auto shape() const -> const Shape & { return _layout.shape(); }
        auto dims() const -> int { return _layout.dims(); }
        auto width(int mode) const -> int { return _layout.shape()[mode]; }
        auto entries() const -> const std::vector<Entry> & { return _entries; }
        auto nnz() const -> std::size_t { return _entries.size(); }
        auto is_zero() const -> bool { return _entries.empty(); }

        auto index_of(std::uint64_t offset) const -> IndexTuple { return _layout.decode(offset); }

        auto offset_of(const IndexTuple & index) const -> std::uint64_t
        {
            if (! is_valid_index(shape(), index))
                throw Error(ErrorKind::InvalidIndex, "index " + tuple_to_string(index) + " outside shape " + tuple_to_string(shape()));
            return _layout.offset(index);
        }

        auto at_offset(std::uint64_t offset) const -> Scalar
        {
            auto it = std::lower_bound(_entries.begin(), _entries.end(), offset,
                [](const Entry & e, std::uint64_t o) { return e.first < o; });
            if (it != _entries.end() && it->first == offset)
                return it->second;
            return Scalar(0);
        }

        auto at(const IndexTuple & index) const -> Scalar { return at_offset(offset_of(index)); }

        template <typename Fn>
        auto for_each(Fn && fn) const -> void
        {
            IndexTuple index;
            for (auto & [offset, value] : _entries) {
                _layout.decode(offset, index);
                fn(index, value);
            }
        }

        auto operator==(const BasicTensor & other) const -> bool
        {
            return shape() == other.shape() && _entries == other._entries;
        }

        auto operator!=(const BasicTensor & other) const -> bool { return ! (*this == other); }
    };

    // Accumulates cell updates, then produces a canonical tensor.
    template <typename Scalar>
    class TensorBuilder
    {
    private:
        Layout _layout;
        std::unordered_map<std::uint64_t, Scalar> _cells;

    public:
        explicit TensorBuilder(Shape shape) :
            _layout(std::move(shape))
        {
        }

        auto layout() const -> const Layout & { return _layout; }

        auto add(std::uint64_t offset, const Scalar & value) -> void
        {
            auto [it, inserted] = _cells.try_emplace(offset, value);
            if (! inserted)
                it->second += value;
        }

        auto add(const IndexTuple & index, const Scalar & value) -> void
        {
            if (! is_valid_index(_layout.shape(), index))
                throw Error(ErrorKind::InvalidIndex, "index " + tuple_to_string(index) + " outside shape " + tuple_to_string(_layout.shape()));
            add(_layout.offset(index), value);
        }

        auto add_scaled(const BasicTensor<Scalar> & t, const Scalar & factor) -> void
        {
            for (auto & [offset, value] : t.entries())
                add(offset, value * factor);
        }

        auto build() -> BasicTensor<Scalar>
        {
            std::vector<typename BasicTensor<Scalar>::Entry> entries;
            entries.reserve(_cells.size());
            for (auto & [offset, value] : _cells)
                if (! crystal_forge::is_zero(value))
                    entries.emplace_back(offset, std::move(value));
            _cells.clear();
            std::sort(entries.begin(), entries.end(), [](const auto & a, const auto & b) { return a.first < b.first; });
            return BasicTensor<Scalar>::from_sorted(_layout.shape(), std::move(entries));
        }
    };

    template <typename Scalar_>
    auto BasicTensor<Scalar_>::from_entries(Shape shape, const std::vector<std::pair<IndexTuple, Scalar>> & entries) -> BasicTensor
    {
        TensorBuilder<Scalar> builder(std::move(shape));
        for (auto & [index, value] : entries)
            builder.add(index, value);
        return builder.build();
    }

    using IntTensor = BasicTensor<Integer>;
    using RatTensor = BasicTensor<Rational>;

    template <typename Scalar>
    auto total(const BasicTensor<Scalar> & t) -> Scalar
    {
        Scalar result = 0;
        for (auto & e : t.entries())
            result += e.second;
        return result;
    }

    template <typename Scalar>
    auto is_affine(const BasicTensor<Scalar> & t) -> bool
    {
        return total(t) == 1;
    }

    template <typename Scalar>
    auto support(const BasicTensor<Scalar> & t) -> std::vector<IndexTuple>
    {
        std::vector<IndexTuple> result;
        result.reserve(t.nnz());
        for (auto & e : t.entries())
            result.push_back(t.index_of(e.first));
        return result;
    }

    // Support entries with a repeated coordinate.
    template <typename Scalar>
    auto ties(const BasicTensor<Scalar> & t) -> std::vector<IndexTuple>
    {
        std::vector<IndexTuple> result;
        t.for_each([&](const IndexTuple & index, const Scalar &) {
            if (distinct_count(index) < t.dims())
                result.push_back(index);
        });
        return result;
    }

    template <typename Scalar>
    auto is_hollow(const BasicTensor<Scalar> & t) -> bool
    {
        return ties(t).empty();
    }

    // Entry i of the result is the sum of T(j) over all j with j_sel = i.
    template <typename Scalar>
    auto project(const BasicTensor<Scalar> & t, const ModeSelector & sel) -> BasicTensor<Scalar>
    {
        check_selector(t.dims(), sel);
        if (sel == identity_selector(t.dims()))
            return t;

        TensorBuilder<Scalar> builder(select(t.shape(), sel));
        const Layout & out = builder.layout();
        std::vector<std::uint64_t> strides(sel.size());
        for (std::size_t m = 0; m < sel.size(); ++m)
            strides[m] = out.stride(int(m));

        IndexTuple index;
        for (auto & [offset, value] : t.entries()) {
            t.layout().decode(offset, index);
            std::uint64_t target = 0;
            for (std::size_t m = 0; m < sel.size(); ++m)
                target += std::uint64_t(index[sel[m] - 1] - 1) * strides[m];
            builder.add(target, value);
        }
        return builder.build();
    }

    // Sums over the trailing `shared` modes of t against the leading `shared`
    // modes of u.
    template <typename Scalar>
    auto contract(const BasicTensor<Scalar> & t, const BasicTensor<Scalar> & u, int shared) -> BasicTensor<Scalar>
    {
        int qt = t.dims(), qu = u.dims();
        if (shared < 0 || shared > qt || shared > qu)
            throw Error(ErrorKind::ShapeMismatch, "cannot contract over " + std::to_string(shared) + " modes");
        for (int j = 0; j < shared; ++j)
            if (t.width(qt - shared + j) != u.width(j))
                throw Error(ErrorKind::ShapeMismatch, "shared mode widths disagree: " + tuple_to_string(t.shape()) + " against " + tuple_to_string(u.shape()));

        Shape out(t.shape().begin(), t.shape().end() - shared);
        Shape rest(u.shape().begin() + shared, u.shape().end());
        out.insert(out.end(), rest.begin(), rest.end());

        std::uint64_t shared_cells = cell_count(Shape(u.shape().begin(), u.shape().begin() + shared));
        std::uint64_t rest_cells = cell_count(rest);

        // u's entries are sorted, so entries sharing a leading block are contiguous.
        std::unordered_map<std::uint64_t, std::pair<std::size_t, std::size_t>> blocks;
        auto & ue = u.entries();
        for (std::size_t pos = 0; pos < ue.size();) {
            std::uint64_t block = ue[pos].first / rest_cells;
            std::size_t end = pos;
            while (end < ue.size() && ue[end].first / rest_cells == block)
                ++end;
            blocks.emplace(block, std::make_pair(pos, end));
            pos = end;
        }

        TensorBuilder<Scalar> builder(out);
        for (auto & [offset, value] : t.entries()) {
            auto it = blocks.find(offset % shared_cells);
            if (it == blocks.end())
                continue;
            std::uint64_t head = offset / shared_cells;
            for (std::size_t pos = it->second.first; pos < it->second.second; ++pos)
                builder.add(head * rest_cells + ue[pos].first % rest_cells, value * ue[pos].second);
        }
        return builder.build();
    }

    template <typename Scalar>
    auto operator+(const BasicTensor<Scalar> & a, const BasicTensor<Scalar> & b) -> BasicTensor<Scalar>
    {
        if (a.shape() != b.shape())
            throw Error(ErrorKind::ShapeMismatch, "cannot add tensors of shapes " + tuple_to_string(a.shape()) + " and " + tuple_to_string(b.shape()));
        TensorBuilder<Scalar> builder(a.shape());
        builder.add_scaled(a, Scalar(1));
        builder.add_scaled(b, Scalar(1));
        return builder.build();
    }

    template <typename Scalar>
    auto operator-(const BasicTensor<Scalar> & a, const BasicTensor<Scalar> & b) -> BasicTensor<Scalar>
    {
        if (a.shape() != b.shape())
            throw Error(ErrorKind::ShapeMismatch, "cannot subtract tensors of shapes " + tuple_to_string(a.shape()) + " and " + tuple_to_string(b.shape()));
        TensorBuilder<Scalar> builder(a.shape());
        builder.add_scaled(a, Scalar(1));
        builder.add_scaled(b, Scalar(-1));
        return builder.build();
    }

    template <typename Scalar>
    auto operator*(const Scalar & factor, const BasicTensor<Scalar> & t) -> BasicTensor<Scalar>
    {
        if (is_zero(factor))
            return BasicTensor<Scalar>(t.shape());
        std::vector<typename BasicTensor<Scalar>::Entry> entries;
        entries.reserve(t.nnz());
        for (auto & [offset, value] : t.entries())
            entries.emplace_back(offset, factor * value);
        return BasicTensor<Scalar>::from_sorted(t.shape(), std::move(entries));
    }

    auto unit_tensor(const Shape & shape, const IndexTuple & index) -> IntTensor;

    // The 0/1 tensor over (n_sel, n) whose contraction with T gives project(T, sel).
    // Only meant for cross-checking project.
    auto materialize_projection_tensor(const Shape & shape, const ModeSelector & sel) -> IntTensor;

    auto to_rational(const IntTensor & t) -> RatTensor;
}
