#include <crystal_forge/tensor.hh>

#include <limits>
#include <set>

namespace crystal_forge
{
    auto error_kind_name(ErrorKind kind) -> const char *
    {
        switch (kind) {
        case ErrorKind::InvalidIndex: return "InvalidIndex";
        case ErrorKind::ShapeMismatch: return "ShapeMismatch";
        case ErrorKind::InvalidSelector: return "InvalidSelector";
        case ErrorKind::NotRealistic: return "NotRealistic";
        case ErrorKind::NotCubical: return "NotCubical";
        case ErrorKind::BadDimension: return "BadDimension";
        case ErrorKind::NotACrystal: return "NotACrystal";
        case ErrorKind::CoordinateClash: return "CoordinateClash";
        case ErrorKind::InvalidParams: return "InvalidParams";
        case ErrorKind::Infeasible: return "Infeasible";
        case ErrorKind::NotHollowShadow: return "NotHollowShadow";
        case ErrorKind::NotAffine: return "NotAffine";
        case ErrorKind::TooFewDimensions: return "TooFewDimensions";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::NotAHomomorphism: return "NotAHomomorphism";
        case ErrorKind::SupportConditionViolated: return "SupportConditionViolated";
        case ErrorKind::EmptyLineTemplate: return "EmptyLineTemplate";
        case ErrorKind::FormatError: return "FormatError";
        }
        return "Unknown";
    }

    Error::Error(ErrorKind kind, const std::string & message) :
        std::runtime_error(std::string(error_kind_name(kind)) + ": " + message),
        _kind(kind)
    {
    }

    auto cell_count(const Shape & shape) -> std::uint64_t
    {
        std::uint64_t result = 1;
        for (int w : shape) {
            if (w < 1)
                throw Error(ErrorKind::ShapeMismatch, "widths must be positive, got " + tuple_to_string(shape));
            if (result > std::numeric_limits<std::uint64_t>::max() / std::uint64_t(w))
                throw Error(ErrorKind::ShapeMismatch, "shape " + tuple_to_string(shape) + " has too many cells to address");
            result *= std::uint64_t(w);
        }
        return result;
    }

    auto is_valid_index(const Shape & shape, const IndexTuple & index) -> bool
    {
        if (index.size() != shape.size())
            return false;
        for (std::size_t j = 0; j < shape.size(); ++j)
            if (index[j] < 1 || index[j] > shape[j])
                return false;
        return true;
    }

    auto is_cubical(const Shape & shape) -> bool
    {
        return std::all_of(shape.begin(), shape.end(), [&](int w) { return w == shape.front(); });
    }

    auto check_selector(int dims, const ModeSelector & sel) -> void
    {
        for (int m : sel)
            if (m < 1 || m > dims)
                throw Error(ErrorKind::InvalidSelector, "selector " + tuple_to_string(sel) + " is outside [" + std::to_string(dims) + "]");
    }

    auto select(const std::vector<int> & a, const ModeSelector & sel) -> std::vector<int>
    {
        std::vector<int> result;
        result.reserve(sel.size());
        for (int m : sel)
            result.push_back(a[m - 1]);
        return result;
    }

    auto identity_selector(int q) -> ModeSelector
    {
        ModeSelector result(q);
        for (int j = 0; j < q; ++j)
            result[j] = j + 1;
        return result;
    }

    auto distinct_count(const std::vector<int> & a) -> int
    {
        return int(std::set<int>(a.begin(), a.end()).size());
    }

    auto precedes(const std::vector<int> & s, const std::vector<int> & t) -> bool
    {
        for (std::size_t i = 0; i < s.size(); ++i)
            for (std::size_t j = i + 1; j < s.size(); ++j)
                if (s[i] == s[j] && t[i] != t[j])
                    return false;
        return true;
    }

    auto equivalent(const std::vector<int> & s, const std::vector<int> & t) -> bool
    {
        return precedes(s, t) && precedes(t, s);
    }

    auto increasing_tuples(int q, int p) -> std::vector<IndexTuple>
    {
        std::vector<IndexTuple> result;
        if (p < 0 || p > q)
            return result;
        IndexTuple current = identity_selector(p);
        while (true) {
            result.push_back(current);
            int j = p - 1;
            while (j >= 0 && current[j] == q - (p - 1 - j))
                --j;
            if (j < 0)
                break;
            ++current[j];
            for (int t = j + 1; t < p; ++t)
                current[t] = current[t - 1] + 1;
        }
        return result;
    }

    auto all_indices(const Shape & shape) -> std::vector<IndexTuple>
    {
        std::vector<IndexTuple> result;
        Layout layout(shape);
        result.reserve(layout.cells());
        for (std::uint64_t offset = 0; offset < layout.cells(); ++offset)
            result.push_back(layout.decode(offset));
        return result;
    }

    auto all_tuples(int n, int k) -> std::vector<IndexTuple>
    {
        return all_indices(Shape(k, n));
    }

    auto tuple_to_string(const std::vector<int> & a, char sep) -> std::string
    {
        std::string result;
        for (std::size_t j = 0; j < a.size(); ++j) {
            if (j > 0)
                result += sep;
            result += std::to_string(a[j]);
        }
        return result;
    }

    auto is_zero(const Integer & v) -> bool
    {
        return sgn(v) == 0;
    }

    auto is_zero(const Rational & v) -> bool
    {
        return sgn(v) == 0;
    }

    Layout::Layout(Shape shape) :
        _shape(std::move(shape)),
        _strides(_shape.size())
    {
        _cells = cell_count(_shape);
        std::uint64_t stride = 1;
        for (std::size_t j = _shape.size(); j-- > 0;) {
            _strides[j] = stride;
            stride *= std::uint64_t(_shape[j]);
        }
    }

    auto unit_tensor(const Shape & shape, const IndexTuple & index) -> IntTensor
    {
        if (! is_valid_index(shape, index))
            throw Error(ErrorKind::InvalidIndex, "index " + tuple_to_string(index) + " outside shape " + tuple_to_string(shape));
        Layout layout(shape);
        return IntTensor::from_sorted(shape, {{layout.offset(index), Integer(1)}});
    }

    auto materialize_projection_tensor(const Shape & shape, const ModeSelector & sel) -> IntTensor
    {
        check_selector(int(shape.size()), sel);
        Shape out = select(shape, sel);
        out.insert(out.end(), shape.begin(), shape.end());
        TensorBuilder<Integer> builder(out);
        for (auto & j : all_indices(shape)) {
            IndexTuple index = select(j, sel);
            index.insert(index.end(), j.begin(), j.end());
            builder.add(index, Integer(1));
        }
        return builder.build();
    }

    auto to_rational(const IntTensor & t) -> RatTensor
    {
        std::vector<RatTensor::Entry> entries;
        entries.reserve(t.nnz());
        for (auto & [offset, value] : t.entries())
            entries.emplace_back(offset, Rational(value));
        return RatTensor::from_sorted(t.shape(), std::move(entries));
    }
}
