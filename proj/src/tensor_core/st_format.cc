#include <crystal_forge/st_format.hh>

#include <fstream>
#include <sstream>
#include <vector>

namespace crystal_forge
{
    namespace
    {
        auto split_lines(std::string_view text) -> std::vector<std::string_view>
        {
            std::vector<std::string_view> lines;
            std::size_t start = 0;
            while (start < text.size()) {
                std::size_t end = text.find('\n', start);
                if (end == std::string_view::npos) {
                    lines.push_back(text.substr(start));
                    break;
                }
                lines.push_back(text.substr(start, end - start));
                start = end + 1;
            }
            return lines;
        }

        auto split_tokens(std::string_view line) -> std::vector<std::string>
        {
            std::vector<std::string> tokens;
            std::istringstream in{std::string(line)};
            std::string token;
            while (in >> token)
                tokens.push_back(token);
            return tokens;
        }

        auto parse_int(const std::string & token, int line) -> int
        {
            std::size_t used = 0;
            long value = 0;
            try {
                value = std::stol(token, &used);
            }
            catch (const std::exception &) {
                used = 0;
            }
            if (used != token.size() || value < 0 || value > (1L << 30))
                throw Error(ErrorKind::FormatError, "line " + std::to_string(line) + ": bad integer '" + token + "'");
            return int(value);
        }

        auto expect_keyword(const std::vector<std::string> & tokens, const char * keyword, int line) -> void
        {
            if (tokens.empty() || tokens[0] != keyword)
                throw Error(ErrorKind::FormatError, "line " + std::to_string(line) + ": expected '" + keyword + "'");
        }
    }

    auto to_st(const IntTensor & t) -> std::string
    {
        std::string out = "st 1\ndims " + std::to_string(t.dims()) + "\nwidths";
        for (int w : t.shape())
            out += " " + std::to_string(w);
        out += "\nentries " + std::to_string(t.nnz()) + "\n";
        t.for_each([&](const IndexTuple & index, const Integer & value) {
            for (int c : index)
                out += std::to_string(c) + " ";
            out += value.get_str() + "\n";
        });
        return out;
    }

    auto parse_st(std::string_view text) -> IntTensor
    {
        auto lines = split_lines(text);
        if (lines.size() < 4)
            throw Error(ErrorKind::FormatError, "truncated tensor header");

        auto magic = split_tokens(lines[0]);
        if (magic.size() != 2 || magic[0] != "st" || magic[1] != "1")
            throw Error(ErrorKind::FormatError, "line 1: expected 'st 1'");

        auto dims_line = split_tokens(lines[1]);
        expect_keyword(dims_line, "dims", 2);
        if (dims_line.size() != 2)
            throw Error(ErrorKind::FormatError, "line 2: expected 'dims <q>'");
        int dims = parse_int(dims_line[1], 2);

        auto widths_line = split_tokens(lines[2]);
        expect_keyword(widths_line, "widths", 3);
        if (int(widths_line.size()) != dims + 1)
            throw Error(ErrorKind::FormatError, "line 3: expected " + std::to_string(dims) + " widths");
        Shape shape;
        for (int j = 0; j < dims; ++j) {
            shape.push_back(parse_int(widths_line[j + 1], 3));
            if (shape.back() < 1)
                throw Error(ErrorKind::FormatError, "line 3: widths must be positive");
        }

        auto entries_line = split_tokens(lines[3]);
        expect_keyword(entries_line, "entries", 4);
        if (entries_line.size() != 2)
            throw Error(ErrorKind::FormatError, "line 4: expected 'entries <m>'");
        int count = parse_int(entries_line[1], 4);

        std::size_t expected = 4 + std::size_t(count);
        for (std::size_t extra = expected; extra < lines.size(); ++extra)
            if (! split_tokens(lines[extra]).empty())
                throw Error(ErrorKind::FormatError, "unexpected content after " + std::to_string(count) + " entries");
        if (lines.size() < expected)
            throw Error(ErrorKind::FormatError, "expected " + std::to_string(count) + " entry lines");

        Layout layout(shape);
        std::vector<IntTensor::Entry> entries;
        entries.reserve(count);
        for (int e = 0; e < count; ++e) {
            int line_no = 5 + e;
            auto tokens = split_tokens(lines[4 + e]);
            if (int(tokens.size()) != dims + 1)
                throw Error(ErrorKind::FormatError, "line " + std::to_string(line_no) + ": expected " + std::to_string(dims) + " coordinates and a value");
            IndexTuple index;
            for (int j = 0; j < dims; ++j)
                index.push_back(parse_int(tokens[j], line_no));
            if (! is_valid_index(shape, index))
                throw Error(ErrorKind::FormatError, "line " + std::to_string(line_no) + ": index out of range");
            Integer value;
            if (value.set_str(tokens[dims], 10) != 0)
                throw Error(ErrorKind::FormatError, "line " + std::to_string(line_no) + ": bad value '" + tokens[dims] + "'");
            if (sgn(value) == 0)
                throw Error(ErrorKind::FormatError, "line " + std::to_string(line_no) + ": zero values are not stored");
            std::uint64_t offset = layout.offset(index);
            if (! entries.empty() && entries.back().first >= offset)
                throw Error(ErrorKind::FormatError, "line " + std::to_string(line_no) + ": entries must be strictly lexicographic");
            entries.emplace_back(offset, std::move(value));
        }
        return IntTensor::from_sorted(shape, std::move(entries));
    }

    auto read_text_file(const std::string & path) -> std::string
    {
        std::ifstream in(path, std::ios::binary);
        if (! in)
            throw Error(ErrorKind::FormatError, "cannot read " + path);
        std::ostringstream buffer;
        buffer << in.rdbuf();
        return buffer.str();
    }

    auto write_text_file(const std::string & path, const std::string & text) -> void
    {
        std::ofstream out(path, std::ios::binary);
        if (! out)
            throw Error(ErrorKind::FormatError, "cannot write " + path);
        out << text;
    }

    auto read_st_file(const std::string & path) -> IntTensor
    {
        return parse_st(read_text_file(path));
    }

    auto write_st_file(const std::string & path, const IntTensor & t) -> void
    {
        write_text_file(path, to_st(t));
    }

    auto load_st_payload(const std::string & payload_or_path) -> IntTensor
    {
        if (payload_or_path.rfind("st ", 0) == 0)
            return parse_st(payload_or_path);
        return read_st_file(payload_or_path);
    }
}
