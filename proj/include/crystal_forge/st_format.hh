#pragma once

#include <crystal_forge/tensor.hh>

#include <string>
#include <string_view>

namespace crystal_forge
{
    // Text format:
    //   st 1
    //   dims <q>
    //   widths <n1> ... <nq>
    //   entries <m>
    //   <i1> ... <iq> <value>      (m lines, lexicographic, nonzero)
    auto to_st(const IntTensor & t) -> std::string;
    auto parse_st(std::string_view text) -> IntTensor;

    auto read_st_file(const std::string & path) -> IntTensor;
    auto write_st_file(const std::string & path, const IntTensor & t) -> void;

    // Accepts either an inline payload (starting with "st ") or a file path.
    auto load_st_payload(const std::string & payload_or_path) -> IntTensor;

    auto read_text_file(const std::string & path) -> std::string;
    auto write_text_file(const std::string & path, const std::string & text) -> void;
}
