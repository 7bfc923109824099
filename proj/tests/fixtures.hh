#pragma once

#include <crystal_forge/tensor.hh>

namespace fixtures
{
    using crystal_forge::IntTensor;
    using crystal_forge::IndexTuple;
    using crystal_forge::Integer;

    // The 3x3 hollow affine 1-crystal used as the running example.
    inline auto paper_u() -> IntTensor
    {
        return IntTensor::from_entries({3, 3}, {{{1, 3}, 1}, {{2, 1}, 1}, {{2, 3}, -1}});
    }

    // Displayed as three 3x3 blocks separated by bars. Mode convention: the
    // block indexes the last mode, rows index mode 1, columns index mode 2.
    inline auto paper_v() -> IntTensor
    {
        const int display[3][9] = {
            {-1, 0, 1, 0, 0, 0, 1, 0, 0},
            {2, 0, -1, 0, 0, 0, -1, 0, 0},
            {-1, 1, 0, 0, 0, 0, 1, -1, 0},
        };
        std::vector<std::pair<IndexTuple, Integer>> entries;
        for (int row = 0; row < 3; ++row)
            for (int col = 0; col < 9; ++col)
                if (display[row][col] != 0)
                    entries.push_back({{row + 1, col % 3 + 1, col / 3 + 1}, Integer(display[row][col])});
        return IntTensor::from_entries({3, 3, 3}, entries);
    }
}
