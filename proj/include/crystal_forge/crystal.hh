#pragma once

#include <crystal_forge/tensor.hh>

#include <optional>
#include <utility>

namespace crystal_forge
{
    struct CrystalReport
    {
        bool is_crystal = false;
        int k = 0;
        std::optional<IntTensor> shadow;
        std::optional<std::pair<IndexTuple, IndexTuple>> failing_pair;
    };

    // Compares every increasing k-projection of a cubical tensor against the
    // projection onto (1, ..., k).
    auto is_crystal(const IntTensor & c, int k) -> CrystalReport;

    auto shadow(const IntTensor & c, int k) -> IntTensor;

    // A k-crystal of dimension q whose k-shadow is s, where s is a cubical
    // (k-1)-crystal of dimension k.
    auto crystalise(const IntTensor & s, int q) -> IntTensor;

    // Signed indicator of the box corners between a and b: +1 at a, and the
    // sign flips with every coordinate taken from b.
    auto quartz(int width, const IndexTuple & a, const IndexTuple & b) -> IntTensor;

    auto pad(const IntTensor & c, int layers) -> IntTensor;

    // A hollow affine (k-1)-crystal of dimension k and width (k^2+k)/2.
    auto mine_hollow_crystal(int k) -> IntTensor;

    // An affine k-crystal of dimension q and width (k^2+k)/2 with hollow k-shadow.
    auto mine_hollow_shadowed_crystal(int k, int q) -> IntTensor;

    auto hollow_crystal_width(int k) -> int;
}
