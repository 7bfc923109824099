#pragma once

#include <crystal_forge/tensor.hh>

#include <array>
#include <map>
#include <optional>
#include <string>

namespace crystal_forge
{
    // A family {S_i} indexed by the strictly increasing p-tuples i over [q],
    // where S_i has shape widths_i.
    struct ShadowSystem
    {
        int p = 1;
        Shape widths;
        std::map<IndexTuple, IntTensor> shadows;

        auto q() const -> int { return int(widths.size()); }

        // The stored shadow for an increasing tuple, or the projection of a
        // stored shadow for any other injective tuple.
        auto shadow(const IndexTuple & axes) const -> IntTensor;
    };

    // Throws ShapeMismatch unless every increasing tuple carries a shadow of
    // the projected shape.
    auto check_well_formed(const ShadowSystem & sys) -> void;

    struct Violation
    {
        IndexTuple i, j, r, s;
    };

    struct RealismReport
    {
        bool realistic = true;
        std::optional<Violation> violation;
    };

    auto check_realistic(const ShadowSystem & sys) -> RealismReport;
    auto is_realistic(const ShadowSystem & sys) -> bool;

    // Builds C with project(C, i) = S_i for every increasing i. Throws
    // NotRealistic with the first violated quadruple otherwise.
    auto realise(const ShadowSystem & sys) -> IntTensor;

    auto verify_realisation(const IntTensor & c, const ShadowSystem & sys) -> bool;

    // The increasing p-projections of c.
    auto shadows_of(const IntTensor & c, int p) -> ShadowSystem;

    // S_i = s for every increasing i over [q], with s cubical of dimension p.
    auto constant_system(const IntTensor & s, int q) -> ShadowSystem;

    auto shadow_system_to_json(const ShadowSystem & sys) -> std::string;
    auto shadow_system_from_json(const std::string & text) -> ShadowSystem;
}
