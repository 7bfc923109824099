#pragma once

#include <crystal_forge/tensor.hh>

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

namespace crystal_forge
{
    struct VarKey
    {
        enum class Kind
        {
            Lambda,
            Mu
        };

        Kind kind = Kind::Lambda;
        // Lambda: x in V(X)^k, a in V(A)^k. Mu: an edge of X, an edge of A.
        std::vector<int> x;
        std::vector<int> a;

        auto operator<=>(const VarKey &) const = default;
    };

    // "l:<x>:<a>" or "m:<edge>:<edge>", tuples comma-joined.
    auto var_key_string(const VarKey & key) -> std::string;

    struct Term
    {
        int var;
        Integer coeff;
    };

    // Terms are sorted by variable, coefficients nonzero.
    struct Equation
    {
        std::vector<Term> terms;
        Integer rhs;
    };

    class LinearSystem
    {
    private:
        std::vector<VarKey> _variables;
        std::vector<char> _forced_zero;
        std::vector<Equation> _equations;
        std::unordered_set<std::string> _seen;
        bool _contradiction = false;

    public:
        auto add_variable(VarKey key) -> int;

        // Pins a variable to zero; it is dropped from every equation added
        // afterwards.
        auto force_zero(int var) -> void;

        // Normalises, drops forced-zero terms, skips 0 = 0 and duplicates.
        // Returns true when a new equation was stored.
        auto add_equation(std::vector<Term> terms, const Integer & rhs) -> bool;

        auto variables() const -> const std::vector<VarKey> & { return _variables; }
        auto variable_count() const -> int { return int(_variables.size()); }
        auto forced_zero() const -> const std::vector<char> & { return _forced_zero; }
        auto equations() const -> const std::vector<Equation> & { return _equations; }

        // An equation reduced to 0 = c with c nonzero was added.
        auto has_contradiction() const -> bool { return _contradiction; }
    };

    struct RationalSolution
    {
        std::vector<Rational> values;
    };

    struct IntegerSolution
    {
        std::vector<Integer> values;
    };

    auto satisfies(const LinearSystem & sys, const std::vector<Rational> & values) -> bool;
    auto satisfies(const LinearSystem & sys, const std::vector<Integer> & values) -> bool;

    auto solution_to_json(const LinearSystem & sys, const std::vector<Rational> & values) -> std::string;
    auto solution_to_json(const LinearSystem & sys, const std::vector<Integer> & values) -> std::string;

    // Nonnegative rational solution, or nothing when phase one ends with a
    // positive optimum (or presolve finds a contradiction).
    auto lp_feasible(const LinearSystem & sys) -> std::optional<RationalSolution>;

    // Integer solution with the masked variables (in addition to the system's
    // own forced zeros) pinned to zero.
    auto diophantine_feasible(const LinearSystem & sys, const std::vector<char> & forced_zero = {}) -> std::optional<IntegerSolution>;

    // Mask of variables that are positive at some nonnegative solution.
    auto relative_interior_support(const LinearSystem & sys) -> std::vector<char>;

    // Incremental row echelon form over the rationals.
    class RationalEchelon
    {
    private:
        struct Row
        {
            std::vector<std::pair<int, Rational>> terms;
            Rational rhs;
        };

        std::vector<Row> _rows;
        std::vector<int> _pivot_row;
        bool _inconsistent = false;

        auto reduce(std::vector<std::pair<int, Rational>> terms, Rational rhs) const -> Row;

    public:
        explicit RationalEchelon(int variables);

        // Returns true when the row is independent of the stored rows.
        auto insert(const Equation & eq) -> bool;
        auto in_span(const Equation & eq) const -> bool;
        auto rank() const -> int { return int(_rows.size()); }
        auto inconsistent() const -> bool { return _inconsistent; }
    };
}
