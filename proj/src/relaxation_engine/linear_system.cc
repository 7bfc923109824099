#include <crystal_forge/linear_system.hh>

#include <json.hpp>

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace crystal_forge
{
    auto var_key_string(const VarKey & key) -> std::string
    {
        return std::string(key.kind == VarKey::Kind::Lambda ? "l:" : "m:") + tuple_to_string(key.x) + ":" + tuple_to_string(key.a);
    }

    auto LinearSystem::add_variable(VarKey key) -> int
    {
        _variables.push_back(std::move(key));
        _forced_zero.push_back(0);
        return int(_variables.size()) - 1;
    }

    auto LinearSystem::force_zero(int var) -> void
    {
        _forced_zero.at(var) = 1;
    }

    auto LinearSystem::add_equation(std::vector<Term> terms, const Integer & rhs) -> bool
    {
        std::sort(terms.begin(), terms.end(), [](const Term & a, const Term & b) { return a.var < b.var; });
        std::vector<Term> merged;
        for (auto & t : terms) {
            if (t.var < 0 || t.var >= variable_count())
                throw std::out_of_range("equation references an undeclared variable");
            if (_forced_zero[t.var])
                continue;
            if (! merged.empty() && merged.back().var == t.var)
                merged.back().coeff += t.coeff;
            else
                merged.push_back(std::move(t));
            if (sgn(merged.back().coeff) == 0)
                merged.pop_back();
        }

        Integer value = rhs;
        if (merged.empty()) {
            if (sgn(value) == 0)
                return false;
            _contradiction = true;
        }
        else if (sgn(merged.front().coeff) < 0) {
            for (auto & t : merged)
                t.coeff = -t.coeff;
            value = -value;
        }

        std::string key;
        for (auto & t : merged)
            key += std::to_string(t.var) + "*" + t.coeff.get_str() + " ";
        key += "= " + value.get_str();
        if (! _seen.insert(std::move(key)).second)
            return false;
        _equations.push_back(Equation{std::move(merged), value});
        return true;
    }

    namespace
    {
        template <typename Value>
        auto satisfies_impl(const LinearSystem & sys, const std::vector<Value> & values) -> bool
        {
            if (int(values.size()) != sys.variable_count())
                return false;
            for (int v = 0; v < sys.variable_count(); ++v)
                if (sys.forced_zero()[v] && sgn(values[v]) != 0)
                    return false;
            for (auto & eq : sys.equations()) {
                Value lhs = 0;
                for (auto & t : eq.terms)
                    lhs += t.coeff * values[t.var];
                if (lhs != eq.rhs)
                    return false;
            }
            return true;
        }

        template <typename Value>
        auto solution_to_json_impl(const LinearSystem & sys, const std::vector<Value> & values) -> std::string
        {
            nlohmann::ordered_json doc = nlohmann::ordered_json::object();
            for (int v = 0; v < sys.variable_count(); ++v)
                doc[var_key_string(sys.variables()[v])] = values[v].get_str();
            return doc.dump(2) + "\n";
        }
    }

    auto satisfies(const LinearSystem & sys, const std::vector<Rational> & values) -> bool
    {
        for (auto & v : values)
            if (sgn(v) < 0)
                return false;
        return satisfies_impl(sys, values);
    }

    auto satisfies(const LinearSystem & sys, const std::vector<Integer> & values) -> bool
    {
        return satisfies_impl(sys, values);
    }

    auto solution_to_json(const LinearSystem & sys, const std::vector<Rational> & values) -> std::string
    {
        return solution_to_json_impl(sys, values);
    }

    auto solution_to_json(const LinearSystem & sys, const std::vector<Integer> & values) -> std::string
    {
        return solution_to_json_impl(sys, values);
    }

    RationalEchelon::RationalEchelon(int variables) :
        _pivot_row(variables, -1)
    {
    }

    auto RationalEchelon::reduce(std::vector<std::pair<int, Rational>> terms, Rational rhs) const -> Row
    {
        std::map<int, Rational> work;
        for (auto & [v, c] : terms)
            work[v] += c;
        for (auto it = work.begin(); it != work.end();) {
            if (sgn(it->second) == 0) {
                it = work.erase(it);
                continue;
            }
            int row = _pivot_row[it->first];
            if (row < 0) {
                ++it;
                continue;
            }
            Rational factor = it->second;
            for (auto & [v, c] : _rows[row].terms)
                work[v] -= factor * c;
            rhs -= factor * _rows[row].rhs;
            it = work.erase(it);
        }
        Row result;
        for (auto & [v, c] : work)
            if (sgn(c) != 0)
                result.terms.emplace_back(v, c);
        result.rhs = rhs;
        return result;
    }

    auto RationalEchelon::insert(const Equation & eq) -> bool
    {
        std::vector<std::pair<int, Rational>> terms;
        for (auto & t : eq.terms)
            terms.emplace_back(t.var, Rational(t.coeff));
        Row row = reduce(std::move(terms), Rational(eq.rhs));
        if (row.terms.empty()) {
            if (sgn(row.rhs) != 0)
                _inconsistent = true;
            return false;
        }
        Rational lead = row.terms.front().second;
        for (auto & [v, c] : row.terms)
            c /= lead;
        row.rhs /= lead;
        _pivot_row[row.terms.front().first] = int(_rows.size());
        _rows.push_back(std::move(row));
        return true;
    }

    auto RationalEchelon::in_span(const Equation & eq) const -> bool
    {
        std::vector<std::pair<int, Rational>> terms;
        for (auto & t : eq.terms)
            terms.emplace_back(t.var, Rational(t.coeff));
        Row row = reduce(std::move(terms), Rational(eq.rhs));
        return row.terms.empty() && sgn(row.rhs) == 0;
    }

    namespace
    {
        struct WorkRow
        {
            std::vector<std::pair<int, Integer>> terms;
            Rational rhs;
        };

        // Result of merging variables tied by two-term equations, fixing
        // variables pinned by single-term equations and (for nonnegative
        // systems) zeroing every variable of a sign-definite row with zero
        // right-hand side. Surviving variables are renumbered into classes.
        struct Presolved
        {
            bool infeasible = false;
            std::vector<int> cls;
            std::vector<Rational> fixed;
            int classes = 0;
            std::vector<WorkRow> rows;
        };

        class Presolver
        {
        private:
            bool _nonnegative, _integral;
            std::vector<int> _parent;
            std::vector<char> _fixed;
            std::vector<Rational> _value;
            std::vector<WorkRow> _rows;
            bool _infeasible = false;

            auto find(int v) -> int
            {
                while (_parent[v] != v) {
                    _parent[v] = _parent[_parent[v]];
                    v = _parent[v];
                }
                return v;
            }

            auto fix(int v, const Rational & value) -> void
            {
                if (_nonnegative && sgn(value) < 0)
                    _infeasible = true;
                _fixed[v] = 1;
                _value[v] = value;
            }

            // Rewrites a row in terms of representatives, folds fixed values
            // into the right-hand side and divides out the coefficient gcd.
            auto normalise(WorkRow & row) -> bool
            {
                std::map<int, Integer> merged;
                for (auto & [v, c] : row.terms) {
                    int r = find(v);
                    if (_fixed[r])
                        row.rhs -= c * _value[r];
                    else
                        merged[r] += c;
                }
                row.terms.clear();
                for (auto & [v, c] : merged)
                    if (sgn(c) != 0)
                        row.terms.emplace_back(v, c);

                if (row.terms.empty())
                    return true;
                Integer g = 0;
                for (auto & [v, c] : row.terms)
                    g = gcd(g, c);
                if (sgn(row.terms.front().second) < 0)
                    g = -g;
                if (g != 1) {
                    for (auto & [v, c] : row.terms)
                        c /= g;
                    row.rhs /= g;
                }
                if (_integral && row.rhs.get_den() != 1)
                    return false;
                return true;
            }

        public:
            Presolver(const LinearSystem & sys, const std::vector<char> & extra_zero, bool nonnegative, bool integral) :
                _nonnegative(nonnegative),
                _integral(integral),
                _parent(sys.variable_count()),
                _fixed(sys.variable_count(), 0),
                _value(sys.variable_count())
            {
                std::iota(_parent.begin(), _parent.end(), 0);
                for (int v = 0; v < sys.variable_count(); ++v)
                    if (sys.forced_zero()[v] || (v < int(extra_zero.size()) && extra_zero[v]))
                        fix(v, Rational(0));
                for (auto & eq : sys.equations()) {
                    WorkRow row;
                    for (auto & t : eq.terms)
                        row.terms.emplace_back(t.var, t.coeff);
                    row.rhs = eq.rhs;
                    _rows.push_back(std::move(row));
                }
            }

            auto run() -> Presolved
            {
                bool changed = true;
                while (changed && ! _infeasible) {
                    changed = false;
                    std::vector<WorkRow> kept;
                    std::set<std::string> seen;
                    for (auto & row : _rows) {
                        if (! normalise(row)) {
                            _infeasible = true;
                            break;
                        }
                        if (row.terms.empty()) {
                            if (sgn(row.rhs) != 0) {
                                _infeasible = true;
                                break;
                            }
                            continue;
                        }
                        // Earlier fixes in this pass may have touched this row.
                        bool stale = std::any_of(row.terms.begin(), row.terms.end(), [&](const auto & t) { return _fixed[t.first] || find(t.first) != t.first; });
                        if (stale) {
                            kept.push_back(std::move(row));
                            continue;
                        }

                        std::string key;
                        for (auto & [v, c] : row.terms)
                            key += std::to_string(v) + "*" + c.get_str() + " ";
                        key += row.rhs.get_str();
                        if (! seen.insert(key).second)
                            continue;

                        if (row.terms.size() == 1) {
                            fix(row.terms[0].first, row.rhs / row.terms[0].second);
                            changed = true;
                            continue;
                        }
                        if (row.terms.size() == 2 && sgn(row.rhs) == 0 && row.terms[0].second == -row.terms[1].second) {
                            _parent[row.terms[1].first] = row.terms[0].first;
                            changed = true;
                            continue;
                        }
                        if (_nonnegative) {
                            bool same_sign = std::all_of(row.terms.begin(), row.terms.end(), [&](const auto & t) { return sgn(t.second) == sgn(row.terms[0].second); });
                            if (same_sign) {
                                int direction = sgn(row.rhs) * sgn(row.terms[0].second);
                                if (direction < 0) {
                                    _infeasible = true;
                                    break;
                                }
                                if (direction == 0) {
                                    for (auto & t : row.terms)
                                        fix(t.first, Rational(0));
                                    changed = true;
                                    continue;
                                }
                            }
                        }
                        kept.push_back(std::move(row));
                    }
                    _rows = std::move(kept);
                }

                Presolved result;
                result.infeasible = _infeasible;
                if (_infeasible)
                    return result;

                int n = int(_parent.size());
                std::vector<int> class_of_root(n, -1);
                result.cls.assign(n, -1);
                result.fixed.assign(n, Rational(0));
                for (int v = 0; v < n; ++v) {
                    int r = find(v);
                    if (_fixed[r]) {
                        result.fixed[v] = _value[r];
                        continue;
                    }
                    if (class_of_root[r] < 0)
                        class_of_root[r] = result.classes++;
                    result.cls[v] = class_of_root[r];
                }
                for (auto & row : _rows) {
                    normalise(row);
                    WorkRow out;
                    for (auto & [v, c] : row.terms)
                        out.terms.emplace_back(class_of_root[v], c);
                    std::sort(out.terms.begin(), out.terms.end(), [](const auto & a, const auto & b) { return a.first < b.first; });
                    out.rhs = row.rhs;
                    if (! out.terms.empty())
                        result.rows.push_back(std::move(out));
                    else if (sgn(row.rhs) != 0)
                        result.infeasible = true;
                }
                return result;
            }
        };

        // Dense tableau simplex over the rationals with Bland's rule.
        class Simplex
        {
        private:
            int _n;
            std::vector<std::vector<Rational>> _a;
            std::vector<Rational> _b;
            std::vector<int> _basis;
            int _columns;

            auto pivot(int r, int c) -> void
            {
                Rational lead = _a[r][c];
                std::vector<int> nonzero;
                for (int j = 0; j < _columns; ++j)
                    if (sgn(_a[r][j]) != 0) {
                        _a[r][j] /= lead;
                        nonzero.push_back(j);
                    }
                _b[r] /= lead;
                for (int i = 0; i < int(_a.size()); ++i) {
                    if (i == r || sgn(_a[i][c]) == 0)
                        continue;
                    Rational factor = _a[i][c];
                    for (int j : nonzero)
                        _a[i][j] -= factor * _a[r][j];
                    _b[i] -= factor * _b[r];
                }
                _basis[r] = c;
            }

        public:
            enum class Status
            {
                Optimal,
                Unbounded,
                Stopped
            };

            Simplex(int n, const std::vector<std::pair<std::vector<std::pair<int, Rational>>, Rational>> & rows) :
                _n(n)
            {
                int m = int(rows.size());
                _columns = n + m;
                _a.assign(m, std::vector<Rational>(_columns));
                _b.resize(m);
                _basis.resize(m);
                for (int r = 0; r < m; ++r) {
                    int sign = sgn(rows[r].second) < 0 ? -1 : 1;
                    for (auto & [v, c] : rows[r].first)
                        _a[r][v] = sign * c;
                    _b[r] = sign * rows[r].second;
                    _a[r][n + r] = 1;
                    _basis[r] = n + r;
                }
            }

            // Minimises cost . x over the first `columns` columns.
            auto optimise(const std::vector<Rational> & cost, int columns, const std::function<bool()> & stop) -> Status
            {
                int m = int(_a.size());
                std::vector<char> basic(_columns, 0);
                while (true) {
                    std::fill(basic.begin(), basic.end(), 0);
                    for (int r = 0; r < m; ++r)
                        basic[_basis[r]] = 1;

                    int entering = -1;
                    for (int j = 0; j < columns && entering < 0; ++j) {
                        if (basic[j])
                            continue;
                        Rational reduced = cost[j];
                        for (int r = 0; r < m; ++r)
                            if (sgn(cost[_basis[r]]) != 0 && sgn(_a[r][j]) != 0)
                                reduced -= cost[_basis[r]] * _a[r][j];
                        if (sgn(reduced) < 0)
                            entering = j;
                    }
                    if (entering < 0)
                        return Status::Optimal;

                    int leaving = -1;
                    Rational best;
                    for (int r = 0; r < m; ++r) {
                        if (sgn(_a[r][entering]) <= 0)
                            continue;
                        Rational ratio = _b[r] / _a[r][entering];
                        if (leaving < 0 || ratio < best || (ratio == best && _basis[r] < _basis[leaving])) {
                            leaving = r;
                            best = ratio;
                        }
                    }
                    if (leaving < 0)
                        return Status::Unbounded;
                    pivot(leaving, entering);
                    if (stop())
                        return Status::Stopped;
                }
            }

            // Phase one; on success every artificial is out of the basis or
            // its redundant row has been removed.
            auto phase_one() -> bool
            {
                int m = int(_a.size());
                std::vector<Rational> cost(_columns, Rational(0));
                for (int j = _n; j < _columns; ++j)
                    cost[j] = 1;
                optimise(cost, _columns, [] { return false; });
                for (int r = 0; r < m; ++r)
                    if (_basis[r] >= _n && sgn(_b[r]) != 0)
                        return false;

                for (int r = 0; r < int(_a.size());) {
                    if (_basis[r] < _n) {
                        ++r;
                        continue;
                    }
                    int column = -1;
                    for (int j = 0; j < _n && column < 0; ++j)
                        if (sgn(_a[r][j]) != 0)
                            column = j;
                    if (column >= 0) {
                        pivot(r, column);
                        ++r;
                    }
                    else {
                        _a.erase(_a.begin() + r);
                        _b.erase(_b.begin() + r);
                        _basis.erase(_basis.begin() + r);
                    }
                }
                return true;
            }

            auto value(int var) const -> Rational
            {
                for (std::size_t r = 0; r < _basis.size(); ++r)
                    if (_basis[r] == var)
                        return _b[r];
                return Rational(0);
            }

            auto mark_positive(std::vector<char> & positive) const -> void
            {
                for (std::size_t r = 0; r < _basis.size(); ++r)
                    if (_basis[r] < _n && sgn(_b[r]) > 0)
                        positive[_basis[r]] = 1;
            }

            auto columns() const -> int { return _columns; }
        };

        struct LpModel
        {
            Presolved pre;
            std::optional<Simplex> simplex;
        };

        // Presolve, drop dependent rows, run phase one. Empty simplex means
        // infeasible.
        auto build_lp(const LinearSystem & sys) -> LpModel
        {
            LpModel model{Presolver(sys, {}, true, false).run(), std::nullopt};
            if (model.pre.infeasible || sys.has_contradiction())
                return model;

            RationalEchelon echelon(model.pre.classes);
            std::vector<std::pair<std::vector<std::pair<int, Rational>>, Rational>> rows;
            for (auto & row : model.pre.rows) {
                Equation scaled;
                // Clear the rational right-hand side so the echelon sees integers.
                Integer den = row.rhs.get_den();
                for (auto & [v, c] : row.terms)
                    scaled.terms.push_back(Term{v, c * den});
                scaled.rhs = row.rhs.get_num();
                if (! echelon.insert(scaled)) {
                    if (echelon.inconsistent())
                        return model;
                    continue;
                }
                std::vector<std::pair<int, Rational>> terms;
                for (auto & [v, c] : row.terms)
                    terms.emplace_back(v, Rational(c));
                rows.emplace_back(std::move(terms), row.rhs);
            }

            Simplex simplex(model.pre.classes, rows);
            if (simplex.phase_one())
                model.simplex.emplace(std::move(simplex));
            return model;
        }
    }

    auto lp_feasible(const LinearSystem & sys) -> std::optional<RationalSolution>
    {
        auto model = build_lp(sys);
        if (! model.simplex)
            return std::nullopt;

        RationalSolution solution;
        solution.values.resize(sys.variable_count());
        for (int v = 0; v < sys.variable_count(); ++v)
            solution.values[v] = model.pre.cls[v] < 0 ? model.pre.fixed[v] : model.simplex->value(model.pre.cls[v]);
        if (! satisfies(sys, solution.values))
            throw std::logic_error("simplex produced a point that does not satisfy the system");
        return solution;
    }

    auto relative_interior_support(const LinearSystem & sys) -> std::vector<char>
    {
        auto model = build_lp(sys);
        if (! model.simplex)
            throw Error(ErrorKind::Infeasible, "the system has no nonnegative solution");

        Simplex & simplex = *model.simplex;
        int n = model.pre.classes;
        std::vector<char> positive(n, 0);
        simplex.mark_positive(positive);
        for (int target = 0; target < n; ++target) {
            if (positive[target])
                continue;
            std::vector<Rational> cost(simplex.columns(), Rational(0));
            cost[target] = -1;
            auto status = simplex.optimise(cost, n, [&] {
                simplex.mark_positive(positive);
                return bool(positive[target]);
            });
            if (status == Simplex::Status::Unbounded)
                positive[target] = 1;
        }

        std::vector<char> result(sys.variable_count(), 0);
        for (int v = 0; v < sys.variable_count(); ++v)
            result[v] = model.pre.cls[v] < 0 ? sgn(model.pre.fixed[v]) > 0 : positive[model.pre.cls[v]];
        return result;
    }

    namespace
    {
        // Integer feasibility for rows over `classes` variables. Unit-coefficient
        // variables are eliminated by unimodular substitution first; the rest
        // goes through a Smith normal form.
        class IntegerSolver
        {
        private:
            using Row = std::map<int, Integer>;

            int _n;
            std::vector<Row> _rows;
            std::vector<Integer> _rhs;
            std::vector<char> _active;
            std::vector<std::set<int>> _occurs;

            struct Substitution
            {
                int var;
                Row row;
                Integer rhs;
            };
            std::vector<Substitution> _stack;

            auto set_coeff(int r, int v, const Integer & c) -> void
            {
                if (sgn(c) == 0) {
                    _rows[r].erase(v);
                    _occurs[v].erase(r);
                }
                else {
                    _rows[r][v] = c;
                    _occurs[v].insert(r);
                }
            }

            auto deactivate(int r) -> void
            {
                _active[r] = 0;
                for (auto & [v, c] : _rows[r])
                    _occurs[v].erase(r);
            }

            // False when some row reads 0 = c or fails its gcd test.
            auto tidy() -> bool
            {
                for (std::size_t r = 0; r < _rows.size(); ++r) {
                    if (! _active[r])
                        continue;
                    if (_rows[r].empty()) {
                        if (sgn(_rhs[r]) != 0)
                            return false;
                        _active[r] = 0;
                        continue;
                    }
                    Integer g = 0;
                    for (auto & [v, c] : _rows[r])
                        g = gcd(g, c);
                    if (g != 1) {
                        if (! mpz_divisible_p(_rhs[r].get_mpz_t(), g.get_mpz_t()))
                            return false;
                        for (auto & [v, c] : _rows[r])
                            c /= g;
                        _rhs[r] /= g;
                    }
                }
                return true;
            }

            auto eliminate_units() -> bool
            {
                while (true) {
                    if (! tidy())
                        return false;
                    int best_row = -1, best_var = -1;
                    std::size_t best_score = 0;
                    for (std::size_t r = 0; r < _rows.size(); ++r) {
                        if (! _active[r])
                            continue;
                        for (auto & [v, c] : _rows[r]) {
                            if (abs(c) != 1)
                                continue;
                            std::size_t score = (_rows[r].size() - 1) * (_occurs[v].size() - 1);
                            if (best_row < 0 || score < best_score) {
                                best_row = int(r);
                                best_var = v;
                                best_score = score;
                            }
                        }
                    }
                    if (best_row < 0)
                        return true;

                    Row pivot_row = _rows[best_row];
                    Integer pivot_rhs = _rhs[best_row];
                    Integer unit = pivot_row.at(best_var);
                    deactivate(best_row);
                    std::vector<int> targets(_occurs[best_var].begin(), _occurs[best_var].end());
                    for (int r : targets) {
                        Integer factor = _rows[r].at(best_var) * unit;
                        for (auto & [v, c] : pivot_row)
                            set_coeff(r, v, (_rows[r].count(v) ? _rows[r].at(v) : Integer(0)) - factor * c);
                        _rhs[r] -= factor * pivot_rhs;
                    }
                    _stack.push_back(Substitution{best_var, std::move(pivot_row), std::move(pivot_rhs)});
                }
            }

            // Smith normal form U M V = D with pivots of minimal absolute value.
            // Returns the solution of the residual block, or nothing.
            auto smith_solve(std::vector<Integer> & values) -> bool
            {
                std::vector<int> rows, vars;
                std::set<int> var_set;
                for (std::size_t r = 0; r < _rows.size(); ++r)
                    if (_active[r]) {
                        rows.push_back(int(r));
                        for (auto & [v, c] : _rows[r])
                            var_set.insert(v);
                    }
                if (rows.empty())
                    return true;
                vars.assign(var_set.begin(), var_set.end());
                std::map<int, int> column_of;
                for (std::size_t j = 0; j < vars.size(); ++j)
                    column_of[vars[j]] = int(j);

                int m = int(rows.size()), n = int(vars.size());
                std::vector<std::vector<Integer>> a(m, std::vector<Integer>(n));
                std::vector<Integer> b(m);
                for (int i = 0; i < m; ++i) {
                    for (auto & [v, c] : _rows[rows[i]])
                        a[i][column_of[v]] = c;
                    b[i] = _rhs[rows[i]];
                }
                std::vector<std::vector<Integer>> transform(n, std::vector<Integer>(n));
                for (int j = 0; j < n; ++j)
                    transform[j][j] = 1;

                auto swap_columns = [&](int x, int y) {
                    for (int i = 0; i < m; ++i)
                        std::swap(a[i][x], a[i][y]);
                    for (int i = 0; i < n; ++i)
                        std::swap(transform[i][x], transform[i][y]);
                };
                auto smallest = [&](int t, bool whole) {
                    int bi = -1, bj = -1;
                    for (int i = t; i < m; ++i)
                        for (int j = t; j < n; ++j) {
                            if (! whole && i != t && j != t)
                                continue;
                            if (sgn(a[i][j]) != 0 && (bi < 0 || abs(a[i][j]) < abs(a[bi][bj]))) {
                                bi = i;
                                bj = j;
                            }
                        }
                    return std::make_pair(bi, bj);
                };

                int rank = 0;
                for (int t = 0; t < std::min(m, n); ++t) {
                    auto [pi, pj] = smallest(t, true);
                    if (pi < 0)
                        break;
                    while (true) {
                        std::swap(a[t], a[pi]);
                        std::swap(b[t], b[pi]);
                        swap_columns(t, pj);

                        bool clear = true;
                        for (int i = t + 1; i < m; ++i) {
                            if (sgn(a[i][t]) == 0)
                                continue;
                            Integer quotient;
                            mpz_fdiv_q(quotient.get_mpz_t(), a[i][t].get_mpz_t(), a[t][t].get_mpz_t());
                            for (int j = t; j < n; ++j)
                                a[i][j] -= quotient * a[t][j];
                            b[i] -= quotient * b[t];
                            clear = clear && sgn(a[i][t]) == 0;
                        }
                        for (int j = t + 1; j < n; ++j) {
                            if (sgn(a[t][j]) == 0)
                                continue;
                            Integer quotient;
                            mpz_fdiv_q(quotient.get_mpz_t(), a[t][j].get_mpz_t(), a[t][t].get_mpz_t());
                            for (int i = t; i < m; ++i)
                                a[i][j] -= quotient * a[i][t];
                            for (int i = 0; i < n; ++i)
                                transform[i][j] -= quotient * transform[i][t];
                            clear = clear && sgn(a[t][j]) == 0;
                        }
                        if (! clear) {
                            std::tie(pi, pj) = smallest(t, false);
                            continue;
                        }

                        // Divisibility: fold in a row whose entries d_t fails to divide.
                        int offender = -1;
                        for (int i = t + 1; i < m && offender < 0; ++i)
                            for (int j = t + 1; j < n; ++j)
                                if (! mpz_divisible_p(a[i][j].get_mpz_t(), a[t][t].get_mpz_t())) {
                                    offender = i;
                                    break;
                                }
                        if (offender < 0)
                            break;
                        for (int j = t; j < n; ++j)
                            a[t][j] += a[offender][j];
                        b[t] += b[offender];
                        pi = t;
                        pj = t;
                    }
                    rank = t + 1;
                }

                std::vector<Integer> y(n);
                for (int i = 0; i < m; ++i) {
                    if (i < rank) {
                        if (! mpz_divisible_p(b[i].get_mpz_t(), a[i][i].get_mpz_t()))
                            return false;
                        y[i] = b[i] / a[i][i];
                    }
                    else if (sgn(b[i]) != 0)
                        return false;
                }
                for (int j = 0; j < n; ++j) {
                    Integer x = 0;
                    for (int t = 0; t < rank; ++t)
                        x += transform[j][t] * y[t];
                    values[vars[j]] = x;
                }
                return true;
            }

        public:
            IntegerSolver(int classes, const std::vector<WorkRow> & rows) :
                _n(classes),
                _occurs(classes)
            {
                for (auto & row : rows) {
                    int r = int(_rows.size());
                    _rows.emplace_back();
                    for (auto & [v, c] : row.terms)
                        set_coeff(r, v, c);
                    _rhs.push_back(row.rhs.get_num());
                    _active.push_back(1);
                }
            }

            auto solve() -> std::optional<std::vector<Integer>>
            {
                if (! eliminate_units())
                    return std::nullopt;
                std::vector<Integer> values(_n);
                if (! smith_solve(values))
                    return std::nullopt;
                for (auto it = _stack.rbegin(); it != _stack.rend(); ++it) {
                    Integer rest = it->rhs;
                    for (auto & [v, c] : it->row)
                        if (v != it->var)
                            rest -= c * values[v];
                    values[it->var] = rest * it->row.at(it->var);
                }
                return values;
            }
        };
    }

    auto diophantine_feasible(const LinearSystem & sys, const std::vector<char> & forced_zero) -> std::optional<IntegerSolution>
    {
        if (sys.has_contradiction())
            return std::nullopt;
        Presolved pre = Presolver(sys, forced_zero, false, true).run();
        if (pre.infeasible)
            return std::nullopt;
        auto values = IntegerSolver(pre.classes, pre.rows).solve();
        if (! values)
            return std::nullopt;

        IntegerSolution solution;
        solution.values.resize(sys.variable_count());
        for (int v = 0; v < sys.variable_count(); ++v)
            solution.values[v] = pre.cls[v] < 0 ? Integer(pre.fixed[v].get_num()) : (*values)[pre.cls[v]];
        if (! satisfies(sys, solution.values))
            throw std::logic_error("integer solver produced a point that does not satisfy the system");
        for (int v = 0; v < int(forced_zero.size()) && v < sys.variable_count(); ++v)
            if (forced_zero[v] && sgn(solution.values[v]) != 0)
                throw std::logic_error("integer solver ignored a forced zero");
        return solution;
    }
}
