#include <banditcsp/generators.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

namespace banditcsp {

auto mix64(std::uint64_t x) -> std::uint64_t
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

namespace {
    // generated instances must not depend on the standard library's <random> distributions
    class SplitMix
    {
    public:
        explicit SplitMix(std::uint64_t seed) :
            _state(seed)
        {
        }

        auto next() -> std::uint64_t
        {
            _state += 0x9e3779b97f4a7c15ULL;
            return mix64(_state - 0x9e3779b97f4a7c15ULL);
        }

        auto below(std::uint64_t bound) -> std::uint64_t
        {
            std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
            std::uint64_t r;
            do
                r = next();
            while (r >= limit);
            return r % bound;
        }

        auto unit() -> double { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    private:
        std::uint64_t _state;
    };

    auto binomial(std::size_t n, std::size_t k) -> double
    {
        double r = 1.0;
        for (std::size_t i = 1; i <= k; ++i)
            r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
        return r;
    }

    auto all_combinations(std::size_t n, std::size_t r) -> std::vector<std::vector<VariableId>>
    {
        std::vector<std::vector<VariableId>> out;
        std::vector<std::uint32_t> idx(r);
        for (std::size_t i = 0; i < r; ++i)
            idx[i] = static_cast<std::uint32_t>(i);
        for (;;) {
            std::vector<VariableId> scope;
            for (auto i : idx)
                scope.push_back(VariableId{i});
            out.push_back(std::move(scope));

            std::size_t p = r;
            while (p > 0 && idx[p - 1] == n - r + p - 1)
                --p;
            if (p == 0)
                break;
            ++idx[p - 1];
            for (std::size_t q = p; q < r; ++q)
                idx[q] = idx[q - 1] + 1;
        }
        return out;
    }
} // namespace

auto gen_random_csp(const RandomSpec & spec) -> Instance
{
    const auto n = spec.variables, d = spec.domain_size, r = spec.arity, e = spec.constraints;
    if (n == 0 || d == 0)
        throw StructuralError("random CSP needs at least one variable and one value");
    if (r == 0 || r > n)
        throw StructuralError("random CSP arity must lie in [1, n]");
    if (! (spec.tightness >= 0.0 && spec.tightness <= 1.0))
        throw StructuralError("tightness must lie in [0, 1]");
    const double scopes_available = binomial(n, r);
    if (static_cast<double>(e) > scopes_available)
        throw StructuralError("more constraints than distinct scopes");
    const double tuples_per_table = std::pow(static_cast<double>(d), static_cast<double>(r));
    if (tuples_per_table > 1e7)
        throw StructuralError("table size d^r too large");

    SplitMix rng(mix64(spec.seed));
    Instance inst;
    char name[128];
    std::snprintf(name, sizeof name, "rand-n%zu-d%zu-r%zu-e%zu-t%.3f-s%llu", n, d, r, e, spec.tightness,
        static_cast<unsigned long long>(spec.seed));
    inst.name = name;
    for (std::size_t i = 0; i < n; ++i)
        inst.add_variable(0, static_cast<int>(d) - 1);

    std::vector<std::vector<VariableId>> scopes;
    if (scopes_available <= 200000) {
        auto all = all_combinations(n, r);
        for (std::size_t i = 0; i < e; ++i) {
            auto j = i + rng.below(all.size() - i);
            std::swap(all[i], all[j]);
            scopes.push_back(all[i]);
        }
    }
    else {
        std::set<std::vector<VariableId>> seen;
        while (scopes.size() < e) {
            std::set<std::uint32_t> pick;
            while (pick.size() < r)
                pick.insert(static_cast<std::uint32_t>(rng.below(n)));
            std::vector<VariableId> scope;
            for (auto i : pick)
                scope.push_back(VariableId{i});
            if (seen.insert(scope).second)
                scopes.push_back(std::move(scope));
        }
    }

    const auto count = static_cast<std::size_t>(tuples_per_table);
    const double keep = 1.0 - spec.tightness;
    for (auto & scope : scopes) {
        std::vector<std::vector<int>> tuples;
        for (int attempt = 0; attempt < 32 && tuples.empty(); ++attempt)
            for (std::size_t t = 0; t < count; ++t)
                if (rng.unit() < keep) {
                    std::vector<int> tuple(r);
                    auto code = t;
                    for (std::size_t p = r; p > 0; --p) {
                        tuple[p - 1] = static_cast<int>(code % d);
                        code /= d;
                    }
                    tuples.push_back(std::move(tuple));
                }
        if (tuples.empty()) {
            std::vector<int> tuple(r);
            for (auto & v : tuple)
                v = static_cast<int>(rng.below(d));
            tuples.push_back(std::move(tuple));
        }
        inst.add_table(std::move(scope), std::move(tuples), true);
    }
    return inst;
}

auto gen_all_interval(std::size_t n) -> Instance
{
    if (n < 3)
        throw StructuralError("all-interval needs n >= 3");

    using namespace expr;
    Instance inst;
    inst.name = "allinterval-" + std::to_string(n);
    for (std::size_t i = 0; i < n; ++i)
        inst.add_variable(0, static_cast<int>(n) - 1);

    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = i + 1; j < n; ++j)
            inst.add_not_equal(VariableId{i}, VariableId{j});

    for (std::uint32_t i = 0; i + 1 < n; ++i)
        for (std::uint32_t j = i + 1; j + 1 < n; ++j)
            inst.add_intensional(ne(abs(sub(var(i + 1), var(i))), abs(sub(var(j + 1), var(j)))));
    return inst;
}

auto gen_golomb(std::size_t marks, int length) -> Instance
{
    if (marks < 3)
        throw StructuralError("golomb needs at least 3 marks");
    if (length < static_cast<int>(marks) - 1)
        throw StructuralError("golomb length must be at least marks - 1");

    using namespace expr;
    Instance inst;
    inst.name = "golomb-" + std::to_string(marks) + "-" + std::to_string(length);

    inst.add_variable(std::vector<int>{0});
    for (std::size_t i = 1; i < marks; ++i)
        inst.add_variable(static_cast<int>(i), length);

    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    std::vector<VariableId> diffs;
    for (std::uint32_t i = 0; i < marks; ++i)
        for (std::uint32_t j = i + 1; j < marks; ++j) {
            pairs.emplace_back(i, j);
            diffs.push_back(inst.add_variable(static_cast<int>(j - i), length));
        }

    for (std::uint32_t i = 0; i + 1 < marks; ++i)
        inst.add_intensional(lt(var(i), var(i + 1)));
    for (std::size_t p = 0; p < pairs.size(); ++p)
        inst.add_intensional(eq(var(diffs[p]), sub(var(pairs[p].second), var(pairs[p].first))));
    for (std::size_t p = 0; p < diffs.size(); ++p)
        for (std::size_t q = p + 1; q < diffs.size(); ++q)
            inst.add_not_equal(diffs[p], diffs[q]);
    return inst;
}

auto gen_langford(std::size_t k, std::size_t n) -> Instance
{
    if (k != 2)
        throw StructuralError("only Langford pairings (k = 2) are supported");
    if (n < 1)
        throw StructuralError("langford needs n >= 1");
    if (n == 1)
        throw StructuralError("langford n = 1 has no room for the pair");

    using namespace expr;
    Instance inst;
    inst.name = "langford-2-" + std::to_string(n);

    // x_i is the first position of number i + 1; the second is x_i + i + 2
    const int slots = 2 * static_cast<int>(n);
    for (std::size_t i = 0; i < n; ++i)
        inst.add_variable(0, slots - 1 - static_cast<int>(i + 2));

    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = i + 1; j < n; ++j) {
            auto first_i = var(i), second_i = add(var(i), constant(i + 2));
            auto first_j = var(j), second_j = add(var(j), constant(j + 2));
            inst.add_intensional(land(land(ne(first_i, first_j), ne(first_i, second_j)),
                land(ne(second_i, first_j), ne(second_i, second_j))));
        }
    return inst;
}

} // namespace banditcsp
