#pragma once

#include <banditcsp/model.hpp>

#include <cstdint>

namespace banditcsp {

/// Random CSP with positive tables. tightness is the probability that a
/// tuple is forbidden; a table that comes out empty is re-rolled.
struct RandomSpec
{
    std::size_t variables = 0;
    std::size_t domain_size = 0;
    std::size_t arity = 0;
    std::size_t constraints = 0;
    double tightness = 0.0;
    std::uint64_t seed = 0;
};

auto gen_random_csp(const RandomSpec & spec) -> Instance;

/// Permutation of 0..n-1 whose adjacent absolute differences are pairwise distinct.
auto gen_all_interval(std::size_t n) -> Instance;

/// Golomb ruler with `marks` marks and length at most `length`, using
/// auxiliary difference variables.
auto gen_golomb(std::size_t marks, int length) -> Instance;

/// Langford pairing L(k, n); only k = 2 is supported.
auto gen_langford(std::size_t k, std::size_t n) -> Instance;

/// splitmix64 finaliser.
auto mix64(std::uint64_t x) -> std::uint64_t;

} // namespace banditcsp
