#pragma once

// Brute-force reference implementations used as test oracles. They walk the
// definitions directly and share no evaluation code with the library.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "simprod/logic.hpp"
#include "simprod/structure.hpp"

namespace oracle {

using simprod::Element;
using simprod::FiniteStructure;
using simprod::Formula;
using simprod::Tuple;

using Env = std::map<std::string, Element>;

/// Tarski satisfaction by recursion on the syntax tree.
bool holds(const FiniteStructure& s, const Formula& f, Env env);

/// All tuples over vars satisfying f, lexicographic.
std::vector<Tuple> satisfying(const FiniteStructure& s, const Formula& f, const std::vector<std::string>& vars);

/// Every tuple of length `arity` over {0..n-1}, lexicographic.
std::vector<Tuple> all_tuples(std::size_t n, std::size_t arity);

/// Isomorphism by trying every permutation. Sizes up to 8.
bool isomorphic(const FiniteStructure& a, const FiniteStructure& b);

/// VC dimension by testing every subset of the object space (at most 20 points).
std::size_t vc_dim(const FiniteStructure& s, const Formula& f, const std::vector<std::string>& objects,
                   const std::vector<std::string>& params, const std::vector<Tuple>& object_space,
                   const std::vector<Tuple>& param_space);

/// Indiscernibility of single-element sequences for formulas with slots
/// x1..xn (one variable each) and one parameter p ranging over params (or
/// no parameter when params is empty).
bool indiscernible(const FiniteStructure& s, const std::vector<Element>& seq, const Formula& f,
                   const std::vector<std::string>& slots, const std::optional<std::string>& param,
                   const std::vector<Element>& params);

}  // namespace oracle
