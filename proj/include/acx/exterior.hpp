#pragma once

#include "acx/scalar.hpp"

#include <bit>
#include <map>
#include <vector>

namespace acx {

// A monomial is a bitmask over coframe slots; bit s stands for the s-th 1-form.
using Mask = unsigned;

// Linear combination of monomials over one fixed coframe.
using MonoForm = std::map<Mask, Scalar>;

inline int mask_degree(Mask m) { return std::popcount(m); }

// Sign of a∧b reordered into ascending slots, or 0 when they share a slot.
int wedge_sign(Mask a, Mask b);

MonoForm wedge(const MonoForm& a, const MonoForm& b);
void accumulate(MonoForm& into, const MonoForm& f, const Scalar& scale = Scalar(1));
MonoForm scale(const MonoForm& f, const Scalar& s);
bool is_zero(const MonoForm& f);

// Applies the odd derivation fixed by its values on the generating 1-forms.
MonoForm apply_derivation(const std::vector<MonoForm>& on_generators, Mask monomial);
MonoForm apply_derivation(const std::vector<MonoForm>& on_generators, const MonoForm& f);

// Subsets of {0..size-1} of the given cardinality as masks, in lexicographic order of sorted elements.
std::vector<Mask> subsets(unsigned size, unsigned count);

} // namespace acx
