#pragma once

#include <vector>

namespace pellabel {

// Mod-2 braid action on period parity vectors of length 2g+1. Generator r
// (1-based, sign ignored: each generator is an involution mod 2) adds entry
// r to its neighbors r-1 and r+1 and keeps entry r.
std::vector<int> burau_action(const std::vector<int>& word, std::vector<int> v);

// Orbit invariant: v encodes consecutive differences of an indicator on
// 2g+2 boundary points; Q is the smaller class size, 0 for the zero vector.
int braid_invariant_Q(const std::vector<int>& v);

}  // namespace pellabel
