#pragma once

#include <string>
#include <vector>

#include "pellabel/pell.hpp"

namespace pellabel {

// Number of connected components of the space of equations D of genus g
// admitting a primitive solution of degree n. Zero when no such solution
// exists (n <= g for positive genus, or n != 1 for genus zero).
int count_components(int g, int n);

// The admissible degree partitions (a, 2g+2-a) for genus g and degree n:
// both parts <= n, both parts congruent to n mod 2, smaller part first,
// listed with the smaller part increasing. Components are in bijection
// with these pairs when g >= 1.
std::vector<DegreePartition> degree_partitions(int g, int n);

// Divisors of N in increasing order. Trial division; N is desk-scale.
std::vector<long> divisors(long N);

// Number of components of the deformation space of g-extremal polynomials
// of degree N (polynomials whose critical values away from {-1,1} have
// total multiplicity g). Requires N >= g+1.
long count_extremal(int g, long N);

// Number of components of the Hurwitz space of degree N polynomial
// coverings with passport [2^A 1^(N-2A); 2^B 1^(N-2B); g x 2 1^(N-2)].
// Requires 2 <= A, B <= N/2 and the planarity condition A+B+g = N-1.
long count_hurwitz(long N, long A, long B, int g);

// Number of components of the hyperelliptic locus of the stratum of
// primitive k-differentials with a single zero (order 2k(g-1)), g >= 2.
// k = 1 with even g >= 4 falls outside the case split and is rejected.
int count_kdiff(int g, int k);

// For genus 2 and odd k >= 5 the two components of the stratum are
// distinguished by spin parity; the correspondence with degree partitions
// is constant in k.
struct Genus2ParityMap {
    DegreePartition odd_parity;   // (1,5)
    DegreePartition even_parity;  // (3,3)
};
Genus2ParityMap genus2_parity_map(int k);

std::string partition_str(const DegreePartition& p);

// Component table over 0 <= g <= g_max, 1 <= n <= n_max, one row per
// (g, n) with the count and the partition list. Byte-deterministic.
std::string counts_table_csv(int g_max, int n_max);
std::string counts_table_text(int g_max, int n_max);

}  // namespace pellabel
