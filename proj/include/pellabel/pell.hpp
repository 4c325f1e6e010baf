#pragma once

#include <optional>
#include <string>

#include "pellabel/ratpoly.hpp"

namespace pellabel {

// "UnknownOverC" marks solutions produced by the doubling trick: smallest
// known rational solution, but a complex-coefficient solution of half the
// degree exists, so primitivity over the larger field is left open.
enum class Primitivity { Primitive, NonPrimitive, UnknownOverC };

std::string primitivity_str(Primitivity p);

// Solution of P^2 - D*Q^2 = 1 over Q[x].
// Invariants: the equation holds exactly and deg P = deg Q + (deg D)/2.
struct PellSolution {
  RatPoly P;
  RatPoly Q;
  RatPoly D;
  int n = 0;  // deg P; 0 only for the trivial unit (1, 0)
  Primitivity primitivity = Primitivity::NonPrimitive;
};

// The unique monic A with deg A = (deg D)/2 and deg(D - A^2) < (deg D)/2.
// D must be monic of even degree.
RatPoly sqrt_poly_part(const RatPoly& D);

// Lowest-degree nontrivial rational solution with deg P <= max_degree, or
// nullopt if none exists within the bound. D must be monic, squarefree, of
// even degree >= 2.
std::optional<PellSolution> solve_pell(const RatPoly& D, int max_degree);

// True iff P^2 - D*Q^2 = 1 exactly.
bool verify_solution(const PellSolution& s);

PellSolution pell_unit(const RatPoly& D);
PellSolution pell_inverse(const PellSolution& s);

// Group law (P1 P2 + D Q1 Q2, P1 Q2 + Q1 P2). Factors must share D.
PellSolution compose_solutions(const PellSolution& a, const PellSolution& b);

// m-th power of s in the solution group; the resulting P equals T_m(P) and
// the degree is m*n. s must verify and m must be positive.
PellSolution chebyshev_lift(const PellSolution& s, int m);

struct DegreePartition {
  int minus = 0;
  int plus = 0;
  bool operator==(const DegreePartition&) const = default;
};

// Counts of roots of D where P takes value -1 resp. +1, stored with
// minus <= plus. Requires D squarefree and P^2 = 1 mod D.
DegreePartition degree_partition(const RatPoly& D, const RatPoly& P);

struct Instance {
  RatPoly D;
  RatPoly Q;
  int g = 0;
  int n = 0;
};

// Instance certified by P: D = squarefree part of P^2 - 1 and Q its cofactor
// square root. Returns nullopt when deg D is odd (one point at infinity) or
// when (P^2 - 1)/D is not a polynomial square.
std::optional<Instance> generate_instance(const RatPoly& P);

struct InstanceRecord {
  RatPoly D;
  RatPoly P;
  RatPoly Q;
  int n = 0;
  DegreePartition partition;
};

// One-line JSON: {"D": [...], "P": [...], "Q": [...], "n": int,
// "partition": [minus, plus]} with coefficient arrays indexed by degree.
std::string instance_json(const RatPoly& P, const Instance& inst);
InstanceRecord parse_instance_json(const std::string& text);

}  // namespace pellabel
