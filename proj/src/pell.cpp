#include "pellabel/pell.hpp"

#include <stdexcept>
#include <utility>

#include "json.hpp"

namespace pellabel {

namespace {

void require_monic_even(const RatPoly& D, const char* who) {
    if (D.is_zero() || D.degree() % 2 != 0)
        throw std::invalid_argument(std::string(who) + ": degree of D must be even and positive");
    if (D.leading_coeff() != 1)
        throw std::invalid_argument(std::string(who) + ": D must be monic");
}

bool is_squarefree(const RatPoly& f) {
    return poly_gcd(f, f.derivative()).degree() == 0;
}

PellSolution make_solution(RatPoly P, RatPoly Q, RatPoly D, Primitivity flag) {
    PellSolution s{std::move(P), std::move(Q), std::move(D), 0, flag};
    s.n = s.P.degree();
    return s;
}

}  // namespace

std::string primitivity_str(Primitivity p) {
    switch (p) {
        case Primitivity::Primitive: return "primitive";
        case Primitivity::NonPrimitive: return "non-primitive";
        case Primitivity::UnknownOverC: return "unknown-over-C";
    }
    throw std::logic_error("primitivity_str: bad enum value");
}

RatPoly sqrt_poly_part(const RatPoly& D) {
    require_monic_even(D, "sqrt_poly_part");
    int h = D.degree() / 2;
    // Match coefficients of A^2 against D from the top down; the x^{h+k} term
    // of D - A^2 is killed by adding ((D - A^2)[h+k] / 2) x^k.
    RatPoly A = RatPoly::monomial(Rat(1), h);
    for (int k = h - 1; k >= 0; --k) {
        Rat r = (D - A * A).coeff(h + k);
        if (r != 0) A += RatPoly::monomial(r / 2, k);
    }
    return A;
}

std::optional<PellSolution> solve_pell(const RatPoly& D, int max_degree) {
    require_monic_even(D, "solve_pell");
    if (D.degree() < 2) throw std::invalid_argument("solve_pell: deg D must be >= 2");
    if (!is_squarefree(D)) throw std::invalid_argument("solve_pell: D must be squarefree");
    if (max_degree < 1) return std::nullopt;

    // Continued fraction of sqrt(D): alpha_i = (sqrt(D) + B_i)/C_i with
    // B_0 = 0, C_0 = 1. The polynomial part of alpha_i uses A in place of
    // sqrt(D). Convergents close the equation as soon as some C_{i+1} is a
    // nonzero constant.
    RatPoly A = sqrt_poly_part(D);
    RatPoly B;            // B_0
    RatPoly C(Rat(1));    // C_0
    RatPoly a = A;        // a_0
    RatPoly p_prev(Rat(1)), q_prev;
    RatPoly p = a, q(Rat(1));

    for (int iter = 0; iter <= 4 * max_degree + 64; ++iter) {
        B = a * C - B;
        auto [Cnext, rem] = RatPoly::divrem(D - B * B, C);
        if (!rem.is_zero() || Cnext.is_zero())
            throw std::logic_error("solve_pell: surd iteration lost exactness");
        C = Cnext;

        if (C.is_constant()) {
            RatPoly cpoly = p * p - D * q * q;
            if (!cpoly.is_constant() || cpoly.is_zero())
                throw std::logic_error("solve_pell: convergent at constant C is not constant");
            Rat c = cpoly.coeff(0);
            PellSolution s;
            if (c == 1) {
                s = make_solution(p, q, D, Primitivity::Primitive);
            } else if (std::optional<Rat> r = rat_sqrt(c)) {
                s = make_solution(p * (Rat(1) / *r), q * (Rat(1) / *r), D,
                                  Primitivity::Primitive);
            } else {
                // c is not a rational square: (p, q) only solves the equation
                // up to the constant, but its square rescales to 1.
                s = make_solution(p * p * (Rat(2) / c) - RatPoly(Rat(1)),
                                  p * q * (Rat(2) / c), D, Primitivity::UnknownOverC);
            }
            if (s.n > max_degree) return std::nullopt;
            if (!verify_solution(s)) throw std::logic_error("solve_pell: produced a non-solution");
            return s;
        }

        a = RatPoly::divrem(A + B, C).first;
        if (a.degree() < 1) throw std::logic_error("solve_pell: stalled partial quotient");
        RatPoly pn = a * p + p_prev;
        RatPoly qn = a * q + q_prev;
        p_prev = std::move(p);
        q_prev = std::move(q);
        p = std::move(pn);
        q = std::move(qn);
        // Degrees only grow from here on, so the bound is decisive already.
        if (p.degree() > max_degree) return std::nullopt;
    }
    return std::nullopt;
}

bool verify_solution(const PellSolution& s) {
    return s.P * s.P - s.D * s.Q * s.Q == RatPoly(Rat(1));
}

PellSolution pell_unit(const RatPoly& D) {
    return make_solution(RatPoly(Rat(1)), RatPoly(), D, Primitivity::NonPrimitive);
}

PellSolution pell_inverse(const PellSolution& s) {
    return make_solution(s.P, -s.Q, s.D, s.primitivity);
}

PellSolution compose_solutions(const PellSolution& a, const PellSolution& b) {
    if (!(a.D == b.D)) throw std::invalid_argument("compose_solutions: mismatched D");
    RatPoly P = a.P * b.P + a.D * a.Q * b.Q;
    RatPoly Q = a.P * b.Q + a.Q * b.P;

    Primitivity flag = Primitivity::NonPrimitive;
    int n = P.degree();
    if (a.n == 0) {
        flag = b.primitivity;
    } else if (b.n == 0) {
        flag = a.primitivity;
    } else if (n > 0) {
        // Every solution is a power of the lowest-degree one, so a factor
        // known to be lowest-degree pins the flag whenever degrees match.
        for (const PellSolution* f : {&a, &b})
            if (f->primitivity != Primitivity::NonPrimitive && n == f->n) flag = f->primitivity;
    }
    return make_solution(std::move(P), std::move(Q), a.D, flag);
}

PellSolution chebyshev_lift(const PellSolution& s, int m) {
    if (m < 1) throw std::invalid_argument("chebyshev_lift: m must be positive");
    if (!verify_solution(s)) throw std::invalid_argument("chebyshev_lift: input does not verify");
    PellSolution out = s;
    for (int i = 1; i < m; ++i) out = compose_solutions(out, s);
    if (!(out.P == chebyshev_T(m).compose(s.P)))
        throw std::logic_error("chebyshev_lift: power disagrees with T_m composition");
    if (m > 1) out.primitivity = Primitivity::NonPrimitive;
    return out;
}

DegreePartition degree_partition(const RatPoly& D, const RatPoly& P) {
    if (D.is_zero() || !is_squarefree(D))
        throw std::invalid_argument("degree_partition: D must be squarefree");
    const RatPoly one(Rat(1));
    if (!RatPoly::divrem(P * P - one, D).second.is_zero())
        throw std::invalid_argument("degree_partition: P^2 != 1 mod D");
    int minus = poly_gcd(D, P + one).degree();
    int plus = poly_gcd(D, P - one).degree();
    if (minus > plus) std::swap(minus, plus);
    if (minus + plus != D.degree())
        throw std::logic_error("degree_partition: root counts do not add up");
    return {minus, plus};
}

std::optional<Instance> generate_instance(const RatPoly& P) {
    if (P.degree() < 1) throw std::invalid_argument("generate_instance: deg P must be >= 1");
    RatPoly f = P * P - RatPoly(Rat(1));
    RatPoly D = squarefree_part(f);
    if (D.degree() % 2 != 0) return std::nullopt;  // one point at infinity
    auto [quot, rem] = RatPoly::divrem(f, D);
    if (!rem.is_zero()) throw std::logic_error("generate_instance: squarefree part does not divide");
    std::optional<RatPoly> Q = sqrt_exact(quot);
    if (!Q) return std::nullopt;
    int g = D.degree() / 2 - 1;
    return Instance{std::move(D), std::move(*Q), g, P.degree()};
}

std::string instance_json(const RatPoly& P, const Instance& inst) {
    DegreePartition part = degree_partition(inst.D, P);
    nlohmann::ordered_json j;
    j["D"] = coeff_strings(inst.D);
    j["P"] = coeff_strings(P);
    j["Q"] = coeff_strings(inst.Q);
    j["n"] = inst.n;
    j["partition"] = {part.minus, part.plus};
    return j.dump();
}

InstanceRecord parse_instance_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("parse_instance_json: ") + e.what());
    }
    InstanceRecord rec;
    try {
        rec.D = poly_from_coeff_strings(j.at("D").get<std::vector<std::string>>());
        rec.P = poly_from_coeff_strings(j.at("P").get<std::vector<std::string>>());
        rec.Q = poly_from_coeff_strings(j.at("Q").get<std::vector<std::string>>());
        rec.n = j.at("n").get<int>();
        auto part = j.at("partition").get<std::vector<int>>();
        if (part.size() != 2) throw std::invalid_argument("partition must have two entries");
        rec.partition = {part[0], part[1]};
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("parse_instance_json: ") + e.what());
    }
    return rec;
}

}  // namespace pellabel
