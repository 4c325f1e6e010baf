#include "pellabel/ratpoly.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace pellabel {

std::optional<Rat> rat_sqrt(const Rat& r) {
    if (r < 0) return std::nullopt;
    if (r == 0) return Rat(0);
    mpz_class num = r.get_num(), den = r.get_den();
    if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t()))
        return std::nullopt;
    mpz_class sn, sd;
    mpz_sqrt(sn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(sd.get_mpz_t(), den.get_mpz_t());
    Rat root(sn, sd);
    root.canonicalize();
    return root;
}

Rat rat_mod(const Rat& r, const Rat& m) {
    if (m <= 0) throw std::invalid_argument("rat_mod: modulus must be positive");
    Rat q = r / m;
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return r - Rat(fl) * m;
}

RatPoly::RatPoly(const Rat& c) {
    if (c != 0) c_.push_back(c);
}

RatPoly RatPoly::from_coeffs(std::vector<Rat> coeffs) {
    RatPoly p;
    p.c_ = std::move(coeffs);
    p.trim();
    return p;
}

RatPoly RatPoly::monomial(const Rat& c, int deg) {
    RatPoly p;
    if (c != 0) {
        p.c_.assign(deg + 1, Rat(0));
        p.c_[deg] = c;
    }
    return p;
}

RatPoly RatPoly::variable() { return monomial(Rat(1), 1); }

const Rat& RatPoly::coeff(int i) const {
    static const Rat zero(0);
    if (i < 0 || i >= static_cast<int>(c_.size())) return zero;
    return c_[i];
}

const Rat& RatPoly::leading_coeff() const {
    if (c_.empty()) throw std::invalid_argument("leading_coeff of zero polynomial");
    return c_.back();
}

void RatPoly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

RatPoly RatPoly::operator-() const {
    RatPoly p = *this;
    for (Rat& x : p.c_) x = -x;
    return p;
}

RatPoly& RatPoly::operator+=(const RatPoly& o) {
    if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), Rat(0));
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
}

RatPoly& RatPoly::operator-=(const RatPoly& o) {
    if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), Rat(0));
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
}

RatPoly& RatPoly::operator*=(const RatPoly& o) {
    if (c_.empty() || o.c_.empty()) {
        c_.clear();
        return *this;
    }
    std::vector<Rat> out(c_.size() + o.c_.size() - 1, Rat(0));
    for (size_t i = 0; i < c_.size(); ++i)
        for (size_t j = 0; j < o.c_.size(); ++j) out[i + j] += c_[i] * o.c_[j];
    c_ = std::move(out);
    trim();
    return *this;
}

RatPoly& RatPoly::operator*=(const Rat& s) {
    if (s == 0) {
        c_.clear();
        return *this;
    }
    for (Rat& x : c_) x *= s;
    return *this;
}

std::pair<RatPoly, RatPoly> RatPoly::divrem(const RatPoly& num, const RatPoly& div) {
    if (div.is_zero()) throw std::invalid_argument("divrem: division by zero polynomial");
    RatPoly q, r = num;
    int dd = div.degree();
    const Rat& lead = div.c_.back();
    while (!r.is_zero() && r.degree() >= dd) {
        int k = r.degree() - dd;
        Rat f = r.c_.back() / lead;
        if (q.c_.size() < static_cast<size_t>(k + 1)) q.c_.resize(k + 1, Rat(0));
        q.c_[k] = f;
        for (int i = 0; i <= dd; ++i) r.c_[k + i] -= f * div.c_[i];
        r.trim();
    }
    q.trim();
    return {q, r};
}

RatPoly RatPoly::derivative() const {
    if (c_.size() <= 1) return RatPoly();
    std::vector<Rat> out(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i) out[i - 1] = c_[i] * Rat(static_cast<long>(i));
    return from_coeffs(std::move(out));
}

RatPoly RatPoly::compose(const RatPoly& inner) const {
    RatPoly acc;
    for (size_t i = c_.size(); i-- > 0;) {
        acc *= inner;
        acc += RatPoly(c_[i]);
    }
    return acc;
}

RatPoly RatPoly::monic() const {
    if (is_zero()) throw std::invalid_argument("monic of zero polynomial");
    RatPoly p = *this;
    Rat inv = Rat(1) / c_.back();
    for (Rat& x : p.c_) x *= inv;
    return p;
}

Rat RatPoly::eval(const Rat& x) const {
    Rat acc(0);
    for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
    return acc;
}

std::complex<double> RatPoly::eval(std::complex<double> x) const {
    std::complex<double> acc(0.0, 0.0);
    for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i].get_d();
    return acc;
}

std::string RatPoly::str() const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (size_t i = c_.size(); i-- > 0;) {
        const Rat& c = c_[i];
        if (c == 0) continue;
        Rat a = abs(c);
        if (first) {
            if (c < 0) os << "-";
            first = false;
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        bool unit = (a == 1) && i > 0;
        if (!unit) os << a.get_str();
        if (i > 0) {
            os << "x";
            if (i > 1) os << "^" << i;
        }
    }
    return os.str();
}

RatPoly poly_gcd(const RatPoly& a, const RatPoly& b) {
    RatPoly f = a, g = b;
    while (!g.is_zero()) {
        RatPoly r = RatPoly::divrem(f, g).second;
        if (!r.is_zero()) r = r.monic();
        f = g;
        g = r;
    }
    if (f.is_zero()) return f;
    return f.monic();
}

RatPoly squarefree_part(const RatPoly& f) {
    if (f.is_zero()) throw std::invalid_argument("squarefree_part of zero polynomial");
    if (f.is_constant()) return RatPoly(Rat(1));
    RatPoly g = poly_gcd(f, f.derivative());
    return RatPoly::divrem(f, g).first.monic();
}

RatPoly chebyshev_T(int n) {
    if (n < 0) throw std::invalid_argument("chebyshev_T: negative index");
    RatPoly prev(Rat(1));
    if (n == 0) return prev;
    RatPoly cur = RatPoly::variable();
    RatPoly twox = RatPoly::monomial(Rat(2), 1);
    for (int i = 1; i < n; ++i) {
        RatPoly next = twox * cur - prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

std::optional<RatPoly> sqrt_exact(const RatPoly& f) {
    if (f.is_zero()) return RatPoly();
    int d = f.degree();
    if (d % 2 != 0) return std::nullopt;
    auto lead = rat_sqrt(f.leading_coeff());
    if (!lead) return std::nullopt;
    // Match coefficients from the top down: r has degree d/2.
    int h = d / 2;
    std::vector<Rat> r(h + 1, Rat(0));
    r[h] = *lead;
    for (int k = h - 1; k >= 0; --k) {
        // Coefficient of x^(h+k) in r^2 must equal f's.
        Rat s(0);
        for (int i = k + 1, j = h + k - i; i < j; ++i, --j) s += Rat(2) * r[i] * r[j];
        if (((h + k) & 1) == 0) {
            int m = (h + k) / 2;
            if (m > k) s += r[m] * r[m];
        }
        r[k] = (f.coeff(h + k) - s) / (Rat(2) * r[h]);
    }
    RatPoly root = RatPoly::from_coeffs(std::move(r));
    if (root * root == f) return root;
    return std::nullopt;
}

namespace {

struct Parser {
    const std::string& s;
    size_t pos = 0;

    explicit Parser(const std::string& text) : s(text) {}

    void skip_ws() {
        while (pos < s.size()) {
            if (std::isspace(static_cast<unsigned char>(s[pos]))) {
                ++pos;
            } else if (s.compare(pos, 3, "\xe2\x88\x92") == 0) {
                break;  // unicode minus, handled by peek_minus
            } else {
                break;
            }
        }
    }

    bool eat(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    bool eat_minus() {
        skip_ws();
        if (pos < s.size() && s[pos] == '-') {
            ++pos;
            return true;
        }
        if (s.compare(pos, 3, "\xe2\x88\x92") == 0) {
            pos += 3;
            return true;
        }
        return false;
    }

    bool at_end() {
        skip_ws();
        return pos >= s.size();
    }

    [[noreturn]] void fail(const std::string& what) {
        throw std::invalid_argument("parse error at position " + std::to_string(pos) + ": " + what);
    }

    RatPoly parse_expr() {
        RatPoly acc;
        bool neg = false;
        if (eat_minus())
            neg = true;
        else
            eat('+');
        acc = parse_term();
        if (neg) acc = -acc;
        for (;;) {
            skip_ws();
            if (eat('+')) {
                acc += parse_term();
            } else if (eat_minus()) {
                acc -= parse_term();
            } else {
                break;
            }
        }
        return acc;
    }

    RatPoly parse_term() {
        RatPoly acc = parse_power();
        for (;;) {
            skip_ws();
            if (eat('*')) {
                acc *= parse_power();
                continue;
            }
            if (eat('/')) {
                RatPoly d = parse_power();
                if (!d.is_constant() || d.is_zero()) fail("divisor must be a nonzero constant");
                acc *= Rat(1) / d.coeff(0);
                continue;
            }
            // Implicit multiplication: a factor starts right after.
            if (pos < s.size()) {
                char c = s[pos];
                if (c == 'x' || c == '(' || std::isdigit(static_cast<unsigned char>(c))) {
                    acc *= parse_power();
                    continue;
                }
            }
            break;
        }
        return acc;
    }

    RatPoly parse_power() {
        RatPoly base = parse_atom();
        skip_ws();
        if (eat('^')) {
            skip_ws();
            size_t start = pos;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            if (pos == start) fail("expected exponent");
            int e = std::stoi(s.substr(start, pos - start));
            RatPoly acc(Rat(1));
            for (int i = 0; i < e; ++i) acc *= base;
            return acc;
        }
        return base;
    }

    RatPoly parse_atom() {
        skip_ws();
        if (pos >= s.size()) fail("unexpected end of input");
        char c = s[pos];
        if (c == '(') {
            ++pos;
            RatPoly inner = parse_expr();
            if (!eat(')')) fail("expected ')'");
            return inner;
        }
        if (c == 'x') {
            ++pos;
            return RatPoly::variable();
        }
        if (eat_minus()) return -parse_atom();
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = pos;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            std::string num = s.substr(start, pos - start);
            skip_ws();
            if (pos < s.size() && s[pos] == '/') {
                // a/b is a single rational literal only when b is a bare integer.
                size_t save = pos;
                ++pos;
                skip_ws();
                size_t ds = pos;
                while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
                if (pos > ds) {
                    std::string den = s.substr(ds, pos - ds);
                    return RatPoly(rat_from_string(num + "/" + den));
                }
                pos = save;
            }
            return RatPoly(rat_from_string(num));
        }
        fail(std::string("unexpected character '") + c + "'");
    }
};

}  // namespace

RatPoly parse_poly(const std::string& text) {
    Parser p(text);
    RatPoly out = p.parse_expr();
    if (!p.at_end()) p.fail("trailing input");
    return out;
}

std::vector<std::string> coeff_strings(const RatPoly& f) {
    if (f.is_zero()) return {"0"};
    std::vector<std::string> out;
    out.reserve(static_cast<size_t>(f.degree()) + 1);
    for (int i = 0; i <= f.degree(); ++i) out.push_back(rat_str(f.coeff(i)));
    return out;
}

RatPoly poly_from_coeff_strings(const std::vector<std::string>& coeffs) {
    std::vector<Rat> c;
    c.reserve(coeffs.size());
    for (const std::string& s : coeffs) c.push_back(rat_from_string(s));
    return RatPoly::from_coeffs(std::move(c));
}

}  // namespace pellabel
