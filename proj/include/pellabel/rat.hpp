#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

namespace pellabel {

using Rat = mpq_class;

// mpq_class(n, d) does not canonicalize; this does.
inline Rat rat(long num, long den = 1) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline Rat rat_from_string(const std::string& s) {
    Rat r(s);
    r.canonicalize();
    return r;
}

inline std::string rat_str(const Rat& r) { return r.get_str(); }

inline bool is_integer(const Rat& r) { return r.get_den() == 1; }

// Exact square root when r is a square of a rational, nullopt otherwise.
std::optional<Rat> rat_sqrt(const Rat& r);

// Representative of r mod m in [0, m) for m > 0.
Rat rat_mod(const Rat& r, const Rat& m);

}  // namespace pellabel
