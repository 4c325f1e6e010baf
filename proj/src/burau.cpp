#include "pellabel/burau.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace pellabel {

namespace {

void check_binary(const std::vector<int>& v) {
    if (v.empty()) throw std::invalid_argument("burau: empty vector");
    for (int x : v)
        if (x != 0 && x != 1) throw std::invalid_argument("burau: vector entries must be 0 or 1");
}

}  // namespace

std::vector<int> burau_action(const std::vector<int>& word, std::vector<int> v) {
    check_binary(v);
    int len = static_cast<int>(v.size());
    for (int generator : word) {
        int r = std::abs(generator);
        if (r < 1 || r > len)
            throw std::invalid_argument("burau_action: generator index out of range");
        if (r >= 2) v[r - 2] ^= v[r - 1];
        if (r < len) v[r] ^= v[r - 1];
    }
    return v;
}

int braid_invariant_Q(const std::vector<int>& v) {
    check_binary(v);
    int indicator = 0, size = 0;
    for (int x : v) {
        indicator ^= x;
        size += indicator;
    }
    // The indicator runs over points 2..len+1 with point 1 excluded by the
    // normalization; the class sizes are size and len+1-size.
    int total = static_cast<int>(v.size()) + 1;
    return std::min(size, total - size);
}

}  // namespace pellabel
