#include "pellabel/counting.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace pellabel {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

int count_components(int g, int n) {
    require(g >= 0 && n >= 1, "count_components: need g >= 0 and n >= 1");
    if (g == 0) return n == 1 ? 1 : 0;
    if (n < g + 1) return 0;
    int m = std::min(g, n - g - 1);
    return (n + g) % 2 != 0 ? m / 2 + 1 : (m + 1) / 2;
}

std::vector<DegreePartition> degree_partitions(int g, int n) {
    require(g >= 0 && n >= 1, "degree_partitions: need g >= 0 and n >= 1");
    std::vector<DegreePartition> out;
    for (int a = 1; a <= g + 1; ++a) {
        int b = 2 * g + 2 - a;
        if (a > n || b > n) continue;
        if ((n - a) % 2 != 0) continue;  // b = 2g+2-a has the same parity gap
        out.push_back(DegreePartition{a, b});
    }
    return out;
}

std::vector<long> divisors(long N) {
    require(N >= 1, "divisors: need N >= 1");
    std::vector<long> small, large;
    for (long d = 1; d * d <= N; ++d) {
        if (N % d != 0) continue;
        small.push_back(d);
        if (d != N / d) large.push_back(N / d);
    }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
}

long count_extremal(int g, long N) {
    require(g >= 0, "count_extremal: need g >= 0");
    require(N >= g + 1, "count_extremal: need N >= g+1");
    if (g == 0) return N % 2 != 0 ? 1 : 2;
    long total = 0;
    for (long n : divisors(N)) {
        total += 2L * count_components(g, static_cast<int>(n));
        // +-P_N land in one component iff the partition is balanced; one
        // unbalanced class per odd-quotient divisor with n-g odd positive.
        if ((N / n) % 2 != 0 && n - g >= 1 && (n - g) % 2 != 0) total -= 1;
    }
    return total;
}

long count_hurwitz(long N, long A, long B, int g) {
    require(g >= 0, "count_hurwitz: need g >= 0");
    require(A >= 2 && B >= 2 && 2 * A <= N && 2 * B <= N,
            "count_hurwitz: need 2 <= A, B <= N/2");
    require(A + B + g == N - 1, "count_hurwitz: need A + B + g = N - 1");
    long hi = std::max(A, B);
    long lo = std::min(A, B);
    long total = 0;
    if (N > 2 * hi) {
        for (long n : divisors(N))
            if ((N / n) % 2 != 0 && n >= N - 2 * lo) total += 1;
    } else {
        for (long n : divisors(N))
            if ((N / n) % 2 == 0) total += count_components(g, static_cast<int>(n));
    }
    return total;
}

int count_kdiff(int g, int k) {
    require(g >= 2 && k >= 1, "count_kdiff: need g >= 2 and k >= 1");
    if (k == 2) return (g - 1) / 2;
    if (k == 3 && (g == 2 || g == 3)) return 1;
    if (g % 2 == 0) {
        if (k == 1) {
            // Genus 2 differentials with a double zero form one component;
            // higher even genus has no single-zero interpretation here.
            if (g == 2) return 1;
            throw std::invalid_argument("count_kdiff: k = 1 with even g >= 4 is undefined");
        }
        return k % 2 == 0 ? g / 2 : g / 2 + 1;
    }
    return (g + 1) / 2;
}

Genus2ParityMap genus2_parity_map(int k) {
    require(k >= 5 && k % 2 != 0, "genus2_parity_map: need odd k >= 5");
    return Genus2ParityMap{DegreePartition{1, 5}, DegreePartition{3, 3}};
}

std::string partition_str(const DegreePartition& p) {
    return "(" + std::to_string(p.minus) + "," + std::to_string(p.plus) + ")";
}

namespace {

std::string partitions_cell(int g, int n) {
    std::string out;
    for (const DegreePartition& p : degree_partitions(g, n)) {
        if (!out.empty()) out += ' ';
        out += partition_str(p);
    }
    return out;
}

}  // namespace

std::string counts_table_csv(int g_max, int n_max) {
    require(g_max >= 0 && n_max >= 1, "counts_table_csv: need g_max >= 0 and n_max >= 1");
    std::string out = "g,n,count,partitions\n";
    for (int g = 0; g <= g_max; ++g)
        for (int n = 1; n <= n_max; ++n) {
            out += std::to_string(g) + ',' + std::to_string(n) + ',';
            out += std::to_string(count_components(g, n));
            out += ",\"" + partitions_cell(g, n) + "\"\n";
        }
    return out;
}

std::string counts_table_text(int g_max, int n_max) {
    require(g_max >= 0 && n_max >= 1, "counts_table_text: need g_max >= 0 and n_max >= 1");
    std::vector<std::array<std::string, 4>> rows;
    rows.push_back({"g", "n", "count", "partitions"});
    for (int g = 0; g <= g_max; ++g)
        for (int n = 1; n <= n_max; ++n)
            rows.push_back({std::to_string(g), std::to_string(n),
                            std::to_string(count_components(g, n)), partitions_cell(g, n)});
    std::array<size_t, 4> width{};
    for (const auto& r : rows)
        for (size_t c = 0; c < 4; ++c) width[c] = std::max(width[c], r[c].size());
    std::string out;
    for (const auto& r : rows) {
        std::string line;
        for (size_t c = 0; c < 3; ++c) {
            line += std::string(width[c] - r[c].size(), ' ') + r[c];
            line += "  ";
        }
        line += r[3];  // left aligned, no trailing padding
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out += line + '\n';
    }
    return out;
}

}  // namespace pellabel
