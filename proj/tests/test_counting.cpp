#include "doctest.h"

#include <stdexcept>
#include <vector>

#include "pellabel/counting.hpp"

using namespace pellabel;

TEST_CASE("component counts") {
    CHECK(count_components(2, 2) == 0);
    CHECK(count_components(2, 9) == 2);
    CHECK(count_components(0, 1) == 1);
    CHECK(count_components(0, 2) == 0);
    CHECK(count_components(0, 7) == 0);
    CHECK(count_components(1, 1) == 0);
    CHECK(count_components(1, 2) == 1);
    CHECK(count_components(1, 3) == 1);
    CHECK(count_components(2, 4) == 1);
    CHECK(count_components(2, 5) == 2);
    CHECK(count_components(3, 7) == 2);
    CHECK(count_components(4, 10) == 2);
    CHECK(count_components(6, 14) == 3);
    // Degree g+1 always realizes exactly the balanced partition.
    for (int g = 1; g <= 8; ++g) CHECK(count_components(g, g + 1) == 1);
    CHECK_THROWS_AS(count_components(-1, 1), std::invalid_argument);
    CHECK_THROWS_AS(count_components(0, 0), std::invalid_argument);
}

TEST_CASE("degree partition enumeration") {
    CHECK(degree_partitions(2, 9) ==
          std::vector<DegreePartition>{{1, 5}, {3, 3}});
    CHECK(degree_partitions(5, 8) ==
          std::vector<DegreePartition>{{4, 8}, {6, 6}});
    CHECK(degree_partitions(1, 2) == std::vector<DegreePartition>{{2, 2}});
    CHECK(degree_partitions(2, 2).empty());
    CHECK(degree_partitions(0, 1) == std::vector<DegreePartition>{{1, 1}});
    for (int g = 0; g <= 6; ++g)
        for (int n = 1; n <= 14; ++n) {
            int prev = 0;
            for (const DegreePartition& p : degree_partitions(g, n)) {
                CHECK(p.minus + p.plus == 2 * g + 2);
                CHECK(p.minus <= p.plus);
                CHECK(p.minus <= g + 1);
                CHECK(p.plus <= n);
                CHECK((n - p.minus) % 2 == 0);
                CHECK(p.minus > prev);
                prev = p.minus;
            }
        }
}

TEST_CASE("counts are in bijection with partitions for positive genus") {
    for (int g = 1; g <= 6; ++g)
        for (int n = 1; n <= 14; ++n)
            CHECK(count_components(g, n) ==
                  static_cast<int>(degree_partitions(g, n).size()));
}

TEST_CASE("count vanishes exactly below the degree threshold") {
    for (int g = 0; g <= 6; ++g)
        for (int n = 1; n <= 14; ++n) {
            bool zero = (g >= 1 && n <= g) || (g == 0 && n != 1);
            CHECK((count_components(g, n) == 0) == zero);
        }
}

TEST_CASE("divisor scan") {
    CHECK(divisors(1) == std::vector<long>{1});
    CHECK(divisors(9) == std::vector<long>{1, 3, 9});
    CHECK(divisors(12) == std::vector<long>{1, 2, 3, 4, 6, 12});
    CHECK(divisors(97) == std::vector<long>{1, 97});
    CHECK_THROWS_AS(divisors(0), std::invalid_argument);
}

TEST_CASE("extremal polynomial spaces") {
    CHECK(count_extremal(0, 3) == 1);
    CHECK(count_extremal(0, 4) == 2);
    CHECK(count_extremal(1, 2) == 1);
    CHECK(count_extremal(1, 4) == 3);
    CHECK(count_extremal(1, 6) == 4);
    CHECK(count_extremal(2, 3) == 1);
    CHECK_THROWS_AS(count_extremal(2, 2), std::invalid_argument);
    CHECK_THROWS_AS(count_extremal(-1, 5), std::invalid_argument);
}

TEST_CASE("hurwitz space counts") {
    CHECK(count_hurwitz(8, 4, 2, 1) == 2);
    CHECK(count_hurwitz(9, 3, 3, 2) == 2);
    CHECK(count_hurwitz(9, 4, 3, 1) == 2);
    CHECK(count_hurwitz(10, 5, 4, 0) == 1);
    CHECK(count_hurwitz(12, 6, 4, 1) == 3);
    CHECK_THROWS_AS(count_hurwitz(8, 1, 2, 4), std::invalid_argument);
    CHECK_THROWS_AS(count_hurwitz(7, 4, 2, 0), std::invalid_argument);
    CHECK_THROWS_AS(count_hurwitz(8, 4, 2, 2), std::invalid_argument);
}

TEST_CASE("k-differential components") {
    CHECK(count_kdiff(2, 2) == 0);
    CHECK(count_kdiff(2, 7) == 2);
    CHECK(count_kdiff(2, 4) == 1);
    CHECK(count_kdiff(2, 1) == 1);
    CHECK(count_kdiff(2, 3) == 1);
    CHECK(count_kdiff(2, 5) == 2);
    CHECK(count_kdiff(2, 6) == 1);
    CHECK(count_kdiff(3, 1) == 2);
    CHECK(count_kdiff(3, 2) == 1);
    CHECK(count_kdiff(3, 3) == 1);
    CHECK(count_kdiff(3, 4) == 2);
    CHECK(count_kdiff(3, 5) == 2);
    CHECK(count_kdiff(4, 2) == 1);
    CHECK(count_kdiff(4, 3) == 3);
    CHECK(count_kdiff(4, 4) == 2);
    CHECK(count_kdiff(4, 5) == 3);
    CHECK(count_kdiff(5, 2) == 2);
    CHECK(count_kdiff(5, 3) == 3);
    CHECK(count_kdiff(5, 4) == 3);
    CHECK(count_kdiff(6, 3) == 4);
    CHECK(count_kdiff(6, 4) == 3);
    CHECK_THROWS_AS(count_kdiff(4, 1), std::invalid_argument);
    CHECK_THROWS_AS(count_kdiff(6, 1), std::invalid_argument);
    CHECK_THROWS_AS(count_kdiff(1, 5), std::invalid_argument);
    CHECK_THROWS_AS(count_kdiff(2, 0), std::invalid_argument);
    // Genus 2 single-zero strata match degree-k primitive solutions.
    for (int k = 5; k <= 21; k += 2)
        CHECK(count_kdiff(2, k) == count_components(2, k));
}

TEST_CASE("genus 2 parity dictionary") {
    Genus2ParityMap m5 = genus2_parity_map(5);
    CHECK(m5.odd_parity == DegreePartition{1, 5});
    CHECK(m5.even_parity == DegreePartition{3, 3});
    Genus2ParityMap m7 = genus2_parity_map(7);
    CHECK(m7.odd_parity == DegreePartition{1, 5});
    CHECK(m7.even_parity == DegreePartition{3, 3});
    CHECK_THROWS_AS(genus2_parity_map(4), std::invalid_argument);
    CHECK_THROWS_AS(genus2_parity_map(3), std::invalid_argument);
}

TEST_CASE("component tables") {
    CHECK(counts_table_csv(1, 2) ==
          "g,n,count,partitions\n"
          "0,1,1,\"(1,1)\"\n"
          "0,2,0,\"\"\n"
          "1,1,0,\"\"\n"
          "1,2,1,\"(2,2)\"\n");
    CHECK(counts_table_text(1, 2) ==
          "g  n  count  partitions\n"
          "0  1      1  (1,1)\n"
          "0  2      0\n"
          "1  1      0\n"
          "1  2      1  (2,2)\n");
    CHECK(partition_str(DegreePartition{1, 5}) == "(1,5)");
    CHECK_THROWS_AS(counts_table_csv(-1, 2), std::invalid_argument);
    CHECK_THROWS_AS(counts_table_text(0, 0), std::invalid_argument);
}
