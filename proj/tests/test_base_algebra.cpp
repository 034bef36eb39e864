#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "rsrepair/poly.hpp"

using namespace rsrepair;

namespace {

// Independent trial-division oracle: the count smallest primes = 1 mod m.
std::vector<std::uint64_t> primes_oracle(std::size_t count, std::uint64_t m) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t q = 2; out.size() < count; ++q) {
        bool prime = q >= 2;
        for (std::uint64_t t = 2; t * t <= q; ++t)
            if (q % t == 0) { prime = false; break; }
        if (prime && q % m == 1 % m) out.push_back(q);
    }
    return out;
}

// Brute-force irreducibility: trial division by every lower-degree monic.
bool irreducible_oracle(const PrimeFieldPoly& f) {
    int d = f.degree();
    if (d < 1) return false;
    for (int dd = 1; dd <= d / 2; ++dd) {
        std::uint64_t total = 1;
        for (int i = 0; i < dd; ++i) total *= f.p;
        for (std::uint64_t enc = 0; enc < total; ++enc) {
            PrimeFieldPoly g;
            g.p = f.p;
            g.coeffs.assign(dd + 1, 0);
            std::uint64_t e = enc;
            for (int i = 0; i < dd; ++i) {
                g.coeffs[i] = static_cast<Residue>(e % f.p);
                e /= f.p;
            }
            g.coeffs[dd] = 1;
            if (poly_rem(f, g).is_zero()) return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("select_primes examples") {
    CHECK(select_primes(3, 2) == std::vector<std::uint64_t>{3, 5, 7});
    CHECK(select_primes(4, 6) == std::vector<std::uint64_t>{7, 13, 19, 31});
    CHECK(select_primes(0, 24).empty());
    CHECK(select_primes(2, 1) == std::vector<std::uint64_t>{2, 3});
    CHECK_THROWS_AS(select_primes(1, 0), std::invalid_argument);
}

TEST_CASE("select_primes matches sieve oracle and omits nothing") {
    for (std::uint64_t m : {1, 2, 5, 6, 24}) {
        auto got = primes_oracle(6, m);
        CHECK(select_primes(6, m) == got);
        for (std::size_t i = 1; i < got.size(); ++i) CHECK(got[i] > got[i - 1]);
        for (auto q : got) CHECK(q % m == 1 % m);
    }
}

TEST_CASE("is_irreducible examples") {
    CHECK_FALSE(is_irreducible(PrimeFieldPoly(2, {1, 0, 1})));  // x^2+1 = (x+1)^2
    CHECK(is_irreducible(PrimeFieldPoly(2, {1, 1, 0, 1})));     // x^3+x+1
    CHECK(is_irreducible(PrimeFieldPoly(2, {0, 1})));           // x
    CHECK_THROWS_AS(is_irreducible(PrimeFieldPoly(2, {1})), std::invalid_argument);
    CHECK_THROWS_AS(is_irreducible(PrimeFieldPoly(3, {1, 0, 2})), std::invalid_argument);
}

TEST_CASE("is_irreducible agrees with exhaustive factor search") {
    for (Residue p : {2u, 3u}) {
        int dmax = p == 2 ? 5 : 3;
        for (int d = 1; d <= dmax; ++d) {
            std::uint64_t total = 1;
            for (int i = 0; i < d; ++i) total *= p;
            for (std::uint64_t enc = 0; enc < total; ++enc) {
                PrimeFieldPoly f;
                f.p = p;
                f.coeffs.assign(d + 1, 0);
                std::uint64_t e = enc;
                for (int i = 0; i < d; ++i) {
                    f.coeffs[i] = static_cast<Residue>(e % p);
                    e /= p;
                }
                f.coeffs[d] = 1;
                CHECK(is_irreducible(f) == irreducible_oracle(f));
            }
        }
    }
}

TEST_CASE("find_irreducible examples and minimality") {
    CHECK(find_irreducible(2, 2) == PrimeFieldPoly(2, {1, 1, 1}));
    CHECK(find_irreducible(2, 3) == PrimeFieldPoly(2, {1, 1, 0, 1}));
    CHECK(find_irreducible(2, 1) == PrimeFieldPoly(2, {0, 1}));
    CHECK_THROWS_AS(find_irreducible(2, 0), std::invalid_argument);

    for (Residue p : {2u, 3u, 5u}) {
        for (std::uint32_t d = 1; d <= 4; ++d) {
            PrimeFieldPoly f = find_irreducible(p, d);
            REQUIRE(is_irreducible(f));
            // no candidate with smaller encoding passes
            std::uint64_t enc = 0, scale = 1;
            for (std::uint32_t i = 0; i < d; ++i) {
                enc += f.coeffs[i] * scale;
                scale *= p;
            }
            for (std::uint64_t smaller = 0; smaller < enc; ++smaller) {
                PrimeFieldPoly g;
                g.p = p;
                g.coeffs.assign(d + 1, 0);
                std::uint64_t e = smaller;
                for (std::uint32_t i = 0; i < d; ++i) {
                    g.coeffs[i] = static_cast<Residue>(e % p);
                    e /= p;
                }
                g.coeffs[d] = 1;
                CHECK_FALSE(is_irreducible(g));
            }
        }
    }
}

TEST_CASE("power_sums examples") {
    auto s = power_sums(PrimeFieldPoly(2, {1, 1, 0, 1}), 1);  // x^3+x+1
    CHECK(s == std::vector<Residue>{1, 0});
    CHECK(power_sums(PrimeFieldPoly(2, {1, 1, 1}), 2) == std::vector<Residue>{0, 1, 1});
    CHECK(power_sums(PrimeFieldPoly(2, {1, 1, 0, 1}), 0) == std::vector<Residue>{1});
    CHECK(power_sums(PrimeFieldPoly(3, {1, 2, 0, 1}), 0) == std::vector<Residue>{0});  // 3 mod 3
    CHECK_THROWS_AS(power_sums(PrimeFieldPoly(2, {1, 0, 1}), 3), std::invalid_argument);
}

TEST_CASE("power_sums agrees with Frobenius conjugate sums") {
    // Oracle: S_e = sum_j (x^(p^j))^e mod f must be the constant S_e.
    std::mt19937_64 rng(7);
    for (Residue p : {2u, 3u, 5u}) {
        for (std::uint32_t d = 2; d <= (p == 2 ? 8u : 5u); ++d) {
            PrimeFieldPoly f = find_irreducible(p, d);
            auto s = power_sums(f, 2 * d);
            std::vector<PrimeFieldPoly> conj(d);
            conj[0] = poly_rem(poly_x(p), f);
            for (std::uint32_t j = 1; j < d; ++j) conj[j] = poly_powmod(conj[j - 1], p, f);
            for (std::uint32_t e = 0; e <= 2 * d; ++e) {
                PrimeFieldPoly acc(p, {});
                for (std::uint32_t j = 0; j < d; ++j)
                    acc = poly_add(acc, poly_powmod(conj[j], e, f));
                REQUIRE(acc.degree() <= 0);
                CHECK(acc.coeff(0) == s[e]);
            }
        }
    }
}

TEST_CASE("power_sums S_0 = 1 for odd degree over F_2") {
    for (std::uint32_t d : {3u, 5u, 7u}) {
        PrimeFieldPoly f = find_irreducible(2, d);
        CHECK(power_sums(f, 0)[0] == 1);
    }
}
