#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace gwc {

using Int = mpz_class;
using Rat = mpq_class;

class error : public std::runtime_error {
public:
    error(std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

[[noreturn]] inline void fail(const std::string& code, const std::string& what) {
    throw error(code, what);
}

inline Int int_gcd(const Int& a, const Int& b) {
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Int int_lcm(const Int& a, const Int& b) {
    Int l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

// g = a*x + b*y
inline Int int_xgcd(const Int& a, const Int& b, Int& x, Int& y) {
    Int g;
    mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Int int_pow(const Int& a, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), a.get_mpz_t(), e);
    return r;
}

// Floor-positive remainder in [0, m).
inline Int int_mod(const Int& a, const Int& m) {
    Int r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

inline Int int_powmod(const Int& a, const Int& e, const Int& m) {
    Int r;
    mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
    return r;
}

inline bool int_is_prime(const Int& n) {
    return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

// v such that p^v || a, and the cofactor. a != 0.
inline int int_valuation(Int a, const Int& p, Int& cofactor) {
    if (a == 0) fail("ZeroInput", "valuation of zero");
    int v = 0;
    while (int_mod(a, p) == 0) {
        a /= p;
        ++v;
    }
    cofactor = a;
    return v;
}

// Solves x = r[i] mod m[i] for pairwise coprime moduli.
inline Int crt_ints(const std::vector<Int>& moduli, const std::vector<Int>& residues) {
    if (moduli.size() != residues.size() || moduli.empty())
        fail("BadInput", "crt: size mismatch");
    Int x = int_mod(residues[0], moduli[0]);
    Int m = moduli[0];
    for (size_t i = 1; i < moduli.size(); ++i) {
        Int u, v;
        Int g = int_xgcd(m, moduli[i], u, v);
        if (g != 1) fail("NotComaximal", "crt: moduli share the factor " + g.get_str());
        // x' = x + m*u*(r_i - x) mod m*m_i
        Int mi = m * moduli[i];
        x = int_mod(x + m * u * (residues[i] - x), mi);
        m = mi;
    }
    return x;
}

// Deterministic PRNG used anywhere the algorithms need random probes.
class Rng {
public:
    explicit Rng(uint64_t seed = 0x9e3779b97f4a7c15ULL) : eng_(seed) {}
    uint64_t next() { return eng_(); }
    // uniform in [0, n)
    uint64_t below(uint64_t n) { return n ? eng_() % n : 0; }
    Int int_below(const Int& n) {
        if (n <= 0) return 0;
        Int r;
        size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2) + 16;
        while (true) {
            r = 0;
            for (size_t i = 0; i < bits; i += 32) {
                r <<= 32;
                r += static_cast<unsigned long>(eng_() & 0xffffffffULL);
            }
            r = int_mod(r, n);
            return r;
        }
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace gwc
