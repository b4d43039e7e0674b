#pragma once

// Univariate factorization: complete over finite fields (squarefree split,
// distinct-degree, Cantor-Zassenhaus equal-degree splitting), and over Q by
// rational roots with certified low-degree irreducibility. Inputs whose
// factorization cannot be certified raise FactorizationNeeded; callers may
// supply pre-factored data instead.

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "gwc/field.hpp"

namespace gwc {

struct UFactor {
    UPoly poly;  // monic irreducible
    int mult;
};

struct UFactorization {
    FieldElem unit;  // constant: f = unit * prod poly^mult
    std::vector<UFactor> factors;
};

namespace detail {

inline UPoly up_random(const Field& K, Rng& rng, int deg) {
    UPoly r;
    for (int i = 0; i <= deg; ++i) r.push_back(random_elem(K, rng));
    up_trim(r);
    return r;
}

// equal-degree splitting of a monic squarefree product of degree-d irreducibles
inline void cantor_zassenhaus(const Field& K, const UPoly& f, int d, Rng& rng, std::vector<UPoly>& out) {
    if (up_deg(f) == d) {
        out.push_back(f);
        return;
    }
    Int q = field_card(K);
    Int e = (int_pow(q, static_cast<unsigned long>(d)) - 1) / 2;
    for (int attempt = 0; attempt < 256; ++attempt) {
        UPoly r = up_random(K, rng, up_deg(f) - 1);
        if (up_deg(r) < 1) continue;
        UPoly g = up_gcd(K, f, r);
        if (up_deg(g) > 0 && up_deg(g) < up_deg(f)) {
            cantor_zassenhaus(K, g, d, rng, out);
            cantor_zassenhaus(K, up_div_exact(K, f, g), d, rng, out);
            return;
        }
        UPoly h = up_powmod(K, r, e, f);
        h = up_sub(K, h, up_const(F_one(K)));
        up_trim(h);
        g = up_gcd(K, f, h);
        if (up_deg(g) > 0 && up_deg(g) < up_deg(f)) {
            cantor_zassenhaus(K, g, d, rng, out);
            cantor_zassenhaus(K, up_div_exact(K, f, g), d, rng, out);
            return;
        }
    }
    fail("Internal", "equal-degree splitting did not converge");
}

// distinct-degree decomposition of a monic squarefree polynomial
inline void factor_squarefree_finite(const Field& K, UPoly f, Rng& rng, std::vector<UPoly>& out) {
    Int q = field_card(K);
    UPoly x = {F_zero(K), F_one(K)};
    UPoly h = x;  // x^(q^d) mod f, iterated
    int d = 0;
    while (up_deg(f) >= 1) {
        ++d;
        if (2 * d > up_deg(f)) {
            out.push_back(up_monic(f));
            return;
        }
        h = up_powmod(K, h, q, f);
        UPoly g = up_gcd(K, f, up_sub(K, h, x));
        if (up_deg(g) > 0) {
            cantor_zassenhaus(K, g, d, rng, out);
            f = up_div_exact(K, f, g);
            h = up_mod(K, h, f);
        }
    }
}

// all rational roots of a primitive integer polynomial
inline std::vector<Rat> rational_roots(const UPoly& f) {
    // clear denominators
    Int lcm = 1;
    for (const auto& c : f) lcm = int_lcm(lcm, c.q.get_den());
    std::vector<Int> zc;
    for (const auto& c : f) zc.push_back(Int(c.q * Rat(lcm)));
    Int content = 0;
    for (const auto& c : zc) content = int_gcd(content, c);
    if (content > 1)
        for (auto& c : zc) c /= content;

    auto divisors = [](Int n) {
        n = abs(n);
        std::vector<Int> ds;
        for (Int d = 1; d * d <= n; ++d)
            if (int_mod(n, d) == 0) {
                ds.push_back(d);
                if (d * d != n) ds.push_back(n / d);
            }
        return ds;
    };
    std::vector<Rat> roots;
    if (zc.empty()) return roots;
    Int a0 = zc.front(), an = zc.back();
    if (a0 == 0) {
        roots.push_back(Rat(0));
        // trailing zeros handled by caller via repeated division
    }
    if (a0 == 0) {
        size_t k = 0;
        while (k < zc.size() && zc[k] == 0) ++k;
        a0 = zc[k];
    }
    Field Q = QQ();
    for (const Int& p : divisors(a0))
        for (const Int& s : divisors(an))
            for (int sign : {1, -1}) {
                Rat r(p * sign, s);
                r.canonicalize();
                if (f_is_zero(up_eval(Q, f, F_rat(Q, r)))) {
                    if (std::find(roots.begin(), roots.end(), r) == roots.end()) roots.push_back(r);
                }
            }
    std::sort(roots.begin(), roots.end());
    return roots;
}

}  // namespace detail

// Complete factorization over a finite field.
inline UFactorization up_factor_finite(const Field& K, UPoly f, Rng& rng) {
    UFactorization out;
    up_trim(f);
    if (f.empty()) fail("ZeroInput", "factor of zero");
    out.unit = f.back();
    auto sqf = up_squarefree(K, f);
    for (auto& [part, mult] : sqf) {
        std::vector<UPoly> irred;
        detail::factor_squarefree_finite(K, part, rng, irred);
        for (auto& g : irred) out.factors.push_back({g, mult});
    }
    std::sort(out.factors.begin(), out.factors.end(), [&](const UFactor& a, const UFactor& b) {
        if (a.poly.size() != b.poly.size()) return a.poly.size() < b.poly.size();
        return up_str(a.poly, "t") < up_str(b.poly, "t");
    });
    return out;
}

// Factorization over Q: squarefree split, rational roots, and residual factors
// certified irreducible only in degree <= 3 (a cubic or quadratic without
// rational roots is irreducible). Otherwise FactorizationNeeded.
inline UFactorization up_factor_rationals(const Field& Q, UPoly f) {
    UFactorization out;
    up_trim(f);
    if (f.empty()) fail("ZeroInput", "factor of zero");
    out.unit = f.back();
    auto sqf = up_squarefree(Q, f);
    for (auto& [part, mult] : sqf) {
        UPoly rest = part;
        for (const Rat& r : detail::rational_roots(part)) {
            UPoly lin = {F_rat(Q, -r), F_one(Q)};
            while (true) {
                UPoly q, rem;
                up_divrem(Q, rest, lin, q, rem);
                if (!rem.empty()) break;
                rest = q;
                out.factors.push_back({lin, mult});
            }
        }
        if (up_deg(rest) >= 1) {
            if (up_deg(rest) > 3)
                fail("FactorizationNeeded",
                     "cannot certify irreducibility of " + up_str(rest, "t") + "; supply factored input");
            out.factors.push_back({up_monic(rest), mult});
        }
    }
    std::sort(out.factors.begin(), out.factors.end(), [&](const UFactor& a, const UFactor& b) {
        if (a.poly.size() != b.poly.size()) return a.poly.size() < b.poly.size();
        return up_str(a.poly, "t") < up_str(b.poly, "t");
    });
    // merge duplicates (a root may appear with several multiplicity layers)
    std::vector<UFactor> merged;
    for (auto& fa : out.factors) {
        bool found = false;
        for (auto& m : merged) {
            if (m.poly.size() == fa.poly.size()) {
                bool eq = true;
                for (size_t i = 0; i < m.poly.size(); ++i)
                    if (!f_eq(m.poly[i], fa.poly[i])) {
                        eq = false;
                        break;
                    }
                if (eq) {
                    m.mult += fa.mult;
                    found = true;
                    break;
                }
            }
        }
        if (!found) merged.push_back(fa);
    }
    out.factors = std::move(merged);
    return out;
}

inline UFactorization up_factor(const Field& K, const UPoly& f, Rng& rng) {
    if (is_finite_field(K)) return up_factor_finite(K, f, rng);
    if (K->kind == FieldKind::Rationals) return up_factor_rationals(K, f);
    fail("FactorizationNeeded", "no factorization routine over " + field_name(K));
}

// verify f == unit * prod(factors)
inline bool factorization_checks(const Field& K, const UPoly& f, const UFactorization& fac) {
    UPoly prod = up_const(fac.unit);
    for (const auto& [g, m] : fac.factors)
        for (int i = 0; i < m; ++i) prod = up_mul(K, prod, g);
    if (prod.size() != f.size()) return false;
    for (size_t i = 0; i < f.size(); ++i)
        if (!f_eq(prod[i], f[i])) return false;
    return true;
}

}  // namespace gwc
