#pragma once

// Diagonal quadratic forms, Witt classes and the Witt-equivalence decision
// layer: complete over finite fields, Q, and F_q(t); certificate- or
// invariant-backed three-valued answers elsewhere.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gwc/factor.hpp"
#include "gwc/linalg.hpp"
#include "gwc/places.hpp"

namespace gwc {

// Basis symbol [g1 ^ ... ^ ge -> .] of a twist line, plus the sign picked up
// by reordering generators. Twists are bookkeeping: classes with mismatched
// symbols never compare equal (the identification is not canonical).
struct TwistSymbol {
    std::vector<std::string> gens;
    int sign = 1;

    bool same(const TwistSymbol& o) const { return gens == o.gens && sign == o.sign; }
    std::string str() const {
        std::string s;
        for (const auto& g : gens) s += (s.empty() ? "" : "^") + g;
        return (sign < 0 ? "-[" : "[") + s + " -> 1]";
    }
};

struct DiagForm {
    Field F;
    std::vector<FieldElem> entries;
    std::optional<TwistSymbol> twist;
    bool partial = false;  // reduction could not certify minimality

    size_t rank() const { return entries.size(); }
    std::string str() const {
        if (twist) {
            // twisted classes print in the same syntax the CLI accepts
            std::string gens;
            for (const auto& g : twist->gens) gens += (gens.empty() ? "" : "^") + g;
            std::string s = "<";
            for (size_t i = 0; i < entries.size(); ++i) {
                std::string coeff = f_str(twist->sign < 0 ? f_neg(entries[i]) : entries[i]);
                s += std::string(i ? ", " : "") + "[" + gens + " -> " + coeff + "]";
            }
            return s + ">";
        }
        std::string s = "<";
        for (size_t i = 0; i < entries.size(); ++i) s += (i ? ", " : "") + f_str(entries[i]);
        return s + ">";
    }
};

inline DiagForm make_form(const Field& F, std::vector<FieldElem> entries,
                          std::optional<TwistSymbol> twist = std::nullopt) {
    for (const auto& e : entries) {
        if (!same_field(e.f, F)) fail("MixedFields", "form entry in the wrong field");
        if (f_is_zero(e)) fail("SingularGram", "diagonal forms need nonzero entries");
    }
    return DiagForm{F, std::move(entries), std::move(twist), false};
}

enum class Tri { Yes, No, Unknown };

inline Tri tri_and(Tri a, Tri b) {
    if (a == Tri::No || b == Tri::No) return Tri::No;
    if (a == Tri::Unknown || b == Tri::Unknown) return Tri::Unknown;
    return Tri::Yes;
}

// --- Hilbert symbols over Q ---------------------------------------------------

namespace qp {

inline int legendre(const Int& a, const Int& p) {  // a coprime to odd p
    Int r = int_powmod(int_mod(a, p), (p - 1) / 2, p);
    return r == 1 ? 1 : -1;
}

// Hilbert symbol (a,b)_p; p == 0 encodes the real place.
inline int hilbert(Rat a, Rat b, const Int& p) {
    if (a == 0 || b == 0) fail("ZeroInput", "hilbert symbol needs nonzero arguments");
    if (p == 0) return (a < 0 && b < 0) ? -1 : 1;
    // reduce to integers
    Int an = a.get_num() * a.get_den();
    Int bn = b.get_num() * b.get_den();
    Int ua, ub;
    int alpha = int_valuation(an, p, ua);
    int beta = int_valuation(bn, p, ub);
    if (p != 2) {
        int eps = (int_mod((p - 1) / 2, 2) == 1) ? 1 : 0;
        int sgn = 1;
        if (alpha % 2 && beta % 2 && eps) sgn = -sgn;
        if (beta % 2 && legendre(ua, p) < 0) sgn = -sgn;
        if (alpha % 2 && legendre(ub, p) < 0) sgn = -sgn;
        return sgn;
    }
    auto eps2 = [](const Int& u) { return int_mod((u - 1) / 2, 2) == 1; };
    auto omega = [](const Int& u) { return int_mod((u * u - 1) / 8, 2) == 1; };
    bool exp = (eps2(ua) && eps2(ub));
    if (alpha % 2 && omega(ub)) exp = !exp;
    if (beta % 2 && omega(ua)) exp = !exp;
    return exp ? -1 : 1;
}

inline std::vector<Int> odd_prime_divisors(const Rat& a) {
    Int m = abs(a.get_num() * a.get_den());
    std::vector<Int> ps;
    Int d = 3;
    while (d * d <= m) {
        if (int_mod(m, d) == 0) {
            ps.push_back(d);
            while (int_mod(m, d) == 0) m /= d;
        }
        d += 2;
        if (d > 1000000) break;
    }
    while (int_mod(m, 2) == 0) m /= 2;
    if (m > 1) {
        if (!int_is_prime(m))
            fail("FactorizationNeeded", "entry has an uncertified large factor " + m.get_str());
        ps.push_back(m);
    }
    return ps;
}

inline int hasse(const std::vector<Rat>& diag, const Int& p) {
    int s = 1;
    for (size_t i = 0; i < diag.size(); ++i)
        for (size_t j = i + 1; j < diag.size(); ++j) s *= hilbert(diag[i], diag[j], p);
    return s;
}

// isotropy of a nondegenerate diagonal form over Q_p (p = 0: over R)
inline bool isotropic_local(const std::vector<Rat>& d, const Int& p) {
    size_t n = d.size();
    if (n < 2) return false;
    if (p == 0) {
        bool pos = false, neg = false;
        for (const auto& x : d) (x > 0 ? pos : neg) = true;
        return pos && neg;
    }
    if (n >= 5) return true;  // over Q_p every 5-dim form is isotropic
    if (n == 2) {
        // <a,b> isotropic iff -ab is a square in Q_p
        Rat m = -d[0] * d[1];
        Int num = m.get_num() * m.get_den(), u;
        int v = int_valuation(num, p, u);
        if (v % 2) return false;
        if (p != 2) return legendre(u, p) == 1;
        return int_mod(u, 8) == 1;
    }
    if (n == 3) return hilbert(-d[0] * d[1], -d[0] * d[2], p) == 1;
    // n == 4: a common represented square class for <d0,d1> and <-d2,-d3>
    std::vector<Rat> classes;
    if (p != 2) {
        Int u = 2;
        while (legendre(u, p) == 1) ++u;
        classes = {Rat(1), Rat(u), Rat(p), Rat(u * p)};
    } else {
        for (long c : {1L, -1L, 2L, -2L, 5L, -5L, 10L, -10L}) classes.push_back(Rat(c));
    }
    auto represents = [&](Rat a, Rat b, const Rat& c) {
        return hilbert(-a * b, a * c, p) == 1;
    };
    for (const auto& c : classes)
        if (represents(d[0], d[1], c) && represents(-d[2], -d[3], c)) return true;
    return false;
}

inline bool isotropic_over_Q(const std::vector<Rat>& d) {
    size_t n = d.size();
    if (n < 2) return false;
    bool pos = false, neg = false;
    for (const auto& x : d) (x > 0 ? pos : neg) = true;
    if (!(pos && neg)) return false;
    if (n >= 5) return true;  // Meyer: indefinite of rank >= 5
    if (n == 2) {
        Rat m = -d[0] * d[1];
        return mpz_perfect_square_p(Int(m.get_num() * m.get_den()).get_mpz_t()) != 0;
    }
    std::vector<Int> ps = {2};
    for (const auto& x : d)
        for (const auto& p : odd_prime_divisors(x))
            if (std::find(ps.begin(), ps.end(), p) == ps.end()) ps.push_back(p);
    for (const auto& p : ps)
        if (!isotropic_local(d, p)) return false;
    return true;
}

}  // namespace qp

// --- triviality of the Witt class ----------------------------------------------

Tri witt_trivial(const DiagForm& f, std::string* why = nullptr, int depth = 0);

namespace detail {

inline Tri trivial_finite(const DiagForm& f, std::string* why) {
    if (f.rank() % 2) {
        if (why) *why = "odd rank";
        return Tri::No;
    }
    // discriminant (-1)^{n(n-1)/2} * det must be a square
    const Field& K = f.F;
    FieldElem det = F_one(K);
    for (const auto& a : f.entries) det = f_mul(det, a);
    size_t n = f.rank();
    if (((n * (n - 1) / 2) % 2) == 1) det = f_neg(det);
    if (n == 0) return Tri::Yes;
    auto c = is_square(det);
    if (c.verdict == SquareCheck::Yes) {
        if (why) *why = "even rank and trivial signed discriminant";
        return Tri::Yes;
    }
    if (why) *why = "signed discriminant is a non-square";
    return Tri::No;
}

inline Tri trivial_rationals(const DiagForm& f, std::string* why) {
    size_t n = f.rank();
    if (n % 2) {
        if (why) *why = "odd rank";
        return Tri::No;
    }
    if (n == 0) return Tri::Yes;
    std::vector<Rat> d;
    for (const auto& a : f.entries) d.push_back(a.q);
    int sig = 0;
    for (const auto& x : d) sig += (x > 0) ? 1 : -1;
    if (sig != 0) {
        if (why) *why = "signature " + std::to_string(sig);
        return Tri::No;
    }
    size_t m = n / 2;
    Rat det(1);
    for (const auto& x : d) det *= x;
    if (m % 2) det = -det;
    if (!mpz_perfect_square_p(Int(det.get_num() * det.get_den()).get_mpz_t())) {
        if (why) *why = "signed discriminant nontrivial";
        return Tri::No;
    }
    std::vector<Rat> hyp;
    for (size_t i = 0; i < m; ++i) {
        hyp.push_back(Rat(1));
        hyp.push_back(Rat(-1));
    }
    std::vector<Int> ps = {2};
    for (const auto& x : d)
        for (const auto& p : qp::odd_prime_divisors(x))
            if (std::find(ps.begin(), ps.end(), p) == ps.end()) ps.push_back(p);
    for (const auto& p : ps) {
        if (qp::hasse(d, p) != qp::hasse(hyp, p)) {
            if (why) *why = "Hasse symbol differs at p = " + p.get_str();
            return Tri::No;
        }
    }
    if (why) *why = "signature, discriminant and all Hasse symbols hyperbolic";
    return Tri::Yes;
}

// Milnor-style: trivial iff all second residues vanish and the first residue
// at (t) is trivial over the constant field.
inline Tri trivial_funcfield(const DiagForm& f, std::string* why, int depth) {
    const Field& K = f.F;
    const Field& B = K->base;
    if (f.rank() % 2) {
        if (why) *why = "odd rank";
        return Tri::No;
    }
    Rng rng(0xC0FFEE);  // only drives probabilistic splitting; result is exact
    // collect all primes of the entries
    std::vector<UPoly> primes;
    auto add_prime = [&](const UPoly& pi) {
        for (const auto& q : primes)
            if (q.size() == pi.size()) {
                bool eq = true;
                for (size_t i = 0; i < q.size(); ++i)
                    if (!f_eq(q[i], pi[i])) {
                        eq = false;
                        break;
                    }
                if (eq) return;
            }
        primes.push_back(pi);
    };
    for (const auto& a : f.entries) {
        for (const UPoly& part : {a.num, a.den}) {
            if (up_deg(part) < 1) continue;
            auto fac = up_factor(B, part, rng);
            for (const auto& [pi, mult] : fac.factors) add_prime(pi);
        }
    }
    Tri result = Tri::Yes;
    for (const auto& pi : primes) {
        ValuedPlace pl = place_of_poly(K, pi);
        std::vector<FieldElem> res;
        for (const auto& a : f.entries) {
            auto vr = valuation_and_reduce(pl, a);
            if (vr.v % 2 != 0) res.push_back(vr.residue);
        }
        if (res.empty()) continue;
        DiagForm rf{pl.residue_field, res, std::nullopt, false};
        std::string sub;
        Tri t = witt_trivial(rf, &sub, depth + 1);
        if (t == Tri::No) {
            if (why) *why = "second residue at " + pl.str() + " nontrivial: " + sub;
            return Tri::No;
        }
        result = tri_and(result, t);
    }
    // first residue at (t)
    {
        ValuedPlace pl = place_of_poly(K, {F_zero(B), F_one(B)});
        std::vector<FieldElem> res;
        for (const auto& a : f.entries) {
            auto vr = valuation_and_reduce(pl, a);
            if (vr.v % 2 == 0) res.push_back(vr.residue);
        }
        if (!res.empty()) {
            DiagForm rf{B, res, std::nullopt, false};
            std::string sub;
            Tri t = witt_trivial(rf, &sub, depth + 1);
            if (t == Tri::No) {
                if (why) *why = "constant part nontrivial: " + sub;
                return Tri::No;
            }
            result = tri_and(result, t);
        }
    }
    if (why && result == Tri::Yes) *why = "all second residues and the constant part vanish";
    return result;
}

}  // namespace detail

inline Tri witt_trivial(const DiagForm& f, std::string* why, int depth) {
    if (depth > 8) return Tri::Unknown;
    const Field& K = f.F;
    if (f.rank() == 0) return Tri::Yes;
    if (is_finite_field(K)) return detail::trivial_finite(f, why);
    if (K->kind == FieldKind::Rationals) return detail::trivial_rationals(f, why);
    if (K->kind == FieldKind::FuncField) {
        if (is_finite_field(K->base)) return detail::trivial_funcfield(f, why, depth);
        if (K->base->kind == FieldKind::Rationals) {
            try {
                return detail::trivial_funcfield(f, why, depth);
            } catch (const error& e) {
                if (e.code() == "FactorizationNeeded") {
                    if (why) *why = e.what();
                    return Tri::Unknown;
                }
                throw;
            }
        }
    }
    // extensions without a decision procedure: rank parity is still an invariant
    if (f.rank() % 2) {
        if (why) *why = "odd rank";
        return Tri::No;
    }
    // cancel obvious <a,-a s^2> pairs; empty leftover certifies triviality
    std::vector<FieldElem> left = f.entries;
    bool changed = true;
    while (changed && left.size() >= 2) {
        changed = false;
        for (size_t i = 0; i < left.size() && !changed; ++i)
            for (size_t j = i + 1; j < left.size() && !changed; ++j) {
                auto c = is_square(f_neg(f_div(left[i], left[j])));
                if (c.verdict == SquareCheck::Yes) {
                    left.erase(left.begin() + j);
                    left.erase(left.begin() + i);
                    changed = true;
                }
            }
    }
    if (left.empty()) {
        if (why) *why = "explicit hyperbolic splitting";
        return Tri::Yes;
    }
    if (why) *why = "no decision procedure over " + field_name(K);
    return Tri::Unknown;
}

// --- public operations -----------------------------------------------------------

struct WittVerdict {
    Tri verdict;
    std::string certificate;
};

inline WittVerdict witt_equal(const DiagForm& f, const DiagForm& g) {
    if (!same_field(f.F, g.F)) fail("MixedFields", "witt_equal across different fields");
    bool ft = f.twist.has_value(), gt = g.twist.has_value();
    if (ft != gt || (ft && !f.twist->same(*g.twist)))
        fail("TwistMismatch", "forms carry different twist symbols");
    DiagForm h{f.F, f.entries, std::nullopt, false};
    for (const auto& a : g.entries) h.entries.push_back(f_neg(a));
    std::string why;
    Tri t = witt_trivial(h, &why);
    switch (t) {
        case Tri::Yes: return {Tri::Yes, "difference is Witt-trivial: " + why};
        case Tri::No: return {Tri::No, "difference is nontrivial: " + why};
        default: return {Tri::Unknown, why};
    }
}

inline WittVerdict witt_is_zero(const DiagForm& f) {
    DiagForm zero{f.F, {}, f.twist, false};
    return witt_equal(f, zero);
}

// Split one hyperbolic plane off a diagonal form, given an isotropic vector.
inline DiagForm split_isotropic(const DiagForm& f, const std::vector<FieldElem>& v) {
    const Field& K = f.F;
    size_t n = f.rank();
    Mat G(K, n, n);
    for (size_t i = 0; i < n; ++i) G(i, i) = f.entries[i];
    // check isotropy exactly
    FieldElem val = F_zero(K);
    for (size_t i = 0; i < n; ++i) val = f_add(val, f_mul(f.entries[i], f_mul(v[i], v[i])));
    if (!f_is_zero(val)) fail("BadInput", "vector is not isotropic");
    // w with B(v,w) != 0
    size_t wi = 0;
    while (wi < n && f_is_zero(f_mul(f.entries[wi], v[wi]))) ++wi;
    if (wi == n) fail("SingularGram", "isotropic vector lies in the radical");
    // basis: v, e_wi, then complete; Gram in that basis, then diagonalize the
    // complement of the hyperbolic plane spanned by (v, e_wi).
    std::vector<std::vector<FieldElem>> basis;
    basis.push_back(v);
    std::vector<FieldElem> w(n, F_zero(K));
    w[wi] = F_one(K);
    basis.push_back(w);
    Mat probe(K, n, 2);
    for (size_t i = 0; i < n; ++i) {
        probe(i, 0) = v[i];
        probe(i, 1) = w[i];
    }
    for (size_t e = 0; e < n && basis.size() < n; ++e) {
        Mat trial(K, n, basis.size() + 1);
        for (size_t j = 0; j < basis.size(); ++j)
            for (size_t i = 0; i < n; ++i) trial(i, j) = basis[j][i];
        for (size_t i = 0; i < n; ++i) trial(i, basis.size()) = (i == e) ? F_one(K) : F_zero(K);
        if (mat_rank(trial) == basis.size() + 1) {
            std::vector<FieldElem> be(n, F_zero(K));
            be[e] = F_one(K);
            basis.push_back(be);
        }
    }
    Mat C(K, n, n);
    for (size_t j = 0; j < n; ++j)
        for (size_t i = 0; i < n; ++i) C(i, j) = basis[j][i];
    Mat H = C.transpose() * G * C;
    // make columns 2..n orthogonal to the plane span(b0,b1)
    // plane Gram: [[0, c],[c, d]] with c = B(v,w) != 0
    FieldElem c = H(0, 1), d = H(1, 1);
    FieldElem ic = f_inv(c);
    Mat C2 = Mat::identity(K, n);
    for (size_t j = 2; j < n; ++j) {
        // subtract components along the plane: x -> x - alpha*b0 - beta*b1
        // with beta = B(b0,x)/c, alpha = (B(b1,x) - d*beta)/c
        FieldElem beta = f_mul(H(0, j), ic);
        FieldElem alpha = f_mul(f_sub(H(1, j), f_mul(d, beta)), ic);
        C2(0, j) = f_neg(alpha);
        C2(1, j) = f_neg(beta);
    }
    Mat Cfull = C * C2;
    Mat H2 = Cfull.transpose() * G * Cfull;
    // the complement block is H2[2.., 2..]; diagonalize it
    Mat comp(K, n - 2, n - 2);
    for (size_t i = 2; i < n; ++i)
        for (size_t j = 2; j < n; ++j) comp(i - 2, j - 2) = H2(i, j);
    auto [diag, cc] = sym_diagonalize(comp);
    std::vector<FieldElem> entries;
    for (const auto& x : diag) {
        if (f_is_zero(x)) fail("SingularGram", "degenerate complement");
        entries.push_back(x);
    }
    return DiagForm{K, entries, f.twist, f.partial};
}

// Search for an isotropic vector. Finite fields: systematic enumeration on
// pairs/triples. Q: bounded height search. Returns nullopt when not found
// within the budget.
inline std::optional<std::vector<FieldElem>> find_isotropic(const DiagForm& f, int budget = 8) {
    const Field& K = f.F;
    size_t n = f.rank();
    if (n < 2) return std::nullopt;
    // pairs: a_i + a_j x^2 = 0
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) {
            auto c = is_square(f_neg(f_div(f.entries[i], f.entries[j])));
            if (c.verdict == SquareCheck::Yes) {
                std::vector<FieldElem> v(n, F_zero(K));
                v[i] = F_one(K);
                v[j] = c.root;
                return v;
            }
        }
    if (is_finite_field(K) && n >= 3) {
        // a_0 x^2 + a_1 y^2 + a_2 = -z-part: enumerate x, solve for y
        std::vector<FieldElem> elems;
        enumerate_field(K, elems);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j)
                for (size_t k = j + 1; k < n; ++k)
                    for (const auto& x : elems) {
                        FieldElem target =
                            f_neg(f_add(f.entries[k], f_mul(f.entries[i], f_mul(x, x))));
                        auto c = is_square(f_div(target, f.entries[j]));
                        if (c.verdict == SquareCheck::Yes) {
                            std::vector<FieldElem> v(n, F_zero(K));
                            v[i] = x;
                            v[j] = c.root;
                            v[k] = F_one(K);
                            return v;
                        }
                    }
        return std::nullopt;
    }
    if (K->kind == FieldKind::Rationals) {
        for (int h = 1; h <= budget; ++h) {
            std::vector<long> x(n, 0);
            // odometer over {-h..h}^n with at least one coordinate = +-h
            std::vector<long> idx(n, -h);
            while (true) {
                bool at_h = false;
                for (size_t i = 0; i < n; ++i)
                    if (idx[i] == h || idx[i] == -h) at_h = true;
                if (at_h) {
                    Rat s(0);
                    for (size_t i = 0; i < n; ++i) s += f.entries[i].q * Rat(idx[i]) * Rat(idx[i]);
                    bool nonzero_vec = false;
                    for (size_t i = 0; i < n; ++i)
                        if (idx[i] != 0) nonzero_vec = true;
                    if (s == 0 && nonzero_vec) {
                        std::vector<FieldElem> v;
                        for (size_t i = 0; i < n; ++i) v.push_back(F_rat(K, Rat(idx[i])));
                        return v;
                    }
                }
                size_t k = 0;
                while (k < n && ++idx[k] > h) idx[k++] = -h;
                if (k == n) break;
            }
        }
        return std::nullopt;
    }
    return std::nullopt;
}

// Remove hyperbolic content: <a,-a s^2> pairs always; full anisotropic
// reduction over fields with decidable isotropy.
inline DiagForm witt_reduce(DiagForm f) {
    const Field& K = f.F;
    bool changed = true;
    while (changed && f.rank() >= 2) {
        changed = false;
        for (size_t i = 0; i < f.rank() && !changed; ++i)
            for (size_t j = i + 1; j < f.rank() && !changed; ++j) {
                auto c = is_square(f_neg(f_div(f.entries[i], f.entries[j])));
                if (c.verdict == SquareCheck::Yes) {
                    f.entries.erase(f.entries.begin() + j);
                    f.entries.erase(f.entries.begin() + i);
                    changed = true;
                }
            }
        if (changed) continue;
        if (f.rank() < 2) break;
        bool decidable_anisotropy = false;
        if (is_finite_field(K)) {
            decidable_anisotropy = true;
        } else if (K->kind == FieldKind::Rationals) {
            std::vector<Rat> d;
            for (const auto& a : f.entries) d.push_back(a.q);
            if (!qp::isotropic_over_Q(d)) break;  // certified anisotropic
            decidable_anisotropy = true;
        }
        auto v = find_isotropic(f, 10);
        if (v) {
            f = split_isotropic(f, *v);
            changed = true;
        } else if (decidable_anisotropy && is_finite_field(K)) {
            break;  // exhaustive search found nothing: anisotropic
        } else if (decidable_anisotropy) {
            f.partial = true;  // isotropic but no small vector found
            break;
        } else {
            f.partial = true;
            break;
        }
    }
    return f;
}

inline DiagForm form_sum(const DiagForm& f, const DiagForm& g) {
    if (!same_field(f.F, g.F)) fail("MixedFields", "orthogonal sum across fields");
    bool ft = f.twist.has_value(), gt = g.twist.has_value();
    if (ft != gt || (ft && !f.twist->same(*g.twist))) fail("TwistMismatch", "orthogonal sum across twists");
    DiagForm h = f;
    for (const auto& a : g.entries) h.entries.push_back(a);
    h.partial = false;
    return h;
}

inline DiagForm form_scale(const DiagForm& f, const FieldElem& c) {
    if (!same_field(f.F, c.f)) fail("MixedFields", "scaling by an element of another field");
    if (f_is_zero(c)) fail("ZeroScalar", "scaling a form by zero");
    DiagForm h = f;
    for (auto& a : h.entries) a = f_mul(a, c);
    h.partial = false;
    return h;
}

inline DiagForm form_neg(const DiagForm& f) { return form_scale(f, F_int(f.F, -1)); }

// Congruence diagonalization of a symmetric Gram matrix; the change of basis
// C with C^T G C diagonal is returned as a certificate.
struct DiagonalizeResult {
    DiagForm form;
    Mat basis;
};

inline DiagonalizeResult diagonalize_gram(const Mat& G, std::optional<TwistSymbol> twist = std::nullopt) {
    const Field& K = G.field();
    if (G.rows() != G.cols()) fail("DimensionMismatch", "Gram matrix not square");
    for (size_t i = 0; i < G.rows(); ++i)
        for (size_t j = 0; j < G.cols(); ++j)
            if (!f_eq(G(i, j), G(j, i))) fail("BadInput", "Gram matrix not symmetric");
    if (f_is_zero(mat_det(G))) fail("SingularGram", "Gram matrix is singular");
    auto [d, c] = sym_diagonalize(G);
    std::vector<FieldElem> entries;
    for (const auto& x : d) entries.push_back(x);
    DiagForm f{K, entries, std::move(twist), false};
    return {f, c};
}

// --- fingerprints ------------------------------------------------------------------

// Stable Witt-class invariants of the anisotropic representative.
inline std::string witt_fingerprint(const DiagForm& f0) {
    DiagForm f = witt_reduce(f0);
    const Field& K = f.F;
    std::string s = "dim_mod2=" + std::to_string(f.rank() % 2);
    FieldElem det = F_one(K);
    for (const auto& a : f.entries) det = f_mul(det, a);
    size_t n = f.rank();
    if (((n * (n - 1) / 2) % 2) == 1) det = f_neg(det);
    if (n == 0) {
        s += ";disc=1";
    } else if (is_finite_field(K)) {
        s += ";disc=" + std::string(is_square(det).verdict == SquareCheck::Yes ? "sq" : "nonsq");
    } else if (K->kind == FieldKind::Rationals) {
        // squarefree integer representative of the square class
        Int m = det.q.get_num() * det.q.get_den();
        Int sf = m < 0 ? -1 : 1;
        m = abs(m);
        for (Int d = 2; d * d <= m; ++d) {
            int e = 0;
            while (int_mod(m, d) == 0) {
                m /= d;
                ++e;
            }
            if (e % 2) sf *= d;
        }
        sf *= m;
        s += ";disc=" + sf.get_str();
        int sig = 0;
        for (const auto& a : f.entries) sig += a.q > 0 ? 1 : -1;
        s += ";sig=" + std::to_string(sig);
        std::vector<Rat> d;
        for (const auto& a : f.entries) d.push_back(a.q);
        std::vector<Int> ps = {2};
        for (const auto& x : d)
            for (const auto& p : qp::odd_prime_divisors(x))
                if (std::find(ps.begin(), ps.end(), p) == ps.end()) ps.push_back(p);
        std::string neg;
        for (const auto& p : ps)
            if (qp::hasse(d, p) < 0) neg += (neg.empty() ? "" : ",") + p.get_str();
        if (qp::hasse(d, 0) < 0) neg += (neg.empty() ? "" : ",") + std::string("inf");
        s += ";hasse-=" + (neg.empty() ? "none" : neg);
    } else if (K->kind == FieldKind::FuncField && is_finite_field(K->base)) {
        // canonical square-class representative: unit class times the
        // squarefree part of num*den, computed by factorization
        Rng rng(0xD15C);
        UPoly m = up_mul(K->base, det.num, det.den);
        auto fac = up_factor(K->base, m, rng);
        s += ";disc-unit=" + std::string(is_square(fac.unit).verdict == SquareCheck::Yes ? "sq" : "nonsq");
        std::string parts;
        for (const auto& [pi, mult] : fac.factors)
            if (mult % 2) parts += (parts.empty() ? "" : "*") + up_str(pi, K->gen);
        s += ";disc-sqfree=" + (parts.empty() ? "1" : parts);
    } else {
        s += ";rep=" + f.str() + (f.partial ? ";partial" : "");
    }
    if (f0.twist) s += ";twist=" + f0.twist->str();
    return s;
}

struct WittClass {
    DiagForm representative;
    std::string fingerprint;
};

inline WittClass make_witt_class(const DiagForm& f) { return {witt_reduce(f), witt_fingerprint(f)}; }

}  // namespace gwc
