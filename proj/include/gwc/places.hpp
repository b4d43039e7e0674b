#pragma once

// Discrete valuations on Q and on rational function fields, with exact
// residue maps, plus Chinese remaindering in Z and F[t].

#include <string>
#include <utility>
#include <vector>

#include "gwc/field.hpp"

namespace gwc {

// A place of Q (uniformizer = odd prime p) or of base(t) (uniformizer = a
// monic irreducible polynomial pi).
struct ValuedPlace {
    enum Kind { RatPrime, PolyPrime } kind;
    Field field;          // Q or a FuncField
    Int p;                // RatPrime
    UPoly pi;             // PolyPrime, monic, coefficients over field->base
    Field residue_field;  // computed at construction

    std::string str() const {
        if (kind == RatPrime) return "(" + p.get_str() + ")";
        return "(" + up_str(pi, field->gen) + ")";
    }
};

inline ValuedPlace place_of_prime(const Field& Q, const Int& p) {
    if (Q->kind != FieldKind::Rationals) fail("BadInput", "rational place needs Q");
    if (p == 2) fail("UnsupportedRing", "residue characteristic 2 is out of scope");
    if (!int_is_prime(p)) fail("BadInput", p.get_str() + " is not prime");
    ValuedPlace v;
    v.kind = ValuedPlace::RatPrime;
    v.field = Q;
    v.p = p;
    v.residue_field = GF(p);
    return v;
}

inline ValuedPlace place_of_poly(const Field& K, UPoly pi, const std::string& resvar = "u") {
    if (K->kind != FieldKind::FuncField) fail("BadInput", "polynomial place needs a function field");
    up_trim(pi);
    if (up_deg(pi) < 1) fail("BadInput", "uniformizer must be nonconstant");
    pi = up_monic(pi);
    ValuedPlace v;
    v.kind = ValuedPlace::PolyPrime;
    v.field = K;
    v.pi = pi;
    if (up_deg(pi) == 1) {
        v.residue_field = K->base;  // evaluation at the rational point
    } else {
        v.residue_field = simple_ext(K->base, pi, resvar);
    }
    return v;
}

inline int up_valuation(const Field& B, UPoly f, const UPoly& pi, UPoly& cofactor) {
    if (f.empty()) fail("ZeroInput", "valuation of zero polynomial");
    int v = 0;
    while (true) {
        UPoly q, r;
        up_divrem(B, f, pi, q, r);
        if (!r.empty()) break;
        f = std::move(q);
        ++v;
    }
    cofactor = std::move(f);
    return v;
}

struct ValuationResult {
    int v = 0;
    FieldElem unit;     // a = pi^v * unit, unit a valuation-unit
    FieldElem residue;  // image of unit in the residue field
};

// reduce a valuation-unit of K into the residue field of the place
inline FieldElem residue_of_unit(const ValuedPlace& pl, const FieldElem& u) {
    if (pl.kind == ValuedPlace::RatPrime) {
        Int n = int_mod(u.q.get_num(), pl.p);
        Int d = int_mod(u.q.get_den(), pl.p);
        if (d == 0) fail("BadInput", "not a valuation unit");
        return f_div(F_int(pl.residue_field, n), F_int(pl.residue_field, d));
    }
    const Field& B = pl.field->base;
    UPoly rn = up_mod(B, u.num, pl.pi);
    UPoly rd = up_mod(B, u.den, pl.pi);
    if (rd.empty()) fail("BadInput", "not a valuation unit");
    if (up_deg(pl.pi) == 1) {
        FieldElem pt = f_neg(pl.pi[0]);  // root of the monic linear pi
        return f_div(up_eval(B, rn, pt), up_eval(B, rd, pt));
    }
    return f_div(F_extcoef(pl.residue_field, rn), F_extcoef(pl.residue_field, rd));
}

inline ValuationResult valuation_and_reduce(const ValuedPlace& pl, const FieldElem& a) {
    if (f_is_zero(a)) fail("ZeroInput", "valuation of zero");
    if (!same_field(pl.field, a.f)) fail("MixedFields", "element not in the place's field");
    ValuationResult out;
    if (pl.kind == ValuedPlace::RatPrime) {
        Int n = a.q.get_num(), d = a.q.get_den();
        Int cn, cd;
        int vn = (n == 0) ? 0 : int_valuation(n, pl.p, cn);
        int vd = int_valuation(d, pl.p, cd);
        out.v = vn - vd;
        out.unit = F_rat(a.f, Rat(cn, cd));
        out.residue = residue_of_unit(pl, out.unit);
        return out;
    }
    const Field& B = pl.field->base;
    UPoly cn, cd;
    int vn = up_valuation(B, a.num, pl.pi, cn);
    int vd = up_valuation(B, a.den, pl.pi, cd);
    out.v = vn - vd;
    out.unit = F_ratfunc(pl.field, cn, cd);
    out.residue = residue_of_unit(pl, out.unit);
    return out;
}

// --- Chinese remaindering in F[t] ---------------------------------------------

// Solves x = r[i] mod m[i] for pairwise coprime monic moduli; result reduced
// mod the product.
inline UPoly crt_polys(const Field& B, const std::vector<UPoly>& moduli, const std::vector<UPoly>& residues) {
    if (moduli.size() != residues.size() || moduli.empty()) fail("BadInput", "crt: size mismatch");
    UPoly x = up_mod(B, residues[0], moduli[0]);
    UPoly m = moduli[0];
    for (size_t i = 1; i < moduli.size(); ++i) {
        UPoly u, v;
        UPoly g = up_xgcd(B, m, moduli[i], u, v);
        if (up_deg(g) != 0)
            fail("NotComaximal", "crt: moduli share the factor " + up_str(g, "t"));
        // g is the constant 1 after normalization inside up_xgcd
        UPoly diff = up_sub(B, residues[i], x);
        UPoly corr = up_mul(B, up_mul(B, m, u), diff);
        m = up_mul(B, m, moduli[i]);
        x = up_mod(B, up_add(B, x, corr), m);
    }
    return x;
}

}  // namespace gwc
