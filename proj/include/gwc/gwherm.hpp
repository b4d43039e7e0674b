#pragma once

// Residues of diagonal epsilon-hermitian classes with constant coefficient
// algebras over a Dedekind ring: entries live in A tensor Frac(R), and the
// classical rule applies coordinatewise. This is the desk-scale surface
// behind the functoriality of the complex in the coefficient algebra.

#include <optional>
#include <string>
#include <vector>

#include "gwc/hermitian.hpp"
#include "gwc/places.hpp"

namespace gwc {

// the same algebra with scalars moved from K = Frac(R) to the residue field
inline Algebra algebra_at_place(const Algebra& AK, const ValuedPlace& pl) {
    auto down = [&](const FieldElem& x) {
        auto vr = valuation_and_reduce(pl, x);
        if (vr.v != 0) fail("BadInput", "algebra constant is not a unit at the place");
        return vr.residue;
    };
    switch (AK.kind) {
        case AlgKind::Commutative: return alg_field(pl.residue_field);
        case AlgKind::QuadEtale: return alg_quadetale(pl.residue_field, down(AK.a));
        case AlgKind::Quaternion: return alg_quaternion(pl.residue_field, down(AK.a), down(AK.b));
        case AlgKind::Mat2: return alg_mat2(pl.residue_field);
    }
    fail("Internal", "algebra_at_place");
}

inline int ae_min_valuation(const ValuedPlace& pl, const AElem& x) {
    bool found = false;
    int v = 0;
    for (const auto& c : x.c) {
        if (f_is_zero(c)) continue;
        auto vr = valuation_and_reduce(pl, c);
        if (!found || vr.v < v) v = vr.v;
        found = true;
    }
    if (!found) fail("ZeroInput", "valuation of the zero algebra element");
    return v;
}

inline AElem ae_reduce_at(const Algebra& Ak, const ValuedPlace& pl, const AElem& x) {
    AElem r = ae_zero(Ak);
    for (size_t t = 0; t < x.c.size(); ++t) {
        if (f_is_zero(x.c[t])) continue;
        auto vr = valuation_and_reduce(pl, x.c[t]);
        if (vr.v < 0) fail("BadInput", "entry is not integral at the place");
        if (vr.v == 0) r.c[t] = vr.residue;
    }
    return r;
}

struct HermResidue {
    TwistSymbol sym;
    HermSpace cls;  // over the constant algebra at the residue field
};

// second residue of a diagonal hermitian class at a place of Frac(R); the
// involution must be constant (identity or canonical, possibly Int(u) with a
// unit u whose coordinates are integral units at the place).
inline HermResidue residue_dvr_herm(const HermSpace& h, const ValuedPlace& pl) {
    herm_validate(h);
    const Algebra& AK = h.A;
    FieldElem piK = pl.kind == ValuedPlace::RatPrime
                        ? F_rat(pl.field, Rat(pl.p))
                        : F_poly(pl.field, pl.pi);
    Algebra Ak = algebra_at_place(AK, pl);
    Involution invk = h.inv;
    if (invk.kind == Involution::IntUCanonical) {
        if (ae_min_valuation(pl, invk.u) != 0)
            fail("BadInput", "involution twist is not a unit at the place");
        invk.u = ae_reduce_at(Ak, pl, invk.u);
    }
    TwistSymbol sym{{pl.kind == ValuedPlace::RatPrime ? pl.p.get_str() : up_str(pl.pi, pl.field->gen)},
                    1};
    std::vector<AElem> entries;
    for (size_t i = 0; i < h.rank(); ++i) {
        for (size_t j = 0; j < h.rank(); ++j)
            if (i != j && !ae_is_zero(h.gram[i][j]))
                fail("BadInput", "hermitian residues need a diagonal Gram at desk scale");
        const AElem& a = h.gram[i][i];
        int v = ae_min_valuation(pl, a);
        AElem unit = a;
        for (auto& c : unit.c) c = f_div(c, f_pow(piK, Int(v)));
        AElem red = ae_reduce_at(Ak, pl, unit);
        if (!ae_inv(Ak, red)) fail("BadInput", "entry unit part does not reduce to a unit");
        if (v % 2 != 0) entries.push_back(red);
    }
    HermSpace out;
    out.A = Ak;
    out.inv = invk;
    out.eps = h.eps;
    out.twist = sym;
    out.gram.assign(entries.size(), std::vector<AElem>(entries.size(), ae_zero(Ak)));
    for (size_t i = 0; i < entries.size(); ++i) out.gram[i][i] = entries[i];
    herm_validate(out);
    return {sym, out};
}

}  // namespace gwc
