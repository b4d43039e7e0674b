#pragma once

// The supported field tower: Q, F_p (p odd), simple extensions (quadratic
// extensions and the residue fields F_{p^k} they generalize to), rational
// function fields, and function fields of plane curves (modeled as a simple
// extension of base(x) by a relation monic in y).
//
// Every element is held in a canonical reduced form, so equality is
// structural. All operations are pure; descriptors are immutable and shared.

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gwc/ints.hpp"

namespace gwc {

enum class FieldKind { Rationals, PrimeField, SimpleExt, FuncField };

struct FieldDesc;
using Field = std::shared_ptr<const FieldDesc>;

struct FieldElem;
using UPoly = std::vector<FieldElem>;  // dense, index = exponent, trimmed

struct FieldDesc {
    FieldKind kind;
    Int p;            // PrimeField
    Field base;       // SimpleExt, FuncField
    UPoly minpoly;    // SimpleExt: monic over base, degree >= 1
    std::string gen;  // SimpleExt: adjoined generator; FuncField: variable
    // Set when this SimpleExt over a FuncField models a plane curve field
    // base(x)[y]/(g); gen is then the y-variable.
    bool is_curve = false;
    std::string curve_relation;
};

struct FieldElem {
    Field f;
    Rat q;           // Rationals payload
    Int z;           // PrimeField payload, canonical in [0, p)
    UPoly ext;       // SimpleExt payload: reduced mod minpoly, trimmed
    UPoly num, den;  // FuncField payload: gcd 1, den monic nonzero

    bool valid() const { return f != nullptr; }
};

// element ops
FieldElem f_add(const FieldElem& a, const FieldElem& b);
FieldElem f_sub(const FieldElem& a, const FieldElem& b);
FieldElem f_mul(const FieldElem& a, const FieldElem& b);
FieldElem f_neg(const FieldElem& a);
FieldElem f_inv(const FieldElem& a);
FieldElem f_div(const FieldElem& a, const FieldElem& b);
FieldElem f_pow(FieldElem a, Int e);
bool f_is_zero(const FieldElem& a);
bool f_eq(const FieldElem& a, const FieldElem& b);
std::string f_str(const FieldElem& a);

// element construction
FieldElem F_zero(const Field& K);
FieldElem F_one(const Field& K);
FieldElem F_int(const Field& K, const Int& n);
FieldElem F_rat(const Field& K, const Rat& r);
FieldElem F_gen(const Field& K);
FieldElem F_from_base(const Field& K, const FieldElem& b);

inline bool same_field(const Field& a, const Field& b);

// --- basic descriptors -------------------------------------------------------

inline Field QQ() {
    auto d = std::make_shared<FieldDesc>();
    d->kind = FieldKind::Rationals;
    return d;
}

inline Field GF(const Int& p) {
    if (p <= 2 || !int_is_prime(p)) fail("BadField", "prime field needs an odd prime, got " + p.get_str());
    auto d = std::make_shared<FieldDesc>();
    d->kind = FieldKind::PrimeField;
    d->p = p;
    return d;
}

inline Field func_field(const Field& base, const std::string& var) {
    auto d = std::make_shared<FieldDesc>();
    d->kind = FieldKind::FuncField;
    d->base = base;
    d->gen = var;
    return d;
}

// --- univariate polynomial helpers over an arbitrary field -------------------
// Coefficients of a UPoly live in the field K passed alongside it.

inline void up_trim(UPoly& p) {
    while (!p.empty() && f_is_zero(p.back())) p.pop_back();
}

inline int up_deg(const UPoly& p) { return static_cast<int>(p.size()) - 1; }

inline UPoly up_const(const FieldElem& c) {
    if (f_is_zero(c)) return {};
    return {c};
}

inline UPoly up_add(const Field& K, const UPoly& a, const UPoly& b) {
    UPoly r(std::max(a.size(), b.size()), F_zero(K));
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] = f_add(r[i], b[i]);
    up_trim(r);
    return r;
}

inline UPoly up_neg(const UPoly& a) {
    UPoly r = a;
    for (auto& c : r) c = f_neg(c);
    return r;
}

inline UPoly up_sub(const Field& K, const UPoly& a, const UPoly& b) { return up_add(K, a, up_neg(b)); }

inline UPoly up_mul(const Field& K, const UPoly& a, const UPoly& b) {
    if (a.empty() || b.empty()) return {};
    UPoly r(a.size() + b.size() - 1, F_zero(K));
    for (size_t i = 0; i < a.size(); ++i) {
        if (f_is_zero(a[i])) continue;
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = f_add(r[i + j], f_mul(a[i], b[j]));
    }
    up_trim(r);
    return r;
}

inline UPoly up_scale(const UPoly& a, const FieldElem& c) {
    if (f_is_zero(c)) return {};
    UPoly r = a;
    for (auto& x : r) x = f_mul(x, c);
    return r;
}

inline void up_divrem(const Field& K, const UPoly& a, const UPoly& b, UPoly& qout, UPoly& rout) {
    if (b.empty()) fail("DivisionByZero", "polynomial division by zero");
    UPoly r = a;
    up_trim(r);
    UPoly q;
    FieldElem ilc = f_inv(b.back());
    while (up_deg(r) >= up_deg(b)) {
        int k = up_deg(r) - up_deg(b);
        FieldElem c = f_mul(r.back(), ilc);
        if (static_cast<int>(q.size()) < k + 1) q.resize(k + 1, F_zero(K));
        q[k] = f_add(q[k], c);
        for (size_t i = 0; i < b.size(); ++i) r[i + k] = f_sub(r[i + k], f_mul(c, b[i]));
        up_trim(r);
        if (r.empty()) break;
    }
    up_trim(q);
    qout = std::move(q);
    rout = std::move(r);
}

inline UPoly up_mod(const Field& K, const UPoly& a, const UPoly& b) {
    UPoly q, r;
    up_divrem(K, a, b, q, r);
    return r;
}

inline UPoly up_div_exact(const Field& K, const UPoly& a, const UPoly& b) {
    UPoly q, r;
    up_divrem(K, a, b, q, r);
    if (!r.empty()) fail("Internal", "expected exact polynomial division");
    return q;
}

inline UPoly up_monic(const UPoly& a) {
    if (a.empty()) return a;
    return up_scale(a, f_inv(a.back()));
}

inline UPoly up_gcd(const Field& K, UPoly a, UPoly b) {
    up_trim(a);
    up_trim(b);
    while (!b.empty()) {
        UPoly r = up_mod(K, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return up_monic(a);
}

// g = u*a + v*b with g monic (or zero)
inline UPoly up_xgcd(const Field& K, const UPoly& a, const UPoly& b, UPoly& u, UPoly& v) {
    UPoly r0 = a, r1 = b;
    UPoly s0 = up_const(F_one(K)), s1 = {};
    UPoly t0 = {}, t1 = up_const(F_one(K));
    up_trim(r0);
    up_trim(r1);
    while (!r1.empty()) {
        UPoly q, r;
        up_divrem(K, r0, r1, q, r);
        UPoly s2 = up_sub(K, s0, up_mul(K, q, s1));
        UPoly t2 = up_sub(K, t0, up_mul(K, q, t1));
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (!r0.empty()) {
        FieldElem ilc = f_inv(r0.back());
        r0 = up_scale(r0, ilc);
        s0 = up_scale(s0, ilc);
        t0 = up_scale(t0, ilc);
    }
    u = s0;
    v = t0;
    return r0;
}

inline FieldElem up_eval(const Field& K, const UPoly& p, const FieldElem& x) {
    FieldElem r = F_zero(K);
    for (size_t i = p.size(); i-- > 0;) r = f_add(f_mul(r, x), p[i]);
    return r;
}

inline UPoly up_deriv(const Field& K, const UPoly& p) {
    UPoly r;
    for (size_t i = 1; i < p.size(); ++i) r.push_back(f_mul(p[i], F_int(K, Int(static_cast<long>(i)))));
    up_trim(r);
    return r;
}

inline UPoly up_powmod(const Field& K, UPoly a, Int e, const UPoly& m) {
    UPoly r = up_const(F_one(K));
    a = up_mod(K, a, m);
    while (e > 0) {
        if (int_mod(e, 2) == 1) r = up_mod(K, up_mul(K, r, a), m);
        a = up_mod(K, up_mul(K, a, a), m);
        e /= 2;
    }
    return r;
}

std::string up_str(const UPoly& p, const std::string& var);

// --- descriptor construction requiring element ops ---------------------------

inline Field simple_ext(const Field& base, const UPoly& minpoly_monic, const std::string& gen) {
    if (up_deg(minpoly_monic) < 1) fail("BadField", "extension needs degree >= 1");
    if (!f_eq(minpoly_monic.back(), F_one(base))) fail("BadField", "minimal polynomial must be monic");
    auto d = std::make_shared<FieldDesc>();
    d->kind = FieldKind::SimpleExt;
    d->base = base;
    d->minpoly = minpoly_monic;
    d->gen = gen;
    return d;
}

inline Field quad_ext(const Field& base, const FieldElem& d, const std::string& gen = "s") {
    if (f_is_zero(d)) fail("BadField", "quadratic extension by zero");
    UPoly m = {f_neg(d), F_zero(base), F_one(base)};
    return simple_ext(base, m, gen);
}

inline bool same_field(const Field& a, const Field& b) {
    if (a == b) return true;
    if (!a || !b || a->kind != b->kind) return false;
    switch (a->kind) {
        case FieldKind::Rationals: return true;
        case FieldKind::PrimeField: return a->p == b->p;
        case FieldKind::FuncField: return a->gen == b->gen && same_field(a->base, b->base);
        case FieldKind::SimpleExt: {
            if (a->gen != b->gen || !same_field(a->base, b->base)) return false;
            if (a->minpoly.size() != b->minpoly.size()) return false;
            for (size_t i = 0; i < a->minpoly.size(); ++i)
                if (!f_eq(a->minpoly[i], b->minpoly[i])) return false;
            return true;
        }
    }
    return false;
}

// --- element construction ------------------------------------------------------

inline FieldElem F_zero(const Field& K) { return F_int(K, 0); }
inline FieldElem F_one(const Field& K) { return F_int(K, 1); }

inline FieldElem F_int(const Field& K, const Int& n) {
    FieldElem e;
    e.f = K;
    switch (K->kind) {
        case FieldKind::Rationals: e.q = Rat(n); break;
        case FieldKind::PrimeField: e.z = int_mod(n, K->p); break;
        case FieldKind::SimpleExt: {
            FieldElem c = F_int(K->base, n);
            if (!f_is_zero(c)) e.ext = {c};
            break;
        }
        case FieldKind::FuncField: {
            FieldElem c = F_int(K->base, n);
            e.num = up_const(c);
            e.den = {F_one(K->base)};
            break;
        }
    }
    return e;
}

inline FieldElem F_rat(const Field& K, const Rat& r) {
    if (K->kind == FieldKind::Rationals) {
        FieldElem e;
        e.f = K;
        e.q = r;
        e.q.canonicalize();
        return e;
    }
    return f_div(F_int(K, Int(r.get_num())), F_int(K, Int(r.get_den())));
}

inline FieldElem F_gen(const Field& K) {
    FieldElem e;
    e.f = K;
    if (K->kind == FieldKind::SimpleExt) {
        e.ext = up_mod(K->base, UPoly{F_zero(K->base), F_one(K->base)}, K->minpoly);
    } else if (K->kind == FieldKind::FuncField) {
        e.num = {F_zero(K->base), F_one(K->base)};
        e.den = {F_one(K->base)};
    } else {
        fail("BadField", "field has no generator");
    }
    return e;
}

inline FieldElem F_from_base(const Field& K, const FieldElem& b) {
    if (K->kind != FieldKind::SimpleExt && K->kind != FieldKind::FuncField)
        fail("MixedFields", "not an extension field");
    if (!same_field(K->base, b.f)) fail("MixedFields", "element is not in the base field");
    FieldElem e;
    e.f = K;
    if (K->kind == FieldKind::SimpleExt) {
        e.ext = up_const(b);
    } else {
        e.num = up_const(b);
        e.den = {F_one(K->base)};
    }
    return e;
}

inline FieldElem F_ratfunc(const Field& K, UPoly n, UPoly d) {
    if (K->kind != FieldKind::FuncField) fail("MixedFields", "not a function field");
    up_trim(n);
    up_trim(d);
    if (d.empty()) fail("DivisionByZero", "zero denominator");
    if (n.empty()) return F_zero(K);
    UPoly g = up_gcd(K->base, n, d);
    if (up_deg(g) > 0) {
        n = up_div_exact(K->base, n, g);
        d = up_div_exact(K->base, d, g);
    }
    FieldElem ilc = f_inv(d.back());
    n = up_scale(n, ilc);
    d = up_scale(d, ilc);
    FieldElem e;
    e.f = K;
    e.num = std::move(n);
    e.den = std::move(d);
    return e;
}

inline FieldElem F_poly(const Field& K, UPoly n) { return F_ratfunc(K, std::move(n), {F_one(K->base)}); }

inline FieldElem F_extcoef(const Field& K, UPoly c) {
    if (K->kind != FieldKind::SimpleExt) fail("MixedFields", "not a simple extension");
    FieldElem e;
    e.f = K;
    e.ext = up_mod(K->base, c, K->minpoly);
    return e;
}

// --- arithmetic -----------------------------------------------------------------

inline void require_same(const FieldElem& a, const FieldElem& b) {
    if (!same_field(a.f, b.f)) fail("MixedFields", "operands live in different fields");
}

inline bool f_is_zero(const FieldElem& a) {
    switch (a.f->kind) {
        case FieldKind::Rationals: return a.q == 0;
        case FieldKind::PrimeField: return a.z == 0;
        case FieldKind::SimpleExt: return a.ext.empty();
        case FieldKind::FuncField: return a.num.empty();
    }
    return false;
}

inline bool f_eq(const FieldElem& a, const FieldElem& b) {
    if (!same_field(a.f, b.f)) return false;
    switch (a.f->kind) {
        case FieldKind::Rationals: return a.q == b.q;
        case FieldKind::PrimeField: return a.z == b.z;
        case FieldKind::SimpleExt: {
            if (a.ext.size() != b.ext.size()) return false;
            for (size_t i = 0; i < a.ext.size(); ++i)
                if (!f_eq(a.ext[i], b.ext[i])) return false;
            return true;
        }
        case FieldKind::FuncField: {
            if (a.num.size() != b.num.size() || a.den.size() != b.den.size()) return false;
            for (size_t i = 0; i < a.num.size(); ++i)
                if (!f_eq(a.num[i], b.num[i])) return false;
            for (size_t i = 0; i < a.den.size(); ++i)
                if (!f_eq(a.den[i], b.den[i])) return false;
            return true;
        }
    }
    return false;
}

inline FieldElem f_add(const FieldElem& a, const FieldElem& b) {
    require_same(a, b);
    FieldElem e;
    e.f = a.f;
    switch (a.f->kind) {
        case FieldKind::Rationals: e.q = a.q + b.q; return e;
        case FieldKind::PrimeField: e.z = int_mod(a.z + b.z, a.f->p); return e;
        case FieldKind::SimpleExt: e.ext = up_add(a.f->base, a.ext, b.ext); return e;
        case FieldKind::FuncField: {
            const Field& B = a.f->base;
            UPoly n = up_add(B, up_mul(B, a.num, b.den), up_mul(B, b.num, a.den));
            return F_ratfunc(a.f, std::move(n), up_mul(B, a.den, b.den));
        }
    }
    fail("Internal", "f_add");
}

inline FieldElem f_neg(const FieldElem& a) {
    FieldElem e;
    e.f = a.f;
    switch (a.f->kind) {
        case FieldKind::Rationals: e.q = -a.q; break;
        case FieldKind::PrimeField: e.z = int_mod(-a.z, a.f->p); break;
        case FieldKind::SimpleExt: e.ext = up_neg(a.ext); break;
        case FieldKind::FuncField:
            e.num = up_neg(a.num);
            e.den = a.den;
            break;
    }
    return e;
}

inline FieldElem f_sub(const FieldElem& a, const FieldElem& b) { return f_add(a, f_neg(b)); }

inline FieldElem f_mul(const FieldElem& a, const FieldElem& b) {
    require_same(a, b);
    FieldElem e;
    e.f = a.f;
    switch (a.f->kind) {
        case FieldKind::Rationals: e.q = a.q * b.q; return e;
        case FieldKind::PrimeField: e.z = int_mod(a.z * b.z, a.f->p); return e;
        case FieldKind::SimpleExt:
            e.ext = up_mod(a.f->base, up_mul(a.f->base, a.ext, b.ext), a.f->minpoly);
            return e;
        case FieldKind::FuncField: {
            const Field& B = a.f->base;
            return F_ratfunc(a.f, up_mul(B, a.num, b.num), up_mul(B, a.den, b.den));
        }
    }
    fail("Internal", "f_mul");
}

inline FieldElem f_inv(const FieldElem& a) {
    if (f_is_zero(a)) fail("DivisionByZero", "inverse of zero");
    FieldElem e;
    e.f = a.f;
    switch (a.f->kind) {
        case FieldKind::Rationals: e.q = 1 / a.q; return e;
        case FieldKind::PrimeField: {
            Int x, y;
            Int g = int_xgcd(a.z, a.f->p, x, y);
            if (g != 1) fail("DivisionByZero", "non-invertible residue");
            e.z = int_mod(x, a.f->p);
            return e;
        }
        case FieldKind::SimpleExt: {
            UPoly u, v;
            UPoly g = up_xgcd(a.f->base, a.ext, a.f->minpoly, u, v);
            if (up_deg(g) != 0) fail("DivisionByZero", "element not invertible modulo the relation");
            e.ext = up_mod(a.f->base, u, a.f->minpoly);
            return e;
        }
        case FieldKind::FuncField: return F_ratfunc(a.f, a.den, a.num);
    }
    fail("Internal", "f_inv");
}

inline FieldElem f_div(const FieldElem& a, const FieldElem& b) { return f_mul(a, f_inv(b)); }

inline FieldElem f_pow(FieldElem a, Int e) {
    if (e < 0) {
        a = f_inv(a);
        e = -e;
    }
    FieldElem r = F_one(a.f);
    while (e > 0) {
        if (int_mod(e, 2) == 1) r = f_mul(r, a);
        a = f_mul(a, a);
        e /= 2;
    }
    return r;
}

enum class FieldOp { Add, Mul, Neg, Inv };

inline FieldElem field_ops(const FieldElem& a, const FieldElem& b, FieldOp op) {
    switch (op) {
        case FieldOp::Add: return f_add(a, b);
        case FieldOp::Mul: return f_mul(a, b);
        case FieldOp::Neg: return f_neg(a);
        case FieldOp::Inv: return f_inv(a);
    }
    fail("BadInput", "unknown op");
}

// --- printing --------------------------------------------------------------------

inline std::string up_str(const UPoly& p, const std::string& var) {
    if (p.empty()) return "0";
    std::string s;
    for (size_t i = p.size(); i-- > 0;) {
        if (f_is_zero(p[i])) continue;
        std::string c = f_str(p[i]);
        if (!s.empty()) {
            bool neg = !c.empty() && c[0] == '-';
            s += neg ? " - " : " + ";
            if (neg) c = c.substr(1);
        }
        bool composite = c.find_first_of("+-", 1) != std::string::npos || c.find(' ') != std::string::npos;
        if (i == 0) {
            s += composite ? "(" + c + ")" : c;
        } else {
            std::string mono = var + (i > 1 ? "^" + std::to_string(i) : "");
            if (c == "1")
                s += mono;
            else if (c == "-1")
                s += "-" + mono;
            else
                s += (composite ? "(" + c + ")" : c) + "*" + mono;
        }
    }
    return s.empty() ? "0" : s;
}

inline std::string f_str(const FieldElem& a) {
    switch (a.f->kind) {
        case FieldKind::Rationals: return a.q.get_str();
        case FieldKind::PrimeField: return a.z.get_str();
        case FieldKind::SimpleExt: return up_str(a.ext, a.f->gen);
        case FieldKind::FuncField: {
            std::string n = up_str(a.num, a.f->gen);
            if (up_deg(a.den) == 0 && f_eq(a.den[0], F_one(a.f->base))) return n;
            std::string d = up_str(a.den, a.f->gen);
            bool np = n.find_first_of("+ ") != std::string::npos || n.find_first_of("-", 1) != std::string::npos;
            bool dp = d.find_first_of("+- *^") != std::string::npos;
            return (np ? "(" + n + ")" : n) + "/" + (dp ? "(" + d + ")" : d);
        }
    }
    return "?";
}

inline std::string field_name(const Field& K) {
    switch (K->kind) {
        case FieldKind::Rationals: return "Q";
        case FieldKind::PrimeField: return "F" + K->p.get_str();
        case FieldKind::FuncField: return field_name(K->base) + "(" + K->gen + ")";
        case FieldKind::SimpleExt:
            if (K->is_curve)
                return field_name(K->base->base) + "(" + K->base->gen + "," + K->gen + " : " +
                       K->curve_relation + ")";
            return field_name(K->base) + "[" + K->gen + "]/(" + up_str(K->minpoly, K->gen) + ")";
    }
    return "?";
}

// --- size / characteristic --------------------------------------------------------

inline Int field_char(const Field& K) {
    switch (K->kind) {
        case FieldKind::Rationals: return 0;
        case FieldKind::PrimeField: return K->p;
        default: return field_char(K->base);
    }
}

inline Int field_card(const Field& K) {  // 0 when infinite
    switch (K->kind) {
        case FieldKind::Rationals: return 0;
        case FieldKind::PrimeField: return K->p;
        case FieldKind::FuncField: return 0;
        case FieldKind::SimpleExt: {
            Int b = field_card(K->base);
            if (b == 0) return 0;
            return int_pow(b, static_cast<unsigned long>(up_deg(K->minpoly)));
        }
    }
    return 0;
}

inline bool is_finite_field(const Field& K) { return field_card(K) != 0; }

inline void enumerate_field(const Field& K, std::vector<FieldElem>& out) {
    if (K->kind == FieldKind::PrimeField) {
        for (Int i = 0; i < K->p; ++i) out.push_back(F_int(K, i));
        return;
    }
    if (K->kind == FieldKind::SimpleExt && is_finite_field(K)) {
        std::vector<FieldElem> base_elems;
        enumerate_field(K->base, base_elems);
        size_t d = static_cast<size_t>(up_deg(K->minpoly));
        std::vector<size_t> idx(d, 0);
        while (true) {
            UPoly c;
            for (size_t i = 0; i < d; ++i) c.push_back(base_elems[idx[i]]);
            up_trim(c);
            FieldElem e;
            e.f = K;
            e.ext = std::move(c);
            out.push_back(e);
            size_t k = 0;
            while (k < d) {
                if (++idx[k] < base_elems.size()) break;
                idx[k] = 0;
                ++k;
            }
            if (k == d) break;
        }
        return;
    }
    fail("BadField", "enumeration needs a finite field");
}

// --- squarefree decomposition (Musser, with p-th roots over perfect fields) --------

inline UPoly up_pth_root(const Field& K, const UPoly& f, const Int& p) {
    unsigned long pl = p.get_ui();
    Int q = field_card(K);
    if (q == 0) fail("Internal", "p-th root needs a finite coefficient field");
    UPoly g;
    for (size_t i = 0; i < f.size(); i += pl) g.push_back(f_pow(f[i], q / p));
    up_trim(g);
    return g;
}

inline std::vector<std::pair<UPoly, int>> up_squarefree(const Field& K, UPoly f) {
    std::vector<std::pair<UPoly, int>> out;
    up_trim(f);
    if (up_deg(f) <= 0) return out;
    f = up_monic(f);
    Int p = field_char(K);

    UPoly df = up_deriv(K, f);
    if (df.empty()) {
        auto inner = up_squarefree(K, up_pth_root(K, f, p));
        for (auto& [fac, mult] : inner) out.push_back({fac, mult * static_cast<int>(p.get_ui())});
        return out;
    }
    UPoly g = up_gcd(K, f, df);  // carries mult-1 copies (p∤m) and full copies (p|m)
    UPoly w = up_div_exact(K, f, g);
    int i = 1;
    while (up_deg(w) > 0) {
        UPoly y = up_gcd(K, w, g);
        UPoly z = up_div_exact(K, w, y);
        if (up_deg(z) > 0) out.push_back({z, i});
        w = std::move(y);
        if (up_deg(g) > 0 && up_deg(w) > 0) g = up_div_exact(K, g, w);
        ++i;
        if (i > 512) fail("Internal", "squarefree decomposition did not converge");
    }
    if (up_deg(g) > 0) {
        // remaining factors have p-divisible multiplicity
        auto inner = up_squarefree(K, up_pth_root(K, g, p));
        for (auto& [fac, mult] : inner) out.push_back({fac, mult * static_cast<int>(p.get_ui())});
    }
    return out;
}

// --- square testing -----------------------------------------------------------------

struct SquareCheck {
    enum Verdict { Yes, No, Unknown } verdict;
    FieldElem root;
    std::string reason;
};

namespace detail {

// Tonelli-Shanks over any odd finite field.
inline std::optional<FieldElem> finite_sqrt(const FieldElem& a) {
    const Field& K = a.f;
    Int q = field_card(K);
    if (f_is_zero(a)) return F_zero(K);
    if (!f_eq(f_pow(a, (q - 1) / 2), F_one(K))) return std::nullopt;
    Int t = q - 1;
    int s = 0;
    while (int_mod(t, 2) == 0) {
        t /= 2;
        ++s;
    }
    if (s == 1) return f_pow(a, (q + 1) / 4);
    FieldElem n = F_zero(K);
    {
        std::vector<FieldElem> elems;
        enumerate_field(K, elems);
        for (const auto& e : elems) {
            if (f_is_zero(e)) continue;
            if (!f_eq(f_pow(e, (q - 1) / 2), F_one(K))) {
                n = e;
                break;
            }
        }
    }
    FieldElem z = f_pow(n, t);
    FieldElem r = f_pow(a, (t + 1) / 2);
    FieldElem w = f_pow(a, t);
    int m = s;
    while (!f_eq(w, F_one(K))) {
        int i = 0;
        FieldElem w2 = w;
        while (!f_eq(w2, F_one(K))) {
            w2 = f_mul(w2, w2);
            ++i;
            if (i >= m) return std::nullopt;
        }
        FieldElem b = z;
        for (int k = 0; k < m - i - 1; ++k) b = f_mul(b, b);
        r = f_mul(r, b);
        z = f_mul(b, b);
        w = f_mul(w, z);
        m = i;
    }
    return r;
}

}  // namespace detail

inline SquareCheck is_square(const FieldElem& a) {
    const Field& K = a.f;
    if (f_is_zero(a)) fail("ZeroInput", "is_square of zero");
    switch (K->kind) {
        case FieldKind::Rationals: {
            const Rat& r = a.q;
            if (r < 0) return {SquareCheck::No, {}, "negative"};
            Int n = r.get_num(), d = r.get_den();
            if (mpz_perfect_square_p(n.get_mpz_t()) && mpz_perfect_square_p(d.get_mpz_t())) {
                Int sn, sd;
                mpz_sqrt(sn.get_mpz_t(), n.get_mpz_t());
                mpz_sqrt(sd.get_mpz_t(), d.get_mpz_t());
                return {SquareCheck::Yes, F_rat(K, Rat(sn, sd)), "perfect square"};
            }
            Int m = n * d;
            for (long p : {2L, 3L, 5L, 7L, 11L, 13L, 17L, 19L, 23L, 29L, 31L}) {
                Int cof;
                if (int_mod(m, p) == 0 && int_valuation(m, p, cof) % 2 == 1)
                    return {SquareCheck::No, {}, "odd valuation at " + std::to_string(p)};
            }
            return {SquareCheck::No, {}, "not a perfect square"};
        }
        case FieldKind::PrimeField: {
            auto r = detail::finite_sqrt(a);
            if (r) return {SquareCheck::Yes, *r, "Tonelli-Shanks root"};
            return {SquareCheck::No, {}, "Euler criterion"};
        }
        case FieldKind::SimpleExt: {
            if (is_finite_field(K)) {
                auto r = detail::finite_sqrt(a);
                if (r) return {SquareCheck::Yes, *r, "Tonelli-Shanks root"};
                return {SquareCheck::No, {}, "Euler criterion"};
            }
            if (K->base->kind == FieldKind::Rationals && up_deg(K->minpoly) == 2 && f_is_zero(K->minpoly[1])) {
                Rat dd = f_neg(K->minpoly[0]).q;
                Rat A = !a.ext.empty() ? a.ext[0].q : Rat(0);
                Rat B = a.ext.size() > 1 ? a.ext[1].q : Rat(0);
                auto mkroot = [&](const Rat& u, const Rat& v) {
                    return F_extcoef(K, UPoly{F_rat(K->base, u), F_rat(K->base, v)});
                };
                Field Q = QQ();
                if (B == 0) {
                    SquareCheck bs = is_square(F_rat(Q, A));
                    if (bs.verdict == SquareCheck::Yes) return {SquareCheck::Yes, mkroot(bs.root.q, 0), "base square"};
                    SquareCheck ts = is_square(F_rat(Q, A / dd));
                    if (ts.verdict == SquareCheck::Yes)
                        return {SquareCheck::Yes, mkroot(0, ts.root.q), "d times a base square"};
                    return {SquareCheck::No, {}, "neither A nor A/d is a rational square"};
                }
                SquareCheck ds = is_square(F_rat(Q, A * A - B * B * dd));
                if (ds.verdict != SquareCheck::Yes) return {SquareCheck::No, {}, "norm is not a rational square"};
                for (int sign : {1, -1}) {
                    Rat w = (A + Rat(sign) * ds.root.q) / (dd * 2);
                    if (w <= 0) continue;
                    SquareCheck ws = is_square(F_rat(Q, w));
                    if (ws.verdict == SquareCheck::Yes && ws.root.q != 0) {
                        Rat v = ws.root.q;
                        return {SquareCheck::Yes, mkroot(B / (v * 2), v), "explicit root"};
                    }
                }
                return {SquareCheck::No, {}, "coefficient system has no rational solution"};
            }
            if (a.ext.size() <= 1) {  // constant in the extension: try the base
                FieldElem b = a.ext.empty() ? F_zero(K->base) : a.ext[0];
                SquareCheck bs = is_square(b);
                if (bs.verdict == SquareCheck::Yes)
                    return {SquareCheck::Yes, F_from_base(K, bs.root), "base square"};
            }
            return {SquareCheck::Unknown, {}, "no decision procedure for this extension"};
        }
        case FieldKind::FuncField: {
            const Field& B = K->base;
            UPoly m = up_mul(B, a.num, a.den);  // a = m / den^2
            SquareCheck lcs = is_square(m.back());
            if (lcs.verdict == SquareCheck::No) return {SquareCheck::No, {}, "leading unit is a non-square"};
            if (lcs.verdict == SquareCheck::Unknown) return {SquareCheck::Unknown, {}, "leading unit undecided"};
            auto sqf = up_squarefree(B, m);
            UPoly half = up_const(F_one(B));
            for (auto& [fac, mult] : sqf) {
                if (mult % 2 == 1) return {SquareCheck::No, {}, "odd valuation at (" + up_str(fac, K->gen) + ")"};
                for (int i = 0; i < mult / 2; ++i) half = up_mul(B, half, fac);
            }
            half = up_scale(half, lcs.root);
            return {SquareCheck::Yes, F_ratfunc(K, half, a.den), "even valuations and square unit"};
        }
    }
    return {SquareCheck::Unknown, {}, "unhandled"};
}

// --- random sampling ------------------------------------------------------------------

inline FieldElem random_elem(const Field& K, Rng& rng, int size = 8) {
    switch (K->kind) {
        case FieldKind::Rationals: {
            long n = static_cast<long>(rng.below(2 * size + 1)) - size;
            long d = 1 + static_cast<long>(rng.below(size));
            return F_rat(K, Rat(n, d));
        }
        case FieldKind::PrimeField: return F_int(K, rng.int_below(K->p));
        case FieldKind::SimpleExt: {
            UPoly c;
            for (int i = 0; i < up_deg(K->minpoly); ++i) c.push_back(random_elem(K->base, rng, size));
            up_trim(c);
            return F_extcoef(K, c);
        }
        case FieldKind::FuncField: {
            UPoly n, d;
            int dn = static_cast<int>(rng.below(3));
            int dd = static_cast<int>(rng.below(2));
            for (int i = 0; i <= dn; ++i) n.push_back(random_elem(K->base, rng, size));
            for (int i = 0; i <= dd; ++i) d.push_back(random_elem(K->base, rng, size));
            up_trim(n);
            up_trim(d);
            if (d.empty()) d = {F_one(K->base)};
            if (n.empty()) return F_zero(K);
            return F_ratfunc(K, std::move(n), std::move(d));
        }
    }
    fail("Internal", "random_elem");
}

}  // namespace gwc
