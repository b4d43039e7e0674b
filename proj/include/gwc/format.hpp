#pragma once

// The CLI's textual grammar: fields, ring descriptors, primes, polynomials,
// field elements and (twisted) diagonal forms. One small recursive-descent
// parser; errors carry the offending position. The same syntax is emitted by
// the printers, so reports round-trip.

#include <cctype>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gwc/gw.hpp"

namespace gwc {

class parse_error : public error {
public:
    parse_error(const std::string& what, size_t pos)
        : error("ParseError", what + " at position " + std::to_string(pos)), pos_(pos) {}
    size_t pos() const { return pos_; }

private:
    size_t pos_;
};

namespace fmt {

class Cursor {
public:
    explicit Cursor(std::string s) : s_(std::move(s)) {}

    void skip_ws() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool eof() {
        skip_ws();
        return i_ >= s_.size();
    }
    char peek() {
        skip_ws();
        return i_ < s_.size() ? s_[i_] : '\0';
    }
    bool accept(char c) {
        skip_ws();
        if (i_ < s_.size() && s_[i_] == c) {
            ++i_;
            return true;
        }
        return false;
    }
    // a minus sign that is not the head of the arrow '->'
    bool accept_minus() {
        skip_ws();
        if (i_ < s_.size() && s_[i_] == '-' && (i_ + 1 >= s_.size() || s_[i_ + 1] != '>')) {
            ++i_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) throw parse_error(std::string("expected '") + c + "'", i_);
    }
    bool accept_word(const std::string& w) {
        skip_ws();
        if (s_.compare(i_, w.size(), w) == 0) {
            i_ += w.size();
            return true;
        }
        return false;
    }
    size_t pos() const { return i_; }
    [[noreturn]] void fail_here(const std::string& what) { throw parse_error(what, i_); }

    Int integer() {
        skip_ws();
        size_t start = i_;
        std::string digits;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) digits += s_[i_++];
        if (digits.empty()) throw parse_error("expected an integer", start);
        return Int(digits);
    }
    std::string ident() {
        skip_ws();
        size_t start = i_;
        std::string w;
        while (i_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_'))
            w += s_[i_++];
        if (w.empty() || std::isdigit(static_cast<unsigned char>(w[0])))
            throw parse_error("expected an identifier", start);
        return w;
    }

private:
    std::string s_;
    size_t i_ = 0;
};

// fields: Q | F<p> | Q(t) | F7(t) | Q(sqrt d) | F5(sqrt d)
inline Field parse_field(const std::string& text) {
    Cursor c(text);
    Field base;
    c.skip_ws();
    if (c.accept('Q')) {
        base = QQ();
    } else if (c.accept('F')) {
        base = GF(c.integer());
    } else {
        c.fail_here("expected a field (Q, F<p>, ...)");
    }
    if (c.accept('(')) {
        if (c.accept_word("sqrt")) {
            c.skip_ws();
            bool neg = c.accept('-');
            Int d = c.integer();
            if (neg) d = -d;
            c.expect(')');
            return quad_ext(base, F_int(base, d));
        }
        std::string var = c.ident();
        c.expect(')');
        return func_field(base, var);
    }
    if (!c.eof()) c.fail_here("trailing input after field");
    return base;
}

// --- elements and polynomials -------------------------------------------------

// number: integer or integer/integer
inline Rat parse_rat(Cursor& c) {
    bool neg = c.accept('-');
    Int n = c.integer();
    Rat r(n);
    if (c.accept('/')) {
        Int d = c.integer();
        if (d == 0) c.fail_here("zero denominator");
        r = Rat(n, d);
        r.canonicalize();
    }
    if (neg) r = -r;
    r.canonicalize();
    return r;
}

FieldElem parse_elem_expr(Cursor& c, const Field& K);

// atom: number | name | ( expr )
inline FieldElem parse_elem_atom(Cursor& c, const Field& K) {
    c.skip_ws();
    char ch = c.peek();
    if (ch == '(') {
        c.expect('(');
        FieldElem e = parse_elem_expr(c, K);
        c.expect(')');
        return e;
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
        // bare integer; fractions are handled by the term-level division
        return F_int(K, c.integer());
    }
    std::string name = c.ident();
    // generator names: the function-field variable or the extension generator
    const FieldDesc* d = K.get();
    std::vector<Field> chain;
    Field cur = K;
    while (cur) {
        chain.push_back(cur);
        cur = cur->base;
    }
    (void)d;
    for (size_t depth = 0; depth < chain.size(); ++depth) {
        const Field& f = chain[depth];
        if ((f->kind == FieldKind::FuncField || f->kind == FieldKind::SimpleExt) && f->gen == name) {
            FieldElem g = F_gen(f);
            // embed back up the tower
            for (size_t up = depth; up-- > 0;) g = F_from_base(chain[up], g);
            return g;
        }
    }
    c.fail_here("unknown name '" + name + "' in " + field_name(K));
}

inline FieldElem parse_elem_power(Cursor& c, const Field& K) {
    FieldElem e = parse_elem_atom(c, K);
    if (c.accept('^')) {
        bool neg = c.accept('-');
        Int k = c.integer();
        e = f_pow(e, neg ? -k : k);
    }
    return e;
}

inline FieldElem parse_elem_term(Cursor& c, const Field& K) {
    FieldElem e = parse_elem_power(c, K);
    while (true) {
        if (c.accept('*')) {
            e = f_mul(e, parse_elem_power(c, K));
        } else if (c.accept('/')) {
            e = f_div(e, parse_elem_power(c, K));
        } else {
            break;
        }
    }
    return e;
}

inline FieldElem parse_elem_expr(Cursor& c, const Field& K) {
    bool neg = c.accept_minus();
    FieldElem e = parse_elem_term(c, K);
    if (neg) e = f_neg(e);
    while (true) {
        if (c.accept('+')) {
            e = f_add(e, parse_elem_term(c, K));
        } else if (c.accept_minus()) {
            e = f_sub(e, parse_elem_term(c, K));
        } else {
            break;
        }
    }
    return e;
}

inline FieldElem parse_elem(const std::string& text, const Field& K) {
    Cursor c(text);
    FieldElem e = parse_elem_expr(c, K);
    // optional "mod p" suffix on prime-field elements
    if (c.accept_word("mod")) {
        Int p = c.integer();
        if (K->kind != FieldKind::PrimeField || K->p != p) c.fail_here("mod annotation disagrees with the field");
    }
    if (!c.eof()) c.fail_here("trailing input after element");
    return e;
}

// multivariate polynomial over R, same operator grammar
MultiPoly parse_poly_expr(Cursor& c, const PRing& R);

inline MultiPoly parse_poly_atom(Cursor& c, const PRing& R) {
    c.skip_ws();
    char ch = c.peek();
    if (ch == '(') {
        c.expect('(');
        MultiPoly p = parse_poly_expr(c, R);
        c.expect(')');
        return p;
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
        MultiPoly num = MultiPoly::constant(R, F_int(R->K, c.integer()));
        // allow integer fractions like 1/2 as coefficients
        if (c.accept('/')) {
            Int d = c.integer();
            if (d == 0) c.fail_here("zero denominator");
            num = num.scaled(f_inv(F_int(R->K, d)));
        }
        return num;
    }
    std::string name = c.ident();
    for (size_t i = 0; i < R->vars.size(); ++i)
        if (R->vars[i] == name) return MultiPoly::variable(R, i);
    c.fail_here("unknown variable '" + name + "'");
}

inline MultiPoly parse_poly_power(Cursor& c, const PRing& R) {
    MultiPoly p = parse_poly_atom(c, R);
    if (c.accept('^')) {
        Int k = c.integer();
        MultiPoly r = MultiPoly::one(R);
        for (Int i = 0; i < k; ++i) r = r * p;
        return r;
    }
    return p;
}

inline MultiPoly parse_poly_term(Cursor& c, const PRing& R) {
    MultiPoly p = parse_poly_power(c, R);
    while (c.accept('*')) p = p * parse_poly_power(c, R);
    return p;
}

inline MultiPoly parse_poly_expr(Cursor& c, const PRing& R) {
    bool neg = c.accept_minus();
    MultiPoly p = parse_poly_term(c, R);
    if (neg) p = -p;
    while (true) {
        if (c.accept('+')) {
            p = p + parse_poly_term(c, R);
        } else if (c.accept_minus()) {
            p = p - parse_poly_term(c, R);
        } else {
            break;
        }
    }
    return p;
}

inline MultiPoly parse_poly(const std::string& text, const PRing& R) {
    Cursor c(text);
    MultiPoly p = parse_poly_expr(c, R);
    if (!c.eof()) c.fail_here("trailing input after polynomial");
    return p;
}

// --- ring descriptors -----------------------------------------------------------
// Q[x,y]_(x,y) | F7[x,y]_(x,y) | F7[t] | F7[t]_{(t),(t-1)} | Z | Z_{3,5} | Q | F7

inline RingDescriptor parse_ring(const std::string& text) {
    Cursor c(text);
    c.skip_ws();
    if (c.accept('Z')) {
        if (c.accept('_')) {
            c.expect('{');
            std::vector<Int> ps;
            do {
                ps.push_back(c.integer());
            } while (c.accept(','));
            c.expect('}');
            return ring_z(ps);
        }
        if (!c.eof()) c.fail_here("trailing input after ring");
        return ring_z();
    }
    Field base;
    if (c.accept('Q')) {
        base = QQ();
    } else if (c.accept('F')) {
        base = GF(c.integer());
    } else {
        c.fail_here("expected a ring (Q[..], F<p>[..], Z)");
    }
    if (c.eof()) return ring_field(base);
    c.expect('[');
    std::string v1 = c.ident();
    if (c.accept(',')) {
        std::string v2 = c.ident();
        c.expect(']');
        if (v1 != "x" || v2 != "y") c.fail_here("two-dimensional rings use the variables x, y");
        c.expect('_');
        c.expect('(');
        c.ident();
        c.expect(',');
        c.ident();
        c.expect(')');
        return ring_2dim_local(base);
    }
    c.expect(']');
    if (v1 != "t") c.fail_here("one-dimensional polynomial rings use the variable t");
    if (c.accept('_')) {
        c.expect('{');
        std::vector<UPoly> primes;
        PRing R1 = poly_ring(base, {"t"});
        do {
            c.expect('(');
            // read a univariate polynomial up to the closing paren
            MultiPoly p = parse_poly_expr(c, R1);
            c.expect(')');
            UPoly u;
            for (int k = 0; k <= p.degree_in(0); ++k) u.push_back(p.coeff_of(0, k).constant_term());
            up_trim(u);
            primes.push_back(u);
        } while (c.accept(','));
        c.expect('}');
        return ring_poly(base, primes);
    }
    if (!c.eof()) c.fail_here("trailing input after ring");
    return ring_poly(base);
}

// --- forms ------------------------------------------------------------------------
// untwisted: <1, -1, 2*t>      (elements of the given field)
// twisted:   <[x -> y], [x -> 1]> or <[x^y -> c]>; the caret splits wedge
// generators only when followed by a name, so x^2-y^5 stays a power.

struct ParsedForm {
    DiagForm form;
    bool twisted = false;
};

inline std::vector<std::string> split_wedge(const std::string& lhs) {
    std::vector<std::string> parts;
    std::string cur;
    for (size_t i = 0; i < lhs.size(); ++i) {
        if (lhs[i] == '^') {
            size_t j = i + 1;
            while (j < lhs.size() && std::isspace(static_cast<unsigned char>(lhs[j]))) ++j;
            if (j < lhs.size() && (std::isalpha(static_cast<unsigned char>(lhs[j])) || lhs[j] == '(')) {
                parts.push_back(cur);
                cur.clear();
                continue;
            }
        }
        cur += lhs[i];
    }
    parts.push_back(cur);
    return parts;
}

// parse an untwisted diagonal form over K
inline DiagForm parse_form(const std::string& text, const Field& K) {
    Cursor c(text);
    c.expect('<');
    std::vector<FieldElem> entries;
    if (!c.accept('>')) {
        do {
            entries.push_back(parse_elem_expr(c, K));
        } while (c.accept(','));
        c.expect('>');
    }
    if (!c.eof()) c.fail_here("trailing input after form");
    return make_form(K, entries);
}

// a factored form over the two-dimensional ring: entries are * -separated
// factors (constants allowed), optionally with ^k powers
inline FactoredForm parse_factored_form(const std::string& text, const PRing& R) {
    Cursor c(text);
    FactoredForm out;
    out.R = R;
    c.expect('<');
    do {
        FactoredEntry e;
        e.unit = F_one(R->K);
        bool lead_neg = c.accept('-');
        if (lead_neg) e.unit = f_neg(e.unit);
        do {
            c.skip_ws();
            MultiPoly p = parse_poly_atom(c, R);
            int exp = 1;
            if (c.accept('^')) {
                bool neg = c.accept('-');
                exp = static_cast<int>(c.integer().get_si());
                if (neg) exp = -exp;
            }
            e.parts.push_back({p, exp});
        } while (c.accept('*'));
        out.entries.push_back(e);
    } while (c.accept(','));
    c.expect('>');
    if (!c.eof()) c.fail_here("trailing input after form");
    return out;
}

}  // namespace fmt

}  // namespace gwc
