#pragma once

// Sparse multivariate polynomials over a supported field, with the graded
// lexicographic term order fixed once per ring. Division with remainder,
// evaluation, and substitution into univariate parametrizations.

#include <algorithm>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "gwc/field.hpp"

namespace gwc {

struct PolyRing {
    Field K;
    std::vector<std::string> vars;
};
using PRing = std::shared_ptr<const PolyRing>;

inline PRing poly_ring(const Field& K, std::vector<std::string> vars) {
    auto r = std::make_shared<PolyRing>();
    r->K = K;
    r->vars = std::move(vars);
    return r;
}

inline bool same_ring(const PRing& a, const PRing& b) {
    return a == b || (a && b && a->vars == b->vars && same_field(a->K, b->K));
}

using Mono = std::vector<int>;  // exponent per variable

inline int mono_deg(const Mono& m) {
    int d = 0;
    for (int e : m) d += e;
    return d;
}

// graded lexicographic, larger first (so map.begin() is the leading term)
struct GrlexGreater {
    bool operator()(const Mono& a, const Mono& b) const {
        int da = mono_deg(a), db = mono_deg(b);
        if (da != db) return da > db;
        return a > b;  // lex on exponent vectors
    }
};

class MultiPoly {
public:
    MultiPoly() = default;
    explicit MultiPoly(PRing R) : R_(std::move(R)) {}

    static MultiPoly zero(const PRing& R) { return MultiPoly(R); }
    static MultiPoly constant(const PRing& R, const FieldElem& c) {
        MultiPoly p(R);
        if (!f_is_zero(c)) p.terms_[Mono(R->vars.size(), 0)] = c;
        return p;
    }
    static MultiPoly one(const PRing& R) { return constant(R, F_one(R->K)); }
    static MultiPoly variable(const PRing& R, size_t i) {
        MultiPoly p(R);
        Mono m(R->vars.size(), 0);
        m[i] = 1;
        p.terms_[m] = F_one(R->K);
        return p;
    }
    static MultiPoly monomial(const PRing& R, const Mono& m, const FieldElem& c) {
        MultiPoly p(R);
        if (!f_is_zero(c)) p.terms_[m] = c;
        return p;
    }

    const PRing& ring() const { return R_; }
    bool is_zero() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }
    const std::map<Mono, FieldElem, GrlexGreater>& terms() const { return terms_; }

    int total_degree() const { return terms_.empty() ? -1 : mono_deg(terms_.begin()->first); }
    const Mono& lead_mono() const {
        if (terms_.empty()) fail("ZeroInput", "leading term of zero");
        return terms_.begin()->first;
    }
    const FieldElem& lead_coeff() const {
        if (terms_.empty()) fail("ZeroInput", "leading term of zero");
        return terms_.begin()->second;
    }

    void add_term(const Mono& m, const FieldElem& c) {
        if (f_is_zero(c)) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_[m] = c;
        } else {
            it->second = f_add(it->second, c);
            if (f_is_zero(it->second)) terms_.erase(it);
        }
    }

    MultiPoly operator+(const MultiPoly& o) const {
        MultiPoly r = *this;
        for (const auto& [m, c] : o.terms_) r.add_term(m, c);
        return r;
    }
    MultiPoly operator-() const {
        MultiPoly r = *this;
        for (auto& [m, c] : r.terms_) c = f_neg(c);
        return r;
    }
    MultiPoly operator-(const MultiPoly& o) const { return *this + (-o); }
    MultiPoly operator*(const MultiPoly& o) const {
        MultiPoly r(R_);
        for (const auto& [m1, c1] : terms_)
            for (const auto& [m2, c2] : o.terms_) {
                Mono m = m1;
                for (size_t i = 0; i < m.size(); ++i) m[i] += m2[i];
                r.add_term(m, f_mul(c1, c2));
            }
        return r;
    }
    MultiPoly scaled(const FieldElem& c) const {
        MultiPoly r(R_);
        for (const auto& [m, cc] : terms_) r.add_term(m, f_mul(cc, c));
        return r;
    }

    bool equals(const MultiPoly& o) const {
        if (terms_.size() != o.terms_.size()) return false;
        auto it = terms_.begin(), jt = o.terms_.begin();
        for (; it != terms_.end(); ++it, ++jt) {
            if (it->first != jt->first || !f_eq(it->second, jt->second)) return false;
        }
        return true;
    }

    FieldElem eval(const std::vector<FieldElem>& point) const {
        FieldElem r = F_zero(R_->K);
        for (const auto& [m, c] : terms_) {
            FieldElem t = c;
            for (size_t i = 0; i < m.size(); ++i)
                for (int e = 0; e < m[i]; ++e) t = f_mul(t, point[i]);
            r = f_add(r, t);
        }
        return r;
    }

    // substitute polynomial values (e.g. a branch parametrization)
    UPoly subst_upoly(const std::vector<UPoly>& values) const {
        const Field& K = R_->K;
        UPoly r;
        for (const auto& [m, c] : terms_) {
            UPoly t = {c};
            for (size_t i = 0; i < m.size(); ++i)
                for (int e = 0; e < m[i]; ++e) t = up_mul(K, t, values[i]);
            r = up_add(K, r, t);
        }
        return r;
    }

    // coefficient on a variable power: view as univariate in vars[i]
    MultiPoly coeff_of(size_t var, int power) const {
        MultiPoly r(R_);
        for (const auto& [m, c] : terms_) {
            if (m[var] != power) continue;
            Mono mm = m;
            mm[var] = 0;
            r.add_term(mm, c);
        }
        return r;
    }
    int degree_in(size_t var) const {
        int d = -1;
        for (const auto& [m, c] : terms_) d = std::max(d, m[var]);
        return d;
    }

    // linear part as coefficients per variable (degree-1 terms)
    std::vector<FieldElem> linear_part() const {
        std::vector<FieldElem> lin(R_->vars.size(), F_zero(R_->K));
        for (const auto& [m, c] : terms_) {
            if (mono_deg(m) != 1) continue;
            for (size_t i = 0; i < m.size(); ++i)
                if (m[i] == 1) lin[i] = c;
        }
        return lin;
    }
    FieldElem constant_term() const {
        Mono z(R_->vars.size(), 0);
        auto it = terms_.find(z);
        return it == terms_.end() ? F_zero(R_->K) : it->second;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string s;
        for (const auto& [m, c] : terms_) {
            std::string cs = f_str(c);
            bool neg = !cs.empty() && cs[0] == '-';
            if (!s.empty()) {
                s += neg ? " - " : " + ";
                if (neg) cs = cs.substr(1);
            }
            std::string mono;
            for (size_t i = 0; i < m.size(); ++i) {
                if (m[i] == 0) continue;
                mono += (mono.empty() ? "" : "*") + R_->vars[i];
                if (m[i] > 1) mono += "^" + std::to_string(m[i]);
            }
            bool composite = cs.find_first_of("+ ") != std::string::npos ||
                             cs.find_first_of("-", 1) != std::string::npos || cs.find('/') != std::string::npos;
            if (mono.empty()) {
                s += composite ? "(" + cs + ")" : cs;
            } else if (cs == "1") {
                s += mono;
            } else if (cs == "-1") {
                s += "-" + mono;
            } else {
                s += (composite ? "(" + cs + ")" : cs) + "*" + mono;
            }
        }
        return s;
    }

private:
    PRing R_;
    std::map<Mono, FieldElem, GrlexGreater> terms_;
};

inline bool mono_divides(const Mono& a, const Mono& b) {  // a | b
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

// Multivariate division: f = sum q_i d_i + r, no term of r divisible by any
// leading term of the divisors. Total and exact.
struct DivisionResult {
    std::vector<MultiPoly> quotients;
    MultiPoly remainder;
};

inline DivisionResult poly_reduce(const MultiPoly& f, const std::vector<MultiPoly>& divisors) {
    if (divisors.empty()) fail("BadInput", "poly_reduce needs divisors");
    const PRing& R = f.ring();
    for (const auto& d : divisors) {
        if (!same_ring(R, d.ring())) fail("MixedFields", "division across rings");
        if (d.is_zero()) fail("DivisionByZero", "zero divisor polynomial");
    }
    DivisionResult out;
    out.quotients.assign(divisors.size(), MultiPoly::zero(R));
    out.remainder = MultiPoly::zero(R);
    MultiPoly p = f;
    while (!p.is_zero()) {
        bool divided = false;
        for (size_t i = 0; i < divisors.size(); ++i) {
            const Mono& lm = divisors[i].lead_mono();
            if (mono_divides(lm, p.lead_mono())) {
                Mono q = p.lead_mono();
                for (size_t k = 0; k < q.size(); ++k) q[k] -= lm[k];
                FieldElem c = f_div(p.lead_coeff(), divisors[i].lead_coeff());
                MultiPoly t = MultiPoly::monomial(R, q, c);
                out.quotients[i] = out.quotients[i] + t;
                p = p - t * divisors[i];
                divided = true;
                break;
            }
        }
        if (!divided) {
            out.remainder.add_term(p.lead_mono(), p.lead_coeff());
            MultiPoly t = MultiPoly::monomial(R, p.lead_mono(), p.lead_coeff());
            p = p - t;
        }
    }
    return out;
}

// all monomials of total degree <= d
inline std::vector<Mono> monomials_upto(size_t nvars, int d) {
    std::vector<Mono> out;
    Mono m(nvars, 0);
    while (true) {
        if (mono_deg(m) <= d) out.push_back(m);
        // odometer with per-digit cap d
        size_t k = 0;
        while (k < nvars && ++m[k] > d) m[k++] = 0;
        if (k == nvars) break;
    }
    std::sort(out.begin(), out.end(), [](const Mono& a, const Mono& b) { return GrlexGreater()(b, a); });
    return out;
}

}  // namespace gwc
