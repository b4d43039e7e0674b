#pragma once

// The octagon of Witt groups attached to (A, sigma, eps, lambda, mu) with
// lambda^s = -lambda, mu^s = -mu, lambda mu = -mu lambda, lambda^2 a central
// unit; its five-term specialization for quadratic etale algebras; cochain
// verification on samples; and exactness over finite fields by enumeration,
// checked through the finite-abelian homology engine.

#include <algorithm>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gwc/hermitian.hpp"
#include "gwc/homology.hpp"

namespace gwc {

struct WittSlot {
    Algebra A;
    Involution inv;
    int eps = 1;
    std::string label;
};

struct WittArrow {
    std::string label;
    WittSlot src, tgt;
    std::function<HermSpace(const HermSpace&)> apply;
};

struct OctagonData {
    Algebra A;
    Involution sigma;
    int eps = 1;
    AElem lambda, mu;
};

namespace octagon_detail {

inline void validate_octagon(const OctagonData& d) {
    const Algebra& A = d.A;
    if (A.kind != AlgKind::Quaternion && A.kind != AlgKind::Mat2)
        fail("BadOctagonData", "octagon needs a degree-2 algebra");
    auto sig = [&](const AElem& x) { return apply_inv(A, d.sigma, x); };
    if (!ae_eq(sig(d.lambda), ae_neg(d.lambda))) fail("BadOctagonData", "lambda^sigma != -lambda");
    if (!ae_eq(sig(d.mu), ae_neg(d.mu))) fail("BadOctagonData", "mu^sigma != -mu");
    if (!ae_eq(ae_mul(A, d.lambda, d.mu), ae_neg(ae_mul(A, d.mu, d.lambda))))
        fail("BadOctagonData", "lambda mu != -mu lambda");
    if (!ae_inv(A, d.lambda) || !ae_inv(A, d.mu)) fail("BadOctagonData", "lambda, mu must be units");
}

inline FieldElem central_square(const OctagonData& d) {
    const Algebra& A = d.A;
    AElem l2 = ae_mul(A, d.lambda, d.lambda);
    bool scalar = true;
    FieldElem v = l2.c[0];
    if (A.kind == AlgKind::Mat2) {
        scalar = f_eq(l2.c[0], l2.c[3]) && f_is_zero(l2.c[1]) && f_is_zero(l2.c[2]);
    } else {
        for (size_t t = 1; t < 4; ++t)
            if (!f_is_zero(l2.c[t])) scalar = false;
    }
    if (!scalar || f_is_zero(v)) fail("BadOctagonData", "lambda^2 is not a central unit");
    return v;
}

// embed b0 + b1*lambda from B = F[lambda] into A
inline AElem b_to_a(const OctagonData& d, const AElem& b) {
    AElem x = ae_scalar(d.A, b.c[0]);
    return ae_add(x, ae_scale(d.lambda, b.c[1]));
}

}  // namespace octagon_detail

// The eight maps of the octagon, in cyclic order starting at W_eps(A, sigma).
inline std::vector<WittArrow> build_octagon(const OctagonData& d) {
    octagon_detail::validate_octagon(d);
    const Algebra& A = d.A;
    FieldElem l2 = octagon_detail::central_square(d);
    Algebra B = alg_quadetale(A.F, l2);

    auto slotA = [&](int eps) {
        return WittSlot{A, d.sigma, eps, "W_" + std::to_string(eps) + "(A,sigma)"};
    };
    auto slotB = [&](int eps, bool tau2) {
        return WittSlot{B, tau2 ? inv_identity() : inv_canonical(), eps,
                        "W_" + std::to_string(eps) + "(B,tau" + (tau2 ? "2" : "1") + ")"};
    };

    // sigma2 = Int((lambda mu)^{-1}) o sigma
    AElem lm = ae_mul(A, d.lambda, d.mu);
    auto ilm = ae_inv(A, lm);
    if (!ilm) fail("BadOctagonData", "lambda mu is not a unit");
    AElem u0 = d.sigma.kind == Involution::IntUCanonical ? d.sigma.u : ae_one(A);
    Involution sigma2 = inv_int_u(A, ae_mul(A, *ilm, u0));

    auto pi_map = [d](const HermSpace& h) {
        return involution_trace_split(h, d.lambda, d.mu).pi_image;
    };
    auto pi_prime_map = [d](const HermSpace& h) {
        return involution_trace_split(h, d.lambda, d.mu).pi_prime_image;
    };
    auto rho_map = [d, B](const HermSpace& h) {
        // lambda-conjugation inside B (lambda is central there), then include
        const Algebra& AA = d.A;
        HermSpace c = h;
        AElem lB = ae_basis(B, 1);
        c = conjugate_u(c, lB);  // (B, conj, eps) -> (B, conj, -eps), gram scaled
        AlgMorphism incl{B, AA, inv_canonical(), d.sigma,
                         [d](const AElem& b) { return octagon_detail::b_to_a(d, b); }};
        return base_change(c, incl);
    };
    auto rho_prime_map = [d, B, sigma2, lm](const HermSpace& h) {
        const Algebra& AA = d.A;
        AlgMorphism incl{B, AA, inv_identity(), sigma2,
                         [d](const AElem& b) { return octagon_detail::b_to_a(d, b); }};
        HermSpace inA = base_change(h, incl);
        return conjugate_u(inA, lm);  // Int(lm) o sigma2 = sigma, eps flips
    };

    std::vector<WittArrow> arrows;
    int e = d.eps;
    arrows.push_back({"pi_*", slotA(e), slotB(e, false), pi_map});
    arrows.push_back({"rho_*", slotB(e, false), slotA(-e), rho_map});
    arrows.push_back({"pi'_*", slotA(-e), slotB(e, true), pi_prime_map});
    arrows.push_back({"rho'_*", slotB(e, true), slotA(-e), rho_prime_map});
    arrows.push_back({"pi_*", slotA(-e), slotB(-e, false), pi_map});
    arrows.push_back({"rho_*", slotB(-e, false), slotA(e), rho_map});
    arrows.push_back({"pi'_*", slotA(e), slotB(-e, true), pi_prime_map});
    arrows.push_back({"rho'_*", slotB(-e, true), slotA(e), rho_prime_map});
    return arrows;
}

// The five-term sequence 0 -> W_1(S,theta) -> W_1(F) -> W_1(S) -> W_1(F) -> W_-1(S,theta) -> 0
// for S = F[lambda], lambda^2 = d a unit.
inline std::vector<WittArrow> five_term_sequence(const Field& F, const FieldElem& dd) {
    if (f_is_zero(dd)) fail("BadBasis", "five-term sequence needs lambda^2 != 0");
    Algebra S = alg_quadetale(F, dd);
    Algebra Fa = alg_field(F);

    WittSlot s0{S, inv_canonical(), 1, "W_1(S,theta)"};
    WittSlot s1{Fa, inv_identity(), 1, "W_1(F)"};
    WittSlot s2{S, inv_identity(), 1, "W_1(S)"};
    WittSlot s3{Fa, inv_identity(), 1, "W_1(F)"};
    WittSlot s4{S, inv_canonical(), -1, "W_-1(S,theta)"};

    // Tr_*: Gram over the F-basis {1, lambda} of S
    auto trace_map = [F, S](const HermSpace& h) {
        size_t n = h.rank();
        HermSpace out;
        out.A = alg_field(F);
        out.inv = inv_identity();
        out.eps = 1;
        out.twist = h.twist;
        out.gram.assign(2 * n, std::vector<AElem>(2 * n, ae_zero(out.A)));
        std::vector<AElem> basis = {ae_one(S), ae_basis(S, 1)};
        auto tr = [&](const AElem& x) { return f_mul(F_int(F, 2), x.c[0]); };
        for (size_t k = 0; k < n; ++k)
            for (size_t l = 0; l < n; ++l)
                for (size_t s = 0; s < 2; ++s)
                    for (size_t t = 0; t < 2; ++t) {
                        AElem v = ae_mul(S, apply_inv(S, h.inv, basis[s]), ae_mul(S, h.gram[k][l], basis[t]));
                        out.gram[2 * k + s][2 * l + t].c[0] = tr(v);
                    }
        herm_validate(out);
        return out;
    };
    // lambda_* iota_*: quadratic form over F -> lambda-scaled form over (S, id)
    auto li_map = [F, S](const HermSpace& h) {
        size_t n = h.rank();
        HermSpace out;
        out.A = S;
        out.inv = inv_identity();
        out.eps = 1;
        out.twist = h.twist;
        out.gram.assign(n, std::vector<AElem>(n, ae_zero(S)));
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j)
                out.gram[i][j] = ae_scale(ae_basis(S, 1), h.gram[i][j].c[0]);
        herm_validate(out);
        return out;
    };
    // the final arrow lands in skew-hermitian classes over (S, theta)
    auto li_skew_map = [F, S](const HermSpace& h) {
        size_t n = h.rank();
        HermSpace out;
        out.A = S;
        out.inv = inv_canonical();
        out.eps = -1;
        out.twist = h.twist;
        out.gram.assign(n, std::vector<AElem>(n, ae_zero(S)));
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j)
                out.gram[i][j] = ae_scale(ae_basis(S, 1), h.gram[i][j].c[0]);
        herm_validate(out);
        return out;
    };
    std::vector<WittArrow> arrows;
    arrows.push_back({"Tr_*", s0, s1, trace_map});
    arrows.push_back({"lambda_* iota_*", s1, s2, li_map});
    arrows.push_back({"Tr_*", s2, s3, trace_map});
    arrows.push_back({"lambda_* iota_*", s3, s4, li_skew_map});
    return arrows;
}

// --- cochain verification on samples ---------------------------------------------

struct CochainReport {
    bool ok = true;                      // no composite decided nontrivial
    std::vector<std::string> failures;   // confirmed cochain violations
    std::vector<std::string> undecided;  // composites the decision layer cannot settle
    int composites_checked = 0;
    int trivial = 0;
};

// samples per slot index; for each consecutive (cyclic for the octagon) pair
// of arrows, every composite image must be Witt-trivial. Composites landing
// in slots without a decision procedure (skew classes over division
// quaternion algebras) are reported as undecided, not as violations.
inline CochainReport check_cochain(const std::vector<WittArrow>& arrows,
                                   const std::vector<std::vector<HermSpace>>& samples, bool cyclic) {
    CochainReport out;
    size_t n = arrows.size();
    for (size_t i = 0; i + 1 < n + (cyclic ? 1 : 0); ++i) {
        const WittArrow& first = arrows[i];
        const WittArrow& second = arrows[(i + 1) % n];
        if (i >= samples.size()) break;
        for (const auto& h : samples[i]) {
            HermSpace mid = first.apply(h);
            HermSpace end = second.apply(mid);
            auto d = decide_herm_witt(end);
            ++out.composites_checked;
            if (d.verdict == Tri::Yes) {
                ++out.trivial;
            } else if (d.verdict == Tri::No) {
                out.ok = false;
                out.failures.push_back(second.label + " o " + first.label + " on " + h.str() + ": " +
                                       d.strategy);
            } else {
                out.undecided.push_back(second.label + " o " + first.label + " on " + h.str() + ": " +
                                        d.strategy);
            }
        }
    }
    return out;
}

// symmetric unit diagonal samples for a slot, rank <= 2
inline std::vector<HermSpace> slot_samples(const WittSlot& s, Rng& rng, int count = 4) {
    const Algebra& A = s.A;
    const Field& F = A.F;
    std::vector<HermSpace> out;
    // a basis of the eps-symmetric subspace
    std::vector<AElem> sym;
    {
        size_t d = A.dim();
        Mat sys(F, d, d);
        for (size_t t = 0; t < d; ++t) {
            AElem diff = ae_sub(apply_inv(A, s.inv, ae_basis(A, t)),
                                ae_scale(ae_basis(A, t), F_int(F, s.eps)));
            for (size_t r = 0; r < d; ++r) sys(r, t) = diff.c[r];
        }
        Mat ker = mat_kernel(sys);
        for (size_t j = 0; j < ker.cols(); ++j) {
            AElem v = ae_zero(A);
            for (size_t r = 0; r < d; ++r) v.c[r] = ker(r, j);
            sym.push_back(v);
        }
    }
    if (sym.empty()) {
        // only the zero space exists in this slot
        HermSpace h;
        h.A = A;
        h.inv = s.inv;
        h.eps = s.eps;
        out.push_back(h);
        return out;
    }
    int guard = 0;
    while (static_cast<int>(out.size()) < count && guard < 200) {
        ++guard;
        size_t rank = 1 + rng.below(2);
        std::vector<AElem> diag;
        for (size_t i = 0; i < rank; ++i) {
            AElem v = ae_zero(A);
            for (const auto& b : sym) v = ae_add(v, ae_scale(b, random_elem(F, rng, 4)));
            if (!ae_inv(A, v)) {
                v = sym[0];
                if (!ae_inv(A, v)) continue;
            }
            diag.push_back(v);
        }
        if (diag.size() != rank) continue;
        try {
            out.push_back(herm_diag(A, s.inv, s.eps, diag));
        } catch (const error&) {
            continue;
        }
    }
    // always include the zero space
    HermSpace h;
    h.A = A;
    h.inv = s.inv;
    h.eps = s.eps;
    out.push_back(h);
    return out;
}

// --- finite exactness by enumeration ----------------------------------------------

struct FiniteWittGroup {
    WittSlot slot;
    std::vector<HermSpace> reps;          // one representative per class, reps[0] = 0
    FinAbPresentation pres;
    std::vector<size_t> gen_class;        // indices into reps for the chosen generators
    std::vector<std::vector<Int>> coords; // class index -> generator coordinates
};

namespace octagon_detail {

inline HermSpace herm_zero(const WittSlot& s) {
    HermSpace h;
    h.A = s.A;
    h.inv = s.inv;
    h.eps = s.eps;
    return h;
}

inline HermSpace herm_sum(const HermSpace& a, const HermSpace& b) {
    HermSpace out = a;
    size_t n = a.rank(), m = b.rank();
    out.gram.assign(n + m, std::vector<AElem>(n + m, ae_zero(a.A)));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) out.gram[i][j] = a.gram[i][j];
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < m; ++j) out.gram[n + i][n + j] = b.gram[i][j];
    return out;
}

inline HermSpace herm_neg(const HermSpace& a) {
    HermSpace out = a;
    for (auto& row : out.gram)
        for (auto& x : row) x = ae_neg(x);
    return out;
}

inline bool herm_same_class(const HermSpace& a, const HermSpace& b) {
    auto d = decide_herm_witt(herm_sum(a, herm_neg(b)));
    if (d.verdict == Tri::Unknown) fail("EnumerationBudgetExceeded", "class comparison undecided");
    return d.verdict == Tri::Yes;
}

}  // namespace octagon_detail

// enumerate the Witt group of a slot over a finite field from diagonal forms
// of rank <= max_rank with unit symmetric entries
inline FiniteWittGroup enumerate_witt_group(const WittSlot& s, int max_rank = 4) {
    using namespace octagon_detail;
    const Algebra& A = s.A;
    const Field& F = A.F;
    if (!is_finite_field(F)) fail("EnumerationBudgetExceeded", "enumeration needs a finite field");
    FiniteWittGroup out;
    out.slot = s;
    out.reps.push_back(herm_zero(s));

    // entry pool: orbit representatives of eps-symmetric units under the
    // congruence action a -> c^sigma a c; rank-1 forms with congruent entries
    // are isometric, so one representative per orbit suffices
    std::vector<AElem> pool;
    {
        size_t d = A.dim();
        Mat sys(F, d, d);
        for (size_t t = 0; t < d; ++t) {
            AElem diff = ae_sub(apply_inv(A, s.inv, ae_basis(A, t)),
                                ae_scale(ae_basis(A, t), F_int(F, s.eps)));
            for (size_t r = 0; r < d; ++r) sys(r, t) = diff.c[r];
        }
        Mat ker = mat_kernel(sys);
        size_t symdim = ker.cols();
        std::vector<FieldElem> elems;
        enumerate_field(F, elems);
        // all unit elements of the whole algebra (for the congruence action)
        std::vector<AElem> all_units;
        {
            std::vector<size_t> idx(d, 0);
            while (true) {
                AElem v = ae_zero(A);
                for (size_t r = 0; r < d; ++r) v.c[r] = elems[idx[r]];
                if (ae_inv(A, v)) all_units.push_back(v);
                size_t k = 0;
                while (k < d && ++idx[k] == elems.size()) idx[k++] = 0;
                if (k == d) break;
            }
        }
        auto key_of = [&](const AElem& x) { return ae_str(A, x); };
        std::map<std::string, bool> marked;
        std::vector<size_t> idx(symdim, 0);
        while (symdim > 0) {
            AElem v = ae_zero(A);
            for (size_t j = 0; j < symdim; ++j) {
                for (size_t r = 0; r < d; ++r)
                    v.c[r] = f_add(v.c[r], f_mul(ker(r, j), elems[idx[j]]));
            }
            if (ae_inv(A, v) && !marked.count(key_of(v))) {
                pool.push_back(v);
                for (const auto& c : all_units) {
                    AElem orb = ae_mul(A, apply_inv(A, s.inv, c), ae_mul(A, v, c));
                    marked[key_of(orb)] = true;
                }
            }
            size_t k = 0;
            while (k < symdim && ++idx[k] == elems.size()) idx[k++] = 0;
            if (k == symdim) break;
        }
    }
    if (pool.empty()) {
        // the slot carries only the zero group
        out.pres = FinAbPresentation::zero();
        out.coords.assign(1, {});
        return out;
    }

    // all diagonal forms with entries from the pool up to max_rank
    for (int r = 1; r <= max_rank; ++r) {
        std::vector<size_t> idx(static_cast<size_t>(r), 0);
        while (true) {
            std::vector<AElem> diag;
            for (size_t i = 0; i < idx.size(); ++i) diag.push_back(pool[idx[i]]);
            try {
                HermSpace h = herm_diag(A, s.inv, s.eps, diag);
                bool fresh = true;
                for (const auto& rep : out.reps)
                    if (herm_same_class(h, rep)) {
                        fresh = false;
                        break;
                    }
                if (fresh) out.reps.push_back(h);
            } catch (const error&) {
                // non-symmetric or degenerate entries are skipped
            }
            size_t k = 0;
            while (k < idx.size() && ++idx[k] == pool.size()) idx[k++] = 0;
            if (k == idx.size()) break;
        }
    }

    // group structure from the addition on classes
    size_t n = out.reps.size();
    auto class_of = [&](const HermSpace& h) {
        for (size_t i = 0; i < n; ++i)
            if (octagon_detail::herm_same_class(h, out.reps[i])) return i;
        fail("EnumerationBudgetExceeded", "sum left the enumerated classes; raise the rank bound");
    };
    std::vector<std::vector<size_t>> add(n, std::vector<size_t>(n, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i; j < n; ++j) {
            size_t k = class_of(octagon_detail::herm_sum(out.reps[i], out.reps[j]));
            add[i][j] = add[j][i] = k;
        }
    // choose generators greedily
    std::vector<size_t> gens;
    std::vector<size_t> reachable = {0};
    auto closure = [&](const std::vector<size_t>& gs) {
        std::vector<size_t> seen = {0};
        bool grew = true;
        while (grew) {
            grew = false;
            for (size_t x : seen)
                for (size_t g : gs) {
                    size_t y = add[x][g];
                    if (std::find(seen.begin(), seen.end(), y) == seen.end()) {
                        seen.push_back(y);
                        grew = true;
                    }
                }
        }
        return seen;
    };
    for (size_t cand = 1; cand < n && reachable.size() < n; ++cand) {
        if (std::find(reachable.begin(), reachable.end(), cand) != reachable.end()) continue;
        gens.push_back(cand);
        reachable = closure(gens);
    }
    out.gen_class = gens;
    size_t g = gens.size();
    // coordinates of every class and the relation lattice
    std::map<std::vector<Int>, size_t> seen;
    std::vector<std::vector<Int>> rels;
    std::vector<std::vector<Int>> coord_of(n);
    // BFS over exponent vectors
    std::vector<std::pair<std::vector<Int>, size_t>> queue = {{std::vector<Int>(g, 0), 0}};
    seen[{std::vector<Int>(g, 0)}] = 0;
    for (size_t qi = 0; qi < queue.size() && qi < 4096; ++qi) {
        auto [vec, cls] = queue[qi];
        if (coord_of[cls].empty()) coord_of[cls] = vec;
        for (size_t t = 0; t < g; ++t) {
            auto nv = vec;
            nv[t] += 1;
            size_t ncls = add[cls][gens[t]];
            if (!seen.count(nv)) {
                seen[nv] = ncls;
                queue.push_back({nv, ncls});
            }
        }
    }
    // relations: exponent vectors mapping to the zero class; keep only the
    // ones that enlarge the relation lattice, so presentations stay small
    IntMat rel(g, 0);
    for (auto& [vec, cls] : seen) {
        if (cls != 0) continue;
        bool allzero = true;
        for (auto& x : vec)
            if (x != 0) allzero = false;
        if (allzero) continue;
        IntMat col(g, 1);
        for (size_t i = 0; i < g; ++i) col(i, 0) = vec[i];
        if (rel.cols() > 0 && int_solve(rel, col).has_value()) continue;
        rel = rel.hcat(col);
        rels.push_back(vec);
    }
    out.pres = FinAbPresentation(g, rel);
    out.coords.assign(n, {});
    for (size_t c = 0; c < n; ++c) out.coords[c] = coord_of[c];
    return out;
}

struct ExactnessVerdict {
    bool exact = false;
    std::vector<Int> group_orders;
    std::vector<std::string> cohomology;  // invariant factors at each position
};

// verify exactness of a non-cyclic arrow sequence (the five-term complex) over
// a finite field, padding with zero groups at both ends
inline ExactnessVerdict check_exactness_finite(const std::vector<WittArrow>& arrows, int max_rank = 4) {
    std::vector<FiniteWittGroup> groups;
    groups.push_back(enumerate_witt_group(arrows[0].src, max_rank));
    for (const auto& a : arrows) groups.push_back(enumerate_witt_group(a.tgt, max_rank));

    auto map_between = [&](const WittArrow& a, const FiniteWittGroup& src, const FiniteWittGroup& tgt) {
        IntMat m(tgt.pres.rank, src.pres.rank);
        for (size_t t = 0; t < src.gen_class.size(); ++t) {
            HermSpace img = a.apply(src.reps[src.gen_class[t]]);
            // find the class of the image in the target
            size_t cls = tgt.reps.size();
            for (size_t c = 0; c < tgt.reps.size(); ++c)
                if (octagon_detail::herm_same_class(img, tgt.reps[c])) {
                    cls = c;
                    break;
                }
            if (cls == tgt.reps.size())
                fail("EnumerationBudgetExceeded", "image class not found in the target enumeration");
            for (size_t r = 0; r < tgt.pres.rank; ++r) m(r, t) = tgt.coords[cls][r];
        }
        return FinAbMap{src.pres, tgt.pres, m};
    };

    std::vector<FinAbMap> maps;
    maps.push_back(FinAbMap::zero(FinAbPresentation::zero(), groups[0].pres));
    for (size_t i = 0; i < arrows.size(); ++i) maps.push_back(map_between(arrows[i], groups[i], groups[i + 1]));
    maps.push_back(FinAbMap::zero(groups.back().pres, FinAbPresentation::zero()));

    ExactnessVerdict out;
    out.exact = true;
    for (const auto& gr : groups) out.group_orders.push_back(gr.pres.order());
    for (size_t i = 1; i + 1 <= maps.size() - 1; ++i) {
        auto h = cohomology_at(maps, i);
        out.cohomology.push_back(h.str());
        if (!h.is_trivial()) out.exact = false;
    }
    return out;
}

}  // namespace gwc
