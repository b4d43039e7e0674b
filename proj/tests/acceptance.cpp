// Acceptance suite: the worked examples and property batteries that gate the
// build, one line per criterion. Every check is exact (zero tolerance); the
// stated wall-clock budgets are enforced.

#include <chrono>
#include <iostream>
#include <vector>

#include "gwc/format.hpp"
#include "gwc/octagon.hpp"
#include "gwc/selftest.hpp"

using namespace gwc;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int idx, const std::string& name, bool pass, double ms, double budget_ms,
            const std::string& detail = "") {
    bool ok = pass && ms <= budget_ms;
    if (!ok) ++failures;
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << "criterion " << idx << ": " << name << " ("
              << static_cast<long>(ms) << " ms, budget " << static_cast<long>(budget_ms) << " ms)";
    if (!pass && !detail.empty()) std::cout << " -- " << detail;
    if (pass && ms > budget_ms) std::cout << " -- over time budget";
    std::cout << "\n";
    std::cout.flush();
}

double ms_since(Clock::time_point t0) {
    return std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(Clock::now() - t0)
        .count();
}

MultiPoly var(const PRing& R, size_t i) { return MultiPoly::variable(R, i); }

// --- criterion 1: the toy chain ---------------------------------------------------

void criterion_1() {
    auto t0 = Clock::now();
    bool pass = true;
    std::string detail;
    try {
        RingDescriptor R = ring_2dim_local(QQ());
        MultiPoly X = var(R.poly2, 0), Y = var(R.poly2, 1);
        FactoredForm f;
        f.R = R.poly2;
        f.entries.push_back({F_one(QQ()), {{X, 1}, {Y, 1}}});
        auto d0 = d0_factored(f, R);
        pass = d0.comps.size() == 2;
        pass = pass && d0.comps[0].prime.key == "(x)" && f_str(d0.comps[0].cls.entries.at(0)) == "y";
        pass = pass && d0.comps[1].prime.key == "(y)" && f_str(d0.comps[1].cls.entries.at(0)) == "x";
        auto d1 = d1_two_dim(d0, R);
        pass = pass && d1.contributions.size() == 2;
        pass = pass && f_eq(d1.contributions[0].second.entries.at(0), F_int(QQ(), -1));
        pass = pass && f_eq(d1.contributions[1].second.entries.at(0), F_one(QQ()));
        pass = pass && check_d2_zero(f, R).zero;
    } catch (const error& e) {
        pass = false;
        detail = e.what();
    }
    report(1, "toy chain d0<xy>, d1 cancellation over Q[x,y]_(x,y)", pass, ms_since(t0), 1000, detail);
}

// --- criterion 2: the singular residue --------------------------------------------

void criterion_2() {
    auto t0 = Clock::now();
    bool pass = true;
    std::string detail;
    try {
        for (const Field& F : {QQ(), GF(7)}) {
            PRing R = poly_ring(F, {"x", "y"});
            MultiPoly X = var(R, 0), Y = var(R, 1);
            MultiPoly curve = X * X - Y * Y * Y * Y * Y;
            // the intermediate determinant is -y^4/x
            auto sc = solve_coeffs(R, {curve}, {X, Y});
            auto rd = residue_determinant(R, {curve}, {X, Y}, sc.gamma, sc.xi);
            pass = pass && rd.d.num.equals(-(Y * Y * Y * Y)) && rd.d.den.equals(X);
            // U^f = z^-2 F[z] localized, for the balanced lattice
            CurvePrime cp = classify_curve_prime(R, curve);
            FieldElem c = embed_to_branch(cp, reduce_mod_prime(cp, X * Y));
            auto sat = lattice_saturate(cp.branch, normalization_lattice(cp.branch), c);
            pass = pass && lattice_contains(sat.Udual, f_pow(F_gen(cp.branch.Fz), -2));
            pass = pass && !lattice_contains(sat.Udual, f_pow(F_gen(cp.branch.Fz), -3));
            // the residue class is <-[x^y -> 1]>
            auto res = residue_at_origin(R, cp, reduce_mod_prime(cp, X * Y));
            TwistSymbol sym{{"x", "y"}, 1};
            DiagForm expect{F, {F_int(F, -1)}, sym, false};
            pass = pass && witt_equal(res.cls, expect).verdict == Tri::Yes;
            pass = pass && res.cls.entries.size() == 1 && f_eq(res.cls.entries[0], F_int(F, -1));
        }
    } catch (const error& e) {
        pass = false;
        detail = e.what();
    }
    report(2, "singular residue on x^2 - y^5 over Q and F7", pass, ms_since(t0), 1000, detail);
}

// --- criterion 3: d^2 = 0 batteries ------------------------------------------------

void criterion_3() {
    auto t0 = Clock::now();
    bool pass = true;
    std::string detail;
    try {
        Rng rng(0xACC3);
        // 100 random factored forms over Q(x,y)
        RingDescriptor R = ring_2dim_local(QQ());
        MultiPoly X = var(R.poly2, 0), Y = var(R.poly2, 1);
        std::vector<MultiPoly> pool = {X,
                                       Y,
                                       X + Y,
                                       X - Y,
                                       Y - X * X,
                                       X - Y * Y,
                                       X * X - Y * Y * Y,
                                       X * X - Y * Y * Y * Y * Y};
        for (int trial = 0; trial < 100; ++trial) {
            FactoredForm f;
            f.R = R.poly2;
            size_t rank = 1 + rng.below(3);
            for (size_t i = 0; i < rank; ++i) {
                FactoredEntry e;
                long u = 1 + static_cast<long>(rng.below(6));
                if (rng.below(2)) u = -u;
                e.unit = F_int(QQ(), u);
                size_t nf = rng.below(4);
                for (size_t k = 0; k < nf; ++k) {
                    int exp = 1 + static_cast<int>(rng.below(2));
                    if (rng.below(3) == 0) exp = -exp;
                    e.parts.push_back({pool[rng.below(pool.size())], exp});
                }
                f.entries.push_back(e);
            }
            if (!check_d2_zero(f, R).zero) {
                pass = false;
                detail = "failure on " + f.str();
                break;
            }
        }
        // 100 random diagonal forms over F7(t), full one-dimensional complex
        RingDescriptor R7 = ring_poly(GF(7));
        Field K = R7.fraction;
        for (int trial = 0; trial < 100 && pass; ++trial) {
            std::vector<FieldElem> es;
            size_t rank = 1 + rng.below(3);
            for (size_t i = 0; i < rank; ++i) {
                FieldElem a = random_elem(K, rng);
                es.push_back(f_is_zero(a) ? F_one(K) : a);
            }
            DiagForm f = make_form(K, es);
            if (!check_d2_zero(f, R7, rng).zero) {
                pass = false;
                detail = "failure on " + f.str();
            }
        }
    } catch (const error& e) {
        pass = false;
        detail = e.what();
    }
    report(3, "d^2 = 0 on 100 forms over Q(x,y) and 100 over F7(t)", pass, ms_since(t0), 60000, detail);
}

// --- criterion 4: the Springer identity --------------------------------------------

void criterion_4() {
    auto t0 = Clock::now();
    bool pass = true;
    std::string detail;
    try {
        Rng rng(0xACC4);
        struct Case {
            Field F;
            UPoly m;
        };
        Field Q = QQ(), F7 = GF(7);
        std::vector<Case> cases = {
            {Q, {F_int(Q, -2), F_zero(Q), F_zero(Q), F_one(Q)}},       // t^3 - 2
            {F7, {F_int(F7, -1), F_int(F7, -1), F_zero(F7), F_one(F7)}}  // t^3 - t - 1
        };
        for (auto& cs : cases) {
            Algebra A = alg_field(cs.F);
            MonogenicExtension ext{A, cs.m};
            for (int trial = 0; trial < 20; ++trial) {
                std::vector<FieldElem> es;
                size_t n = 1 + rng.below(3);
                for (size_t k = 0; k < n; ++k) {
                    FieldElem e = random_elem(cs.F, rng, 6);
                    es.push_back(f_is_zero(e) ? F_one(cs.F) : e);
                }
                HermSpace f = herm_scalar_diag(A, inv_identity(), 1, es);
                HermSpace tr =
                    scharlau_transfer(ext, inv_identity(), 1, base_change_to_monogenic(ext, f));
                Mat gm(cs.F, tr.rank(), tr.rank());
                for (size_t r = 0; r < tr.rank(); ++r)
                    for (size_t c2 = 0; c2 < tr.rank(); ++c2) gm(r, c2) = tr.gram[r][c2].c[0];
                auto diag = diagonalize_gram(gm);
                if (witt_equal(diag.form, make_form(cs.F, es)).verdict != Tri::Yes) {
                    pass = false;
                    detail = "round trip failed over " + field_name(cs.F);
                }
            }
        }
    } catch (const error& e) {
        pass = false;
        detail = e.what();
    }
    report(4, "Springer identity: 20 forms over Q and 20 over F7", pass, ms_since(t0), 10000, detail);
}

// --- criterion 5: surjectivity of the last differential ----------------------------

void criterion_5() {
    auto t0 = Clock::now();
    bool pass = true;
    std::string detail;
    try {
        Rng rng(0xACC5);
        Field F7 = GF(7);
        UPoly t = {F_zero(F7), F_one(F7)};
        UPoly t1 = {F_int(F7, -1), F_one(F7)};
        UPoly tp1 = {F_one(F7), F_one(F7)};
        RingDescriptor R = ring_poly(F7, {t, t1, tp1});
        for (int trial = 0; trial < 25 && pass; ++trial) {
            GWClass targets;
            targets.level = 1;
            for (const auto& q : R.loc_polys) {
                size_t rank = rng.below(3);
                if (rank == 0) continue;
                std::vector<FieldElem> es;
                for (size_t i = 0; i < rank; ++i)
                    es.push_back(F_int(F7, 1 + static_cast<long>(rng.below(6))));
                TwistSymbol sym{{up_str(q, "t")}, 1};
                targets.comps.push_back({prime_of_poly(R, q), DiagForm{F7, es, sym, false}});
            }
            DiagForm f = lift_last_differential(targets, R);
            auto d0 = d0_dedekind(f, R, rng);
            for (const auto& tc : targets.comps) {
                bool found = false;
                for (const auto& c : d0.comps)
                    if (c.prime.key == tc.prime.key) {
                        found = true;
                        if (witt_equal(c.cls, tc.cls).verdict != Tri::Yes) pass = false;
                    }
                if (!found && witt_is_zero(tc.cls).verdict != Tri::Yes) pass = false;
            }
            for (const auto& c : d0.comps) {
                bool in_targets = false;
                for (const auto& tc : targets.comps)
                    if (c.prime.key == tc.prime.key) in_targets = true;
                if (!in_targets && witt_is_zero(c.cls).verdict != Tri::Yes) pass = false;
            }
            if (!pass) detail = "re-residuing mismatch on trial " + std::to_string(trial);
        }
    } catch (const error& e) {
        pass = false;
        detail = e.what();
    }
    report(5, "last-differential lifts for 25 random targets over F7[t]_{(t),(t-1),(t+1)}", pass,
           ms_since(t0), 10000, detail);
}

// --- criterion 6: five-term exactness and the octagon over finite fields -----------

void criterion_6() {
    auto t0 = Clock::now();
    bool pass = true;
    std::string detail;
    try {
        struct QD {
            long q, d;
        };
        for (QD qd : {QD{5, 2}, QD{7, 3}, QD{13, 2}}) {
            Field F = GF(qd.q);
            auto arrows = five_term_sequence(F, F_int(F, qd.d));
            auto v = check_exactness_finite(arrows, 4);
            if (!v.exact) {
                pass = false;
                detail = "five-term not exact for q = " + std::to_string(qd.q);
            }
            if (v.group_orders.at(1) != 4 || v.group_orders.at(3) != 4) {
                pass = false;
                detail = "|W(F_q)| != 4 for q = " + std::to_string(qd.q);
            }
        }
        // octagon cochain property on all enumerated classes, split quaternions over F5
        Field F5 = GF(5);
        Algebra A = alg_quaternion(F5, F_one(F5), F_one(F5));
        OctagonData d{A, inv_canonical(), 1, ae_basis(A, 1), ae_basis(A, 2)};
        auto arrows = build_octagon(d);
        std::vector<std::vector<HermSpace>> samples;
        for (const auto& a : arrows) samples.push_back(enumerate_witt_group(a.src, 3).reps);
        auto rep = check_cochain(arrows, samples, true);
        if (!rep.ok || !rep.undecided.empty()) {
            pass = false;
            detail = "octagon cochain failed over F5";
        }
    } catch (const error& e) {
        pass = false;
        detail = e.what();
    }
    report(6, "five-term exact for (5,2),(7,3),(13,2); |W(F_q)| = 4; octagon cochain over F5", pass,
           ms_since(t0), 120000, detail);
}

// --- criterion 7: lattice-choice independence ---------------------------------------

void criterion_7() {
    auto t0 = Clock::now();
    bool pass = true;
    std::string detail;
    try {
        Rng rng(0xACC7);
        std::vector<std::pair<int, int>> curves = {{2, 3}, {2, 5}, {3, 5}};
        for (const Field& F : {GF(7), QQ()}) {
            PRing R = poly_ring(F, {"x", "y"});
            MultiPoly X = var(R, 0), Y = var(R, 1);
            for (auto [a, b] : curves) {
                MultiPoly curve = MultiPoly::zero(R);
                Mono mx(2, 0), my(2, 0);
                mx[0] = a;
                my[1] = b;
                curve.add_term(mx, F_one(F));
                curve.add_term(my, F_int(F, -1));
                CurvePrime cp = classify_curve_prime(R, curve);
                int done = 0, guard = 0;
                while (done < 50 && guard < 400 && pass) {
                    ++guard;
                    int i = static_cast<int>(rng.below(4)), j = static_cast<int>(rng.below(4));
                    FieldElem cc = F_int(F, 1 + static_cast<long>(rng.below(6)));
                    MultiPoly amb = MultiPoly::constant(R, cc);
                    for (int s = 0; s < i; ++s) amb = amb * X;
                    for (int s = 0; s < j; ++s) amb = amb * Y;
                    FieldElem coeff = reduce_mod_prime(cp, amb);
                    if (f_is_zero(coeff)) continue;
                    auto r1 = residue_at_origin(R, cp, coeff);
                    CIResidueOptions o2;
                    o2.start_gens = {F_one(cp.branch.Fz)};
                    auto r2 = residue_at_origin(R, cp, coeff, o2);
                    CIResidueOptions o3;
                    o3.start_gens = {f_pow(F_gen(cp.branch.Fz), Int(2 + rng.below(3)))};
                    auto r3 = residue_at_origin(R, cp, coeff, o3);
                    if (witt_equal(r1.cls, r2.cls).verdict != Tri::Yes ||
                        witt_equal(r1.cls, r3.cls).verdict != Tri::Yes) {
                        pass = false;
                        detail = "disagreement on " + curve.str() + " coeff " + amb.str();
                    }
                    ++done;
                }
                if (done < 50) {
                    pass = false;
                    detail = "could not generate 50 cases on " + curve.str();
                }
            }
        }
    } catch (const error& e) {
        pass = false;
        detail = e.what();
    }
    // the specification states no wall-clock budget for this criterion
    report(7, "lattice-choice independence: 50 residue_ci runs per supported curve", pass, ms_since(t0),
           600000, detail);
}

// --- criterion 8: the grid lemma -----------------------------------------------------

DoubleComplex random_grid_instance(Rng& rng, int s, int t) {
    DoubleComplex dc;
    dc.i_min = -s - 1;
    dc.i_max = t + 1;
    dc.j_min = -t - 1;
    dc.j_max = s + 1;
    struct Block {
        int i, j;
        FinAbPresentation g;
    };
    std::vector<Block> blocks;
    int nblocks = 2 + static_cast<int>(rng.below(4));
    for (int b = 0; b < nblocks; ++b) {
        int i = dc.i_min + static_cast<int>(rng.below(dc.i_max - dc.i_min));
        int j = dc.j_min + static_cast<int>(rng.below(dc.j_max - dc.j_min));
        auto touches = [&](int ci, int cj) { return (i == ci || i + 1 == ci) && (j == cj || j + 1 == cj); };
        if (touches(t, -t) || touches(-s, s)) continue;
        Int n = Int(1 + static_cast<long>(rng.below(6)));
        blocks.push_back({i, j, n == 1 ? FinAbPresentation::free_group(1) : FinAbPresentation::cyclic(n)});
    }
    std::map<std::pair<int, int>, std::vector<std::pair<size_t, size_t>>> spans;
    auto add_cell = [&](int i, int j, size_t b) {
        auto key = std::make_pair(i, j);
        auto& cell = dc.cells[key];
        size_t off = cell.rank;
        FinAbPresentation merged(cell.rank + blocks[b].g.rank, IntMat(cell.rank + blocks[b].g.rank, 0));
        IntMat rel(merged.rank, cell.rel.cols() + blocks[b].g.rel.cols());
        for (size_t r = 0; r < cell.rank; ++r)
            for (size_t c = 0; c < cell.rel.cols(); ++c) rel(r, c) = cell.rel(r, c);
        for (size_t r = 0; r < blocks[b].g.rank; ++r)
            for (size_t c = 0; c < blocks[b].g.rel.cols(); ++c)
                rel(off + r, cell.rel.cols() + c) = blocks[b].g.rel(r, c);
        merged.rel = rel;
        dc.cells[key] = merged;
        spans[key].push_back({b, off});
    };
    for (size_t b = 0; b < blocks.size(); ++b) {
        add_cell(blocks[b].i, blocks[b].j, b);
        add_cell(blocks[b].i + 1, blocks[b].j, b);
        add_cell(blocks[b].i, blocks[b].j + 1, b);
        add_cell(blocks[b].i + 1, blocks[b].j + 1, b);
    }
    auto put = [&](std::map<std::pair<int, int>, IntMat>& maps, int i, int j, int di, int dj, size_t b) {
        auto s_it = spans.find({i, j});
        auto t_it = spans.find({i + di, j + dj});
        if (s_it == spans.end() || t_it == spans.end()) return;
        size_t soff = 0, toff = 0;
        bool fs = false, ft = false;
        for (auto& [bb, off] : s_it->second)
            if (bb == b) {
                soff = off;
                fs = true;
            }
        for (auto& [bb, off] : t_it->second)
            if (bb == b) {
                toff = off;
                ft = true;
            }
        if (!fs || !ft) return;
        auto key = std::make_pair(i, j);
        auto& m = maps.try_emplace(key, IntMat(dc.at(i + di, j + dj).rank, dc.at(i, j).rank)).first->second;
        for (size_t r = 0; r < blocks[b].g.rank; ++r) m(toff + r, soff + r) = 1;
    };
    for (size_t b = 0; b < blocks.size(); ++b) {
        put(dc.hmat, blocks[b].i, blocks[b].j, 1, 0, b);
        put(dc.hmat, blocks[b].i, blocks[b].j + 1, 1, 0, b);
        put(dc.vmat, blocks[b].i, blocks[b].j, 0, 1, b);
        put(dc.vmat, blocks[b].i + 1, blocks[b].j, 0, 1, b);
    }
    return dc;
}

void criterion_8() {
    auto t0 = Clock::now();
    bool pass = true;
    std::string detail;
    try {
        Rng rng(0xACC8);
        int done = 0;
        while (done < 30) {
            int s = 1 + static_cast<int>(rng.below(2));
            int t = 1 + static_cast<int>(rng.below(2));
            DoubleComplex dc = random_grid_instance(rng, s, t);
            auto v = grid_check(dc, s, t);
            if (!v.hypotheses_ok) {
                pass = false;
                detail = v.failure;
                break;
            }
            if (!v.exact_at_origin) {
                pass = false;
                detail = "inexact at the origin: " + v.cohomology_at_origin.str();
                break;
            }
            ++done;
        }
    } catch (const error& e) {
        pass = false;
        detail = e.what();
    }
    report(8, "grid lemma: 30 hypothesis-satisfying double complexes exact at A_{0,0}", pass,
           ms_since(t0), 30000, detail);
}

// --- criterion 9: purity descent ------------------------------------------------------

void criterion_9() {
    auto t0 = Clock::now();
    bool pass = true;
    std::string detail;
    try {
        Rng rng(0xACC9);
        Field F7 = GF(7);
        UPoly t = {F_zero(F7), F_one(F7)};
        UPoly t1 = {F_int(F7, -1), F_one(F7)};
        RingDescriptor R = ring_poly(F7, {t, t1});
        Field K = R.fraction;
        FieldElem tK = F_gen(K);
        int done = 0;
        while (done < 50 && pass) {
            std::vector<FieldElem> es;
            size_t nev = 1 + rng.below(2);
            for (size_t i = 0; i < nev; ++i) {
                FieldElem u = F_int(K, 1 + static_cast<long>(rng.below(6)));
                FieldElem piece = f_pow(tK, Int(2 * rng.below(2)));
                FieldElem piece2 = f_pow(f_sub(tK, F_one(K)), Int(2 * rng.below(2)));
                es.push_back(f_mul(u, f_mul(piece, piece2)));
            }
            if (rng.below(2)) {
                // hyperbolic residue pair at (t)
                FieldElem a = F_int(K, 1 + static_cast<long>(rng.below(6)));
                FieldElem s = F_int(K, 1 + static_cast<long>(rng.below(6)));
                es.push_back(f_mul(tK, a));
                es.push_back(f_neg(f_mul(tK, f_mul(a, f_mul(s, s)))));
            }
            DiagForm f = make_form(K, es);
            auto d = purity_descent(f, R, rng);
            if (!d.descends) {
                pass = false;
                detail = "obstructed at " + d.obstruction_prime + " on " + f.str();
                break;
            }
            for (auto& [key, gram] : d.local_grams) {
                auto diag = diagonalize_gram(gram);
                if (witt_equal(diag.form, f).verdict != Tri::Yes) {
                    pass = false;
                    detail = "descended class differs at " + key;
                }
            }
            ++done;
        }
    } catch (const error& e) {
        pass = false;
        detail = e.what();
    }
    // the specification states no wall-clock budget for this criterion
    report(9, "purity descent: 50 residue-free forms over F7(t) descend and base-change back", pass,
           ms_since(t0), 600000, detail);
}

}  // namespace

int main() {
    std::cout << "acceptance suite\n";
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    if (failures == 0) {
        std::cout << "all 9 criteria passed\n";
        return 0;
    }
    std::cout << failures << " criteria failed\n";
    return 1;
}
