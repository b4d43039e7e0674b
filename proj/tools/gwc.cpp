// Command-line interface: residue computations, full complex checks, octagon
// and five-term verification, Springer round trips, integer homology, and the
// worked-example selftest. Reports are printed as text or deterministic JSON.
//
// Exit codes: 0 success / verified, 1 a mathematical check failed, 2 parse or
// validation errors.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <iostream>
#include <sstream>

#include "gwc/format.hpp"
#include "gwc/selftest.hpp"

using namespace gwc;
using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

namespace {

struct Output {
    bool json = false;
    bool stable = false;  // omit timestamps and timings for byte-identical runs
    Json doc;
    std::ostringstream text;

    void emit() {
        if (json) {
            if (!stable) {
                doc["timestamp"] =
                    std::chrono::duration_cast<std::chrono::seconds>(Clock::now().time_since_epoch()).count();
            }
            std::cout << doc.dump(2) << "\n";
        } else {
            std::cout << text.str();
        }
    }
};

Json form_json(const DiagForm& f) {
    Json j;
    j["entries"] = Json::array();
    for (const auto& e : f.entries) j["entries"].push_back(f_str(e));
    if (f.twist) j["twist"] = f.twist->str();
    return j;
}

int run_residue(const std::string& ring_s, const std::string& prime_s, const std::string& form_s,
                const std::string& at_s, Output& out, int budget) {
    RingDescriptor R = fmt::parse_ring(ring_s);
    auto t0 = Clock::now();
    if (R.kind == RingKind::TwoDimLocal) {
        if (at_s != "x,y" && at_s != "(x,y)" && !at_s.empty())
            fail("BadInput", "the target of a two-dimensional residue is the maximal ideal x,y");
        MultiPoly pi = fmt::parse_poly(prime_s, R.poly2);
        CurvePrime cp = classify_curve_prime(R.poly2, pi);
        // form: <[pi -> coeff], ...>
        fmt::Cursor c(form_s);
        c.expect('<');
        std::vector<FieldElem> coeffs;
        do {
            c.expect('[');
            // generator expression up to ->
            MultiPoly lhs = fmt::parse_poly_expr(c, R.poly2);
            if (!lhs.equals(pi) && !lhs.equals(-pi))
                fail("TwistMismatch", "form twist generator differs from --prime");
            c.expect('-');
            c.expect('>');
            coeffs.push_back(fmt::parse_elem_expr(c, cp.kp));
            c.expect(']');
        } while (c.accept(','));
        c.expect('>');
        DiagForm cls{cp.kp, coeffs, std::nullopt, false};
        CIResidueOptions opt;
        opt.budget = budget;
        auto res = residue_ci(R.poly2, cp, cls, opt);
        out.text << "residue at (x,y) of " << form_s << " over " << R.str() << ":\n";
        out.text << "  class: " << res.cls.str() << "\n";
        out.text << "  witness: " << res.witness << "\n";
        out.doc["command"] = "residue";
        out.doc["ring"] = R.str();
        out.doc["prime"] = prime_s;
        out.doc["target"] = "(x,y)";
        out.doc["class"] = form_json(res.cls);
        out.doc["witness"] = res.witness;
        if (!out.stable)
            out.doc["ms"] =
                std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
        return 0;
    }
    if (R.kind == RingKind::DedekindPoly || R.kind == RingKind::DedekindZ) {
        DiagForm f = fmt::parse_form(form_s, R.fraction);
        ValuedPlace pl = R.kind == RingKind::DedekindPoly
                             ? place_of_poly(R.fraction, [&] {
                                   PRing R1 = poly_ring(R.base, {"t"});
                                   MultiPoly p = fmt::parse_poly(prime_s, R1);
                                   UPoly u;
                                   for (int k = 0; k <= p.degree_in(0); ++k)
                                       u.push_back(p.coeff_of(0, k).constant_term());
                                   up_trim(u);
                                   return u;
                               }())
                             : place_of_prime(R.fraction, Int(prime_s));
        auto res = residue_dvr(f, pl);
        out.text << "residue at " << pl.str() << " of " << form_s << ":\n  class: " << res.cls.str()
                 << "\n";
        out.doc["command"] = "residue";
        out.doc["ring"] = R.str();
        out.doc["prime"] = pl.str();
        out.doc["class"] = form_json(res.cls);
        out.doc["witness"] = res.witness;
        return 0;
    }
    fail("UnsupportedRing", "residues need a one- or two-dimensional ring");
}

int run_complex_check(const std::string& ring_s, const std::string& form_s, Output& out, uint64_t seed) {
    RingDescriptor R = fmt::parse_ring(ring_s);
    auto t0 = Clock::now();
    out.doc["command"] = "complex check";
    out.doc["ring"] = R.str();
    out.doc["form"] = form_s;
    if (R.kind == RingKind::TwoDimLocal) {
        FactoredForm f = fmt::parse_factored_form(form_s, R.poly2);
        auto cert = check_d2_zero(f, R);
        out.text << "complex check over " << R.str() << " for " << f.str() << "\n";
        out.text << "  level 1: " << cert.level1.str() << "\n";
        for (auto& [src, cls] : cert.level2_contributions)
            out.text << "  level 2 from " << src << ": " << cls.str() << "\n";
        out.text << "  total at (x,y): " << cert.level2_total.str() << "\n";
        out.text << "  d^2 = 0: " << (cert.zero ? "verified" : "FAILED") << " (" << cert.verdict << ")\n";
        out.doc["level1"] = Json::array();
        for (auto& comp : cert.level1.comps) {
            Json c;
            c["prime"] = comp.prime.key;
            c["class"] = form_json(comp.cls);
            out.doc["level1"].push_back(c);
        }
        out.doc["level2"] = Json::array();
        for (auto& [src, cls] : cert.level2_contributions) {
            Json c;
            c["from"] = src;
            c["class"] = form_json(cls);
            out.doc["level2"].push_back(c);
        }
        out.doc["d2_zero"] = cert.zero;
        out.doc["verdict"] = cert.verdict;
        if (!out.stable)
            out.doc["ms"] =
                std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
        return cert.zero ? 0 : 1;
    }
    if (R.kind == RingKind::DedekindPoly || R.kind == RingKind::DedekindZ) {
        DiagForm f = fmt::parse_form(form_s, R.fraction);
        Rng rng(seed);
        auto cert = check_d2_zero(f, R, rng);
        out.text << "complex check over " << R.str() << " for " << f.str() << "\n";
        out.text << "  level 1: " << cert.level1.str() << "\n";
        out.text << "  " << cert.verdict << "\n";
        out.doc["level1"] = Json::array();
        for (auto& comp : cert.level1.comps) {
            Json c;
            c["prime"] = comp.prime.key;
            c["class"] = form_json(comp.cls);
            out.doc["level1"].push_back(c);
        }
        out.doc["d2_zero"] = cert.zero;
        out.doc["verdict"] = cert.verdict;
        if (!out.stable)
            out.doc["ms"] =
                std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
        return cert.zero ? 0 : 1;
    }
    fail("UnsupportedRing", "complex check needs a one- or two-dimensional ring");
}

AElem parse_quat_elem(const std::string& s, const Algebra& A) {
    if (s == "i") return ae_basis(A, 1);
    if (s == "j") return ae_basis(A, 2);
    if (s == "k" || s == "ij") return ae_basis(A, 3);
    // comma-separated coordinates
    fmt::Cursor c(s);
    AElem e = ae_zero(A);
    for (size_t t = 0; t < A.dim(); ++t) {
        if (t) c.expect(',');
        e.c[t] = F_rat(A.F, fmt::parse_rat(c));
    }
    return e;
}

int run_octagon_check(const std::string& quat_s, const std::string& field_s, const std::string& lambda_s,
                      const std::string& mu_s, Output& out, uint64_t seed) {
    Field F = fmt::parse_field(field_s);
    fmt::Cursor c(quat_s);
    Rat a = fmt::parse_rat(c);
    c.expect(',');
    Rat b = fmt::parse_rat(c);
    Algebra A = alg_quaternion(F, F_rat(F, a), F_rat(F, b));
    OctagonData d{A, inv_canonical(), 1, parse_quat_elem(lambda_s, A), parse_quat_elem(mu_s, A)};
    auto arrows = build_octagon(d);
    Rng rng(seed);
    std::vector<std::vector<HermSpace>> samples;
    for (const auto& ar : arrows) samples.push_back(slot_samples(ar.src, rng, 3));
    auto rep = check_cochain(arrows, samples, true);
    out.text << "octagon over " << A.str() << ", lambda = " << lambda_s << ", mu = " << mu_s << "\n";
    out.text << "  B = " << arrows[0].tgt.A.str() << ", tau1 = conj, tau2 = id\n";
    out.text << "  composites checked: " << rep.composites_checked << ", trivial: " << rep.trivial
             << ", undecided: " << rep.undecided.size() << "\n";
    out.text << "  cochain property: " << (rep.ok ? "verified" : "FAILED") << "\n";
    for (auto& f : rep.failures) out.text << "  violation: " << f << "\n";
    out.doc["command"] = "octagon check";
    out.doc["algebra"] = A.str();
    out.doc["B"] = arrows[0].tgt.A.str();
    out.doc["composites"] = rep.composites_checked;
    out.doc["trivial"] = rep.trivial;
    out.doc["undecided"] = rep.undecided.size();
    out.doc["ok"] = rep.ok;
    return rep.ok ? 0 : 1;
}

int run_octagon_exact(long q, long dd, Output& out) {
    Field F = GF(q);
    auto arrows = five_term_sequence(F, F_int(F, dd));
    auto v = check_exactness_finite(arrows, 4);
    out.text << "five-term sequence over F" << q << " with d = " << dd << "\n  groups:";
    for (auto& o : v.group_orders) out.text << " " << o.get_str();
    out.text << "\n  exact: " << (v.exact ? "yes" : "NO") << "\n";
    out.doc["command"] = "octagon exact";
    out.doc["q"] = q;
    out.doc["d"] = dd;
    out.doc["orders"] = Json::array();
    for (auto& o : v.group_orders) out.doc["orders"].push_back(o.get_str());
    out.doc["cohomology"] = v.cohomology;
    out.doc["exact"] = v.exact;
    return v.exact ? 0 : 1;
}

int run_springer(const std::string& field_s, const std::string& minpoly_s, int samples, Output& out,
                 uint64_t seed) {
    Field F = fmt::parse_field(field_s);
    PRing R1 = poly_ring(F, {"t"});
    MultiPoly mp = fmt::parse_poly(minpoly_s, R1);
    UPoly m;
    for (int k = 0; k <= mp.degree_in(0); ++k) m.push_back(mp.coeff_of(0, k).constant_term());
    up_trim(m);
    if (!f_eq(m.back(), F_one(F))) fail("NotMonogenicBasis", "minimal polynomial must be monic");
    Algebra A = alg_field(F);
    MonogenicExtension ext{A, m};
    Rng rng(seed);
    int pass = 0;
    for (int t = 0; t < samples; ++t) {
        std::vector<FieldElem> es;
        size_t n = 1 + rng.below(3);
        for (size_t k = 0; k < n; ++k) {
            FieldElem e = random_elem(F, rng, 6);
            es.push_back(f_is_zero(e) ? F_one(F) : e);
        }
        HermSpace f = herm_scalar_diag(A, inv_identity(), 1, es);
        HermSpace tr = scharlau_transfer(ext, inv_identity(), 1, base_change_to_monogenic(ext, f));
        Mat gm(F, tr.rank(), tr.rank());
        for (size_t r = 0; r < tr.rank(); ++r)
            for (size_t c2 = 0; c2 < tr.rank(); ++c2) gm(r, c2) = tr.gram[r][c2].c[0];
        auto diag = diagonalize_gram(gm);
        if (witt_equal(diag.form, make_form(F, es)).verdict == Tri::Yes) ++pass;
    }
    out.text << "Springer identity over " << field_name(F) << " with S = " << field_name(F) << "[t]/("
             << minpoly_s << "): " << pass << "/" << samples << " round trips are the identity\n";
    out.doc["command"] = "springer";
    out.doc["field"] = field_name(F);
    out.doc["minpoly"] = minpoly_s;
    out.doc["pass"] = pass;
    out.doc["samples"] = samples;
    return pass == samples ? 0 : 1;
}

int run_homology_snf(size_t rows, size_t cols, const std::string& entries, Output& out) {
    IntMat m(rows, cols);
    fmt::Cursor c(entries);
    for (size_t i = 0; i < rows; ++i)
        for (size_t j = 0; j < cols; ++j) {
            if (i || j) c.expect(',');
            bool neg = c.accept('-');
            Int v = c.integer();
            m(i, j) = neg ? -v : v;
        }
    SnfResult s = smith_normal_form(m);
    bool ok = (s.U * m * s.V) == s.D;
    out.text << "smith normal form of " << m.str() << ":\n  D = " << s.D.str() << "\n  U = " << s.U.str()
             << "\n  V = " << s.V.str() << "\n  U*M*V = D " << (ok ? "verified" : "FAILED") << "\n";
    out.doc["command"] = "homology snf";
    out.doc["D"] = s.D.str();
    out.doc["U"] = s.U.str();
    out.doc["V"] = s.V.str();
    out.doc["verified"] = ok;
    return ok ? 0 : 1;
}

int run_selftest_cmd(Output& out) {
    auto results = gwc::run_selftest();
    int failed = 0;
    out.doc["command"] = "selftest";
    out.doc["checks"] = Json::array();
    for (const auto& r : results) {
        out.text << (r.pass ? "[pass] " : "[FAIL] ") << r.name << "\n";
        if (!r.pass && !r.detail.empty()) out.text << "       " << r.detail << "\n";
        Json c;
        c["name"] = r.name;
        c["pass"] = r.pass;
        out.doc["checks"].push_back(c);
        if (!r.pass) ++failed;
    }
    out.text << results.size() - failed << "/" << results.size() << " checks passed\n";
    out.doc["passed"] = results.size() - failed;
    out.doc["total"] = results.size();
    return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gwc: exact Gersten-Witt complex computations"};
    app.require_subcommand(1);
    app.fallthrough();

    bool json = false, stable = false;
    uint64_t seed = 1;
    int budget = 64;
    app.add_flag("--json", json, "emit a JSON report");
    app.add_flag("--stable-json", stable, "omit timestamps and timings from reports");
    app.add_option("--seed", seed, "seed for randomized subroutines");
    app.add_option("--budget", budget, "iteration/enumeration budget");

    auto* residue = app.add_subcommand("residue", "second residue map of a (twisted) form");
    residue->fallthrough();
    std::string ring_s, prime_s, form_s, at_s;
    residue->add_option("--ring", ring_s, "ring descriptor")->required();
    residue->add_option("--prime", prime_s, "prime generator(s)")->required();
    residue->add_option("--form", form_s, "the (twisted) diagonal form")->required();
    residue->add_option("--at", at_s, "target prime for two-dimensional rings");

    auto* complex = app.add_subcommand("complex", "Gersten-Witt complex operations");
    complex->fallthrough();
    auto* ccheck = complex->add_subcommand("check", "compute the chain and certify d^2 = 0");
    ccheck->fallthrough();
    std::string cring_s, cform_s;
    ccheck->add_option("--ring", cring_s, "ring descriptor")->required();
    ccheck->add_option("--form", cform_s, "diagonal form (factored over two-dimensional rings)")->required();

    auto* octagon = app.add_subcommand("octagon", "octagon / five-term sequences");
    octagon->fallthrough();
    auto* ocheck = octagon->add_subcommand("check", "cochain property on slot samples");
    ocheck->fallthrough();
    std::string quat_s, field_s = "Q", lambda_s = "i", mu_s = "j";
    ocheck->add_option("--quat", quat_s, "quaternion parameters a,b")->required();
    ocheck->add_option("--field", field_s, "base field");
    ocheck->add_option("--lambda", lambda_s, "lambda (i/j/k or coordinates)");
    ocheck->add_option("--mu", mu_s, "mu (i/j/k or coordinates)");
    auto* oexact = octagon->add_subcommand("exact", "five-term exactness over a finite field");
    oexact->fallthrough();
    long oq = 5, od = 2;
    oexact->add_option("--q", oq, "field size (odd prime)")->required();
    oexact->add_option("--d", od, "non-square defining S = F(sqrt d)")->required();

    auto* springer = app.add_subcommand("springer", "Scharlau transfer round trips");
    springer->fallthrough();
    std::string sfield_s = "Q", sminpoly_s = "t^3-2";
    int ssamples = 20;
    springer->add_option("--field", sfield_s, "base field");
    springer->add_option("--minpoly", sminpoly_s, "monic minimal polynomial in t");
    springer->add_option("--samples", ssamples, "number of random forms");

    auto* homology = app.add_subcommand("homology", "integer matrix homology");
    homology->fallthrough();
    auto* snf = homology->add_subcommand("snf", "Smith normal form");
    snf->fallthrough();
    size_t hrows = 0, hcols = 0;
    std::string hmat;
    snf->add_option("--rows", hrows, "row count")->required();
    snf->add_option("--cols", hcols, "column count")->required();
    snf->add_option("--matrix", hmat, "row-major comma-separated entries")->required();

    auto* selftest = app.add_subcommand("selftest", "run the worked-example regression suite");
    selftest->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    Output out;
    out.json = json;
    out.stable = stable;
    int rc = 0;
    try {
        if (*residue) {
            rc = run_residue(ring_s, prime_s, form_s, at_s, out, budget);
        } else if (*ccheck) {
            rc = run_complex_check(cring_s, cform_s, out, seed);
        } else if (*ocheck) {
            rc = run_octagon_check(quat_s, field_s, lambda_s, mu_s, out, seed);
        } else if (*oexact) {
            rc = run_octagon_exact(oq, od, out);
        } else if (*springer) {
            rc = run_springer(sfield_s, sminpoly_s, ssamples, out, seed);
        } else if (*snf) {
            rc = run_homology_snf(hrows, hcols, hmat, out);
        } else if (*selftest) {
            rc = run_selftest_cmd(out);
        } else {
            std::cerr << "no subcommand selected\n";
            return 2;
        }
    } catch (const parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    out.emit();
    return rc;
}
