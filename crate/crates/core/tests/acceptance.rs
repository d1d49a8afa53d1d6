//! One line per acceptance criterion. Lines go straight to stdout so they show up
//! in the normal `cargo test` log.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lgdual::fano::{
    anticanonical_gram, blowup_extend, double_cover_gram, dp_root_identification, dp_root_identification_with,
    projective_bundle_gram, BundleBase, CurveOnFano, TripleIntersectionData,
};
use lgdual::fixture::{as_str, Document};
use lgdual::harness::FixtureSet;
use lgdual::laurent::lg::{del_pezzo, lg_constructor, product_model, standard_chain, LgTarget, ProductFamily};
use lgdual::laurent::minkowski::{minkowski_decompositions, newton_polytope, verify_m_polynomial, FaceDecomposition};
use lgdual::laurent::mutation::{main_period, monomial_transform, mutate};
use lgdual::laurent::param::ParamPolynomial as P;
use lgdual::laurent::parse::parse_laurent_in;
use lgdual::laurent::poly::{Exponent, LaurentPolynomial, RationalLaurent};
use lgdual::laurent::polytope::LatticePolytope;
use lgdual::pencil::{build_ls, verify_family};
use lgdual::period_map::{
    cd_substitution, modular_invariants_233, period_map_eval, pi_21, pi_ab, pi_cd, wp_equal, wp_equal_with, PeriodFamily,
    WEIGHTS_2356,
};
use lgdual::scalar::reduce_mod;
use lgdual::{forms_equivalent, genus_equal, FiniteQuadraticForm, IntMatrix, Lattice, Matrix, Rational, RootType, DEFAULT_BOUND};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn r(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// A parameter-only expression typed in from the printed text.
fn expr(s: &str) -> P {
    parse_laurent_in(s, 0).unwrap().constant_term()
}

fn at_ones(p: &LaurentPolynomial) -> RationalLaurent {
    let vals: BTreeMap<String, Rational> = p.params().into_iter().map(|k| (k, r(1))).collect();
    p.specialize(&vals).unwrap()
}

struct Line {
    id: &'static str,
    ok: bool,
    detail: String,
    /// Printed data that cannot be met; reported, not asserted.
    deviation: bool,
}

fn emit(line: &Line) {
    let tag = if line.ok { "PASS" } else { "FAIL" };
    let note = if line.deviation && !line.ok { " [known deviation]" } else { "" };
    let mut out = std::io::stdout().lock();
    writeln!(out, "ACCEPTANCE {tag} {}: {}{note}", line.id, line.detail).unwrap();
}

fn criterion_1(set: &FixtureSet) -> Line {
    let required: Vec<String> = (1..=36)
        .map(|i| format!("2.{i}"))
        .chain(["3.27", "3.28", "4.10", "5.3", "6.1", "7.1", "8.1", "9.1", "10.1"].map(String::from))
        .collect();
    let missing: Vec<&String> = required.iter().filter(|id| !set.families.contains_key(*id)).collect();
    let mut failed = vec![];
    let mut slowest = Duration::ZERO;
    let start = Instant::now();
    let configs: Vec<_> = set.families.values().chain(set.parametrized.values()).collect();
    for cfg in &configs {
        let t = Instant::now();
        let rep = verify_family(cfg, DEFAULT_BOUND);
        slowest = slowest.max(t.elapsed());
        let rank_ok = rep.rank == Some(20 - cfg.rank_pic());
        let has_printed = cfg.expected.is_some();
        if !(rep.passed && rank_ok && has_printed) {
            failed.push(format!("{}{}", cfg.family_id, if cfg.parametrized { "(F)" } else { "" }));
        }
    }
    let total = start.elapsed();
    let ok = missing.is_empty() && failed.is_empty() && slowest < Duration::from_secs(1) && total < Duration::from_secs(30);
    Line {
        id: "1",
        ok,
        detail: format!(
            "duality verified for {}/{} fixtures (missing {:?}, failed {:?}); slowest {:.2}s, total {:.2}s",
            configs.len() - failed.len(),
            configs.len(),
            missing,
            failed,
            slowest.as_secs_f64(),
            total.as_secs_f64()
        ),
        deviation: false,
    }
}

fn criterion_2(set: &FixtureSet) -> Line {
    let p3 = anticanonical_gram(&TripleIntersectionData::p3()).unwrap();
    let p1p2 = TripleIntersectionData::p1_p2();
    let built: Vec<(&str, Lattice)> = vec![
        ("2.2", double_cover_gram(&p1p2, &big(&[1, 1])).unwrap()),
        ("2.18", double_cover_gram(&p1p2, &big(&[1, 2])).unwrap()),
        ("2.25", blowup_extend(&p3, &CurveOnFano::new(&[4], 1)).unwrap()),
        ("2.33", blowup_extend(&p3, &CurveOnFano::new(&[1], 0)).unwrap()),
        ("2.34", projective_bundle_gram(BundleBase::P2, &[0, 0]).unwrap()),
        ("2.35", projective_bundle_gram(BundleBase::P2, &[0, 1]).unwrap()),
        ("2.36", projective_bundle_gram(BundleBase::P2, &[0, 2]).unwrap()),
        ("3.27", anticanonical_gram(&TripleIntersectionData::p1_cubed()).unwrap()),
    ];
    let mut bad = vec![];
    for (id, l) in &built {
        let printed = &set.picard_table[*id];
        if !genus_equal(l, printed, DEFAULT_BOUND).unwrap() {
            bad.push(id.to_string());
        }
    }
    let g = |id: &str| built.iter().find(|(i, _)| *i == id).unwrap().1.gram().to_rows();
    let exact_236 = g("2.36") == [big(&[2, 5]), big(&[5, 10])];
    let in_text_218 = g("2.18") == [big(&[0, 4]), big(&[4, 2])];
    Line {
        id: "2",
        ok: bad.is_empty() && exact_236 && in_text_218,
        detail: format!(
            "{}/{} constructors genus-equal to the table (bad {bad:?}); 2.36 entry-exact {exact_236}; 2.18 values 4/0/2 {in_text_218}",
            built.len() - bad.len(),
            built.len()
        ),
        deviation: false,
    }
}

fn criterion_3() -> Line {
    use RootType::*;
    let matched: Vec<bool> = (1..=6).map(|d| dp_root_identification(d, DEFAULT_BOUND).unwrap().genus_equal).collect();
    let controls = [(1, vec![(E, 7), (A, 1)]), (3, vec![(D, 6)]), (4, vec![(A, 5)]), (6, vec![(A, 3)])];
    let rejected = controls
        .iter()
        .filter(|(d, roots)| !dp_root_identification_with(*d, roots, DEFAULT_BOUND).unwrap().genus_equal)
        .count();
    Line {
        id: "3",
        ok: matched.iter().all(|&b| b) && rejected == controls.len(),
        detail: format!(
            "N vs H+R(2) genus-equal for degrees 1..6: {matched:?}; wrong root systems rejected {rejected}/{}",
            controls.len()
        ),
        deviation: false,
    }
}

fn fixture_poly(doc: &Document, sec: &str, key: &str) -> Option<LaurentPolynomial> {
    let v = doc.section(sec)?.get(key)?;
    Some(parse_laurent_in(as_str(v, key).unwrap(), 3).unwrap())
}

fn fixture_list(doc: &Document, sec: &str, key: &str) -> Vec<LaurentPolynomial> {
    doc.section(sec)
        .and_then(|s| s.get(key))
        .map(|v| v.as_array().unwrap().iter().map(|t| parse_laurent_in(t.as_str().unwrap(), 3).unwrap()).collect())
        .unwrap_or_default()
}

fn criterion_4(doc: &Document) -> Line {
    let fam = ProductFamily::F6_1;
    let mut cur = fixture_poly(doc, "product.6.1", "changed").unwrap();
    let printed = fixture_list(doc, "product.6.1", "chain");
    let mut steps = vec![];
    for (t, want) in fam.mutation_chain().iter().zip(&printed) {
        cur = t.apply(&cur).unwrap();
        steps.push(&cur == want);
    }
    let last = printed.last().unwrap();
    let fin = lgdual::laurent::mutation::change_of_variables(last, &fam.final_change_of_variables().unwrap()).unwrap();
    let final_ok = Some(fin) == fixture_poly(doc, "product.6.1", "final");
    Line {
        id: "4",
        ok: steps.len() == 3 && steps.iter().all(|&b| b) && final_ok,
        detail: format!("6.1 mutation steps reproduce printed forms {steps:?}; final change of variables {final_ok}"),
        deviation: false,
    }
}

fn criterion_5(doc: &Document) -> Line {
    let mut bad = vec![];
    let mut n = 0;
    for d in 3..=9u8 {
        n += 1;
        let sec = format!("dp.{d}");
        let want = fixture_poly(doc, &sec, "marked").or_else(|| fixture_poly(doc, &sec, "toric")).unwrap().with_nvars(2);
        let got = lg_constructor(&format!("dp{d}").parse::<LgTarget>().unwrap()).unwrap();
        if Some(&got) != want.as_ref().ok() || del_pezzo(d).unwrap() != got {
            bad.push(format!("dp{d}"));
        }
    }
    for fam in ProductFamily::ALL {
        n += 1;
        let got = lg_constructor(&LgTarget::Product(fam)).unwrap();
        if Some(got) != fixture_poly(doc, &format!("product.{fam}"), "model") {
            bad.push(fam.to_string());
        }
    }
    Line {
        id: "5",
        ok: bad.is_empty(),
        detail: format!("{}/{n} parametrized models match the printed formulas term-for-term (bad {bad:?})", n - bad.len()),
        deviation: false,
    }
}

/// Constant terms of p^k by summing over all k-tuples of terms.
fn brute_force_period(p: &RationalLaurent, n: usize) -> Vec<Rational> {
    let terms: Vec<(Exponent, Rational)> = p.terms().map(|(e, c)| (e.clone(), c.clone())).collect();
    fn go(terms: &[(Exponent, Rational)], left: usize, acc: &mut Vec<i64>, coef: Rational) -> Rational {
        if left == 0 {
            return if acc.iter().all(|&x| x == 0) { coef } else { Rational::zero() };
        }
        let mut s = Rational::zero();
        for (e, c) in terms {
            acc.iter_mut().zip(e).for_each(|(a, x)| *a += x);
            s += go(terms, left - 1, acc, &coef * c);
            acc.iter_mut().zip(e).for_each(|(a, x)| *a -= x);
        }
        s
    }
    (0..=n).map(|k| go(&terms, k, &mut vec![0; p.nvars()], Rational::one())).collect()
}

fn criterion_6() -> Line {
    // (a)
    let samples = ["x + y + 1/(x*y)", "x + 1/x", "x*y + y + (1+x)/y", "2*x - 3/z + y*z + 5"];
    let a_ok = samples.iter().all(|s| main_period(&at_ones(&parse_laurent_in(s, 0).unwrap()), 3)[0] == r(1));
    // (b)
    let mut transforms = 0;
    let mut b_ok = true;
    for fam in ProductFamily::ALL {
        let Some(rows) = fam.change_of_variables() else { continue };
        if transforms == 5 {
            break;
        }
        transforms += 1;
        let cols: Vec<Exponent> = (0..3).map(|i| (0..3).map(|j| rows[j][i]).collect()).collect();
        let p = at_ones(&product_model(fam).unwrap());
        let t = monomial_transform(&p, &cols, &[r(1), r(1), r(1)]).unwrap();
        b_ok &= main_period(&p, 8) == main_period(&t, 8);
    }
    // (c)
    let wp = parse_laurent_in("x*y + y + (1+x)*y^-1", 2).unwrap();
    let wq = mutate(&wp, &[0, 1], &parse_laurent_in("1 + x", 2).unwrap()).unwrap();
    let mut c_ok = main_period(&at_ones(&wp), 8) == main_period(&at_ones(&wq), 8);
    let mut chains = 0;
    for fam in ProductFamily::ALL {
        let chain = standard_chain(fam).unwrap();
        let reference = main_period(&at_ones(&chain[0]), 8);
        chains += 1;
        c_ok &= chain[1..].iter().all(|p| main_period(&at_ones(p), 8) == reference);
    }
    // (d)
    let p = at_ones(&parse_laurent_in("x + y + x^-1*y^-1", 2).unwrap());
    let got = main_period(&p, 6);
    let oracle = brute_force_period(&p, 6);
    let d_ok = got == oracle && got == [1, 0, 0, 6, 0, 0, 90].map(r);
    Line {
        id: "6",
        ok: a_ok && b_ok && transforms == 5 && c_ok && d_ok,
        detail: format!(
            "(a) phi[p^0]=1 {a_ok}; (b) {transforms} transforms keep the period {b_ok}; (c) worked pair + {chains} chains keep 8 terms {c_ok}; (d) 1,0,0,6,0,0,90 vs brute force {d_ok}"
        ),
        deviation: false,
    }
}

/// Square facets of a 3-dimensional polytope with the two edge segments at the lex-min corner.
fn square_data(newt: &LatticePolytope) -> Vec<FaceDecomposition> {
    let mut out = vec![];
    for f in newt.faces(2) {
        let vs = f.vertices();
        if vs.len() != 4 || f.lattice_points().len() != 4 {
            continue;
        }
        let u = f.lex_min_vertex().clone();
        let others: Vec<&Exponent> = vs.iter().filter(|v| **v != u).collect();
        // the vertex opposite u is the sum of the other two minus u
        let pair = (0..3).flat_map(|i| (i + 1..3).map(move |j| (i, j))).find(|&(i, j)| {
            let k = 3 - i - j;
            (0..3).all(|c| others[i][c] + others[j][c] - u[c] == others[k][c])
        });
        let Some((i, j)) = pair else { continue };
        let seg = |v: &Exponent| LatticePolytope::from_points(&[vec![0; 3], v.iter().zip(&u).map(|(a, b)| a - b).collect()]).unwrap();
        out.push(FaceDecomposition::new(&f, &[(seg(others[i]), 1), (seg(others[j]), 1)]));
    }
    out
}

/// Binomials (c_u + c_v x^{v-u}) and (1 + (c_w/c_u) x^{w-u}) built from the face corners.
fn square_witness(p: &RationalLaurent, d: &FaceDecomposition) -> Vec<RationalLaurent> {
    let u = d.face.lex_min_vertex().clone();
    let cu = p.coeff(&u);
    d.summands
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let step = s.polytope.vertices().iter().find(|v| v.iter().any(|&x| x != 0)).unwrap().clone();
            let corner: Exponent = u.iter().zip(&step).map(|(a, b)| a + b).collect();
            let c = p.coeff(&corner);
            let terms = if k == 0 { vec![(vec![0; 3], cu.clone()), (step, c)] } else { vec![(vec![0; 3], r(1)), (step, c / &cu)] };
            RationalLaurent::from_terms(3, terms).unwrap()
        })
        .collect()
}

fn criterion_7() -> (Line, Line) {
    // (a)
    let square = LatticePolytope::from_points(&[vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
    let ds = minkowski_decompositions(&square).unwrap();
    let seg = |v: Vec<i64>| LatticePolytope::from_points(&[vec![0, 0], v]).unwrap();
    let transverse = FaceDecomposition::new(&square, &[(seg(vec![1, 0]), 1), (seg(vec![0, 1]), 1)]);
    let a_ok = ds.len() == 2
        && ds.iter().any(|d| d.is_trivial())
        && ds.iter().any(|d| {
            let mut got: Vec<_> = d.summands.iter().map(|s| s.polytope.vertices().to_vec()).collect();
            let mut want: Vec<_> = transverse.summands.iter().map(|s| s.polytope.vertices().to_vec()).collect();
            got.sort();
            want.sort();
            got == want
        });
    // (b)
    let generic = parse_laurent_in("a0*x + a1*y + a2*x*y*z^2 + a3/(y*z) + a4/(x*z) + a5*z + a6*x*y*z + a7", 3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(228);
    let pick = |rng: &mut ChaCha8Rng| -> Rational { [1, 2, 3, -1, -2, 5].map(r)[rng.gen_range(0..6)].clone() };
    let (mut vs_printed, mut vs_faces, mut total) = (0, 0, 0);
    let mut counterexample = None;
    for k in 0..300 {
        let mut a: Vec<Rational> = (0..8).map(|_| pick(&mut rng)).collect();
        // a third of the samples on the first two relations, a third on all three printed ones
        if k % 3 >= 1 {
            if k % 3 == 2 {
                a[1] = &a[0] * &a[0] / &a[2];
            }
            a[4] = &a[1] * &a[5] / &a[2];
            a[3] = &a[0] * &a[5] / &a[2];
        }
        let vals: BTreeMap<String, Rational> = a.iter().enumerate().map(|(i, v)| (format!("a{i}"), v.clone())).collect();
        let p = generic.specialize(&vals).unwrap();
        let datum = square_data(&newton_polytope(&p).unwrap());
        let witness: Vec<Vec<RationalLaurent>> = datum.iter().map(|d| square_witness(&p, d)).collect();
        let accepted = datum.len() == 3 && verify_m_polynomial(&p, &datum, &witness).unwrap();
        let printed = [&a[5] * &a[1] - &a[2] * &a[4], &a[0] * &a[5] - &a[2] * &a[3], &a[1] * &a[5] - &a[0] * &a[3]]
            .iter()
            .all(Zero::is_zero);
        let faces = [&a[5] * &a[1] - &a[2] * &a[4], &a[0] * &a[5] - &a[2] * &a[3], &a[0] * &a[4] - &a[1] * &a[3]]
            .iter()
            .all(Zero::is_zero);
        total += 1;
        vs_printed += usize::from(accepted != printed);
        vs_faces += usize::from(accepted != faces);
        if accepted != printed && counterexample.is_none() {
            counterexample = Some(a.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","));
        }
    }
    let b_ok = vs_printed == 0;
    let a_line = Line {
        id: "7a",
        ok: a_ok,
        detail: format!("unit square has exactly the trivial and transverse-segment decompositions: {a_ok} ({} found)", ds.len()),
        deviation: false,
    };
    let b_line = Line {
        id: "7b",
        ok: b_ok,
        detail: format!(
            "square-face acceptance vs printed relations disagrees on {vs_printed}/{total} instances (e.g. a0..a7 = {}); \
             vs relations read off the actual square faces (third one a0a4 = a1a3) disagrees on {vs_faces}/{total}",
            counterexample.unwrap_or_default()
        ),
        deviation: vs_faces == 0,
    };
    (a_line, b_line)
}

fn criterion_8() -> Line {
    let (a, b, c, d, l, m) = (P::var("a"), P::var("b"), P::var("c"), P::var("d"), P::var("l"), P::var("m"));
    // printed formulas, typed in again
    let ab_alpha = expr("1/9*(144*a*l^4 + 24*a*b*l^3*m + b^4*m^4)");
    let ab_beta = expr("-1/27*(216*a^2*l^6 - 648*a*b^2*l^4*m^2 + 36*a*b^3*l^3*m^3 + b^6*m^6)");
    let ab_gamma = expr("1024*a^3*l^10");
    let ab_delta = expr("1024/3*a^3*l^10*(12*l^2 - 12*b*l*m + b^2*m^2)");
    let cd_alpha = expr("1/9*(d^4*l^4 - 4*d^3*l^3*m - 24*c*d*l^3*m + 6*d^2*l^2*m^2 + 168*c*l^2*m^2 - 4*d*l*m^3 + m^4)");
    let cd_beta = expr(
        "-1/27*(d^6*l^6 - 6*d^5*l^5*m - 36*c*d^3*l^5*m + 15*d^4*l^4*m^2 - 540*c*d^2*l^4*m^2 - 20*d^3*l^3*m^3 + 216*c^2*l^4*m^2 \
         + 1188*c*d*l^3*m^3 + 15*d^2*l^2*m^4 - 612*c*l^2*m^4 - 6*d*l*m^5 + m^6)",
    );
    let cd_gamma = expr("1024*c^3*m^4*l^6");
    let cd_delta = expr("1024/3*c^3*m^4*l^6*(d^2*l^2 + 10*d*l*m + m^2)");
    let b21 = expr("1728*c*m^2 - l^2 + 864*l*m");
    let d21 = expr("2^12*3^6*(c*m + l)*m^3*c");
    let printed_ok = pi_ab(&a, &b, &l, &m) == [ab_alpha, ab_beta, ab_gamma, ab_delta]
        && pi_cd(&c, &d, &l, &m) == [cd_alpha, cd_beta, cd_gamma, cd_delta]
        && pi_21(&c, &l, &m) == [l.pow(2), l.pow(2) * b21, l.pow(4) * d21];
    // homogeneity of the 2.33 pencil map
    let s = P::var("s");
    let scaled = pi_ab(&a, &b, &(s.clone() * l.clone()), &(s.clone() * m.clone()));
    let base = pi_ab(&a, &b, &l, &m);
    let homogeneous = [4u32, 6, 10, 12].iter().enumerate().all(|(i, w)| scaled[i] == base[i].clone() * s.pow(*w))
        && wp_equal_with(&scaled, &base, &WEIGHTS_2356, &s.pow(2)).unwrap();
    // the 2.28 fibre x + y + z + x/z + c l^2/(xy) + 1 - d l, read off term by term and homogenized in [l : m]
    let fibre = parse_laurent_in("x + y + z + x/z + c*l^2/(x*y) + 1 - d*l", 3).unwrap();
    let coeff = |e: [i64; 3]| fibre.coeff(&e);
    let affine = [coeff([1, 0, 0]), coeff([0, 1, 0]), coeff([0, 0, 1]), coeff([1, 0, -1]), coeff([-1, -1, 0]), coeff([0, 0, 0])];
    let homog = |p: &P, deg: u32| -> P {
        // degree-`deg` homogenization of a polynomial in l
        let mut out = P::int(0);
        for (mono, c) in p.terms() {
            let k = mono.exponent("l") as u32;
            out = out + P::term(c.clone(), mono.clone()) * m.pow(deg - k);
        }
        out
    };
    let oracle: [P; 6] = [
        homog(&affine[0], 2),
        homog(&affine[1], 2),
        homog(&affine[2], 2),
        homog(&affine[3], 2),
        homog(&affine[4], 2),
        homog(&affine[5], 2),
    ];
    let substitution_ok = oracle == cd_substitution(&c, &d, &l, &m);
    let via_233 = modular_invariants_233(&oracle);
    let consistent = wp_equal_with(&via_233, &pi_cd(&c, &d, &l, &m), &WEIGHTS_2356, &m.pow(2)).unwrap();
    // numeric spot checks through the public evaluator
    let mut numeric = true;
    for (cv, dv, lv, mv) in [(1, 1, 1, 2), (2, -3, 5, 7), (-1, 4, 3, 1)] {
        let got = period_map_eval(PeriodFamily::F2_28, &[r(cv), r(dv)], &r(lv), &r(mv)).unwrap();
        let six: [Rational; 6] = cd_substitution(&r(cv), &r(dv), &r(lv), &r(mv));
        numeric &= wp_equal(&got, &modular_invariants_233(&six), &WEIGHTS_2356).unwrap();
    }
    Line {
        id: "8",
        ok: printed_ok && homogeneous && substitution_ok && consistent && numeric,
        detail: format!(
            "printed 2.1/2.33/2.28 formulas re-entered {printed_ok}; 2.33 weights (4,6,10,12) {homogeneous}; \
             2.28 substitution oracle {substitution_ok}; Pi_cd ~ Pi_ab(substituted) {consistent}; numeric {numeric}"
        ),
        deviation: false,
    }
}

fn random_matrix(rng: &mut ChaCha8Rng) -> IntMatrix {
    let (rows, cols) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
    let sparse = rng.gen_bool(0.3);
    Matrix::from_fn(rows, cols, |_, _| {
        if sparse && rng.gen_bool(0.6) {
            BigInt::zero()
        } else {
            BigInt::from(rng.gen_range(-1_000_000i64..=1_000_000))
        }
    })
}

fn random_unimodular(rng: &mut ChaCha8Rng, n: usize) -> IntMatrix {
    let mut m = IntMatrix::identity(n);
    for _ in 0..3 * n {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a == b {
            continue;
        }
        let k = BigInt::from(rng.gen_range(-2i64..=2));
        for j in 0..n {
            let v = &m[(b, j)] * &k;
            m[(a, j)] += v;
        }
    }
    m
}

fn elements(orders: &[BigInt]) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for o in orders {
        let o: i64 = o.try_into().unwrap();
        out = out.into_iter().flat_map(|v| (0..o).map(move |c| [v.clone(), vec![c]].concat())).collect();
    }
    out
}

/// q(x+y) = q(x) + q(y) + 2 b(x,y) over the whole group, b taken from the lattice pairing of lifts.
fn qb_compatible(l: &Lattice, f: &FiniteQuadraticForm) -> bool {
    let gens = f.generators().unwrap();
    let elems = elements(f.orders());
    let lift = |c: &[i64]| -> Vec<Rational> {
        (0..l.rank()).map(|k| gens.iter().zip(c).map(|(g, &ci)| &g[k] * r(ci)).sum()).collect()
    };
    let g = l.gram().map(|x| Rational::from_integer(x.clone()));
    let lifts: Vec<Vec<Rational>> = elems.iter().map(|c| lift(c)).collect();
    let values: Vec<Rational> = elems.iter().map(|c| f.value(c)).collect();
    for (i, a) in elems.iter().enumerate() {
        let gx = g.mul_vec(&lifts[i]);
        for (j, b) in elems.iter().enumerate().skip(i) {
            let bxy: Rational = gx.iter().zip(&lifts[j]).map(|(p, q)| p * q).sum();
            let s: Vec<i64> = a.iter().zip(b).map(|(p, q)| p + q).collect();
            if f.value(&s) != reduce_mod(&(&values[i] + &values[j] + r(2) * bxy), 2) {
                return false;
            }
        }
    }
    true
}

fn criterion_9(set: &FixtureSet) -> Line {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut snf_ok = 0;
    for _ in 0..1000 {
        let m = random_matrix(&mut rng);
        let s = m.smith_normal_form();
        let diag = s.nonzero_diagonal();
        let chain = diag.windows(2).all(|w| (&w[1] % &w[0]).is_zero());
        if s.u.mul(&m).mul(&s.v) == s.d && s.u.det().abs().is_one() && s.v.det().abs().is_one() && chain {
            snf_ok += 1;
        }
    }
    let mut lattices: Vec<(String, Lattice)> = vec![];
    for cfg in set.families.values() {
        lattices.push((format!("L_S {}", cfg.family_id), build_ls(cfg).unwrap()));
        lattices.push((format!("H+Pic {}", cfg.family_id), Lattice::hyperbolic().direct_sum(&cfg.pic)));
    }
    let (mut disc_ok, mut qb_ok, mut qb_checked) = (0, 0, 0);
    for (_, l) in &lattices {
        let f = l.discriminant_group().unwrap();
        disc_ok += usize::from(f.order() == l.determinant().abs());
        if f.order() <= BigInt::from(100) {
            qb_checked += 1;
            qb_ok += usize::from(qb_compatible(l, &f));
        }
    }
    let mut inv_ok = 0;
    for t in 0..50 {
        let (_, l) = &lattices[(t * 7) % lattices.len()];
        let u = random_unimodular(&mut rng, l.rank());
        let moved = l.change_basis(&u).unwrap();
        let same = forms_equivalent(&l.discriminant_group().unwrap(), &moved.discriminant_group().unwrap(), DEFAULT_BOUND);
        inv_ok += usize::from(same.unwrap_or(false));
    }
    let elapsed = start.elapsed();
    Line {
        id: "9",
        ok: snf_ok == 1000
            && disc_ok == lattices.len()
            && qb_ok == qb_checked
            && inv_ok == 50
            && elapsed < Duration::from_secs(60),
        detail: format!(
            "SNF identity {snf_ok}/1000; |disc|=|det| {disc_ok}/{}; q/b compatible {qb_ok}/{qb_checked} fixture groups of order <= 100; \
             basis-change invariance {inv_ok}/50; {:.1}s",
            lattices.len(),
            elapsed.as_secs_f64()
        ),
        deviation: false,
    }
}

#[test]
fn acceptance() {
    let set = FixtureSet::load(&root(), true).unwrap();
    let doc = Document::parse(&std::fs::read_to_string(root().join("lg_models.txt")).unwrap()).unwrap();
    let (c7a, c7b) = criterion_7();
    let lines = vec![
        criterion_1(&set),
        criterion_2(&set),
        criterion_3(),
        criterion_4(&doc),
        criterion_5(&doc),
        criterion_6(),
        c7a,
        c7b,
        criterion_8(),
        criterion_9(&set),
    ];
    for l in &lines {
        emit(l);
    }
    let hard: Vec<&str> = lines.iter().filter(|l| !l.ok && !l.deviation).map(|l| l.id).collect();
    assert!(hard.is_empty(), "criteria failed: {hard:?}");
}
