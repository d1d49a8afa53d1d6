use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Value};

use lgdual::duality::dn_dual_verify;
use lgdual::embedding::{embedding_criteria, K3_SIGNATURE};
use lgdual::fano::{
    anticanonical_gram, blowup_extend, double_cover_gram, dp_root_identification, parse_curve, product_dp_lattice,
    projective_bundle_gram, BundleBase, TripleIntersectionData,
};
use lgdual::fixture::{as_int_matrix, format_lattice, parse_lattice, read_file};
use lgdual::harness::verify_all;
use lgdual::laurent::lg::{lg_constructor, standard_chain, LgTarget};
use lgdual::laurent::minkowski::{is_minkowski_polynomial, newton_polytope};
use lgdual::laurent::mutation::{main_period, mutate, mutate_triple, MutationTriple};
use lgdual::laurent::parse::{format_laurent, parse_laurent_in};
use lgdual::laurent::poly::{LaurentPolynomial, RationalLaurent};
use lgdual::laurent::polytope::LatticePolytope;
use lgdual::pencil::{verify_family, PencilConfig};
use lgdual::period_map::{period_map_eval, PeriodFamily};
use lgdual::scalar::{format_rational, parse_rational};
use lgdual::{genus_equal, Error, Lattice, Rational, DEFAULT_BOUND};

#[derive(Parser)]
#[command(name = "lgdual", version, about = "Exact lattice and Laurent polynomial checks for LG models of Fano threefolds")]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Reject unknown keys in input files.
    #[arg(long, global = true)]
    strict: bool,
    /// Worker threads for batch runs.
    #[arg(long, global = true, default_value_t = 1)]
    parallel: usize,
    /// Largest discriminant group searched exhaustively.
    #[arg(long, global = true, default_value_t = DEFAULT_BOUND)]
    bound: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Integral lattice invariants and comparisons.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Pencil fixtures of single families.
    #[command(subcommand)]
    Family(FamilyCmd),
    /// Picard lattices of Fano threefolds.
    #[command(subcommand)]
    Fano(FanoCmd),
    /// Laurent polynomials, polytopes, mutations and periods.
    #[command(subcommand)]
    Laurent(LaurentCmd),
    /// Verify every *.fam fixture in a directory.
    VerifyAll { dir: PathBuf },
}

#[derive(Args)]
struct LatticeInput {
    /// Gram matrix as JSON, e.g. [[0,1],[1,0]].
    #[arg(long, conflicts_with = "file")]
    gram: Option<String>,
    /// Lattice file ([lattice] section with gram).
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Subcommand)]
enum LatticeCmd {
    /// Rank, signature, parity, discriminant form, K3 embedding verdict.
    Info(LatticeInput),
    /// Genus comparison of two lattice files.
    Compare { a: PathBuf, b: PathBuf },
    /// Duality check between L_S and Pic(X) lattice files.
    DualCheck { ls: PathBuf, pic: PathBuf },
}

#[derive(Subcommand)]
enum FamilyCmd {
    /// Build L_S and run every check on one fixture.
    Verify { file: PathBuf },
    /// Summary of a fixture.
    Show { file: PathBuf },
    /// Evaluate a closed-form period map at [lambda : mu].
    PeriodMap {
        /// 2.1, 2.28 or 2.33.
        #[arg(long)]
        family: String,
        /// Comma-separated parameter values (c for 2.1; c,d for 2.28; a,b for 2.33).
        #[arg(long)]
        params: String,
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        mu: String,
    },
}

#[derive(Subcommand)]
enum FanoCmd {
    /// Anticanonical pairing from triple intersection data.
    Triple {
        file: PathBuf,
        /// Pull-back of -K of the cover, for a double cover of the given base.
        #[arg(long)]
        double_cover: Option<String>,
    },
    /// Extend a Picard lattice by the exceptional divisor of a curve blow-up.
    Blowup {
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        curve: PathBuf,
    },
    /// Projective bundle P(O(d_1) + ... + O(d_r)) over P1 or P2.
    Bundle {
        #[arg(long)]
        base: String,
        #[arg(long)]
        degrees: String,
    },
    /// Lattice N_k of P^1 x (P^2 blown up in k points), or its root identification.
    ProductDp {
        #[arg(long, conflicts_with = "degree")]
        points: Option<usize>,
        /// Del Pezzo degree d: compare N_{9-d} with H + R_d(2).
        #[arg(long)]
        degree: Option<usize>,
    },
}

#[derive(Args)]
struct PolyInput {
    #[arg(long, conflicts_with = "file")]
    poly: Option<String>,
    #[arg(long)]
    file: Option<PathBuf>,
    /// Parameter values, e.g. a1=1,a2=-1/2.
    #[arg(long)]
    assign: Option<String>,
    /// Minimum number of variables.
    #[arg(long, default_value_t = 0)]
    nvars: usize,
}

#[derive(Subcommand)]
enum LaurentCmd {
    /// Newton polytope.
    Newton(PolyInput),
    /// Reflexivity and dual polytope of the Newton polytope.
    Dual(PolyInput),
    /// Mutation along (m, g).
    Mutate {
        #[command(flatten)]
        input: PolyInput,
        /// Direction m, e.g. 0,1.
        #[arg(long, allow_hyphen_values = true)]
        direction: String,
        #[arg(long)]
        factor: String,
    },
    /// Mutation written as (M, f, N); matrices as JSON rows.
    MutateTriple {
        #[command(flatten)]
        input: PolyInput,
        #[arg(long, requires_all = ["factor", "n"])]
        m: Option<String>,
        #[arg(long)]
        factor: Option<String>,
        #[arg(long)]
        n: Option<String>,
    },
    /// Constant terms of powers.
    Period {
        #[command(flatten)]
        input: PolyInput,
        #[arg(long, default_value_t = 8)]
        terms: usize,
    },
    /// Minkowski polynomial test with facet witnesses.
    Minkowski(PolyInput),
    /// Newton polytope shape, reflexivity and Minkowski status.
    Classify(PolyInput),
    /// Parametrized LG model: dp3..dp9[:T..], quadric:T4|T2|F2, or 2.34, 3.27, ..., 8.1.
    Construct {
        #[arg(long)]
        target: String,
        /// Print the whole route through changes of variables and mutations.
        #[arg(long)]
        chain: bool,
    },
}

struct Out {
    json: bool,
}

impl Out {
    fn emit(&self, value: Value, text: String) {
        if self.json {
            println!("{}", serde_json::to_string_pretty(&value).expect("json"));
        } else {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
        }
    }
}

enum Fail {
    Usage(String),
    Verification,
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Usage(e.to_string())
    }
}

type Res = std::result::Result<(), Fail>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = Out { json: cli.json };
    match run(&cli, &out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail::Verification) => ExitCode::from(1),
        Err(Fail::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli, out: &Out) -> Res {
    match &cli.cmd {
        Cmd::Lattice(c) => lattice_cmd(cli, out, c),
        Cmd::Family(c) => family_cmd(cli, out, c),
        Cmd::Fano(c) => fano_cmd(cli, out, c),
        Cmd::Laurent(c) => laurent_cmd(out, c),
        Cmd::VerifyAll { dir } => {
            let rep = verify_all(dir, cli.parallel, cli.strict, cli.bound)?;
            out.emit(serde_json::to_value(&rep).expect("json"), rep.text());
            if rep.all_passed() {
                Ok(())
            } else {
                Err(Fail::Verification)
            }
        }
    }
}

fn usage(msg: impl Into<String>) -> Fail {
    Fail::Usage(msg.into())
}

fn load_lattice(path: &Path) -> Result<Lattice, Fail> {
    Ok(parse_lattice(&read_file(path)?)?)
}

fn lattice_from(input: &LatticeInput) -> Result<Lattice, Fail> {
    match (&input.gram, &input.file) {
        (Some(g), _) => {
            let v: Value = serde_json::from_str(g).map_err(|e| usage(format!("--gram: {e}")))?;
            let m = as_int_matrix(&v, "gram", None)?;
            if !m.is_symmetric() {
                return Err(usage("gram is not symmetric"));
            }
            Ok(Lattice::from_gram(m)?)
        }
        (None, Some(f)) => load_lattice(f),
        (None, None) => Err(usage("give --gram or --file")),
    }
}

fn lattice_json(l: &Lattice) -> Value {
    let sig = l.signature();
    json!({
        "rank": l.rank(),
        "gram": l.gram().to_rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "labels": l.labels(),
        "determinant": l.determinant().to_string(),
        "signature": [sig.pos, sig.neg],
        "even": l.is_even(),
    })
}

fn lattice_cmd(cli: &Cli, out: &Out, c: &LatticeCmd) -> Res {
    match c {
        LatticeCmd::Info(input) => {
            let l = lattice_from(input)?;
            let sig = l.signature();
            let mut v = lattice_json(&l);
            let mut text = format!(
                "rank {}\ndeterminant {}\nsignature ({}, {})\nparity {}\n",
                l.rank(),
                l.determinant(),
                sig.pos,
                sig.neg,
                if l.is_even() { "even" } else { "odd" }
            );
            if l.is_nondegenerate() {
                let form = l.discriminant_group()?;
                let inv: Vec<String> = form.invariant_factors().iter().map(|x| x.to_string()).collect();
                let q: Vec<String> = form.quadratic().iter().map(format_rational).collect();
                text.push_str(&format!("discriminant group [{}]\nq values [{}]\n", inv.join(", "), q.join(", ")));
                v["discriminant_group"] = json!(inv);
                v["q"] = json!(q);
                if l.is_even() {
                    let verdict = embedding_criteria(&l, K3_SIGNATURE)?;
                    text.push_str(&format!("K3 embedding {verdict:?}\n"));
                    v["k3_embedding"] = json!(format!("{verdict:?}"));
                }
            }
            out.emit(v, text);
            Ok(())
        }
        LatticeCmd::Compare { a, b } => {
            let (la, lb) = (load_lattice(a)?, load_lattice(b)?);
            let eq = genus_equal(&la, &lb, cli.bound)?;
            out.emit(json!({ "genus_equal": eq }), format!("genus_equal {eq}"));
            Ok(())
        }
        LatticeCmd::DualCheck { ls, pic } => {
            let rep = dn_dual_verify(&load_lattice(ls)?, &load_lattice(pic)?, cli.bound)?;
            let mut text = String::new();
            for c in &rep.checks {
                text.push_str(&format!("{} {} {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail));
            }
            out.emit(serde_json::to_value(&rep).expect("json"), text);
            if rep.passed() {
                Ok(())
            } else {
                Err(Fail::Verification)
            }
        }
    }
}

fn rationals(s: &str) -> Result<Vec<Rational>, Fail> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| parse_rational(t).ok_or_else(|| usage(format!("not a rational: {t}"))))
        .collect()
}

fn ints(s: &str) -> Result<Vec<i64>, Fail> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse().map_err(|_| usage(format!("not an integer: {t}"))))
        .collect()
}

fn family_cmd(cli: &Cli, out: &Out, c: &FamilyCmd) -> Res {
    match c {
        FamilyCmd::Verify { file } => {
            let (cfg, warnings) = PencilConfig::load(file, cli.strict)?;
            for w in warnings {
                eprintln!("warning: {w}");
            }
            let rep = verify_family(&cfg, cli.bound);
            let mut text = format!(
                "family {}\nrank {} (expected {})\ndiscriminant group [{}]\n",
                rep.family_id,
                rep.rank.map_or("-".to_string(), |r| r.to_string()),
                rep.expected_rank,
                rep.invariant_factors.join(", ")
            );
            for c in &rep.checks {
                text.push_str(&format!("{} {} {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail));
            }
            text.push_str(if rep.passed { "PASS\n" } else { "FAIL\n" });
            out.emit(serde_json::to_value(&rep).expect("json"), text);
            if rep.passed {
                Ok(())
            } else {
                Err(Fail::Verification)
            }
        }
        FamilyCmd::Show { file } => {
            let (cfg, _) = PencilConfig::load(file, cli.strict)?;
            let sing: Vec<String> = cfg.singularities.iter().map(|s| format!("{}:{}", s.label, s.ade)).collect();
            let text = format!(
                "family {}\nrank Pic {}\nsingularities {}\ncurves {}\norbits {}\n",
                cfg.family_id,
                cfg.rank_pic(),
                sing.join(" "),
                cfg.curve_labels.join(" "),
                cfg.galois_orbits.len()
            );
            let v = json!({
                "family": cfg.family_id,
                "rank_pic": cfg.rank_pic(),
                "singularities": sing,
                "curves": cfg.curve_labels,
                "orbits": cfg.galois_orbits,
            });
            out.emit(v, text);
            Ok(())
        }
        FamilyCmd::PeriodMap { family, params, lambda, mu } => {
            let fam = PeriodFamily::parse(family)?;
            let ps = rationals(params)?;
            let (l, m) = (
                parse_rational(lambda).ok_or_else(|| usage("bad --lambda"))?,
                parse_rational(mu).ok_or_else(|| usage("bad --mu"))?,
            );
            let vals: Vec<String> = period_map_eval(fam, &ps, &l, &m)?.iter().map(format_rational).collect();
            let weights = fam.weights();
            out.emit(json!({ "values": vals, "weights": weights }), format!("[{}]", vals.join(" : ")));
            Ok(())
        }
    }
}

fn fano_cmd(cli: &Cli, out: &Out, c: &FanoCmd) -> Res {
    let show = |l: &Lattice| out.emit(lattice_json(l), format_lattice(l));
    match c {
        FanoCmd::Triple { file, double_cover } => {
            let (data, warnings) = TripleIntersectionData::parse(&read_file(file)?, cli.strict)?;
            for w in warnings {
                eprintln!("warning: {w}");
            }
            let l = match double_cover {
                Some(k) => {
                    let k: Vec<BigInt> = ints(k)?.into_iter().map(BigInt::from).collect();
                    double_cover_gram(&data, &k)?
                }
                None => anticanonical_gram(&data)?,
            };
            show(&l);
            Ok(())
        }
        FanoCmd::Blowup { base, curve } => {
            let (cv, warnings) = parse_curve(&read_file(curve)?, cli.strict)?;
            for w in warnings {
                eprintln!("warning: {w}");
            }
            show(&blowup_extend(&load_lattice(base)?, &cv)?);
            Ok(())
        }
        FanoCmd::Bundle { base, degrees } => {
            show(&projective_bundle_gram(BundleBase::parse(base)?, &ints(degrees)?)?);
            Ok(())
        }
        FanoCmd::ProductDp { points, degree } => match (points, degree) {
            (Some(k), _) => {
                show(&product_dp_lattice(*k)?);
                Ok(())
            }
            (None, Some(d)) => {
                let id = dp_root_identification(*d, cli.bound)?;
                let text = format!(
                    "N_{} vs H + {}(2): det {} vs {}, genus_equal {}",
                    id.points, id.root, id.det_n, id.det_candidate, id.genus_equal
                );
                out.emit(serde_json::to_value(&id).expect("json"), text);
                if id.genus_equal {
                    Ok(())
                } else {
                    Err(Fail::Verification)
                }
            }
            (None, None) => Err(usage("give --points or --degree")),
        },
    }
}

fn read_poly(input: &PolyInput) -> Result<LaurentPolynomial, Fail> {
    let text = match (&input.poly, &input.file) {
        (Some(p), _) => p.clone(),
        (None, Some(f)) => read_file(f)?,
        (None, None) => return Err(usage("give --poly or --file")),
    };
    let p = parse_laurent_in(text.trim(), input.nvars)?;
    match &input.assign {
        Some(a) => Ok(p.assign(&assignments(a)?)?),
        None => Ok(p),
    }
}

fn assignments(s: &str) -> Result<BTreeMap<String, Rational>, Fail> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let (k, v) = t.split_once('=').ok_or_else(|| usage(format!("expected name=value, got {t}")))?;
            let v = parse_rational(v).ok_or_else(|| usage(format!("not a rational: {v}")))?;
            Ok((k.trim().to_string(), v))
        })
        .collect()
}

fn rational_poly(p: &LaurentPolynomial) -> Result<RationalLaurent, Fail> {
    if !p.params().is_empty() {
        let names: Vec<String> = p.params().into_iter().collect();
        return Err(usage(format!("unassigned parameters: {}", names.join(", "))));
    }
    Ok(p.specialize(&BTreeMap::new())?)
}

fn points_json(ps: &[Vec<i64>]) -> Value {
    json!(ps)
}

fn polytope_text(p: &LatticePolytope) -> String {
    let v: Vec<String> = p
        .vertices()
        .iter()
        .map(|x| format!("({})", x.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")))
        .collect();
    v.join(" ")
}

fn poly_json(p: &LaurentPolynomial) -> Value {
    json!({ "nvars": p.nvars(), "terms": p.len(), "text": format_laurent(p) })
}

fn matrix_arg(s: &str, what: &str) -> Result<Vec<Vec<i64>>, Fail> {
    serde_json::from_str(s).map_err(|e| usage(format!("{what}: {e}")))
}

fn laurent_cmd(out: &Out, c: &LaurentCmd) -> Res {
    match c {
        LaurentCmd::Newton(input) => {
            let p = read_poly(input)?;
            let n = newton_polytope(&p)?;
            let text = format!(
                "dimension {}\nvertices {}\nlattice points {}\ninterior points {}\n",
                n.dim(),
                polytope_text(&n),
                n.lattice_points().len(),
                n.interior_lattice_points().len()
            );
            let v = json!({
                "dimension": n.dim(),
                "vertices": points_json(n.vertices()),
                "lattice_points": n.lattice_points().len(),
                "interior_points": n.interior_lattice_points().len(),
            });
            out.emit(v, text);
            Ok(())
        }
        LaurentCmd::Dual(input) => {
            let n = newton_polytope(&read_poly(input)?)?;
            let r = n.reflexivity()?;
            let dual = r.dual.as_ref().map(|d| d.vertices().to_vec());
            let mut text = format!("reflexive {}\n", r.is_reflexive);
            if let Some(reason) = &r.reason {
                text.push_str(&format!("reason {reason}\n"));
            }
            if let Some(d) = &r.dual {
                text.push_str(&format!("dual {}\n", polytope_text(d)));
            }
            out.emit(json!({ "reflexive": r.is_reflexive, "reason": r.reason, "dual": dual }), text);
            Ok(())
        }
        LaurentCmd::Mutate { input, direction, factor } => {
            let p = read_poly(input)?;
            let m = ints(direction)?;
            let g = parse_laurent_in(factor, m.len())?;
            let q = mutate(&p.with_nvars(m.len())?, &m, &g)?;
            out.emit(poly_json(&q), format_laurent(&q));
            Ok(())
        }
        LaurentCmd::MutateTriple { input, m, factor, n } => {
            let p = read_poly(input)?;
            let (Some(m), Some(f), Some(n)) = (m, factor, n) else {
                return Err(usage("give --m, --factor and --n"));
            };
            let m = matrix_arg(m, "--m")?;
            let t = MutationTriple::new(m.clone(), parse_laurent_in(f, m.len())?, matrix_arg(n, "--n")?)?;
            let q = mutate_triple(&p, &t)?;
            out.emit(poly_json(&q), format_laurent(&q));
            Ok(())
        }
        LaurentCmd::Period { input, terms } => {
            let p = rational_poly(&read_poly(input)?)?;
            let vals: Vec<String> = main_period(&p, *terms).iter().map(format_rational).collect();
            out.emit(json!({ "period": vals }), vals.join(" "));
            Ok(())
        }
        LaurentCmd::Minkowski(input) => {
            let p = read_poly(input)?;
            let chk = is_minkowski_polynomial(&p)?;
            let mut text = format!("minkowski {}\n", chk.is_minkowski);
            let mut facets = vec![];
            for w in &chk.witness {
                let factors: Vec<String> = w.factors.iter().map(format_laurent).collect();
                text.push_str(&format!("facet {} = {}\n", polytope_text(&w.decomposition.face), factors.join(" * ")));
                facets.push(json!({ "facet": points_json(w.decomposition.face.vertices()), "factors": factors }));
            }
            if let Some(f) = &chk.failed_facet {
                text.push_str(&format!("failed facet {}\n", polytope_text(f)));
            }
            let failed = chk.failed_facet.as_ref().map(|f| f.vertices().to_vec());
            out.emit(json!({ "minkowski": chk.is_minkowski, "witness": facets, "failed_facet": failed }), text);
            Ok(())
        }
        LaurentCmd::Classify(input) => {
            let p = read_poly(input)?;
            let n = newton_polytope(&p)?;
            let refl = if n.is_full_dimensional() { Some(n.reflexivity()?.is_reflexive) } else { None };
            let mink = match (refl, n.dim()) {
                (Some(true), 3) => Some(is_minkowski_polynomial(&p)?.is_minkowski),
                _ => None,
            };
            let show = |o: Option<bool>| o.map_or("n/a".to_string(), |b| b.to_string());
            let text = format!(
                "terms {}\ndimension {}\nvertices {}\nreflexive {}\nminkowski {}\n",
                p.len(),
                n.dim(),
                n.vertices().len(),
                show(refl),
                show(mink)
            );
            let v = json!({
                "terms": p.len(),
                "dimension": n.dim(),
                "vertices": n.vertices().len(),
                "reflexive": refl,
                "minkowski": mink,
            });
            out.emit(v, text);
            Ok(())
        }
        LaurentCmd::Construct { target, chain } => {
            let t: LgTarget = target.parse()?;
            let polys = match (&t, chain) {
                (LgTarget::Product(f), true) => standard_chain(*f)?,
                _ => vec![lg_constructor(&t)?],
            };
            let text: Vec<String> = polys.iter().map(format_laurent).collect();
            let mut v = json!({ "target": target, "polynomials": polys.iter().map(poly_json).collect::<Vec<_>>() });
            if let LgTarget::Product(f) = t {
                v["minkowski_numbers"] = json!(f.minkowski_numbers());
            }
            out.emit(v, text.join("\n"));
            Ok(())
        }
    }
}
