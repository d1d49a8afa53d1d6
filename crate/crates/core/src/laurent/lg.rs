//! Parametrized toric Landau–Ginzburg models of del Pezzo surfaces and of S x P^1.
//!
//! Del Pezzo models are built by successive blow-ups of P^2: each step adds the
//! vertex K with coefficient c_L c_R a_k, where c_L, c_R are the coefficients at
//! the boundary neighbours of K. For degrees 5, 4, 3 the non-vertex boundary
//! coefficients are then replaced by those of the marking polynomials.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::laurent::minkowski::newton_polytope;
use crate::laurent::mutation::{change_of_variables, MutationTriple};
use crate::laurent::param::ParamPolynomial;
use crate::laurent::parse::parse_laurent_in;
use crate::laurent::poly::{Exponent, LaurentPolynomial};

fn a(k: usize) -> ParamPolynomial {
    ParamPolynomial::var(&format!("a{k}"))
}

fn prod(ks: &[usize]) -> ParamPolynomial {
    ks.iter().fold(ParamPolynomial::int(1), |acc, &k| acc * a(k))
}

fn mono(e: [i64; 2], c: ParamPolynomial) -> LaurentPolynomial {
    LaurentPolynomial::monomial(e.to_vec(), c)
}

/// New vertices K of the blow-up chain P^2 = dP9 -> dP8 -> ... -> dP3, with the parameter index.
const BLOWUPS: [([i64; 2], usize); 6] = [([-1, 0], 2), ([0, -1], 3), ([1, 1], 4), ([-1, 1], 5), ([-1, -2], 6), ([2, 1], 7)];

/// Gorenstein toric degeneration used at each degree.
pub fn chosen_degeneration(degree: u8) -> Option<&'static str> {
    Some(match degree {
        9 => "T1",
        8 => "T3",
        7 => "T6",
        6 => "T10",
        5 => "T12",
        4 => "T14",
        3 => "T16",
        _ => return None,
    })
}

fn known_degenerations(degree: u8) -> &'static [&'static str] {
    match degree {
        9 => &["T1"],
        8 => &["T3"],
        7 => &["T5", "T6"],
        6 => &["T7", "T8", "T9", "T10"],
        5 => &["T11", "T12"],
        4 => &["T13", "T14", "T15"],
        3 => &["T16"],
        _ => &[],
    }
}

fn check_degree(degree: u8) -> Result<()> {
    match degree {
        3..=9 => Ok(()),
        1 | 2 => Err(Error::Unsupported(format!(
            "del Pezzo surfaces of degree {degree} have no Gorenstein toric degeneration"
        ))),
        _ => Err(Error::Invalid(format!("no del Pezzo surface of degree {degree}"))),
    }
}

/// Boundary lattice points of a reflexive polygon, in counterclockwise order.
fn boundary_cycle(p: &LaurentPolynomial) -> Result<Vec<Exponent>> {
    let poly = newton_polytope(p)?;
    let interior = poly.interior_lattice_points();
    let mut pts: Vec<Exponent> = poly.lattice_points().into_iter().filter(|x| !interior.contains(x)).collect();
    pts.sort_by(|u, v| {
        let t = |w: &Exponent| (w[1] as f64).atan2(w[0] as f64);
        t(u).partial_cmp(&t(v)).expect("finite angle")
    });
    Ok(pts)
}

/// f_(T~, D~): the model on the crepant resolution of the chosen toric degeneration.
pub fn del_pezzo_toric(degree: u8) -> Result<LaurentPolynomial> {
    check_degree(degree)?;
    let mut f = mono([1, 0], ParamPolynomial::int(1)) + mono([0, 1], ParamPolynomial::int(1)) + mono([-1, -1], a(1));
    for &(k_pt, k) in BLOWUPS.iter().take(9 - degree as usize) {
        let with_k = f.clone() + mono(k_pt, ParamPolynomial::int(1));
        let ring = boundary_cycle(&with_k)?;
        let i = ring.iter().position(|x| x[..] == k_pt[..]).expect("new vertex on boundary");
        let n = ring.len();
        let (l, r) = (&ring[(i + n - 1) % n], &ring[(i + 1) % n]);
        let (cl, cr) = (f.coeff(l), f.coeff(r));
        if cl.is_empty() || cr.is_empty() {
            return Err(Error::Invalid(format!("blow-up at {k_pt:?}: neighbour without coefficient")));
        }
        f = f + mono(k_pt, cl * cr * a(k));
    }
    Ok(f)
}

/// A marking polynomial: coefficient lists of a boundary edge, written as
/// `scale * prod (u_i s + v_i)`, with `points` listed from s^top down to s^0.
#[derive(Clone, Debug)]
pub struct MarkingPolynomial {
    pub points: Vec<Exponent>,
    pub scale: ParamPolynomial,
    pub factors: Vec<(ParamPolynomial, ParamPolynomial)>,
}

impl MarkingPolynomial {
    /// Coefficients from s^top down to s^0.
    pub fn coefficients(&self) -> Vec<ParamPolynomial> {
        // ascending coefficients of prod (u s + v)
        let mut asc = vec![self.scale.clone()];
        for (u, v) in &self.factors {
            let mut next = vec![ParamPolynomial::int(0); asc.len() + 1];
            for (i, c) in asc.iter().enumerate() {
                next[i] += c.clone() * v.clone();
                next[i + 1] += c.clone() * u.clone();
            }
            asc = next;
        }
        asc.reverse();
        asc
    }
}

fn edge(points: &[[i64; 2]], scale: ParamPolynomial, factors: Vec<(ParamPolynomial, ParamPolynomial)>) -> MarkingPolynomial {
    MarkingPolynomial { points: points.iter().map(|p| p.to_vec()).collect(), scale, factors }
}

/// Marking polynomials on the edges with non-vertex boundary points (degrees 5, 4, 3).
pub fn marking_polynomials(degree: u8) -> Result<Vec<MarkingPolynomial>> {
    check_degree(degree)?;
    let one = || ParamPolynomial::int(1);
    let left = |deg: u8| {
        if deg == 5 {
            edge(&[[-1, 1], [-1, 0], [-1, -1]], a(1), vec![(a(2), one()), (a(5), one())])
        } else {
            edge(
                &[[-1, 1], [-1, 0], [-1, -1], [-1, -2]],
                a(1),
                vec![(a(2), one()), (a(5), one()), (one(), prod(&[1, 3, 6]))],
            )
        }
    };
    Ok(match degree {
        5 => vec![left(5), edge(&[[1, 1], [0, 1], [-1, 1]], one(), vec![(a(4), one()), (one(), prod(&[1, 2, 5]))])],
        4 => vec![
            left(4),
            edge(&[[1, 1], [0, 1], [-1, 1]], one(), vec![(a(4), one()), (one(), prod(&[1, 2, 5]))]),
            edge(&[[-1, -2], [0, -1], [1, 0]], one(), vec![(prod(&[1, 3]), one()), (prod(&[1, 6]), one())]),
        ],
        3 => vec![
            left(3),
            edge(
                &[[2, 1], [1, 1], [0, 1], [-1, 1]],
                one(),
                vec![(a(4), one()), (a(7), one()), (one(), prod(&[1, 2, 5]))],
            ),
            edge(
                &[[-1, -2], [0, -1], [1, 0], [2, 1]],
                one(),
                vec![(prod(&[1, 3]), one()), (prod(&[1, 6]), one()), (one(), prod(&[4, 7]))],
            ),
        ],
        _ => Vec::new(),
    })
}

/// f_(S, D) for a del Pezzo surface of degree 3..=9.
pub fn del_pezzo(degree: u8) -> Result<LaurentPolynomial> {
    let toric = del_pezzo_toric(degree)?;
    let mut terms: Vec<(Exponent, ParamPolynomial)> = toric.terms().map(|(e, c)| (e.clone(), c.clone())).collect();
    for mp in marking_polynomials(degree)? {
        let coeffs = mp.coefficients();
        let ends = [(0usize, &mp.points[0]), (coeffs.len() - 1, mp.points.last().expect("edge"))];
        for (i, pt) in ends {
            if toric.coeff(pt) != coeffs[i] {
                return Err(Error::Invalid(format!(
                    "marking polynomial disagrees with vertex coefficient at {pt:?}"
                )));
            }
        }
        for (pt, c) in mp.points.iter().zip(coeffs) {
            match terms.iter_mut().find(|(e, _)| e == pt) {
                Some(slot) => slot.1 = c,
                None => terms.push((pt.clone(), c)),
            }
        }
    }
    LaurentPolynomial::from_terms(2, terms)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum QuadricChart {
    /// T_4 = P^1 x P^1 itself.
    T4,
    /// The quadratic cone, model of the pair (S, D).
    T2,
    /// The quadratic cone, model on its resolution F_2.
    F2,
}

/// Models of P^1 x P^1 in parameters `a`, `b`.
pub fn quadric(chart: QuadricChart) -> LaurentPolynomial {
    let text = match chart {
        QuadricChart::T4 => "x + a*x^-1 + y + b*y^-1",
        QuadricChart::T2 => "y + a*x^-1*y^-1 + (a + b)*y^-1 + b*x*y^-1",
        QuadricChart::F2 => "y + b*x^-1*y^-1 + a*y^-1 + x*y^-1",
    };
    parse_laurent_in(text, 2).expect("static formula")
}

/// Fano threefolds S x P^1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ProductFamily {
    F2_34,
    F3_27,
    F3_28,
    F4_10,
    F5_3,
    F6_1,
    F7_1,
    F8_1,
}

impl ProductFamily {
    pub const ALL: [ProductFamily; 8] = [
        ProductFamily::F2_34,
        ProductFamily::F3_27,
        ProductFamily::F3_28,
        ProductFamily::F4_10,
        ProductFamily::F5_3,
        ProductFamily::F6_1,
        ProductFamily::F7_1,
        ProductFamily::F8_1,
    ];

    pub fn id(self) -> &'static str {
        match self {
            ProductFamily::F2_34 => "2.34",
            ProductFamily::F3_27 => "3.27",
            ProductFamily::F3_28 => "3.28",
            ProductFamily::F4_10 => "4.10",
            ProductFamily::F5_3 => "5.3",
            ProductFamily::F6_1 => "6.1",
            ProductFamily::F7_1 => "7.1",
            ProductFamily::F8_1 => "8.1",
        }
    }

    /// Degree of the del Pezzo factor; `None` for the quadric.
    pub fn surface_degree(self) -> Option<u8> {
        match self {
            ProductFamily::F2_34 => Some(9),
            ProductFamily::F3_27 => None,
            ProductFamily::F3_28 => Some(8),
            ProductFamily::F4_10 => Some(7),
            ProductFamily::F5_3 => Some(6),
            ProductFamily::F6_1 => Some(5),
            ProductFamily::F7_1 => Some(4),
            ProductFamily::F8_1 => Some(3),
        }
    }

    /// Minkowski polynomial numbers of the models in the chain (metadata only).
    pub fn minkowski_numbers(self) -> &'static [u32] {
        match self {
            ProductFamily::F2_34 => &[5],
            ProductFamily::F3_27 => &[31],
            ProductFamily::F3_28 => &[30],
            ProductFamily::F4_10 => &[85],
            ProductFamily::F5_3 => &[219],
            ProductFamily::F6_1 => &[357, 1353, 1231, 284],
            ProductFamily::F7_1 => &[506],
            ProductFamily::F8_1 => &[769],
        }
    }

    /// Images of (x, y, z) in the change of variables applied to the product model.
    pub fn change_of_variables(self) -> Option<Vec<Exponent>> {
        let rows: [[i64; 3]; 3] = match self {
            ProductFamily::F2_34 => [[0, 0, 1], [0, 1, 0], [1, 0, 0]],
            ProductFamily::F3_27 => return None,
            ProductFamily::F3_28 => [[-1, 0, 0], [0, 0, 1], [0, 1, 0]],
            ProductFamily::F4_10 => [[0, -1, 0], [1, 0, 0], [0, 0, 1]],
            ProductFamily::F5_3 => [[0, -1, 0], [0, 0, 1], [1, 0, 0]],
            ProductFamily::F6_1 => [[0, 1, 0], [-1, 0, 0], [0, 0, 1]],
            ProductFamily::F7_1 => [[0, -1, 0], [-1, 1, 0], [0, 0, 1]],
            ProductFamily::F8_1 => [[0, 1, -1], [0, 0, 1], [1, 0, 0]],
        };
        Some(rows.iter().map(|r| r.to_vec()).collect())
    }

    /// Mutations applied after the change of variables, followed by a last change of variables.
    pub fn mutation_chain(self) -> Vec<MutationTriple<LaurentPolynomial>> {
        if self != ProductFamily::F6_1 {
            return Vec::new();
        }
        let rows = |m: [[i64; 3]; 3]| m.iter().map(|r| r.to_vec()).collect::<Vec<_>>();
        let f = |s: &str| parse_laurent_in(s, 3).expect("static factor");
        vec![
            MutationTriple {
                m: rows([[-1, 0, 1], [0, 1, 0], [0, 1, -1]]),
                f: f("x*(a4*y + 1)*(a1*a2*a5 + y) + y^2"),
                n: rows([[-1, 1, -1], [0, 1, 0], [-1, -1, 0]]),
            },
            MutationTriple {
                m: rows([[0, -1, 0], [1, 1, 0], [-1, 0, 1]]),
                f: f("(a4*x*y + 1)*(a1*a2*a5 + x*y)"),
                n: rows([[1, 1, 0], [-1, 0, 0], [-1, 0, -1]]),
            },
            MutationTriple {
                m: rows([[0, -1, 1], [1, 0, 0], [-1, 0, -1]]),
                f: f("x*y + 1"),
                n: rows([[0, 1, 0], [-1, -1, -1], [0, -1, -1]]),
            },
        ]
    }

    pub fn final_change_of_variables(self) -> Option<Vec<Exponent>> {
        (self == ProductFamily::F6_1).then(|| vec![vec![1, 0, 0], vec![0, -1, 0], vec![0, 0, 1]])
    }
}

impl fmt::Display for ProductFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for ProductFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProductFamily::ALL
            .into_iter()
            .find(|f| f.id() == s.trim())
            .ok_or_else(|| Error::Unsupported(format!("no product model for family {s}")))
    }
}

/// f_S(x, y) + z + a_{k+1} z^-1, where a_1..a_k are the parameters of f_S.
pub fn product_model(family: ProductFamily) -> Result<LaurentPolynomial> {
    let (surface, k) = match family.surface_degree() {
        Some(d) => (del_pezzo(d)?, 10 - d as usize),
        None => {
            let q = quadric(QuadricChart::T4);
            let rename = [("a", a(1)), ("b", a(2))].into_iter().map(|(n, v)| (n.to_string(), v)).collect();
            (q.substitute_params(&rename)?, 2)
        }
    };
    let s = surface.with_nvars(3)?;
    let z = LaurentPolynomial::monomial(vec![0, 0, 1], ParamPolynomial::int(1));
    let zi = LaurentPolynomial::monomial(vec![0, 0, -1], a(k + 1));
    Ok(s + z + zi)
}

/// Every polynomial along the printed route: product model, after the change of
/// variables, after each mutation, after the final change of variables.
pub fn standard_chain(family: ProductFamily) -> Result<Vec<LaurentPolynomial>> {
    let mut out = vec![product_model(family)?];
    if let Some(rows) = family.change_of_variables() {
        let next = change_of_variables(out.last().expect("nonempty"), &rows)?;
        out.push(next);
    }
    for t in family.mutation_chain() {
        let next = t.apply(out.last().expect("nonempty"))?;
        out.push(next);
    }
    if let Some(rows) = family.final_change_of_variables() {
        let next = change_of_variables(out.last().expect("nonempty"), &rows)?;
        out.push(next);
    }
    Ok(out)
}

pub fn standard_form(family: ProductFamily) -> Result<LaurentPolynomial> {
    Ok(standard_chain(family)?.pop().expect("nonempty"))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum LgTarget {
    DelPezzo { degree: u8, degeneration: Option<String> },
    Quadric(QuadricChart),
    Product(ProductFamily),
}

impl FromStr for LgTarget {
    type Err = Error;

    /// `dp<d>[:T<k>]`, `quadric:T4|T2|F2`, or a family id such as `6.1`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let lower = s.to_ascii_lowercase();
        if let Some(rest) = lower.strip_prefix("quadric") {
            let chart = match rest.trim_start_matches(':') {
                "" | "t4" => QuadricChart::T4,
                "t2" => QuadricChart::T2,
                "f2" => QuadricChart::F2,
                other => return Err(Error::Invalid(format!("unknown quadric chart {other}"))),
            };
            return Ok(LgTarget::Quadric(chart));
        }
        if let Some(rest) = lower.strip_prefix("dp") {
            let (deg, degen) = match rest.split_once(':') {
                Some((d, t)) => (d, Some(t.to_ascii_uppercase())),
                None => (rest, None),
            };
            let degree: u8 = deg.parse().map_err(|_| Error::Invalid(format!("bad del Pezzo degree in {s}")))?;
            return Ok(LgTarget::DelPezzo { degree, degeneration: degen });
        }
        Ok(LgTarget::Product(s.parse()?))
    }
}

pub fn lg_constructor(target: &LgTarget) -> Result<LaurentPolynomial> {
    match target {
        LgTarget::DelPezzo { degree, degeneration } => {
            check_degree(*degree)?;
            if let Some(t) = degeneration {
                if chosen_degeneration(*degree) != Some(t.as_str()) {
                    return Err(if known_degenerations(*degree).contains(&t.as_str()) {
                        Error::Unsupported(format!("degeneration {t} of degree {degree} is not constructed"))
                    } else {
                        Error::Invalid(format!("{t} is not a Gorenstein toric degeneration of degree {degree}"))
                    });
                }
            }
            del_pezzo(*degree)
        }
        LgTarget::Quadric(c) => Ok(quadric(*c)),
        LgTarget::Product(f) => product_model(*f),
    }
}
