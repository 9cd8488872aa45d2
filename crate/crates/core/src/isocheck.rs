//! Transport checks of linear maps from the quantum-corrected ring to the
//! Chen-Ruan ring, and exact solvers for ranks 1 and 2.
//!
//! A map `Φ` is given on the degree-2 span, fixes `s` and is linear over
//! the coefficient ring. It is a ring map on the tabulated products iff
//! `Φ(E_i ∗ E_j) = Φ(E_i) ·_CR Φ(E_j)` for all `i, j`.

use std::collections::BTreeMap;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::cartan::CartanData;
use crate::coeffring::{BaseScalar, Coefficient, Monomial, QuantumScalar};
use crate::corrections::{delta_eval, DeltaIndex, EvalError};
use crate::exactnum::linalg::{solve_linear, LinearSolution};
use crate::exactnum::{rat, sqrt_rational, Cyclotomic};
use crate::mckay::{bgp_map, LinearMap, McKayError};
use crate::ringtables::{
    cr_table, qc_eval, qc_table, ExcClass, ProductTable, TableError, TableKind,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IsoError {
    #[error("rank mismatch: map {map}, source {source_rank}, target {target}")]
    RankMismatch {
        map: usize,
        source_rank: usize,
        target: usize,
    },
    #[error(transparent)]
    Table(#[from] TableError),
    #[error(transparent)]
    Map(#[from] McKayError),
    #[error("the reduced system is outside what the solver handles: {0}")]
    Unsupported(String),
}

/// Image of a class under `Φ`: `s` is fixed, `E_l ↦ Σ_k M_{kl} e_k`.
pub fn apply_map<C: Coefficient>(map: &LinearMap, class: &ExcClass<C>) -> ExcClass<C> {
    let n = map.rank();
    let basis = (1..=n)
        .map(|k| {
            (1..=n).fold(C::zero(n as u32), |acc, l| {
                acc.plus(&class.basis_coeff(l).scaled(map.entry(k, l)))
            })
        })
        .collect();
    ExcClass::new(class.s_coeff().clone(), basis)
}

/// `Φ(E_i)·Φ(E_j)` expanded bilinearly through `target`.
pub fn image_product(
    map: &LinearMap,
    target: &ProductTable<BaseScalar>,
    i: usize,
    j: usize,
) -> ExcClass<BaseScalar> {
    let n = map.rank();
    let mut out = ExcClass::zero(n);
    for k in 1..=n {
        for kk in 1..=n {
            let c = map.entry(k, i) * map.entry(kk, j);
            if !c.is_zero() {
                out = out.plus(&target.entry(k, kk).scaled(&c));
            }
        }
    }
    out
}

/// Differences `Φ(E_i ∗ E_j) − Φ(E_i)·Φ(E_j)` for every ordered pair, over
/// any coefficient type (symbolic in `q` or evaluated).
pub fn transport_residual<C: Coefficient>(
    map: &LinearMap,
    source: &ProductTable<C>,
    target: &ProductTable<BaseScalar>,
) -> Result<Vec<Vec<ExcClass<C>>>, IsoError> {
    let n = map.rank();
    if source.rank() != n || target.rank() != n {
        return Err(IsoError::RankMismatch {
            map: n,
            source_rank: source.rank(),
            target: target.rank(),
        });
    }
    Ok((1..=n)
        .map(|i| {
            (1..=n)
                .map(|j| {
                    let lhs = apply_map(map, source.entry(i, j));
                    let rhs = image_product(map, target, i, j).map(C::from_base);
                    lhs.minus(&rhs)
                })
                .collect()
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntryVerdict {
    pub i: usize,
    pub j: usize,
    pub diff: ExcClass<BaseScalar>,
}

impl EntryVerdict {
    pub fn pass(&self) -> bool {
        self.diff.is_zero()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransportReport {
    pub n: usize,
    /// Evaluation point of the source table, if it is a quantum table.
    pub q: Option<Vec<Cyclotomic>>,
    pub map: LinearMap,
    /// One verdict per unordered pair `i <= j`.
    pub entries: Vec<EntryVerdict>,
}

impl TransportReport {
    pub fn pass(&self) -> bool {
        self.entries.iter().all(EntryVerdict::pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &EntryVerdict> {
        self.entries.iter().filter(|e| !e.pass())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}

impl Serialize for EntryVerdict {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("EntryVerdict", 5)?;
        st.serialize_field("i", &self.i)?;
        st.serialize_field("j", &self.j)?;
        st.serialize_field("diff_s", self.diff.s_coeff())?;
        st.serialize_field("diff_basis", self.diff.basis_coeffs())?;
        st.serialize_field("pass", &self.pass())?;
        st.end()
    }
}

impl Serialize for TransportReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("TransportReport", 5)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("q", &self.q.clone().unwrap_or_default())?;
        st.serialize_field("map", self.map.matrix())?;
        st.serialize_field("entries", &self.entries)?;
        st.serialize_field("pass", &self.pass())?;
        st.end()
    }
}

/// Checks `Φ` against an evaluated source table and a Chen-Ruan target.
pub fn transport_check(
    map: &LinearMap,
    source: &ProductTable<BaseScalar>,
    target: &ProductTable<BaseScalar>,
) -> Result<TransportReport, IsoError> {
    let residual = transport_residual(map, source, target)?;
    let n = map.rank();
    let entries = (1..=n)
        .flat_map(|i| (i..=n).map(move |j| (i, j)))
        .map(|(i, j)| EntryVerdict {
            i,
            j,
            diff: residual[i - 1][j - 1].clone(),
        })
        .collect();
    let q = match source.kind() {
        TableKind::QuantumAt { q } => Some(q.clone()),
        _ => None,
    };
    Ok(TransportReport {
        n,
        q,
        map: map.clone(),
        entries,
    })
}

/// Evaluates the quantum table of rank `map.rank()` at `q` and checks `map`
/// against the Chen-Ruan table.
pub fn verify_at(map: &LinearMap, q: &[Cyclotomic]) -> Result<TransportReport, IsoError> {
    let n = map.rank();
    let source = qc_eval(&qc_table(&CartanData::build(n)), q)?;
    transport_check(map, &source, &cr_table(n))
}

/// `q` with `δ(q) = q/(1-q)`, i.e. `q = δ/(1+δ)`; `None` when `δ = -1`.
fn q_from_delta(delta: &Cyclotomic) -> Option<Cyclotomic> {
    let denom = &Cyclotomic::one() + delta;
    delta.checked_div(&denom).ok()
}

/// A solution `E ↦ t·e` at the point `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct A1Solution {
    pub t: Cyclotomic,
    pub q: Cyclotomic,
}

/// Scalars `t` with `E ↦ t·e` an isomorphism onto the Chen-Ruan ring, given
/// the evaluated rank 1 quantum table. Empty when the `E` coefficient of
/// `E ∗ E` does not vanish.
fn a1_scalars(source: &ProductTable<BaseScalar>) -> Result<Vec<Cyclotomic>, IsoError> {
    let target = cr_table(1);
    let src = source.entry(1, 1);
    if !src.basis_coeff(1).is_zero() {
        return Ok(Vec::new());
    }
    let lhs = src.s_coeff().as_constant();
    let rhs = target.entry(1, 1).s_coeff().as_constant();
    let (Some(lhs), Some(rhs)) = (lhs, rhs) else {
        return Err(IsoError::Unsupported("non-constant s coefficient".into()));
    };
    // t² · rhs = lhs
    let square = lhs
        .checked_div(&rhs)
        .map_err(|_| IsoError::Unsupported("zero product".into()))?;
    let value = square
        .as_rational()
        .ok_or_else(|| IsoError::Unsupported("t² is not rational".into()))?;
    let root = sqrt_rational(&value).ok_or_else(|| IsoError::Unsupported("square root".into()))?;
    if root.is_zero() {
        return Ok(Vec::new());
    }
    Ok(vec![-&root, root])
}

/// Rank 1 solutions at a given point `q`.
pub fn solve_a1_at(q: &Cyclotomic) -> Result<Vec<Cyclotomic>, IsoError> {
    let source = qc_eval(&qc_table(&CartanData::build(1)), std::slice::from_ref(q))?;
    let mut out = Vec::new();
    for t in a1_scalars(&source)? {
        let map = LinearMap::from_fn(1, |_, _| t.clone());
        if transport_check(&map, &source, &cr_table(1))?.pass() {
            out.push(t);
        }
    }
    Ok(out)
}

/// All rank 1 solutions: the `E` coefficient `f(δ)·κ` of `E ∗ E` must vanish,
/// which fixes `δ` and hence `q`; the `s` coefficient then fixes `t²`.
pub fn solve_a1() -> Result<Vec<A1Solution>, IsoError> {
    let symbolic = qc_table(&CartanData::build(1));
    let coeff = symbolic
        .entry(1, 1)
        .basis_coeff(1)
        .coefficient(Monomial { l: 1, m: 0 });
    let idx = DeltaIndex::new(1, 1);
    let slope = coeff.coefficient(idx);
    if slope.is_zero() {
        return Err(IsoError::Unsupported("no q dependence".into()));
    }
    let delta = -&coeff
        .constant_term()
        .checked_div(&slope)
        .expect("slope is nonzero");
    let Some(q) = q_from_delta(&delta) else {
        return Ok(Vec::new());
    };
    Ok(solve_a1_at(&q)?
        .into_iter()
        .map(|t| A1Solution { t, q: q.clone() })
        .collect())
}

/// A solution of the symmetric rank 2 ansatz
/// `E_1 ↦ a e_1 + b e_2`, `E_2 ↦ b e_1 + a e_2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct A2Solution {
    pub a: Cyclotomic,
    pub b: Cyclotomic,
    pub q1: Cyclotomic,
    pub q2: Cyclotomic,
}

impl A2Solution {
    pub fn map(&self) -> LinearMap {
        LinearMap::from_fn(2, |k, l| {
            if k == l {
                self.a.clone()
            } else {
                self.b.clone()
            }
        })
    }

    pub fn q(&self) -> Vec<Cyclotomic> {
        vec![self.q1.clone(), self.q2.clone()]
    }
}

/// Quadratic form `A a² + B ab + C b²` with `BaseScalar` coefficients.
type Quadratic = [BaseScalar; 3];

/// Chen-Ruan side of the ansatz, as quadratic forms in `(a, b)`: returns
/// the `s` form and the per-`e_k` forms for the product `(i, j)`.
fn ansatz_products(
    target: &ProductTable<BaseScalar>,
    i: usize,
    j: usize,
) -> (Quadratic, Vec<Quadratic>) {
    let zero = || {
        [
            BaseScalar::zero(2),
            BaseScalar::zero(2),
            BaseScalar::zero(2),
        ]
    };
    let mut s = zero();
    let mut basis = vec![zero(), zero()];
    for k in 1..=2 {
        for kk in 1..=2 {
            // M_{ki} is a on the diagonal, b off it.
            let slot = usize::from(k != i) + usize::from(kk != j);
            let e = target.entry(k, kk);
            s[slot] = &s[slot] + e.s_coeff();
            for l in 1..=2 {
                basis[l - 1][slot] = &basis[l - 1][slot] + e.basis_coeff(l);
            }
        }
    }
    (s, basis)
}

fn eval_quadratic(form: &Quadratic, a: &Cyclotomic, b: &Cyclotomic) -> BaseScalar {
    let terms = [a * a, a * b, b * b];
    form.iter()
        .zip(&terms)
        .fold(BaseScalar::zero(2), |acc, (c, t)| &acc + &c.scale(t))
}

/// Solves the rank 2 system under the symmetric ansatz, with `ℓ` and `m`
/// independent. The `s` equations determine `a² + b²` and `ab`; each choice
/// of `(a, b)` then makes the `e`-coefficient equations linear in
/// `δ_11, δ_22, δ_12`, which are solved exactly and checked for consistency
/// with a point `(q_1, q_2)`.
pub fn solve_a2() -> Result<Vec<A2Solution>, IsoError> {
    let target = cr_table(2);
    let symbolic = qc_table(&CartanData::build(2));
    let pairs = [(1, 1), (1, 2), (2, 2)];

    // s equations: A a² + B ab + C b² = c_s, with A = C under the ansatz.
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for &(i, j) in &pairs {
        let (s_form, _) = ansatz_products(&target, i, j);
        let [sa, sb, sc] = s_form.map(|f| f.as_constant());
        let (Some(sa), Some(sb), Some(sc)) = (sa, sb, sc) else {
            return Err(IsoError::Unsupported(
                "s coefficient is not constant".into(),
            ));
        };
        if sa != sc {
            return Err(IsoError::Unsupported(
                "s equations are not symmetric in a, b".into(),
            ));
        }
        let src = symbolic.entry(i, j).s_coeff();
        if src.has_corrections() {
            return Err(IsoError::Unsupported("s coefficient depends on q".into()));
        }
        let c = src
            .constant_part()
            .as_constant()
            .ok_or_else(|| IsoError::Unsupported("s coefficient is not constant".into()))?;
        rows.push(vec![sa, sb]);
        rhs.push(c);
    }
    // Unknowns u = a² + b², w = ab.
    let LinearSolution::Unique(sol) = solve_linear(&rows, &rhs) else {
        return Err(IsoError::Unsupported(
            "s equations do not determine a² + b² and ab".into(),
        ));
    };
    let (u, w) = (&sol[0], &sol[1]);
    let two = Cyclotomic::from_int(2);
    let root = |x: Cyclotomic| -> Result<Cyclotomic, IsoError> {
        let r = x
            .as_rational()
            .ok_or_else(|| IsoError::Unsupported("(a ± b)² is not rational".into()))?;
        sqrt_rational(&r).ok_or_else(|| IsoError::Unsupported("square root".into()))
    };
    let plus = root(u + &(&two * w))?;
    let minus = root(u - &(&two * w))?;
    let half = Cyclotomic::from_rational(rat(1, 2));

    let mut solutions = Vec::new();
    for sp in [1, -1] {
        for sm in [1, -1] {
            let p = plus.scale(&rat(sp, 1));
            let r = minus.scale(&rat(sm, 1));
            let a = &(&p + &r) * &half;
            let b = &(&p - &r) * &half;
            if let Some(sol) = solve_deltas(&symbolic, &target, &a, &b)? {
                if !solutions.contains(&sol) {
                    solutions.push(sol);
                }
            }
        }
    }
    solutions.sort_by_key(|s| {
        s.q1.as_root_of_unity()
            .map(|(j, k)| rat(j as i64, k as i64))
    });
    Ok(solutions)
}

/// For fixed `(a, b)`, collects the `e`-coefficient equations as linear
/// equations in the `δ` unknowns and solves them.
fn solve_deltas(
    symbolic: &ProductTable<QuantumScalar>,
    target: &ProductTable<BaseScalar>,
    a: &Cyclotomic,
    b: &Cyclotomic,
) -> Result<Option<A2Solution>, IsoError> {
    let map = LinearMap::from_fn(2, |k, l| if k == l { a.clone() } else { b.clone() });
    let unknowns: Vec<DeltaIndex> = DeltaIndex::all(2).collect();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (i, j) in [(1, 1), (1, 2), (2, 2)] {
        let lhs = apply_map(&map, symbolic.entry(i, j));
        let (_, forms) = ansatz_products(target, i, j);
        for k in 1..=2 {
            let image = QuantumScalar::from_base(&eval_quadratic(&forms[k - 1], a, b));
            let diff = lhs.basis_coeff(k).minus(&image);
            for f in diff.terms().values() {
                rows.push(unknowns.iter().map(|idx| f.coefficient(*idx)).collect());
                rhs.push(-f.constant_term());
            }
        }
        // The s equation must hold exactly for this (a, b).
        let s_image = image_product(&map, target, i, j);
        if QuantumScalar::from_base(s_image.s_coeff()) != *lhs.s_coeff() {
            return Ok(None);
        }
    }
    let deltas = match solve_linear(&rows, &rhs) {
        LinearSolution::Unique(v) => v,
        LinearSolution::Inconsistent => return Ok(None),
        LinearSolution::Underdetermined { .. } => {
            return Err(IsoError::Unsupported("δ values are not determined".into()))
        }
    };
    let value: BTreeMap<DeltaIndex, Cyclotomic> = unknowns.iter().copied().zip(deltas).collect();
    let (Some(q1), Some(q2)) = (
        q_from_delta(&value[&DeltaIndex::new(1, 1)]),
        q_from_delta(&value[&DeltaIndex::new(2, 2)]),
    ) else {
        return Ok(None);
    };
    let q = [q1.clone(), q2.clone()];
    match delta_eval(DeltaIndex::new(1, 2), &q) {
        Ok(d) if d == value[&DeltaIndex::new(1, 2)] => {}
        Ok(_) | Err(EvalError::Pole(_)) => return Ok(None),
        Err(e) => return Err(IsoError::Table(e.into())),
    }
    Ok(Some(A2Solution {
        a: a.clone(),
        b: b.clone(),
        q1,
        q2,
    }))
}

/// Result of testing the candidate map at one primitive root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum RootVerdict {
    Pass,
    Fail {
        failing_entries: Vec<(usize, usize)>,
    },
    /// Some `q_μ⋯q_ν = 1`: the corrected product is undefined.
    Undefined {
        mu: u32,
        nu: u32,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootOutcome {
    pub m_root: i64,
    pub q: Cyclotomic,
    #[serde(flatten)]
    pub verdict: RootVerdict,
    #[serde(skip)]
    pub report: Option<TransportReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub n: usize,
    pub roots: Vec<RootOutcome>,
}

/// Tests the candidate map at `q_1 = … = q_n = ζ` for every primitive
/// `(n+1)`-th root `ζ = exp(2πi m/(n+1))`.
pub fn conjecture_scan(n: usize) -> Result<ScanReport, IsoError> {
    let order = n as i64 + 1;
    let symbolic = qc_table(&CartanData::build(n));
    let target = cr_table(n);
    let mut roots = Vec::new();
    for m in (1..order).filter(|m| num::integer::gcd(*m, order) == 1) {
        let zeta = Cyclotomic::zeta(order as u64, m);
        let map = bgp_map(n, m)?;
        let (verdict, report) = match qc_eval(&symbolic, &vec![zeta.clone(); n]) {
            Err(TableError::Pole { index, .. }) => (
                RootVerdict::Undefined {
                    mu: index.mu,
                    nu: index.nu,
                },
                None,
            ),
            Err(e) => return Err(e.into()),
            Ok(source) => {
                let report = transport_check(&map, &source, &target)?;
                let verdict = if report.pass() {
                    RootVerdict::Pass
                } else {
                    RootVerdict::Fail {
                        failing_entries: report.failures().map(|e| (e.i, e.j)).collect(),
                    }
                };
                (verdict, Some(report))
            }
        };
        roots.push(RootOutcome {
            m_root: m,
            q: zeta,
            verdict,
            report,
        });
    }
    Ok(ScanReport { n, roots })
}

/// Convenience: the symbolic residual of a map against the quantum table,
/// with corrections left formal.
pub fn symbolic_residual(map: &LinearMap) -> Result<Vec<Vec<ExcClass<QuantumScalar>>>, IsoError> {
    let n = map.rank();
    transport_residual(map, &qc_table(&CartanData::build(n)), &cr_table(n))
}
