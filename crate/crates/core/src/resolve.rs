//! Resolution of the `A_n` surface singularity `xy - z^{n+1} = 0` by
//! repeated blow-ups at the singular point, computed chart by chart.
//!
//! Each blow-up of a point is covered by three affine charts; in the chart
//! of variable `c` the other two coordinates become ratios. Exceptional
//! curves are the components of the projectivized tangent cone, and
//! adjacency is read off from where those components meet and from the
//! tangent directions of earlier curves.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exactnum::linalg::determinant;
use crate::exactnum::rational::display_rational;
use crate::exactnum::Rational;
use crate::mckay::{dot_graph, mckay_graph, GroupLabel};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolveError {
    #[error("the chart is already smooth")]
    NotSingular,
    #[error("unrecognized chart equation {0}")]
    Unrecognized(String),
    #[error("configuration not handled by the chart engine: {0}")]
    Unsupported(String),
}

const NAMES: [&str; 3] = ["x", "y", "z"];

/// Polynomial in `x, y, z` with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TriPoly {
    terms: BTreeMap<[u32; 3], Rational>,
}

impl TriPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(c: Rational, exps: [u32; 3]) -> Self {
        let mut p = Self::zero();
        p.add_term(exps, &c);
        p
    }

    pub fn var(i: usize) -> Self {
        let mut e = [0; 3];
        e[i] = 1;
        Self::term(Rational::one(), e)
    }

    fn add_term(&mut self, exps: [u32; 3], c: &Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exps).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c);
        }
        out
    }

    pub fn minus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, &-c);
        }
        out
    }

    pub fn times(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term([ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]], &(ca * cb));
            }
        }
        out
    }

    pub fn terms(&self) -> &BTreeMap<[u32; 3], Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowest total degree among the terms.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).min()
    }

    /// Homogeneous part of lowest degree.
    pub fn initial_form(&self) -> TriPoly {
        let Some(d) = self.order() else {
            return Self::zero();
        };
        TriPoly {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() == d)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    pub fn eval(&self, p: &[Rational; 3]) -> Rational {
        self.terms.iter().fold(Rational::zero(), |acc, (e, c)| {
            let mut v = c.clone();
            for k in 0..3 {
                for _ in 0..e[k] {
                    v *= &p[k];
                }
            }
            acc + v
        })
    }

    /// Total transform in the chart of variable `c` (`x_i ↦ x_c x_i` for
    /// `i ≠ c`), divided by the largest power of `x_c` it contains.
    pub fn strict_transform(&self, c: usize) -> TriPoly {
        let mut total = TriPoly::zero();
        for (e, coeff) in &self.terms {
            let mut ne = *e;
            ne[c] = e.iter().sum();
            total.add_term(ne, coeff);
        }
        let Some(shift) = total.terms.keys().map(|e| e[c]).min() else {
            return total;
        };
        TriPoly {
            terms: total
                .terms
                .into_iter()
                .map(|(mut e, coeff)| {
                    e[c] -= shift;
                    (e, coeff)
                })
                .collect(),
        }
    }

    fn uses_var(e: &[u32; 3], i: usize) -> bool {
        e[i] > 0
    }
}

impl fmt::Display for TriPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Lower degree first, constants last.
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by_key(|(e, _)| {
            let d: u32 = e.iter().sum();
            (d == 0, d, std::cmp::Reverse(**e))
        });
        for (k, (e, c)) in terms.iter().enumerate() {
            let mono: Vec<String> = (0..3)
                .filter(|&i| e[i] > 0)
                .map(|i| match e[i] {
                    1 => NAMES[i].to_string(),
                    p => format!("{}^{p}", NAMES[i]),
                })
                .collect();
            let mono = mono.join("");
            let mag = c.abs();
            let coeff = if mono.is_empty() || !mag.is_one() {
                display_rational(&mag)
            } else {
                String::new()
            };
            let body = match (coeff.is_empty(), mono.is_empty()) {
                (true, _) => mono,
                (false, true) => coeff,
                (false, false) => format!("{coeff}{mono}"),
            };
            match (k, c.is_negative()) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

/// Defining polynomial of each rational double point.
pub fn rdp_polynomial(label: GroupLabel) -> TriPoly {
    let one = Rational::one();
    let t = |e: [u32; 3]| TriPoly::term(one.clone(), e);
    match label {
        GroupLabel::A(n) => t([1, 1, 0]).minus(&t([0, 0, n + 1])),
        GroupLabel::D(n) => t([2, 0, 0]).plus(&t([0, 2, 1])).plus(&t([0, 0, n - 1])),
        GroupLabel::E6 => t([2, 0, 0]).plus(&t([0, 3, 0])).plus(&t([0, 0, 4])),
        GroupLabel::E7 => t([2, 0, 0]).plus(&t([0, 3, 0])).plus(&t([0, 1, 3])),
        GroupLabel::E8 => t([2, 0, 0]).plus(&t([0, 3, 0])).plus(&t([0, 0, 5])),
    }
}

/// What a chart equation looks like.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "type", content = "k")]
pub enum ChartSingularity {
    Smooth,
    /// `A_k` at the chart origin and smooth elsewhere.
    A(u32),
}

impl fmt::Display for ChartSingularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChartSingularity::Smooth => f.write_str("smooth"),
            ChartSingularity::A(k) => write!(f, "A_{k} at origin"),
        }
    }
}

/// Recognizes the normal forms arising in the recursion: a graph
/// `x_i = f(others)`, `uv = c` with `c ≠ 0`, and `uv = w^j` up to scaling.
pub fn classify(p: &TriPoly) -> Result<ChartSingularity, ResolveError> {
    let unrecognized = || ResolveError::Unrecognized(p.to_string());
    for i in 0..3 {
        let mut lin = [0; 3];
        lin[i] = 1;
        let graph = p.terms.contains_key(&lin)
            && p.terms.keys().filter(|e| TriPoly::uses_var(e, i)).count() == 1;
        if graph {
            return Ok(ChartSingularity::Smooth);
        }
    }
    if p.terms.len() != 2 {
        return Err(unrecognized());
    }
    let mut keys = p.terms.keys();
    let (e1, e2) = (*keys.next().unwrap(), *keys.next().unwrap());
    let is_product =
        |e: &[u32; 3]| e.iter().filter(|&&x| x == 1).count() == 2 && e.iter().sum::<u32>() == 2;
    let (prod, other) = if is_product(&e1) {
        (e1, e2)
    } else if is_product(&e2) {
        (e2, e1)
    } else {
        return Err(unrecognized());
    };
    let w = (0..3)
        .find(|&i| prod[i] == 0)
        .expect("product uses two variables");
    if other == [0, 0, 0] {
        return Ok(ChartSingularity::Smooth);
    }
    let j = other[w];
    if j >= 2 && other.iter().sum::<u32>() == j {
        Ok(ChartSingularity::A(j - 1))
    } else {
        Err(unrecognized())
    }
}

/// Direction at the singular point, as a point of the exceptional `P²`.
pub type Direction = [Rational; 3];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChartSurface {
    pub name: String,
    pub equation: TriPoly,
    pub singularity: ChartSingularity,
    /// Exceptional curves through the chart origin with their tangent
    /// directions there.
    pub curves: Vec<(usize, Direction)>,
}

impl ChartSurface {
    pub fn new(name: impl Into<String>, equation: TriPoly) -> Result<Self, ResolveError> {
        let singularity = classify(&equation)?;
        Ok(ChartSurface {
            name: name.into(),
            equation,
            singularity,
            curves: Vec::new(),
        })
    }

    /// `xy - z^{n+1} = 0`.
    pub fn a_n(n: u32) -> Self {
        Self::new("R", rdp_polynomial(GroupLabel::A(n))).expect("normal form")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExceptionalCurve {
    pub id: usize,
    /// Equation in the exceptional `P²` of the blow-up that created it.
    pub equation: String,
    /// Self-intersection: `-2` for a smooth rational curve on a crepant
    /// resolution, by adjunction. Assigned, not computed from the charts.
    pub self_intersection: i32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupStep {
    pub charts: Vec<ChartSurface>,
    pub new_curves: Vec<ExceptionalCurve>,
    /// Meetings that persist in the resolution.
    pub edges: Vec<(usize, usize)>,
    /// New curves meeting only at a point that is still singular.
    pub pending: Vec<(usize, usize)>,
}

fn unit(c: usize) -> Direction {
    let mut d: Direction = Default::default();
    d[c] = Rational::one();
    d
}

fn proportional(a: &Direction, b: &Direction) -> bool {
    (0..3).all(|i| (0..3).all(|j| &a[i] * &b[j] == &a[j] * &b[i]))
}

/// Components of a quadratic tangent cone: two coordinate lines for a
/// monomial `v_a v_b`, a single conic when the form is nondegenerate.
fn cone_components(cone: &TriPoly) -> Result<Vec<TriPoly>, ResolveError> {
    if cone.order() != Some(2) {
        return Err(ResolveError::Unsupported(format!(
            "tangent cone {cone} is not quadratic"
        )));
    }
    if cone.terms.len() == 1 {
        let e = *cone.terms.keys().next().unwrap();
        if e.iter().all(|&x| x <= 1) {
            return Ok((0..3).filter(|&i| e[i] == 1).map(TriPoly::var).collect());
        }
        return Err(ResolveError::Unsupported(format!(
            "non-reduced tangent cone {cone}"
        )));
    }
    let mut q = vec![vec![Rational::zero(); 3]; 3];
    for (e, c) in &cone.terms {
        let idx: Vec<usize> = (0..3)
            .flat_map(|i| std::iter::repeat_n(i, e[i] as usize))
            .collect();
        let (a, b) = (idx[0], idx[1]);
        if a == b {
            q[a][a] += c;
        } else {
            let half = c / Rational::from_integer(2.into());
            q[a][b] += &half;
            q[b][a] += &half;
        }
    }
    if determinant(&q).is_zero() {
        return Err(ResolveError::Unsupported(format!(
            "degenerate tangent cone {cone}"
        )));
    }
    Ok(vec![cone.clone()])
}

/// Tangent direction at the origin of chart `c` of the curve cut out by the
/// homogeneous `g` on the exceptional divisor `{x_c = 0}`.
fn direction_in_chart(g: &TriPoly, c: usize) -> Option<Direction> {
    let local = TriPoly {
        terms: g
            .terms
            .iter()
            .map(|(e, coeff)| {
                let mut e = *e;
                e[c] = 0;
                (e, coeff.clone())
            })
            .fold(BTreeMap::new(), |mut acc, (e, coeff)| {
                *acc.entry(e).or_insert_with(Rational::zero) += coeff;
                acc
            }),
    };
    if !local.eval(&Default::default()).is_zero() {
        return None;
    }
    let others: Vec<usize> = (0..3).filter(|&i| i != c).collect();
    let lin = |i: usize| {
        let mut e = [0; 3];
        e[i] = 1;
        local.terms.get(&e).cloned().unwrap_or_else(Rational::zero)
    };
    let (a, b) = (lin(others[0]), lin(others[1]));
    let mut d: Direction = Default::default();
    d[others[0]] = -b;
    d[others[1]] = a;
    Some(d)
}

/// Blows up the singular point at the origin of `s`. New curves are numbered
/// from `*next_id`.
pub fn blowup_step(s: &ChartSurface, next_id: &mut usize) -> Result<BlowupStep, ResolveError> {
    if s.singularity == ChartSingularity::Smooth {
        return Err(ResolveError::NotSingular);
    }
    let components = cone_components(&s.equation.initial_form())?;
    let new_curves: Vec<(usize, TriPoly)> = components
        .into_iter()
        .map(|g| {
            let id = *next_id;
            *next_id += 1;
            (id, g)
        })
        .collect();

    let mut charts = Vec::new();
    for c in 0..3 {
        let mut chart = ChartSurface::new(
            format!("{}·{}", s.name, ["U", "V", "W"][c]),
            s.equation.strict_transform(c),
        )?;
        for (id, g) in &new_curves {
            if let Some(d) = direction_in_chart(g, c) {
                chart.curves.push((*id, d));
            }
        }
        if chart.singularity != ChartSingularity::Smooth
            && s.curves.iter().any(|(_, d)| proportional(d, &unit(c)))
        {
            return Err(ResolveError::Unsupported(
                "earlier curve through the new singular point".into(),
            ));
        }
        charts.push(chart);
    }

    let mut edges = Vec::new();
    // Earlier curves meet the new components containing their direction.
    for (k, (old, d)) in s.curves.iter().enumerate() {
        if s.curves[..k].iter().any(|(_, e)| proportional(d, e)) {
            return Err(ResolveError::Unsupported(
                "tangent exceptional curves".into(),
            ));
        }
        for (id, g) in &new_curves {
            if g.eval(d).is_zero() {
                edges.push((*old, *id));
            }
        }
    }
    // New lines meet at a coordinate point: the origin of one chart.
    let mut pending = Vec::new();
    for a in 0..new_curves.len() {
        for b in a + 1..new_curves.len() {
            let (ga, gb) = (&new_curves[a].1, &new_curves[b].1);
            let meet = (0..3).find(|&c| ga.eval(&unit(c)).is_zero() && gb.eval(&unit(c)).is_zero());
            let pair = (new_curves[a].0, new_curves[b].0);
            match meet {
                Some(c) if charts[c].singularity != ChartSingularity::Smooth => pending.push(pair),
                Some(_) => edges.push(pair),
                None => {
                    return Err(ResolveError::Unsupported(
                        "curves meeting off the chart origins".into(),
                    ))
                }
            }
        }
    }
    Ok(BlowupStep {
        charts,
        new_curves: new_curves
            .into_iter()
            .map(|(id, g)| ExceptionalCurve {
                id,
                equation: format!("{g} = 0"),
                self_intersection: -2,
            })
            .collect(),
        edges,
        pending,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChartRecord {
    pub name: String,
    pub equation: String,
    pub singularity: ChartSingularity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResolutionGraph {
    pub n: u32,
    pub nodes: Vec<ExceptionalCurve>,
    pub edges: Vec<(usize, usize)>,
    /// Number of point blow-ups performed.
    pub rounds: usize,
    /// Chart equations after each blow-up.
    pub history: Vec<Vec<ChartRecord>>,
}

impl ResolutionGraph {
    /// Adjacency matrix with nodes in creation order.
    pub fn adjacency(&self) -> Vec<Vec<u32>> {
        let pos: BTreeMap<usize, usize> = self
            .nodes
            .iter()
            .enumerate()
            .map(|(k, c)| (c.id, k))
            .collect();
        let mut a = vec![vec![0; self.nodes.len()]; self.nodes.len()];
        for (u, v) in &self.edges {
            a[pos[u]][pos[v]] += 1;
            a[pos[v]][pos[u]] += 1;
        }
        a
    }

    /// Node ids walked from one end, if the graph is a simple chain.
    pub fn chain_order(&self) -> Option<Vec<usize>> {
        let a = self.adjacency();
        let n = a.len();
        if n == 0 || self.edges.len() != n - 1 || a.iter().flatten().any(|&x| x > 1) {
            return None;
        }
        let deg = |k: usize| a[k].iter().sum::<u32>();
        let start = (0..n).find(|&k| deg(k) <= 1)?;
        let mut order = vec![start];
        let mut seen = BTreeSet::from([start]);
        while let Some(next) =
            (0..n).find(|&k| a[*order.last().unwrap()][k] == 1 && !seen.contains(&k))
        {
            seen.insert(next);
            order.push(next);
        }
        (order.len() == n).then(|| order.into_iter().map(|k| self.nodes[k].id).collect())
    }

    /// Adjacency with nodes relabeled along the chain.
    pub fn chain_adjacency(&self) -> Option<Vec<Vec<u32>>> {
        let order = self.chain_order()?;
        let a = self.adjacency();
        let pos: BTreeMap<usize, usize> = self
            .nodes
            .iter()
            .enumerate()
            .map(|(k, c)| (c.id, k))
            .collect();
        Some(
            order
                .iter()
                .map(|u| order.iter().map(|v| a[pos[u]][pos[v]]).collect())
                .collect(),
        )
    }

    /// Whether the graph agrees with the reduced McKay graph of `Z_{n+1}`
    /// after relabeling along the chain.
    pub fn matches_mckay(&self) -> bool {
        let mckay = mckay_graph(GroupLabel::A(self.n), true).expect("valid label");
        self.chain_adjacency() == Some(mckay.adjacency)
    }

    pub fn to_dot(&self) -> String {
        let labels: Vec<String> = self
            .nodes
            .iter()
            .map(|c| format!("C{} ({})", c.id, c.self_intersection))
            .collect();
        dot_graph(
            &format!("resolution_A{}", self.n),
            &labels,
            &self.adjacency(),
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graphs always serialize")
    }
}

/// Blows up until every chart is smooth.
pub fn resolve_an(n: u32) -> Result<ResolutionGraph, ResolveError> {
    assert!(n >= 1, "rank must be at least 1");
    let mut surface = ChartSurface::a_n(n);
    let mut next_id = 1;
    let mut nodes = Vec::new();
    let mut edges = BTreeSet::new();
    let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut history = Vec::new();
    let mut rounds = 0;
    while surface.singularity != ChartSingularity::Smooth {
        let step = blowup_step(&surface, &mut next_id)?;
        rounds += 1;
        // Curves that met only at the blown-up point are now separated.
        pending.clear();
        nodes.extend(step.new_curves);
        edges.extend(step.edges);
        pending.extend(step.pending);
        history.push(
            step.charts
                .iter()
                .map(|c| ChartRecord {
                    name: c.name.clone(),
                    equation: c.equation.to_string(),
                    singularity: c.singularity,
                })
                .collect(),
        );
        let mut singular = step
            .charts
            .into_iter()
            .filter(|c| c.singularity != ChartSingularity::Smooth);
        match (singular.next(), singular.next()) {
            (None, _) => break,
            (Some(c), None) => surface = c,
            _ => return Err(ResolveError::Unsupported("several singular charts".into())),
        }
    }
    if !pending.is_empty() {
        return Err(ResolveError::Unsupported(
            "unresolved meeting points".into(),
        ));
    }
    Ok(ResolutionGraph {
        n,
        nodes,
        edges: edges.into_iter().collect(),
        rounds,
        history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> Vec<Vec<u32>> {
        (0..n)
            .map(|i| (0..n).map(|j| u32::from(i.abs_diff(j) == 1)).collect())
            .collect()
    }

    #[test]
    fn chart_equations_of_first_blowup() {
        let step = blowup_step(&ChartSurface::a_n(3), &mut 1).unwrap();
        let eqs: Vec<String> = step.charts.iter().map(|c| c.equation.to_string()).collect();
        assert_eq!(eqs, vec!["y - x^2z^4", "x - y^2z^4", "xy - z^2"]);
        assert_eq!(step.charts[2].singularity, ChartSingularity::A(1));
        assert_eq!(step.new_curves.len(), 2);
        assert_eq!(step.pending, vec![(1, 2)]);
    }

    #[test]
    fn single_blowup_cases() {
        let step = blowup_step(&ChartSurface::a_n(1), &mut 1).unwrap();
        assert_eq!(step.new_curves.len(), 1);
        assert!(step
            .charts
            .iter()
            .all(|c| c.singularity == ChartSingularity::Smooth));
        let step = blowup_step(&ChartSurface::a_n(2), &mut 1).unwrap();
        assert_eq!(step.new_curves.len(), 2);
        assert_eq!(step.edges, vec![(1, 2)]);
        let smooth = ChartSurface::new("P", TriPoly::var(0)).unwrap();
        assert_eq!(blowup_step(&smooth, &mut 1), Err(ResolveError::NotSingular));
    }

    #[test]
    fn classifier() {
        let one = Rational::one();
        let xy = TriPoly::term(one.clone(), [1, 1, 0]);
        assert_eq!(
            classify(&xy.minus(&TriPoly::term(one.clone(), [0, 0, 0]))),
            Ok(ChartSingularity::Smooth)
        );
        assert_eq!(
            classify(&xy.minus(&TriPoly::term(one.clone(), [0, 0, 5]))),
            Ok(ChartSingularity::A(4))
        );
        assert!(classify(&rdp_polynomial(GroupLabel::E8)).is_err());
    }

    #[test]
    fn chains_and_rounds() {
        for n in 1..=12u32 {
            let g = resolve_an(n).unwrap();
            assert_eq!(g.nodes.len(), n as usize);
            assert!(g.nodes.iter().all(|c| c.self_intersection == -2));
            assert_eq!(g.chain_adjacency(), Some(chain(n as usize)), "n = {n}");
            assert_eq!(g.rounds, (n as usize).div_ceil(2));
            assert!(g.matches_mckay());
        }
    }

    #[test]
    fn history_is_classified() {
        let g = resolve_an(5).unwrap();
        let tags: Vec<ChartSingularity> = g.history.iter().map(|h| h[2].singularity).collect();
        assert_eq!(
            tags,
            vec![
                ChartSingularity::A(3),
                ChartSingularity::A(1),
                ChartSingularity::Smooth
            ]
        );
    }
}
