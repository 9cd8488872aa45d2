//! McKay graphs of the finite subgroups of `SL(2, C)`, the Chern character
//! comparison map, and the conjectural candidate isomorphism.
//!
//! Cyclic graphs are computed from characters of `Z_{n+1}` with the natural
//! two-dimensional representation `Q = λ_1 ⊕ λ_n`. Binary dihedral and
//! exceptional graphs are shipped as reference data.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::linalg::determinant;
use crate::exactnum::{branch_sqrt, Cyclotomic, ExactError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupLabel {
    A(u32),
    D(u32),
    E6,
    E7,
    E8,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum McKayError {
    #[error("no simple singularity of type {0}")]
    InvalidLabel(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("map matrix must be {rank}×{rank}")]
    BadShape { rank: usize },
}

impl GroupLabel {
    pub fn validate(self) -> Result<Self, McKayError> {
        match self {
            GroupLabel::A(0) => Err(McKayError::InvalidLabel(self.to_string())),
            GroupLabel::D(n) if n < 4 => Err(McKayError::InvalidLabel(self.to_string())),
            _ => Ok(self),
        }
    }

    /// Number of nontrivial irreducible representations.
    pub fn rank(self) -> u32 {
        match self {
            GroupLabel::A(n) | GroupLabel::D(n) => n,
            GroupLabel::E6 => 6,
            GroupLabel::E7 => 7,
            GroupLabel::E8 => 8,
        }
    }

    /// Defining equation of the rational double point.
    pub fn rdp_equation(self) -> String {
        match self {
            GroupLabel::A(n) => format!("xy - z^{} = 0", n + 1),
            GroupLabel::D(n) => format!("x^2 + y^2 z + z^{} = 0", n - 1),
            GroupLabel::E6 => "x^2 + y^3 + z^4 = 0".into(),
            GroupLabel::E7 => "x^2 + y^3 + y z^3 = 0".into(),
            GroupLabel::E8 => "x^2 + y^3 + z^5 = 0".into(),
        }
    }
}

impl fmt::Display for GroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupLabel::A(n) => write!(f, "A_{n}"),
            GroupLabel::D(n) => write!(f, "D_{n}"),
            GroupLabel::E6 => write!(f, "E_6"),
            GroupLabel::E7 => write!(f, "E_7"),
            GroupLabel::E8 => write!(f, "E_8"),
        }
    }
}

impl std::str::FromStr for GroupLabel {
    type Err = McKayError;

    /// Accepts `A4`, `A_4`, `d5`, `E6`, ...
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || McKayError::InvalidLabel(s.to_string());
        let t = s.trim().to_ascii_uppercase().replace('_', "");
        let (head, tail) = t.split_at(t.len().min(1));
        let n: u32 = tail.parse().map_err(|_| err())?;
        let label = match (head, n) {
            ("A", n) => GroupLabel::A(n),
            ("D", n) => GroupLabel::D(n),
            ("E", 6) => GroupLabel::E6,
            ("E", 7) => GroupLabel::E7,
            ("E", 8) => GroupLabel::E8,
            _ => return Err(err()),
        };
        label.validate().map_err(|_| err())
    }
}

/// Automorphism group of the (reduced) McKay graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GraphAutomorphisms {
    Trivial,
    Z2,
    S3,
}

impl GraphAutomorphisms {
    pub fn order(self) -> usize {
        match self {
            GraphAutomorphisms::Trivial => 1,
            GraphAutomorphisms::Z2 => 2,
            GraphAutomorphisms::S3 => 6,
        }
    }
}

impl fmt::Display for GraphAutomorphisms {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GraphAutomorphisms::Trivial => "{1}",
            GraphAutomorphisms::Z2 => "Z_2",
            GraphAutomorphisms::S3 => "S_3",
        })
    }
}

pub fn aut_gamma(label: GroupLabel) -> GraphAutomorphisms {
    match label {
        GroupLabel::A(1) | GroupLabel::E7 | GroupLabel::E8 => GraphAutomorphisms::Trivial,
        GroupLabel::D(4) => GraphAutomorphisms::S3,
        GroupLabel::A(_) | GroupLabel::D(_) | GroupLabel::E6 => GraphAutomorphisms::Z2,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub name: String,
    /// Dimension of the representation.
    pub degree: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct McKayGraph {
    pub label: GroupLabel,
    pub reduced: bool,
    pub vertices: Vec<Vertex>,
    pub adjacency: Vec<Vec<u32>>,
}

impl McKayGraph {
    pub fn edges(&self) -> Vec<(usize, usize, u32)> {
        edge_list(&self.adjacency)
    }

    pub fn is_symmetric(&self) -> bool {
        let a = &self.adjacency;
        (0..a.len()).all(|i| (0..a.len()).all(|j| a[i][j] == a[j][i]))
    }

    pub fn to_dot(&self) -> String {
        let names: Vec<String> = self
            .vertices
            .iter()
            .map(|v| format!("{} (dim {})", v.name, v.degree))
            .collect();
        dot_graph(
            &format!("mckay_{}", self.label).replace('_', ""),
            &names,
            &self.adjacency,
        )
    }
}

pub(crate) fn edge_list(adjacency: &[Vec<u32>]) -> Vec<(usize, usize, u32)> {
    let mut out = Vec::new();
    for i in 0..adjacency.len() {
        for j in i..adjacency.len() {
            if adjacency[i][j] > 0 {
                out.push((i, j, adjacency[i][j]));
            }
        }
    }
    out
}

/// Undirected Graphviz text; multiple edges are drawn individually.
pub(crate) fn dot_graph(name: &str, labels: &[String], adjacency: &[Vec<u32>]) -> String {
    let mut out = format!("graph {name} {{\n");
    for (k, l) in labels.iter().enumerate() {
        out.push_str(&format!("  v{k} [label=\"{l}\"];\n"));
    }
    for (i, j, mult) in edge_list(adjacency) {
        for _ in 0..mult {
            out.push_str(&format!("  v{i} -- v{j};\n"));
        }
    }
    out.push_str("}\n");
    out
}

/// McKay graph of `Z_{n+1}` from characters:
/// `a_ij = (1/(n+1)) Σ_g conj(χ_i(g)) χ_Q(g) χ_j(g)`.
pub fn an_mckay(rank: u32, reduced: bool) -> McKayGraph {
    assert!(rank >= 1, "rank must be at least 1");
    let order = rank as u64 + 1;
    let chi = |rep: u64, g: u64| Cyclotomic::zeta(order, (rep * g % order) as i64);
    let chi_q = |g: u64| &chi(1, g) + &chi(rank as u64, g);
    let first = if reduced { 1 } else { 0 };
    let reps: Vec<u64> = (first..order).collect();
    let weight = Cyclotomic::from_rational(crate::exactnum::rat(1, order as i64));
    let adjacency = reps
        .iter()
        .map(|&i| {
            reps.iter()
                .map(|&j| {
                    let sum = (0..order).fold(Cyclotomic::zero(), |acc, g| {
                        &acc + &(&(&chi(i, g).conj() * &chi_q(g)) * &chi(j, g))
                    });
                    let value = (&sum * &weight)
                        .as_rational()
                        .expect("multiplicities are rational");
                    assert!(value.is_integer(), "multiplicity must be an integer");
                    u32::try_from(value.to_integer()).expect("multiplicity is nonnegative")
                })
                .collect()
        })
        .collect();
    McKayGraph {
        label: GroupLabel::A(rank),
        reduced,
        vertices: reps
            .iter()
            .map(|j| Vertex {
                name: format!("λ{j}"),
                degree: 1,
            })
            .collect(),
        adjacency,
    }
}

/// Affine diagram as (representation degrees, edges); vertex 0 is trivial.
fn affine_data(label: GroupLabel) -> (Vec<u32>, Vec<(usize, usize)>) {
    match label {
        GroupLabel::A(_) => unreachable!("cyclic graphs are computed"),
        GroupLabel::D(n) => {
            let n = n as usize;
            // Vertices: 0, 1 attached to 2; chain 2..=n-2; n-1 and n attached to n-2.
            let mut degrees = vec![1, 1];
            degrees.extend(std::iter::repeat_n(2, n - 3));
            degrees.extend([1, 1]);
            let mut edges = vec![(0, 2), (1, 2)];
            edges.extend((2..n - 2).map(|k| (k, k + 1)));
            edges.extend([(n - 2, n - 1), (n - 2, n)]);
            (degrees, edges)
        }
        GroupLabel::E6 => (
            vec![1, 1, 2, 3, 2, 1, 2],
            vec![(1, 2), (2, 3), (3, 4), (4, 5), (3, 6), (6, 0)],
        ),
        GroupLabel::E7 => (
            vec![1, 2, 3, 4, 3, 2, 1, 2],
            vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (3, 7)],
        ),
        GroupLabel::E8 => (
            vec![1, 2, 3, 4, 5, 6, 4, 2, 3],
            vec![
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 4),
                (4, 5),
                (5, 6),
                (6, 7),
                (5, 8),
            ],
        ),
    }
}

/// McKay graph for any label: computed for `A_n`, reference data otherwise.
pub fn mckay_graph(label: GroupLabel, reduced: bool) -> Result<McKayGraph, McKayError> {
    let label = label.validate()?;
    if let GroupLabel::A(n) = label {
        return Ok(an_mckay(n, reduced));
    }
    let (degrees, edges) = affine_data(label);
    let size = degrees.len();
    let mut adjacency = vec![vec![0u32; size]; size];
    for (i, j) in edges {
        adjacency[i][j] += 1;
        adjacency[j][i] += 1;
    }
    let keep: Vec<usize> = (if reduced { 1 } else { 0 }..size).collect();
    Ok(McKayGraph {
        label,
        reduced,
        vertices: keep
            .iter()
            .map(|&k| Vertex {
                name: format!("ρ{k}"),
                degree: degrees[k],
            })
            .collect(),
        adjacency: keep
            .iter()
            .map(|&i| keep.iter().map(|&j| adjacency[i][j]).collect())
            .collect(),
    })
}

/// A linear map on the degree-2 span; column `l` is the image of `E_l`
/// in the basis `e_1..e_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearMap {
    rank: usize,
    matrix: Vec<Vec<Cyclotomic>>,
}

impl LinearMap {
    pub fn from_matrix(matrix: Vec<Vec<Cyclotomic>>) -> Result<Self, McKayError> {
        let rank = matrix.len();
        if rank == 0 || matrix.iter().any(|row| row.len() != rank) {
            return Err(McKayError::BadShape { rank });
        }
        Ok(LinearMap { rank, matrix })
    }

    /// Builds from a 1-based rule `(k, l) ↦` coefficient of `e_k` in the
    /// image of `E_l`.
    pub fn from_fn(rank: usize, f: impl Fn(usize, usize) -> Cyclotomic) -> Self {
        LinearMap {
            rank,
            matrix: (1..=rank)
                .map(|k| (1..=rank).map(|l| f(k, l)).collect())
                .collect(),
        }
    }

    pub fn identity(rank: usize) -> Self {
        Self::from_fn(rank, |k, l| {
            if k == l {
                Cyclotomic::one()
            } else {
                Cyclotomic::zero()
            }
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn matrix(&self) -> &[Vec<Cyclotomic>] {
        &self.matrix
    }

    /// Coefficient of `e_k` in the image of `E_l`, 1-based.
    pub fn entry(&self, k: usize, l: usize) -> &Cyclotomic {
        &self.matrix[k - 1][l - 1]
    }

    pub fn determinant(&self) -> Cyclotomic {
        determinant(&self.matrix)
    }

    pub fn is_invertible(&self) -> bool {
        !self.determinant().is_zero()
    }

    pub fn scaled(&self, c: &Cyclotomic) -> Self {
        Self::from_fn(self.rank, |k, l| self.entry(k, l) * c)
    }

    /// Conjugation by the diagram flip `E_l ↦ E_{n+1-l}`, `e_k ↦ e_{n+1-k}`.
    pub fn relabeled(&self) -> Self {
        let n = self.rank;
        Self::from_fn(n, |k, l| self.entry(n + 1 - k, n + 1 - l).clone())
    }

    /// Whether `self = c · other` for some scalar `c`.
    pub fn is_scalar_multiple_of(&self, other: &LinearMap) -> bool {
        if self.rank != other.rank {
            return false;
        }
        let pivot = other.matrix.iter().flatten().position(|x| !x.is_zero());
        let Some(p) = pivot else {
            return self.matrix.iter().flatten().all(Cyclotomic::is_zero);
        };
        let n = self.rank;
        let (pk, pl) = (p / n + 1, p % n + 1);
        let c = self
            .entry(pk, pl)
            .checked_div(other.entry(pk, pl))
            .expect("pivot is nonzero");
        other.scaled(&c) == *self
    }
}

impl fmt::Display for LinearMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in 1..=self.rank {
            let terms: Vec<String> = (1..=self.rank)
                .filter(|&k| !self.entry(k, l).is_zero())
                .map(|k| format!("({})·e{k}", self.entry(k, l)))
                .collect();
            let rhs = if terms.is_empty() {
                "0".into()
            } else {
                terms.join(" + ")
            };
            writeln!(f, "E{l} ↦ {rhs}")?;
        }
        Ok(())
    }
}

/// `E_m ↦ Σ_l ζ^{-lm} / (2 - ζ^l - ζ^{-l}) e_l` with `ζ = ζ_{n+1}`.
pub fn chtd_map(rank: usize) -> LinearMap {
    assert!(rank >= 1, "rank must be at least 1");
    let order = rank as u64 + 1;
    let z = |j: i64| Cyclotomic::zeta(order, j);
    LinearMap::from_fn(rank, |l, m| {
        let (l, m) = (l as i64, m as i64);
        let denom = &(&Cyclotomic::from_int(2) - &z(l)) - &z(-l);
        z(-l * m)
            .checked_div(&denom)
            .expect("2 - ζ^l - ζ^-l is nonzero for 0 < l < n+1")
    })
}

/// `E_l ↦ Σ_k ζ^{lk} (ζ^k + ζ^{-k} - 2)^{1/2} e_k` with
/// `ζ = exp(2πi·m/(n+1))` and the branch fixed by `m`.
pub fn bgp_map(rank: usize, m_root: i64) -> Result<LinearMap, McKayError> {
    assert!(rank >= 1, "rank must be at least 1");
    let order = rank as u64 + 1;
    let roots: Vec<Cyclotomic> = (1..=rank as i64)
        .map(|k| branch_sqrt(rank as u64, m_root, k))
        .collect::<Result<_, _>>()?;
    Ok(LinearMap::from_fn(rank, |k, l| {
        let zeta = Cyclotomic::zeta(order, (m_root.rem_euclid(order as i64)) * (l * k) as i64);
        &zeta * &roots[k - 1]
    }))
}
