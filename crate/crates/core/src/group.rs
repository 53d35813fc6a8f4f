//! The group zoo: explicit groups with multiplication, inverses, right Haar
//! weights, and the modular function.
//!
//! Five families are supported:
//!
//! - `Lattice { dim }` — ℤ^d under addition,
//! - `Free { rank }` — the free group F_k on k generators, elements as
//!   fully reduced words,
//! - `Heisenberg` — the discrete Heisenberg group H₃(ℤ) of upper unitriangular
//!   integer matrices, coordinates (x, y, z) with
//!   (x₁,y₁,z₁)·(x₂,y₂,z₂) = (x₁+x₂, y₁+y₂, z₁+z₂+x₁y₂),
//! - `Cyclic { modulus }` — ℤ/mℤ,
//! - `GridAffine` — the affine group { t ↦ a·t + b, a > 0 } discretized on a
//!   window, coordinates (log₂ a, b), composition
//!   (a₁,b₁)∘(a₂,b₂) = (a₁a₂, a₁b₂ + b₁).
//!
//! The discrete families carry counting measure (haar ≡ 1) and are unimodular
//! (Δ ≡ 1). The affine group carries right Haar measure da db / a, which is
//! uniform in (log₂ a, b) coordinates, and modular function Δ((a,b)) = 1/a.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A group element in canonical form.
///
/// `Lattice` doubles for ℤ^d (d coordinates), H₃(ℤ) (3 coordinates) and
/// ℤ/mℤ (1 coordinate, reduced mod m). `Word` is a fully reduced free-group
/// word: nonzero signed generator indices with no adjacent cancelling pair.
/// `Affine` carries continuous (log₂ a, b) coordinates; products land off the
/// grid and are only snapped during quadrature.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Element {
    Lattice(Vec<i64>),
    Word(Vec<i32>),
    Affine { log2a: f64, b: f64 },
}

impl Element {
    pub fn lattice(coords: &[i64]) -> Self {
        Element::Lattice(coords.to_vec())
    }

    pub fn word(letters: &[i32]) -> Self {
        Element::Word(reduce_word(letters.iter().copied()))
    }

    pub fn affine(log2a: f64, b: f64) -> Self {
        Element::Affine { log2a, b }
    }
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == std::cmp::Ordering::Equal
    }
}

impl Eq for Element {}

impl PartialOrd for Element {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Element {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use Element::*;
        match (self, other) {
            (Lattice(a), Lattice(b)) => a.cmp(b),
            (Word(a), Word(b)) => a.cmp(b),
            (Affine { log2a: u1, b: b1 }, Affine { log2a: u2, b: b2 }) => {
                u1.total_cmp(u2).then(b1.total_cmp(b2))
            }
            (Lattice(_), _) => std::cmp::Ordering::Less,
            (_, Lattice(_)) => std::cmp::Ordering::Greater,
            (Word(_), _) => std::cmp::Ordering::Less,
            (_, Word(_)) => std::cmp::Ordering::Greater,
        }
    }
}

impl std::hash::Hash for Element {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        match self {
            Element::Lattice(v) => {
                state.write_u8(0);
                v.hash(state);
            }
            Element::Word(w) => {
                state.write_u8(1);
                w.hash(state);
            }
            Element::Affine { log2a, b } => {
                state.write_u8(2);
                state.write_u64(log2a.to_bits());
                state.write_u64(b.to_bits());
            }
        }
    }
}

impl std::fmt::Display for Element {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Element::Lattice(v) => {
                write!(f, "(")?;
                for (i, c) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
            Element::Word(w) if w.is_empty() => write!(f, "e"),
            Element::Word(w) => {
                for (i, g) in w.iter().enumerate() {
                    if i > 0 {
                        write!(f, ".")?;
                    }
                    if *g > 0 {
                        write!(f, "g{g}")?;
                    } else {
                        write!(f, "g{}^-1", -g)?;
                    }
                }
                Ok(())
            }
            Element::Affine { log2a, b } => write!(f, "(2^{log2a},{b})"),
        }
    }
}

/// Concatenate-and-cancel; the result is fully reduced provided cancellation
/// is applied greedily, which is all free reduction requires.
fn reduce_word<I: IntoIterator<Item = i32>>(letters: I) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::new();
    for g in letters {
        if g == 0 {
            continue;
        }
        if out.last().is_some_and(|&h| h == -g) {
            out.pop();
        } else {
            out.push(g);
        }
    }
    out
}

/// Window geometry for the grid-discretized affine group.
///
/// The a-axis is log₂-uniform: `levels_per_side` levels of step `a_step`
/// (in log₂ units) on either side of a = 1. The b-axis is uniform with step
/// `b_step` over [−B, B] where B = `b_halfwidth_steps`·`b_step`. The boundary
/// is absorbing: quadrature treats functions as zero outside the window.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridAffineSpec {
    pub levels_per_side: u32,
    pub a_step: f64,
    pub b_step: f64,
    pub b_halfwidth_steps: u32,
}

impl GridAffineSpec {
    pub fn rows(&self) -> usize {
        2 * self.levels_per_side as usize + 1
    }

    pub fn cols(&self) -> usize {
        2 * self.b_halfwidth_steps as usize + 1
    }

    /// Quadrature mass of one grid cell. Right Haar measure da db / a is
    /// ln2 · du · db in u = log₂ a coordinates, so every cell weighs the same.
    pub fn cell_weight(&self) -> f64 {
        std::f64::consts::LN_2 * self.a_step * self.b_step
    }

    pub fn contains(&self, log2a: f64, b: f64) -> bool {
        let umax = self.levels_per_side as f64 * self.a_step;
        let bmax = self.b_halfwidth_steps as f64 * self.b_step;
        log2a.abs() <= umax + 1e-12 && b.abs() <= bmax + 1e-12
    }
}

/// An explicit group together with its reference (right Haar) measure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupSpace {
    Lattice { dim: usize },
    Free { rank: usize },
    Heisenberg,
    Cyclic { modulus: u64 },
    GridAffine(GridAffineSpec),
}

impl GroupSpace {
    pub fn is_discrete(&self) -> bool {
        !matches!(self, GroupSpace::GridAffine(_))
    }

    /// Dimension of the continuous parameter space of exponentials on this
    /// group. Exponentials kill commutators, so this is the rank of the
    /// (torsion-free part of the) abelianization.
    pub fn exponential_dim(&self) -> usize {
        match self {
            GroupSpace::Lattice { dim } => *dim,
            GroupSpace::Free { rank } => *rank,
            GroupSpace::Heisenberg => 2,
            GroupSpace::Cyclic { .. } => 0,
            GroupSpace::GridAffine(_) => 1,
        }
    }

    pub fn identity(&self) -> Element {
        match self {
            GroupSpace::Lattice { dim } => Element::Lattice(vec![0; *dim]),
            GroupSpace::Free { .. } => Element::Word(Vec::new()),
            GroupSpace::Heisenberg => Element::Lattice(vec![0, 0, 0]),
            GroupSpace::Cyclic { .. } => Element::Lattice(vec![0]),
            GroupSpace::GridAffine(_) => Element::Affine { log2a: 0.0, b: 0.0 },
        }
    }

    /// Checks that an element is canonical for this group.
    pub fn validate(&self, x: &Element) -> Result<()> {
        let ok = match (self, x) {
            (GroupSpace::Lattice { dim }, Element::Lattice(v)) => v.len() == *dim,
            (GroupSpace::Free { rank }, Element::Word(w)) => {
                w.iter().all(|&g| g != 0 && g.unsigned_abs() as usize <= *rank)
                    && w.windows(2).all(|p| p[0] != -p[1])
            }
            (GroupSpace::Heisenberg, Element::Lattice(v)) => v.len() == 3,
            (GroupSpace::Cyclic { modulus }, Element::Lattice(v)) => {
                v.len() == 1 && v[0] >= 0 && (v[0] as u64) < *modulus
            }
            (GroupSpace::GridAffine(_), Element::Affine { log2a, b }) => {
                log2a.is_finite() && b.is_finite()
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidElement {
                group: self.describe(),
                element: format!("{x}"),
            })
        }
    }

    /// Group multiplication in canonical form. For the grid affine group the
    /// product coordinates are exact reals; snapping to the grid happens only
    /// in quadrature and interpolation.
    pub fn mul(&self, x: &Element, y: &Element) -> Result<Element> {
        self.validate(x)?;
        self.validate(y)?;
        Ok(match (self, x, y) {
            (GroupSpace::Lattice { .. }, Element::Lattice(a), Element::Lattice(b)) => {
                Element::Lattice(a.iter().zip(b).map(|(p, q)| p + q).collect())
            }
            (GroupSpace::Free { .. }, Element::Word(a), Element::Word(b)) => {
                Element::Word(reduce_word(a.iter().chain(b.iter()).copied()))
            }
            (GroupSpace::Heisenberg, Element::Lattice(a), Element::Lattice(b)) => {
                Element::Lattice(vec![a[0] + b[0], a[1] + b[1], a[2] + b[2] + a[0] * b[1]])
            }
            (GroupSpace::Cyclic { modulus }, Element::Lattice(a), Element::Lattice(b)) => {
                Element::Lattice(vec![(a[0] + b[0]).rem_euclid(*modulus as i64)])
            }
            (
                GroupSpace::GridAffine(_),
                Element::Affine { log2a: u1, b: b1 },
                Element::Affine { log2a: u2, b: b2 },
            ) => Element::Affine {
                log2a: u1 + u2,
                b: u1.exp2() * b2 + b1,
            },
            _ => unreachable!("validated above"),
        })
    }

    pub fn inv(&self, x: &Element) -> Result<Element> {
        self.validate(x)?;
        Ok(match (self, x) {
            (GroupSpace::Lattice { .. }, Element::Lattice(a)) => {
                Element::Lattice(a.iter().map(|p| -p).collect())
            }
            (GroupSpace::Free { .. }, Element::Word(a)) => {
                Element::Word(a.iter().rev().map(|g| -g).collect())
            }
            (GroupSpace::Heisenberg, Element::Lattice(a)) => {
                Element::Lattice(vec![-a[0], -a[1], -a[2] + a[0] * a[1]])
            }
            (GroupSpace::Cyclic { modulus }, Element::Lattice(a)) => {
                Element::Lattice(vec![(-a[0]).rem_euclid(*modulus as i64)])
            }
            (GroupSpace::GridAffine(_), Element::Affine { log2a, b }) => Element::Affine {
                log2a: -log2a,
                b: -b * (-log2a).exp2(),
            },
            _ => unreachable!("validated above"),
        })
    }

    /// Quadrature mass of the cell at `x`. Counting measure for the discrete
    /// families; the constant cell weight ln2·Δu·Δb for the affine grid, with
    /// an error if `x` falls outside the window.
    pub fn haar_weight(&self, x: &Element) -> Result<f64> {
        self.validate(x)?;
        match (self, x) {
            (GroupSpace::GridAffine(spec), Element::Affine { log2a, b }) => {
                if spec.contains(*log2a, *b) {
                    Ok(spec.cell_weight())
                } else {
                    Err(Error::OutsideWindow {
                        element: format!("{x}"),
                    })
                }
            }
            _ => Ok(1.0),
        }
    }

    /// The modular function Δ in closed form: Δ ≡ 1 on the discrete families
    /// (counting measure is bi-invariant), Δ((a,b)) = 1/a on the affine group
    /// under the composition convention (a₁,b₁)∘(a₂,b₂) = (a₁a₂, a₁b₂+b₁).
    ///
    /// The quadrature oracle for the same quantity lives in [`crate::grid`];
    /// tests hold the two within quadrature tolerance of each other.
    pub fn modular(&self, x: &Element) -> Result<f64> {
        self.validate(x)?;
        match x {
            Element::Affine { log2a, .. } => Ok((-log2a).exp2()),
            _ => Ok(1.0),
        }
    }

    /// Image of `x` under the homomorphism that classifies exponentials:
    /// the identity on ℤ^d, letter counts on F_k, (x, y) on H₃(ℤ) (the center
    /// dies), empty on ℤ/mℤ (torsion admits no nontrivial exponential), and
    /// ln a on the affine group (translations are the commutator subgroup).
    pub fn abelianization(&self, x: &Element) -> Result<Vec<f64>> {
        self.validate(x)?;
        Ok(match (self, x) {
            (GroupSpace::Lattice { .. }, Element::Lattice(v)) => {
                v.iter().map(|&c| c as f64).collect()
            }
            (GroupSpace::Free { rank }, Element::Word(w)) => {
                let mut counts = vec![0.0; *rank];
                for &g in w {
                    counts[(g.unsigned_abs() as usize) - 1] += g.signum() as f64;
                }
                counts
            }
            (GroupSpace::Heisenberg, Element::Lattice(v)) => vec![v[0] as f64, v[1] as f64],
            (GroupSpace::Cyclic { .. }, _) => Vec::new(),
            (GroupSpace::GridAffine(_), Element::Affine { log2a, .. }) => {
                vec![log2a * std::f64::consts::LN_2]
            }
            _ => unreachable!("validated above"),
        })
    }

    pub fn describe(&self) -> String {
        match self {
            GroupSpace::Lattice { dim } => format!("Z^{dim}"),
            GroupSpace::Free { rank } => format!("F_{rank}"),
            GroupSpace::Heisenberg => "H3(Z)".to_string(),
            GroupSpace::Cyclic { modulus } => format!("Z/{modulus}Z"),
            GroupSpace::GridAffine(spec) => format!(
                "affine grid (K={}, a_step={}, h={}, B={})",
                spec.levels_per_side,
                spec.a_step,
                spec.b_step,
                spec.b_halfwidth_steps as f64 * spec.b_step
            ),
        }
    }
}
