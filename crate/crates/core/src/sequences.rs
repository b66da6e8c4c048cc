//! Sequences in a Hilbert space: explicit finite lists and closed-form
//! infinite families built on an orthonormal basis `e_1, e_2, ...`.
//!
//! Basis indices and element positions are 1-based throughout.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, ValidationError};
use crate::numkernel::{CMatrix, C64};

/// Upper limit on the ambient dimension of a truncation unless overridden.
pub const DEFAULT_MAX_DIM: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub struct HVector {
    coords: Vec<C64>,
}

impl HVector {
    pub fn new(coords: Vec<C64>) -> Result<Self, ValidationError> {
        if coords.is_empty() {
            return Err(ValidationError::ZeroDimension);
        }
        if let Some(position) = coords
            .iter()
            .position(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(ValidationError::NonFiniteCoordinate {
                index: 0,
                position: position + 1,
            });
        }
        Ok(Self { coords })
    }

    pub fn from_real(values: &[f64]) -> Result<Self, ValidationError> {
        Self::new(values.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "HVector needs dim >= 1");
        Self {
            coords: vec![C64::new(0.0, 0.0); dim],
        }
    }

    /// The basis vector `e_k` of `C^dim`.
    pub fn basis(dim: usize, k: usize) -> Self {
        assert!((1..=dim).contains(&k), "basis index {k} outside 1..={dim}");
        let mut v = Self::zeros(dim);
        v.coords[k - 1] = C64::new(1.0, 0.0);
        v
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[C64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<C64> {
        self.coords
    }

    pub fn norm(&self) -> f64 {
        crate::numkernel::norm(&self.coords)
    }

    /// Zero-pads to a larger dimension.
    pub fn embed(&self, dim: usize) -> Self {
        assert!(dim >= self.dim());
        let mut coords = self.coords.clone();
        coords.resize(dim, C64::new(0.0, 0.0));
        Self { coords }
    }
}

/// A finite sequence `ψ_1, ..., ψ_m` in `C^n`. Zero vectors are allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteSequence {
    space_dim: usize,
    elements: Vec<HVector>,
}

impl FiniteSequence {
    pub fn new(space_dim: usize, elements: Vec<HVector>) -> Result<Self, ValidationError> {
        if space_dim == 0 {
            return Err(ValidationError::ZeroDimension);
        }
        if elements.is_empty() {
            return Err(ValidationError::EmptySequence);
        }
        for (i, e) in elements.iter().enumerate() {
            if e.dim() != space_dim {
                return Err(ValidationError::DimensionMismatch {
                    index: i + 1,
                    expected: space_dim,
                    found: e.dim(),
                });
            }
        }
        Ok(Self {
            space_dim,
            elements,
        })
    }

    /// Convenience constructor from real coordinate rows, one per element.
    pub fn from_real(elements: &[&[f64]]) -> Result<Self, ValidationError> {
        let n = elements.first().map_or(0, |e| e.len());
        let elements = elements
            .iter()
            .enumerate()
            .map(|(i, e)| {
                HVector::from_real(e).map_err(|err| match err {
                    ValidationError::NonFiniteCoordinate { position, .. } => {
                        ValidationError::NonFiniteCoordinate {
                            index: i + 1,
                            position,
                        }
                    }
                    other => other,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(n, elements)
    }

    /// Orthonormal basis `e_1..e_n` of `C^n`.
    pub fn standard_basis(n: usize) -> Self {
        Self {
            space_dim: n,
            elements: (1..=n).map(|k| HVector::basis(n, k)).collect(),
        }
    }

    pub fn space_dim(&self) -> usize {
        self.space_dim
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[HVector] {
        &self.elements
    }

    /// Synthesis matrix: `n x m`, column `i` is `ψ_i`.
    pub fn synthesis_matrix(&self) -> CMatrix {
        CMatrix::from_fn(self.space_dim, self.elements.len(), |r, c| {
            self.elements[c].coords[r]
        })
    }

    pub fn scaled(&self, t: f64) -> Self {
        Self {
            space_dim: self.space_dim,
            elements: self
                .elements
                .iter()
                .map(|e| HVector {
                    coords: e.coords.iter().map(|z| z * t).collect(),
                })
                .collect(),
        }
    }

    pub fn without(&self, j: usize) -> Option<Self> {
        if self.elements.len() <= 1 {
            return None;
        }
        let mut elements = self.elements.clone();
        elements.remove(j);
        Some(Self {
            space_dim: self.space_dim,
            elements,
        })
    }
}

/// Closed-form map from element position `i` to basis index `σ(i)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "map", rename_all = "snake_case", deny_unknown_fields)]
pub enum IndexMap {
    /// `σ(i) = i`.
    Identity,
    /// Each basis index repeated `times` times in a row: `σ(i) = ceil(i / times)`.
    Repeated { times: usize },
    /// Odd positions go to `anchor`; even positions enumerate the remaining
    /// basis indices in increasing order. `anchor = 1` gives
    /// `e_1, e_2, e_1, e_3, e_1, e_4, ...`.
    Alternating { anchor: usize },
    /// Blocks `1; 1,2; 1,2,3; ...`.
    Triangular,
    /// Explicit indices for the first positions, then `tail` applied to the
    /// remaining positions counted from 1.
    Prefixed { prefix: Vec<usize>, tail: Box<IndexMap> },
}

impl IndexMap {
    pub fn apply(&self, i: usize) -> usize {
        debug_assert!(i >= 1);
        match self {
            IndexMap::Identity => i,
            IndexMap::Repeated { times } => i.div_ceil(*times),
            IndexMap::Alternating { anchor } => {
                if i % 2 == 1 {
                    *anchor
                } else {
                    let j = i / 2;
                    if j < *anchor {
                        j
                    } else {
                        j + 1
                    }
                }
            }
            IndexMap::Triangular => {
                let b = triangular_block(i);
                i - b * (b - 1) / 2
            }
            IndexMap::Prefixed { prefix, tail } => {
                if i <= prefix.len() {
                    prefix[i - 1]
                } else {
                    tail.apply(i - prefix.len())
                }
            }
        }
    }

    pub fn is_injective(&self) -> bool {
        match self {
            IndexMap::Identity => true,
            IndexMap::Repeated { times } => *times == 1,
            IndexMap::Alternating { .. } | IndexMap::Triangular => false,
            // every tail map is onto the basis indices, so a non-empty prefix collides
            IndexMap::Prefixed { prefix, tail } => prefix.is_empty() && tail.is_injective(),
        }
    }

    fn validate(&self) -> Result<(), ValidationError> {
        match self {
            IndexMap::Identity | IndexMap::Triangular => Ok(()),
            IndexMap::Repeated { times } => {
                if *times == 0 {
                    Err(ValidationError::InvalidRepeat(0))
                } else {
                    Ok(())
                }
            }
            IndexMap::Alternating { anchor } => {
                if *anchor == 0 {
                    Err(ValidationError::InvalidBasisIndex {
                        field: "sigma.anchor",
                        index: 0,
                    })
                } else {
                    Ok(())
                }
            }
            IndexMap::Prefixed { prefix, tail } => {
                if prefix.contains(&0) {
                    return Err(ValidationError::InvalidBasisIndex {
                        field: "sigma.prefix",
                        index: 0,
                    });
                }
                tail.validate()
            }
        }
    }
}

/// Block number `b` (1-based) containing position `i` of the triangular
/// pattern, i.e. `b(b-1)/2 < i <= b(b+1)/2`.
pub(crate) fn triangular_block(i: usize) -> usize {
    let mut b = ((((8 * i) as f64 + 1.0).sqrt() - 1.0) / 2.0).floor() as usize;
    while b * (b + 1) / 2 < i {
        b += 1;
    }
    while b > 1 && (b - 1) * b / 2 >= i {
        b -= 1;
    }
    b.max(1)
}

/// Closed-form real weight `w_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case", deny_unknown_fields)]
pub enum WeightForm {
    Constant { c: f64 },
    /// `a * i^p + b`.
    Poly { a: f64, p: f64, b: f64 },
    /// `a * r^i`.
    Exp { a: f64, r: f64 },
    /// Explicit weights for the first positions, `tail` (evaluated at the
    /// absolute position) afterwards.
    Prefixed { prefix: Vec<f64>, tail: Box<WeightForm> },
}

impl WeightForm {
    pub fn eval(&self, i: usize) -> f64 {
        match self {
            WeightForm::Constant { c } => *c,
            WeightForm::Poly { a, p, b } => a * (i as f64).powf(*p) + b,
            WeightForm::Exp { a, r } => a * r.powi(i as i32),
            WeightForm::Prefixed { prefix, tail } => {
                if i <= prefix.len() {
                    prefix[i - 1]
                } else {
                    tail.eval(i)
                }
            }
        }
    }

    fn validate(&self) -> Result<(), ValidationError> {
        let finite = |field: &'static str, x: f64| {
            if x.is_finite() {
                Ok(())
            } else {
                Err(ValidationError::NonFiniteWeight { field })
            }
        };
        match self {
            WeightForm::Constant { c } => finite("weights.c", *c),
            WeightForm::Poly { a, p, b } => {
                finite("weights.a", *a)?;
                finite("weights.p", *p)?;
                finite("weights.b", *b)
            }
            WeightForm::Exp { a, r } => {
                finite("weights.a", *a)?;
                finite("weights.r", *r)
            }
            WeightForm::Prefixed { prefix, tail } => {
                for &w in prefix {
                    finite("weights.prefix", w)?;
                }
                tail.validate()
            }
        }
    }
}

/// Closed-form infinite sequence.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StructuredSequence {
    /// `ψ_i = w_i e_{σ(i)}`.
    WeightedOnb {
        index_map: IndexMap,
        weights: WeightForm,
    },
    /// `ψ_i = e_i + e_anchor`.
    AnchoredOnb { anchor: usize },
}

impl StructuredSequence {
    pub fn weighted(index_map: IndexMap, weights: WeightForm) -> Result<Self, ValidationError> {
        index_map.validate()?;
        weights.validate()?;
        Ok(Self::WeightedOnb { index_map, weights })
    }

    pub fn anchored(anchor: usize) -> Result<Self, ValidationError> {
        if anchor == 0 {
            return Err(ValidationError::InvalidBasisIndex {
                field: "anchor",
                index: 0,
            });
        }
        Ok(Self::AnchoredOnb { anchor })
    }

    /// Largest basis index used by the first `n` elements.
    pub fn max_basis_index(&self, n: usize) -> usize {
        match self {
            StructuredSequence::WeightedOnb { index_map, .. } => {
                (1..=n).map(|i| index_map.apply(i)).max().unwrap_or(1)
            }
            StructuredSequence::AnchoredOnb { anchor } => n.max(*anchor),
        }
    }

    /// Nonzero coordinates of `ψ_i` as `(basis index, value)` pairs.
    pub fn element_terms(&self, i: usize) -> Vec<(usize, f64)> {
        match self {
            StructuredSequence::WeightedOnb { index_map, weights } => {
                vec![(index_map.apply(i), weights.eval(i))]
            }
            StructuredSequence::AnchoredOnb { anchor } => {
                if i == *anchor {
                    vec![(i, 2.0)]
                } else {
                    vec![(i, 1.0), (*anchor, 1.0)]
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SpacePolicy {
    /// Ambient dimension = largest basis index reached.
    #[default]
    MaxIndex,
    Fixed(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncationPlan {
    sizes: Vec<usize>,
    pub space: SpacePolicy,
}

impl TruncationPlan {
    pub fn new(sizes: Vec<usize>) -> Result<Self, ValidationError> {
        if sizes.is_empty() {
            return Err(ValidationError::EmptyPlan);
        }
        if sizes[0] == 0 || sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ValidationError::UnorderedPlan);
        }
        Ok(Self {
            sizes,
            space: SpacePolicy::MaxIndex,
        })
    }

    pub fn with_space(mut self, space: SpacePolicy) -> Self {
        self.space = space;
        self
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }
}

/// First `n` elements of `s` as vectors in `C^d`, with `d` the largest basis
/// index reached (or the fixed override).
pub fn truncate(
    s: &StructuredSequence,
    n: usize,
    space: SpacePolicy,
    max_dim: usize,
) -> Result<FiniteSequence> {
    if n == 0 {
        return Err(ValidationError::EmptySequence.into());
    }
    let needed = s.max_basis_index(n);
    let dim = match space {
        SpacePolicy::MaxIndex => needed,
        SpacePolicy::Fixed(d) => {
            if d < needed {
                return Err(Error::IndexOutOfRange {
                    index: needed,
                    dim: d,
                });
            }
            d
        }
    };
    if dim > max_dim {
        return Err(Error::ResourceLimit {
            size: n,
            needed: dim,
            limit: max_dim,
        });
    }
    let elements = (1..=n)
        .map(|i| {
            let mut v = HVector::zeros(dim);
            for (k, w) in s.element_terms(i) {
                v.coords[k - 1] += C64::new(w, 0.0);
            }
            v
        })
        .collect();
    Ok(FiniteSequence::new(dim, elements)?)
}

/// Zeroes every coordinate outside `support` (1-based basis indices).
pub fn project_onto(seq: &FiniteSequence, support: &BTreeSet<usize>) -> Result<FiniteSequence> {
    let n = seq.space_dim();
    if let Some(&bad) = support.iter().find(|&&k| k == 0 || k > n) {
        return Err(Error::IndexOutOfRange { index: bad, dim: n });
    }
    let elements = seq
        .elements()
        .iter()
        .map(|e| HVector {
            coords: e
                .coords
                .iter()
                .enumerate()
                .map(|(r, &z)| {
                    if support.contains(&(r + 1)) {
                        z
                    } else {
                        C64::new(0.0, 0.0)
                    }
                })
                .collect(),
        })
        .collect();
    Ok(FiniteSequence::new(n, elements)?)
}
