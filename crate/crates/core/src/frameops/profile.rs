//! Closed-form domain analysis for structured families.
//!
//! For `ψ_i = w_i e_{σ(i)}` the analysis operator acts coordinate-wise:
//! `||C f||² = Σ_k W_k |f_k|²` with the weight mass
//! `W_k = Σ_{σ(i) = k} |w_i|²`. Hence
//!
//! * `dom(C) = {f : Σ W_k |f_k|² < ∞}`, which forces `f_k = 0` wherever
//!   `W_k = ∞`;
//! * `H_Ψ`, the closure of `dom(C)`, is spanned by `{e_k : W_k < ∞}`;
//! * `C` is densely defined (equivalently `D` is closable) iff every `W_k`
//!   is finite.
//!
//! Masses are decided exactly: finite preimages are summed term by term and
//! infinite preimages are either recognised as divergent or summed in closed
//! form (geometric series). Anything else is rejected as unsupported.
//!
//! For `ψ_i = e_i + e_a` (anchored family) every `ψ_i` has coordinate 1 at
//! `a`, so `C f` contains `f_a` infinitely often and `dom(C) = {f : f_a = 0}`.
//! On that domain `S f = f + (Σ_i f_i) e_a`; vectors spreading unit mass over
//! `n` coordinates tend to 0 while `S` maps them near `e_a`, so `S` is not
//! closable. These facts are encoded directly.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::bound::Bound;
use crate::error::{Error, Result};
use crate::sequences::{IndexMap, StructuredSequence, WeightForm};

/// Beyond this index the analysis refuses to enumerate masses one by one.
const MAX_EXPLICIT_INDEX: usize = 1_000_000;

/// Set of basis indices, possibly infinite.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", content = "indices", rename_all = "snake_case")]
pub enum Support {
    All,
    AllExcept(BTreeSet<usize>),
    Only(BTreeSet<usize>),
}

impl Support {
    pub fn contains(&self, k: usize) -> bool {
        match self {
            Support::All => k >= 1,
            Support::AllExcept(out) => k >= 1 && !out.contains(&k),
            Support::Only(set) => set.contains(&k),
        }
    }

    /// Members within `1..=n`.
    pub fn within(&self, n: usize) -> BTreeSet<usize> {
        (1..=n).filter(|&k| self.contains(k)).collect()
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Support::Only(s) if s.is_empty())
    }
}

/// Shape of the masses from some index on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum MassTail {
    /// `W_k` finite and monotone for `k >= from`, tending to `limit`.
    Monotone { from: usize, limit: Bound },
    /// `W_k = value` for every `k >= from`.
    Uniform { from: usize, value: Bound },
}

impl MassTail {
    pub fn from(&self) -> usize {
        match self {
            MassTail::Monotone { from, .. } | MassTail::Uniform { from, .. } => *from,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DomainProfile {
    #[serde(skip)]
    pub family: StructuredSequence,
    /// `W_1 ..= W_from`, where `from` is the start of the tail.
    pub masses: Vec<Bound>,
    pub tail: MassTail,
    pub hil_psi_support: Support,
    pub analysis_densely_defined: bool,
    pub synthesis_closable: bool,
    pub frame_operator_closable_on_h: bool,
    pub notes: Vec<String>,
}

impl DomainProfile {
    /// Exact `W_k` for any `k >= 1`.
    pub fn mass(&self, k: usize) -> Bound {
        assert!(k >= 1, "basis indices start at 1");
        if k <= self.masses.len() {
            return self.masses[k - 1];
        }
        match self.tail {
            MassTail::Uniform { value, .. } => value,
            MassTail::Monotone { .. } => match &self.family {
                StructuredSequence::WeightedOnb { index_map, weights } => {
                    weighted_mass(index_map, weights, k)
                        .expect("tail masses have finite preimages")
                }
                StructuredSequence::AnchoredOnb { anchor } => anchored_mass(*anchor, k),
            },
        }
    }

    fn tail_first(&self) -> Bound {
        self.masses[self.tail.from() - 1]
    }

    /// `inf_k W_k`, infinity counted as large.
    pub fn inf_mass(&self) -> Bound {
        let head = self.masses.iter().copied().fold(Bound::Infinite, Bound::min);
        match self.tail {
            MassTail::Monotone { limit, .. } => head.min(limit),
            MassTail::Uniform { .. } => head,
        }
    }

    /// `sup_k W_k`.
    pub fn sup_mass(&self) -> Bound {
        let head = self
            .masses
            .iter()
            .copied()
            .fold(Bound::Finite(0.0), Bound::max);
        match self.tail {
            MassTail::Monotone { limit, .. } => head.max(limit),
            MassTail::Uniform { .. } => head,
        }
    }

    /// Infimum over the finite masses; `None` when every mass is infinite.
    pub fn inf_finite_mass(&self) -> Option<f64> {
        let mut inf: Option<f64> = None;
        let mut take = |x: f64| inf = Some(inf.map_or(x, |m| m.min(x)));
        self.masses.iter().filter_map(Bound::finite).for_each(&mut take);
        if let MassTail::Monotone {
            limit: Bound::Finite(l),
            ..
        } = self.tail
        {
            take(l);
        }
        inf
    }

    /// Supremum over the finite masses (`Infinite` if they are unbounded);
    /// `None` when every mass is infinite.
    pub fn sup_finite_mass(&self) -> Option<Bound> {
        let head = self
            .masses
            .iter()
            .filter_map(Bound::finite)
            .fold(None, |acc: Option<f64>, x| Some(acc.map_or(x, |m| m.max(x))));
        match self.tail {
            MassTail::Monotone { limit, .. } => {
                Some(Bound::Finite(head.unwrap_or(0.0)).max(limit))
            }
            MassTail::Uniform { .. } => head.map(Bound::Finite),
        }
    }

    /// `true` when some basis index carries zero mass.
    pub fn has_zero_mass(&self) -> bool {
        self.masses.contains(&Bound::Finite(0.0))
            || self.tail_first() == Bound::Finite(0.0)
    }
}

// Absolute positions of an infinite preimage.
#[derive(Debug, Clone, Copy)]
enum Positions {
    /// `start, start + step, ...`
    Arithmetic { start: usize, step: usize },
    /// `offset + b(b-1)/2 + k` for `b >= k`.
    Triangular { k: usize, offset: usize },
}

impl Positions {
    fn first_after(self, bound: usize) -> Positions {
        match self {
            Positions::Arithmetic { start, step } => {
                let start = if start > bound {
                    start
                } else {
                    start + (bound - start) / step * step + step
                };
                Positions::Arithmetic { start, step }
            }
            p => p,
        }
    }

    /// Positions `<= bound`.
    fn up_to(self, bound: usize) -> Vec<usize> {
        match self {
            Positions::Arithmetic { start, step } => {
                (0..).map(|t| start + t * step).take_while(|&i| i <= bound).collect()
            }
            Positions::Triangular { k, offset } => (k..)
                .map(|b| offset + b * (b - 1) / 2 + k)
                .take_while(|&i| i <= bound)
                .collect(),
        }
    }
}

#[derive(Debug, Default)]
struct Preimage {
    finite: Vec<usize>,
    infinite: Option<Positions>,
}

fn preimage(map: &IndexMap, k: usize, offset: usize) -> Preimage {
    match map {
        IndexMap::Identity => Preimage {
            finite: vec![offset + k],
            infinite: None,
        },
        IndexMap::Repeated { times } => Preimage {
            finite: ((k - 1) * times + 1..=k * times).map(|i| offset + i).collect(),
            infinite: None,
        },
        IndexMap::Alternating { anchor } => {
            if k == *anchor {
                Preimage {
                    finite: Vec::new(),
                    infinite: Some(Positions::Arithmetic {
                        start: offset + 1,
                        step: 2,
                    }),
                }
            } else {
                let j = if k < *anchor { k } else { k - 1 };
                Preimage {
                    finite: vec![offset + 2 * j],
                    infinite: None,
                }
            }
        }
        IndexMap::Triangular => Preimage {
            finite: Vec::new(),
            infinite: Some(Positions::Triangular { k, offset }),
        },
        IndexMap::Prefixed { prefix, tail } => {
            let mut pre = preimage(tail, k, offset + prefix.len());
            let mut head: Vec<usize> = prefix
                .iter()
                .enumerate()
                .filter(|(_, &v)| v == k)
                .map(|(idx, _)| offset + idx + 1)
                .collect();
            head.append(&mut pre.finite);
            pre.finite = head;
            pre
        }
    }
}

/// Last position whose weight is given explicitly, and the closed form used
/// after it.
fn split_weights(w: &WeightForm) -> (usize, &WeightForm) {
    match w {
        WeightForm::Prefixed { prefix, tail } => {
            let (inner_len, base) = split_weights(tail);
            (prefix.len().max(inner_len), base)
        }
        base => (0, base),
    }
}

/// Closed-form summary of `|w_i|²` for a non-prefixed form.
enum BaseBehaviour {
    /// `|w_i|² = v` for every `i`.
    Constant(f64),
    /// Grows without bound or tends to a nonzero limit.
    Divergent,
    /// `a² r^{2i}` with `0 < |r| < 1`, `a != 0`.
    Geometric { a2: f64, r2: f64 },
    /// `a² i^{2p}` with `p < 0`, `a != 0`.
    PowerDecay { two_p: f64 },
}

fn base_behaviour(w: &WeightForm) -> BaseBehaviour {
    match *w {
        WeightForm::Constant { c } => BaseBehaviour::Constant(c * c),
        WeightForm::Poly { a, p, b } => {
            if a == 0.0 {
                BaseBehaviour::Constant(b * b)
            } else if p == 0.0 {
                BaseBehaviour::Constant((a + b) * (a + b))
            } else if p > 0.0 || b != 0.0 {
                BaseBehaviour::Divergent
            } else {
                BaseBehaviour::PowerDecay {
                    two_p: 2.0 * p,
                }
            }
        }
        WeightForm::Exp { a, r } => {
            if a == 0.0 || r == 0.0 {
                BaseBehaviour::Constant(0.0)
            } else if r.abs() == 1.0 {
                BaseBehaviour::Constant(a * a)
            } else if r.abs() > 1.0 {
                BaseBehaviour::Divergent
            } else {
                BaseBehaviour::Geometric {
                    a2: a * a,
                    r2: r * r,
                }
            }
        }
        WeightForm::Prefixed { .. } => unreachable!("split_weights strips prefixes"),
    }
}

/// `Σ_{i ∈ positions} |w_i|²` over an infinite position set.
fn series_mass(w: &WeightForm, positions: Positions) -> Result<Bound> {
    let (explicit_end, base) = split_weights(w);
    let head: f64 = positions
        .up_to(explicit_end)
        .into_iter()
        .map(|i| w.eval(i).powi(2))
        .sum();
    let rest = positions.first_after(explicit_end);
    let tail = match (base_behaviour(base), rest) {
        (BaseBehaviour::Constant(v), _) => {
            if v == 0.0 {
                Bound::Finite(0.0)
            } else {
                Bound::Infinite
            }
        }
        (BaseBehaviour::Divergent, _) => Bound::Infinite,
        (BaseBehaviour::Geometric { a2, r2 }, Positions::Arithmetic { start, step }) => {
            Bound::Finite(a2 * r2.powi(start as i32) / (1.0 - r2.powi(step as i32)))
        }
        (BaseBehaviour::PowerDecay { two_p, .. }, Positions::Arithmetic { .. }) if two_p >= -1.0 => {
            Bound::Infinite
        }
        // positions grow quadratically, so terms behave like b^{4p}
        (BaseBehaviour::PowerDecay { two_p, .. }, Positions::Triangular { .. })
            if 2.0 * two_p >= -1.0 =>
        {
            Bound::Infinite
        }
        (BaseBehaviour::Geometric { .. }, Positions::Triangular { .. }) => {
            return Err(Error::UnsupportedFamily(
                "geometric weights over the triangular pattern converge without a closed form"
                    .into(),
            ))
        }
        (BaseBehaviour::PowerDecay { .. }, _) => {
            return Err(Error::UnsupportedFamily(
                "a convergent power series of weights has no closed form here".into(),
            ))
        }
    };
    Ok(Bound::Finite(head) + tail)
}

fn weighted_mass(map: &IndexMap, w: &WeightForm, k: usize) -> Result<Bound> {
    let pre = preimage(map, k, 0);
    let finite: f64 = pre.finite.iter().map(|&i| w.eval(i).powi(2)).sum();
    let infinite = match pre.infinite {
        Some(p) => series_mass(w, p)?,
        None => Bound::Finite(0.0),
    };
    Ok(Bound::Finite(finite) + infinite)
}

fn anchored_mass(anchor: usize, k: usize) -> Bound {
    if k == anchor {
        Bound::Infinite
    } else {
        Bound::Finite(1.0)
    }
}

/// First position from which `|w_i|²` is monotone.
pub(crate) fn weights_monotone_from(w: &WeightForm) -> Result<usize> {
    Ok(match *w {
        WeightForm::Constant { .. } | WeightForm::Exp { .. } => 1,
        WeightForm::Poly { a, p, b } => {
            let q = -b / a;
            if a == 0.0 || p == 0.0 || q <= 0.0 {
                1
            } else {
                // |a i^p + b| decreases up to the root and increases after it
                let root = q.powf(1.0 / p);
                if !root.is_finite() || root > MAX_EXPLICIT_INDEX as f64 {
                    return Err(Error::UnsupportedFamily(format!(
                        "weight sign change near position {root:e} is beyond the analysable range"
                    )));
                }
                (root.ceil() as usize).max(1)
            }
        }
        WeightForm::Prefixed {
            ref prefix,
            ref tail,
        } => weights_monotone_from(tail)?.max(prefix.len() + 1),
    })
}

/// `lim_i |w_i|²`.
pub(crate) fn weights_limit(w: &WeightForm) -> Bound {
    match *w {
        WeightForm::Constant { c } => Bound::Finite(c * c),
        WeightForm::Poly { a, p, b } => {
            if a == 0.0 {
                Bound::Finite(b * b)
            } else if p > 0.0 {
                Bound::Infinite
            } else if p < 0.0 {
                Bound::Finite(b * b)
            } else {
                Bound::Finite((a + b) * (a + b))
            }
        }
        WeightForm::Exp { a, r } => {
            if a == 0.0 || r.abs() < 1.0 {
                Bound::Finite(0.0)
            } else if r.abs() == 1.0 {
                Bound::Finite(a * a)
            } else {
                Bound::Infinite
            }
        }
        WeightForm::Prefixed { ref tail, .. } => weights_limit(tail),
    }
}

fn scale_bound(b: Bound, t: usize) -> Bound {
    match b {
        Bound::Finite(x) => Bound::Finite(x * t as f64),
        Bound::Infinite => Bound::Infinite,
    }
}

/// Where the masses become monotone (or uniform), for a map whose position
/// `i` sits at absolute position `offset + i`.
fn tail_shape(map: &IndexMap, w: &WeightForm, offset: usize) -> Result<MassTail> {
    let i0 = weights_monotone_from(w)?;
    let limit = weights_limit(w);
    // smallest k with offset + g(k) >= i0, for an increasing position map g
    let first_k = |g: &dyn Fn(usize) -> usize| -> usize {
        (1..)
            .find(|&k| offset + g(k) >= i0)
            .expect("positions are unbounded")
    };
    Ok(match map {
        IndexMap::Identity => MassTail::Monotone {
            from: first_k(&|k| k),
            limit,
        },
        IndexMap::Repeated { times } => MassTail::Monotone {
            from: first_k(&|k| (k - 1) * times + 1),
            limit: scale_bound(limit, *times),
        },
        IndexMap::Alternating { anchor } => MassTail::Monotone {
            from: first_k(&|k| 2 * k.saturating_sub(1)).max(anchor + 1),
            limit,
        },
        IndexMap::Triangular => {
            let (explicit_end, base) = split_weights(w);
            // first position of e_k is offset + k(k+1)/2
            let from = (1..)
                .find(|&k| offset + k * (k + 1) / 2 > explicit_end)
                .expect("positions are unbounded");
            let value = match base_behaviour(base) {
                BaseBehaviour::Constant(0.0) => Bound::Finite(0.0),
                _ => Bound::Infinite,
            };
            MassTail::Uniform { from, value }
        }
        IndexMap::Prefixed { prefix, tail } => {
            let inner = tail_shape(tail, w, offset + prefix.len())?;
            let past_prefix = prefix.iter().copied().max().unwrap_or(0) + 1;
            match inner {
                MassTail::Monotone { from, limit } => MassTail::Monotone {
                    from: from.max(past_prefix),
                    limit,
                },
                MassTail::Uniform { from, value } => MassTail::Uniform {
                    from: from.max(past_prefix),
                    value,
                },
            }
        }
    })
}

/// Decides `W_k` for every `k` and derives the domain flags.
pub fn domain_profile(s: &StructuredSequence) -> Result<DomainProfile> {
    match s {
        StructuredSequence::WeightedOnb { index_map, weights } => {
            weighted_profile(s, index_map, weights)
        }
        StructuredSequence::AnchoredOnb { anchor } => Ok(anchored_profile(s, *anchor)),
    }
}

fn weighted_profile(
    family: &StructuredSequence,
    map: &IndexMap,
    w: &WeightForm,
) -> Result<DomainProfile> {
    let tail = tail_shape(map, w, 0)?;
    let from = tail.from();
    if from > MAX_EXPLICIT_INDEX {
        return Err(Error::UnsupportedFamily(format!(
            "masses only settle from index {from}, beyond the analysable range"
        )));
    }
    let masses = (1..=from)
        .map(|k| weighted_mass(map, w, k))
        .collect::<Result<Vec<_>>>()?;
    if let MassTail::Uniform { value, .. } = tail {
        debug_assert_eq!(masses[from - 1], value);
    }

    let infinite: BTreeSet<usize> = masses
        .iter()
        .enumerate()
        .filter(|(_, m)| !m.is_finite())
        .map(|(k, _)| k + 1)
        .collect();
    let tail_infinite = matches!(
        tail,
        MassTail::Uniform {
            value: Bound::Infinite,
            ..
        }
    );
    let hil_psi_support = if tail_infinite {
        Support::Only(
            (1..from)
                .filter(|&k| masses[k - 1].is_finite())
                .collect(),
        )
    } else if infinite.is_empty() {
        Support::All
    } else {
        Support::AllExcept(infinite.clone())
    };
    let densely_defined = infinite.is_empty() && !tail_infinite;

    let mut notes = Vec::new();
    match tail {
        MassTail::Monotone { from, limit } => notes.push(format!(
            "W_k is finite and monotone for k >= {from} with limit {limit}"
        )),
        MassTail::Uniform { from, value } => {
            notes.push(format!("W_k = {value} for every k >= {from}"))
        }
    }
    if !infinite.is_empty() {
        notes.push(format!(
            "infinitely many elements land on e_k for k in {infinite:?}; those coordinates vanish on dom(C)"
        ));
    }

    let mut profile = DomainProfile {
        family: family.clone(),
        masses,
        tail,
        hil_psi_support,
        analysis_densely_defined: densely_defined,
        synthesis_closable: densely_defined,
        frame_operator_closable_on_h: false,
        notes,
    };
    // S acts diagonally with the finite masses on dom(S); it is treated as
    // closable exactly when it is bounded there.
    let bounded = match profile.sup_finite_mass() {
        None => true,
        Some(b) => b.is_finite(),
    };
    profile.frame_operator_closable_on_h = bounded;
    profile.notes.push(if bounded {
        "frame operator is bounded on its domain".to_string()
    } else {
        "frame operator is unbounded on its domain (finite masses are unbounded); flagged not closable"
            .to_string()
    });
    Ok(profile)
}

fn anchored_profile(family: &StructuredSequence, anchor: usize) -> DomainProfile {
    let masses = (1..=anchor + 1).map(|k| anchored_mass(anchor, k)).collect();
    DomainProfile {
        family: family.clone(),
        masses,
        tail: MassTail::Uniform {
            from: anchor + 1,
            value: Bound::Finite(1.0),
        },
        hil_psi_support: Support::AllExcept(BTreeSet::from([anchor])),
        analysis_densely_defined: false,
        synthesis_closable: false,
        frame_operator_closable_on_h: false,
        notes: vec![
            format!("every element has coordinate 1 at e_{anchor}, so dom(C) = {{f : f_{anchor} = 0}}"),
            format!(
                "on dom(C), S f = f + (sum_i f_i) e_{anchor}; unit mass spread over n coordinates \
                 tends to 0 while S maps it near e_{anchor}, so S is not closable"
            ),
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn weighted(map: IndexMap, w: WeightForm) -> StructuredSequence {
        StructuredSequence::weighted(map, w).unwrap()
    }

    fn one_plus_i() -> WeightForm {
        WeightForm::Poly {
            a: 1.0,
            p: 1.0,
            b: 1.0,
        }
    }

    const ONE: WeightForm = WeightForm::Constant { c: 1.0 };

    #[test]
    fn growing_weights_profile() {
        let p = domain_profile(&weighted(IndexMap::Identity, one_plus_i())).unwrap();
        for k in 1..50 {
            assert_eq!(p.mass(k), Bound::Finite(((1 + k) * (1 + k)) as f64));
        }
        assert!(p.analysis_densely_defined);
        assert!(p.synthesis_closable);
        assert!(!p.frame_operator_closable_on_h);
        assert_eq!(p.hil_psi_support, Support::All);
        assert_eq!(p.inf_mass(), Bound::Finite(4.0));
        assert_eq!(p.sup_mass(), Bound::Infinite);
    }

    #[test]
    fn round_robin_profile() {
        let p = domain_profile(&weighted(IndexMap::Alternating { anchor: 1 }, ONE)).unwrap();
        assert_eq!(p.mass(1), Bound::Infinite);
        for k in 2..40 {
            assert_eq!(p.mass(k), Bound::Finite(1.0));
        }
        assert_eq!(p.hil_psi_support, Support::AllExcept(BTreeSet::from([1])));
        assert!(!p.analysis_densely_defined);
        assert!(!p.synthesis_closable);
        assert!(p.frame_operator_closable_on_h);
        assert_eq!(p.inf_finite_mass(), Some(1.0));
    }

    #[test]
    fn all_repeats_profile() {
        let p = domain_profile(&weighted(IndexMap::Triangular, ONE)).unwrap();
        for k in 1..30 {
            assert_eq!(p.mass(k), Bound::Infinite);
        }
        assert!(p.hil_psi_support.is_empty());
        assert!(p.hil_psi_support.within(100).is_empty());
        assert_eq!(p.inf_finite_mass(), None);
    }

    #[test]
    fn geometric_mass_on_anchor() {
        // odd positions: Σ_{t>=0} (0.5^{1+2t})² = 0.25 / (1 - 1/16)
        let p = domain_profile(&weighted(
            IndexMap::Alternating { anchor: 1 },
            WeightForm::Exp { a: 1.0, r: 0.5 },
        ))
        .unwrap();
        let expected = 0.25 / (1.0 - 0.0625);
        assert!((p.mass(1).finite().unwrap() - expected).abs() < 1e-15);
        assert!(p.analysis_densely_defined);
        assert_eq!(p.inf_mass(), Bound::Finite(0.0));
        assert!(!p.has_zero_mass());
    }

    #[test]
    fn geometric_mass_with_weight_prefix() {
        // positions 1, 3, 5, ... ; weight 3 at position 1, 0.5^i afterwards
        let w = WeightForm::Prefixed {
            prefix: vec![3.0, 7.0],
            tail: Box::new(WeightForm::Exp { a: 1.0, r: 0.5 }),
        };
        let p = domain_profile(&weighted(IndexMap::Alternating { anchor: 1 }, w)).unwrap();
        let brute: f64 = 9.0 + (1..200).map(|t| 0.5f64.powi(2 * (2 * t + 1))).sum::<f64>();
        assert!((p.mass(1).finite().unwrap() - brute).abs() < 1e-14);
        assert_eq!(p.mass(2), Bound::Finite(49.0));
    }

    #[test]
    fn repeated_masses_sum_blocks() {
        let p = domain_profile(&weighted(IndexMap::Repeated { times: 3 }, one_plus_i())).unwrap();
        // e_2 receives positions 4, 5, 6
        assert_eq!(p.mass(2), Bound::Finite(25.0 + 36.0 + 49.0));
        assert!(!p.frame_operator_closable_on_h);
        assert!(!StructuredSequence::weighted(IndexMap::Repeated { times: 3 }, ONE)
            .map(|s| match s {
                StructuredSequence::WeightedOnb { index_map, .. } => index_map.is_injective(),
                _ => true,
            })
            .unwrap());
    }

    #[test]
    fn sign_change_moves_the_monotone_start() {
        // w_i = i - 4.5 : |w| decreases until i = 5
        let w = WeightForm::Poly {
            a: 1.0,
            p: 1.0,
            b: -4.5,
        };
        assert_eq!(weights_monotone_from(&w).unwrap(), 5);
        let p = domain_profile(&weighted(IndexMap::Identity, w)).unwrap();
        assert_eq!(p.inf_mass(), Bound::Finite(0.25));
        for k in 1..20 {
            let x = k as f64 - 4.5;
            assert_eq!(p.mass(k), Bound::Finite(x * x));
        }
    }

    #[test]
    fn zero_weights_give_zero_mass() {
        let w = WeightForm::Prefixed {
            prefix: vec![1.0, 0.0],
            tail: Box::new(ONE),
        };
        let p = domain_profile(&weighted(IndexMap::Identity, w)).unwrap();
        assert!(p.has_zero_mass());
        assert_eq!(p.inf_mass(), Bound::Finite(0.0));
    }

    #[test]
    fn convergent_power_series_is_unsupported() {
        let w = WeightForm::Poly {
            a: 1.0,
            p: -1.0,
            b: 0.0,
        };
        let err = domain_profile(&weighted(IndexMap::Alternating { anchor: 1 }, w)).unwrap_err();
        assert!(matches!(err, Error::UnsupportedFamily(_)));
        // the divergent one is decided
        let w = WeightForm::Poly {
            a: 1.0,
            p: -0.5,
            b: 0.0,
        };
        let p = domain_profile(&weighted(IndexMap::Alternating { anchor: 1 }, w)).unwrap();
        assert_eq!(p.mass(1), Bound::Infinite);
    }

    #[test]
    fn triangular_with_vanishing_tail_is_finite() {
        let w = WeightForm::Prefixed {
            prefix: vec![1.0, 2.0, 3.0],
            tail: Box::new(WeightForm::Constant { c: 0.0 }),
        };
        let p = domain_profile(&weighted(IndexMap::Triangular, w)).unwrap();
        // positions 1,2,3 -> e1,e1,e2
        assert_eq!(p.mass(1), Bound::Finite(5.0));
        assert_eq!(p.mass(2), Bound::Finite(9.0));
        assert_eq!(p.mass(3), Bound::Finite(0.0));
        assert_eq!(p.mass(50), Bound::Finite(0.0));
        assert_eq!(p.hil_psi_support, Support::All);
    }

    #[test]
    fn prefixed_map_profile() {
        let map = IndexMap::Prefixed {
            prefix: vec![3, 3],
            tail: Box::new(IndexMap::Identity),
        };
        let p = domain_profile(&weighted(map, ONE)).unwrap();
        assert_eq!(p.mass(3), Bound::Finite(3.0));
        assert_eq!(p.mass(1), Bound::Finite(1.0));
        assert_eq!(p.mass(10), Bound::Finite(1.0));
        assert_eq!(p.sup_mass(), Bound::Finite(3.0));
    }

    #[test]
    fn anchored_profile_flags() {
        let p = domain_profile(&StructuredSequence::anchored(2).unwrap()).unwrap();
        assert_eq!(p.mass(2), Bound::Infinite);
        assert_eq!(p.mass(1), Bound::Finite(1.0));
        assert_eq!(p.mass(7), Bound::Finite(1.0));
        assert_eq!(p.hil_psi_support, Support::AllExcept(BTreeSet::from([2])));
        assert!(!p.analysis_densely_defined);
        assert!(!p.synthesis_closable);
        assert!(!p.frame_operator_closable_on_h);
    }
}
