//! 1-point functions of Virasoro descendants.
//!
//! For a highest-weight vector `v` with known `Z(v, τ)` the traces of its
//! descendants follow from
//!
//! - `Z(L[-1]w) = 0`,
//! - `Z(L[-2]w) = ∂_{wt w} Z(w) + Σ_{l≥2} E_{2l} Z(L[2l-2]w)`,
//!
//! after rewriting every word in terms of `L[-1]` and `L[-2]` only.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::Zero;

use super::{reduce_word, word_weight, HighestWeight, Normalizer, WordSum};
use crate::error::{Error, Result};
use crate::linalg;
use crate::modular::{eisenstein, j_function, r64, serre_derive, serre_iterate, space_basis, SpaceKind};
use crate::qseries::{int, RationalSeries};

/// A highest-weight vector of weight `weight` together with its 1-point function.
#[derive(Clone, Debug)]
pub struct HWSeed {
    pub weight: i64,
    pub vacuum: bool,
    pub series: RationalSeries,
}

impl HWSeed {
    /// The vacuum, whose 1-point function is the normalized `J`.
    pub fn vacuum(order: i64) -> Result<Self> {
        Ok(HWSeed { weight: 0, vacuum: true, series: j_function(order)? })
    }

    pub fn primary(weight: i64, series: RationalSeries) -> Self {
        HWSeed { weight, vacuum: false, series }
    }

    fn highest_weight(&self) -> HighestWeight {
        if self.vacuum {
            HighestWeight::vacuum()
        } else {
            HighestWeight::primary(int(self.weight))
        }
    }
}

struct TraceEngine<'a> {
    seed: &'a HWSeed,
    seed_series: RationalSeries,
    order: i64,
    normalizer: Normalizer,
    eisenstein: HashMap<i64, RationalSeries>,
    memo: HashMap<Vec<i64>, RationalSeries>,
}

impl<'a> TraceEngine<'a> {
    fn new(seed: &'a HWSeed, order: i64) -> Result<Self> {
        let available = seed.series.order();
        if let Some(avail) = available {
            if avail < r64(order) {
                return Err(Error::InsufficientOrder { needed: r64(order), available: avail });
            }
        }
        Ok(TraceEngine {
            seed,
            seed_series: seed.series.truncate(r64(order)),
            order,
            normalizer: Normalizer::new(seed.highest_weight()),
            eisenstein: HashMap::new(),
            memo: HashMap::new(),
        })
    }

    fn eis(&mut self, k: i64) -> Result<RationalSeries> {
        if let Some(e) = self.eisenstein.get(&k) {
            return Ok(e.clone());
        }
        // The seed has valuation at least -1, so one extra term suffices.
        let e = eisenstein(k, self.order + 2)?;
        self.eisenstein.insert(k, e.clone());
        Ok(e)
    }

    fn zero(&self) -> RationalSeries {
        RationalSeries::zero_to(r64(self.order))
    }

    /// `Z` of a canonical combination.
    fn combo(&mut self, sum: &WordSum) -> Result<RationalSeries> {
        let mut acc = self.zero();
        for (w, c) in sum {
            let reduced = reduce_word(w)?;
            for (rw, rc) in &reduced {
                let z = self.reduced(rw)?;
                acc = acc.add(&z.scale(&(c * rc)));
            }
        }
        Ok(acc)
    }

    /// `Z` of a word built from `L[-1]` and `L[-2]` only.
    fn reduced(&mut self, w: &[i64]) -> Result<RationalSeries> {
        let Some(&first) = w.first() else {
            return Ok(self.seed_series.clone());
        };
        if first == -1 {
            return Ok(self.zero());
        }
        if let Some(z) = self.memo.get(w) {
            return Ok(z.clone());
        }
        debug_assert_eq!(first, -2);
        let x = &w[1..];
        let depth = word_weight(x);
        let zx = self.reduced(x)?;
        let mut out = serre_derive(&zx, self.seed.weight + depth)?;
        let mut l = 2;
        while 2 * l - 2 <= depth {
            let mut shifted = vec![2 * l - 2];
            shifted.extend_from_slice(x);
            let nf = self.normalizer.order_word(&shifted);
            if !nf.is_empty() {
                let z = self.combo(&nf)?;
                let e = self.eis(2 * l)?;
                out = out.add(&e.mul(&z));
            }
            l += 1;
        }
        let out = out.truncate(r64(self.order));
        self.memo.insert(w.to_vec(), out.clone());
        Ok(out)
    }
}

/// 1-point function of `word` applied to the seed's highest-weight vector,
/// known below `q^order`.
pub fn descendant_zpoint(word: &[i64], seed: &HWSeed, order: i64) -> Result<RationalSeries> {
    if let Some(&m) = word.iter().find(|&&m| m > 0) {
        return Err(Error::InvalidArgument(format!(
            "descendant words need nonpositive modes, found {m}"
        )));
    }
    let mut engine = TraceEngine::new(seed, order)?;
    let nf = engine.normalizer.order_word(word);
    engine.combo(&nf)
}

/// The scalar `n_l` with `L[2l-2]L[-2]^{k-1}1 = n_l L[-2]^{k-l}1` at `c = 24`;
/// zero when `l > k`.
pub fn compute_nl(k: i64, l: i64) -> Result<BigRational> {
    if k < 1 || l < 1 {
        return Err(Error::InvalidArgument(format!("n_l needs k, l ≥ 1, got k={k}, l={l}")));
    }
    if l > k {
        return Ok(BigRational::zero());
    }
    let mut word = vec![2 * l - 2];
    word.extend(std::iter::repeat_n(-2, (k - 1) as usize));
    let nf = super::normal_order(&word, &HighestWeight::vacuum());
    let target = vec![-2; (k - l) as usize];
    if nf.terms().keys().any(|w| *w != target) {
        return Err(Error::RouteMismatch(format!(
            "L[{}]L[-2]^{} 1 is not a multiple of L[-2]^{} 1",
            2 * l - 2,
            k - 1,
            k - l
        )));
    }
    Ok(nf.coeff(&target))
}

/// `Z(L[-2]^k 1)` by the vacuum recursion
/// `Z_k = q·dZ_{k-1}/dq + Σ_{l=1}^{k} n_l E_{2l} Z_{k-l}`, seeded with `J`.
pub fn vacuum_zpoint(k: i64, order: i64) -> Result<RationalSeries> {
    if k < 0 {
        return Err(Error::InvalidArgument(format!("k must be nonnegative, got {k}")));
    }
    let target = r64(order);
    let mut zs = vec![j_function(order)?];
    let eis: Vec<RationalSeries> = (1..=k)
        .map(|l| eisenstein(2 * l, order + 2))
        .collect::<Result<_>>()?;
    for j in 1..=k {
        let mut z = zs[(j - 1) as usize].q_derive();
        for l in 1..=j {
            let n = compute_nl(j, l)?;
            if n.is_zero() {
                continue;
            }
            let term = eis[(l - 1) as usize].mul(&zs[(j - l) as usize]).scale(&n);
            z = z.add(&term);
        }
        zs.push(z.truncate(target));
    }
    Ok(zs.pop().expect("nonempty"))
}

/// Canonical words adding exactly `weight` to a highest-weight vector.
/// On the vacuum the mode `-1` is excluded.
pub fn canonical_words(weight: i64, vacuum: bool) -> Vec<Vec<i64>> {
    fn go(rem: i64, max_part: i64, min_part: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if rem == 0 {
            out.push(cur.iter().map(|&p| -p).collect());
            return;
        }
        for p in (min_part..=max_part.min(rem)).rev() {
            cur.push(p);
            go(rem - p, p, min_part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if weight >= 0 {
        let min_part = if vacuum { 2 } else { 1 };
        go(weight, weight.max(0), min_part, &mut Vec::new(), &mut out);
    }
    out
}

/// One block `Σ_b c_b · b · ∂^{(j)}(gen)` with `b` running over the
/// `M_{weight}` basis.
#[derive(Clone, Debug, PartialEq)]
pub struct IdealPart {
    pub derivative: usize,
    pub weight: i64,
    pub labels: Vec<String>,
    pub coeffs: Vec<BigRational>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdealDecomposition {
    pub parts: Vec<IdealPart>,
}

/// Tries to write `f` as `Σ_j m_j ∂^{(j)}(gen)` with `m_j ∈ M_{target - gw - 2j}`,
/// exactly below the smaller truncation order. Returns `None` if no such
/// combination matches; a match certifies membership only to that order.
///
/// Odd weights are accepted: the holomorphic spaces there are trivial, so only
/// the zero series decomposes.
pub fn partial_ideal_member(
    f: &RationalSeries,
    gen: &RationalSeries,
    gen_weight: i64,
    target_weight: i64,
    order: i64,
) -> Result<Option<IdealDecomposition>> {
    let bound = r64(order);
    for s in [f, gen] {
        if let Some(o) = s.order() {
            if o < bound {
                return Err(Error::InsufficientOrder { needed: bound, available: o });
            }
        }
    }
    let f = f.truncate(bound);
    let mut columns: Vec<RationalSeries> = Vec::new();
    let mut blocks: Vec<(usize, i64, Vec<String>)> = Vec::new();
    let mut j = 0usize;
    loop {
        let w = target_weight - gen_weight - 2 * j as i64;
        if w < 0 {
            break;
        }
        if w % 2 == 0 {
            let space = space_basis(SpaceKind::M, w, order + 1)?;
            if space.dim() > 0 {
                let dj = serre_iterate(&gen.truncate(bound), gen_weight, j)?;
                for b in &space.basis {
                    columns.push(b.mul(&dj).truncate(bound));
                }
                blocks.push((j, w, space.labels.clone()));
            }
        }
        j += 1;
    }
    let mut all: Vec<&RationalSeries> = columns.iter().collect();
    all.push(&f);
    let exps = linalg::support_below(&all, bound);
    let b: Vec<BigRational> = exps.iter().map(|&e| f.coeff(e).unwrap_or_else(|_| BigRational::zero())).collect();
    if columns.is_empty() {
        return Ok(b.iter().all(Zero::is_zero).then(|| IdealDecomposition { parts: Vec::new() }));
    }
    let refs: Vec<&RationalSeries> = columns.iter().collect();
    let a = linalg::coefficient_matrix(&refs, &exps);
    let Some(x) = linalg::solve(&a, &b, refs.len()) else {
        return Ok(None);
    };
    let mut parts = Vec::new();
    let mut idx = 0;
    for (derivative, weight, labels) in blocks {
        let n = labels.len();
        parts.push(IdealPart { derivative, weight, labels, coeffs: x[idx..idx + n].to_vec() });
        idx += n;
    }
    Ok(Some(IdealDecomposition { parts }))
}

impl IdealDecomposition {
    /// Rebuilds `Σ_j m_j ∂^{(j)}(gen)` below `q^order`.
    pub fn evaluate(&self, gen: &RationalSeries, gen_weight: i64, order: i64) -> Result<RationalSeries> {
        let bound = r64(order);
        let mut acc = RationalSeries::zero_to(bound);
        for part in &self.parts {
            let space = space_basis(SpaceKind::M, part.weight, order + 1)?;
            let dj = serre_iterate(&gen.truncate(bound), gen_weight, part.derivative)?;
            for (b, c) in space.basis.iter().zip(&part.coeffs) {
                acc = acc.add(&b.mul(&dj).scale(c));
            }
        }
        Ok(acc.truncate(bound))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::{delta, fit, j_function};
    use crate::qseries::frac;
    use num_traits::Signed;

    #[test]
    fn l_minus1_descendant_vanishes() {
        let seed = HWSeed::vacuum(8).unwrap();
        assert!(descendant_zpoint(&[-1], &seed, 6).unwrap().is_zero());
        let cusp = HWSeed::primary(12, delta(8));
        assert!(descendant_zpoint(&[-1], &cusp, 6).unwrap().is_zero());
        assert!(descendant_zpoint(&[-2, -1], &cusp, 6).unwrap().is_zero());
    }

    #[test]
    fn empty_word_returns_seed() {
        let seed = HWSeed::vacuum(8).unwrap();
        assert_eq!(descendant_zpoint(&[], &seed, 8).unwrap(), j_function(8).unwrap());
    }

    #[test]
    fn l_minus2_on_vacuum_is_q_derivative() {
        let seed = HWSeed::vacuum(8).unwrap();
        let z = descendant_zpoint(&[-2], &seed, 6).unwrap();
        assert_eq!(z, j_function(6).unwrap().q_derive());
        assert_eq!(z.coeff_at(-1).unwrap(), int(-1));
        assert_eq!(z.coeff_at(1).unwrap(), int(196884));
    }

    #[test]
    fn insufficient_seed_order() {
        let seed = HWSeed::primary(12, delta(4));
        assert!(matches!(
            descendant_zpoint(&[-2], &seed, 6),
            Err(Error::InsufficientOrder { .. })
        ));
    }

    #[test]
    fn nl_examples() {
        assert_eq!(compute_nl(2, 2).unwrap(), int(12));
        assert_eq!(compute_nl(1, 1).unwrap(), int(0));
        assert_eq!(compute_nl(3, 5).unwrap(), int(0));
        // L[0] on L[-2]^{k-1}1 reads the weight 2(k-1)
        for k in 1..6 {
            assert_eq!(compute_nl(k, 1).unwrap(), int(2 * (k - 1)));
        }
        assert!(compute_nl(0, 1).is_err());
    }

    #[test]
    fn nl_positive_for_k_at_least_two() {
        for k in 2..=6 {
            for l in 1..=k {
                assert!(compute_nl(k, l).unwrap().is_positive(), "n_{l} at k={k}");
            }
        }
    }

    #[test]
    fn vacuum_routes_agree() {
        let order = 6;
        let seed = HWSeed::vacuum(order).unwrap();
        for k in 0..=4 {
            let word = vec![-2; k as usize];
            assert_eq!(
                vacuum_zpoint(k, order).unwrap(),
                descendant_zpoint(&word, &seed, order).unwrap(),
                "k={k}"
            );
        }
    }

    #[test]
    fn vacuum_traces_have_alternating_polar_sign() {
        for k in 0..=4 {
            let z = vacuum_zpoint(k, 5).unwrap();
            let (e, c) = z.leading().unwrap();
            assert_eq!(e, r64(-1));
            let signed = if k % 2 == 0 { c.clone() } else { -c.clone() };
            assert!(signed.is_positive(), "k={k}");
            assert!(z.coeff_at(0).unwrap().is_zero());
        }
    }

    #[test]
    fn vacuum_trace_lies_in_f() {
        let order = 8;
        for k in 0..=3 {
            let z = vacuum_zpoint(k, order).unwrap();
            let space = space_basis(SpaceKind::F, 2 * k, order).unwrap();
            assert!(fit(&z, &space).unwrap().is_some(), "k={k}");
        }
    }

    #[test]
    fn canonical_word_lists() {
        assert_eq!(canonical_words(0, false), vec![Vec::<i64>::new()]);
        assert_eq!(canonical_words(3, false), vec![vec![-3], vec![-2, -1], vec![-1, -1, -1]]);
        assert_eq!(canonical_words(4, true), vec![vec![-4], vec![-2, -2]]);
        assert_eq!(canonical_words(1, true), Vec::<Vec<i64>>::new());
    }

    #[test]
    fn ideal_examples() {
        let order = 12;
        let d = delta(order);
        let e4 = eisenstein(4, order).unwrap();
        let f = d.mul(&e4).truncate(r64(order));
        let dec = partial_ideal_member(&f, &d, 12, 16, order).unwrap().unwrap();
        // blocks for M_4·Δ and M_0·∂²Δ, the latter column vanishing
        assert_eq!(dec.parts.len(), 2);
        assert_eq!(dec.parts[0].coeffs, vec![int(1)]);
        assert_eq!(dec.parts[1].derivative, 2);
        assert_eq!(dec.evaluate(&d, 12, order).unwrap(), f);

        assert!(partial_ideal_member(&e4, &d, 12, 4, order).unwrap().is_none());

        let seed = HWSeed::primary(12, d.scale(&frac(3, 2)));
        let z = descendant_zpoint(&[-2], &seed, order).unwrap();
        assert!(partial_ideal_member(&z, &seed.series, 12, 14, order).unwrap().is_some());
    }

    #[test]
    fn ideal_rejects_outsider() {
        let order = 10;
        let d = delta(order);
        let j = j_function(order + 1).unwrap();
        let f = delta(order + 1).mul(&j).truncate(r64(order));
        // Δ·J is weight 12 but not a multiple of Δ by a weight-0 holomorphic form
        assert!(partial_ideal_member(&f, &d, 12, 12, order).unwrap().is_none());
    }
}
