//! Virasoro normal ordering on highest-weight modules.
//!
//! A word `[n_1, …, n_t]` stands for `L[n_1]⋯L[n_t]v` with `L[n_t]` applied
//! first. Canonical words have strictly negative modes sorted with the most
//! negative first, e.g. `[-3, -2, -2, -1]`; on the vacuum module the mode `-1`
//! never survives in a canonical word because `L[-1]1 = 0`.

mod trace;

pub use trace::{
    canonical_words, compute_nl, descendant_zpoint, partial_ideal_member, vacuum_zpoint,
    HWSeed, IdealDecomposition, IdealPart,
};

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qseries::{frac, int};

/// Word-to-coefficient map without zero coefficients.
pub type WordSum = BTreeMap<Vec<i64>, BigRational>;

/// Highest-weight data: `L[0]v = hv`, `L[n]v = 0` for `n > 0`, and for the
/// vacuum additionally `L[-1]v = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HighestWeight {
    pub h: BigRational,
    pub c: BigRational,
    pub vacuum: bool,
}

impl HighestWeight {
    /// The vacuum `1` at `c = 24`.
    pub fn vacuum() -> Self {
        HighestWeight { h: BigRational::zero(), c: int(24), vacuum: true }
    }

    /// A non-vacuum highest-weight vector of weight `h` at `c = 24`.
    pub fn primary(h: BigRational) -> Self {
        HighestWeight { h, c: int(24), vacuum: false }
    }

    pub fn with_central_charge(mut self, c: BigRational) -> Self {
        self.c = c;
        self
    }
}

/// Weight added by a word: `Σ -n_i`.
pub fn word_weight(word: &[i64]) -> i64 {
    -word.iter().sum::<i64>()
}

pub(crate) fn add_scaled(acc: &mut WordSum, word: Vec<i64>, c: BigRational) {
    if c.is_zero() {
        return;
    }
    match acc.entry(word) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// Linear combination of canonical words applied to one highest-weight vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VirCombo {
    hw: HighestWeight,
    terms: WordSum,
}

#[derive(Serialize)]
struct ComboTermJson {
    word: Vec<i64>,
    coeff: String,
}

impl VirCombo {
    pub fn zero(hw: HighestWeight) -> Self {
        VirCombo { hw, terms: WordSum::new() }
    }

    /// The highest-weight vector itself.
    pub fn vector(hw: HighestWeight) -> Self {
        let mut terms = WordSum::new();
        terms.insert(Vec::new(), BigRational::one());
        VirCombo { hw, terms }
    }

    pub fn highest_weight(&self) -> &HighestWeight {
        &self.hw
    }

    pub fn terms(&self) -> &WordSum {
        &self.terms
    }

    pub fn coeff(&self, word: &[i64]) -> BigRational {
        self.terms.get(word).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn sub(&self, other: &VirCombo) -> VirCombo {
        let mut terms = self.terms.clone();
        for (w, c) in &other.terms {
            add_scaled(&mut terms, w.clone(), -c.clone());
        }
        VirCombo { hw: self.hw.clone(), terms }
    }

    pub fn scale(&self, r: &BigRational) -> VirCombo {
        let mut terms = WordSum::new();
        for (w, c) in &self.terms {
            add_scaled(&mut terms, w.clone(), c * r);
        }
        VirCombo { hw: self.hw.clone(), terms }
    }

    /// `[{"word": [...], "coeff": "p/q"}, …]` in word order.
    pub fn to_json_string(&self) -> String {
        let v: Vec<ComboTermJson> = self
            .terms
            .iter()
            .map(|(w, c)| ComboTermJson { word: w.clone(), coeff: c.to_string() })
            .collect();
        serde_json::to_string(&v).expect("serializable")
    }
}

/// Memoized action of single modes on canonical words.
pub(crate) struct Normalizer {
    hw: HighestWeight,
    cache: HashMap<(i64, Vec<i64>), WordSum>,
}

impl Normalizer {
    pub(crate) fn new(hw: HighestWeight) -> Self {
        Normalizer { hw, cache: HashMap::new() }
    }

    /// `L[m]` applied to the canonical word `w`, as a canonical combination.
    fn apply(&mut self, m: i64, w: &[i64]) -> WordSum {
        let mut out = WordSum::new();
        if m == 0 {
            add_scaled(&mut out, w.to_vec(), &self.hw.h + int(word_weight(w)));
            return out;
        }
        let Some(&a1) = w.first() else {
            if m < 0 && !(m == -1 && self.hw.vacuum) {
                out.insert(vec![m], BigRational::one());
            }
            return out;
        };
        if m < 0 && m <= a1 {
            let mut v = Vec::with_capacity(w.len() + 1);
            v.push(m);
            v.extend_from_slice(w);
            out.insert(v, BigRational::one());
            return out;
        }
        if let Some(hit) = self.cache.get(&(m, w.to_vec())) {
            return hit.clone();
        }
        let rest = &w[1..];
        // L[m]L[a1] = L[a1]L[m] + (m - a1)L[m + a1] + central term
        for (word, c) in self.apply(m, rest) {
            for (word2, c2) in self.apply(a1, &word) {
                add_scaled(&mut out, word2, &c * c2);
            }
        }
        if m != a1 {
            let k = int(m - a1);
            for (word, c) in self.apply(m + a1, rest) {
                add_scaled(&mut out, word, &k * c);
            }
        }
        if m + a1 == 0 {
            let central = &self.hw.c * frac(m * m * m - m, 12);
            add_scaled(&mut out, rest.to_vec(), central);
        }
        self.cache.insert((m, w.to_vec()), out.clone());
        out
    }

    /// Applies an arbitrary word to a canonical combination.
    pub(crate) fn apply_word(&mut self, word: &[i64], input: &WordSum) -> WordSum {
        let mut cur = input.clone();
        for &m in word.iter().rev() {
            let mut next = WordSum::new();
            for (w, c) in &cur {
                for (w2, c2) in self.apply(m, w) {
                    add_scaled(&mut next, w2, c * c2);
                }
            }
            cur = next;
        }
        cur
    }

    pub(crate) fn order_word(&mut self, word: &[i64]) -> WordSum {
        let mut start = WordSum::new();
        start.insert(Vec::new(), BigRational::one());
        self.apply_word(word, &start)
    }
}

/// Canonical form of `L[n_1]⋯L[n_t]v` using the Virasoro relations
/// `[L_m, L_n] = (m - n)L_{m+n} + (c/12)(m^3 - m)δ_{m+n,0}` and the
/// highest-weight conditions.
pub fn normal_order(word: &[i64], hw: &HighestWeight) -> VirCombo {
    let mut n = Normalizer::new(hw.clone());
    let terms = n.order_word(word);
    VirCombo { hw: hw.clone(), terms }
}

/// `L[m]` applied to every word of `combo`.
pub fn apply_mode(m: i64, combo: &VirCombo) -> VirCombo {
    let mut n = Normalizer::new(combo.hw.clone());
    let terms = n.apply_word(&[m], &combo.terms);
    VirCombo { hw: combo.hw.clone(), terms }
}

/// Rewrites a word with nonpositive modes as a combination of words whose
/// negative modes are only `-1` and `-2`, via `(n - 2)L[-n] = [L[-1], L[-n+1]]`
/// for `n ≥ 3`. The resulting words are not normal ordered.
pub fn reduce_word(word: &[i64]) -> Result<WordSum> {
    if let Some(&m) = word.iter().find(|&&m| m > 0) {
        return Err(Error::InvalidArgument(format!(
            "reduce_word needs nonpositive modes, found {m}"
        )));
    }
    let mut out = WordSum::new();
    reduce_into(word.to_vec(), BigRational::one(), &mut out);
    Ok(out)
}

fn reduce_into(word: Vec<i64>, coeff: BigRational, out: &mut WordSum) {
    let Some(i) = word.iter().position(|&m| m <= -3) else {
        add_scaled(out, word, coeff);
        return;
    };
    let n = -word[i];
    let c = coeff * frac(1, n - 2);
    let splice = |pair: [i64; 2]| {
        let mut w = Vec::with_capacity(word.len() + 1);
        w.extend_from_slice(&word[..i]);
        w.extend_from_slice(&pair);
        w.extend_from_slice(&word[i + 1..]);
        w
    };
    reduce_into(splice([-1, 1 - n]), c.clone(), out);
    reduce_into(splice([1 - n, -1]), -c, out);
}

/// Normal ordered value of a (non-canonical) word combination.
pub fn normal_order_sum(sum: &WordSum, hw: &HighestWeight) -> VirCombo {
    let mut n = Normalizer::new(hw.clone());
    let mut terms = WordSum::new();
    for (w, c) in sum {
        for (w2, c2) in n.order_word(w) {
            add_scaled(&mut terms, w2, c * c2);
        }
    }
    VirCombo { hw: hw.clone(), terms }
}
