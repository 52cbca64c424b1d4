use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::types::{Count, MeasureValue};

/// An exact probability mass function stored as counts.
///
/// Values map to the number of confusion pairs attaining them. Pairs whose
/// measure is undefined are counted in a separate bucket, and `total` always
/// equals the sum of both.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Pmf {
    entries: BTreeMap<Rational, Count>,
    undefined: Count,
    total: Count,
}

impl Pmf {
    pub fn new() -> Self {
        Pmf::default()
    }

    /// Builds a pmf from value counts and an undefined count. Zero counts are
    /// dropped.
    pub fn from_counts(
        entries: impl IntoIterator<Item = (Rational, Count)>,
        undefined: Count,
    ) -> Result<Self> {
        let mut pmf = Pmf::new();
        for (value, count) in entries {
            pmf.add_defined(value, count)?;
        }
        pmf.add_undefined(undefined)?;
        Ok(pmf)
    }

    pub fn add(&mut self, value: MeasureValue, count: Count) -> Result<()> {
        match value {
            MeasureValue::Defined(v) => self.add_defined(v, count),
            MeasureValue::Undefined => self.add_undefined(count),
        }
    }

    pub fn add_defined(&mut self, value: Rational, count: Count) -> Result<()> {
        if count == 0 {
            return Ok(());
        }
        self.total = checked_add(self.total, count)?;
        let slot = self.entries.entry(value).or_insert(0);
        *slot = checked_add(*slot, count)?;
        Ok(())
    }

    pub fn add_undefined(&mut self, count: Count) -> Result<()> {
        self.total = checked_add(self.total, count)?;
        self.undefined = checked_add(self.undefined, count)?;
        Ok(())
    }

    /// Pointwise addition of counts. Associative and commutative, so partial
    /// pmfs can be merged in any order.
    pub fn merge(&mut self, other: &Pmf) -> Result<()> {
        for (&v, &c) in &other.entries {
            self.add_defined(v, c)?;
        }
        self.add_undefined(other.undefined)
    }

    pub fn entries(&self) -> &BTreeMap<Rational, Count> {
        &self.entries
    }

    pub fn undefined_count(&self) -> Count {
        self.undefined
    }

    pub fn total(&self) -> Count {
        self.total
    }

    pub fn defined_count(&self) -> Count {
        self.total - self.undefined
    }

    /// Number of distinct defined values.
    pub fn unique_values(&self) -> usize {
        self.entries.len()
    }

    pub fn count_at(&self, value: Rational) -> Count {
        self.entries.get(&value).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    /// The pmf of the negated measure.
    pub fn mirrored(&self) -> Pmf {
        Pmf {
            entries: self.entries.iter().map(|(&v, &c)| (-v, c)).collect(),
            undefined: self.undefined,
            total: self.total,
        }
    }

    /// Whether `count(v) == count(-v)` for every value.
    pub fn is_symmetric(&self) -> bool {
        self.entries.iter().all(|(&v, &c)| self.count_at(-v) == c)
    }

    /// The first value `v` (ascending) where `count(v) != count(-v)`.
    pub fn asymmetry_witness(&self) -> Option<Rational> {
        self.entries
            .iter()
            .find(|(&v, &c)| self.count_at(-v) != c)
            .map(|(&v, _)| v)
    }

    /// `count(v) / total`.
    pub fn probability(&self, value: Rational) -> Result<Rational> {
        self.ratio_of(self.count_at(value), Denominator::All)
    }

    fn ratio_of(&self, count: Count, denominator: Denominator) -> Result<Rational> {
        let total = match denominator {
            Denominator::All => self.total,
            Denominator::Defined => self.defined_count(),
        };
        if total == 0 {
            return Err(Error::EmptyPmf);
        }
        Rational::from_counts(count, total)
    }
}

fn checked_add(a: Count, b: Count) -> Result<Count> {
    a.checked_add(b)
        .ok_or_else(|| Error::Overflow("pmf count exceeds 128 bits".into()))
}

/// Which pairs a probability is normalized by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Denominator {
    /// Every pair of the stratum, undefined ones included.
    #[default]
    All,
    /// Only pairs with a defined value.
    Defined,
}

impl std::str::FromStr for Denominator {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "all" => Ok(Denominator::All),
            "defined" => Ok(Denominator::Defined),
            _ => Err(format!(
                "unknown denominator {s:?} (expected all or defined)"
            )),
        }
    }
}

/// Probability that the measure equals exactly zero.
pub fn perfect_fairness_prob(pmf: &Pmf) -> Result<Rational> {
    perfect_fairness_prob_with(pmf, Denominator::All)
}

pub fn perfect_fairness_prob_with(pmf: &Pmf, denominator: Denominator) -> Result<Rational> {
    pmf.ratio_of(pmf.count_at(Rational::ZERO), denominator)
}

/// Probability that the measure is undefined.
pub fn undefined_prob(pmf: &Pmf) -> Result<Rational> {
    pmf.ratio_of(pmf.undefined, Denominator::All)
}

/// Total variation distance between two pmfs, treating the undefined bucket
/// as one more atom.
pub fn tv_distance(a: &Pmf, b: &Pmf) -> Result<Rational> {
    tv_distance_with(a, b, Denominator::All)
}

/// Total variation distance under the chosen normalization. With
/// [`Denominator::Defined`] the undefined atom is dropped and both pmfs are
/// renormalized over their defined values.
pub fn tv_distance_with(a: &Pmf, b: &Pmf, denominator: Denominator) -> Result<Rational> {
    let (ta, tb, undef_a, undef_b) = match denominator {
        Denominator::All => (a.total, b.total, a.undefined, b.undefined),
        Denominator::Defined => (a.defined_count(), b.defined_count(), 0, 0),
    };
    if ta == 0 || tb == 0 {
        return Err(Error::EmptyPmf);
    }
    // sum |ca/ta - cb/tb| = sum |ca*tb - cb*ta| / (ta*tb)
    let scale = |c: Count, t: Count| -> Result<Count> {
        c.checked_mul(t)
            .ok_or_else(|| Error::Overflow("total variation numerator".into()))
    };
    let mut sum: Count = scale(undef_a, tb)?.abs_diff(scale(undef_b, ta)?);
    let mut left = a.entries.iter().peekable();
    let mut right = b.entries.iter().peekable();
    loop {
        let (ca, cb) = match (left.peek(), right.peek()) {
            (None, None) => break,
            (Some((va, _)), Some((vb, _))) if va == vb => {
                (left.next().unwrap().1, right.next().unwrap().1)
            }
            (Some((va, _)), Some((vb, _))) if va < vb => (left.next().unwrap().1, &0),
            (Some(_), None) => (left.next().unwrap().1, &0),
            _ => (&0, right.next().unwrap().1),
        };
        sum = sum
            .checked_add(scale(*ca, tb)?.abs_diff(scale(*cb, ta)?))
            .ok_or_else(|| Error::Overflow("total variation sum".into()))?;
    }
    let den = ta
        .checked_mul(tb)
        .and_then(|d| d.checked_mul(2))
        .ok_or_else(|| Error::Overflow("total variation denominator".into()))?;
    Rational::from_counts(sum, den)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    fn pmf(entries: &[(i64, i64, Count)], undefined: Count) -> Pmf {
        Pmf::from_counts(entries.iter().map(|&(n, d, c)| (r(n, d), c)), undefined).unwrap()
    }

    #[test]
    fn conservation_and_merge() {
        let mut a = pmf(&[(-1, 1, 2), (0, 1, 4)], 1);
        let b = pmf(&[(0, 1, 1), (1, 1, 2)], 3);
        assert_eq!(a.total(), 7);
        a.merge(&b).unwrap();
        assert_eq!(a.total(), 13);
        assert_eq!(a.undefined_count(), 4);
        assert_eq!(a.count_at(Rational::ZERO), 5);
        assert_eq!(
            a.entries().values().sum::<Count>() + a.undefined_count(),
            a.total()
        );
    }

    #[test]
    fn overflow_is_an_error() {
        let mut a = pmf(&[(0, 1, Count::MAX)], 0);
        assert!(matches!(a.add_undefined(1), Err(Error::Overflow(_))));
    }

    #[test]
    fn probabilities() {
        let ae = pmf(&[(-1, 1, 2), (0, 1, 4), (1, 1, 2)], 0);
        assert_eq!(perfect_fairness_prob(&ae).unwrap(), r(1, 2));
        let eo = pmf(&[(-1, 1, 4), (0, 1, 8), (1, 1, 4)], 18);
        assert_eq!(perfect_fairness_prob(&eo).unwrap(), r(4, 17));
        assert_eq!(undefined_prob(&eo).unwrap(), r(9, 17));
        assert_eq!(
            perfect_fairness_prob_with(&eo, Denominator::Defined).unwrap(),
            r(1, 2)
        );
        assert_eq!(
            perfect_fairness_prob(&pmf(&[(1, 2, 3)], 0)).unwrap(),
            Rational::ZERO
        );
        assert!(matches!(
            perfect_fairness_prob(&Pmf::new()),
            Err(Error::EmptyPmf)
        ));
        assert!(matches!(undefined_prob(&Pmf::new()), Err(Error::EmptyPmf)));
        assert!(perfect_fairness_prob_with(&pmf(&[], 3), Denominator::Defined).is_err());
    }

    #[test]
    fn tv_distance_examples() {
        let p = pmf(&[(-1, 1, 2), (0, 1, 4), (1, 1, 2)], 0);
        assert_eq!(tv_distance(&p, &p).unwrap(), Rational::ZERO);
        assert_eq!(
            tv_distance(&pmf(&[(0, 1, 1)], 0), &pmf(&[(1, 1, 1)], 0)).unwrap(),
            Rational::ONE
        );
        assert_eq!(tv_distance(&p, &pmf(&[(0, 1, 8)], 0)).unwrap(), r(1, 2));
        assert!(tv_distance(&p, &Pmf::new()).is_err());
    }

    #[test]
    fn tv_distance_counts_the_undefined_atom() {
        let a = pmf(&[(0, 1, 1)], 1);
        let b = pmf(&[(0, 1, 2)], 0);
        assert_eq!(tv_distance(&a, &b).unwrap(), r(1, 2));
        assert_eq!(
            tv_distance_with(&a, &b, Denominator::Defined).unwrap(),
            Rational::ZERO
        );
    }

    #[test]
    fn mirror_and_symmetry() {
        let p = pmf(&[(-1, 2, 1), (0, 1, 3), (1, 1, 1)], 2);
        assert!(!p.is_symmetric());
        assert_eq!(p.asymmetry_witness(), Some(r(-1, 2)));
        let m = p.mirrored();
        assert_eq!(m.count_at(r(1, 2)), 1);
        assert_eq!(m.count_at(-Rational::ONE), 1);
        assert_eq!(m.undefined_count(), 2);
        assert!(pmf(&[(-1, 3, 2), (0, 1, 1), (1, 3, 2)], 0).is_symmetric());
    }

    proptest::proptest! {
        #[test]
        fn tv_is_a_bounded_symmetric_distance(
            a in proptest::collection::vec((-4i64..=4, 1u64..20), 1..8),
            b in proptest::collection::vec((-4i64..=4, 1u64..20), 1..8),
            ua in 0u64..5, ub in 0u64..5,
        ) {
            let build = |v: &[(i64, u64)], u: u64| {
                Pmf::from_counts(v.iter().map(|&(x, c)| (r(x, 4), c as Count)), u as Count).unwrap()
            };
            let (pa, pb) = (build(&a, ua), build(&b, ub));
            let d = tv_distance(&pa, &pb).unwrap();
            proptest::prop_assert_eq!(d, tv_distance(&pb, &pa).unwrap());
            proptest::prop_assert!(d >= Rational::ZERO && d <= Rational::ONE);
            proptest::prop_assert_eq!(tv_distance(&pa, &pa).unwrap(), Rational::ZERO);
        }
    }
}
