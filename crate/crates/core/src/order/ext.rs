use std::fmt;
use std::ops::Add;

use num_rational::Rational64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Elem, ElemSet, OrderError};

/// A finite rational or `+inf`. There is no `-inf`.
///
/// The derived order puts every finite value below `Infinite`, and
/// `Infinite == Infinite`, which is the comparison convention used throughout.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum ExtValue {
    Finite(Rational64),
    Infinite,
}

impl ExtValue {
    pub const ZERO: ExtValue = ExtValue::Finite(Rational64::new_raw(0, 1));

    pub fn int(v: i64) -> Self {
        ExtValue::Finite(Rational64::from_integer(v))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        ExtValue::Finite(Rational64::new(num, den))
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtValue::Finite(_))
    }

    pub fn finite(self) -> Option<Rational64> {
        match self {
            ExtValue::Finite(r) => Some(r),
            ExtValue::Infinite => None,
        }
    }
}

impl Add for ExtValue {
    type Output = ExtValue;

    fn add(self, rhs: ExtValue) -> ExtValue {
        match (self, rhs) {
            (ExtValue::Finite(a), ExtValue::Finite(b)) => ExtValue::Finite(a + b),
            _ => ExtValue::Infinite,
        }
    }
}

impl From<Rational64> for ExtValue {
    fn from(r: Rational64) -> Self {
        ExtValue::Finite(r)
    }
}

impl fmt::Display for ExtValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtValue::Finite(r) => write!(f, "{r}"),
            ExtValue::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ExtRepr {
    Ratio([i64; 2]),
    Int(i64),
    Text(String),
}

impl Serialize for ExtValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtValue::Finite(r) => ExtRepr::Ratio([*r.numer(), *r.denom()]).serialize(s),
            ExtValue::Infinite => ExtRepr::Text("inf".into()).serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for ExtValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        match ExtRepr::deserialize(d)? {
            ExtRepr::Ratio([_, 0]) => Err(D::Error::custom("zero denominator")),
            ExtRepr::Ratio([n, den]) => Ok(ExtValue::ratio(n, den)),
            ExtRepr::Int(n) => Ok(ExtValue::int(n)),
            ExtRepr::Text(t) if t == "inf" || t == "+inf" => Ok(ExtValue::Infinite),
            ExtRepr::Text(t) => Err(D::Error::custom(format!("expected [num, den] or \"inf\", got {t:?}"))),
        }
    }
}

/// A value table `carrier -> Q ∪ {+inf}` that is finite somewhere.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct ExtendedFunctional {
    values: Vec<ExtValue>,
}

impl ExtendedFunctional {
    pub fn new(values: Vec<ExtValue>) -> Result<Self, OrderError> {
        if values.iter().any(|v| v.is_finite()) {
            Ok(ExtendedFunctional { values })
        } else {
            Err(OrderError::EmptyEffectiveDomain)
        }
    }

    pub fn zero(n: usize) -> Self {
        ExtendedFunctional { values: vec![ExtValue::ZERO; n] }
    }

    /// 0 on `set`, `+inf` elsewhere.
    pub fn indicator(n: usize, set: &ElemSet) -> Result<Self, OrderError> {
        if set.bound() > n {
            return Err(OrderError::CarrierMismatch { elem: (set.bound() - 1) as u32, size: n });
        }
        Self::new(
            (0..n).map(|i| if set.contains(Elem::from(i)) { ExtValue::ZERO } else { ExtValue::Infinite }).collect(),
        )
    }

    pub fn from_ints(values: &[Option<i64>]) -> Result<Self, OrderError> {
        Self::new(values.iter().map(|v| v.map_or(ExtValue::Infinite, ExtValue::int)).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn at(&self, e: Elem) -> ExtValue {
        self.values[e.index()]
    }

    pub fn values(&self) -> &[ExtValue] {
        &self.values
    }

    pub fn effective_domain(&self) -> ElemSet {
        self.values.iter().enumerate().filter(|(_, v)| v.is_finite()).map(|(i, _)| Elem::from(i)).collect()
    }

    /// Pointwise sum, or `None` when the sum is `+inf` everywhere.
    pub fn checked_add(&self, other: &ExtendedFunctional) -> Option<ExtendedFunctional> {
        assert_eq!(self.len(), other.len(), "functional carrier sizes differ");
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| a + b).collect();
        ExtendedFunctional::new(values).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinity_is_absorbing_and_greatest() {
        let one = ExtValue::int(1);
        assert_eq!(one + ExtValue::Infinite, ExtValue::Infinite);
        assert!(one < ExtValue::Infinite);
        assert!(ExtValue::Infinite <= ExtValue::Infinite);
        assert_eq!(ExtValue::ratio(1, 2) + ExtValue::ratio(1, 2), one);
    }

    #[test]
    fn serde_roundtrip() {
        let vals = vec![ExtValue::ratio(-3, 4), ExtValue::Infinite, ExtValue::int(2)];
        let json = serde_json::to_string(&vals).unwrap();
        assert_eq!(json, r#"[[-3,4],"inf",[2,1]]"#);
        let back: Vec<ExtValue> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, vals);
        assert!(serde_json::from_str::<ExtValue>(r#""-inf""#).is_err());
        assert!(serde_json::from_str::<ExtValue>("[1,0]").is_err());
    }

    #[test]
    fn empty_domain_rejected() {
        assert_eq!(ExtendedFunctional::new(vec![ExtValue::Infinite; 3]), Err(OrderError::EmptyEffectiveDomain));
        assert!(ExtendedFunctional::indicator(3, &ElemSet::new()).is_err());
        let a = ExtendedFunctional::from_ints(&[Some(0), None]).unwrap();
        let b = ExtendedFunctional::from_ints(&[None, Some(0)]).unwrap();
        assert!(a.checked_add(&b).is_none());
        assert_eq!(a.effective_domain(), ElemSet::singleton(Elem(0)));
    }
}
