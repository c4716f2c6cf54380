//! Triangular fuzzy numbers, their arithmetic, and ranking through
//! satisfaction functions evaluated against a viewpoint.

use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{self, ordered_pair_integrals};

/// Relative half-width given to crisp numbers before integration.
pub const CRISP_WIDENING: f64 = 1e-9;

/// Evaluation values below this are treated as zero by [`relative_index`].
pub const EVALUATION_FLOOR: f64 = 1e-12;

/// Triangular fuzzy number `(a, l, r)`: peak at `a`, support `[a - l, a + r]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tfn {
    center: f64,
    left: f64,
    right: f64,
}

impl Tfn {
    pub fn new(center: f64, left: f64, right: f64) -> Result<Self> {
        let ok = center.is_finite() && left.is_finite() && right.is_finite() && left >= 0.0 && right >= 0.0;
        if !ok {
            return Err(Error::InvalidTfn { center, left, right });
        }
        Ok(Tfn { center, left, right })
    }

    pub fn crisp(value: f64) -> Self {
        Tfn {
            center: value,
            left: 0.0,
            right: 0.0,
        }
    }

    pub fn symmetric(center: f64, deviation: f64) -> Result<Self> {
        Tfn::new(center, deviation, deviation)
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn left(&self) -> f64 {
        self.left
    }

    pub fn right(&self) -> f64 {
        self.right
    }

    pub fn is_crisp(&self) -> bool {
        self.left == 0.0 && self.right == 0.0
    }

    /// Closed support `[a - l, a + r]`.
    pub fn support(&self) -> (f64, f64) {
        (self.center - self.left, self.center + self.right)
    }

    /// Piecewise-linear membership degree.
    pub fn membership(&self, x: f64) -> f64 {
        let a = self.center;
        if x == a {
            1.0
        } else if x < a {
            let lo = a - self.left;
            if self.left > 0.0 && x >= lo {
                ((x - lo) / self.left).clamp(0.0, 1.0)
            } else {
                0.0
            }
        } else {
            let hi = a + self.right;
            if self.right > 0.0 && x <= hi {
                ((hi - x) / self.right).clamp(0.0, 1.0)
            } else {
                0.0
            }
        }
    }

    /// `ν·ã` for `ν ≥ 0`.
    pub fn scale(self, nu: f64) -> Result<Self> {
        if nu < 0.0 || !nu.is_finite() {
            return Err(Error::NegativeScale(nu));
        }
        Tfn::new(nu * self.center, nu * self.left, nu * self.right)
    }

    pub fn shifted(self, by: f64) -> Self {
        Tfn {
            center: self.center + by,
            ..self
        }
    }

    /// Whether `self` dominates `other`: both
    /// `max(l_self - l_other, 0) <= a_self - a_other` and
    /// `max(r_other - r_self, 0) <= a_self - a_other` hold.
    pub fn dominates(&self, other: &Tfn) -> bool {
        let gap = self.center - other.center;
        (self.left - other.left).max(0.0) <= gap && (other.right - self.right).max(0.0) <= gap
    }

    /// Copy with crisp numbers widened to a tiny symmetric triangle so the
    /// satisfaction integrals stay well defined.
    fn integrable(&self) -> Tfn {
        if self.is_crisp() {
            let eps = CRISP_WIDENING * self.center.abs().max(1.0);
            Tfn {
                left: eps,
                right: eps,
                ..*self
            }
        } else {
            *self
        }
    }

    fn breakpoints(&self) -> [f64; 3] {
        [self.center - self.left, self.center, self.center + self.right]
    }
}

impl Add for Tfn {
    type Output = Tfn;

    fn add(self, rhs: Tfn) -> Tfn {
        Tfn {
            center: self.center + rhs.center,
            left: self.left + rhs.left,
            right: self.right + rhs.right,
        }
    }
}

impl fmt::Display for Tfn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.center, self.left, self.right)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `SF(a < b)`
    Less,
    /// `SF(a > b)`
    Greater,
}

/// Satisfaction function `SF(a < b)` or `SF(a > b)` with the product
/// T-norm, using [`quadrature::DEFAULT_NODES`] nodes per axis.
pub fn satisfaction(a: &Tfn, b: &Tfn, direction: Direction) -> Result<f64> {
    satisfaction_with_nodes(a, b, direction, quadrature::DEFAULT_NODES)
}

pub fn satisfaction_with_nodes(a: &Tfn, b: &Tfn, direction: Direction, nodes: usize) -> Result<f64> {
    let a = a.integrable();
    let b = b.integrable();
    let ((a_lo, a_hi), (b_lo, b_hi)) = (a.support(), b.support());
    if a_hi <= b_lo || b_hi <= a_lo {
        let less = a_hi <= b_lo;
        return Ok(if less == (direction == Direction::Less) { 1.0 } else { 0.0 });
    }
    let r = ordered_pair_integrals(|x| a.membership(x), &a.breakpoints(), |y| b.membership(y), &b.breakpoints(), nodes);
    if !(r.total > 0.0) || !r.total.is_finite() {
        return Err(Error::Quadrature(r.total));
    }
    let num = match direction {
        Direction::Less => r.below,
        Direction::Greater => r.above,
    };
    Ok((num / r.total).clamp(0.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stance {
    Optimistic,
    #[default]
    Neutral,
    Pessimistic,
}

impl std::str::FromStr for Stance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "optimistic" => Ok(Stance::Optimistic),
            "neutral" => Ok(Stance::Neutral),
            "pessimistic" => Ok(Stance::Pessimistic),
            other => Err(Error::invalid(format!("unknown viewpoint stance {other:?}"))),
        }
    }
}

/// Reference fuzzy number that a set of fuzzy numbers is evaluated against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Viewpoint {
    shape: Tfn,
    stance: Stance,
}

impl Viewpoint {
    /// Builds a viewpoint whose support covers every number in `set`.
    ///
    /// With `[lo, hi]` the union of the supports, the neutral viewpoint is
    /// centred at the midpoint with half-width `(hi - lo)/2` plus a small
    /// pad. Optimistic and pessimistic viewpoints peak at `hi` and `lo`
    /// and use the full width on each side so they still cover the set.
    pub fn for_set(set: &[Tfn], stance: Stance) -> Result<Self> {
        if set.is_empty() {
            return Err(Error::Empty("viewpoint needs at least one fuzzy number"));
        }
        let (lo, hi) = set
            .iter()
            .map(|t| t.integrable().support())
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (l, h)| (lo.min(l), hi.max(h)));
        let width = hi - lo;
        let pad = 1e-6 * width;
        let shape = match stance {
            Stance::Neutral => {
                let half = 0.5 * width + pad;
                Tfn::new(0.5 * (lo + hi), half, half)?
            }
            Stance::Optimistic => Tfn::new(hi, width + pad, width + pad)?,
            Stance::Pessimistic => Tfn::new(lo, width + pad, width + pad)?,
        };
        Ok(Viewpoint { shape, stance })
    }

    /// Wraps an explicit reference shape.
    pub fn with_shape(shape: Tfn, stance: Stance) -> Result<Self> {
        if shape.is_crisp() {
            return Err(Error::invalid("viewpoint membership must have non-zero area"));
        }
        Ok(Viewpoint { shape, stance })
    }

    pub fn shape(&self) -> &Tfn {
        &self.shape
    }

    pub fn stance(&self) -> Stance {
        self.stance
    }

    pub fn covers(&self, a: &Tfn) -> bool {
        let (lo, hi) = a.integrable().support();
        let (vlo, vhi) = self.shape.support();
        vlo <= lo && hi <= vhi
    }
}

/// Evaluation value `E_v(a) = SF(a > v)`.
pub fn evaluation_value(a: &Tfn, v: &Viewpoint) -> Result<f64> {
    if !v.covers(a) {
        return Err(Error::ViewpointCoverage);
    }
    satisfaction(a, &v.shape, Direction::Greater)
}

/// Relative index `E_v(a) / max E_v` of every number in `set`.
///
/// If every evaluation value is below [`EVALUATION_FLOOR`] all indices are 1.
pub fn relative_index(set: &[Tfn], v: &Viewpoint) -> Result<Vec<f64>> {
    if set.is_empty() {
        return Err(Error::Empty("relative index of an empty set"));
    }
    let evals = set.iter().map(|a| evaluation_value(a, v)).collect::<Result<Vec<_>>>()?;
    let best = evals.iter().copied().fold(0.0_f64, f64::max);
    if best < EVALUATION_FLOOR {
        return Ok(vec![1.0; set.len()]);
    }
    Ok(evals.into_iter().map(|e| e / best).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn tfn(a: f64, l: f64, r: f64) -> Tfn {
        Tfn::new(a, l, r).unwrap()
    }

    #[test]
    fn membership_examples() {
        let t = tfn(1.0, 0.5, 0.5);
        assert_eq!(t.membership(1.0), 1.0);
        assert_abs_diff_eq!(t.membership(0.75), 0.5, epsilon = 1e-15);
        assert_eq!(t.membership(2.0), 0.0);
        assert_eq!(t.membership(0.5), 0.0);
        assert_eq!(t.membership(1.5), 0.0);
    }

    #[test]
    fn one_sided_and_crisp_membership() {
        let t = tfn(2.0, 0.0, 1.0);
        assert_eq!(t.membership(2.0), 1.0);
        assert_eq!(t.membership(1.999), 0.0);
        assert_abs_diff_eq!(t.membership(2.5), 0.5);
        let c = Tfn::crisp(3.0);
        assert_eq!(c.membership(3.0), 1.0);
        assert_eq!(c.membership(3.0 + 1e-12), 0.0);
    }

    #[test]
    fn rejects_negative_deviation() {
        assert!(Tfn::new(1.0, -0.1, 0.0).is_err());
        assert!(Tfn::new(f64::NAN, 0.1, 0.0).is_err());
    }

    #[test]
    fn add_examples() {
        let s = tfn(1.0, 0.5, 0.5) + tfn(2.0, 0.3, 0.7);
        assert_abs_diff_eq!(s.center(), 3.0);
        assert_abs_diff_eq!(s.left(), 0.8);
        assert_abs_diff_eq!(s.right(), 1.2);
        let x = tfn(4.2, 0.0, 0.0);
        assert_eq!(x + tfn(0.0, 0.0, 0.0), x);
        let s = tfn(1.0, 0.2, 0.3) + tfn(-1.0, 0.3, 0.2);
        assert_abs_diff_eq!(s.center(), 0.0);
        assert_abs_diff_eq!(s.left(), 0.5);
        assert_abs_diff_eq!(s.right(), 0.5);
    }

    #[test]
    fn scale_examples() {
        assert_eq!(tfn(1.0, 0.5, 0.5).scale(2.0).unwrap(), tfn(2.0, 1.0, 1.0));
        assert_eq!(tfn(7.0, 1.0, 3.0).scale(0.0).unwrap(), tfn(0.0, 0.0, 0.0));
        assert_eq!(tfn(4.0, 2.0, 6.0).scale(0.5).unwrap(), tfn(2.0, 1.0, 3.0));
        assert!(matches!(tfn(1.0, 1.0, 1.0).scale(-1.0), Err(Error::NegativeScale(_))));
    }

    #[test]
    fn dominance_examples() {
        assert!(tfn(2.0, 0.1, 0.1).dominates(&tfn(1.0, 0.1, 0.1)));
        let a = tfn(1.3, 0.2, 0.4);
        assert!(a.dominates(&a));
        assert!(!tfn(1.0, 0.9, 0.1).dominates(&tfn(1.0, 0.1, 0.1)));
    }

    #[test]
    fn satisfaction_symmetric_pair_is_half() {
        let a = tfn(2.0, 0.7, 0.7);
        assert_abs_diff_eq!(satisfaction(&a, &a, Direction::Less).unwrap(), 0.5, epsilon = 1e-9);
    }

    #[test]
    fn satisfaction_disjoint_supports() {
        let a = tfn(0.5, 0.5, 0.5);
        let b = tfn(2.5, 0.5, 0.5);
        assert_abs_diff_eq!(satisfaction(&a, &b, Direction::Less).unwrap(), 1.0);
        assert_abs_diff_eq!(satisfaction(&a, &b, Direction::Greater).unwrap(), 0.0);
    }

    #[test]
    fn satisfaction_overlapping_pair_matches_frozen_oracle() {
        // 307/384 from an independent arbitrary-precision integration
        let v = satisfaction(&tfn(1.0, 1.0, 1.0), &tfn(1.5, 1.0, 1.0), Direction::Less).unwrap();
        assert_abs_diff_eq!(v, 307.0 / 384.0, epsilon = 1e-5);
        assert!(v > 0.5 && v < 1.0);
    }

    #[test]
    fn crisp_numbers_compare_by_value() {
        let lo = Tfn::crisp(1.0);
        let hi = Tfn::crisp(1.0 + 1e-6);
        assert_abs_diff_eq!(satisfaction(&lo, &hi, Direction::Less).unwrap(), 1.0);
        assert_abs_diff_eq!(satisfaction(&lo, &lo, Direction::Less).unwrap(), 0.5, epsilon = 1e-9);
    }

    #[test]
    fn evaluation_value_examples() {
        let v = Viewpoint::with_shape(tfn(1.0, 0.5, 0.5), Stance::Neutral).unwrap();
        let far = Viewpoint::with_shape(tfn(1.0, 2.0, 2.0), Stance::Neutral).unwrap();
        // identical shape
        assert_abs_diff_eq!(evaluation_value(&tfn(1.0, 0.5, 0.5), &v).unwrap(), 0.5, epsilon = 1e-9);
        // both symmetric about the same centre
        assert_abs_diff_eq!(evaluation_value(&tfn(1.0, 0.5, 0.5), &far).unwrap(), 0.5, epsilon = 1e-9);
        // mass near the top of the viewpoint support
        let e = evaluation_value(&tfn(2.8, 0.1, 0.1), &far).unwrap();
        assert!(e > 0.99, "{e}");
    }

    #[test]
    fn evaluation_value_rejects_uncovered_number() {
        let v = Viewpoint::with_shape(tfn(0.0, 1.0, 1.0), Stance::Neutral).unwrap();
        assert!(matches!(evaluation_value(&tfn(5.0, 0.1, 0.1), &v), Err(Error::ViewpointCoverage)));
    }

    #[test]
    fn viewpoints_cover_their_set() {
        let set = [tfn(1.0, 0.5, 0.2), tfn(4.0, 0.0, 0.0), tfn(-2.0, 1.0, 3.0)];
        for stance in [Stance::Optimistic, Stance::Neutral, Stance::Pessimistic] {
            let v = Viewpoint::for_set(&set, stance).unwrap();
            assert!(set.iter().all(|t| v.covers(t)), "{stance:?}");
        }
        let all_crisp = [Tfn::crisp(2.0), Tfn::crisp(2.0)];
        let v = Viewpoint::for_set(&all_crisp, Stance::Neutral).unwrap();
        assert!(v.covers(&all_crisp[0]));
    }

    #[test]
    fn relative_index_examples() {
        let one = [tfn(3.0, 1.0, 1.0)];
        let v = Viewpoint::for_set(&one, Stance::Neutral).unwrap();
        assert_eq!(relative_index(&one, &v).unwrap(), vec![1.0]);

        let same = [tfn(1.0, 0.5, 0.5); 4];
        let v = Viewpoint::for_set(&same, Stance::Neutral).unwrap();
        assert_eq!(relative_index(&same, &v).unwrap(), vec![1.0; 4]);

        let set = [tfn(1.0, 0.5, 0.5), tfn(2.0, 0.5, 0.5), tfn(3.0, 0.5, 0.5)];
        let v = Viewpoint::for_set(&set, Stance::Neutral).unwrap();
        let idx = relative_index(&set, &v).unwrap();
        // frozen from an arbitrary-precision oracle
        assert_abs_diff_eq!(idx[0], 0.069_307_396_53, epsilon = 1e-4);
        assert_abs_diff_eq!(idx[1], 0.534_653_698_27, epsilon = 1e-4);
        assert_eq!(idx[2], 1.0);
    }

    #[test]
    fn relative_index_empty_set() {
        let v = Viewpoint::with_shape(tfn(0.0, 1.0, 1.0), Stance::Neutral).unwrap();
        assert!(matches!(relative_index(&[], &v), Err(Error::Empty(_))));
    }
}
