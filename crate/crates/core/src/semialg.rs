//! Residual-based membership in semialgebraic sets given as predicate lists.
//!
//! Equalities hold when their residual is at most the band, while strict
//! inequalities and `≠` need to clear it, so every predicate is decided by
//! the same threshold and the regions of a partition stay disjoint.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::strata::StratumName;
use crate::tolerance::STRICT_BAND;

/// Sparse polynomial: coefficient times a product of coordinates (indices may
/// repeat for powers).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Poly(pub Vec<(f64, Vec<usize>)>);

impl Poly {
    pub fn var(i: usize) -> Self {
        Poly(vec![(1.0, vec![i])])
    }

    pub fn constant(c: f64) -> Self {
        Poly(vec![(c, vec![])])
    }

    /// `Σ coeff·x_i` plus a constant.
    pub fn linear(terms: &[(f64, usize)], constant: f64) -> Self {
        let mut t: Vec<(f64, Vec<usize>)> = terms.iter().map(|&(c, i)| (c, vec![i])).collect();
        if constant != 0.0 {
            t.push((constant, vec![]));
        }
        Poly(t)
    }

    /// `x_a² − x_b² − x_c²`.
    pub fn cone(a: usize, b: usize, c: usize) -> Self {
        Poly(vec![
            (1.0, vec![a, a]),
            (-1.0, vec![b, b]),
            (-1.0, vec![c, c]),
        ])
    }

    pub fn eval(&self, point: &[f64]) -> f64 {
        self.0
            .iter()
            .map(|(c, mono)| c * mono.iter().map(|&i| point[i]).product::<f64>())
            .sum()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.0.iter().flat_map(|(_, m)| m.iter().copied()).max()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "op", content = "arg", rename_all = "snake_case")]
pub enum Predicate {
    Zero(Poly),
    Positive(Poly),
    NonNegative(Poly),
    NonZero(Poly),
    /// The point is removed from the region (max-norm distance above the band).
    Excludes(Vec<f64>),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub band: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { band: STRICT_BAND }
    }
}

impl Predicate {
    /// `(satisfied, violation)`. For equalities the violation is the residual
    /// even when satisfied; for the others it is zero when satisfied.
    pub fn check(&self, point: &[f64], tol: Tolerances) -> (bool, f64) {
        match self {
            Predicate::Zero(p) => {
                let r = p.eval(point).abs();
                (r <= tol.band, r)
            }
            Predicate::Positive(p) => {
                let v = p.eval(point);
                (v > tol.band, if v > tol.band { 0.0 } else { tol.band - v })
            }
            Predicate::NonNegative(p) => {
                let v = p.eval(point);
                (v >= -tol.band, (-v).max(0.0))
            }
            Predicate::NonZero(p) => {
                let v = p.eval(point).abs();
                (v > tol.band, if v > tol.band { 0.0 } else { tol.band - v })
            }
            Predicate::Excludes(q) => {
                let d = point
                    .iter()
                    .zip(q)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                (d > tol.band, if d > tol.band { 0.0 } else { tol.band - d })
            }
        }
    }
}

/// One piece of a stratum (strata may be disconnected, e.g. the two branches
/// of a parabola).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Region {
    pub stratum: StratumName,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub piece: Option<String>,
    pub predicates: Vec<Predicate>,
}

impl Region {
    pub fn new(stratum: StratumName, predicates: Vec<Predicate>) -> Self {
        Self {
            stratum,
            piece: None,
            predicates,
        }
    }

    pub fn piece(mut self, name: &str) -> Self {
        self.piece = Some(name.to_string());
        self
    }

    /// `(all satisfied, max equality residual, total violation)`.
    fn evaluate(&self, point: &[f64], tol: Tolerances) -> (bool, f64, f64) {
        let mut ok = true;
        let mut residual: f64 = 0.0;
        let mut violation: f64 = 0.0;
        for p in &self.predicates {
            let (sat, v) = p.check(point, tol);
            ok &= sat;
            if matches!(p, Predicate::Zero(_)) && sat {
                residual = residual.max(v);
            }
            if !sat {
                violation = violation.max(v);
            }
        }
        (ok, residual, violation)
    }
}

/// A semialgebraic presentation of the reduced space as a partition into
/// C-L strata.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReducedDescription {
    pub dimension: usize,
    pub regions: Vec<Region>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Membership {
    pub stratum: StratumName,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub piece: Option<String>,
    /// Largest equality residual of the matching region.
    pub residual: f64,
}

impl ReducedDescription {
    pub fn check(&self, image: &[f64], tol: Tolerances) -> Result<Membership> {
        if image.len() != self.dimension {
            return Err(Error::Precondition(format!(
                "image has {} coordinates, description expects {}",
                image.len(),
                self.dimension
            )));
        }
        let mut matches = Vec::new();
        let mut closest = f64::INFINITY;
        for region in &self.regions {
            let (ok, residual, violation) = region.evaluate(image, tol);
            if ok {
                matches.push((region, residual));
            } else {
                closest = closest.min(violation);
            }
        }
        match matches.as_slice() {
            [] => Err(Error::NoMatchingStratum(closest)),
            [(region, residual)] => Ok(Membership {
                stratum: region.stratum.clone(),
                piece: region.piece.clone(),
                residual: *residual,
            }),
            many => Err(Error::AmbiguousMembership(
                many.iter().map(|(r, _)| r.stratum.to_string()).collect(),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poly_eval() {
        let p = Poly::cone(0, 1, 2);
        assert_eq!(p.eval(&[5.0, 3.0, 4.0]), 0.0);
        assert_eq!(
            Poly::linear(&[(2.0, 0), (1.0, 1)], -2.0).eval(&[1.0, 0.5]),
            0.5
        );
        assert_eq!(Poly::constant(3.0).eval(&[]), 3.0);
        assert_eq!(Poly::cone(0, 1, 4).max_index(), Some(4));
    }

    #[test]
    fn predicates_share_one_band() {
        let tol = Tolerances::default();
        let x = Poly::var(0);
        for v in [0.0, 5e-9, 1e-8, 2e-8, 1.0] {
            let zero = Predicate::Zero(x.clone()).check(&[v], tol).0;
            let nonzero = Predicate::NonZero(x.clone()).check(&[v], tol).0;
            assert!(zero ^ nonzero, "v = {v}");
        }
        assert!(!Predicate::Positive(x.clone()).check(&[-1.0], tol).0);
        assert!(Predicate::NonNegative(x).check(&[-1e-9], tol).0);
        assert!(
            !Predicate::Excludes(vec![1.0, 0.0])
                .check(&[1.0, 0.0], tol)
                .0
        );
    }

    #[test]
    fn ambiguous_and_missing_matches() {
        let d = ReducedDescription {
            dimension: 1,
            regions: vec![
                Region::new(
                    StratumName::cc("a"),
                    vec![Predicate::NonNegative(Poly::var(0))],
                ),
                Region::new(
                    StratumName::cc("b"),
                    vec![Predicate::Positive(Poly::var(0))],
                ),
            ],
        };
        let tol = Tolerances::default();
        assert!(matches!(
            d.check(&[1.0], tol),
            Err(Error::AmbiguousMembership(_))
        ));
        assert_eq!(d.check(&[0.0], tol).unwrap().stratum, StratumName::cc("a"));
        assert!(matches!(
            d.check(&[-1.0], tol),
            Err(Error::NoMatchingStratum(_))
        ));
        assert!(matches!(
            d.check(&[1.0, 2.0], tol),
            Err(Error::Precondition(_))
        ));
    }
}
