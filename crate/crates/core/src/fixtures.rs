//! The two worked examples shipped with the toolkit:
//!
//! * `s1-on-r2`: the circle rotating the plane, a semifree action whose
//!   reduced space is a parabola;
//! * `t2-on-r4`: the two-torus rotating each factor of `R² × R²`.
//!
//! Each fixture carries the semialgebraic presentation of its reduced space,
//! stratum by stratum, in Hilbert coordinates `(p1, p2, p3)` per plane. For
//! the torus these are `(ρ₁, ρ₂, ρ₃; σ₁, σ₂, σ₃)`. The circle example is
//! usually charted as `(σ₂, σ₃, σ₁)`; [`circle_chart`] and
//! [`from_circle_chart`] convert.

use std::fmt;
use std::str::FromStr;

use crate::action::TorusActionSpec;
use crate::error::{Error, Result};
use crate::phase::HilbertImage;
use crate::semialg::{Membership, Poly, Predicate, ReducedDescription, Region, Tolerances};
use crate::strata::StratumName;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Fixture {
    CircleOnPlane,
    TorusOnR4,
}

impl Fixture {
    pub const ALL: [Fixture; 2] = [Fixture::CircleOnPlane, Fixture::TorusOnR4];

    pub fn name(self) -> &'static str {
        match self {
            Fixture::CircleOnPlane => "s1-on-r2",
            Fixture::TorusOnR4 => "t2-on-r4",
        }
    }

    pub fn spec(self) -> TorusActionSpec {
        let weights = match self {
            Fixture::CircleOnPlane => vec![vec![1]],
            Fixture::TorusOnR4 => vec![vec![1, 0], vec![0, 1]],
        };
        TorusActionSpec::new(weights).expect("fixture spec is valid")
    }

    /// Offsets `c_j` of the base projection `(p1 − c_j, 0, c_j − p1)`.
    pub fn k0_offsets(self) -> Vec<f64> {
        vec![1.0; self.spec().n]
    }

    pub fn reduced_description(self) -> ReducedDescription {
        match self {
            Fixture::CircleOnPlane => circle_description(),
            Fixture::TorusOnR4 => torus_description(),
        }
    }

    /// The fixture whose weight matrix is exactly `spec`, if any.
    pub fn for_spec(spec: &TorusActionSpec) -> Option<Fixture> {
        Fixture::ALL.into_iter().find(|f| &f.spec() == spec)
    }
}

/// Locates a Hilbert image in the fixture's reduced-space partition.
pub fn check_reduced_membership(fixture: Fixture, image: &HilbertImage) -> Result<Membership> {
    check_reduced_membership_with(fixture, image, Tolerances::default())
}

pub fn check_reduced_membership_with(
    fixture: Fixture,
    image: &HilbertImage,
    tol: Tolerances,
) -> Result<Membership> {
    fixture.reduced_description().check(&image.0, tol)
}

impl fmt::Display for Fixture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Fixture {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Fixture::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::UnknownFixture(s.to_string()))
    }
}

/// `(σ₁, σ₂, σ₃)` to the circle example's `(σ₂, σ₃, σ₁)` chart.
pub fn circle_chart(image: [f64; 3]) -> [f64; 3] {
    [image[1], image[2], image[0]]
}

pub fn from_circle_chart(chart: [f64; 3]) -> [f64; 3] {
    [chart[2], chart[0], chart[1]]
}

use Predicate::{Excludes, NonNegative, NonZero, Positive, Zero};

fn v(i: usize) -> Poly {
    Poly::var(i)
}

fn diff(a: usize, b: usize) -> Poly {
    Poly::linear(&[(1.0, a), (-1.0, b)], 0.0)
}

fn shifted(i: usize, c: f64) -> Poly {
    Poly::linear(&[(1.0, i)], -c)
}

fn circle_description() -> ReducedDescription {
    // σ₁ = 0, σ₂ = 1, σ₃ = 2
    let on_parabola = || {
        vec![
            NonNegative(v(0)),
            Zero(Poly::cone(0, 1, 2)),
            Zero(Poly::linear(&[(1.0, 0), (1.0, 2)], -2.0)),
        ]
    };
    let with = |mut base: Vec<Predicate>, extra: Vec<Predicate>| {
        base.extend(extra);
        base
    };
    ReducedDescription {
        dimension: 3,
        regions: vec![
            Region::new(
                StratumName::cc("e"),
                with(on_parabola(), vec![Positive(v(1))]),
            )
            .piece("L"),
            Region::new(
                StratumName::cc("e"),
                with(
                    on_parabola(),
                    vec![Positive(Poly::linear(&[(-1.0, 1)], 0.0))],
                ),
            )
            .piece("R"),
            Region::new(
                StratumName::seam("S¹", "e"),
                vec![Zero(v(1)), Zero(shifted(2, 1.0)), Zero(shifted(0, 1.0))],
            ),
        ],
    }
}

fn torus_description() -> ReducedDescription {
    // ρ₁ = 0, ρ₂ = 1, ρ₃ = 2, σ₁ = 3, σ₂ = 4, σ₃ = 5
    let (r1, r2, r3, s1, s2, s3) = (0, 1, 2, 3, 4, 5);
    let rho_cone = || Zero(Poly::cone(r1, r2, r3));
    let sigma_cone = || Zero(Poly::cone(s1, s2, s3));
    let regions = vec![
        Region::new(
            StratumName::cc("e"),
            vec![
                Positive(v(r1)),
                Positive(v(s1)),
                NonZero(diff(r1, r3)),
                NonZero(diff(s1, s3)),
                rho_cone(),
                sigma_cone(),
                Zero(Poly::linear(
                    &[(1.0, r1), (1.0, r3), (1.0, s1), (1.0, s3)],
                    -2.0,
                )),
            ],
        ),
        Region::new(
            StratumName::seam("S¹×e", "e"),
            vec![
                Positive(v(r1)),
                Positive(v(s1)),
                NonZero(diff(s1, s3)),
                Zero(diff(r1, r3)),
                Zero(v(r2)),
                Zero(Poly::linear(&[(2.0, r1), (1.0, s1), (1.0, s3)], -2.0)),
                sigma_cone(),
            ],
        ),
        Region::new(
            StratumName::seam("e×S¹", "e"),
            vec![
                Positive(v(r1)),
                Positive(v(s1)),
                NonZero(diff(r1, r3)),
                Zero(diff(s1, s3)),
                Zero(v(s2)),
                Zero(Poly::linear(&[(2.0, s1), (1.0, r1), (1.0, r3)], -2.0)),
                rho_cone(),
            ],
        ),
        Region::new(
            StratumName::seam("T²", "e"),
            vec![
                Positive(v(r1)),
                Positive(v(s1)),
                Zero(diff(r1, r3)),
                Zero(diff(s1, s3)),
                Zero(v(r2)),
                Zero(v(s2)),
                Zero(Poly::linear(&[(1.0, r1), (1.0, s1)], -1.0)),
            ],
        ),
        Region::new(
            StratumName::cc("e×S¹"),
            vec![
                Zero(v(s1)),
                Zero(v(s2)),
                Zero(v(s3)),
                Positive(v(r1)),
                Zero(Poly::linear(&[(1.0, r1), (1.0, r3)], -2.0)),
                rho_cone(),
                Excludes(vec![1.0, 0.0, 1.0, 0.0, 0.0, 0.0]),
            ],
        ),
        Region::new(
            StratumName::seam("T²", "e×S¹"),
            vec![
                Zero(shifted(r1, 1.0)),
                Zero(v(r2)),
                Zero(shifted(r3, 1.0)),
                Zero(v(s1)),
                Zero(v(s2)),
                Zero(v(s3)),
            ],
        ),
        Region::new(
            StratumName::cc("S¹×e"),
            vec![
                Zero(v(r1)),
                Zero(v(r2)),
                Zero(v(r3)),
                Positive(v(s1)),
                Zero(Poly::linear(&[(1.0, s1), (1.0, s3)], -2.0)),
                sigma_cone(),
                Excludes(vec![0.0, 0.0, 0.0, 1.0, 0.0, 1.0]),
            ],
        ),
        Region::new(
            StratumName::seam("T²", "S¹×e"),
            vec![
                Zero(v(r1)),
                Zero(v(r2)),
                Zero(v(r3)),
                Zero(shifted(s1, 1.0)),
                Zero(v(s2)),
                Zero(shifted(s3, 1.0)),
            ],
        ),
    ];
    ReducedDescription {
        dimension: 6,
        regions,
    }
}
