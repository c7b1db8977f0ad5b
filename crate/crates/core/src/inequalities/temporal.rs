//! Two- and three-time correlation expressions with two settings per time.

use std::f64::consts::SQRT_2;

use super::optimize::SphereSearch;
use super::report::{ChshSettings, InequalityKind, InequalityReport, MerminSettings, Witness};
use crate::quantum::{correlator, BlochState, Direction, Vec3};

/// Classical bound of both the CHSH and the three-time expression.
pub const TEMPORAL_CLASSICAL_BOUND: f64 = 2.0;

/// `E(a1,b1) + E(a1,b2) + E(a2,b1) - E(a2,b2)`.
pub fn chsh_temporal<E>(e: E, s: &ChshSettings) -> f64
where
    E: Fn(&Direction, &Direction) -> f64,
{
    e(&s.a1, &s.b1) + e(&s.a1, &s.b2) + e(&s.a2, &s.b1) - e(&s.a2, &s.b2)
}

/// `E(a1,b1,c2) + E(a1,b2,c1) + E(a2,b1,c1) - E(a2,b2,c2)`.
pub fn mermin_temporal<E>(e: E, s: &MerminSettings) -> f64
where
    E: Fn(&Direction, &Direction, &Direction) -> f64,
{
    e(&s.a1, &s.b1, &s.c2) + e(&s.a1, &s.b2, &s.c1) + e(&s.a2, &s.b1, &s.c1) - e(&s.a2, &s.b2, &s.c2)
}

/// Two-time sequential correlator `a·b` (independent of the initial state).
pub fn dot_correlator(a: &Direction, b: &Direction) -> f64 {
    a.dot(b)
}

/// Three-time sequential correlator from the measurement chain started in
/// `s`; equals `(s·a)(b·c)`.
pub fn sequential_correlator3(s: &BlochState) -> impl Fn(&Direction, &Direction, &Direction) -> f64 + '_ {
    move |a, b, c| correlator(s, &[*a, *b, *c]).expect("three unit directions")
}

fn dirs_from(v: &[Vec3]) -> Vec<Direction> {
    v.iter()
        .map(|&d| Direction::normalized(d).expect("optimizer keeps unit vectors"))
        .collect()
}

fn chsh_settings(d: &[Direction]) -> ChshSettings {
    ChshSettings {
        a1: d[0],
        a2: d[1],
        b1: d[2],
        b2: d[3],
    }
}

fn mermin_settings(d: &[Direction]) -> MerminSettings {
    MerminSettings {
        a1: d[0],
        a2: d[1],
        b1: d[2],
        b2: d[3],
        c1: d[4],
        c2: d[5],
    }
}

/// Maximizes the CHSH expression of `e` over the four settings.
pub fn maximize_chsh<E>(e: E) -> InequalityReport
where
    E: Fn(&Direction, &Direction) -> f64 + Sync,
{
    maximize_chsh_with(&SphereSearch::default(), e)
}

pub fn maximize_chsh_with<E>(search: &SphereSearch, e: E) -> InequalityReport
where
    E: Fn(&Direction, &Direction) -> f64 + Sync,
{
    let opt = search.maximize(4, &[], |d, _| chsh_temporal(&e, &chsh_settings(&dirs_from(d))));
    InequalityReport::new(
        InequalityKind::Chsh,
        None,
        opt.value,
        TEMPORAL_CLASSICAL_BOUND,
        Witness::Chsh(chsh_settings(&opt.dirs)),
    )
}

/// Maximizes the three-time expression for a fixed initial state.
pub fn maximize_mermin_for_state(s: &BlochState) -> InequalityReport {
    let e3 = sequential_correlator3(s);
    let opt = SphereSearch::default().maximize(6, &[], |d, _| mermin_temporal(&e3, &mermin_settings(&dirs_from(d))));
    InequalityReport::new(
        InequalityKind::Mermin,
        None,
        opt.value,
        TEMPORAL_CLASSICAL_BOUND,
        Witness::Mermin {
            s: s.vector(),
            settings: mermin_settings(&opt.dirs),
        },
    )
}

/// Maximizes the three-time expression over all six settings and all
/// initial states `|s| <= 1` (direction on a seventh sphere, length as a
/// bounded scalar).
pub fn maximize_mermin_temporal() -> InequalityReport {
    let opt = SphereSearch::default().maximize(7, &[(0.0, 1.0)], |d, r| {
        let s = BlochState::new([r[0] * d[6][0], r[0] * d[6][1], r[0] * d[6][2]]).expect("|s| <= 1");
        mermin_temporal(sequential_correlator3(&s), &mermin_settings(&dirs_from(&d[..6])))
    });
    let sd = opt.dirs[6].vector();
    let r = opt.scalars[0];
    InequalityReport::new(
        InequalityKind::Mermin,
        None,
        opt.value,
        TEMPORAL_CLASSICAL_BOUND,
        Witness::Mermin {
            s: [r * sd[0], r * sd[1], r * sd[2]],
            settings: mermin_settings(&opt.dirs[..6]),
        },
    )
}

/// Largest value any quantum two-time correlator of the form `a·b` can give
/// the CHSH expression.
pub const TSIRELSON: f64 = 2.0 * SQRT_2;

#[cfg(test)]
mod tests {
    use super::*;

    fn h() -> f64 {
        std::f64::consts::FRAC_1_SQRT_2
    }

    #[test]
    fn chsh_examples() {
        let z = Direction::z();
        let x = Direction::x();
        let s = ChshSettings {
            a1: z,
            a2: z,
            b1: z,
            b2: x,
        };
        assert!((chsh_temporal(dot_correlator, &s) - 2.0).abs() < 1e-15);
        let opt = ChshSettings {
            a1: z,
            a2: x,
            b1: Direction::new([h(), 0.0, h()]).unwrap(),
            b2: Direction::new([-h(), 0.0, h()]).unwrap(),
        };
        assert!((chsh_temporal(dot_correlator, &opt) - TSIRELSON).abs() < 1e-12);
        assert_eq!(chsh_temporal(|_, _| 0.0, &opt), 0.0);
    }

    #[test]
    fn mermin_examples() {
        let z = Direction::z();
        let m = MerminSettings {
            a1: z,
            a2: z,
            b1: z,
            b2: z,
            c1: z,
            c2: z,
        };
        assert_eq!(mermin_temporal(|_, _, _| 1.0, &m), 2.0);
        let mixed = BlochState::maximally_mixed();
        assert!(mermin_temporal(sequential_correlator3(&mixed), &m).abs() < 1e-15);
    }

    #[test]
    fn zero_correlator_maximum_is_zero() {
        let r = maximize_chsh(|_, _| 0.0);
        assert_eq!(r.lhs, 0.0);
        assert!(!r.violated);
    }

    #[test]
    fn chsh_dot_product_reaches_tsirelson() {
        let r = maximize_chsh(dot_correlator);
        assert!((r.lhs - TSIRELSON).abs() <= 1e-6, "lhs = {}", r.lhs);
        assert!(r.violated);
        if let Witness::Chsh(s) = r.witness {
            assert!((chsh_temporal(dot_correlator, &s) - r.lhs).abs() < 1e-12);
        } else {
            panic!("wrong witness");
        }
    }
}
