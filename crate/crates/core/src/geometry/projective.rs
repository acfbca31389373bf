//! The projective line over GF(Q) and fractional linear maps on it.

use super::field::{Elem, FieldCtx};

/// A point of `GF(Q) ∪ {∞}`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum ProjectivePoint {
    Infinity,
    Finite(Elem),
}

impl ProjectivePoint {
    /// `∞ -> 0`, element `e -> e + 1`.
    pub fn index(self) -> usize {
        match self {
            ProjectivePoint::Infinity => 0,
            ProjectivePoint::Finite(e) => e as usize + 1,
        }
    }

    pub fn from_index(i: usize) -> Self {
        match i {
            0 => ProjectivePoint::Infinity,
            _ => ProjectivePoint::Finite(i as Elem - 1),
        }
    }
}

/// `x -> (a x + b) / (c x + d)` with `ad - bc != 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mobius {
    pub a: Elem,
    pub b: Elem,
    pub c: Elem,
    pub d: Elem,
}

impl Mobius {
    pub fn is_invertible(&self, f: &FieldCtx) -> bool {
        f.sub(f.mul(self.a, self.d), f.mul(self.b, self.c)) != 0
    }

    pub fn apply(&self, f: &FieldCtx, x: ProjectivePoint) -> ProjectivePoint {
        let (num, den) = match x {
            ProjectivePoint::Infinity => (self.a, self.c),
            ProjectivePoint::Finite(x) => (f.add(f.mul(self.a, x), self.b), f.add(f.mul(self.c, x), self.d)),
        };
        if den == 0 {
            ProjectivePoint::Infinity
        } else {
            ProjectivePoint::Finite(f.div(num, den).expect("nonzero denominator"))
        }
    }

    /// The unique map sending `∞, 0, 1` to `a, b, c` (distinct points; only
    /// `a` may be `∞`).
    pub fn through(f: &FieldCtx, a: ProjectivePoint, b: Elem, c: Elem) -> Self {
        let cmb = f.sub(c, b);
        match a {
            ProjectivePoint::Infinity => Mobius { a: cmb, b, c: 0, d: 1 },
            ProjectivePoint::Finite(a) => {
                let amc = f.sub(a, c);
                Mobius {
                    a: f.mul(a, cmb),
                    b: f.mul(b, amc),
                    c: cmb,
                    d: amc,
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ProjectivePoint::*;

    #[test]
    fn indices_round_trip() {
        for i in 0..10 {
            assert_eq!(ProjectivePoint::from_index(i).index(), i);
        }
        assert_eq!(Infinity.index(), 0);
    }

    #[test]
    fn three_point_maps() {
        let f = FieldCtx::new(9).unwrap();
        for a in 0..10usize {
            for b in 1..10usize {
                for c in 1..10usize {
                    if a == b || b == c || a == c || (a != 0 && (a > b || a > c)) {
                        continue;
                    }
                    let pa = ProjectivePoint::from_index(a);
                    let (eb, ec) = (b as Elem - 1, c as Elem - 1);
                    let m = Mobius::through(&f, pa, eb, ec);
                    assert!(m.is_invertible(&f));
                    assert_eq!(m.apply(&f, Infinity), pa);
                    assert_eq!(m.apply(&f, Finite(0)), Finite(eb));
                    assert_eq!(m.apply(&f, Finite(1)), Finite(ec));
                }
            }
        }
    }
}
