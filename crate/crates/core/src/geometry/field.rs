//! Arithmetic in GF(p^m).
//!
//! An element is the integer `sum c_i p^i` encoding its coefficient vector
//! over GF(p) in the basis `1, x, ..., x^(m-1)`. Multiplication goes through
//! log/exp tables over a primitive element.

use super::GeometryError;

pub type Elem = u32;

/// Largest field order supported (keeps the tables small).
pub const MAX_FIELD_ORDER: u32 = 1 << 16;

#[derive(Clone, Debug)]
pub struct FieldCtx {
    p: u32,
    m: u32,
    order: u32,
    /// Monic modulus, low degree first; `modulus.len() == m + 1`.
    modulus: Vec<u32>,
    exp: Vec<Elem>,
    log: Vec<u32>,
}

impl FieldCtx {
    pub fn new(order: u32) -> Result<Self, GeometryError> {
        let (p, m) = prime_power(order)
            .ok_or_else(|| GeometryError::InvalidParams(format!("field order {order} is not a prime power")))?;
        if order > MAX_FIELD_ORDER {
            return Err(GeometryError::ScaleLimit(format!("field order {order} exceeds {MAX_FIELD_ORDER}")));
        }
        let modulus = smallest_irreducible(p, m);
        let mut ctx = Self {
            p,
            m,
            order,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
        };
        ctx.build_tables();
        Ok(ctx)
    }

    fn build_tables(&mut self) {
        let n = self.order as usize;
        if n == 2 {
            self.exp = vec![1, 1];
            self.log = vec![0, 0];
            return;
        }
        for g in 2..self.order {
            let mut exp = Vec::with_capacity(n);
            let mut x: Elem = 1;
            loop {
                exp.push(x);
                x = self.slow_mul(x, g);
                if x == 1 {
                    break;
                }
            }
            if exp.len() == n - 1 {
                let mut log = vec![0u32; n];
                for (i, &e) in exp.iter().enumerate() {
                    log[e as usize] = i as u32;
                }
                exp.extend_from_within(..);
                self.exp = exp;
                self.log = log;
                return;
            }
        }
        unreachable!("every finite field has a primitive element");
    }

    fn digits(&self, mut a: Elem) -> Vec<u32> {
        (0..self.m)
            .map(|_| {
                let d = a % self.p;
                a /= self.p;
                d
            })
            .collect()
    }

    fn from_digits(&self, ds: &[u32]) -> Elem {
        ds.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    fn slow_mul(&self, a: Elem, b: Elem) -> Elem {
        let p = self.p as u64;
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u64; 2 * self.m as usize];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        let m = self.m as usize;
        for deg in (m..prod.len()).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            // subtract c * x^(deg-m) * modulus
            for (i, &f) in self.modulus.iter().enumerate() {
                let idx = deg - m + i;
                prod[idx] = (prod[idx] + (p - c) * f as u64) % p;
            }
        }
        let low: Vec<u32> = prod[..m].iter().map(|&v| v as u32).collect();
        self.from_digits(&low)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Coefficients of the modulus, lowest degree first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.order
    }

    pub fn zero(&self) -> Elem {
        0
    }

    pub fn one(&self) -> Elem {
        1
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            return a ^ b;
        }
        let (mut a, mut b) = (a, b);
        let (mut out, mut place) = (0, 1);
        for _ in 0..self.m {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn neg(&self, a: Elem) -> Elem {
        if self.p == 2 {
            return a;
        }
        let ds: Vec<u32> = self.digits(a).into_iter().map(|d| (self.p - d) % self.p).collect();
        self.from_digits(&ds)
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    pub fn inv(&self, a: Elem) -> Result<Elem, GeometryError> {
        if a == 0 {
            return Err(GeometryError::DivisionByZero);
        }
        let l = self.log[a as usize];
        Ok(self.exp[((self.order - 1 - l) % (self.order - 1)) as usize])
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem, GeometryError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let l = self.log[a as usize] as u64 * (e % (self.order as u64 - 1));
        self.exp[(l % (self.order as u64 - 1)) as usize]
    }

    /// The subfield of order `q`, i.e. `{x : x^q = x}`.
    pub fn subfield(&self, q: u32) -> Result<Vec<Elem>, GeometryError> {
        let Some((p, k)) = prime_power(q) else {
            return Err(GeometryError::InvalidParams(format!("{q} is not a prime power")));
        };
        if p != self.p || self.m % k != 0 {
            return Err(GeometryError::InvalidParams(format!("GF({q}) is not a subfield of GF({})", self.order)));
        }
        Ok(self.elements().filter(|&x| self.pow(x, q as u64) == x).collect())
    }
}

/// `(p, m)` with `n = p^m`, `p` prime.
pub fn prime_power(n: u32) -> Option<(u32, u32)> {
    if n < 2 {
        return None;
    }
    let p = (2..=n).find(|d| n % d == 0)?;
    let (mut rest, mut m) = (n, 0);
    while rest % p == 0 {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

/// Lexicographically smallest monic irreducible polynomial of degree `m` over
/// GF(p), comparing coefficients from the highest degree down.
fn smallest_irreducible(p: u32, m: u32) -> Vec<u32> {
    let count = (p as u64).pow(m);
    for enc in 0..count {
        let mut f = poly_from(enc, p, m);
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree");
}

fn poly_from(mut enc: u64, p: u32, len: u32) -> Vec<u32> {
    (0..len)
        .map(|_| {
            let d = (enc % p as u64) as u32;
            enc /= p as u64;
            d
        })
        .collect()
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() as u32 - 1;
    for d in 1..=deg / 2 {
        for enc in 0..(p as u64).pow(d) {
            let mut g = poly_from(enc, p, d);
            g.push(1);
            if poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn poly_rem(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u64> = f.iter().map(|&c| c as u64).collect();
    let dg = g.len() - 1;
    let p = p as u64;
    for top in (dg..r.len()).rev() {
        let c = r[top] % p;
        if c == 0 {
            continue;
        }
        for (i, &gc) in g.iter().enumerate() {
            let idx = top - dg + i;
            r[idx] = (r[idx] + (p - c) * gc as u64) % p;
        }
    }
    r.truncate(dg);
    r.into_iter().map(|c| c as u32).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_axioms(f: &FieldCtx) {
        let q = f.order();
        for a in 0..q {
            assert_eq!(f.add(a, 0), a);
            assert_eq!(f.mul(a, 1), a);
            assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
            for b in 0..q {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                assert_eq!(f.mul(a, b), f.slow_mul(a, b));
                for c in 0..q {
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(16), Some((2, 4)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
        assert!(matches!(FieldCtx::new(6), Err(GeometryError::InvalidParams(_))));
    }

    #[test]
    fn small_fields_satisfy_axioms() {
        let gf2 = FieldCtx::new(2).unwrap();
        assert_eq!(gf2.add(1, 1), 0);
        for q in [2, 3, 4, 5, 8, 9, 16, 25, 27] {
            check_axioms(&FieldCtx::new(q).unwrap());
        }
    }

    #[test]
    fn moduli_are_smallest_irreducibles() {
        assert_eq!(FieldCtx::new(4).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(FieldCtx::new(8).unwrap().modulus(), &[1, 1, 0, 1]);
        assert_eq!(FieldCtx::new(16).unwrap().modulus(), &[1, 1, 0, 0, 1]);
        assert_eq!(FieldCtx::new(9).unwrap().modulus(), &[1, 0, 1]);
    }

    #[test]
    fn inverses_in_gf16_and_division_by_zero() {
        let f = FieldCtx::new(16).unwrap();
        for x in 1..16 {
            assert_eq!(f.mul(x, f.inv(x).unwrap()), 1);
        }
        assert_eq!(f.inv(0), Err(GeometryError::DivisionByZero));
    }

    #[test]
    fn subfields() {
        let f = FieldCtx::new(16).unwrap();
        assert_eq!(f.subfield(2).unwrap(), vec![0, 1]);
        let gf4 = f.subfield(4).unwrap();
        assert_eq!(gf4.len(), 4);
        for &a in &gf4 {
            for &b in &gf4 {
                assert!(gf4.contains(&f.mul(a, b)) && gf4.contains(&f.add(a, b)));
            }
        }
        assert!(f.subfield(8).is_err());
        assert_eq!(FieldCtx::new(81).unwrap().subfield(9).unwrap().len(), 9);
    }
}
