//! Exact arithmetic in the small finite fields GF(p) and GF(p²).
//!
//! A scalar is stored as its index in the field's enumeration order,
//! `c0 + p·c1` for the element `c0 + c1·x`; that is lexicographic on
//! `(c1, c0)`. Every exhaustive search in the crate walks scalars in this
//! order, so reports are reproducible.
//!
//! Quadratic extensions use a fixed modulus: the first irreducible
//! `x² + c` (c = 1, 2, ...), falling back to the first irreducible
//! `x² + x + c`. This yields `x²+x+1` for GF(4), `x²+1` for GF(9) and
//! `x²+2` for GF(25).

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported characteristic.
pub const MAX_CHARACTERISTIC: u32 = 13;

/// An element of a [`Field`], identified by its enumeration index.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Scalar(u8);

impl Scalar {
    pub const ZERO: Scalar = Scalar(0);
    pub const ONE: Scalar = Scalar(1);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Characteristic and degree, the JSON identity of a field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub k: u32,
}

struct Tables {
    p: u32,
    k: u32,
    q: usize,
    /// `x² = -(m1·x + m0)`; `None` for prime fields.
    modulus: Option<(u32, u32)>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

/// The field GF(p^k), k ∈ {1, 2}. Cloning is cheap.
#[derive(Clone)]
pub struct Field(Arc<Tables>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.k == other.0.k
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}", self.0.p)?;
        if self.0.k > 1 {
            write!(f, "^{}", self.0.k)?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

pub fn is_prime(n: u32) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Whether `x² + b·x + c` has no root in GF(p).
fn quadratic_is_irreducible(p: u32, b: u32, c: u32) -> bool {
    (0..p).all(|x| !(x * x + b * x + c).is_multiple_of(p))
}

fn conventional_modulus(p: u32) -> (u32, u32) {
    for b in 0..p {
        for c in 1..p {
            if quadratic_is_irreducible(p, b, c) {
                return (b, c);
            }
        }
    }
    unreachable!("every prime field has an irreducible quadratic")
}

impl Field {
    /// GF(p^k) with the conventional modulus.
    pub fn new(p: u32, k: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p > MAX_CHARACTERISTIC {
            return Err(Error::UnsupportedField(format!("characteristic {p} exceeds {MAX_CHARACTERISTIC}")));
        }
        if !(1..=2).contains(&k) {
            return Err(Error::UnsupportedField(format!("degree {k} (only 1 and 2 are supported)")));
        }
        let q = p.pow(k) as usize;
        let modulus = (k == 2).then(|| {
            let (b, c) = conventional_modulus(p);
            (b, c)
        });
        let split = |s: usize| ((s as u32) % p, (s as u32) / p);
        let join = |c0: u32, c1: u32| ((c0 % p) + p * (c1 % p)) as u8;
        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        for a in 0..q {
            let (a0, a1) = split(a);
            for b in 0..q {
                let (b0, b1) = split(b);
                add[a * q + b] = join(a0 + b0, a1 + b1);
                // (a0 + a1 x)(b0 + b1 x) with x² = -(m1 x + m0)
                let (c0, c1) = match modulus {
                    None => (a0 * b0, 0),
                    Some((m1, m0)) => {
                        let t = a1 * b1 % p;
                        let c0 = a0 * b0 + (p - m0) * t;
                        let c1 = a0 * b1 + a1 * b0 + (p - m1) * t;
                        (c0, c1)
                    }
                };
                mul[a * q + b] = join(c0, c1);
            }
        }
        let mut neg = vec![0u8; q];
        let mut inv = vec![0u8; q];
        for a in 0..q {
            neg[a] = (0..q).find(|&b| add[a * q + b] == 0).unwrap() as u8;
            if a != 0 {
                inv[a] = (1..q).find(|&b| mul[a * q + b] == 1).unwrap() as u8;
            }
        }
        Ok(Field(Arc::new(Tables { p, k, q, modulus, add, mul, neg, inv })))
    }

    pub fn from_spec(spec: FieldSpec) -> Result<Field> {
        Field::new(spec.p, spec.k)
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec { p: self.0.p, k: self.0.k }
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.0.k
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.0.q
    }

    /// Coefficients `(c0, c1)` of `x² + c1·x + c0`, for quadratic extensions.
    pub fn modulus(&self) -> Option<(u32, u32)> {
        self.0.modulus.map(|(m1, m0)| (m0, m1))
    }

    /// All scalars in enumeration order.
    pub fn elements(&self) -> impl Iterator<Item = Scalar> + Clone {
        (0..self.0.q).map(|i| Scalar(i as u8))
    }

    pub fn scalar(&self, index: usize) -> Option<Scalar> {
        (index < self.0.q).then_some(Scalar(index as u8))
    }

    /// The image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Scalar {
        Scalar(n.rem_euclid(self.0.p as i64) as u8)
    }

    pub fn from_coeffs(&self, c0: u32, c1: u32) -> Result<Scalar> {
        let p = self.0.p;
        if c0 >= p || c1 >= p || (self.0.k == 1 && c1 != 0) {
            return Err(Error::InvalidScalar(format!("({c0}, {c1}) is not canonical in {self}")));
        }
        Ok(Scalar((c0 + p * c1) as u8))
    }

    pub fn coeffs(&self, s: Scalar) -> (u32, u32) {
        let v = s.0 as u32;
        (v % self.0.p, v / self.0.p)
    }

    /// The adjoined root `x` of the modulus.
    pub fn generator(&self) -> Option<Scalar> {
        (self.0.k == 2).then(|| Scalar(self.0.p as u8))
    }

    #[inline]
    pub fn add(&self, a: Scalar, b: Scalar) -> Scalar {
        Scalar(self.0.add[a.index() * self.0.q + b.index()])
    }

    #[inline]
    pub fn sub(&self, a: Scalar, b: Scalar) -> Scalar {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Scalar, b: Scalar) -> Scalar {
        Scalar(self.0.mul[a.index() * self.0.q + b.index()])
    }

    #[inline]
    pub fn neg(&self, a: Scalar) -> Scalar {
        Scalar(self.0.neg[a.index()])
    }

    pub fn inv(&self, a: Scalar) -> Result<Scalar> {
        if a.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(Scalar(self.0.inv[a.index()]))
        }
    }

    /// `a·b` added into `acc`.
    #[inline]
    pub fn mul_add(&self, acc: Scalar, a: Scalar, b: Scalar) -> Scalar {
        self.add(acc, self.mul(a, b))
    }

    pub fn pow(&self, a: Scalar, mut n: u64) -> Scalar {
        let mut base = a;
        let mut acc = Scalar::ONE;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    /// The first ω ≠ 1 in enumeration order with ω³ = 1, if any.
    pub fn primitive_cube_root(&self) -> Option<Scalar> {
        self.elements().find(|&w| w != Scalar::ONE && !w.is_zero() && self.pow(w, 3) == Scalar::ONE)
    }

    /// `[c0]` or `[c0, c1]`, the JSON form of a scalar.
    pub fn to_json_coeffs(&self, s: Scalar) -> Vec<u32> {
        let (c0, c1) = self.coeffs(s);
        if self.0.k == 1 {
            vec![c0]
        } else {
            vec![c0, c1]
        }
    }

    pub fn from_json_coeffs(&self, coeffs: &[u32]) -> Result<Scalar> {
        match *coeffs {
            [c0] => self.from_coeffs(c0, 0),
            [c0, c1] => self.from_coeffs(c0, c1),
            _ => Err(Error::InvalidScalar(format!("{coeffs:?} has the wrong length"))),
        }
    }

    pub fn display(&self, s: Scalar) -> String {
        let (c0, c1) = self.coeffs(s);
        match (self.0.k, c0, c1) {
            (1, _, _) | (_, _, 0) => c0.to_string(),
            (_, 0, 1) => "x".into(),
            (_, 0, _) => format!("{c1}x"),
            (_, _, 1) => format!("x+{c0}"),
            _ => format!("{c1}x+{c0}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_fields() -> Vec<Field> {
        let mut out = Vec::new();
        for p in [2, 3, 5, 7, 11, 13] {
            out.push(Field::new(p, 1).unwrap());
            out.push(Field::new(p, 2).unwrap());
        }
        out
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(Field::new(4, 1), Err(Error::NotPrime(4))));
        assert!(matches!(Field::new(1, 1), Err(Error::NotPrime(1))));
        assert!(matches!(Field::new(2, 3), Err(Error::UnsupportedField(_))));
        assert!(matches!(Field::new(17, 1), Err(Error::UnsupportedField(_))));
    }

    #[test]
    fn conventional_moduli() {
        assert_eq!(Field::new(2, 2).unwrap().modulus(), Some((1, 1)));
        assert_eq!(Field::new(3, 2).unwrap().modulus(), Some((1, 0)));
        assert_eq!(Field::new(5, 2).unwrap().modulus(), Some((2, 0)));
        assert_eq!(Field::new(2, 1).unwrap().modulus(), None);
        // irreducible by the exhaustive root test
        for p in [2, 3, 5, 7, 11, 13] {
            let (c0, c1) = Field::new(p, 2).unwrap().modulus().unwrap();
            assert!(quadratic_is_irreducible(p, c1, c0));
        }
    }

    #[test]
    fn small_arithmetic() {
        let f2 = Field::new(2, 1).unwrap();
        assert_eq!(f2.elements().count(), 2);
        assert_eq!(f2.add(Scalar::ONE, Scalar::ONE), Scalar::ZERO);

        let f4 = Field::new(2, 2).unwrap();
        let x = f4.generator().unwrap();
        assert_eq!(f4.mul(x, x), f4.from_coeffs(1, 1).unwrap());

        let f3 = Field::new(3, 1).unwrap();
        let two = f3.from_int(2);
        assert_eq!(f3.inv(two).unwrap(), two);
        assert!(matches!(f3.inv(Scalar::ZERO), Err(Error::DivisionByZero)));
        assert_eq!(f3.from_int(-1), two);
    }

    #[test]
    fn field_axioms_exhaustive() {
        for f in all_fields() {
            let els: Vec<_> = f.elements().collect();
            for &a in &els {
                assert_eq!(f.add(a, Scalar::ZERO), a);
                assert_eq!(f.mul(a, Scalar::ONE), a);
                assert_eq!(f.add(a, f.neg(a)), Scalar::ZERO);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), Scalar::ONE, "{f:?}");
                }
                for &b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    assert_eq!(f.sub(f.add(a, b), b), a);
                }
            }
            // associativity and distributivity are cubic; q ≤ 169 keeps this fast
            for &a in &els {
                for &b in &els {
                    let ab = f.mul(a, b);
                    let a_b = f.add(a, b);
                    for &c in &els {
                        assert_eq!(f.mul(ab, c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.add(a_b, c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(ab, f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn cube_roots() {
        assert_eq!(Field::new(2, 1).unwrap().primitive_cube_root(), None);
        let f4 = Field::new(2, 2).unwrap();
        assert_eq!(f4.primitive_cube_root(), f4.generator());
        let f7 = Field::new(7, 1).unwrap();
        assert_eq!(f7.primitive_cube_root(), Some(f7.from_int(2)));
        for f in all_fields() {
            let q = f.order();
            let w = f.primitive_cube_root();
            assert_eq!(w.is_some(), (q - 1) % 3 == 0, "{f:?}");
            if let (Some(w), true) = (w, f.characteristic() != 3) {
                let w2 = f.mul(w, w);
                assert_eq!(f.add(f.add(w2, w), Scalar::ONE), Scalar::ZERO);
            }
        }
    }

    #[test]
    fn json_coefficients() {
        let f9 = Field::new(3, 2).unwrap();
        for s in f9.elements() {
            let c = f9.to_json_coeffs(s);
            assert_eq!(c.len(), 2);
            assert_eq!(f9.from_json_coeffs(&c).unwrap(), s);
        }
        assert!(f9.from_json_coeffs(&[3, 0]).is_err());
        let f3 = Field::new(3, 1).unwrap();
        assert_eq!(f3.to_json_coeffs(f3.from_int(2)), vec![2]);
        assert!(f3.from_json_coeffs(&[0, 1]).is_err());
    }
}
