//! Dense exact linear algebra over a [`Field`]: reduced row echelon forms
//! and coordinate solving.
//!
//! Pivots are taken at the first nonzero column of each reduced vector and
//! rows are kept sorted by pivot, so the echelon form of a span does not
//! depend on the order in which vectors were inserted.

use crate::ffield::{Field, Scalar};

/// `dst += t·src`
#[inline]
pub fn axpy(field: &Field, dst: &mut [Scalar], t: Scalar, src: &[Scalar]) {
    if t.is_zero() {
        return;
    }
    for (d, &s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d = field.mul_add(*d, t, s);
        }
    }
}

pub fn scale(field: &Field, v: &mut [Scalar], t: Scalar) {
    for x in v.iter_mut() {
        *x = field.mul(*x, t);
    }
}

pub fn is_zero(v: &[Scalar]) -> bool {
    v.iter().all(|x| x.is_zero())
}

/// Reduced row echelon basis of a subspace of `K^width`.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    width: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(field: &Field, width: usize) -> Self {
        Echelon { field: field.clone(), width, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn from_vectors<I>(field: &Field, width: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = Vec<Scalar>>,
    {
        let mut e = Echelon::new(field, width);
        for v in vectors {
            e.insert(v);
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rows(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.width
    }

    /// Subtract the span's component from `v`; the result is zero iff `v`
    /// lies in the span.
    pub fn reduce(&self, v: &mut [Scalar]) {
        debug_assert_eq!(v.len(), self.width);
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            let t = v[piv];
            if !t.is_zero() {
                axpy(&self.field, v, self.field.neg(t), row);
            }
        }
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        is_zero(&w)
    }

    /// Add `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, mut v: Vec<Scalar>) -> bool {
        self.reduce(&mut v);
        let Some(piv) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let lead_inv = self.field.inv(v[piv]).expect("nonzero pivot");
        scale(&self.field, &mut v, lead_inv);
        for row in &mut self.rows {
            let t = row[piv];
            if !t.is_zero() {
                axpy(&self.field, row, self.field.neg(t), &v);
            }
        }
        let at = self.pivots.partition_point(|&p| p < piv);
        self.pivots.insert(at, piv);
        self.rows.insert(at, v);
        true
    }
}

pub fn rank_of<'a, I>(field: &Field, width: usize, vectors: I) -> usize
where
    I: IntoIterator<Item = &'a Vec<Scalar>>,
{
    Echelon::from_vectors(field, width, vectors.into_iter().cloned()).rank()
}

/// Expresses vectors as combinations of a fixed linearly independent list.
#[derive(Clone, Debug)]
pub struct CoordinateSolver {
    field: Field,
    echelon: Echelon,
    /// `rows[r] = Σ combos[r][i]·inputs[i]`
    combos: Vec<Vec<Scalar>>,
    inputs: usize,
}

impl CoordinateSolver {
    /// Returns `None` if the vectors are linearly dependent.
    pub fn new(field: &Field, width: usize, vectors: &[Vec<Scalar>]) -> Option<Self> {
        let n = vectors.len();
        let mut echelon = Echelon::new(field, width);
        let mut combos: Vec<Vec<Scalar>> = Vec::with_capacity(n);
        for (i, v) in vectors.iter().enumerate() {
            let mut v = v.clone();
            let mut combo = vec![Scalar::ZERO; n];
            combo[i] = Scalar::ONE;
            for (r, &piv) in echelon.pivots.iter().enumerate() {
                let t = v[piv];
                if !t.is_zero() {
                    let nt = field.neg(t);
                    axpy(field, &mut v, nt, &echelon.rows[r]);
                    axpy(field, &mut combo, nt, &combos[r]);
                }
            }
            let piv = v.iter().position(|x| !x.is_zero())?;
            let lead_inv = field.inv(v[piv]).expect("nonzero pivot");
            scale(field, &mut v, lead_inv);
            scale(field, &mut combo, lead_inv);
            for (row, row_combo) in echelon.rows.iter_mut().zip(combos.iter_mut()) {
                let t = row[piv];
                if !t.is_zero() {
                    let nt = field.neg(t);
                    axpy(field, row, nt, &v);
                    axpy(field, row_combo, nt, &combo);
                }
            }
            let at = echelon.pivots.partition_point(|&p| p < piv);
            echelon.pivots.insert(at, piv);
            echelon.rows.insert(at, v);
            combos.insert(at, combo);
        }
        Some(CoordinateSolver { field: field.clone(), echelon, combos, inputs: n })
    }

    pub fn len(&self) -> usize {
        self.inputs
    }

    pub fn is_empty(&self) -> bool {
        self.inputs == 0
    }

    /// Coordinates of `v` in the input list, or `None` outside the span.
    pub fn solve(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let mut coords = vec![Scalar::ZERO; self.inputs];
        let mut rest = v.to_vec();
        for (r, &piv) in self.echelon.pivots.iter().enumerate() {
            let t = v[piv];
            if !t.is_zero() {
                axpy(&self.field, &mut coords, t, &self.combos[r]);
                axpy(&self.field, &mut rest, self.field.neg(t), &self.echelon.rows[r]);
            }
        }
        is_zero(&rest).then_some(coords)
    }
}
