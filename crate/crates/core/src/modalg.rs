//! The group algebra `KG` of a p-group over a field of characteristic `p`,
//! its augmentation-ideal filtration and Jennings weight structure.
//!
//! Coordinates of an [`AlgebraElement`] follow the group's element
//! enumeration. The regular basis (products of `u - 1` over Jennings
//! representatives) is a second coordinate system in which membership in
//! `I^n` is read off from weights.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ffield::{Field, Scalar};
use crate::linalg::{axpy, CoordinateSolver, Echelon};
use crate::pgroup::{Elem, Group, Subgroup};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraElement {
    coeffs: Vec<Scalar>,
}

impl AlgebraElement {
    pub fn from_coeffs(coeffs: Vec<Scalar>) -> Self {
        AlgebraElement { coeffs }
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Scalar> {
        self.coeffs
    }

    pub fn coeff(&self, g: Elem) -> Scalar {
        self.coeffs[g]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Nonzero terms `(g, coefficient)` in enumeration order.
    pub fn support(&self) -> impl Iterator<Item = (Elem, Scalar)> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(g, &c)| (g, c))
    }
}

/// `KG`; cheap to clone.
#[derive(Clone, Debug)]
pub struct GroupAlgebra {
    group: Arc<Group>,
    field: Field,
}

impl GroupAlgebra {
    pub fn new(group: Arc<Group>, field: Field) -> Result<Self> {
        if field.characteristic() != group.p() {
            return Err(Error::UnsupportedField(format!(
                "characteristic {} does not match the {}-group {}",
                field.characteristic(),
                group.p(),
                group.label()
            )));
        }
        Ok(GroupAlgebra { group, field })
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.group.order()
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement { coeffs: vec![Scalar::ZERO; self.dim()] }
    }

    pub fn one(&self) -> AlgebraElement {
        self.basis(0)
    }

    /// The group element `g` as an algebra element.
    pub fn basis(&self, g: Elem) -> AlgebraElement {
        let mut x = self.zero();
        x.coeffs[g] = Scalar::ONE;
        x
    }

    /// `g - 1`
    pub fn g_minus_one(&self, g: Elem) -> AlgebraElement {
        let mut x = self.zero();
        x.coeffs[g] = self.field.add(x.coeffs[g], Scalar::ONE);
        x.coeffs[0] = self.field.sub(x.coeffs[0], Scalar::ONE);
        x
    }

    /// `1 + g`, the form used in characteristic 2.
    pub fn one_plus(&self, g: Elem) -> AlgebraElement {
        let mut x = self.one();
        x.coeffs[g] = self.field.add(x.coeffs[g], Scalar::ONE);
        x
    }

    pub fn from_terms(&self, terms: &[(Elem, Scalar)]) -> AlgebraElement {
        let mut x = self.zero();
        for &(g, c) in terms {
            x.coeffs[g] = self.field.add(x.coeffs[g], c);
        }
        x
    }

    pub fn check(&self, x: &AlgebraElement) -> Result<()> {
        if x.coeffs.len() == self.dim() {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    pub fn add(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        let coeffs = x.coeffs.iter().zip(&y.coeffs).map(|(&a, &b)| self.field.add(a, b)).collect();
        AlgebraElement { coeffs }
    }

    pub fn sub(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        let coeffs = x.coeffs.iter().zip(&y.coeffs).map(|(&a, &b)| self.field.sub(a, b)).collect();
        AlgebraElement { coeffs }
    }

    pub fn neg(&self, x: &AlgebraElement) -> AlgebraElement {
        AlgebraElement { coeffs: x.coeffs.iter().map(|&a| self.field.neg(a)).collect() }
    }

    pub fn scale(&self, t: Scalar, x: &AlgebraElement) -> AlgebraElement {
        AlgebraElement { coeffs: x.coeffs.iter().map(|&a| self.field.mul(t, a)).collect() }
    }

    /// `x += t·y`
    pub fn add_scaled(&self, x: &mut AlgebraElement, t: Scalar, y: &AlgebraElement) {
        axpy(&self.field, &mut x.coeffs, t, &y.coeffs);
    }

    pub fn mul(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        let mut out = vec![Scalar::ZERO; self.dim()];
        let ys: Vec<(Elem, Scalar)> = y.support().collect();
        for (g, a) in x.support() {
            for &(h, b) in &ys {
                let k = self.group.mul(g, h);
                out[k] = self.field.mul_add(out[k], a, b);
            }
        }
        AlgebraElement { coeffs: out }
    }

    pub fn try_mul(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.mul(x, y))
    }

    pub fn pow(&self, x: &AlgebraElement, n: u32) -> AlgebraElement {
        (0..n).fold(self.one(), |acc, _| self.mul(&acc, x))
    }

    /// Product of a word of factors; the empty word is 1.
    pub fn product<'a, I: IntoIterator<Item = &'a AlgebraElement>>(&self, factors: I) -> AlgebraElement {
        factors.into_iter().fold(self.one(), |acc, f| self.mul(&acc, f))
    }

    /// Coefficient sum.
    pub fn augmentation(&self, x: &AlgebraElement) -> Scalar {
        x.coeffs.iter().fold(Scalar::ZERO, |acc, &c| self.field.add(acc, c))
    }

    pub fn display(&self, x: &AlgebraElement) -> String {
        let terms: Vec<String> = x
            .support()
            .map(|(g, c)| {
                let gs = self.group.display(g);
                match (c == Scalar::ONE, gs.as_str()) {
                    (true, _) => gs,
                    (false, "1") => self.field.display(c),
                    (false, _) => format!("{}*{}", self.field.display(c), gs),
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

/// Jennings weight structure of `G`.
#[derive(Clone, Debug)]
pub struct JenningsData {
    /// `dimension_subgroups[n-1] = D_n`, ending with the first trivial term.
    pub dimension_subgroups: Vec<Subgroup>,
    /// `series[n-1] = M_n` from the recursion, same length.
    pub series: Vec<Subgroup>,
    /// `{i : D_i ≠ D_{i+1}}`
    pub index_set: Vec<usize>,
    /// `d_i = log_p [D_i : D_{i+1}]`, keyed by `i ∈ index_set`.
    pub multiplicities: BTreeMap<usize, usize>,
    /// Representatives `u_{ij}` as `(i, element)`, in factor order.
    pub representatives: Vec<(usize, Elem)>,
}

impl JenningsData {
    pub fn d(&self, i: usize) -> usize {
        self.multiplicities.get(&i).copied().unwrap_or(0)
    }

    /// `D_n`; trivial beyond the stored range.
    pub fn dimension_subgroup(&self, n: usize) -> Option<&Subgroup> {
        assert!(n >= 1, "dimension subgroups start at D_1");
        self.dimension_subgroups.get(n - 1)
    }

    /// Largest `n` with `g ∈ D_n`; `None` for the identity.
    pub fn element_weight(&self, g: Elem) -> Option<usize> {
        if g == 0 {
            return None;
        }
        self.dimension_subgroups.iter().rposition(|d| d.contains(g)).map(|i| i + 1)
    }
}

/// Regular elements `Π (u_{lk} - 1)^{y_{lk}}`, listed by exponent tuple
/// in lexicographic order (first factor most significant).
#[derive(Clone, Debug)]
pub struct RegularBasis {
    pub exponents: Vec<Vec<u32>>,
    pub weights: Vec<usize>,
    pub elements: Vec<AlgebraElement>,
    solver: CoordinateSolver,
}

/// `KG` together with its filtration, Jennings data and regular basis.
#[derive(Debug)]
pub struct Structure {
    alg: GroupAlgebra,
    /// `powers[n-1]` is the echelon basis of `I^n`, ending with `I^{s+1} = 0`.
    powers: Vec<Echelon>,
    jennings: JenningsData,
    regular: RegularBasis,
    /// Regular-basis indices of each weight.
    by_weight: Vec<Vec<usize>>,
}

impl Structure {
    pub fn new(alg: GroupAlgebra) -> Result<Arc<Structure>> {
        let powers = ideal_powers(&alg);
        let jennings = jennings(&alg, &powers)?;
        let regular = regular_basis(&alg, &jennings)?;
        let top = regular.weights.iter().copied().max().unwrap_or(0);
        let mut by_weight = vec![Vec::new(); top + 1];
        for (i, &w) in regular.weights.iter().enumerate() {
            by_weight[w].push(i);
        }
        let s = Structure { alg, powers, jennings, regular, by_weight };
        // Jennings' theorem: weights >= n span I^n
        for n in 1..=s.nilpotency_index() {
            let count = s.regular.weights.iter().filter(|&&w| w >= n).count();
            if count != s.ideal_rank(n) {
                return Err(Error::JenningsMismatch(format!(
                    "{} regular elements of weight >= {n} but rank I^{n} = {}",
                    count,
                    s.ideal_rank(n)
                )));
            }
        }
        Ok(Arc::new(s))
    }

    pub fn for_group(group: Arc<Group>, field: Field) -> Result<Arc<Structure>> {
        Structure::new(GroupAlgebra::new(group, field)?)
    }

    pub fn algebra(&self) -> &GroupAlgebra {
        &self.alg
    }

    pub fn group(&self) -> &Arc<Group> {
        self.alg.group()
    }

    pub fn field(&self) -> &Field {
        self.alg.field()
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    /// Least `n` with `I^n = 0`.
    pub fn nilpotency_index(&self) -> usize {
        self.powers.len()
    }

    /// Echelon basis of `I^n` (`n >= 1`); zero beyond the nilpotency index.
    pub fn ideal_power(&self, n: usize) -> &Echelon {
        assert!(n >= 1, "ideal powers start at I^1");
        &self.powers[(n - 1).min(self.powers.len() - 1)]
    }

    pub fn ideal_rank(&self, n: usize) -> usize {
        if n == 0 {
            self.dim()
        } else {
            self.ideal_power(n).rank()
        }
    }

    /// `dim I^n / I^{n+1}`
    pub fn quotient_dim(&self, n: usize) -> usize {
        self.ideal_rank(n) - self.ideal_rank(n + 1)
    }

    pub fn ideal_ranks(&self) -> Vec<usize> {
        self.powers.iter().map(Echelon::rank).collect()
    }

    pub fn jennings(&self) -> &JenningsData {
        &self.jennings
    }

    pub fn regular(&self) -> &RegularBasis {
        &self.regular
    }

    /// `{g : g - 1 ∈ I^n}` by membership in the echelon basis.
    pub fn dimension_subgroup_by_membership(&self, n: usize) -> Vec<Elem> {
        let echelon = self.ideal_power(n.max(1));
        self.group().elements().filter(|&g| echelon.contains(self.alg.g_minus_one(g).coeffs())).collect()
    }

    /// Regular elements of weight at least `t`.
    pub fn regular_basis(&self, t: usize) -> Vec<&AlgebraElement> {
        self.regular.weights.iter().zip(&self.regular.elements).filter(|(&w, _)| w >= t).map(|(_, e)| e).collect()
    }

    /// Regular-basis indices of weight exactly `n`.
    pub fn weight_indices(&self, n: usize) -> &[usize] {
        self.by_weight.get(n).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Coordinates of `x` in the regular basis.
    pub fn regular_coords(&self, x: &AlgebraElement) -> Vec<Scalar> {
        self.regular.solver.solve(x.coeffs()).expect("the regular elements form a basis of KG")
    }

    /// Inverse of [`Structure::regular_coords`].
    pub fn from_regular_coords(&self, coords: &[Scalar]) -> AlgebraElement {
        let mut x = self.alg.zero();
        for (c, e) in coords.iter().zip(&self.regular.elements) {
            self.alg.add_scaled(&mut x, *c, e);
        }
        x
    }

    /// Largest `n` with `x ∈ I^n`; `None` for zero.
    pub fn depth(&self, x: &AlgebraElement) -> Option<usize> {
        self.depth_of_coords(&self.regular_coords(x))
    }

    pub fn depth_of_coords(&self, coords: &[Scalar]) -> Option<usize> {
        coords.iter().zip(&self.regular.weights).filter(|(c, _)| !c.is_zero()).map(|(_, &w)| w).min()
    }

    pub fn in_ideal_power(&self, x: &AlgebraElement, n: usize) -> bool {
        if n == 0 {
            return true;
        }
        self.ideal_power(n).contains(x.coeffs())
    }

    /// Coordinates of `x + I^{n+1}` over the weight-`n` regular elements.
    pub fn class_in_quotient(&self, x: &AlgebraElement, n: usize) -> Result<Vec<Scalar>> {
        self.alg.check(x)?;
        let coords = self.regular_coords(x);
        self.class_of_coords(&coords, n)
    }

    pub fn class_of_coords(&self, coords: &[Scalar], n: usize) -> Result<Vec<Scalar>> {
        if let Some(d) = self.depth_of_coords(coords) {
            if d < n {
                return Err(Error::NotInIdealPower(n));
            }
        }
        Ok(self.weight_indices(n).iter().map(|&i| coords[i]).collect())
    }
}

/// `I^1, I^2, …` until zero. `I^n = I^{n-1}·I` and `I` is generated as a
/// left ideal by `x - 1` over group generators `x`, so
/// `I^n = span{r·(x - 1)}` over rows `r` of `I^{n-1}`.
fn ideal_powers(alg: &GroupAlgebra) -> Vec<Echelon> {
    let field = alg.field();
    let dim = alg.dim();
    let first = Echelon::from_vectors(field, dim, alg.group().elements().skip(1).map(|g| alg.g_minus_one(g).into_coeffs()));
    let gens: Vec<AlgebraElement> = alg.group().generators().iter().map(|&g| alg.g_minus_one(g)).collect();
    let mut out = vec![first];
    while out.last().expect("nonempty").rank() > 0 {
        let prev = out.last().expect("nonempty");
        let mut next = Echelon::new(field, dim);
        for row in prev.rows() {
            let r = AlgebraElement::from_coeffs(row.clone());
            for x in &gens {
                next.insert(alg.mul(&r, x).into_coeffs());
            }
        }
        out.push(next);
    }
    out
}

fn jennings(alg: &GroupAlgebra, powers: &[Echelon]) -> Result<JenningsData> {
    let group = alg.group();
    let dimension_subgroups: Vec<Subgroup> =
        powers.iter().map(|e| group.closure(group.elements().filter(|&g| e.contains(alg.g_minus_one(g).coeffs())))).collect();
    let mut dims = dimension_subgroups;
    while dims.len() > 1 && dims[dims.len() - 2].is_trivial() {
        dims.pop();
    }
    let mut series = group.jennings_series();
    while series.len() < dims.len() {
        series.push(group.trivial());
    }
    while dims.len() < series.len() {
        dims.push(group.trivial());
    }
    for (n, (d, m)) in dims.iter().zip(&series).enumerate() {
        if d != m {
            return Err(Error::JenningsMismatch(format!("D_{0} has order {1} but M_{0} has order {2}", n + 1, d.order(), m.order())));
        }
    }
    let p = group.p() as usize;
    let mut index_set = Vec::new();
    let mut multiplicities = BTreeMap::new();
    let mut representatives = Vec::new();
    for i in 0..dims.len() - 1 {
        let (upper, lower) = (&dims[i], &dims[i + 1]);
        if upper == lower {
            continue;
        }
        let weight = i + 1;
        // quotient must be elementary abelian
        for &g in upper.members() {
            if !lower.contains(group.pow(g, p as i64)) {
                return Err(Error::JenningsMismatch(format!("D_{weight}/D_{} is not elementary abelian", weight + 1)));
            }
        }
        let mut span = lower.clone();
        let mut d = 0;
        for &g in upper.members() {
            if !span.contains(g) {
                representatives.push((weight, g));
                let mut gens = span.members().to_vec();
                gens.push(g);
                span = group.closure(gens);
                d += 1;
            }
        }
        index_set.push(weight);
        multiplicities.insert(weight, d);
    }
    Ok(JenningsData { dimension_subgroups: dims, series, index_set, multiplicities, representatives })
}

fn regular_basis(alg: &GroupAlgebra, jd: &JenningsData) -> Result<RegularBasis> {
    let p = alg.group().p();
    let r = jd.representatives.len();
    let factors: Vec<AlgebraElement> = jd.representatives.iter().map(|&(_, g)| alg.g_minus_one(g)).collect();
    // powers[k][y] = (u_k - 1)^y
    let powers: Vec<Vec<AlgebraElement>> = factors
        .iter()
        .map(|f| {
            let mut v = vec![alg.one()];
            for _ in 1..p {
                let next = alg.mul(v.last().expect("nonempty"), f);
                v.push(next);
            }
            v
        })
        .collect();
    let mut exponents = vec![Vec::new()];
    for _ in 0..r {
        exponents = exponents
            .into_iter()
            .flat_map(|t: Vec<u32>| {
                (0..p).map(move |y| {
                    let mut t = t.clone();
                    t.push(y);
                    t
                })
            })
            .collect();
    }
    if exponents.len() != alg.dim() {
        return Err(Error::JenningsMismatch(format!("{} regular elements for |G| = {}", exponents.len(), alg.dim())));
    }
    let weights: Vec<usize> =
        exponents.iter().map(|t| t.iter().zip(&jd.representatives).map(|(&y, &(w, _))| w * y as usize).sum()).collect();
    let elements: Vec<AlgebraElement> =
        exponents.iter().map(|t| alg.product(t.iter().enumerate().map(|(k, &y)| &powers[k][y as usize]))).collect();
    let vectors: Vec<Vec<_>> = elements.iter().map(|e| e.coeffs().to_vec()).collect();
    let solver = CoordinateSolver::new(alg.field(), alg.dim(), &vectors)
        .ok_or_else(|| Error::JenningsMismatch("regular elements are linearly dependent".into()))?;
    Ok(RegularBasis { exponents, weights, elements, solver })
}
