//! The two-dimensional ∗-differential calculus on `n` cyclically ordered
//! points coming from the bidirected polygon.
//!
//! Basis of the graded pieces, with vertex arithmetic mod `n`:
//!
//! | degree | basis element            | storage      | left / right vertex |
//! |--------|--------------------------|--------------|---------------------|
//! | 0      | `δ_μ`                    | `deg0[μ]`    | `μ / μ`             |
//! | (1,0)  | `ξ_{μ→μ+1}`              | `fwd[μ]`     | `μ / μ+1`           |
//! | (0,1)  | `ξ_{μ→μ-1}`              | `bwd[μ]`     | `μ / μ-1`           |
//! | (1,1)  | `ξ_{μ→μ-1} ∧ ξ_{μ-1→μ}`  | `deg2[μ]`    | `μ / μ`             |
//!
//! `Ω^{2,0} = Ω^{0,2} = 0` and `Ω³ = 0`, so nothing else is stored.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::{Error, Result, C64};

const I: C64 = C64::new(0.0, 1.0);

/// A complex function on the vertex set, i.e. an element of `C(V)`.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexFunction {
    values: Vec<C64>,
}

impl VertexFunction {
    pub fn new(values: Vec<C64>) -> Self {
        Self { values }
    }

    pub fn from_real(values: &[f64]) -> Self {
        Self::new(values.iter().map(|&v| C64::new(v, 0.0)).collect())
    }

    pub fn zeros(n: usize) -> Self {
        Self::constant(n, C64::new(0.0, 0.0))
    }

    pub fn constant(n: usize, value: C64) -> Self {
        Self::new(vec![value; n])
    }

    /// Indicator of vertex `vertex`.
    pub fn delta(n: usize, vertex: usize) -> Self {
        let mut f = Self::zeros(n);
        f.values[vertex % n] = C64::new(1.0, 0.0);
        f
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<C64> {
        self.values
    }

    /// Value at `vertex`, taken mod `n`.
    pub fn at(&self, vertex: usize) -> C64 {
        self.values[vertex % self.values.len()]
    }

    pub fn conj(&self) -> Self {
        Self::new(self.values.iter().map(|v| v.conj()).collect())
    }

    pub fn scale(&self, c: C64) -> Self {
        Self::new(self.values.iter().map(|v| v * c).collect())
    }

    /// Membership in the positive cone `C(V)⁺`: every value real and
    /// nonnegative up to `tol`.
    pub fn is_positive(&self, tol: f64) -> bool {
        self.values.iter().all(|v| v.im.abs() <= tol && v.re >= -tol)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Mul for &VertexFunction {
    type Output = VertexFunction;

    fn mul(self, rhs: &VertexFunction) -> VertexFunction {
        VertexFunction::new(self.values.iter().zip(&rhs.values).map(|(a, b)| a * b).collect())
    }
}

impl Add for &VertexFunction {
    type Output = VertexFunction;

    fn add(self, rhs: &VertexFunction) -> VertexFunction {
        VertexFunction::new(self.values.iter().zip(&rhs.values).map(|(a, b)| a + b).collect())
    }
}

/// The state `τ(f) = (1/n) Σ_μ f(μ)`.
pub fn state_tau(f: &VertexFunction) -> C64 {
    let n = f.len();
    f.values.iter().sum::<C64>() / n as f64
}

/// Basis element of `Ω⁰ ⊕ Ω¹ ⊕ Ω²` used for enumerating identities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisForm {
    /// `δ_μ`
    Delta(usize),
    /// `ξ_{μ→μ+1}`
    Fwd(usize),
    /// `ξ_{μ→μ-1}`
    Bwd(usize),
    /// `ξ_{μ→μ-1} ∧ ξ_{μ-1→μ}`
    Vol(usize),
}

impl BasisForm {
    pub fn degree(self) -> usize {
        match self {
            BasisForm::Delta(_) => 0,
            BasisForm::Fwd(_) | BasisForm::Bwd(_) => 1,
            BasisForm::Vol(_) => 2,
        }
    }
}

/// Which side of the bimodule acts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Element of `Ω⁰ ⊕ Ω¹ ⊕ Ω²`, stored densely.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedForm {
    pub deg0: VertexFunction,
    /// Coefficient of `ξ_{μ→μ+1}` at index `μ`; spans `Ω^{1,0}`.
    pub fwd: Vec<C64>,
    /// Coefficient of `ξ_{μ→μ-1}` at index `μ`; spans `Ω^{0,1}`.
    pub bwd: Vec<C64>,
    /// Coefficient of `ξ_{μ→μ-1} ∧ ξ_{μ-1→μ}` at index `μ`; spans `Ω^{1,1}`.
    pub deg2: Vec<C64>,
}

impl GradedForm {
    pub fn zero(n: usize) -> Self {
        let z = vec![C64::new(0.0, 0.0); n];
        Self {
            deg0: VertexFunction::zeros(n),
            fwd: z.clone(),
            bwd: z.clone(),
            deg2: z,
        }
    }

    pub fn n(&self) -> usize {
        self.fwd.len()
    }

    pub fn function(f: VertexFunction) -> Self {
        let mut w = Self::zero(f.len());
        w.deg0 = f;
        w
    }

    pub fn basis(n: usize, b: BasisForm) -> Self {
        let mut w = Self::zero(n);
        let one = C64::new(1.0, 0.0);
        match b {
            BasisForm::Delta(m) => w.deg0.values[m % n] = one,
            BasisForm::Fwd(m) => w.fwd[m % n] = one,
            BasisForm::Bwd(m) => w.bwd[m % n] = one,
            BasisForm::Vol(m) => w.deg2[m % n] = one,
        }
        w
    }

    /// The one-form `ξ_{a→b}`; `b` must be `a ± 1` mod `n`.
    pub fn xi(n: usize, a: usize, b: usize) -> Result<Self> {
        let (a, b) = (a % n, b % n);
        if b == (a + 1) % n {
            Ok(Self::basis(n, BasisForm::Fwd(a)))
        } else if (b + 1) % n == a {
            Ok(Self::basis(n, BasisForm::Bwd(a)))
        } else {
            Err(Error::UnknownEdge(a, b))
        }
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            deg0: self.deg0.scale(c),
            fwd: self.fwd.iter().map(|v| v * c).collect(),
            bwd: self.bwd.iter().map(|v| v * c).collect(),
            deg2: self.deg2.iter().map(|v| v * c).collect(),
        }
    }

    /// Component of pure degree `k` (zero for `k > 2`).
    pub fn degree_part(&self, k: usize) -> Self {
        let mut w = Self::zero(self.n());
        match k {
            0 => w.deg0 = self.deg0.clone(),
            1 => {
                w.fwd = self.fwd.clone();
                w.bwd = self.bwd.clone();
            }
            2 => w.deg2 = self.deg2.clone(),
            _ => {}
        }
        w
    }

    fn zip_with(&self, other: &Self, op: impl Fn(C64, C64) -> C64) -> Self {
        let z = |a: &[C64], b: &[C64]| a.iter().zip(b).map(|(x, y)| op(*x, *y)).collect::<Vec<_>>();
        Self {
            deg0: VertexFunction::new(z(self.deg0.values(), other.deg0.values())),
            fwd: z(&self.fwd, &other.fwd),
            bwd: z(&self.bwd, &other.bwd),
            deg2: z(&self.deg2, &other.deg2),
        }
    }

    fn coefficients(&self) -> impl Iterator<Item = &C64> {
        self.deg0
            .values()
            .iter()
            .chain(&self.fwd)
            .chain(&self.bwd)
            .chain(&self.deg2)
    }

    /// Largest absolute coefficient difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.coefficients()
            .zip(other.coefficients())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.coefficients().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

impl Add for &GradedForm {
    type Output = GradedForm;

    fn add(self, rhs: &GradedForm) -> GradedForm {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &GradedForm {
    type Output = GradedForm;

    fn sub(self, rhs: &GradedForm) -> GradedForm {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &GradedForm {
    type Output = GradedForm;

    fn neg(self) -> GradedForm {
        self.scale(C64::new(-1.0, 0.0))
    }
}

fn fmt_coeff(c: C64) -> String {
    let sign = if c.im < 0.0 || (c.im == 0.0 && c.im.is_sign_negative()) {
        '-'
    } else {
        '+'
    };
    format!("({}{}{}i)", c.re, sign, c.im.abs())
}

/// Debug rendering, e.g. `(2+0i)·xi[0->1] + (0+1i)·vol[2]`.
impl fmt::Display for GradedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.n();
        let mut terms = Vec::new();
        for (m, c) in self.deg0.values().iter().enumerate() {
            if *c != C64::new(0.0, 0.0) {
                terms.push(format!("{}·delta[{}]", fmt_coeff(*c), m));
            }
        }
        for (m, c) in self.fwd.iter().enumerate() {
            if *c != C64::new(0.0, 0.0) {
                terms.push(format!("{}·xi[{}->{}]", fmt_coeff(*c), m, (m + 1) % n));
            }
        }
        for (m, c) in self.bwd.iter().enumerate() {
            if *c != C64::new(0.0, 0.0) {
                terms.push(format!("{}·xi[{}->{}]", fmt_coeff(*c), m, (m + n - 1) % n));
            }
        }
        for (m, c) in self.deg2.iter().enumerate() {
            if *c != C64::new(0.0, 0.0) {
                terms.push(format!("{}·vol[{}]", fmt_coeff(*c), m));
            }
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// Context fixing the number of points; every form operation validates
/// its inputs against it.
#[derive(Debug, Clone, PartialEq)]
pub struct Calculus {
    n: usize,
    /// Scalar `s` in `ξ_{μ→μ+1} ∧ ξ_{μ+1→μ} = s · ξ_{μ→μ-1} ∧ ξ_{μ-1→μ}`.
    swap_sign: f64,
}

impl Calculus {
    pub fn new(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::TooFewVertices(n));
        }
        Ok(Self { n, swap_sign: -1.0 })
    }

    /// Negative control: flips the sign of `ξ_{μ→μ+1} ∧ ξ_{μ+1→μ}`.
    #[doc(hidden)]
    pub fn with_corrupted_wedge_sign(n: usize) -> Result<Self> {
        let mut c = Self::new(n)?;
        c.swap_sign = 1.0;
        Ok(c)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn prev(&self, m: usize) -> usize {
        (m + self.n - 1) % self.n
    }

    fn next(&self, m: usize) -> usize {
        (m + 1) % self.n
    }

    fn check_fn(&self, f: &VertexFunction) -> Result<()> {
        if f.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: f.len(),
            });
        }
        Ok(())
    }

    fn check(&self, w: &GradedForm) -> Result<()> {
        self.check_fn(&w.deg0)?;
        for len in [w.fwd.len(), w.bwd.len(), w.deg2.len()] {
            if len != self.n {
                return Err(Error::DimensionMismatch {
                    expected: self.n,
                    found: len,
                });
            }
        }
        Ok(())
    }

    /// All `4n` basis forms, degree by degree.
    pub fn basis(&self) -> Vec<BasisForm> {
        let n = self.n;
        (0..n)
            .map(BasisForm::Delta)
            .chain((0..n).map(BasisForm::Fwd))
            .chain((0..n).map(BasisForm::Bwd))
            .chain((0..n).map(BasisForm::Vol))
            .collect()
    }

    pub fn form(&self, b: BasisForm) -> GradedForm {
        GradedForm::basis(self.n, b)
    }

    /// Left or right action of `C(V)`: scales each basis element by `f` at
    /// its left (resp. right) vertex.
    pub fn bimodule_act(&self, f: &VertexFunction, w: &GradedForm, side: Side) -> Result<GradedForm> {
        self.check_fn(f)?;
        self.check(w)?;
        let n = self.n;
        let (fwd_at, bwd_at): (Box<dyn Fn(usize) -> usize>, Box<dyn Fn(usize) -> usize>) = match side {
            Side::Left => (Box::new(|m| m), Box::new(|m| m)),
            Side::Right => (Box::new(move |m| (m + 1) % n), Box::new(move |m| (m + n - 1) % n)),
        };
        Ok(GradedForm {
            deg0: &w.deg0 * f,
            fwd: (0..n).map(|m| w.fwd[m] * f.at(fwd_at(m))).collect(),
            bwd: (0..n).map(|m| w.bwd[m] * f.at(bwd_at(m))).collect(),
            deg2: (0..n).map(|m| w.deg2[m] * f.at(m)).collect(),
        })
    }

    /// Graded product, truncated at degree 2.
    pub fn wedge(&self, a: &GradedForm, b: &GradedForm) -> Result<GradedForm> {
        self.check(a)?;
        self.check(b)?;
        let n = self.n;
        let mut out = GradedForm::zero(n);
        out.deg0 = &a.deg0 * &b.deg0;
        for m in 0..n {
            let (p, q) = (self.prev(m), self.next(m));
            out.fwd[m] = a.deg0.at(m) * b.fwd[m] + a.fwd[m] * b.deg0.at(q);
            out.bwd[m] = a.deg0.at(m) * b.bwd[m] + a.bwd[m] * b.deg0.at(p);
            // ξ_{m→m-1} ∧ ξ_{m-1→m} is the stored basis element; the reversed
            // pair ξ_{m→m+1} ∧ ξ_{m+1→m} carries `swap_sign`. Products of two
            // (1,0) or two (0,1) forms vanish.
            out.deg2[m] = a.deg0.at(m) * b.deg2[m]
                + a.deg2[m] * b.deg0.at(m)
                + a.bwd[m] * b.fwd[p]
                + a.fwd[m] * b.bwd[q] * self.swap_sign;
        }
        Ok(out)
    }

    /// The antilinear involution: conjugation on functions,
    /// `c ξ_{μ→ν} ↦ -c̄ ξ_{ν→μ}` on one-forms and `c vol_μ ↦ -c̄ vol_μ`.
    pub fn star_involution(&self, w: &GradedForm) -> Result<GradedForm> {
        self.check(w)?;
        let n = self.n;
        let mut out = GradedForm::zero(n);
        out.deg0 = w.deg0.conj();
        for m in 0..n {
            out.bwd[self.next(m)] = -w.fwd[m].conj();
            out.fwd[self.prev(m)] = -w.bwd[m].conj();
            out.deg2[m] = -w.deg2[m].conj();
        }
        Ok(out)
    }

    /// `df = Σ_{μ→ν} (f(ν) - f(μ)) ξ_{μ→ν}` over the polygon edges.
    pub fn exterior_d(&self, f: &VertexFunction) -> Result<GradedForm> {
        self.check_fn(f)?;
        let n = self.n;
        let mut out = GradedForm::zero(n);
        for m in 0..n {
            out.fwd[m] = f.at(self.next(m)) - f.at(m);
            out.bwd[m] = f.at(self.prev(m)) - f.at(m);
        }
        Ok(out)
    }

    /// Almost complex structure: `i(p - q)` on `Ω^{p,q}`.
    pub fn apply_j(&self, w: &GradedForm) -> Result<GradedForm> {
        self.check(w)?;
        let n = self.n;
        let mut out = GradedForm::zero(n);
        out.fwd = w.fwd.iter().map(|c| c * I).collect();
        out.bwd = w.bwd.iter().map(|c| -c * I).collect();
        Ok(out)
    }

    /// `κ = i Σ_μ ξ_{μ→μ-1} ∧ ξ_{μ-1→μ}`.
    pub fn kahler_form(&self) -> GradedForm {
        let mut k = GradedForm::zero(self.n);
        k.deg2 = vec![I; self.n];
        k
    }

    /// Lefschetz map `ω ↦ κ ∧ ω`.
    pub fn lefschetz(&self, w: &GradedForm) -> Result<GradedForm> {
        self.wedge(&self.kahler_form(), w)
    }

    /// Hodge star: `f ↦ fκ`, `-i` on `Ω^{1,0}`, `i` on `Ω^{0,1}`, and the
    /// inverse Lefschetz map on `Ω²`.
    pub fn hodge_star(&self, w: &GradedForm) -> Result<GradedForm> {
        self.check(w)?;
        let n = self.n;
        let mut out = GradedForm::zero(n);
        out.deg2 = w.deg0.values().iter().map(|f| f * I).collect();
        out.fwd = w.fwd.iter().map(|c| -c * I).collect();
        out.bwd = w.bwd.iter().map(|c| c * I).collect();
        out.deg0 = VertexFunction::new(w.deg2.iter().map(|c| c / I).collect());
        Ok(out)
    }

    /// `g_κ(ω, η) = ∗_κ(ω ∧ ∗_κ(η∗))`, evaluated degree by degree; mixed
    /// degrees pair to zero.
    pub fn metric_g(&self, w: &GradedForm, eta: &GradedForm) -> Result<VertexFunction> {
        self.check(w)?;
        self.check(eta)?;
        let mut acc = VertexFunction::zeros(self.n);
        for k in 0..=2 {
            let wk = w.degree_part(k);
            let ek = eta.degree_part(k);
            let inner = self.hodge_star(&self.star_involution(&ek)?)?;
            let top = self.wedge(&wk, &inner)?;
            // ω_k ∧ ∗(η_k∗) lies in Ω²
            let g = self.hodge_star(&top.degree_part(2))?;
            acc = &acc + &g.deg0;
        }
        Ok(acc)
    }
}
