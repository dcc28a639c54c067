//! Exact polynomial arithmetic in two variables.
//!
//! Two flavours share one implementation: [`SymPoly`] lives in the ring of
//! symmetric polynomials `R = Q[E1, E2]` (deg E1 = 2, deg E2 = 4) and
//! [`XPoly`] lives in `Q[x1, x2]` (both variables of degree 2). The sl2
//! action on `R` is obtained by expanding into the x-variables, applying the
//! Witt derivations `L_n = -sum x_i^{n+1} d/dx_i`, and restricting back.

use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Coefficient field: exact rationals, always in lowest terms.
pub type Scalar = BigRational;

pub fn scalar(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Scalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Naming and grading of the two variables of a [`Poly2`].
pub trait Variables: Clone + fmt::Debug + PartialEq + Eq {
    const WEIGHTS: (i64, i64);
    const NAMES: (&'static str, &'static str);
}

/// Elementary symmetric polynomials `E1`, `E2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Elementary;

impl Variables for Elementary {
    const WEIGHTS: (i64, i64) = (2, 4);
    const NAMES: (&'static str, &'static str) = ("E1", "E2");
}

/// The roots `x1`, `x2` with `E1 = x1 + x2`, `E2 = x1 x2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Roots;

impl Variables for Roots {
    const WEIGHTS: (i64, i64) = (2, 2);
    const NAMES: (&'static str, &'static str) = ("x1", "x2");
}

/// Sparse polynomial in two variables with rational coefficients.
///
/// Zero coefficients are never stored, so structural equality is
/// mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly2<V> {
    terms: BTreeMap<(u32, u32), Scalar>,
    _vars: PhantomData<V>,
}

pub type SymPoly = Poly2<Elementary>;
pub type XPoly = Poly2<Roots>;

impl<V: Variables> Default for Poly2<V> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<V: Variables> Poly2<V> {
    pub fn zero() -> Self {
        Poly2 { terms: BTreeMap::new(), _vars: PhantomData }
    }

    pub fn one() -> Self {
        Self::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(scalar(n))
    }

    pub fn monomial(a: u32, b: u32, c: Scalar) -> Self {
        let mut p = Self::zero();
        p.add_term((a, b), c);
        p
    }

    /// Builds a polynomial from `(a, b, coefficient)` triples.
    pub fn from_terms<I: IntoIterator<Item = (u32, u32, i64)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (a, b, c) in terms {
            p.add_term((a, b), scalar(c));
        }
        p
    }

    /// The first variable (`E1` or `x1`).
    pub fn var1() -> Self {
        Self::monomial(1, 0, Scalar::one())
    }

    /// The second variable (`E2` or `x2`).
    pub fn var2() -> Self {
        Self::monomial(0, 1, Scalar::one())
    }

    pub fn add_term(&mut self, exps: (u32, u32), c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps).or_insert_with(Scalar::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, a: u32, b: u32) -> Scalar {
        self.terms.get(&(a, b)).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Scalar)> {
        self.terms.iter()
    }

    pub fn monomial_degree((a, b): (u32, u32)) -> i64 {
        V::WEIGHTS.0 * a as i64 + V::WEIGHTS.1 * b as i64
    }

    /// Degree of a nonzero homogeneous polynomial; `None` for zero or mixed degrees.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut degs = self.terms.keys().map(|&e| Self::monomial_degree(e));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    /// Returns the value if this is a constant polynomial (including zero).
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => self.terms.get(&(0, 0)).cloned(),
            _ => None,
        }
    }

    /// Nonzero constant, i.e. a unit of the polynomial ring.
    pub fn as_unit(&self) -> Option<Scalar> {
        self.as_constant().filter(|c| !c.is_zero())
    }

    /// Leading term: highest degree first, ties broken by the larger
    /// exponent of the first variable.
    pub fn leading_term(&self) -> Option<((u32, u32), &Scalar)> {
        self.terms
            .iter()
            .max_by_key(|(&e, _)| (Self::monomial_degree(e), e.0))
            .map(|(&e, c)| (e, c))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly2 {
            terms: self.terms.iter().map(|(&e, v)| (e, v * c)).collect(),
            _vars: PhantomData,
        }
    }

    pub fn mul_monomial(&self, (a, b): (u32, u32)) -> Self {
        Poly2 {
            terms: self.terms.iter().map(|(&(x, y), v)| ((x + a, y + b), v.clone())).collect(),
            _vars: PhantomData,
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Partial derivative with respect to variable 0 or 1.
    pub fn partial(&self, var: usize) -> Self {
        let mut out = Self::zero();
        for (&(a, b), c) in &self.terms {
            let (exp, rest) = if var == 0 { (a, (a.saturating_sub(1), b)) } else { (b, (a, b.saturating_sub(1))) };
            if exp > 0 {
                out.add_term(rest, c * scalar(exp as i64));
            }
        }
        out
    }

    /// Terms sorted for display: leading term first.
    fn display_order(&self) -> Vec<((u32, u32), &Scalar)> {
        let mut v: Vec<_> = self.terms.iter().map(|(&e, c)| (e, c)).collect();
        v.sort_by_key(|&(e, _)| std::cmp::Reverse((Self::monomial_degree(e), e.0)));
        v
    }
}

impl XPoly {
    /// Exchange `x1` and `x2`.
    pub fn swap(&self) -> Self {
        XPoly {
            terms: self.terms.iter().map(|(&(i, j), c)| ((j, i), c.clone())).collect(),
            _vars: PhantomData,
        }
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.swap()
    }
}

fn fmt_monomial(f: &mut fmt::Formatter<'_>, names: (&str, &str), (a, b): (u32, u32)) -> fmt::Result {
    let mut first = true;
    for (name, e) in [(names.0, a), (names.1, b)] {
        if e == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        if e == 1 {
            write!(f, "{name}")?;
        } else {
            write!(f, "{name}^{e}")?;
        }
    }
    Ok(())
}

impl<V: Variables> fmt::Display for Poly2<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.display_order().into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if e == (0, 0) {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                fmt_monomial(f, V::NAMES, e)?;
            }
        }
        Ok(())
    }
}

impl<V: Variables> fmt::Debug for Poly2<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<V: Variables> AddAssign<&Poly2<V>> for Poly2<V> {
    fn add_assign(&mut self, rhs: &Poly2<V>) {
        for (&e, c) in &rhs.terms {
            self.add_term(e, c.clone());
        }
    }
}

impl<V: Variables> SubAssign<&Poly2<V>> for Poly2<V> {
    fn sub_assign(&mut self, rhs: &Poly2<V>) {
        for (&e, c) in &rhs.terms {
            self.add_term(e, -c.clone());
        }
    }
}

impl<V: Variables> Add<&Poly2<V>> for &Poly2<V> {
    type Output = Poly2<V>;
    fn add(self, rhs: &Poly2<V>) -> Poly2<V> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<V: Variables> Sub<&Poly2<V>> for &Poly2<V> {
    type Output = Poly2<V>;
    fn sub(self, rhs: &Poly2<V>) -> Poly2<V> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<V: Variables> Mul<&Poly2<V>> for &Poly2<V> {
    type Output = Poly2<V>;
    fn mul(self, rhs: &Poly2<V>) -> Poly2<V> {
        let mut out = Poly2::zero();
        for (&(a1, b1), c1) in &self.terms {
            for (&(a2, b2), c2) in &rhs.terms {
                out.add_term((a1 + a2, b1 + b2), c1 * c2);
            }
        }
        out
    }
}

impl<V: Variables> Neg for &Poly2<V> {
    type Output = Poly2<V>;
    fn neg(self) -> Poly2<V> {
        Poly2 {
            terms: self.terms.iter().map(|(&e, c)| (e, -c.clone())).collect(),
            _vars: PhantomData,
        }
    }
}

macro_rules! forward_owned_binop {
    ($tr:ident, $method:ident) => {
        impl<V: Variables> $tr<Poly2<V>> for Poly2<V> {
            type Output = Poly2<V>;
            fn $method(self, rhs: Poly2<V>) -> Poly2<V> {
                (&self).$method(&rhs)
            }
        }
        impl<V: Variables> $tr<&Poly2<V>> for Poly2<V> {
            type Output = Poly2<V>;
            fn $method(self, rhs: &Poly2<V>) -> Poly2<V> {
                (&self).$method(rhs)
            }
        }
        impl<V: Variables> $tr<Poly2<V>> for &Poly2<V> {
            type Output = Poly2<V>;
            fn $method(self, rhs: Poly2<V>) -> Poly2<V> {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl<V: Variables> Neg for Poly2<V> {
    type Output = Poly2<V>;
    fn neg(self) -> Poly2<V> {
        -&self
    }
}

/// `E1`.
pub fn e1() -> SymPoly {
    SymPoly::var1()
}

/// `E2`.
pub fn e2() -> SymPoly {
    SymPoly::var2()
}

/// Substitute `E1 -> x1 + x2`, `E2 -> x1 x2`.
pub fn expand_to_xvars(p: &SymPoly) -> XPoly {
    let sum = XPoly::var1() + XPoly::var2();
    let mut out = XPoly::zero();
    for (&(a, b), c) in p.terms() {
        // (x1 + x2)^a (x1 x2)^b
        let term = sum.pow(a).mul_monomial((b, b)).scale(c);
        out += &term;
    }
    out
}

/// Inverse of [`expand_to_xvars`] on symmetric polynomials.
pub fn restrict_to_sym(q: &XPoly) -> Result<SymPoly> {
    if !q.is_symmetric() {
        return Err(Error::NotSymmetric(q.to_string()));
    }
    let mut rest = q.clone();
    let mut out = SymPoly::zero();
    // Peel off the lexicographically largest monomial x1^i x2^j (i >= j by
    // symmetry), which is the leading monomial of E1^(i-j) E2^j.
    while let Some((&(i, j), c)) = rest.terms.iter().next_back() {
        debug_assert!(i >= j);
        let c = c.clone();
        let piece = SymPoly::monomial(i - j, j, c);
        rest -= &expand_to_xvars(&piece);
        out += &piece;
    }
    Ok(out)
}

/// Generators `L_{-1}, L_0, L_1` of the Witt algebra used here.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Witt {
    Minus1,
    Zero,
    Plus1,
}

impl Witt {
    pub fn index(self) -> i32 {
        match self {
            Witt::Minus1 => -1,
            Witt::Zero => 0,
            Witt::Plus1 => 1,
        }
    }
}

/// `L_n . Q = -sum_i x_i^{n+1} dQ/dx_i`.
pub fn witt_act(n: Witt, q: &XPoly) -> XPoly {
    let power = (n.index() + 1) as u32;
    let mut out = XPoly::zero();
    for var in 0..2 {
        let exps = if var == 0 { (power, 0) } else { (0, power) };
        out -= &q.partial(var).mul_monomial(exps);
    }
    out
}

/// Chevalley generators of sl2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sl2 {
    E,
    H,
    F,
}

impl Sl2 {
    pub const ALL: [Sl2; 3] = [Sl2::E, Sl2::H, Sl2::F];

    /// Change in q-degree: e lowers by 2, h preserves, f raises by 2.
    pub fn degree_shift(self) -> i64 {
        match self {
            Sl2::E => -2,
            Sl2::H => 0,
            Sl2::F => 2,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Sl2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sl2::E => "e",
            Sl2::H => "h",
            Sl2::F => "f",
        })
    }
}

/// sl2 acting on `R` through `e = L_{-1}`, `h = 2 L_0`, `f = -L_1`.
pub fn sl2_ring_act(g: Sl2, p: &SymPoly) -> SymPoly {
    let x = expand_to_xvars(p);
    let image = match g {
        Sl2::E => witt_act(Witt::Minus1, &x),
        Sl2::H => witt_act(Witt::Zero, &x).scale(&scalar(2)),
        Sl2::F => -witt_act(Witt::Plus1, &x),
    };
    restrict_to_sym(&image).expect("Witt derivations preserve symmetric polynomials")
}

/// Monic monomials `E1^a E2^b` of degree at most `deg`.
pub fn monomials_up_to(deg: i64) -> Vec<SymPoly> {
    let mut out = vec![];
    for b in 0..=(deg.max(0) / 4) as u32 {
        for a in 0..=((deg - 4 * b as i64) / 2) as u32 {
            out.push(SymPoly::monomial(a, b, Scalar::one()));
        }
    }
    out
}

/// Checks `[h,e] = 2e`, `[h,f] = -2f`, `[e,f] = h` on every monomial of
/// degree at most `max_degree`.
pub fn check_ring_brackets(max_degree: i64) -> std::result::Result<(), String> {
    let act = sl2_ring_act;
    for p in monomials_up_to(max_degree) {
        let comm = |x, y| act(x, &act(y, &p)) - act(y, &act(x, &p));
        let checks = [
            ("[h,e] = 2e", comm(Sl2::H, Sl2::E), act(Sl2::E, &p).scale(&scalar(2))),
            ("[h,f] = -2f", comm(Sl2::H, Sl2::F), act(Sl2::F, &p).scale(&scalar(-2))),
            ("[e,f] = h", comm(Sl2::E, Sl2::F), act(Sl2::H, &p)),
        ];
        for (label, lhs, rhs) in checks {
            if lhs != rhs {
                return Err(format!("{label} fails on {p}: {lhs} != {rhs}"));
            }
        }
    }
    Ok(())
}
