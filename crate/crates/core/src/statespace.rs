//! Graded free R-modules for the circle and theta webs, and the sl2 action
//! on them.
//!
//! An action is specified on basis vectors only; on an arbitrary element it
//! is extended by the derivation rule `g.(r b) = (g.r) b + r (g.b)` with
//! `g.r` the ring action from [`crate::polyring`].

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::One;

use crate::error::{Error, Result};
use crate::polyring::{e1, e2, scalar, sl2_ring_act, Scalar, Sl2, SymPoly};

pub const THETA: &str = "θι";
pub const THETA_DOT: &str = "θι•";
pub const OO: &str = "o⊗o";
pub const DOT_O: &str = "o•⊗o";
pub const O_DOT: &str = "o⊗o•";
pub const DOT_DOT: &str = "o•⊗o•";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisVector {
    pub name: String,
    pub intrinsic_qdeg: i64,
}

impl BasisVector {
    pub fn new(name: &str, intrinsic_qdeg: i64) -> Self {
        BasisVector { name: name.to_string(), intrinsic_qdeg }
    }
}

/// Which web a state space belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WebLabel {
    /// A single circle, state space `R[X]/(X^2 - E1 X + E2)`.
    Circle,
    /// Two oppositely oriented circles.
    TwoCircles,
    /// Theta web carrying `n` green dots.
    Theta(u32),
    /// H-shaped web carrying `n` green dots (formal only).
    FormalH(u32),
    /// Two parallel strands.
    Strands,
}

impl fmt::Display for WebLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WebLabel::Circle => write!(f, "O"),
            WebLabel::TwoCircles => write!(f, "O⊗O"),
            WebLabel::Theta(n) => write!(f, "Θ^{n}"),
            WebLabel::FormalH(n) => write!(f, "H^{n}"),
            WebLabel::Strands => write!(f, "I"),
        }
    }
}

/// Free R-module on a named, q-graded basis with an overall q-shift.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedModule {
    basis: Vec<BasisVector>,
    q_shift: i64,
    label: WebLabel,
}

impl GradedModule {
    pub fn new(basis: Vec<BasisVector>, q_shift: i64, label: WebLabel) -> Result<Self> {
        let mut seen = HashSet::new();
        for b in &basis {
            if !seen.insert(b.name.as_str()) {
                return Err(Error::DimensionMismatch(format!("duplicate basis name {}", b.name)));
            }
        }
        Ok(GradedModule { basis, q_shift, label })
    }

    pub fn basis(&self) -> &[BasisVector] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn q_shift(&self) -> i64 {
        self.q_shift
    }

    pub fn label(&self) -> WebLabel {
        self.label
    }

    pub fn name(&self, i: usize) -> &str {
        &self.basis[i].name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.name == name)
    }

    /// Total q-degree of basis vector `i`, shift included.
    pub fn total_qdeg(&self, i: usize) -> i64 {
        self.basis[i].intrinsic_qdeg + self.q_shift
    }

    pub fn min_qdeg(&self) -> Option<i64> {
        (0..self.rank()).map(|i| self.total_qdeg(i)).min()
    }

    pub fn with_shift(mut self, q_shift: i64) -> Self {
        self.q_shift = q_shift;
        self
    }

    /// Shorthand for building elements by basis name in tests and tables.
    pub fn vector(&self, name: &str) -> Element {
        Element::basis(self.index_of(name).unwrap_or_else(|| panic!("no basis vector {name}")))
    }
}

/// R-linear combination of basis vectors, keyed by basis index.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Element {
    terms: BTreeMap<usize, SymPoly>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    pub fn basis(i: usize) -> Self {
        Element::term(i, SymPoly::one())
    }

    pub fn term(i: usize, coeff: SymPoly) -> Self {
        let mut e = Element::zero();
        e.add_term(i, &coeff);
        e
    }

    pub fn from_terms<I: IntoIterator<Item = (usize, SymPoly)>>(terms: I) -> Self {
        let mut e = Element::zero();
        for (i, p) in terms {
            e.add_term(i, &p);
        }
        e
    }

    pub fn add_term(&mut self, i: usize, coeff: &SymPoly) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(i).or_default();
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&i);
        }
    }

    pub fn coeff(&self, i: usize) -> SymPoly {
        self.terms.get(&i).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &SymPoly)> {
        self.terms.iter().map(|(&i, p)| (i, p))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, r: &SymPoly) -> Self {
        Element::from_terms(self.terms.iter().map(|(&i, p)| (i, p * r)))
    }

    pub fn scale_scalar(&self, c: &Scalar) -> Self {
        Element::from_terms(self.terms.iter().map(|(&i, p)| (i, p.scale(c))))
    }

    /// Total q-degree if every term sits in the same degree.
    pub fn homogeneous_degree(&self, module: &GradedModule) -> Option<i64> {
        let mut degs = self.terms.iter().map(|(&i, p)| p.homogeneous_degree().map(|d| d + module.total_qdeg(i)));
        let first = degs.next()??;
        for d in degs {
            if d? != first {
                return None;
            }
        }
        Some(first)
    }

    /// Splits into homogeneous components keyed by total q-degree.
    pub fn components(&self, module: &GradedModule) -> BTreeMap<i64, Element> {
        let mut out: BTreeMap<i64, Element> = BTreeMap::new();
        for (&i, p) in &self.terms {
            for (&mono, c) in p.terms() {
                let d = SymPoly::monomial_degree(mono) + module.total_qdeg(i);
                out.entry(d).or_default().add_term(i, &SymPoly::monomial(mono.0, mono.1, c.clone()));
            }
        }
        out
    }

    /// Renames basis indices through `map`.
    pub fn reindex(&self, map: impl Fn(usize) -> usize) -> Self {
        Element::from_terms(self.terms.iter().map(|(&i, p)| (map(i), p.clone())))
    }

    pub fn display<'a>(&'a self, module: &'a GradedModule) -> ElementDisplay<'a> {
        ElementDisplay { element: self, names: NameSource::Module(module) }
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> ElementDisplay<'a> {
        ElementDisplay { element: self, names: NameSource::List(names) }
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

enum NameSource<'a> {
    Module(&'a GradedModule),
    List(&'a [String]),
}

pub struct ElementDisplay<'a> {
    element: &'a Element,
    names: NameSource<'a>,
}

impl fmt::Display for ElementDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.element.is_zero() {
            return write!(f, "0");
        }
        for (n, (&i, p)) in self.element.terms.iter().enumerate() {
            let name = match &self.names {
                NameSource::Module(m) => m.name(i),
                NameSource::List(l) => l[i].as_str(),
            };
            let piece = match p.as_constant() {
                Some(c) if c.is_one() => name.to_string(),
                Some(c) if (-c.clone()).is_one() => format!("-{name}"),
                Some(c) => format!("{c}·{name}"),
                None if p.len() == 1 => format!("{p}·{name}"),
                None => format!("({p})·{name}"),
            };
            match (n, piece.strip_prefix('-')) {
                (0, _) => write!(f, "{piece}")?,
                (_, Some(rest)) => write!(f, " - {rest}")?,
                (_, None) => write!(f, " + {piece}")?,
            }
        }
        Ok(())
    }
}

impl Add<&Element> for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        for (&i, p) in &rhs.terms {
            out.add_term(i, p);
        }
        out
    }
}

impl Sub<&Element> for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        self + &(-rhs)
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        Element::from_terms(self.terms.iter().map(|(&i, p)| (i, -p)))
    }
}

impl Add for Element {
    type Output = Element;
    fn add(self, rhs: Element) -> Element {
        &self + &rhs
    }
}

impl Sub for Element {
    type Output = Element;
    fn sub(self, rhs: Element) -> Element {
        &self - &rhs
    }
}

impl Neg for Element {
    type Output = Element;
    fn neg(self) -> Element {
        -&self
    }
}

/// Values of e, h, f on every basis vector of a module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sl2ActionSpec {
    values: [Vec<Element>; 3],
}

impl Sl2ActionSpec {
    /// Checks that each value is homogeneous of degree `deg(b) + shift(g)`.
    pub fn new(module: &GradedModule, e: Vec<Element>, h: Vec<Element>, f: Vec<Element>) -> Result<Self> {
        let values = [e, h, f];
        for g in Sl2::ALL {
            let vals = &values[g.index()];
            if vals.len() != module.rank() {
                return Err(Error::DimensionMismatch(format!(
                    "{g} specified on {} vectors, module has rank {}",
                    vals.len(),
                    module.rank()
                )));
            }
            for (i, v) in vals.iter().enumerate() {
                let want = module.total_qdeg(i) + g.degree_shift();
                if !v.is_zero() && v.homogeneous_degree(module) != Some(want) {
                    return Err(Error::BadActionDegree { g, basis: module.name(i).to_string() });
                }
            }
        }
        Ok(Sl2ActionSpec { values })
    }

    pub fn value(&self, g: Sl2, i: usize) -> &Element {
        &self.values[g.index()][i]
    }

    pub fn rank(&self) -> usize {
        self.values[0].len()
    }

    /// `g.v` by the derivation rule.
    pub fn act(&self, g: Sl2, v: &Element) -> Element {
        let mut out = Element::zero();
        for (i, r) in v.terms() {
            out.add_term(i, &sl2_ring_act(g, r));
            out = &out + &self.value(g, i).scale(r);
        }
        out
    }
}

/// Free-function form of [`Sl2ActionSpec::act`].
pub fn act(spec: &Sl2ActionSpec, g: Sl2, v: &Element) -> Element {
    spec.act(g, v)
}

fn int(n: i64) -> SymPoly {
    SymPoly::from_int(n)
}

/// Basis `{1, X}` of the circle algebra `A = R[X]/(X^2 - E1 X + E2)`.
pub fn circle_module() -> GradedModule {
    GradedModule::new(vec![BasisVector::new("1", -1), BasisVector::new("X", 1)], 0, WebLabel::Circle)
        .expect("distinct names")
}

/// Product in `A`, reducing `X^2 = E1 X - E2`.
pub fn circle_algebra_multiply(u: &Element, v: &Element) -> Element {
    let (a, b) = (u.coeff(0), u.coeff(1));
    let (c, d) = (v.coeff(0), v.coeff(1));
    let bd = &b * &d;
    let unit = &(&a * &c) - &(&bd * &e2());
    let dot = &(&(&a * &d) + &(&b * &c)) + &(&bd * &e1());
    Element::from_terms([(0, unit), (1, dot)])
}

/// Sphere evaluation: the undotted sphere is 0, the one-dot sphere is 1.
pub fn sphere_counit(u: &Element) -> SymPoly {
    u.coeff(1)
}

/// `<b_i, b_j> = counit(b_i b_j)` on the basis `(1, X)`.
pub fn gram_matrix() -> [[SymPoly; 2]; 2] {
    let basis = [Element::basis(0), Element::basis(1)];
    let entry = |i: usize, j: usize| sphere_counit(&circle_algebra_multiply(&basis[i], &basis[j]));
    [[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]]
}

/// State space of the theta web with `n` green dots, basis `(θι, θι•)`.
///
/// The module carries the normalized shift `2n + 1`, which places `θι` in
/// q-degree `2n` so that `h` acts by the negative degree.
pub fn theta_space(n: u32) -> (GradedModule, Sl2ActionSpec) {
    let module = GradedModule::new(
        vec![BasisVector::new(THETA, -1), BasisVector::new(THETA_DOT, 1)],
        2 * n as i64 + 1,
        WebLabel::Theta(n),
    )
    .expect("distinct names");
    let n = n as i64;
    let (t, td) = (Element::basis(0), Element::basis(1));
    let e = vec![Element::zero(), -&t];
    let h = vec![t.scale(&int(-2 * n)), td.scale(&int(-2 * (n + 1)))];
    let f = vec![t.scale(&e1().scale(&scalar(n))), &td.scale(&e1().scale(&scalar(n + 1))) - &t.scale(&e2())];
    let spec = Sl2ActionSpec::new(&module, e, h, f).expect("theta action is homogeneous");
    (module, spec)
}

/// State space of two oppositely oriented circles, basis
/// `(o⊗o, o•⊗o, o⊗o•, o•⊗o•)` in q-degrees `-2, 0, 0, 2`.
pub fn two_circles_space() -> (GradedModule, Sl2ActionSpec) {
    let module = GradedModule::new(
        vec![
            BasisVector::new(OO, -2),
            BasisVector::new(DOT_O, 0),
            BasisVector::new(O_DOT, 0),
            BasisVector::new(DOT_DOT, 2),
        ],
        0,
        WebLabel::TwoCircles,
    )
    .expect("distinct names");
    let [a, b, c, d] = [0, 1, 2, 3].map(Element::basis);
    let e = vec![Element::zero(), -&a, -&a, -(&b + &c)];
    let h = (0..4).map(|i| Element::basis(i).scale(&int(-module.total_qdeg(i)))).collect();
    let f = vec![
        -a.scale(&e1()),
        -a.scale(&e2()),
        -a.scale(&e2()),
        &d.scale(&e1()) - &(&b + &c).scale(&e2()),
    ];
    let spec = Sl2ActionSpec::new(&module, e, h, f).expect("two-circle action is homogeneous");
    (module, spec)
}
