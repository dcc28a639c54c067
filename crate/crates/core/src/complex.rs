//! The collapsed chain complex of the `(2, k)` torus link.
//!
//! Degree `i` (for `0 <= i < k`) holds a theta web with `k - 1 - i` green
//! dots and degree `k` holds two circles. Writing `j = k - i`, the
//! differential leaving degree `i` is the singular pair of pants for
//! `j = 1`, zero for even `j`, and `2θ• - E1 θ` for odd `j >= 3`.

use std::fmt;

use crate::error::{Error, Result};
use crate::polyring::{e1, e2, Sl2, SymPoly};
use crate::statespace::{
    theta_space, two_circles_space, Element, GradedModule, Sl2ActionSpec, WebLabel, DOT_DOT, DOT_O, OO, O_DOT,
    THETA, THETA_DOT,
};

/// Degree-preserving R-linear map between graded free modules. Entry
/// `(i, j)` is the coefficient of target basis `i` in the image of source
/// basis `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RMatrix {
    source: GradedModule,
    target: GradedModule,
    entries: Vec<Vec<SymPoly>>,
}

impl RMatrix {
    pub fn new(source: GradedModule, target: GradedModule, entries: Vec<Vec<SymPoly>>) -> Result<Self> {
        if entries.len() != target.rank() || entries.iter().any(|row| row.len() != source.rank()) {
            return Err(Error::DimensionMismatch(format!(
                "expected {}x{} entries",
                target.rank(),
                source.rank()
            )));
        }
        for (i, row) in entries.iter().enumerate() {
            for (j, p) in row.iter().enumerate() {
                if p.is_zero() {
                    continue;
                }
                let expected = source.total_qdeg(j) - target.total_qdeg(i);
                if p.homogeneous_degree() != Some(expected) {
                    return Err(Error::Inhomogeneous { row: i, col: j, entry: p.to_string(), expected });
                }
            }
        }
        Ok(RMatrix { source, target, entries })
    }

    /// Builds the matrix whose column `j` is `images[j]`.
    pub fn from_images(source: GradedModule, target: GradedModule, images: &[Element]) -> Result<Self> {
        if images.len() != source.rank() {
            return Err(Error::DimensionMismatch(format!(
                "{} images for a source of rank {}",
                images.len(),
                source.rank()
            )));
        }
        let entries = (0..target.rank())
            .map(|i| images.iter().map(|im| im.coeff(i)).collect())
            .collect();
        RMatrix::new(source, target, entries)
    }

    pub fn zero(source: GradedModule, target: GradedModule) -> Self {
        let entries = vec![vec![SymPoly::zero(); source.rank()]; target.rank()];
        RMatrix { source, target, entries }
    }

    pub fn source(&self) -> &GradedModule {
        &self.source
    }

    pub fn target(&self) -> &GradedModule {
        &self.target
    }

    pub fn entry(&self, row: usize, col: usize) -> &SymPoly {
        &self.entries[row][col]
    }

    pub fn nrows(&self) -> usize {
        self.target.rank()
    }

    pub fn ncols(&self) -> usize {
        self.source.rank()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(SymPoly::is_zero)
    }

    /// Image of source basis vector `j`.
    pub fn column(&self, j: usize) -> Element {
        Element::from_terms((0..self.nrows()).map(|i| (i, self.entries[i][j].clone())))
    }

    pub fn apply(&self, v: &Element) -> Element {
        let mut out = Element::zero();
        for (j, r) in v.terms() {
            out = &out + &self.column(j).scale(r);
        }
        out
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &RMatrix) -> Result<RMatrix> {
        if inner.target != self.source {
            return Err(Error::DimensionMismatch("composition of non-adjacent maps".into()));
        }
        let images: Vec<Element> = (0..inner.ncols()).map(|j| self.apply(&inner.column(j))).collect();
        RMatrix::from_images(inner.source.clone(), self.target.clone(), &images)
    }

    /// Overwrites an entry without any homogeneity check.
    #[doc(hidden)]
    pub fn set_entry_unchecked(&mut self, row: usize, col: usize, value: SymPoly) {
        self.entries[row][col] = value;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainGroup {
    pub module: GradedModule,
    pub action: Sl2ActionSpec,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DifferentialKind {
    PairOfPants,
    /// `2θ• - E1 θ`
    ThetaOdd,
    Zero,
    Custom,
}

impl fmt::Display for DifferentialKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DifferentialKind::PairOfPants => "p",
            DifferentialKind::ThetaOdd => "2θ• − E₁θ",
            DifferentialKind::Zero => "0",
            DifferentialKind::Custom => "custom",
        })
    }
}

/// Cohomological complex `C^0 -> C^1 -> ... -> C^top`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    normalized: bool,
    groups: Vec<ChainGroup>,
    differentials: Vec<RMatrix>,
    kinds: Vec<DifferentialKind>,
}

impl ChainComplex {
    /// Assembles a complex from its pieces; `differentials[i]` must map
    /// `groups[i]` to `groups[i + 1]`. `d^2 = 0` is not checked here.
    pub fn from_parts(normalized: bool, groups: Vec<ChainGroup>, differentials: Vec<RMatrix>) -> Result<Self> {
        if groups.is_empty() || differentials.len() + 1 != groups.len() {
            return Err(Error::DimensionMismatch("need one more group than differentials".into()));
        }
        for (i, d) in differentials.iter().enumerate() {
            if d.source != groups[i].module || d.target != groups[i + 1].module {
                return Err(Error::DimensionMismatch(format!("differential {i} does not match its groups")));
            }
        }
        let kinds = vec![DifferentialKind::Custom; differentials.len()];
        Ok(ChainComplex { normalized, groups, differentials, kinds })
    }

    /// Highest cohomological degree (equal to `k` for torus complexes).
    pub fn top_degree(&self) -> usize {
        self.differentials.len()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn group(&self, i: usize) -> &ChainGroup {
        &self.groups[i]
    }

    pub fn groups(&self) -> &[ChainGroup] {
        &self.groups
    }

    /// Differential leaving degree `i`, if any.
    pub fn differential(&self, i: usize) -> Option<&RMatrix> {
        self.differentials.get(i)
    }

    /// Differential entering degree `i`, if any.
    pub fn incoming(&self, i: usize) -> Option<&RMatrix> {
        i.checked_sub(1).and_then(|p| self.differentials.get(p))
    }

    pub fn kind(&self, i: usize) -> Option<DifferentialKind> {
        self.kinds.get(i).copied()
    }

    /// Test hook: overwrite one differential entry, bypassing every check.
    #[doc(hidden)]
    pub fn corrupt_entry(&mut self, degree: usize, row: usize, col: usize, value: SymPoly) {
        self.differentials[degree].set_entry_unchecked(row, col, value);
        self.kinds[degree] = DifferentialKind::Custom;
    }
}

fn pair_of_pants(source: &GradedModule, target: &GradedModule) -> Result<RMatrix> {
    let v = |n: &str| target.vector(n);
    let images = [
        &v(DOT_O) - &v(O_DOT),
        &(&v(DOT_DOT) - &v(O_DOT).scale(&e1())) + &v(OO).scale(&e2()),
    ];
    debug_assert_eq!(source.index_of(THETA), Some(0));
    RMatrix::from_images(source.clone(), target.clone(), &images)
}

fn theta_odd(source: &GradedModule, target: &GradedModule) -> Result<RMatrix> {
    let t = target.vector(THETA);
    let td = target.vector(THETA_DOT);
    let two = SymPoly::from_int(2);
    let images = [
        &td.scale(&two) - &t.scale(&e1()),
        &td.scale(&e1()) - &t.scale(&e2().scale(&crate::polyring::scalar(2))),
    ];
    RMatrix::from_images(source.clone(), target.clone(), &images)
}

/// The collapsed complex for `T(2, k)`. With `normalized` every q-shift is
/// raised by `k`, which makes `h` act by the negative q-degree.
pub fn torus_complex(k: i64, normalized: bool) -> Result<ChainComplex> {
    if k < 2 {
        return Err(Error::InvalidK(k));
    }
    let extra = if normalized { k } else { 0 };
    let k = k as usize;
    let mut groups = Vec::with_capacity(k + 1);
    for i in 0..k {
        let n = (k - 1 - i) as u32;
        let (module, action) = theta_space(n);
        let shift = k as i64 - 1 - 2 * i as i64 + extra;
        groups.push(ChainGroup { module: module.with_shift(shift), action });
    }
    let (module, action) = two_circles_space();
    groups.push(ChainGroup { module: module.with_shift(-(k as i64) + extra), action });

    let mut differentials = Vec::with_capacity(k);
    let mut kinds = Vec::with_capacity(k);
    for i in 0..k {
        let (src, tgt) = (&groups[i].module, &groups[i + 1].module);
        let j = k - i;
        let (d, kind) = if j == 1 {
            (pair_of_pants(src, tgt)?, DifferentialKind::PairOfPants)
        } else if j.is_multiple_of(2) {
            (RMatrix::zero(src.clone(), tgt.clone()), DifferentialKind::Zero)
        } else {
            (theta_odd(src, tgt)?, DifferentialKind::ThetaOdd)
        };
        differentials.push(d);
        kinds.push(kind);
    }
    Ok(ChainComplex { normalized, groups, differentials, kinds })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub degree: usize,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub name: &'static str,
    pub violations: Vec<Violation>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first_violation(&self) -> Option<&Violation> {
        self.violations.first()
    }
}

/// Exact check of `d^{i+1} ∘ d^i = 0` for every `i`.
pub fn check_d_squared(c: &ChainComplex) -> CheckReport {
    let mut violations = vec![];
    for i in 0..c.top_degree().saturating_sub(1) {
        match c.differentials[i + 1].compose(&c.differentials[i]) {
            Ok(prod) if prod.is_zero() => {}
            Ok(prod) => {
                let j = (0..prod.ncols()).find(|&j| !prod.column(j).is_zero()).unwrap_or(0);
                violations.push(Violation {
                    degree: i,
                    detail: format!(
                        "d^{} ∘ d^{} sends {} to {}",
                        i + 1,
                        i,
                        c.groups[i].module.name(j),
                        prod.column(j).display(prod.target())
                    ),
                });
            }
            Err(e) => violations.push(Violation { degree: i, detail: e.to_string() }),
        }
    }
    CheckReport { name: "d∘d = 0", violations }
}

/// Exact check of `g(d(b)) = d(g(b))` for every differential, every
/// `g ∈ {e, h, f}` and every source basis vector `b`.
pub fn check_equivariance(c: &ChainComplex) -> CheckReport {
    let mut violations = vec![];
    for (i, d) in c.differentials.iter().enumerate() {
        let (src, tgt) = (&c.groups[i], &c.groups[i + 1]);
        for g in Sl2::ALL {
            for b in 0..src.module.rank() {
                let basis = Element::basis(b);
                let lhs = tgt.action.act(g, &d.apply(&basis));
                let rhs = d.apply(&src.action.act(g, &basis));
                if lhs != rhs {
                    violations.push(Violation {
                        degree: i,
                        detail: format!(
                            "{g}(d^{i}({name})) = {} but d^{i}({g}({name})) = {}",
                            lhs.display(&tgt.module),
                            rhs.display(&tgt.module),
                            name = src.module.name(b)
                        ),
                    });
                }
            }
        }
    }
    CheckReport { name: "sl2-equivariance", violations }
}

/// Differential labels of the open-chain complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormalDifferential {
    /// zip foam `z`
    Zip,
    /// `h•_R − h•_L`
    DotDifference,
    /// `h•_R + h•_L + E₁h`
    DotSum,
}

impl fmt::Display for FormalDifferential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FormalDifferential::Zip => "z",
            FormalDifferential::DotDifference => "h•_R − h•_L",
            FormalDifferential::DotSum => "h•_R + h•_L + E₁h",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalTerm {
    pub q_shift: i64,
    pub web: WebLabel,
    pub green_dots: u32,
}

/// Shifts, webs and differential labels of the complex of a chain of `k`
/// half twists. No state spaces are attached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalComplexDescription {
    pub terms: Vec<FormalTerm>,
    pub labels: Vec<FormalDifferential>,
}

impl FormalComplexDescription {
    pub fn drop_leftmost(&self) -> Self {
        FormalComplexDescription { terms: self.terms[1..].to_vec(), labels: self.labels[1..].to_vec() }
    }

    pub fn shifted(&self, by: i64) -> Self {
        let terms = self.terms.iter().map(|t| FormalTerm { q_shift: t.q_shift + by, ..t.clone() }).collect();
        FormalComplexDescription { terms, labels: self.labels.clone() }
    }
}

impl fmt::Display for FormalComplexDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0")?;
        for (i, t) in self.terms.iter().enumerate() {
            let arrow = if i == 0 { "→".to_string() } else { format!("--{}-->", self.labels[i - 1]) };
            write!(f, " {arrow} q^{}·{}", t.q_shift, t.web)?;
        }
        write!(f, " → 0")
    }
}

pub fn ak_complex_description(k: i64) -> Result<FormalComplexDescription> {
    if k < 2 {
        return Err(Error::InvalidK(k));
    }
    let k = k as usize;
    let mut terms = Vec::with_capacity(k + 1);
    for i in 0..k {
        let n = (k - 1 - i) as u32;
        terms.push(FormalTerm { q_shift: k as i64 - 1 - 2 * i as i64, web: WebLabel::FormalH(n), green_dots: n });
    }
    terms.push(FormalTerm { q_shift: -(k as i64), web: WebLabel::Strands, green_dots: 0 });
    let labels = (0..k)
        .map(|i| match k - i {
            1 => FormalDifferential::Zip,
            j if j % 2 == 0 => FormalDifferential::DotDifference,
            _ => FormalDifferential::DotSum,
        })
        .collect();
    Ok(FormalComplexDescription { terms, labels })
}
