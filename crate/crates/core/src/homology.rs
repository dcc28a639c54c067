//! Homology of the torus complex, computed two independent ways.
//!
//! The slice engine works one q-degree at a time: every graded piece of a
//! free R-module is a finite-dimensional vector space, so homology
//! dimensions are plain ranks of rational matrices. The symbolic route
//! produces presentations (generators and relations over R) from the
//! alternating pattern of zero and injective differentials.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::complex::{ChainComplex, RMatrix};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, RowSpace};
use crate::polyring::{Scalar, SymPoly};
use crate::statespace::{BasisVector, Element, GradedModule};

/// All monomial multiples `E1^a E2^b · b_j` of total degree `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceBasis {
    pub q: i64,
    pub entries: Vec<((u32, u32), usize)>,
    index: HashMap<((u32, u32), usize), usize>,
}

impl SliceBasis {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Coordinates of a degree-`q` element; `None` if it has terms outside the slice.
    pub fn coordinates(&self, v: &Element) -> Option<Vec<Scalar>> {
        let mut out = vec![Scalar::zero(); self.len()];
        for (j, p) in v.terms() {
            for (&mono, c) in p.terms() {
                out[*self.index.get(&(mono, j))?] += c;
            }
        }
        Some(out)
    }

    pub fn element(&self, coords: &[Scalar]) -> Element {
        let mut out = Element::zero();
        for (&((a, b), j), c) in self.entries.iter().zip(coords) {
            out.add_term(j, &SymPoly::monomial(a, b, c.clone()));
        }
        out
    }
}

/// Exponent pairs `(a, b)` with `2a + 4b = deg`, ordered by increasing `b`.
pub fn monomials_of_degree(deg: i64) -> Vec<(u32, u32)> {
    if deg < 0 || deg % 2 != 0 {
        return vec![];
    }
    (0..=deg / 4).map(|b| (((deg - 4 * b) / 2) as u32, b as u32)).collect()
}

pub fn slice_basis(m: &GradedModule, q: i64) -> SliceBasis {
    let entries: Vec<_> = (0..m.rank())
        .flat_map(|j| monomials_of_degree(q - m.total_qdeg(j)).into_iter().map(move |mono| (mono, j)))
        .collect();
    let index = entries.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    SliceBasis { q, entries, index }
}

/// Matrix of a degree-preserving map on the degree-`q` slices.
pub fn slice_map(d: &RMatrix, q: i64) -> Matrix {
    let src = slice_basis(d.source(), q);
    let tgt = slice_basis(d.target(), q);
    let columns: Vec<Vec<Scalar>> = src
        .entries
        .iter()
        .map(|&((a, b), j)| {
            let image = d.column(j).scale(&SymPoly::monomial(a, b, Scalar::one()));
            tgt.coordinates(&image).expect("differential preserves q-degree")
        })
        .collect();
    Matrix::from_columns(tgt.len(), &columns)
}

/// Truncated graded dimensions, keyed by (cohomological degree, q).
/// Only nonzero dimensions are stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertTable {
    pub qmax: i64,
    entries: BTreeMap<(usize, i64), usize>,
}

impl HilbertTable {
    pub fn new(qmax: i64) -> Self {
        HilbertTable { qmax, entries: BTreeMap::new() }
    }

    pub fn set(&mut self, i: usize, q: i64, dim: usize) {
        if q > self.qmax {
            return;
        }
        if dim == 0 {
            self.entries.remove(&(i, q));
        } else {
            self.entries.insert((i, q), dim);
        }
    }

    pub fn get(&self, i: usize, q: i64) -> usize {
        self.entries.get(&(i, q)).copied().unwrap_or(0)
    }

    /// Nonzero `(q, dim)` pairs of one cohomological degree.
    pub fn series(&self, i: usize) -> Vec<(i64, usize)> {
        self.entries.range((i, i64::MIN)..=(i, i64::MAX)).map(|(&(_, q), &d)| (q, d)).collect()
    }

    pub fn is_zero_in(&self, i: usize) -> bool {
        self.series(i).is_empty()
    }

    /// First `(i, q, self, other)` where the tables differ.
    pub fn first_difference(&self, other: &HilbertTable) -> Option<(usize, i64, usize, usize)> {
        let keys = self.entries.keys().chain(other.entries.keys());
        keys.map(|&(i, q)| (i, q, self.get(i, q), other.get(i, q)))
            .filter(|&(_, _, a, b)| a != b)
            .min_by_key(|&(i, q, _, _)| (i, q))
    }
}

/// `dim ker d^i - rank d^{i-1}` on every slice up to `qmax`.
pub fn homology_dims(c: &ChainComplex, qmax: i64) -> HilbertTable {
    let mut table = HilbertTable::new(qmax);
    for i in 0..=c.top_degree() {
        let module = &c.group(i).module;
        let Some(qmin) = module.min_qdeg() else { continue };
        for q in qmin..=qmax {
            let dim = slice_basis(module, q).len();
            if dim == 0 {
                continue;
            }
            let rank_out = c.differential(i).map_or(0, |d| slice_map(d, q).rank());
            let rank_in = c.incoming(i).map_or(0, |d| slice_map(d, q).rank());
            table.set(i, q, dim - rank_out - rank_in);
        }
    }
    table
}

/// Closed-form graded dimensions of the normalized homology of `T(2, k)`.
pub fn expected_dims(k: i64, qmax: i64) -> Result<HilbertTable> {
    if k < 2 {
        return Err(Error::InvalidK(k));
    }
    let mut table = HilbertTable::new(qmax);
    let ku = k as usize;
    // q^{-2} / (1 - q^2)^2
    let mut q = -2;
    while q <= qmax {
        table.set(ku, q, ((q + 2) / 2 + 1) as usize);
        q += 2;
    }
    // q^{2j-2} / (1 - q^2) for even 0 < j < k
    for j in (2..k).step_by(2) {
        let mut q = 2 * j - 2;
        while q <= qmax {
            table.set(ku - j as usize, q, 1);
            q += 2;
        }
    }
    // q^{2k-2} / (1 - q^2)^2 for even k
    if k % 2 == 0 {
        let mut q = 2 * k - 2;
        while q <= qmax {
            table.set(0, q, ((q - (2 * k - 2)) / 2 + 1) as usize);
            q += 2;
        }
    }
    Ok(table)
}

fn determinant(m: &[Vec<SymPoly>]) -> SymPoly {
    match m.len() {
        0 => SymPoly::one(),
        1 => m[0][0].clone(),
        n => {
            let mut acc = SymPoly::zero();
            for col in 0..n {
                if m[0][col].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<SymPoly>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(c, _)| c != col).map(|(_, p)| p.clone()).collect())
                    .collect();
                let term = &m[0][col] * &determinant(&minor);
                if col % 2 == 0 {
                    acc += &term;
                } else {
                    acc -= &term;
                }
            }
            acc
        }
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = combinations(n - 1, k);
    for mut c in combinations(n - 1, k - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out
}

/// Row subsets whose square minor has nonzero determinant. Over the
/// integral domain R a matrix is injective iff this list is non-empty.
pub fn nonvanishing_maximal_minors(d: &RMatrix) -> Vec<(Vec<usize>, SymPoly)> {
    let cols = d.ncols();
    combinations(d.nrows(), cols)
        .into_iter()
        .filter_map(|rows| {
            let sub: Vec<Vec<SymPoly>> =
                rows.iter().map(|&r| (0..cols).map(|c| d.entry(r, c).clone()).collect()).collect();
            let det = determinant(&sub);
            (!det.is_zero()).then_some((rows, det))
        })
        .collect()
}

pub fn is_injective(d: &RMatrix) -> bool {
    d.ncols() <= d.nrows() && !nonvanishing_maximal_minors(d).is_empty()
}

/// A finitely presented graded R-module, remembering how it arose as a
/// quotient of an ambient free module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    module: GradedModule,
    relations: Vec<Element>,
    ambient: GradedModule,
    ambient_images: Vec<Element>,
    ambient_relations: Vec<Element>,
}

impl Presentation {
    /// The free module on `ambient` with no relations.
    pub fn free(ambient: &GradedModule) -> Self {
        let module = generator_module(ambient, &(0..ambient.rank()).collect::<Vec<_>>());
        Presentation {
            module,
            relations: vec![],
            ambient: ambient.clone(),
            ambient_images: (0..ambient.rank()).map(Element::basis).collect(),
            ambient_relations: vec![],
        }
    }

    /// The zero module, viewed as a subquotient of `ambient`.
    pub fn zero(ambient: &GradedModule) -> Self {
        Presentation {
            module: generator_module(ambient, &[]),
            relations: vec![],
            ambient: ambient.clone(),
            ambient_images: vec![Element::zero(); ambient.rank()],
            ambient_relations: vec![],
        }
    }

    /// Generators as a graded free module (shift 0, intrinsic = total degree).
    pub fn module(&self) -> &GradedModule {
        &self.module
    }

    pub fn generators(&self) -> Vec<(String, i64)> {
        self.module.basis().iter().map(|b| (b.name.clone(), b.intrinsic_qdeg)).collect()
    }

    pub fn relations(&self) -> &[Element] {
        &self.relations
    }

    pub fn ambient(&self) -> &GradedModule {
        &self.ambient
    }

    /// Relations over the ambient basis before any simplification.
    pub fn ambient_relations(&self) -> &[Element] {
        &self.ambient_relations
    }

    pub fn is_zero(&self) -> bool {
        self.module.rank() == 0
    }

    pub fn is_free(&self) -> bool {
        self.relations.is_empty()
    }

    /// Image of an ambient element under the quotient map (not yet reduced
    /// modulo the remaining relations).
    pub fn project(&self, v: &Element) -> Element {
        let mut out = Element::zero();
        for (i, p) in v.terms() {
            out = &out + &self.ambient_images[i].scale(p);
        }
        out
    }

    /// Generator index of ambient basis vector `i`, if it survived.
    pub fn generator_of(&self, i: usize) -> Option<usize> {
        self.module.index_of(self.ambient.name(i))
    }

    pub fn relation_strings(&self) -> Vec<String> {
        self.relations.iter().map(|r| r.display(&self.module).to_string()).collect()
    }

    pub fn slice(&self, q: i64) -> QuotientSlice {
        QuotientSlice::new(self, q)
    }

    pub fn slice_dim(&self, q: i64) -> usize {
        self.slice(q).dim()
    }
}

fn generator_module(ambient: &GradedModule, keep: &[usize]) -> GradedModule {
    let basis = keep.iter().map(|&i| BasisVector::new(ambient.name(i), ambient.total_qdeg(i))).collect();
    GradedModule::new(basis, 0, ambient.label()).expect("names inherited from a valid module")
}

fn substitute(v: &Element, gen: usize, expr: &Element) -> Element {
    let p = v.coeff(gen);
    if p.is_zero() {
        return v.clone();
    }
    &(v - &Element::term(gen, p.clone())) + &expr.scale(&p)
}

/// Scale so the leading coefficient of the first nonzero term is 1.
fn normalize_relation(r: &Element) -> Element {
    let Some((_, p)) = r.terms().next() else { return r.clone() };
    let (_, lead) = p.leading_term().expect("nonzero term");
    r.scale_scalar(&(Scalar::one() / lead))
}

/// Generators are the target basis, relations the columns of `d`; then
/// generators are eliminated through relations with invertible scalar
/// coefficients until none remain.
pub fn cokernel_presentation(d: &RMatrix) -> Presentation {
    let ambient = d.target().clone();
    let n = ambient.rank();
    let ambient_relations: Vec<Element> = (0..d.ncols()).map(|j| d.column(j)).filter(|c| !c.is_zero()).collect();
    let mut relations = ambient_relations.clone();
    let mut eliminated: Vec<Option<Element>> = vec![None; n];

    // Prefer the unit entry with the largest basis index in the earliest relation.
    while let Some((ri, gen, unit)) = relations.iter().enumerate().find_map(|(ri, r)| {
        r.terms().filter_map(|(i, p)| p.as_unit().map(|u| (ri, i, u))).last()
    }) {
        let rel = relations.remove(ri);
        let rest = &rel - &Element::term(gen, SymPoly::constant(unit.clone()));
        let expr = rest.scale_scalar(&(-Scalar::one() / unit));
        for r in relations.iter_mut() {
            *r = substitute(r, gen, &expr);
        }
        for e in eliminated.iter_mut().flatten() {
            *e = substitute(e, gen, &expr);
        }
        eliminated[gen] = Some(expr);
        relations.retain(|r| !r.is_zero());
    }

    let keep: Vec<usize> = (0..n).filter(|&i| eliminated[i].is_none()).collect();
    let mut new_index = vec![usize::MAX; n];
    for (new, &old) in keep.iter().enumerate() {
        new_index[old] = new;
    }
    let reindex = |e: &Element| e.reindex(|i| new_index[i]);
    let ambient_images = (0..n)
        .map(|i| match &eliminated[i] {
            None => Element::basis(new_index[i]),
            Some(expr) => reindex(expr),
        })
        .collect();
    Presentation {
        module: generator_module(&ambient, &keep),
        relations: relations.iter().map(|r| normalize_relation(&reindex(r))).collect(),
        ambient,
        ambient_images,
        ambient_relations,
    }
}

/// Homology at degree `i` of a complex whose differentials around `i` are
/// not both nonzero.
pub fn homology_presentation(c: &ChainComplex, i: usize) -> Result<Presentation> {
    if i > c.top_degree() {
        return Err(Error::DegreeOutOfRange { degree: i as i64, k: c.top_degree() });
    }
    let ambient = &c.group(i).module;
    let outgoing = c.differential(i).filter(|d| !d.is_zero());
    let incoming = c.incoming(i).filter(|d| !d.is_zero());
    match (outgoing, incoming) {
        (None, Some(d_in)) => Ok(cokernel_presentation(d_in)),
        (None, None) => Ok(Presentation::free(ambient)),
        (Some(d_out), None) if is_injective(d_out) => Ok(Presentation::zero(ambient)),
        (Some(_), None) => Err(Error::StructureViolation {
            degree: i,
            reason: "outgoing differential is not injective; a kernel computation would be required".into(),
        }),
        (Some(_), Some(_)) => Err(Error::StructureViolation {
            degree: i,
            reason: "both adjacent differentials are nonzero".into(),
        }),
    }
}

/// One graded piece of a presented module: the free slice modulo the span
/// of all monomial multiples of relations.
#[derive(Clone, Debug)]
pub struct QuotientSlice {
    basis: SliceBasis,
    relations: RowSpace,
    free_coords: Vec<usize>,
}

impl QuotientSlice {
    fn new(p: &Presentation, q: i64) -> Self {
        let basis = slice_basis(&p.module, q);
        let width = basis.len();
        // Pivot on later slice entries first, so quotient bases favour
        // high powers of E1 and earlier generators.
        let mut relations = RowSpace::new(width, (0..width).rev().collect());
        for r in &p.relations {
            let Some(deg) = r.homogeneous_degree(&p.module) else { continue };
            for (a, b) in monomials_of_degree(q - deg) {
                let multiple = r.scale(&SymPoly::monomial(a, b, Scalar::one()));
                relations.insert(&basis.coordinates(&multiple).expect("relation multiple lies in the slice"));
            }
        }
        let pivots = relations.pivots();
        let free_coords = (0..width).filter(|c| !pivots.contains(c)).collect();
        QuotientSlice { basis, relations, free_coords }
    }

    pub fn q(&self) -> i64 {
        self.basis.q
    }

    pub fn dim(&self) -> usize {
        self.free_coords.len()
    }

    /// Coordinates of `v` (homogeneous of this degree) in the quotient basis.
    pub fn reduce(&self, v: &Element) -> Vec<Scalar> {
        let coords = self.basis.coordinates(v).expect("element lies in this slice");
        let reduced = self.relations.reduce(&coords);
        self.free_coords.iter().map(|&c| reduced[c].clone()).collect()
    }

    pub fn lift(&self, coords: &[Scalar]) -> Element {
        let mut full = vec![Scalar::zero(); self.basis.len()];
        for (&c, v) in self.free_coords.iter().zip(coords) {
            full[c] = v.clone();
        }
        self.basis.element(&full)
    }

    /// Canonical representative of the class of `v`.
    pub fn normal_form(&self, v: &Element) -> Element {
        self.lift(&self.reduce(v))
    }

    pub fn contains_relation(&self, v: &Element) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    pub fn basis_elements(&self) -> Vec<Element> {
        (0..self.dim())
            .map(|i| {
                let mut coords = vec![Scalar::zero(); self.dim()];
                coords[i] = Scalar::one();
                self.lift(&coords)
            })
            .collect()
    }
}
