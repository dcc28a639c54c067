//! sl2-module structure of the homology groups.
//!
//! Every homology group is a graded quotient of a free R-module whose
//! graded pieces are finite dimensional. With the normalized grading the
//! weight of a homogeneous vector is minus its q-degree, so weight spaces
//! are q-slices and every question about the action reduces to exact
//! linear algebra on finitely many slices.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::complex::ChainComplex;
use crate::error::{Error, Result};
use crate::homology::{homology_presentation, Presentation, QuotientSlice};
use crate::linalg::{Matrix, RowSpace};
use crate::polyring::{scalar, Scalar, Sl2};
use crate::statespace::{Element, GradedModule, Sl2ActionSpec};

/// A presented module with an sl2 action on its generators.
#[derive(Clone, Debug)]
pub struct EquivariantModule {
    presentation: Presentation,
    action: Sl2ActionSpec,
}

/// Homology at degree `i` with the action induced from the chain group.
pub fn induced_module(c: &ChainComplex, i: usize) -> Result<EquivariantModule> {
    if !c.is_normalized() {
        return Err(Error::NotNormalized);
    }
    let presentation = homology_presentation(c, i)?;
    let group = c.group(i);
    let gens = presentation.module();
    let mut values: [Vec<Element>; 3] = Default::default();
    for g in Sl2::ALL {
        for t in 0..gens.rank() {
            let ambient_index = presentation.ambient().index_of(gens.name(t)).expect("generator comes from the chain group");
            let image = presentation.project(&group.action.act(g, &Element::basis(ambient_index)));
            values[g.index()].push(image);
        }
    }
    let [e, h, f] = values;
    let action = Sl2ActionSpec::new(gens, e, h, f)?;
    let module = EquivariantModule { presentation, action };
    module.check_well_defined(&group.action)?;
    Ok(module)
}

impl EquivariantModule {
    pub fn new(presentation: Presentation, action: Sl2ActionSpec) -> Self {
        EquivariantModule { presentation, action }
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn generators(&self) -> &GradedModule {
        self.presentation.module()
    }

    pub fn action(&self) -> &Sl2ActionSpec {
        &self.action
    }

    pub fn is_zero(&self) -> bool {
        self.presentation.is_zero()
    }

    /// Every relation, and every original relation of the ambient module,
    /// must be carried into the relation submodule by e, h and f.
    fn check_well_defined(&self, ambient_action: &Sl2ActionSpec) -> Result<()> {
        let gens = self.generators();
        let fail = |g: Sl2, relation: String, deg: i64| Error::WellDefinednessFailure { g, relation, weight: -deg };
        for g in Sl2::ALL {
            for r in self.presentation.relations() {
                let deg = r.homogeneous_degree(gens).expect("relations are homogeneous") + g.degree_shift();
                if !self.presentation.slice(deg).contains_relation(&self.action.act(g, r)) {
                    return Err(fail(g, r.display(gens).to_string(), deg));
                }
            }
            let ambient = self.presentation.ambient();
            for r in self.presentation.ambient_relations() {
                let deg = r.homogeneous_degree(ambient).expect("relations are homogeneous") + g.degree_shift();
                let image = self.presentation.project(&ambient_action.act(g, r));
                if !self.presentation.slice(deg).contains_relation(&image) {
                    return Err(fail(g, r.display(ambient).to_string(), deg));
                }
            }
        }
        Ok(())
    }

    /// Highest weight among the generators.
    pub fn top_weight(&self) -> Option<i64> {
        let gens = self.generators();
        (0..gens.rank()).map(|i| -gens.total_qdeg(i)).max()
    }

    pub fn weight_slice(&self, weight: i64) -> QuotientSlice {
        self.presentation.slice(-weight)
    }

    /// Basis of the weight space `A_λ`, i.e. the `q = -λ` slice.
    pub fn weight_space(&self, weight: i64) -> Vec<Element> {
        self.weight_slice(weight).basis_elements()
    }

    pub fn weight_dim(&self, weight: i64) -> usize {
        self.weight_slice(weight).dim()
    }

    /// Canonical representative modulo the relations.
    pub fn normal_form(&self, v: &Element) -> Element {
        let gens = self.generators();
        let mut out = Element::zero();
        for (deg, part) in v.components(gens) {
            out = &out + &self.presentation.slice(deg).normal_form(&part);
        }
        out
    }

    pub fn act(&self, g: Sl2, v: &Element) -> Element {
        self.normal_form(&self.action.act(g, v))
    }

    pub fn weight_of(&self, v: &Element) -> Option<i64> {
        v.homogeneous_degree(self.generators()).map(|d| -d)
    }

    /// Matrix of `op` from weight `weight` to weight `weight + shift`, in
    /// quotient-slice coordinates.
    fn operator_matrix(&self, g: Sl2, weight: i64) -> Matrix {
        let src = self.weight_slice(weight);
        let tgt = self.weight_slice(weight - g.degree_shift());
        let columns: Vec<Vec<Scalar>> =
            src.basis_elements().iter().map(|b| tgt.reduce(&self.action.act(g, b))).collect();
        Matrix::from_columns(tgt.dim(), &columns)
    }

    /// Basis of `ker e` on `A_λ`, each vector scaled so its first nonzero
    /// coordinate is 1.
    pub fn highest_weight_vectors(&self, weight: i64) -> Vec<Element> {
        let src = self.weight_slice(weight);
        self.operator_matrix(Sl2::E, weight)
            .kernel()
            .into_iter()
            .map(|v| src.lift(&normalize_leading(&v)))
            .collect()
    }

    /// `[v, f v, f^2 v, ...]`, stopping after `depth` vectors or before the
    /// first zero.
    pub fn f_orbit(&self, v: &Element, depth: usize) -> FOrbit {
        let top = self.weight_of(v).unwrap_or(0);
        let mut vectors = vec![];
        let mut cur = self.normal_form(v);
        let mut terminates = cur.is_zero();
        while !terminates && vectors.len() < depth {
            let next = self.act(Sl2::F, &cur);
            vectors.push(cur);
            cur = next;
            terminates = cur.is_zero();
        }
        FOrbit { top_weight: top, vectors, terminates }
    }

    /// Searches weight `low` for a vector `w` outside the orbit spans with
    /// `e w` a nonzero combination of orbit vectors of weight `low + 2`.
    pub fn extension_probe(&self, low: i64, orbits: &[FOrbit]) -> Option<ExtensionWitness> {
        let targets: Vec<Element> = orbits.iter().filter_map(|o| o.at_weight(low + 2).cloned()).collect();
        if targets.is_empty() {
            return None;
        }
        let src = self.weight_slice(low);
        let tgt = self.weight_slice(low + 2);
        let e = self.operator_matrix(Sl2::E, low);
        let n = src.dim();
        // columns: [e | -targets], kernel vectors (w, c) satisfy e w = sum c_t t
        let mut columns: Vec<Vec<Scalar>> = (0..n).map(|j| e.column(j)).collect();
        for t in &targets {
            columns.push(tgt.reduce(t).into_iter().map(|x| -x).collect());
        }
        let m = Matrix::from_columns(tgt.dim(), &columns);

        let mut existing = RowSpace::new(n, (0..n).collect());
        for o in orbits {
            if let Some(v) = o.at_weight(low) {
                existing.insert(&src.reduce(v));
            }
        }
        let kernel = m.kernel();
        let pick = kernel.into_iter().find(|z| {
            z[n..].iter().any(|c| !c.is_zero()) && !existing.contains(&z[..n])
        })?;
        let pick = normalize_leading(&pick);
        let w = src.lift(&pick[..n]);
        let image = self.act(Sl2::E, &w);
        Some(ExtensionWitness { weight: low, w, image, coefficients: pick[n..].to_vec(), targets })
    }

    /// Weight multiplicities from the top weight down to `-bound`.
    pub fn character(&self, bound: i64) -> Character {
        let mut ch = Character::new(bound);
        if let Some(top) = self.top_weight() {
            for w in weights_down(top, bound) {
                ch.insert(w, self.weight_dim(w));
            }
        }
        ch
    }

    /// `[h,e] = 2e`, `[h,f] = -2f`, `[e,f] = h` and `h v = λ v` on every
    /// weight-space basis vector down to weight `-bound`.
    pub fn check_brackets(&self, bound: i64) -> std::result::Result<(), String> {
        let Some(top) = self.top_weight() else { return Ok(()) };
        let gens = self.generators();
        let two = scalar(2);
        for w in weights_down(top, bound) {
            for v in self.weight_space(w) {
                let name = v.display(gens).to_string();
                let comm = |x: Sl2, y: Sl2| &self.act(x, &self.act(y, &v)) - &self.act(y, &self.act(x, &v));
                let checks = [
                    ("[h,e] = 2e", comm(Sl2::H, Sl2::E), self.act(Sl2::E, &v).scale_scalar(&two)),
                    ("[h,f] = -2f", comm(Sl2::H, Sl2::F), self.act(Sl2::F, &v).scale_scalar(&-two.clone())),
                    ("[e,f] = h", comm(Sl2::E, Sl2::F), self.act(Sl2::H, &v)),
                    ("h = weight", self.act(Sl2::H, &v), self.normal_form(&v.scale_scalar(&scalar(w)))),
                ];
                for (label, lhs, rhs) in checks {
                    if lhs != rhs {
                        return Err(format!("{label} fails on {name} at weight {w}"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Top-down character accounting into Verma, simple and dual-Verma
    /// summands over the weight window `[-bound, top]`.
    pub fn classify(&self, bound: i64) -> Result<Decomposition> {
        let Some(top) = self.top_weight() else {
            return Ok(Decomposition::empty(bound));
        };
        let window: Vec<i64> = weights_down(top, bound).collect();
        let Some(&lowest) = window.last() else {
            return Ok(Decomposition::empty(bound));
        };
        let mut summands: Vec<Summand> = vec![];
        let mut accounted = Character::new(bound);
        let mut simples: Vec<(usize, FOrbit)> = vec![];
        let mut extensions = vec![];

        for &w in &window {
            let dim = self.weight_dim(w);
            let seen = accounted.get(w);
            if seen > dim {
                return Err(Error::CharacterMismatch {
                    weight: w,
                    detail: format!("summands already account for {seen} dimensions, module has {dim}"),
                });
            }
            let mut heads = dim - seen;

            for (idx, orbit) in simples.iter() {
                let Summand::Simple(mu) = summands[*idx] else { continue };
                if heads == 0 || -mu - 2 != w {
                    continue;
                }
                if let Some(witness) = self.extension_probe(w, std::slice::from_ref(orbit)) {
                    summands[*idx] = Summand::DualVermaExt(mu);
                    accounted += &Summand::Verma(w).character(bound);
                    heads -= 1;
                    extensions.push(witness);
                }
            }

            let hw = self.highest_weight_vectors(w);
            if hw.len() != heads {
                return Err(Error::CharacterMismatch {
                    weight: w,
                    detail: format!("{} unaccounted dimensions but {} highest-weight vectors", heads, hw.len()),
                });
            }
            for v in hw {
                let depth = ((w - lowest) / 2 + 1).max(w + 2) as usize;
                let orbit = self.f_orbit(&v, depth);
                let summand = if orbit.terminates && w >= 0 && orbit.len() as i64 == w + 1 {
                    simples.push((summands.len(), orbit));
                    Summand::Simple(w)
                } else if !orbit.terminates {
                    Summand::Verma(w)
                } else {
                    return Err(Error::CharacterMismatch {
                        weight: w,
                        detail: format!("highest-weight vector with f-orbit of length {}", orbit.len()),
                    });
                };
                accounted += &summand.character(bound);
                summands.push(summand);
            }
        }

        let actual = self.character(bound);
        if accounted != actual {
            let w = window.iter().copied().find(|&w| accounted.get(w) != actual.get(w)).unwrap_or(lowest);
            return Err(Error::CharacterMismatch {
                weight: w,
                detail: format!("summands give {}, module has {}", accounted.get(w), actual.get(w)),
            });
        }
        Ok(Decomposition::collapse_tail(summands, lowest, bound, extensions))
    }
}

fn weights_down(top: i64, bound: i64) -> impl Iterator<Item = i64> {
    (0..).map(move |s| top - 2 * s).take_while(move |&w| w >= -bound)
}

fn normalize_leading(v: &[Scalar]) -> Vec<Scalar> {
    match v.iter().find(|x| !x.is_zero()) {
        Some(lead) => {
            let inv = Scalar::one() / lead;
            v.iter().map(|x| x * &inv).collect()
        }
        None => v.to_vec(),
    }
}

/// Iterated f-images of a homogeneous vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FOrbit {
    pub top_weight: i64,
    pub vectors: Vec<Element>,
    /// True when the next f-image is zero.
    pub terminates: bool,
}

impl FOrbit {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn at_weight(&self, weight: i64) -> Option<&Element> {
        let steps = self.top_weight - weight;
        if steps < 0 || steps % 2 != 0 {
            return None;
        }
        self.vectors.get((steps / 2) as usize)
    }
}

/// A vector `w` of weight `weight` with `e w = sum coefficients[i] * targets[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionWitness {
    pub weight: i64,
    pub w: Element,
    pub image: Element,
    pub coefficients: Vec<Scalar>,
    pub targets: Vec<Element>,
}

/// Weight multiplicities on the window `weight >= -bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    bound: i64,
    dims: BTreeMap<i64, usize>,
}

impl Character {
    pub fn new(bound: i64) -> Self {
        Character { bound, dims: BTreeMap::new() }
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    pub fn insert(&mut self, weight: i64, dim: usize) {
        if weight < -self.bound || dim == 0 {
            return;
        }
        *self.dims.entry(weight).or_insert(0) += dim;
    }

    pub fn get(&self, weight: i64) -> usize {
        self.dims.get(&weight).copied().unwrap_or(0)
    }

    /// Nonzero `(weight, dim)` pairs, highest weight first.
    pub fn entries(&self) -> Vec<(i64, usize)> {
        self.dims.iter().rev().map(|(&w, &d)| (w, d)).collect()
    }
}

impl AddAssign<&Character> for Character {
    fn add_assign(&mut self, rhs: &Character) {
        debug_assert_eq!(self.bound, rhs.bound);
        for (&w, &d) in &rhs.dims {
            self.insert(w, d);
        }
    }
}

impl Add<&Character> for &Character {
    type Output = Character;
    fn add(self, rhs: &Character) -> Character {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

/// Indecomposable pieces: Verma `M(λ)`, simple `L(λ)` and the length-two
/// module `M*(λ)` with socle `L(λ)` and quotient `M(-λ-2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "lambda")]
pub enum Summand {
    Verma(i64),
    Simple(i64),
    DualVermaExt(i64),
}

impl Summand {
    pub fn lambda(&self) -> i64 {
        match *self {
            Summand::Verma(l) | Summand::Simple(l) | Summand::DualVermaExt(l) => l,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Summand::Verma(_) => "Verma",
            Summand::Simple(_) => "Simple",
            Summand::DualVermaExt(_) => "DualVermaExt",
        }
    }

    pub fn character(&self, bound: i64) -> Character {
        let mut ch = Character::new(bound);
        match *self {
            Summand::Verma(l) => weights_down(l, bound).for_each(|w| ch.insert(w, 1)),
            Summand::Simple(l) => {
                if l >= 0 {
                    weights_down(l, bound).take_while(|&w| w >= -l).for_each(|w| ch.insert(w, 1));
                }
            }
            Summand::DualVermaExt(l) => {
                ch += &Summand::Simple(l).character(bound);
                ch += &Summand::Verma(-l - 2).character(bound);
            }
        }
        ch
    }
}

impl fmt::Display for Summand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Summand::Verma(l) => write!(f, "M({l})"),
            Summand::Simple(l) => write!(f, "L({l})"),
            Summand::DualVermaExt(l) => write!(f, "M*({l})"),
        }
    }
}

/// Character of a direct sum.
pub fn character_of(summands: &[Summand], bound: i64) -> Character {
    let mut ch = Character::new(bound);
    for s in summands {
        ch += &s.character(bound);
    }
    ch
}

/// `M(start) ⊕ M(start + step) ⊕ ...` continuing past the weight window.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VermaTail {
    pub start: i64,
    pub step: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub bound: i64,
    pub summands: Vec<Summand>,
    pub tail: Option<VermaTail>,
    pub extensions: Vec<ExtensionWitness>,
}

impl Decomposition {
    fn empty(bound: i64) -> Self {
        Decomposition { bound, summands: vec![], tail: None, extensions: vec![] }
    }

    /// Folds a run of Verma summands at consecutive weights that reaches the
    /// bottom of the window into a tail marker.
    fn collapse_tail(mut summands: Vec<Summand>, lowest: i64, bound: i64, extensions: Vec<ExtensionWitness>) -> Self {
        let mut run_start = None;
        let mut expected = lowest;
        for (pos, s) in summands.iter().enumerate().rev() {
            match s {
                Summand::Verma(l) if *l == expected => {
                    run_start = Some(pos);
                    expected += 2;
                }
                _ => break,
            }
        }
        let tail = match run_start {
            Some(pos) if summands.len() - pos >= 2 => {
                let start = summands[pos].lambda();
                summands.truncate(pos);
                Some(VermaTail { start, step: -2 })
            }
            _ => None,
        };
        Decomposition { bound, summands, tail, extensions }
    }

    /// All summands meeting the window, the tail expanded.
    pub fn window_summands(&self) -> Vec<Summand> {
        let mut out = self.summands.clone();
        if let Some(t) = self.tail {
            out.extend(weights_down(t.start, self.bound).map(Summand::Verma));
        }
        out
    }

    pub fn character(&self) -> Character {
        character_of(&self.window_summands(), self.bound)
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.summands.iter().map(ToString::to_string).collect();
        if let Some(t) = self.tail {
            parts.push(format!("⊕_{{r≥{}}} M(-2r)", -t.start / 2));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" ⊕ "))
        }
    }
}

/// Closed-form decomposition of the normalized homology at degree `i`.
pub fn expected_decomposition(k: i64, i: usize, bound: i64) -> Result<Decomposition> {
    if k < 2 {
        return Err(Error::InvalidK(k));
    }
    if i as i64 > k {
        return Err(Error::DegreeOutOfRange { degree: i as i64, k: k as usize });
    }
    let j = k - i as i64;
    let mut d = Decomposition::empty(bound);
    if j == 0 {
        d.summands = vec![Summand::DualVermaExt(2), Summand::DualVermaExt(0)];
        d.tail = Some(VermaTail { start: -2, step: -2 });
    } else if j % 2 == 0 && j < k {
        d.summands = vec![Summand::Verma(-2 * j + 2)];
    } else if j == k && k % 2 == 0 {
        d.tail = Some(VermaTail { start: -2 * (k - 1), step: -2 });
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::torus_complex;
    use crate::polyring::{e1, e2, SymPoly};
    use crate::statespace::{DOT_O, OO, THETA};

    fn top_module(k: i64) -> EquivariantModule {
        let c = torus_complex(k, true).unwrap();
        induced_module(&c, k as usize).unwrap()
    }

    fn p(terms: &[(u32, u32, i64)]) -> SymPoly {
        SymPoly::from_terms(terms.iter().copied())
    }

    /// `a` = o⊗o, `b` = o•⊗o in the top-degree module.
    fn ab(m: &EquivariantModule, pa: SymPoly, pb: SymPoly) -> Element {
        let g = m.generators();
        Element::from_terms([(g.index_of(OO).unwrap(), pa), (g.index_of(DOT_O).unwrap(), pb)])
    }

    #[test]
    fn rejects_unnormalized() {
        let c = torus_complex(3, false).unwrap();
        assert!(matches!(induced_module(&c, 3), Err(Error::NotNormalized)));
    }

    #[test]
    fn top_module_generator_table() {
        let m = top_module(4);
        let a = ab(&m, SymPoly::one(), SymPoly::zero());
        let b = ab(&m, SymPoly::zero(), SymPoly::one());
        assert!(m.act(Sl2::E, &a).is_zero());
        assert_eq!(m.act(Sl2::E, &b), -&a);
        assert_eq!(m.act(Sl2::F, &a), a.scale(&-e1()));
        assert_eq!(m.act(Sl2::F, &b), a.scale(&-e2()));
        assert_eq!(m.act(Sl2::H, &a), a.scale(&SymPoly::from_int(2)));
    }

    #[test]
    fn torsion_generator_table() {
        for k in 3..=8i64 {
            let c = torus_complex(k, true).unwrap();
            for j in (2..k).step_by(2) {
                let m = induced_module(&c, (k - j) as usize).unwrap();
                assert_eq!(m.generators().rank(), 1);
                assert_eq!(m.generators().name(0), THETA);
                let t = Element::basis(0);
                assert!(m.act(Sl2::E, &t).is_zero());
                assert_eq!(m.act(Sl2::F, &t), m.normal_form(&t.scale(&e1().scale(&scalar(j - 1)))));
                assert_eq!(m.top_weight(), Some(-(2 * j - 2)));
            }
        }
    }

    #[test]
    fn torsion_relation_is_preserved() {
        let c = torus_complex(4, true).unwrap();
        let m = induced_module(&c, 2).unwrap();
        let r = &m.presentation().relations()[0];
        let fr = m.action().act(Sl2::F, r);
        let deg = fr.homogeneous_degree(m.generators()).unwrap();
        assert!(m.presentation().slice(deg).contains_relation(&fr));
    }

    #[test]
    fn weight_spaces_of_top_module() {
        let m = top_module(3);
        assert_eq!(m.weight_space(2), vec![ab(&m, SymPoly::one(), SymPoly::zero())]);
        assert_eq!(m.weight_space(-4).len(), 4);
        assert!(m.weight_space(1).is_empty());
        for w in (-20..=2).step_by(2) {
            assert_eq!(m.weight_dim(w) as i64, -w / 2 + 2);
        }
    }

    #[test]
    fn highest_weight_vectors_of_top_module() {
        let m = top_module(2);
        let v0 = ab(&m, e1(), SymPoly::from_int(-2));
        assert_eq!(m.highest_weight_vectors(0), vec![v0]);
        let vm2 = ab(&m, p(&[(2, 0, 1), (0, 1, -4)]), SymPoly::zero());
        assert_eq!(m.highest_weight_vectors(-2), vec![vm2]);
        let vm4 = ab(&m, p(&[(3, 0, 1), (1, 1, -4)]), p(&[(2, 0, -2), (0, 1, 8)]));
        assert_eq!(m.highest_weight_vectors(-4), vec![vm4]);
        for w in (-20..=2).step_by(2) {
            let hw = m.highest_weight_vectors(w);
            assert_eq!(hw.len(), 1);
            assert!(m.act(Sl2::E, &hw[0]).is_zero());
        }
    }

    #[test]
    fn f_orbits_of_top_module() {
        let m = top_module(2);
        let v2 = ab(&m, SymPoly::one(), SymPoly::zero());
        let orbit = m.f_orbit(&v2, 10);
        assert!(orbit.terminates);
        assert_eq!(orbit.len(), 3);
        assert_eq!(orbit.vectors[1], ab(&m, -e1(), SymPoly::zero()));
        assert_eq!(orbit.vectors[2], ab(&m, e2().scale(&scalar(2)), SymPoly::zero()));
        let v0 = ab(&m, e1(), SymPoly::from_int(-2));
        let o0 = m.f_orbit(&v0, 10);
        assert!(o0.terminates);
        assert_eq!(o0.len(), 1);
        let truncated = m.f_orbit(&m.highest_weight_vectors(-2)[0], 5);
        assert!(!truncated.terminates);
        assert_eq!(truncated.len(), 5);
    }

    #[test]
    fn extension_probes_on_top_module() {
        let m = top_module(2);
        let o0 = m.f_orbit(&ab(&m, e1(), SymPoly::from_int(-2)), 5);
        let w2 = m.extension_probe(-2, &[o0]).expect("extension at weight -2");
        assert_eq!(w2.coefficients.len(), 1);
        assert!(!w2.coefficients[0].is_zero());
        assert_eq!(m.act(Sl2::E, &w2.w), w2.targets[0].scale_scalar(&w2.coefficients[0]));

        let o2 = m.f_orbit(&ab(&m, SymPoly::one(), SymPoly::zero()), 5);
        let w4 = m.extension_probe(-4, &[o2]).expect("extension at weight -4");
        assert!(!w4.coefficients[0].is_zero());
        assert_eq!(m.weight_of(&w4.w), Some(-4));
        assert_eq!(m.act(Sl2::E, &w4.w), w4.targets[0].scale_scalar(&w4.coefficients[0]));
    }

    #[test]
    fn no_extension_in_torsion_module() {
        let c = torus_complex(6, true).unwrap();
        let m = induced_module(&c, 4).unwrap();
        let top = m.top_weight().unwrap();
        let orbit = m.f_orbit(&m.highest_weight_vectors(top)[0], 20);
        for low in (-20..=-2).step_by(2) {
            assert!(m.extension_probe(low, std::slice::from_ref(&orbit)).is_none());
        }
    }

    #[test]
    fn classify_top_module() {
        for k in 2..=5 {
            let m = top_module(k);
            let d = m.classify(20).unwrap();
            assert_eq!(d.summands, vec![Summand::DualVermaExt(2), Summand::DualVermaExt(0)]);
            assert_eq!(d.tail, Some(VermaTail { start: -2, step: -2 }));
            assert_eq!(d.character(), m.character(20));
        }
    }

    #[test]
    fn classify_torsion_and_bottom() {
        let k = 6;
        let c = torus_complex(k, true).unwrap();
        for j in [2, 4] {
            let m = induced_module(&c, (k - j) as usize).unwrap();
            let d = m.classify(20).unwrap();
            assert_eq!(d.summands, vec![Summand::Verma(-2 * j + 2)]);
            assert_eq!(d.tail, None);
        }
        let h0 = induced_module(&c, 0).unwrap();
        let d = h0.classify(20).unwrap();
        assert!(d.summands.is_empty());
        assert_eq!(d.tail, Some(VermaTail { start: -10, step: -2 }));
        assert!(d.extensions.is_empty());
    }

    #[test]
    fn classify_matches_closed_form() {
        for k in 2..=8 {
            let c = torus_complex(k, true).unwrap();
            for i in 0..=k as usize {
                let m = induced_module(&c, i).unwrap();
                let got = m.classify(20).unwrap();
                let want = expected_decomposition(k, i, 20).unwrap();
                assert_eq!(got.window_summands(), want.window_summands(), "k={k} i={i}");
                assert_eq!(got.character(), m.character(20));
            }
        }
    }

    #[test]
    fn characters() {
        let m = top_module(2);
        let ch = m.character(10);
        assert_eq!(ch.entries(), vec![(2, 1), (0, 2), (-2, 3), (-4, 4), (-6, 5), (-8, 6), (-10, 7)]);
        let v = Summand::Verma(-2).character(8);
        assert_eq!(v.entries(), vec![(-2, 1), (-4, 1), (-6, 1), (-8, 1)]);
        let d = Summand::DualVermaExt(0).character(6);
        assert_eq!(d.entries(), vec![(0, 1), (-2, 1), (-4, 1), (-6, 1)]);
        assert_eq!(Summand::Simple(2).character(10).entries(), vec![(2, 1), (0, 1), (-2, 1)]);
        let sum = character_of(&[Summand::Simple(0), Summand::Verma(-2)], 6);
        assert_eq!(sum, d);
    }

    #[test]
    fn brackets_on_induced_modules() {
        for k in 2..=4 {
            let c = torus_complex(k, true).unwrap();
            for i in 0..=k as usize {
                let m = induced_module(&c, i).unwrap();
                m.check_brackets(20).unwrap();
            }
        }
    }

    #[test]
    fn summand_json_shape() {
        let s = serde_json::to_string(&Summand::DualVermaExt(2)).unwrap();
        assert_eq!(s, r#"{"kind":"DualVermaExt","lambda":2}"#);
    }
}
