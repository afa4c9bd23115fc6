//! Compiles homogeneous polynomials into a level quiver algebra whose
//! moduli space of maximal top-S_1 representations realizes the projective
//! variety they cut out.
//!
//! For V ⊆ P^m given by homogeneous h_1..h_s of degree ≤ L: the quiver has
//! L+1 level vertices with m+1 parallel arrows between consecutive levels,
//! the ideal is generated by the level commutators together with the path
//! images of the h_r, and the target data is T = S_1 with dimension vector
//! (1, …, 1).

use crate::algebra::{AlgebraElement, PathAlgebra, RelationElement};
use crate::charts::PathBasis;
use crate::field::{Field, Scalar};
use crate::poly::MPoly;
use crate::presentation::{ProjectivePresentation, SubmodulePoint};
use crate::quiver::{Path, Quiver};
use crate::Error;
use std::collections::BTreeMap;
use std::sync::Arc;

pub struct VarietyInput {
    /// number of homogeneous coordinates, m+1
    pub coords: usize,
    pub polys: Vec<MPoly>,
    /// level count: max degree of the polynomials, or chosen freely when
    /// the list is empty
    pub levels: usize,
}

impl VarietyInput {
    pub fn new(field: Field, polys: Vec<MPoly>, coords_hint: Option<usize>, levels_hint: Option<usize>) -> Result<VarietyInput, Error> {
        let mut coords = coords_hint.unwrap_or(0);
        let mut degrees = Vec::new();
        for p in &polys {
            if p.is_zero() {
                return Err(Error::BadInput("zero polynomial".into()));
            }
            let mut deg: Option<u32> = None;
            for mono in p.terms.keys() {
                let d: u32 = mono.values().sum();
                match deg {
                    None => deg = Some(d),
                    Some(d0) if d0 != d => {
                        return Err(Error::BadInput("inhomogeneous polynomial".into()))
                    }
                    _ => {}
                }
                for v in mono.keys() {
                    coords = coords.max(v + 1);
                }
            }
            let d = deg.unwrap();
            if d == 0 {
                return Err(Error::BadInput("constant polynomial".into()));
            }
            degrees.push(d as usize);
        }
        let _ = field;
        let max_deg = degrees.iter().copied().max().unwrap_or(0);
        let levels = match levels_hint {
            Some(l) => {
                if l < max_deg {
                    return Err(Error::BadInput(
                        "level count below the maximal degree".into(),
                    ));
                }
                l
            }
            None => {
                if polys.is_empty() {
                    return Err(Error::BadInput(
                        "empty polynomial list needs an explicit level count".into(),
                    ));
                }
                max_deg
            }
        };
        if coords < 2 {
            return Err(Error::BadInput("at least two coordinates required".into()));
        }
        Ok(VarietyInput {
            coords,
            polys,
            levels,
        })
    }
}

pub struct CompiledVariety {
    pub input: VarietyInput,
    pub quiver: Quiver,
    /// relation text lines in the standard input syntax
    pub relation_lines: Vec<String>,
    pub top_vertex_id: String,
    pub dim_vector: Vec<usize>,
    pub max_len: usize,
}

pub fn arrow_name(level: usize, index: usize) -> String {
    format!("a{level}_{index}")
}

/// Emits (quiver, relations, top, dimension vector) for the variety.
pub fn compile_variety(input: VarietyInput) -> Result<CompiledVariety, Error> {
    let m1 = input.coords;
    let levels = input.levels;
    let vertex_ids: Vec<String> = (1..=levels + 1).map(|v| v.to_string()).collect();
    let mut arrows = Vec::new();
    for r in 1..=levels {
        for i in 0..m1 {
            arrows.push((arrow_name(r, i), r.to_string(), (r + 1).to_string()));
        }
    }
    let quiver = Quiver::new(vertex_ids, arrows)?;
    let mut relation_lines = Vec::new();
    // level commutators a{r+1}_i*a{r}_j - a{r+1}_j*a{r}_i for i < j
    for r in 1..levels {
        for i in 0..m1 {
            for j in i + 1..m1 {
                relation_lines.push(format!(
                    "1 {}*{} + -1 {}*{}",
                    arrow_name(r + 1, i),
                    arrow_name(r, j),
                    arrow_name(r + 1, j),
                    arrow_name(r, i)
                ));
            }
        }
    }
    // polynomial relations: monomial X_{i_l}…X_{i_1} with ascending indices
    // maps to the path a{l}_{i_l}*…*a{1}_{i_1}
    for p in &input.polys {
        let mut parts = Vec::new();
        for (mono, coeff) in &p.terms {
            let mut idxs: Vec<usize> = Vec::new();
            for (v, e) in mono {
                for _ in 0..*e {
                    idxs.push(*v);
                }
            }
            idxs.sort();
            let word: Vec<String> = idxs
                .iter()
                .enumerate()
                .rev()
                .map(|(lvl, &i)| arrow_name(lvl + 1, i))
                .collect();
            let field = p.field;
            parts.push(format!("{} {}", field.fmt_scalar(coeff), word.join("*")));
        }
        relation_lines.push(parts.join(" + "));
    }
    let dim_vector = vec![1; levels + 1];
    Ok(CompiledVariety {
        input,
        quiver,
        relation_lines,
        top_vertex_id: "1".into(),
        dim_vector,
        max_len: levels,
    })
}

/// The ambient commutator algebra Λ_0 with its single-top cover; the
/// compiled polynomial images are nonzero elements here and membership in
/// C(k) decides the variety.
pub struct RealizedVariety {
    pub compiled: CompiledVariety,
    pub algebra: Arc<PathAlgebra>,
    pub pres: Arc<ProjectivePresentation>,
    /// compiled relation images f_r as vectors of P
    pub poly_vecs: Vec<Vec<Scalar>>,
}

fn commutator_relations(
    quiver: &Quiver,
    field: Field,
    coords: usize,
    levels: usize,
) -> Result<Vec<RelationElement>, Error> {
    let mut commutators = Vec::new();
    for r in 1..levels {
        for i in 0..coords {
            for j in i + 1..coords {
                let pij = Path::from_arrows(
                    quiver,
                    vec![
                        quiver.arrow_index(&arrow_name(r, j))?,
                        quiver.arrow_index(&arrow_name(r + 1, i))?,
                    ],
                )?;
                let pji = Path::from_arrows(
                    quiver,
                    vec![
                        quiver.arrow_index(&arrow_name(r, i))?,
                        quiver.arrow_index(&arrow_name(r + 1, j))?,
                    ],
                )?;
                commutators.push(RelationElement {
                    terms: vec![(field.one(), pij), (field.from_i64(-1), pji)],
                });
            }
        }
    }
    Ok(commutators)
}

/// The quotient by the full compiled ideal (commutators and polynomial
/// relations); this is the algebra whose charts cut out the variety.
pub fn realize_full(
    compiled: &CompiledVariety,
    field: Field,
) -> Result<(Arc<PathAlgebra>, Arc<ProjectivePresentation>), Error> {
    let quiver = compiled.quiver.clone();
    let mut relations =
        commutator_relations(&quiver, field, compiled.input.coords, compiled.input.levels)?;
    for p in &compiled.input.polys {
        let mut terms = Vec::new();
        for (mono, coeff) in &p.terms {
            let mut idxs: Vec<usize> = Vec::new();
            for (v, e) in mono {
                for _ in 0..*e {
                    idxs.push(*v);
                }
            }
            idxs.sort();
            let arrows: Vec<usize> = idxs
                .iter()
                .enumerate()
                .map(|(lvl, &i)| quiver.arrow_index(&arrow_name(lvl + 1, i)).unwrap())
                .collect();
            terms.push((coeff.clone(), Path::from_arrows(&quiver, arrows)?));
        }
        relations.push(RelationElement { terms });
    }
    let algebra = Arc::new(PathAlgebra::build(field, quiver, relations, compiled.max_len)?);
    let pres = ProjectivePresentation::new(algebra.clone(), vec![0])?;
    Ok((algebra, pres))
}

pub fn realize(compiled: CompiledVariety, field: Field) -> Result<RealizedVariety, Error> {
    let quiver = compiled.quiver.clone();
    let commutators =
        commutator_relations(&quiver, field, compiled.input.coords, compiled.input.levels)?;
    let algebra = Arc::new(PathAlgebra::build(
        field,
        quiver,
        commutators,
        compiled.max_len,
    )?);
    let pres = ProjectivePresentation::new(algebra.clone(), vec![0])?;
    let mut poly_vecs = Vec::new();
    for p in &compiled.input.polys {
        let mut vec = pres.zero_vec();
        for (mono, coeff) in &p.terms {
            let mut idxs: Vec<usize> = Vec::new();
            for (v, e) in mono {
                for _ in 0..*e {
                    idxs.push(*v);
                }
            }
            idxs.sort();
            let arrows: Vec<usize> = idxs
                .iter()
                .enumerate()
                .map(|(lvl, &i)| {
                    algebra
                        .quiver
                        .arrow_index(&arrow_name(lvl + 1, i))
                        .expect("compiled arrow")
                })
                .collect();
            let path = Path::from_arrows(&algebra.quiver, arrows)?;
            let red = algebra.reduce_path(&path);
            let term = pres.embed(&algebra.scale_elem(coeff, &red), 0);
            for i in 0..vec.len() {
                vec[i] = field.add(&vec[i], &term[i]);
            }
        }
        poly_vecs.push(vec);
    }
    Ok(RealizedVariety {
        compiled,
        algebra,
        pres,
        poly_vecs,
    })
}

impl RealizedVariety {
    fn level_one_arrow_vec(&self, i: usize) -> Vec<Scalar> {
        let a = self
            .algebra
            .quiver
            .arrow_index(&arrow_name(1, i))
            .expect("level-1 arrow");
        let p = Path::from_arrows(&self.algebra.quiver, vec![a]).unwrap();
        self.pres.embed(&self.algebra.reduce_path(&p), 0)
    }

    /// C(k) = the submodule generated by { k_i a1_j − k_j a1_i : i < j }.
    pub fn point_at(&self, k: &[Scalar]) -> Result<SubmodulePoint, Error> {
        let f = self.algebra.field;
        let m1 = self.compiled.input.coords;
        if k.len() != m1 {
            return Err(Error::BadInput("coordinate count mismatch".into()));
        }
        if k.iter().all(|x| f.is_zero(x)) {
            return Err(Error::BadInput("zero homogeneous coordinates".into()));
        }
        let mut gens = Vec::new();
        for i in 0..m1 {
            for j in i + 1..m1 {
                let ai = self.level_one_arrow_vec(i);
                let aj = self.level_one_arrow_vec(j);
                let gen: Vec<Scalar> = (0..self.pres.dim())
                    .map(|x| f.sub(&f.mul(&k[i], &aj[x]), &f.mul(&k[j], &ai[x])))
                    .collect();
                gens.push(gen);
            }
        }
        SubmodulePoint::spin(self.pres.clone(), &gens)
    }

    /// k ∈ V iff every compiled polynomial image lies in C(k); agreement
    /// with direct evaluation h_r(k) = 0 is asserted.
    pub fn variety_membership(&self, k: &[Scalar]) -> Result<bool, Error> {
        let f = self.algebra.field;
        let c = self.point_at(k)?;
        let member = self
            .poly_vecs
            .iter()
            .all(|v| c.space.contains_vec(v));
        let assignment: BTreeMap<usize, Scalar> =
            k.iter().cloned().enumerate().collect();
        let by_eval = self
            .compiled
            .input
            .polys
            .iter()
            .all(|p| f.is_zero(&p.eval(&assignment)));
        if member != by_eval {
            return Err(Error::Internal(
                "membership disagrees with polynomial evaluation".into(),
            ));
        }
        Ok(member)
    }

    /// The identity α^l_{i_l}…α^1_{i_1}·x̄ = k_{i_l}…k_{i_1}·α^l_0…α^1_0·x̄
    /// in P/C(k), for every monomial path of length ≤ L (requires k_0 = 1).
    pub fn check_monomial_identity(&self, k: &[Scalar]) -> Result<(), Error> {
        let f = self.algebra.field;
        if !k[0].is_one() {
            return Err(Error::BadInput("dehomogenization expects k_0 = 1".into()));
        }
        let c = self.point_at(k)?;
        let m1 = self.compiled.input.coords;
        let levels = self.compiled.input.levels;
        let mut words: Vec<Vec<usize>> = vec![vec![]];
        for len in 1..=levels {
            let mut next = Vec::new();
            for w in &words {
                if w.len() == len - 1 {
                    for i in 0..m1 {
                        let mut ww = w.clone();
                        ww.push(i);
                        next.push(ww);
                    }
                }
            }
            for w in next {
                let mut lhs_arrows = Vec::new();
                let mut rhs_arrows = Vec::new();
                let mut factor = f.one();
                // ascending normalization fixes a representative
                let mut sorted = w.clone();
                sorted.sort();
                for (lvl, &i) in sorted.iter().enumerate() {
                    lhs_arrows.push(self.algebra.quiver.arrow_index(&arrow_name(lvl + 1, i))?);
                    rhs_arrows.push(self.algebra.quiver.arrow_index(&arrow_name(lvl + 1, 0))?);
                    factor = f.mul(&factor, &k[i]);
                }
                let lhs = self
                    .pres
                    .embed(
                        &self
                            .algebra
                            .reduce_path(&Path::from_arrows(&self.algebra.quiver, lhs_arrows)?),
                        0,
                    );
                let rhs_vec = self
                    .pres
                    .embed(
                        &self
                            .algebra
                            .reduce_path(&Path::from_arrows(&self.algebra.quiver, rhs_arrows)?),
                        0,
                    );
                let diff: Vec<Scalar> = (0..self.pres.dim())
                    .map(|x| f.sub(&lhs[x], &f.mul(&factor, &rhs_vec[x])))
                    .collect();
                if !c.space.contains_vec(&diff) {
                    return Err(Error::Internal(
                        "monomial identity fails in the quotient".into(),
                    ));
                }
                words.push(w);
            }
        }
        Ok(())
    }

    /// The spine chart through the arrows of one coordinate index: the path
    /// basis {z, a1_i z, a2_i a1_i z, …}.
    pub fn spine_basis(&self, index: usize) -> Result<PathBasis, Error> {
        let alg = &self.algebra;
        let mut cols = Vec::new();
        for len in 0..=self.compiled.input.levels {
            let arrows: Vec<usize> = (0..len)
                .map(|lvl| alg.quiver.arrow_index(&arrow_name(lvl + 1, index)).unwrap())
                .collect();
            let path = if arrows.is_empty() {
                Path::idempotent(0)
            } else {
                Path::from_arrows(&alg.quiver, arrows)?
            };
            let idx = alg.basis_index_of(&path).ok_or_else(|| {
                Error::BadInput("spine path is not a normal form of the algebra".into())
            })?;
            let col = (0..self.pres.dim())
                .find(|&kk| self.pres.basis[kk] == (idx, 0))
                .unwrap();
            cols.push(col);
        }
        cols.sort();
        Ok(PathBasis { cols })
    }
}

/// An algebra element check helper reused by tests.
pub fn element_vec(realized: &RealizedVariety, e: &AlgebraElement) -> Vec<Scalar> {
    realized.pres.embed(e, 0)
}

/// Parses a polynomial like `x0*x2 - x1^2` or `2*x0^3 + 1/2*x1*x2^2`.
pub fn parse_poly(field: Field, input: &str) -> Result<MPoly, Error> {
    #[derive(PartialEq)]
    enum Tok {
        Coeff(String),
        Var(usize),
        Caret,
        Star,
        Plus,
        Minus,
    }
    let mut toks = Vec::new();
    let chars: Vec<char> = input.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '+' {
            toks.push(Tok::Plus);
            i += 1;
        } else if c == '-' {
            toks.push(Tok::Minus);
            i += 1;
        } else if c == '*' {
            toks.push(Tok::Star);
            i += 1;
        } else if c == '^' {
            toks.push(Tok::Caret);
            i += 1;
        } else if c == 'x' || c == 'X' {
            let start = i + 1;
            let mut j = start;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            if j == start {
                return Err(Error::BadInput(format!(
                    "expected a variable index at position {i} of `{input}`"
                )));
            }
            let idx: usize = chars[start..j].iter().collect::<String>().parse().unwrap();
            toks.push(Tok::Var(idx));
            i = j;
        } else if c.is_ascii_digit() {
            let start = i;
            let mut j = i;
            while j < chars.len() && (chars[j].is_ascii_digit() || chars[j] == '/') {
                j += 1;
            }
            toks.push(Tok::Coeff(chars[start..j].iter().collect()));
            i = j;
        } else {
            return Err(Error::BadInput(format!(
                "unexpected character `{c}` in `{input}`"
            )));
        }
    }
    let mut out = MPoly::zero(field);
    let mut i = 0;
    let mut sign = field.one();
    let mut started = false;
    while i < toks.len() {
        match &toks[i] {
            Tok::Plus => {
                sign = field.one();
                i += 1;
                continue;
            }
            Tok::Minus => {
                sign = if started || i == 0 {
                    field.from_i64(-1)
                } else {
                    field.from_i64(-1)
                };
                i += 1;
                continue;
            }
            _ => {}
        }
        // one term: factors separated by optional stars
        let mut coeff = sign.clone();
        let mut mono = crate::poly::Monomial::new();
        loop {
            match toks.get(i) {
                Some(Tok::Coeff(c)) => {
                    let v = field.parse(c)?;
                    coeff = field.mul(&coeff, &v);
                    i += 1;
                }
                Some(Tok::Var(v)) => {
                    let mut e = 1u32;
                    if toks.get(i + 1) == Some(&Tok::Caret) {
                        match toks.get(i + 2) {
                            Some(Tok::Coeff(n)) => {
                                e = n.parse().map_err(|_| {
                                    Error::BadInput(format!("bad exponent in `{input}`"))
                                })?;
                                i += 2;
                            }
                            _ => {
                                return Err(Error::BadInput(format!(
                                    "missing exponent in `{input}`"
                                )))
                            }
                        }
                    }
                    *mono.entry(*v).or_insert(0) += e;
                    i += 1;
                }
                Some(Tok::Star) => {
                    i += 1;
                }
                _ => break,
            }
        }
        out.add_term(mono, coeff);
        sign = field.one();
        started = true;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::MPoly;

    fn conic_input(f: Field) -> VarietyInput {
        // x0*x2 - x1^2
        let x0 = MPoly::var(f, 0);
        let x1 = MPoly::var(f, 1);
        let x2 = MPoly::var(f, 2);
        let h = x0.mul(&x2).sub(&x1.mul(&x1));
        VarietyInput::new(f, vec![h], None, None).unwrap()
    }

    #[test]
    fn conic_compilation_shape() {
        let f = Field::Rational;
        let compiled = compile_variety(conic_input(f)).unwrap();
        assert_eq!(compiled.quiver.vertex_count(), 3);
        assert_eq!(compiled.quiver.arrows.len(), 6);
        // three level commutators plus one polynomial relation
        assert_eq!(compiled.relation_lines.len(), 4);
        assert_eq!(compiled.dim_vector, vec![1, 1, 1]);
    }

    #[test]
    fn empty_list_is_projective_space() {
        let f = Field::Rational;
        // s = 0, m = 1, L = 1: the two-arrow two-vertex quiver
        let input = VarietyInput::new(f, vec![], Some(2), Some(1)).unwrap();
        let compiled = compile_variety(input).unwrap();
        assert_eq!(compiled.quiver.vertex_count(), 2);
        assert_eq!(compiled.quiver.arrows.len(), 2);
        assert!(compiled.relation_lines.is_empty());
    }

    #[test]
    fn degree_one_polynomial_emits_single_arrow_relation() {
        let f = Field::Rational;
        let h = MPoly::var(f, 0);
        let input = VarietyInput::new(f, vec![h], Some(2), None).unwrap();
        let compiled = compile_variety(input).unwrap();
        assert_eq!(compiled.relation_lines, vec!["1 a1_0".to_string()]);
    }

    #[test]
    fn conic_realization_dimensions() {
        let f = Field::Rational;
        let compiled = compile_variety(conic_input(f)).unwrap();
        let (_, full_pres) = realize_full(&compiled, f).unwrap();
        assert_eq!(full_pres.dim_vector(), vec![1, 3, 5]);
        let realized = realize(compiled, f).unwrap();
        assert_eq!(realized.pres.dim_vector(), vec![1, 3, 6]);
    }

    #[test]
    fn point_at_examples() {
        let f = Field::Rational;
        // m = 1, k = [1:0]: C is generated by a1_1
        let input = VarietyInput::new(f, vec![], Some(2), Some(1)).unwrap();
        let realized = realize(compile_variety(input).unwrap(), f).unwrap();
        let c = realized.point_at(&[f.one(), f.zero()]).unwrap();
        assert_eq!(c.dim(), 1);
        let a11 = realized.level_one_arrow_vec(1);
        assert!(c.space.contains_vec(&a11));
        // scale invariance
        let c2 = realized
            .point_at(&[f.from_i64(5), f.zero()])
            .unwrap();
        assert_eq!(c.space, c2.space);
        assert!(realized.point_at(&[f.zero(), f.zero()]).is_err());
    }

    #[test]
    fn conic_membership() {
        let f = Field::Rational;
        let realized = realize(compile_variety(conic_input(f)).unwrap(), f).unwrap();
        let one = f.one();
        assert!(realized
            .variety_membership(&[one.clone(), one.clone(), one.clone()])
            .unwrap());
        assert!(!realized
            .variety_membership(&[one.clone(), one.clone(), f.zero()])
            .unwrap());
        assert!(realized
            .variety_membership(&[one.clone(), f.zero(), f.zero()])
            .unwrap());
        // on-variety points have thin quotient and full Loewy depth
        let c = realized
            .point_at(&[one.clone(), one.clone(), one])
            .unwrap();
        let q = crate::rep::QuotientRepresentation::new(&c).unwrap();
        assert_eq!(q.dim_vector(), vec![1, 1, 1]);
        assert_eq!(q.radical_layering().layers.len(), 3);
    }

    #[test]
    fn membership_agrees_with_evaluation_on_random_points() {
        use rand::{Rng, SeedableRng};
        use rand_chacha::ChaCha8Rng;
        let f = Field::Rational;
        let realized = realize(compile_variety(conic_input(f)).unwrap(), f).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..50 {
            let k: Vec<crate::field::Scalar> = (0..3)
                .map(|_| {
                    f.from_ratio(rng.gen_range(-6..=6), rng.gen_range(1..=4)).unwrap()
                })
                .collect();
            if k.iter().all(|x| f.is_zero(x)) {
                continue;
            }
            // variety_membership fails internally if the subspace test ever
            // disagrees with direct evaluation
            let _ = realized.variety_membership(&k).unwrap();
        }
    }

    #[test]
    fn monomial_identity_on_chart() {
        let f = Field::Rational;
        let realized = realize(compile_variety(conic_input(f)).unwrap(), f).unwrap();
        realized
            .check_monomial_identity(&[f.one(), f.from_i64(2), f.from_i64(4)])
            .unwrap();
    }
}
