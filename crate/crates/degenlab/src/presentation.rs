//! Projective presentations P = ⊕_r Λz_r with distinguished top elements,
//! and arrow-stable submodule points C ⊆ P.

use crate::algebra::{AlgebraElement, PathAlgebra};
use crate::field::Scalar;
use crate::linalg::Subspace;
use crate::quiver::Path;
use crate::Error;
use std::collections::HashMap;
use std::sync::Arc;

/// P = ⊕_r Λz_r where z_r is normed by the vertex `tops[r]`. The basis of P
/// is the set of pairs (normal-form path p starting at tops[r], r), ordered
/// by top index and then by the fixed path order.
pub struct ProjectivePresentation {
    pub algebra: Arc<PathAlgebra>,
    pub tops: Vec<usize>,
    /// (algebra basis index, top index)
    pub basis: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
}

impl ProjectivePresentation {
    pub fn new(algebra: Arc<PathAlgebra>, tops: Vec<usize>) -> Result<Arc<Self>, Error> {
        let n = algebra.quiver.vertex_count();
        for &v in &tops {
            if v >= n {
                return Err(Error::BadInput(format!("top vertex index {v} out of range")));
            }
        }
        let mut basis = Vec::new();
        for (r, &v) in tops.iter().enumerate() {
            let mut idxs: Vec<usize> = (0..algebra.dim())
                .filter(|&i| algebra.basis_path(i).start == v)
                .collect();
            idxs.sort();
            for i in idxs {
                basis.push((i, r));
            }
        }
        let index = basis
            .iter()
            .copied()
            .enumerate()
            .map(|(k, b)| (b, k))
            .collect();
        Ok(Arc::new(ProjectivePresentation {
            algebra,
            tops,
            basis,
            index,
        }))
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn top_count(&self) -> usize {
        self.tops.len()
    }

    pub fn field(&self) -> crate::field::Field {
        self.algebra.field
    }

    /// Ending vertex of the k-th basis pair.
    pub fn basis_vertex(&self, k: usize) -> usize {
        let (p, _) = self.basis[k];
        self.algebra.basis_path(p).end(&self.algebra.quiver)
    }

    pub fn basis_path_len(&self, k: usize) -> usize {
        self.algebra.basis_path(self.basis[k].0).len()
    }

    pub fn dim_vector(&self) -> Vec<usize> {
        let mut d = vec![0; self.algebra.quiver.vertex_count()];
        for k in 0..self.dim() {
            d[self.basis_vertex(k)] += 1;
        }
        d
    }

    pub fn zero_vec(&self) -> Vec<Scalar> {
        vec![self.field().zero(); self.dim()]
    }

    /// z_r as a vector of P.
    pub fn top_vec(&self, r: usize) -> Vec<Scalar> {
        let mut v = self.zero_vec();
        let e = Path::idempotent(self.tops[r]);
        let idx = self.algebra.basis_index_of(&e).expect("idempotent in basis");
        v[self.index[&(idx, r)]] = self.field().one();
        v
    }

    /// u·z_r for an algebra element u; components of u not starting at the
    /// vertex of z_r are annihilated, matching u·z_r = u·e(r)z_r.
    pub fn embed(&self, u: &AlgebraElement, r: usize) -> Vec<Scalar> {
        let mut v = self.zero_vec();
        for (i, c) in &u.coeffs {
            if self.algebra.basis_path(*i).start != self.tops[r] {
                continue;
            }
            v[self.index[&(*i, r)]] = c.clone();
        }
        v
    }

    /// Left action of an algebra element on a vector of P.
    pub fn act(&self, u: &AlgebraElement, v: &[Scalar]) -> Vec<Scalar> {
        let f = self.field();
        let alg = &self.algebra;
        let mut out = self.zero_vec();
        for (k, c) in v.iter().enumerate() {
            if f.is_zero(c) {
                continue;
            }
            let (p_idx, r) = self.basis[k];
            let p_elem = alg.unit_of(p_idx);
            let prod = alg.multiply(u, &p_elem);
            for (j, cc) in &prod.coeffs {
                let slot = self.index[&(*j, r)];
                out[slot] = f.add(&out[slot], &f.mul(cc, c));
            }
        }
        out
    }

    pub fn act_arrow(&self, arrow: usize, v: &[Scalar]) -> Vec<Scalar> {
        let f = self.field();
        let alg = &self.algebra;
        let quiver = &alg.quiver;
        let mut out = self.zero_vec();
        for (k, c) in v.iter().enumerate() {
            if f.is_zero(c) {
                continue;
            }
            let (p_idx, r) = self.basis[k];
            let p = alg.basis_path(p_idx);
            if quiver.arrows[arrow].source != p.end(quiver) {
                continue;
            }
            let mut arrows = p.arrows.clone();
            arrows.push(arrow);
            let ap = Path {
                start: p.start,
                arrows,
            };
            let red = alg.reduce_path(&ap);
            for (j, cc) in &red.coeffs {
                let slot = self.index[&(*j, r)];
                out[slot] = f.add(&out[slot], &f.mul(cc, c));
            }
        }
        out
    }

    /// Splits a vector of P into its per-top algebra components u_r with
    /// v = Σ_r u_r·z_r.
    pub fn components(&self, v: &[Scalar]) -> Vec<AlgebraElement> {
        let f = self.field();
        let mut out = vec![AlgebraElement::zero(); self.top_count()];
        for (k, c) in v.iter().enumerate() {
            if f.is_zero(c) {
                continue;
            }
            let (p_idx, r) = self.basis[k];
            out[r].coeffs.insert(p_idx, c.clone());
        }
        out
    }

    /// J^l P as a coordinate subspace.
    pub fn radical_power(&self, l: usize) -> Subspace {
        let f = self.field();
        let alg = &self.algebra;
        if l <= 1 {
            // J P is spanned by positive-length pairs
            let rows: Vec<Vec<Scalar>> = (0..self.dim())
                .filter(|&k| self.basis_path_len(k) >= 1)
                .map(|k| {
                    let mut v = self.zero_vec();
                    v[k] = f.one();
                    v
                })
                .collect();
            return Subspace::from_rows(f, self.dim(), rows).expect("coordinate subspace");
        }
        // J^l P = (J^l) P: embed the algebra radical power at each top
        let series = alg.radical_series();
        if l - 1 >= series.len() + 1 {
            return Subspace::zero(f, self.dim());
        }
        let jl = match series.get(l - 1) {
            Some(s) => s.clone(),
            None => return Subspace::zero(f, self.dim()),
        };
        let mut rows = Vec::new();
        for r in 0..self.top_count() {
            for brow in jl.rows() {
                let mut u = AlgebraElement::zero();
                for (i, c) in brow.iter().enumerate() {
                    if !f.is_zero(c) {
                        u.coeffs.insert(i, c.clone());
                    }
                }
                let v = self.embed(&u, r);
                if v.iter().any(|x| !f.is_zero(x)) {
                    rows.push(v);
                }
            }
        }
        Subspace::from_rows(f, self.dim(), rows).expect("radical power")
    }

    /// Coordinate columns of the Λz_r summand.
    pub fn top_cols(&self, r: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&k| self.basis[k].1 == r).collect()
    }

    /// Projection of v onto ⊕_{r ∈ keep} Λz_r along the other summands.
    pub fn project_tops(&self, v: &[Scalar], keep: &[usize]) -> Vec<Scalar> {
        let f = self.field();
        let mut out = self.zero_vec();
        for (k, c) in v.iter().enumerate() {
            if keep.contains(&self.basis[k].1) && !f.is_zero(c) {
                out[k] = c.clone();
            }
        }
        out
    }

    /// The coordinate subspace ⊕_{r ∈ keep} Λz_r.
    pub fn tops_block(&self, keep: &[usize]) -> Subspace {
        let f = self.field();
        let rows: Vec<Vec<Scalar>> = (0..self.dim())
            .filter(|&k| keep.contains(&self.basis[k].1))
            .map(|k| {
                let mut v = self.zero_vec();
                v[k] = f.one();
                v
            })
            .collect();
        Subspace::from_rows(f, self.dim(), rows).unwrap()
    }

    pub fn display_vec(&self, v: &[Scalar]) -> String {
        let f = self.field();
        let mut parts = Vec::new();
        for (k, c) in v.iter().enumerate() {
            if f.is_zero(c) {
                continue;
            }
            let (p_idx, r) = self.basis[k];
            let p = self.algebra.basis_path(p_idx);
            let path_str = if p.is_idempotent() {
                String::new()
            } else {
                format!("{} ", p.display(&self.algebra.quiver))
            };
            parts.push(format!("{} {}z{}", f.fmt_scalar(c), path_str, r + 1));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// An arrow-stable subspace C ⊆ P, the raw datum of a module P/C.
#[derive(Clone)]
pub struct SubmodulePoint {
    pub pres: Arc<ProjectivePresentation>,
    pub space: Subspace,
    pub inside_radical: bool,
}

impl SubmodulePoint {
    /// Wraps a subspace after verifying that it is a Λ-submodule: stable
    /// under every arrow and under the vertex idempotents (vertex graded).
    pub fn new(pres: Arc<ProjectivePresentation>, space: Subspace) -> Result<SubmodulePoint, Error> {
        if space.ambient != pres.dim() {
            return Err(Error::DimensionMismatch("submodule ambient".into()));
        }
        let f = pres.field();
        let arrows = pres.algebra.quiver.arrows.len();
        let n = pres.algebra.quiver.vertex_count();
        for row in space.rows() {
            for a in 0..arrows {
                let img = pres.act_arrow(a, &row);
                if !space.contains_vec(&img) {
                    return Err(Error::BadInput(
                        "subspace is not stable under the arrow action".into(),
                    ));
                }
            }
            for v in 0..n {
                let mut part = pres.zero_vec();
                for (k, c) in row.iter().enumerate() {
                    if pres.basis_vertex(k) == v && !f.is_zero(c) {
                        part[k] = c.clone();
                    }
                }
                if !space.contains_vec(&part) {
                    return Err(Error::BadInput(
                        "subspace is not stable under the vertex idempotents".into(),
                    ));
                }
            }
        }
        let jp = pres.radical_power(1);
        let inside_radical = jp.contains(&space);
        Ok(SubmodulePoint {
            pres,
            space,
            inside_radical,
        })
    }

    /// Smallest Λ-submodule containing the generators: the generators are
    /// split into their vertex components, then closed under arrows.
    pub fn spin(
        pres: Arc<ProjectivePresentation>,
        generators: &[Vec<Scalar>],
    ) -> Result<SubmodulePoint, Error> {
        let f = pres.field();
        let arrows = pres.algebra.quiver.arrows.len();
        let n = pres.algebra.quiver.vertex_count();
        let mut seeds = Vec::new();
        for g in generators {
            for v in 0..n {
                let mut part = pres.zero_vec();
                let mut nonzero = false;
                for (k, c) in g.iter().enumerate() {
                    if pres.basis_vertex(k) == v && !f.is_zero(c) {
                        part[k] = c.clone();
                        nonzero = true;
                    }
                }
                if nonzero {
                    seeds.push(part);
                }
            }
        }
        let mut space = Subspace::from_rows(f, pres.dim(), seeds)?;
        loop {
            let mut grew = false;
            for row in space.rows() {
                for a in 0..arrows {
                    let img = pres.act_arrow(a, &row);
                    if !space.contains_vec(&img) {
                        let mut all = space.rows();
                        all.push(img);
                        space = Subspace::from_rows(f, pres.dim(), all)?;
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        SubmodulePoint::new(pres, space)
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Builds the split point ⊕_r I_r z_r from per-top lists of ideal
    /// generators.
    pub fn from_ideals(
        pres: Arc<ProjectivePresentation>,
        ideals: &[Vec<AlgebraElement>],
    ) -> Result<SubmodulePoint, Error> {
        if ideals.len() != pres.top_count() {
            return Err(Error::BadInput("one ideal per top element required".into()));
        }
        let mut gens = Vec::new();
        for (r, gen_list) in ideals.iter().enumerate() {
            for u in gen_list {
                gens.push(pres.embed(u, r));
            }
        }
        SubmodulePoint::spin(pres, &gens)
    }

    /// C ∩ Λz_r as a subspace of P.
    pub fn intersect_top(&self, r: usize) -> Subspace {
        let block = self.pres.tops_block(&[r]);
        self.space.intersect(&block).unwrap()
    }

    /// True when C = ⊕_r (C ∩ Λz_r).
    pub fn is_split(&self) -> bool {
        let total: usize = (0..self.pres.top_count())
            .map(|r| self.intersect_top(r).dim())
            .sum();
        total == self.dim()
    }

    /// The left ideal { u ∈ Λe(r) : u z_r ∈ C }, as a subspace of the
    /// Λe(tops[r]) coordinate block of the algebra.
    pub fn ideal_at_top(&self, r: usize) -> Subspace {
        let pres = &self.pres;
        let alg = &pres.algebra;
        let f = pres.field();
        let idxs: Vec<usize> = (0..alg.dim())
            .filter(|&i| alg.basis_path(i).start == pres.tops[r])
            .collect();
        let inter = self.intersect_top(r);
        let rows: Vec<Vec<Scalar>> = inter
            .rows()
            .into_iter()
            .map(|v| {
                let comps = pres.components(&v);
                idxs.iter()
                    .map(|i| comps[r].coeffs.get(i).cloned().unwrap_or_else(|| f.zero()))
                    .collect()
            })
            .collect();
        Subspace::from_rows(f, idxs.len(), rows).unwrap()
    }
}

pub mod fixtures {
    //! Small ready-made algebras used by the test suites and docs.
    use super::*;
    use crate::algebra::RelationElement;
    use crate::field::Field;
    use crate::quiver::Quiver;

    pub fn loop_arrow(field: Field) -> Arc<PathAlgebra> {
        let q = Quiver::new(
            vec!["1".into(), "2".into()],
            vec![
                ("w".into(), "1".into(), "1".into()),
                ("a".into(), "1".into(), "2".into()),
            ],
        )
        .unwrap();
        let ww = Path::from_arrows(&q, vec![0, 0]).unwrap();
        Arc::new(
            PathAlgebra::build(
                field,
                q,
                vec![RelationElement {
                    terms: vec![(field.one(), ww)],
                }],
                2,
            )
            .unwrap(),
        )
    }

    pub fn a2(field: Field) -> Arc<PathAlgebra> {
        let q = Quiver::new(
            vec!["1".into(), "2".into()],
            vec![("a".into(), "1".into(), "2".into())],
        )
        .unwrap();
        Arc::new(PathAlgebra::build(field, q, vec![], 1).unwrap())
    }

    pub fn kronecker(field: Field) -> Arc<PathAlgebra> {
        let q = Quiver::new(
            vec!["1".into(), "2".into()],
            vec![
                ("a".into(), "1".into(), "2".into()),
                ("b".into(), "1".into(), "2".into()),
            ],
        )
        .unwrap();
        Arc::new(PathAlgebra::build(field, q, vec![], 1).unwrap())
    }

    pub fn crossed_pair(field: Field) -> Arc<PathAlgebra> {
        let q = Quiver::new(
            vec!["1".into(), "2".into()],
            vec![
                ("a".into(), "1".into(), "2".into()),
                ("b".into(), "2".into(), "1".into()),
            ],
        )
        .unwrap();
        let rels = vec![
            RelationElement {
                terms: vec![(field.one(), Path::from_arrows(&q, vec![0, 1, 0]).unwrap())],
            },
            RelationElement {
                terms: vec![(field.one(), Path::from_arrows(&q, vec![1, 0, 1]).unwrap())],
            },
        ];
        Arc::new(PathAlgebra::build(field, q, rels, 2).unwrap())
    }

    pub fn six_loops(field: Field) -> Arc<PathAlgebra> {
        let mut arrows = Vec::new();
        for i in 1..=6 {
            arrows.push((format!("w{i}"), "1".to_string(), "1".to_string()));
        }
        arrows.push(("a".into(), "1".into(), "2".into()));
        arrows.push(("b".into(), "1".into(), "2".into()));
        let q = Quiver::new(vec!["1".into(), "2".into()], arrows).unwrap();
        let mut rels = Vec::new();
        for i in 0..6 {
            for j in 0..6 {
                rels.push(RelationElement {
                    terms: vec![(field.one(), Path::from_arrows(&q, vec![j, i]).unwrap())],
                });
            }
        }
        for i in 0..3 {
            rels.push(RelationElement {
                terms: vec![(field.one(), Path::from_arrows(&q, vec![i, 7]).unwrap())],
            });
        }
        for i in 3..6 {
            rels.push(RelationElement {
                terms: vec![(field.one(), Path::from_arrows(&q, vec![i, 6]).unwrap())],
            });
        }
        Arc::new(PathAlgebra::build(field, q, rels, 2).unwrap())
    }

    /// u·z_r from a written path like "a*w" (empty string = the idempotent).
    pub fn path_vec(pres: &ProjectivePresentation, written: &str, r: usize) -> Vec<Scalar> {
        let alg = &pres.algebra;
        let q = &alg.quiver;
        let p = if written.is_empty() {
            Path::idempotent(pres.tops[r])
        } else {
            let arrows: Vec<usize> = written
                .split('*')
                .rev()
                .map(|n| q.arrow_index(n).unwrap())
                .collect();
            Path::from_arrows(q, arrows).unwrap()
        };
        pres.embed(&alg.reduce_path(&p), r)
    }

    pub fn add_vecs(field: Field, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        a.iter().zip(b).map(|(x, y)| field.add(x, y)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::field::Field;

    #[test]
    fn projective_dimensions() {
        let f = Field::Rational;
        let alg = loop_arrow(f);
        let p = ProjectivePresentation::new(alg, vec![0, 0]).unwrap();
        assert_eq!(p.dim(), 8);
        assert_eq!(p.dim_vector(), vec![4, 4]);

        let a2 = a2(f);
        let p2 = ProjectivePresentation::new(a2, vec![0]).unwrap();
        assert_eq!(p2.dim(), 2);

        let six = six_loops(f);
        let p3 = ProjectivePresentation::new(six, vec![0, 0]).unwrap();
        assert_eq!(p3.dim_vector(), vec![14, 16]);
    }

    #[test]
    fn spin_examples() {
        let f = Field::Rational;
        let alg = loop_arrow(f);
        let p = ProjectivePresentation::new(alg, vec![0, 0]).unwrap();
        let wz2 = path_vec(&p, "w", 1);
        let c = SubmodulePoint::spin(p.clone(), &[wz2.clone()]).unwrap();
        assert_eq!(c.dim(), 2);
        let expected =
            Subspace::from_rows(f, p.dim(), vec![wz2, path_vec(&p, "a*w", 1)]).unwrap();
        assert_eq!(c.space, expected);
        assert!(c.inside_radical);

        let empty = SubmodulePoint::spin(p, &[]).unwrap();
        assert_eq!(empty.dim(), 0);
    }

    #[test]
    fn six_loop_submodule_dimension() {
        let f = Field::Rational;
        let alg = six_loops(f);
        let p = ProjectivePresentation::new(alg, vec![0, 0]).unwrap();
        let f1 = add_vecs(f, &path_vec(&p, "a*w1", 1), &path_vec(&p, "a*w2", 1));
        let f2 = add_vecs(f, &path_vec(&p, "b*w4", 1), &path_vec(&p, "b*w5", 1));
        let gens = vec![
            f1,
            f2,
            path_vec(&p, "w3", 1),
            path_vec(&p, "w6", 1),
            path_vec(&p, "a", 1),
            path_vec(&p, "b", 1),
        ];
        let c = SubmodulePoint::spin(p, &gens).unwrap();
        assert_eq!(c.dim(), 8);
    }

    #[test]
    fn spin_idempotence() {
        let f = Field::Rational;
        let alg = loop_arrow(f);
        let p = ProjectivePresentation::new(alg, vec![0, 0]).unwrap();
        let jz2 =
            SubmodulePoint::spin(p.clone(), &[path_vec(&p, "w", 1), path_vec(&p, "a", 1)]).unwrap();
        let re = SubmodulePoint::spin(p, &jz2.space.rows()).unwrap();
        assert_eq!(re.space, jz2.space);
    }

    #[test]
    fn split_detection_and_ideals() {
        let f = Field::Rational;
        let alg = loop_arrow(f);
        let p = ProjectivePresentation::new(alg, vec![0, 0]).unwrap();
        let jz2 =
            SubmodulePoint::spin(p.clone(), &[path_vec(&p, "w", 1), path_vec(&p, "a", 1)]).unwrap();
        assert!(jz2.is_split());
        assert_eq!(jz2.ideal_at_top(0).dim(), 0);
        assert_eq!(jz2.ideal_at_top(1).dim(), 3);
    }

    #[test]
    fn radical_powers_of_p() {
        let f = Field::Rational;
        let alg = loop_arrow(f);
        let p = ProjectivePresentation::new(alg, vec![0, 0]).unwrap();
        assert_eq!(p.radical_power(1).dim(), 6);
        assert_eq!(p.radical_power(2).dim(), 2);
        assert_eq!(p.radical_power(3).dim(), 0);
    }
}
