//! Quotient representations P/C as vertex-graded vector spaces with arrow
//! matrices, radical layerings, and the dominance order on semisimple
//! sequences.

use crate::field::{Field, Scalar};
use crate::linalg::{Matrix, Subspace};
use crate::presentation::{ProjectivePresentation, SubmodulePoint};
use crate::Error;
use std::cmp::Ordering;
use std::sync::Arc;

/// A finite dimensional representation: one vector space per vertex, one
/// matrix per arrow, endpoints carried alongside.
#[derive(Clone, Debug, PartialEq)]
pub struct Representation {
    pub field: Field,
    pub dims: Vec<usize>,
    /// (source, target) per arrow
    pub endpoints: Vec<(usize, usize)>,
    /// arrows[a]: dims[target] x dims[source]
    pub arrows: Vec<Matrix>,
}

impl Representation {
    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn offsets(&self) -> Vec<usize> {
        let mut o = vec![0; self.dims.len()];
        for v in 1..self.dims.len() {
            o[v] = o[v - 1] + self.dims[v - 1];
        }
        o
    }

    pub fn direct_sum(&self, other: &Representation) -> Representation {
        let f = self.field;
        assert_eq!(self.endpoints, other.endpoints);
        let dims: Vec<usize> = self
            .dims
            .iter()
            .zip(&other.dims)
            .map(|(a, b)| a + b)
            .collect();
        let arrows = self
            .arrows
            .iter()
            .zip(&other.arrows)
            .map(|(a, b)| {
                let mut m = Matrix::zero(f, a.rows + b.rows, a.cols + b.cols);
                for i in 0..a.rows {
                    for j in 0..a.cols {
                        m.set(i, j, a.get(i, j).clone());
                    }
                }
                for i in 0..b.rows {
                    for j in 0..b.cols {
                        m.set(a.rows + i, a.cols + j, b.get(i, j).clone());
                    }
                }
                m
            })
            .collect();
        Representation {
            field: f,
            dims,
            endpoints: self.endpoints.clone(),
            arrows,
        }
    }

    /// The arrow action embedded in the total coordinate space.
    pub fn arrow_total(&self, a: usize) -> Matrix {
        let f = self.field;
        let total = self.total_dim();
        let offsets = self.offsets();
        let (src, tgt) = self.endpoints[a];
        let mut m = Matrix::zero(f, total, total);
        let block = &self.arrows[a];
        for i in 0..block.rows {
            for j in 0..block.cols {
                m.set(offsets[tgt] + i, offsets[src] + j, block.get(i, j).clone());
            }
        }
        m
    }

    /// Image of the arrow action on a subspace of the total space.
    fn arrow_image(&self, current: &Subspace) -> Subspace {
        let f = self.field;
        let total = self.total_dim();
        let offsets = self.offsets();
        let mut rows = Vec::new();
        for vrow in current.rows() {
            for (a, &(src, tgt)) in self.endpoints.iter().enumerate() {
                let x: Vec<Scalar> = vrow[offsets[src]..offsets[src] + self.dims[src]].to_vec();
                let y = self.arrows[a].apply(&x);
                let mut out = vec![f.zero(); total];
                for (i, val) in y.into_iter().enumerate() {
                    out[offsets[tgt] + i] = val;
                }
                rows.push(out);
            }
        }
        Subspace::from_rows(f, total, rows).unwrap()
    }

    fn graded_dims(&self, s: &Subspace) -> Vec<usize> {
        // valid because every subspace we pass here is arrow-generated or
        // full, hence graded by vertex blocks
        let f = self.field;
        let offsets = self.offsets();
        (0..self.dims.len())
            .map(|v| {
                let rows: Vec<Vec<Scalar>> = s
                    .rows()
                    .into_iter()
                    .map(|r| r[offsets[v]..offsets[v] + self.dims[v]].to_vec())
                    .collect();
                Subspace::from_rows(f, self.dims[v], rows).unwrap().dim()
            })
            .collect()
    }

    /// 𝕊(M): layer l is J^l M / J^{l+1} M with J^{l+1}M = Σ_a a·(J^l M).
    pub fn radical_layering(&self) -> SemisimpleSequence {
        let f = self.field;
        let total = self.total_dim();
        let mut layers = Vec::new();
        let mut current = Subspace::full(f, total);
        while current.dim() > 0 {
            let next = self.arrow_image(&current);
            let cd = self.graded_dims(&current);
            let nd = self.graded_dims(&next);
            layers.push(cd.iter().zip(&nd).map(|(a, b)| a - b).collect());
            if next.dim() == current.dim() {
                break;
            }
            current = next;
        }
        SemisimpleSequence { layers }
    }

    /// J^l M as a subspace of the total coordinate space.
    pub fn radical_power(&self, l: usize) -> Subspace {
        let mut current = Subspace::full(self.field, self.total_dim());
        for _ in 0..l {
            current = self.arrow_image(&current);
        }
        current
    }
}

/// 𝕊(M): the list of layer dimension vectors, top first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemisimpleSequence {
    pub layers: Vec<Vec<usize>>,
}

impl SemisimpleSequence {
    pub fn total(&self) -> Vec<usize> {
        let n = self.layers.first().map(|l| l.len()).unwrap_or(0);
        let mut t = vec![0; n];
        for l in &self.layers {
            for (i, x) in l.iter().enumerate() {
                t[i] += x;
            }
        }
        t
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dominance {
    Equal,
    StrictlyLess,
    StrictlyGreater,
    Incomparable,
}

/// Compares componentwise partial sums Σ_{l≤m} a_l against Σ_{l≤m} b_l.
pub fn dominance_compare(
    a: &SemisimpleSequence,
    b: &SemisimpleSequence,
) -> Result<Dominance, Error> {
    if a.total() != b.total() {
        return Err(Error::BadInput(
            "dominance compare requires equal total dimension vectors".into(),
        ));
    }
    let n = a.total().len();
    let empty = vec![0usize; n];
    if a.layers.first().unwrap_or(&empty) != b.layers.first().unwrap_or(&empty) {
        return Err(Error::BadInput(
            "dominance compare requires equal top layers".into(),
        ));
    }
    let depth = a.layers.len().max(b.layers.len());
    let (mut le, mut ge) = (true, true);
    let mut sum_a = vec![0usize; n];
    let mut sum_b = vec![0usize; n];
    for m in 0..depth {
        if let Some(l) = a.layers.get(m) {
            for (i, x) in l.iter().enumerate() {
                sum_a[i] += x;
            }
        }
        if let Some(l) = b.layers.get(m) {
            for (i, x) in l.iter().enumerate() {
                sum_b[i] += x;
            }
        }
        for i in 0..n {
            match sum_a[i].cmp(&sum_b[i]) {
                Ordering::Less => ge = false,
                Ordering::Greater => le = false,
                Ordering::Equal => {}
            }
        }
    }
    Ok(match (le, ge) {
        (true, true) => Dominance::Equal,
        (true, false) => Dominance::StrictlyLess,
        (false, true) => Dominance::StrictlyGreater,
        (false, false) => Dominance::Incomparable,
    })
}

/// P/C with deterministic coset representatives: the non-pivot path-basis
/// columns of C, in the fixed basis order of P.
pub struct QuotientRepresentation {
    pub point: SubmodulePoint,
    pub rep: Representation,
    /// P-basis columns of the coset representatives, grouped per vertex
    pub coset_cols: Vec<Vec<usize>>,
}

impl QuotientRepresentation {
    pub fn new(point: &SubmodulePoint) -> Result<QuotientRepresentation, Error> {
        let pres = point.pres.clone();
        let f = pres.field();
        let n = pres.algebra.quiver.vertex_count();
        let free = point.space.complement_cols();
        let mut coset_cols: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &c in &free {
            coset_cols[pres.basis_vertex(c)].push(c);
        }
        let dims: Vec<usize> = coset_cols.iter().map(|v| v.len()).collect();
        let quiver = &pres.algebra.quiver;
        let mut arrows = Vec::new();
        for (a, arr) in quiver.arrows.iter().enumerate() {
            let (src, tgt) = (arr.source, arr.target);
            let mut m = Matrix::zero(f, dims[tgt], dims[src]);
            for (j, &col) in coset_cols[src].iter().enumerate() {
                let mut v = pres.zero_vec();
                v[col] = f.one();
                let img = pres.act_arrow(a, &v);
                let red = point.space.reduce(&img);
                for (i, &tcol) in coset_cols[tgt].iter().enumerate() {
                    m.set(i, j, red[tcol].clone());
                }
            }
            arrows.push(m);
        }
        let rep = Representation {
            field: f,
            dims,
            endpoints: quiver.arrows.iter().map(|a| (a.source, a.target)).collect(),
            arrows,
        };
        verify_relations(&pres, &rep)?;
        Ok(QuotientRepresentation {
            point: point.clone(),
            rep,
            coset_cols,
        })
    }

    pub fn dim_vector(&self) -> Vec<usize> {
        self.rep.dims.clone()
    }

    /// Flat M-coordinates (vertex blocks concatenated) of a vector of P.
    pub fn coords_of(&self, v: &[Scalar]) -> Vec<Scalar> {
        let red = self.point.space.reduce(v);
        self.coset_cols
            .iter()
            .flat_map(|cols| cols.iter().map(|&c| red[c].clone()))
            .collect()
    }

    /// Image of z_r in M-coordinates.
    pub fn top_image(&self, r: usize) -> Vec<Scalar> {
        self.coords_of(&self.point.pres.top_vec(r))
    }

    pub fn radical_layering(&self) -> SemisimpleSequence {
        self.rep.radical_layering()
    }
}

fn verify_relations(pres: &Arc<ProjectivePresentation>, rep: &Representation) -> Result<(), Error> {
    let alg = &pres.algebra;
    let f = alg.field;
    let quiver = &alg.quiver;
    for rel in &alg.relations {
        let src = rel.source();
        let tgt = rel.end(quiver);
        let mut total = Matrix::zero(f, rep.dims[tgt], rep.dims[src]);
        for (c, path) in &rel.terms {
            let mut m = Matrix::identity(f, rep.dims[src]);
            for &a in &path.arrows {
                m = rep.arrows[a].mul(&m);
            }
            total = total.add(&m.scale(c));
        }
        if !total.is_zero() {
            return Err(Error::Internal(
                "algebra relation does not annihilate the quotient representation".into(),
            ));
        }
    }
    Ok(())
}

/// An arrow-stable subquotient V/W of P, as a representation. Both spaces
/// must be vertex-graded and arrow-stable with W ⊆ V.
pub fn subquotient_rep(
    pres: &Arc<ProjectivePresentation>,
    v_space: &Subspace,
    w_space: &Subspace,
) -> Representation {
    let f = pres.field();
    let n = pres.algebra.quiver.vertex_count();
    let dim_p = pres.dim();
    // graded bases: per vertex, a basis of (V ∩ vertex block) reduced mod W
    let mut vertex_bases: Vec<Vec<Vec<Scalar>>> = vec![Vec::new(); n];
    for vx in 0..n {
        let cols: Vec<usize> = (0..dim_p).filter(|&k| pres.basis_vertex(k) == vx).collect();
        let block_rows: Vec<Vec<Scalar>> = cols
            .iter()
            .map(|&c| {
                let mut row = pres.zero_vec();
                row[c] = f.one();
                row
            })
            .collect();
        let block = Subspace::from_rows(f, dim_p, block_rows).unwrap();
        let v_part = v_space.intersect(&block).unwrap();
        let w_part = w_space.intersect(&block).unwrap();
        let mut acc = w_part.rows();
        for row in v_part.rows() {
            let probe = Subspace::from_rows(f, dim_p, {
                let mut rr = acc.clone();
                rr.push(row.clone());
                rr
            })
            .unwrap();
            if probe.dim() > acc.len() {
                vertex_bases[vx].push(row.clone());
                acc.push(row);
            }
        }
    }
    let dims: Vec<usize> = vertex_bases.iter().map(|b| b.len()).collect();
    // coordinates of a vector of V modulo W in the chosen bases
    let coords = |vec: &[Scalar], vx: usize| -> Vec<Scalar> {
        let mut rows = w_space.rows();
        let base = rows.len();
        rows.extend(vertex_bases[vx].iter().cloned());
        let span = Matrix::from_rows(f, dim_p, rows).unwrap().transpose();
        let cols = span.cols;
        let mut full = Matrix::zero(f, dim_p, cols + 1);
        for i in 0..dim_p {
            for j in 0..cols {
                full.set(i, j, span.get(i, j).clone());
            }
            full.set(i, cols, vec[i].clone());
        }
        let pivots = full.rref();
        let mut x = vec![f.zero(); cols];
        for (r, &c) in pivots.iter().enumerate() {
            assert!(c < cols, "vector not in the span");
            x[c] = full.get(r, cols).clone();
        }
        x[base..].to_vec()
    };
    let quiver = &pres.algebra.quiver;
    let mut arrows = Vec::new();
    for (a, arr) in quiver.arrows.iter().enumerate() {
        let (src, tgt) = (arr.source, arr.target);
        let mut m = Matrix::zero(f, dims[tgt], dims[src]);
        for (j, row) in vertex_bases[src].iter().enumerate() {
            let img = pres.act_arrow(a, row);
            let x = coords(&img, tgt);
            for (i, val) in x.into_iter().enumerate() {
                m.set(i, j, val);
            }
        }
        arrows.push(m);
    }
    Representation {
        field: f,
        dims,
        endpoints: quiver.arrows.iter().map(|a| (a.source, a.target)).collect(),
        arrows,
    }
}
