//! Decision procedures for top-stable degenerations: the orbit invariants,
//! the unipotent/torus/full maximality checks with certificates, and the
//! moduli normal form.
//!
//! Full maximality is decided by a parabolicity test on the stabilizer
//! inside Aut(T): let A = { φ ∈ ⊕_i M_{t_i} : φ̃(C) ⊆ C }. A is always
//! contained in the block-triangular algebra P(F) of any chain F of
//! A-submodules of ⊕_i K^{t_i}; when A itself is block-triangular with full
//! diagonal blocks, the spin flag is its entire submodule lattice. So the
//! stabilizer is parabolic iff dim A = dim P(F) for the spin flag F, and in
//! that case F simultaneously yields the local decomposition and the
//! normal form.

use crate::algebra::AlgebraElement;
use crate::curves::{flat_limit, CurveFamily};
use crate::decompose::decompose_summands;
use crate::field::Scalar;
use crate::hom::{
    end_p_basis, end_p_dim, hom_dim_from_projective, hom_dim_from_quotient, iso_test,
    maps_carrying,
};
use crate::linalg::{Matrix, Subspace};
use crate::presentation::{ProjectivePresentation, SubmodulePoint};
use crate::quiver::Path;
use crate::rep::{subquotient_rep, QuotientRepresentation, SemisimpleSequence};
use crate::Error;
use std::collections::BTreeMap;

/// m = dim Hom(P, JP/C) − dim Hom(P/C, JP/C): the dimension of the
/// unipotent orbit of C.
pub fn unipotent_orbit_dim(c: &SubmodulePoint) -> Result<usize, Error> {
    require_radical(c)?;
    let pres = &c.pres;
    let jp = pres.radical_power(1);
    let x = subquotient_rep(pres, &jp, &c.space);
    let a = hom_dim_from_projective(pres, &x);
    let b = hom_dim_from_quotient(c, &x);
    Ok(a - b)
}

/// The same invariant as the rank of the tangent map
/// Hom_Λ(P, JP) → Hom(C, P/C), f ↦ (c ↦ f(c) mod C).
pub fn unipotent_tangent_rank(c: &SubmodulePoint) -> Result<usize, Error> {
    require_radical(c)?;
    let pres = &c.pres;
    let f = pres.field();
    let basis = end_p_basis(&pres.clone(), true);
    let c_rows = c.space.rows();
    let mut rows = Vec::new();
    for h in &basis {
        let mut flat = Vec::new();
        for crow in &c_rows {
            let img = h.apply(pres, crow);
            flat.extend(c.space.reduce(&img));
        }
        rows.push(flat);
    }
    let width = c_rows.len() * pres.dim();
    Ok(Subspace::from_rows(f, width, rows)?.dim())
}

/// dim Hom(P, P/C) − dim End(P/C), cross-validated against
/// dim End_Λ(P) − dim{φ ∈ End_Λ(P) : φ(C) ⊆ C}.
pub fn orbit_dimension(c: &SubmodulePoint) -> Result<usize, Error> {
    require_radical(c)?;
    let pres = &c.pres;
    let m = QuotientRepresentation::new(c)?;
    let via_hom = hom_dim_from_projective(pres, &m.rep) - hom_dim_from_quotient(c, &m.rep);
    let (_, stab) = maps_carrying(&c.pres, c, c);
    let via_stab = end_p_dim(pres) - stab.len();
    if via_hom != via_stab {
        return Err(Error::Internal(format!(
            "orbit dimension mismatch: {via_hom} vs {via_stab}"
        )));
    }
    Ok(via_hom)
}

/// Dimension of the torus orbit for the torus of a top-element sequence:
/// the rank of the diagonal Lie action a ↦ (c ↦ θ_a(c) mod C).
pub fn torus_orbit_dimension(
    c: &SubmodulePoint,
    top_basis: &[Vec<Scalar>],
) -> Result<usize, Error> {
    let pres = &c.pres;
    let f = pres.field();
    let t = pres.top_count();
    if top_basis.len() != t {
        return Err(Error::BadInput("one basis member per top required".into()));
    }
    let alg = &pres.algebra;
    // the decomposition P = ⊕ Λy_r: stack the summand bases
    let mut summand_rows: Vec<Vec<Vec<Scalar>>> = Vec::new();
    for y in top_basis {
        let rows: Vec<Vec<Scalar>> = (0..alg.dim())
            .map(|i| pres.act(&alg.unit_of(i), y))
            .collect();
        summand_rows.push(Subspace::from_rows(f, pres.dim(), rows)?.rows());
    }
    let all_rows: Vec<Vec<Scalar>> = summand_rows.iter().flatten().cloned().collect();
    if all_rows.len() != pres.dim()
        || Subspace::from_rows(f, pres.dim(), all_rows.clone())?.dim() != pres.dim()
    {
        return Err(Error::BadInput(
            "top basis does not decompose P into projective summands".into(),
        ));
    }
    let span = Matrix::from_rows(f, pres.dim(), all_rows)?.transpose();
    let solve_components = |v: &[Scalar]| -> Vec<Vec<Scalar>> {
        let cols = span.cols;
        let mut full = Matrix::zero(f, pres.dim(), cols + 1);
        for i in 0..pres.dim() {
            for j in 0..cols {
                full.set(i, j, span.get(i, j).clone());
            }
            full.set(i, cols, v[i].clone());
        }
        let pivots = full.rref();
        let mut x = vec![f.zero(); cols];
        for (r, &cc) in pivots.iter().enumerate() {
            assert!(cc < cols);
            x[cc] = full.get(r, cols).clone();
        }
        // reassemble the per-summand contributions in ambient coordinates
        let mut out = Vec::new();
        let mut offset = 0;
        for rows in &summand_rows {
            let mut part = pres.zero_vec();
            for row in rows {
                let lam = &x[offset];
                offset += 1;
                if !f.is_zero(lam) {
                    for i in 0..pres.dim() {
                        part[i] = f.add(&part[i], &f.mul(lam, &row[i]));
                    }
                }
            }
            out.push(part);
        }
        out
    };
    let c_rows = c.space.rows();
    let mut tangent_rows = Vec::new();
    for r in 0..t {
        let mut flat = Vec::new();
        for crow in &c_rows {
            let comps = solve_components(crow);
            flat.extend(c.space.reduce(&comps[r]));
        }
        tangent_rows.push(flat);
    }
    let width = c_rows.len() * pres.dim();
    Ok(Subspace::from_rows(f, width, tangent_rows)?.dim())
}

/// True iff m = 0, equivalently f(C) ⊆ C for every f ∈ Hom_Λ(P, JP); both
/// computed and required to agree.
pub fn unipotent_maximal(c: &SubmodulePoint) -> Result<bool, Error> {
    let m = unipotent_orbit_dim(c)?;
    let pres = c.pres.clone();
    let stable = end_p_basis(&pres, true).iter().all(|h| {
        c.space
            .rows()
            .iter()
            .all(|row| c.space.contains_vec(&h.apply(&pres, row)))
    });
    if (m == 0) != stable {
        return Err(Error::Internal(
            "m = 0 disagrees with radical-map stability".into(),
        ));
    }
    Ok(m == 0)
}

/// A split realization of M = P/C as ⊕_r Λe(r)/I_r inside the orbit of C.
pub struct LocalSplitting {
    pub split_point: SubmodulePoint,
    /// ideal of the r-th top, over the Λe(tops[r]) coordinate block
    pub ideals: Vec<Subspace>,
}

pub enum TorusFailure {
    /// M is not a direct sum of local modules (t − s > 0)
    NotLocalSum { summand_count: usize },
    /// two ideals at the same vertex are incomparable (top indices)
    Incomparable { v: usize, w: usize },
    /// C_{r_from}·ω ⊄ C_{r_to} for ω ∈ e_iJe_k
    Invariance {
        r_from: usize,
        r_to: usize,
        omega: AlgebraElement,
    },
}

pub struct TorusOutcome {
    pub maximal: bool,
    pub splitting: Option<LocalSplitting>,
    pub failure: Option<TorusFailure>,
    pub summand_count: Option<usize>,
}

fn ideal_elems(pres: &ProjectivePresentation, vertex: usize, ideal: &Subspace) -> Vec<AlgebraElement> {
    let alg = &pres.algebra;
    let idxs: Vec<usize> = (0..alg.dim())
        .filter(|&i| alg.basis_path(i).start == vertex)
        .collect();
    ideal
        .rows()
        .into_iter()
        .map(|row| {
            let mut e = AlgebraElement::zero();
            for (slot, &i) in idxs.iter().enumerate() {
                if !alg.field.is_zero(&row[slot]) {
                    e.coeffs.insert(i, row[slot].clone());
                }
            }
            e
        })
        .collect()
}

/// A split point in the orbit of C together with its per-top ideals, or
/// None when M is not a direct sum of local modules.
pub fn local_splitting(
    c: &SubmodulePoint,
    seed: u64,
) -> Result<(Option<LocalSplitting>, usize), Error> {
    let pres = c.pres.clone();
    if c.is_split() && c.inside_radical {
        let ideals: Vec<Subspace> = (0..pres.top_count()).map(|r| c.ideal_at_top(r)).collect();
        return Ok((
            Some(LocalSplitting {
                split_point: c.clone(),
                ideals,
            }),
            pres.top_count(),
        ));
    }
    let summands = decompose_summands(c, seed)?;
    let s = summands.len();
    if summands.iter().any(|x| !x.is_local()) {
        return Ok((None, s));
    }
    // match local summands to tops of equal vertex, deterministically
    let mut per_vertex: BTreeMap<usize, Vec<Subspace>> = BTreeMap::new();
    for sm in &summands {
        per_vertex
            .entry(sm.top_vertices()[0])
            .or_default()
            .push(sm.local_ideal());
    }
    for list in per_vertex.values_mut() {
        list.sort_by(|a, b| a.canonical_cmp(b));
    }
    let mut taken: BTreeMap<usize, usize> = BTreeMap::new();
    let mut ideals: Vec<Subspace> = Vec::new();
    for r in 0..pres.top_count() {
        let v = pres.tops[r];
        let list = per_vertex.get(&v).ok_or_else(|| {
            Error::Internal("summand tops do not match the presentation tops".into())
        })?;
        let k = taken.entry(v).or_insert(0);
        if *k >= list.len() {
            return Err(Error::Internal(
                "summand tops do not match the presentation tops".into(),
            ));
        }
        ideals.push(list[*k].clone());
        *k += 1;
    }
    let gens: Vec<Vec<AlgebraElement>> = ideals
        .iter()
        .enumerate()
        .map(|(r, ideal)| ideal_elems(&pres, pres.tops[r], ideal))
        .collect();
    let split_point = SubmodulePoint::from_ideals(pres, &gens)?;
    Ok((
        Some(LocalSplitting {
            split_point,
            ideals,
        }),
        s,
    ))
}

/// Absence of proper torus-type top-stable degenerations: M splits into
/// local modules, the ideals at each vertex are comparable, and
/// C_{ij}·ω ⊆ C_{kl} for every ω ∈ e_iJe_k and every pair (i,j) ≠ (k,l).
pub fn torus_maximal(c: &SubmodulePoint, seed: u64) -> Result<TorusOutcome, Error> {
    require_radical(c)?;
    let pres = c.pres.clone();
    let alg = pres.algebra.clone();
    let (splitting, s) = local_splitting(c, seed)?;
    let Some(splitting) = splitting else {
        return Ok(TorusOutcome {
            maximal: false,
            splitting: None,
            failure: Some(TorusFailure::NotLocalSum { summand_count: s }),
            summand_count: Some(s),
        });
    };
    let t = pres.top_count();
    // (2.a): comparability within each vertex
    for v in 0..t {
        for w in v + 1..t {
            if pres.tops[v] != pres.tops[w] {
                continue;
            }
            let a = &splitting.ideals[v];
            let b = &splitting.ideals[w];
            if !a.contains(b) && !b.contains(a) {
                return Ok(TorusOutcome {
                    maximal: false,
                    failure: Some(TorusFailure::Incomparable { v, w }),
                    splitting: Some(splitting),
                    summand_count: Some(s),
                });
            }
        }
    }
    // (2.b): right multiplication into every other ideal
    for r_from in 0..t {
        for r_to in 0..t {
            if r_from == r_to {
                continue;
            }
            let i = pres.tops[r_from];
            let k = pres.tops[r_to];
            for widx in alg.idempotent_component(k, i, true) {
                let omega = alg.unit_of(widx);
                let ok = ideal_elems(&pres, i, &splitting.ideals[r_from])
                    .iter()
                    .all(|x| {
                        let prod = alg.multiply(x, &omega);
                        elem_in_ideal(&pres, k, &splitting.ideals[r_to], &prod)
                    });
                if !ok {
                    return Ok(TorusOutcome {
                        maximal: false,
                        failure: Some(TorusFailure::Invariance {
                            r_from,
                            r_to,
                            omega,
                        }),
                        splitting: Some(splitting),
                        summand_count: Some(s),
                    });
                }
            }
        }
    }
    Ok(TorusOutcome {
        maximal: true,
        splitting: Some(splitting),
        failure: None,
        summand_count: Some(s),
    })
}

fn elem_in_ideal(
    pres: &ProjectivePresentation,
    vertex: usize,
    ideal: &Subspace,
    x: &AlgebraElement,
) -> bool {
    let alg = &pres.algebra;
    let f = alg.field;
    let idxs: Vec<usize> = (0..alg.dim())
        .filter(|&i| alg.basis_path(i).start == vertex)
        .collect();
    let row: Vec<Scalar> = idxs
        .iter()
        .map(|i| x.coeffs.get(i).cloned().unwrap_or_else(|| f.zero()))
        .collect();
    ideal.contains_vec(&row)
}

fn require_radical(c: &SubmodulePoint) -> Result<(), Error> {
    if !c.inside_radical {
        return Err(Error::BadInput(
            "the point must lie inside the radical of P".into(),
        ));
    }
    Ok(())
}

/// The stabilizer algebra A = { φ ∈ ⊕_i M_{t_i} : φ̃(C) ⊆ C }, as t×t
/// matrices supported on vertex-matching entries.
pub fn stabilizer_top_algebra(c: &SubmodulePoint) -> Result<Vec<Matrix>, Error> {
    let pres = &c.pres;
    let f = pres.field();
    let t = pres.top_count();
    let vars: Vec<(usize, usize)> = (0..t)
        .flat_map(|s| (0..t).map(move |r| (s, r)))
        .filter(|&(s, r)| pres.tops[s] == pres.tops[r])
        .collect();
    let mut rows = Vec::new();
    for crow in c.space.rows() {
        let comps = pres.components(&crow);
        // φ̃(c) = Σ_s (Σ_r φ[s][r] u_r) z_s; residue mod C must vanish
        let mut images: Vec<Vec<Scalar>> = Vec::new();
        for &(s, r) in &vars {
            images.push(pres.embed(&comps[r], s));
        }
        // linear constraint per ambient coordinate after reduction
        let reduced: Vec<Vec<Scalar>> = images.iter().map(|v| c.space.reduce(v)).collect();
        for coord in 0..pres.dim() {
            let row: Vec<Scalar> = reduced.iter().map(|v| v[coord].clone()).collect();
            if row.iter().any(|x| !f.is_zero(x)) {
                rows.push(row);
            }
        }
    }
    let coeff = Matrix::from_rows(f, vars.len(), rows)?;
    let null = if coeff.rows == 0 {
        (0..vars.len())
            .map(|k| {
                let mut x = vec![f.zero(); vars.len()];
                x[k] = f.one();
                x
            })
            .collect()
    } else {
        coeff.nullspace()
    };
    Ok(null
        .into_iter()
        .map(|x| {
            let mut m = Matrix::zero(f, t, t);
            for (k, &(s, r)) in vars.iter().enumerate() {
                m.set(s, r, x[k].clone());
            }
            m
        })
        .collect())
}

/// The canonical flag certificate of a parabolic stabilizer.
pub struct FlagCertificate {
    /// per vertex with tops: (vertex, jump sizes along the flag)
    pub jump_sizes: Vec<(usize, Vec<usize>)>,
    /// Σ_i Σ_{j<k} s_j^{(i)} s_k^{(i)}
    pub flag_dim: usize,
    /// ideal assigned to each top position, descending along each vertex
    pub normal_form: SubmodulePoint,
}

struct FlagData {
    parabolic: bool,
    jump_sizes: Vec<(usize, Vec<usize>)>,
    flag_dim: usize,
    /// per vertex: adapted basis vectors of K^{t_i} (flag order), with the
    /// block index of each
    adapted: BTreeMap<usize, Vec<(Vec<Scalar>, usize)>>,
}

/// The radical of the stabilizer algebra as a subspace of its basis span.
/// Dickson's trace-form criterion applies in characteristic zero and for
/// p > t; tiny prime fields fall back to an exhaustive sweep using
/// rad A = { a : ab is nilpotent for every b }.
fn algebra_radical(field: crate::field::Field, basis: &[Matrix], t: usize) -> Result<Vec<Matrix>, Error> {
    let dim_a = basis.len();
    let trace_ok = match field {
        crate::field::Field::Rational => true,
        crate::field::Field::Prime(p) => (p as usize) > t,
    };
    if trace_ok {
        let mut gram = Matrix::zero(field, dim_a, dim_a);
        for i in 0..dim_a {
            for j in 0..dim_a {
                gram.set(i, j, basis[i].mul(&basis[j]).trace());
            }
        }
        let null = gram.nullspace();
        return Ok(null
            .into_iter()
            .map(|x| {
                let mut m = Matrix::zero(field, t, t);
                for (k, c) in x.iter().enumerate() {
                    if !field.is_zero(c) {
                        m = m.add(&basis[k].scale(c));
                    }
                }
                m
            })
            .collect());
    }
    let crate::field::Field::Prime(p) = field else {
        unreachable!()
    };
    if (p as f64).powi(dim_a as i32) > 65536.0 {
        return Err(Error::NeedsSplitInput(
            "stabilizer radical over a tiny field is too large to sweep".into(),
        ));
    }
    let count = (p as usize).pow(dim_a as u32);
    let element = |code: usize| -> Matrix {
        let mut x = code;
        let mut m = Matrix::zero(field, t, t);
        for b in basis.iter() {
            let c = field.from_i64((x % p as usize) as i64);
            x /= p as usize;
            if !field.is_zero(&c) {
                m = m.add(&b.scale(&c));
            }
        }
        m
    };
    let nilpotent = |m: &Matrix| -> bool {
        let mut pw = m.clone();
        for _ in 0..t {
            pw = pw.mul(m);
        }
        pw.is_zero()
    };
    let mut rad_rows: Vec<Vec<Scalar>> = Vec::new();
    for code in 0..count {
        let a = element(code);
        let mut in_rad = true;
        for code_b in 0..count {
            let b = element(code_b);
            if !nilpotent(&a.mul(&b)) {
                in_rad = false;
                break;
            }
        }
        if in_rad {
            // coordinates of a over the basis span: a was built as a
            // combination, recover its coefficients from the code
            let mut x = code;
            let row: Vec<Scalar> = (0..dim_a)
                .map(|_| {
                    let c = field.from_i64((x % p as usize) as i64);
                    x /= p as usize;
                    c
                })
                .collect();
            rad_rows.push(row);
        }
    }
    let sub = Subspace::from_rows(field, dim_a, rad_rows)?;
    Ok(sub
        .rows()
        .into_iter()
        .map(|x| {
            let mut m = Matrix::zero(field, t, t);
            for (k, c) in x.iter().enumerate() {
                if !field.is_zero(c) {
                    m = m.add(&basis[k].scale(c));
                }
            }
            m
        })
        .collect())
}

/// The canonical invariant flag of the stabilizer algebra: the radical
/// series R^k·V of the natural module. When the stabilizer is the full
/// block-triangular algebra of a flag, that flag is recovered exactly, so
/// parabolicity is equivalent to dim A = dim P(F).
fn spin_flag(c: &SubmodulePoint, a_basis: &[Matrix]) -> Result<FlagData, Error> {
    let pres = &c.pres;
    let f = pres.field();
    let t = pres.top_count();
    let dim_a: usize = a_basis.len();
    let rad = algebra_radical(f, a_basis, t)?;
    // radical series of the natural module K^t (vertex blocks jointly)
    let mut chain: Vec<Subspace> = vec![Subspace::full(f, t)];
    loop {
        let current = chain.last().unwrap();
        if current.dim() == 0 {
            break;
        }
        let mut rows = Vec::new();
        for r in &rad {
            for w in current.rows() {
                rows.push(r.apply(&w));
            }
        }
        let next = Subspace::from_rows(f, t, rows)?;
        if next.dim() == current.dim() {
            return Err(Error::Internal(
                "stabilizer radical series failed to descend".into(),
            ));
        }
        chain.push(next);
    }
    // flag members bottom-up, per vertex block
    let mut jump_sizes = Vec::new();
    let mut flag_dim = 0;
    let mut pf_dim = 0;
    let mut adapted = BTreeMap::new();
    let mut vertices: Vec<usize> = pres.tops.clone();
    vertices.sort();
    vertices.dedup();
    for &vx in &vertices {
        let idx: Vec<usize> = (0..t).filter(|&r| pres.tops[r] == vx).collect();
        let ti = idx.len();
        // project the chain to the vertex block; members ascend
        let mut members: Vec<Subspace> = Vec::new();
        for w in chain.iter().rev() {
            let rows: Vec<Vec<Scalar>> = w
                .rows()
                .into_iter()
                .map(|row| idx.iter().map(|&s| row[s].clone()).collect())
                .collect();
            let proj = Subspace::from_rows(f, ti, rows)?;
            if proj.dim() > 0 && members.last().map(|m: &Subspace| m.dim()) != Some(proj.dim()) {
                members.push(proj);
            }
        }
        // gradedness of the chain: projections must refine to a flag of the
        // block; verify containment
        for w in members.windows(2) {
            if !w[1].contains(&w[0]) {
                return Ok(FlagData {
                    parabolic: false,
                    jump_sizes: Vec::new(),
                    flag_dim: 0,
                    adapted: BTreeMap::new(),
                });
            }
        }
        if members.last().map(|m| m.dim()) != Some(ti) && ti > 0 {
            return Ok(FlagData {
                parabolic: false,
                jump_sizes: Vec::new(),
                flag_dim: 0,
                adapted: BTreeMap::new(),
            });
        }
        let mut sizes = Vec::new();
        let mut prev = 0;
        let mut basis_vectors: Vec<(Vec<Scalar>, usize)> = Vec::new();
        let mut acc: Vec<Vec<Scalar>> = Vec::new();
        for (j, sp) in members.iter().enumerate() {
            sizes.push(sp.dim() - prev);
            prev = sp.dim();
            for row in sp.rows() {
                let probe = Subspace::from_rows(f, ti, {
                    let mut rr = acc.clone();
                    rr.push(row.clone());
                    rr
                })?;
                if probe.dim() > acc.len() {
                    basis_vectors.push((row.clone(), j));
                    acc.push(row);
                }
            }
        }
        let u = sizes.len();
        for j in 0..u {
            for k in 0..u {
                if j < k {
                    flag_dim += sizes[j] * sizes[k];
                }
                if j <= k {
                    pf_dim += sizes[j] * sizes[k];
                }
            }
        }
        jump_sizes.push((vx, sizes));
        adapted.insert(vx, basis_vectors);
    }
    Ok(FlagData {
        parabolic: dim_a == pf_dim,
        jump_sizes,
        flag_dim,
        adapted,
    })
}

fn flag_certificate(c: &SubmodulePoint, data: &FlagData) -> Result<FlagCertificate, Error> {
    let pres = c.pres.clone();
    let alg = pres.algebra.clone();
    let f = pres.field();
    let t = pres.top_count();
    // adapted top elements y_p = Σ_a w[a]·z_{I_i[a]} and their ideals
    let mut ideals_per_top: Vec<Option<Subspace>> = vec![None; t];
    for (&vx, basis_vectors) in &data.adapted {
        let idx: Vec<usize> = (0..t).filter(|&r| pres.tops[r] == vx).collect();
        // ideal of each flag block, computed from the adapted basis vector
        let mut block_ideals: Vec<Subspace> = Vec::new();
        let alg_idx: Vec<usize> = (0..alg.dim())
            .filter(|&i| alg.basis_path(i).start == vx)
            .collect();
        for (w, _) in basis_vectors {
            let mut y = pres.zero_vec();
            for (a, lam) in w.iter().enumerate() {
                if !f.is_zero(lam) {
                    let zv = pres.top_vec(idx[a]);
                    for i in 0..y.len() {
                        y[i] = f.add(&y[i], &f.mul(lam, &zv[i]));
                    }
                }
            }
            // { u ∈ Λe_vx : u·y ∈ C }
            let mut rows = Vec::new();
            for &i in &alg_idx {
                let img = pres.act(&alg.unit_of(i), &y);
                rows.push(c.space.reduce(&img));
            }
            let mat = Matrix::from_rows(f, pres.dim(), rows)?.transpose();
            let ideal = Subspace::kernel_of_map(f, &mat);
            block_ideals.push(ideal);
        }
        // equal ideals within a block of the flag
        let blocks: Vec<usize> = basis_vectors.iter().map(|(_, j)| *j).collect();
        for (p, q) in blocks.iter().enumerate().skip(1) {
            if *q == blocks[p - 1] && block_ideals[p] != block_ideals[p - 1] {
                return Err(Error::Internal(
                    "flag block carries unequal ideals".into(),
                ));
            }
        }
        // descending assignment along the vertex's top positions
        for (pos, &r) in idx.iter().enumerate() {
            ideals_per_top[r] = Some(block_ideals[pos].clone());
        }
    }
    let ideals: Vec<Subspace> = ideals_per_top.into_iter().map(|o| o.unwrap()).collect();
    let gens: Vec<Vec<AlgebraElement>> = ideals
        .iter()
        .enumerate()
        .map(|(r, ideal)| ideal_elems(&pres, pres.tops[r], ideal))
        .collect();
    let normal_form = SubmodulePoint::from_ideals(pres.clone(), &gens)?;
    Ok(FlagCertificate {
        jump_sizes: data.jump_sizes.clone(),
        flag_dim: data.flag_dim,
        normal_form,
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum WitnessMode {
    Unipotent,
    NonLocalSplit,
    IncomparablePair,
    SameVertexTorque,
    CrossSummand,
}

pub struct Witness {
    pub mode: WitnessMode,
    /// the curve acts on this point, which lies in the orbit of the input
    pub base: SubmodulePoint,
    pub curve: CurveFamily,
    pub limit: SubmodulePoint,
    pub probabilistic_negative: bool,
}

/// The constructive witness for a detected failure: the curve prescribed by
/// the corresponding structural argument, with its flat limit. The limit is
/// asserted non-isomorphic to the input.
pub fn witness_degeneration(
    c: &SubmodulePoint,
    outcome_failure: &WitnessRequest,
    seed: u64,
) -> Result<Witness, Error> {
    let pres = c.pres.clone();
    let f = pres.field();
    let alg = pres.algebra.clone();
    let t = pres.top_count();
    let (mode, base, curve) = match outcome_failure {
        WitnessRequest::Unipotent => {
            let h = end_p_basis(&pres, true)
                .into_iter()
                .find(|h| {
                    c.space
                        .rows()
                        .iter()
                        .any(|row| !c.space.contains_vec(&h.apply(&pres, row)))
                })
                .ok_or_else(|| Error::Internal("no destabilizing radical map".into()))?;
            let curve = CurveFamily::unipotent(pres.clone(), &h.images)?;
            (WitnessMode::Unipotent, c.clone(), curve)
        }
        WitnessRequest::NonLocalSplit => {
            let basis: Vec<Vec<Scalar>> = (0..t).map(|r| pres.top_vec(r)).collect();
            let weights: Vec<i64> = (0..t).map(|r| (t - 1 - r) as i64).collect();
            let curve = CurveFamily::torus(pres.clone(), &basis, &weights)?;
            (WitnessMode::NonLocalSplit, c.clone(), curve)
        }
        WitnessRequest::Incomparable { base, v, w } => {
            let mut top_basis: Vec<Vec<Scalar>> = (0..t).map(|r| pres.top_vec(r)).collect();
            // hat the first member of the incomparable pair
            let zw = pres.top_vec(*w);
            for i in 0..pres.dim() {
                top_basis[*v][i] = f.add(&top_basis[*v][i], &zw[i]);
            }
            let weights: Vec<i64> = (0..t).map(|r| i64::from(r == *w)).collect();
            let curve = CurveFamily::torus(pres.clone(), &top_basis, &weights)?;
            (WitnessMode::IncomparablePair, base.clone(), curve)
        }
        WitnessRequest::Torque {
            base,
            largest,
            smallest,
            omega,
        } => {
            let mut top_basis: Vec<Vec<Scalar>> = (0..t).map(|r| pres.top_vec(r)).collect();
            let shift = pres.embed(omega, *smallest);
            for i in 0..pres.dim() {
                top_basis[*largest][i] = f.add(&top_basis[*largest][i], &shift[i]);
            }
            let weights: Vec<i64> = (0..t).map(|r| i64::from(r == *smallest)).collect();
            let curve = CurveFamily::torus(pres.clone(), &top_basis, &weights)?;
            (WitnessMode::SameVertexTorque, base.clone(), curve)
        }
        WitnessRequest::Cross {
            base,
            r_from,
            r_to,
            omega,
        } => {
            let vx_from = pres.tops[*r_from];
            let vx_to = pres.tops[*r_to];
            let from_tops: Vec<usize> = (0..t).filter(|&r| pres.tops[r] == vx_from).collect();
            let to_tops: Vec<usize> = (0..t).filter(|&r| pres.tops[r] == vx_to).collect();
            let pos_from = from_tops.iter().position(|&r| r == *r_from).unwrap();
            let pos_to = to_tops.iter().position(|&r| r == *r_to).unwrap();
            let offset = (pos_to + to_tops.len() - pos_from % to_tops.len()) % to_tops.len();
            // g_τ: z_r ↦ τ^{-1} z_r + ω z_{σ(r)} on the failing vertex
            let mut images: Vec<Vec<crate::curves::LaurentAlg>> = (0..t)
                .map(|r| {
                    (0..t)
                        .map(|s| {
                            let mut m: crate::curves::LaurentAlg = BTreeMap::new();
                            if r == s {
                                let e = Path::idempotent(pres.tops[r]);
                                let u = alg.unit_of(alg.basis_index_of(&e).unwrap());
                                let exp = if from_tops.contains(&r) { -1 } else { 0 };
                                m.insert(exp, u);
                            }
                            m
                        })
                        .collect()
                })
                .collect();
            for (j, &r) in from_tops.iter().enumerate() {
                let target = to_tops[(j + offset) % to_tops.len()];
                let slot = images[r][target].entry(0).or_insert_with(AlgebraElement::zero);
                *slot = alg.add_elem(slot, omega);
            }
            let curve = CurveFamily {
                pres: pres.clone(),
                images,
            };
            (WitnessMode::CrossSummand, base.clone(), curve)
        }
    };
    let limit = flat_limit(&curve, &base)?;
    let verdict = iso_test(&limit, c, seed)?;
    if verdict.isomorphic {
        return Err(Error::Internal(
            "witness limit is isomorphic to the input point".into(),
        ));
    }
    Ok(Witness {
        mode,
        base,
        curve,
        limit,
        probabilistic_negative: verdict.probabilistic_negative,
    })
}

pub enum WitnessRequest {
    Unipotent,
    NonLocalSplit,
    Incomparable {
        base: SubmodulePoint,
        v: usize,
        w: usize,
    },
    Torque {
        base: SubmodulePoint,
        largest: usize,
        smallest: usize,
        omega: AlgebraElement,
    },
    Cross {
        base: SubmodulePoint,
        r_from: usize,
        r_to: usize,
        omega: AlgebraElement,
    },
}

pub fn witness_request_from(
    pres: &ProjectivePresentation,
    outcome: &TorusOutcome,
) -> Result<WitnessRequest, Error> {
    let failure = outcome
        .failure
        .as_ref()
        .ok_or_else(|| Error::Internal("missing torus failure".into()))?;
    Ok(match failure {
        TorusFailure::NotLocalSum { .. } => WitnessRequest::NonLocalSplit,
        TorusFailure::Incomparable { v, w } => WitnessRequest::Incomparable {
            base: outcome.splitting.as_ref().unwrap().split_point.clone(),
            v: *v,
            w: *w,
        },
        TorusFailure::Invariance {
            r_from,
            r_to,
            omega,
        } => {
            let splitting = outcome.splitting.as_ref().unwrap();
            if pres.tops[*r_from] == pres.tops[*r_to] {
                // torque case: hat the top with the largest ideal and scale
                // a distinct top carrying a minimal ideal among the rest
                let vx = pres.tops[*r_from];
                let idx: Vec<usize> = (0..pres.top_count())
                    .filter(|&r| pres.tops[r] == vx)
                    .collect();
                let largest = *idx
                    .iter()
                    .find(|&&a| idx.iter().all(|&b| splitting.ideals[a].contains(&splitting.ideals[b])))
                    .ok_or_else(|| Error::Internal("no largest ideal in an ordered family".into()))?;
                let rest: Vec<usize> = idx.iter().copied().filter(|&a| a != largest).collect();
                let smallest = *rest
                    .iter()
                    .find(|&&a| {
                        rest.iter().all(|&b| splitting.ideals[b].contains(&splitting.ideals[a]))
                    })
                    .ok_or_else(|| Error::Internal("no smallest ideal in an ordered family".into()))?;
                WitnessRequest::Torque {
                    base: splitting.split_point.clone(),
                    largest,
                    smallest,
                    omega: omega.clone(),
                }
            } else {
                WitnessRequest::Cross {
                    base: splitting.split_point.clone(),
                    r_from: *r_from,
                    r_to: *r_to,
                    omega: omega.clone(),
                }
            }
        }
    })
}

pub enum Certificate {
    Flag(FlagCertificate),
    Witness(Witness),
}

pub struct DegenerationReport {
    pub dim_vector: Vec<usize>,
    pub layering: SemisimpleSequence,
    pub m: usize,
    pub top_count: usize,
    pub summand_count: Option<usize>,
    pub orbit_dim: usize,
    pub unipotent_maximal: bool,
    pub torus_maximal: bool,
    pub fully_maximal: bool,
    pub certificate: Certificate,
}

/// The full maximality check. fully_maximal ⟺ m = 0 and the stabilizer
/// algebra is parabolic; a yes yields the flag certificate (its dimension is
/// asserted equal to the orbit dimension), a no yields a witness curve with
/// its flat limit.
pub fn check_maximal(c: &SubmodulePoint, seed: u64) -> Result<DegenerationReport, Error> {
    require_radical(c)?;
    let qrep = QuotientRepresentation::new(c)?;
    let dim_vector = qrep.dim_vector();
    let layering = qrep.radical_layering();
    let m = unipotent_orbit_dim(c)?;
    let uni = unipotent_maximal(c)?;
    let orbit_dim = orbit_dimension(c)?;
    let t = c.pres.top_count();
    if uni {
        let a_basis = stabilizer_top_algebra(c)?;
        let flag = spin_flag(c, &a_basis)?;
        if flag.parabolic {
            let cert = flag_certificate(c, &flag)?;
            if cert.flag_dim != orbit_dim {
                return Err(Error::Internal(format!(
                    "flag dimension {} disagrees with orbit dimension {}",
                    cert.flag_dim, orbit_dim
                )));
            }
            return Ok(DegenerationReport {
                dim_vector,
                layering,
                m,
                top_count: t,
                summand_count: Some(t),
                orbit_dim,
                unipotent_maximal: true,
                torus_maximal: true,
                fully_maximal: true,
                certificate: Certificate::Flag(cert),
            });
        }
    }
    // not maximal: produce a witness
    let (torus, summand_count, witness) = if !uni {
        let torus_outcome = torus_maximal(c, seed)?;
        let witness = witness_degeneration(c, &WitnessRequest::Unipotent, seed)?;
        (
            torus_outcome.maximal,
            torus_outcome.summand_count,
            witness,
        )
    } else {
        let torus_outcome = torus_maximal(c, seed)?;
        if torus_outcome.maximal {
            return Err(Error::Internal(
                "unipotent and torus maximal but the stabilizer is not parabolic".into(),
            ));
        }
        let req = witness_request_from(&c.pres, &torus_outcome)?;
        let witness = witness_degeneration(c, &req, seed)?;
        (false, torus_outcome.summand_count, witness)
    };
    Ok(DegenerationReport {
        dim_vector,
        layering,
        m,
        top_count: t,
        summand_count,
        orbit_dim,
        unipotent_maximal: uni,
        torus_maximal: torus,
        fully_maximal: false,
        certificate: Certificate::Witness(witness),
    })
}

/// The unique split point with descending ideals in the Aut(T)-orbit of a
/// maximal point.
pub fn moduli_normal_form(c: &SubmodulePoint, seed: u64) -> Result<SubmodulePoint, Error> {
    let report = check_maximal(c, seed)?;
    match report.certificate {
        Certificate::Flag(cert) => Ok(cert.normal_form),
        Certificate::Witness(_) => Err(Error::NotMaximal(
            "normal form requires a point with no proper top-stable degenerations".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::presentation::fixtures::*;
    use crate::rep::{dominance_compare, Dominance};
    use std::sync::Arc;

    fn loop_arrow_jz2() -> (Arc<ProjectivePresentation>, SubmodulePoint) {
        let f = Field::Rational;
        let alg = loop_arrow(f);
        let pres = ProjectivePresentation::new(alg, vec![0, 0]).unwrap();
        let c = SubmodulePoint::spin(
            pres.clone(),
            &[path_vec(&pres, "w", 1), path_vec(&pres, "a", 1)],
        )
        .unwrap();
        (pres, c)
    }

    fn a2_jz2() -> (Arc<ProjectivePresentation>, SubmodulePoint) {
        let f = Field::Rational;
        let alg = a2(f);
        let pres = ProjectivePresentation::new(alg, vec![0, 0]).unwrap();
        let c = SubmodulePoint::spin(pres.clone(), &[path_vec(&pres, "a", 1)]).unwrap();
        (pres, c)
    }

    #[test]
    fn m_values() {
        let (pres, c) = loop_arrow_jz2();
        assert_eq!(unipotent_orbit_dim(&c).unwrap(), 1);
        // C = JP has m = 0
        let jp = SubmodulePoint::spin(pres.clone(), &pres.radical_power(1).rows()).unwrap();
        assert_eq!(unipotent_orbit_dim(&jp).unwrap(), 0);
        let (_, a2c) = a2_jz2();
        assert_eq!(unipotent_orbit_dim(&a2c).unwrap(), 0);
    }

    #[test]
    fn m_equals_tangent_rank() {
        let (_, c) = loop_arrow_jz2();
        assert_eq!(
            unipotent_orbit_dim(&c).unwrap(),
            unipotent_tangent_rank(&c).unwrap()
        );
        let (_, a2c) = a2_jz2();
        assert_eq!(
            unipotent_orbit_dim(&a2c).unwrap(),
            unipotent_tangent_rank(&a2c).unwrap()
        );
    }

    #[test]
    fn orbit_dims() {
        let (_, a2c) = a2_jz2();
        assert_eq!(orbit_dimension(&a2c).unwrap(), 1);
        let (pres, _) = loop_arrow_jz2();
        let jp = SubmodulePoint::spin(pres.clone(), &pres.radical_power(1).rows()).unwrap();
        assert_eq!(orbit_dimension(&jp).unwrap(), 0);
    }

    #[test]
    fn torus_orbit_dims() {
        let f = Field::Rational;
        // indecomposable Kronecker module: any maximal torus orbit has dim t−1
        let alg = kronecker(f);
        let pres = ProjectivePresentation::new(alg, vec![0, 0]).unwrap();
        let gen = add_vecs(f, &path_vec(&pres, "a", 0), &path_vec(&pres, "b", 1));
        let c = SubmodulePoint::spin(pres.clone(), &[gen]).unwrap();
        let z_basis = vec![pres.top_vec(0), pres.top_vec(1)];
        assert_eq!(torus_orbit_dimension(&c, &z_basis).unwrap(), 1);
        // split Kronecker point under the torus of (z1+z2, z2)
        let c2 = SubmodulePoint::spin(
            pres.clone(),
            &[path_vec(&pres, "a", 0), path_vec(&pres, "b", 1)],
        )
        .unwrap();
        let y = vec![
            add_vecs(f, &pres.top_vec(0), &pres.top_vec(1)),
            pres.top_vec(1),
        ];
        assert_eq!(torus_orbit_dimension(&c2, &y).unwrap(), 1);
        // JP under the distinguished basis is weight-homogeneous
        let (p2, _) = loop_arrow_jz2();
        let jp = SubmodulePoint::spin(p2.clone(), &p2.radical_power(1).rows()).unwrap();
        let zb = vec![p2.top_vec(0), p2.top_vec(1)];
        assert_eq!(torus_orbit_dimension(&jp, &zb).unwrap(), 0);
    }

    #[test]
    fn unipotent_check_examples() {
        // loewy length 2: every point is unipotent-maximal
        let f = Field::Rational;
        let kr = kronecker(f);
        let pres = ProjectivePresentation::new(kr, vec![0, 0]).unwrap();
        let c = SubmodulePoint::spin(
            pres.clone(),
            &[path_vec(&pres, "a", 0), path_vec(&pres, "b", 1)],
        )
        .unwrap();
        assert!(unipotent_maximal(&c).unwrap());
        // loop-arrow Jz2 is not
        let (_, c2) = loop_arrow_jz2();
        assert!(!unipotent_maximal(&c2).unwrap());
        // local module Λe1/Λa over the loop-arrow algebra: m = 1
        let alg = loop_arrow(f);
        let p1 = ProjectivePresentation::new(alg, vec![0]).unwrap();
        let la = SubmodulePoint::spin(p1.clone(), &[path_vec(&p1, "a", 0)]).unwrap();
        assert_eq!(unipotent_orbit_dim(&la).unwrap(), 1);
        assert!(!unipotent_maximal(&la).unwrap());
    }

    #[test]
    fn torus_check_examples() {
        let f = Field::Rational;
        // local module: trivially torus-maximal
        let alg = loop_arrow(f);
        let p1 = ProjectivePresentation::new(alg.clone(), vec![0]).unwrap();
        let la = SubmodulePoint::spin(p1.clone(), &[path_vec(&p1, "a", 0)]).unwrap();
        assert!(torus_maximal(&la, 0).unwrap().maximal);
        // loop-arrow M = Λe1 ⊕ S1 fails via the loop
        let (_, c) = loop_arrow_jz2();
        let out = torus_maximal(&c, 0).unwrap();
        assert!(!out.maximal);
        assert!(matches!(
            out.failure,
            Some(TorusFailure::Invariance { .. })
        ));
    }

    #[test]
    fn crossed_pair_torus_check() {
        let f = Field::Rational;
        let alg = crossed_pair(f);
        // M = S1^2 ⊕ (Λe2)^2 over tops (1,1,2,2)
        let pres = ProjectivePresentation::new(alg.clone(), vec![0, 0, 1, 1]).unwrap();
        let c = SubmodulePoint::spin(
            pres.clone(),
            &[
                path_vec(&pres, "a", 0),
                path_vec(&pres, "b*a", 0),
                path_vec(&pres, "a", 1),
                path_vec(&pres, "b*a", 1),
            ],
        )
        .unwrap();
        let out = torus_maximal(&c, 0).unwrap();
        assert!(!out.maximal);
        // each part alone is torus-maximal
        let p_s1 = ProjectivePresentation::new(alg.clone(), vec![0, 0]).unwrap();
        let m1 = SubmodulePoint::spin(
            p_s1.clone(),
            &[
                path_vec(&p_s1, "a", 0),
                path_vec(&p_s1, "a", 1),
            ],
        )
        .unwrap();
        assert!(torus_maximal(&m1, 0).unwrap().maximal);
        let p_e2 = ProjectivePresentation::new(alg, vec![1, 1]).unwrap();
        let m2 = SubmodulePoint::spin(p_e2, &[]).unwrap();
        assert!(torus_maximal(&m2, 0).unwrap().maximal);
    }

    #[test]
    fn maximal_check_a2() {
        let (_, c) = a2_jz2();
        let report = check_maximal(&c, 0).unwrap();
        assert!(report.fully_maximal);
        assert_eq!(report.orbit_dim, 1);
        match &report.certificate {
            Certificate::Flag(f) => {
                assert_eq!(f.flag_dim, 1);
                assert_eq!(f.jump_sizes, vec![(0usize, vec![1usize, 1])]);
            }
            _ => panic!("expected flag certificate"),
        }
    }

    #[test]
    fn maximal_check_loop_arrow_fails_with_unipotent_witness() {
        let (pres, c) = loop_arrow_jz2();
        let report = check_maximal(&c, 0).unwrap();
        assert!(!report.fully_maximal);
        assert!(!report.unipotent_maximal);
        match &report.certificate {
            Certificate::Witness(w) => {
                assert_eq!(w.mode, WitnessMode::Unipotent);
                let expected = SubmodulePoint::spin(
                    pres.clone(),
                    &[path_vec(&pres, "a*w", 0), path_vec(&pres, "w", 1)],
                )
                .unwrap();
                assert_eq!(w.limit.space, expected.space);
                // dominance strictly increases along the proper unipotent
                // degeneration
                let before = QuotientRepresentation::new(&c).unwrap().radical_layering();
                let after = QuotientRepresentation::new(&w.limit)
                    .unwrap()
                    .radical_layering();
                assert_eq!(
                    dominance_compare(&before, &after).unwrap(),
                    Dominance::StrictlyLess
                );
            }
            _ => panic!("expected witness"),
        }
    }

    #[test]
    fn stabilizer_algebra_is_unital_and_closed() {
        let f = Field::Rational;
        let (_, c) = a2_jz2();
        let basis = stabilizer_top_algebra(&c).unwrap();
        let t = c.pres.top_count();
        let span = {
            let rows: Vec<Vec<crate::field::Scalar>> = basis
                .iter()
                .map(|m| {
                    let mut flat = Vec::new();
                    for i in 0..t {
                        flat.extend(m.row(i));
                    }
                    flat
                })
                .collect();
            Subspace::from_rows(f, t * t, rows).unwrap()
        };
        let flat = |m: &Matrix| {
            let mut v = Vec::new();
            for i in 0..t {
                v.extend(m.row(i));
            }
            v
        };
        assert!(span.contains_vec(&flat(&Matrix::identity(f, t))));
        for a in &basis {
            for b in &basis {
                assert!(span.contains_vec(&flat(&a.mul(b))));
            }
        }
    }

    #[test]
    fn normal_form_a2_swaps_to_descending() {
        let (pres, c) = a2_jz2();
        let nf = moduli_normal_form(&c, 0).unwrap();
        let jz1 = SubmodulePoint::spin(pres.clone(), &[path_vec(&pres, "a", 0)]).unwrap();
        assert_eq!(nf.space, jz1.space);
        // idempotence
        let again = moduli_normal_form(&nf, 0).unwrap();
        assert_eq!(again.space, nf.space);
        // non-maximal input is rejected
        let (_, bad) = loop_arrow_jz2();
        assert!(matches!(
            moduli_normal_form(&bad, 0),
            Err(Error::NotMaximal(_))
        ));
    }

    #[test]
    fn kronecker_incomparable_witness_limit() {
        let f = Field::Rational;
        let alg = kronecker(f);
        let pres = ProjectivePresentation::new(alg, vec![0, 0]).unwrap();
        let c = SubmodulePoint::spin(
            pres.clone(),
            &[path_vec(&pres, "a", 0), path_vec(&pres, "b", 1)],
        )
        .unwrap();
        let report = check_maximal(&c, 0).unwrap();
        assert!(!report.fully_maximal);
        assert!(report.unipotent_maximal);
        assert!(!report.torus_maximal);
        match &report.certificate {
            Certificate::Witness(w) => {
                assert_eq!(w.mode, WitnessMode::IncomparablePair);
                let jz2 = SubmodulePoint::spin(
                    pres.clone(),
                    &[path_vec(&pres, "a", 1), path_vec(&pres, "b", 1)],
                )
                .unwrap();
                assert_eq!(w.limit.space, jz2.space);
            }
            _ => panic!("expected witness"),
        }
    }

    #[test]
    fn torque_witness_with_equal_ideals() {
        // both tops carry the same ideal Λa and the loop moves it out
        let f = Field::Rational;
        let alg = loop_arrow(f);
        let pres = ProjectivePresentation::new(alg, vec![0, 0]).unwrap();
        let c = SubmodulePoint::spin(
            pres.clone(),
            &[path_vec(&pres, "a", 0), path_vec(&pres, "a", 1)],
        )
        .unwrap();
        let out = torus_maximal(&c, 0).unwrap();
        assert!(!out.maximal);
        let req = witness_request_from(&pres, &out).unwrap();
        let w = witness_degeneration(&c, &req, 0).unwrap();
        assert_eq!(w.mode, WitnessMode::SameVertexTorque);
        assert_eq!(w.limit.dim(), c.dim());
    }

    #[test]
    fn torque_witness_limit_matches_unipotent_one() {
        let (pres, c) = loop_arrow_jz2();
        let out = torus_maximal(&c, 0).unwrap();
        let req = witness_request_from(&pres, &out).unwrap();
        let w = witness_degeneration(&c, &req, 0).unwrap();
        assert_eq!(w.mode, WitnessMode::SameVertexTorque);
        let expected = SubmodulePoint::spin(
            pres.clone(),
            &[path_vec(&pres, "a*w", 0), path_vec(&pres, "w", 1)],
        )
        .unwrap();
        assert_eq!(w.limit.space, expected.space);
    }
}
