//! One-parameter curve families g_τ in Aut_Λ(P) with Laurent-polynomial
//! coefficients, and their exact flat limits at τ → ∞.
//!
//! A Λ-linear family is determined by the images g_τ(z_r) = Σ_s u_{sr}(τ)z_s
//! with u_{sr} ∈ e(r)Λe(s). The limit substitutes s = 1/τ, scales every
//! image vector into the polynomial ring with a nonzero value at s = 0, and
//! saturates: while the evaluations at s = 0 are dependent, a dependent
//! combination is replaced by its s-quotient.

use crate::algebra::AlgebraElement;
use crate::field::Scalar;
use crate::linalg::{Matrix, Subspace};
use crate::presentation::{ProjectivePresentation, SubmodulePoint};
use crate::quiver::Path;
use crate::Error;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Laurent polynomial in τ with algebra-element coefficients.
pub type LaurentAlg = BTreeMap<i64, AlgebraElement>;

fn lau_zero() -> LaurentAlg {
    BTreeMap::new()
}

fn lau_constant(u: AlgebraElement) -> LaurentAlg {
    let mut m = lau_zero();
    if !u.is_zero() {
        m.insert(0, u);
    }
    m
}

pub struct CurveFamily {
    pub pres: Arc<ProjectivePresentation>,
    /// images[r][s] = u_{sr}(τ): the z_s-component of g_τ(z_r)
    pub images: Vec<Vec<LaurentAlg>>,
}

type UMat = Vec<Vec<AlgebraElement>>;

fn umat_identity(pres: &ProjectivePresentation) -> UMat {
    let alg = &pres.algebra;
    let t = pres.top_count();
    (0..t)
        .map(|r| {
            (0..t)
                .map(|s| {
                    if r == s {
                        let e = Path::idempotent(pres.tops[r]);
                        alg.unit_of(alg.basis_index_of(&e).unwrap())
                    } else {
                        AlgebraElement::zero()
                    }
                })
                .collect()
        })
        .collect()
}

/// (g∘f)[r][s] = Σ_m f[r][m]·g[m][s], products taken first-f-then-g wise.
fn umat_compose(pres: &ProjectivePresentation, g: &UMat, f: &UMat) -> UMat {
    let alg = &pres.algebra;
    let t = pres.top_count();
    (0..t)
        .map(|r| {
            (0..t)
                .map(|s| {
                    let mut acc = AlgebraElement::zero();
                    for m in 0..t {
                        let prod = alg.multiply(&f[r][m], &g[m][s]);
                        acc = alg.add_elem(&acc, &prod);
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

fn umat_sub(pres: &ProjectivePresentation, a: &UMat, b: &UMat) -> UMat {
    let alg = &pres.algebra;
    let f = pres.field();
    a.iter()
        .zip(b)
        .map(|(ra, rb)| {
            ra.iter()
                .zip(rb)
                .map(|(x, y)| alg.add_elem(x, &alg.scale_elem(&f.from_i64(-1), y)))
                .collect()
        })
        .collect()
}

type LUMat = Vec<Vec<LaurentAlg>>;

fn lumat_from(u: &UMat) -> LUMat {
    u.iter()
        .map(|row| row.iter().map(|x| lau_constant(x.clone())).collect())
        .collect()
}

fn lumat_compose(pres: &ProjectivePresentation, g: &LUMat, f: &LUMat) -> LUMat {
    let alg = &pres.algebra;
    let t = pres.top_count();
    (0..t)
        .map(|r| {
            (0..t)
                .map(|s| {
                    let mut acc: LaurentAlg = lau_zero();
                    for m in 0..t {
                        for (e1, u1) in &f[r][m] {
                            for (e2, u2) in &g[m][s] {
                                let prod = alg.multiply(u1, u2);
                                if prod.is_zero() {
                                    continue;
                                }
                                let slot =
                                    acc.entry(e1 + e2).or_insert_with(AlgebraElement::zero);
                                *slot = alg.add_elem(slot, &prod);
                            }
                        }
                    }
                    acc.retain(|_, v| !v.is_zero());
                    acc
                })
                .collect()
        })
        .collect()
}

impl CurveFamily {
    /// g_τ = id_P + τ·f for a Λ-linear map with f(P) ⊆ JP; `f_images[r]` is
    /// f(z_r).
    pub fn unipotent(
        pres: Arc<ProjectivePresentation>,
        f_images: &[Vec<Scalar>],
    ) -> Result<CurveFamily, Error> {
        let jp = pres.radical_power(1);
        for img in f_images {
            if !jp.contains_vec(img) {
                return Err(Error::BadInput(
                    "unipotent curve requires f(P) inside the radical of P".into(),
                ));
            }
        }
        let t = pres.top_count();
        let alg = pres.algebra.clone();
        let mut images: LUMat = lumat_from(&umat_identity(&pres));
        for r in 0..t {
            let comps = pres.components(&f_images[r]);
            for (s, u) in comps.into_iter().enumerate() {
                if u.is_zero() {
                    continue;
                }
                let slot = images[r][s].entry(1).or_insert_with(AlgebraElement::zero);
                *slot = alg.add_elem(slot, &u);
            }
        }
        Ok(CurveFamily { pres, images })
    }

    /// The torus of a top-element sequence, acting with τ^{weights[r]} on
    /// its r-th member, expressed back in the distinguished coordinates.
    pub fn torus(
        pres: Arc<ProjectivePresentation>,
        top_basis: &[Vec<Scalar>],
        weights: &[i64],
    ) -> Result<CurveFamily, Error> {
        let t = pres.top_count();
        if top_basis.len() != t || weights.len() != t {
            return Err(Error::BadInput(
                "torus curve needs one basis member and one weight per top".into(),
            ));
        }
        validate_top_basis(&pres, top_basis)?;
        let alg = pres.algebra.clone();
        let f = pres.field();
        // Y: z_r ↦ y_r as a u-matrix
        let y_mat: UMat = (0..t).map(|r| pres.components(&top_basis[r])).collect();
        let idem_idx =
            |s: usize| alg.basis_index_of(&Path::idempotent(pres.tops[s])).unwrap();
        let mut a_mat = Matrix::zero(f, t, t);
        for r in 0..t {
            for s in 0..t {
                let c = y_mat[r][s]
                    .coeffs
                    .get(&idem_idx(s))
                    .cloned()
                    .unwrap_or_else(|| f.zero());
                a_mat.set(s, r, c);
            }
        }
        let a_inv = a_mat
            .inverse()
            .ok_or_else(|| Error::BadInput("top basis is dependent modulo JP".into()))?;
        let scalar_umat = |m: &Matrix| -> UMat {
            (0..t)
                .map(|r| {
                    (0..t)
                        .map(|s| {
                            let mut u = AlgebraElement::zero();
                            let c = m.get(s, r).clone();
                            if !f.is_zero(&c) {
                                u.coeffs.insert(idem_idx(s), c);
                            }
                            u
                        })
                        .collect()
                })
                .collect()
        };
        let a_umat = scalar_umat(&a_mat);
        let a_inv_umat = scalar_umat(&a_inv);
        let n_umat = umat_sub(&pres, &y_mat, &a_umat);
        // Y = A∘(id + B) with B = A^{-1}∘N nilpotent, so
        // Y^{-1} = (Σ (−B)^k) ∘ A^{-1}
        let b = umat_compose(&pres, &a_inv_umat, &n_umat);
        let mut series = umat_identity(&pres);
        let mut power = umat_identity(&pres);
        let minus_one = f.from_i64(-1);
        for _ in 0..alg.loewy_length {
            power = umat_compose(&pres, &b, &power);
            power = power
                .iter()
                .map(|row| row.iter().map(|x| alg.scale_elem(&minus_one, x)).collect())
                .collect();
            if power.iter().all(|row| row.iter().all(|x| x.is_zero())) {
                break;
            }
            series = series
                .iter()
                .zip(&power)
                .map(|(ra, rb)| {
                    ra.iter().zip(rb).map(|(x, y)| alg.add_elem(x, y)).collect()
                })
                .collect();
        }
        let y_inv = umat_compose(&pres, &series, &a_inv_umat);
        debug_assert!(umat_compose(&pres, &y_mat, &y_inv) == umat_identity(&pres));
        let d_l: LUMat = (0..t)
            .map(|r| {
                (0..t)
                    .map(|s| {
                        let mut m = lau_zero();
                        if r == s {
                            m.insert(weights[r], alg.unit_of(idem_idx(r)));
                        }
                        m
                    })
                    .collect()
            })
            .collect();
        let y_l = lumat_from(&y_mat);
        let y_inv_l = lumat_from(&y_inv);
        let dyinv = lumat_compose(&pres, &d_l, &y_inv_l);
        let images = lumat_compose(&pres, &y_l, &dyinv);
        Ok(CurveFamily { pres, images })
    }

    pub fn constant(pres: Arc<ProjectivePresentation>) -> CurveFamily {
        let images = lumat_from(&umat_identity(&pres));
        CurveFamily { pres, images }
    }

    /// g_{cτ}: multiplies the coefficient at τ^e by c^e.
    pub fn reparametrize(&self, c: &Scalar) -> CurveFamily {
        let alg = &self.pres.algebra;
        let f = self.pres.field();
        let images = self
            .images
            .iter()
            .map(|row| {
                row.iter()
                    .map(|lau| {
                        lau.iter()
                            .map(|(e, u)| {
                                let mut factor = f.one();
                                for _ in 0..e.unsigned_abs() {
                                    factor = f.mul(&factor, c);
                                }
                                if *e < 0 {
                                    factor = f.inv(&factor).unwrap();
                                }
                                (*e, alg.scale_elem(&factor, u))
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        CurveFamily {
            pres: self.pres.clone(),
            images,
        }
    }

    /// Applies g_τ to a vector of P: exponent → P-vector.
    pub fn apply(&self, v: &[Scalar]) -> BTreeMap<i64, Vec<Scalar>> {
        let pres = &self.pres;
        let f = pres.field();
        let alg = &pres.algebra;
        let comps = pres.components(v);
        let mut out: BTreeMap<i64, Vec<Scalar>> = BTreeMap::new();
        for (r, u) in comps.iter().enumerate() {
            if u.is_zero() {
                continue;
            }
            for (s, lau) in self.images[r].iter().enumerate() {
                for (e, w) in lau {
                    let prod = alg.multiply(u, w);
                    if prod.is_zero() {
                        continue;
                    }
                    let vec = pres.embed(&prod, s);
                    let slot = out.entry(*e).or_insert_with(|| pres.zero_vec());
                    for i in 0..vec.len() {
                        slot[i] = f.add(&slot[i], &vec[i]);
                    }
                }
            }
        }
        out.retain(|_, vec| vec.iter().any(|x| !f.is_zero(x)));
        out
    }

    /// The induced matrix on P at a numeric parameter value.
    pub fn evaluate(&self, tau: &Scalar) -> Result<Matrix, Error> {
        let pres = &self.pres;
        let f = pres.field();
        let mut m = Matrix::zero(f, pres.dim(), pres.dim());
        for k in 0..pres.dim() {
            let mut v = pres.zero_vec();
            v[k] = f.one();
            let img = self.apply(&v);
            for (e, vec) in img {
                let mut factor = f.one();
                for _ in 0..e.unsigned_abs() {
                    factor = f.mul(&factor, tau);
                }
                if e < 0 {
                    factor = f.inv(&factor)?;
                }
                for (i, x) in vec.iter().enumerate() {
                    if !f.is_zero(x) {
                        let val = f.add(m.get(i, k), &f.mul(&factor, x));
                        m.set(i, k, val);
                    }
                }
            }
        }
        Ok(m)
    }

    /// Certifies that the determinant is a nonzero Laurent polynomial by
    /// sampling.
    pub fn generically_invertible(&self) -> Result<(), Error> {
        let f = self.pres.field();
        for sample in [1i64, 2] {
            let tau = f.from_i64(sample);
            if let Ok(m) = self.evaluate(&tau) {
                if !f.is_zero(&m.det()) {
                    return Ok(());
                }
            }
        }
        Err(Error::DegenerateCurve(
            "curve is singular at the sampled parameters".into(),
        ))
    }

    /// One line per top: "z1 -> 1 z1 + 1 t^1 w z2" style.
    pub fn display(&self) -> Vec<String> {
        let pres = &self.pres;
        let alg = &pres.algebra;
        let f = pres.field();
        (0..pres.top_count())
            .map(|r| {
                let mut parts = Vec::new();
                for (s, lau) in self.images[r].iter().enumerate() {
                    for (e, u) in lau {
                        for (i, c) in &u.coeffs {
                            let path = alg.basis_path(*i);
                            let mut term = f.fmt_scalar(c);
                            if *e != 0 {
                                term.push_str(&format!(" t^{e}"));
                            }
                            if !path.is_idempotent() {
                                term.push_str(&format!(" {}", path.display(&alg.quiver)));
                            }
                            term.push_str(&format!(" z{}", s + 1));
                            parts.push(term);
                        }
                    }
                }
                format!(
                    "z{} -> {}",
                    r + 1,
                    if parts.is_empty() {
                        "0".to_string()
                    } else {
                        parts.join(" + ")
                    }
                )
            })
            .collect()
    }
}

fn validate_top_basis(
    pres: &Arc<ProjectivePresentation>,
    top_basis: &[Vec<Scalar>],
) -> Result<(), Error> {
    let f = pres.field();
    for (r, y) in top_basis.iter().enumerate() {
        if y.len() != pres.dim() {
            return Err(Error::DimensionMismatch("top basis vector".into()));
        }
        for (k, c) in y.iter().enumerate() {
            if !f.is_zero(c) && pres.basis_vertex(k) != pres.tops[r] {
                return Err(Error::BadInput(format!(
                    "top basis member {} is not normed by its idempotent",
                    r + 1
                )));
            }
        }
    }
    Ok(())
}

/// Flat limit lim_{τ→∞} g_τ(C), by saturation in s = 1/τ.
pub fn flat_limit(curve: &CurveFamily, c: &SubmodulePoint) -> Result<SubmodulePoint, Error> {
    let pres = curve.pres.clone();
    let f = pres.field();
    curve.generically_invertible()?;
    if c.dim() == 0 {
        return Ok(c.clone());
    }
    let mut polys: Vec<BTreeMap<i64, Vec<Scalar>>> = Vec::new();
    let mut max_deg = 0i64;
    for row in c.space.rows() {
        let in_tau = curve.apply(&row);
        let min_key = in_tau.keys().map(|e| -e).min().expect("nonzero image");
        let p: BTreeMap<i64, Vec<Scalar>> =
            in_tau.into_iter().map(|(e, v)| (-e - min_key, v)).collect();
        max_deg = max_deg.max(p.keys().max().copied().unwrap_or(0));
        polys.push(p);
    }
    let eval0 = |p: &BTreeMap<i64, Vec<Scalar>>| -> Vec<Scalar> {
        p.get(&0).cloned().unwrap_or_else(|| pres.zero_vec())
    };
    let budget = c.dim() * (max_deg as usize + 2) + c.dim() + 4;
    for _ in 0..budget {
        let k = polys.len();
        let mut aug = Matrix::zero(f, k, pres.dim() + k);
        for (i, p) in polys.iter().enumerate() {
            let v = eval0(p);
            for (j, x) in v.into_iter().enumerate() {
                aug.set(i, j, x);
            }
            aug.set(i, pres.dim() + i, f.one());
        }
        aug.rref();
        let dependent_row =
            (0..k).find(|&i| (0..pres.dim()).all(|j| f.is_zero(aug.get(i, j))));
        let Some(zr) = dependent_row else {
            let rows: Vec<Vec<Scalar>> = polys.iter().map(&eval0).collect();
            let space = Subspace::from_rows(f, pres.dim(), rows)?;
            if space.dim() != c.dim() {
                return Err(Error::Internal("flat limit lost dimension".into()));
            }
            let out = SubmodulePoint::new(pres.clone(), space)
                .map_err(|_| Error::Internal("flat limit is not arrow stable".into()))?;
            if c.inside_radical && !out.inside_radical {
                return Err(Error::Internal("flat limit left the radical".into()));
            }
            return Ok(out);
        };
        let lambda: Vec<Scalar> = (0..k)
            .map(|i| aug.get(zr, pres.dim() + i).clone())
            .collect();
        let mut combo: BTreeMap<i64, Vec<Scalar>> = BTreeMap::new();
        for (i, lam) in lambda.iter().enumerate() {
            if f.is_zero(lam) {
                continue;
            }
            for (e, v) in &polys[i] {
                let slot = combo.entry(*e).or_insert_with(|| pres.zero_vec());
                for j in 0..v.len() {
                    slot[j] = f.add(&slot[j], &f.mul(lam, &v[j]));
                }
            }
        }
        combo.retain(|_, v| v.iter().any(|x| !f.is_zero(x)));
        if combo.is_empty() {
            return Err(Error::Internal(
                "flat limit produced the zero combination".into(),
            ));
        }
        let val = combo.keys().min().copied().unwrap();
        debug_assert!(val > 0);
        let shifted: BTreeMap<i64, Vec<Scalar>> =
            combo.into_iter().map(|(e, v)| (e - val, v)).collect();
        let replace = (0..k).rev().find(|&i| !f.is_zero(&lambda[i])).unwrap();
        polys[replace] = shifted;
    }
    Err(Error::Internal(
        "flat limit saturation exceeded its iteration bound".into(),
    ))
}

/// Keeps the submodule generated by the selected tops and scales the rest
/// away: the limit is (C ∩ Q) ⊕ pr(C), certified against the matching
/// torus-curve flat limit.
pub fn split_by_submodule(c: &SubmodulePoint, keep: &[usize]) -> Result<SubmodulePoint, Error> {
    let pres = c.pres.clone();
    let t = pres.top_count();
    for &r in keep {
        if r >= t {
            return Err(Error::BadInput("selected top index out of range".into()));
        }
    }
    let rest: Vec<usize> = (0..t).filter(|r| !keep.contains(r)).collect();
    // top-stable embedding JU = U ∩ JM, verified upstairs in P
    let q = pres.tops_block(keep);
    let jp = pres.radical_power(1);
    let jq = q.intersect(&jp)?;
    let ju = jq.sum(&c.space)?;
    let u_cap_jm = q.sum(&c.space)?.intersect(&jp.sum(&c.space)?)?;
    if ju != u_cap_jm {
        return Err(Error::BadInput(
            "selected tops do not generate a top-stably embedded submodule".into(),
        ));
    }
    let c_cap_q = c.space.intersect(&q)?;
    let projected: Vec<Vec<Scalar>> = c
        .space
        .rows()
        .into_iter()
        .map(|row| pres.project_tops(&row, &rest))
        .collect();
    let mut rows = c_cap_q.rows();
    rows.extend(projected);
    let space = Subspace::from_rows(pres.field(), pres.dim(), rows)?;
    let direct = SubmodulePoint::new(pres.clone(), space)?;
    let basis: Vec<Vec<Scalar>> = (0..t).map(|r| pres.top_vec(r)).collect();
    let weights: Vec<i64> = (0..t)
        .map(|r| if keep.contains(&r) { 0 } else { 1 })
        .collect();
    let curve = CurveFamily::torus(pres.clone(), &basis, &weights)?;
    let lim = flat_limit(&curve, c)?;
    if lim.space != direct.space {
        return Err(Error::Internal(
            "split limit disagrees with the torus-curve flat limit".into(),
        ));
    }
    Ok(direct)
}

/// Full split along a top-element sequence: the flat limit of the torus
/// curve with strictly descending weights. The output decomposes as
/// ⊕_r (C' ∩ Λy_r), which is asserted.
pub fn full_local_split(
    c: &SubmodulePoint,
    top_basis: &[Vec<Scalar>],
) -> Result<SubmodulePoint, Error> {
    let pres = c.pres.clone();
    let t = pres.top_count();
    let weights: Vec<i64> = (0..t).map(|r| (t - 1 - r) as i64).collect();
    let curve = CurveFamily::torus(pres.clone(), top_basis, &weights)?;
    let out = flat_limit(&curve, c)?;
    let alg = &pres.algebra;
    let mut split_total = 0;
    for y in top_basis {
        let rows: Vec<Vec<Scalar>> = (0..alg.dim())
            .map(|i| pres.act(&alg.unit_of(i), y))
            .collect();
        let lambda_y = Subspace::from_rows(pres.field(), pres.dim(), rows)?;
        split_total += out.space.intersect(&lambda_y)?.dim();
    }
    if split_total != out.dim() {
        return Err(Error::Internal(
            "full local split is not split along the given basis".into(),
        ));
    }
    Ok(out)
}
