//! Path bases, Schubert-chart membership, and polynomial chart equations
//! for the submodule Grassmannian.
//!
//! A path basis σ is a set of normal-form paths of P containing every top
//! and hitting each vertex d_i times; its chart consists of the points C
//! with P = C ⊕ span σ. On the chart, every non-member path q is congruent
//! to Σ_b x[q;b]·b mod C, and the emitted polynomial system states that the
//! relations and the truncation paths annihilate the symbolic
//! representation and that the action is self-consistent.

use crate::field::Scalar;
use crate::linalg::{Matrix, Subspace};
use crate::poly::MPoly;
use crate::presentation::{ProjectivePresentation, SubmodulePoint};
use crate::Error;
use std::collections::BTreeMap;
use std::sync::Arc;

/// A path basis, stored as the P-basis columns of its members.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathBasis {
    pub cols: Vec<usize>,
}

impl PathBasis {
    pub fn display(&self, pres: &ProjectivePresentation) -> String {
        self.cols
            .iter()
            .map(|&k| col_name(pres, k))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

pub fn col_name(pres: &ProjectivePresentation, k: usize) -> String {
    let (p_idx, r) = pres.basis[k];
    let p = pres.algebra.basis_path(p_idx);
    if p.is_idempotent() {
        format!("z{}", r + 1)
    } else {
        format!("{}*z{}", p.display(&pres.algebra.quiver), r + 1)
    }
}

fn top_columns(pres: &ProjectivePresentation) -> Vec<usize> {
    (0..pres.dim())
        .filter(|&k| pres.basis_path_len(k) == 0)
        .collect()
}

/// All path bases with the given dimension vector, in deterministic order.
/// Closing under left truncation is optional.
pub fn enumerate_path_bases(
    pres: &Arc<ProjectivePresentation>,
    d: &[usize],
    truncation_closed: bool,
) -> Result<Vec<PathBasis>, Error> {
    let n = pres.algebra.quiver.vertex_count();
    if d.len() != n {
        return Err(Error::BadInput("dimension vector length mismatch".into()));
    }
    if d.iter().sum::<usize>() > pres.dim() {
        return Err(Error::BadInput("dimension vector exceeds dim P".into()));
    }
    let tops = top_columns(pres);
    let mut need = d.to_vec();
    for &k in &tops {
        let v = pres.basis_vertex(k);
        if need[v] == 0 {
            return Ok(Vec::new());
        }
        need[v] -= 1;
    }
    // remaining members chosen per vertex among the positive-length columns
    let mut per_vertex: Vec<Vec<usize>> = vec![Vec::new(); n];
    for k in 0..pres.dim() {
        if pres.basis_path_len(k) >= 1 {
            per_vertex[pres.basis_vertex(k)].push(k);
        }
    }
    // combinations per vertex, then cartesian product
    fn combos(pool: &[usize], k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![Vec::new()];
        }
        if pool.len() < k {
            return Vec::new();
        }
        let mut out = Vec::new();
        for (i, &first) in pool.iter().enumerate() {
            for mut rest in combos(&pool[i + 1..], k - 1) {
                let mut v = vec![first];
                v.append(&mut rest);
                out.push(v);
            }
        }
        out
    }
    let mut per_vertex_choices: Vec<Vec<Vec<usize>>> = Vec::new();
    for v in 0..n {
        let choices = combos(&per_vertex[v], need[v]);
        if choices.is_empty() && need[v] > 0 {
            return Ok(Vec::new());
        }
        per_vertex_choices.push(choices);
    }
    let mut bases = vec![Vec::new()];
    for choices in per_vertex_choices {
        let mut next = Vec::new();
        for base in &bases {
            for choice in &choices {
                let mut b: Vec<usize> = base.clone();
                b.extend(choice.iter().copied());
                next.push(b);
            }
        }
        bases = next;
    }
    let mut out = Vec::new();
    for mut cols in bases {
        cols.extend(tops.iter().copied());
        cols.sort();
        let pb = PathBasis { cols };
        if truncation_closed && !is_truncation_closed(pres, &pb) {
            continue;
        }
        out.push(pb);
    }
    out.sort_by(|a, b| a.cols.cmp(&b.cols));
    Ok(out)
}

fn is_truncation_closed(pres: &ProjectivePresentation, pb: &PathBasis) -> bool {
    let alg = &pres.algebra;
    pb.cols.iter().all(|&k| {
        let (p_idx, r) = pres.basis[k];
        let p = alg.basis_path(p_idx);
        (0..p.len()).all(|l| {
            let trunc = crate::quiver::Path {
                start: p.start,
                arrows: p.arrows[..l].to_vec(),
            };
            match alg.basis_index_of(&trunc) {
                Some(idx) => pb
                    .cols
                    .iter()
                    .any(|&c| pres.basis[c] == (idx, r)),
                None => false,
            }
        })
    })
}

/// True iff P = C ⊕ span σ.
pub fn chart_contains(c: &SubmodulePoint, sigma: &PathBasis) -> Result<bool, Error> {
    let pres = &c.pres;
    let f = pres.field();
    let tops = top_columns(pres);
    for &k in &tops {
        if !sigma.cols.contains(&k) {
            return Err(Error::BadInput(
                "path basis must contain every top element".into(),
            ));
        }
    }
    if c.dim() + sigma.cols.len() != pres.dim() {
        return Ok(false);
    }
    let mut rows = c.space.rows();
    for &k in &sigma.cols {
        let mut v = pres.zero_vec();
        v[k] = f.one();
        rows.push(v);
    }
    Ok(Matrix::from_rows(f, pres.dim(), rows)?.rank() == pres.dim())
}

/// The emitted polynomial system of one chart.
pub struct ChartSystem {
    pub sigma: PathBasis,
    /// variables x[q;b]: (non-member column, member column)
    pub vars: Vec<(usize, usize)>,
    pub polys: Vec<MPoly>,
    var_names: Vec<String>,
}

impl ChartSystem {
    pub fn var_name(&self, v: usize) -> String {
        self.var_names[v].clone()
    }

    /// Plain-text system: one declaration line, then one polynomial per line.
    pub fn emit(&self) -> String {
        let mut out = String::new();
        out.push_str("vars:");
        if self.vars.is_empty() {
            out.push_str(" (none)");
        } else {
            out.push(' ');
            out.push_str(&self.var_names.join(", "));
        }
        out.push('\n');
        let names = self.var_names.clone();
        let namer = move |v: usize| names[v].clone();
        for p in &self.polys {
            out.push_str(&p.to_integer_string(&namer));
            out.push('\n');
        }
        out
    }
}

/// Builds the polynomial system of Schu(σ): unknowns for every
/// (non-member path, member with matching end vertex and positive length),
/// symbolic arrow matrices on span σ, and the three equation groups.
pub fn chart_equations(
    pres: &Arc<ProjectivePresentation>,
    sigma: &PathBasis,
) -> Result<ChartSystem, Error> {
    let f = pres.field();
    let alg = pres.algebra.clone();
    let dim = pres.dim();
    let s_len = sigma.cols.len();
    let member_pos: BTreeMap<usize, usize> = sigma
        .cols
        .iter()
        .enumerate()
        .map(|(i, &c)| (c, i))
        .collect();
    let non_members: Vec<usize> = (0..dim).filter(|k| !member_pos.contains_key(k)).collect();
    let mut vars = Vec::new();
    let mut var_of: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for &q in &non_members {
        for &b in &sigma.cols {
            if pres.basis_vertex(b) == pres.basis_vertex(q) && pres.basis_path_len(b) >= 1 {
                var_of.insert((q, b), vars.len());
                vars.push((q, b));
            }
        }
    }
    let var_names: Vec<String> = vars
        .iter()
        .map(|&(q, b)| format!("x[{};{}]", col_name(pres, q), col_name(pres, b)))
        .collect();
    // symbolic reduction of a P-column into σ-coordinates
    let red_col = |k: usize| -> Vec<MPoly> {
        let mut out = vec![MPoly::zero(f); s_len];
        match member_pos.get(&k) {
            Some(&i) => out[i] = MPoly::constant(f, f.one()),
            None => {
                for (&(q, b), &v) in &var_of {
                    if q == k {
                        out[member_pos[&b]] = MPoly::var(f, v);
                    }
                }
            }
        }
        out
    };
    let red_vec = |v: &[Scalar]| -> Vec<MPoly> {
        let mut out = vec![MPoly::zero(f); s_len];
        for (k, c) in v.iter().enumerate() {
            if f.is_zero(c) {
                continue;
            }
            let rc = red_col(k);
            for i in 0..s_len {
                out[i] = out[i].add(&rc[i].scale(c));
            }
        }
        out
    };
    // symbolic arrow matrices on span σ
    let arrows = alg.quiver.arrows.len();
    let mut arrow_mats: Vec<Vec<Vec<MPoly>>> = Vec::new();
    for a in 0..arrows {
        let mut mat = Vec::new();
        for &b in &sigma.cols {
            let mut v = pres.zero_vec();
            v[b] = f.one();
            let img = pres.act_arrow(a, &v);
            mat.push(red_vec(&img));
        }
        arrow_mats.push(mat);
    }
    let mut polys: Vec<MPoly> = Vec::new();
    let mut push = |p: MPoly| {
        let p = p.normalized();
        if !p.is_zero() && !polys.contains(&p) {
            polys.push(p);
        }
    };
    // (consistency) red(a·q) = Σ_b x[q;b]·red(a·b)
    for &q in &non_members {
        let vq = pres.basis_vertex(q);
        for a in 0..arrows {
            if alg.quiver.arrows[a].source != vq {
                continue;
            }
            let mut v = pres.zero_vec();
            v[q] = f.one();
            let lhs = red_vec(&pres.act_arrow(a, &v));
            // rhs = Σ_b x[q;b] · (a acting on member b)
            let mut rhs = vec![MPoly::zero(f); s_len];
            for (&(qq, b), &varid) in &var_of {
                if qq != q {
                    continue;
                }
                let row = &arrow_mats[a][member_pos[&b]];
                let x = MPoly::var(f, varid);
                for i in 0..s_len {
                    rhs[i] = rhs[i].add(&row[i].mul(&x));
                }
            }
            for i in 0..s_len {
                push(lhs[i].sub(&rhs[i]));
            }
        }
    }
    // (relations annihilate) and (truncation paths annihilate)
    let apply_word = |word: &[usize], start_col: usize| -> Vec<MPoly> {
        let mut vec = vec![MPoly::zero(f); s_len];
        vec[start_col] = MPoly::constant(f, f.one());
        for &a in word {
            let mut next = vec![MPoly::zero(f); s_len];
            for (b, coeff) in vec.iter().enumerate() {
                if coeff.is_zero() {
                    continue;
                }
                let row = &arrow_mats[a][b];
                for i in 0..s_len {
                    next[i] = next[i].add(&row[i].mul(coeff));
                }
            }
            vec = next;
        }
        vec
    };
    for rel in &alg.relations {
        for (col_pos, &bcol) in sigma.cols.iter().enumerate() {
            if pres.basis_vertex(bcol) != rel.source() {
                continue;
            }
            let mut total = vec![MPoly::zero(f); s_len];
            for (cc, path) in &rel.terms {
                let part = apply_word(&path.arrows, col_pos);
                for i in 0..s_len {
                    total[i] = total[i].add(&part[i].scale(cc));
                }
            }
            for p in total {
                push(p);
            }
        }
    }
    // truncation words of length max_len + 1
    let words = truncation_words(pres, pres.algebra.max_len + 1);
    for w in words {
        let start = pres.algebra.quiver.arrows[w[0]].source;
        for (col_pos, &bcol) in sigma.cols.iter().enumerate() {
            if pres.basis_vertex(bcol) != start {
                continue;
            }
            for p in apply_word(&w, col_pos) {
                push(p);
            }
        }
    }
    let mut polys = polys;
    polys.sort_by_key(|p| {
        let names = var_names.clone();
        p.to_integer_string(&move |v| names[v].clone())
    });
    Ok(ChartSystem {
        sigma: sigma.clone(),
        vars,
        polys,
        var_names,
    })
}

fn truncation_words(pres: &ProjectivePresentation, len: usize) -> Vec<Vec<usize>> {
    let quiver = &pres.algebra.quiver;
    let mut words: Vec<Vec<usize>> = quiver
        .arrows
        .iter()
        .enumerate()
        .map(|(a, _)| vec![a])
        .collect();
    for _ in 1..len {
        let mut next = Vec::new();
        for w in &words {
            let end = quiver.arrows[*w.last().unwrap()].target;
            for a in quiver.arrows_from(end) {
                let mut ww = w.clone();
                ww.push(a);
                next.push(ww);
            }
        }
        words = next;
    }
    words.into_iter().filter(|w| w.len() == len).collect()
}

/// The point of the chart at a variable assignment:
/// C = span{ q − Σ_b x[q;b]·b }.
pub fn point_from_assignment(
    pres: &Arc<ProjectivePresentation>,
    system: &ChartSystem,
    assignment: &BTreeMap<usize, Scalar>,
) -> Result<SubmodulePoint, Error> {
    let f = pres.field();
    let members: Vec<usize> = system.sigma.cols.clone();
    let non_members: Vec<usize> = (0..pres.dim()).filter(|k| !members.contains(k)).collect();
    let mut rows = Vec::new();
    for &q in &non_members {
        let mut v = pres.zero_vec();
        v[q] = f.one();
        for (idx, &(qq, b)) in system.vars.iter().enumerate() {
            if qq == q {
                let x = assignment
                    .get(&idx)
                    .ok_or_else(|| Error::BadInput("assignment misses a variable".into()))?;
                v[b] = f.sub(&v[b], x);
            }
        }
        rows.push(v);
    }
    let space = Subspace::from_rows(f, pres.dim(), rows)?;
    SubmodulePoint::new(pres.clone(), space)
}

/// All solutions of a chart system over a small prime field, by sweep.
pub fn enumerate_solutions_fp(system: &ChartSystem, p: u64) -> Result<Vec<BTreeMap<usize, Scalar>>, Error> {
    let f = crate::field::Field::prime(p)?;
    let nv = system.vars.len();
    let total = (p as f64).powi(nv as i32);
    if total > 65536.0 {
        return Err(Error::BadInput("solution sweep too large".into()));
    }
    let mut out = Vec::new();
    let count = (p as usize).pow(nv as u32);
    for code in 0..count {
        let mut x = code;
        let assignment: BTreeMap<usize, Scalar> = (0..nv)
            .map(|i| {
                let v = f.from_i64((x % p as usize) as i64);
                x /= p as usize;
                (i, v)
            })
            .collect();
        if system.polys.iter().all(|poly| {
            let val = poly.eval(&assignment);
            f.is_zero(&val)
        }) {
            out.push(assignment);
        }
    }
    Ok(out)
}

/// Eliminates non-protected variables that occur as a lone linear monomial
/// of some equation and nowhere else in that equation; returns the reduced
/// system.
pub fn eliminate_linear(polys: &[MPoly], protected: &[usize]) -> Vec<MPoly> {
    let mut work: Vec<MPoly> = polys.to_vec();
    loop {
        let mut found: Option<(usize, usize, MPoly)> = None;
        'search: for (pi, p) in work.iter().enumerate() {
            let f = p.field;
            for (mono, coeff) in &p.terms {
                if mono.len() == 1 {
                    let (&v, &e) = mono.iter().next().unwrap();
                    if e == 1 && !protected.contains(&v) {
                        // v must not occur in any other monomial of p
                        let occurs_elsewhere = p
                            .terms
                            .iter()
                            .any(|(m2, _)| m2 != mono && m2.contains_key(&v));
                        if !occurs_elsewhere {
                            // v = −(rest)/coeff
                            let mut rest = p.clone();
                            rest.terms.remove(mono);
                            let inv = f.inv(coeff).unwrap();
                            let value = rest.scale(&f.neg(&inv));
                            found = Some((pi, v, value));
                            break 'search;
                        }
                    }
                }
            }
        }
        let Some((pi, v, value)) = found else {
            break;
        };
        work.remove(pi);
        let mut next: Vec<MPoly> = Vec::new();
        for p in work {
            let q = p.subst(v, &value).normalized();
            if !q.is_zero() && !next.contains(&q) {
                next.push(q);
            }
        }
        work = next;
    }
    // inter-reduce what is left
    loop {
        let mut changed = false;
        let mut i = 0;
        while i < work.len() {
            let mut r = work[i].clone();
            for (j, q) in work.iter().enumerate() {
                if i != j {
                    r = r.reduce_mod(q);
                }
            }
            let r = r.normalized();
            if r != work[i] {
                changed = true;
                if r.is_zero() {
                    work.remove(i);
                    continue;
                }
                work[i] = r;
            }
            i += 1;
        }
        if !changed {
            break;
        }
    }
    let mut dedup: Vec<MPoly> = Vec::new();
    for p in work {
        if !dedup.contains(&p) {
            dedup.push(p);
        }
    }
    dedup
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::presentation::fixtures::*;

    #[test]
    fn a2_single_top_unique_basis() {
        let f = Field::Rational;
        let alg = a2(f);
        let pres = ProjectivePresentation::new(alg, vec![0]).unwrap();
        let bases = enumerate_path_bases(&pres, &[1, 1], false).unwrap();
        assert_eq!(bases.len(), 1);
        assert_eq!(bases[0].cols.len(), 2);
    }

    #[test]
    fn a2_two_tops_two_bases() {
        let f = Field::Rational;
        let alg = a2(f);
        let pres = ProjectivePresentation::new(alg, vec![0, 0]).unwrap();
        let bases = enumerate_path_bases(&pres, &[2, 1], false).unwrap();
        assert_eq!(bases.len(), 2);
    }

    #[test]
    fn kronecker_two_bases() {
        let f = Field::Rational;
        let alg = kronecker(f);
        let pres = ProjectivePresentation::new(alg, vec![0]).unwrap();
        let bases = enumerate_path_bases(&pres, &[1, 1], false).unwrap();
        assert_eq!(bases.len(), 2);
    }

    #[test]
    fn membership_examples() {
        let f = Field::Rational;
        let alg = a2(f);
        let pres = ProjectivePresentation::new(alg, vec![0, 0]).unwrap();
        let c = SubmodulePoint::spin(pres.clone(), &[path_vec(&pres, "a", 1)]).unwrap();
        let bases = enumerate_path_bases(&pres, &[2, 1], false).unwrap();
        // σ with a*z1 contains C = Jz2, σ with a*z2 does not
        let verdicts: Vec<bool> = bases
            .iter()
            .map(|b| chart_contains(&c, b).unwrap())
            .collect();
        assert_eq!(verdicts.iter().filter(|&&v| v).count(), 1);
        // σ missing a top errors
        let bad = PathBasis {
            cols: bases[0]
                .cols
                .iter()
                .copied()
                .filter(|&k| pres.basis_path_len(k) != 0 || pres.basis[k].1 != 1)
                .collect(),
        };
        assert!(chart_contains(&c, &bad).is_err());
    }

    #[test]
    fn a2_point_chart_is_empty_system() {
        let f = Field::Rational;
        let alg = a2(f);
        let pres = ProjectivePresentation::new(alg, vec![0]).unwrap();
        let bases = enumerate_path_bases(&pres, &[1, 1], false).unwrap();
        let sys = chart_equations(&pres, &bases[0]).unwrap();
        assert!(sys.vars.is_empty());
        assert!(sys.polys.is_empty());
        assert!(sys.emit().starts_with("vars: (none)"));
    }

    #[test]
    fn kronecker_chart_is_affine_line() {
        let f = Field::Rational;
        let alg = kronecker(f);
        let pres = ProjectivePresentation::new(alg, vec![0]).unwrap();
        let bases = enumerate_path_bases(&pres, &[1, 1], false).unwrap();
        for b in &bases {
            let sys = chart_equations(&pres, b).unwrap();
            assert_eq!(sys.vars.len(), 1);
            assert!(sys.polys.is_empty());
        }
    }

    #[test]
    fn chart_roundtrip_rational() {
        let f = Field::Rational;
        let alg = loop_arrow(f);
        let pres = ProjectivePresentation::new(alg, vec![0, 0]).unwrap();
        // d = (3,2) as for P/Jz2
        let bases = enumerate_path_bases(&pres, &[3, 2], false).unwrap();
        assert!(!bases.is_empty());
        let mut seen_solvable = 0;
        for b in &bases {
            let sys = chart_equations(&pres, b).unwrap();
            // try the all-zero assignment; it solves iff every polynomial
            // has zero constant term
            let zero_assign: BTreeMap<usize, Scalar> =
                (0..sys.vars.len()).map(|i| (i, f.zero())).collect();
            if sys
                .polys
                .iter()
                .all(|p| f.is_zero(&p.eval(&zero_assign)))
            {
                let point = point_from_assignment(&pres, &sys, &zero_assign).unwrap();
                assert!(chart_contains(&point, b).unwrap());
                assert!(point.inside_radical);
                seen_solvable += 1;
            }
        }
        assert!(seen_solvable > 0);
    }

    #[test]
    fn every_point_has_a_covering_basis() {
        let f = Field::Rational;
        let alg = loop_arrow(f);
        let pres = ProjectivePresentation::new(alg, vec![0, 0]).unwrap();
        let points = vec![
            SubmodulePoint::spin(pres.clone(), &[path_vec(&pres, "w", 1), path_vec(&pres, "a", 1)])
                .unwrap(),
            SubmodulePoint::spin(pres.clone(), &[path_vec(&pres, "a*w", 0), path_vec(&pres, "w", 1)])
                .unwrap(),
            SubmodulePoint::spin(pres.clone(), &[path_vec(&pres, "a", 0)]).unwrap(),
        ];
        for c in &points {
            let d = crate::rep::QuotientRepresentation::new(c).unwrap().dim_vector();
            let bases = enumerate_path_bases(&pres, &d, false).unwrap();
            assert!(bases.iter().any(|b| chart_contains(c, b).unwrap()));
        }
    }

    #[test]
    fn linear_elimination() {
        let f = Field::Rational;
        // {y - x^2, z - y} eliminates to ∅ after substituting z then y
        let x = MPoly::var(f, 0);
        let y = MPoly::var(f, 1);
        let z = MPoly::var(f, 2);
        let p1 = y.sub(&x.mul(&x));
        let p2 = z.sub(&y);
        let out = eliminate_linear(&[p1.clone(), p2.clone()], &[]);
        assert!(out.is_empty());
        // protecting x and y keeps the substituted relation
        let out_protected = eliminate_linear(&[p1, p2], &[0, 1]);
        assert_eq!(out_protected.len(), 1);
        // {y - x^2, x*y - 1} keeps the non-eliminable relation
        let p3 = MPoly::var(f, 0)
            .mul(&MPoly::var(f, 1))
            .sub(&MPoly::constant(f, f.one()));
        let out2 = eliminate_linear(&[y.sub(&x.mul(&x)), p3], &[0]);
        assert_eq!(out2.len(), 1);
    }
}
