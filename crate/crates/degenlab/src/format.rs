//! The sectioned plain-text input format and the matching writers.
//!
//! ```text
//! [quiver]
//! vertex 1
//! vertex 2
//! arrow w 1 1
//! arrow a 1 2
//! [relations]
//! 1 w*w
//! [module]
//! top 1
//! top 1
//! gen 1 w z2
//! [options]
//! max_len 2
//! field rational
//! ```
//!
//! Paths compose right to left: `a*w` means first w, then a. Rational
//! coefficients are written `p/q` in lowest terms. Curve files hold one
//! `z<r> -> term + term + …` line per top, each term
//! `coeff [t^e] [path] z<s>`.

use crate::algebra::{PathAlgebra, RelationElement};
use crate::curves::CurveFamily;
use crate::field::{Field, Scalar};
use crate::presentation::{ProjectivePresentation, SubmodulePoint};
use crate::quiver::{Path, Quiver};
use crate::Error;
use std::collections::BTreeMap;
use std::sync::Arc;

fn perr(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        col,
        msg: msg.into(),
    }
}

/// (line number, column of first char, text) per non-empty line, grouped by
/// section header.
fn split_sections(text: &str) -> Result<BTreeMap<String, Vec<(usize, usize, String)>>, Error> {
    let mut out: BTreeMap<String, Vec<(usize, usize, String)>> = BTreeMap::new();
    let mut current: Option<String> = None;
    for (ln, raw) in text.lines().enumerate() {
        let line_no = ln + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if trimmed.starts_with('[') {
            if !trimmed.ends_with(']') {
                return Err(perr(line_no, 1, "unterminated section header"));
            }
            let name = trimmed[1..trimmed.len() - 1].to_string();
            out.entry(name.clone()).or_default();
            current = Some(name);
            continue;
        }
        let Some(section) = &current else {
            return Err(perr(line_no, 1, "content before the first section header"));
        };
        let col = raw.len() - raw.trim_start().len() + 1;
        out.get_mut(section)
            .unwrap()
            .push((line_no, col, trimmed.to_string()));
    }
    Ok(out)
}

struct Words<'a> {
    line: usize,
    items: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Words<'a> {
    fn new(line: usize, col0: usize, text: &'a str) -> Words<'a> {
        let mut items = Vec::new();
        let bytes = text.as_bytes();
        let mut idx = 0;
        while idx < bytes.len() {
            while idx < bytes.len() && bytes[idx].is_ascii_whitespace() {
                idx += 1;
            }
            if idx >= bytes.len() {
                break;
            }
            let start = idx;
            while idx < bytes.len() && !bytes[idx].is_ascii_whitespace() {
                idx += 1;
            }
            items.push((col0 + start, &text[start..idx]));
        }
        Words {
            line,
            items,
            pos: 0,
        }
    }

    fn next(&mut self) -> Option<(usize, &'a str)> {
        let it = self.items.get(self.pos).copied();
        self.pos += 1;
        it
    }

    fn peek(&self) -> Option<(usize, &'a str)> {
        self.items.get(self.pos).copied()
    }

    fn expect(&mut self, what: &str) -> Result<(usize, &'a str), Error> {
        self.next()
            .ok_or_else(|| perr(self.line, 1, format!("expected {what}")))
    }
}

fn parse_path(
    quiver: &Quiver,
    line: usize,
    col: usize,
    word: &str,
) -> Result<Path, Error> {
    let mut arrows = Vec::new();
    let mut offset = 0;
    for part in word.split('*') {
        if part.is_empty() {
            return Err(perr(line, col + offset, "empty path component"));
        }
        arrows.push(
            quiver
                .arrow_index(part)
                .map_err(|_| perr(line, col + offset, format!("unknown arrow `{part}`")))?,
        );
        offset += part.len() + 1;
    }
    arrows.reverse();
    Path::from_arrows(quiver, arrows)
        .map_err(|_| perr(line, col, format!("non-composable path `{word}`")))
}

fn parse_coeff(field: &Field, line: usize, col: usize, word: &str) -> Result<Scalar, Error> {
    field
        .parse(word)
        .map_err(|_| perr(line, col, format!("bad coefficient `{word}`")))
}

fn is_coeff_word(w: &str) -> bool {
    w.chars()
        .next()
        .map(|c| c.is_ascii_digit() || c == '-' || c == '+')
        .unwrap_or(false)
        && w.chars().all(|c| c.is_ascii_digit() || "-+/".contains(c))
}

fn parse_relation_line(
    quiver: &Quiver,
    field: &Field,
    line: usize,
    col0: usize,
    text: &str,
) -> Result<RelationElement, Error> {
    let mut words = Words::new(line, col0, text);
    let mut terms = Vec::new();
    let mut sign = field.one();
    loop {
        let Some((col, w)) = words.next() else { break };
        let (coeff, path_word, path_col) = if w == "+" {
            sign = field.one();
            continue;
        } else if w == "-" {
            sign = field.from_i64(-1);
            continue;
        } else if is_coeff_word(w) {
            let c = parse_coeff(field, line, col, w)?;
            let (pc, pw) = words.expect("a path after the coefficient")?;
            (c, pw, pc)
        } else {
            (field.one(), w, col)
        };
        let path = parse_path(quiver, line, path_col, path_word)?;
        terms.push((field.mul(&sign, &coeff), path));
        sign = field.one();
    }
    if terms.is_empty() {
        return Err(perr(line, col0, "empty relation"));
    }
    Ok(RelationElement { terms })
}

pub struct AlgebraInput {
    pub algebra: Arc<PathAlgebra>,
    pub field: Field,
}

/// Parses the `[quiver]`, `[relations]`, `[options]` sections and builds
/// the algebra. A `--field` style override takes precedence over the file.
pub fn parse_algebra(text: &str, field_override: Option<Field>) -> Result<AlgebraInput, Error> {
    let sections = split_sections(text)?;
    let quiver_lines = sections
        .get("quiver")
        .ok_or_else(|| perr(1, 1, "missing [quiver] section"))?;
    let mut vertices = Vec::new();
    let mut arrows = Vec::new();
    for (line, col, text) in quiver_lines {
        let mut words = Words::new(*line, *col, text);
        match words.expect("vertex or arrow")?.1 {
            "vertex" => {
                let (_, id) = words.expect("vertex id")?;
                vertices.push(id.to_string());
            }
            "arrow" => {
                let (_, name) = words.expect("arrow name")?;
                let (_, src) = words.expect("source vertex")?;
                let (_, dst) = words.expect("target vertex")?;
                arrows.push((name.to_string(), src.to_string(), dst.to_string()));
            }
            other => return Err(perr(*line, *col, format!("unknown quiver item `{other}`"))),
        }
    }
    let quiver = Quiver::new(vertices, arrows)?;
    // options before relations: the field matters for coefficients
    let mut max_len: Option<usize> = None;
    let mut field_opt: Option<Field> = None;
    if let Some(lines) = sections.get("options") {
        for (line, col, text) in lines {
            let mut words = Words::new(*line, *col, text);
            match words.expect("option name")?.1 {
                "max_len" => {
                    let (c, v) = words.expect("a number")?;
                    max_len = Some(
                        v.parse()
                            .map_err(|_| perr(*line, c, "bad max_len value"))?,
                    );
                }
                "field" => {
                    let (c, v) = words.expect("rational or fp:P")?;
                    field_opt = Some(parse_field_name(v).map_err(|_| {
                        perr(*line, c, format!("bad field selector `{v}`"))
                    })?);
                }
                other => return Err(perr(*line, *col, format!("unknown option `{other}`"))),
            }
        }
    }
    let field = field_override.or(field_opt).unwrap_or(Field::Rational);
    let max_len = max_len.ok_or_else(|| perr(1, 1, "missing max_len option"))?;
    let mut relations = Vec::new();
    if let Some(lines) = sections.get("relations") {
        for (line, col, text) in lines {
            relations.push(parse_relation_line(&quiver, &field, *line, *col, text)?);
        }
    }
    let algebra = Arc::new(PathAlgebra::build(field, quiver, relations, max_len)?);
    Ok(AlgebraInput { algebra, field })
}

pub fn parse_field_name(s: &str) -> Result<Field, Error> {
    if s == "rational" {
        return Ok(Field::Rational);
    }
    if let Some(p) = s.strip_prefix("fp:") {
        let p: u64 = p
            .parse()
            .map_err(|_| Error::BadInput(format!("bad prime `{p}`")))?;
        return Field::prime(p);
    }
    Err(Error::BadInput(format!("unknown field `{s}`")))
}

/// Parses the `[module]` section of a file against a built algebra.
pub fn parse_module(
    text: &str,
    algebra: &Arc<PathAlgebra>,
) -> Result<(Arc<ProjectivePresentation>, SubmodulePoint), Error> {
    let field = algebra.field;
    let sections = split_sections(text)?;
    let lines = sections
        .get("module")
        .ok_or_else(|| perr(1, 1, "missing [module] section"))?;
    let mut tops = Vec::new();
    let mut gen_lines = Vec::new();
    for (line, col, text) in lines {
        let mut words = Words::new(*line, *col, text);
        match words.expect("top or gen")?.1 {
            "top" => {
                let (c, id) = words.expect("vertex id")?;
                let v = algebra
                    .quiver
                    .vertex_index(id)
                    .map_err(|_| perr(*line, c, format!("unknown vertex `{id}`")))?;
                tops.push(v);
            }
            "gen" => gen_lines.push((*line, *col, text.clone())),
            other => return Err(perr(*line, *col, format!("unknown module item `{other}`"))),
        }
    }
    if tops.is_empty() {
        return Err(perr(1, 1, "module needs at least one top"));
    }
    let pres = ProjectivePresentation::new(algebra.clone(), tops)?;
    let mut gens = Vec::new();
    for (line, col, text) in gen_lines {
        gens.push(parse_gen_line(&pres, field, line, col, &text)?);
    }
    let point = SubmodulePoint::spin(pres.clone(), &gens)?;
    Ok((pres, point))
}

fn parse_top_ref(
    pres: &ProjectivePresentation,
    line: usize,
    col: usize,
    word: &str,
) -> Result<usize, Error> {
    let idx: usize = word
        .strip_prefix('z')
        .and_then(|n| n.parse::<usize>().ok())
        .ok_or_else(|| perr(line, col, format!("expected z<r>, found `{word}`")))?;
    if idx == 0 || idx > pres.top_count() {
        return Err(perr(line, col, format!("top index z{idx} out of range")));
    }
    Ok(idx - 1)
}

fn parse_gen_line(
    pres: &Arc<ProjectivePresentation>,
    field: Field,
    line: usize,
    col0: usize,
    text: &str,
) -> Result<Vec<Scalar>, Error> {
    let quiver = &pres.algebra.quiver;
    let mut words = Words::new(line, col0, text);
    let (_, head) = words.expect("gen")?;
    debug_assert_eq!(head, "gen");
    let mut out = pres.zero_vec();
    let mut sign = field.one();
    loop {
        let Some((col, w)) = words.next() else { break };
        if w == "+" {
            sign = field.one();
            continue;
        }
        if w == "-" {
            sign = field.from_i64(-1);
            continue;
        }
        let coeff = if is_coeff_word(w) {
            parse_coeff(&field, line, col, w)?
        } else {
            return Err(perr(line, col, "generator term must start with a coefficient"));
        };
        let (c2, w2) = words.expect("a path or z<r>")?;
        let (path, top_word, top_col) = if w2.starts_with('z') && w2[1..].chars().all(|c| c.is_ascii_digit())
        {
            (None, w2, c2)
        } else {
            let p = parse_path(quiver, line, c2, w2)?;
            let (c3, w3) = words.expect("z<r> after the path")?;
            (Some(p), w3, c3)
        };
        let r = parse_top_ref(pres, line, top_col, top_word)?;
        let elem = match path {
            Some(p) => pres.algebra.reduce_path(&p),
            None => {
                let e = Path::idempotent(pres.tops[r]);
                pres.algebra
                    .unit_of(pres.algebra.basis_index_of(&e).unwrap())
            }
        };
        let scaled = pres.algebra.scale_elem(&field.mul(&sign, &coeff), &elem);
        let vec = pres.embed(&scaled, r);
        for i in 0..out.len() {
            out[i] = field.add(&out[i], &vec[i]);
        }
        sign = field.one();
    }
    Ok(out)
}

/// Parses a `[curve]` section against a presentation.
pub fn parse_curve(
    text: &str,
    pres: &Arc<ProjectivePresentation>,
) -> Result<CurveFamily, Error> {
    let field = pres.field();
    let quiver = &pres.algebra.quiver;
    let sections = split_sections(text)?;
    let lines = sections
        .get("curve")
        .ok_or_else(|| perr(1, 1, "missing [curve] section"))?;
    let mut images: Vec<Vec<crate::curves::LaurentAlg>> = (0..pres.top_count())
        .map(|_| (0..pres.top_count()).map(|_| BTreeMap::new()).collect())
        .collect();
    let mut seen = vec![false; pres.top_count()];
    for (line, col, text) in lines {
        let mut words = Words::new(*line, *col, text);
        let (c1, zr) = words.expect("z<r>")?;
        let r = parse_top_ref(pres, *line, c1, zr)?;
        let (c2, arrow) = words.expect("->")?;
        if arrow != "->" {
            return Err(perr(*line, c2, "expected ->"));
        }
        seen[r] = true;
        let mut sign = field.one();
        loop {
            let Some((col, w)) = words.next() else { break };
            if w == "+" {
                sign = field.one();
                continue;
            }
            if w == "-" {
                sign = field.from_i64(-1);
                continue;
            }
            if !is_coeff_word(w) {
                return Err(perr(*line, col, "curve term must start with a coefficient"));
            }
            let coeff = parse_coeff(&field, *line, col, w)?;
            // optional t^e
            let mut exponent: i64 = 0;
            if let Some((_, tok)) = words.peek() {
                if tok == "t" {
                    exponent = 1;
                    words.next();
                } else if let Some(e) = tok.strip_prefix("t^") {
                    exponent = e
                        .parse()
                        .map_err(|_| perr(*line, col, "bad t exponent"))?;
                    words.next();
                }
            }
            let (c2, w2) = words.expect("a path or z<s>")?;
            let (path, top_word, top_col) =
                if w2.starts_with('z') && w2[1..].chars().all(|c| c.is_ascii_digit()) {
                    (None, w2, c2)
                } else {
                    let p = parse_path(quiver, *line, c2, w2)?;
                    let (c3, w3) = words.expect("z<s> after the path")?;
                    (Some(p), w3, c3)
                };
            let s = parse_top_ref(pres, *line, top_col, top_word)?;
            let elem = match path {
                Some(p) => pres.algebra.reduce_path(&p),
                None => {
                    let e = Path::idempotent(pres.tops[s]);
                    pres.algebra
                        .unit_of(pres.algebra.basis_index_of(&e).unwrap())
                }
            };
            let scaled = pres
                .algebra
                .scale_elem(&field.mul(&sign, &coeff), &elem);
            if !scaled.is_zero() {
                let slot = images[r][s]
                    .entry(exponent)
                    .or_insert_with(crate::algebra::AlgebraElement::zero);
                *slot = pres.algebra.add_elem(slot, &scaled);
            }
            sign = field.one();
        }
    }
    if let Some(r) = seen.iter().position(|s| !s) {
        return Err(perr(1, 1, format!("curve misses the image of z{}", r + 1)));
    }
    let curve = CurveFamily { pres: pres.clone(), images };
    curve.generically_invertible()?;
    Ok(curve)
}

/// Serializes a point as `[module]` text: tops plus one gen line per
/// echelon basis vector.
pub fn write_module(point: &SubmodulePoint) -> String {
    let pres = &point.pres;
    let f = pres.field();
    let mut out = String::from("[module]\n");
    for &v in &pres.tops {
        out.push_str(&format!("top {}\n", pres.algebra.quiver.vertex_ids[v]));
    }
    for row in point.space.rows() {
        let mut parts = Vec::new();
        for (k, c) in row.iter().enumerate() {
            if f.is_zero(c) {
                continue;
            }
            let (p_idx, r) = pres.basis[k];
            let p = pres.algebra.basis_path(p_idx);
            if p.is_idempotent() {
                parts.push(format!("{} z{}", f.fmt_scalar(c), r + 1));
            } else {
                parts.push(format!(
                    "{} {} z{}",
                    f.fmt_scalar(c),
                    p.display(&pres.algebra.quiver),
                    r + 1
                ));
            }
        }
        out.push_str(&format!("gen {}\n", parts.join(" + ")));
    }
    out
}

/// Serializes an algebra description with optional module data.
pub fn write_algebra_file(
    quiver: &Quiver,
    relation_lines: &[String],
    max_len: usize,
    field: Field,
    tops: Option<&[String]>,
    gen_lines: Option<&[String]>,
) -> String {
    let mut out = String::from("[quiver]\n");
    for v in &quiver.vertex_ids {
        out.push_str(&format!("vertex {v}\n"));
    }
    for a in &quiver.arrows {
        out.push_str(&format!(
            "arrow {} {} {}\n",
            a.name, quiver.vertex_ids[a.source], quiver.vertex_ids[a.target]
        ));
    }
    out.push_str("[relations]\n");
    for r in relation_lines {
        out.push_str(r);
        out.push('\n');
    }
    if let Some(tops) = tops {
        out.push_str("[module]\n");
        for t in tops {
            out.push_str(&format!("top {t}\n"));
        }
        if let Some(gens) = gen_lines {
            for g in gens {
                out.push_str(g);
                out.push('\n');
            }
        }
    }
    out.push_str("[options]\n");
    out.push_str(&format!("max_len {max_len}\n"));
    out.push_str(&format!("field {field}\n"));
    out
}
