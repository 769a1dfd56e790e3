//! The line-oriented `.cqh` text format.
//!
//! A document is a header (`field`, `kind`, `dim`, `labels`, plus `side` for modules and
//! `codim`/`colabels` for stand-alone maps) followed by sparse structure-constant lines and a
//! closing `end`. Indices are 1-based. [`emit_cqh`] writes the canonical form: sections in a
//! fixed order, entries sorted by index, zero coefficients dropped.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::sync::Arc;

use crate::comodule::{ComoduleAlgebra, RelHopfModule, Side};
use crate::coquasi::{Coalgebra, CoquasiBialgebra, CoquasiHopf};
use crate::exactlin::{BasedSpace, Field, LinMap, Scalar};
use crate::twist::GaugeTwist;
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    CoquasiHopf,
    ComoduleAlgebra,
    HopfModule,
    Twist,
    LinMap,
}

impl Kind {
    fn keyword(self) -> &'static str {
        match self {
            Kind::CoquasiHopf => "coquasihopf",
            Kind::ComoduleAlgebra => "comodulealgebra",
            Kind::HopfModule => "hopfmodule",
            Kind::Twist => "twist",
            Kind::LinMap => "linmap",
        }
    }

    fn from_keyword(s: &str) -> Option<Self> {
        [Kind::CoquasiHopf, Kind::ComoduleAlgebra, Kind::HopfModule, Kind::Twist, Kind::LinMap].into_iter().find(|k| k.keyword() == s)
    }

    fn sections(self) -> &'static [Tag] {
        use Tag::*;
        match self {
            Kind::CoquasiHopf => &[M, Delta, Counit, Omega, OmegaInv, S, Alpha, Beta, One],
            Kind::ComoduleAlgebra => &[M, Rho, One],
            Kind::HopfModule => &[M, Rho],
            Kind::Twist => &[Tau],
            Kind::LinMap => &[Map],
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// Structure-constant line tags, in canonical emission order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Tag {
    M,
    Delta,
    Counit,
    Omega,
    OmegaInv,
    S,
    Alpha,
    Beta,
    Rho,
    One,
    Tau,
    Map,
}

impl Tag {
    const ALL: [Tag; 12] =
        [Tag::M, Tag::Delta, Tag::Counit, Tag::Omega, Tag::OmegaInv, Tag::S, Tag::Alpha, Tag::Beta, Tag::Rho, Tag::One, Tag::Tau, Tag::Map];

    fn keyword(self) -> &'static str {
        match self {
            Tag::M => "m",
            Tag::Delta => "delta",
            Tag::Counit => "counit",
            Tag::Omega => "omega",
            Tag::OmegaInv => "omegainv",
            Tag::S => "S",
            Tag::Alpha => "alpha",
            Tag::Beta => "beta",
            Tag::Rho => "rho",
            Tag::One => "one",
            Tag::Tau => "tau",
            Tag::Map => "map",
        }
    }

    fn arity(self) -> usize {
        match self {
            Tag::M | Tag::Delta | Tag::Omega | Tag::OmegaInv | Tag::Rho => 3,
            Tag::S | Tag::Tau | Tag::Map => 2,
            Tag::Counit | Tag::Alpha | Tag::Beta | Tag::One => 1,
        }
    }
}

/// A parsed `.cqh` file, before it is bound to a host or algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct CqhDocument {
    pub field: Field,
    pub kind: Kind,
    pub labels: Vec<String>,
    pub side: Option<Side>,
    pub codomain_labels: Option<Vec<String>>,
    /// Zero-based indices to coefficient, per tag.
    pub entries: BTreeMap<Tag, BTreeMap<Vec<usize>, Scalar>>,
}

fn perr(line: usize, col: usize, reason: impl Into<String>) -> Error {
    Error::ParseError { line, col, reason: reason.into() }
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (col, (byte, ch)) in line.char_indices().enumerate() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some((col + 1, byte)),
            (true, Some((c, b))) => {
                out.push((c, &line[b..byte]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some((c, b)) = start {
        out.push((c, &line[b..]));
    }
    out
}

pub fn parse_cqh(text: &str) -> Result<CqhDocument, Error> {
    let mut field = None;
    let mut kind = None;
    let mut dim: Option<usize> = None;
    let mut codim: Option<usize> = None;
    let mut labels = None;
    let mut codomain_labels = None;
    let mut side = None;
    let mut entries: BTreeMap<Tag, BTreeMap<Vec<usize>, Scalar>> = BTreeMap::new();
    let mut ended = false;
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let ln = idx + 1;
        last_line = ln;
        let toks = tokens(raw);
        let Some(&(col, head)) = toks.first() else { continue };
        if head.starts_with('#') {
            continue;
        }
        if ended {
            return Err(perr(ln, col, "content after `end`"));
        }
        let args = &toks[1..];
        let want = |n: usize| -> Result<(), Error> {
            if args.len() == n {
                Ok(())
            } else {
                let c = args.get(n).map_or(raw.chars().count() + 1, |t| t.0);
                Err(perr(ln, c, format!("`{head}` takes {n} argument(s), found {}", args.len())))
            }
        };
        let number = |(c, t): (usize, &str)| -> Result<usize, Error> { t.parse().map_err(|_| perr(ln, c, format!("expected a count, found `{t}`"))) };
        match head {
            "field" => {
                field = Some(match args {
                    [(_, "Q")] => Field::Rational,
                    [(_, "F"), (c, p)] => {
                        let p = p.parse().map_err(|_| perr(ln, *c, format!("bad prime `{p}`")))?;
                        Field::prime(p).map_err(|e| perr(ln, *c, e.to_string()))?
                    }
                    _ => return Err(perr(ln, col, "expected `field Q` or `field F <p>`")),
                });
            }
            "kind" => {
                want(1)?;
                kind = Some(Kind::from_keyword(args[0].1).ok_or_else(|| perr(ln, args[0].0, format!("unknown kind `{}`", args[0].1)))?);
            }
            "dim" => {
                want(1)?;
                dim = Some(number(args[0])?);
            }
            "codim" => {
                want(1)?;
                codim = Some(number(args[0])?);
            }
            "labels" | "colabels" => {
                let n = if head == "labels" { dim } else { codim };
                let n = n.ok_or_else(|| perr(ln, col, format!("`{head}` before its dimension")))?;
                want(n)?;
                let ls: Vec<String> = args.iter().map(|t| t.1.to_string()).collect();
                if head == "labels" {
                    labels = Some(ls);
                } else {
                    codomain_labels = Some(ls);
                }
            }
            "side" => {
                want(1)?;
                side = Some(match args[0].1 {
                    "left" => Side::Left,
                    "right" => Side::Right,
                    other => return Err(perr(ln, args[0].0, format!("unknown side `{other}`"))),
                });
            }
            "end" => {
                want(0)?;
                ended = true;
            }
            _ => {
                let tag = Tag::ALL.into_iter().find(|t| t.keyword() == head).ok_or_else(|| perr(ln, col, format!("unknown keyword `{head}`")))?;
                let f = field.ok_or_else(|| perr(ln, col, "structure constants before `field`"))?;
                want(tag.arity() + 1)?;
                let mut index = Vec::with_capacity(tag.arity());
                for &(c, t) in &args[..tag.arity()] {
                    let i: usize = t.parse().map_err(|_| perr(ln, c, format!("expected an index, found `{t}`")))?;
                    if i == 0 {
                        return Err(perr(ln, c, "indices are 1-based"));
                    }
                    index.push(i - 1);
                }
                let (c, t) = args[tag.arity()];
                let value = f.parse_scalar(t).map_err(|r| perr(ln, c, r))?;
                if entries.entry(tag).or_default().insert(index, value).is_some() {
                    return Err(perr(ln, col, format!("duplicate `{head}` entry")));
                }
            }
        }
    }
    let eof = last_line + 1;
    if !ended {
        return Err(perr(eof, 1, "truncated input: missing `end`"));
    }
    let field = field.ok_or_else(|| perr(eof, 1, "missing `field`"))?;
    let kind = kind.ok_or_else(|| perr(eof, 1, "missing `kind`"))?;
    let dim = dim.ok_or_else(|| perr(eof, 1, "missing `dim`"))?;
    let labels = labels.unwrap_or_else(|| (1..=dim).map(|i| format!("e{i}")).collect());
    if kind == Kind::HopfModule && side.is_none() {
        return Err(perr(eof, 1, "hopf module without `side`"));
    }
    let codomain_labels = match (kind, codim) {
        (Kind::LinMap, Some(n)) => Some(codomain_labels.unwrap_or_else(|| (1..=n).map(|i| format!("f{i}")).collect())),
        (Kind::LinMap, None) => return Err(perr(eof, 1, "linmap without `codim`")),
        _ => None,
    };
    if let Some(tag) = entries.keys().find(|t| !kind.sections().contains(t)) {
        return Err(perr(eof, 1, format!("`{}` lines are not allowed in a {kind} file", tag.keyword())));
    }
    entries.values_mut().for_each(|sec| sec.retain(|_, v| !v.is_zero()));
    Ok(CqhDocument { field, kind, labels, side, codomain_labels, entries })
}

pub fn emit_cqh(doc: &CqhDocument) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "field {}", doc.field);
    let _ = writeln!(out, "kind {}", doc.kind);
    let _ = writeln!(out, "dim {}", doc.labels.len());
    let _ = writeln!(out, "labels {}", doc.labels.join(" "));
    if let Some(side) = doc.side {
        let _ = writeln!(out, "side {}", if side == Side::Left { "left" } else { "right" });
    }
    if let Some(cl) = &doc.codomain_labels {
        let _ = writeln!(out, "codim {}", cl.len());
        let _ = writeln!(out, "colabels {}", cl.join(" "));
    }
    for (tag, section) in &doc.entries {
        for (index, value) in section.iter().filter(|(_, v)| !v.is_zero()) {
            out.push_str(tag.keyword());
            for i in index {
                let _ = write!(out, " {}", i + 1);
            }
            let _ = writeln!(out, " {value}");
        }
    }
    out.push_str("end\n");
    out
}

impl fmt::Display for CqhDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&emit_cqh(self))
    }
}

/// Splits a flat row index into per-factor indices.
fn split(mut k: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for (slot, d) in out.iter_mut().zip(dims).rev() {
        *slot = k % d;
        k /= d;
    }
    out
}

fn flat(index: &[usize], dims: &[usize]) -> usize {
    index.iter().zip(dims).fold(0, |acc, (i, d)| acc * d + i)
}

impl CqhDocument {
    fn new(field: Field, kind: Kind, space: &BasedSpace) -> Self {
        CqhDocument { field, kind, labels: space.labels().to_vec(), side: None, codomain_labels: None, entries: BTreeMap::new() }
    }

    /// Records a map whose columns are indexed by `col_dims` and rows by `row_dims`.
    fn put_map(&mut self, tag: Tag, map: &LinMap, col_dims: &[usize], row_dims: &[usize]) {
        let section = self.entries.entry(tag).or_default();
        for col in 0..map.cols() {
            for (row, v) in map.sparse_column(col) {
                let mut index = split(col, col_dims);
                index.extend(split(row, row_dims));
                section.insert(index, v);
            }
        }
    }

    fn put_vector(&mut self, tag: Tag, v: &[Scalar]) {
        let section = self.entries.entry(tag).or_default();
        for (i, c) in v.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            section.insert(vec![i], c.clone());
        }
    }

    fn get_map(&self, tag: Tag, domain: BasedSpace, codomain: BasedSpace, col_dims: &[usize], row_dims: &[usize]) -> Result<LinMap, Error> {
        let f = self.field;
        let mut cols = vec![Vec::new(); domain.dim()];
        let all_dims: Vec<usize> = col_dims.iter().chain(row_dims).copied().collect();
        for (index, v) in self.entries.get(&tag).into_iter().flatten() {
            if let Some((pos, (i, d))) = index.iter().zip(&all_dims).enumerate().find(|(_, (i, d))| *i >= *d) {
                return Err(Error::InvalidStructure(format!("`{}` index {} at position {} exceeds {d}", tag.keyword(), i + 1, pos + 1)));
            }
            let (c, r) = index.split_at(col_dims.len());
            cols[flat(c, col_dims)].push((flat(r, row_dims), v.clone()));
        }
        for col in &mut cols {
            col.sort_by_key(|e| e.0);
        }
        Ok(LinMap::from_sparse_columns(domain, codomain, f, |j| std::mem::take(&mut cols[j])))
    }

    fn get_vector(&self, tag: Tag, dim: usize) -> Result<Vec<Scalar>, Error> {
        let mut v = vec![self.field.zero(); dim];
        for (index, c) in self.entries.get(&tag).into_iter().flatten() {
            let slot = v.get_mut(index[0]).ok_or_else(|| Error::InvalidStructure(format!("`{}` index {} exceeds {dim}", tag.keyword(), index[0] + 1)))?;
            *slot = c.clone();
        }
        Ok(v)
    }

    fn require(&self, kind: Kind) -> Result<BasedSpace, Error> {
        if self.kind != kind {
            return Err(Error::InvalidStructure(format!("expected a {kind} file, found {}", self.kind)));
        }
        BasedSpace::new(self.labels.clone())
    }

    pub fn from_coquasi_hopf(h: &CoquasiHopf) -> Self {
        let n = h.dim();
        let mut doc = CqhDocument::new(h.field(), Kind::CoquasiHopf, h.space());
        doc.put_map(Tag::M, h.mult(), &[n, n], &[n]);
        doc.put_map(Tag::Delta, h.comult(), &[n], &[n, n]);
        doc.put_map(Tag::Counit, h.counit(), &[n], &[]);
        doc.put_map(Tag::Omega, h.omega(), &[n, n, n], &[]);
        doc.put_map(Tag::OmegaInv, h.omega_inv(), &[n, n, n], &[]);
        doc.put_map(Tag::S, h.antipode(), &[n], &[n]);
        doc.put_map(Tag::Alpha, h.alpha(), &[n], &[]);
        doc.put_map(Tag::Beta, h.beta(), &[n], &[]);
        doc.put_vector(Tag::One, h.unit());
        doc
    }

    pub fn to_coquasi_hopf(&self) -> Result<CoquasiHopf, Error> {
        let space = self.require(Kind::CoquasiHopf)?;
        let n = space.dim();
        let (sq, cube, k) = (space.power(2), space.power(3), BasedSpace::ground());
        let comult = self.get_map(Tag::Delta, space.clone(), sq.clone(), &[n], &[n, n])?;
        let counit = self.get_map(Tag::Counit, space.clone(), k.clone(), &[n], &[])?;
        let coalgebra = Coalgebra::new(space.clone(), comult, counit)?;
        let mult = self.get_map(Tag::M, sq, space.clone(), &[n, n], &[n])?;
        let unit = self.get_vector(Tag::One, n)?;
        let omega = self.get_map(Tag::Omega, cube.clone(), k.clone(), &[n, n, n], &[])?;
        let omega_inv = match self.entries.contains_key(&Tag::OmegaInv) {
            true => Some(self.get_map(Tag::OmegaInv, cube, k.clone(), &[n, n, n], &[])?),
            false => None,
        };
        let bialgebra = CoquasiBialgebra::new(coalgebra, mult, unit, omega, omega_inv)?;
        let antipode = self.get_map(Tag::S, space.clone(), space.clone(), &[n], &[n])?;
        let alpha = self.get_map(Tag::Alpha, space.clone(), k.clone(), &[n], &[])?;
        let beta = self.get_map(Tag::Beta, space, k, &[n], &[])?;
        CoquasiHopf::new(bialgebra, antipode, alpha, beta)
    }

    pub fn from_algebra(a: &ComoduleAlgebra) -> Self {
        let (n, dh) = (a.dim(), a.host().dim());
        let mut doc = CqhDocument::new(a.field(), Kind::ComoduleAlgebra, a.space());
        doc.put_map(Tag::M, a.mult(), &[n, n], &[n]);
        doc.put_map(Tag::Rho, a.coaction(), &[n], &[n, dh]);
        doc.put_vector(Tag::One, a.one());
        doc
    }

    pub fn to_algebra(&self, host: Arc<CoquasiHopf>) -> Result<ComoduleAlgebra, Error> {
        let space = self.require(Kind::ComoduleAlgebra)?;
        self.check_field(host.field())?;
        let (n, dh) = (space.dim(), host.dim());
        let mult = self.get_map(Tag::M, space.power(2), space.clone(), &[n, n], &[n])?;
        let coaction = self.get_map(Tag::Rho, space.clone(), space.tensor(host.space()), &[n], &[n, dh])?;
        let one = self.get_vector(Tag::One, n)?;
        ComoduleAlgebra::new(host, space, coaction, mult, one)
    }

    pub fn from_module(m: &RelHopfModule) -> Self {
        let (n, da, dh) = (m.dim(), m.algebra().dim(), m.host().dim());
        let mut doc = CqhDocument::new(m.field(), Kind::HopfModule, m.space());
        doc.side = Some(m.side());
        let act_dims = if m.side() == Side::Right { [n, da] } else { [da, n] };
        doc.put_map(Tag::M, m.action(), &act_dims, &[n]);
        doc.put_map(Tag::Rho, m.coaction(), &[n], &[n, dh]);
        doc
    }

    /// For a right module `m i j k c` is the coefficient of `e_k` in `e_i·a_j`; for a left module, in `a_i·e_j`.
    pub fn to_module(&self, algebra: Arc<ComoduleAlgebra>) -> Result<RelHopfModule, Error> {
        let space = self.require(Kind::HopfModule)?;
        self.check_field(algebra.field())?;
        let side = self.side.ok_or_else(|| Error::InvalidStructure("hopf module without side".into()))?;
        let (n, da, dh) = (space.dim(), algebra.dim(), algebra.host().dim());
        let (domain, dims) = match side {
            Side::Right => (space.tensor(algebra.space()), [n, da]),
            Side::Left => (algebra.space().tensor(&space), [da, n]),
        };
        let action = self.get_map(Tag::M, domain, space.clone(), &dims, &[n])?;
        let coaction = self.get_map(Tag::Rho, space.clone(), space.tensor(algebra.host().space()), &[n], &[n, dh])?;
        RelHopfModule::new(algebra, space, coaction, action, side)
    }

    pub fn from_twist(t: &GaugeTwist, host: &CoquasiHopf) -> Self {
        let n = host.dim();
        let mut doc = CqhDocument::new(host.field(), Kind::Twist, host.space());
        doc.put_map(Tag::Tau, t.tau(), &[n, n], &[]);
        doc
    }

    pub fn to_twist(&self, host: &CoquasiHopf) -> Result<GaugeTwist, Error> {
        let space = self.require(Kind::Twist)?;
        self.check_field(host.field())?;
        if space.dim() != host.dim() {
            return Err(Error::HostMismatch(format!("twist of dim {} on a host of dim {}", space.dim(), host.dim())));
        }
        let n = host.dim();
        let tau = self.get_map(Tag::Tau, host.space().power(2), BasedSpace::ground(), &[n, n], &[])?;
        GaugeTwist::new(host.bialgebra(), tau)
    }

    pub fn from_linmap(map: &LinMap) -> Self {
        let mut doc = CqhDocument::new(map.field(), Kind::LinMap, map.domain());
        doc.codomain_labels = Some(map.codomain().labels().to_vec());
        doc.put_map(Tag::Map, map, &[map.cols()], &[map.rows()]);
        doc
    }

    /// `map i j c` is the coefficient of the `j`-th codomain basis vector in the image of `e_i`.
    pub fn to_linmap(&self) -> Result<LinMap, Error> {
        let domain = self.require(Kind::LinMap)?;
        let codomain = BasedSpace::new(self.codomain_labels.clone().unwrap_or_default())?;
        let (n, m) = (domain.dim(), codomain.dim());
        self.get_map(Tag::Map, domain, codomain, &[n], &[m])
    }

    fn check_field(&self, f: Field) -> Result<(), Error> {
        if self.field == f {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_report_columns() {
        assert_eq!(tokens("  m 1\t2"), vec![(3, "m"), (5, "1"), (7, "2")]);
        assert!(tokens("   ").is_empty());
    }

    #[test]
    fn flat_and_split_are_inverse() {
        let dims = [2, 3, 4];
        for k in 0..24 {
            assert_eq!(flat(&split(k, &dims), &dims), k);
        }
    }

    #[test]
    fn comments_and_zero_entries_vanish_from_canonical_form() {
        let text = "# a comment\nfield F 5\nkind twist\ndim 1\ntau 1 1 6\n\ntau 1 1 0\nend\n";
        assert!(parse_cqh(text).is_err(), "duplicate entry");
        let doc = parse_cqh("field F 5\nkind twist\ndim 2\n# x\ntau 1 1 6\ntau 2 2 0\nend\n").unwrap();
        assert_eq!(emit_cqh(&doc), "field F 5\nkind twist\ndim 2\nlabels e1 e2\ntau 1 1 1\nend\n");
    }

    #[test]
    fn content_after_end_is_rejected() {
        let err = parse_cqh("field Q\nkind twist\ndim 1\nend\ntau 1 1 1\n").unwrap_err();
        assert_eq!(err, Error::ParseError { line: 5, col: 1, reason: "content after `end`".into() });
    }
}
