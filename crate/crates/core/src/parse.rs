//! The line-based `.mlcp` text format.
//!
//! ```text
//! NET fig4
//! VAR X : 1..6
//! VAR Y : a, b
//! CPT X
//!   : ASC
//! CPT Y | X
//!   X in 1..3 : b > a
//!   X in 4..6 : a > b
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::{is_token, Condition, CpNet, Cpt, CptRow, Domain, Ranking, Value, VarId, Variable};
use crate::structure::validate_structure;

/// Parses a net and rejects it unless it is acyclic and every CPT partitions
/// its parent assignments.
pub fn parse_cpnet(text: &str) -> Result<CpNet> {
    let net = parse_cpnet_unchecked(text)?;
    let report = validate_structure(&net);
    if !report.is_valid() {
        return Err(Error::Structure(report.summary()));
    }
    Ok(net)
}

/// Parses a net checking only local invariants, so that structurally broken
/// nets can still be inspected with [`validate_structure`].
pub fn parse_cpnet_unchecked(text: &str) -> Result<CpNet> {
    let doc = Document::read(text)?;
    doc.resolve()
}

fn err(line: usize, reason: impl Into<String>) -> Error {
    Error::Parse {
        line,
        reason: reason.into(),
    }
}

struct VarDecl {
    line: usize,
    name: String,
    domain: Domain,
}

struct RowDecl {
    line: usize,
    conds: Vec<(String, CondText)>,
    ranking: RankText,
}

struct CptDecl {
    line: usize,
    var: String,
    parents: Vec<String>,
    rows: Vec<RowDecl>,
}

enum CondText {
    Eq(String),
    Range(String, String),
    Set(Vec<String>),
}

enum RankText {
    Asc,
    Desc,
    Explicit(Vec<String>),
}

#[derive(Default)]
struct Document {
    name: Option<(usize, String)>,
    vars: Vec<VarDecl>,
    cpts: Vec<CptDecl>,
}

impl Document {
    fn read(text: &str) -> Result<Self> {
        let mut doc = Document::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (keyword, rest) = match content.split_once(char::is_whitespace) {
                Some((k, r)) => (k, r.trim()),
                None => (content, ""),
            };
            match keyword {
                "NET" => {
                    if doc.name.is_some() {
                        return Err(err(line, "duplicate NET line"));
                    }
                    if !is_token(rest) {
                        return Err(err(line, format!("invalid net name `{rest}`")));
                    }
                    doc.name = Some((line, rest.to_string()));
                }
                "VAR" => doc.vars.push(read_var(line, rest)?),
                "CPT" => doc.cpts.push(read_cpt_header(line, rest)?),
                _ => {
                    let cpt = doc
                        .cpts
                        .last_mut()
                        .ok_or_else(|| err(line, "CPT row outside of a CPT block"))?;
                    cpt.rows.push(read_row(line, content)?);
                }
            }
        }
        Ok(doc)
    }

    fn resolve(self) -> Result<CpNet> {
        let (_, name) = self.name.ok_or_else(|| err(1, "missing NET line"))?;
        let mut ids: HashMap<&str, VarId> = HashMap::new();
        for (i, v) in self.vars.iter().enumerate() {
            if ids.insert(v.name.as_str(), VarId(i)).is_some() {
                return Err(err(v.line, format!("duplicate variable `{}`", v.name)));
            }
        }

        let mut parents_of: Vec<Option<Vec<VarId>>> = vec![None; self.vars.len()];
        let mut cpts = Vec::with_capacity(self.cpts.len());
        for decl in &self.cpts {
            let &id = ids
                .get(decl.var.as_str())
                .ok_or_else(|| err(decl.line, format!("CPT for unknown variable `{}`", decl.var)))?;
            if parents_of[id.0].is_some() {
                return Err(err(decl.line, format!("second CPT for `{}`", decl.var)));
            }
            let mut parents = Vec::with_capacity(decl.parents.len());
            for p in &decl.parents {
                let &pid = ids
                    .get(p.as_str())
                    .ok_or_else(|| err(decl.line, format!("unknown parent `{p}`")))?;
                if pid == id {
                    return Err(err(decl.line, format!("`{p}` cannot be its own parent")));
                }
                if parents.contains(&pid) {
                    return Err(err(decl.line, format!("parent `{p}` listed twice")));
                }
                parents.push(pid);
            }
            if decl.rows.is_empty() {
                return Err(err(decl.line, format!("CPT of `{}` has no rows", decl.var)));
            }
            if parents.is_empty() && decl.rows.len() != 1 {
                return Err(err(
                    decl.rows[1].line,
                    format!("root variable `{}` takes exactly one unconditional row", decl.var),
                ));
            }
            let domain = &self.vars[id.0].domain;
            let mut rows = Vec::with_capacity(decl.rows.len());
            for row in &decl.rows {
                let mut conds: Vec<Option<Condition>> = vec![None; parents.len()];
                for (pname, cond) in &row.conds {
                    let slot = decl
                        .parents
                        .iter()
                        .position(|p| p == pname)
                        .ok_or_else(|| {
                            err(row.line, format!("`{pname}` is not a parent of `{}`", decl.var))
                        })?;
                    if conds[slot].is_some() {
                        return Err(err(row.line, format!("`{pname}` constrained twice")));
                    }
                    let pdom = &self.vars[parents[slot].0].domain;
                    conds[slot] = Some(resolve_cond(row.line, pname, pdom, cond)?);
                }
                let conds = conds
                    .into_iter()
                    .zip(&decl.parents)
                    .map(|(c, p)| {
                        c.ok_or_else(|| err(row.line, format!("row does not constrain parent `{p}`")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let ranking = resolve_ranking(row.line, domain, &row.ranking)?;
                rows.push(CptRow::new(conds, ranking));
            }
            parents_of[id.0] = Some(parents);
            cpts.push(Cpt { var: id, rows });
        }

        let mut vars = Vec::with_capacity(self.vars.len());
        for (decl, parents) in self.vars.into_iter().zip(parents_of) {
            let parents =
                parents.ok_or_else(|| err(decl.line, format!("`{}` has no CPT", decl.name)))?;
            vars.push(Variable {
                name: decl.name,
                domain: decl.domain,
                parents,
            });
        }
        CpNet::new(name, vars, cpts)
    }
}

fn read_var(line: usize, rest: &str) -> Result<VarDecl> {
    let (name, values) = rest
        .split_once(':')
        .ok_or_else(|| err(line, "expected `VAR <name> : <values>`"))?;
    let name = name.trim();
    if !is_token(name) {
        return Err(err(line, format!("invalid variable name `{name}`")));
    }
    let values = values.trim();
    let items: Vec<&str> = values.split(',').map(str::trim).collect();
    let domain = if items.len() == 1 && items[0].contains("..") {
        let (lo, hi) = parse_int_range(line, items[0])?;
        Domain::range(lo, hi).map_err(|e| err(line, strip_invalid(e)))?
    } else {
        if items.len() > 1 && items.iter().any(|t| t.contains("..")) {
            return Err(err(line, "mixed-kind domain: ranges cannot appear in a value list"));
        }
        if items.len() < 2 {
            return Err(err(line, "domain too small"));
        }
        Domain::list(items).map_err(|e| err(line, strip_invalid(e)))?
    };
    Ok(VarDecl {
        line,
        name: name.to_string(),
        domain,
    })
}

fn strip_invalid(e: Error) -> String {
    match e {
        Error::Invalid(msg) => msg,
        other => other.to_string(),
    }
}

fn parse_int_range(line: usize, text: &str) -> Result<(i64, i64)> {
    let (lo, hi) = text
        .split_once("..")
        .ok_or_else(|| err(line, format!("expected `lo..hi`, got `{text}`")))?;
    let lo = lo
        .trim()
        .parse()
        .map_err(|_| err(line, format!("`{lo}` is not an integer")))?;
    let hi = hi
        .trim()
        .parse()
        .map_err(|_| err(line, format!("`{hi}` is not an integer")))?;
    Ok((lo, hi))
}

fn read_cpt_header(line: usize, rest: &str) -> Result<CptDecl> {
    let (var, parents) = match rest.split_once('|') {
        Some((v, p)) => (v.trim(), Some(p)),
        None => (rest.trim(), None),
    };
    if !is_token(var) {
        return Err(err(line, format!("invalid CPT variable `{var}`")));
    }
    let parents = match parents {
        Some(p) => p
            .split(',')
            .map(str::trim)
            .map(|p| {
                if is_token(p) {
                    Ok(p.to_string())
                } else {
                    Err(err(line, format!("invalid parent name `{p}`")))
                }
            })
            .collect::<Result<Vec<_>>>()?,
        None => Vec::new(),
    };
    Ok(CptDecl {
        line,
        var: var.to_string(),
        parents,
        rows: Vec::new(),
    })
}

fn read_row(line: usize, content: &str) -> Result<RowDecl> {
    let (lhs, rhs) = content
        .split_once(':')
        .ok_or_else(|| err(line, "expected `<conditions> : <ranking>`"))?;
    let lhs = lhs.trim();
    let conds = if lhs.is_empty() {
        Vec::new()
    } else {
        lhs.split('&')
            .map(|c| read_cond(line, c.trim()))
            .collect::<Result<Vec<_>>>()?
    };
    Ok(RowDecl {
        line,
        conds,
        ranking: read_ranking(line, rhs.trim())?,
    })
}

fn read_cond(line: usize, text: &str) -> Result<(String, CondText)> {
    if let Some((p, v)) = text.split_once('=') {
        let (p, v) = (p.trim(), v.trim());
        if !is_token(p) || !is_token(v) {
            return Err(err(line, format!("malformed condition `{text}`")));
        }
        return Ok((p.to_string(), CondText::Eq(v.to_string())));
    }
    let mut words = text.splitn(3, char::is_whitespace);
    let (p, kw, rest) = (words.next(), words.next(), words.next());
    let (Some(p), Some("in"), Some(rest)) = (p, kw, rest) else {
        return Err(err(line, format!("malformed condition `{text}`")));
    };
    let rest = rest.trim();
    let cond = if let Some(inner) = rest.strip_prefix('{') {
        let inner = inner
            .strip_suffix('}')
            .ok_or_else(|| err(line, format!("unterminated value set in `{text}`")))?;
        let values = inner
            .split(',')
            .map(str::trim)
            .map(|v| {
                if is_token(v) {
                    Ok(v.to_string())
                } else {
                    Err(err(line, format!("invalid value `{v}` in set")))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        CondText::Set(values)
    } else if let Some((lo, hi)) = rest.split_once("..") {
        CondText::Range(lo.trim().to_string(), hi.trim().to_string())
    } else {
        return Err(err(line, format!("expected a range or a value set in `{text}`")));
    };
    Ok((p.to_string(), cond))
}

fn read_ranking(line: usize, text: &str) -> Result<RankText> {
    if text.contains('~') {
        return Err(err(line, "ties (`~`) are not supported: rankings must be strict total orders"));
    }
    match text {
        "ASC" => Ok(RankText::Asc),
        "DESC" => Ok(RankText::Desc),
        "" => Err(err(line, "missing ranking")),
        _ => {
            let values = text
                .split('>')
                .map(str::trim)
                .map(|v| {
                    if is_token(v) {
                        Ok(v.to_string())
                    } else {
                        Err(err(line, format!("invalid ranking value `{v}`")))
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(RankText::Explicit(values))
        }
    }
}

fn lookup(line: usize, domain: &Domain, owner: &str, token: &str) -> Result<Value> {
    domain
        .index_of(token)
        .ok_or_else(|| err(line, format!("unknown value `{token}` for `{owner}`")))
}

fn resolve_cond(line: usize, parent: &str, domain: &Domain, cond: &CondText) -> Result<Condition> {
    Ok(match cond {
        CondText::Eq(v) => Condition::Eq(lookup(line, domain, parent, v)?),
        CondText::Range(lo, hi) => {
            let (lo, hi) = (lookup(line, domain, parent, lo)?, lookup(line, domain, parent, hi)?);
            if lo > hi {
                return Err(err(line, format!("empty range on `{parent}`")));
            }
            Condition::Range(lo, hi)
        }
        CondText::Set(vs) => {
            let mut values = Vec::with_capacity(vs.len());
            for v in vs {
                let idx = lookup(line, domain, parent, v)?;
                if values.contains(&idx) {
                    return Err(err(line, format!("value `{v}` repeated in set")));
                }
                values.push(idx);
            }
            Condition::Set(values)
        }
    })
}

fn resolve_ranking(line: usize, domain: &Domain, ranking: &RankText) -> Result<Ranking> {
    match ranking {
        RankText::Asc => Ok(Ranking::asc(domain.len())),
        RankText::Desc => Ok(Ranking::desc(domain.len())),
        RankText::Explicit(tokens) => {
            let mut order = Vec::with_capacity(tokens.len());
            let mut seen = vec![false; domain.len()];
            for t in tokens {
                let v = domain
                    .index_of(t)
                    .ok_or_else(|| err(line, format!("unknown ranking value `{t}`")))?;
                if std::mem::replace(&mut seen[v as usize], true) {
                    return Err(err(line, format!("duplicate ranking value `{t}`")));
                }
                order.push(v);
            }
            if order.len() != domain.len() {
                return Err(err(
                    line,
                    format!(
                        "ranking is not total: lists {} of {} values",
                        order.len(),
                        domain.len()
                    ),
                ));
            }
            Ranking::explicit(order, domain.len()).map_err(|e| err(line, strip_invalid(e)))
        }
    }
}

/// Canonical text: variables, then tables, both in declaration order.
pub fn serialize_cpnet(net: &CpNet) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "NET {}", net.name());
    for var in net.variables() {
        let _ = match &var.domain {
            Domain::List(values) => writeln!(out, "VAR {} : {}", var.name, values.join(", ")),
            Domain::Range { lo, hi } => writeln!(out, "VAR {} : {lo}..{hi}", var.name),
        };
    }
    for id in net.var_ids() {
        let var = net.var(id);
        out.push('\n');
        if var.parents.is_empty() {
            let _ = writeln!(out, "CPT {}", var.name);
        } else {
            let parents: Vec<&str> = var.parents.iter().map(|p| net.var(*p).name.as_str()).collect();
            let _ = writeln!(out, "CPT {} | {}", var.name, parents.join(", "));
        }
        for row in &net.cpt(id).rows {
            let conds: Vec<String> = row
                .conditions
                .iter()
                .zip(&var.parents)
                .map(|(c, &p)| format_condition(net, p, c))
                .collect();
            let lhs = conds.join(" & ");
            let sep = if lhs.is_empty() { "" } else { " " };
            let _ = writeln!(out, "  {lhs}{sep}: {}", format_ranking(net, id, &row.ranking));
        }
    }
    out
}

fn format_condition(net: &CpNet, parent: VarId, cond: &Condition) -> String {
    let name = &net.var(parent).name;
    match cond {
        Condition::Eq(v) => format!("{name}={}", net.token(parent, *v)),
        Condition::Range(lo, hi) => {
            format!("{name} in {}..{}", net.token(parent, *lo), net.token(parent, *hi))
        }
        Condition::Set(vs) => {
            let values: Vec<_> = vs.iter().map(|v| net.token(parent, *v)).collect();
            format!("{name} in {{{}}}", values.join(", "))
        }
    }
}

pub(crate) fn format_ranking(net: &CpNet, var: VarId, ranking: &Ranking) -> String {
    match ranking {
        Ranking::Asc { .. } => "ASC".into(),
        Ranking::Desc { .. } => "DESC".into(),
        Ranking::Explicit { order, .. } => order
            .iter()
            .map(|v| net.token(var, *v))
            .collect::<Vec<_>>()
            .join(" > "),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG4: &str = include_str!("../fixtures/fig4.mlcp");

    fn parse_err(text: &str) -> (usize, String) {
        match parse_cpnet(text) {
            Err(Error::Parse { line, reason }) => (line, reason),
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn parses_fig4() {
        let net = parse_cpnet(FIG4).unwrap();
        assert_eq!(net.name(), "fig4");
        let x = net.var_id("X").unwrap();
        let y = net.var_id("Y").unwrap();
        assert_eq!(net.var(x).domain, Domain::Range { lo: 1, hi: 6 });
        assert_eq!(net.var(y).domain, Domain::List(vec!["a".into(), "b".into()]));
        assert_eq!(net.var(y).parents, vec![x]);
        assert_eq!(net.cpt(y).rows.len(), 2);
    }

    #[test]
    fn single_value_domain_is_too_small() {
        let (line, reason) = parse_err("NET n\nVAR X : a\nCPT X\n : a\n");
        assert_eq!(line, 2);
        assert!(reason.contains("domain too small"), "{reason}");
    }

    #[test]
    fn ties_are_rejected() {
        let (line, reason) = parse_err("NET n\nVAR X : a, b, c\nCPT X\n  : a > b ~ c\n");
        assert_eq!(line, 4);
        assert!(reason.contains("ties"));
    }

    #[test]
    fn duplicate_ranking_value() {
        let (line, reason) = parse_err("NET n\nVAR X : a, b\nCPT X\n  : a > a\n");
        assert_eq!(line, 4);
        assert!(reason.contains("duplicate ranking value"));
    }

    #[test]
    fn unknown_names() {
        let (line, reason) = parse_err("NET n\nVAR X : a, b\nCPT X | Z\n  : a > b\n");
        assert_eq!(line, 3);
        assert!(reason.contains("unknown parent"));
        let (line, reason) =
            parse_err("NET n\nVAR X : a, b\nVAR Y : 1..3\nCPT X\n : ASC\nCPT Y | X\n X=c : ASC\n");
        assert_eq!(line, 7);
        assert!(reason.contains("unknown value `c`"));
    }

    #[test]
    fn mixed_kind_domain() {
        let (_, reason) = parse_err("NET n\nVAR X : 1..3, a\nCPT X\n : ASC\n");
        assert!(reason.contains("mixed-kind"));
    }

    #[test]
    fn every_parent_needs_one_predicate() {
        let text = "NET n\nVAR A : a, b\nVAR B : a, b\nVAR C : a, b\n\
                    CPT A\n : ASC\nCPT B\n : ASC\nCPT C | A, B\n A=a : ASC\n";
        let (line, reason) = parse_err(text);
        assert_eq!(line, 10);
        assert!(reason.contains("does not constrain parent `B`"));
    }

    #[test]
    fn overlapping_rows_fail_structure() {
        let text = "NET n\nVAR P : 1..100\nVAR Q : x, y\nCPT P\n : ASC\nCPT Q | P\n\
                    P in 1..50 : x > y\n P in 40..100 : y > x\n";
        assert!(matches!(parse_cpnet(text), Err(Error::Structure(_))));
        assert!(parse_cpnet_unchecked(text).is_ok());
    }

    #[test]
    fn range_shorthand_survives_serialization() {
        let text = "NET big\nVAR P : 1..1000\nCPT P\n  : DESC\n";
        let out = serialize_cpnet(&parse_cpnet(text).unwrap());
        assert!(out.contains("VAR P : 1..1000"));
        assert!(out.len() < 100, "range was expanded: {} bytes", out.len());
    }

    #[test]
    fn fig4_canonical_text_is_stable() {
        let net = parse_cpnet(FIG4).unwrap();
        let a = serialize_cpnet(&net);
        assert_eq!(a, serialize_cpnet(&parse_cpnet(FIG4).unwrap()));
        assert_eq!(
            a,
            "NET fig4\nVAR X : 1..6\nVAR Y : a, b\n\nCPT X\n  : ASC\n\nCPT Y | X\n  X in 1..3 : b > a\n  X in 4..6 : a > b\n"
        );
        assert_eq!(parse_cpnet(&a).unwrap(), net);
    }
}
