//! Line-oriented text format for algebroid and regular-foliation
//! presentations, with `[section]` headers. Every builtin serializes
//! to this format and parses back to an identical structure.

use std::collections::BTreeMap;

use folia_core::algebroid::BasisRef;
use folia_core::forms::DifferentialForm;
use folia_core::graded::{GradedBundle, Section};
use folia_core::parse::{parse_poly, parse_ratlog, parse_section};
use folia_core::poly::{Poly, Q, Vars};
use folia_core::ratlog::RatLog;
use folia_core::regfol::RegularPresentation;
use folia_core::{LieNAlgebroid, VectorField};

/// A located parse failure.
#[derive(Debug, Clone)]
pub struct FileError {
    pub line: usize,
    pub msg: String,
}

impl std::fmt::Display for FileError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.msg)
    }
}

type FResult<T> = Result<T, FileError>;

/// Pipeline options carried by a presentation file.
#[derive(Debug, Clone, Default)]
pub struct FileOptions {
    pub degree_bound: Option<u32>,
    pub obstruction_points: Vec<Vec<Q>>,
    pub witness: Option<String>,
    pub locus: Option<String>,
}

/// A parsed presentation: either structure data for the modular
/// pipeline or a regular foliation for the Bott calculus.
pub enum Presentation {
    Algebroid(LieNAlgebroid, FileOptions),
    Regular(RegularPresentation, FileOptions),
}

struct Block {
    header: Vec<String>,
    header_line: usize,
    lines: Vec<(usize, String)>,
}

fn split_blocks(input: &str) -> FResult<Vec<Block>> {
    let mut blocks: Vec<Block> = Vec::new();
    for (i, raw) in input.lines().enumerate() {
        let line_no = i + 1;
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let inner = rest.strip_suffix(']').ok_or(FileError {
                line: line_no,
                msg: "unterminated section header".into(),
            })?;
            blocks.push(Block {
                header: inner.split_whitespace().map(str::to_string).collect(),
                header_line: line_no,
                lines: Vec::new(),
            });
        } else {
            match blocks.last_mut() {
                Some(b) => b.lines.push((line_no, line.to_string())),
                None => {
                    return Err(FileError {
                        line: line_no,
                        msg: "content before the first [section] header".into(),
                    })
                }
            }
        }
    }
    Ok(blocks)
}

fn err<T>(line: usize, msg: impl Into<String>) -> FResult<T> {
    Err(FileError {
        line,
        msg: msg.into(),
    })
}

fn split_entry(line: &str, line_no: usize) -> FResult<(&str, &str)> {
    match line.split_once(':') {
        Some((k, v)) => Ok((k.trim(), v.trim())),
        None => err(line_no, "expected `key: value`"),
    }
}

/// Parses the presentation text format.
pub fn parse_presentation(input: &str) -> FResult<Presentation> {
    let blocks = split_blocks(input)?;
    let kind = blocks
        .iter()
        .find(|b| b.header == ["kind"])
        .ok_or(FileError {
            line: 1,
            msg: "missing [kind] section".into(),
        })?;
    let kind_val = kind
        .lines
        .first()
        .map(|(_, l)| l.as_str())
        .unwrap_or_default();
    match kind_val {
        "algebroid" => parse_algebroid(&blocks).map(|(a, o)| Presentation::Algebroid(a, o)),
        "regular" => parse_regular(&blocks).map(|(p, o)| Presentation::Regular(p, o)),
        other => err(kind.header_line, format!("unknown kind {other:?}")),
    }
}

fn get_block<'a>(blocks: &'a [Block], name: &str) -> Option<&'a Block> {
    blocks.iter().find(|b| b.header.first().map(String::as_str) == Some(name) && b.header.len() == 1)
}

fn require_block<'a>(blocks: &'a [Block], name: &str) -> FResult<&'a Block> {
    get_block(blocks, name).ok_or(FileError {
        line: 1,
        msg: format!("missing [{name}] section"),
    })
}

fn parse_vars(blocks: &[Block]) -> FResult<Vars> {
    let b = require_block(blocks, "variables")?;
    let names: Vec<String> = b
        .lines
        .iter()
        .flat_map(|(_, l)| l.split_whitespace().map(str::to_string))
        .collect();
    if names.is_empty() {
        return err(b.header_line, "no variables listed");
    }
    Ok(Vars::new(names))
}

fn parse_options(blocks: &[Block], vars: &Vars) -> FResult<FileOptions> {
    let mut opts = FileOptions::default();
    if let Some(b) = get_block(blocks, "options") {
        for (ln, line) in &b.lines {
            let (k, v) = match line.split_once('=') {
                Some((k, v)) => (k.trim(), v.trim()),
                None => return err(*ln, "expected `name = value`"),
            };
            match k {
                "degree_bound" => match v.parse::<u32>() {
                    Ok(d) => opts.degree_bound = Some(d),
                    Err(_) => return err(*ln, "degree_bound must be a non-negative integer"),
                },
                other => return err(*ln, format!("unknown option {other:?}")),
            }
        }
    }
    if let Some(b) = get_block(blocks, "obstruction_points") {
        for (ln, line) in &b.lines {
            let mut point = Vec::new();
            for piece in line.split(',') {
                let p = parse_poly(piece.trim(), vars)
                    .map_err(|e| FileError {
                        line: *ln,
                        msg: e.to_string(),
                    })?
                    .as_constant()
                    .ok_or(FileError {
                        line: *ln,
                        msg: "obstruction point coordinates must be rational constants".into(),
                    })?;
                point.push(p);
            }
            if point.len() != vars.len() {
                return err(*ln, "point length must equal the variable count");
            }
            opts.obstruction_points.push(point);
        }
    }
    if let Some(b) = get_block(blocks, "witness") {
        if let Some((ln, line)) = b.lines.first() {
            // validate now, store the text
            parse_ratlog(line, vars).map_err(|e| FileError {
                line: *ln,
                msg: e.to_string(),
            })?;
            opts.witness = Some(line.clone());
        }
    }
    if let Some(b) = get_block(blocks, "locus") {
        if let Some((ln, line)) = b.lines.first() {
            parse_poly(line, vars).map_err(|e| FileError {
                line: *ln,
                msg: e.to_string(),
            })?;
            opts.locus = Some(line.clone());
        }
    }
    Ok(opts)
}

fn parse_components(line: &str, vars: &Vars, ln: usize) -> FResult<Vec<Poly>> {
    let pieces: Vec<&str> = line.split(',').map(str::trim).collect();
    if pieces.len() != vars.len() {
        return err(ln, "component count must equal the variable count");
    }
    pieces
        .iter()
        .map(|p| {
            parse_poly(p, vars).map_err(|e| FileError {
                line: ln,
                msg: e.to_string(),
            })
        })
        .collect()
}

fn parse_algebroid(blocks: &[Block]) -> FResult<(LieNAlgebroid, FileOptions)> {
    let vars = parse_vars(blocks)?;
    let rb = require_block(blocks, "ranks")?;
    let ranks: Vec<usize> = rb
        .lines
        .iter()
        .flat_map(|(_, l)| l.split_whitespace())
        .map(|t| t.parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| FileError {
            line: rb.header_line,
            msg: "ranks must be positive integers".into(),
        })?;
    if ranks.is_empty() || ranks.iter().any(|&r| r == 0) {
        return err(rb.header_line, "ranks must be positive");
    }
    let depth = ranks.len();
    let mut labels: Vec<Vec<String>> = Vec::new();
    for lv in 0..depth {
        let name = format!("labels {lv}");
        let b = blocks
            .iter()
            .find(|b| b.header.len() == 2 && b.header[0] == "labels" && b.header[1] == lv.to_string())
            .ok_or(FileError {
                line: 1,
                msg: format!("missing [{name}] section"),
            })?;
        let ls: Vec<String> = b
            .lines
            .iter()
            .flat_map(|(_, l)| l.split_whitespace().map(str::to_string))
            .collect();
        if ls.len() != ranks[lv] {
            return err(b.header_line, format!("expected {} labels", ranks[lv]));
        }
        labels.push(ls);
    }
    let bundle = GradedBundle::new(ranks.clone(), labels.clone());

    let find_label = |lv: usize, name: &str, ln: usize| -> FResult<usize> {
        labels[lv]
            .iter()
            .position(|l| l == name)
            .ok_or(FileError {
                line: ln,
                msg: format!("unknown level-{lv} basis label {name:?}"),
            })
    };

    // anchor rows
    let ab = require_block(blocks, "anchor")?;
    let mut anchor_rows: BTreeMap<usize, VectorField> = BTreeMap::new();
    for (ln, line) in &ab.lines {
        let (label, rest) = split_entry(line, *ln)?;
        let idx = find_label(0, label, *ln)?;
        let comps = parse_components(rest, &vars, *ln)?;
        anchor_rows.insert(idx, VectorField::new(&vars, comps));
    }
    let mut anchor = Vec::new();
    for i in 0..ranks[0] {
        anchor.push(anchor_rows.remove(&i).ok_or(FileError {
            line: ab.header_line,
            msg: format!("missing anchor row for {}", labels[0][i]),
        })?);
    }

    // unary maps
    let mut l1 = Vec::new();
    for lv in 1..depth {
        let b = blocks
            .iter()
            .find(|b| b.header.len() == 2 && b.header[0] == "l1" && b.header[1] == lv.to_string())
            .ok_or(FileError {
                line: 1,
                msg: format!("missing [l1 {lv}] section"),
            })?;
        let mut rows: BTreeMap<usize, Section> = BTreeMap::new();
        for (ln, line) in &b.lines {
            let (label, rest) = split_entry(line, *ln)?;
            let idx = find_label(lv, label, *ln)?;
            let s = parse_section(rest, &vars, &labels[lv - 1], lv - 1).map_err(|e| FileError {
                line: *ln,
                msg: e.to_string(),
            })?;
            rows.insert(idx, s);
        }
        let mut maps = Vec::new();
        for i in 0..ranks[lv] {
            maps.push(rows.remove(&i).ok_or(FileError {
                line: b.header_line,
                msg: format!("missing l1 row for {}", labels[lv][i]),
            })?);
        }
        l1.push(maps);
    }

    // declared 2-brackets
    let mut l2: Vec<(BasisRef, BasisRef, Section)> = Vec::new();
    for b in blocks.iter().filter(|b| b.header.first().map(String::as_str) == Some("l2")) {
        if b.header.len() != 3 {
            return err(b.header_line, "expected [l2 <level> <level>]");
        }
        let la: usize = b.header[1].parse().map_err(|_| FileError {
            line: b.header_line,
            msg: "bad level".into(),
        })?;
        let lb: usize = b.header[2].parse().map_err(|_| FileError {
            line: b.header_line,
            msg: "bad level".into(),
        })?;
        if la >= depth || lb >= depth {
            return err(b.header_line, "bracket level out of range");
        }
        for (ln, line) in &b.lines {
            let (pair, rest) = split_entry(line, *ln)?;
            let names: Vec<&str> = pair.split_whitespace().collect();
            if names.len() != 2 {
                return err(*ln, "expected two basis labels before the colon");
            }
            let ia = find_label(la, names[0], *ln)?;
            let ib = find_label(lb, names[1], *ln)?;
            let target = la + lb;
            if target >= depth {
                return err(*ln, "bracket entry lands below the deepest level");
            }
            let s = parse_section(rest, &vars, &labels[target], target).map_err(|e| {
                FileError {
                    line: *ln,
                    msg: e.to_string(),
                }
            })?;
            l2.push(((la, ia), (lb, ib), s));
        }
    }

    // 3-brackets: header presence declares the table
    let l3 = match get_block(blocks, "l3") {
        None => None,
        Some(b) => {
            let mut entries = Vec::new();
            for (ln, line) in &b.lines {
                let (triple, rest) = split_entry(line, *ln)?;
                let names: Vec<&str> = triple.split_whitespace().collect();
                if names.len() != 3 {
                    return err(*ln, "expected three basis labels before the colon");
                }
                let t = [
                    find_label(0, names[0], *ln)?,
                    find_label(0, names[1], *ln)?,
                    find_label(0, names[2], *ln)?,
                ];
                if depth < 2 {
                    return err(*ln, "a depth-1 structure has no 3-bracket targets");
                }
                let s = parse_section(rest, &vars, &labels[1], 1).map_err(|e| FileError {
                    line: *ln,
                    msg: e.to_string(),
                })?;
                entries.push((t, s));
            }
            Some(entries)
        }
    };

    let opts = parse_options(blocks, &vars)?;
    let alg = LieNAlgebroid::new(vars, bundle, anchor, l1, l2, l3).map_err(|e| FileError {
        line: 1,
        msg: e.to_string(),
    })?;
    Ok((alg, opts))
}

fn parse_regular(blocks: &[Block]) -> FResult<(RegularPresentation, FileOptions)> {
    let vars = parse_vars(blocks)?;
    let gb = require_block(blocks, "generators")?;
    let mut generators = Vec::new();
    for (ln, line) in &gb.lines {
        let (name, rest) = split_entry(line, *ln)?;
        let comps = parse_components(rest, &vars, *ln)?;
        generators.push((name.to_string(), VectorField::new(&vars, comps)));
    }
    if generators.is_empty() {
        return err(gb.header_line, "no generators listed");
    }
    let anb = require_block(blocks, "annihilator")?;
    let mut annihilator = Vec::new();
    for (ln, line) in &anb.lines {
        let (name, rest) = split_entry(line, *ln)?;
        let comps = parse_components(rest, &vars, *ln)?;
        annihilator.push((name.to_string(), DifferentialForm::one_form(&vars, comps)));
    }
    let tb = require_block(blocks, "transverse")?;
    let mut degree: Option<usize> = None;
    let mut terms: Vec<(Vec<usize>, Poly)> = Vec::new();
    for (ln, line) in &tb.lines {
        let (word, rest) = split_entry(line, *ln)?;
        let idxs: Vec<usize> = word
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|_| FileError {
                line: *ln,
                msg: "expected 1-based coordinate indices".into(),
            })?;
        if idxs.iter().any(|&i| i == 0 || i > vars.len()) {
            return err(*ln, "coordinate index out of range");
        }
        let zero_based: Vec<usize> = idxs.iter().map(|&i| i - 1).collect();
        if !zero_based.windows(2).all(|w| w[0] < w[1]) {
            return err(*ln, "index word must be strictly increasing");
        }
        match degree {
            None => degree = Some(zero_based.len()),
            Some(d) if d == zero_based.len() => {}
            Some(_) => return err(*ln, "mixed degrees in the transverse form"),
        }
        let c = parse_poly(rest, &vars).map_err(|e| FileError {
            line: *ln,
            msg: e.to_string(),
        })?;
        terms.push((zero_based, c));
    }
    let degree = degree.ok_or(FileError {
        line: tb.header_line,
        msg: "empty transverse form".into(),
    })?;
    let mut transverse = DifferentialForm::zero(&vars, degree);
    for (w, c) in terms {
        transverse.add_term(w, RatLog::from_poly(c));
    }
    let opts = parse_options(blocks, &vars)?;
    let locus = match &opts.locus {
        Some(text) => Some(parse_poly(text, &vars).expect("validated above")),
        None => None,
    };
    Ok((
        RegularPresentation {
            name: "file".into(),
            generators,
            annihilator,
            transverse,
            singular_locus: locus,
        },
        opts,
    ))
}

/// Serializes an algebroid to the text format.
pub fn serialize_algebroid(alg: &LieNAlgebroid, opts: &FileOptions) -> String {
    let vars = alg.vars();
    let bundle = alg.bundle();
    let mut out = String::new();
    out.push_str("[kind]\nalgebroid\n\n[variables]\n");
    out.push_str(&vars.names().join(" "));
    out.push_str("\n\n[ranks]\n");
    out.push_str(
        &(0..bundle.depth())
            .map(|lv| bundle.rank(lv).to_string())
            .collect::<Vec<_>>()
            .join(" "),
    );
    out.push('\n');
    for lv in 0..bundle.depth() {
        out.push_str(&format!("\n[labels {lv}]\n"));
        out.push_str(&bundle.labels(lv).join(" "));
        out.push('\n');
    }
    out.push_str("\n[anchor]\n");
    for i in 0..bundle.rank(0) {
        let comps: Vec<String> = alg
            .anchor_of_basis(i)
            .components()
            .iter()
            .map(|p| p.to_string())
            .collect();
        out.push_str(&format!("{}: {}\n", bundle.label(0, i), comps.join(", ")));
    }
    for lv in 1..bundle.depth() {
        out.push_str(&format!("\n[l1 {lv}]\n"));
        for i in 0..bundle.rank(lv) {
            let s = alg.l1_of_basis(lv, i).expect("level >= 1");
            out.push_str(&format!(
                "{}: {}\n",
                bundle.label(lv, i),
                s.display(bundle)
            ));
        }
    }
    // group declared 2-brackets by level pair
    let mut groups: BTreeMap<(usize, usize), Vec<String>> = BTreeMap::new();
    for (a, b, s) in alg.l2_declared_entries() {
        groups.entry((a.0, b.0)).or_default().push(format!(
            "{} {}: {}",
            bundle.label(a.0, a.1),
            bundle.label(b.0, b.1),
            s.display(bundle)
        ));
    }
    for ((la, lb), lines) in groups {
        out.push_str(&format!("\n[l2 {la} {lb}]\n"));
        for l in lines {
            out.push_str(&l);
            out.push('\n');
        }
    }
    if alg.l3_is_declared() {
        out.push_str("\n[l3]\n");
        for (t, s) in alg.l3_declared_entries() {
            out.push_str(&format!(
                "{} {} {}: {}\n",
                bundle.label(0, t[0]),
                bundle.label(0, t[1]),
                bundle.label(0, t[2]),
                s.display(bundle)
            ));
        }
    }
    serialize_options(&mut out, opts);
    out
}

/// Serializes a regular presentation to the text format.
pub fn serialize_regular(p: &RegularPresentation, opts: &FileOptions) -> String {
    let vars = p
        .generators
        .first()
        .map(|(_, f)| f.vars().clone())
        .expect("at least one generator");
    let mut out = String::new();
    out.push_str("[kind]\nregular\n\n[variables]\n");
    out.push_str(&vars.names().join(" "));
    out.push_str("\n\n[generators]\n");
    for (name, f) in &p.generators {
        let comps: Vec<String> = f.components().iter().map(|c| c.to_string()).collect();
        out.push_str(&format!("{name}: {}\n", comps.join(", ")));
    }
    out.push_str("\n[annihilator]\n");
    for (name, xi) in &p.annihilator {
        let comps: Vec<String> = (0..vars.len())
            .map(|i| {
                xi.coefficient(&[i])
                    .as_poly()
                    .map(|q| q.to_string())
                    .unwrap_or_else(|| "0".into())
            })
            .collect();
        out.push_str(&format!("{name}: {}\n", comps.join(", ")));
    }
    out.push_str("\n[transverse]\n");
    for (w, c) in p.transverse.terms() {
        let idxs: Vec<String> = w.iter().map(|&i| (i + 1).to_string()).collect();
        let poly = c.as_poly().map(|q| q.to_string()).unwrap_or_else(|| c.to_string());
        out.push_str(&format!("{}: {}\n", idxs.join(" "), poly));
    }
    let mut opts = opts.clone();
    if opts.locus.is_none() {
        opts.locus = p.singular_locus.as_ref().map(|l| l.to_string());
    }
    serialize_options(&mut out, &opts);
    out
}

fn serialize_options(out: &mut String, opts: &FileOptions) {
    if let Some(d) = opts.degree_bound {
        out.push_str(&format!("\n[options]\ndegree_bound = {d}\n"));
    }
    if !opts.obstruction_points.is_empty() {
        out.push_str("\n[obstruction_points]\n");
        for p in &opts.obstruction_points {
            let comps: Vec<String> = p
                .iter()
                .map(|q| {
                    if q.denom() == &num_bigint_one() {
                        q.numer().to_string()
                    } else {
                        format!("{}/{}", q.numer(), q.denom())
                    }
                })
                .collect();
            out.push_str(&comps.join(", "));
            out.push('\n');
        }
    }
    if let Some(w) = &opts.witness {
        out.push_str(&format!("\n[witness]\n{w}\n"));
    }
    if let Some(l) = &opts.locus {
        out.push_str(&format!("\n[locus]\n{l}\n"));
    }
}

fn num_bigint_one() -> num_bigint::BigInt {
    num_bigint::BigInt::from(1)
}
