//! Versioned text formats for shift specifications, patterns and tori.
//!
//! ```text
//! format_version 1
//! kind shift
//! name golden_mean
//! dimension 1
//! rule_radius 1
//! wang false
//! symbol 0
//! symbol 1
//! forbid 0=1 1=1
//! ```
//!
//! A forbid cell value is a symbol name, a set literal `{a,b}` or a class
//! reference `@name` declared by a `class name a b ...` line. Symbol lines
//! take `faces=l0,l1,...` (negative then positive face per axis) and any
//! number of integer attributes `key=value`. Lines starting with `#` are
//! kept as notes and written back at the top of the file.

use crate::alphabet::{Alphabet, Symbol, SymbolId, SymbolSet};
use crate::error::{Error, Result};
use crate::lattice::Coord;
use crate::pattern::{Pattern, TorusConfig};
use crate::spec::{ForbiddenPattern, ShiftSpec};
use std::collections::BTreeMap;
use std::fmt::Write;

pub const FORMAT_VERSION: u32 = 1;

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

struct Lines<'a> {
    items: Vec<(usize, &'a str)>,
    notes: Vec<String>,
}

fn lines(text: &str) -> Lines<'_> {
    let mut items = Vec::new();
    let mut notes = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let t = raw.trim();
        if t.is_empty() {
            continue;
        }
        if let Some(n) = t.strip_prefix('#') {
            notes.push(n.strip_prefix(' ').unwrap_or(n).to_string());
            continue;
        }
        items.push((i + 1, t));
    }
    Lines { items, notes }
}

fn header<'a>(l: &Lines<'a>, kind: &str) -> Result<usize> {
    let (n0, first) = *l.items.first().ok_or_else(|| perr(0, "empty file"))?;
    match first.strip_prefix("format_version ") {
        Some(v) if v.trim() == FORMAT_VERSION.to_string() => {}
        Some(v) => return Err(perr(n0, format!("unsupported format_version {v}"))),
        None => return Err(perr(n0, "expected `format_version`")),
    }
    let (n1, second) = *l.items.get(1).ok_or_else(|| perr(n0, "missing `kind`"))?;
    if second != format!("kind {kind}") {
        return Err(perr(n1, format!("expected `kind {kind}`")));
    }
    Ok(2)
}

fn parse_list<T: std::str::FromStr>(s: &str, line: usize) -> Result<Vec<T>> {
    s.split(',')
        .map(|t| t.trim().parse::<T>().map_err(|_| perr(line, format!("bad number in `{s}`"))))
        .collect()
}

fn parse_coord(s: &str, d: usize, line: usize) -> Result<Coord> {
    let c: Coord = s.parse().map_err(|e: String| perr(line, e))?;
    if c.dim() != d {
        return Err(perr(line, format!("coordinate `{s}` is not {d}-dimensional")));
    }
    Ok(c)
}

/// Parses a shift specification.
pub fn parse_spec(text: &str) -> Result<ShiftSpec> {
    let l = lines(text);
    let start = header(&l, "shift")?;
    let mut name = None;
    let mut dim = None;
    let mut radius = None;
    let mut wang = None;
    let mut symbols: Vec<Symbol> = Vec::new();
    let mut alphabet: Option<Alphabet> = None;
    let mut classes: BTreeMap<String, SymbolSet> = BTreeMap::new();
    let mut forbidden = Vec::new();

    for &(n, line) in &l.items[start..] {
        let (key, rest) = line.split_once(' ').unwrap_or((line, ""));
        let rest = rest.trim();
        match key {
            "name" => name = Some(rest.to_string()),
            "dimension" => dim = Some(rest.parse::<usize>().map_err(|_| perr(n, "bad dimension"))?),
            "rule_radius" => radius = Some(parse_list::<u32>(rest, n)?),
            "wang" => {
                wang = Some(match rest {
                    "true" => true,
                    "false" => false,
                    _ => return Err(perr(n, "wang must be true or false")),
                })
            }
            "symbol" => {
                if alphabet.is_some() {
                    return Err(perr(n, "symbol after class or forbid"));
                }
                let mut toks = rest.split_whitespace();
                let sname = toks.next().ok_or_else(|| perr(n, "symbol needs a name"))?;
                let mut sym = Symbol::plain(sname);
                for tok in toks {
                    let (k, v) = tok.split_once('=').ok_or_else(|| perr(n, format!("bad token `{tok}`")))?;
                    if k == "faces" {
                        sym.faces = Some(v.split(',').map(str::to_string).collect());
                    } else {
                        let v = v.parse::<i64>().map_err(|_| perr(n, format!("attribute `{k}` needs an integer")))?;
                        sym.attrs.insert(k.to_string(), v);
                    }
                }
                symbols.push(sym);
            }
            "class" | "forbid" => {
                if alphabet.is_none() {
                    alphabet = Some(Alphabet::new(std::mem::take(&mut symbols)).map_err(|e| perr(n, e.to_string()))?);
                }
                let a = alphabet.as_ref().unwrap();
                if key == "class" {
                    let mut toks = rest.split_whitespace();
                    let cname = toks.next().ok_or_else(|| perr(n, "class needs a name"))?;
                    let mut set = SymbolSet::EMPTY;
                    for t in toks {
                        set.insert(a.id(t).map_err(|e| perr(n, e.to_string()))?);
                    }
                    classes.insert(cname.to_string(), set);
                } else {
                    let d = dim.ok_or_else(|| perr(n, "dimension must precede forbid"))?;
                    let mut cells = Vec::new();
                    for tok in rest.split_whitespace() {
                        let (c, v) = tok.split_once('=').ok_or_else(|| perr(n, format!("bad cell `{tok}`")))?;
                        let c = parse_coord(c, d, n)?;
                        let set = if let Some(cl) = v.strip_prefix('@') {
                            *classes.get(cl).ok_or_else(|| perr(n, format!("unknown class `{cl}`")))?
                        } else if let Some(inner) = v.strip_prefix('{').and_then(|x| x.strip_suffix('}')) {
                            let mut s = SymbolSet::EMPTY;
                            for t in inner.split(',') {
                                s.insert(a.id(t).map_err(|e| perr(n, e.to_string()))?);
                            }
                            s
                        } else {
                            SymbolSet::single(a.id(v).map_err(|e| perr(n, e.to_string()))?)
                        };
                        cells.push((c, set));
                    }
                    forbidden.push(ForbiddenPattern::new(cells).map_err(|e| perr(n, e.to_string()))?);
                }
            }
            _ => return Err(perr(n, format!("unknown directive `{key}`"))),
        }
    }
    let alphabet = match alphabet {
        Some(a) => a,
        None => Alphabet::new(symbols)?,
    };
    let last = l.items.last().map(|x| x.0).unwrap_or(0);
    let spec = ShiftSpec::new(
        name.ok_or_else(|| perr(last, "missing name"))?,
        dim.ok_or_else(|| perr(last, "missing dimension"))?,
        radius.ok_or_else(|| perr(last, "missing rule_radius"))?,
        alphabet,
        forbidden,
        wang.ok_or_else(|| perr(last, "missing wang"))?,
    )?;
    Ok(spec.with_classes(classes).with_notes(l.notes))
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// Writes a specification in canonical form.
pub fn write_spec(spec: &ShiftSpec) -> String {
    let a = spec.alphabet();
    let mut out = String::new();
    for n in spec.notes() {
        if n.is_empty() {
            out.push_str("#\n");
        } else {
            let _ = writeln!(out, "# {n}");
        }
    }
    let _ = writeln!(out, "format_version {FORMAT_VERSION}");
    out.push_str("kind shift\n");
    let _ = writeln!(out, "name {}", spec.name());
    let _ = writeln!(out, "dimension {}", spec.dimension());
    let _ = writeln!(out, "rule_radius {}", join(spec.rule_radius()));
    let _ = writeln!(out, "wang {}", spec.wang_mode());
    for s in a.symbols() {
        out.push_str("symbol ");
        out.push_str(&s.name);
        if let Some(f) = &s.faces {
            let _ = write!(out, " faces={}", f.join(","));
        }
        for (k, v) in &s.attrs {
            let _ = write!(out, " {k}={v}");
        }
        out.push('\n');
    }
    for (cname, set) in spec.classes() {
        let _ = write!(out, "class {cname}");
        for s in set.iter() {
            let _ = write!(out, " {}", a.name(s));
        }
        out.push('\n');
    }
    for f in spec.forbidden() {
        out.push_str("forbid");
        for (c, set) in f.cells() {
            let _ = write!(out, " {c}=");
            if set.is_single() {
                out.push_str(a.name(set.first().unwrap()));
            } else if let Some((cname, _)) = spec.classes().iter().find(|(_, s)| *s == set) {
                let _ = write!(out, "@{cname}");
            } else {
                let names: Vec<&str> = set.iter().map(|s| a.name(s)).collect();
                let _ = write!(out, "{{{}}}", names.join(","));
            }
        }
        out.push('\n');
    }
    out
}

/// Parses a pattern against an alphabet.
pub fn parse_pattern(text: &str, alphabet: &Alphabet) -> Result<Pattern> {
    let l = lines(text);
    let start = header(&l, "pattern")?;
    let mut dim = None;
    let mut cells = Vec::new();
    for &(n, line) in &l.items[start..] {
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.as_slice() {
            ["dimension", v] => dim = Some(v.parse::<usize>().map_err(|_| perr(n, "bad dimension"))?),
            ["cell", c, s] => {
                let d = dim.ok_or_else(|| perr(n, "dimension must precede cells"))?;
                let c = parse_coord(c, d, n)?;
                cells.push((c, alphabet.id(s).map_err(|e| perr(n, e.to_string()))?));
            }
            _ => return Err(perr(n, format!("unexpected line `{line}`"))),
        }
    }
    let d = dim.ok_or_else(|| perr(0, "missing dimension"))?;
    let before = cells.len();
    let p = Pattern::new(d, cells);
    if p.len() != before {
        return Err(perr(0, "repeated cell"));
    }
    Ok(p)
}

pub fn write_pattern(p: &Pattern, alphabet: &Alphabet) -> String {
    let mut out = format!("format_version {FORMAT_VERSION}\nkind pattern\ndimension {}\n", p.dim());
    for (c, s) in p.iter() {
        let _ = writeln!(out, "cell {c} {}", alphabet.name(s));
    }
    out
}

/// Parses a torus: `periods` then one `row` line per prefix of the first
/// d-1 coordinates, in lexicographic order.
pub fn parse_torus(text: &str, alphabet: &Alphabet) -> Result<TorusConfig> {
    let l = lines(text);
    let start = header(&l, "torus")?;
    let mut periods: Option<Vec<u32>> = None;
    let mut data: Vec<SymbolId> = Vec::new();
    for &(n, line) in &l.items[start..] {
        if let Some(rest) = line.strip_prefix("periods ") {
            periods = Some(parse_list::<u32>(rest.trim(), n)?);
        } else if let Some(rest) = line.strip_prefix("row") {
            let p = periods.as_ref().ok_or_else(|| perr(n, "periods must precede rows"))?;
            let (_, body) = rest.split_once(':').ok_or_else(|| perr(n, "row needs `:`"))?;
            let row: Result<Vec<SymbolId>> =
                body.split_whitespace().map(|s| alphabet.id(s).map_err(|e| perr(n, e.to_string()))).collect();
            let row = row?;
            if row.len() != *p.last().unwrap() as usize {
                return Err(perr(n, format!("row has {} entries, expected {}", row.len(), p.last().unwrap())));
            }
            data.extend(row);
        } else {
            return Err(perr(n, format!("unexpected line `{line}`")));
        }
    }
    let p = periods.ok_or_else(|| perr(0, "missing periods"))?;
    TorusConfig::new(p, data)
}

pub fn write_torus(t: &TorusConfig, alphabet: &Alphabet) -> String {
    let mut out = format!("format_version {FORMAT_VERSION}\nkind torus\nperiods {}\n", join(t.periods()));
    let d = t.dim();
    let w = *t.periods().last().unwrap() as usize;
    for (r, chunk) in t.data().chunks(w).enumerate() {
        let mut prefix = Vec::with_capacity(d - 1);
        let mut rem = r;
        for &p in t.periods()[..d - 1].iter().rev() {
            prefix.push(rem % p as usize);
            rem /= p as usize;
        }
        prefix.reverse();
        let _ = write!(out, "row {}:", join(&prefix));
        for &s in chunk {
            let _ = write!(out, " {}", alphabet.name(s));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const GM: &str = "# golden mean\nformat_version 1\nkind shift\nname golden_mean\ndimension 1\nrule_radius 1\nwang false\nsymbol 0\nsymbol 1\nforbid 0=1 1=1\n";

    #[test]
    fn spec_roundtrip_exact() {
        let s = parse_spec(GM).unwrap();
        assert_eq!(write_spec(&s), GM);
        assert_eq!(parse_spec(&write_spec(&s)).unwrap(), s);
    }

    #[test]
    fn sets_and_classes() {
        let text = "format_version 1\nkind shift\nname t\ndimension 2\nrule_radius 1,1\nwang false\nsymbol a k=3\nsymbol b faces=x,y,z,w\nsymbol c\nclass ab a b\nforbid 0,0=@ab 1,0={b,c}\n";
        // faces on one symbol only is rejected
        assert!(matches!(parse_spec(text), Err(Error::MissingFaceLabels(_))));
        let text = text.replace(" faces=x,y,z,w", "");
        let s = parse_spec(&text).unwrap();
        assert_eq!(write_spec(&s), text);
        assert_eq!(s.alphabet().symbol(0).get("k"), Some(3));
        assert_eq!(s.forbidden()[0].cells()[1].1, SymbolSet::from_iter([1, 2]));
    }

    #[test]
    fn malformed_reports_line() {
        let bad = GM.replace("forbid 0=1 1=1", "forbid 0=7");
        match parse_spec(&bad) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 10),
            other => panic!("{other:?}"),
        }
        assert!(parse_spec("kind shift\n").is_err());
        assert!(parse_spec(&GM.replace("format_version 1", "format_version 9")).is_err());
    }

    #[test]
    fn pattern_and_torus_roundtrip() {
        let a = Alphabet::numeric(3);
        let p = Pattern::new(2, [(Coord::new(&[0, -1]), 2), (Coord::new(&[1, 1]), 0)]);
        let txt = write_pattern(&p, &a);
        assert_eq!(parse_pattern(&txt, &a).unwrap(), p);
        assert_eq!(write_pattern(&parse_pattern(&txt, &a).unwrap(), &a), txt);
        let t = TorusConfig::from_fn(vec![2, 2, 3], |c| ((c[0] + c[1] + c[2]) % 3) as SymbolId);
        let txt = write_torus(&t, &a);
        assert!(txt.contains("row 1,0: 1 2 0"));
        assert_eq!(parse_torus(&txt, &a).unwrap(), t);
        let t1 = TorusConfig::from_fn(vec![4], |c| (c[0] % 2) as SymbolId);
        assert_eq!(parse_torus(&write_torus(&t1, &a), &a).unwrap(), t1);
    }
}
