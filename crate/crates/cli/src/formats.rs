//! Text formats for matrices, linear systems, automata and circuits.
//!
//! Matrices are written row by row, rows separated by `;` and entries by
//! `,`, for example `0,-1;1,2`. Every file format accepts `#` comments and
//! blank lines, and an optional field line; without one, the field given on
//! the command line applies.

use std::collections::HashMap;
use std::fmt::Write as _;

use streamcalc::circuit::{End, NamedGate, Wire};
use streamcalc::{
    CanonicalCircuit, CircuitNetlist, Field, FieldElement, Gate, LinearSystem, Matrix,
    PointedLinearSystem, WeightedAutomaton,
};

use crate::error::{CliError, Result};

fn scalar(field: &Field, text: &str) -> std::result::Result<FieldElement, String> {
    field.parse_scalar(text.trim()).map_err(|e| e.to_string())
}

/// Comma-separated scalars; the empty string is the empty vector.
pub fn parse_vector(field: &Field, text: &str) -> std::result::Result<Vec<FieldElement>, String> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(|t| scalar(field, t)).collect()
}

pub fn format_vector(v: &[FieldElement]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

/// Parses matrix text of a known shape.
pub fn parse_matrix(
    field: &Field,
    text: &str,
    rows: usize,
    cols: usize,
) -> std::result::Result<Matrix<FieldElement>, String> {
    if rows == 0 || cols == 0 {
        if text.chars().all(|c| c == ';' || c.is_whitespace()) {
            return Ok(Matrix::zeros(field, rows, cols));
        }
        return Err(format!("expected an empty {rows}x{cols} matrix"));
    }
    let parsed: Vec<Vec<FieldElement>> = text
        .split(';')
        .map(|row| parse_vector(field, row))
        .collect::<std::result::Result<_, _>>()?;
    if parsed.len() != rows || parsed.iter().any(|r| r.len() != cols) {
        let widths: Vec<String> = parsed.iter().map(|r| r.len().to_string()).collect();
        return Err(format!(
            "expected a {rows}x{cols} matrix, got {} rows of widths {}",
            parsed.len(),
            widths.join("/")
        ));
    }
    Matrix::from_rows(field, parsed).map_err(|e| e.to_string())
}

/// Non-blank lines with comments stripped, numbered from 1.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn parse_count(line: usize, text: &str) -> Result<usize> {
    text.trim()
        .parse()
        .map_err(|_| CliError::format(line, format!("expected a count, got {text:?}")))
}

fn parse_field(line: usize, text: &str) -> Result<Field> {
    Field::parse(text.trim()).map_err(|e| CliError::format(line, e.to_string()))
}

/// A linear system file, with its initial state if it names one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemFile {
    pub system: LinearSystem,
    pub initial: Option<Vec<FieldElement>>,
}

/// ```text
/// field: q
/// n: 2
/// m: 1
/// F: 0,-1;1,2
/// H: 1,2
/// v0: 1,0
/// ```
pub fn parse_system(text: &str, default_field: &Field) -> Result<SystemFile> {
    let mut entries: HashMap<&str, (usize, &str)> = HashMap::new();
    for (line, content) in content_lines(text) {
        let (key, value) = content
            .split_once(':')
            .ok_or_else(|| CliError::format(line, "expected `key: value`"))?;
        let key = key.trim();
        if !matches!(key, "field" | "n" | "m" | "F" | "H" | "v0") {
            return Err(CliError::format(line, format!("unknown key {key:?}")));
        }
        if entries.insert(key, (line, value.trim())).is_some() {
            return Err(CliError::format(line, format!("duplicate key {key:?}")));
        }
    }
    let last = text.lines().count().max(1);
    let get = |key: &str| {
        entries
            .get(key)
            .copied()
            .ok_or_else(|| CliError::format(last, format!("missing key {key:?}")))
    };
    let field = match entries.get("field") {
        Some(&(line, value)) => parse_field(line, value)?,
        None => default_field.clone(),
    };
    let (line, n) = get("n")?;
    let n = parse_count(line, n)?;
    let (line, m) = get("m")?;
    let m = parse_count(line, m)?;
    let (line, f) = get("F")?;
    let f = parse_matrix(&field, f, n, n).map_err(|e| CliError::format(line, e))?;
    let (line, h) = get("H")?;
    let h = parse_matrix(&field, h, m, n).map_err(|e| CliError::format(line, e))?;
    let system = LinearSystem::new(f, h).map_err(|e| CliError::format(line, e.to_string()))?;
    let initial = match entries.get("v0") {
        Some(&(line, value)) => {
            let v = parse_vector(&field, value).map_err(|e| CliError::format(line, e))?;
            if v.len() != n {
                return Err(CliError::format(
                    line,
                    format!("v0 has {} entries, expected {n}", v.len()),
                ));
            }
            Some(v)
        }
        None => None,
    };
    Ok(SystemFile { system, initial })
}

pub fn format_system(sys: &PointedLinearSystem) -> String {
    let s = sys.system();
    format!(
        "field: {}\nn: {}\nm: {}\nF: {}\nH: {}\nv0: {}\n",
        sys.field(),
        s.dim(),
        s.outputs(),
        s.dynamics(),
        s.output(),
        format_vector(sys.initial())
    )
}

/// ```text
/// field q
/// states 2
/// out 1 1
/// out 2 2
/// edge 1 2 1
/// ```
///
/// States are numbered from 1; absent outputs and edges are zero.
pub fn parse_automaton(text: &str, default_field: &Field) -> Result<WeightedAutomaton> {
    let mut field = default_field.clone();
    let mut states: Option<usize> = None;
    let mut outputs: Vec<(usize, usize, &str)> = Vec::new();
    let mut edges: Vec<(usize, usize, usize, &str)> = Vec::new();
    for (line, content) in content_lines(text) {
        let words: Vec<&str> = content.split_whitespace().collect();
        let state = |w: &str| -> Result<usize> {
            let n = states.ok_or_else(|| CliError::format(line, "`states` must come first"))?;
            let i = parse_count(line, w)?;
            if i == 0 || i > n {
                return Err(CliError::format(
                    line,
                    format!("state {i} is not in 1..={n}"),
                ));
            }
            Ok(i - 1)
        };
        match words.as_slice() {
            ["field", desc] if states.is_none() => field = parse_field(line, desc)?,
            ["states", n] if states.is_none() => states = Some(parse_count(line, n)?),
            ["out", i, r] => outputs.push((line, state(i)?, r)),
            ["edge", i, j, r] => edges.push((line, state(i)?, state(j)?, r)),
            _ => {
                return Err(CliError::format(
                    line,
                    format!("unrecognized line {content:?}"),
                ))
            }
        }
    }
    let n = states.ok_or_else(|| CliError::format(1, "missing `states` line"))?;
    let mut l = vec![field.zero(); n];
    let mut seen_out = vec![false; n];
    for (line, i, r) in outputs {
        if std::mem::replace(&mut seen_out[i], true) {
            return Err(CliError::format(
                line,
                format!("output of state {} given twice", i + 1),
            ));
        }
        l[i] = scalar(&field, r).map_err(|e| CliError::format(line, e))?;
    }
    let mut k = Matrix::zeros(&field, n, n);
    let mut seen_edge = vec![false; n * n];
    for (line, i, j, r) in edges {
        if std::mem::replace(&mut seen_edge[i * n + j], true) {
            return Err(CliError::format(
                line,
                format!("edge {} -> {} given twice", i + 1, j + 1),
            ));
        }
        k[(i, j)] = scalar(&field, r).map_err(|e| CliError::format(line, e))?;
    }
    Ok(WeightedAutomaton::new(l, k)?)
}

pub fn format_automaton(a: &WeightedAutomaton) -> String {
    let mut out = format!("field {}\nstates {}\n", a.field(), a.states());
    for (i, o) in a.outputs().iter().enumerate() {
        if !o.is_zero() {
            writeln!(out, "out {} {o}", i + 1).unwrap();
        }
    }
    let k = a.weights();
    for i in 0..a.states() {
        for j in 0..a.states() {
            if !k[(i, j)].is_zero() {
                writeln!(out, "edge {} {} {}", i + 1, j + 1, k[(i, j)]).unwrap();
            }
        }
    }
    out
}

fn port_name(gate: &Gate, port: usize, input: bool) -> String {
    let (base, count) = if input {
        ("in", gate.inputs())
    } else {
        ("out", gate.outputs())
    };
    if count == 1 {
        base.to_string()
    } else {
        format!("{base}{port}")
    }
}

/// ```text
/// field q
/// register r1 1
/// copier c1 2
/// multiplier m1 1
/// r1.out -> c1.in
/// c1.out0 -> m1.in
/// m1.out -> r1.in
/// output c1.out1
/// ```
///
/// Gates are `register <id> <init>`, `multiplier <id> <factor>`,
/// `adder <id> <arity>` and `copier <id> <fanout>`. Ports are `in`/`out`
/// for port 0, or `inK`/`outK`.
pub fn parse_netlist(text: &str, default_field: &Field) -> Result<CircuitNetlist> {
    let mut field = default_field.clone();
    let mut gates: Vec<NamedGate> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut wires: Vec<(usize, &str, &str)> = Vec::new();
    let mut output: Option<(usize, &str)> = None;
    for (line, content) in content_lines(text) {
        if let Some((from, to)) = content.split_once("->") {
            wires.push((line, from.trim(), to.trim()));
            continue;
        }
        let words: Vec<&str> = content.split_whitespace().collect();
        let gate = match words.as_slice() {
            ["field", desc] if gates.is_empty() => {
                field = parse_field(line, desc)?;
                continue;
            }
            ["output", end] => {
                if output.replace((line, end)).is_some() {
                    return Err(CliError::format(line, "second `output` line"));
                }
                continue;
            }
            ["register", _, init] => {
                Gate::Register(scalar(&field, init).map_err(|e| CliError::format(line, e))?)
            }
            ["multiplier", _, c] => {
                Gate::Multiplier(scalar(&field, c).map_err(|e| CliError::format(line, e))?)
            }
            ["adder", _, k] => Gate::Adder(parse_count(line, k)?),
            ["copier", _, k] => Gate::Copier(parse_count(line, k)?),
            _ => {
                return Err(CliError::format(
                    line,
                    format!("unrecognized line {content:?}"),
                ))
            }
        };
        let name = words[1].to_string();
        if index.insert(name.clone(), gates.len()).is_some() {
            return Err(CliError::format(
                line,
                format!("gate {name:?} declared twice"),
            ));
        }
        gates.push(NamedGate { name, gate });
    }
    let end = |line: usize, text: &str, input: bool| -> Result<End> {
        let (name, port) = text
            .rsplit_once('.')
            .ok_or_else(|| CliError::format(line, format!("expected `gate.port`, got {text:?}")))?;
        let &g = index
            .get(name)
            .ok_or_else(|| CliError::format(line, format!("unknown gate {name:?}")))?;
        let base = if input { "in" } else { "out" };
        let number = port.strip_prefix(base).ok_or_else(|| {
            CliError::format(line, format!("expected an `{base}` port, got {port:?}"))
        })?;
        let p = if number.is_empty() {
            0
        } else {
            parse_count(line, number)?
        };
        Ok(End::new(g, p))
    };
    let wires: Vec<Wire> = wires
        .into_iter()
        .map(|(line, from, to)| {
            Ok(Wire {
                from: end(line, from, false)?,
                to: end(line, to, true)?,
            })
        })
        .collect::<Result<_>>()?;
    let (line, out) = output.ok_or_else(|| CliError::format(1, "missing `output` line"))?;
    let output = end(line, out, false)?;
    Ok(CircuitNetlist::new(&field, gates, wires, output)?)
}

pub fn format_netlist(net: &CircuitNetlist) -> String {
    let mut out = format!("field {}\n", net.field());
    let gates = net.gates();
    for g in gates {
        let (kind, param) = match &g.gate {
            Gate::Register(c) => ("register", c.to_string()),
            Gate::Multiplier(c) => ("multiplier", c.to_string()),
            Gate::Adder(k) => ("adder", k.to_string()),
            Gate::Copier(k) => ("copier", k.to_string()),
        };
        writeln!(out, "{kind} {} {param}", g.name).unwrap();
    }
    let end = |e: End, input: bool| {
        let g = &gates[e.gate];
        format!("{}.{}", g.name, port_name(&g.gate, e.port, input))
    };
    for w in net.wires() {
        writeln!(out, "{} -> {}", end(w.from, false), end(w.to, true)).unwrap();
    }
    writeln!(out, "output {}", end(net.output(), false)).unwrap();
    out
}

/// `M=0,-1;1,2; N=1,2; r=1,0`. The text is split at `;` (and newlines); a
/// piece starting with `KEY=` opens a new field and any other piece is a
/// further row of the current one.
pub fn parse_canonical(text: &str, field: &Field) -> Result<CanonicalCircuit> {
    let mut parts: HashMap<&str, String> = HashMap::new();
    let mut current: Option<&str> = None;
    for piece in text.split([';', '\n']) {
        let piece = piece.split('#').next().unwrap_or("").trim();
        let key = piece.split_once('=').map(|(k, v)| (k.trim(), v));
        match key {
            Some((k @ ("M" | "N" | "r"), value)) => {
                if parts.insert(k, value.trim().to_string()).is_some() {
                    return Err(CliError::format(1, format!("`{k}=` given twice")));
                }
                current = Some(k);
            }
            Some((k, _)) => return Err(CliError::format(1, format!("unknown key {k:?}"))),
            None if piece.is_empty() => {}
            None => {
                let k =
                    current.ok_or_else(|| CliError::format(1, "expected `M=`, `N=` or `r=`"))?;
                let entry = parts.get_mut(k).expect("opened");
                entry.push(';');
                entry.push_str(piece);
            }
        }
    }
    let get = |k: &str| {
        parts
            .get(k)
            .ok_or_else(|| CliError::format(1, format!("missing `{k}=`")))
    };
    let r = parse_vector(field, get("r")?).map_err(|e| CliError::format(1, e))?;
    let n = r.len();
    let m =
        parse_matrix(field, get("M")?, n, n).map_err(|e| CliError::format(1, format!("M: {e}")))?;
    let nn =
        parse_matrix(field, get("N")?, 1, n).map_err(|e| CliError::format(1, format!("N: {e}")))?;
    CanonicalCircuit::new(m, nn, r).map_err(|e| CliError::format(1, e.to_string()))
}

pub fn format_canonical(c: &CanonicalCircuit) -> String {
    format!(
        "M={}; N={}; r={}",
        c.feedback(),
        c.feedforward(),
        format_vector(c.initial())
    )
}

/// A circuit file holds either the compact canonical form or a netlist.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CircuitFile {
    Canonical(CanonicalCircuit),
    Netlist(CircuitNetlist),
}

impl CircuitFile {
    pub fn to_netlist(&self) -> CircuitNetlist {
        match self {
            CircuitFile::Canonical(c) => c.to_netlist(),
            CircuitFile::Netlist(n) => n.clone(),
        }
    }
}

pub fn parse_circuit(text: &str, field: &Field) -> Result<CircuitFile> {
    let canonical = content_lines(text).next().is_some_and(|(_, l)| {
        let key = l.split('=').next().unwrap_or("").trim();
        l.contains('=') && matches!(key, "M" | "N" | "r")
    });
    if canonical {
        parse_canonical(text, field).map(CircuitFile::Canonical)
    } else {
        parse_netlist(text, field).map(CircuitFile::Netlist)
    }
}
