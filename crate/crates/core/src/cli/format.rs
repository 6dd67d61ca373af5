//! The line-oriented manifold file format.
//!
//! ```text
//! file    := line*
//! line    := 'name' IDENT | 'dim' INT | 'coframe' IDENT+ | 'real' IDENT+
//!          | 'd' IDENT '=' expr | '[' IDENT ',' IDENT ']' '=' expr | 'J' IDENT '=' IDENT
//!          | 'metric' INT INT '=' SCALAR | 'volume' '=' expr | '#' comment
//! expr    := ['-'] term (('+' | '-') term)* | '0'
//! term    := [coeff ['*']] atom
//! coeff   := RATIONAL | 'ci' | '(' SCALAR ')'
//! atom    := '(' DIGITS '|' DIGITS ')'            complex monomial
//!          | IDENT '^' IDENT                       real 2-form (in `d` lines of the real block)
//!          | IDENT                                 real 1-form (bracket right-hand sides)
//! ```
//!
//! Vector-valued forms use `coeff*(|J)*Zi`.

use std::collections::BTreeMap;
use std::str::FromStr;

use crate::algebra::{Form, Monomial, Presentation, VectorForm, VectorMonomial};
use crate::error::{Error, Result};
use crate::exact::{Matrix, Scalar};
use crate::metric::HermitianMetric;

/// A real Lie algebra with an almost complex structure `J`, stored as the operators `de^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct RealBlock {
    pub names: Vec<String>,
    /// `d[k]` maps `(i, j)` with `i < j` to the coefficient of `e^i ∧ e^j` in `de^k`.
    pub d: Vec<BTreeMap<(usize, usize), Scalar>>,
    /// `(a, b)` for `J e_a = e_b`; pair `k` defines `φ^k = e^a + i e^b`.
    pub j_pairs: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ManifoldFile {
    pub name: String,
    pub presentation: Presentation,
    pub metric: HermitianMetric,
    pub volume: Option<Form>,
    pub real: Option<RealBlock>,
}

fn perr(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, column, message: message.into() }
}

fn chars_before(s: &str, byte: usize) -> usize {
    s[..byte].chars().count()
}

/// One signed summand of an expression; `column` is 1-based within the line.
struct Term<'a> {
    neg: bool,
    text: &'a str,
    column: usize,
}

/// Splits at top-level `+`/`-`; a sign with no pending text negates the next term.
fn split_terms<'a>(s: &'a str, line: usize, col0: usize) -> Result<Vec<Term<'a>>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut neg = false;
    let mut start = 0usize;
    for (k, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(perr(line, col0 + chars_before(s, k), "unbalanced `)`"));
                }
            }
            '+' | '-' if depth == 0 => {
                let pending = s[start..k].trim();
                if pending.is_empty() {
                    if c == '-' {
                        neg = !neg;
                    }
                } else {
                    out.push(Term { neg, text: pending, column: col0 + chars_before(s, start + leading_ws(&s[start..])) });
                    neg = c == '-';
                }
                start = k + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(perr(line, col0 + chars_before(s, s.len()), "unbalanced `(`"));
    }
    let pending = s[start..].trim();
    if pending.is_empty() {
        return Err(perr(line, col0 + chars_before(s, s.len()), "expected a term"));
    }
    out.push(Term { neg, text: pending, column: col0 + chars_before(s, start + leading_ws(&s[start..])) });
    Ok(out)
}

fn leading_ws(s: &str) -> usize {
    s.len() - s.trim_start().len()
}

fn parse_coeff(text: &str, line: usize, column: usize) -> Result<Scalar> {
    let t = text.trim().strip_suffix('*').unwrap_or(text.trim()).trim();
    if t.is_empty() {
        return Ok(Scalar::one());
    }
    let inner = t.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(t);
    Scalar::from_str(inner).map_err(|_| perr(line, column, format!("invalid coefficient `{t}`")))
}

fn parse_index_set(s: &str, n: usize, line: usize, column: usize) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for c in s.chars().filter(|c| !c.is_whitespace() && *c != '∅') {
        let k = c.to_digit(10).ok_or_else(|| perr(line, column, format!("invalid index `{c}`")))? as usize;
        if k == 0 || k > n {
            return Err(perr(line, column, format!("index {k} outside 1..={n}")));
        }
        if out.last().is_some_and(|&l| l >= k) {
            return Err(perr(line, column, format!("indices in `{s}` must be strictly increasing")));
        }
        out.push(k);
    }
    Ok(out)
}

/// `coeff*(I|J)` or `0`.
fn parse_form_term(t: &Term<'_>, n: usize, line: usize) -> Result<Option<(Monomial, Scalar)>> {
    if t.text == "0" {
        return Ok(None);
    }
    let text = t.text;
    let Some(body) = text.strip_suffix(')') else {
        return Err(perr(line, t.column, format!("expected a monomial `(I|J)` in `{text}`")));
    };
    let open = body.rfind('(').ok_or_else(|| perr(line, t.column, format!("unbalanced monomial in `{text}`")))?;
    let inner = &body[open + 1..];
    let (hol, anti) = inner
        .split_once('|')
        .ok_or_else(|| perr(line, t.column + chars_before(text, open), format!("expected `(I|J)`, found `({inner})`")))?;
    let col = t.column + chars_before(text, open);
    let h = parse_index_set(hol, n, line, col)?;
    let a = parse_index_set(anti, n, line, col)?;
    let coeff = parse_coeff(&text[..open], line, t.column)?;
    let m = Monomial::from_indices(&h, &a).expect("strictly increasing indices");
    Ok(Some((m, if t.neg { -coeff } else { coeff })))
}

fn parse_form_at(s: &str, n: usize, line: usize, col0: usize) -> Result<Form> {
    let mut f = Form::zero(n);
    for t in split_terms(s, line, col0)? {
        if let Some((m, c)) = parse_form_term(&t, n, line)? {
            f.add_term(m, c);
        }
    }
    Ok(f)
}

/// Parses a form written as `coeff*(I|J) + ...` on an `n`-dimensional coframe.
pub fn parse_form(s: &str, n: usize) -> Result<Form> {
    parse_form_at(s, n, 1, 1)
}

/// Parses a `(0,q)` vector form written as `coeff*(|J)*Zi + ...`.
pub fn parse_vector_form(s: &str, n: usize) -> Result<VectorForm> {
    let mut terms = Vec::new();
    let mut q = None;
    for t in split_terms(s, 1, 1)? {
        if t.text == "0" {
            continue;
        }
        let z = t.text.rfind('Z').ok_or_else(|| perr(1, t.column, format!("expected `*Zi` in `{}`", t.text)))?;
        let idx: usize = t.text[z + 1..]
            .parse()
            .map_err(|_| perr(1, t.column + chars_before(t.text, z), format!("invalid vector index in `{}`", t.text)))?;
        if idx == 0 || idx > n {
            return Err(perr(1, t.column + chars_before(t.text, z), format!("vector index {idx} outside 1..={n}")));
        }
        let head = t.text[..z].trim_end();
        let head = head.strip_suffix('*').unwrap_or(head).trim_end();
        let sub = Term { neg: t.neg, text: head, column: t.column };
        let Some((m, c)) = parse_form_term(&sub, n, 1)? else { continue };
        if m.p() != 0 {
            return Err(perr(1, t.column, "vector forms have antiholomorphic coefficients only"));
        }
        if *q.get_or_insert(m.q()) != m.q() {
            return Err(perr(1, t.column, "vector form terms of different degree"));
        }
        terms.push((VectorMonomial { index: idx - 1, anti: m.anti }, c));
    }
    Ok(VectorForm::from_terms(n, q.unwrap_or(1), terms))
}

fn lookup(names: &[String], name: &str, line: usize, column: usize) -> Result<usize> {
    names.iter().position(|x| x == name).ok_or_else(|| perr(line, column, format!("unknown generator `{name}`")))
}

/// `coeff*a^b` terms over real generators; `arity` is 2 for `d` lines, 1 for brackets.
fn parse_real_expr(
    s: &str,
    names: &[String],
    arity: usize,
    line: usize,
    col0: usize,
) -> Result<Vec<(Vec<usize>, Scalar)>> {
    let mut out = Vec::new();
    for t in split_terms(s, line, col0)? {
        if t.text == "0" {
            continue;
        }
        let (coeff_txt, atom) = match t.text.rfind('*') {
            Some(k) => (&t.text[..k], &t.text[k + 1..]),
            None => ("", t.text),
        };
        let coeff = parse_coeff(coeff_txt, line, t.column)?;
        if !coeff.is_real() {
            return Err(perr(line, t.column, "structure constants of the real block must be real"));
        }
        let atom_col = t.column + chars_before(t.text, t.text.len() - atom.len());
        let idx: Vec<usize> =
            atom.split('^').map(|x| lookup(names, x.trim(), line, atom_col)).collect::<Result<_>>()?;
        if idx.len() != arity {
            return Err(perr(line, atom_col, format!("expected a product of {arity} generator(s), found `{atom}`")));
        }
        out.push((idx, if t.neg { -coeff } else { coeff }));
    }
    Ok(out)
}

fn add_real_term(map: &mut BTreeMap<(usize, usize), Scalar>, i: usize, j: usize, c: Scalar) {
    if i == j || c.is_zero() {
        return;
    }
    let (key, c) = if i < j { ((i, j), c) } else { ((j, i), -c) };
    let e = map.entry(key).or_insert_with(Scalar::zero);
    *e += c;
    if e.is_zero() {
        map.remove(&key);
    }
}

impl RealBlock {
    /// `dφ^k = d e^a + i d e^b` after substituting `e^a = (φ+φ̄)/2`, `e^b = −i(φ−φ̄)/2`.
    pub fn complex_dtable(&self, n: usize) -> Vec<Form> {
        let half = Scalar::ratio(1, 2);
        let mut real_forms = vec![Form::zero(n); 2 * n];
        for (k, &(a, b)) in self.j_pairs.iter().enumerate() {
            let phi = Form::phi(n, k + 1);
            let phibar = Form::phibar(n, k + 1);
            real_forms[a] = phi.add(&phibar).scale(&half);
            real_forms[b] = phi.sub(&phibar).scale(&(-Scalar::i() * &half));
        }
        let d_real: Vec<Form> = self
            .d
            .iter()
            .map(|terms| {
                let mut f = Form::zero(n);
                for ((i, j), c) in terms {
                    f.add_scaled(c, &real_forms[*i].wedge(&real_forms[*j]));
                }
                f
            })
            .collect();
        self.j_pairs.iter().map(|&(a, b)| d_real[a].add(&d_real[b].scale(&Scalar::i()))).collect()
    }
}

#[derive(Default)]
struct Header {
    name: Option<String>,
    dim: Option<(usize, usize)>,
    coframe: Option<Vec<String>>,
    real: Option<Vec<String>>,
}

fn tokens(line: &str) -> Vec<&str> {
    line.split_whitespace().collect()
}

/// Parses and validates a manifold file.
pub fn parse_manifold<'a>(text: &'a str) -> Result<ManifoldFile> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l))
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        })
        .collect();

    let mut header = Header::default();
    for &(ln, l) in &lines {
        let tk = tokens(l);
        let col = 1 + leading_ws(l);
        match tk[0] {
            "name" => {
                if tk.len() != 2 {
                    return Err(perr(ln, col, "expected `name IDENT`"));
                }
                header.name = Some(tk[1].to_string());
            }
            "dim" => {
                let n = tk.get(1).and_then(|s| s.parse::<usize>().ok()).filter(|_| tk.len() == 2);
                header.dim = Some((n.ok_or_else(|| perr(ln, col, "expected `dim INT`"))?, ln));
            }
            "coframe" | "real" => {
                let names: Vec<String> = tk[1..].iter().map(|s| s.to_string()).collect();
                if names.is_empty() {
                    return Err(perr(ln, col, format!("`{}` needs at least one generator", tk[0])));
                }
                let mut sorted = names.clone();
                sorted.sort();
                sorted.dedup();
                if sorted.len() != names.len() {
                    return Err(perr(ln, col, "repeated generator name"));
                }
                let slot = if tk[0] == "coframe" { &mut header.coframe } else { &mut header.real };
                if slot.replace(names).is_some() {
                    return Err(perr(ln, col, format!("duplicate `{}` line", tk[0])));
                }
            }
            _ => {}
        }
    }

    let n = match (header.dim, &header.coframe, &header.real) {
        (Some((n, _)), _, _) => n,
        (None, Some(c), _) => c.len(),
        (None, None, Some(r)) if r.len() % 2 == 0 => r.len() / 2,
        _ => return Err(perr(1, 1, "cannot determine the dimension: add a `dim` line")),
    };
    if n == 0 || n > 8 {
        return Err(perr(header.dim.map_or(1, |d| d.1), 1, format!("dimension {n} outside 1..=8")));
    }
    let coframe = header.coframe.clone().unwrap_or_else(|| (1..=n).map(|k| format!("phi{k}")).collect());
    if coframe.len() != n {
        return Err(Error::Dimension(format!("{} coframe names for dimension {n}", coframe.len())));
    }
    if let Some(r) = &header.real {
        if r.len() != 2 * n {
            return Err(Error::Dimension(format!("{} real generators for complex dimension {n}", r.len())));
        }
    }

    let mut complex_d: Vec<Option<Form>> = vec![None; n];
    let mut real_d: Vec<BTreeMap<(usize, usize), Scalar>> = vec![BTreeMap::new(); 2 * n];
    let mut real_seen = vec![false; 2 * n];
    let mut j_pairs: Vec<(usize, usize)> = Vec::new();
    let mut metric_entries: BTreeMap<(usize, usize), (Scalar, usize)> = BTreeMap::new();
    let mut volume: Option<(Form, usize)> = None;
    let real_names = header.real.clone().unwrap_or_default();

    for &(ln, l) in &lines {
        let tk = tokens(l);
        let col = 1 + leading_ws(l);
        let rhs = |l: &'a str| -> Result<(&'a str, usize)> {
            let k = l.find('=').ok_or_else(|| perr(ln, col, "expected `=`"))?;
            Ok((&l[k + 1..], chars_before(l, k + 1) + 1))
        };
        match tk[0] {
            "name" | "dim" | "coframe" | "real" => {}
            "d" => {
                let target = tk.get(1).ok_or_else(|| perr(ln, col, "expected `d NAME = expr`"))?;
                let target = target.trim_end_matches('=');
                let (expr, ecol) = rhs(l)?;
                if let Some(k) = coframe.iter().position(|x| x == target) {
                    if complex_d[k].is_some() {
                        return Err(perr(ln, col, format!("duplicate differential of `{target}`")));
                    }
                    complex_d[k] = Some(parse_form_at(expr, n, ln, ecol)?);
                } else if let Some(k) = real_names.iter().position(|x| x == target) {
                    if real_seen[k] {
                        return Err(perr(ln, col, format!("duplicate differential of `{target}`")));
                    }
                    real_seen[k] = true;
                    for (idx, c) in parse_real_expr(expr, &real_names, 2, ln, ecol)? {
                        add_real_term(&mut real_d[k], idx[0], idx[1], c);
                    }
                } else {
                    return Err(perr(ln, col + 2, format!("unknown generator `{target}`")));
                }
            }
            t if t.starts_with('[') => {
                if real_names.is_empty() {
                    return Err(perr(ln, col, "brackets require a `real` block"));
                }
                let close = l.find(']').ok_or_else(|| perr(ln, col, "expected `]`"))?;
                let open = l.find('[').expect("starts with [");
                let inner = &l[open + 1..close];
                let (x, y) = inner.split_once(',').ok_or_else(|| perr(ln, col, "expected `[a,b]`"))?;
                let (i, j) = (lookup(&real_names, x.trim(), ln, col)?, lookup(&real_names, y.trim(), ln, col)?);
                let (expr, ecol) = rhs(l)?;
                // Cartan: de^k(e_i, e_j) = −e^k([e_i, e_j])
                for (idx, c) in parse_real_expr(expr, &real_names, 1, ln, ecol)? {
                    real_seen[idx[0]] = true;
                    add_real_term(&mut real_d[idx[0]], i, j, -c);
                }
            }
            "J" => {
                if real_names.is_empty() {
                    return Err(perr(ln, col, "`J` requires a `real` block"));
                }
                let (lhs, r) = l[col..].split_once('=').ok_or_else(|| perr(ln, col, "expected `J a = b`"))?;
                let lhs = lhs.trim_start_matches('J').trim();
                let (a, b) = (lookup(&real_names, lhs, ln, col)?, lookup(&real_names, r.trim(), ln, col)?);
                if a == b || j_pairs.iter().any(|&(x, y)| [x, y].contains(&a) || [x, y].contains(&b)) {
                    return Err(perr(ln, col, "each real generator must appear in exactly one `J` pair"));
                }
                j_pairs.push((a, b));
            }
            "metric" => {
                let (expr, ecol) = rhs(l)?;
                let idx: Vec<usize> = l[..l.find('=').expect("checked")]
                    .split_whitespace()
                    .skip(1)
                    .map(|s| s.parse::<usize>().map_err(|_| perr(ln, col, "expected `metric j k = scalar`")))
                    .collect::<Result<_>>()?;
                if idx.len() != 2 || idx.iter().any(|&k| k == 0 || k > n) {
                    return Err(perr(ln, col, format!("expected `metric j k = scalar` with 1 <= j,k <= {n}")));
                }
                let value = Scalar::from_str(expr.trim()).map_err(|_| perr(ln, ecol, format!("invalid scalar `{}`", expr.trim())))?;
                let (j, k) = (idx[0] - 1, idx[1] - 1);
                let (key, value) = if j <= k { ((j, k), value) } else { ((k, j), value.conj()) };
                if let Some((old, _)) = metric_entries.get(&key) {
                    if *old != value {
                        return Err(perr(ln, col, "metric entry conflicts with its Hermitian conjugate"));
                    }
                }
                metric_entries.insert(key, (value, ln));
            }
            "volume" => {
                let (expr, ecol) = rhs(l)?;
                let u = parse_form_at(expr, n, ln, ecol)?;
                if u.is_zero() || u.pure_bidegree() != Some((n, 0)) {
                    return Err(perr(ln, ecol, format!("volume must be a nonzero ({n},0)-form")));
                }
                if volume.replace((u, ln)).is_some() {
                    return Err(perr(ln, col, "duplicate `volume` line"));
                }
            }
            other => return Err(perr(ln, col, format!("unknown directive `{other}`"))),
        }
    }

    let real = if header.real.is_some() {
        if complex_d.iter().any(Option::is_some) {
            return Err(Error::Validation("give either complex structure equations or a real block, not both".into()));
        }
        if j_pairs.len() != n {
            return Err(Error::Validation(format!("{} `J` pairs for complex dimension {n}", j_pairs.len())));
        }
        Some(RealBlock { names: real_names, d: real_d, j_pairs })
    } else {
        None
    };

    let dtable = match &real {
        Some(r) => r.complex_dtable(n),
        None => complex_d
            .into_iter()
            .enumerate()
            .map(|(k, f)| f.ok_or_else(|| Error::Validation(format!("missing differential of `{}`", coframe[k]))))
            .collect::<Result<_>>()?,
    };
    let presentation = Presentation::new(coframe, dtable)?;

    let metric = if metric_entries.is_empty() {
        HermitianMetric::standard(n)
    } else {
        let mut m = Matrix::zeros(n, n);
        for (&(j, k), (v, _)) in &metric_entries {
            m.set(j, k, v.clone());
            if j != k {
                m.set(k, j, v.conj());
            }
        }
        HermitianMetric::new(m)?
    };

    Ok(ManifoldFile {
        name: header.name.unwrap_or_else(|| "unnamed".into()),
        presentation,
        metric,
        volume: volume.map(|v| v.0),
        real,
    })
}

fn real_expr_text(terms: &BTreeMap<(usize, usize), Scalar>, names: &[String]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    terms
        .iter()
        .map(|(&(i, j), c)| format!("{c}*{}^{}", names[i], names[j]))
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Canonical text of a manifold file; `parse_manifold` inverts it.
pub fn print_manifold(m: &ManifoldFile) -> String {
    let p = &m.presentation;
    let n = p.n();
    let mut out = String::new();
    out.push_str(&format!("name {}\ndim {n}\n", m.name));
    match &m.real {
        Some(r) => {
            out.push_str(&format!("real {}\n", r.names.join(" ")));
            for (k, terms) in r.d.iter().enumerate() {
                out.push_str(&format!("d {} = {}\n", r.names[k], real_expr_text(terms, &r.names)));
            }
            for &(a, b) in &r.j_pairs {
                out.push_str(&format!("J {} = {}\n", r.names[a], r.names[b]));
            }
            out.push_str(&format!("coframe {}\n", p.names().join(" ")));
        }
        None => {
            out.push_str(&format!("coframe {}\n", p.names().join(" ")));
            for (k, f) in p.dtable().iter().enumerate() {
                out.push_str(&format!("d {} = {f}\n", p.names()[k]));
            }
        }
    }
    let w = m.metric.matrix();
    for j in 0..n {
        for k in j..n {
            let v = w.get(j, k);
            if !v.is_zero() {
                out.push_str(&format!("metric {} {} = {v}\n", j + 1, k + 1));
            }
        }
    }
    if let Some(u) = &m.volume {
        out.push_str(&format!("volume = {u}\n"));
    }
    out
}
